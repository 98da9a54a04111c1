//! Finite multigraphs with a fixed orientation, integral 1-chains and the
//! fundamental-cycle basis of first homology.
//!
//! Every edge is stored once, as its orientation representative; the
//! reversed edge is the chain with the coefficient negated.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("Disconnected: the graph has more than one component")]
    Disconnected,
    #[error("DegreeTooLow: vertex {0:?} has degree {1} < 3")]
    DegreeTooLow(String, usize),
    #[error("graph has no vertices")]
    Empty,
    #[error("duplicate vertex id {0:?}")]
    DuplicateVertex(String),
    #[error("duplicate edge id {0:?}")]
    DuplicateEdge(String),
    #[error("edge refers to unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("unknown edge {0}")]
    UnknownEdge(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub origin: usize,
    pub terminus: usize,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.origin == self.terminus
    }
}

#[derive(Clone, Debug)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_ix: HashMap<String, usize>,
    edge_ix: HashMap<String, usize>,
}

impl Graph {
    /// Builds a graph from vertex ids and `(edge id, from, to)` records.
    /// Structural checks only; see [`Graph::validate`] for connectivity and
    /// degree.
    pub fn new(vertices: Vec<String>, edges: Vec<(String, String, String)>) -> Result<Self, GraphError> {
        let mut vertex_ix = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vertex_ix.insert(v.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(v.clone()));
            }
        }
        let mut edge_ix = HashMap::new();
        let mut out = Vec::with_capacity(edges.len());
        for (i, (id, from, to)) in edges.into_iter().enumerate() {
            if edge_ix.insert(id.clone(), i).is_some() {
                return Err(GraphError::DuplicateEdge(id));
            }
            let origin = *vertex_ix.get(&from).ok_or(GraphError::UnknownVertex(from))?;
            let terminus = *vertex_ix.get(&to).ok_or(GraphError::UnknownVertex(to))?;
            out.push(Edge { id, origin, terminus });
        }
        Ok(Graph { vertices, edges: out, vertex_ix, edge_ix })
    }

    pub fn from_strs(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Result<Self, GraphError> {
        Self::new(
            vertices.iter().map(|s| s.to_string()).collect(),
            edges.iter().map(|(a, b, c)| (a.to_string(), b.to_string(), c.to_string())).collect(),
        )
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i]
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertex_ix.get(id).copied()
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edge_ix.get(id).copied()
    }

    /// `|E_x|`: number of directed edges leaving `x`; loops count twice.
    pub fn degree(&self, x: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.origin == x) as usize + (e.terminus == x) as usize)
            .sum()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0];
        seen[0] = true;
        let adj = self.adjacency();
        while let Some(x) = stack.pop() {
            for &(_, y) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// For each vertex, `(edge index, other end)` over non-loop edges in
    /// input order.
    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for (i, e) in self.edges.iter().enumerate() {
            if !e.is_loop() {
                adj[e.origin].push((i, e.terminus));
                adj[e.terminus].push((i, e.origin));
            }
        }
        adj
    }

    /// Connected, and every vertex of degree at least three.
    pub fn validate(&self) -> Result<(), GraphError> {
        if self.vertices.is_empty() {
            return Err(GraphError::Empty);
        }
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        for x in 0..self.vertices.len() {
            let d = self.degree(x);
            if d < 3 {
                return Err(GraphError::DegreeTooLow(self.vertices[x].clone(), d));
            }
        }
        Ok(())
    }

    /// First Betti number `|E₀ᵒ| − |V₀| + 1` of a connected graph.
    pub fn betti_number(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    /// Breadth-first spanning tree rooted at the lexicographically smallest
    /// vertex id, scanning incident edges in input order.
    pub fn spanning_tree(&self) -> SpanningTree {
        let n = self.vertices.len();
        let root = (0..n).min_by(|&a, &b| self.vertices[a].cmp(&self.vertices[b])).unwrap_or(0);
        let adj = self.adjacency();
        let mut parent: Vec<Option<TreeLink>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for &(e, y) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some(TreeLink { edge: e, vertex: x, away: self.edges[e].origin == x });
                    queue.push_back(y);
                }
            }
        }
        let mut edges: Vec<usize> = parent.iter().flatten().map(|l| l.edge).collect();
        edges.sort_unstable();
        SpanningTree { root, edges, parent, order }
    }

    /// One fundamental cycle per non-tree edge, in edge input order.
    pub fn homology_basis(&self) -> HomologyBasis {
        let tree = self.spanning_tree();
        let paths = tree.root_paths();
        let mut in_tree = vec![false; self.edges.len()];
        for &e in &tree.edges {
            in_tree[e] = true;
        }
        let mut cycles = Vec::new();
        let mut non_tree = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if in_tree[i] {
                continue;
            }
            // e + P(o) − P(t): boundary (t − o) + (o − r) − (t − r) = 0
            let c = &(&OneChain::unit(i) + &paths[e.origin]) - &paths[e.terminus];
            cycles.push(c);
            non_tree.push(i);
        }
        HomologyBasis { cycles, non_tree, tree }
    }

    /// `∂a` as a vertex-indexed vector: incoming coefficients minus outgoing.
    pub fn boundary(&self, a: &OneChain) -> Result<Vec<BigInt>, GraphError> {
        let mut out = vec![BigInt::zero(); self.vertices.len()];
        for (&i, c) in a.iter() {
            let e = self.edges.get(i).ok_or_else(|| GraphError::UnknownEdge(format!("#{i}")))?;
            out[e.terminus] += c;
            out[e.origin] -= c;
        }
        Ok(out)
    }

    pub fn is_cycle(&self, a: &OneChain) -> Result<bool, GraphError> {
        Ok(self.boundary(a)?.iter().all(Zero::is_zero))
    }

    /// Chain from `(edge id, coefficient)` pairs.
    pub fn chain(&self, terms: &[(&str, i64)]) -> Result<OneChain, GraphError> {
        let mut c = OneChain::zero();
        for &(id, k) in terms {
            let i = self.edge_index(id).ok_or_else(|| GraphError::UnknownEdge(id.to_string()))?;
            c.add_term(i, &BigInt::from(k));
        }
        Ok(c)
    }

    /// The same graph with edge `i` stored in the opposite direction.
    pub fn with_reversed_edge(&self, i: usize) -> Graph {
        let mut g = self.clone();
        let e = &mut g.edges[i];
        std::mem::swap(&mut e.origin, &mut e.terminus);
        g
    }

    /// Reorders edges: new edge `k` is old edge `perm[k]`.
    pub fn with_edge_order(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.edges.len());
        let edges = perm
            .iter()
            .map(|&k| {
                let e = &self.edges[k];
                (e.id.clone(), self.vertices[e.origin].clone(), self.vertices[e.terminus].clone())
            })
            .collect();
        Graph::new(self.vertices.clone(), edges).expect("permutation of a valid graph")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeLink {
    pub edge: usize,
    /// Parent vertex.
    pub vertex: usize,
    /// Whether the edge is stored pointing from the parent to the child.
    pub away: bool,
}

#[derive(Clone, Debug)]
pub struct SpanningTree {
    pub root: usize,
    /// Tree edge indices, ascending.
    pub edges: Vec<usize>,
    /// Link to the parent for every non-root vertex.
    pub parent: Vec<Option<TreeLink>>,
    /// BFS visiting order, root first.
    pub order: Vec<usize>,
}

impl SpanningTree {
    /// `P(x)`: the tree path from the root to `x` as a 1-chain.
    pub fn root_paths(&self) -> Vec<OneChain> {
        let mut paths = vec![OneChain::zero(); self.parent.len()];
        for &x in &self.order {
            if let Some(l) = self.parent[x] {
                let step = if l.away { OneChain::unit(l.edge) } else { -&OneChain::unit(l.edge) };
                paths[x] = &paths[l.vertex] + &step;
            }
        }
        paths
    }
}

#[derive(Clone, Debug)]
pub struct HomologyBasis {
    pub cycles: Vec<OneChain>,
    /// Non-tree edge carrying each cycle (coefficient +1 there).
    pub non_tree: Vec<usize>,
    pub tree: SpanningTree,
}

impl HomologyBasis {
    pub fn rank(&self) -> usize {
        self.cycles.len()
    }

    /// Coordinates of a cycle in this basis: its coefficients on the
    /// non-tree edges.
    pub fn coords(&self, a: &OneChain) -> Vec<BigInt> {
        self.non_tree.iter().map(|&e| a.get(e)).collect()
    }

    pub fn from_coords(&self, c: &[BigInt]) -> OneChain {
        let mut out = OneChain::zero();
        for (k, cyc) in c.iter().zip(&self.cycles) {
            if !k.is_zero() {
                out = &out + &cyc.scale(k);
            }
        }
        out
    }
}

/// Integral 1-chain on the oriented edges; absent edges have coefficient 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OneChain {
    coeffs: BTreeMap<usize, BigInt>,
}

impl OneChain {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit(e: usize) -> Self {
        let mut c = Self::zero();
        c.coeffs.insert(e, BigInt::from(1));
        c
    }

    pub fn from_dense(v: &[BigInt]) -> Self {
        let mut c = Self::zero();
        for (i, x) in v.iter().enumerate() {
            c.add_term(i, x);
        }
        c
    }

    pub fn from_i64(v: &[i64]) -> Self {
        Self::from_dense(&v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }

    pub fn add_term(&mut self, e: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(e).or_insert_with(BigInt::zero);
        *entry += k;
        if entry.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn get(&self, e: usize) -> BigInt {
        self.coeffs.get(&e).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&usize, &BigInt)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        OneChain { coeffs: self.coeffs.iter().map(|(&e, c)| (e, c * k)).collect() }
    }

    /// `‖a‖₁ = Σ |a_e|`; independent of orientation.
    pub fn l1_norm(&self) -> BigInt {
        self.coeffs.values().map(|c| c.abs()).sum()
    }

    pub fn to_dense(&self, n: usize) -> Vec<BigInt> {
        (0..n).map(|i| self.get(i)).collect()
    }

    /// The chain re-expressed after reversing edge `e`'s stored direction.
    pub fn with_reversed_edge(&self, e: usize) -> Self {
        let mut c = self.clone();
        if let Some(x) = c.coeffs.get_mut(&e) {
            *x = -x.clone();
        }
        c
    }

    /// Renders as `e1 + 2 e3 - e4` using the graph's edge ids.
    pub fn display<'a>(&'a self, g: &'a Graph) -> impl fmt::Display + 'a {
        ChainDisplay { chain: self, graph: g }
    }
}

/// `‖a‖₁`.
pub fn chain_norm_l1(a: &OneChain) -> BigInt {
    a.l1_norm()
}

impl<'a> Add<&'a OneChain> for &'a OneChain {
    type Output = OneChain;
    fn add(self, rhs: &'a OneChain) -> OneChain {
        let mut out = self.clone();
        for (&e, c) in &rhs.coeffs {
            out.add_term(e, c);
        }
        out
    }
}

impl<'a> Sub<&'a OneChain> for &'a OneChain {
    type Output = OneChain;
    fn sub(self, rhs: &'a OneChain) -> OneChain {
        self + &(-rhs)
    }
}

impl Neg for &OneChain {
    type Output = OneChain;
    fn neg(self) -> OneChain {
        OneChain { coeffs: self.coeffs.iter().map(|(&e, c)| (e, -c)).collect() }
    }
}

struct ChainDisplay<'a> {
    chain: &'a OneChain,
    graph: &'a Graph,
}

impl fmt::Display for ChainDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.chain.is_zero() {
            return write!(f, "0");
        }
        for (k, (&e, c)) in self.chain.iter().enumerate() {
            let id = self.graph.edges.get(e).map_or("?", |x| x.id.as_str());
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            match (k, mag == BigInt::from(1)) {
                (0, true) if sign == "+" => write!(f, "{id}")?,
                (0, true) => write!(f, "-{id}")?,
                (0, false) if sign == "+" => write!(f, "{mag} {id}")?,
                (0, false) => write!(f, "-{mag} {id}")?,
                (_, true) => write!(f, " {sign} {id}")?,
                (_, false) => write!(f, " {sign} {mag} {id}")?,
            }
        }
        Ok(())
    }
}
