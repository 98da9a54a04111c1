//! Chain inner product, tree number, intersection determinant and the
//! derived field discriminant and energy bound.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::arith::rational::{serde_rational, Rational};
use crate::arith::{squarefree_part, IntMatrix};
use crate::graph::{Graph, OneChain};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubgroupError {
    #[error("NotACycle: generator {0} has nonzero boundary")]
    NotACycle(usize),
    #[error("WrongCorank: expected {expected} generators (b1 - 2), got {got}")]
    WrongCorank { expected: usize, got: usize },
    #[error("NotIndependent: generators are linearly dependent over Q")]
    NotIndependent,
    #[error("NotDirectSummand: invariant factors {0:?} are not all 1")]
    NotDirectSummand(Vec<String>),
    #[error("generator refers to an edge outside the graph")]
    UnknownEdge,
}

/// `⟨a, b⟩ = Σ a_e b_e` over the stored orientation.
pub fn chain_inner_product(a: &OneChain, b: &OneChain) -> BigInt {
    a.iter().map(|(&e, x)| x * b.get(e)).sum()
}

/// Number of spanning trees: any cofactor of the Laplacian (loops ignored,
/// parallel edges counted with multiplicity).
pub fn tree_number(g: &Graph) -> BigInt {
    let n = g.vertex_count();
    if n <= 1 {
        return BigInt::one();
    }
    let mut lap = IntMatrix::zeros(n - 1, n - 1);
    for e in g.edges() {
        if e.is_loop() {
            continue;
        }
        let (x, y) = (e.origin, e.terminus);
        // drop vertex 0's row and column
        for &(i, j, s) in &[(x, x, 1), (y, y, 1), (x, y, -1), (y, x, -1)] {
            if i > 0 && j > 0 {
                lap[(i - 1, j - 1)] += s;
            }
        }
    }
    lap.det()
}

/// A validated vanishing subgroup: a corank-2 direct summand of `H₁`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingSubgroup {
    generators: Vec<OneChain>,
    edge_count: usize,
}

impl VanishingSubgroup {
    pub fn generators(&self) -> &[OneChain] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Generator matrix in edge coordinates, one row per generator.
    pub fn matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(
            self.generators.iter().map(|a| a.to_dense(self.edge_count)).collect(),
            self.edge_count,
        )
    }

    /// Canonical form: row HNF of the generator matrix in edge coordinates.
    /// A direct summand is its own saturation, so this identifies `H`.
    pub fn hnf(&self) -> IntMatrix {
        self.matrix().hermite_normal_form()
    }

    /// Same subgroup, different basis.
    pub fn same_as(&self, other: &VanishingSubgroup) -> bool {
        self.edge_count == other.edge_count && self.hnf() == other.hnf()
    }

    /// Gram matrix `(⟨α_i, α_j⟩)`.
    pub fn gram(&self) -> IntMatrix {
        let r = self.rank();
        let mut m = IntMatrix::zeros(r, r);
        for i in 0..r {
            for j in 0..r {
                m[(i, j)] = chain_inner_product(&self.generators[i], &self.generators[j]);
            }
        }
        m
    }

    /// Wraps generators without checks; callers must already know the
    /// invariants hold.
    pub(crate) fn from_trusted(generators: Vec<OneChain>, edge_count: usize) -> Self {
        VanishingSubgroup { generators, edge_count }
    }
}

/// Checks, in order: every generator is a cycle, there are `b₁ − 2` of
/// them, they are independent, and they span a direct summand of `H₁`.
pub fn is_vanishing_subgroup(g: &Graph, gens: &[OneChain]) -> Result<VanishingSubgroup, SubgroupError> {
    let n = g.edge_count();
    for (k, a) in gens.iter().enumerate() {
        if a.iter().any(|(&e, _)| e >= n) {
            return Err(SubgroupError::UnknownEdge);
        }
        if !g.is_cycle(a).map_err(|_| SubgroupError::UnknownEdge)? {
            return Err(SubgroupError::NotACycle(k));
        }
    }
    let b = g.betti_number();
    let expected = b.saturating_sub(2);
    if gens.len() != expected || b < 2 {
        return Err(SubgroupError::WrongCorank { expected, got: gens.len() });
    }
    let hb = g.homology_basis();
    let coords =
        IntMatrix::from_rows(gens.iter().map(|a| hb.coords(a)).collect(), hb.rank());
    if coords.rank() < gens.len() {
        return Err(SubgroupError::NotIndependent);
    }
    let factors = coords.invariant_factors();
    if factors.iter().any(|d| !d.is_one()) {
        return Err(SubgroupError::NotDirectSummand(factors.iter().map(|d| d.to_string()).collect()));
    }
    Ok(VanishingSubgroup::from_trusted(gens.to_vec(), n))
}

/// `I(H) = det(⟨α_i, α_j⟩)`; 1 for the zero subgroup.
pub fn intersection_determinant(h: &VanishingSubgroup) -> BigInt {
    if h.rank() == 0 {
        return BigInt::one();
    }
    h.gram().det()
}

/// Invariants of a two-dimensional crystal. Volumes and energies are kept
/// squared so that they stay rational.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    #[serde(serialize_with = "ser_int")]
    pub kappa: BigInt,
    #[serde(rename = "I", serialize_with = "ser_int")]
    pub i_h: BigInt,
    #[serde(rename = "D")]
    pub d: u64,
    #[serde(with = "serde_rational")]
    pub vol_albanese_sq: Rational,
    #[serde(with = "serde_rational")]
    pub vol_generalized_albanese_sq: Rational,
    #[serde(with = "serde_rational")]
    pub min_energy_sq: Rational,
}

fn ser_int<S: serde::Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match x.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&x.to_string()),
    }
}

impl InvariantReport {
    /// Predicted discriminant `squarefree(κ·I)`.
    pub fn predicted_d(kappa: &BigInt, i_h: &BigInt) -> u64 {
        squarefree_part(&(kappa * i_h))
            .expect("κ·I is positive")
            .to_u64()
            .expect("discriminant fits in u64")
    }
}

pub fn invariant_report(g: &Graph, h: &VanishingSubgroup) -> InvariantReport {
    let kappa = tree_number(g);
    let i_h = intersection_determinant(h);
    assert!(kappa.is_positive() && i_h.is_positive(), "κ and I must be positive");
    let d = InvariantReport::predicted_d(&kappa, &i_h);
    let k = Rational::from_integer(kappa.clone());
    let i = Rational::from_integer(i_h.clone());
    InvariantReport {
        vol_albanese_sq: k.clone(),
        vol_generalized_albanese_sq: &k / &i,
        min_energy_sq: Rational::from_integer(BigInt::from(16)) * &i / &k,
        kappa,
        i_h,
        d,
    }
}

/// The zero subgroup, valid only when `b₁ = 2`.
pub fn trivial_subgroup(g: &Graph) -> Result<VanishingSubgroup, SubgroupError> {
    is_vanishing_subgroup(g, &[])
}
