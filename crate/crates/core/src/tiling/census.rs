//! Bounded-height enumeration of vanishing subgroups and their tiling
//! classification.
//!
//! Candidate cycles are enumerated in homology coordinates; a subgroup is
//! keyed by the Plücker vector (maximal minors) of any basis, which is
//! primitive for a direct summand and unique up to sign.

use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::thread;

use hashbrown::HashTable;
use rustc_hash::FxHasher;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use super::embedding::{fundamental_tiles, is_tiling};
use super::small;
use crate::arith::squarefree_part;
use crate::graph::{Graph, OneChain};
use crate::invariants::{tree_number, VanishingSubgroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CensusError {
    #[error("BudgetExceeded: {what} exceeded the cap of {cap}")]
    BudgetExceeded { what: &'static str, cap: usize },
    #[error("first Betti number {0} is below 2")]
    BettiTooSmall(usize),
    #[error("height bound must be at least 1")]
    BadHeight,
}

#[derive(Clone, Debug)]
pub struct CensusLimits {
    pub max_candidates: usize,
    pub max_subgroups: usize,
    pub threads: usize,
}

impl Default for CensusLimits {
    fn default() -> Self {
        CensusLimits {
            max_candidates: 1_000_000,
            max_subgroups: 50_000_000,
            threads: thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

/// Upper bound `6(b₁ − 1)` on the height of a tiling subgroup.
pub fn default_hmax(g: &Graph) -> u32 {
    6 * (g.betti_number().saturating_sub(1) as u32)
}

fn dense(a: &OneChain, n: usize) -> Vec<i64> {
    a.to_dense(n).iter().map(|x| x.to_i64().expect("small coefficients")).collect()
}

/// Primitive cycles with `‖α‖₁ ≤ hmax`, one per `±` pair, sorted by norm
/// then coordinates.
fn candidate_cycles(cycle_rows: &[Vec<i64>], hmax: u32, cap: usize) -> Result<Vec<(u16, Vec<i64>)>, CensusError> {
    struct Search<'a> {
        rows: &'a [Vec<i64>],
        hmax: i64,
        cap: usize,
        c: Vec<i64>,
        out: Vec<(u16, Vec<i64>)>,
    }
    impl Search<'_> {
        // each homology coordinate is an edge coefficient, so Σ|c_k| ≤ ‖α‖₁
        fn rec(&mut self, k: usize, budget: i64) -> Result<(), CensusError> {
            if k == self.c.len() {
                let c = &self.c;
                let Some(&lead) = c.iter().find(|&&x| x != 0) else { return Ok(()) };
                if lead < 0 || c.iter().fold(0, |g, &x| small::gcd(g, x)) != 1 {
                    return Ok(());
                }
                let norm = small::l1(&small::combine(c, self.rows));
                if norm <= self.hmax {
                    self.out.push((norm as u16, c.clone()));
                    if self.out.len() > self.cap {
                        return Err(CensusError::BudgetExceeded { what: "candidate cycles", cap: self.cap });
                    }
                }
                return Ok(());
            }
            for x in -budget..=budget {
                self.c[k] = x;
                self.rec(k + 1, budget - x.abs())?;
            }
            self.c[k] = 0;
            Ok(())
        }
    }
    let mut s = Search { rows: cycle_rows, hmax: hmax as i64, cap, c: vec![0; cycle_rows.len()], out: Vec::new() };
    s.rec(0, hmax as i64)?;
    s.out.sort();
    Ok(s.out)
}

fn sign_normalize(v: &mut [i32]) {
    if v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

/// Subgroups keyed by sign-normalized Plücker vector, stored flat.
#[derive(Clone, Debug, Default)]
struct Table {
    key_len: usize,
    rank: usize,
    keys: Vec<i32>,
    heights: Vec<u16>,
    min_sums: Vec<u16>,
    witnesses: Vec<u32>,
    index: HashTable<u32>,
}

fn hash_key(k: &[i32]) -> u64 {
    let mut h = FxHasher::default();
    k.hash(&mut h);
    h.finish()
}

impl Table {
    fn new(key_len: usize, rank: usize) -> Table {
        Table { key_len, rank, ..Table::default() }
    }

    fn len(&self) -> usize {
        self.heights.len()
    }

    fn key(&self, i: usize) -> &[i32] {
        &self.keys[i * self.key_len..(i + 1) * self.key_len]
    }

    fn witness(&self, i: usize) -> &[u32] {
        &self.witnesses[i * self.rank..(i + 1) * self.rank]
    }

    /// Records a basis; keeps the least `(height, witness)` per subgroup.
    fn offer(&mut self, key: &[i32], height: u16, sum: u16, witness: &[u32]) {
        let hash = hash_key(key);
        let Table { key_len, rank, keys, heights, min_sums, witnesses, index } = self;
        let (m, r) = (*key_len, *rank);
        if let Some(&i) = index.find(hash, |&i| &keys[i as usize * m..(i as usize + 1) * m] == key) {
            let i = i as usize;
            let w = &mut witnesses[i * r..(i + 1) * r];
            if (height, witness) < (heights[i], &*w) {
                heights[i] = height;
                w.copy_from_slice(witness);
            }
            min_sums[i] = min_sums[i].min(sum);
            return;
        }
        let i = heights.len() as u32;
        keys.extend_from_slice(key);
        heights.push(height);
        min_sums.push(sum);
        witnesses.extend_from_slice(witness);
        index.insert_unique(hash, i, |&j| hash_key(&keys[j as usize * m..(j as usize + 1) * m]));
    }
}

struct Worker<'a> {
    cands: &'a [Vec<i64>],
    norms: &'a [u16],
    r: usize,
    cols_by_len: &'a [Vec<Vec<usize>>],
    table: Table,
    cap: usize,
    rows: Vec<&'a [i64]>,
    chosen: Vec<u32>,
    key: Vec<i32>,
}

impl<'a> Worker<'a> {
    fn overflow(&self) -> bool {
        self.table.len() > self.cap
    }

    fn leaf(&mut self) {
        let mut g = 0;
        for (slot, c) in self.key.iter_mut().zip(&self.cols_by_len[self.r]) {
            let m = small::minor(&self.rows, c);
            g = small::gcd(g, m);
            *slot = i32::try_from(m).expect("minor fits in i32");
        }
        if g != 1 {
            return;
        }
        sign_normalize(&mut self.key);
        let norms = self.chosen.iter().map(|&i| self.norms[i as usize]);
        let height = norms.clone().max().unwrap_or(0);
        let sum = norms.sum();
        self.table.offer(&self.key, height, sum, &self.chosen);
    }

    fn dfs(&mut self, start: usize) {
        if self.chosen.len() == self.r {
            self.leaf();
            return;
        }
        if self.chosen.len() > 1 && !small::is_primitive(&self.rows, &self.cols_by_len[self.chosen.len()]) {
            return;
        }
        for k in start..self.cands.len() {
            self.rows.push(&self.cands[k]);
            self.chosen.push(k as u32);
            self.dfs(k + 1);
            self.rows.pop();
            self.chosen.pop();
            if self.overflow() {
                return;
            }
        }
    }
}

/// Every vanishing subgroup of height at most `hmax`.
#[derive(Clone, Debug)]
pub struct Census {
    pub hmax: u32,
    pub betti: usize,
    pub edge_count: usize,
    /// Candidate cycles in homology coordinates, sorted by norm.
    candidates: Vec<Vec<i64>>,
    /// Fundamental cycles as dense edge vectors.
    cycle_rows: Vec<Vec<i64>>,
    /// Sorted by key.
    table: Table,
}

/// Enumerates every vanishing subgroup with `h(H) ≤ hmax`.
pub fn census(g: &Graph, hmax: u32, limits: &CensusLimits) -> Result<Census, CensusError> {
    if hmax == 0 {
        return Err(CensusError::BadHeight);
    }
    let b = g.betti_number();
    if b < 2 {
        return Err(CensusError::BettiTooSmall(b));
    }
    let n = g.edge_count();
    let hb = g.homology_basis();
    let cycle_rows: Vec<Vec<i64>> = hb.cycles.iter().map(|c| dense(c, n)).collect();
    let r = b - 2;
    if r == 0 {
        let mut table = Table::new(1, 0);
        table.offer(&[1], 0, 0, &[]);
        return Ok(Census { hmax, betti: b, edge_count: n, candidates: Vec::new(), cycle_rows, table });
    }
    let cands = candidate_cycles(&cycle_rows, hmax, limits.max_candidates)?;
    let (norms, candidates): (Vec<u16>, Vec<Vec<i64>>) = cands.into_iter().unzip();
    let cols_by_len: Vec<Vec<Vec<usize>>> = (0..=r).map(|k| small::subsets(b, k)).collect();
    let key_len = cols_by_len[r].len();
    let threads = limits.threads.max(1).min(candidates.len().max(1));
    let cap = limits.max_subgroups;

    let run = |t: usize| -> Option<Table> {
        let mut w = Worker {
            cands: &candidates,
            norms: &norms,
            r,
            cols_by_len: &cols_by_len,
            table: Table::new(key_len, r),
            cap,
            rows: Vec::with_capacity(r),
            chosen: Vec::with_capacity(r),
            key: vec![0; key_len],
        };
        for first in (t..candidates.len()).step_by(threads) {
            w.rows.push(&candidates[first]);
            w.chosen.push(first as u32);
            w.dfs(first + 1);
            w.rows.clear();
            w.chosen.clear();
            if w.overflow() {
                return None;
            }
        }
        Some(w.table)
    };
    let tables: Vec<Option<Table>> = if threads == 1 {
        vec![run(0)]
    } else {
        thread::scope(|s| {
            let handles: Vec<_> = (0..threads).map(|t| s.spawn(move || run(t))).collect();
            handles.into_iter().map(|h| h.join().expect("census worker")).collect()
        })
    };
    let budget = CensusError::BudgetExceeded { what: "subgroups", cap };
    let mut it = tables.into_iter();
    let mut merged = it.next().flatten().ok_or(budget.clone())?;
    for t in it {
        let t = t.ok_or(budget.clone())?;
        for i in 0..t.len() {
            merged.offer(t.key(i), t.heights[i], t.min_sums[i], t.witness(i));
        }
        if merged.len() > cap {
            return Err(budget);
        }
    }
    let mut order: Vec<u32> = (0..merged.len() as u32).collect();
    order.sort_unstable_by(|&a, &b| merged.key(a as usize).cmp(merged.key(b as usize)));
    let mut table = Table::new(key_len, r);
    for &i in &order {
        let i = i as usize;
        table.keys.extend_from_slice(merged.key(i));
        table.heights.push(merged.heights[i]);
        table.min_sums.push(merged.min_sums[i]);
        table.witnesses.extend_from_slice(merged.witness(i));
    }
    Ok(Census { hmax, betti: b, edge_count: n, candidates, cycle_rows, table })
}

/// Per-subgroup census row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRecord {
    pub hnf: Vec<Vec<i64>>,
    pub height: u32,
    #[serde(rename = "D")]
    pub d: u64,
    pub kappa: u64,
    #[serde(rename = "I")]
    pub i: u64,
    pub is_tiling: bool,
    pub face_sizes: Vec<usize>,
}

impl Census {
    pub fn rank(&self) -> usize {
        self.betti - 2
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.len() == 0
    }

    pub fn candidate_count(&self) -> usize {
        self.candidates.len()
    }

    pub fn height(&self, k: usize) -> u32 {
        self.table.heights[k] as u32
    }

    /// Least `Σ‖α_i‖₁` over the enumerated bases of subgroup `k`.
    pub fn min_basis_sum(&self, k: usize) -> u32 {
        self.table.min_sums[k] as u32
    }

    /// Position of `h` in the census, if its height is at most `hmax`.
    pub fn find(&self, g: &Graph, h: &VanishingSubgroup) -> Option<usize> {
        if self.rank() == 0 {
            return (h.rank() == 0).then_some(0);
        }
        let hb = g.homology_basis();
        let rows: Vec<Vec<i64>> = h
            .generators()
            .iter()
            .map(|a| hb.coords(a).iter().map(|x| x.to_i64()).collect::<Option<Vec<i64>>>())
            .collect::<Option<_>>()?;
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let mut key: Vec<i32> = small::minors(&refs, &small::subsets(self.betti, self.rank()))
            .into_iter()
            .map(i32::try_from)
            .collect::<Result<_, _>>()
            .ok()?;
        sign_normalize(&mut key);
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.table.key(mid).cmp(key.as_slice()) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    /// Witness basis of subgroup `k` as dense edge vectors.
    pub fn witness_rows(&self, k: usize) -> Vec<Vec<i64>> {
        self.table
            .witness(k)
            .iter()
            .map(|&i| small::combine(&self.candidates[i as usize], &self.cycle_rows))
            .collect()
    }

    pub fn subgroup(&self, k: usize) -> VanishingSubgroup {
        let gens = self.witness_rows(k).iter().map(|v| OneChain::from_i64(v)).collect();
        VanishingSubgroup::from_trusted(gens, self.edge_count)
    }

    /// Edge-coordinate HNF of subgroup `k`.
    pub fn hnf(&self, k: usize) -> Vec<Vec<i64>> {
        small::hnf(&self.witness_rows(k))
    }

    /// `I(H)` from the witness basis.
    pub fn intersection_determinant(&self, k: usize) -> i64 {
        let rows = self.witness_rows(k);
        let gram: Vec<Vec<i64>> =
            rows.iter().map(|a| rows.iter().map(|b| a.iter().zip(b).map(|(x, y)| x * y).sum()).collect()).collect();
        small::det(&gram)
    }

    /// A tiling subgroup has a basis of `b₁ − 2` face boundaries, the
    /// largest face dropped, so some basis has `Σ‖α‖₁ ≤ 2e − ⌈2e/(b₁−1)⌉`.
    pub fn tiling_sum_bound(&self) -> u32 {
        let two_e = 2 * self.edge_count as u32;
        let f = (self.betti - 1) as u32;
        two_e - two_e.div_ceil(f)
    }

    /// Subgroups that pass the basis-sum bound. Faces have at most `2e`
    /// sides, so below `hmax = 2e` a face basis may be missing from the
    /// enumeration and nothing is filtered.
    pub fn tiling_candidates(&self) -> Vec<usize> {
        if self.hmax < 2 * self.edge_count as u32 {
            return (0..self.len()).collect();
        }
        let bound = self.tiling_sum_bound();
        (0..self.len()).filter(|&k| self.min_basis_sum(k) <= bound).collect()
    }
}

/// Census with tiling classification.
#[derive(Clone, Debug)]
pub struct CensusReport {
    pub census: Census,
    pub kappa: u64,
    /// Indices into the census with their face sizes, sorted by HNF.
    pub tilings: Vec<(usize, Vec<usize>)>,
}

impl CensusReport {
    pub fn total(&self) -> usize {
        self.census.len()
    }

    pub fn record(&self, k: usize, face_sizes: Option<&[usize]>) -> CensusRecord {
        let i = self.census.intersection_determinant(k) as u64;
        let d = squarefree_part(&BigInt::from(self.kappa * i)).expect("positive").to_u64().expect("fits");
        CensusRecord {
            hnf: self.census.hnf(k),
            height: self.census.height(k),
            d,
            kappa: self.kappa,
            i,
            is_tiling: face_sizes.is_some(),
            face_sizes: face_sizes.map(<[usize]>::to_vec).unwrap_or_default(),
        }
    }

    pub fn tiling_records(&self) -> Vec<CensusRecord> {
        self.tilings.iter().map(|(k, f)| self.record(*k, Some(f))).collect()
    }

    /// All rows, sorted by HNF.
    pub fn records(&self) -> Vec<CensusRecord> {
        let tiles: HashMap<usize, &Vec<usize>> = self.tilings.iter().map(|(k, f)| (*k, f)).collect();
        let mut out: Vec<CensusRecord> =
            (0..self.total()).map(|k| self.record(k, tiles.get(&k).map(|f| f.as_slice()))).collect();
        out.sort_by(|a, b| a.hnf.cmp(&b.hnf));
        out
    }
}

/// Runs the census at `hmax` (default `6(b₁ − 1)`) and classifies every
/// subgroup passing the basis-sum bound with the exact tiling test.
pub fn tiling_census(g: &Graph, hmax: Option<u32>, limits: &CensusLimits) -> Result<CensusReport, CensusError> {
    let hmax = hmax.unwrap_or_else(|| default_hmax(g));
    let census = census(g, hmax, limits)?;
    let kappa = tree_number(g).to_u64().expect("tree number fits in u64");
    let mut tilings: Vec<(usize, Vec<usize>, Vec<Vec<i64>>)> = Vec::new();
    for k in census.tiling_candidates() {
        let h = census.subgroup(k);
        let v = is_tiling(g, &h);
        if let Some(te) = v.embedding {
            assert!(fundamental_tiles(&te, &h).is_ok(), "face boundaries must form a basis of H");
            tilings.push((k, te.face_sizes(), census.hnf(k)));
        }
    }
    tilings.sort_by(|a, b| a.2.cmp(&b.2));
    Ok(CensusReport { census, kappa, tilings: tilings.into_iter().map(|(k, f, _)| (k, f)).collect() })
}

/// Materialized list of `H` with `h(H) ≤ hmax`, sorted by HNF.
pub fn enumerate_vanishing_subgroups(
    g: &Graph,
    hmax: u32,
    limits: &CensusLimits,
) -> Result<Vec<VanishingSubgroup>, CensusError> {
    let c = census(g, hmax, limits)?;
    let mut v: Vec<(Vec<Vec<i64>>, VanishingSubgroup)> = (0..c.len()).map(|k| (c.hnf(k), c.subgroup(k))).collect();
    v.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(v.into_iter().map(|x| x.1).collect())
}
