//! Height of a vanishing subgroup: the least possible maximum ℓ¹ norm of a
//! ℤ-basis.

use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use super::small;
use crate::graph::OneChain;
use crate::invariants::VanishingSubgroup;

/// Largest rank handled by the exhaustive search.
pub const MAX_HEIGHT_RANK: usize = 4;

/// Default cap on the number of enumerated subgroup elements.
pub const DEFAULT_CANDIDATE_CAP: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeightError {
    #[error("RankTooLarge: rank {rank} exceeds {max}; input basis gives upper bound {upper_bound}")]
    RankTooLarge { rank: usize, max: usize, upper_bound: u64 },
    #[error("BudgetExceeded: more than {0} candidate elements")]
    BudgetExceeded(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeightReport {
    pub height: u64,
    #[serde(skip)]
    pub witness_basis: Vec<OneChain>,
}

fn dense_i64(a: &OneChain, n: usize) -> Vec<i64> {
    a.to_dense(n).iter().map(|x| x.to_i64().expect("small coefficients")).collect()
}

/// Exact height by bounded search in generator coefficients.
pub fn height(h: &VanishingSubgroup) -> Result<HeightReport, HeightError> {
    height_with_cap(h, DEFAULT_CANDIDATE_CAP)
}

pub fn height_with_cap(h: &VanishingSubgroup, cap: usize) -> Result<HeightReport, HeightError> {
    let r = h.rank();
    if r == 0 {
        return Ok(HeightReport { height: 0, witness_basis: Vec::new() });
    }
    let n = h.edge_count();
    let gens: Vec<Vec<i64>> = h.generators().iter().map(|a| dense_i64(a, n)).collect();
    let h0 = gens.iter().map(|v| small::l1(v)).max().expect("nonempty") as u64;
    if r > MAX_HEIGHT_RANK {
        return Err(HeightError::RankTooLarge { rank: r, max: MAX_HEIGHT_RANK, upper_bound: h0 });
    }
    let bounds = coefficient_bounds(&gens, h0);

    // elements with norm ≤ h0, one per ± pair, as (norm, coefficients)
    let mut cands: Vec<(u64, Vec<i64>)> = Vec::new();
    let mut c = vec![0i64; r];
    let mut overflow = false;
    enumerate_box(&bounds, 0, &mut c, &mut |c| {
        if overflow {
            return;
        }
        let lead = c.iter().find(|&&x| x != 0);
        if lead.is_none_or(|&x| x < 0) {
            return;
        }
        let norm = small::l1(&small::combine(c, &gens)) as u64;
        if norm <= h0 {
            cands.push((norm, c.to_vec()));
            if cands.len() > cap {
                overflow = true;
            }
        }
    });
    if overflow {
        return Err(HeightError::BudgetExceeded(cap));
    }
    cands.sort();
    let mut thresholds: Vec<u64> = cands.iter().map(|c| c.0).collect();
    thresholds.dedup();
    for t in thresholds {
        let pool: Vec<&Vec<i64>> = cands.iter().take_while(|c| c.0 <= t).map(|c| &c.1).collect();
        let mut chosen = Vec::new();
        if unimodular_subset(&pool, r, 0, &mut chosen) {
            let witness = chosen
                .iter()
                .map(|&k| OneChain::from_i64(&small::combine(pool[k], &gens)))
                .collect();
            return Ok(HeightReport { height: t, witness_basis: witness });
        }
    }
    unreachable!("the input basis itself has norm h0")
}

/// `|c_k| ≤ h0 · max_j |(M⁻¹)_{jk}|` for an invertible `r × r` column minor
/// `M` (the one with largest |det|): since `c = x_J M⁻¹`.
fn coefficient_bounds(gens: &[Vec<i64>], h0: u64) -> Vec<i64> {
    let r = gens.len();
    let n = gens[0].len();
    let mut best: Option<(i64, Vec<usize>)> = None;
    for cols in small::subsets(n, r) {
        let m: Vec<Vec<i64>> = gens.iter().map(|g| cols.iter().map(|&j| g[j]).collect()).collect();
        let d = small::det(&m).abs();
        if d != 0 && best.as_ref().is_none_or(|b| d > b.0) {
            best = Some((d, cols));
        }
    }
    let (d, cols) = best.expect("generators are independent");
    // rows of M are the generators restricted to J; c·M = x_J
    let m: Vec<Vec<i64>> = gens.iter().map(|g| cols.iter().map(|&j| g[j]).collect()).collect();
    // (M⁻¹)_{jk} = adj(M)_{jk} / det(M) with adj_{jk} = (−1)^{j+k} det(M without row k, col j)
    (0..r)
        .map(|k| {
            let max_adj = (0..r)
                .map(|j| {
                    let minor: Vec<Vec<i64>> = (0..r)
                        .filter(|&i| i != k)
                        .map(|i| (0..r).filter(|&l| l != j).map(|l| m[i][l]).collect())
                        .collect();
                    small::det(&minor).abs()
                })
                .max()
                .unwrap_or(1);
            ((h0 as i128 * max_adj as i128) / d as i128) as i64
        })
        .collect()
}

fn enumerate_box(bounds: &[i64], i: usize, c: &mut Vec<i64>, f: &mut impl FnMut(&[i64])) {
    if i == bounds.len() {
        f(c);
        return;
    }
    for x in -bounds[i]..=bounds[i] {
        c[i] = x;
        enumerate_box(bounds, i + 1, c, f);
    }
    c[i] = 0;
}

fn unimodular_subset(pool: &[&Vec<i64>], r: usize, start: usize, chosen: &mut Vec<usize>) -> bool {
    if chosen.len() == r {
        let m: Vec<Vec<i64>> = chosen.iter().map(|&k| pool[k].clone()).collect();
        return small::det(&m).abs() == 1;
    }
    for k in start..pool.len() {
        chosen.push(k);
        let rows: Vec<&[i64]> = chosen.iter().map(|&i| pool[i].as_slice()).collect();
        if small::is_primitive(&rows, &small::subsets(r, rows.len())) && unimodular_subset(pool, r, k + 1, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}
