//! Machine-integer lattice helpers for the enumeration hot paths. Entries
//! stay tiny (bounded by the height cutoff), so `i64` with `i128`
//! intermediates is exact here.

use num_integer::Integer;

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// Determinant by fraction-free elimination.
pub fn det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    i64::try_from(sign * a[n - 1][n - 1]).expect("determinant fits in i64")
}

/// Determinant of the `k × k` minor of `rows` on columns `cols`, without
/// allocating for `k ≤ 8`.
pub fn minor(rows: &[&[i64]], cols: &[usize]) -> i64 {
    let k = rows.len();
    match k {
        0 => 1,
        1 => rows[0][cols[0]],
        2 => rows[0][cols[0]] * rows[1][cols[1]] - rows[0][cols[1]] * rows[1][cols[0]],
        3 => {
            let a = |i: usize, j: usize| rows[i][cols[j]] as i128;
            let d = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
                + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
            i64::try_from(d).expect("determinant fits in i64")
        }
        4..=8 => {
            let mut a = [[0i128; 8]; 8];
            for i in 0..k {
                for j in 0..k {
                    a[i][j] = rows[i][cols[j]] as i128;
                }
            }
            bareiss(&mut a, k)
        }
        _ => {
            let m: Vec<Vec<i64>> = rows.iter().map(|r| cols.iter().map(|&j| r[j]).collect()).collect();
            det(&m)
        }
    }
}

fn bareiss(a: &mut [[i128; 8]; 8], n: usize) -> i64 {
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    i64::try_from(sign * a[n - 1][n - 1]).expect("determinant fits in i64")
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Maximal minors of the `k × n` matrix `rows`, column subsets taken from
/// `cols` (precomputed `subsets(n, k)`).
pub fn minors(rows: &[&[i64]], cols: &[Vec<usize>]) -> Vec<i64> {
    cols.iter().map(|c| minor(rows, c)).collect()
}

/// The rows extend to a basis of `ℤⁿ` (gcd of maximal minors is 1).
pub fn is_primitive(rows: &[&[i64]], cols: &[Vec<usize>]) -> bool {
    let mut g = 0;
    for c in cols {
        g = gcd(g, minor(rows, c));
        if g == 1 {
            return true;
        }
    }
    false
}

/// Row-style Hermite normal form (same conventions as the big-integer
/// version).
pub fn hnf(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut a = rows.to_vec();
    let ncols = a.first().map_or(0, Vec::len);
    let mut pr = 0;
    for col in 0..ncols {
        if pr == a.len() {
            break;
        }
        loop {
            let best = (pr..a.len()).filter(|&i| a[i][col] != 0).min_by_key(|&i| a[i][col].abs());
            let Some(best) = best else { break };
            a.swap(pr, best);
            let mut clean = true;
            for i in pr + 1..a.len() {
                if a[i][col] == 0 {
                    continue;
                }
                let q = Integer::div_floor(&a[i][col], &a[pr][col]);
                for j in 0..ncols {
                    a[i][j] -= q * a[pr][j];
                }
                clean &= a[i][col] == 0;
            }
            if clean {
                break;
            }
        }
        if a[pr][col] == 0 {
            continue;
        }
        if a[pr][col] < 0 {
            for x in a[pr].iter_mut() {
                *x = -*x;
            }
        }
        for i in 0..pr {
            let q = Integer::div_floor(&a[i][col], &a[pr][col]);
            for j in 0..ncols {
                a[i][j] -= q * a[pr][j];
            }
        }
        pr += 1;
    }
    a.truncate(pr);
    a
}

/// `v · M` for a row vector `v` and `M` given by rows.
pub fn combine(v: &[i64], m: &[Vec<i64>]) -> Vec<i64> {
    let n = m.first().map_or(0, Vec::len);
    let mut out = vec![0i64; n];
    for (c, row) in v.iter().zip(m) {
        if *c != 0 {
            for (o, x) in out.iter_mut().zip(row) {
                *o += c * x;
            }
        }
    }
    out
}

pub fn l1(v: &[i64]) -> i64 {
    v.iter().map(|x| x.abs()).sum()
}
