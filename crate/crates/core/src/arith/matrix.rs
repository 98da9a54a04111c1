//! Dense integer matrices: Smith and Hermite normal forms, fraction-free
//! determinants, integer kernels.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        IntMatrix { rows: nrows, cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
            cols,
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let x = &self[(i, k)];
                if x.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += x * &other[(k, j)];
                }
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self[(src, j)] * k;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self[(i, src)] * k;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    /// Determinant by Bareiss fraction-free elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        m.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
                m[(i, k)] = BigInt::zero();
            }
            prev = m[(k, k)].clone();
        }
        sign * &m[(n - 1, n - 1)]
    }

    /// Row-style Hermite normal form of the row lattice: nonzero rows only,
    /// pivots positive and strictly moving right, entries above a pivot
    /// reduced into `[0, pivot)`.
    pub fn hermite_normal_form(&self) -> IntMatrix {
        let mut a = self.clone();
        let mut pr = 0;
        for col in 0..a.cols {
            if pr == a.rows {
                break;
            }
            loop {
                let best = (pr..a.rows)
                    .filter(|&i| !a[(i, col)].is_zero())
                    .min_by(|&x, &y| a[(x, col)].abs().cmp(&a[(y, col)].abs()));
                let Some(best) = best else { break };
                a.swap_rows(pr, best);
                let mut clean = true;
                for i in pr + 1..a.rows {
                    if a[(i, col)].is_zero() {
                        continue;
                    }
                    let q = a[(i, col)].div_floor(&a[(pr, col)]);
                    a.add_row(i, pr, &-q);
                    if !a[(i, col)].is_zero() {
                        clean = false;
                    }
                }
                if clean {
                    break;
                }
            }
            if a[(pr, col)].is_zero() {
                continue;
            }
            if a[(pr, col)].is_negative() {
                a.negate_row(pr);
            }
            for i in 0..pr {
                let q = a[(i, col)].div_floor(&a[(pr, col)]);
                a.add_row(i, pr, &-q);
            }
            pr += 1;
        }
        IntMatrix { rows: pr, cols: a.cols, data: a.data[..pr * a.cols].to_vec() }
    }

    pub fn rank(&self) -> usize {
        self.hermite_normal_form().rows
    }

    /// Smith normal form `(U, S, V)` with `U·self·V = S`, `U` and `V`
    /// unimodular, `S` diagonal with nonnegative entries `d₁ | d₂ | …`.
    pub fn smith_normal_form(&self) -> (IntMatrix, IntMatrix, IntMatrix) {
        let (r, c) = (self.rows, self.cols);
        let mut s = self.clone();
        let mut u = Self::identity(r);
        let mut v = Self::identity(c);
        for t in 0..r.min(c) {
            loop {
                let mut best: Option<(usize, usize)> = None;
                for i in t..r {
                    for j in t..c {
                        if s[(i, j)].is_zero() {
                            continue;
                        }
                        if best.is_none_or(|(bi, bj)| s[(i, j)].abs() < s[(bi, bj)].abs()) {
                            best = Some((i, j));
                        }
                    }
                }
                let Some((bi, bj)) = best else {
                    return (u, s, v);
                };
                s.swap_rows(t, bi);
                u.swap_rows(t, bi);
                s.swap_cols(t, bj);
                v.swap_cols(t, bj);

                let mut clean = true;
                for i in t + 1..r {
                    if s[(i, t)].is_zero() {
                        continue;
                    }
                    let q = -s[(i, t)].div_floor(&s[(t, t)]);
                    s.add_row(i, t, &q);
                    u.add_row(i, t, &q);
                    clean &= s[(i, t)].is_zero();
                }
                for j in t + 1..c {
                    if s[(t, j)].is_zero() {
                        continue;
                    }
                    let q = -s[(t, j)].div_floor(&s[(t, t)]);
                    s.add_col(j, t, &q);
                    v.add_col(j, t, &q);
                    clean &= s[(t, j)].is_zero();
                }
                if !clean {
                    continue;
                }
                let offender = (t + 1..r).find(|&i| {
                    (t + 1..c).any(|j| !s[(i, j)].is_multiple_of(&s[(t, t)]))
                });
                match offender {
                    Some(i) => {
                        let one = BigInt::one();
                        s.add_row(t, i, &one);
                        u.add_row(t, i, &one);
                    }
                    None => break,
                }
            }
            if s[(t, t)].is_negative() {
                s.negate_row(t);
                u.negate_row(t);
            }
        }
        (u, s, v)
    }

    /// Diagonal of the Smith form, only the nonzero factors.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let (_, s, _) = self.smith_normal_form();
        (0..s.rows.min(s.cols))
            .map(|i| s[(i, i)].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }

    /// Rows form a ℤ-basis of `{x ∈ ℤ^cols : self·x = 0}`.
    pub fn integer_kernel(&self) -> IntMatrix {
        let (_, s, v) = self.smith_normal_form();
        let rank = (0..s.rows.min(s.cols)).filter(|&i| !s[(i, i)].is_zero()).count();
        let vt = v.transpose();
        IntMatrix {
            rows: self.cols - rank,
            cols: self.cols,
            data: vt.data[rank * self.cols..].to_vec(),
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

struct Entry<'a>(&'a BigInt);

impl Serialize for Entry<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(x) => s.serialize_i64(x),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

struct Row<'a>(&'a [BigInt]);

impl Serialize for Row<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for x in self.0 {
            seq.serialize_element(&Entry(x))?;
        }
        seq.end()
    }
}

/// Serialized as a list of rows of JSON integers.
impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            seq.serialize_element(&Row(self.row(i)))?;
        }
        seq.end()
    }
}
