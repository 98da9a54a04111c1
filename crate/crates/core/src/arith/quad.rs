//! Arithmetic in imaginary quadratic fields `Q(√−D)` and exact signs of
//! real numbers `p + q√d`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{format_rational, parse_rational, Rational};
use super::squarefree::squarefree_decompose;
use super::ArithError;

/// Three-valued sign of an exact real quantity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(x: &Rational) -> Sign {
        if x.is_zero() {
            Sign::Zero
        } else if x.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

/// Exact sign of `p + q√d` for a positive integer `d`.
///
/// Case analysis on the signs of `p` and `q`; when they disagree the answer
/// is decided by comparing `p²` against `q²d`.
pub fn quad_sign_real(p: &Rational, q: &Rational, d: u64) -> Sign {
    let sp = Sign::of(p);
    let sq = Sign::of(q);
    match (sp, sq) {
        (_, Sign::Zero) => sp,
        (Sign::Zero, _) => sq,
        _ if sp == sq => sp,
        _ => {
            let lhs = p * p;
            let rhs = q * q * Rational::from_integer(BigInt::from(d));
            match lhs.cmp(&rhs) {
                std::cmp::Ordering::Greater => sp,
                std::cmp::Ordering::Less => sq,
                std::cmp::Ordering::Equal => Sign::Zero,
            }
        }
    }
}

fn canonical_radicand(d: u64) -> Result<(u64, BigInt), ArithError> {
    if d == 0 {
        return Err(ArithError::NonPositive("0".into()));
    }
    let (core, root) = squarefree_decompose(&BigInt::from(d))?;
    Ok((core.to_u64().expect("squarefree core fits"), root))
}

/// `a + b√−D` with rational `a`, `b` and squarefree `D ≥ 1`.
///
/// Elements with `b = 0` are rational and combine with elements of any
/// field; two non-rational elements must share `D`.
#[derive(Clone, Debug)]
pub struct QuadFieldElem {
    a: Rational,
    b: Rational,
    d: u64,
}

impl PartialEq for QuadFieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && (self.b.is_zero() || self.d == other.d)
    }
}

impl Eq for QuadFieldElem {}

impl QuadFieldElem {
    /// Builds `a + b√−d`, rewriting a non-squarefree `d = s·k²` as
    /// `a + (b·k)√−s`.
    pub fn new(a: Rational, b: Rational, d: u64) -> Result<Self, ArithError> {
        let (core, root) = canonical_radicand(d)?;
        Ok(QuadFieldElem {
            a,
            b: b * Rational::from_integer(root),
            d: core,
        })
    }

    pub fn rational(a: Rational) -> Self {
        QuadFieldElem { a, b: Rational::zero(), d: 1 }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// `√−d`.
    pub fn sqrt_neg(d: u64) -> Result<Self, ArithError> {
        Self::new(Rational::zero(), Rational::one(), d)
    }

    /// Rational element tagged with field `d` (only matters for display and
    /// serialization).
    pub fn rational_in(a: Rational, d: u64) -> Self {
        QuadFieldElem { a, b: Rational::zero(), d }
    }

    pub fn re(&self) -> &Rational {
        &self.a
    }

    /// Coefficient of `√−D`.
    pub fn im_coeff(&self) -> &Rational {
        &self.b
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn field_with(&self, other: &Self) -> Result<u64, ArithError> {
        match (self.is_rational(), other.is_rational()) {
            (true, true) => Ok(if self.d == other.d { self.d } else { 1 }),
            (true, false) => Ok(other.d),
            (false, true) => Ok(self.d),
            (false, false) if self.d == other.d => Ok(self.d),
            _ => Err(ArithError::MixedFields(self.d, other.d)),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ArithError> {
        let d = self.field_with(other)?;
        Ok(QuadFieldElem { a: &self.a + &other.a, b: &self.b + &other.b, d })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ArithError> {
        let d = self.field_with(other)?;
        Ok(QuadFieldElem { a: &self.a - &other.a, b: &self.b - &other.b, d })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ArithError> {
        let d = self.field_with(other)?;
        let dr = Rational::from_integer(BigInt::from(d));
        // (a + b s)(c + e s) with s² = −d
        let a = &self.a * &other.a - &self.b * &other.b * &dr;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(QuadFieldElem { a, b, d })
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, ArithError> {
        let inv = other.inv()?;
        self.try_mul(&inv)
    }

    pub fn inv(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let n = self.norm_sq();
        Ok(QuadFieldElem { a: &self.a / &n, b: -(&self.b / &n), d: self.d })
    }

    pub fn conj(&self) -> Self {
        QuadFieldElem { a: self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    /// `|z|² = a² + D·b²`.
    pub fn norm_sq(&self) -> Rational {
        &self.a * &self.a + &self.b * &self.b * Rational::from_integer(BigInt::from(self.d))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        QuadFieldElem { a: &self.a * r, b: &self.b * r, d: self.d }
    }

    /// `Im(conj(self) * other) / √D`, i.e. the planar cross product divided
    /// by `√D`. Rational, and its sign is the orientation of the pair.
    pub fn cross_over_sqrt_d(&self, other: &Self) -> Rational {
        &self.a * &other.b - &self.b * &other.a
    }

    /// Real and imaginary parts as floating point (rendering only).
    pub fn to_f64_pair(&self) -> (f64, f64) {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        (a, b * (self.d as f64).sqrt())
    }

    /// Planar coordinates as exact reals in `Q(√D)`.
    pub fn planar(&self) -> (RealQuad, RealQuad) {
        (
            RealQuad::new(self.a.clone(), Rational::zero(), self.d),
            RealQuad::new(Rational::zero(), self.b.clone(), self.d),
        )
    }
}

impl fmt::Display for QuadFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let root = format!("√-{}", self.d);
        let imag = if self.b.is_one() {
            root
        } else if (-&self.b).is_one() {
            format!("-{root}")
        } else {
            format!("{}{root}", self.b)
        };
        if self.a.is_zero() {
            write!(f, "{imag}")
        } else if imag.starts_with('-') {
            write!(f, "{}{imag}", self.a)
        } else {
            write!(f, "{}+{imag}", self.a)
        }
    }
}

macro_rules! forward_op {
    ($tr:ident, $method:ident, $try:ident) => {
        impl<'a> $tr<&'a QuadFieldElem> for &'a QuadFieldElem {
            type Output = QuadFieldElem;
            fn $method(self, rhs: &'a QuadFieldElem) -> QuadFieldElem {
                self.$try(rhs).expect("arithmetic across different quadratic fields")
            }
        }
        impl $tr for QuadFieldElem {
            type Output = QuadFieldElem;
            fn $method(self, rhs: QuadFieldElem) -> QuadFieldElem {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);

impl Neg for &QuadFieldElem {
    type Output = QuadFieldElem;
    fn neg(self) -> QuadFieldElem {
        QuadFieldElem { a: -self.a.clone(), b: -self.b.clone(), d: self.d }
    }
}

impl Neg for QuadFieldElem {
    type Output = QuadFieldElem;
    fn neg(self) -> QuadFieldElem {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuadJson {
    a: String,
    b: String,
    #[serde(rename = "D")]
    d: u64,
}

impl Serialize for QuadFieldElem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        QuadJson {
            a: format_rational(&self.a),
            b: format_rational(&self.b),
            d: self.d,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadFieldElem {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = QuadJson::deserialize(de)?;
        let a = parse_rational(&j.a).map_err(D::Error::custom)?;
        let b = parse_rational(&j.b).map_err(D::Error::custom)?;
        QuadFieldElem::new(a, b, j.d).map_err(D::Error::custom)
    }
}

/// Exact real number `p + q√d` (`d` squarefree, positive).
#[derive(Clone, Debug)]
pub struct RealQuad {
    p: Rational,
    q: Rational,
    d: u64,
}

impl RealQuad {
    pub fn new(p: Rational, q: Rational, d: u64) -> Self {
        if d == 1 {
            RealQuad { p: p + q, q: Rational::zero(), d }
        } else {
            RealQuad { p, q, d }
        }
    }

    pub fn sign(&self) -> Sign {
        quad_sign_real(&self.p, &self.q, self.d)
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    fn same_d(&self, o: &Self) -> u64 {
        if self.q.is_zero() {
            o.d
        } else {
            assert!(o.q.is_zero() || o.d == self.d, "mixed real quadratic fields");
            self.d
        }
    }

    pub fn cmp_real(&self, other: &Self) -> std::cmp::Ordering {
        match (self - other).sign() {
            Sign::Negative => std::cmp::Ordering::Less,
            Sign::Zero => std::cmp::Ordering::Equal,
            Sign::Positive => std::cmp::Ordering::Greater,
        }
    }
}

// a rational value carries whatever `d` it was built with
impl PartialEq for RealQuad {
    fn eq(&self, o: &Self) -> bool {
        self.p == o.p && self.q == o.q && (self.q.is_zero() || self.d == o.d)
    }
}

impl Eq for RealQuad {}

impl<'a> Add<&'a RealQuad> for &'a RealQuad {
    type Output = RealQuad;
    fn add(self, o: &'a RealQuad) -> RealQuad {
        let d = self.same_d(o);
        RealQuad::new(&self.p + &o.p, &self.q + &o.q, d)
    }
}

impl<'a> Sub<&'a RealQuad> for &'a RealQuad {
    type Output = RealQuad;
    fn sub(self, o: &'a RealQuad) -> RealQuad {
        let d = self.same_d(o);
        RealQuad::new(&self.p - &o.p, &self.q - &o.q, d)
    }
}

impl<'a> Mul<&'a RealQuad> for &'a RealQuad {
    type Output = RealQuad;
    fn mul(self, o: &'a RealQuad) -> RealQuad {
        let d = self.same_d(o);
        let dr = Rational::from_integer(BigInt::from(d));
        RealQuad::new(
            &self.p * &o.p + &self.q * &o.q * dr,
            &self.p * &o.q + &self.q * &o.p,
            d,
        )
    }
}
