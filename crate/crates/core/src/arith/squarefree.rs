use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::ArithError;

/// Writes `n = s * k^2` with `s` squarefree. Returns `(s, k)`.
///
/// Trial division; intended for the small integers that arise from tree
/// numbers and Gram determinants.
pub fn squarefree_decompose(n: &BigInt) -> Result<(BigInt, BigInt), ArithError> {
    if !n.is_positive() {
        return Err(ArithError::NonPositive(n.to_string()));
    }
    let mut rest = n.clone();
    let mut core = BigInt::one();
    let mut root = BigInt::one();
    let mut p = BigInt::from(2u32);
    while &p * &p <= rest {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        if e > 0 {
            root *= p.pow(e / 2);
            if e % 2 == 1 {
                core *= &p;
            }
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    core *= rest;
    Ok((core, root))
}

/// The squarefree `d` with `n / d` a perfect square.
pub fn squarefree_part(n: &BigInt) -> Result<BigInt, ArithError> {
    squarefree_decompose(n).map(|(s, _)| s)
}

pub fn is_squarefree(n: &BigInt) -> bool {
    match squarefree_decompose(n) {
        Ok((_, k)) => k.is_one(),
        Err(_) => false,
    }
}

/// `gcd` over a slice, zero for the empty slice.
pub fn gcd_all<'a>(xs: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    xs.into_iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}
