//! Bernoulli numbers and polynomials, and the zeta values they give in
//! closed form.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::poly::Poly;
use super::Rational;
use crate::error::{invalid, Result};

pub(crate) fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub(crate) fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `B_0 ..= B_m` with the convention `B_1 = -1/2`.
pub fn bernoulli_numbers(m: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(m + 1);
    b.push(Rational::one());
    for k in 1..=m {
        // sum_{j=0}^{k} C(k+1, j) B_j = 0
        let s = (0..k).fold(Rational::zero(), |acc, j| {
            acc + Rational::from_integer(binomial(k + 1, j)) * &b[j]
        });
        b.push(-s / Rational::from_integer(BigInt::from(k + 1)));
    }
    b
}

/// `B_k(x) = sum_j C(k, j) B_j x^{k-j}`.
pub fn bernoulli_polynomial(k: usize) -> Poly {
    let b = bernoulli_numbers(k);
    let coeffs = (0..=k)
        .map(|power| Rational::from_integer(binomial(k, power)) * &b[k - power])
        .collect();
    Poly::from_coeffs(coeffs)
}

/// Hurwitz zeta at a non-positive integer, `zeta(-m, a) = -B_{m+1}(a) / (m + 1)`.
pub fn hurwitz_zeta_neg_int(m: usize, a: &Rational) -> Rational {
    -bernoulli_polynomial(m + 1).eval(a) / Rational::from_integer(BigInt::from(m + 1))
}

/// `zeta(m) / pi^m = 2^{m-1} |B_m| / m!` for even `m >= 2`.
pub fn riemann_zeta_even(m: usize) -> Result<Rational> {
    if m < 2 || m % 2 != 0 {
        return Err(invalid!("riemann_zeta_even needs an even order >= 2, got {m}"));
    }
    let bm = bernoulli_numbers(m).pop().unwrap().abs();
    Ok(bm * Rational::from_integer(BigInt::one() << (m - 1)) / Rational::from_integer(factorial(m)))
}
