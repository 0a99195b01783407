use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::bernoulli::{bernoulli_polynomial, binomial, factorial};
use super::poly::{Poly, RationalFunction};
use super::{rational, to_f64, Rational};
use crate::cumulants::CumulantSet;
use crate::error::{invalid, Result};
use crate::math;

fn int(k: impl Into<BigInt>) -> Rational {
    Rational::from_integer(k.into())
}

/// `sum_p p^m` over the `n` replica momenta
/// `p = -(n-1)/2, -(n-3)/2, ..., (n-1)/2`, by direct enumeration.
pub fn faulhaber_sum(n: u64, m: u32) -> Rational {
    let start = rational(-(n as i64 - 1), 2);
    (0..n).fold(Rational::zero(), |acc, k| {
        let p = &start + int(k);
        acc + num_traits::pow(p, m as usize)
    })
}

/// `sum_{p = 1/2, 3/2, ..., (n-1)/2} p^j` as a polynomial in `n`:
/// `(B_{j+1}((n+1)/2) - B_{j+1}(1/2)) / (j+1)`. Exact for even `n`.
pub fn half_integer_power_sum(j: usize) -> Poly {
    let b = bernoulli_polynomial(j + 1);
    let half = rational(1, 2);
    let shifted = b.compose(&Poly::from_coeffs(alloc::vec![half.clone(), half.clone()]));
    (&shifted - &Poly::constant(b.eval(&half))).scale(&(Rational::one() / int(j as u64 + 1)))
}

/// The replica sum multiplying `C(M, a) <Q_A^a Q_B^b>_c`:
/// `sum_{p<0} (-2p/n)^a (2p/n + 1)^b + sum_{p>0} (-2p/n)^a (2p/n - 1)^b`
/// over half-integers `|p| <= (n-1)/2`, as a function of `n`.
///
/// The two halves are summed separately; for odd `a + b` they cancel.
pub fn replica_bracket(a: usize, b: usize) -> RationalFunction {
    let mut total = RationalFunction::zero();
    for negative_half in [true, false] {
        for m in 0..=b {
            let j = a + m;
            // (-1)^a from (-2p/n)^a; (+1)^{b-m} or (-1)^{b-m} from the shift.
            let mut sign = if a % 2 == 0 { 1i64 } else { -1 };
            if !negative_half && (b - m) % 2 == 1 {
                sign = -sign;
            }
            // sum over p < 0 of p^j is (-1)^j times the positive-half sum.
            if negative_half && j % 2 == 1 {
                sign = -sign;
            }
            let weight = int(binomial(b, m)) * int(BigInt::one() << j) * int(sign);
            let num = half_integer_power_sum(j).scale(&weight);
            let den = Poly::monomial(Rational::one(), j);
            let term = RationalFunction::new(num, den).expect("monomial denominator is nonzero");
            total = &total + &term;
        }
    }
    total
}

/// Coefficients of `pi^M <Q_A^a Q_B^b>_c` for one order `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionCoefficients {
    order: usize,
    terms: BTreeMap<(usize, usize), RationalFunction>,
}

impl ExpansionCoefficients {
    /// Wraps explicit terms; every key must have `a + b = order`.
    pub fn from_terms(order: usize, terms: BTreeMap<(usize, usize), RationalFunction>) -> Result<Self> {
        if let Some(&(a, b)) = terms.keys().find(|(a, b)| a + b != order) {
            return Err(invalid!("term ({a}, {b}) does not belong to order {order}"));
        }
        Ok(ExpansionCoefficients { order, terms })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Empty for odd orders.
    pub fn terms(&self) -> &BTreeMap<(usize, usize), RationalFunction> {
        &self.terms
    }

    pub fn get(&self, a: usize, b: usize) -> Option<&RationalFunction> {
        self.terms.get(&(a, b))
    }

    /// Every term evaluated at `n_e`, kept as constant functions.
    pub fn at(&self, n_e: &Rational) -> Result<ExpansionCoefficients> {
        let mut terms = BTreeMap::new();
        for (&k, f) in &self.terms {
            let v = f
                .eval(n_e)
                .ok_or_else(|| invalid!("coefficient ({}, {}) is singular at n_e = {n_e}", k.0, k.1))?;
            terms.insert(k, RationalFunction::constant(v));
        }
        Ok(ExpansionCoefficients {
            order: self.order,
            terms,
        })
    }
}

/// Negativity coefficients of order `m`, symbolic in `n_e`:
/// `i^M / M! * C(M, a) * replica_bracket(a, b)`.
pub fn negativity_coefficients(m: usize) -> Result<ExpansionCoefficients> {
    if m == 0 {
        return Err(invalid!("expansion order must be positive"));
    }
    let mut terms = BTreeMap::new();
    for a in (0..=m).rev() {
        let bracket = replica_bracket(a, m - a);
        if m % 2 == 1 {
            assert!(
                bracket.is_zero(),
                "odd-order replica sum ({a}, {}) did not cancel",
                m - a
            );
            continue;
        }
        let sign = if (m / 2) % 2 == 0 { 1i64 } else { -1 };
        let factor = int(binomial(m, a)) * int(sign) / int(factorial(m));
        terms.insert((a, m - a), bracket.scale(&factor));
    }
    Ok(ExpansionCoefficients { order: m, terms })
}

/// [`negativity_coefficients`] at `n_e = 1`.
pub fn negativity_coefficients_replica_limit(m: usize) -> Result<ExpansionCoefficients> {
    negativity_coefficients(m)?.at(&Rational::one())
}

/// Coefficient of `pi^M <Q_A^M>_c` in the Rényi entropy `S^(n)`, symbolic in
/// `n`: `-(1/(1-n)) 2 zeta(-M, (n+1)/2) (2i/n)^M / M!`. The removable
/// singularity at `n = 1` is cancelled, so substituting 1 gives the von
/// Neumann coefficient `2 zeta(M) / pi^M`.
pub fn entropy_coefficient_symbolic(m: usize) -> Result<RationalFunction> {
    if m == 0 {
        return Err(invalid!("expansion order must be positive"));
    }
    if m % 2 == 1 {
        return Ok(RationalFunction::zero());
    }
    let half = rational(1, 2);
    let zeta_poly = bernoulli_polynomial(m + 1)
        .compose(&Poly::from_coeffs(alloc::vec![half.clone(), half]))
        .scale(&(-Rational::one() / int(m as u64 + 1)));
    let sign = if (m / 2) % 2 == 0 { 1i64 } else { -1 };
    let factor = int(-2) * int(sign) * int(BigInt::one() << m) / int(factorial(m));
    // 1 / ((1 - n) n^M)
    let den = &Poly::from_coeffs(alloc::vec![Rational::one(), -Rational::one()]) * &Poly::monomial(Rational::one(), m);
    RationalFunction::new(zeta_poly.scale(&factor), den)
}

/// [`entropy_coefficient_symbolic`] at integer `n >= 1`.
pub fn entropy_coefficient(n: u64, m: usize) -> Result<Rational> {
    if n == 0 {
        return Err(invalid!("Rényi index must be at least 1"));
    }
    entropy_coefficient_symbolic(m)?
        .eval(&int(n))
        .ok_or_else(|| invalid!("entropy coefficient is singular at n = {n}"))
}

/// Per-order contributions and running totals, ascending in order.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionSums {
    pub orders: Vec<(usize, f64)>,
    pub cumulative: Vec<(usize, f64)>,
}

impl ExpansionSums {
    /// Running total through order `m`.
    pub fn through(&self, m: usize) -> Option<f64> {
        self.cumulative.iter().find(|(k, _)| *k == m).map(|&(_, v)| v)
    }
}

/// `E^(M) = pi^M sum_{a+b=M} c_ab(n_e) <Q_A^a Q_B^b>_c` for each supplied order.
pub fn evaluate_expansion(
    coeffs: &[ExpansionCoefficients],
    n_e: &Rational,
    cums: &CumulantSet,
) -> Result<ExpansionSums> {
    let mut sorted: Vec<&ExpansionCoefficients> = coeffs.iter().collect();
    sorted.sort_by_key(|c| c.order);
    let mut orders = Vec::with_capacity(sorted.len());
    let mut cumulative = Vec::with_capacity(sorted.len());
    let mut running = 0.0;
    for set in sorted {
        let mut acc = 0.0;
        for (&(a, b), f) in &set.terms {
            let c = f
                .eval(n_e)
                .ok_or_else(|| invalid!("coefficient ({a}, {b}) is singular at n_e = {n_e}"))?;
            acc += to_f64(&c) * cums.require(a, b)?;
        }
        let value = acc * math::powi(PI, set.order as i32);
        running += value;
        orders.push((set.order, value));
        cumulative.push((set.order, running));
    }
    Ok(ExpansionSums { orders, cumulative })
}
