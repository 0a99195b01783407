//! Exact coefficients of the charge-cumulant expansions of Rényi and
//! logarithmic negativity and of Rényi and von Neumann entropy.
//!
//! Negativity at order `M` is
//! `E^(M) = pi^M sum_{a+b=M} c_ab(n_e) <Q_A^a Q_B^b>_c`
//! with `c_ab` a rational function of the replica index. The replica limit is
//! literal substitution `n_e = 1`. Floating point enters only in
//! [`evaluate_expansion`].

mod bernoulli;
mod coefficients;
mod poly;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

pub use bernoulli::{bernoulli_numbers, bernoulli_polynomial, hurwitz_zeta_neg_int, riemann_zeta_even};
pub use coefficients::{
    entropy_coefficient, entropy_coefficient_symbolic, evaluate_expansion, faulhaber_sum, half_integer_power_sum,
    negativity_coefficients, negativity_coefficients_replica_limit, replica_bracket, ExpansionCoefficients,
    ExpansionSums,
};
pub use poly::{Poly, RationalFunction};

/// Exact rational number with arbitrary-precision parts, always reduced with
/// a positive denominator.
pub type Rational = num_rational::BigRational;

/// `num / den` from machine integers.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Nearest `f64` (ratio of the parts when they overflow separately).
pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        let n = x.numer().to_f64().unwrap_or(f64::NAN);
        let d = x.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}
