//! Polynomials and rational functions in one variable with exact rational
//! coefficients.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;
use crate::error::{invalid, Result};

/// Polynomial with coefficients in ascending powers; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(alloc::vec![c])
    }

    /// The variable itself.
    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    /// `c x^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = alloc::vec![Rational::zero(); k];
        coeffs.push(c);
        Self::from_coeffs(coeffs)
    }

    /// Ascending coefficients; trailing zeros are dropped.
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + super::to_f64(c))
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &Poly) -> Poly {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| &(&acc * inner) + &Poly::constant(c.clone()))
    }

    pub fn scale(&self, s: &Rational) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| &acc * self)
    }

    /// Quotient and remainder of polynomial long division.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap_or(0);
        let lead = d.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = alloc::vec![Rational::zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let f = rem.last().unwrap() / &lead;
            for (i, c) in d.coeffs.iter().enumerate() {
                rem[k + i] -= &f * c;
            }
            quot[k] = f;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = x.div_rem(&y).1;
            x = y;
            y = r;
        }
        if x.is_zero() {
            return x;
        }
        let lead = x.leading();
        x.scale(&(Rational::one() / lead))
    }

    /// Human-readable form in the variable `var`, highest power first.
    pub fn render(&self, var: &str) -> String {
        use core::fmt::Write;
        if self.is_zero() {
            return String::from("0");
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let unit = mag.is_one() && k > 0;
            if !unit {
                if mag.is_integer() {
                    let _ = write!(out, "{}", mag.numer());
                } else {
                    let _ = write!(out, "({}/{})", mag.numer(), mag.denom());
                }
            }
            match k {
                0 => {}
                1 => out.push_str(var),
                _ => {
                    let _ = write!(out, "{var}^{k}");
                }
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("n"))
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let z = Rational::zero();
        Poly::from_coeffs(
            (0..len)
                .map(|k| self.coeffs.get(k).unwrap_or(&z) + rhs.coeffs.get(k).unwrap_or(&z))
                .collect(),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = alloc::vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }
}

/// Reduced quotient of polynomials.
///
/// Canonical form: common factors cancelled, all coefficients integers with
/// no common divisor, denominator leading coefficient positive. Equal
/// functions therefore compare equal structurally.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(invalid!("rational function with zero denominator"));
        }
        Ok(Self::normalized(num, den))
    }

    pub fn constant(c: Rational) -> Self {
        Self::normalized(Poly::constant(c), Poly::one())
    }

    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    pub fn from_poly(p: Poly) -> Self {
        Self::normalized(p, Poly::one())
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RationalFunction { num, den: Poly::one() };
        }
        let g = Poly::gcd(&num, &den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        // Clear denominators, then strip the integer content.
        let all = || num.coeffs.iter().chain(den.coeffs.iter());
        let lcm = all().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let content = all()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .fold(BigInt::zero(), |acc, v| acc.gcd(&v));
        let mut factor = Rational::new(lcm, content);
        if den.leading().is_negative() {
            factor = -factor;
        }
        RationalFunction {
            num: num.scale(&factor),
            den: den.scale(&factor),
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `None` where the denominator vanishes.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x) / d)
    }

    /// The value if this is a constant function.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.num.degree().unwrap_or(0) == 0 && self.den.degree() == Some(0) {
            Some(self.num.leading() / self.den.leading())
        } else {
            None
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::normalized(self.num.scale(s), self.den.clone())
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;

    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunction::normalized(num, &self.den * &rhs.den)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;

    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly::one() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})/({})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn p(c: &[i64]) -> Poly {
        Poly::from_coeffs(c.iter().map(|&x| r(x, 1)).collect())
    }

    #[test]
    fn arithmetic_and_eval() {
        let a = p(&[1, 2]); // 1 + 2x
        let b = p(&[-1, 0, 1]); // x^2 - 1
        let prod = &a * &b;
        assert_eq!(prod, p(&[-1, -2, 1, 2]));
        assert_eq!(prod.eval(&r(3, 1)), r(56, 1));
        assert_eq!((&a - &a), Poly::zero());
        assert_eq!(a.compose(&b), p(&[-1, 0, 2]));
        assert_eq!(a.pow(2), p(&[1, 4, 4]));
    }

    #[test]
    fn division_and_gcd() {
        let a = &p(&[-1, 1]) * &p(&[2, 1]); // (x - 1)(x + 2)
        let b = &p(&[-1, 1]) * &p(&[5, 0, 3]);
        let g = Poly::gcd(&a, &b);
        assert_eq!(g, p(&[-1, 1]));
        let (q, rem) = b.div_rem(&g);
        assert!(rem.is_zero());
        assert_eq!(q, p(&[5, 0, 3]));
    }

    #[test]
    fn canonical_rational_function() {
        // (2x^2 - 2) / (12x) normalizes to (x^2 - 1)/(6x).
        let f = RationalFunction::new(p(&[-2, 0, 2]), p(&[0, 12])).unwrap();
        assert_eq!(f.numerator(), &p(&[-1, 0, 1]));
        assert_eq!(f.denominator(), &p(&[0, 6]));
        // Sign goes to the numerator.
        let g = RationalFunction::new(p(&[1]), p(&[0, -2])).unwrap();
        assert_eq!(g.numerator(), &p(&[-1]));
        // Rational coefficients are cleared.
        let h = RationalFunction::new(Poly::from_coeffs(alloc::vec![r(1, 2), r(1, 3)]), p(&[1])).unwrap();
        assert_eq!(h.numerator(), &p(&[3, 2]));
        assert_eq!(h.denominator(), &p(&[6]));
        assert_eq!(h.eval(&r(0, 1)), Some(r(1, 2)));
        assert!(RationalFunction::new(p(&[1]), Poly::zero()).is_err());
    }

    #[test]
    fn common_factors_cancel() {
        let num = &p(&[-1, 1]) * &p(&[3, 1]);
        let den = &p(&[-1, 1]) * &p(&[0, 0, 1]);
        let f = RationalFunction::new(num, den).unwrap();
        assert_eq!(f.denominator(), &p(&[0, 0, 1]));
        assert_eq!(f.eval(&r(1, 1)), Some(r(4, 1)));
        let sum = &f + &RationalFunction::from_poly(p(&[1]));
        assert_eq!(sum.eval(&r(1, 1)), Some(r(5, 1)));
    }

    #[test]
    fn rendering() {
        let f = RationalFunction::new(p(&[7, 0, -10, 0, 3]), p(&[0, 0, 0, 360])).unwrap();
        assert_eq!(alloc::format!("{f}"), "(3n^4 - 10n^2 + 7)/(360n^3)");
        assert_eq!(p(&[0, -1]).render("x"), "-x");
        assert_eq!(Poly::zero().render("n"), "0");
    }
}
