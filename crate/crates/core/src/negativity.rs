//! Logarithmic and even Rényi negativity of Gaussian states from the
//! restricted correlation matrix, plus entanglement entropies.
//!
//! With `G = I - 2 C_AB`,
//! `G± = [[-G11, ±i G12], [±i G21, G22]]` and
//! `C_Xi = (I - (I + G+ G-)^{-1} (G+ + G-)) / 2`,
//! the Rényi negativity is
//! `sum_j log(xi_j^{n/2} + (1 - xi_j)^{n/2}) + (n/2) sum_j log(z_j^2 + (1 - z_j)^2)`
//! over the spectra `xi` of `C_Xi` and `z` of `C_AB`; `n = 1` gives the
//! logarithmic negativity.
//!
//! Since `G- = G+^dagger`, writing `P = I + G+ G+^dagger` gives
//! `C_Xi = P^{-1} (I - G+)(I - G+)^dagger / 2` and
//! `I - C_Xi = P^{-1} (I + G+)(I + G+)^dagger / 2`, so `xi` is real in
//! [0, 1] and `xi^{1/2}`, `(1 - xi)^{1/2}` are the singular values of
//! `P^{-1/2} (I -+ G+) / sqrt 2`. The sums are evaluated from those singular
//! values, which keeps full relative accuracy when `xi` is close to 0 or 1.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{invalid, numerical, Result};
use crate::gaussian::{occupation_spectrum, CorrelationMatrix};
use crate::linalg::{eigenvalues, eigh, singular_values, CMat, Lu};
use crate::math;
use crate::model::RegionPartition;

/// Largest accepted 1-norm condition number of `I + G+ G-`.
pub const CONDITION_LIMIT: f64 = 1e12;

/// `xi` eigenvalues within this distance of the real segment [0, 1] are
/// snapped onto it before taking square roots.
pub const XI_SNAP: f64 = 1e-10;

/// Intermediate matrices and spectra of the negativity computation.
#[derive(Clone, Debug)]
pub struct CovariancePipeline {
    pub gamma: CMat,
    pub gamma_plus: CMat,
    pub gamma_minus: CMat,
    pub c_xi: CMat,
    /// Eigenvalues of `C_Xi` from the general eigensolver, snapped.
    pub xi: Vec<Complex64>,
    /// `(xi^{1/2}, (1 - xi)^{1/2})` from the factorized form, ascending in `xi`.
    pub xi_roots: Vec<(f64, f64)>,
    pub zeta: Vec<f64>,
    /// 1-norm condition number of `I + G+ G-`.
    pub condition: f64,
}

/// What a [`NegativityResult`] measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NegativityKind {
    Logarithmic,
    Renyi(u32),
}

/// Negativity value with the two sums it is made of.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NegativityResult {
    pub value: f64,
    pub kind: NegativityKind,
    /// `sum_j log(xi_j^{n/2} + (1 - xi_j)^{n/2})`.
    pub term1: f64,
    /// `(n/2) sum_j log(z_j^2 + (1 - z_j)^2)`.
    pub term2: f64,
}

fn snap(z: Complex64) -> Complex64 {
    if z.im.abs() > XI_SNAP {
        return z;
    }
    let re = if z.re < 0.0 && z.re >= -XI_SNAP {
        0.0
    } else if z.re > 1.0 && z.re <= 1.0 + XI_SNAP {
        1.0
    } else {
        z.re
    };
    Complex64::new(re, 0.0)
}

/// Pairs `(xi^{1/2}, (1 - xi)^{1/2})`, each taken from whichever factor
/// gives the smaller of the two directly.
fn xi_roots(gamma_plus: &CMat) -> Result<Vec<(f64, f64)>> {
    let n = gamma_plus.rows();
    let id = CMat::identity(n);
    let p = &id + &gamma_plus.matmul(&gamma_plus.adjoint());
    let eig = eigh(&p)?;
    let v = &eig.vectors;
    let scaled = CMat::from_fn(n, n, |i, k| v[(i, k)] / math::sqrt(eig.values[k]));
    // P^{-1/2} / sqrt 2
    let root = scaled
        .matmul(&v.adjoint())
        .scale(Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0));
    let mut s_minus = singular_values(&root.matmul(&(&id - gamma_plus)))?;
    let mut s_plus = singular_values(&root.matmul(&(&id + gamma_plus)))?;
    s_minus.sort_by(f64::total_cmp);
    s_plus.sort_by(|a, b| b.total_cmp(a));
    let complement = |s: f64| math::sqrt((1.0 - s * s).max(0.0));
    Ok(s_minus
        .into_iter()
        .zip(s_plus)
        .map(|(a, b)| if a <= b { (a, complement(a)) } else { (complement(b), b) })
        .collect())
}

impl CovariancePipeline {
    /// Builds the pipeline from `C` restricted to A then B (`na` sites in A).
    pub fn from_restricted(c_ab: &CMat, na: usize) -> Result<Self> {
        if !c_ab.is_square() || na == 0 || na >= c_ab.rows() {
            return Err(invalid!(
                "cannot split a {}x{} matrix at {na}",
                c_ab.rows(),
                c_ab.cols()
            ));
        }
        let n = c_ab.rows();
        let zeta = occupation_spectrum(c_ab)?;
        let id = CMat::identity(n);
        let gamma = &id - &c_ab.scale(Complex64::new(2.0, 0.0));
        let twist = |sign: f64| {
            CMat::from_fn(n, n, |i, j| {
                let g = gamma[(i, j)];
                match (i < na, j < na) {
                    (true, true) => -g,
                    (false, false) => g,
                    _ => g * Complex64::new(0.0, sign),
                }
            })
        };
        let gamma_plus = twist(1.0);
        let gamma_minus = twist(-1.0);
        let lu = Lu::new(&(&id + &gamma_plus.matmul(&gamma_minus)))?;
        let condition = lu.condition_number();
        if !(condition <= CONDITION_LIMIT) {
            return Err(numerical!("I + G+ G- is ill-conditioned (condition {condition:e})"));
        }
        let sum = &gamma_plus + &gamma_minus;
        let c_xi = (&id - &lu.solve(&sum)).scale(Complex64::new(0.5, 0.0));
        let xi = eigenvalues(&c_xi)?.into_iter().map(snap).collect();
        let xi_roots = xi_roots(&gamma_plus)?;
        Ok(CovariancePipeline {
            gamma,
            gamma_plus,
            gamma_minus,
            c_xi,
            xi,
            xi_roots,
            zeta,
            condition,
        })
    }

    pub fn new(c: &CorrelationMatrix, p: &RegionPartition) -> Result<Self> {
        if p.n() != c.n() {
            return Err(invalid!(
                "partition is for {} sites, correlation matrix has {}",
                p.n(),
                c.n()
            ));
        }
        Self::from_restricted(&c.restrict(&p.sites())?, p.a().len())
    }

    /// Largest distance from a complex `xi` to the nearest conjugate of
    /// another eigenvalue; 0 when the spectrum is real or exactly paired.
    pub fn xi_pairing_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, z) in self.xi.iter().enumerate() {
            if z.im == 0.0 {
                continue;
            }
            let nearest = self
                .xi
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, w)| (w - z.conj()).norm())
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(nearest);
        }
        worst
    }

    fn evaluate(&self, kind: NegativityKind) -> Result<NegativityResult> {
        let half = match kind {
            NegativityKind::Logarithmic => 0.5,
            NegativityKind::Renyi(n) => n as f64 / 2.0,
        };
        let term1: f64 = self
            .xi_roots
            .iter()
            .map(|&(a, b)| match kind {
                NegativityKind::Logarithmic => math::ln(a + b),
                NegativityKind::Renyi(n) => math::ln(math::powi(a, n as i32) + math::powi(b, n as i32)),
            })
            .sum();
        if !term1.is_finite() {
            return Err(numerical!("negativity sum over xi is not finite"));
        }
        let term2: f64 = half
            * self
                .zeta
                .iter()
                .map(|&z| math::ln(z * z + (1.0 - z) * (1.0 - z)))
                .sum::<f64>();
        Ok(NegativityResult {
            value: term1 + term2,
            kind,
            term1,
            term2,
        })
    }

    pub fn log_negativity(&self) -> Result<NegativityResult> {
        self.evaluate(NegativityKind::Logarithmic)
    }

    /// Even Rényi negativity `E_{n_e}`.
    pub fn renyi_negativity(&self, n_e: u32) -> Result<NegativityResult> {
        if n_e < 2 || n_e % 2 != 0 {
            return Err(invalid!(
                "Gaussian Rényi negativity needs an even index >= 2, got {n_e}"
            ));
        }
        self.evaluate(NegativityKind::Renyi(n_e))
    }
}

/// Logarithmic negativity between A and B.
pub fn log_negativity(c: &CorrelationMatrix, p: &RegionPartition) -> Result<NegativityResult> {
    CovariancePipeline::new(c, p)?.log_negativity()
}

/// Even Rényi negativity between A and B.
pub fn renyi_negativity(c: &CorrelationMatrix, p: &RegionPartition, n_e: u32) -> Result<NegativityResult> {
    if n_e < 2 || n_e % 2 != 0 {
        return Err(invalid!(
            "Gaussian Rényi negativity needs an even index >= 2, got {n_e}"
        ));
    }
    CovariancePipeline::new(c, p)?.renyi_negativity(n_e)
}

/// Von Neumann entropy and Rényi entropies of a region.
#[derive(Clone, Debug, PartialEq)]
pub struct Entropies {
    pub von_neumann: f64,
    /// `(n, S_n)` in the order requested.
    pub renyi: Vec<(f64, f64)>,
}

/// Entropies of the Gaussian state with correlation matrix `c_region`.
/// Rényi index 1 returns the von Neumann value.
pub fn exact_entropies(c_region: &CMat, renyi_orders: &[f64]) -> Result<Entropies> {
    if let Some(&bad) = renyi_orders.iter().find(|&&n| !(n > 0.0) || !n.is_finite()) {
        return Err(invalid!("Rényi index must be positive and finite, got {bad}"));
    }
    let zeta = occupation_spectrum(c_region)?;
    let xlogx = |x: f64| if x > 0.0 { x * math::ln(x) } else { 0.0 };
    let von_neumann = -zeta.iter().map(|&z| xlogx(z) + xlogx(1.0 - z)).sum::<f64>();
    let renyi = renyi_orders
        .iter()
        .map(|&n| {
            if n == 1.0 {
                return (n, von_neumann);
            }
            let s: f64 = zeta
                .iter()
                .map(|&z| math::ln(libm::pow(z, n) + libm::pow(1.0 - z, n)))
                .sum();
            (n, s / (1.0 - n))
        })
        .collect();
    Ok(Entropies { von_neumann, renyi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::thermal_correlations;
    use crate::model::{build_all_connected, make_partition};

    fn c64(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn single_decoupled_mode_xi() {
        let z = 0.3;
        let c = CMat::diagonal(&[c64(z), c64(0.8)]);
        let pipe = CovariancePipeline::from_restricted(&c, 1).unwrap();
        let want = (1.0 - z) * (1.0 - z) / (z * z + (1.0 - z) * (1.0 - z));
        assert!(pipe.xi.iter().any(|x| (x - c64(want)).norm() < 1e-13));
        assert!(pipe.log_negativity().unwrap().value.abs() < 1e-14);
    }

    #[test]
    fn factorized_roots_match_the_eigenvalues() {
        let h = build_all_connected(9, 4, 1.0).unwrap();
        let p = make_partition(9, 1, 3, 5, 7).unwrap();
        let pipe = CovariancePipeline::new(&thermal_correlations(&h, 1.5, 0.0).unwrap(), &p).unwrap();
        let mut xi: Vec<f64> = pipe.xi.iter().map(|x| x.re).collect();
        xi.sort_by(f64::total_cmp);
        assert!(pipe.xi.iter().all(|x| x.im.abs() < 1e-10));
        for ((a, b), x) in pipe.xi_roots.iter().zip(&xi) {
            assert!((a * a - x).abs() < 1e-10 && (a * a + b * b - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cold_product_state_stays_at_zero() {
        // Nearly pure modes put xi within 1e-14 of 0 or 1.
        let zs = [1e-7, 0.999_999_9, 0.3, 2e-8, 1.0 - 3e-8];
        let c = CMat::diagonal(&zs.map(c64));
        for na in 1..zs.len() {
            let pipe = CovariancePipeline::from_restricted(&c, na).unwrap();
            assert!(pipe.log_negativity().unwrap().value.abs() < 1e-14);
        }
    }

    #[test]
    fn infinite_temperature() {
        let c = CMat::identity(4).scale(c64(0.5));
        let pipe = CovariancePipeline::from_restricted(&c, 2).unwrap();
        assert_eq!(pipe.gamma.max_abs(), 0.0);
        assert_eq!(pipe.gamma_plus.max_abs(), 0.0);
        assert!(pipe.c_xi.max_abs_diff(&c) < 1e-15);
        assert!(pipe.log_negativity().unwrap().value.abs() < 1e-14);
    }

    #[test]
    fn bell_pair_is_log_two() {
        let c = CMat::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]);
        let e = CovariancePipeline::from_restricted(&c, 1)
            .unwrap()
            .log_negativity()
            .unwrap();
        assert!((e.value - core::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn product_states() {
        let h = build_all_connected(10, 6, 1.0).unwrap();
        let c = thermal_correlations(&h, 1.5, 0.0).unwrap();
        let mut m = c.restrict(&[0, 1, 2, 3, 4, 5]).unwrap();
        for i in 0..3 {
            for j in 3..6 {
                m[(i, j)] = c64(0.0);
                m[(j, i)] = c64(0.0);
            }
        }
        let pipe = CovariancePipeline::from_restricted(&m, 3).unwrap();
        assert!(pipe.log_negativity().unwrap().value.abs() < 1e-10);
        // Rényi negativity of a product state reduces to the regions' own
        // Rényi entropies: E_n = (1 - n) (S_n(A) + S_n(B)).
        let a = m.select(&[0, 1, 2], &[0, 1, 2]);
        let b = m.select(&[3, 4, 5], &[3, 4, 5]);
        for n in [2, 4, 6] {
            let sa = exact_entropies(&a, &[n as f64]).unwrap().renyi[0].1;
            let sb = exact_entropies(&b, &[n as f64]).unwrap().renyi[0].1;
            let want = (1.0 - n as f64) * (sa + sb);
            assert!((pipe.renyi_negativity(n).unwrap().value - want).abs() < 1e-10);
        }
    }

    #[test]
    fn symmetries() {
        for seed in 0..5 {
            let h = build_all_connected(9, 100 + seed, 1.0).unwrap();
            let c = thermal_correlations(&h, 1.0, 0.0).unwrap();
            let p = make_partition(9, 0, 2, 4, 8).unwrap();
            let e = log_negativity(&c, &p).unwrap().value;
            assert!(e >= -1e-10);
            let swapped = log_negativity(&c, &p.swapped()).unwrap().value;
            assert!((e - swapped).abs() < 1e-10);
            let r = renyi_negativity(&c, &p, 4).unwrap().value;
            let rs = renyi_negativity(&c, &p.swapped(), 4).unwrap().value;
            assert!((r - rs).abs() < 1e-10);

            // Site phase rotations conjugate C by a diagonal unitary.
            let phases: Vec<Complex64> = (0..9).map(|k| Complex64::from_polar(1.0, 0.7 * k as f64)).collect();
            let rotated = CMat::from_fn(9, 9, |i, j| phases[i].conj() * c.matrix()[(i, j)] * phases[j]);
            let rc = CorrelationMatrix::from_matrix(rotated).unwrap();
            assert!((log_negativity(&rc, &p).unwrap().value - e).abs() < 1e-10);
        }
    }

    #[test]
    fn odd_index_rejected() {
        let c = CMat::identity(2).scale(c64(0.5));
        let pipe = CovariancePipeline::from_restricted(&c, 1).unwrap();
        assert!(pipe.renyi_negativity(3).is_err());
        assert!(pipe.renyi_negativity(0).is_err());
    }

    #[test]
    fn entropies() {
        let half = exact_entropies(&CMat::diagonal(&[c64(0.5)]), &[2.0]).unwrap();
        assert!((half.von_neumann - core::f64::consts::LN_2).abs() < 1e-15);
        assert!((half.renyi[0].1 - core::f64::consts::LN_2).abs() < 1e-15);
        let pure = exact_entropies(&CMat::diagonal(&[c64(0.0), c64(1.0)]), &[2.0, 3.0]).unwrap();
        assert_eq!(pure.von_neumann, 0.0);
        assert!(pure.renyi.iter().all(|&(_, s)| s.abs() < 1e-15));

        let h = build_all_connected(6, 3, 1.0).unwrap();
        let c = thermal_correlations(&h, 0.8, 0.0)
            .unwrap()
            .restrict(&[0, 1, 2])
            .unwrap();
        let e = exact_entropies(&c, &[1.0 - 1e-6, 1.0 + 1e-6]).unwrap();
        let (lo, hi) = (e.renyi[0].1, e.renyi[1].1);
        assert!(lo >= e.von_neumann - 1e-12 && hi <= e.von_neumann + 1e-12);
        assert!((lo - e.von_neumann).abs() < 1e-5 && (hi - e.von_neumann).abs() < 1e-5);
        assert!(exact_entropies(&c, &[0.0]).is_err());
    }
}
