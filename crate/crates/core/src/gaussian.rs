//! Two-point correlation matrices `C_ij = <c_i^dagger c_j>` of thermal and
//! ground states.
//!
//! With `h = V diag(e) V^dagger` and `c_i = sum_k V_ik d_k`,
//! `C_ij = sum_k conj(V_ik) V_jk f(e_k)`, i.e. `C = f(h)^T`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, numerical, Result};
use crate::linalg::{eigh, CMat, HermitianEigen};
use crate::math;
use crate::model::{HoppingMatrix, RegionPartition};

/// Eigenvalues of a correlation matrix may leave [0, 1] by at most this much
/// before they count as an error rather than roundoff.
pub const OCCUPATION_TOLERANCE: f64 = 1e-12;

/// Correlation matrix with the temperature and chemical potential that
/// produced it (`None` for matrices supplied directly).
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationMatrix {
    c: CMat,
    beta: Option<f64>,
    mu: Option<f64>,
}

impl CorrelationMatrix {
    /// Validates a user-supplied matrix: Hermitian to 1e-12 with spectrum in
    /// [0, 1].
    pub fn from_matrix(c: CMat) -> Result<Self> {
        if !c.is_square() || c.rows() == 0 {
            return Err(invalid!("correlation matrix must be square and non-empty"));
        }
        if c.hermiticity_defect() > 1e-12 {
            return Err(invalid!("correlation matrix is not Hermitian"));
        }
        occupation_spectrum(&c)?;
        Ok(CorrelationMatrix {
            c,
            beta: None,
            mu: None,
        })
    }

    pub fn n(&self) -> usize {
        self.c.rows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.c
    }

    /// `f64::INFINITY` for ground states.
    pub fn beta(&self) -> Option<f64> {
        self.beta
    }

    pub fn mu(&self) -> Option<f64> {
        self.mu
    }

    /// `C` restricted to `sites`, in the given order.
    pub fn restrict(&self, sites: &[usize]) -> Result<CMat> {
        if let Some(&bad) = sites.iter().find(|&&s| s >= self.n()) {
            return Err(invalid!("site {bad} is outside 0..{}", self.n()));
        }
        Ok(self.c.select(sites, sites))
    }
}

/// `sum_k conj(V_ik) V_jk occ_k`.
fn assemble(eig: &HermitianEigen, occ: &[f64]) -> CMat {
    let v = &eig.vectors;
    let n = v.rows();
    let weighted = CMat::from_fn(n, n, |i, k| v[(i, k)].conj() * occ[k]);
    weighted.matmul(&v.transpose())
}

/// Gibbs state `e^{-beta (H - mu N)} / Z`. `beta = +inf` gives the ground
/// state with half occupation of exactly-zero modes.
pub fn thermal_correlations(h: &HoppingMatrix, beta: f64, mu: f64) -> Result<CorrelationMatrix> {
    if beta.is_nan() || beta < 0.0 {
        return Err(invalid!("beta must be non-negative, got {beta}"));
    }
    if !mu.is_finite() {
        return Err(invalid!("chemical potential must be finite"));
    }
    let eig = h.eigen(mu)?;
    let occ: Vec<f64> = eig.values.iter().map(|&e| math::fermi(beta, e)).collect();
    Ok(CorrelationMatrix {
        c: assemble(&eig, &occ),
        beta: Some(beta),
        mu: Some(mu),
    })
}

/// Number of particles for a filling fraction, rounded half away from zero.
fn particle_count(n: usize, filling: f64) -> Result<usize> {
    if !(0.0..=1.0).contains(&filling) {
        return Err(invalid!("filling must lie in [0, 1], got {filling}"));
    }
    Ok(math::floor(filling * n as f64 + 0.5).min(n as f64) as usize)
}

/// Slater determinant of the `round(filling * n)` lowest modes of `h`. Ties
/// at the Fermi level go to the lower eigenvalue index.
pub fn ground_state_correlations(h: &HoppingMatrix, filling: f64) -> Result<CorrelationMatrix> {
    let count = particle_count(h.n(), filling)?;
    let eig = h.eigen(0.0)?;
    let occ: Vec<f64> = (0..h.n()).map(|k| if k < count { 1.0 } else { 0.0 }).collect();
    Ok(CorrelationMatrix {
        c: assemble(&eig, &occ),
        beta: Some(f64::INFINITY),
        mu: None,
    })
}

/// Ground-state correlations of the open tight-binding chain restricted to
/// `sites`, without building the full matrix.
///
/// Uses `sum_{k=1}^{K} cos(k x) = (sin((K + 1/2) x) - sin(x / 2)) / (2 sin(x / 2))`
/// on the product of standing waves, so each entry costs O(1).
pub fn chain_ground_state_block(n: usize, hopping: f64, filling: f64, sites: &[usize]) -> Result<CMat> {
    if n < 2 {
        return Err(invalid!("a chain needs at least 2 sites, got {n}"));
    }
    if let Some(&bad) = sites.iter().find(|&&s| s >= n) {
        return Err(invalid!("site {bad} is outside 0..{n}"));
    }
    let count = particle_count(n, filling)?;
    // Positive hopping fills the low standing-wave numbers.
    let (k_lo, k_hi) = if hopping < 0.0 { (n - count + 1, n) } else { (1, count) };
    let np1 = n as f64 + 1.0;
    let cos_sum = |kmax: usize, x: f64| -> f64 {
        let half = math::sin(0.5 * x);
        if half.abs() < 1e-300 {
            return kmax as f64;
        }
        (math::sin((kmax as f64 + 0.5) * x) - half) / (2.0 * half)
    };
    let window = |x: f64| -> f64 {
        if count == 0 {
            0.0
        } else {
            cos_sum(k_hi, x) - cos_sum(k_lo - 1, x)
        }
    };
    Ok(CMat::from_fn(sites.len(), sites.len(), |r, s| {
        let (i, j) = (sites[r] as f64 + 1.0, sites[s] as f64 + 1.0);
        let diff = window(PI * (i - j) / np1);
        let sum = window(PI * (i + j) / np1);
        Complex64::new((diff - sum) / np1, 0.0)
    }))
}

/// Sorted eigenvalues of a correlation matrix, clamped into [0, 1] when they
/// overshoot by at most [`OCCUPATION_TOLERANCE`].
pub fn occupation_spectrum(c: &CMat) -> Result<Vec<f64>> {
    let mut values = eigh(c)?.values;
    for v in values.iter_mut() {
        if *v < -OCCUPATION_TOLERANCE || *v > 1.0 + OCCUPATION_TOLERANCE {
            return Err(numerical!("correlation eigenvalue {v:e} outside [0, 1]"));
        }
        *v = v.clamp(0.0, 1.0);
    }
    Ok(values)
}

/// The four blocks of `C` over `A` and `B`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockViews {
    pub c11: CMat,
    pub c12: CMat,
    pub c21: CMat,
    pub c22: CMat,
}

impl BlockViews {
    /// Splits a matrix already restricted to A then B, with `na` sites in A.
    pub fn from_restricted(c_ab: &CMat, na: usize) -> Result<Self> {
        if !c_ab.is_square() || na == 0 || na >= c_ab.rows() {
            return Err(invalid!(
                "cannot split a {}x{} matrix at {na}",
                c_ab.rows(),
                c_ab.cols()
            ));
        }
        let a: Vec<usize> = (0..na).collect();
        let b: Vec<usize> = (na..c_ab.rows()).collect();
        Ok(BlockViews {
            c11: c_ab.select(&a, &a),
            c12: c_ab.select(&a, &b),
            c21: c_ab.select(&b, &a),
            c22: c_ab.select(&b, &b),
        })
    }

    pub fn len_a(&self) -> usize {
        self.c11.rows()
    }

    pub fn len_b(&self) -> usize {
        self.c22.rows()
    }

    /// The matrix over A then B.
    pub fn assemble(&self) -> CMat {
        let na = self.len_a();
        let mut m = CMat::zeros(na + self.len_b(), na + self.len_b());
        m.set_block(0, 0, &self.c11);
        m.set_block(0, na, &self.c12);
        m.set_block(na, 0, &self.c21);
        m.set_block(na, na, &self.c22);
        m
    }
}

/// Blocks of `C` for a partition; A first.
pub fn blocks(c: &CorrelationMatrix, p: &RegionPartition) -> Result<BlockViews> {
    if p.n() != c.n() {
        return Err(invalid!(
            "partition is for {} sites, correlation matrix has {}",
            p.n(),
            c.n()
        ));
    }
    BlockViews::from_restricted(&c.restrict(&p.sites())?, p.a().len())
}
