//! Cyclic complex Jacobi eigensolver for Hermitian matrices.
//!
//! Jacobi is slower than tridiagonal QR but gives eigenvalues with small
//! absolute error relative to the matrix norm and orthonormal eigenvectors to
//! working precision, which is what the correlation-matrix spectra need.
//! Index sets that are decoupled by the sparsity pattern are solved
//! separately, so block-diagonal inputs (such as particle-number sectors of a
//! many-body Hamiltonian) cost the sum of their blocks.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::tridiag::tridiagonal_eigen;
use super::CMat;
use crate::error::{invalid, numerical, Result};
use crate::math;

const MAX_SWEEPS: usize = 60;

/// Blocks larger than this go through tridiagonal QL instead of Jacobi.
const JACOBI_MAX: usize = 128;

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored as the columns of `vectors`.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

impl HermitianEigen {
    /// `max |h v_k - e_k v_k|` over all entries.
    pub fn residual(&self, h: &CMat) -> f64 {
        let hv = h.matmul(&self.vectors);
        let mut worst: f64 = 0.0;
        for i in 0..h.rows() {
            for (k, e) in self.values.iter().enumerate() {
                worst = worst.max((hv[(i, k)] - self.vectors[(i, k)] * e).norm());
            }
        }
        worst
    }
}

/// Diagonalizes a Hermitian matrix. Ties in the sorted spectrum keep the
/// order in which the Jacobi sweep left them.
///
/// Index sets that the nonzero pattern leaves decoupled (block-diagonal
/// structure under a permutation) are diagonalized separately.
pub fn eigh(h: &CMat) -> Result<HermitianEigen> {
    if !h.is_square() {
        return Err(invalid!("eigh needs a square matrix, got {}x{}", h.rows(), h.cols()));
    }
    let n = h.rows();
    let scale = h.max_abs();
    if scale.is_nan() {
        return Err(invalid!("eigh input contains NaN"));
    }
    let tol = 1e-12 * scale.max(f64::MIN_POSITIVE);
    if h.hermiticity_defect() > tol {
        return Err(invalid!(
            "eigh input is not Hermitian (defect {:e})",
            h.hermiticity_defect()
        ));
    }

    let mut values = Vec::with_capacity(n);
    let mut vectors = CMat::zeros(n, n);
    for comp in components(h) {
        let m = comp.len();
        let block = h.select(&comp, &comp);
        let (vals, w) = if m > JACOBI_MAX {
            tridiagonal_eigen(&block)?
        } else {
            jacobi(&block)?
        };
        let col0 = values.len();
        for (k, val) in vals.into_iter().enumerate() {
            values.push(val);
            for (r, &i) in comp.iter().enumerate() {
                vectors[(i, col0 + k)] = w[k * m + r];
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let sorted = order.iter().map(|&i| values[i]).collect();
    let vectors = CMat::from_fn(n, n, |i, k| vectors[(i, order[k])]);
    Ok(HermitianEigen {
        values: sorted,
        vectors,
    })
}

/// Connected components of the graph with an edge wherever `h[i][j] != 0`,
/// each sorted ascending, ordered by smallest member.
fn components(h: &CMat) -> Vec<Vec<usize>> {
    let n = h.rows();
    let mut label = alloc::vec![usize::MAX; n];
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        label[start] = id;
        stack.push(start);
        let mut members = Vec::new();
        while let Some(i) = stack.pop() {
            members.push(i);
            for (j, z) in h.row(i).iter().enumerate() {
                if label[j] == usize::MAX && *z != Complex64::new(0.0, 0.0) {
                    label[j] = id;
                    stack.push(j);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// Cyclic Jacobi on one block. Returns the unsorted eigenvalues and the
/// eigenvectors as the rows of a row-major `m x m` array.
fn jacobi(h: &CMat) -> Result<(Vec<f64>, Vec<Complex64>)> {
    let m = h.rows();
    let mut a: Vec<Complex64> = h.as_slice().to_vec();
    for i in 0..m {
        a[i * m + i] = Complex64::new(a[i * m + i].re, 0.0);
    }
    let mut w = alloc::vec![Complex64::new(0.0, 0.0); m * m];
    for i in 0..m {
        w[i * m + i] = Complex64::new(1.0, 0.0);
    }

    let mut converged = m < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let (off, total) = norms(&a, m);
        if off <= 1e-32 * total || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..m - 1 {
            for q in p + 1..m {
                rotate(&mut a, &mut w, m, p, q);
            }
        }
    }
    if !converged {
        let (off, total) = norms(&a, m);
        if off > 1e-28 * total {
            return Err(numerical!("Jacobi eigensolver did not converge (off-diagonal {off:e})"));
        }
    }
    Ok(((0..m).map(|i| a[i * m + i].re).collect(), w))
}

/// Squared off-diagonal and total Frobenius norms.
fn norms(a: &[Complex64], m: usize) -> (f64, f64) {
    let mut off = 0.0;
    let mut total = 0.0;
    for i in 0..m {
        for j in 0..m {
            let x = a[i * m + j].norm_sqr();
            total += x;
            if i != j {
                off += x;
            }
        }
    }
    (off, total)
}

/// Annihilates `a[p][q]` with `A <- U^dagger A U`, `U` acting on indices p
/// and q:
///   `U[:,p] = c e_p - s e^{-i phi} e_q`,  `U[:,q] = s e_p + c e^{-i phi} e_q`.
/// Rows p and q are updated in place and the columns mirrored by Hermiticity.
/// `w` holds the eigenvector estimates as rows.
fn rotate(a: &mut [Complex64], w: &mut [Complex64], m: usize, p: usize, q: usize) {
    let apq = a[p * m + q];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a[p * m + p].re;
    let aqq = a[q * m + q].re;
    let zero = Complex64::new(0.0, 0.0);
    if r <= 1e-18 * (app.abs() + aqq.abs()) {
        a[p * m + q] = zero;
        a[q * m + p] = zero;
        return;
    }
    // e^{i phi} = apq / r; the phase makes the pair real symmetric.
    let phase = apq / r;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + math::hypot(1.0, tau))
    } else {
        -1.0 / (-tau + math::hypot(1.0, tau))
    };
    let c = 1.0 / math::hypot(1.0, t);
    let s = t * c;
    let ps = phase * s;
    let pc = phase * c;

    for k in 0..m {
        if k == p || k == q {
            continue;
        }
        let apk = a[p * m + k];
        let aqk = a[q * m + k];
        let new_p = apk * c - aqk * ps;
        let new_q = apk * s + aqk * pc;
        a[p * m + k] = new_p;
        a[q * m + k] = new_q;
        a[k * m + p] = new_p.conj();
        a[k * m + q] = new_q.conj();
    }
    a[p * m + q] = zero;
    a[q * m + p] = zero;
    a[p * m + p] = Complex64::new(app - t * r, 0.0);
    a[q * m + q] = Complex64::new(aqq + t * r, 0.0);

    // Columns of V are rows of w: V <- V U.
    let (psc, pcc) = (ps.conj(), pc.conj());
    for k in 0..m {
        let wp = w[p * m + k];
        let wq = w[q * m + k];
        w[p * m + k] = wp * c - wq * psc;
        w[q * m + k] = wp * s + wq * pcc;
    }
}

#[cfg(test)]
mod tests {
    use super::super::testutil::random_hermitian;
    use super::*;

    #[test]
    fn two_by_two_closed_form() {
        // [[1, 2i], [-2i, 1]] has eigenvalues -1 and 3.
        let h = CMat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => Complex64::new(0.0, 2.0),
            (1, 0) => Complex64::new(0.0, -2.0),
            _ => Complex64::new(1.0, 0.0),
        });
        let e = eigh(&h).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 3.0).abs() < 1e-14);
        assert!(e.residual(&h) < 1e-14);
    }

    #[test]
    fn random_residual_and_orthonormality() {
        for seed in 0..5 {
            let h = random_hermitian(24, seed);
            let e = eigh(&h).unwrap();
            assert!(e.residual(&h) <= 1e-10 * h.max_abs() * 24.0);
            let gram = e.vectors.adjoint().matmul(&e.vectors);
            assert!(gram.max_abs_diff(&CMat::identity(24)) < 1e-13);
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
            let tr: f64 = e.values.iter().sum();
            assert!((tr - h.trace().re).abs() < 1e-11);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut h = CMat::identity(3);
        h[(0, 1)] = Complex64::new(1.0, 0.0);
        assert!(eigh(&h).is_err());
    }

    #[test]
    fn block_diagonal_stays_block_diagonal() {
        let b = random_hermitian(3, 11);
        let mut h = CMat::zeros(6, 6);
        h.set_block(0, 0, &b);
        h.set_block(3, 3, &b);
        let e = eigh(&h).unwrap();
        for k in 0..6 {
            let top: f64 = (0..3).map(|i| e.vectors[(i, k)].norm_sqr()).sum();
            assert!(top < 1e-20 || (top - 1.0).abs() < 1e-12);
        }
        assert!(e.residual(&h) < 1e-13);
    }

    #[test]
    fn interleaved_blocks_are_found() {
        // Couplings only between even sites and between odd sites.
        let b = random_hermitian(8, 3);
        let h = CMat::from_fn(8, 8, |i, j| {
            if (i + j) % 2 == 0 {
                b[(i, j)]
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        assert_eq!(components(&h), [[0, 2, 4, 6], [1, 3, 5, 7]]);
        let e = eigh(&h).unwrap();
        assert!(e.residual(&h) < 1e-13);
        let gram = e.vectors.adjoint().matmul(&e.vectors);
        assert!(gram.max_abs_diff(&CMat::identity(8)) < 1e-14);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }
}
