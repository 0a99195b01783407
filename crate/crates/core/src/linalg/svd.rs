//! Singular values by one-sided (Hestenes) Jacobi.
//!
//! Small singular values come out with absolute error near `eps * |A|`,
//! unlike square roots of the eigenvalues of `A A^dagger`, which lose half
//! the digits. Trace norms of nearly-pure states depend on that.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::CMat;
use crate::error::{numerical, Result};
use crate::math;

const MAX_SWEEPS: usize = 80;

/// Singular values in descending order.
pub fn singular_values(a: &CMat) -> Result<Vec<f64>> {
    let (m, n) = (a.rows(), a.cols());
    // Work on the orientation with fewer columns.
    let work = if n > m { a.adjoint() } else { a.clone() };
    let (rows, cols) = (work.rows(), work.cols());
    let mut columns: Vec<Vec<Complex64>> = (0..cols).map(|j| (0..rows).map(|i| work[(i, j)]).collect()).collect();

    let mut converged = cols < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..cols.saturating_sub(1) {
            for q in p + 1..cols {
                let (left, right) = columns.split_at_mut(q);
                let cp = &mut left[p];
                let cq = &mut right[0];
                let alpha: f64 = cp.iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cq.iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = cp.iter().zip(cq.iter()).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= 1e-15 * math::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + math::hypot(1.0, zeta))
                } else {
                    -1.0 / (-zeta + math::hypot(1.0, zeta))
                };
                let c = 1.0 / math::hypot(1.0, t);
                let s = c * t;
                let pc = phase.conj();
                for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                    let yp = *y * pc;
                    let nx = *x * c - yp * s;
                    let ny = *x * s + yp * c;
                    *x = nx;
                    *y = ny;
                }
            }
        }
        if !rotated {
            converged = true;
        }
    }
    if !converged {
        return Err(numerical!("one-sided Jacobi SVD did not converge"));
    }
    let mut sv: Vec<f64> = columns
        .iter()
        .map(|c| math::sqrt(c.iter().map(|z| z.norm_sqr()).sum()))
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}
