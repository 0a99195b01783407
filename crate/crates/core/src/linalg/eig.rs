//! Eigenvalues of a general complex matrix: Householder reduction to upper
//! Hessenberg form, then single-shift complex QR with Wilkinson shifts.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::CMat;
use crate::error::{invalid, numerical, Result};

const EPS: f64 = f64::EPSILON;

/// All eigenvalues of a square complex matrix, in no particular order.
pub fn eigenvalues(m: &CMat) -> Result<Vec<Complex64>> {
    if !m.is_square() {
        return Err(invalid!("eigenvalues need a square matrix"));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    if m.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(invalid!("eigenvalue input contains non-finite entries"));
    }
    let mut h = m.clone();
    hessenberg(&mut h);
    let norm = h.max_abs();
    let mut out = Vec::with_capacity(n);

    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total_iter = 0usize;
    loop {
        if hi == 0 {
            out.push(h[(0, 0)]);
            break;
        }
        // Look for a negligible sub-diagonal entry in the active window.
        let mut lo = 0;
        let mut k = hi;
        while k > 0 {
            let sub = h[(k, k - 1)].norm();
            let diag = h[(k, k)].norm() + h[(k - 1, k - 1)].norm();
            let small = if diag > 0.0 {
                sub <= EPS * diag
            } else {
                sub <= EPS * norm
            };
            if small || sub < f64::MIN_POSITIVE {
                h[(k, k - 1)] = Complex64::new(0.0, 0.0);
                lo = k;
                break;
            }
            k -= 1;
        }
        if lo == hi {
            out.push(h[(hi, hi)]);
            hi -= 1;
            iter = 0;
            continue;
        }

        iter += 1;
        total_iter += 1;
        if total_iter > 100 * n.max(10) {
            return Err(numerical!("complex QR iteration did not converge"));
        }
        let shift = if iter % 11 == 10 {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + Complex64::new(0.75, 0.4375) * h[(hi, hi - 1)].norm()
        } else {
            wilkinson_shift(&h, hi)
        };
        qr_step(&mut h, lo, hi, shift);
    }
    Ok(out)
}

fn wilkinson_shift(h: &CMat, hi: usize) -> Complex64 {
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let c = h[(hi, hi - 1)];
    let d = h[(hi, hi)];
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powu(2) + b * c;
    let root = disc.sqrt();
    let l1 = half_tr + root;
    let l2 = half_tr - root;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// One explicit shifted QR sweep `H - sI = QR, H <- RQ + sI` on rows and
/// columns `lo..=hi`.
fn qr_step(h: &mut CMat, lo: usize, hi: usize, shift: Complex64) {
    for k in lo..=hi {
        h[(k, k)] -= shift;
    }
    let mut rots: Vec<(f64, Complex64)> = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
        for j in k..=hi {
            let x = h[(k, j)];
            let y = h[(k + 1, j)];
            h[(k, j)] = x * c + s * y;
            h[(k + 1, j)] = -s.conj() * x + y * c;
        }
        h[(k + 1, k)] = Complex64::new(0.0, 0.0);
        rots.push((c, s));
    }
    for (idx, &(c, s)) in rots.iter().enumerate() {
        let k = lo + idx;
        let top = (k + 2).min(hi);
        for i in lo..=top {
            let x = h[(i, k)];
            let y = h[(i, k + 1)];
            h[(i, k)] = x * c + y * s.conj();
            h[(i, k + 1)] = -x * s + y * c;
        }
    }
    for k in lo..=hi {
        h[(k, k)] += shift;
    }
}

/// `(c, s)` with `[[c, s], [-conj(s), c]] [a, b]^T = [r, 0]^T`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    let an = a.norm();
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let rho = crate::math::hypot(an, bn);
    let c = an / rho;
    let s = (a / an) * b.conj() / rho;
    (c, s)
}

/// In-place Householder reduction to upper Hessenberg form (similarity).
fn hessenberg(a: &mut CMat) {
    let n = a.rows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let alpha_sq: f64 = (k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum();
        let alpha = crate::math::sqrt(alpha_sq);
        if alpha == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        // v = x + e^{i arg x0} |x| e_1, reflector P = I - 2 v v^H / (v^H v).
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        v[0] += phase * alpha;
        let vnorm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm_sq == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm_sq;
        // A <- P A (rows k+1..n).
        for j in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for (idx, vi) in v.iter().enumerate() {
                dot += vi.conj() * a[(k + 1 + idx, j)];
            }
            dot *= beta;
            for (idx, vi) in v.iter().enumerate() {
                a[(k + 1 + idx, j)] -= vi * dot;
            }
        }
        // A <- A P (columns k+1..n).
        for i in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for (idx, vi) in v.iter().enumerate() {
                dot += a[(i, k + 1 + idx)] * vi;
            }
            dot *= beta;
            for (idx, vi) in v.iter().enumerate() {
                a[(i, k + 1 + idx)] -= dot * vi.conj();
            }
        }
        for i in k + 2..n {
            a[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::testutil::{random_hermitian, random_matrix};
    use super::super::{eigh, Lu};
    use super::*;

    fn sorted_re(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn hermitian_input_matches_jacobi() {
        let h = random_hermitian(15, 4);
        let ev = sorted_re(eigenvalues(&h).unwrap());
        let reference = eigh(&h).unwrap().values;
        for (z, r) in ev.iter().zip(&reference) {
            assert!((z.re - r).abs() < 1e-11, "{z} vs {r}");
            assert!(z.im.abs() < 1e-11);
        }
    }

    #[test]
    fn trace_and_determinant_invariants() {
        for seed in 0..6 {
            let a = random_matrix(12, 100 + seed);
            let ev = eigenvalues(&a).unwrap();
            assert_eq!(ev.len(), 12);
            let sum: Complex64 = ev.iter().sum();
            assert!((sum - a.trace()).norm() < 1e-10 * a.max_abs() * 12.0);
            let prod: Complex64 = ev.iter().product();
            let det = Lu::new(&a).unwrap().determinant();
            assert!((prod - det).norm() < 1e-9 * det.norm().max(1.0));
        }
    }

    #[test]
    fn companion_matrix_roots() {
        // x^3 - 6x^2 + 11x - 6 = (x - 1)(x - 2)(x - 3)
        let c = CMat::from_real(3, 3, &[6.0, -11.0, 6.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        let ev = sorted_re(eigenvalues(&c).unwrap());
        for (z, r) in ev.iter().zip([1.0, 2.0, 3.0]) {
            assert!((z - Complex64::new(r, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn rotation_has_conjugate_pair() {
        let r = CMat::from_real(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let ev = sorted_re(eigenvalues(&r).unwrap());
        assert!((ev[0] - Complex64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((ev[1] - Complex64::new(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn zero_and_triangular_matrices() {
        let z = CMat::zeros(4, 4);
        assert!(eigenvalues(&z).unwrap().iter().all(|e| e.norm() == 0.0));
        let t = CMat::from_real(3, 3, &[1.0, 5.0, 7.0, 0.0, 2.0, 9.0, 0.0, 0.0, 3.0]);
        let ev = sorted_re(eigenvalues(&t).unwrap());
        assert!((ev[2].re - 3.0).abs() < 1e-14);
    }
}
