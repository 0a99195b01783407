//! Householder reduction of a Hermitian matrix to real symmetric tridiagonal
//! form followed by implicit QL with Wilkinson-type shifts.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::CMat;
use crate::error::{numerical, Result};
use crate::math;

const MAX_QL_ITERATIONS: usize = 60;

/// Eigenvalues (unsorted) and eigenvectors as the rows of a row-major
/// `m x m` array.
pub(crate) fn tridiagonal_eigen(h: &CMat) -> Result<(Vec<f64>, Vec<Complex64>)> {
    let m = h.rows();
    let zero = Complex64::new(0.0, 0.0);
    let mut a: Vec<Complex64> = h.as_slice().to_vec();
    let mut q = alloc::vec![zero; m * m];
    for i in 0..m {
        q[i * m + i] = Complex64::new(1.0, 0.0);
    }

    // A <- H A H with H = I - 2 v v^dagger acting on indices k+1.., which
    // sends column k below the diagonal to alpha e_{k+1}.
    let mut v = alloc::vec![zero; m];
    let mut p = alloc::vec![zero; m];
    for k in 0..m.saturating_sub(2) {
        let lo = k + 1;
        let norm = math::sqrt((lo..m).map(|i| a[i * m + k].norm_sqr()).sum::<f64>());
        if norm == 0.0 {
            continue;
        }
        let x0 = a[lo * m + k];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm;
        for i in lo..m {
            v[i] = a[i * m + k];
        }
        v[lo] -= alpha;
        let vnorm = math::sqrt((lo..m).map(|i| v[i].norm_sqr()).sum::<f64>());
        if vnorm == 0.0 {
            continue;
        }
        for x in &mut v[lo..m] {
            *x /= vnorm;
        }
        // p = B v, K = v^dagger p, w = p - K v; B <- B - 2 v w^dagger - 2 w v^dagger.
        for i in lo..m {
            let row = &a[i * m + lo..i * m + m];
            p[i] = row.iter().zip(&v[lo..m]).map(|(x, y)| x * y).sum();
        }
        let kk: f64 = (lo..m).map(|i| (v[i].conj() * p[i]).re).sum();
        for i in lo..m {
            p[i] -= v[i] * kk;
        }
        for i in lo..m {
            let (vi, wi) = (v[i] * 2.0, p[i] * 2.0);
            let row = &mut a[i * m + lo..i * m + m];
            for (j, x) in row.iter_mut().enumerate() {
                let j = j + lo;
                *x -= vi * p[j].conj() + wi * v[j].conj();
            }
        }
        for i in lo..m {
            a[i * m + k] = zero;
            a[k * m + i] = zero;
        }
        a[lo * m + k] = alpha;
        a[k * m + lo] = alpha.conj();
        // Q <- Q H
        for r in 0..m {
            let row = &mut q[r * m + lo..r * m + m];
            let y: Complex64 = row.iter().zip(&v[lo..m]).map(|(x, y)| x * y).sum::<Complex64>() * 2.0;
            for (x, vj) in row.iter_mut().zip(&v[lo..m]) {
                *x -= y * vj.conj();
            }
        }
    }

    // Diagonal phases D make the off-diagonal real: T = D T_real D^dagger.
    let mut d: Vec<f64> = (0..m).map(|i| a[i * m + i].re).collect();
    let mut e = alloc::vec![0.0; m];
    let mut delta = alloc::vec![Complex64::new(1.0, 0.0); m];
    for i in 0..m.saturating_sub(1) {
        let sub = a[(i + 1) * m + i];
        e[i] = sub.norm();
        delta[i + 1] = if e[i] == 0.0 { delta[i] } else { delta[i] * (sub / e[i]) };
    }

    // Z^T with rows as eigenvectors of T_real.
    let mut zt = alloc::vec![0.0; m * m];
    for i in 0..m {
        zt[i * m + i] = 1.0;
    }
    tql(&mut d, &mut e, &mut zt, m)?;

    // V = Q D Z; row j of the output is column j of V.
    let qdt: Vec<Complex64> = (0..m * m)
        .map(|idx| {
            let (i, r) = (idx / m, idx % m);
            q[r * m + i] * delta[i]
        })
        .collect();
    let mut w = alloc::vec![zero; m * m];
    for j in 0..m {
        let out = &mut w[j * m..(j + 1) * m];
        for i in 0..m {
            let z = zt[j * m + i];
            if z == 0.0 {
                continue;
            }
            for (o, x) in out.iter_mut().zip(&qdt[i * m..(i + 1) * m]) {
                *o += x * z;
            }
        }
    }
    Ok((d, w))
}

/// Implicit QL on the symmetric tridiagonal `(d, e)` with `e[i]` coupling
/// `i` and `i + 1`; rotations are accumulated into the rows of `zt`.
fn tql(d: &mut [f64], e: &mut [f64], zt: &mut [f64], m: usize) -> Result<()> {
    for l in 0..m {
        let mut iter = 0;
        loop {
            let mut mm = l;
            while mm + 1 < m {
                let dd = d[mm].abs() + d[mm + 1].abs();
                if e[mm].abs() <= f64::EPSILON * dd {
                    break;
                }
                mm += 1;
            }
            if mm == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITERATIONS {
                return Err(numerical!("tridiagonal QL did not converge"));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = math::hypot(g, 1.0);
            g = d[mm] - d[l] + e[l] / (g + if g >= 0.0 { r } else { -r });
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = mm as isize - 1;
            let mut early = false;
            while i >= l as isize {
                let iu = i as usize;
                let f = s * e[iu];
                let b = c * e[iu];
                r = math::hypot(f, g);
                e[iu + 1] = r;
                if r == 0.0 {
                    d[iu + 1] -= p;
                    e[mm] = 0.0;
                    early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[iu + 1] - p;
                r = (d[iu] - g) * s + 2.0 * c * b;
                p = s * r;
                d[iu + 1] = g + p;
                g = c * r - b;
                let (head, tail) = zt.split_at_mut((iu + 1) * m);
                let zi = &mut head[iu * m..];
                let zi1 = &mut tail[..m];
                for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                    let f = *b;
                    *b = s * *a + c * f;
                    *a = c * *a - s * f;
                }
                i -= 1;
            }
            if early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[mm] = 0.0;
        }
    }
    Ok(())
}
