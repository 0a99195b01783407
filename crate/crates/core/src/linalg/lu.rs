use alloc::vec::Vec;

use num_complex::Complex64;

use super::CMat;
use crate::error::{invalid, numerical, Result};

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Clone, Debug)]
pub struct Lu {
    lu: CMat,
    perm: Vec<usize>,
    swaps: usize,
    norm_one: f64,
}

impl Lu {
    /// Factorizes `a`; an exactly zero pivot is reported as singular.
    pub fn new(a: &CMat) -> Result<Lu> {
        if !a.is_square() {
            return Err(invalid!("LU needs a square matrix"));
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax == 0.0 {
                return Err(numerical!("matrix is singular (zero pivot in column {k})"));
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
                swaps += 1;
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                if f == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        Ok(Lu {
            lu,
            perm,
            swaps,
            norm_one: a.norm_one(),
        })
    }

    pub fn determinant(&self) -> Complex64 {
        let n = self.lu.rows();
        let mut d: Complex64 = (0..n).map(|i| self.lu[(i, i)]).product();
        if self.swaps % 2 == 1 {
            d = -d;
        }
        d
    }

    /// Solves `A X = B` column by column.
    pub fn solve(&self, b: &CMat) -> CMat {
        let n = self.lu.rows();
        assert_eq!(b.rows(), n, "right-hand side has wrong row count");
        let mut x = CMat::zeros(n, b.cols());
        let mut col = alloc::vec![Complex64::new(0.0, 0.0); n];
        for j in 0..b.cols() {
            for i in 0..n {
                col[i] = b[(self.perm[i], j)];
            }
            for i in 0..n {
                let mut s = col[i];
                for k in 0..i {
                    s -= self.lu[(i, k)] * col[k];
                }
                col[i] = s;
            }
            for i in (0..n).rev() {
                let mut s = col[i];
                for k in i + 1..n {
                    s -= self.lu[(i, k)] * col[k];
                }
                col[i] = s / self.lu[(i, i)];
            }
            for i in 0..n {
                x[(i, j)] = col[i];
            }
        }
        x
    }

    pub fn inverse(&self) -> CMat {
        self.solve(&CMat::identity(self.lu.rows()))
    }

    /// 1-norm condition number `|A|_1 |A^-1|_1`, computed from the explicit
    /// inverse (the matrices here are small).
    pub fn condition_number(&self) -> f64 {
        self.norm_one * self.inverse().norm_one()
    }
}
