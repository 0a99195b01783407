//! Joint connected moments `<Q_A^a Q_B^b>_c` of the subsystem charges.
//!
//! The Wick trace formulas work on [`BlockViews`]; the log-determinant
//! generating function
//! `K(l_A, l_B) = log det(I + C_AB (e^{i L} - I))`
//! differentiated by finite differences gives an independent check for any
//! `(a, b)` up to total order 8.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{invalid, numerical, Result};
use crate::gaussian::{BlockViews, CorrelationMatrix};
use crate::linalg::CMat;
use crate::math;
use crate::model::RegionPartition;

/// Imaginary parts of trace evaluations above this are reported as errors.
pub const IMAGINARY_TOLERANCE: f64 = 1e-10;

/// Highest total order accepted by [`generating_function_cumulant`].
pub const MAX_GENERATING_ORDER: usize = 8;

/// Cumulants keyed by `(a, b)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CumulantSet {
    values: BTreeMap<(usize, usize), f64>,
}

impl CumulantSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, a: usize, b: usize, value: f64) {
        self.values.insert((a, b), value);
    }

    pub fn get(&self, a: usize, b: usize) -> Option<f64> {
        self.values.get(&(a, b)).copied()
    }

    /// Like [`get`](Self::get) but a missing entry is an error naming the pair.
    pub fn require(&self, a: usize, b: usize) -> Result<f64> {
        self.get(a, b)
            .ok_or_else(|| invalid!("cumulant <Q_A^{a} Q_B^{b}>_c is missing"))
    }

    /// Largest `a + b` present (0 when empty).
    pub fn max_order(&self) -> usize {
        self.values.keys().map(|(a, b)| a + b).max().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Entries in `(a, b)` order.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.values.iter().map(|(&k, &v)| (k, v))
    }

    /// Entries of total order `m`, `a` descending.
    pub fn order(&self, m: usize) -> Vec<((usize, usize), f64)> {
        (0..=m)
            .rev()
            .filter_map(|a| self.get(a, m - a).map(|v| ((a, m - a), v)))
            .collect()
    }

    pub fn merge(&mut self, other: &CumulantSet) {
        self.values.extend(other.values.iter().map(|(&k, &v)| (k, v)));
    }
}

fn real(z: Complex64, what: &str) -> Result<f64> {
    if z.im.abs() > IMAGINARY_TOLERANCE {
        return Err(numerical!("{what} has imaginary part {:e}", z.im));
    }
    Ok(z.re)
}

/// `<Q_A>` and `<Q_B>`.
pub fn cumulants_order1(b: &BlockViews) -> Result<CumulantSet> {
    let mut out = CumulantSet::new();
    out.insert(1, 0, real(b.c11.trace(), "Tr C11")?);
    out.insert(0, 1, real(b.c22.trace(), "Tr C22")?);
    Ok(out)
}

/// `(2,0)`, `(1,1)`, `(0,2)`.
pub fn cumulants_order2(b: &BlockViews) -> Result<CumulantSet> {
    let mut out = CumulantSet::new();
    let qa = b.c11.trace() - b.c11.trace_of_product(&b.c11);
    let qb = b.c22.trace() - b.c22.trace_of_product(&b.c22);
    let qab = -b.c12.trace_of_product(&b.c21);
    out.insert(2, 0, real(qa, "<Q_A^2>_c")?);
    out.insert(1, 1, real(qab, "<Q_A Q_B>_c")?);
    out.insert(0, 2, real(qb, "<Q_B^2>_c")?);
    Ok(out)
}

/// `Tr C - 7 Tr C^2 + 12 Tr C^3 - 6 Tr C^4`.
fn single_region_fourth(c: &CMat) -> Complex64 {
    let c2 = c.matmul(c);
    c.trace() - c2.trace() * 7.0 + c2.trace_of_product(c) * 12.0 - c2.trace_of_product(&c2) * 6.0
}

/// `-Tr P + 6 Tr(C P) - 6 Tr(C C P)` with `P` the loop through the other
/// region.
fn three_one(c: &CMat, p: &CMat) -> Complex64 {
    let cp = c.matmul(p);
    -p.trace() + cp.trace() * 6.0 - c.trace_of_product(&cp) * 6.0
}

/// `(4,0)`, `(3,1)`, `(2,2)`, `(1,3)`, `(0,4)`.
pub fn cumulants_order4(b: &BlockViews) -> Result<CumulantSet> {
    let p = b.c12.matmul(&b.c21);
    let r = b.c21.matmul(&b.c12);
    let c12_c22 = b.c12.matmul(&b.c22);
    let c11_c12_c22 = b.c11.matmul(&c12_c22);
    let two_two = -p.trace() + b.c11.trace_of_product(&p) * 2.0 + b.c22.trace_of_product(&r) * 2.0
        - c11_c12_c22.trace_of_product(&b.c21) * 4.0
        - p.trace_of_product(&p) * 2.0;

    let mut out = CumulantSet::new();
    out.insert(4, 0, real(single_region_fourth(&b.c11), "<Q_A^4>_c")?);
    out.insert(3, 1, real(three_one(&b.c11, &p), "<Q_A^3 Q_B>_c")?);
    out.insert(2, 2, real(two_two, "<Q_A^2 Q_B^2>_c")?);
    out.insert(1, 3, real(three_one(&b.c22, &r), "<Q_A Q_B^3>_c")?);
    out.insert(0, 4, real(single_region_fourth(&b.c22), "<Q_B^4>_c")?);
    Ok(out)
}

/// Orders 1, 2 and 4 from the trace formulas.
pub fn wick_cumulants(b: &BlockViews) -> Result<CumulantSet> {
    let mut out = cumulants_order1(b)?;
    out.merge(&cumulants_order2(b)?);
    out.merge(&cumulants_order4(b)?);
    Ok(out)
}

/// `log det m` by Gaussian elimination without pivoting, summing principal
/// logarithms of the pivots.
///
/// For `m = I + X` with `|X| < 1` every Schur complement has its numerical
/// range in the right half-plane, so the pivots never cross the branch cut
/// and the sum is the continuous branch of `log det` starting from 0.
fn log_det_unpivoted(mut m: CMat) -> Result<Complex64> {
    let n = m.rows();
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let pivot = m[(k, k)];
        if !(pivot.re > 0.0) {
            return Err(numerical!(
                "generating-function determinant degenerated: pivot {k} = {pivot} (|M|_1 = {:e})",
                m.norm_one()
            ));
        }
        acc += pivot.ln();
        for i in k + 1..n {
            let f = m[(i, k)] / pivot;
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in k + 1..n {
                let u = m[(k, j)];
                m[(i, j)] -= f * u;
            }
        }
    }
    Ok(acc)
}

/// `K(l_A, l_B)` on the restricted matrix.
fn generating_function(c_ab: &CMat, na: usize, la: f64, lb: f64) -> Result<Complex64> {
    let n = c_ab.rows();
    let phase = |l: f64| Complex64::new(math::cos(l) - 1.0, math::sin(l));
    let (pa, pb) = (phase(la), phase(lb));
    let m = CMat::from_fn(n, n, |i, j| {
        let d = if j < na { pa } else { pb };
        let id = if i == j { 1.0 } else { 0.0 };
        Complex64::new(id, 0.0) + c_ab[(i, j)] * d
    });
    log_det_unpivoted(m)
}

/// Central-difference stencil for the `order`-th derivative: nodes
/// `(order/2 - k)` (in units of the step) with weights `(-1)^k C(order, k)`.
fn stencil(order: usize) -> Vec<(f64, f64)> {
    let mut binom = 1.0;
    (0..=order)
        .map(|k| {
            if k > 0 {
                binom = binom * (order + 1 - k) as f64 / k as f64;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            (order as f64 / 2.0 - k as f64, sign * binom)
        })
        .collect()
}

const RICHARDSON_LEVELS: usize = 4;

/// `d^a/dl_A^a d^b/dl_B^b K / i^{a+b}` at the origin.
///
/// Tensor-product central differences at steps `h, h/2, h/4, h/8` with
/// `h = min(1/2, 2/max(a, b))`, combined by Richardson extrapolation in `h^2`.
/// Every node stays within `|l| <= 1 < pi/3`, where `|e^{il} - 1| <= 1`.
pub fn generating_function_cumulant_restricted(c_ab: &CMat, na: usize, a: usize, b: usize) -> Result<f64> {
    if a + b == 0 || a + b > MAX_GENERATING_ORDER {
        return Err(invalid!(
            "total order a + b = {} must lie in 1..={MAX_GENERATING_ORDER}",
            a + b
        ));
    }
    if !c_ab.is_square() || na == 0 || na >= c_ab.rows() {
        return Err(invalid!(
            "cannot split a {}x{} matrix at {na}",
            c_ab.rows(),
            c_ab.cols()
        ));
    }
    let (sa, sb) = (stencil(a), stencil(b));
    let h0 = (2.0 / a.max(b) as f64).min(0.5);
    let mut table: Vec<Vec<Complex64>> = Vec::with_capacity(RICHARDSON_LEVELS);
    for level in 0..RICHARDSON_LEVELS {
        let h = h0 / (1u32 << level) as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for &(xa, wa) in &sa {
            for &(xb, wb) in &sb {
                acc += generating_function(c_ab, na, xa * h, xb * h)? * (wa * wb);
            }
        }
        let mut row = alloc::vec![acc / math::powi(h, (a + b) as i32)];
        let mut factor = 1.0;
        for m in 1..=level {
            factor *= 4.0;
            let prev = table[level - 1][m - 1];
            let cur = row[m - 1];
            row.push(cur + (cur - prev) / (factor - 1.0));
        }
        table.push(row);
    }
    let deriv = table[RICHARDSON_LEVELS - 1][RICHARDSON_LEVELS - 1];
    // Divide by i^{a+b}.
    let value = match (a + b) % 4 {
        0 => deriv,
        1 => deriv * Complex64::new(0.0, -1.0),
        2 => -deriv,
        _ => deriv * Complex64::new(0.0, 1.0),
    };
    Ok(value.re)
}

/// Generating-function cumulant for a full correlation matrix and partition.
pub fn generating_function_cumulant(c: &CorrelationMatrix, p: &RegionPartition, a: usize, b: usize) -> Result<f64> {
    if p.n() != c.n() {
        return Err(invalid!(
            "partition is for {} sites, correlation matrix has {}",
            p.n(),
            c.n()
        ));
    }
    generating_function_cumulant_restricted(&c.restrict(&p.sites())?, p.a().len(), a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{blocks, thermal_correlations};
    use crate::model::{build_all_connected, make_partition};

    fn c64(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn random_blocks(n: usize, seed: u64, beta: f64) -> (CorrelationMatrix, RegionPartition, BlockViews) {
        let h = build_all_connected(n, seed, 1.0).unwrap();
        let c = thermal_correlations(&h, beta, 0.0).unwrap();
        let p = make_partition(n, 0, n / 2 - 1, n / 2 + 1, n - 1).unwrap();
        let b = blocks(&c, &p).unwrap();
        (c, p, b)
    }

    #[test]
    fn uncorrelated_regions_have_no_cross_terms() {
        let c = CorrelationMatrix::from_matrix(CMat::diagonal(&[c64(0.3), c64(0.6), c64(0.1), c64(0.9)])).unwrap();
        let p = make_partition(4, 0, 1, 2, 3).unwrap();
        let all = wick_cumulants(&blocks(&c, &p).unwrap()).unwrap();
        for (a, b) in [(1, 1), (3, 1), (2, 2), (1, 3)] {
            assert_eq!(all.get(a, b).unwrap(), 0.0);
        }
        assert!((all.get(1, 0).unwrap() - 0.9).abs() < 1e-15);
    }

    #[test]
    fn sharp_occupations_have_no_fluctuations() {
        let c = CorrelationMatrix::from_matrix(CMat::diagonal(&[c64(1.0), c64(0.0), c64(1.0), c64(1.0)])).unwrap();
        let p = make_partition(4, 0, 1, 2, 3).unwrap();
        let all = wick_cumulants(&blocks(&c, &p).unwrap()).unwrap();
        for m in [2, 4] {
            for (_, v) in all.order(m) {
                assert_eq!(v, 0.0);
            }
        }
    }

    #[test]
    fn single_mode_fourth_cumulant() {
        let z: f64 = 0.37;
        let c = CorrelationMatrix::from_matrix(CMat::diagonal(&[c64(z), c64(0.0)])).unwrap();
        let p = make_partition(2, 0, 0, 1, 1).unwrap();
        let q = cumulants_order4(&blocks(&c, &p).unwrap()).unwrap();
        let want = z - 7.0 * z * z + 12.0 * z.powi(3) - 6.0 * z.powi(4);
        assert!((q.get(4, 0).unwrap() - want).abs() < 1e-15);
        // Bernoulli fourth cumulant z(1-z)(1-6z(1-z)) is the same polynomial.
        assert!((want - z * (1.0 - z) * (1.0 - 6.0 * z * (1.0 - z))).abs() < 1e-15);
    }

    #[test]
    fn first_cumulants_from_generating_function() {
        let (c, p, b) = random_blocks(8, 3, 1.0);
        let mean = generating_function_cumulant(&c, &p, 1, 0).unwrap();
        assert!((mean - b.c11.trace().re).abs() < 1e-10);
        let cross = generating_function_cumulant(&c, &p, 1, 1).unwrap();
        let wick = cumulants_order2(&b).unwrap().get(1, 1).unwrap();
        assert!((cross - wick).abs() < 1e-8);
    }

    #[test]
    fn order_four_matches_generating_function() {
        for seed in 0..4 {
            let (c, p, b) = random_blocks(8, 40 + seed, 0.7);
            let wick = wick_cumulants(&b).unwrap();
            for ((a, bb), v) in wick.iter() {
                let g = generating_function_cumulant(&c, &p, a, bb).unwrap();
                assert!((g - v).abs() < 1e-7, "({a},{bb}) seed {seed}: {g} vs {v}");
            }
        }
    }

    #[test]
    fn swap_symmetry_of_generating_function() {
        let (c, p, _) = random_blocks(7, 8, 2.0);
        let q = p.swapped();
        let x = generating_function_cumulant(&c, &p, 3, 2).unwrap();
        let y = generating_function_cumulant(&c, &q, 2, 3).unwrap();
        assert!((x - y).abs() < 1e-8);
    }

    #[test]
    fn order_bounds() {
        let (c, p, _) = random_blocks(6, 1, 1.0);
        assert!(generating_function_cumulant(&c, &p, 0, 0).is_err());
        assert!(generating_function_cumulant(&c, &p, 5, 4).is_err());
        assert!(generating_function_cumulant(&c, &p, 4, 4).is_ok());
    }

    #[test]
    fn missing_entries_are_named() {
        let s = CumulantSet::new();
        let err = s.require(2, 2).unwrap_err();
        assert!(alloc::format!("{err}").contains("Q_A^2 Q_B^2"));
    }
}
