//! Brute-force Fock-space reference for up to 12 modes.
//!
//! Basis states are occupation bitstrings in lexicographic order: mode `k`
//! is bit `N - 1 - k`, so mode 0 is the most significant bit. Operators use
//! Jordan–Wigner ordering by mode index,
//! `|n_0 ... n_{N-1}> = (c_0^dagger)^{n_0} ... (c_{N-1}^dagger)^{n_{N-1}} |0>`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::cumulants::CumulantSet;
use crate::error::{invalid, numerical, Error, Result};
use crate::linalg::{eigh, singular_values, CMat};
use crate::math;
use crate::model::HoppingMatrix;

/// Largest number of modes the oracle accepts.
pub const MAX_MODES: usize = 12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Many-body density matrix on `n_modes` fermionic modes.
#[derive(Clone, Debug)]
pub struct DenseState {
    n_modes: usize,
    rho: CMat,
}

/// Partial time reversal of a [`DenseState`]; generally not Hermitian.
#[derive(Clone, Debug)]
pub struct PartialTrState {
    n_modes: usize,
    matrix: CMat,
}

fn check_modes(n: usize) -> Result<()> {
    if n == 0 {
        return Err(invalid!("need at least one mode"));
    }
    if n > MAX_MODES {
        return Err(Error::ResourceLimit(alloc::format!(
            "{n} modes exceed the oracle cap of {MAX_MODES}"
        )));
    }
    Ok(())
}

#[inline]
fn occupied(s: usize, k: usize, n: usize) -> bool {
    (s >> (n - 1 - k)) & 1 == 1
}

/// Jordan–Wigner sign: parity of occupied modes with index below `k`.
#[inline]
fn sign_below(s: usize, k: usize, n: usize) -> f64 {
    if (s >> (n - k)).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `c_i^dagger c_j |s> = sign |s'>`, or `None` when it annihilates `s`.
fn hop(s: usize, i: usize, j: usize, n: usize) -> Option<(usize, f64)> {
    if !occupied(s, j, n) {
        return None;
    }
    let sign1 = sign_below(s, j, n);
    let s1 = s ^ (1 << (n - 1 - j));
    if occupied(s1, i, n) {
        return None;
    }
    let sign2 = sign_below(s1, i, n);
    Some((s1 | (1 << (n - 1 - i)), sign1 * sign2))
}

impl DenseState {
    /// Validates a density matrix: dimension `2^n_modes`, Hermitian and unit
    /// trace to 1e-12.
    pub fn new(n_modes: usize, rho: CMat) -> Result<Self> {
        check_modes(n_modes)?;
        let dim = 1usize << n_modes;
        if rho.rows() != dim || rho.cols() != dim {
            return Err(invalid!("density matrix must be {dim}x{dim}"));
        }
        if rho.hermiticity_defect() > 1e-12 {
            return Err(invalid!("density matrix is not Hermitian"));
        }
        if (rho.trace() - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
            return Err(invalid!("density matrix trace is {}", rho.trace()));
        }
        Ok(DenseState { n_modes, rho })
    }

    /// `|psi><psi|` for a normalized amplitude vector.
    pub fn from_pure(n_modes: usize, psi: &[Complex64]) -> Result<Self> {
        check_modes(n_modes)?;
        if psi.len() != 1 << n_modes {
            return Err(invalid!("state vector must have length {}", 1usize << n_modes));
        }
        let rho = CMat::from_fn(psi.len(), psi.len(), |i, j| psi[i] * psi[j].conj());
        Self::new(n_modes, rho)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn matrix(&self) -> &CMat {
        &self.rho
    }

    /// `<c_i^dagger c_j>` for all mode pairs.
    pub fn correlation_matrix(&self) -> CMat {
        let n = self.n_modes;
        let mut c = CMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ZERO;
                for s in 0..1usize << n {
                    if let Some((t, sign)) = hop(s, i, j, n) {
                        acc += self.rho[(s, t)] * sign;
                    }
                }
                c[(i, j)] = acc;
            }
        }
        c
    }
}

/// Gibbs state `e^{-beta H} / Z` of the many-body lift of a hopping matrix.
pub fn dense_thermal_state(h: &HoppingMatrix, beta: f64) -> Result<DenseState> {
    let n = h.n();
    check_modes(n)?;
    if beta.is_nan() || beta < 0.0 {
        return Err(invalid!("beta must be non-negative, got {beta}"));
    }
    let dim = 1usize << n;
    if beta == 0.0 {
        return Ok(DenseState {
            n_modes: n,
            rho: CMat::identity(dim).scale(Complex64::new(1.0 / dim as f64, 0.0)),
        });
    }
    let t = h.matrix();
    let mut big = CMat::zeros(dim, dim);
    for s in 0..dim {
        for i in 0..n {
            for j in 0..n {
                let tij = t[(i, j)];
                if tij == ZERO {
                    continue;
                }
                if let Some((s2, sign)) = hop(s, i, j, n) {
                    big[(s2, s)] += tij * sign;
                }
            }
        }
    }
    let eig = eigh(&big)?;
    let e0 = eig.values[0];
    let weights: Vec<f64> = eig.values.iter().map(|&e| math::exp(-beta * (e - e0))).collect();
    let z: f64 = weights.iter().sum();
    // sum_k w_k v_k v_k^dagger, accumulated per group of eigenvectors that
    // share a support (one decoupled block of the many-body matrix).
    let v = &eig.vectors;
    let mut supports: Vec<Vec<usize>> = alloc::vec![Vec::new(); dim];
    for i in 0..dim {
        for (k, supp) in supports.iter_mut().enumerate() {
            if v[(i, k)] != ZERO {
                supp.push(i);
            }
        }
    }
    let mut groups: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (k, supp) in supports.into_iter().enumerate() {
        groups.entry(supp).or_default().push(k);
    }
    let mut rho = CMat::zeros(dim, dim);
    for (supp, ks) in &groups {
        let m = supp.len();
        let mut local = alloc::vec![ZERO; m * m];
        let mut vk = alloc::vec![ZERO; m];
        for &k in ks {
            let p = weights[k] / z;
            if p == 0.0 {
                continue;
            }
            for (x, &i) in vk.iter_mut().zip(supp) {
                *x = v[(i, k)];
            }
            for (a, &va) in vk.iter().enumerate() {
                let left = va * p;
                for (out, vb) in local[a * m..(a + 1) * m].iter_mut().zip(&vk) {
                    *out += left * vb.conj();
                }
            }
        }
        for (a, &i) in supp.iter().enumerate() {
            for (b, &j) in supp.iter().enumerate() {
                rho[(i, j)] += local[a * m + b];
            }
        }
    }
    // Symmetrize away roundoff.
    let rho = (&rho + &rho.adjoint()).scale(Complex64::new(0.5, 0.0));
    Ok(DenseState { n_modes: n, rho })
}

/// Reduced state on `keep` (in that order, becoming modes `0..keep.len()`).
///
/// The modes are first reordered as `keep` followed by the rest in
/// ascending order; moving creation operators past each other costs the
/// parity of inversions among occupied modes. The trailing modes are then
/// traced out, which needs no further signs.
pub fn partial_trace(state: &DenseState, keep: &[usize]) -> Result<DenseState> {
    let n = state.n_modes;
    if keep.is_empty() {
        return Err(invalid!("must keep at least one mode"));
    }
    let mut seen = alloc::vec![false; n];
    for &k in keep {
        if k >= n || seen[k] {
            return Err(invalid!("keep set must be distinct modes below {n}"));
        }
        seen[k] = true;
    }
    let order: Vec<usize> = keep.iter().copied().chain((0..n).filter(|k| !seen[*k])).collect();
    let dim = 1usize << n;
    // New index and sign of every old basis state.
    let mut map = alloc::vec![(0usize, 1.0f64); dim];
    for (s, slot) in map.iter_mut().enumerate() {
        let occ: Vec<usize> = order.iter().copied().filter(|&m| occupied(s, m, n)).collect();
        let mut inversions = 0usize;
        for x in 0..occ.len() {
            for y in x + 1..occ.len() {
                if occ[x] > occ[y] {
                    inversions += 1;
                }
            }
        }
        let mut t = 0usize;
        for (pos, &m) in order.iter().enumerate() {
            if occupied(s, m, n) {
                t |= 1 << (n - 1 - pos);
            }
        }
        *slot = (t, if inversions % 2 == 0 { 1.0 } else { -1.0 });
    }
    let kept = keep.len();
    let tail = n - kept;
    let mut reduced = CMat::zeros(1 << kept, 1 << kept);
    for s in 0..dim {
        let (ts, ss) = map[s];
        for u in 0..dim {
            let (tu, su) = map[u];
            if ts & ((1 << tail) - 1) != tu & ((1 << tail) - 1) {
                continue;
            }
            reduced[(ts >> tail, tu >> tail)] += state.rho[(s, u)] * (ss * su);
        }
    }
    Ok(DenseState {
        n_modes: kept,
        rho: reduced,
    })
}

/// `i^{2 phi}` for the occupation-number phase
/// `phi = t1(t1+2)/2 + u1(u1+2)/2 + t2 u2 + t1 t2 + u1 u2 + (u1+u2)(t1+t2)`.
fn tr_phase(t1: u32, t2: u32, u1: u32, u2: u32) -> Complex64 {
    let twice = t1 * (t1 + 2) + u1 * (u1 + 2) + 2 * (t2 * u2 + t1 * t2 + u1 * u2 + (u1 + u2) * (t1 + t2));
    match twice % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Fermionic partial time reversal on the first `na` modes of a state on
/// `A ∪ B` (A first):
/// `(|n_A n_B><m_A m_B|)^R = (-1)^phi |m_A n_B><n_A m_B|`.
pub fn partial_time_reversal(state: &DenseState, na: usize) -> Result<PartialTrState> {
    let n = state.n_modes;
    if na == 0 || na >= n {
        return Err(invalid!("A must hold between 1 and {} of the {n} modes", n - 1));
    }
    let nb = n - na;
    let dim = 1usize << n;
    let mask_b = (1usize << nb) - 1;
    let mut out = CMat::zeros(dim, dim);
    for row in 0..dim {
        let (na_bits, nb_bits) = (row >> nb, row & mask_b);
        for col in 0..dim {
            let v = state.rho[(row, col)];
            if v == ZERO {
                continue;
            }
            let (ma_bits, mb_bits) = (col >> nb, col & mask_b);
            let phase = tr_phase(
                na_bits.count_ones(),
                nb_bits.count_ones(),
                ma_bits.count_ones(),
                mb_bits.count_ones(),
            );
            out[((ma_bits << nb) | nb_bits, (na_bits << nb) | mb_bits)] += phase * v;
        }
    }
    Ok(PartialTrState {
        n_modes: n,
        matrix: out,
    })
}

impl PartialTrState {
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }
}

/// `log ||rho^R||_1` from the singular values.
pub fn trace_norm_negativity(state: &PartialTrState) -> Result<f64> {
    let s: f64 = singular_values(&state.matrix)?.iter().sum();
    Ok(math::ln(s))
}

/// Rényi negativity from alternating products of `rho^R` and its adjoint:
/// `log Tr (R R^dagger)^{n/2}` for even `n`,
/// `log |Tr (R R^dagger)^{(n-1)/2} R|` for odd `n`.
pub fn renyi_negativity_exact(state: &PartialTrState, n: u32) -> Result<f64> {
    if n < 2 {
        return Err(invalid!("Rényi negativity index must be at least 2, got {n}"));
    }
    let r = &state.matrix;
    let pair = r.matmul(&r.adjoint());
    let dim = pair.rows();
    let mut acc = CMat::identity(dim);
    for _ in 0..n / 2 {
        acc = acc.matmul(&pair);
    }
    let tr = if n % 2 == 0 {
        acc.trace()
    } else {
        acc.trace_of_product(r)
    };
    if !(tr.norm() > 0.0) {
        return Err(numerical!("Rényi negativity trace vanished"));
    }
    Ok(math::ln(if n % 2 == 0 { tr.re } else { tr.norm() }))
}

/// Joint cumulants of `Q_A = sum_{i in a} n_i` and `Q_B` up to total order
/// `max_order`, from the exact charge distribution.
pub fn charge_cumulants_exact(state: &DenseState, a: &[usize], b: &[usize], max_order: usize) -> Result<CumulantSet> {
    if max_order == 0 || max_order > 8 {
        return Err(invalid!("max_order must lie in 1..=8, got {max_order}"));
    }
    let n = state.n_modes;
    if a.iter().chain(b).any(|&k| k >= n) {
        return Err(invalid!("region mode outside 0..{n}"));
    }
    let charges: Vec<(f64, f64, f64)> = (0..1usize << n)
        .map(|s| {
            let qa = a.iter().filter(|&&k| occupied(s, k, n)).count() as f64;
            let qb = b.iter().filter(|&&k| occupied(s, k, n)).count() as f64;
            (qa, qb, state.rho[(s, s)].re)
        })
        .collect();
    let mean_a: f64 = charges.iter().map(|&(qa, _, p)| qa * p).sum();
    let mean_b: f64 = charges.iter().map(|&(_, qb, p)| qb * p).sum();

    // Central moments divided by a! b!, i.e. ordinary power-series
    // coefficients of the moment generating function.
    let size = max_order + 1;
    let mut fact = alloc::vec![1.0; size];
    for k in 1..size {
        fact[k] = fact[k - 1] * k as f64;
    }
    let mut m = alloc::vec![alloc::vec![0.0; size]; size];
    for i in 0..size {
        for j in 0..size - i {
            let raw: f64 = charges
                .iter()
                .map(|&(qa, qb, p)| p * math::powi(qa - mean_a, i as i32) * math::powi(qb - mean_b, j as i32))
                .sum();
            m[i][j] = raw / (fact[i] * fact[j]);
        }
    }
    // log of the series: a k_ab = a m_ab - sum_{(i,j) != (a,b)} i k_ij m_{a-i,b-j}
    // (with the b-derivative form when a = 0).
    let mut k = alloc::vec![alloc::vec![0.0; size]; size];
    for total in 1..size {
        for i in 0..=total {
            let j = total - i;
            let (use_a, deg) = if i > 0 { (true, i) } else { (false, j) };
            let mut acc = deg as f64 * m[i][j];
            for p in 0..=i {
                for q in 0..=j {
                    if (p, q) == (i, j) || (p, q) == (0, 0) {
                        continue;
                    }
                    let weight = if use_a { p } else { q } as f64;
                    acc -= weight * k[p][q] * m[i - p][j - q];
                }
            }
            k[i][j] = acc / deg as f64;
        }
    }
    let mut out = CumulantSet::new();
    for total in 1..size {
        for i in 0..=total {
            let j = total - i;
            out.insert(i, j, k[i][j] * fact[i] * fact[j]);
        }
    }
    out.insert(1, 0, mean_a);
    out.insert(0, 1, mean_b);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::thermal_correlations;
    use crate::model::{build_all_connected, Ensemble};

    fn c64(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn infinite_temperature_state() {
        let h = build_all_connected(3, 1, 1.0).unwrap();
        let s = dense_thermal_state(&h, 0.0).unwrap();
        assert!(s.matrix().max_abs_diff(&CMat::identity(8).scale(c64(0.125))) < 1e-16);
    }

    #[test]
    fn single_mode_state() {
        let h = HoppingMatrix::from_matrix(CMat::from_real(1, 1, &[-1.0]), Ensemble::Explicit, None).unwrap();
        let s = dense_thermal_state(&h, 2.0).unwrap();
        let z = 1.0 + math::exp(2.0);
        assert!((s.matrix()[(0, 0)].re - 1.0 / z).abs() < 1e-14);
        assert!((s.matrix()[(1, 1)].re - math::exp(2.0) / z).abs() < 1e-14);
    }

    #[test]
    fn too_many_modes() {
        let h = build_all_connected(13, 1, 1.0).unwrap();
        assert!(matches!(dense_thermal_state(&h, 1.0), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn occupations_match_gaussian() {
        let h = build_all_connected(6, 21, 1.0).unwrap();
        let s = dense_thermal_state(&h, 1.3).unwrap();
        let c = thermal_correlations(&h, 1.3, 0.0).unwrap();
        assert!(s.correlation_matrix().max_abs_diff(c.matrix()) < 1e-10);
    }

    #[test]
    fn reduced_state_correlations_are_blocks() {
        let h = build_all_connected(6, 5, 1.0).unwrap();
        let s = dense_thermal_state(&h, 0.9).unwrap();
        let c = thermal_correlations(&h, 0.9, 0.0).unwrap();
        let keep = [4, 1, 2];
        let r = partial_trace(&s, &keep).unwrap();
        assert!(r.correlation_matrix().max_abs_diff(&c.restrict(&keep).unwrap()) < 1e-10);
        let all = partial_trace(&s, &[0, 1, 2, 3, 4, 5]).unwrap();
        assert!(all.matrix().max_abs_diff(s.matrix()) < 1e-15);
    }

    #[test]
    fn vacuum_is_unchanged_by_partial_tr() {
        let mut psi = alloc::vec![c64(0.0); 4];
        psi[0] = c64(1.0);
        let s = DenseState::from_pure(2, &psi).unwrap();
        let r = partial_time_reversal(&s, 1).unwrap();
        assert!(r.matrix().max_abs_diff(s.matrix()) < 1e-16);
    }

    #[test]
    fn bell_pair() {
        // (|01> + |10>)/sqrt2
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let psi = [c64(0.0), c64(h), c64(h), c64(0.0)];
        let s = DenseState::from_pure(2, &psi).unwrap();
        assert!(
            s.correlation_matrix()
                .max_abs_diff(&CMat::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]))
                < 1e-15
        );
        let r = partial_time_reversal(&s, 1).unwrap();
        assert!((r.trace() - c64(1.0)).norm() < 1e-15);
        let e = trace_norm_negativity(&r).unwrap();
        assert!((e - core::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn renyi_branches() {
        let h = build_all_connected(4, 8, 1.0).unwrap();
        let s = dense_thermal_state(&h, 1.0).unwrap();
        let r = partial_time_reversal(&s, 2).unwrap();
        assert!((r.trace() - c64(1.0)).norm() < 1e-12);
        let e2 = renyi_negativity_exact(&r, 2).unwrap();
        let direct = r.matrix().matmul(&r.matrix().adjoint()).trace().re;
        assert!((e2 - math::ln(direct)).abs() < 1e-14);
        assert!(renyi_negativity_exact(&r, 3).unwrap().is_finite());
        assert!(renyi_negativity_exact(&r, 1).is_err());
        assert!(trace_norm_negativity(&r).unwrap() >= -1e-10);
    }

    #[test]
    fn product_state_purities() {
        // Decoupled modes: E_2 = log Tr rho_A^2 + log Tr rho_B^2.
        let t = CMat::from_real(2, 2, &[0.4, 0.0, 0.0, -0.7]);
        let h = HoppingMatrix::from_matrix(t, Ensemble::Explicit, None).unwrap();
        let s = dense_thermal_state(&h, 1.5).unwrap();
        let r = partial_time_reversal(&s, 1).unwrap();
        let ra = partial_trace(&s, &[0]).unwrap();
        let rb = partial_trace(&s, &[1]).unwrap();
        let purity = |d: &DenseState| d.matrix().trace_of_product(d.matrix()).re;
        let want = math::ln(purity(&ra)) + math::ln(purity(&rb));
        assert!((renyi_negativity_exact(&r, 2).unwrap() - want).abs() < 1e-13);
        assert!(trace_norm_negativity(&r).unwrap().abs() < 1e-12);
    }

    #[test]
    fn cumulants_of_a_known_distribution() {
        // Two independent modes with occupations p and q: Bernoulli cumulants.
        let (p, q) = (0.3, 0.8);
        let rho = CMat::diagonal(&[
            c64((1.0 - p) * (1.0 - q)),
            c64((1.0 - p) * q),
            c64(p * (1.0 - q)),
            c64(p * q),
        ]);
        let s = DenseState::new(2, rho).unwrap();
        let k = charge_cumulants_exact(&s, &[0], &[1], 4).unwrap();
        assert!((k.get(1, 0).unwrap() - p).abs() < 1e-15);
        assert!((k.get(2, 0).unwrap() - p * (1.0 - p)).abs() < 1e-15);
        let k3 = p * (1.0 - p) * (1.0 - 2.0 * p);
        assert!((k.get(3, 0).unwrap() - k3).abs() < 1e-15);
        let k4 = p * (1.0 - p) * (1.0 - 6.0 * p * (1.0 - p));
        assert!((k.get(4, 0).unwrap() - k4).abs() < 1e-15);
        for (a, b) in [(1, 1), (2, 1), (1, 2), (2, 2), (3, 1), (1, 3)] {
            assert!(k.get(a, b).unwrap().abs() < 1e-15);
        }
        assert!((k.get(0, 2).unwrap() - q * (1.0 - q)).abs() < 1e-15);
    }

    #[test]
    fn cumulants_of_perfectly_correlated_charges() {
        // Q_A = Q_B for (|00> + |11>) mixtures: every joint cumulant equals
        // the single-variable one of the same total order.
        let p = 0.35;
        let rho = CMat::diagonal(&[c64(1.0 - p), c64(0.0), c64(0.0), c64(p)]);
        let s = DenseState::new(2, rho).unwrap();
        let k = charge_cumulants_exact(&s, &[0], &[1], 4).unwrap();
        for total in 2..=4 {
            let single = k.get(total, 0).unwrap();
            for a in 0..=total {
                assert!((k.get(a, total - a).unwrap() - single).abs() < 1e-14);
            }
        }
    }
}
