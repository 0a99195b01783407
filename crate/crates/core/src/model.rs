//! Single-particle Hamiltonians `H = sum_ij t_ij c_i^dagger c_j` and region
//! partitions.
//!
//! Random ensembles draw from a ChaCha20 stream keyed by the seed. For every
//! unordered pair `i < j` (row-major) the draws are a normal amplitude and a
//! uniform phase; diagonal entries take a single real normal. The same seed
//! therefore gives the same underlying draws in the all-connected and local
//! ensembles, the latter being the former damped by `exp(-|i-j| / L)`.
//! Random signs of the amplitude are indistinguishable from a phase shift of
//! pi and are not drawn separately. All boundaries are open.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::linalg::{eigh, CMat, HermitianEigen};
use crate::math;
use crate::rng::NormalSource;

/// Which generator produced a [`HoppingMatrix`], with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum Ensemble {
    AllConnected {
        scale: f64,
    },
    Local {
        decay_length: f64,
        scale: f64,
    },
    TranslationInvariant {
        range: usize,
        scale: f64,
    },
    TightBinding {
        hopping: f64,
        chemical_potential: f64,
    },
    /// Loaded from explicit entries.
    Explicit,
}

impl Ensemble {
    /// Short tag used in file formats.
    pub fn tag(&self) -> &'static str {
        match self {
            Ensemble::AllConnected { .. } => "all-connected",
            Ensemble::Local { .. } => "local",
            Ensemble::TranslationInvariant { .. } => "translation-invariant",
            Ensemble::TightBinding { .. } => "tight-binding",
            Ensemble::Explicit => "explicit",
        }
    }
}

/// Hermitian hopping matrix `t` with the ensemble that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct HoppingMatrix {
    n: usize,
    t: CMat,
    ensemble: Ensemble,
    seed: Option<u64>,
}

impl HoppingMatrix {
    /// Wraps an explicit matrix. It must be exactly Hermitian with a real
    /// diagonal.
    pub fn from_matrix(t: CMat, ensemble: Ensemble, seed: Option<u64>) -> Result<Self> {
        if !t.is_square() || t.rows() == 0 {
            return Err(invalid!("hopping matrix must be square and non-empty"));
        }
        if t.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(invalid!("hopping matrix has non-finite entries"));
        }
        if t.hermiticity_defect() != 0.0 {
            return Err(invalid!("hopping matrix is not exactly Hermitian"));
        }
        Ok(HoppingMatrix {
            n: t.rows(),
            t,
            ensemble,
            seed,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &CMat {
        &self.t
    }

    pub fn ensemble(&self) -> &Ensemble {
        &self.ensemble
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// `t - mu * I`.
    pub fn shifted(&self, mu: f64) -> CMat {
        let mut h = self.t.clone();
        for i in 0..self.n {
            h[(i, i)] -= mu;
        }
        h
    }

    /// Eigen-decomposition of `t - mu * I`, ascending. The tight-binding
    /// chain uses its closed-form standing waves.
    pub fn eigen(&self, mu: f64) -> Result<HermitianEigen> {
        if let Ensemble::TightBinding {
            hopping,
            chemical_potential,
        } = self.ensemble
        {
            return Ok(chain_modes(self.n, hopping, chemical_potential + mu));
        }
        eigh(&self.shifted(mu))
    }
}

/// Standing waves of the open chain, sorted by energy.
fn chain_modes(n: usize, hopping: f64, mu: f64) -> HermitianEigen {
    let norm = math::sqrt(2.0 / (n as f64 + 1.0));
    let energy = |k: usize| -2.0 * hopping * math::cos(PI * k as f64 / (n as f64 + 1.0)) - mu;
    let mut ks: Vec<usize> = (1..=n).collect();
    ks.sort_by(|&a, &b| energy(a).total_cmp(&energy(b)));
    let values = ks.iter().map(|&k| energy(k)).collect();
    let vectors = CMat::from_fn(n, n, |i, col| {
        let k = ks[col] as f64;
        Complex64::new(norm * math::sin(PI * k * (i as f64 + 1.0) / (n as f64 + 1.0)), 0.0)
    });
    HermitianEigen { values, vectors }
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(invalid!("{name} must be positive and finite, got {x}"));
    }
    Ok(())
}

/// Random hopping whose pair amplitude std is `envelope(|i - j|)`.
fn random_hermitian(n: usize, seed: u64, envelope: impl Fn(usize) -> f64) -> CMat {
    let mut src = NormalSource::new(seed);
    let mut t = CMat::zeros(n, n);
    for i in 0..n {
        t[(i, i)] = Complex64::new(src.normal() * envelope(0), 0.0);
        for j in i + 1..n {
            let amp = src.normal() * envelope(j - i);
            let theta = 2.0 * PI * src.uniform();
            let z = Complex64::new(amp * math::cos(theta), amp * math::sin(theta));
            t[(i, j)] = z;
            t[(j, i)] = z.conj();
        }
    }
    t
}

/// Dense random hopping between every pair of sites.
pub fn build_all_connected(n: usize, seed: u64, scale: f64) -> Result<HoppingMatrix> {
    if n == 0 {
        return Err(invalid!("site count must be at least 1"));
    }
    check_positive("scale", scale)?;
    Ok(HoppingMatrix {
        n,
        t: random_hermitian(n, seed, |_| scale),
        ensemble: Ensemble::AllConnected { scale },
        seed: Some(seed),
    })
}

/// Random hopping with amplitude std `scale * exp(-|i-j| / decay_length)`.
pub fn build_local(n: usize, seed: u64, decay_length: f64, scale: f64) -> Result<HoppingMatrix> {
    if n == 0 {
        return Err(invalid!("site count must be at least 1"));
    }
    check_positive("decay_length", decay_length)?;
    check_positive("scale", scale)?;
    Ok(HoppingMatrix {
        n,
        t: random_hermitian(n, seed, |d| scale * math::exp(-(d as f64) / decay_length)),
        ensemble: Ensemble::Local { decay_length, scale },
        seed: Some(seed),
    })
}

/// Banded hopping `t_ij = t_{i-j}` with `range + 1` random couplings.
/// `t_0` is real; `t_{i+d, i} = t_d` and `t_{i, i+d} = conj(t_d)`.
pub fn build_translation_invariant(n: usize, seed: u64, range: usize, scale: f64) -> Result<HoppingMatrix> {
    if n == 0 {
        return Err(invalid!("site count must be at least 1"));
    }
    if range >= n {
        return Err(invalid!("range {range} must be smaller than the site count {n}"));
    }
    check_positive("scale", scale)?;
    let mut src = NormalSource::new(seed);
    let mut couplings = Vec::with_capacity(range + 1);
    couplings.push(Complex64::new(src.normal() * scale, 0.0));
    for _ in 0..range {
        let amp = src.normal() * scale;
        let theta = 2.0 * PI * src.uniform();
        couplings.push(Complex64::new(amp * math::cos(theta), amp * math::sin(theta)));
    }
    let t = CMat::from_fn(n, n, |i, j| {
        if i >= j && i - j <= range {
            couplings[i - j]
        } else if j > i && j - i <= range {
            couplings[j - i].conj()
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    Ok(HoppingMatrix {
        n,
        t,
        ensemble: Ensemble::TranslationInvariant { range, scale },
        seed: Some(seed),
    })
}

/// Open nearest-neighbour chain: `t_{i,i+1} = -hopping`, `t_ii = -chemical_potential`.
pub fn build_tight_binding_chain(n: usize, hopping: f64, chemical_potential: f64) -> Result<HoppingMatrix> {
    if n < 2 {
        return Err(invalid!("a chain needs at least 2 sites, got {n}"));
    }
    if !hopping.is_finite() || !chemical_potential.is_finite() {
        return Err(invalid!("chain parameters must be finite"));
    }
    let t = CMat::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(-chemical_potential, 0.0)
        } else if i.abs_diff(j) == 1 {
            Complex64::new(-hopping, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    Ok(HoppingMatrix {
        n,
        t,
        ensemble: Ensemble::TightBinding {
            hopping,
            chemical_potential,
        },
        seed: None,
    })
}

/// Two disjoint, non-empty site sets `A` and `B` of an `n`-site system; the
/// remaining sites form the traced-out region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionPartition {
    n: usize,
    a: Vec<usize>,
    b: Vec<usize>,
}

impl RegionPartition {
    pub fn new(n: usize, a: Vec<usize>, b: Vec<usize>) -> Result<Self> {
        if a.is_empty() || b.is_empty() {
            return Err(invalid!("regions A and B must be non-empty"));
        }
        let mut seen = alloc::vec![false; n];
        for &i in a.iter().chain(&b) {
            if i >= n {
                return Err(invalid!("site {i} is outside 0..{n}"));
            }
            if seen[i] {
                return Err(invalid!("site {i} appears twice (regions must be disjoint)"));
            }
            seen[i] = true;
        }
        Ok(RegionPartition { n, a, b })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> &[usize] {
        &self.a
    }

    pub fn b(&self) -> &[usize] {
        &self.b
    }

    /// A then B.
    pub fn sites(&self) -> Vec<usize> {
        self.a.iter().chain(&self.b).copied().collect()
    }

    /// The partition with the roles of A and B exchanged.
    pub fn swapped(&self) -> Self {
        RegionPartition {
            n: self.n,
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }
}

/// Contiguous regions `A = a_start..=a_end`, `B = b_start..=b_end` (0-based,
/// inclusive).
pub fn make_partition(n: usize, a_start: usize, a_end: usize, b_start: usize, b_end: usize) -> Result<RegionPartition> {
    if a_start > a_end || b_start > b_end {
        return Err(invalid!(
            "empty range: A = {a_start}..={a_end}, B = {b_start}..={b_end}"
        ));
    }
    if a_end >= n || b_end >= n {
        return Err(invalid!("ranges must lie inside 0..{n}"));
    }
    if a_start <= b_end && b_start <= a_end {
        return Err(invalid!(
            "ranges A = {a_start}..={a_end} and B = {b_start}..={b_end} overlap"
        ));
    }
    RegionPartition::new(n, (a_start..=a_end).collect(), (b_start..=b_end).collect())
}
