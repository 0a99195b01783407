//! Randomized comparisons of the Gaussian formulas against the Fock-space
//! oracle and the generating-function derivatives.

use alloc::vec::Vec;

use super::build_hamiltonian;
use crate::cumulants::{generating_function_cumulant, wick_cumulants};
use crate::error::{invalid, Result};
use crate::gaussian::{blocks, thermal_correlations};
use crate::model::{Ensemble, RegionPartition};
use crate::negativity::CovariancePipeline;
use crate::oracle::{
    charge_cumulants_exact, dense_thermal_state, partial_time_reversal, partial_trace, renyi_negativity_exact,
    trace_norm_negativity,
};
use crate::rng::NormalSource;

/// Keeps the partition stream apart from the Hamiltonian stream of the same
/// seed.
const PARTITION_STREAM: u64 = 0x5851_f42d_4c95_7f2d;

/// Cycles all-connected, local and translation-invariant ensembles by seed.
pub fn case_ensemble(seed: u64) -> Ensemble {
    match seed % 3 {
        0 => Ensemble::AllConnected { scale: 1.0 },
        1 => Ensemble::Local {
            decay_length: 1.5,
            scale: 1.0,
        },
        _ => Ensemble::TranslationInvariant { range: 2, scale: 1.0 },
    }
}

/// Each site joins A, B or the environment with equal odds; redrawn until A
/// and B are both non-empty.
pub fn random_partition(n: usize, seed: u64) -> Result<RegionPartition> {
    if n < 2 {
        return Err(invalid!("a partition needs at least two sites"));
    }
    let mut src = NormalSource::new(seed ^ PARTITION_STREAM);
    loop {
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for site in 0..n {
            match (src.uniform() * 3.0) as usize {
                0 => a.push(site),
                1 => b.push(site),
                _ => {}
            }
        }
        if !a.is_empty() && !b.is_empty() {
            return RegionPartition::new(n, a, b);
        }
    }
}

/// Gaussian and oracle values for one random `(H, beta, partition)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleComparison {
    pub n: usize,
    pub seed: u64,
    pub beta: f64,
    pub partition: RegionPartition,
    /// `(gaussian, oracle)` pairs.
    pub e: (f64, f64),
    pub e2: (f64, f64),
    pub e4: (f64, f64),
    /// Largest `|trace formula - oracle|` over cumulants of order 1, 2, 4.
    pub cumulant_deviation: f64,
    /// `|Tr rho^R - 1|`.
    pub trace_defect: f64,
}

impl OracleComparison {
    /// Largest deviation among the three negativities and the cumulants.
    pub fn max_deviation(&self) -> f64 {
        [self.e, self.e2, self.e4]
            .iter()
            .map(|(g, o)| (g - o).abs())
            .fold(self.cumulant_deviation, f64::max)
    }
}

pub fn compare_with_oracle(n: usize, seed: u64, beta: f64) -> Result<OracleComparison> {
    let h = build_hamiltonian(&case_ensemble(seed), n, seed)?;
    let p = random_partition(n, seed)?;
    let c = thermal_correlations(&h, beta, 0.0)?;
    let pipe = CovariancePipeline::new(&c, &p)?;
    let wick = wick_cumulants(&blocks(&c, &p)?)?;

    let full = dense_thermal_state(&h, beta)?;
    let reduced = partial_trace(&full, &p.sites())?;
    let na = p.a().len();
    let r = partial_time_reversal(&reduced, na)?;
    let local_a: Vec<usize> = (0..na).collect();
    let local_b: Vec<usize> = (na..reduced.n_modes()).collect();
    let exact = charge_cumulants_exact(&reduced, &local_a, &local_b, 4)?;
    let mut cumulant_deviation = 0.0f64;
    for ((a, b), v) in wick.iter() {
        cumulant_deviation = cumulant_deviation.max((v - exact.require(a, b)?).abs());
    }
    Ok(OracleComparison {
        n,
        seed,
        beta,
        e: (pipe.log_negativity()?.value, trace_norm_negativity(&r)?),
        e2: (pipe.renyi_negativity(2)?.value, renyi_negativity_exact(&r, 2)?),
        e4: (pipe.renyi_negativity(4)?.value, renyi_negativity_exact(&r, 4)?),
        cumulant_deviation,
        trace_defect: (r.trace() - crate::Complex64::new(1.0, 0.0)).norm(),
        partition: p,
    })
}

/// Largest `|trace formula - generating function|` over the order-2 and
/// order-4 cumulants of one random case.
pub fn compare_with_generating_function(n: usize, seed: u64, beta: f64) -> Result<f64> {
    let h = build_hamiltonian(&case_ensemble(seed), n, seed)?;
    let p = random_partition(n, seed)?;
    let c = thermal_correlations(&h, beta, 0.0)?;
    let wick = wick_cumulants(&blocks(&c, &p)?)?;
    let mut worst = 0.0f64;
    for ((a, b), v) in wick.iter().filter(|((a, b), _)| a + b >= 2) {
        worst = worst.max((v - generating_function_cumulant(&c, &p, a, b)?).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions_are_reproducible_and_non_empty() {
        for seed in 0..20 {
            let p = random_partition(4, seed).unwrap();
            assert!(!p.a().is_empty() && !p.b().is_empty());
            assert_eq!(p, random_partition(4, seed).unwrap());
        }
        assert!(random_partition(1, 0).is_err());
    }

    #[test]
    fn small_cases_agree() {
        for seed in 0..3 {
            let cmp = compare_with_oracle(5, seed, 1.0).unwrap();
            assert!(cmp.max_deviation() < 1e-8, "{cmp:?}");
            assert!(cmp.trace_defect < 1e-12);
            assert!(compare_with_generating_function(6, seed, 1.0).unwrap() < 1e-7);
        }
    }
}
