//! Numerical experiments: the finite-temperature convergence sweep of the
//! cumulant expansion, and zero-temperature scaling on the tight-binding
//! chain.

mod fit;
mod oracle_check;
mod scaling;

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::cumulants::{wick_cumulants, CumulantSet};
use crate::error::{invalid, Result};
use crate::expansion::{evaluate_expansion, negativity_coefficients, rational, ExpansionCoefficients, Rational};
use crate::gaussian::{thermal_correlations, BlockViews};
use crate::math;
use crate::model::{
    build_all_connected, build_local, build_tight_binding_chain, build_translation_invariant, make_partition, Ensemble,
    HoppingMatrix, RegionPartition,
};
use crate::negativity::CovariancePipeline;

pub use fit::{fit_line, LinearFit};
pub use oracle_check::{
    case_ensemble, compare_with_generating_function, compare_with_oracle, random_partition, OracleComparison,
};
pub use scaling::{
    scaling_adjacent, scaling_distant, AdjacentReport, AdjacentRow, DistantReport, DistantRow, ScalingConfig,
    VARIANCE_LOG_SLOPE,
};

/// Cumulants carried in every sweep row, in column order.
pub const SWEEP_CUMULANTS: [(usize, usize); 8] = [(2, 0), (1, 1), (0, 2), (4, 0), (3, 1), (2, 2), (1, 3), (0, 4)];

/// Column names of a sweep table.
pub const SWEEP_COLUMNS: [&str; 20] = [
    "seed",
    "T",
    "beta",
    "E_exact",
    "E2_exact",
    "E4_exact",
    "E2_ord2",
    "E2_ord24",
    "E4_ord2",
    "E4_ord24",
    "Elim_ord2",
    "Elim_ord24",
    "K20",
    "K11",
    "K02",
    "K40",
    "K31",
    "K22",
    "K13",
    "K04",
];

/// Random ensemble, sample seeds, regions and temperatures of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub ensemble: Ensemble,
    pub seeds: Vec<u64>,
    pub partition: RegionPartition,
    /// Strictly positive and increasing.
    pub temperatures: Vec<f64>,
    pub chemical_potential: f64,
}

impl SweepConfig {
    /// 100 sites, `A = 20..=29`, `B = 33..=53` (0-based).
    pub fn reference_geometry(ensemble: Ensemble, seeds: Vec<u64>, temperatures: Vec<f64>) -> Result<Self> {
        let cfg = SweepConfig {
            ensemble,
            seeds,
            partition: make_partition(100, 20, 29, 33, 53)?,
            temperatures,
            chemical_potential: 0.0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(invalid!("seed list is empty"));
        }
        if self.temperatures.is_empty() {
            return Err(invalid!("temperature grid is empty"));
        }
        if self.temperatures.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(invalid!("temperatures must be finite and positive"));
        }
        if self.temperatures.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid!("temperatures must be strictly increasing"));
        }
        if !self.chemical_potential.is_finite() {
            return Err(invalid!("chemical potential must be finite"));
        }
        let mut sorted = self.seeds.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid!("seed list has duplicates"));
        }
        if matches!(self.ensemble, Ensemble::Explicit) {
            return Err(invalid!("a sweep needs a generated ensemble"));
        }
        Ok(())
    }
}

/// `points` temperatures spaced evenly in `log T` from `t_min` to `t_max`.
pub fn temperature_grid(t_min: f64, t_max: f64, points: usize) -> Result<Vec<f64>> {
    if !(t_min > 0.0 && t_max > t_min && t_max.is_finite()) {
        return Err(invalid!("need 0 < t_min < t_max, got {t_min}, {t_max}"));
    }
    if points < 2 {
        return Err(invalid!("a grid needs at least two points"));
    }
    let (lo, hi) = (math::ln(t_min), math::ln(t_max));
    let mut grid: Vec<f64> = (0..points)
        .map(|k| math::exp(lo + (hi - lo) * k as f64 / (points - 1) as f64))
        .collect();
    grid[0] = t_min;
    grid[points - 1] = t_max;
    Ok(grid)
}

/// Draws the Hamiltonian of `ensemble` on `n` sites.
pub fn build_hamiltonian(ensemble: &Ensemble, n: usize, seed: u64) -> Result<HoppingMatrix> {
    match *ensemble {
        Ensemble::AllConnected { scale } => build_all_connected(n, seed, scale),
        Ensemble::Local { decay_length, scale } => build_local(n, seed, decay_length, scale),
        Ensemble::TranslationInvariant { range, scale } => build_translation_invariant(n, seed, range, scale),
        Ensemble::TightBinding {
            hopping,
            chemical_potential,
        } => build_tight_binding_chain(n, hopping, chemical_potential),
        Ensemble::Explicit => Err(invalid!("explicit Hamiltonians cannot be drawn from a seed")),
    }
}

/// Exact negativities, expansion partial sums and cumulants at one state.
#[derive(Clone, Debug, PartialEq)]
pub struct PointMetrics {
    pub e_exact: f64,
    pub e2_exact: f64,
    pub e4_exact: f64,
    pub e2_ord2: f64,
    pub e2_ord24: f64,
    pub e4_ord2: f64,
    pub e4_ord24: f64,
    pub elim_ord2: f64,
    pub elim_ord24: f64,
    pub cumulants: CumulantSet,
}

/// Order-2 and order-4 negativity coefficients, computed once per sweep.
#[derive(Clone, Debug)]
pub struct ExpansionTables {
    orders: [ExpansionCoefficients; 2],
}

impl ExpansionTables {
    pub fn new() -> Result<Self> {
        Ok(ExpansionTables {
            orders: [negativity_coefficients(2)?, negativity_coefficients(4)?],
        })
    }

    /// `(order 2, orders 2 + 4)` at replica index `n_e`.
    pub fn partial_sums(&self, n_e: &Rational, cums: &CumulantSet) -> Result<(f64, f64)> {
        let sums = evaluate_expansion(&self.orders, n_e, cums)?;
        let two = sums.through(2).ok_or_else(|| invalid!("order 2 missing"))?;
        let four = sums.through(4).ok_or_else(|| invalid!("order 4 missing"))?;
        Ok((two, four))
    }
}

/// Evaluates every sweep quantity on the restricted correlation matrix
/// `c_ab` of `A ∪ B` (A first, `na` sites).
pub fn point_metrics(c_ab: &crate::linalg::CMat, na: usize, tables: &ExpansionTables) -> Result<PointMetrics> {
    let pipe = CovariancePipeline::from_restricted(c_ab, na)?;
    let e_exact = pipe.log_negativity()?.value;
    let e2_exact = pipe.renyi_negativity(2)?.value;
    let e4_exact = pipe.renyi_negativity(4)?.value;
    let cumulants = wick_cumulants(&BlockViews::from_restricted(c_ab, na)?)?;
    let (e2_ord2, e2_ord24) = tables.partial_sums(&rational(2, 1), &cumulants)?;
    let (e4_ord2, e4_ord24) = tables.partial_sums(&rational(4, 1), &cumulants)?;
    let (elim_ord2, elim_ord24) = tables.partial_sums(&rational(1, 1), &cumulants)?;
    Ok(PointMetrics {
        e_exact,
        e2_exact,
        e4_exact,
        e2_ord2,
        e2_ord24,
        e4_ord2,
        e4_ord24,
        elim_ord2,
        elim_ord24,
        cumulants,
    })
}

/// Thermal state of `h` at inverse temperature `beta` (0 allowed).
pub fn thermal_point(
    h: &HoppingMatrix,
    partition: &RegionPartition,
    beta: f64,
    mu: f64,
    tables: &ExpansionTables,
) -> Result<PointMetrics> {
    let c = thermal_correlations(h, beta, mu)?;
    let c_ab = c.restrict(&partition.sites())?;
    point_metrics(&c_ab, partition.a().len(), tables)
}

/// One `(seed, T)` row; `metrics` holds the failure message when any stage
/// failed.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub seed: u64,
    pub temperature: f64,
    pub beta: f64,
    pub metrics: core::result::Result<PointMetrics, String>,
}

impl SweepRow {
    /// Numeric columns in [`SWEEP_COLUMNS`] order after `seed`; NaN for a
    /// failed row.
    pub fn values(&self) -> [f64; 19] {
        let mut out = [f64::NAN; 19];
        out[0] = self.temperature;
        out[1] = self.beta;
        if let Ok(m) = &self.metrics {
            let head = [
                m.e_exact,
                m.e2_exact,
                m.e4_exact,
                m.e2_ord2,
                m.e2_ord24,
                m.e4_ord2,
                m.e4_ord24,
                m.elim_ord2,
                m.elim_ord24,
            ];
            out[2..11].copy_from_slice(&head);
            for (slot, &(a, b)) in out[11..].iter_mut().zip(SWEEP_CUMULANTS.iter()) {
                *slot = m.cumulants.get(a, b).unwrap_or(f64::NAN);
            }
        }
        out
    }

    pub fn is_ok(&self) -> bool {
        self.metrics.is_ok()
    }
}

/// All rows of one seed, in temperature order. A failed Hamiltonian draw
/// flags every row of the seed.
pub fn sweep_seed(cfg: &SweepConfig, seed: u64, tables: &ExpansionTables) -> Vec<SweepRow> {
    let h = build_hamiltonian(&cfg.ensemble, cfg.partition.n(), seed);
    cfg.temperatures
        .iter()
        .map(|&t| {
            let beta = 1.0 / t;
            let metrics = match &h {
                Ok(h) => {
                    thermal_point(h, &cfg.partition, beta, cfg.chemical_potential, tables).map_err(|e| e.to_string())
                }
                Err(e) => Err(e.to_string()),
            };
            SweepRow {
                seed,
                temperature: t,
                beta,
                metrics,
            }
        })
        .collect()
}

/// Every `(seed, T)` row, ordered by seed then temperature.
pub fn convergence_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let tables = ExpansionTables::new()?;
    let mut seeds = cfg.seeds.clone();
    seeds.sort_unstable();
    Ok(seeds.iter().flat_map(|&s| sweep_seed(cfg, s, &tables)).collect())
}

/// Seed-averaged absolute truncation errors at one temperature.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorSummary {
    pub temperature: f64,
    pub samples: usize,
    pub e2_ord2: f64,
    pub e2_ord24: f64,
    pub e2_rel_ord24: f64,
    pub elim_ord24: f64,
    pub elim_rel_ord24: f64,
}

/// Averages `|expansion - exact|` (and its ratio to `|exact|`) over the
/// successful rows of each temperature.
pub fn summarize_errors(rows: &[SweepRow]) -> Vec<ErrorSummary> {
    let mut temps: Vec<f64> = rows.iter().map(|r| r.temperature).collect();
    temps.sort_by(|a, b| a.total_cmp(b));
    temps.dedup();
    temps
        .into_iter()
        .map(|t| {
            let ok: Vec<&PointMetrics> = rows
                .iter()
                .filter(|r| r.temperature == t)
                .filter_map(|r| r.metrics.as_ref().ok())
                .collect();
            let k = ok.len().max(1) as f64;
            let mean = |f: &dyn Fn(&PointMetrics) -> f64| ok.iter().map(|m| f(m)).sum::<f64>() / k;
            ErrorSummary {
                temperature: t,
                samples: ok.len(),
                e2_ord2: mean(&|m| (m.e2_ord2 - m.e2_exact).abs()),
                e2_ord24: mean(&|m| (m.e2_ord24 - m.e2_exact).abs()),
                e2_rel_ord24: mean(&|m| (m.e2_ord24 - m.e2_exact).abs() / m.e2_exact.abs()),
                elim_ord24: mean(&|m| (m.elim_ord24 - m.e_exact).abs()),
                elim_rel_ord24: mean(&|m| (m.elim_ord24 - m.e_exact).abs() / m.e_exact.abs()),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg(ensemble: Ensemble) -> SweepConfig {
        SweepConfig {
            ensemble,
            seeds: alloc::vec![3, 1],
            partition: make_partition(16, 2, 5, 7, 11).unwrap(),
            temperatures: alloc::vec![0.5, 2.0],
            chemical_potential: 0.0,
        }
    }

    #[test]
    fn grid_endpoints_and_spacing() {
        let g = temperature_grid(0.1, 10.0, 5).unwrap();
        assert_eq!(g[0], 0.1);
        assert_eq!(g[4], 10.0);
        assert!((g[2] - 1.0).abs() < 1e-14);
        assert!(g.windows(2).all(|w| (w[1] / w[0] - math::sqrt(10.0)).abs() < 1e-12));
        assert!(temperature_grid(0.0, 1.0, 3).is_err());
        assert!(temperature_grid(1.0, 1.0, 3).is_err());
        assert!(temperature_grid(0.1, 1.0, 1).is_err());
    }

    #[test]
    fn config_validation() {
        let mut cfg = small_cfg(Ensemble::AllConnected { scale: 1.0 });
        assert!(cfg.validate().is_ok());
        cfg.temperatures = alloc::vec![2.0, 0.5];
        assert!(cfg.validate().is_err());
        cfg.temperatures = alloc::vec![0.5];
        cfg.seeds = alloc::vec![2, 2];
        assert!(cfg.validate().is_err());
        cfg.seeds.clear();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn rows_are_ordered_by_seed_then_temperature() {
        let rows = convergence_sweep(&small_cfg(Ensemble::Local {
            decay_length: 2.0,
            scale: 1.0,
        }))
        .unwrap();
        let keys: Vec<(u64, f64)> = rows.iter().map(|r| (r.seed, r.temperature)).collect();
        assert_eq!(keys, [(1, 0.5), (1, 2.0), (3, 0.5), (3, 2.0)]);
        assert!(rows
            .iter()
            .all(|r| r.is_ok() && r.values().iter().all(|v| v.is_finite())));
    }

    #[test]
    fn infinite_temperature_point_is_zero() {
        let cfg = small_cfg(Ensemble::TranslationInvariant { range: 3, scale: 1.0 });
        let h = build_hamiltonian(&cfg.ensemble, 16, 4).unwrap();
        let m = thermal_point(&h, &cfg.partition, 0.0, 0.0, &ExpansionTables::new().unwrap()).unwrap();
        assert!(m.e_exact.abs() < 1e-12);
        assert!(m.elim_ord2.abs() < 1e-12 && m.elim_ord24.abs() < 1e-12);
        assert!(m.cumulants.get(1, 1).unwrap().abs() < 1e-14);
    }

    #[test]
    fn replica_limit_order_two_is_cross_correlator() {
        let cfg = small_cfg(Ensemble::AllConnected { scale: 1.0 });
        let h = build_hamiltonian(&cfg.ensemble, 16, 8).unwrap();
        let m = thermal_point(&h, &cfg.partition, 1.0, 0.0, &ExpansionTables::new().unwrap()).unwrap();
        let want = -core::f64::consts::PI * core::f64::consts::PI / 2.0 * m.cumulants.get(1, 1).unwrap();
        assert!((m.elim_ord2 - want).abs() < 1e-13);
    }

    #[test]
    fn failed_draws_flag_rows() {
        let mut cfg = small_cfg(Ensemble::TranslationInvariant { range: 40, scale: 1.0 });
        cfg.seeds = alloc::vec![1];
        let rows = convergence_sweep(&cfg).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| !r.is_ok() && r.values()[2].is_nan()));
    }
}
