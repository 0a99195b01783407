//! Parallel drivers around the core experiments and their tabular output.

use chargeneg_core::harness::{
    compare_with_oracle, scaling_adjacent, scaling_distant, sweep_seed, AdjacentReport, DistantReport, ExpansionTables,
    LinearFit, SweepConfig, SweepRow, SWEEP_COLUMNS,
};
use rayon::prelude::*;
use serde_json::json;

use crate::error::CliResult;
use crate::table::{Cell, Table};

/// Seeds run in parallel; rows come back ordered by `(seed, T)`.
pub fn run_sweep(cfg: &SweepConfig) -> CliResult<Vec<SweepRow>> {
    cfg.validate()?;
    let tables = ExpansionTables::new()?;
    let mut seeds = cfg.seeds.clone();
    seeds.sort_unstable();
    let per_seed: Vec<Vec<SweepRow>> = seeds.par_iter().map(|&s| sweep_seed(cfg, s, &tables)).collect();
    Ok(per_seed.into_iter().flatten().collect())
}

/// The specified sweep columns followed by `status`.
pub fn sweep_table(rows: &[SweepRow]) -> CliResult<Table> {
    let mut table = Table::new(SWEEP_COLUMNS.iter().copied().chain(["status"]));
    for r in rows {
        let mut cells = vec![Cell::from(r.seed)];
        cells.extend(r.values().iter().map(|&v| Cell::Float(v)));
        cells.push(match &r.metrics {
            Ok(_) => "ok".into(),
            Err(e) => e.clone().into(),
        });
        table.push(cells)?;
    }
    Ok(table)
}

fn fit_json(f: &LinearFit) -> serde_json::Value {
    json!({ "slope": f.slope, "intercept": f.intercept, "rms_residual": f.rms_residual })
}

pub fn adjacent_table(rep: &AdjacentReport) -> CliResult<Table> {
    let mut table = Table::new(["l", "QA2", "QB2", "QAQB", "Elim_ord2"]);
    for r in &rep.rows {
        table.push(vec![
            r.l.into(),
            r.qa2.into(),
            r.qb2.into(),
            r.qab.into(),
            r.elim2.into(),
        ])?;
    }
    Ok(table)
}

pub fn adjacent_summary(rep: &AdjacentReport) -> serde_json::Value {
    json!({
        "variance_fit": fit_json(&rep.variance_fit),
        "negativity_fit": fit_json(&rep.negativity_fit),
        "cutoff": rep.cutoff,
        "doubling_increments": rep.doubling_increments,
    })
}

pub fn distant_table(rep: &DistantReport) -> CliResult<Table> {
    let mut table = Table::new(["d", "center_distance", "QAQB", "Elim_ord2", "Elim_ord2_midpoint"]);
    for r in &rep.rows {
        table.push(vec![
            r.d.into(),
            r.center_distance.into(),
            r.qab.into(),
            r.elim2.into(),
            r.elim2_midpoint.into(),
        ])?;
    }
    Ok(table)
}

pub fn distant_summary(rep: &DistantReport) -> serde_json::Value {
    json!({
        "gap_fit": fit_json(&rep.gap_fit),
        "gap_prefactor": rep.gap_prefactor,
        "center_fit": fit_json(&rep.center_fit),
        "center_prefactor": rep.center_prefactor,
        "excluded": rep.excluded,
        "cross_always_negative": rep.cross_always_negative,
    })
}

pub fn run_adjacent(cfg: &chargeneg_core::harness::ScalingConfig) -> CliResult<AdjacentReport> {
    Ok(scaling_adjacent(cfg)?)
}

pub fn run_distant(cfg: &chargeneg_core::harness::ScalingConfig) -> CliResult<DistantReport> {
    Ok(scaling_distant(cfg)?)
}

/// Outcome of an oracle comparison run.
#[derive(Clone, Debug)]
pub struct OracleRun {
    pub table: Table,
    /// Seeds whose deviation exceeded the tolerance or that failed outright.
    pub failures: Vec<(u64, String)>,
}

/// Seeds `first..first + count` on `modes` modes, cycling through `betas`.
pub fn run_oracle_check(modes: usize, first: u64, count: u64, betas: &[f64], tolerance: f64) -> CliResult<OracleRun> {
    if betas.is_empty() {
        return Err(crate::CliError::Config("oracle beta list is empty".into()));
    }
    let cases: Vec<(u64, f64)> = (0..count)
        .map(|k| (first.wrapping_add(k), betas[(k % betas.len() as u64) as usize]))
        .collect();
    let results: Vec<_> = cases
        .par_iter()
        .map(|&(seed, beta)| (seed, beta, compare_with_oracle(modes, seed, beta)))
        .collect();
    let mut table = Table::new([
        "seed",
        "n",
        "beta",
        "E_gaussian",
        "E_oracle",
        "E2_gaussian",
        "E2_oracle",
        "E4_gaussian",
        "E4_oracle",
        "cumulant_deviation",
        "trace_defect",
        "max_deviation",
        "status",
    ]);
    let mut failures = Vec::new();
    for (seed, beta, res) in results {
        match res {
            Ok(c) => {
                let worst = c.max_deviation();
                let ok = worst < tolerance && c.trace_defect < 1e-12;
                if !ok {
                    failures.push((seed, format!("deviation {worst:e}")));
                }
                table.push(vec![
                    seed.into(),
                    modes.into(),
                    beta.into(),
                    c.e.0.into(),
                    c.e.1.into(),
                    c.e2.0.into(),
                    c.e2.1.into(),
                    c.e4.0.into(),
                    c.e4.1.into(),
                    c.cumulant_deviation.into(),
                    c.trace_defect.into(),
                    worst.into(),
                    if ok { "ok" } else { "mismatch" }.into(),
                ])?;
            }
            Err(e)
                if matches!(
                    e,
                    chargeneg_core::Error::ResourceLimit(_) | chargeneg_core::Error::InvalidArgument(_)
                ) =>
            {
                return Err(e.into())
            }
            Err(e) => {
                failures.push((seed, e.to_string()));
                let mut row = vec![seed.into(), modes.into(), beta.into()];
                row.extend(std::iter::repeat(Cell::Float(f64::NAN)).take(9));
                row.push(e.to_string().into());
                table.push(row)?;
            }
        }
    }
    Ok(OracleRun { table, failures })
}
