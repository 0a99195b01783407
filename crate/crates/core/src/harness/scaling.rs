//! Ground-state charge correlations of two intervals on the half-filled
//! open chain, where the Fermi sea is one interval (`chi_F = 1`).

use alloc::vec::Vec;
use core::f64::consts::PI;

use super::fit::{fit_line, LinearFit};
use crate::cumulants::cumulants_order2;
use crate::error::{invalid, Result};
use crate::expansion::{evaluate_expansion, negativity_coefficients, rational, ExpansionCoefficients};
use crate::gaussian::{chain_ground_state_block, BlockViews};
use crate::math;

/// Values below this are dropped from the log-log fit.
const FIT_FLOOR: f64 = 1e-14;

/// Chain and interval geometry. `lengths` is the adjacent ladder
/// (`l1 = l2 = l`); `separations` is the distant ladder at fixed `l1`, `l2`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingConfig {
    pub n: usize,
    pub hopping: f64,
    pub filling: f64,
    pub l1: usize,
    pub l2: usize,
    pub lengths: Vec<usize>,
    pub separations: Vec<usize>,
}

impl ScalingConfig {
    /// Half-filled unit-hopping chain.
    pub fn half_filled(n: usize) -> Self {
        ScalingConfig {
            n,
            hopping: 1.0,
            filling: 0.5,
            l1: 8,
            l2: 8,
            lengths: Vec::new(),
            separations: Vec::new(),
        }
    }

    fn check_common(&self) -> Result<()> {
        if !(self.hopping.is_finite() && self.hopping != 0.0) {
            return Err(invalid!("hopping must be finite and nonzero"));
        }
        if !(0.0..=1.0).contains(&self.filling) {
            return Err(invalid!("filling must lie in [0, 1]"));
        }
        Ok(())
    }

    fn check_adjacent(&self) -> Result<()> {
        self.check_common()?;
        if self.lengths.len() < 2 {
            return Err(invalid!("the adjacent ladder needs at least two lengths"));
        }
        for &l in &self.lengths {
            // One free site of margin on each side at least.
            if l == 0 || 2 * l + 2 > self.n {
                return Err(invalid!("length {l} does not fit twice in a chain of {}", self.n));
            }
        }
        Ok(())
    }

    fn check_distant(&self) -> Result<()> {
        self.check_common()?;
        if self.l1 == 0 || self.l2 == 0 {
            return Err(invalid!("interval lengths must be positive"));
        }
        if self.separations.len() < 2 {
            return Err(invalid!("the distant ladder needs at least two separations"));
        }
        for &d in &self.separations {
            // The midpoint sample also uses d + 1.
            if d == 0 || self.l1 + self.l2 + d + 3 > self.n {
                return Err(invalid!("separation {d} does not fit in a chain of {}", self.n));
            }
        }
        Ok(())
    }
}

fn order_two() -> Result<ExpansionCoefficients> {
    negativity_coefficients(2)
}

/// Order-2 cumulants and the order-2 replica-limit negativity of intervals
/// `A = a0..a0+l1` and `B = b0..b0+l2`.
fn two_intervals(
    cfg: &ScalingConfig,
    coeffs: &ExpansionCoefficients,
    a0: usize,
    l1: usize,
    b0: usize,
    l2: usize,
) -> Result<(f64, f64, f64, f64)> {
    let sites: Vec<usize> = (a0..a0 + l1).chain(b0..b0 + l2).collect();
    let c_ab = chain_ground_state_block(cfg.n, cfg.hopping, cfg.filling, &sites)?;
    let cums = cumulants_order2(&BlockViews::from_restricted(&c_ab, l1)?)?;
    let elim = evaluate_expansion(core::slice::from_ref(coeffs), &rational(1, 1), &cums)?
        .through(2)
        .ok_or_else(|| invalid!("order 2 missing"))?;
    Ok((cums.require(2, 0)?, cums.require(0, 2)?, cums.require(1, 1)?, elim))
}

/// One rung of the adjacent ladder.
#[derive(Clone, Debug, PartialEq)]
pub struct AdjacentRow {
    pub l: usize,
    pub qa2: f64,
    pub qb2: f64,
    pub qab: f64,
    /// Order-2 replica-limit negativity.
    pub elim2: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdjacentReport {
    pub rows: Vec<AdjacentRow>,
    /// `<Q_A^2>_c` against `log l`; the slope should approach `1 / pi^2`.
    pub variance_fit: LinearFit,
    /// Order-2 replica-limit negativity against `log(l1 l2 / (l1 + l2))`;
    /// the slope should approach `chi_F / 4`.
    pub negativity_fit: LinearFit,
    /// Short-distance cutoff `epsilon` implied by the negativity fit.
    pub cutoff: f64,
    /// `(l, <Q_A^2>_c(2l) - <Q_A^2>_c(l))` for every ladder pair related by
    /// doubling.
    pub doubling_increments: Vec<(usize, f64)>,
}

/// Touching intervals of equal length centred in the chain.
pub fn scaling_adjacent(cfg: &ScalingConfig) -> Result<AdjacentReport> {
    cfg.check_adjacent()?;
    let coeffs = order_two()?;
    let mut rows = Vec::with_capacity(cfg.lengths.len());
    for &l in &cfg.lengths {
        let a0 = (cfg.n - 2 * l) / 2;
        let (qa2, qb2, qab, elim2) = two_intervals(cfg, &coeffs, a0, l, a0 + l, l)?;
        rows.push(AdjacentRow {
            l,
            qa2,
            qb2,
            qab,
            elim2,
        });
    }
    let logs: Vec<f64> = rows.iter().map(|r| math::ln(r.l as f64)).collect();
    let variance_fit = fit_line(&logs, &rows.iter().map(|r| r.qa2).collect::<Vec<_>>())?;
    // l l / (l + l) = l / 2
    let reduced: Vec<f64> = rows.iter().map(|r| math::ln(r.l as f64 / 2.0)).collect();
    let negativity_fit = fit_line(&reduced, &rows.iter().map(|r| r.elim2).collect::<Vec<_>>())?;
    let cutoff = math::exp(-negativity_fit.intercept / negativity_fit.slope);
    let doubling_increments = rows
        .iter()
        .filter_map(|r| rows.iter().find(|s| s.l == 2 * r.l).map(|s| (r.l, s.qa2 - r.qa2)))
        .collect();
    Ok(AdjacentReport {
        rows,
        variance_fit,
        negativity_fit,
        cutoff,
        doubling_increments,
    })
}

/// One rung of the distant ladder.
#[derive(Clone, Debug, PartialEq)]
pub struct DistantRow {
    /// Sites from the last site of A to the first site of B (1 = touching).
    pub d: usize,
    /// Distance between the interval centres.
    pub center_distance: f64,
    pub qab: f64,
    pub elim2: f64,
    /// Mean of the negativity at `d` and `d + 1`, which cancels the
    /// even/odd lattice oscillation.
    pub elim2_midpoint: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistantReport {
    pub rows: Vec<DistantRow>,
    /// `log` midpoint negativity against `log(d + 1/2)`.
    pub gap_fit: LinearFit,
    /// `log` midpoint negativity against `log` of the matching centre
    /// distance.
    pub center_fit: LinearFit,
    /// `exp(intercept)` of the two fits, to compare with `chi_F l1 l2 / 4`.
    pub gap_prefactor: f64,
    pub center_prefactor: f64,
    /// Rungs left out of the fit because the value was below 1e-14.
    pub excluded: Vec<usize>,
    pub cross_always_negative: bool,
}

/// Intervals of fixed lengths `l1`, `l2` at growing separation, the pair
/// centred in the chain.
pub fn scaling_distant(cfg: &ScalingConfig) -> Result<DistantReport> {
    cfg.check_distant()?;
    let coeffs = order_two()?;
    let (l1, l2) = (cfg.l1, cfg.l2);
    let half_width = (l1 + l2) as f64 / 2.0 - 1.0;
    let mut rows = Vec::with_capacity(cfg.separations.len());
    let mut cross_always_negative = true;
    for &d in &cfg.separations {
        let mut sample = |gap: usize| -> Result<(f64, f64)> {
            let span = l1 + l2 + gap - 1;
            let a0 = (cfg.n - span) / 2;
            let (_, _, qab, elim) = two_intervals(cfg, &coeffs, a0, l1, a0 + l1 - 1 + gap, l2)?;
            cross_always_negative &= qab < 0.0;
            Ok((qab, elim))
        };
        let (qab, elim2) = sample(d)?;
        let (_, next) = sample(d + 1)?;
        rows.push(DistantRow {
            d,
            center_distance: d as f64 + half_width,
            qab,
            elim2,
            elim2_midpoint: 0.5 * (elim2 + next),
        });
    }
    let mut excluded = Vec::new();
    let (mut gx, mut cx, mut ys) = (Vec::new(), Vec::new(), Vec::new());
    for r in &rows {
        if r.elim2_midpoint < FIT_FLOOR {
            excluded.push(r.d);
            continue;
        }
        gx.push(math::ln(r.d as f64 + 0.5));
        cx.push(math::ln(r.center_distance + 0.5));
        ys.push(math::ln(r.elim2_midpoint));
    }
    let gap_fit = fit_line(&gx, &ys)?;
    let center_fit = fit_line(&cx, &ys)?;
    Ok(DistantReport {
        gap_prefactor: math::exp(gap_fit.intercept),
        center_prefactor: math::exp(center_fit.intercept),
        rows,
        gap_fit,
        center_fit,
        excluded,
        cross_always_negative,
    })
}

/// `1 / pi^2`, the log-variance coefficient of an interval at `chi_F = 1`.
pub const VARIANCE_LOG_SLOPE: f64 = 1.0 / (PI * PI);
