use alloc::vec::Vec;

use crate::error::{invalid, numerical, Result};
use crate::math;

/// Least-squares line `y = slope * x + intercept`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual.
    pub rms_residual: f64,
    pub residuals: Vec<f64>,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.len() != ys.len() {
        return Err(invalid!("fit needs as many x as y values"));
    }
    if xs.len() < 2 {
        return Err(numerical!("fit needs at least two points, got {}", xs.len()));
    }
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if !(sxx > 1e-300 * k) {
        return Err(numerical!("fit matrix is singular (all x equal)"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| y - slope * x - intercept).collect();
    let rms_residual = math::sqrt(residuals.iter().map(|r| r * r).sum::<f64>() / k);
    Ok(LinearFit {
        slope,
        intercept,
        rms_residual,
        residuals,
    })
}
