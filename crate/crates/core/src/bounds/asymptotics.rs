use serde::{Deserialize, Serialize};

use super::criteria::{exact, Criterion, Exact};
use crate::{Error, Result};

/// One criterion evaluated at one end of the overlap range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticEntry {
    pub f: f64,
    pub value: f64,
    /// Leading-order expansion.
    pub prediction: f64,
    /// `value - prediction`.
    pub residual: f64,
}

/// A criterion near orthogonal (`f = eps`) and near identical (`f = 1 - eps`) states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub criterion: Criterion,
    pub small_overlap: AsymptoticEntry,
    pub near_identical: AsymptoticEntry,
}

/// Leading terms as `(prediction, 1 - prediction)`: criteria close to 1 are
/// compared through their distance from 1.
fn small_overlap_prediction(c: Criterion, eps: f64, n: f64) -> (f64, f64) {
    match c {
        Criterion::MaxF => {
            let gap = eps.powf(2.0 * n) / 4.0;
            (1.0 - gap, gap)
        }
        Criterion::MinA | Criterion::MinR => (eps.powf(n), 1.0 - eps.powf(n)),
        Criterion::MaxP => (1.0 - eps.powf(n), eps.powf(n)),
    }
}

fn near_identical_prediction(c: Criterion, eps: f64, n: f64, l: f64) -> (f64, f64) {
    match c {
        Criterion::MaxF => {
            let gap = (l.sqrt() - n.sqrt()).powi(2) * eps / 2.0;
            (1.0 - gap, gap)
        }
        Criterion::MinA => {
            let v = ((2.0 * l).sqrt() - (2.0 * n).sqrt()) * eps.sqrt();
            (v, 1.0 - v)
        }
        Criterion::MinR => {
            let v = 1.0 - (n / l).sqrt() + ((l * n).sqrt() - n) * eps;
            (v, 1.0 - v)
        }
        Criterion::MaxP => {
            let v = n / l - n * (l - n) * eps / (2.0 * l);
            (v, 1.0 - v)
        }
    }
}

fn entry(c: Criterion, e: &Exact, (prediction, prediction_gap): (f64, f64)) -> AsymptoticEntry {
    let value = e.value(c);
    let residual = match c {
        Criterion::MaxF => prediction_gap - e.max_f_gap,
        Criterion::MaxP => prediction_gap - e.max_p_gap,
        _ => value - prediction,
    };
    AsymptoticEntry { f: e.report.f, value, prediction, residual }
}

/// Evaluates the four criteria at `f = eps` and `f = 1 - eps` against their
/// leading-order expansions. Requires `0 < eps <= 1e-2`.
pub fn asymptotics_check(originals: usize, copies: usize, eps: f64) -> Result<Vec<Table1Row>> {
    if !(eps > 0.0 && eps <= 1e-2) {
        return Err(Error::InvalidScenario(format!("eps = {eps} is outside (0, 1e-2]")));
    }
    let small = exact(eps, originals, copies)?;
    let near = exact(1.0 - eps, originals, copies)?;
    let (n, l) = (originals as f64, copies as f64);
    Ok(Criterion::ALL
        .iter()
        .map(|&c| Table1Row {
            criterion: c,
            small_overlap: entry(c, &small, small_overlap_prediction(c, eps, n)),
            near_identical: entry(c, &near, near_identical_prediction(c, eps, n, l)),
        })
        .collect())
}
