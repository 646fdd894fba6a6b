use serde::{Deserialize, Serialize};

use super::angles::pair_trig;
use super::relative::{pair_weights, DEGENERATE_SIN};
use super::CloningScenario;
use crate::optimize::{simplex_min, PairBound, SimplexProgram};
use crate::{Error, Result};

/// Lower bound on the relative error of cloning two states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoStateBound {
    pub value: f64,
    /// Set when `kappa >= Delta^(L)`: the joint input already determines the
    /// ideal output, so perfect cloning is possible and the bound is 0.
    pub perfect_cloning_possible: bool,
}

/// `2 min(p_+, p_-) sin(Delta^(L) - kappa) / sin Delta^(L)`.
pub fn two_state_bound(sc: &CloningScenario) -> Result<TwoStateBound> {
    if sc.len() != 2 {
        return Err(Error::InvalidScenario(format!(
            "two-state bound needs exactly 2 states, got {}",
            sc.len()
        )));
    }
    let t = pair_trig(sc)?[0][1];
    let p = sc.priors();
    match t.ratio() {
        None => Ok(TwoStateBound { value: 0.0, perfect_cloning_possible: true }),
        Some(_) if t.delta_l.sin <= DEGENERATE_SIN => Err(Error::DegeneratePair(0, 1)),
        Some(ratio) => Ok(TwoStateBound {
            value: 2.0 * p[0].min(p[1]) * ratio,
            perfect_cloning_possible: false,
        }),
    }
}

/// Sum of pairwise bounds
/// `sum_{j<k} 2 q_jk min(p_j, p_k) / (p_j + p_k) sin(Delta^(L)_jk - kappa_jk) / sin Delta^(L)_jk`;
/// pairs with `kappa_jk >= Delta^(L)_jk` contribute nothing.
pub fn multi_state_bound(sc: &CloningScenario) -> Result<f64> {
    let trig = pair_trig(sc)?;
    let p = sc.priors();
    let q = pair_weights(p);
    let mut total = 0.0;
    for j in 0..sc.len() {
        for k in j + 1..sc.len() {
            let t = trig[j][k];
            if t.delta_l.sin <= DEGENERATE_SIN {
                return Err(Error::DegeneratePair(j, k));
            }
            if let Some(ratio) = t.ratio() {
                total += 2.0 * q[j][k] * p[j].min(p[k]) / (p[j] + p[k]) * ratio;
            }
        }
    }
    Ok(total)
}

/// The sine-sum program whose minimum, doubled, bounds the relative error:
/// weights `w_j = p_j sum_{k != j} q_jk / ((p_j + p_k) sin Delta^(L)_jk)` and
/// constraints `delta'_j + delta'_k >= Delta^(L)_jk - kappa_jk`.
pub fn simplex_program(sc: &CloningScenario) -> Result<SimplexProgram> {
    let trig = pair_trig(sc)?;
    let p = sc.priors();
    let q = pair_weights(p);
    let m = sc.len();
    let mut weights = vec![0.0; m];
    let mut pairs = Vec::new();
    for j in 0..m {
        for k in j + 1..m {
            let t = trig[j][k];
            if t.delta_l.sin <= DEGENERATE_SIN {
                return Err(Error::DegeneratePair(j, k));
            }
            let share = q[j][k] / ((p[j] + p[k]) * t.delta_l.sin);
            weights[j] += p[j] * share;
            weights[k] += p[k] * share;
            pairs.push(PairBound { j, k, bound: t.deviation() });
        }
    }
    SimplexProgram::new(m, pairs, weights)
}

/// Joint lower bound from the sine-sum program.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplexBound {
    /// Twice the program minimum.
    pub value: f64,
    /// Output deviations `delta'_j` at the minimising vertex.
    pub deviations: Vec<f64>,
}

/// Solves [`simplex_program`] exactly. At least as large as
/// [`multi_state_bound`], because minimising the sum jointly cannot beat
/// minimising each pair separately.
pub fn simplex_bound(sc: &CloningScenario) -> Result<SimplexBound> {
    let min = simplex_min(&simplex_program(sc)?)?;
    Ok(SimplexBound { value: 2.0 * min.value, deviations: min.point })
}
