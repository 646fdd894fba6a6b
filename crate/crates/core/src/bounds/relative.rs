use super::angles::pair_trig;
use super::CloningScenario;
use crate::qstate::{bures_angle, tensor_power, DensityOperator};
use crate::{Error, Result};

/// Below this `sin Delta^(L)` a pair's ideal outputs count as identical
/// (`1 - F^L <= 1e-12`, where fidelity rounding alone reaches `1e-15`).
pub(crate) const DEGENERATE_SIN: f64 = 1e-6;

/// Pair probabilities `q_jk = p_j p_k / sum_{j<k} p_j p_k`, as an `m x m`
/// symmetric table with zero diagonal.
pub fn pair_weights(priors: &[f64]) -> Vec<Vec<f64>> {
    let m = priors.len();
    let mut total = 0.0;
    for j in 0..m {
        for k in j + 1..m {
            total += priors[j] * priors[k];
        }
    }
    let mut q = vec![vec![0.0; m]; m];
    for j in 0..m {
        for k in 0..m {
            if j != k && total > 0.0 {
                q[j][k] = priors[j] * priors[k] / total;
            }
        }
    }
    q
}

/// Angles `delta'_j` between each actual clone-register state and the ideal
/// `rho_j^{(x)L}`.
pub fn output_deviations(sc: &CloningScenario, outputs: &[DensityOperator]) -> Result<Vec<f64>> {
    if outputs.len() != sc.len() {
        return Err(Error::InvalidScenario(format!(
            "{} outputs for {} states",
            outputs.len(),
            sc.len()
        )));
    }
    sc.states()
        .iter()
        .zip(outputs)
        .map(|(s, out)| {
            let ideal = tensor_power(s, sc.copies())?;
            bures_angle(out, &ideal)
        })
        .collect()
}

/// Relative error of a cloner whose outputs are `outputs[j]` on input `j`.
pub fn relative_error(sc: &CloningScenario, outputs: &[DensityOperator]) -> Result<f64> {
    let deviations = output_deviations(sc, outputs)?;
    let sin_l: Vec<Vec<f64>> = pair_trig(sc)?
        .iter()
        .map(|row| row.iter().map(|t| t.delta_l.sin).collect())
        .collect();
    relative_error_from_sines(sc.priors(), &sin_l, &deviations)
}

/// Relative error from the ideal-output angles `Delta^(L)_jk` and the clone
/// deviations `delta'_j`:
/// `sum_{j<k} q_jk 2 (p_j sin delta'_j + p_k sin delta'_k) / ((p_j + p_k) sin Delta^(L)_jk)`.
pub fn relative_error_from_angles(priors: &[f64], delta_l: &[Vec<f64>], deviations: &[f64]) -> Result<f64> {
    let sin_l: Vec<Vec<f64>> = delta_l.iter().map(|row| row.iter().map(|a| a.sin()).collect()).collect();
    relative_error_from_sines(priors, &sin_l, deviations)
}

fn relative_error_from_sines(priors: &[f64], sin_l: &[Vec<f64>], deviations: &[f64]) -> Result<f64> {
    let m = priors.len();
    if m < 2 || deviations.len() != m || sin_l.len() != m || sin_l.iter().any(|r| r.len() != m) {
        return Err(Error::InvalidScenario(format!(
            "inconsistent sizes: {m} priors, {} deviations, {} angle rows",
            deviations.len(),
            sin_l.len()
        )));
    }
    let q = pair_weights(priors);
    let mut total = 0.0;
    for j in 0..m {
        for k in j + 1..m {
            if sin_l[j][k] <= DEGENERATE_SIN {
                return Err(Error::DegeneratePair(j, k));
            }
            let numerator = priors[j] * deviations[j].sin() + priors[k] * deviations[k].sin();
            total += q[j][k] * 2.0 * numerator / ((priors[j] + priors[k]) * sin_l[j][k]);
        }
    }
    Ok(total)
}
