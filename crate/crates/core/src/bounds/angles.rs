use serde::{Deserialize, Serialize};

use super::CloningScenario;
use crate::qstate::{bures_angle, fidelity, tensor_power_with_cap, DensityOperator};
use crate::{Result, Tolerances};

/// Pairwise angles of a scenario, all `m x m`, symmetric with zero diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleReport {
    /// Bures angle between the `N`-fold inputs.
    #[serde(rename = "delta_N")]
    pub delta_n: Vec<Vec<f64>>,
    /// Bures angle between the ideal `L`-fold outputs.
    #[serde(rename = "delta_L")]
    pub delta_l: Vec<Vec<f64>>,
    /// Angle between the joint inputs (originals together with ancilla).
    pub kappa: Vec<Vec<f64>>,
}

/// Cosine and sine of one angle, kept separately to avoid `arccos` round trips.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Trig {
    pub cos: f64,
    pub sin: f64,
}

impl Trig {
    const ZERO: Trig = Trig { cos: 1.0, sin: 0.0 };

    /// The angle whose squared cosine is `exp(log_fidelity)`.
    fn from_log_fidelity(log_fidelity: f64) -> Self {
        if log_fidelity == f64::NEG_INFINITY {
            return Trig { cos: 0.0, sin: 1.0 };
        }
        let log_fidelity = log_fidelity.min(0.0);
        Trig {
            cos: (0.5 * log_fidelity).exp(),
            sin: (-log_fidelity.exp_m1()).max(0.0).sqrt(),
        }
    }

    pub fn angle(self) -> f64 {
        self.sin.atan2(self.cos)
    }
}

/// Everything the bounds need about one pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct PairTrig {
    pub delta_n: Trig,
    pub delta_l: Trig,
    pub kappa: Trig,
}

impl PairTrig {
    const ZERO: PairTrig = PairTrig { delta_n: Trig::ZERO, delta_l: Trig::ZERO, kappa: Trig::ZERO };

    /// `max(0, Delta^(L) - kappa)`.
    pub fn deviation(&self) -> f64 {
        let (d, k) = (self.delta_l, self.kappa);
        let sin = d.sin * k.cos - d.cos * k.sin;
        let cos = d.cos * k.cos + d.sin * k.sin;
        sin.atan2(cos).max(0.0)
    }

    /// `sin(Delta^(L) - kappa) / sin Delta^(L)`, or `None` when
    /// `kappa >= Delta^(L)` (the pair can be cloned perfectly).
    pub fn ratio(&self) -> Option<f64> {
        let (d, k) = (self.delta_l, self.kappa);
        (k.cos > d.cos && d.sin > 0.0).then(|| (k.cos - k.sin * d.cos / d.sin).max(0.0))
    }
}

fn log_fidelity(a: f64) -> f64 {
    if a <= 0.0 {
        f64::NEG_INFINITY
    } else {
        a.min(1.0).ln()
    }
}

/// Pair geometry through fidelity multiplicativity: `F(rho^{(x)k}, sigma^{(x)k}) = F^k`.
pub(crate) fn pair_trig(sc: &CloningScenario) -> Result<Vec<Vec<PairTrig>>> {
    let m = sc.len();
    let (n, l) = (sc.originals() as f64, sc.copies() as f64);
    let mut out = vec![vec![PairTrig::ZERO; m]; m];
    for j in 0..m {
        for k in j + 1..m {
            let lf = log_fidelity(fidelity(&sc.states()[j], &sc.states()[k])?);
            let lf_anc = match sc.ancillas() {
                Some(anc) => log_fidelity(fidelity(&anc[j], &anc[k])?),
                None => 0.0,
            };
            let joint = if lf == f64::NEG_INFINITY || lf_anc == f64::NEG_INFINITY {
                f64::NEG_INFINITY
            } else {
                n * lf + lf_anc
            };
            let t = PairTrig {
                delta_n: Trig::from_log_fidelity(n * lf),
                delta_l: Trig::from_log_fidelity(l * lf),
                kappa: Trig::from_log_fidelity(joint),
            };
            out[j][k] = t;
            out[k][j] = t;
        }
    }
    Ok(out)
}

fn report_from(trig: &[Vec<PairTrig>]) -> AngleReport {
    let table = |pick: fn(&PairTrig) -> Trig| -> Vec<Vec<f64>> {
        trig.iter().map(|row| row.iter().map(|t| pick(t).angle()).collect()).collect()
    };
    AngleReport {
        delta_n: table(|t| t.delta_n),
        delta_l: table(|t| t.delta_l),
        kappa: table(|t| t.kappa),
    }
}

/// Pairwise angles `Delta^(N)`, `Delta^(L)` and `kappa`, obtained from the
/// single-copy fidelities.
pub fn pair_angles(sc: &CloningScenario) -> Result<AngleReport> {
    Ok(report_from(&pair_trig(sc)?))
}

/// The same angles computed from explicit tensor powers. Exponential in `L`;
/// meant for cross-checking small instances.
pub fn pair_angles_explicit(sc: &CloningScenario, tol: &Tolerances) -> Result<AngleReport> {
    let m = sc.len();
    let powers = |k: usize| -> Result<Vec<_>> {
        sc.states().iter().map(|s| tensor_power_with_cap(s, k, tol.dim_cap)).collect()
    };
    let inputs = powers(sc.originals())?;
    let outputs = powers(sc.copies())?;
    let joint: Vec<_> = match sc.ancillas() {
        Some(anc) => inputs.iter().zip(anc).map(|(s, a)| s.tensor(a)).collect(),
        None => inputs.clone(),
    };
    let angle = |a: &[DensityOperator], j: usize, k: usize| bures_angle(&a[j], &a[k]);
    let mut report = AngleReport {
        delta_n: vec![vec![0.0; m]; m],
        delta_l: vec![vec![0.0; m]; m],
        kappa: vec![vec![0.0; m]; m],
    };
    for j in 0..m {
        for k in j + 1..m {
            let values = [angle(&inputs, j, k)?, angle(&outputs, j, k)?, angle(&joint, j, k)?];
            for (table, v) in [&mut report.delta_n, &mut report.delta_l, &mut report.kappa]
                .into_iter()
                .zip(values)
            {
                table[j][k] = v;
                table[k][j] = v;
            }
        }
    }
    Ok(report)
}
