use serde::{Deserialize, Serialize};

use crate::qstate::{real_qubit_state, DensityOperator, Sign};
use crate::{Error, Result, Tolerances};

/// A finite set of states to be cloned `N -> L`, with prior probabilities and
/// optional state-dependent ancillas.
///
/// `ancillas == None` means the ancilla carries no information about the
/// input (all ancilla states identical).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScenarioFile", into = "ScenarioFile")]
pub struct CloningScenario {
    states: Vec<DensityOperator>,
    priors: Vec<f64>,
    ancillas: Option<Vec<DensityOperator>>,
    originals: usize,
    copies: usize,
}

/// On-disk layout of a scenario.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct ScenarioFile {
    states: Vec<DensityOperator>,
    priors: Vec<f64>,
    #[serde(default)]
    ancillas: Option<Vec<DensityOperator>>,
    #[serde(rename = "N")]
    originals: usize,
    #[serde(rename = "L")]
    copies: usize,
}

impl TryFrom<ScenarioFile> for CloningScenario {
    type Error = Error;

    fn try_from(f: ScenarioFile) -> Result<Self> {
        CloningScenario::new(f.states, f.priors, f.ancillas, f.originals, f.copies)
    }
}

impl From<CloningScenario> for ScenarioFile {
    fn from(sc: CloningScenario) -> Self {
        Self {
            states: sc.states,
            priors: sc.priors,
            ancillas: sc.ancillas,
            originals: sc.originals,
            copies: sc.copies,
        }
    }
}

impl CloningScenario {
    pub fn new(
        states: Vec<DensityOperator>,
        priors: Vec<f64>,
        ancillas: Option<Vec<DensityOperator>>,
        originals: usize,
        copies: usize,
    ) -> Result<Self> {
        Self::with_tolerances(states, priors, ancillas, originals, copies, &Tolerances::default())
    }

    pub fn with_tolerances(
        states: Vec<DensityOperator>,
        priors: Vec<f64>,
        ancillas: Option<Vec<DensityOperator>>,
        originals: usize,
        copies: usize,
        tol: &Tolerances,
    ) -> Result<Self> {
        let m = states.len();
        if m < 2 {
            return Err(Error::InvalidScenario(format!("need at least 2 states, got {m}")));
        }
        if originals == 0 || copies <= originals {
            return Err(Error::BadCounts { originals, copies });
        }
        let dim = states[0].dim();
        if let Some(s) = states.iter().find(|s| s.dim() != dim) {
            return Err(Error::DimensionMismatch(dim, s.dim()));
        }
        if priors.len() != m {
            return Err(Error::BadProbabilities(format!(
                "{} priors for {m} states",
                priors.len()
            )));
        }
        if let Some(p) = priors.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
            return Err(Error::BadProbabilities(format!("prior {p} is not positive")));
        }
        let total: f64 = priors.iter().sum();
        if (total - 1.0).abs() > tol.probability_sum {
            return Err(Error::BadProbabilities(format!("priors sum to {total}")));
        }
        if let Some(anc) = &ancillas {
            if anc.len() != m {
                return Err(Error::InvalidScenario(format!(
                    "{} ancilla states for {m} states",
                    anc.len()
                )));
            }
            let adim = anc[0].dim();
            if let Some(a) = anc.iter().find(|a| a.dim() != adim) {
                return Err(Error::DimensionMismatch(adim, a.dim()));
            }
        }
        Ok(Self { states, priors, ancillas, originals, copies })
    }

    /// Two real qubit states with overlap `f`, priors `(1 - p_minus, p_minus)`
    /// and qubit ancillas with overlap `phi` (`phi = 1` means no ancillas).
    /// Index 0 is the `+` state, index 1 the `-` state.
    pub fn pure_pair(f: f64, phi: f64, p_minus: f64, originals: usize, copies: usize) -> Result<Self> {
        let overlap = |name: &str, v: f64| -> Result<f64> {
            // absorb rounding from callers that compute overlaps
            if (-1e-12..=1.0 + 1e-12).contains(&v) {
                Ok(v.clamp(0.0, 1.0))
            } else {
                Err(Error::InvalidScenario(format!("{name} = {v} is outside [0, 1]")))
            }
        };
        let (f, phi) = (overlap("f", f)?, overlap("phi", phi)?);
        let pair = |overlap: f64| -> Result<Vec<DensityOperator>> {
            let alpha = overlap.acos() / 2.0;
            Ok(vec![
                real_qubit_state(alpha, Sign::Plus)?.to_density(),
                real_qubit_state(alpha, Sign::Minus)?.to_density(),
            ])
        };
        let ancillas = if phi < 1.0 { Some(pair(phi)?) } else { None };
        Self::new(pair(f)?, vec![1.0 - p_minus, p_minus], ancillas, originals, copies)
    }

    /// Number of states in the set.
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[DensityOperator] {
        &self.states
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn ancillas(&self) -> Option<&[DensityOperator]> {
        self.ancillas.as_deref()
    }

    /// N.
    pub fn originals(&self) -> usize {
        self.originals
    }

    /// L.
    pub fn copies(&self) -> usize {
        self.copies
    }

    /// M = L - N.
    pub fn extra(&self) -> usize {
        self.copies - self.originals
    }

    /// Dimension of a single system.
    pub fn system_dim(&self) -> usize {
        self.states[0].dim()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_inputs() {
        let s = || CloningScenario::pure_pair(0.5, 1.0, 0.5, 1, 2).unwrap().states().to_vec();
        assert!(matches!(
            CloningScenario::new(s(), vec![0.5, 0.5], None, 2, 2),
            Err(Error::BadCounts { .. })
        ));
        assert!(matches!(
            CloningScenario::new(s(), vec![0.6, 0.5], None, 1, 2),
            Err(Error::BadProbabilities(_))
        ));
        assert!(matches!(
            CloningScenario::new(s(), vec![1.0, 0.0], None, 1, 2),
            Err(Error::BadProbabilities(_))
        ));
        assert!(matches!(
            CloningScenario::new(s()[..1].to_vec(), vec![1.0], None, 1, 2),
            Err(Error::InvalidScenario(_))
        ));
        assert!(CloningScenario::pure_pair(1.2, 1.0, 0.5, 1, 2).is_err());
    }

    #[test]
    fn json_round_trip() {
        let sc = CloningScenario::pure_pair(0.6, 0.9, 0.3, 2, 3).unwrap();
        let text = serde_json::to_string(&sc).unwrap();
        assert!(text.contains("\"N\":2") && text.contains("\"L\":3"));
        let back: CloningScenario = serde_json::from_str(&text).unwrap();
        assert_eq!(back.priors(), sc.priors());
        assert_eq!(back.extra(), 1);
        assert!(back.ancillas().is_some());

        let bad = text.replace("\"L\":3", "\"L\":1");
        assert!(serde_json::from_str::<CloningScenario>(&bad).is_err());
    }

    #[test]
    fn missing_ancillas_field_means_none() {
        let sc = CloningScenario::pure_pair(0.6, 1.0, 0.5, 1, 2).unwrap();
        let mut v: serde_json::Value = serde_json::to_value(&sc).unwrap();
        v.as_object_mut().unwrap().remove("ancillas");
        let back: CloningScenario = serde_json::from_value(v).unwrap();
        assert!(back.ancillas().is_none());
    }
}
