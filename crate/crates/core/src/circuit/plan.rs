use std::f64::consts::FRAC_PI_4;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::gates::{d_gate, merged_angle, t_gate, turned_d_gate, GateSpec};
use crate::{Error, Result};

/// `alpha_k` for `k = 0..len`, with `cos 2 alpha_k = (cos 2 alpha_0)^(k + 1)`.
pub fn alpha_sequence(alpha0: f64, len: usize) -> Result<Vec<f64>> {
    if !(0.0..=FRAC_PI_4).contains(&alpha0) {
        return Err(Error::AngleOutOfRange { value: alpha0, min: 0.0, max: FRAC_PI_4 });
    }
    let mut seq = Vec::with_capacity(len);
    let mut current = alpha0;
    for _ in 0..len {
        seq.push(current);
        current = merged_angle(alpha0, current);
    }
    Ok(seq)
}

/// Gate sequence of the optimal `N -> L` cloner for the pair
/// `|phi_+-(alpha0)>` with ancilla `|phi_+-(theta)>`.
///
/// Register layout: position 0 is the ancilla, `1..=N` hold the originals,
/// `N+1..=L` start blank in `|0>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PlanJson", into = "PlanJson")]
pub struct CircuitPlan {
    num_qubits: usize,
    gates: Vec<GateSpec>,
    alpha0: f64,
    theta: f64,
    originals: usize,
    copies: usize,
    alpha_seq: Vec<f64>,
    theta1: f64,
}

#[derive(Serialize, Deserialize)]
struct PlanJson {
    num_qubits: usize,
    #[serde(rename = "N")]
    originals: usize,
    #[serde(rename = "L")]
    copies: usize,
    alpha0: f64,
    theta: f64,
    alpha_seq: Vec<f64>,
    theta1: f64,
    gates: Vec<GateSpec>,
}

impl From<CircuitPlan> for PlanJson {
    fn from(p: CircuitPlan) -> Self {
        PlanJson {
            num_qubits: p.num_qubits,
            originals: p.originals,
            copies: p.copies,
            alpha0: p.alpha0,
            theta: p.theta,
            alpha_seq: p.alpha_seq,
            theta1: p.theta1,
            gates: p.gates,
        }
    }
}

impl TryFrom<PlanJson> for CircuitPlan {
    type Error = Error;

    /// Rebuilds the plan from its parameters and rejects a gate list that
    /// differs from the rebuilt one.
    fn try_from(j: PlanJson) -> Result<Self> {
        let plan = build_circuit(j.originals, j.copies, j.alpha0, j.theta)?;
        let same = j.num_qubits == plan.num_qubits
            && j.gates.len() == plan.gates.len()
            && j.gates.iter().zip(&plan.gates).all(|(a, b)| {
                a.name() == b.name()
                    && a.targets() == b.targets()
                    && a.kind().params().iter().zip(b.kind().params()).all(|(x, y)| (x - y).abs() <= 1e-12)
            });
        if !same {
            return Err(Error::InvalidScenario("gate list does not match the plan parameters".into()));
        }
        Ok(plan)
    }
}

/// Builds the three-stage circuit.
///
/// Requires `1 <= N < L`, `alpha0` in `(0, pi/4)`, `theta` in `[0, pi/4]`
/// and `cos 2 theta > (cos 2 alpha0)^(L - N)`; otherwise the ancilla already
/// allows perfect cloning and `PerfectCloningRegime` is returned.
pub fn build_circuit(originals: usize, copies: usize, alpha0: f64, theta: f64) -> Result<CircuitPlan> {
    let (n, l) = (originals, copies);
    if n == 0 || l <= n {
        return Err(Error::BadCounts { originals: n, copies: l });
    }
    if !(alpha0 > 0.0 && alpha0 < FRAC_PI_4) {
        return Err(Error::AngleOutOfRange { value: alpha0, min: 0.0, max: FRAC_PI_4 });
    }
    if !(0.0..=FRAC_PI_4).contains(&theta) {
        return Err(Error::AngleOutOfRange { value: theta, min: 0.0, max: FRAC_PI_4 });
    }
    let alpha = alpha_sequence(alpha0, l)?;
    let ancilla_overlap = (2.0 * theta).cos();
    let threshold = (2.0 * alpha0).cos().powi((l - n) as i32);
    if ancilla_overlap <= threshold {
        return Err(Error::PerfectCloningRegime { ancilla_overlap, threshold });
    }
    let theta1 = merged_angle(alpha[n - 1], theta);

    let mut gates = Vec::with_capacity(n + l);
    for j in (2..=n).rev() {
        gates.push(d_gate(alpha0, alpha[n - j])?.on(&[j - 1, j])?);
    }
    gates.push(turned_d_gate(alpha[n - 1], theta)?.on(&[0, 1])?);
    // theta1 <= alpha_{L-1} holds in exact arithmetic by the admissibility
    // check; absorb rounding when the two coincide
    gates.push(t_gate(theta1.min(alpha[l - 1]), alpha[l - 1])?.on(&[1])?);
    for k in 2..=l {
        gates.push(d_gate(alpha0, alpha[l - k])?.on(&[k - 1, k])?);
    }
    Ok(CircuitPlan {
        num_qubits: l + 1,
        gates,
        alpha0,
        theta,
        originals: n,
        copies: l,
        alpha_seq: alpha,
        theta1,
    })
}

impl CircuitPlan {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[GateSpec] {
        &self.gates
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn originals(&self) -> usize {
        self.originals
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn alpha_seq(&self) -> &[f64] {
        &self.alpha_seq
    }

    pub fn theta1(&self) -> f64 {
        self.theta1
    }

    /// Gate index range of stage 1, 2 or 3 (concentration, ancilla merge with
    /// rotation, distribution).
    pub fn stage_range(&self, stage: usize) -> Range<usize> {
        let s1 = self.originals - 1;
        match stage {
            1 => 0..s1,
            2 => s1..s1 + 2,
            3 => s1 + 2..self.gates.len(),
            _ => 0..0,
        }
    }

    pub fn stage(&self, stage: usize) -> &[GateSpec] {
        &self.gates[self.stage_range(stage)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_8;

    #[test]
    fn alpha_recurrence() {
        let seq = alpha_sequence(0.3, 6).unwrap();
        let c = 0.6f64.cos();
        for (k, a) in seq.iter().enumerate() {
            assert!(((2.0 * a).cos() - c.powi(k as i32 + 1)).abs() < 1e-14);
            assert!((0.0..=FRAC_PI_4).contains(a));
        }
        assert!(alpha_sequence(0.0, 4).unwrap().iter().all(|&a| a == 0.0));
        assert!(alpha_sequence(1.0, 4).is_err());
    }

    #[test]
    fn three_to_five_layout() {
        let p = build_circuit(3, 5, 0.4, 0.1).unwrap();
        assert_eq!(p.num_qubits(), 6);
        assert_eq!(p.gates().len(), 2 + 2 + 4);
        let layout: Vec<(&str, Vec<usize>)> = p.gates().iter().map(|g| (g.name(), g.targets().to_vec())).collect();
        let expected: Vec<(&str, Vec<usize>)> = vec![
            ("D", vec![2, 3]),
            ("D", vec![1, 2]),
            ("D_turned", vec![0, 1]),
            ("T", vec![1]),
            ("D", vec![1, 2]),
            ("D", vec![2, 3]),
            ("D", vec![3, 4]),
            ("D", vec![4, 5]),
        ];
        assert_eq!(layout, expected);
        assert_eq!(p.stage(1).len(), 2);
        assert_eq!(p.stage(3).len(), 4);
        let c2 = |a: f64| (2.0 * a).cos();
        assert!((c2(p.theta1()) - c2(0.1) * c2(p.alpha_seq()[2])).abs() < 1e-14);
    }

    #[test]
    fn single_original_has_no_concentration() {
        let p = build_circuit(1, 2, FRAC_PI_8, 0.0).unwrap();
        assert!(p.stage(1).is_empty());
        assert_eq!(p.gates().len(), 3);
    }

    #[test]
    fn perfect_cloning_regime_is_rejected() {
        // cos 2 theta = (cos 2 alpha0)^M
        let (alpha0, m) = (0.3f64, 2);
        let theta = (2.0 * alpha0).cos().powi(m).acos() / 2.0 + 1e-6;
        assert!(matches!(
            build_circuit(1, 1 + m as usize, alpha0, theta),
            Err(Error::PerfectCloningRegime { .. })
        ));
        assert!(matches!(build_circuit(2, 2, 0.3, 0.0), Err(Error::BadCounts { .. })));
        assert!(build_circuit(1, 2, 0.0, 0.0).is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = build_circuit(2, 4, 0.5, 0.2).unwrap();
        let text = serde_json::to_string(&p).unwrap();
        let back: CircuitPlan = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
        let tampered = text.replacen("\"targets\":[0,1]", "\"targets\":[1,0]", 1);
        assert!(serde_json::from_str::<CircuitPlan>(&tampered).is_err());
    }
}
