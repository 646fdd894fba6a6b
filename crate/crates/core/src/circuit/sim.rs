use serde::{Deserialize, Serialize};

use super::gates::GateSpec;
use super::plan::CircuitPlan;
use crate::bounds::{relative_error_from_angles, two_state_bound, CloningScenario};
use crate::qstate::{qubit, PureState, Sign};
use crate::{CVector, Complex64, Error, Result, Tolerances};

/// Dense state of a qubit register; bit `p` of a basis index is position `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// Product of single-qubit states, `factors[p]` on position `p`.
    pub fn product(factors: &[PureState], max_qubits: usize) -> Result<Self> {
        let qubits = factors.len();
        if qubits > max_qubits {
            return Err(Error::RegisterTooLarge { qubits, cap: max_qubits });
        }
        if let Some(f) = factors.iter().find(|f| f.dim() != 2) {
            return Err(Error::DimensionMismatch(f.dim(), 2));
        }
        let mut amps = vec![Complex64::new(1.0, 0.0)];
        // the last position is the most significant bit, so build from the top
        for f in factors.iter().rev() {
            let v = f.vector();
            amps = amps.iter().flat_map(|&a| [a * v[0], a * v[1]]).collect();
        }
        Ok(Self { qubits, amps })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Statevector) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn apply(&mut self, gate: &GateSpec) -> Result<()> {
        gate.check_register(self.qubits)?;
        let u = gate.unitary();
        match *gate.targets() {
            [t] => {
                let bit = 1usize << t;
                for i in (0..self.amps.len()).filter(|i| i & bit == 0) {
                    let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                    self.amps[i] = u[(0, 0)] * a0 + u[(0, 1)] * a1;
                    self.amps[i | bit] = u[(1, 0)] * a0 + u[(1, 1)] * a1;
                }
            }
            [hi, lo] => {
                let (bh, bl) = (1usize << hi, 1usize << lo);
                for i in (0..self.amps.len()).filter(|i| i & (bh | bl) == 0) {
                    let idx = [i, i | bl, i | bh, i | bh | bl];
                    let old = idx.map(|k| self.amps[k]);
                    for (r, &k) in idx.iter().enumerate() {
                        self.amps[k] = (0..4).map(|c| u[(r, c)] * old[c]).sum();
                    }
                }
            }
            _ => unreachable!("gate targets validated on construction"),
        }
        Ok(())
    }

    /// Norm of the component with position `p` in `|1>`.
    pub fn excited_weight(&self, p: usize) -> f64 {
        let bit = 1usize << p;
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Projects position 0 onto `|0>` and returns the rest of the register.
    pub fn drop_first(&self) -> Statevector {
        Statevector {
            qubits: self.qubits - 1,
            amps: self.amps.iter().step_by(2).copied().collect(),
        }
    }

    pub fn to_pure_state(&self) -> Result<PureState> {
        PureState::normalized(CVector::from_vec(self.amps.clone()))
    }
}

/// Plain amplitudes for reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeJson {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<&Statevector> for AmplitudeJson {
    fn from(s: &Statevector) -> Self {
        AmplitudeJson {
            re: s.amps.iter().map(|a| a.re).collect(),
            im: s.amps.iter().map(|a| a.im).collect(),
        }
    }
}

/// Result of running both inputs through a cloning circuit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CloneRunReport {
    #[serde(rename = "N")]
    pub originals: usize,
    #[serde(rename = "L")]
    pub copies: usize,
    pub alpha0: f64,
    pub theta: f64,
    pub p_minus: f64,
    /// Angle between the `+` clone register and `|phi_+(alpha0)>^L`.
    pub delta_plus: f64,
    /// Angle between the `-` clone register and `|phi_-(alpha0)>^L`.
    pub delta_minus: f64,
    /// `Delta^(L) - kappa` predicted for `delta_minus`.
    pub predicted_delta_minus: f64,
    #[serde(rename = "achieved_R")]
    pub achieved_r: f64,
    #[serde(rename = "bound_R")]
    pub bound_r: f64,
    /// Coefficients of the `-` output on the ideal `+` and `-` outputs.
    pub mu_minus: f64,
    pub nu_minus: f64,
    /// Largest weight left on the ancilla over both runs.
    pub ancilla_residual: f64,
    /// Largest deviation of the register norm from 1 after any gate.
    pub norm_drift: f64,
    /// Overlap of the two full-register states before and after the circuit.
    pub input_overlap: f64,
    pub output_overlap: f64,
    /// `R` equals the bound, `delta_plus` vanishes and the ancilla is clean.
    pub saturated: bool,
    /// Clone-register states for the `+` and `-` inputs.
    pub output_states: [AmplitudeJson; 2],
}

/// Runs the circuit on one input sign, returning the final register and the
/// largest norm drift seen.
pub fn run_circuit(plan: &CircuitPlan, sign: Sign, tol: &Tolerances) -> Result<(Statevector, f64)> {
    let mut state = initial_state(plan, sign, tol)?;
    let mut drift = 0.0f64;
    for g in plan.gates() {
        state.apply(g)?;
        drift = drift.max((state.norm() - 1.0).abs());
    }
    Ok((state, drift))
}

/// `|phi_s(theta)>` on the ancilla, `|phi_s(alpha0)>` on each original, `|0>`
/// on each blank.
pub fn initial_state(plan: &CircuitPlan, sign: Sign, tol: &Tolerances) -> Result<Statevector> {
    let mut factors = vec![qubit(plan.theta(), sign)];
    factors.extend((0..plan.originals()).map(|_| qubit(plan.alpha0(), sign)));
    factors.extend((plan.originals()..plan.copies()).map(|_| qubit(0.0, Sign::Plus)));
    Statevector::product(&factors, tol.max_register_qubits)
}

/// Ideal `L`-qubit output `|phi_s(alpha0)>^L`.
pub fn ideal_output(plan: &CircuitPlan, sign: Sign, tol: &Tolerances) -> Result<Statevector> {
    let factors: Vec<_> = (0..plan.copies()).map(|_| qubit(plan.alpha0(), sign)).collect();
    Statevector::product(&factors, tol.max_register_qubits)
}

/// Angle between `actual` and the unit vector `ideal`, as
/// `atan2(|actual - <ideal|actual> ideal|, |<ideal|actual>|)`; exact near 0.
fn deviation_angle(ideal: &Statevector, actual: &Statevector) -> f64 {
    let c = ideal.inner(actual);
    let residual: f64 = ideal
        .amps
        .iter()
        .zip(&actual.amps)
        .map(|(i, a)| (a - c * i).norm_sqr())
        .sum::<f64>()
        .sqrt();
    residual.atan2(c.norm())
}

/// Simulates the plan for equiprobable inputs.
pub fn simulate_and_verify(plan: &CircuitPlan) -> Result<CloneRunReport> {
    simulate_with_priors(plan, 0.5, &Tolerances::default())
}

/// Simulates the plan with prior `p_minus` on the `-` input, `p_minus` in
/// `(0, 1/2]` (the circuit leaves the `+` input exact, which is optimal when
/// it is the more likely one).
pub fn simulate_with_priors(plan: &CircuitPlan, p_minus: f64, tol: &Tolerances) -> Result<CloneRunReport> {
    if !(p_minus > 0.0 && p_minus <= 0.5) {
        return Err(Error::BadProbabilities(format!("p_minus = {p_minus} must lie in (0, 1/2]")));
    }
    if plan.num_qubits() > tol.max_register_qubits {
        return Err(Error::RegisterTooLarge { qubits: plan.num_qubits(), cap: tol.max_register_qubits });
    }
    let (plus, drift_p) = run_circuit(plan, Sign::Plus, tol)?;
    let (minus, drift_m) = run_circuit(plan, Sign::Minus, tol)?;
    let input_overlap = initial_state(plan, Sign::Plus, tol)?.inner(&initial_state(plan, Sign::Minus, tol)?).re;
    let output_overlap = plus.inner(&minus).re;
    let ancilla_residual = plus.excited_weight(0).max(minus.excited_weight(0));

    let out = [plus.drop_first(), minus.drop_first()];
    let ideal = [ideal_output(plan, Sign::Plus, tol)?, ideal_output(plan, Sign::Minus, tol)?];
    let delta_plus = deviation_angle(&ideal[0], &out[0]);
    let delta_minus = deviation_angle(&ideal[1], &out[1]);

    // out_- = mu |ideal_+> + nu |ideal_->, solved through the real Gram system
    let c = ideal[0].inner(&ideal[1]).re;
    let (b0, b1) = (ideal[0].inner(&out[1]).re, ideal[1].inner(&out[1]).re);
    let det = 1.0 - c * c;
    let (mu_minus, nu_minus) = ((b0 - c * b1) / det, (b1 - c * b0) / det);

    let l = plan.copies();
    let delta_l = 2.0 * plan.alpha_seq()[l - 1];
    let predicted_delta_minus = delta_l - 2.0 * plan.theta1();
    let priors = [1.0 - p_minus, p_minus];
    let angles = vec![vec![0.0, delta_l], vec![delta_l, 0.0]];
    let achieved_r = relative_error_from_angles(&priors, &angles, &[delta_plus, delta_minus])?;

    let f = (2.0 * plan.alpha0()).cos();
    let phi = (2.0 * plan.theta()).cos();
    let sc = CloningScenario::pure_pair(f, phi, p_minus, plan.originals(), l)?;
    let bound_r = two_state_bound(&sc)?.value;

    let saturated = (achieved_r - bound_r).abs() <= tol.saturation
        && delta_plus <= tol.clone_residual
        && ancilla_residual <= tol.clone_residual;
    Ok(CloneRunReport {
        originals: plan.originals(),
        copies: l,
        alpha0: plan.alpha0(),
        theta: plan.theta(),
        p_minus,
        delta_plus,
        delta_minus,
        predicted_delta_minus,
        achieved_r,
        bound_r,
        mu_minus,
        nu_minus,
        ancilla_residual,
        norm_drift: drift_p.max(drift_m),
        input_overlap,
        output_overlap,
        saturated,
        output_states: [AmplitudeJson::from(&out[0]), AmplitudeJson::from(&out[1])],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_circuit, rotation_coefficients};
    use std::f64::consts::{FRAC_PI_8, PI};

    #[test]
    fn one_to_two_worked_example() {
        let plan = build_circuit(1, 2, FRAC_PI_8, 0.0).unwrap();
        let r = simulate_and_verify(&plan).unwrap();
        assert!(r.delta_plus <= 1e-10, "{}", r.delta_plus);
        assert!((r.delta_minus - PI / 12.0).abs() < 1e-9, "{}", r.delta_minus);
        assert!((r.achieved_r - 0.29886).abs() < 1e-5, "{}", r.achieved_r);
        assert!((r.achieved_r - r.bound_r).abs() < 1e-10);
        assert!(r.saturated);
    }

    #[test]
    fn coefficients_and_overlaps() {
        let plan = build_circuit(2, 4, 0.35, 0.15).unwrap();
        let r = simulate_and_verify(&plan).unwrap();
        let (mu, nu) = rotation_coefficients(plan.theta1(), plan.alpha_seq()[3]);
        assert!((r.mu_minus - mu).abs() < 1e-10 && (r.nu_minus - nu).abs() < 1e-10);
        assert!((r.input_overlap - r.output_overlap).abs() < 1e-12);
        assert!(r.ancilla_residual < 1e-12);
        assert!(r.norm_drift < 1e-12);
        assert!((r.delta_minus - r.predicted_delta_minus).abs() < 1e-10);
    }

    #[test]
    fn gate_application_matches_kronecker_products() {
        // two-qubit gate on positions (2, 0) of a 3-qubit register
        let g = crate::circuit::d_gate(0.3, 0.5).unwrap().on(&[2, 0]).unwrap();
        let (a, b, c) = (qubit(0.5, Sign::Minus), qubit(0.2, Sign::Plus), qubit(0.3, Sign::Minus));
        let mut s = Statevector::product(&[a.clone(), b.clone(), c.clone()], 20).unwrap();
        s.apply(&g).unwrap();
        // apply U to (c (x) a) locally, then reassemble with b in the middle
        let local = g.unitary() * c.tensor(&a).vector();
        for idx in 0..8usize {
            let (b0, b1, b2) = (idx & 1, (idx >> 1) & 1, idx >> 2);
            let expected = local[2 * b2 + b0] * b.vector()[b1];
            assert!((s.amplitudes()[idx] - expected).norm() < 1e-15);
        }
    }

    #[test]
    fn priors_validation_and_register_cap() {
        let plan = build_circuit(1, 3, 0.3, 0.0).unwrap();
        assert!(simulate_with_priors(&plan, 0.7, &Tolerances::default()).is_err());
        let tiny = Tolerances { max_register_qubits: 3, ..Tolerances::default() };
        assert!(matches!(
            simulate_with_priors(&plan, 0.5, &tiny),
            Err(Error::RegisterTooLarge { .. })
        ));
    }
}
