use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use crate::linalg::{identity_defect, real_matrix, swap_qubits};
use crate::qstate::MatrixJson;
use crate::{CMatrix, Error, Result, Tolerances};

/// What a gate is, with the parameters it was built from.
#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    /// Distinguishability transfer `D(alpha, beta)`.
    Transfer { alpha: f64, beta: f64 },
    /// `D(alpha, beta)` with its two register roles exchanged.
    TurnedTransfer { alpha: f64, beta: f64 },
    /// Planar rotation taking `theta1` to `alpha_target`.
    Rotation { theta1: f64, alpha_target: f64 },
    /// Any other unitary.
    Custom,
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::Transfer { .. } => "D",
            GateKind::TurnedTransfer { .. } => "D_turned",
            GateKind::Rotation { .. } => "T",
            GateKind::Custom => "U",
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            GateKind::Transfer { alpha, beta } | GateKind::TurnedTransfer { alpha, beta } => vec![alpha, beta],
            GateKind::Rotation { theta1, alpha_target } => vec![theta1, alpha_target],
            GateKind::Custom => Vec::new(),
        }
    }
}

/// A unitary on one or two register positions. For two targets `(a, b)` the
/// local basis index is `2 * bit_a + bit_b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GateJson", into = "GateJson")]
pub struct GateSpec {
    kind: GateKind,
    unitary: CMatrix,
    targets: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct GateJson {
    name: String,
    params: Vec<f64>,
    targets: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    unitary: Option<MatrixJson>,
}

impl From<GateSpec> for GateJson {
    fn from(g: GateSpec) -> Self {
        let unitary = matches!(g.kind, GateKind::Custom).then(|| MatrixJson::from_matrix(&g.unitary));
        GateJson { name: g.kind.name().to_string(), params: g.kind.params(), targets: g.targets, unitary }
    }
}

impl TryFrom<GateJson> for GateSpec {
    type Error = Error;

    fn try_from(j: GateJson) -> Result<Self> {
        let two = |p: &[f64]| -> Result<(f64, f64)> {
            match p {
                [a, b] => Ok((*a, *b)),
                _ => Err(Error::InvalidScenario(format!("gate {} needs 2 parameters", j.name))),
            }
        };
        let gate = match j.name.as_str() {
            "D" => {
                let (a, b) = two(&j.params)?;
                d_gate(a, b)?
            }
            "D_turned" => {
                let (a, b) = two(&j.params)?;
                turned_d_gate(a, b)?
            }
            "T" => {
                let (t, a) = two(&j.params)?;
                t_gate(t, a)?
            }
            "U" => {
                let m = j
                    .unitary
                    .as_ref()
                    .ok_or_else(|| Error::InvalidScenario("custom gate without a unitary".into()))?
                    .to_matrix()?;
                GateSpec::custom(m, j.targets.clone())?
            }
            other => return Err(Error::InvalidScenario(format!("unknown gate {other:?}"))),
        };
        gate.on(&j.targets)
    }
}

impl GateSpec {
    /// A gate from an arbitrary unitary; checks `U^dagger U = I` and the
    /// number of targets against the matrix size.
    pub fn custom(unitary: CMatrix, targets: Vec<usize>) -> Result<Self> {
        let tol = Tolerances::default();
        if !unitary.is_square() {
            return Err(Error::NotSquare { rows: unitary.nrows(), cols: unitary.ncols() });
        }
        let defect = identity_defect(&(unitary.adjoint() * &unitary));
        if defect > tol.unitary {
            return Err(Error::NotUnitary(defect));
        }
        let g = GateSpec { kind: GateKind::Custom, unitary, targets: Vec::new() };
        g.on(&targets)
    }

    fn local(kind: GateKind, unitary: CMatrix) -> Self {
        let targets = if unitary.nrows() == 2 { vec![0] } else { vec![0, 1] };
        GateSpec { kind, unitary, targets }
    }

    /// The same gate bound to other register positions.
    pub fn on(mut self, targets: &[usize]) -> Result<Self> {
        let arity = match self.unitary.nrows() {
            2 => 1,
            4 => 2,
            n => return Err(Error::DimensionMismatch(n, 4)),
        };
        let distinct = targets.len() != 2 || targets[0] != targets[1];
        if targets.len() != arity || !distinct {
            return Err(Error::BadTargets { targets: targets.to_vec(), qubits: arity });
        }
        self.targets = targets.to_vec();
        Ok(self)
    }

    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn unitary(&self) -> &CMatrix {
        &self.unitary
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    /// Checks that every target fits a register of `qubits` positions.
    pub fn check_register(&self, qubits: usize) -> Result<()> {
        if self.targets.iter().any(|&t| t >= qubits) {
            return Err(Error::BadTargets { targets: self.targets.clone(), qubits });
        }
        Ok(())
    }
}

fn check_angle(a: f64) -> Result<()> {
    if (0.0..=FRAC_PI_4).contains(&a) {
        Ok(())
    } else {
        Err(Error::AngleOutOfRange { value: a, min: 0.0, max: FRAC_PI_4 })
    }
}

/// The angle `gamma` with `cos 2 gamma = cos 2 alpha cos 2 beta`, obtained from
/// `cos^2 gamma = c_a^2 c_b^2 + s_a^2 s_b^2` and
/// `sin^2 gamma = c_a^2 s_b^2 + s_a^2 c_b^2`, both free of cancellation.
pub fn merged_angle(alpha: f64, beta: f64) -> f64 {
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let cos = (ca * ca * cb * cb + sa * sa * sb * sb).sqrt();
    let sin = (ca * ca * sb * sb + sa * sa * cb * cb).sqrt();
    sin.atan2(cos)
}

fn normalized(v: [f64; 4]) -> Option<[f64; 4]> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    (n > 0.0).then(|| v.map(|x| x / n))
}

/// Distinguishability transfer gate: the real Hermitian involution with
/// `D (|phi_s(alpha)> (x) |phi_s(beta)>) = |phi_s(gamma)> (x) |0>` for both
/// signs `s`, where `|phi_s(a)> = cos a |0> + s sin a |1>`.
///
/// `D` is the reflection through the plane orthogonal to the two difference
/// vectors `u_s - v_s`. Splitting by parity under the sign flip, these are
/// parallel to `(-s_a s_b, 0, 0, c_a c_b + c_g)` and
/// `(0, s_a c_b + s_g, -c_a s_b, 0)`, written so that nothing cancels.
pub fn d_gate(alpha: f64, beta: f64) -> Result<GateSpec> {
    check_angle(alpha)?;
    check_angle(beta)?;
    let gamma = merged_angle(alpha, beta);
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let (sg, cg) = gamma.sin_cos();
    let axes = [
        normalized([-sa * sb, 0.0, 0.0, ca * cb + cg]),
        normalized([0.0, sa * cb + sg, -ca * sb, 0.0]),
    ];
    let mut m = [0.0f64; 16];
    for i in 0..4 {
        m[5 * i] = 1.0;
    }
    for e in axes.iter().flatten() {
        for i in 0..4 {
            for j in 0..4 {
                m[4 * i + j] -= 2.0 * e[i] * e[j];
            }
        }
    }
    Ok(GateSpec::local(GateKind::Transfer { alpha, beta }, real_matrix(4, 4, &m)))
}

/// `D(alpha, beta)` with the roles of its two targets exchanged:
/// `|phi_s(beta)> (x) |phi_s(alpha)> -> |0> (x) |phi_s(gamma)>`.
pub fn turned_d_gate(alpha: f64, beta: f64) -> Result<GateSpec> {
    let d = d_gate(alpha, beta)?;
    Ok(GateSpec::local(GateKind::TurnedTransfer { alpha, beta }, swap_qubits(d.unitary())))
}

/// Real rotation by `alpha_target - theta1`, taking `|phi_+(theta1)>` to
/// `|phi_+(alpha_target)>`.
pub fn t_gate(theta1: f64, alpha_target: f64) -> Result<GateSpec> {
    check_angle(theta1)?;
    check_angle(alpha_target)?;
    if theta1 > alpha_target {
        return Err(Error::AngleOrderViolation { theta1, alpha_target });
    }
    let (s, c) = (alpha_target - theta1).sin_cos();
    Ok(GateSpec::local(
        GateKind::Rotation { theta1, alpha_target },
        real_matrix(2, 2, &[c, -s, s, c]),
    ))
}

/// Coefficients `(mu_-, nu_-)` of `T |phi_-(theta1)>` in the basis
/// `{|phi_+(alpha_target)>, |phi_-(alpha_target)>}`.
pub fn rotation_coefficients(theta1: f64, alpha_target: f64) -> (f64, f64) {
    let (delta, kappa) = (2.0 * alpha_target, 2.0 * theta1);
    ((delta - kappa).sin() / delta.sin(), kappa.sin() / delta.sin())
}
