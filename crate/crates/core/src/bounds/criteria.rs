use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Optimal values of four figures of merit for cloning two equiprobable pure
/// states with overlap `f` and no ancilla information.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriteriaReport {
    /// Best success probability of exact probabilistic cloning.
    #[serde(rename = "max_P")]
    pub max_p: f64,
    /// Best global fidelity.
    #[serde(rename = "max_F")]
    pub max_f: f64,
    /// Smallest relative error.
    #[serde(rename = "min_R")]
    pub min_r: f64,
    /// Smallest absolute error.
    #[serde(rename = "min_A")]
    pub min_a: f64,
    pub f: f64,
    #[serde(rename = "N")]
    pub originals: usize,
    #[serde(rename = "L")]
    pub copies: usize,
}

/// The four criteria, in table order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Criterion {
    #[serde(rename = "max_F")]
    MaxF,
    #[serde(rename = "min_A")]
    MinA,
    #[serde(rename = "min_R")]
    MinR,
    #[serde(rename = "max_P")]
    MaxP,
}

impl Criterion {
    pub const ALL: [Criterion; 4] = [Criterion::MaxF, Criterion::MinA, Criterion::MinR, Criterion::MaxP];

    pub fn name(self) -> &'static str {
        match self {
            Criterion::MaxF => "max_F",
            Criterion::MinA => "min_A",
            Criterion::MinR => "min_R",
            Criterion::MaxP => "max_P",
        }
    }
}

impl std::fmt::Display for Criterion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Criteria values plus `1 - max_P` and `1 - max_F` computed without
/// cancellation, for expansions around 1.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Exact {
    pub report: CriteriaReport,
    pub max_p_gap: f64,
    pub max_f_gap: f64,
}

impl Exact {
    pub fn value(&self, c: Criterion) -> f64 {
        match c {
            Criterion::MaxF => self.report.max_f,
            Criterion::MinA => self.report.min_a,
            Criterion::MinR => self.report.min_r,
            Criterion::MaxP => self.report.max_p,
        }
    }
}

pub(crate) fn exact(f: f64, n: usize, l: usize) -> Result<Exact> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::InvalidScenario(format!("overlap f = {f} is outside [0, 1]")));
    }
    if n == 0 || l <= n {
        return Err(Error::BadCounts { originals: n, copies: l });
    }
    let (nf, lf) = (n as f64, l as f64);
    let pow = |k: usize| f.powi(k as i32);
    // 1 - f^k
    let gap = |k: usize| if f == 0.0 { 1.0 } else { -(k as f64 * f.ln()).exp_m1() };

    let (max_p_gap, max_f_gap, min_r) = if f == 1.0 {
        ((lf - nf) / lf, 0.0, 1.0 - (nf / lf).sqrt())
    } else {
        let p_gap = pow(n) * gap(l - n) / gap(l);
        let f_gap = if f < 0.5 {
            let (a, b) = (pow(2 * n), pow(2 * l));
            let x = a + b - a * b;
            0.5 * (x / (1.0 + ((1.0 - a) * (1.0 - b)).sqrt()) - pow(l + n))
        } else {
            0.5 * (gap(l + n) - (gap(2 * n) * gap(2 * l)).sqrt())
        };
        (p_gap, f_gap, pow(n) - pow(l) * (gap(2 * n) / gap(2 * l)).sqrt())
    };
    let min_a = pow(n) * gap(2 * l).sqrt() - pow(l) * gap(2 * n).sqrt();
    let clamp = |v: f64| v.clamp(0.0, 1.0);
    let (max_p_gap, max_f_gap) = (clamp(max_p_gap), clamp(max_f_gap));
    Ok(Exact {
        report: CriteriaReport {
            max_p: 1.0 - max_p_gap,
            max_f: 1.0 - max_f_gap,
            min_r: clamp(min_r),
            min_a: clamp(min_a),
            f,
            originals: n,
            copies: l,
        },
        max_p_gap,
        max_f_gap,
    })
}

/// All four criteria at overlap `f` for `N -> L` cloning. At `f = 1` the
/// analytic limits are returned.
pub fn criteria(f: f64, originals: usize, copies: usize) -> Result<CriteriaReport> {
    Ok(exact(f, originals, copies)?.report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthogonal_states_clone_perfectly() {
        let r = criteria(0.0, 1, 2).unwrap();
        assert_eq!((r.max_p, r.max_f, r.min_r, r.min_a), (1.0, 1.0, 0.0, 0.0));
    }

    #[test]
    fn worked_values() {
        let r = criteria(0.8, 1, 2).unwrap();
        assert!((r.max_p - 0.2 / 0.36).abs() < 1e-14);
        let fid = 0.5 * (1.0 + 0.512 + ((1.0f64 - 0.64) * (1.0 - 0.4096)).sqrt());
        assert!((r.max_f - fid).abs() < 1e-14);
        let a = 0.8 * (1.0f64 - 0.4096).sqrt() - 0.64 * (1.0f64 - 0.64).sqrt();
        assert!((r.min_a - a).abs() < 1e-14);
    }

    #[test]
    fn identical_states_limits() {
        let r = criteria(1.0, 2, 5).unwrap();
        assert_eq!(r.max_p, 0.4);
        assert_eq!(r.max_f, 1.0);
        assert_eq!(r.min_a, 0.0);
        assert!((r.min_r - (1.0 - 0.4f64.sqrt())).abs() < 1e-15);
        let near = criteria(1.0 - 1e-9, 2, 5).unwrap();
        assert!((near.max_p - r.max_p).abs() < 1e-8);
        assert!((near.min_r - r.min_r).abs() < 1e-8);
    }

    #[test]
    fn fidelity_gap_branches_agree() {
        for &f in &[0.49, 0.5, 0.51] {
            let e = exact(f, 1, 3).unwrap();
            let direct =
                0.5 * (1.0 - f.powi(4) - ((1.0 - f.powi(2)) * (1.0 - f.powi(6))).sqrt());
            assert!((e.max_f_gap - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(criteria(1.5, 1, 2).is_err());
        assert!(criteria(0.5, 2, 2).is_err());
        assert!(criteria(0.5, 0, 2).is_err());
    }

    #[test]
    fn json_uses_symbol_names() {
        let text = serde_json::to_string(&criteria(0.3, 1, 2).unwrap()).unwrap();
        for key in ["max_P", "max_F", "min_R", "min_A", "\"N\"", "\"L\""] {
            assert!(text.contains(key), "{text}");
        }
    }
}
