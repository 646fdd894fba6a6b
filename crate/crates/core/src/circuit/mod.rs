//! The optimal cloner for two real qubit states `cos a |0> +- sin a |1>`,
//! with a state-dependent ancilla, and a statevector simulator to check it.
//!
//! The circuit has three stages on the register `0..=L` (0 is the ancilla):
//! distinguishability of the `N` originals is concentrated into position 1,
//! merged with the ancilla's and rotated by `T`, then spread over all `L`
//! clone positions. The `+` input is cloned exactly and the `-` input's
//! deviation equals the lower bound, so the relative error saturates it.

mod gates;
mod plan;
mod sim;

pub use gates::{d_gate, merged_angle, rotation_coefficients, t_gate, turned_d_gate, GateKind, GateSpec};
pub use plan::{alpha_sequence, build_circuit, CircuitPlan};
pub use sim::{
    ideal_output, initial_state, run_circuit, simulate_and_verify, simulate_with_priors, AmplitudeJson,
    CloneRunReport, Statevector,
};
