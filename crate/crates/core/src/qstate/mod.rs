//! Quantum states and the fidelity-based distances between them.
//!
//! All types are immutable once validated; every operation is a pure function.

mod channel;
mod density;
mod json;
mod metric;
mod pure;

pub use channel::{apply_channel, Channel, Povm};
pub use density::{make_density, tensor_power, tensor_power_with_cap, DensityOperator};
pub use json::MatrixJson;
pub use metric::{bures_angle, fidelity, metrics, sine_distance, MetricReport};
pub use pure::{real_qubit_state, PureState, Sign};
pub(crate) use pure::qubit;
