//! The ideal blockade-limit engine.
//!
//! A drive on one species applies, to every member `i`, the conditional
//! rotation `W_i = 1 (x) Q_i + R (x) P_i` where `P_i` projects all neighbours
//! of `i` onto `|g>`. Coupling classes on one line can receive independent
//! rotations. Actuators are ordinary qubits with role `actuator`; exciting one
//! freezes its neighbours and a full turn on one imprints a phase on its
//! neighbourhood.

mod actuator;
mod encoding;
mod gates;
mod pulse;
mod transport;

pub use crate::statevec::RotationSpec;
pub use actuator::*;
pub use encoding::*;
pub use gates::*;
pub use pulse::*;
pub use transport::*;
