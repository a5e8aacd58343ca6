//! Regime classification and capacity evaluation for two-user vector
//! Gaussian interference channels.
//!
//! Given the channel matrices H1..H4 and input covariance constraints
//! S1, S2 of the model `y1 = H1 x1 + H2 x2 + z1`, `y2 = H3 x1 + H4 x2 + z2`,
//! the crate decides which capacity-known interference regime the channel
//! falls in, constructs independently re-verifiable witness matrices, and
//! evaluates the corresponding closed-form capacity region or sum-rate
//! capacity. See the workspace README for the regime catalogue and the
//! instance document format.

pub mod capacity;
pub mod channel;
pub mod matlib;
pub mod regimes;
pub mod verify;
