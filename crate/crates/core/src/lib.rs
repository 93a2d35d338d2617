//! Resonant-beam simultaneous wireless information and power transfer (SWIPT)
//! link model.
//!
//! The crate is `no_std` (with `alloc`) and purely computational:
//!
//! * [`ray_optics`] builds the paraxial ray-transfer matrices of the cavity
//!   and derives the beam spot on the gain medium and its diffraction loss.
//! * [`gain_power`] evaluates the semiconductor gain threshold model and the
//!   beam power delivered at the receiver.
//! * [`receiver`] splits the beam between the photovoltaic harvester and the
//!   APD and computes electrical output and spectral efficiency.
//! * [`link`] composes the three into one [`link::OperatingPoint`].
//! * [`sweep`] and [`search`] run grid sweeps and derivative-free design
//!   searches over the composed model.
//!
//! All quantities are SI (m, s, W, A, J, K).

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod constants;
mod error;
pub mod gain_power;
pub mod link;
mod math;
pub mod params;
pub mod ray_optics;
pub mod receiver;
pub mod search;
pub mod sweep;

pub use error::Error;
pub use link::{LinkModel, OperatingPoint, Quantity};
pub use params::Parameter;

pub type Result<T, E = Error> = core::result::Result<T, E>;
