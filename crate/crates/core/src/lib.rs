//! Massive MIMO uplink receivers built as extreme learning machines.
//!
//! The base-station antennas act as the hidden layer of an extreme learning
//! machine (ELM): the propagation channel supplies the random input weights,
//! a fixed random bias is added ahead of each low-resolution ADC, and the
//! ADC itself is the activation. Only the linear read-out is trained.
//!
//! The crate is split into:
//!
//! * [`numeric`]: dense ridge regression and recursive least squares.
//! * [`channel`]: a sum-of-rays ULA channel with Laplacian angular spread and
//!   per-ray Doppler.
//! * [`frontend`]: 16-QAM, the Saleh power amplifier, AWGN and the biased
//!   mid-rise ADC.
//! * [`receivers`]: ZF, MMSE, trained ZF, a sigmoid ELM operating on ADC
//!   outputs, the natural ELM and its online-sequential (RLS) variant.
//! * [`harness`]: seeded Monte Carlo experiments, JSON configs and CSV output.

pub mod channel;
pub mod error;
pub mod frontend;
pub mod harness;
pub mod numeric;
pub mod receivers;

pub use error::{Error, Result};
pub use num_complex::Complex64;
