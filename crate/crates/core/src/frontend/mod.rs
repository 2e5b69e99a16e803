//! Transmit chain and impaired receive front end.

mod adc;
mod link;
mod pa;
mod qam;

pub use adc::{
    bias_quantize, bias_quantize_rows, calibrate_adc, quantize, AdcConfig, Quantizer,
    MIN_CALIBRATION_SAMPLES,
};
pub use link::{noise_variance, transmit, transmit_block, transmit_block_with};
pub use pa::{PowerAmplifier, SalehParams};
pub use qam::QamConstellation;
