use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::QamConstellation;

/// Saleh AM/AM and AM/PM coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SalehParams {
    pub alpha_a: f64,
    pub eps_a: f64,
    pub alpha_phi: f64,
    pub eps_phi: f64,
}

impl Default for SalehParams {
    /// Classic travelling-wave-tube fit.
    fn default() -> Self {
        Self {
            alpha_a: 1.96,
            eps_a: 0.99,
            alpha_phi: 2.53,
            eps_phi: 2.82,
        }
    }
}

impl SalehParams {
    /// AM/AM: `α_a r / (1 + ε_a r²)`.
    pub fn am_am(&self, r: f64) -> f64 {
        self.alpha_a * r / (1.0 + self.eps_a * r * r)
    }

    /// AM/PM: `α_φ r² / (1 + ε_φ r²)` radians.
    pub fn am_pm(&self, r: f64) -> f64 {
        let r2 = r * r;
        self.alpha_phi * r2 / (1.0 + self.eps_phi * r2)
    }

    pub fn distort(&self, x: Complex64) -> Complex64 {
        let r = x.norm();
        if r == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(self.am_am(r), x.arg() + self.am_pm(r))
    }

    /// Input amplitude `1/√ε_a` at which AM/AM saturates.
    pub fn saturation_input(&self) -> f64 {
        1.0 / self.eps_a.sqrt()
    }

    /// Peak AM/AM output `α_a / (2√ε_a)`.
    pub fn saturation_output(&self) -> f64 {
        self.alpha_a / (2.0 * self.eps_a.sqrt())
    }

    pub fn validate(&self) -> bool {
        self.eps_a > 0.0
            && self.eps_phi > 0.0
            && [self.alpha_a, self.eps_a, self.alpha_phi, self.eps_phi]
                .iter()
                .all(|v| v.is_finite())
    }
}

/// User-side power amplifier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PowerAmplifier {
    Saleh(SalehParams),
    /// Ideal linear amplifier, `f(x) = x`.
    Bypass,
}

impl Default for PowerAmplifier {
    fn default() -> Self {
        PowerAmplifier::Saleh(SalehParams::default())
    }
}

impl PowerAmplifier {
    pub fn apply(&self, x: Complex64) -> Complex64 {
        match self {
            PowerAmplifier::Saleh(p) => p.distort(x),
            PowerAmplifier::Bypass => x,
        }
    }

    /// Average radiated power for equiprobable symbols of `constellation`.
    pub fn mean_output_power(&self, constellation: &QamConstellation) -> f64 {
        let pts = constellation.points();
        pts.iter().map(|&c| self.apply(c).norm_sqr()).sum::<f64>() / pts.len() as f64
    }
}
