//! Spatially and temporally correlated uplink channel.
//!
//! Each user reaches a half-wavelength ULA over a handful of rays. Ray
//! angles are the user's mean angle of arrival plus a truncated Laplacian
//! offset whose standard deviation equals the angular spread; each ray
//! carries a unit-modulus gain scaled by `1/√R` and rotates at its own
//! Doppler frequency `f_d·cos ψ`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{ComplexMatrix, ComplexVector};

pub const SPEED_OF_LIGHT_MPS: f64 = 2.998e8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    pub n_antennas: usize,
    pub n_users: usize,
    pub carrier_hz: f64,
    pub symbol_duration_s: f64,
    pub angular_spread_deg: f64,
    pub n_rays: usize,
    pub velocity_mps: f64,
    /// Interval the per-user mean AOA is drawn from, radians.
    pub mean_aoa_range_rad: [f64; 2],
}

impl Default for ChannelConfig {
    fn default() -> Self {
        Self {
            n_antennas: 256,
            n_users: 10,
            carrier_hz: 2e9,
            symbol_duration_s: 1e-6,
            angular_spread_deg: 10.0,
            n_rays: 5,
            velocity_mps: 0.0,
            mean_aoa_range_rad: [-0.5 * PI, 0.5 * PI],
        }
    }
}

impl ChannelConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_users == 0 {
            return Err(Error::config("channel.n_users", "must be at least 1"));
        }
        if self.n_antennas < self.n_users {
            return Err(Error::config(
                "channel.n_antennas",
                format!("must be >= n_users ({})", self.n_users),
            ));
        }
        if self.symbol_duration_s.is_nan() || self.symbol_duration_s <= 0.0 {
            return Err(Error::config(
                "channel.symbol_duration_s",
                "must be positive",
            ));
        }
        if self.n_rays == 0 {
            return Err(Error::config("channel.n_rays", "must be at least 1"));
        }
        if self.angular_spread_deg.is_nan() || self.angular_spread_deg <= 0.0 {
            return Err(Error::config(
                "channel.angular_spread_deg",
                "must be positive",
            ));
        }
        if self.velocity_mps.is_nan() || self.velocity_mps < 0.0 {
            return Err(Error::config(
                "channel.velocity_mps",
                "must be non-negative",
            ));
        }
        if self.carrier_hz.is_nan() || self.carrier_hz <= 0.0 {
            return Err(Error::config("channel.carrier_hz", "must be positive"));
        }
        let [lo, hi] = self.mean_aoa_range_rad;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::config(
                "channel.mean_aoa_range_rad",
                "must be a finite interval [lo, hi] with lo <= hi",
            ));
        }
        Ok(())
    }

    /// Maximum Doppler shift `v·f_c/c` in Hz.
    pub fn max_doppler_hz(&self) -> f64 {
        self.velocity_mps * self.carrier_hz / SPEED_OF_LIGHT_MPS
    }

    pub fn angular_spread_rad(&self) -> f64 {
        self.angular_spread_deg.to_radians()
    }
}

/// ULA response for a half-wavelength array: entry `n` is `exp(−jπ n sin θ)`.
pub fn steering_vector(theta: f64, n: usize) -> ComplexVector {
    let k = -PI * theta.sin();
    ComplexVector::from_fn(n, |i, _| Complex64::from_polar(1.0, k * i as f64))
}

/// Laplacian offsets with standard deviation `spread` truncated to `|δ| ≤ π/2`.
pub fn sample_truncated_laplacian<R: Rng + ?Sized>(rng: &mut R, spread: f64) -> f64 {
    let scale = spread / std::f64::consts::SQRT_2;
    loop {
        let u: f64 = rng.random::<f64>() - 0.5;
        let mag = -scale * (1.0 - 2.0 * u.abs()).ln();
        let delta = if u < 0.0 { -mag } else { mag };
        if delta.abs() <= 0.5 * PI {
            return delta;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ray {
    pub aoa_rad: f64,
    pub gain: Complex64,
    pub doppler_hz: f64,
    pub phase_rad: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UserPaths {
    pub mean_aoa_rad: f64,
    pub rays: Vec<Ray>,
}

/// One realization of the ray geometry; [`ChannelProcess::realize`] evaluates
/// the channel matrix at any symbol index.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelProcess {
    users: Vec<UserPaths>,
    n_antennas: usize,
    symbol_duration_s: f64,
    // steering vectors per (user, ray), cached
    steering: Vec<Vec<ComplexVector>>,
}

impl ChannelProcess {
    /// Draw a process for `cfg`; identical seeds give identical processes.
    pub fn draw(cfg: &ChannelConfig, seed: u64) -> Result<Self> {
        cfg.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fd = cfg.max_doppler_hz();
        let spread = cfg.angular_spread_rad();
        let [lo, hi] = cfg.mean_aoa_range_rad;
        let amp = 1.0 / (cfg.n_rays as f64).sqrt();
        let users: Vec<UserPaths> = (0..cfg.n_users)
            .map(|_| {
                let mean = lo + (hi - lo) * rng.random::<f64>();
                let rays = (0..cfg.n_rays)
                    .map(|_| {
                        let aoa_rad = mean + sample_truncated_laplacian(&mut rng, spread);
                        let gain = Complex64::from_polar(amp, 2.0 * PI * rng.random::<f64>());
                        let psi = 2.0 * PI * rng.random::<f64>();
                        let phase_rad = 2.0 * PI * rng.random::<f64>();
                        Ray {
                            aoa_rad,
                            gain,
                            doppler_hz: fd * psi.cos(),
                            phase_rad,
                        }
                    })
                    .collect();
                UserPaths {
                    mean_aoa_rad: mean,
                    rays,
                }
            })
            .collect();
        Ok(Self::from_users(
            users,
            cfg.n_antennas,
            cfg.symbol_duration_s,
        ))
    }

    pub fn from_users(users: Vec<UserPaths>, n_antennas: usize, symbol_duration_s: f64) -> Self {
        let steering = users
            .iter()
            .map(|u| {
                u.rays
                    .iter()
                    .map(|r| steering_vector(r.aoa_rad, n_antennas))
                    .collect()
            })
            .collect();
        Self {
            users,
            n_antennas,
            symbol_duration_s,
            steering,
        }
    }

    pub fn users(&self) -> &[UserPaths] {
        &self.users
    }

    pub fn n_antennas(&self) -> usize {
        self.n_antennas
    }

    pub fn n_users(&self) -> usize {
        self.users.len()
    }

    pub fn is_static(&self) -> bool {
        self.users
            .iter()
            .all(|u| u.rays.iter().all(|r| r.doppler_hz == 0.0))
    }

    /// Channel matrix `H(m)` (`N×K`) at symbol index `m`.
    pub fn realize(&self, m: u64) -> ComplexMatrix {
        let mut h = ComplexMatrix::zeros(self.n_antennas, self.users.len());
        self.realize_into(m, &mut h);
        h
    }

    pub fn realize_into(&self, m: u64, h: &mut ComplexMatrix) {
        let t = m as f64 * self.symbol_duration_s;
        for (k, (user, steer)) in self.users.iter().zip(&self.steering).enumerate() {
            let mut col = h.column_mut(k);
            col.fill(Complex64::new(0.0, 0.0));
            for (ray, a) in user.rays.iter().zip(steer) {
                let rot = Complex64::from_polar(1.0, ray.phase_rad + 2.0 * PI * ray.doppler_hz * t);
                col.axpy(ray.gain * rot, a, Complex64::new(1.0, 0.0));
            }
        }
    }
}
