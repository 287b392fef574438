use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PulseShape {
    FlatTop,
    #[default]
    CosineRampFlatTop,
}

/// Rabi-frequency envelope of one drive, for the regular coupling class.
/// Crossed and double-crossed members see twice and four times this value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseEnvelope {
    pub shape: PulseShape,
    pub peak_rabi: f64,
    pub phase: f64,
    pub duration: f64,
    pub ramp_fraction: f64,
}

impl PulseEnvelope {
    /// Envelope whose area equals `angle` (a nonnegative regular-class
    /// rotation angle) at the given peak Rabi frequency.
    pub fn calibrated(
        shape: PulseShape,
        peak_rabi: f64,
        ramp_fraction: f64,
        angle: f64,
        phase: f64,
    ) -> Result<Self> {
        if !(peak_rabi > 0.0 && peak_rabi.is_finite()) {
            return Err(Error::InvalidSimParams(format!(
                "peak Rabi frequency must be positive, got {peak_rabi}"
            )));
        }
        if !(0.0..0.5).contains(&ramp_fraction) {
            return Err(Error::InvalidSimParams(format!(
                "ramp fraction must lie in [0, 0.5), got {ramp_fraction}"
            )));
        }
        if !(angle >= 0.0 && angle.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "pulse area must be nonnegative, got {angle}"
            )));
        }
        let effective = match shape {
            PulseShape::FlatTop => 1.0,
            PulseShape::CosineRampFlatTop => 1.0 - ramp_fraction,
        };
        Ok(Self {
            shape,
            peak_rabi,
            phase,
            duration: angle / (peak_rabi * effective),
            ramp_fraction,
        })
    }

    /// Length of each cosine ramp.
    pub fn ramp_time(&self) -> f64 {
        match self.shape {
            PulseShape::FlatTop => 0.0,
            PulseShape::CosineRampFlatTop => self.ramp_fraction * self.duration,
        }
    }

    /// Rabi frequency at time `t` after the start of the pulse.
    pub fn rabi(&self, t: f64) -> f64 {
        if t < 0.0 || t > self.duration {
            return 0.0;
        }
        let tau = self.ramp_time();
        let edge = t.min(self.duration - t);
        if tau > 0.0 && edge < tau {
            0.5 * self.peak_rabi * (1.0 - (PI * edge / tau).cos())
        } else {
            self.peak_rabi
        }
    }

    fn rise_area(&self, s: f64) -> f64 {
        let tau = self.ramp_time();
        0.5 * self.peak_rabi * (s - tau / PI * (PI * s / tau).sin())
    }

    /// `int_0^t Omega(s) ds`, clamped to the pulse window.
    pub fn area_until(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, self.duration);
        let tau = self.ramp_time();
        if tau == 0.0 {
            return self.peak_rabi * t;
        }
        if t <= tau {
            self.rise_area(t)
        } else if t <= self.duration - tau {
            0.5 * self.peak_rabi * tau + self.peak_rabi * (t - tau)
        } else {
            self.area() - self.rise_area(self.duration - t)
        }
    }

    /// Total area `int Omega dt`.
    pub fn area(&self) -> f64 {
        self.peak_rabi * (self.duration - self.ramp_time())
    }

    /// Times where the envelope changes analytic form, including both ends.
    pub fn breakpoints(&self) -> Vec<f64> {
        let tau = self.ramp_time();
        if tau > 0.0 {
            vec![0.0, tau, self.duration - tau, self.duration]
        } else {
            vec![0.0, self.duration]
        }
    }

    /// Whether `[a, b]` lies inside a ramp.
    pub fn is_ramping(&self, a: f64, b: f64) -> bool {
        let tau = self.ramp_time();
        tau > 0.0 && (a < tau || b > self.duration - tau) && a < self.duration
    }
}
