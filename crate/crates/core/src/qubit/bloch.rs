use core::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};
use crate::modulation::IqEnvelope;
use crate::stats::{wrap_phase, wrap_positive};

/// Pure single-qubit state cos(θ/2)|0⟩ + e^{iφ}·sin(θ/2)|1⟩.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochState {
    /// Polar angle in [0, π].
    pub theta: f64,
    /// Azimuth in [0, 2π). Set to 0 at the poles.
    pub phi: f64,
}

impl BlochState {
    pub const GROUND: Self = Self {
        theta: 0.0,
        phi: 0.0,
    };
    pub const EXCITED: Self = Self {
        theta: PI,
        phi: 0.0,
    };

    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        ensure!(
            (0.0..=PI).contains(&theta),
            Domain,
            "theta must lie in [0, π], got {theta}"
        );
        ensure!(
            (0.0..TAU).contains(&phi),
            Domain,
            "phi must lie in [0, 2π), got {phi}"
        );
        Ok(Self { theta, phi })
    }

    /// Cartesian Bloch vector (x, y, z).
    pub fn vector(&self) -> [f64; 3] {
        let s = libm::sin(self.theta);
        [
            s * libm::cos(self.phi),
            s * libm::sin(self.phi),
            libm::cos(self.theta),
        ]
    }

    /// Canonical angles of a (renormalized) Bloch vector.
    pub fn from_vector(v: [f64; 3]) -> Self {
        let norm = libm::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        let [x, y, z] = v.map(|c| c / norm);
        let theta = libm::acos(z.clamp(-1.0, 1.0));
        let phi = if libm::hypot(x, y) < 1e-12 {
            0.0
        } else {
            wrap_positive(libm::atan2(y, x))
        };
        Self { theta, phi }
    }

    /// |⟨a|b⟩|² = (1 + a·b)/2.
    pub fn fidelity(&self, other: &Self) -> f64 {
        let (a, b) = (self.vector(), other.vector());
        0.5 * (1.0 + a[0] * b[0] + a[1] * b[1] + a[2] * b[2])
    }
}

/// Equatorial-axis rotation produced by a drive pulse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rotation {
    /// Azimuth of the rotation axis (cos φ, sin φ, 0), rad.
    pub axis_phi: f64,
    /// Rotation angle, rad.
    pub angle: f64,
}

/// Rotates the Bloch vector by `angle` about the equatorial axis at azimuth
/// `axis_phi` (Rodrigues' formula, right-handed).
pub fn apply_rotation(state: BlochState, axis_phi: f64, angle: f64) -> BlochState {
    let n = [libm::cos(axis_phi), libm::sin(axis_phi), 0.0];
    let r = state.vector();
    let (c, s) = (libm::cos(angle), libm::sin(angle));
    let cross = [
        n[1] * r[2] - n[2] * r[1],
        n[2] * r[0] - n[0] * r[2],
        n[0] * r[1] - n[1] * r[0],
    ];
    let dot = n[0] * r[0] + n[1] * r[1] + n[2] * r[2];
    let out = core::array::from_fn(|k| r[k] * c + cross[k] * s + n[k] * dot * (1.0 - c));
    BlochState::from_vector(out)
}

/// Envelope phase may wander by at most this much (rad) over the body of a
/// pulse for it to count as a single-axis rotation.
const AXIS_TOLERANCE: f64 = 1e-6;

/// Rotation axis and angle of a constant-phase drive pulse.
///
/// angle = Ω_V·∫A(t)dt (trapezoid rule) and axis = envelope phase. Samples
/// below 1% of the peak amplitude are ignored when checking that the phase
/// is constant.
pub fn pulse_to_rotation(env: &IqEnvelope, rabi_rate_per_volt: f64) -> Result<Rotation> {
    ensure!(
        rabi_rate_per_volt.is_finite(),
        Input,
        "Rabi rate must be finite"
    );
    let amp = env.amplitude();
    let phase = env.phase();
    let peak = amp.iter().copied().fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(Rotation {
            axis_phi: 0.0,
            angle: 0.0,
        });
    }
    let k_peak = amp.iter().position(|a| *a == peak).unwrap_or(0);
    let axis = phase[k_peak];
    for (a, p) in amp.iter().zip(&phase) {
        if *a > 0.01 * peak && wrap_phase(p - axis).abs() > AXIS_TOLERANCE {
            return Err(crate::Error::Unsupported(alloc::format!(
                "envelope phase varies by {:.3e} rad; only constant-axis pulses map to one rotation",
                wrap_phase(p - axis).abs()
            )));
        }
    }
    let dt = 1.0 / env.sample_rate();
    let integral: f64 = amp.windows(2).map(|w| 0.5 * (w[0] + w[1]) * dt).sum();
    Ok(Rotation {
        axis_phi: axis,
        angle: rabi_rate_per_volt * integral,
    })
}
