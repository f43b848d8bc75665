use alloc::vec::Vec;
use core::f64::consts::TAU;

use super::envelope::IqEnvelope;
use crate::error::{ensure, Result};
use crate::SampledSignal;

/// IRR reported for a perfectly balanced modulator.
pub const IRR_CAP_DB: f64 = 200.0;

/// s(t) = I(t)·cos(ω_c t) − Q(t)·sin(ω_c t) = A(t)·cos(ω_c t + φ(t)).
///
/// The minus sign makes φ = atan2(Q, I) the phase of the carrier, so an
/// envelope at phase φ demodulates back to φ rather than −φ.
pub fn iq_upconvert(env: &IqEnvelope, f_c: f64) -> Result<SampledSignal> {
    ensure!(f_c > 0.0, Input, "carrier frequency must be positive");
    ensure!(
        env.sample_rate() > 4.0 * f_c,
        Precondition,
        "sample rate {:e} Hz must exceed 4× the carrier {f_c:e} Hz",
        env.sample_rate()
    );
    let w = TAU * f_c;
    let samples = env
        .pairs()
        .enumerate()
        .map(|(k, (i, q))| {
            let t = env.i().time(k);
            i * libm::cos(w * t) - q * libm::sin(w * t)
        })
        .collect();
    SampledSignal::new(samples, env.sample_rate(), env.i().start_time())
}

/// Ideal coherent demodulation of a real carrier back to I/Q envelopes.
///
/// Each output sample is a weighted least-squares fit of a locally linear
/// envelope, `(I₀ + I₁τ)·cos ω_c t − (Q₀ + Q₁τ)·sin ω_c t`, over a window of
/// one carrier period centred on that sample. In the interior this removes
/// the 2ω_c mixing image exactly; at the record edges the window is truncated
/// and the fit still recovers a linearly varying envelope without bias.
#[allow(clippy::needless_range_loop)]
pub fn quadrature_demodulate(signal: &SampledSignal, f_c: f64) -> Result<IqEnvelope> {
    ensure!(f_c > 0.0, Input, "carrier frequency must be positive");
    ensure!(
        signal.sample_rate() > 4.0 * f_c,
        Precondition,
        "sample rate must exceed 4× the carrier"
    );
    let w = TAU * f_c;
    let dt = signal.dt();
    let x = signal.samples();
    let half = (libm::round(signal.sample_rate() / f_c) as usize).div_ceil(2);
    let mut i_out = Vec::with_capacity(x.len());
    let mut q_out = Vec::with_capacity(x.len());
    for n in 0..x.len() {
        let lo = n.saturating_sub(half);
        let hi = (n + half).min(x.len() - 1);
        let mut ata = [[0.0f64; 4]; 4];
        let mut atb = [0.0f64; 4];
        for m in lo..=hi {
            let t = signal.time(m);
            let tau = (m as f64 - n as f64) * dt * f_c;
            let (c, s) = (libm::cos(w * t), -libm::sin(w * t));
            let basis = [c, s, tau * c, tau * s];
            for r in 0..4 {
                atb[r] += basis[r] * x[m];
                for k in 0..4 {
                    ata[r][k] += basis[r] * basis[k];
                }
            }
        }
        let sol = solve4(ata, atb).unwrap_or([0.0; 4]);
        i_out.push(sol[0]);
        q_out.push(sol[1]);
    }
    let i = SampledSignal::new(i_out, signal.sample_rate(), signal.start_time())?;
    let q = SampledSignal::new(q_out, signal.sample_rate(), signal.start_time())?;
    IqEnvelope::new(i, q)
}

/// Gaussian elimination with partial pivoting; `None` if singular.
#[allow(clippy::needless_range_loop)]
fn solve4(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> Option<[f64; 4]> {
    for col in 0..4 {
        let pivot = (col..4).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..4 {
            let f = a[row][col] / a[col][col];
            for k in col..4 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 4];
    for row in (0..4).rev() {
        let s: f64 = (row + 1..4).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Image rejection ratio in dB for amplitude ratio `eps` and quadrature
/// phase error `phi_err` (rad):
///
/// ```text
/// IRR = (1 + 2ε·cos φ + ε²) / (1 − 2ε·cos φ + ε²)
/// ```
///
/// Returns [`IRR_CAP_DB`] when the denominator is at or below 1e-20.
pub fn image_rejection_ratio(eps: f64, phi_err: f64) -> Result<f64> {
    ensure!(
        eps.is_finite() && eps > 0.0,
        Input,
        "amplitude ratio must be positive, got {eps}"
    );
    let c = 2.0 * eps * libm::cos(phi_err);
    let num = 1.0 + c + eps * eps;
    // (1 − ε)² + 2ε(1 − cos φ), written to avoid cancellation near balance
    let den = (1.0 - eps) * (1.0 - eps) + 4.0 * eps * libm::pow(libm::sin(0.5 * phi_err), 2.0);
    if den <= 1e-20 {
        return Ok(IRR_CAP_DB);
    }
    Ok((10.0 * libm::log10(num / den)).min(IRR_CAP_DB))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modulation::{make_envelope, PulseShape, PulseSpec};
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

    const FS: f64 = 1.0e11;
    const FC: f64 = 5.0e9;

    fn constant(i: f64, q: f64) -> IqEnvelope {
        let n = 2000;
        IqEnvelope::new(
            SampledSignal::from_fn(n, FS, 0.0, |_| i).unwrap(),
            SampledSignal::from_fn(n, FS, 0.0, |_| q).unwrap(),
        )
        .unwrap()
    }

    fn mid_phase_amp(env: &IqEnvelope) -> (f64, f64) {
        let k = env.len() / 2;
        (env.amplitude()[k], env.phase()[k])
    }

    #[test]
    fn constant_envelopes_round_trip() {
        for (i, q, amp, phase) in [
            (1.0, 0.0, 1.0, 0.0),
            (0.0, 1.0, 1.0, FRAC_PI_2),
            (1.0, 1.0, SQRT_2, FRAC_PI_4),
        ] {
            let rf = iq_upconvert(&constant(i, q), FC).unwrap();
            let back = quadrature_demodulate(&rf, FC).unwrap();
            let (a, p) = mid_phase_amp(&back);
            assert!((a - amp).abs() < 1e-9, "amp {a}");
            assert!(
                crate::stats::wrap_phase(p - phase).abs() < 1e-9,
                "phase {p}"
            );
        }
    }

    #[test]
    fn pure_i_is_a_cosine() {
        let rf = iq_upconvert(&constant(0.7, 0.0), FC).unwrap();
        for (k, s) in rf.samples().iter().enumerate() {
            assert!((s - 0.7 * libm::cos(TAU * FC * rf.time(k))).abs() < 1e-15);
        }
    }

    #[test]
    fn shaped_pulse_amplitude_recovered() {
        let spec = PulseSpec {
            shape: PulseShape::Drag,
            drag_coefficient: 0.5,
            ..PulseSpec::default()
        };
        let env = make_envelope(&spec, FS).unwrap();
        let back = quadrature_demodulate(&iq_upconvert(&env, FC).unwrap(), FC).unwrap();
        let (a0, a1) = (env.amplitude(), back.amplitude());
        let amax = a0.iter().cloned().fold(0.0, f64::max);
        for k in 0..a0.len() {
            if a0[k] > 0.05 * amax {
                assert!((a1[k] - a0[k]).abs() < 0.01 * a0[k], "k={k}");
            }
        }
    }

    #[test]
    fn undersampled_carrier_rejected() {
        assert!(matches!(
            iq_upconvert(&constant(1.0, 0.0), FS / 4.0),
            Err(crate::Error::Precondition(_))
        ));
    }

    #[test]
    fn irr_examples() {
        assert_eq!(image_rejection_ratio(1.0, 0.0).unwrap(), IRR_CAP_DB);
        let phase_only = image_rejection_ratio(1.0, 1.8f64.to_radians()).unwrap();
        assert!((phase_only - 36.07).abs() < 0.05, "{phase_only}");
        let amp_only = image_rejection_ratio(libm::pow(10.0, -0.015), 0.0).unwrap();
        assert!((amp_only - 35.26).abs() < 0.05, "{amp_only}");
        let both = image_rejection_ratio(libm::pow(10.0, -0.015), 1.8f64.to_radians()).unwrap();
        assert!((both - 32.6).abs() < 0.1, "{both}");
        assert!(image_rejection_ratio(0.0, 0.0).is_err());
    }

    #[test]
    fn irr_reciprocal_symmetry() {
        for a in 1..20 {
            let eps = 0.5 + a as f64 * 0.05;
            for p in 0..10 {
                let phi = p as f64 * 0.01;
                let d = image_rejection_ratio(eps, phi).unwrap()
                    - image_rejection_ratio(1.0 / eps, phi).unwrap();
                assert!(d.abs() < 1e-9, "eps {eps} phi {phi}: {d}");
            }
        }
    }
}
