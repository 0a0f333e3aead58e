//! Channel distortions used to probe watermark robustness.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::audio::AudioBuffer;
use crate::dsp::dct::{dct_forward, dct_inverse};
use crate::error::{Error, Result};

/// One parameterised distortion.
#[derive(Debug, Clone, PartialEq)]
pub enum AttackSpec {
    /// Additive white Gaussian noise scaled to hit the requested SNR exactly.
    Awgn { snr_db: f64, seed: u64 },
    /// An added sinusoid, e.g. mains interference.
    Hum { amplitude: f64, freq_hz: f64 },
    /// Uniform gain in decibels.
    Amplify { gain_db: f64 },
    /// Zeros prepended to the signal.
    Delay { delay_ms: f64 },
    /// Polarity inversion.
    Invert,
    /// Whole-signal cosine transform with all coefficients whose magnitude
    /// falls below the cutoff zeroed out.
    Sparsify { cutoff: f64 },
}

impl AttackSpec {
    pub fn name(&self) -> &'static str {
        match self {
            AttackSpec::Awgn { .. } => "awgn",
            AttackSpec::Hum { .. } => "hum",
            AttackSpec::Amplify { .. } => "amplify",
            AttackSpec::Delay { .. } => "delay",
            AttackSpec::Invert => "invert",
            AttackSpec::Sparsify { .. } => "sparsify",
        }
    }
}

/// Attacked audio plus a human-readable echo of the realized parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct AttackOutcome {
    pub audio: AudioBuffer,
    pub detail: String,
}

/// Apply one attack to a signal.
pub fn apply(audio: &AudioBuffer, spec: &AttackSpec) -> Result<AttackOutcome> {
    if audio.is_empty() {
        return Err(Error::InvalidInput("cannot attack an empty signal".into()));
    }
    match *spec {
        AttackSpec::Awgn { snr_db, seed } => awgn(audio, snr_db, seed),
        AttackSpec::Hum { amplitude, freq_hz } => hum(audio, amplitude, freq_hz),
        AttackSpec::Amplify { gain_db } => amplify(audio, gain_db),
        AttackSpec::Delay { delay_ms } => delay(audio, delay_ms),
        AttackSpec::Invert => invert(audio),
        AttackSpec::Sparsify { cutoff } => sparsify(audio, cutoff),
    }
}

fn energy(samples: &[f64]) -> f64 {
    samples.iter().map(|s| s * s).sum()
}

fn awgn(audio: &AudioBuffer, snr_db: f64, seed: u64) -> Result<AttackOutcome> {
    if !snr_db.is_finite() {
        return Err(Error::InvalidInput(format!(
            "noise SNR must be finite, got {snr_db}"
        )));
    }
    let signal_energy = energy(&audio.samples);
    if signal_energy == 0.0 {
        return Err(Error::InvalidInput(
            "cannot set an SNR against an all-zero signal".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, 1.0).expect("unit normal is well formed");
    let raw: Vec<f64> = (0..audio.len()).map(|_| normal.sample(&mut rng)).collect();
    let raw_energy = energy(&raw);
    // Scale the drawn noise so the realized SNR equals the request instead of
    // only matching it in expectation.
    let target_noise_energy = signal_energy / 10f64.powf(snr_db / 10.0);
    let scale = (target_noise_energy / raw_energy).sqrt();
    let samples: Vec<f64> = audio
        .samples
        .iter()
        .zip(&raw)
        .map(|(s, n)| s + scale * n)
        .collect();
    let realized = 10.0 * (signal_energy / (scale * scale * raw_energy)).log10();
    Ok(AttackOutcome {
        audio: AudioBuffer::new(samples, audio.sample_rate),
        detail: format!("snr_db={snr_db:.2} realized_snr_db={realized:.2} seed={seed}"),
    })
}

fn hum(audio: &AudioBuffer, amplitude: f64, freq_hz: f64) -> Result<AttackOutcome> {
    if !amplitude.is_finite() {
        return Err(Error::InvalidInput(format!(
            "hum amplitude must be finite, got {amplitude}"
        )));
    }
    let nyquist = f64::from(audio.sample_rate) / 2.0;
    if !freq_hz.is_finite() || freq_hz < 0.0 || freq_hz >= nyquist {
        return Err(Error::InvalidInput(format!(
            "hum frequency {freq_hz} Hz is outside [0, {nyquist}) Hz"
        )));
    }
    let step = 2.0 * std::f64::consts::PI * freq_hz / f64::from(audio.sample_rate);
    let samples: Vec<f64> = audio
        .samples
        .iter()
        .enumerate()
        .map(|(i, s)| s + amplitude * (step * i as f64).sin())
        .collect();
    Ok(AttackOutcome {
        audio: AudioBuffer::new(samples, audio.sample_rate),
        detail: format!("amplitude={amplitude} freq_hz={freq_hz}"),
    })
}

fn amplify(audio: &AudioBuffer, gain_db: f64) -> Result<AttackOutcome> {
    if !gain_db.is_finite() {
        return Err(Error::InvalidInput(format!(
            "gain must be finite, got {gain_db} dB"
        )));
    }
    let gain = 10f64.powf(gain_db / 20.0);
    let samples: Vec<f64> = audio.samples.iter().map(|s| s * gain).collect();
    Ok(AttackOutcome {
        audio: AudioBuffer::new(samples, audio.sample_rate),
        detail: format!("gain_db={gain_db:.2} gain={gain:.6}"),
    })
}

fn delay(audio: &AudioBuffer, delay_ms: f64) -> Result<AttackOutcome> {
    if !delay_ms.is_finite() || delay_ms < 0.0 {
        return Err(Error::InvalidInput(format!(
            "delay must be non-negative and finite, got {delay_ms} ms"
        )));
    }
    let pad = (delay_ms * f64::from(audio.sample_rate) / 1000.0).round() as usize;
    let mut samples = vec![0.0; pad];
    samples.extend_from_slice(&audio.samples);
    Ok(AttackOutcome {
        audio: AudioBuffer::new(samples, audio.sample_rate),
        detail: format!("delay_ms={delay_ms} padded_samples={pad}"),
    })
}

fn invert(audio: &AudioBuffer) -> Result<AttackOutcome> {
    let samples: Vec<f64> = audio.samples.iter().map(|s| -s).collect();
    Ok(AttackOutcome {
        audio: AudioBuffer::new(samples, audio.sample_rate),
        detail: "polarity inverted".into(),
    })
}

fn sparsify(audio: &AudioBuffer, cutoff: f64) -> Result<AttackOutcome> {
    if !cutoff.is_finite() || cutoff < 0.0 {
        return Err(Error::InvalidInput(format!(
            "sparsify cutoff must be non-negative and finite, got {cutoff}"
        )));
    }
    let mut coeffs = dct_forward(&audio.samples);
    let mut zeroed = 0usize;
    for c in &mut coeffs {
        if c.abs() < cutoff {
            *c = 0.0;
            zeroed += 1;
        }
    }
    let fraction = zeroed as f64 / coeffs.len() as f64;
    let samples = dct_inverse(&coeffs);
    Ok(AttackOutcome {
        audio: AudioBuffer::new(samples, audio.sample_rate),
        detail: format!("cutoff={cutoff} zeroed_fraction={fraction:.4}"),
    })
}
