//! Watermark detection: singular-value ratios, bit decisions, and the full
//! two-stage extraction pipeline.

pub mod threshold;

use std::fmt;

use crate::audio::AudioBuffer;
use crate::codec::bits::{bits_to_text, KNOWN_CHAR_BITS};
use crate::codec::key::{Domain, DomainKey, KeyFile};
use crate::codec::{frame_s11, invert_domain};
use crate::dsp::frame_signal;
use crate::error::{Error, Result};
use threshold::{
    classify, midpoint_threshold, reference_errors, refined_threshold, static_threshold,
    ThresholdMode, ThresholdReport,
};

/// Which threshold policy the extractor applies.
///
/// `Static` uses the fixed `1 + alpha/2` rule everywhere. `Adaptive`
/// calibrates on the reference character: the midpoint search for the
/// cosine-domain stage and the refined search for the wavelet-domain stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectorMode {
    Static,
    Adaptive,
}

impl DetectorMode {
    pub fn label(&self) -> &'static str {
        match self {
            DetectorMode::Static => "static",
            DetectorMode::Adaptive => "adaptive",
        }
    }
}

/// Per-frame ratios of observed to stored leading singular values.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioVector {
    pub domain: Domain,
    pub ratios: Vec<f64>,
}

/// Everything recovered from one embedding domain.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainDetection {
    pub domain: Domain,
    /// Decoded payload bits, reference character excluded.
    pub payload_bits: Vec<u8>,
    /// The payload bits decoded as 7-bit ASCII.
    pub text: String,
    pub ratios: RatioVector,
    pub report: ThresholdReport,
}

/// Non-fatal observations made during extraction.
#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// The signal length does not match the length recorded at embedding
    /// time, which usually means samples were inserted or dropped.
    LikelyDesync {
        observed: usize,
        expected: usize,
        delta_percent: f64,
    },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::LikelyDesync {
                observed,
                expected,
                delta_percent,
            } => write!(
                f,
                "likely desynchronisation: signal length {observed} differs from the embedded \
                 length {expected} by {delta_percent:+.3}%; extraction pads or truncates to fit \
                 and the recovered bits may be unreliable"
            ),
        }
    }
}

/// Result of a full two-stage extraction.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionResult {
    pub dct: DomainDetection,
    pub dwt: DomainDetection,
    pub warnings: Vec<Warning>,
}

/// Per-frame `s11` ratios of a signal against a domain key.
///
/// The signal length must equal the key's padded length exactly.
pub fn compute_ratios(signal: &[f64], key: &DomainKey) -> Result<RatioVector> {
    if signal.len() != key.signal_length() {
        return Err(Error::InvalidInput(format!(
            "ratio computation needs exactly {} samples for this key, got {}",
            key.signal_length(),
            signal.len()
        )));
    }
    let (frames, _) = frame_signal(signal, key.n_frames)?;
    let mut ratios = Vec::with_capacity(frames.len());
    for frame in &frames {
        let stored = key.s11_originals[frame.index];
        if !(stored.is_finite() && stored > 0.0) {
            return Err(Error::InvalidKey(format!(
                "stored singular value for frame {} is {stored}, cannot form a ratio",
                frame.index
            )));
        }
        let observed = frame_s11(&frame.samples, key.domain)?;
        ratios.push(observed / stored);
    }
    Ok(RatioVector {
        domain: key.domain,
        ratios,
    })
}

/// Threshold choice for one domain under the given detector mode.
fn domain_report(ratios: &RatioVector, alpha: f64, mode: DetectorMode) -> ThresholdReport {
    let reference = &ratios.ratios[..KNOWN_CHAR_BITS.len()];
    match (mode, ratios.domain) {
        (DetectorMode::Static, _) => {
            let th = static_threshold(alpha);
            let (_, _, errors) = reference_errors(reference, &KNOWN_CHAR_BITS, th);
            ThresholdReport {
                mode: ThresholdMode::Static,
                threshold: th,
                known_char_ber: errors as f64 / KNOWN_CHAR_BITS.len() as f64,
                iterations: 0,
                flag: false,
            }
        }
        (DetectorMode::Adaptive, Domain::DctSvd) => midpoint_threshold(reference, &KNOWN_CHAR_BITS),
        (DetectorMode::Adaptive, Domain::DwtSvd) => refined_threshold(reference, &KNOWN_CHAR_BITS),
    }
}

/// Decode one domain: choose a threshold, classify, and read the payload.
fn detect_domain(ratios: RatioVector, alpha: f64, mode: DetectorMode) -> Result<DomainDetection> {
    let report = domain_report(&ratios, alpha, mode);
    let bits = classify(&ratios.ratios, report.threshold);
    let payload_bits = bits[KNOWN_CHAR_BITS.len()..].to_vec();
    let text = bits_to_text(&payload_bits)?;
    Ok(DomainDetection {
        domain: ratios.domain,
        payload_bits,
        text,
        ratios,
        report,
    })
}

/// Pad with zeros or truncate so the signal matches the embedded length,
/// warning when anything had to change.
fn fit_length(samples: &[f64], expected: usize, warnings: &mut Vec<Warning>) -> Vec<f64> {
    let mut fitted = samples.to_vec();
    if fitted.len() != expected {
        let delta_percent = 100.0 * (fitted.len() as f64 - expected as f64) / expected as f64;
        warnings.push(Warning::LikelyDesync {
            observed: fitted.len(),
            expected,
            delta_percent,
        });
        fitted.resize(expected, 0.0);
    }
    fitted
}

/// Recover both watermarks from a (possibly attacked) signal.
///
/// The cosine-domain stage is read first and divided back out of the signal
/// using its detected payload, exposing the wavelet-domain stage underneath.
/// The reference character's bit pattern is trusted as known on both stages.
pub fn extract(audio: &AudioBuffer, key: &KeyFile, mode: DetectorMode) -> Result<DetectionResult> {
    key.validate()?;
    if audio.sample_rate != key.sample_rate {
        return Err(Error::InvalidKey(format!(
            "key was made at {} Hz but the signal is {} Hz",
            key.sample_rate, audio.sample_rate
        )));
    }
    let mut warnings = Vec::new();
    let fitted = fit_length(&audio.samples, key.padded_length, &mut warnings);

    let dct_ratios = compute_ratios(&fitted, &key.dct_key)?;
    let dct = detect_domain(dct_ratios, key.alpha, mode)?;

    let mut inversion_bits = KNOWN_CHAR_BITS.to_vec();
    inversion_bits.extend_from_slice(&dct.payload_bits);
    let restored = invert_domain(&fitted, &key.dct_key, &inversion_bits)?;

    let dwt_signal = &restored[..key.dwt_key.signal_length()];
    let dwt_ratios = compute_ratios(dwt_signal, &key.dwt_key)?;
    let dwt = detect_domain(dwt_ratios, key.alpha, mode)?;

    Ok(DetectionResult { dct, dwt, warnings })
}
