//! Dual-domain audio watermarking.
//!
//! Two independent 7-bit ASCII texts are hidden in one mono signal by
//! scaling the leading singular value of small per-frame coefficient
//! matrices: one watermark lives in a four-level Haar wavelet decomposition,
//! the other in selected cosine-transform coefficients embedded on top of
//! it. Extraction reads the cosine stage first, divides it back out, and
//! then reads the wavelet stage underneath. Each stage decides bits by
//! comparing observed to stored leading singular values against either a
//! fixed threshold or one calibrated on a reference character embedded ahead
//! of the payload.
//!
//! The crate also ships the measurement side: attack channels, bit error
//! rate and SNR metrics, a deterministic speech-shaped test signal, and an
//! experiment runner that writes CSV reports.

pub mod attacks;
pub mod audio;
pub mod codec;
pub mod detect;
pub mod dsp;
pub mod error;
pub mod eval;
pub mod fixture;
pub mod metrics;
pub mod wav;

pub use attacks::{AttackOutcome, AttackSpec};
pub use audio::AudioBuffer;
pub use codec::bits::{
    bits_to_text, text_to_bits, BitPayload, BITS_PER_CHAR, KNOWN_CHAR, KNOWN_CHAR_BITS,
};
pub use codec::key::{Domain, DomainKey, KeyFile, KEY_FORMAT_VERSION};
pub use codec::{embed_domain, embed_multilevel, invert_domain};
pub use detect::threshold::{
    classify, midpoint_threshold, refined_threshold, static_threshold, ThresholdMode,
    ThresholdReport,
};
pub use detect::{
    compute_ratios, extract, DetectionResult, DetectorMode, DomainDetection, RatioVector, Warning,
};
pub use error::{Error, Result};
pub use eval::{run_evaluation, EvalOutputs, ExperimentConfig, Scheme};
pub use fixture::synthetic_host;
pub use metrics::{ber, combined_ber, snr_db, BerResult};
