//! Bit error rate and signal-to-noise ratio measurements.

use crate::error::{Error, Result};

/// Outcome of comparing a recovered bit sequence against its reference.
#[derive(Debug, Clone, PartialEq)]
pub struct BerResult {
    /// Error fraction. For a single sequence this is `errors / size`; for a
    /// combined two-watermark result it is the unweighted mean of the two
    /// per-watermark fractions, which differs from `errors / size` whenever
    /// the watermarks have different lengths.
    pub ber: f64,
    pub errors: usize,
    pub size: usize,
    /// Present on combined results: the two per-watermark error fractions.
    pub per_watermark: Option<(f64, f64)>,
}

/// Fraction of positions where the two bit sequences disagree.
pub fn ber(reference: &[u8], recovered: &[u8]) -> Result<BerResult> {
    if reference.len() != recovered.len() {
        return Err(Error::InvalidInput(format!(
            "bit sequences differ in length: {} vs {}",
            reference.len(),
            recovered.len()
        )));
    }
    if reference.is_empty() {
        return Err(Error::InvalidInput(
            "cannot compute error rate of empty sequences".into(),
        ));
    }
    let errors = reference
        .iter()
        .zip(recovered)
        .filter(|(a, b)| a != b)
        .count();
    Ok(BerResult {
        ber: errors as f64 / reference.len() as f64,
        errors,
        size: reference.len(),
        per_watermark: None,
    })
}

/// Combine the two domain results of a dual watermark into one figure:
/// the mean of the two error fractions.
pub fn combined_ber(first: &BerResult, second: &BerResult) -> BerResult {
    BerResult {
        ber: (first.ber + second.ber) / 2.0,
        errors: first.errors + second.errors,
        size: first.size + second.size,
        per_watermark: Some((first.ber, second.ber)),
    }
}

/// `10 * log10(sum(x^2) / sum((x - y)^2))` in dB. Identical signals return
/// positive infinity.
pub fn snr_db(original: &[f64], modified: &[f64]) -> Result<f64> {
    if original.len() != modified.len() {
        return Err(Error::InvalidInput(format!(
            "signals differ in length: {} vs {}",
            original.len(),
            modified.len()
        )));
    }
    let signal: f64 = original.iter().map(|x| x * x).sum();
    if signal == 0.0 {
        return Err(Error::InvalidInput(
            "reference signal has zero energy".into(),
        ));
    }
    let noise: f64 = original
        .iter()
        .zip(modified)
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    if noise == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (signal / noise).log10())
}
