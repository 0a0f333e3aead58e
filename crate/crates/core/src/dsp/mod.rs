//! Signal framing and the transform kernels used by the embedding stages.

pub mod dct;
pub mod dwt;
pub mod svd;

use crate::error::{Error, Result};

/// Shortest frame the transforms accept. Four cascaded halvings of the
/// wavelet stage need at least 16 samples; 64 keeps every detail band
/// long enough to donate four coefficients to the embedding matrix.
pub const MIN_FRAME_LEN: usize = 64;

/// Frame lengths are rounded up to a multiple of this so the four-level
/// wavelet cascade divides evenly.
pub const FRAME_LEN_MULTIPLE: usize = 16;

/// One frame of the padded signal.
#[derive(Debug, Clone)]
pub struct Frame {
    pub samples: Vec<f64>,
    pub index: usize,
}

/// Frame length for a signal of `signal_len` samples split into `n_frames`
/// frames: ceil-divide, then round up to the transform-friendly multiple,
/// with the minimum length as a floor.
pub fn frame_length_for(signal_len: usize, n_frames: usize) -> Result<usize> {
    if n_frames == 0 {
        return Err(Error::InvalidInput("frame count must be positive".into()));
    }
    if signal_len == 0 {
        return Err(Error::InvalidInput("signal is empty".into()));
    }
    let raw = signal_len.div_ceil(n_frames);
    let rounded = raw.div_ceil(FRAME_LEN_MULTIPLE) * FRAME_LEN_MULTIPLE;
    Ok(rounded.max(MIN_FRAME_LEN))
}

/// Split `signal` into exactly `n_frames` frames of equal length, zero
/// padding the tail. Returns the frames and the padded length.
pub fn frame_signal(signal: &[f64], n_frames: usize) -> Result<(Vec<Frame>, usize)> {
    let frame_len = frame_length_for(signal.len(), n_frames)?;
    let padded_len = frame_len * n_frames;
    let mut frames = Vec::with_capacity(n_frames);
    for index in 0..n_frames {
        let start = index * frame_len;
        let mut samples = vec![0.0; frame_len];
        if start < signal.len() {
            let end = (start + frame_len).min(signal.len());
            samples[..end - start].copy_from_slice(&signal[start..end]);
        }
        frames.push(Frame { samples, index });
    }
    Ok((frames, padded_len))
}

/// Stitch frames back into one signal, truncated to `original_len`.
pub fn assemble_frames(frames: &[Frame], original_len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(frames.len() * frames.first().map_or(0, |f| f.samples.len()));
    for frame in frames {
        out.extend_from_slice(&frame.samples);
    }
    out.truncate(original_len);
    out
}
