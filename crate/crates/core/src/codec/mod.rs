//! Watermark embedding and exact level inversion.
//!
//! One frame carries one bit: the frame is transformed, a small matrix of
//! selected coefficients is decomposed, and the leading singular value is
//! multiplied by `1 + alpha * bit`. The original values are the key.
//! A dual embedding runs the wavelet level over the host first, then the
//! DCT level over that result; extraction peels them off in reverse order.

pub mod bits;
pub mod key;
pub mod matrix;

use crate::audio::AudioBuffer;
use crate::codec::bits::{text_to_bits, BitPayload, BITS_PER_CHAR, KNOWN_CHAR};
use crate::codec::key::{Domain, DomainKey, KeyFile};
use crate::codec::matrix::{
    build_dct_matrix, build_dwt_matrix, scatter_dct_matrix, scatter_dwt_matrix,
};
use crate::dsp::dct::{dct_forward, dct_inverse};
use crate::dsp::dwt::{dwt4_forward, dwt4_inverse};
use crate::dsp::svd::{svd_reconstruct, svd_small};
use crate::dsp::{frame_signal, MIN_FRAME_LEN};
use crate::error::{Error, Result};

fn bit_multiplier(alpha: f64, bit: u8) -> f64 {
    1.0 + alpha * bit as f64
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidInput(format!(
            "watermark intensity {alpha} outside the open interval (0, 1)"
        )));
    }
    Ok(())
}

/// Scale a frame's leading singular value in the given domain, returning the
/// new samples and the value found before scaling.
fn rescale_frame_s11(
    frame: &[f64],
    domain: Domain,
    factor_of_s11: impl FnOnce(f64) -> f64,
) -> Result<(Vec<f64>, f64)> {
    match domain {
        Domain::DctSvd => {
            let mut coeffs = dct_forward(frame);
            let m = build_dct_matrix(&coeffs)?;
            let mut t = svd_small(&m)?;
            let s11 = t.s[0];
            t.s[0] = factor_of_s11(s11);
            scatter_dct_matrix(&svd_reconstruct(&t), &mut coeffs)?;
            Ok((dct_inverse(&coeffs), s11))
        }
        Domain::DwtSvd => {
            let mut pyramid = dwt4_forward(frame)?;
            let m = build_dwt_matrix(&pyramid)?;
            let mut t = svd_small(&m)?;
            let s11 = t.s[0];
            t.s[0] = factor_of_s11(s11);
            scatter_dwt_matrix(&svd_reconstruct(&t), &mut pyramid)?;
            Ok((dwt4_inverse(&pyramid), s11))
        }
    }
}

/// Leading singular value of one frame's embedding matrix.
pub(crate) fn frame_s11(frame: &[f64], domain: Domain) -> Result<f64> {
    let t = match domain {
        Domain::DctSvd => svd_small(&build_dct_matrix(&dct_forward(frame))?)?,
        Domain::DwtSvd => svd_small(&build_dwt_matrix(&dwt4_forward(frame)?)?)?,
    };
    Ok(t.s[0])
}

fn check_payload(payload: &BitPayload) -> Result<()> {
    let len = payload.bits.len();
    if len < 2 * BITS_PER_CHAR || !len.is_multiple_of(BITS_PER_CHAR) {
        return Err(Error::InvalidInput(format!(
            "payload must be the reference character plus at least one character \
             ({} bit multiples), got {len} bits",
            BITS_PER_CHAR
        )));
    }
    if payload.bits.iter().any(|&b| b > 1) {
        return Err(Error::InvalidInput("payload bits must be 0 or 1".into()));
    }
    Ok(())
}

/// Embed one bit sequence into a signal in a single domain.
///
/// The payload must already start with the reference character's bits; one
/// frame per bit. Returns the watermarked padded signal and the key.
pub fn embed_domain(
    signal: &[f64],
    payload: &BitPayload,
    alpha: f64,
    domain: Domain,
) -> Result<(Vec<f64>, DomainKey)> {
    check_alpha(alpha)?;
    check_payload(payload)?;
    let n_frames = payload.bits.len();
    let (frames, padded_len) = frame_signal(signal, n_frames)?;
    let frame_length = padded_len / n_frames;

    let mut out = Vec::with_capacity(padded_len);
    let mut s11_originals = Vec::with_capacity(n_frames);
    let mut degenerate = Vec::new();
    for (frame, &bit) in frames.iter().zip(&payload.bits) {
        let (samples, s11) =
            rescale_frame_s11(&frame.samples, domain, |s| s * bit_multiplier(alpha, bit))?;
        if s11 == 0.0 {
            degenerate.push(frame.index);
        }
        s11_originals.push(s11);
        out.extend_from_slice(&samples);
    }
    if !degenerate.is_empty() {
        return Err(Error::DegenerateFrames {
            domain,
            frames: degenerate,
        });
    }

    let key = DomainKey {
        domain,
        alpha,
        n_frames,
        frame_length,
        payload_bits: n_frames - BITS_PER_CHAR,
        s11_originals,
    };
    Ok((out, key))
}

/// Undo one embedding level, dividing each frame's leading singular value by
/// the multiplier implied by its detected bit. On an unattacked signal with
/// correctly detected bits this restores the pre-embedding signal; on an
/// attacked one it removes the embedding's own contribution while leaving
/// whatever the attack did in place.
pub fn invert_domain(signal: &[f64], key: &DomainKey, detected_bits: &[u8]) -> Result<Vec<f64>> {
    if signal.len() != key.signal_length() {
        return Err(Error::InvalidInput(format!(
            "signal length {} does not match the key's framing {} x {}",
            signal.len(),
            key.n_frames,
            key.frame_length
        )));
    }
    if detected_bits.len() != key.n_frames {
        return Err(Error::InvalidInput(format!(
            "{} detected bits for {} frames",
            detected_bits.len(),
            key.n_frames
        )));
    }
    let mut out = Vec::with_capacity(signal.len());
    for (chunk, &bit) in signal.chunks_exact(key.frame_length).zip(detected_bits) {
        let (samples, _) =
            rescale_frame_s11(chunk, key.domain, |s| s / bit_multiplier(key.alpha, bit))?;
        out.extend_from_slice(&samples);
    }
    Ok(out)
}

/// Embed two independent text watermarks: one in the wavelet domain of the
/// host, then one in the DCT domain of that intermediate result.
pub fn embed_multilevel(
    host: &AudioBuffer,
    wm_dwt: &str,
    wm_dct: &str,
    alpha: f64,
) -> Result<(AudioBuffer, KeyFile)> {
    check_alpha(alpha)?;
    if wm_dwt.is_empty() || wm_dct.is_empty() {
        return Err(Error::InvalidInput(
            "watermark texts must not be empty".into(),
        ));
    }
    let payload_dwt = text_to_bits(&format!("{KNOWN_CHAR}{wm_dwt}"))?;
    let payload_dct = text_to_bits(&format!("{KNOWN_CHAR}{wm_dct}"))?;
    let max_frames = payload_dwt.bits.len().max(payload_dct.bits.len());
    let min_samples = MIN_FRAME_LEN * max_frames;
    if host.samples.len() < min_samples {
        return Err(Error::InvalidInput(format!(
            "host has {} samples but these watermarks need at least {min_samples} \
             ({max_frames} frames of {MIN_FRAME_LEN}+ samples)",
            host.samples.len()
        )));
    }

    let (dwt_signal, dwt_key) = embed_domain(&host.samples, &payload_dwt, alpha, Domain::DwtSvd)?;
    let (out_signal, dct_key) = embed_domain(&dwt_signal, &payload_dct, alpha, Domain::DctSvd)?;

    let keyfile = KeyFile {
        alpha,
        sample_rate: host.sample_rate,
        padded_length: out_signal.len(),
        dct_key,
        dwt_key,
    };
    keyfile.validate()?;
    Ok((
        AudioBuffer {
            samples: out_signal,
            sample_rate: host.sample_rate,
        },
        keyfile,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::bits::KNOWN_CHAR_BITS;

    fn test_host(len: usize, seed: u64) -> Vec<f64> {
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15) | 1;
        (0..len)
            .map(|_| {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
            })
            .collect()
    }

    fn full_payload(text: &str) -> BitPayload {
        text_to_bits(&format!("{KNOWN_CHAR}{text}")).unwrap()
    }

    #[test]
    fn all_zero_bits_leave_the_signal_unchanged() {
        let host = test_host(14 * 64, 5);
        let payload = BitPayload {
            bits: vec![0; 14],
            source_text: String::new(),
        };
        for domain in [Domain::DctSvd, Domain::DwtSvd] {
            let (out, key) = embed_domain(&host, &payload, 0.1, domain).unwrap();
            assert_eq!(out.len(), host.len());
            for (i, (a, b)) in host.iter().zip(&out).enumerate() {
                assert!(
                    (a - b).abs() < 1e-9,
                    "{domain} sample {i} moved: {a} vs {b}"
                );
            }
            assert_eq!(key.s11_originals.len(), 14);
            assert!(key.s11_originals.iter().all(|&s| s > 0.0));
        }
    }

    #[test]
    fn embedded_frames_carry_the_expected_singular_value_ratio() {
        let host = test_host(14 * 64, 6);
        let payload = full_payload("z");
        let alpha = 0.05;
        for domain in [Domain::DctSvd, Domain::DwtSvd] {
            let (out, key) = embed_domain(&host, &payload, alpha, domain).unwrap();
            for (n, chunk) in out.chunks_exact(key.frame_length).enumerate() {
                let observed = frame_s11(chunk, domain).unwrap();
                let expected = key.s11_originals[n] * bit_multiplier(alpha, payload.bits[n]);
                assert!(
                    (observed - expected).abs() < 1e-9 * expected,
                    "{domain} frame {n}: {observed} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn inversion_with_correct_bits_restores_the_padded_host() {
        // 2000 samples over 14 frames pad to 14 x 144 = 2016, so the tail
        // frame carries 16 zeros of padding but plenty of real signal.
        let host = test_host(2000, 7);
        let payload = full_payload("a");
        for domain in [Domain::DctSvd, Domain::DwtSvd] {
            let (out, key) = embed_domain(&host, &payload, 0.1, domain).unwrap();
            let restored = invert_domain(&out, &key, &payload.bits).unwrap();
            assert_eq!(restored.len(), key.signal_length());
            for (i, (a, b)) in host.iter().zip(&restored).enumerate() {
                assert!((a - b).abs() < 1e-9, "{domain} sample {i}: {a} vs {b}");
            }
            assert!(restored[host.len()..].iter().all(|&v| v.abs() < 1e-9));
        }
    }

    #[test]
    fn silent_regions_are_reported_as_degenerate_frames() {
        let mut host = test_host(14 * 64, 8);
        for v in host[9 * 64..].iter_mut() {
            *v = 0.0;
        }
        let payload = full_payload("z");
        let err = embed_domain(&host, &payload, 0.05, Domain::DctSvd).unwrap_err();
        match err {
            Error::DegenerateFrames { domain, frames } => {
                assert_eq!(domain, Domain::DctSvd);
                assert_eq!(frames, vec![9, 10, 11, 12, 13]);
            }
            other => panic!("expected DegenerateFrames, got {other:?}"),
        }
    }

    #[test]
    fn dual_embedding_produces_a_consistent_key_file() {
        let host = AudioBuffer {
            samples: test_host(4000, 9),
            sample_rate: 8000,
        };
        let (marked, keyfile) = embed_multilevel(&host, "ab", "c", 0.05).unwrap();
        assert_eq!(marked.samples.len(), keyfile.padded_length);
        assert_eq!(keyfile.dwt_key.n_frames, 7 + 14);
        assert_eq!(keyfile.dct_key.n_frames, 7 + 7);
        assert_eq!(keyfile.sample_rate, 8000);
        keyfile.validate().unwrap();

        // Determinism: identical inputs give bit-identical signals and keys.
        let (marked2, keyfile2) = embed_multilevel(&host, "ab", "c", 0.05).unwrap();
        assert_eq!(marked.samples, marked2.samples);
        assert_eq!(keyfile, keyfile2);
    }

    #[test]
    fn dual_embedding_rejects_too_short_hosts() {
        let host = AudioBuffer {
            samples: test_host(100, 10),
            sample_rate: 8000,
        };
        let err = embed_multilevel(&host, "a", "b", 0.05).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("896"), "minimum length missing from: {msg}");
    }

    #[test]
    fn invalid_alpha_and_empty_texts_are_rejected() {
        let host = AudioBuffer {
            samples: test_host(2000, 11),
            sample_rate: 8000,
        };
        assert!(embed_multilevel(&host, "a", "b", 0.0).is_err());
        assert!(embed_multilevel(&host, "a", "b", 1.0).is_err());
        assert!(embed_multilevel(&host, "", "b", 0.05).is_err());
        assert!(embed_multilevel(&host, "a", "", 0.05).is_err());
    }

    #[test]
    fn known_character_header_is_the_contract() {
        let payload = full_payload("x");
        assert_eq!(&payload.bits[..7], &KNOWN_CHAR_BITS);
    }
}
