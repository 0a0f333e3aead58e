//! Key material produced at embed time and required for extraction.
//!
//! The key file records, per domain, the original leading singular value of
//! every frame. Extraction divides the observed values by these to obtain
//! the detection ratios, so the numbers must survive a save/load round trip
//! bit-exactly; they are serialised with 17 significant digits.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::codec::bits::{BITS_PER_CHAR, KNOWN_CHAR};
use crate::error::{Error, Result};

/// Current key file format revision.
pub const KEY_FORMAT_VERSION: u32 = 1;

/// Which transform the embedding level ran in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    DctSvd,
    DwtSvd,
}

impl std::fmt::Display for Domain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Domain::DctSvd => write!(f, "dct-svd"),
            Domain::DwtSvd => write!(f, "dwt-svd"),
        }
    }
}

/// Key material for one embedding level.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainKey {
    pub domain: Domain,
    pub alpha: f64,
    pub n_frames: usize,
    pub frame_length: usize,
    /// Payload bit count, excluding the 7 reference-character bits.
    pub payload_bits: usize,
    /// Original leading singular value of each frame, in frame order.
    pub s11_originals: Vec<f64>,
}

impl DomainKey {
    /// Length of the signal this key's framing covers.
    pub fn signal_length(&self) -> usize {
        self.n_frames * self.frame_length
    }
}

/// Complete key material for a dual-domain embedding.
#[derive(Debug, Clone, PartialEq)]
pub struct KeyFile {
    pub alpha: f64,
    pub sample_rate: u32,
    /// Length of the watermarked signal, equal to the outer (DCT) level's
    /// frame count times its frame length.
    pub padded_length: usize,
    pub dct_key: DomainKey,
    pub dwt_key: DomainKey,
}

#[derive(Serialize, Deserialize)]
struct WireDomain {
    n_frames: usize,
    frame_length: usize,
    payload_bits: usize,
    s11_originals: Vec<Box<RawValue>>,
}

#[derive(Serialize, Deserialize)]
struct WireKeyFile {
    format_version: u32,
    alpha: f64,
    sample_rate: u32,
    padded_length: usize,
    known_char: String,
    dct_svd: WireDomain,
    dwt_svd: WireDomain,
}

fn raw_number(v: f64) -> Box<RawValue> {
    // 17 significant digits round-trip any f64 exactly.
    RawValue::from_string(format!("{v:.16e}")).expect("formatted float is valid JSON")
}

fn wire_domain(key: &DomainKey) -> WireDomain {
    WireDomain {
        n_frames: key.n_frames,
        frame_length: key.frame_length,
        payload_bits: key.payload_bits,
        s11_originals: key.s11_originals.iter().map(|&v| raw_number(v)).collect(),
    }
}

fn parse_domain(wire: &WireDomain, domain: Domain, alpha: f64) -> Result<DomainKey> {
    let mut s11 = Vec::with_capacity(wire.s11_originals.len());
    for raw in &wire.s11_originals {
        let v: f64 = raw.get().trim().parse().map_err(|_| {
            Error::InvalidKey(format!("unparseable singular value {:?}", raw.get()))
        })?;
        s11.push(v);
    }
    let key = DomainKey {
        domain,
        alpha,
        n_frames: wire.n_frames,
        frame_length: wire.frame_length,
        payload_bits: wire.payload_bits,
        s11_originals: s11,
    };
    validate_domain(&key)?;
    Ok(key)
}

fn validate_domain(key: &DomainKey) -> Result<()> {
    let d = key.domain;
    if key.n_frames != BITS_PER_CHAR + key.payload_bits {
        return Err(Error::InvalidKey(format!(
            "{d}: frame count {} does not equal {} reference bits + {} payload bits",
            key.n_frames, BITS_PER_CHAR, key.payload_bits
        )));
    }
    if key.payload_bits == 0 || !key.payload_bits.is_multiple_of(BITS_PER_CHAR) {
        return Err(Error::InvalidKey(format!(
            "{d}: payload bit count {} is not a positive multiple of {BITS_PER_CHAR}",
            key.payload_bits
        )));
    }
    if key.frame_length < crate::dsp::MIN_FRAME_LEN
        || !key.frame_length.is_multiple_of(crate::dsp::FRAME_LEN_MULTIPLE)
    {
        return Err(Error::InvalidKey(format!(
            "{d}: frame length {} violates the framing rules",
            key.frame_length
        )));
    }
    if key.s11_originals.len() != key.n_frames {
        return Err(Error::InvalidKey(format!(
            "{d}: {} stored singular values for {} frames",
            key.s11_originals.len(),
            key.n_frames
        )));
    }
    if let Some(bad) = key
        .s11_originals
        .iter()
        .position(|v| !v.is_finite() || *v <= 0.0)
    {
        return Err(Error::InvalidKey(format!(
            "{d}: singular value at frame {bad} is {}, expected a positive finite number",
            key.s11_originals[bad]
        )));
    }
    Ok(())
}

impl KeyFile {
    /// Check internal consistency; called on every load and before save.
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidKey(format!(
                "alpha {} outside the open interval (0, 1)",
                self.alpha
            )));
        }
        if self.sample_rate == 0 {
            return Err(Error::InvalidKey("sample rate must be positive".into()));
        }
        if self.dct_key.domain != Domain::DctSvd || self.dwt_key.domain != Domain::DwtSvd {
            return Err(Error::InvalidKey(
                "domain tags are swapped or duplicated".into(),
            ));
        }
        validate_domain(&self.dct_key)?;
        validate_domain(&self.dwt_key)?;
        if self.dct_key.alpha != self.alpha || self.dwt_key.alpha != self.alpha {
            return Err(Error::InvalidKey(
                "per-domain alpha disagrees with file alpha".into(),
            ));
        }
        if self.padded_length != self.dct_key.signal_length() {
            return Err(Error::InvalidKey(format!(
                "padded length {} does not match the outer framing {}",
                self.padded_length,
                self.dct_key.signal_length()
            )));
        }
        if self.dwt_key.signal_length() > self.padded_length {
            return Err(Error::InvalidKey(format!(
                "inner framing {} exceeds padded length {}",
                self.dwt_key.signal_length(),
                self.padded_length
            )));
        }
        Ok(())
    }

    /// Serialise to the JSON wire format.
    pub fn to_json(&self) -> Result<String> {
        self.validate()?;
        let wire = WireKeyFile {
            format_version: KEY_FORMAT_VERSION,
            alpha: self.alpha,
            sample_rate: self.sample_rate,
            padded_length: self.padded_length,
            known_char: KNOWN_CHAR.to_string(),
            dct_svd: wire_domain(&self.dct_key),
            dwt_svd: wire_domain(&self.dwt_key),
        };
        Ok(serde_json::to_string_pretty(&wire)?)
    }

    /// Parse and validate the JSON wire format.
    pub fn from_json(json: &str) -> Result<KeyFile> {
        let wire: WireKeyFile = serde_json::from_str(json)
            .map_err(|e| Error::InvalidKey(format!("bad key JSON: {e}")))?;
        if wire.format_version != KEY_FORMAT_VERSION {
            return Err(Error::InvalidKey(format!(
                "unsupported key format version {}",
                wire.format_version
            )));
        }
        if wire.known_char != KNOWN_CHAR.to_string() {
            return Err(Error::InvalidKey(format!(
                "unsupported reference character {:?}",
                wire.known_char
            )));
        }
        let key = KeyFile {
            alpha: wire.alpha,
            sample_rate: wire.sample_rate,
            padded_length: wire.padded_length,
            dct_key: parse_domain(&wire.dct_svd, Domain::DctSvd, wire.alpha)?,
            dwt_key: parse_domain(&wire.dwt_svd, Domain::DwtSvd, wire.alpha)?,
        };
        key.validate()?;
        Ok(key)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<KeyFile> {
        let json = std::fs::read_to_string(path)?;
        KeyFile::from_json(&json)
    }
}
