//! Text to bit conversion for 7-bit ASCII watermarks.

use crate::error::{Error, Result};

/// Bits per character of the 7-bit ASCII encoding.
pub const BITS_PER_CHAR: usize = 7;

/// Reference character embedded ahead of every payload. Its alternating bit
/// pattern gives the detector one example of each bit value in every other
/// frame, which is what the adaptive thresholds calibrate against.
pub const KNOWN_CHAR: char = 'U';

/// The 7-bit code of ['U'](KNOWN_CHAR), most significant bit first: 1010101.
pub const KNOWN_CHAR_BITS: [u8; 7] = [1, 0, 1, 0, 1, 0, 1];

/// A watermark as bits plus the text it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitPayload {
    pub bits: Vec<u8>,
    pub source_text: String,
}

/// Encode text as the concatenation of 7-bit big-endian character codes.
pub fn text_to_bits(text: &str) -> Result<BitPayload> {
    if text.is_empty() {
        return Err(Error::InvalidInput(
            "watermark text must not be empty".into(),
        ));
    }
    let mut bits = Vec::with_capacity(text.len() * BITS_PER_CHAR);
    for ch in text.chars() {
        let code = ch as u32;
        if code > 127 {
            return Err(Error::InvalidInput(format!(
                "watermark text must be 7-bit ASCII; {ch:?} is not"
            )));
        }
        for k in (0..BITS_PER_CHAR).rev() {
            bits.push(((code >> k) & 1) as u8);
        }
    }
    Ok(BitPayload {
        bits,
        source_text: text.to_string(),
    })
}

/// Decode a bit sequence produced by [`text_to_bits`] back into text.
pub fn bits_to_text(bits: &[u8]) -> Result<String> {
    if !bits.len().is_multiple_of(BITS_PER_CHAR) {
        return Err(Error::InvalidInput(format!(
            "bit count {} is not a multiple of {BITS_PER_CHAR}",
            bits.len()
        )));
    }
    let mut text = String::with_capacity(bits.len() / BITS_PER_CHAR);
    for chunk in bits.chunks(BITS_PER_CHAR) {
        let mut code = 0u32;
        for &b in chunk {
            if b > 1 {
                return Err(Error::InvalidInput(format!("bit value {b} is not 0 or 1")));
            }
            code = (code << 1) | b as u32;
        }
        text.push(char::from_u32(code).expect("7-bit codes are valid chars"));
    }
    Ok(text)
}
