//! Minimal WAV reading and writing: mono or multichannel PCM16 and float32
//! in, mono float32 or PCM16 out.

use std::path::Path;

use crate::audio::AudioBuffer;
use crate::error::{Error, Result};

const RIFF: &[u8; 4] = b"RIFF";
const WAVE: &[u8; 4] = b"WAVE";
const FMT: &[u8; 4] = b"fmt ";
const DATA: &[u8; 4] = b"data";
const FACT: &[u8; 4] = b"fact";

const FORMAT_PCM: u16 = 1;
const FORMAT_FLOAT: u16 = 3;

const PCM16_SCALE: f64 = 32768.0;

/// Decode a WAV byte stream into a mono buffer.
///
/// Multichannel files are downmixed by averaging the channels. Only PCM16
/// and 32-bit float sample formats are understood.
pub fn decode_wav(bytes: &[u8]) -> Result<AudioBuffer> {
    if bytes.len() < 12 || &bytes[0..4] != RIFF {
        return Err(Error::UnsupportedFormat("not a RIFF file".into()));
    }
    if &bytes[8..12] != WAVE {
        return Err(Error::UnsupportedFormat("RIFF file is not WAVE".into()));
    }
    let mut fmt: Option<&[u8]> = None;
    let mut data: Option<&[u8]> = None;
    let mut pos = 12;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let size = u32::from_le_bytes(bytes[pos + 4..pos + 8].try_into().unwrap()) as usize;
        let body_start = pos + 8;
        let body_end = body_start
            .checked_add(size)
            .ok_or_else(|| Error::CorruptFile("chunk size overflows".into()))?;
        if body_end > bytes.len() {
            return Err(Error::CorruptFile(format!(
                "chunk {} claims {size} bytes but the file ends early",
                String::from_utf8_lossy(id)
            )));
        }
        match id {
            b"fmt " => fmt = Some(&bytes[body_start..body_end]),
            b"data" => data = Some(&bytes[body_start..body_end]),
            _ => {}
        }
        // Chunks are word aligned; odd sizes carry a pad byte.
        pos = body_end + (size & 1);
    }
    let fmt = fmt.ok_or_else(|| Error::CorruptFile("missing fmt chunk".into()))?;
    let data = data.ok_or_else(|| Error::CorruptFile("missing data chunk".into()))?;
    if fmt.len() < 16 {
        return Err(Error::CorruptFile("fmt chunk shorter than 16 bytes".into()));
    }
    let format = u16::from_le_bytes(fmt[0..2].try_into().unwrap());
    let channels = u16::from_le_bytes(fmt[2..4].try_into().unwrap()) as usize;
    let sample_rate = u32::from_le_bytes(fmt[4..8].try_into().unwrap());
    let bits = u16::from_le_bytes(fmt[14..16].try_into().unwrap());
    if channels == 0 {
        return Err(Error::CorruptFile(
            "fmt chunk declares zero channels".into(),
        ));
    }
    if sample_rate == 0 {
        return Err(Error::CorruptFile(
            "fmt chunk declares a zero sample rate".into(),
        ));
    }
    let samples = match (format, bits) {
        (FORMAT_PCM, 16) => decode_pcm16(data, channels)?,
        (FORMAT_FLOAT, 32) => decode_float32(data, channels)?,
        _ => {
            return Err(Error::UnsupportedFormat(format!(
                "sample format {format} at {bits} bits is not supported; use PCM16 or float32"
            )))
        }
    };
    Ok(AudioBuffer::new(samples, sample_rate))
}

fn decode_pcm16(data: &[u8], channels: usize) -> Result<Vec<f64>> {
    let frame_bytes = 2 * channels;
    if !data.len().is_multiple_of(frame_bytes) {
        return Err(Error::CorruptFile(format!(
            "data chunk of {} bytes is not a whole number of {channels}-channel PCM16 frames",
            data.len()
        )));
    }
    let mut samples = Vec::with_capacity(data.len() / frame_bytes);
    for frame in data.chunks_exact(frame_bytes) {
        let mut acc = 0.0;
        for ch in frame.chunks_exact(2) {
            acc += f64::from(i16::from_le_bytes([ch[0], ch[1]])) / PCM16_SCALE;
        }
        samples.push(acc / channels as f64);
    }
    Ok(samples)
}

fn decode_float32(data: &[u8], channels: usize) -> Result<Vec<f64>> {
    let frame_bytes = 4 * channels;
    if !data.len().is_multiple_of(frame_bytes) {
        return Err(Error::CorruptFile(format!(
            "data chunk of {} bytes is not a whole number of {channels}-channel float32 frames",
            data.len()
        )));
    }
    let mut samples = Vec::with_capacity(data.len() / frame_bytes);
    for frame in data.chunks_exact(frame_bytes) {
        let mut acc = 0.0;
        for ch in frame.chunks_exact(4) {
            let v = f64::from(f32::from_le_bytes([ch[0], ch[1], ch[2], ch[3]]));
            if !v.is_finite() {
                return Err(Error::CorruptFile("non-finite float sample".into()));
            }
            acc += v;
        }
        samples.push(acc / channels as f64);
    }
    Ok(samples)
}

/// Encode a mono buffer as 32-bit float WAV bytes.
pub fn encode_wav_float32(audio: &AudioBuffer) -> Vec<u8> {
    let data_len = 4 * audio.len();
    let mut out = Vec::with_capacity(12 + 24 + 12 + 8 + data_len);
    // Riff size: everything after the first 8 bytes. fmt is 24 bytes on
    // disk, fact 12, the data header 8.
    let riff_size = 4 + 24 + 12 + 8 + data_len;
    out.extend_from_slice(RIFF);
    out.extend_from_slice(&(riff_size as u32).to_le_bytes());
    out.extend_from_slice(WAVE);
    push_fmt(&mut out, FORMAT_FLOAT, 32, audio.sample_rate);
    out.extend_from_slice(FACT);
    out.extend_from_slice(&4u32.to_le_bytes());
    out.extend_from_slice(&(audio.len() as u32).to_le_bytes());
    out.extend_from_slice(DATA);
    out.extend_from_slice(&(data_len as u32).to_le_bytes());
    for &s in &audio.samples {
        out.extend_from_slice(&(s as f32).to_le_bytes());
    }
    out
}

/// Encode a mono buffer as PCM16 WAV bytes, clamping out-of-range samples.
pub fn encode_wav_pcm16(audio: &AudioBuffer) -> Vec<u8> {
    let data_len = 2 * audio.len();
    let mut out = Vec::with_capacity(12 + 24 + 8 + data_len);
    let riff_size = 4 + 24 + 8 + data_len;
    out.extend_from_slice(RIFF);
    out.extend_from_slice(&(riff_size as u32).to_le_bytes());
    out.extend_from_slice(WAVE);
    push_fmt(&mut out, FORMAT_PCM, 16, audio.sample_rate);
    out.extend_from_slice(DATA);
    out.extend_from_slice(&(data_len as u32).to_le_bytes());
    for &s in &audio.samples {
        let v = (s * PCM16_SCALE).round().clamp(-32768.0, 32767.0) as i16;
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

fn push_fmt(out: &mut Vec<u8>, format: u16, bits: u16, sample_rate: u32) {
    let block_align = u32::from(bits / 8);
    out.extend_from_slice(FMT);
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&format.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&sample_rate.to_le_bytes());
    out.extend_from_slice(&(sample_rate * block_align).to_le_bytes());
    out.extend_from_slice(&(block_align as u16).to_le_bytes());
    out.extend_from_slice(&bits.to_le_bytes());
}

/// Read a WAV file into a mono buffer.
pub fn wav_read(path: &Path) -> Result<AudioBuffer> {
    decode_wav(&std::fs::read(path)?)
}

/// Write a mono buffer as a 32-bit float WAV file.
pub fn wav_write(path: &Path, audio: &AudioBuffer) -> Result<()> {
    Ok(std::fs::write(path, encode_wav_float32(audio))?)
}

/// Write a mono buffer as a PCM16 WAV file.
pub fn wav_write_pcm16(path: &Path, audio: &AudioBuffer) -> Result<()> {
    Ok(std::fs::write(path, encode_wav_pcm16(audio))?)
}
