//! Shared inputs for the criterion benchmarks.

use audiomark::{synthetic_host, AudioBuffer};

/// Benchmark host: 33.6 seconds at 8 kHz, sized so every scheme frames it
/// without padding (268800 = 21 * 12800 = 14 * 19200 = 28 * 9600).
pub fn bench_host() -> AudioBuffer {
    synthetic_host(268_800, 8000, 42)
}

/// Watermark texts used across the benchmarks.
pub const BENCH_WM_DWT: &str = "ab";
pub const BENCH_WM_DCT: &str = "c";
