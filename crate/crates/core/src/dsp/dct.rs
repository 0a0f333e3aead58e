//! Orthonormal type-II discrete cosine transform and its inverse.
//!
//! The transform is computed through a length-2N complex FFT on the mirrored
//! signal, which keeps long frames fast while staying bit-stable across runs.

use std::f64::consts::{PI, SQRT_2};
use std::sync::Mutex;

use once_cell::sync::Lazy;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

// One process-wide planner; rustfft caches plans per length behind it.
static PLANNER: Lazy<Mutex<FftPlanner<f64>>> = Lazy::new(|| Mutex::new(FftPlanner::new()));

/// Orthonormal DCT-II of `x`. The output has the same length as the input
/// and the same Euclidean norm.
pub fn dct_forward(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![x[0]];
    }
    let m = 2 * n;
    let fft = PLANNER.lock().unwrap().plan_fft_forward(m);
    let mut buf: Vec<Complex<f64>> = Vec::with_capacity(m);
    buf.extend(x.iter().map(|&v| Complex::new(v, 0.0)));
    buf.extend(x.iter().rev().map(|&v| Complex::new(v, 0.0)));
    fft.process(&mut buf);

    let norm = (2.0 / n as f64).sqrt();
    let mut out = Vec::with_capacity(n);
    for (j, z) in buf.iter().take(n).enumerate() {
        let angle = -PI * j as f64 / m as f64;
        let unnormalized = (Complex::new(angle.cos(), angle.sin()) * z).re * 0.5;
        let scale = if j == 0 { norm / SQRT_2 } else { norm };
        out.push(unnormalized * scale);
    }
    out
}

/// Inverse of [`dct_forward`].
pub fn dct_inverse(coeffs: &[f64]) -> Vec<f64> {
    let n = coeffs.len();
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![coeffs[0]];
    }
    let m = 2 * n;
    let ifft = PLANNER.lock().unwrap().plan_fft_inverse(m);

    let norm = (2.0 / n as f64).sqrt();
    let mut buf = vec![Complex::new(0.0, 0.0); m];
    for (j, &c) in coeffs.iter().enumerate() {
        let scale = if j == 0 { norm / SQRT_2 } else { norm };
        let angle = PI * j as f64 / m as f64;
        let z = Complex::new(angle.cos(), angle.sin()) * (2.0 * c / scale);
        buf[j] = z;
        if j > 0 {
            buf[m - j] = z.conj();
        }
    }
    ifft.process(&mut buf);

    let inv_m = 1.0 / m as f64;
    buf.iter().take(n).map(|z| z.re * inv_m).collect()
}
