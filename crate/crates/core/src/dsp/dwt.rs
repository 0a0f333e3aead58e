//! Four-level orthonormal Haar wavelet decomposition.

use crate::error::{Error, Result};

/// Number of cascade levels the embedding uses.
pub const DWT_LEVELS: usize = 4;

/// Detail bands `d1` (finest) through `d4` plus the level-4 approximation.
#[derive(Debug, Clone)]
pub struct DwtPyramid {
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
    pub d3: Vec<f64>,
    pub d4: Vec<f64>,
    pub a4: Vec<f64>,
}

impl DwtPyramid {
    /// Detail band by level, 1 through 4.
    pub fn detail(&self, level: usize) -> &[f64] {
        match level {
            1 => &self.d1,
            2 => &self.d2,
            3 => &self.d3,
            4 => &self.d4,
            _ => panic!("detail level {level} out of range 1..=4"),
        }
    }

    pub fn detail_mut(&mut self, level: usize) -> &mut [f64] {
        match level {
            1 => &mut self.d1,
            2 => &mut self.d2,
            3 => &mut self.d3,
            4 => &mut self.d4,
            _ => panic!("detail level {level} out of range 1..=4"),
        }
    }
}

fn haar_step(x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let half = x.len() / 2;
    let mut approx = Vec::with_capacity(half);
    let mut detail = Vec::with_capacity(half);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..half {
        approx.push((x[2 * i] + x[2 * i + 1]) * s);
        detail.push((x[2 * i] - x[2 * i + 1]) * s);
    }
    (approx, detail)
}

fn haar_unstep(approx: &[f64], detail: &[f64]) -> Vec<f64> {
    let mut x = Vec::with_capacity(approx.len() * 2);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for (a, d) in approx.iter().zip(detail) {
        x.push((a + d) * s);
        x.push((a - d) * s);
    }
    x
}

/// Decompose `x` into the four-level pyramid. The length must be a positive
/// multiple of 16 so every level splits evenly.
pub fn dwt4_forward(x: &[f64]) -> Result<DwtPyramid> {
    if x.is_empty() || !x.len().is_multiple_of(16) {
        return Err(Error::InvalidInput(format!(
            "wavelet input length must be a positive multiple of 16, got {}",
            x.len()
        )));
    }
    let (a1, d1) = haar_step(x);
    let (a2, d2) = haar_step(&a1);
    let (a3, d3) = haar_step(&a2);
    let (a4, d4) = haar_step(&a3);
    Ok(DwtPyramid { d1, d2, d3, d4, a4 })
}

/// Rebuild the time signal from a pyramid.
pub fn dwt4_inverse(p: &DwtPyramid) -> Vec<f64> {
    let a3 = haar_unstep(&p.a4, &p.d4);
    let a2 = haar_unstep(&a3, &p.d3);
    let a1 = haar_unstep(&a2, &p.d2);
    haar_unstep(&a1, &p.d1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pseudo_random(len: usize, seed: u64) -> Vec<f64> {
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        (0..len)
            .map(|_| {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
            })
            .collect()
    }

    #[test]
    fn band_lengths_follow_the_cascade() {
        let p = dwt4_forward(&pseudo_random(1600, 1)).unwrap();
        assert_eq!(p.d1.len(), 800);
        assert_eq!(p.d2.len(), 400);
        assert_eq!(p.d3.len(), 200);
        assert_eq!(p.d4.len(), 100);
        assert_eq!(p.a4.len(), 100);
    }

    #[test]
    fn impulse_decomposition_matches_hand_computed_values() {
        let mut x = vec![0.0; 16];
        x[0] = 1.0;
        let p = dwt4_forward(&x).unwrap();
        let r2 = std::f64::consts::SQRT_2;
        assert!((p.d1[0] - 1.0 / r2).abs() < 1e-15);
        assert!((p.d2[0] - 0.5).abs() < 1e-15);
        assert!((p.d3[0] - 1.0 / (2.0 * r2)).abs() < 1e-15);
        assert!((p.d4[0] - 0.25).abs() < 1e-15);
        assert!((p.a4[0] - 0.25).abs() < 1e-15);
        assert!(p.d1[1..].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn forward_then_inverse_restores_the_signal() {
        let x = pseudo_random(4096, 9);
        let back = dwt4_inverse(&dwt4_forward(&x).unwrap());
        for (i, (a, b)) in x.iter().zip(&back).enumerate() {
            assert!((a - b).abs() < 1e-12, "sample {i}: {a} vs {b}");
        }
    }

    #[test]
    fn decomposition_preserves_energy() {
        let x = pseudo_random(640, 3);
        let p = dwt4_forward(&x).unwrap();
        let ex: f64 = x.iter().map(|v| v * v).sum();
        let ep: f64 = [&p.d1, &p.d2, &p.d3, &p.d4, &p.a4]
            .iter()
            .flat_map(|band| band.iter())
            .map(|v| v * v)
            .sum();
        assert!((ex - ep).abs() < 1e-9 * ex);
    }

    #[test]
    fn constant_signal_collects_in_the_approximation() {
        let p = dwt4_forward(&vec![0.25; 64]).unwrap();
        assert!(p.d1.iter().all(|v| v.abs() < 1e-15));
        assert!(p.d4.iter().all(|v| v.abs() < 1e-15));
        // Each level scales a constant by sqrt(2), so four levels give x4.
        assert!(p.a4.iter().all(|v| (v - 1.0).abs() < 1e-15));
    }

    #[test]
    fn invalid_lengths_are_rejected() {
        assert!(dwt4_forward(&[]).is_err());
        assert!(dwt4_forward(&[0.0; 24]).is_err());
    }
}
