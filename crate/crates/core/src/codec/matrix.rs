//! Selection of transform coefficients into the small embedding matrices.
//!
//! Each frame contributes one matrix per domain: 3x3 from the DCT spectrum
//! (first, middle, last three coefficients) and 4x4 from the wavelet detail
//! bands (first four coefficients of each band). The scatter functions write
//! a possibly modified matrix back to exactly the positions it was read from.

use crate::dsp::dwt::DwtPyramid;
use crate::dsp::svd::SmallMatrix;
use crate::error::{Error, Result};

/// Indices of the three DCT coefficient triples used by the 3x3 matrix.
fn dct_rows(len: usize) -> [[usize; 3]; 3] {
    let mid = len / 2;
    [
        [0, 1, 2],
        [mid - 1, mid, mid + 1],
        [len - 3, len - 2, len - 1],
    ]
}

/// 3x3 matrix from a frame's DCT coefficients.
pub fn build_dct_matrix(coeffs: &[f64]) -> Result<SmallMatrix> {
    if coeffs.len() < 9 {
        return Err(Error::InvalidInput(format!(
            "need at least 9 DCT coefficients, got {}",
            coeffs.len()
        )));
    }
    let mut m = SmallMatrix::zero(3);
    for (r, row) in dct_rows(coeffs.len()).iter().enumerate() {
        for (c, &idx) in row.iter().enumerate() {
            m.data[r][c] = coeffs[idx];
        }
    }
    Ok(m)
}

/// Write a 3x3 matrix back into the coefficient positions it was built from.
pub fn scatter_dct_matrix(m: &SmallMatrix, coeffs: &mut [f64]) -> Result<()> {
    if coeffs.len() < 9 {
        return Err(Error::InvalidInput(format!(
            "need at least 9 DCT coefficients, got {}",
            coeffs.len()
        )));
    }
    for (r, row) in dct_rows(coeffs.len()).iter().enumerate() {
        for (c, &idx) in row.iter().enumerate() {
            coeffs[idx] = m.data[r][c];
        }
    }
    Ok(())
}

/// 4x4 matrix from the first four coefficients of each detail band.
pub fn build_dwt_matrix(p: &DwtPyramid) -> Result<SmallMatrix> {
    let mut m = SmallMatrix::zero(4);
    for level in 1..=4 {
        let band = p.detail(level);
        if band.len() < 4 {
            return Err(Error::InvalidInput(format!(
                "detail band {level} has {} coefficients, need 4",
                band.len()
            )));
        }
        m.data[level - 1][..4].copy_from_slice(&band[..4]);
    }
    Ok(m)
}

/// Write a 4x4 matrix back into the leading coefficients of each band.
pub fn scatter_dwt_matrix(m: &SmallMatrix, p: &mut DwtPyramid) -> Result<()> {
    for level in 1..=4 {
        let band = p.detail_mut(level);
        if band.len() < 4 {
            return Err(Error::InvalidInput(format!(
                "detail band {level} has {} coefficients, need 4",
                band.len()
            )));
        }
        band[..4].copy_from_slice(&m.data[level - 1][..4]);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsp::dwt::dwt4_forward;

    #[test]
    fn dct_matrix_takes_first_middle_and_last_triples() {
        let coeffs: Vec<f64> = (0..16).map(|i| i as f64).collect();
        let m = build_dct_matrix(&coeffs).unwrap();
        assert_eq!(m.data[0][..3], [0.0, 1.0, 2.0]);
        assert_eq!(m.data[1][..3], [7.0, 8.0, 9.0]);
        assert_eq!(m.data[2][..3], [13.0, 14.0, 15.0]);
    }

    #[test]
    fn nine_coefficients_partition_exactly() {
        let coeffs: Vec<f64> = (0..9).map(|i| i as f64).collect();
        let m = build_dct_matrix(&coeffs).unwrap();
        assert_eq!(m.data[0][..3], [0.0, 1.0, 2.0]);
        assert_eq!(m.data[1][..3], [3.0, 4.0, 5.0]);
        assert_eq!(m.data[2][..3], [6.0, 7.0, 8.0]);
    }

    #[test]
    fn dct_scatter_of_unmodified_matrix_changes_nothing() {
        let coeffs: Vec<f64> = (0..64).map(|i| (i as f64).sin()).collect();
        let mut copy = coeffs.clone();
        let m = build_dct_matrix(&copy).unwrap();
        scatter_dct_matrix(&m, &mut copy).unwrap();
        assert_eq!(copy, coeffs);
    }

    #[test]
    fn dct_scatter_of_modified_entry_changes_exactly_one_coefficient() {
        let coeffs: Vec<f64> = (0..64).map(|i| i as f64).collect();
        let mut copy = coeffs.clone();
        let mut m = build_dct_matrix(&copy).unwrap();
        m.data[1][1] = -99.0;
        scatter_dct_matrix(&m, &mut copy).unwrap();
        let diffs: Vec<usize> = (0..64).filter(|&i| copy[i] != coeffs[i]).collect();
        assert_eq!(diffs, vec![32], "only the centre coefficient moves");
        assert_eq!(copy[32], -99.0);
    }

    #[test]
    fn dwt_matrix_rows_are_the_band_heads() {
        let mut p = dwt4_forward(&vec![0.0; 64]).unwrap();
        p.d1[..4].copy_from_slice(&[1.0, 2.0, 3.0, 4.0]);
        p.d2[..4].copy_from_slice(&[5.0, 6.0, 7.0, 8.0]);
        p.d3[..4].copy_from_slice(&[9.0, 10.0, 11.0, 12.0]);
        p.d4[..4].copy_from_slice(&[13.0, 14.0, 15.0, 16.0]);
        let m = build_dwt_matrix(&p).unwrap();
        for (r, want) in [
            [1.0, 2.0, 3.0, 4.0],
            [5.0, 6.0, 7.0, 8.0],
            [9.0, 10.0, 11.0, 12.0],
            [13.0, 14.0, 15.0, 16.0],
        ]
        .iter()
        .enumerate()
        {
            assert_eq!(&m.data[r][..4], want.as_slice());
        }
    }

    #[test]
    fn dwt_scatter_round_trips() {
        let x: Vec<f64> = (0..128).map(|i| ((i * 37) % 11) as f64 - 5.0).collect();
        let p = dwt4_forward(&x).unwrap();
        let mut q = p.clone();
        let m = build_dwt_matrix(&q).unwrap();
        scatter_dwt_matrix(&m, &mut q).unwrap();
        assert_eq!(q.d1, p.d1);
        assert_eq!(q.d4, p.d4);
    }

    #[test]
    fn short_inputs_are_rejected() {
        assert!(build_dct_matrix(&[0.0; 8]).is_err());
        assert!(scatter_dct_matrix(&SmallMatrix::zero(3), &mut [0.0; 5]).is_err());
    }
}
