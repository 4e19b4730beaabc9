//! Recursive binary wavelet matrices.
//!
//! `B_n` is defined for every even `n >= 2`. The two base cases are fixed;
//! larger matrices are assembled from `B_{n-4}` as
//!
//! ```text
//!        | Γ   Δ |        Γ = | 1 (2×2)       1 (2×(n-4)) |
//! B_n =  |       |            | 1 ((n-4)×2)   ¬B_{n-4}    |
//!        | Δᵀ  Λ |
//!                         Δᵀ = two rows of [1 0 1 0 …],  Λ = | 1 1 |
//!                                                              | 1 0 |
//! ```

use crate::error::{Error, Result};

pub type BinaryMatrix = Vec<Vec<u8>>;

pub fn binary_wavelet_matrix(n: usize) -> Result<BinaryMatrix> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidDimension(n));
    }
    Ok(build(n))
}

fn build(n: usize) -> BinaryMatrix {
    match n {
        2 => vec![vec![1, 1], vec![1, 0]],
        4 => vec![vec![1, 1, 1, 1], vec![1, 0, 0, 0], vec![1, 0, 1, 1], vec![1, 0, 1, 0]],
        _ => {
            let inner = build(n - 4);
            let mut out = vec![vec![0u8; n]; n];
            let g = n - 2;
            for (r, row) in out.iter_mut().enumerate().take(g) {
                for (c, v) in row.iter_mut().enumerate().take(g) {
                    *v = if r < 2 || c < 2 { 1 } else { 1 - inner[r - 2][c - 2] };
                }
                // Δ: column block, ones on even rows
                let delta = u8::from(r % 2 == 0);
                row[g] = delta;
                row[g + 1] = delta;
            }
            for k in 0..2 {
                for c in 0..g {
                    out[g + k][c] = u8::from(c % 2 == 0);
                }
            }
            out[g][g] = 1;
            out[g][g + 1] = 1;
            out[g + 1][g] = 1;
            out[g + 1][g + 1] = 0;
            out
        }
    }
}

/// Number of adjacent positions holding different values.
pub fn sequency<T: PartialEq>(row: &[T]) -> Result<usize> {
    if row.is_empty() {
        return Err(Error::InvalidParameter("sequency of an empty row".into()));
    }
    Ok(row.windows(2).filter(|w| w[0] != w[1]).count())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_cases() {
        assert_eq!(binary_wavelet_matrix(2).unwrap(), vec![vec![1, 1], vec![1, 0]]);
        assert_eq!(
            binary_wavelet_matrix(4).unwrap(),
            vec![vec![1, 1, 1, 1], vec![1, 0, 0, 0], vec![1, 0, 1, 1], vec![1, 0, 1, 0]]
        );
    }

    #[test]
    fn b8_matches_golden_file() {
        let golden: BinaryMatrix = serde_json::from_str(include_str!("../../tests/data/b8.json")).unwrap();
        assert_eq!(binary_wavelet_matrix(8).unwrap(), golden);
    }

    #[test]
    fn rejects_odd_or_small() {
        for n in [0, 1, 3, 7] {
            assert!(matches!(binary_wavelet_matrix(n), Err(Error::InvalidDimension(_))));
        }
    }

    #[test]
    fn every_even_size_is_square_with_ones_on_top() {
        for n in (2..=64).step_by(2) {
            let b = binary_wavelet_matrix(n).unwrap();
            assert_eq!(b.len(), n);
            assert!(b.iter().all(|r| r.len() == n));
            assert!(b[0].iter().all(|&v| v == 1));
            assert!(b.iter().all(|r| r[0] == 1));
        }
    }

    #[test]
    fn base_sequencies_increase() {
        let s2: Vec<usize> = binary_wavelet_matrix(2).unwrap().iter().map(|r| sequency(r).unwrap()).collect();
        assert_eq!(s2, vec![0, 1]);
        let s4: Vec<usize> = binary_wavelet_matrix(4).unwrap().iter().map(|r| sequency(r).unwrap()).collect();
        assert_eq!(s4, vec![0, 1, 2, 3]);
    }

    #[test]
    fn sequency_examples() {
        assert_eq!(sequency(&[1, 1, 1, 1]).unwrap(), 0);
        assert_eq!(sequency(&[1, 0, 1, 0]).unwrap(), 3);
        assert_eq!(sequency(&[1, 0, 0, 0]).unwrap(), 1);
        assert!(sequency::<u8>(&[]).is_err());
    }
}
