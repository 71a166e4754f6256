//! Systematic maximum-distance-separable erasure code over GF(2^8).
//!
//! A block of `k` source symbols is read as the values of the unique
//! polynomial of degree `< k` at the field points `0, 1, .., k-1`. Codeword
//! symbol `j` is that polynomial evaluated at point `j`, for `j < n <= 255`.
//! The first `k` codeword symbols are therefore the source itself, and any
//! `k` distinct codeword symbols determine the polynomial (Lagrange
//! interpolation), which is the any-`k`-of-`n` property.

use alloc::vec;
use alloc::vec::Vec;

use crate::gf256;

/// Lagrange basis weights: `value(target) = Σ weights[i] * value(points[i])`.
pub(crate) fn lagrange_weights(points: &[u8], target: u8) -> Vec<u8> {
    if let Some(pos) = points.iter().position(|&p| p == target) {
        let mut w = vec![0u8; points.len()];
        w[pos] = 1;
        return w;
    }
    points
        .iter()
        .enumerate()
        .map(|(i, &xi)| {
            let mut num = 1u8;
            let mut den = 1u8;
            for (j, &xj) in points.iter().enumerate() {
                if i != j {
                    num = gf256::mul(num, gf256::add(target, xj));
                    den = gf256::mul(den, gf256::add(xi, xj));
                }
            }
            gf256::div(num, den)
        })
        .collect()
}

/// An `(n, k)` systematic code. Codeword symbol `j` sits in packet `j`.
#[derive(Debug, Clone)]
pub(crate) struct SystematicCode {
    k: usize,
    n: usize,
    /// Row `j - k` holds the weights producing parity symbol `j`.
    parity_rows: Vec<Vec<u8>>,
}

impl SystematicCode {
    pub(crate) fn new(k: usize, n: usize) -> Self {
        assert!(k >= 1 && k <= n && n <= 255, "invalid code ({n}, {k})");
        let points: Vec<u8> = (0..k as u8).collect();
        let parity_rows = (k..n).map(|j| lagrange_weights(&points, j as u8)).collect();
        Self { k, n, parity_rows }
    }

    /// Encodes column-wise: `columns[i]` holds source symbol `i` of every
    /// block. Writes codeword symbol `j` of every block into `out[j]`.
    pub(crate) fn encode_columns(&self, columns: &[Vec<u8>], out: &mut [Vec<u8>]) {
        debug_assert_eq!(columns.len(), self.k);
        debug_assert_eq!(out.len(), self.n);
        for (j, dst) in out.iter_mut().enumerate() {
            if j < self.k {
                dst.copy_from_slice(&columns[j]);
            } else {
                dst.iter_mut().for_each(|b| *b = 0);
                for (col, &w) in columns.iter().zip(&self.parity_rows[j - self.k]) {
                    gf256::mul_add_slice(dst, col, w);
                }
            }
        }
    }

    /// Recovers the `k` source columns from `k` received codeword columns.
    ///
    /// `received` pairs a codeword position with its column; positions must
    /// be distinct and there must be exactly `k` of them.
    pub(crate) fn decode_columns(&self, received: &[(u8, &[u8])]) -> Vec<Vec<u8>> {
        debug_assert_eq!(received.len(), self.k);
        let width = received.first().map_or(0, |(_, c)| c.len());
        let points: Vec<u8> = received.iter().map(|(p, _)| *p).collect();
        (0..self.k as u8)
            .map(|target| {
                let mut col = vec![0u8; width];
                for ((_, src), w) in received.iter().zip(lagrange_weights(&points, target)) {
                    gf256::mul_add_slice(&mut col, src, w);
                }
                col
            })
            .collect()
    }
}
