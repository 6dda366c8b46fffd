use alloc::vec;
use alloc::vec::Vec;

use crate::math::dotf;

/// Row-addressable parameter storage for the embedding trainer.
///
/// The single-worker trainer runs over [`Matrix`]; parallel trainers supply
/// their own shared implementation.
pub trait RowStore {
    fn dim(&self) -> usize;

    fn read_row(&self, row: usize, out: &mut [f32]);

    /// `row += alpha * x`
    fn add_row(&mut self, row: usize, alpha: f32, x: &[f32]);

    fn dot_row(&self, row: usize, x: &[f32], scratch: &mut [f32]) -> f32 {
        self.read_row(row, scratch);
        dotf(scratch, x)
    }
}

/// Dense row-major matrix of 32-bit reals.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f32>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Panics if `data.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f32>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f32] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f32] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f32] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f32> {
        self.data
    }
}

impl RowStore for Matrix {
    fn dim(&self) -> usize {
        self.cols
    }

    fn read_row(&self, row: usize, out: &mut [f32]) {
        out.copy_from_slice(self.row(row));
    }

    #[inline]
    fn add_row(&mut self, row: usize, alpha: f32, x: &[f32]) {
        for (r, v) in self.row_mut(row).iter_mut().zip(x) {
            *r += alpha * v;
        }
    }

    #[inline]
    fn dot_row(&self, row: usize, x: &[f32], _scratch: &mut [f32]) -> f32 {
        dotf(self.row(row), x)
    }
}
