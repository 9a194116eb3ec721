use nalgebra::{DMatrix, DVector};

use super::dct::Dct2d;
use crate::error::{Error, Result};
use crate::measurement::PixelMask;

/// A real linear map `A: R^cols -> R^rows` with its transpose.
pub trait LinearOperator {
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;
    /// `out = A x`
    fn apply(&self, x: &[f64], out: &mut [f64]);
    /// `out = A^T y`
    fn adjoint(&self, y: &[f64], out: &mut [f64]);
    /// An upper bound on `|A|_2^2`, the Lipschitz constant of the gradient
    /// of `0.5 |b - A x|^2`.
    fn lipschitz(&self) -> f64;
}

/// Pixel selection composed with the inverse 2D DCT: coefficients in,
/// retained pixel values out. Never materialized.
pub struct MaskedDct<'a> {
    mask: &'a PixelMask,
    dct: Dct2d,
    scratch: std::cell::RefCell<Vec<f64>>,
}

impl<'a> MaskedDct<'a> {
    pub fn new(mask: &'a PixelMask) -> Self {
        let n = mask.width() * mask.height();
        Self {
            mask,
            dct: Dct2d::new(mask.width(), mask.height()),
            scratch: std::cell::RefCell::new(vec![0.0; n]),
        }
    }

    pub fn transform(&self) -> &Dct2d {
        &self.dct
    }
}

impl LinearOperator for MaskedDct<'_> {
    fn rows(&self) -> usize {
        self.mask.len()
    }

    fn cols(&self) -> usize {
        self.mask.width() * self.mask.height()
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        let mut buf = self.scratch.borrow_mut();
        buf.copy_from_slice(x);
        self.dct.inverse(&mut buf);
        for (o, &i) in out.iter_mut().zip(self.mask.indices()) {
            *o = buf[i];
        }
    }

    fn adjoint(&self, y: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        for (&v, &i) in y.iter().zip(self.mask.indices()) {
            out[i] = v;
        }
        self.dct.forward(out);
    }

    fn lipschitz(&self) -> f64 {
        // rows of an orthonormal matrix
        1.0
    }
}

/// An explicit matrix, for small test problems.
pub struct DenseOperator {
    matrix: DMatrix<f64>,
    lipschitz: f64,
}

impl DenseOperator {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() == 0 || matrix.ncols() == 0 {
            return Err(Error::Parameter("empty matrix".into()));
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("matrix has non-finite entries".into()));
        }
        let sigma_max = matrix.singular_values().iter().cloned().fold(0.0, f64::max);
        Ok(Self {
            matrix,
            lipschitz: sigma_max * sigma_max,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Parameter("ragged matrix rows".into()));
        }
        Self::new(DMatrix::from_fn(m, n, |i, j| rows[i][j]))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

impl LinearOperator for DenseOperator {
    fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    fn cols(&self) -> usize {
        self.matrix.ncols()
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        let y = &self.matrix * DVector::from_column_slice(x);
        out.copy_from_slice(y.as_slice());
    }

    fn adjoint(&self, y: &[f64], out: &mut [f64]) {
        let x = self.matrix.tr_mul(&DVector::from_column_slice(y));
        out.copy_from_slice(x.as_slice());
    }

    fn lipschitz(&self) -> f64 {
        self.lipschitz
    }
}
