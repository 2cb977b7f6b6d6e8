use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Relative singular-value cutoff below which a matrix counts as rank deficient.
pub const RANK_TOLERANCE: f64 = 1e-12;

/// Dense complex matrix with at least one row and one column.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_row_slice(rows: usize, cols: usize, entries: &[C64]) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::domain("matrix dimensions must be positive"));
        }
        if entries.len() != rows * cols {
            return Err(Error::domain(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::domain("matrix entries must be finite"));
        }
        Ok(Self(DMatrix::from_row_slice(rows, cols, entries)))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub(crate) fn from_inner(m: DMatrix<C64>) -> Self {
        Self(m)
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    pub fn as_inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    /// Columns `cols` (in the given order) as a new matrix.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self(self.0.select_columns(cols.iter()))
    }

    pub fn mul(&self, rhs: &ComplexMatrix) -> Result<Self> {
        if self.cols() != rhs.rows() {
            return Err(Error::domain(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows(),
                self.cols(),
                rhs.rows(),
                rhs.cols()
            )));
        }
        Ok(Self(&self.0 * &rhs.0))
    }

    /// Largest element-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        (&self.0 - &other.0).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Squared Euclidean norm of row `i`.
    pub fn row_norm_sqr(&self, i: usize) -> f64 {
        self.0.row(i).iter().map(|z| z.norm_sqr()).sum()
    }

    /// Squared norm of the row vector `row_i(self) * rhs`.
    pub fn row_times_norm_sqr(&self, i: usize, rhs: &ComplexMatrix) -> f64 {
        (self.0.row(i) * &rhs.0).iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Moore–Penrose pseudo-inverse of a full-column-rank matrix, via the SVD.
pub fn pseudo_inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if m.rows() < m.cols() {
        return Err(Error::domain(format!(
            "pseudo-inverse needs rows >= cols, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let svd = m.0.clone().svd(true, true);
    let largest = svd.singular_values.max();
    let smallest = svd.singular_values.min();
    if largest == 0.0 || smallest < RANK_TOLERANCE * largest {
        let ratio = if largest == 0.0 { 0.0 } else { smallest / largest };
        return Err(Error::Singular { ratio });
    }
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^H");
    // X^+ = V Σ^{-1} U^H
    let mut v = v_t.adjoint();
    for (j, s) in svd.singular_values.iter().enumerate() {
        v.column_mut(j).scale_mut(1.0 / s);
    }
    Ok(ComplexMatrix(v * u.adjoint()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn identity_is_its_own_inverse() {
        let i4 = ComplexMatrix::identity(4);
        let p = pseudo_inverse(&i4).unwrap();
        assert!(p.max_abs_diff(&i4) < 1e-14);
    }

    #[test]
    fn column_vector_hand_computed() {
        // [1; i]^+ = [1/2, -i/2]
        let m = ComplexMatrix::from_row_slice(2, 1, &[c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let p = pseudo_inverse(&m).unwrap();
        assert_eq!(p.rows(), 1);
        assert!((p.get(0, 0) - c(0.5, 0.0)).norm() < 1e-15);
        assert!((p.get(0, 1) - c(0.0, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn rank_deficient_rejected() {
        let m = ComplexMatrix::from_row_slice(
            3,
            2,
            &[c(1.0, 1.0), c(2.0, 2.0), c(0.5, 0.0), c(1.0, 0.0), c(0.0, -1.0), c(0.0, -2.0)],
        )
        .unwrap();
        assert!(matches!(pseudo_inverse(&m), Err(Error::Singular { .. })));
        assert!(matches!(pseudo_inverse(&ComplexMatrix::zeros(3, 2)), Err(Error::Singular { .. })));
    }

    #[test]
    fn wide_matrix_rejected() {
        assert!(matches!(pseudo_inverse(&ComplexMatrix::zeros(2, 3)), Err(Error::Domain(_))));
    }

    #[test]
    fn construction_checks() {
        assert!(ComplexMatrix::from_row_slice(0, 1, &[]).is_err());
        assert!(ComplexMatrix::from_row_slice(1, 2, &[c(1.0, 0.0)]).is_err());
        assert!(ComplexMatrix::from_row_slice(1, 1, &[c(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn row_helpers() {
        let m = ComplexMatrix::from_row_slice(2, 2, &[c(1.0, 1.0), c(0.0, 2.0), c(3.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        assert!((m.row_norm_sqr(0) - 6.0).abs() < 1e-15);
        let i2 = ComplexMatrix::identity(2);
        assert!((m.row_times_norm_sqr(1, &i2) - 9.0).abs() < 1e-15);
    }
}
