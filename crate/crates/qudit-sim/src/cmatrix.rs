//! Minimal dense complex linear algebra: vectors, matrices, Kronecker
//! products, adjoints, and tolerance-based comparison.
//!
//! Values are immutable once constructed and validated (finite entries,
//! consistent shapes, dimension guard), so they can be shared freely across
//! threads. Matrix entries are stored row-major.

use num_complex::Complex64;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::SimError;
use crate::{max_dimension, Result};

/// Default entrywise comparison tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Dense complex column vector.
#[derive(Debug, Clone, PartialEq)]
pub struct CVector {
    entries: Vec<Complex64>,
}

impl CVector {
    /// Validating constructor: entries must be finite and the dimension must
    /// be positive and within the configured maximum.
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(SimError::InvalidArgument("vector dimension must be positive".into()));
        }
        let max = max_dimension();
        if entries.len() > max {
            return Err(SimError::DimensionGuard { dim: entries.len(), max });
        }
        check_finite(&entries)?;
        Ok(Self { entries })
    }

    /// Internal constructor for entries produced by already-validated inputs.
    pub(crate) fn from_entries_unchecked(entries: Vec<Complex64>) -> Self {
        debug_assert!(entries.iter().all(|c| c.re.is_finite() && c.im.is_finite()));
        Self { entries }
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(vec![Complex64::ZERO; dim])
    }

    /// Unit vector with a one at `index`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(SimError::IndexOutOfRange { index, dim });
        }
        let mut entries = vec![Complex64::ZERO; dim];
        entries[index] = Complex64::ONE;
        Self::new(entries)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_entries_unchecked(self.entries.iter().map(|e| e * c).collect())
    }

    /// Kronecker product of two vectors: `(u ⊗ v)[i·v.dim + k] = u[i]·v[k]`.
    pub fn kron(&self, other: &CVector) -> Result<CVector> {
        let dim = checked_product(self.dim(), other.dim())?;
        let mut entries = Vec::with_capacity(dim);
        for a in &self.entries {
            for b in &other.entries {
                entries.push(a * b);
            }
        }
        Ok(Self::from_entries_unchecked(entries))
    }

    /// Largest entrywise modulus of the difference.
    pub fn max_abs_diff(&self, other: &CVector) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(SimError::DimensionMismatch(format!(
                "vector dims {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// True iff the max entrywise modulus of the difference is within `tol`.
    pub fn approx_eq(&self, other: &CVector, tol: f64) -> Result<bool> {
        Ok(self.max_abs_diff(other)? <= tol)
    }
}

/// Serialized as an array of `[re, im]` pairs.
impl Serialize for CVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.entries.len()))?;
        for c in &self.entries {
            seq.serialize_element(&[c.re, c.im])?;
        }
        seq.end()
    }
}

/// True iff a unit-modulus scalar `c` exists with `max|a - c·b| <= tol`.
/// `c` is taken from the entry ratio at `b`'s largest-modulus position, so
/// the check is exact for basis states carrying a pure phase.
pub fn equal_up_to_global_phase(a: &CVector, b: &CVector, tol: f64) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(SimError::DimensionMismatch(format!(
            "vector dims {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    if a.norm() == 0.0 || b.norm() == 0.0 {
        return Err(SimError::ZeroVector);
    }
    let (pivot, _) = b
        .entries
        .iter()
        .enumerate()
        .max_by(|(_, x), (_, y)| x.norm().total_cmp(&y.norm()))
        .expect("nonempty by construction");
    let ratio = a.entries[pivot] / b.entries[pivot];
    let phase = if ratio.norm() > 0.0 { ratio / ratio.norm() } else { Complex64::ONE };
    a.max_abs_diff(&b.scale(phase)).map(|d| d <= tol)
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl CMatrix {
    /// Validating constructor: `entries.len() == rows·cols`, all finite,
    /// total entry count within the configured maximum dimension.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(SimError::InvalidArgument("matrix dimensions must be positive".into()));
        }
        let total = checked_product(rows, cols)?;
        if entries.len() != total {
            return Err(SimError::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {total} entries, got {}",
                entries.len()
            )));
        }
        check_finite(&entries)?;
        Ok(Self { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        let total = checked_product(rows, cols)?;
        let mut entries = Vec::with_capacity(total);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self::new(rows, cols, entries)
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        let total = checked_product(rows, cols)?;
        Self::new(rows, cols, vec![Complex64::ZERO; total])
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, n, |i, j| if i == j { Complex64::ONE } else { Complex64::ZERO })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Standard matrix-vector product. Errors on `cols != v.dim`.
    pub fn matvec(&self, v: &CVector) -> Result<CVector> {
        if self.cols != v.dim() {
            return Err(SimError::DimensionMismatch(format!(
                "matrix cols {} vs vector dim {}",
                self.cols,
                v.dim()
            )));
        }
        let out = (0..self.rows)
            .map(|i| {
                let row = &self.entries[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(v.entries()).map(|(m, x)| m * x).sum()
            })
            .collect();
        Ok(CVector::from_entries_unchecked(out))
    }

    pub fn matmul(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.cols != other.rows {
            return Err(SimError::DimensionMismatch(format!(
                "matrix product {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = vec![Complex64::ZERO; checked_product(self.rows, other.cols)?];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entries[i * self.cols + k];
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    entries[i * other.cols + j] += a * other.entries[k * other.cols + j];
                }
            }
        }
        CMatrix::new(self.rows, other.cols, entries)
    }

    /// Kronecker product:
    /// `(a ⊗ b)[(i·b.rows + k), (j·b.cols + l)] = a[i,j]·b[k,l]`.
    pub fn kron(&self, other: &CMatrix) -> Result<CMatrix> {
        let rows = checked_product(self.rows, other.rows)?;
        let cols = checked_product(self.cols, other.cols)?;
        checked_product(rows, cols)?;
        let mut out = CMatrix::zeros(rows, cols)?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.entries[i * self.cols + j];
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.entries[(i * other.rows + k) * cols + (j * other.cols + l)] =
                            a * other.entries[k * other.cols + l];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.entries[i * self.cols + j].conj());
            }
        }
        CMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn scale(&self, c: Complex64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> Result<f64> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(SimError::DimensionMismatch(format!(
                "matrix shapes {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn approx_eq(&self, other: &CMatrix, tol: f64) -> Result<bool> {
        Ok(self.max_abs_diff(other)? <= tol)
    }

    /// `max |M·M† - I|`, zero for a unitary matrix.
    pub fn unitarity_deviation(&self) -> Result<f64> {
        let product = self.matmul(&self.adjoint())?;
        product.max_abs_diff(&CMatrix::identity(self.rows)?)
    }
}

/// Serialized as nested arrays of `[re, im]` pairs, one inner array per row.
impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            let row: Vec<[f64; 2]> = (0..self.cols)
                .map(|j| {
                    let c = self.get(i, j);
                    [c.re, c.im]
                })
                .collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

/// Serde helper emitting a complex scalar as a `[re, im]` pair; use with
/// `#[serde(with = "crate::cmatrix::complex_pair")]`.
pub mod complex_pair {
    use num_complex::Complex64;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(c: &Complex64, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::Serialize;
        [c.re, c.im].serialize(serializer)
    }
}

fn check_finite(entries: &[Complex64]) -> Result<()> {
    for (i, c) in entries.iter().enumerate() {
        if !c.re.is_finite() || !c.im.is_finite() {
            return Err(SimError::NonFinite(i));
        }
    }
    Ok(())
}

fn checked_product(a: usize, b: usize) -> Result<usize> {
    let max = max_dimension();
    match a.checked_mul(b) {
        Some(p) if p <= max => Ok(p),
        Some(p) => Err(SimError::DimensionGuard { dim: p, max }),
        None => Err(SimError::DimensionGuard { dim: usize::MAX, max }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qft::root_of_unity;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn matvec_identity_fixes_omega_vector() {
        let omega = root_of_unity(3, 1);
        let v = CVector::new(vec![Complex64::ONE, omega, omega * omega]).unwrap();
        let id = CMatrix::identity(3).unwrap();
        let out = id.matvec(&v).unwrap();
        assert!(out.approx_eq(&v, 0.0).unwrap());
    }

    #[test]
    fn matvec_zero_matrix() {
        let z = CMatrix::zeros(2, 2).unwrap();
        let v = CVector::new(vec![c(1.0, 2.0), c(-3.0, 0.5)]).unwrap();
        let out = z.matvec(&v).unwrap();
        assert!(out.approx_eq(&CVector::zeros(2).unwrap(), 0.0).unwrap());
    }

    #[test]
    fn matvec_dimension_mismatch() {
        let id = CMatrix::identity(3).unwrap();
        let v = CVector::zeros(2).unwrap();
        assert!(matches!(id.matvec(&v), Err(SimError::DimensionMismatch(_))));
    }

    // Diagonal phase oracle from the worked ternary example applied to the
    // scaled all-ones vector.
    #[test]
    fn matvec_ternary_diagonal_on_uniform() {
        let w = |k: i64| root_of_unity(3, k);
        let f = [1usize, 2, 0, 0, 1, 2, 2, 0, 1];
        let diag = CMatrix::from_fn(9, 9, |i, j| {
            if i == j {
                w(-(f[i] as i64))
            } else {
                Complex64::ZERO
            }
        })
        .unwrap();
        let third = Complex64::new(1.0 / 3.0, 0.0);
        let ones = CVector::new(vec![third; 9]).unwrap();
        let out = diag.matvec(&ones).unwrap();
        let expected = CVector::new(
            [w(2), w(1), w(0), w(0), w(2), w(1), w(1), w(0), w(2)]
                .iter()
                .map(|z| z * third)
                .collect(),
        )
        .unwrap();
        assert!(out.approx_eq(&expected, 1e-12).unwrap());
    }

    #[test]
    fn kron_identities() {
        let i2 = CMatrix::identity(2).unwrap();
        let i4 = CMatrix::identity(4).unwrap();
        assert!(i2.kron(&i2).unwrap().approx_eq(&i4, 0.0).unwrap());

        let a = CMatrix::from_fn(2, 3, |i, j| c(i as f64, j as f64)).unwrap();
        let i1 = CMatrix::identity(1).unwrap();
        assert!(a.kron(&i1).unwrap().approx_eq(&a, 0.0).unwrap());
        assert!(i1.kron(&a).unwrap().approx_eq(&a, 0.0).unwrap());
    }

    #[test]
    fn kron_respects_dimension_guard() {
        let big = CMatrix::zeros(1024, 1024).unwrap();
        let b = CMatrix::identity(2).unwrap();
        assert!(matches!(big.kron(&b), Err(SimError::DimensionGuard { .. })));
    }

    #[test]
    fn approx_eq_tolerances() {
        let a = CVector::new(vec![Complex64::ONE, Complex64::ZERO]).unwrap();
        assert!(a.approx_eq(&a, 0.0).unwrap());
        let b = CVector::new(vec![Complex64::ONE, c(1e-13, 0.0)]).unwrap();
        assert!(a.approx_eq(&b, 1e-12).unwrap());
        let d = CVector::new(vec![Complex64::ZERO, Complex64::ONE]).unwrap();
        assert!(!a.approx_eq(&d, 1e-12).unwrap());
    }

    #[test]
    fn global_phase_equality() {
        let w2 = root_of_unity(3, 2);
        let mut entries = vec![Complex64::ZERO; 9];
        entries[7] = w2;
        let a = CVector::new(entries).unwrap();
        let b = CVector::basis(9, 7).unwrap();
        assert!(equal_up_to_global_phase(&a, &b, 1e-12).unwrap());

        let e0 = CVector::basis(2, 0).unwrap();
        let e1 = CVector::basis(2, 1).unwrap();
        assert!(!equal_up_to_global_phase(&e0, &e1, 1e-12).unwrap());

        let v = CVector::new(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let neg = v.scale(c(-1.0, 0.0));
        assert!(equal_up_to_global_phase(&v, &neg, 1e-12).unwrap());
    }

    #[test]
    fn global_phase_rejects_zero_vector() {
        let z = CVector::zeros(3).unwrap();
        let v = CVector::basis(3, 0).unwrap();
        assert!(matches!(
            equal_up_to_global_phase(&z, &v, 1e-12),
            Err(SimError::ZeroVector)
        ));
    }

    #[test]
    fn adjoint_involution_exact() {
        let m = CMatrix::from_fn(3, 2, |i, j| c(i as f64 + 0.25, j as f64 - 1.5)).unwrap();
        assert_eq!(m.adjoint().adjoint(), m);
    }

    #[test]
    fn rejects_non_finite_entries() {
        assert!(matches!(
            CVector::new(vec![c(f64::NAN, 0.0)]),
            Err(SimError::NonFinite(0))
        ));
        assert!(matches!(
            CMatrix::new(1, 1, vec![c(0.0, f64::INFINITY)]),
            Err(SimError::NonFinite(0))
        ));
    }
}
