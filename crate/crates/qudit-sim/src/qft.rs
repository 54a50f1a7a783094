//! The radix-n quantum Fourier transform: matrix construction, factor-wise
//! application to register states, and its power structure (the square is a
//! digit negation, the cube is the adjoint, the fourth power is the
//! identity).

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::TAU;

use crate::batch;
use crate::cmatrix::{CMatrix, CVector};
use crate::error::SimError;
use crate::register::{QuditState, RegisterShape};
use crate::Result;

/// `ω^k` for `ω = e^{i2π/n}`, computed from the reduced angle `2π(k mod n)/n`
/// rather than by repeated multiplication, so large exponents carry no
/// accumulated phase drift.
pub fn root_of_unity(radix: usize, exponent: i64) -> Complex64 {
    let k = exponent.rem_euclid(radix as i64) as f64;
    Complex64::from_polar(1.0, TAU * k / radix as f64)
}

/// `Σ_{k=0}^{n-1} ω^{αk}`, which vanishes whenever `α mod n != 0`.
pub fn roots_of_unity_sum(radix: usize, alpha: i64) -> Complex64 {
    (0..radix as i64).map(|k| root_of_unity(radix, alpha * k)).sum()
}

/// Radix together with its primitive root of unity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QftSpec {
    radix: usize,
    omega: Complex64,
}

impl QftSpec {
    pub fn new(radix: usize) -> Result<Self> {
        if radix < 2 {
            return Err(SimError::RadixTooSmall(radix));
        }
        Ok(Self {
            radix,
            omega: root_of_unity(radix, 1),
        })
    }

    pub fn radix(&self) -> usize {
        self.radix
    }

    pub fn omega(&self) -> Complex64 {
        self.omega
    }

    pub fn omega_pow(&self, exponent: i64) -> Complex64 {
        root_of_unity(self.radix, exponent)
    }
}

/// The n×n Fourier matrix with entry `[j,k] = ω^{jk}/√n` (0-based).
pub fn fourier_matrix(radix: usize) -> Result<CMatrix> {
    if radix < 2 {
        return Err(SimError::RadixTooSmall(radix));
    }
    let scale = 1.0 / (radix as f64).sqrt();
    CMatrix::from_fn(radix, radix, |j, k| {
        root_of_unity(radix, (j * k) as i64) * scale
    })
}

/// Dense `F_n^{⊗r}`; cross-validation path for the factor-wise application.
pub fn fourier_tensor(radix: usize, arity: usize) -> Result<CMatrix> {
    let f = fourier_matrix(radix)?;
    let mut out = f.clone();
    for _ in 1..arity {
        out = out.kron(&f)?;
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq)]
enum Direction {
    Forward,
    Adjoint,
}

/// Applies the single-digit transform `m` (n×n) to one digit position of a
/// raw amplitude vector. Output index `x` gathers the n inputs that differ
/// from `x` only in that digit.
fn transform_digit(
    shape: RegisterShape,
    amps: &[Complex64],
    digit: usize,
    m: &CMatrix,
    sequential: bool,
) -> Vec<Complex64> {
    let n = shape.radix();
    let stride = n.pow((shape.arity() - 1 - digit) as u32);
    let gather = |x: usize| {
        let j = (x / stride) % n;
        let base = x - j * stride;
        (0..n).map(|k| m.get(j, k) * amps[base + k * stride]).sum::<Complex64>()
    };
    if sequential {
        batch::map_indexed_seq(amps.len(), gather)
    } else {
        batch::map_indexed(amps.len(), gather)
    }
}

fn apply_all(state: &QuditState, direction: Direction, sequential: bool) -> Result<QuditState> {
    let shape = state.shape();
    let f = fourier_matrix(shape.radix())?;
    let m = match direction {
        Direction::Forward => f,
        // F is symmetric, so the adjoint is the entrywise conjugate.
        Direction::Adjoint => f.adjoint(),
    };
    let mut amps = state.amplitudes().entries().to_vec();
    for digit in 0..shape.arity() {
        amps = transform_digit(shape, &amps, digit, &m, sequential);
    }
    QuditState::new(shape, CVector::new(amps)?)
}

/// Applies `F_n^{⊗r}` to every digit of the register, factor-wise in
/// `O(r·n^{r+1})` work; the full `n^r × n^r` matrix is never materialized.
pub fn apply_qft_all(state: &QuditState) -> Result<QuditState> {
    apply_all(state, Direction::Forward, false)
}

/// Applies `(F_n†)^{⊗r}` factor-wise.
pub fn apply_qft_adjoint_all(state: &QuditState) -> Result<QuditState> {
    apply_all(state, Direction::Adjoint, false)
}

/// Sequential reference for [`apply_qft_all`], used by the benchmark suite.
pub fn apply_qft_all_seq(state: &QuditState) -> Result<QuditState> {
    apply_all(state, Direction::Forward, true)
}

/// Power structure of `F_n`: the permutation realized by `F²`, and the
/// deviations of `F³` from `F†` and of `F⁴` from the identity.
#[derive(Debug, Clone, Serialize)]
pub struct QftPowerReport {
    pub radix: usize,
    /// Observed permutation of `F²` (column `m` maps to `permutation[m]`),
    /// expected to be `m ↦ (n-m) mod n`.
    pub permutation: Vec<usize>,
    /// Max deviation of `F²` from the digit-negation permutation matrix.
    pub square_vs_negation: f64,
    /// Max deviation of `F³` from `F†`.
    pub cube_vs_adjoint: f64,
    /// Max deviation of `F⁴` from the identity.
    pub fourth_vs_identity: f64,
}

impl QftPowerReport {
    pub fn max_deviation(&self) -> f64 {
        self.square_vs_negation
            .max(self.cube_vs_adjoint)
            .max(self.fourth_vs_identity)
    }
}

pub fn qft_power_structure(radix: usize) -> Result<QftPowerReport> {
    let f = fourier_matrix(radix)?;
    let f2 = f.matmul(&f)?;
    let f3 = f2.matmul(&f)?;
    let f4 = f3.matmul(&f)?;

    // Column m of F² should be the basis vector at (n - m) mod n.
    let mut permutation = Vec::with_capacity(radix);
    for m in 0..radix {
        let col_max = (0..radix)
            .max_by(|&a, &b| f2.get(a, m).norm().total_cmp(&f2.get(b, m).norm()))
            .expect("radix >= 2");
        permutation.push(col_max);
    }
    let negation = CMatrix::from_fn(radix, radix, |i, j| {
        if i == (radix - j) % radix {
            Complex64::ONE
        } else {
            Complex64::ZERO
        }
    })?;

    Ok(QftPowerReport {
        radix,
        permutation,
        square_vs_negation: f2.max_abs_diff(&negation)?,
        cube_vs_adjoint: f3.max_abs_diff(&f.adjoint())?,
        fourth_vs_identity: f4.max_abs_diff(&CMatrix::identity(radix)?)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_is_primitive() {
        for n in 2..=16 {
            let spec = QftSpec::new(n).unwrap();
            assert!((spec.omega_pow(n as i64) - Complex64::ONE).norm() < 1e-12);
            for k in 1..n as i64 {
                assert!((spec.omega_pow(k) - Complex64::ONE).norm() > 1e-3);
            }
        }
    }

    #[test]
    fn hadamard_is_the_binary_case() {
        let f = fourier_matrix(2).unwrap();
        let h = 1.0 / 2f64.sqrt();
        assert!((f.get(0, 0).re - h).abs() < 1e-15);
        assert!((f.get(1, 1).re + h).abs() < 1e-15);
        assert!(f.get(1, 1).im.abs() < 1e-15);
    }

    #[test]
    fn ternary_second_row() {
        let f = fourier_matrix(3).unwrap();
        let s = 1.0 / 3f64.sqrt();
        for k in 0..3 {
            let expected = root_of_unity(3, k as i64) * s;
            assert!((f.get(1, k) - expected).norm() < 1e-15);
        }
    }

    #[test]
    fn fourier_is_unitary() {
        for n in 2..=16 {
            assert!(fourier_matrix(n).unwrap().unitarity_deviation().unwrap() < 1e-12);
        }
    }

    #[test]
    fn rejects_radix_below_two() {
        assert!(matches!(fourier_matrix(1), Err(SimError::RadixTooSmall(1))));
    }

    #[test]
    fn qft_of_zero_is_uniform() {
        for (n, r) in [(2, 3), (3, 2), (5, 1)] {
            let shape = RegisterShape::new(n, r).unwrap();
            let zero = QuditState::basis_state(shape, &vec![0; r]).unwrap();
            let out = apply_qft_all(&zero).unwrap();
            let uniform = QuditState::uniform(shape).unwrap();
            assert!(out.amplitudes().approx_eq(uniform.amplitudes(), 1e-12).unwrap());
        }
    }

    #[test]
    fn qft_of_one_is_omega_column() {
        let shape = RegisterShape::new(3, 1).unwrap();
        let one = QuditState::basis_state(shape, &[1]).unwrap();
        let out = apply_qft_all(&one).unwrap();
        let s = 1.0 / 3f64.sqrt();
        let expected = CVector::new(
            (0..3).map(|j| root_of_unity(3, j) * s).collect(),
        )
        .unwrap();
        assert!(out.amplitudes().approx_eq(&expected, 1e-12).unwrap());
    }

    #[test]
    fn four_applications_restore_the_state() {
        let shape = RegisterShape::new(3, 2).unwrap();
        let start = QuditState::basis_state(shape, &[2, 1]).unwrap();
        let mut state = start.clone();
        for _ in 0..4 {
            state = apply_qft_all(&state).unwrap();
        }
        assert!(state.amplitudes().approx_eq(start.amplitudes(), 1e-10).unwrap());
    }

    #[test]
    fn factorwise_matches_dense_tensor() {
        for (n, r) in [(2, 3), (3, 2), (4, 2), (5, 3)] {
            let shape = RegisterShape::new(n, r).unwrap();
            let dense = fourier_tensor(n, r).unwrap();
            // A representative non-basis state.
            let dim = shape.dimension();
            let amps: Vec<Complex64> = (0..dim)
                .map(|i| root_of_unity(7, i as i64) / (dim as f64).sqrt())
                .collect();
            let state = QuditState::from_amplitudes(shape, amps).unwrap();
            let fast = apply_qft_all(&state).unwrap();
            let slow = dense.matvec(state.amplitudes()).unwrap();
            assert!(fast.amplitudes().approx_eq(&slow, 1e-10).unwrap());
        }
    }

    #[test]
    fn adjoint_application_inverts_forward() {
        let shape = RegisterShape::new(4, 2).unwrap();
        let start = QuditState::basis_state(shape, &[3, 1]).unwrap();
        let roundtrip = apply_qft_adjoint_all(&apply_qft_all(&start).unwrap()).unwrap();
        assert!(roundtrip.amplitudes().approx_eq(start.amplitudes(), 1e-12).unwrap());
    }

    #[test]
    fn sequential_path_matches_parallel() {
        let shape = RegisterShape::new(3, 4).unwrap();
        let state = QuditState::uniform(shape).unwrap();
        let a = apply_qft_all(&state).unwrap();
        let b = apply_qft_all_seq(&state).unwrap();
        assert_eq!(a.amplitudes().entries(), b.amplitudes().entries());
    }

    #[test]
    fn power_structure_small_radices() {
        let r3 = qft_power_structure(3).unwrap();
        assert_eq!(r3.permutation, vec![0, 2, 1]);
        assert!(r3.max_deviation() < 1e-12);

        let r2 = qft_power_structure(2).unwrap();
        assert_eq!(r2.permutation, vec![0, 1]);

        let r4 = qft_power_structure(4).unwrap();
        assert_eq!(r4.permutation, vec![0, 3, 2, 1]);
        assert!(r4.max_deviation() < 1e-12);
    }

    #[test]
    fn root_sums_vanish_off_multiples() {
        for n in 2..=12 {
            for alpha in 1..n as i64 {
                assert!(roots_of_unity_sum(n, alpha).norm() < 1e-10);
            }
            assert!((roots_of_unity_sum(n, 0).norm() - n as f64).abs() < 1e-12);
        }
    }
}
