//! Oracle construction in both forms used by the algorithms: the diagonal
//! phase oracle on the query register, and the two-register permutation
//! oracle `|x,y⟩ ↦ |x, y ⊕ f(x)⟩`, together with the kickback bridge that
//! relates them.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cmatrix::{CMatrix, CVector};
use crate::mvlogic::MvFunction;
use crate::qft::root_of_unity;
use crate::register::{QuditState, RegisterShape};
use crate::Result;

/// Diagonal oracle `U_f = Σ ω^{-f(x)} |x⟩⟨x|` acting on the query register.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseOracle {
    shape: RegisterShape,
    diagonal: CVector,
}

impl PhaseOracle {
    pub fn shape(&self) -> RegisterShape {
        self.shape
    }

    pub fn diagonal(&self) -> &CVector {
        &self.diagonal
    }

    pub fn apply(&self, state: &QuditState) -> Result<QuditState> {
        let amps = state
            .amplitudes()
            .entries()
            .iter()
            .zip(self.diagonal.entries())
            .map(|(a, d)| a * d)
            .collect();
        QuditState::from_amplitudes(self.shape, amps)
    }

    /// Dense matrix form, for cross-checks.
    pub fn to_matrix(&self) -> Result<CMatrix> {
        let d = self.diagonal.entries();
        CMatrix::from_fn(d.len(), d.len(), |i, j| {
            if i == j {
                d[i]
            } else {
                Complex64::ZERO
            }
        })
    }

    /// Max deviation of the diagonal entries from unit modulus.
    pub fn unitarity_deviation(&self) -> f64 {
        self.diagonal
            .entries()
            .iter()
            .map(|d| (d.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// `diagonal[x] = ω^{-f(x)}`.
pub fn build_phase_oracle(f: &MvFunction) -> PhaseOracle {
    let n = f.shape().radix();
    let diagonal = CVector::from_entries_unchecked(
        f.outputs().iter().map(|&v| root_of_unity(n, -(v as i64))).collect(),
    );
    PhaseOracle { shape: f.shape(), diagonal }
}

/// Two-register permutation oracle on `n^(r+1)` combined basis states. The
/// query digits come first (most significant), the answer digit last, so a
/// combined index is `x·n + y`. Stored as an index permutation, never as a
/// dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FullOracle {
    x_shape: RegisterShape,
    combined_shape: RegisterShape,
    permutation: Vec<usize>,
}

impl FullOracle {
    pub fn x_shape(&self) -> RegisterShape {
        self.x_shape
    }

    pub fn combined_shape(&self) -> RegisterShape {
        self.combined_shape
    }

    /// Image of each combined basis index under `|x,y⟩ ↦ |x, y ⊕ f(x)⟩`.
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn apply(&self, state: &QuditState) -> Result<QuditState> {
        let input = state.amplitudes().entries();
        let mut out = vec![Complex64::ZERO; input.len()];
        for (from, &to) in self.permutation.iter().enumerate() {
            out[to] = input[from];
        }
        QuditState::from_amplitudes(self.combined_shape, out)
    }

    /// Dense permutation matrix, for cross-checks only.
    pub fn to_matrix(&self) -> Result<CMatrix> {
        let dim = self.permutation.len();
        CMatrix::from_fn(dim, dim, |i, j| {
            if self.permutation[j] == i {
                Complex64::ONE
            } else {
                Complex64::ZERO
            }
        })
    }
}

/// Builds the permutation sending `(x, y)` to `(x, (y + f(x)) mod n)`.
pub fn build_full_oracle(f: &MvFunction) -> Result<FullOracle> {
    let x_shape = f.shape();
    let combined_shape = x_shape.extended()?;
    let n = x_shape.radix();
    let mut permutation = Vec::with_capacity(combined_shape.dimension());
    for x in 0..x_shape.dimension() {
        let fx = f.value_at(x)?;
        for y in 0..n {
            permutation.push(x * n + (y + fx) % n);
        }
    }
    Ok(FullOracle { x_shape, combined_shape, permutation })
}

/// The answer-register preparation of the circuits: `F_n` applied to `|1⟩`,
/// i.e. `(1/√n) Σ ω^y |y⟩`.
pub fn y_kickback_state(radix: usize) -> Result<QuditState> {
    let shape = RegisterShape::new(radix, 1)?;
    let scale = 1.0 / (radix as f64).sqrt();
    let amps = (0..radix).map(|y| root_of_unity(radix, y as i64) * scale).collect();
    QuditState::from_amplitudes(shape, amps)
}

/// Max entrywise deviation between the permutation oracle acting on
/// `x_state ⊗ (F|1⟩)` and the phase oracle acting on the x-register alone
/// with the answer state untouched.
pub fn phase_kickback_deviation(f: &MvFunction, x_state: &QuditState) -> Result<f64> {
    let y_state = y_kickback_state(f.shape().radix())?;
    let full = build_full_oracle(f)?;
    let combined = QuditState::new(
        full.combined_shape(),
        x_state.amplitudes().kron(y_state.amplitudes())?,
    )?;
    let lhs = full.apply(&combined)?;

    let phase = build_phase_oracle(f);
    let rhs = phase.apply(x_state)?.amplitudes().kron(y_state.amplitudes())?;
    lhs.amplitudes().max_abs_diff(&rhs)
}

/// Sweeps the kickback identity over the uniform superposition plus `trials`
/// seeded random x-states, returning the worst deviation seen.
pub fn phase_kickback_equivalence(f: &MvFunction, trials: usize, seed: u64) -> Result<f64> {
    let mut worst = phase_kickback_deviation(f, &QuditState::uniform(f.shape())?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let state = QuditState::random(f.shape(), &mut rng)?;
        worst = worst.max(phase_kickback_deviation(f, &state)?);
    }
    Ok(worst)
}
