//! Register shapes, computational-basis states, digit/index conversion,
//! measurement distributions, and seeded sampling.
//!
//! Digits are big-endian: the first digit is the most significant, so a
//! digit string `(d_1, ..., d_r)` addresses basis index
//! `d_1·n^(r-1) + ... + d_r`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cmatrix::CVector;
use crate::error::SimError;
use crate::{max_dimension, Result};

/// Tolerance on `|Σ|amplitude|² - 1|` enforced at state construction.
pub const NORM_TOL: f64 = 1e-10;

/// A register of `arity` digits, each of the given radix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegisterShape {
    radix: usize,
    arity: usize,
}

impl RegisterShape {
    pub fn new(radix: usize, arity: usize) -> Result<Self> {
        if radix < 2 {
            return Err(SimError::RadixTooSmall(radix));
        }
        if arity < 1 {
            return Err(SimError::InvalidArgument("arity must be at least 1".into()));
        }
        let max = max_dimension();
        let mut dim = 1usize;
        for _ in 0..arity {
            dim = dim
                .checked_mul(radix)
                .filter(|&d| d <= max)
                .ok_or(SimError::DimensionGuard { dim: usize::MAX, max })?;
        }
        Ok(Self { radix, arity })
    }

    pub fn radix(&self) -> usize {
        self.radix
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Total number of basis states, `radix^arity`.
    pub fn dimension(&self) -> usize {
        self.radix.pow(self.arity as u32)
    }

    /// Big-endian digit expansion of a basis index.
    pub fn index_to_digits(&self, index: usize) -> Result<Vec<usize>> {
        let dim = self.dimension();
        if index >= dim {
            return Err(SimError::IndexOutOfRange { index, dim });
        }
        let mut digits = vec![0usize; self.arity];
        let mut rest = index;
        for slot in digits.iter_mut().rev() {
            *slot = rest % self.radix;
            rest /= self.radix;
        }
        Ok(digits)
    }

    /// Inverse of [`index_to_digits`](Self::index_to_digits).
    pub fn digits_to_index(&self, digits: &[usize]) -> Result<usize> {
        if digits.len() != self.arity {
            return Err(SimError::DimensionMismatch(format!(
                "expected {} digits, got {}",
                self.arity,
                digits.len()
            )));
        }
        let mut index = 0usize;
        for &d in digits {
            if d >= self.radix {
                return Err(SimError::DigitOutOfRange { digit: d, radix: self.radix });
            }
            index = index * self.radix + d;
        }
        Ok(index)
    }

    /// Shape of this register extended by one digit of the same radix.
    pub fn extended(&self) -> Result<RegisterShape> {
        RegisterShape::new(self.radix, self.arity + 1)
    }
}

/// Normalized pure state over a register.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuditState {
    shape: RegisterShape,
    amplitudes: CVector,
}

impl QuditState {
    /// Validates the dimension and that `Σ|amplitude|²` is 1 within
    /// [`NORM_TOL`]. States are never silently renormalized; a failure here
    /// means something upstream was not unitary.
    pub fn new(shape: RegisterShape, amplitudes: CVector) -> Result<Self> {
        if amplitudes.dim() != shape.dimension() {
            return Err(SimError::DimensionMismatch(format!(
                "state dim {} vs register dim {}",
                amplitudes.dim(),
                shape.dimension()
            )));
        }
        let norm_sqr: f64 = amplitudes.entries().iter().map(|c| c.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(SimError::NotNormalized((norm_sqr - 1.0).abs()));
        }
        Ok(Self { shape, amplitudes })
    }

    pub fn from_amplitudes(shape: RegisterShape, amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::new(shape, CVector::new(amplitudes)?)
    }

    /// Basis state `|d_1 ... d_r⟩`.
    pub fn basis_state(shape: RegisterShape, digits: &[usize]) -> Result<Self> {
        let index = shape.digits_to_index(digits)?;
        Self::new(shape, CVector::basis(shape.dimension(), index)?)
    }

    /// Equal superposition of all basis states, amplitude `1/√(n^r)` each.
    pub fn uniform(shape: RegisterShape) -> Result<Self> {
        let dim = shape.dimension();
        let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Self::new(shape, CVector::new(vec![amp; dim])?)
    }

    /// Random normalized state with uniform box components; good enough as a
    /// generic test vector, no Haar uniformity claimed.
    pub fn random<R: Rng + ?Sized>(shape: RegisterShape, rng: &mut R) -> Result<Self> {
        loop {
            let mut amps: Vec<Complex64> = (0..shape.dimension())
                .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                .collect();
            let norm = amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-6 {
                for a in &mut amps {
                    *a /= norm;
                }
                return Self::from_amplitudes(shape, amps);
            }
        }
    }

    pub fn shape(&self) -> RegisterShape {
        self.shape
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> CVector {
        self.amplitudes
    }

    /// Probability of each basis outcome, `p_i = |amplitude_i|²`.
    pub fn measure_distribution(&self) -> Result<Distribution> {
        let probabilities = self.amplitudes.entries().iter().map(|c| c.norm_sqr()).collect();
        Distribution::new(self.shape, probabilities)
    }
}

/// Probability distribution over basis outcomes of a register.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Distribution {
    shape: RegisterShape,
    probabilities: Vec<f64>,
}

impl Distribution {
    pub fn new(shape: RegisterShape, probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.len() != shape.dimension() {
            return Err(SimError::DimensionMismatch(format!(
                "distribution len {} vs register dim {}",
                probabilities.len(),
                shape.dimension()
            )));
        }
        if probabilities.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(SimError::InvalidArgument("probabilities must be finite and non-negative".into()));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > NORM_TOL {
            return Err(SimError::NotNormalized((total - 1.0).abs()));
        }
        Ok(Self { shape, probabilities })
    }

    pub fn shape(&self) -> RegisterShape {
        self.shape
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Draw `count` outcomes as digit strings.
    ///
    /// Sampling is fully deterministic given `(self, seed, count)` and stable
    /// across platforms: a ChaCha8 generator is keyed with `seed_from_u64`,
    /// one `f64` in `[0, 1)` is drawn per outcome, and the outcome index is
    /// found by binary search over the cumulative probability sums
    /// (inverse-CDF). Zero-probability entries are never selected.
    pub fn sample(&self, seed: u64, count: usize) -> Result<Vec<Vec<usize>>> {
        if count < 1 {
            return Err(SimError::InvalidArgument("sample count must be at least 1".into()));
        }
        let mut cumulative = Vec::with_capacity(self.probabilities.len());
        let mut acc = 0.0f64;
        for p in &self.probabilities {
            acc += p;
            cumulative.push(acc);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut outcomes = Vec::with_capacity(count);
        for _ in 0..count {
            let u: f64 = rng.random();
            let mut idx = cumulative.partition_point(|&c| c <= u);
            if idx >= self.probabilities.len() {
                // u landed past the accumulated total due to rounding; take
                // the last outcome with nonzero probability.
                idx = self
                    .probabilities
                    .iter()
                    .rposition(|&p| p > 0.0)
                    .expect("distribution sums to 1");
            }
            outcomes.push(self.shape.index_to_digits(idx)?);
        }
        Ok(outcomes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qft::root_of_unity;

    #[test]
    fn digit_expansion_examples() {
        let s32 = RegisterShape::new(3, 2).unwrap();
        assert_eq!(s32.index_to_digits(7).unwrap(), vec![2, 1]);
        assert_eq!(s32.index_to_digits(0).unwrap(), vec![0, 0]);
        let s23 = RegisterShape::new(2, 3).unwrap();
        assert_eq!(s23.index_to_digits(5).unwrap(), vec![1, 0, 1]);
        assert!(matches!(
            s32.index_to_digits(9),
            Err(SimError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn digits_roundtrip_small_shapes() {
        for n in 2..=7 {
            for r in 1..=4 {
                let shape = RegisterShape::new(n, r).unwrap();
                for index in 0..shape.dimension() {
                    let digits = shape.index_to_digits(index).unwrap();
                    assert_eq!(shape.digits_to_index(&digits).unwrap(), index);
                }
            }
        }
    }

    #[test]
    fn basis_state_placement() {
        let shape = RegisterShape::new(3, 2).unwrap();
        let s = QuditState::basis_state(shape, &[0, 0]).unwrap();
        assert_eq!(s.amplitudes().entries()[0], Complex64::ONE);

        let t = QuditState::basis_state(shape, &[2, 1]).unwrap();
        assert_eq!(t.amplitudes().entries()[7], Complex64::ONE);

        let bad = QuditState::basis_state(RegisterShape::new(3, 1).unwrap(), &[3]);
        assert!(matches!(bad, Err(SimError::DigitOutOfRange { .. })));
    }

    #[test]
    fn rejects_unnormalized_state() {
        let shape = RegisterShape::new(2, 1).unwrap();
        let res = QuditState::from_amplitudes(shape, vec![Complex64::ONE, Complex64::ONE]);
        assert!(matches!(res, Err(SimError::NotNormalized(_))));
    }

    #[test]
    fn measurement_of_phased_basis_state() {
        let shape = RegisterShape::new(3, 2).unwrap();
        let mut amps = vec![Complex64::ZERO; 9];
        amps[7] = root_of_unity(3, 2);
        let state = QuditState::from_amplitudes(shape, amps).unwrap();
        let dist = state.measure_distribution().unwrap();
        assert!((dist.probabilities()[7] - 1.0).abs() < 1e-12);
        assert!(dist.probabilities().iter().take(7).all(|&p| p == 0.0));
    }

    #[test]
    fn measurement_of_uniform_state() {
        let shape = RegisterShape::new(3, 2).unwrap();
        let dist = QuditState::uniform(shape).unwrap().measure_distribution().unwrap();
        assert!(dist.probabilities().iter().all(|p| (p - 1.0 / 9.0).abs() < 1e-12));
    }

    #[test]
    fn sampling_point_distribution() {
        let shape = RegisterShape::new(3, 2).unwrap();
        let mut probs = vec![0.0; 9];
        probs[7] = 1.0;
        let dist = Distribution::new(shape, probs).unwrap();
        for seed in [0u64, 1, 99] {
            let outcomes = dist.sample(seed, 3).unwrap();
            assert_eq!(outcomes, vec![vec![2, 1], vec![2, 1], vec![2, 1]]);
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let shape = RegisterShape::new(2, 2).unwrap();
        let dist = Distribution::new(shape, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let a = dist.sample(1234, 50).unwrap();
        let b = dist.sample(1234, 50).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_probability_outcomes_never_drawn() {
        let shape = RegisterShape::new(2, 2).unwrap();
        let dist = Distribution::new(shape, vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        for outcome in dist.sample(7, 2000).unwrap() {
            assert!(outcome == vec![0, 0] || outcome == vec![1, 1]);
        }
    }

    #[test]
    fn shape_guard_rejects_oversized_registers() {
        // 2^21 exceeds the default guard of 2^20 amplitudes.
        assert!(matches!(
            RegisterShape::new(2, 21),
            Err(SimError::DimensionGuard { .. })
        ));
        assert!(RegisterShape::new(2, 20).is_ok());
    }
}
