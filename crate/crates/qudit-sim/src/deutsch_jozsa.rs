//! The radix-n Deutsch-Jozsa algorithm.
//!
//! Two runners are provided. [`dj_run_phase`] drives the compact circuit
//! `F^{⊗r} · U_f · F^{⊗r}` with the diagonal phase oracle on the query
//! register alone. [`dj_run_full`] drives the two-register circuit
//! (query register initialized to `|0⟩^{⊗r}`, answer digit to `|1⟩`,
//! Fourier transforms on all wires around the permutation oracle) and must
//! agree with the phase form on the query register up to global phase while
//! the answer digit always comes out as `|n-1⟩`.
//!
//! For an affine function `A_0 ⊕ A_1x_1 ⊕ ... ⊕ A_rx_r` the final query
//! state is the basis state `|A_1...A_r⟩` carrying phase `ω^{-A_0}`: the
//! variable coefficients are read off a single measurement, while the
//! constant term sits in the global phase and is physically lost. The
//! simulator still reports it, flagged as a simulation-only observable.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::TAU;

use crate::cmatrix::CVector;
use crate::error::SimError;
use crate::mvlogic::{classify, ClassTag, MvFunction};
use crate::oracle::{build_full_oracle, build_phase_oracle};
use crate::qft::apply_qft_all;
use crate::register::QuditState;
use crate::Result;

/// Probability mass required to call an outcome deterministic; ideal
/// outcomes in this noiseless simulation are exactly 0 or 1 up to rounding.
pub const DECISION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DjDecision {
    Constant,
    BalancedAffine,
    BalancedOrNonAffine,
}

/// Amplitude-level result of one circuit run.
#[derive(Debug, Clone, Serialize)]
pub struct DjOutcome {
    /// Final state of the query register.
    pub final_state: QuditState,
    /// Answer-register digit when the full circuit was run and its outcome
    /// was deterministic (always `n-1` in theory).
    pub y_final: Option<Vec<usize>>,
    pub decision: DjDecision,
    /// `A_1..A_r` when the output collapsed to a single nonzero basis state.
    pub recovered_coefficients: Option<Vec<usize>>,
    /// Integer exponent `C` of the output phase `ω^C`. Simulation-only
    /// observable: the global phase is lost at measurement on hardware.
    pub recovered_phase_constant: Option<usize>,
}

impl DjOutcome {
    /// `A_0 = (-C) mod n`, derived from the recovered phase exponent.
    /// Simulation-only observable, like the exponent itself.
    pub fn recovered_constant_term(&self) -> Option<usize> {
        let n = self.final_state.shape().radix();
        self.recovered_phase_constant.map(|c| (n - c % n) % n)
    }
}

/// Nearest integer exponent `C` with `amplitude ≈ |amplitude|·ω^C`.
fn phase_exponent(radix: usize, amplitude: Complex64) -> usize {
    let step = TAU / radix as f64;
    let k = (amplitude.arg() / step).round() as i64;
    k.rem_euclid(radix as i64) as usize
}

fn interpret_final_state(state: QuditState, y_final: Option<Vec<usize>>) -> Result<DjOutcome> {
    let shape = state.shape();
    let dist = state.measure_distribution()?;
    let probs = dist.probabilities();

    let (peak, &peak_prob) = probs
        .iter()
        .enumerate()
        .max_by(|(_, a), (_, b)| a.total_cmp(b))
        .expect("state dimension is positive");

    let (decision, coefficients, phase_constant) = if probs[0] > 1.0 - DECISION_TOL {
        let c = phase_exponent(shape.radix(), state.amplitudes().entries()[0]);
        (DjDecision::Constant, None, Some(c))
    } else if peak_prob > 1.0 - DECISION_TOL {
        let digits = shape.index_to_digits(peak)?;
        let c = phase_exponent(shape.radix(), state.amplitudes().entries()[peak]);
        (DjDecision::BalancedAffine, Some(digits), Some(c))
    } else {
        (DjDecision::BalancedOrNonAffine, None, None)
    };

    Ok(DjOutcome {
        final_state: state,
        y_final,
        decision,
        recovered_coefficients: coefficients,
        recovered_phase_constant: phase_constant,
    })
}

/// Runs `F^{⊗r} · U_f · F^{⊗r} |0⟩^{⊗r}` with the diagonal phase oracle.
pub fn dj_run_phase(f: &MvFunction) -> Result<DjOutcome> {
    let shape = f.shape();
    let start = QuditState::basis_state(shape, &vec![0; shape.arity()])?;
    let superposed = apply_qft_all(&start)?;
    let queried = build_phase_oracle(f).apply(&superposed)?;
    let finished = apply_qft_all(&queried)?;
    interpret_final_state(finished, None)
}

/// Runs the full two-register circuit and reduces to the query register.
pub fn dj_run_full(f: &MvFunction) -> Result<DjOutcome> {
    let x_shape = f.shape();
    let n = x_shape.radix();
    let oracle = build_full_oracle(f)?;
    let combined_shape = oracle.combined_shape();

    let mut init_digits = vec![0usize; x_shape.arity()];
    init_digits.push(1);
    let start = QuditState::basis_state(combined_shape, &init_digits)?;
    let superposed = apply_qft_all(&start)?;
    let queried = oracle.apply(&superposed)?;
    let finished = apply_qft_all(&queried)?;

    // The answer digit ends in |n-1⟩ exactly, so the combined state
    // factorizes and the query register is read off the y = n-1 slice.
    let amps = finished.amplitudes().entries();
    let mut y_marginal = vec![0.0f64; n];
    for (index, amp) in amps.iter().enumerate() {
        y_marginal[index % n] += amp.norm_sqr();
    }
    let y_final = (y_marginal[n - 1] > 1.0 - DECISION_TOL).then(|| vec![n - 1]);

    let x_amps: Vec<Complex64> = (0..x_shape.dimension())
        .map(|x| amps[x * n + (n - 1)])
        .collect();
    let x_state = QuditState::new(x_shape, CVector::new(x_amps)?)?;
    interpret_final_state(x_state, y_final)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SampledDecision {
    Constant,
    Affine,
    NonAffineBalanced,
}

/// Count of one observed measurement outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutcomeCount {
    pub digits: Vec<usize>,
    pub count: usize,
}

/// Result of the promise-based sampled protocol.
#[derive(Debug, Clone, Serialize)]
pub struct DjDecideReport {
    pub runs: usize,
    pub decision: SampledDecision,
    /// `A_1..A_r` when every observed outcome was the same nonzero state.
    pub coefficients: Option<Vec<usize>>,
    /// Observed outcomes ordered by basis index.
    pub outcomes: Vec<OutcomeCount>,
}

/// The physically available protocol: sample `runs` measurements of the
/// phase-circuit output.
///
/// The all-zeros outcome has probability exactly 1 for constant functions
/// and exactly 0 for balanced ones, so observing it decides Constant. All
/// runs landing on one nonzero state reads off an affine coefficient
/// string; mixed outcomes certify a non-affine balanced function. Errors if
/// `f` violates the constant-or-balanced promise.
pub fn dj_decide(f: &MvFunction, runs: usize, seed: u64) -> Result<DjDecideReport> {
    if runs < 1 {
        return Err(SimError::InvalidArgument("runs must be at least 1".into()));
    }
    if classify(f).tag == ClassTag::Neither {
        return Err(SimError::PromiseViolated);
    }

    let shape = f.shape();
    let outcome = dj_run_phase(f)?;
    let dist = outcome.final_state.measure_distribution()?;
    let samples = dist.sample(seed, runs)?;

    let mut counts: Vec<usize> = vec![0; shape.dimension()];
    for digits in &samples {
        counts[shape.digits_to_index(digits)?] += 1;
    }
    let outcomes: Vec<OutcomeCount> = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(index, &count)| {
            Ok(OutcomeCount {
                digits: shape.index_to_digits(index)?,
                count,
            })
        })
        .collect::<Result<_>>()?;

    let (decision, coefficients) = if counts[0] > 0 {
        (SampledDecision::Constant, None)
    } else if outcomes.len() == 1 {
        (SampledDecision::Affine, Some(outcomes[0].digits.clone()))
    } else {
        (SampledDecision::NonAffineBalanced, None)
    };

    Ok(DjDecideReport { runs, decision, coefficients, outcomes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmatrix::equal_up_to_global_phase;
    use crate::mvlogic::AffineForm;
    use crate::qft::root_of_unity;
    use crate::register::RegisterShape;

    fn shape(n: usize, r: usize) -> RegisterShape {
        RegisterShape::new(n, r).unwrap()
    }

    const TERNARY_AFFINE_TABLE: [usize; 9] = [1, 2, 0, 0, 1, 2, 2, 0, 1];
    const TERNARY_NONAFFINE_TABLE: [usize; 9] = [0, 2, 1, 1, 0, 2, 2, 0, 1];

    #[test]
    fn affine_table_collapses_to_coefficient_state() {
        let f = MvFunction::new(shape(3, 2), TERNARY_AFFINE_TABLE.to_vec()).unwrap();
        let out = dj_run_phase(&f).unwrap();

        let mut expected = vec![Complex64::ZERO; 9];
        expected[7] = root_of_unity(3, 2);
        let expected = CVector::new(expected).unwrap();
        assert!(out.final_state.amplitudes().approx_eq(&expected, 1e-10).unwrap());

        assert_eq!(out.decision, DjDecision::BalancedAffine);
        assert_eq!(out.recovered_coefficients.as_deref(), Some(&[2, 1][..]));
        assert_eq!(out.recovered_phase_constant, Some(2));
        assert_eq!(out.recovered_constant_term(), Some(1));
    }

    #[test]
    fn nonaffine_table_spreads_amplitude() {
        let f = MvFunction::new(shape(3, 2), TERNARY_NONAFFINE_TABLE.to_vec()).unwrap();
        let out = dj_run_phase(&f).unwrap();
        assert_eq!(out.decision, DjDecision::BalancedOrNonAffine);

        let w = root_of_unity(3, 1);
        let w2 = root_of_unity(3, 2);
        let third = Complex64::new(1.0 / 3.0, 0.0);
        let expected = CVector::new(vec![
            Complex64::ZERO,
            w * third,
            (Complex64::ONE + w2) * third,
            Complex64::ZERO,
            third,
            third * 2.0,
            Complex64::ZERO,
            w2 * third,
            (Complex64::ONE + w) * third,
        ])
        .unwrap();
        assert!(out.final_state.amplitudes().approx_eq(&expected, 1e-10).unwrap());

        let dist = out.final_state.measure_distribution().unwrap();
        assert!((dist.probabilities()[5] - 4.0 / 9.0).abs() < 1e-10);
    }

    #[test]
    fn constant_tables_return_zero_state_with_phase() {
        for c in 0..3 {
            let f = MvFunction::constant(shape(3, 2), c).unwrap();
            let out = dj_run_phase(&f).unwrap();
            assert_eq!(out.decision, DjDecision::Constant);
            let amp = out.final_state.amplitudes().entries()[0];
            assert!((amp - root_of_unity(3, -(c as i64))).norm() < 1e-10);
            assert_eq!(out.recovered_constant_term(), Some(c));
        }
    }

    #[test]
    fn full_circuit_constant_zero_outputs() {
        // Ternary: |0⟩|2⟩.
        let f = MvFunction::constant(shape(3, 1), 0).unwrap();
        let out = dj_run_full(&f).unwrap();
        assert_eq!(out.decision, DjDecision::Constant);
        assert_eq!(out.y_final.as_deref(), Some(&[2][..]));

        // Binary: |0⟩|1⟩.
        let f = MvFunction::constant(shape(2, 1), 0).unwrap();
        let out = dj_run_full(&f).unwrap();
        assert_eq!(out.y_final.as_deref(), Some(&[1][..]));
    }

    #[test]
    fn full_circuit_matches_phase_circuit() {
        let f = MvFunction::new(shape(3, 2), TERNARY_AFFINE_TABLE.to_vec()).unwrap();
        let full = dj_run_full(&f).unwrap();
        let phase = dj_run_phase(&f).unwrap();
        assert_eq!(full.recovered_coefficients.as_deref(), Some(&[2, 1][..]));
        assert_eq!(full.y_final.as_deref(), Some(&[2][..]));
        assert!(equal_up_to_global_phase(
            full.final_state.amplitudes(),
            phase.final_state.amplitudes(),
            1e-9
        )
        .unwrap());
    }

    #[test]
    fn affine_sweep_recovers_every_form() {
        for n in [2usize, 3, 4, 5] {
            for r in [1usize, 2] {
                let s = shape(n, r);
                let tuples = n.pow((r + 1) as u32);
                for t in 0..tuples {
                    let mut coeffs = Vec::with_capacity(r + 1);
                    let mut rest = t;
                    for _ in 0..=r {
                        coeffs.push(rest % n);
                        rest /= n;
                    }
                    let form = AffineForm::new(s, coeffs.clone()).unwrap();
                    let out = dj_run_phase(&form.tabulate()).unwrap();
                    if coeffs[1..].iter().all(|&a| a == 0) {
                        assert_eq!(out.decision, DjDecision::Constant);
                    } else {
                        assert_eq!(out.decision, DjDecision::BalancedAffine);
                        assert_eq!(
                            out.recovered_coefficients.as_deref(),
                            Some(&coeffs[1..])
                        );
                    }
                    assert_eq!(out.recovered_constant_term(), Some(coeffs[0]));
                }
            }
        }
    }

    #[test]
    fn sampled_decide_on_affine_function() {
        let f = MvFunction::new(shape(3, 2), TERNARY_AFFINE_TABLE.to_vec()).unwrap();
        let report = dj_decide(&f, 1, 42).unwrap();
        assert_eq!(report.decision, SampledDecision::Affine);
        assert_eq!(report.coefficients.as_deref(), Some(&[2, 1][..]));
    }

    #[test]
    fn sampled_decide_on_constant_function() {
        let f = MvFunction::constant(shape(3, 2), 1).unwrap();
        let report = dj_decide(&f, 1, 0).unwrap();
        assert_eq!(report.decision, SampledDecision::Constant);
    }

    #[test]
    fn sampled_decide_on_nonaffine_function() {
        let f = MvFunction::new(shape(3, 2), TERNARY_NONAFFINE_TABLE.to_vec()).unwrap();
        let report = dj_decide(&f, 20, 7).unwrap();
        assert_eq!(report.decision, SampledDecision::NonAffineBalanced);
        assert!(report.outcomes.len() >= 2);
        // The all-zeros outcome has exactly zero probability for balanced f.
        assert!(report.outcomes.iter().all(|o| o.digits != vec![0, 0]));
    }

    #[test]
    fn decide_rejects_promise_violations() {
        let f = MvFunction::new(shape(3, 1), vec![0, 0, 1]).unwrap();
        assert!(matches!(dj_decide(&f, 5, 0), Err(SimError::PromiseViolated)));
    }
}
