//! Dense state-vector simulation of radix-n (qudit) quantum registers.
//!
//! The crate models registers of `r` digits with `n` basis states each,
//! builds the radix-n quantum Fourier transform and both oracle forms for
//! multi-valued logic functions, and runs the generalized Deutsch-Jozsa
//! decision/recovery algorithm and Grover search on top, including the exact
//! 2×2 subspace model of the Grover iteration. The [`checks`] module bundles
//! the numerical identity suites behind the CLI `verify` subcommand.
//!
//! Everything is plain dense double-precision complex arithmetic. Values are
//! immutable after construction and operations are pure, so all types are
//! safe to share across threads; with the `parallel` feature (default) the
//! heavy loops fan out over rayon with deterministic output.

pub mod batch;
pub mod checks;
pub mod cmatrix;
pub mod deutsch_jozsa;
pub mod error;
pub mod grover;
pub mod mvlogic;
pub mod oracle;
pub mod qft;
pub mod register;

pub use error::SimError;

pub type Result<T> = std::result::Result<T, SimError>;

/// Default cap on dense object size (amplitudes per vector, entries per
/// matrix).
pub const DEFAULT_MAX_DIM: usize = 1 << 20;

/// Environment variable overriding the dimension guard.
pub const MAX_DIM_ENV: &str = "QUDITSIM_MAX_DIM";

/// The configured dimension guard: `QUDITSIM_MAX_DIM` when set to a positive
/// integer, otherwise [`DEFAULT_MAX_DIM`].
pub fn max_dimension() -> usize {
    std::env::var(MAX_DIM_ENV)
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&v| v > 0)
        .unwrap_or(DEFAULT_MAX_DIM)
}

pub use cmatrix::{equal_up_to_global_phase, CMatrix, CVector, DEFAULT_TOL};
pub use deutsch_jozsa::{dj_decide, dj_run_full, dj_run_phase, DjDecision, DjOutcome};
pub use grover::{
    build_model, diffusion_operator, diffusion_via_qft, find_optimal_iterations, grover_iterate,
    lowest_order_amplitude, radix_study, selective_phase_oracle, subspace_consistency,
    GroverProblem, IterationTrace,
};
pub use mvlogic::{classify, count_balanced, detect_affine, parse_chart, AffineForm, ClassTag, FunctionSpec, MvFunction};
pub use oracle::{build_full_oracle, build_phase_oracle, phase_kickback_equivalence, FullOracle, PhaseOracle};
pub use qft::{apply_qft_all, fourier_matrix, qft_power_structure, root_of_unity, QftSpec};
pub use register::{Distribution, QuditState, RegisterShape};
