//! Numerical toolkit for speed limits on quantum observable dynamics.
//!
//! The library computes how fast the expectation value of an observable
//! can change under unitary dynamics, together with the family of upper
//! bounds that control that speed: the trace-norm asymmetry of state and
//! observable, a weak-value route to the same quantity, quantum Fisher
//! information, observable variances, and two coherence monotones taken
//! in the observable eigenbasis. On top of the static quantifiers sit
//! piecewise-constant unitary propagation, saturating qubit generator
//! construction, and speed-limit times for finite evolutions, including
//! a thermodynamic variant against a Gibbs reference.
//!
//! Layout:
//! - [`linalg`]: dense complex matrices, Jacobi eigensolver, Schatten
//!   norms, spectral functions.
//! - [`qstate`]: validated density matrices, observables, orthonormal
//!   bases, Bloch vectors, weak values, quasiprobabilities, Gibbs states.
//! - [`quantify`]: the speed bounds and coherence measures, plus a
//!   combined bound report with slack accounting.
//! - [`dynamics`]: protocols, trajectories, optimal generators, and
//!   speed-limit times.
//! - [`sample`]: deterministic seeded sampling of states, observables,
//!   and bases.
//! - [`tol`]: every numerical tolerance in one place.

#![forbid(unsafe_code)]

pub mod dynamics;
pub mod linalg;
pub mod qstate;
pub mod quantify;
pub mod sample;
pub mod tol;

pub use num_complex::Complex64;

/// Unified error type for every fallible operation in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("matrix dimension {dim} outside supported range 1..=16")]
    BadDimension { dim: usize },
    #[error("expected {expected} entries, got {got}")]
    BadEntryCount { expected: usize, got: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("matrix is not Hermitian (max |A - A^dagger| entry {dev:.3e})")]
    NotHermitian { dev: f64 },
    #[error("eigensolver did not converge in {sweeps} sweeps (off-diagonal residue {residue:.3e})")]
    NoConvergence { sweeps: usize, residue: f64 },
    #[error("Schatten order must be >= 1 or infinity, got {p}")]
    InvalidOrder { p: f64 },
    #[error("trace deviates from 1 by {dev:.3e}")]
    InvalidTrace { dev: f64 },
    #[error("eigenvalue {value:.3e} is negative beyond tolerance")]
    NotPositive { value: f64 },
    #[error("basis columns are not orthonormal (max |V^dagger V - I| entry {dev:.3e})")]
    NotOrthonormal { dev: f64 },
    #[error("expectation value carries a non-real residue {imag:.3e}")]
    NonRealExpectation { imag: f64 },
    #[error("postselection probability {prob:.3e} vanishes, weak value undefined")]
    VanishingPostselection { prob: f64 },
    #[error("reference state is singular, matrix logarithm undefined")]
    SingularReference,
    #[error("operator is zero, normalization undefined")]
    ZeroOperator,
    #[error("observable eigenvalues degenerate within {gap:.3e}, construction undefined")]
    DegenerateObservable { gap: f64 },
    #[error("step {dt} exceeds shortest segment duration {min_duration}")]
    StepTooLarge { dt: f64, min_duration: f64 },
    #[error("{what} drifted by {dev:.3e} at trajectory node {node}")]
    ValidationDrift {
        node: usize,
        what: &'static str,
        dev: f64,
    },
    #[error("trajectory has no nodes")]
    EmptyTrajectory,
    #[error("generator operator norm {norm} is not 1")]
    NotUnitNorm { norm: f64 },
    #[error("Bloch vector length {len:.6} exceeds 1")]
    BlochTooLong { len: f64 },
    #[error("qubit-only operation called with dimension {dim}")]
    NotQubit { dim: usize },
    #[error("axis has zero length")]
    ZeroAxis,
    #[error("invalid configuration: {what}")]
    InvalidConfig { what: String },
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
