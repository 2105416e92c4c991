//! Centralized numerical tolerance constants.
//!
//! Every hard-coded epsilon used by the library lives here so the
//! relationships between them stay auditable in one place. The broad
//! hierarchy is: machine-level residues (1e-12) < validation gates
//! (1e-10) < reconstruction / inequality slack floors (1e-9) <
//! drift alarms (1e-8) < optimizer-limited equality checks (1e-6).

/// Hermiticity gate: max entrywise |A - A^dagger| accepted by validated
/// constructors (states, observables, eigensolver input).
pub const HERM_TOL: f64 = 1e-10;

/// Trace gate for density matrices: |tr(rho) - 1| must stay below this.
pub const TRACE_TOL: f64 = 1e-10;

/// Most negative eigenvalue a density matrix may carry. Values in
/// [-EIG_NEG_TOL, 0) are treated as exact zeros downstream.
pub const EIG_NEG_TOL: f64 = 1e-10;

/// Orthonormality gate for basis columns: max entrywise |V^dagger V - I|.
pub const ORTHO_TOL: f64 = 1e-10;

/// Eigendecomposition quality: ||V D V^dagger - A|| must not exceed
/// RECON_TOL times the operator norm of A.
pub const RECON_TOL: f64 = 1e-9;

/// Squared singular values below this magnitude are clamped to zero
/// before the square root; anything more negative means a solver bug.
pub const SV_CLAMP: f64 = 1e-12;

/// Postselection probabilities at or below this are considered vanishing
/// and make a weak value undefined.
pub const POSTSELECT_EPS: f64 = 1e-12;

/// Eigenvalue-pair sums at or below this are skipped in the Fisher
/// information spectral sum (zero/zero sectors carry no information).
pub const QFI_EPS: f64 = 1e-12;

/// Spectral weight at or below this counts as outside the support of a
/// state (log sums, relative entropy, full-rank checks).
pub const SUPPORT_EPS: f64 = 1e-12;

/// Probability mass a state may leak outside a reference support before
/// a relative entropy is reported as infinite.
pub const SUPPORT_LEAK_TOL: f64 = 1e-10;

/// Time-averaged denominators at or below this make a speed-limit time
/// degenerate (reported as zero with a flag rather than dividing).
pub const TAU_EPS: f64 = 1e-12;

/// Slack floor for inequality checks: a bound counts as violated only if
/// it fails by more than this.
pub const SLACK_TOL: f64 = 1e-9;

/// A bound counts as saturated when its slack's magnitude stays below
/// this (limited by the basis optimizers, not by arithmetic).
pub const SAT_TOL: f64 = 1e-6;

/// Allowed deviation of a generator's operator norm from 1.
pub const GEN_NORM_TOL: f64 = 1e-9;

/// Residual imaginary part allowed when a trace is known to be real.
pub const IM_TRACE_TOL: f64 = 1e-8;

/// Trace / Hermiticity / positivity drift along a trajectory beyond this
/// signals an integrator bug rather than roundoff.
pub const DRIFT_TOL: f64 = 1e-8;

/// Agreement expected from the qubit basis optimizer (grid plus
/// golden-section refinement) on equalities it is supposed to hit.
pub const QUBIT_OPT_TOL: f64 = 1e-6;

/// Duration bookkeeping: segment durations must sum to the declared
/// total time within this.
pub const DURATION_TOL: f64 = 1e-12;
