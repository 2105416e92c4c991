//! Experiment drivers on top of `qslab-core`: the random-ensemble
//! minimal-time study ([`figure1`]), mutually unbiased basis
//! complementarity sweeps ([`complementarity`]), entropy-flow runs
//! against thermal references ([`thermo`]), and randomized verification
//! of the whole bound chain ([`verify`]). Each driver is deterministic
//! for a given seed, independent of thread count, and returns a summary
//! that renders its own report.

pub mod complementarity;
pub mod figure1;
pub mod thermo;
pub mod verify;
