//! Unitary evolution drivers and operational time bounds.
//!
//! States evolve under piecewise-constant Hermitian generators with the
//! convention `drho/dt = -i [H, rho]`; every step applies an exact
//! spectral exponential, so trajectories stay unitary to machine
//! precision regardless of step count. Along the way each node records
//! the instantaneous speed of a probe observable together with the
//! asymmetry and coherence budgets that cap it, which is what the
//! minimal-time estimates [`tau_qsl`] and [`tau_min_qubit`] integrate.

use num_complex::Complex64;
use serde::Deserialize;

use crate::linalg::{commutator, outer, ComplexMatrix};
use crate::qstate::{expectation, observable_from_json, DensityMatrix, Observable, OrthoBasis};
use crate::{quantify, sample, tol};
use crate::{Error, Result};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Speed of the expectation of `k` under the generator `h`:
/// `|tr(H [rho, K])| / 2 = |d<K>/dt| / 2`.
///
/// The trace is purely imaginary up to roundoff because `[rho, K]` is
/// anti-Hermitian, so the magnitude is taken directly.
pub fn instantaneous_speed(
    rho: &DensityMatrix,
    h: &Observable,
    k: &Observable,
) -> Result<f64> {
    if rho.dim() != h.dim() || rho.dim() != k.dim() {
        return Err(Error::DimMismatch {
            left: h.dim(),
            right: k.dim(),
        });
    }
    let comm = commutator(rho.mat(), k.mat())?;
    let t = h.mat().mul(&comm)?.trace();
    Ok(0.5 * t.norm())
}

/// A piecewise-constant drive: unit-norm Hermitian generators with
/// positive durations, summing to the total time `tau`.
#[derive(Debug, Clone)]
pub struct GeneratorProtocol {
    segments: Vec<(Observable, f64)>,
    tau: f64,
}

impl GeneratorProtocol {
    /// Builds a protocol whose total time is the sum of the segment
    /// durations. Each generator must have unit operator norm (the
    /// normalization that makes speed bounds comparable across drives).
    pub fn new(segments: Vec<(Observable, f64)>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidConfig {
                what: "protocol needs at least one segment".to_string(),
            });
        }
        let dim = segments[0].0.dim();
        let mut tau = 0.0;
        for (h, duration) in &segments {
            if h.dim() != dim {
                return Err(Error::DimMismatch {
                    left: dim,
                    right: h.dim(),
                });
            }
            let norm = h.op_norm();
            if (norm - 1.0).abs() > tol::GEN_NORM_TOL {
                return Err(Error::NotUnitNorm { norm });
            }
            if !duration.is_finite() || *duration <= 0.0 {
                return Err(Error::InvalidConfig {
                    what: format!("segment duration must be positive, got {duration}"),
                });
            }
            tau += duration;
        }
        Ok(Self { segments, tau })
    }

    /// Same as [`GeneratorProtocol::new`] but cross-checks the declared
    /// total time against the segment sum.
    pub fn with_tau(segments: Vec<(Observable, f64)>, tau: f64) -> Result<Self> {
        let protocol = Self::new(segments)?;
        if (protocol.tau - tau).abs() > tol::DURATION_TOL * (1.0 + tau.abs()) {
            return Err(Error::InvalidConfig {
                what: format!(
                    "declared tau {tau} disagrees with segment sum {}",
                    protocol.tau
                ),
            });
        }
        Ok(protocol)
    }

    /// Single-generator drive for the whole duration.
    pub fn constant(h: Observable, tau: f64) -> Result<Self> {
        Self::new(vec![(h, tau)])
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn segments(&self) -> &[(Observable, f64)] {
        &self.segments
    }

    /// Parses `{"tau": .., "dt": .., "segments": [..]}` where each
    /// segment is `{"axis": [x, y, z], "duration": ..}` for a qubit
    /// drive along a Bloch axis (normalized automatically) or
    /// `{"matrix": <observable>, "duration": ..}` with an explicit
    /// operator. Returns the protocol and the suggested step size.
    pub fn from_json(text: &str) -> Result<(Self, f64)> {
        #[derive(Deserialize)]
        struct SegmentSpec {
            #[serde(default)]
            axis: Option<[f64; 3]>,
            #[serde(default)]
            matrix: Option<serde_json::Value>,
            duration: f64,
        }
        #[derive(Deserialize)]
        struct ProtocolFile {
            tau: f64,
            dt: f64,
            segments: Vec<SegmentSpec>,
        }
        let file: ProtocolFile =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        if !file.dt.is_finite() || file.dt <= 0.0 {
            return Err(Error::InvalidConfig {
                what: format!("dt must be positive, got {}", file.dt),
            });
        }
        let mut segments = Vec::with_capacity(file.segments.len());
        for spec in file.segments {
            let h = match (spec.axis, spec.matrix) {
                (Some(axis), None) => Observable::from_axis(axis)?,
                (None, Some(value)) => observable_from_json(&value.to_string())?,
                _ => {
                    return Err(Error::Malformed(
                        "segment must have exactly one of \"axis\" or \"matrix\"".to_string(),
                    ))
                }
            };
            segments.push((h, spec.duration));
        }
        Ok((Self::with_tau(segments, file.tau)?, file.dt))
    }
}

/// One sampled instant of an evolution.
#[derive(Debug, Clone)]
pub struct TrajectoryNode {
    pub time: f64,
    pub state: DensityMatrix,
    /// Probe-observable speed under the generator active from here to
    /// the next node (the final node reuses the last generator).
    pub v_k: f64,
    /// Trace-norm asymmetry of the state and the probe.
    pub asym: f64,
    /// l1 coherence in the probe eigenbasis; recorded for qubits, where
    /// it feeds the coherence-based time bound.
    pub c_l1: Option<f64>,
    pub purity: f64,
    pub exp_k: f64,
}

/// A time-ordered sequence of sampled states with speed diagnostics.
#[derive(Debug, Clone)]
pub struct Trajectory {
    nodes: Vec<TrajectoryNode>,
}

impl Trajectory {
    pub fn new(nodes: Vec<TrajectoryNode>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::EmptyTrajectory);
        }
        Ok(Self { nodes })
    }

    pub fn nodes(&self) -> &[TrajectoryNode] {
        &self.nodes
    }

    pub fn duration(&self) -> f64 {
        self.nodes.last().unwrap().time - self.nodes[0].time
    }

    fn time_average(&self, f: impl Fn(&TrajectoryNode) -> f64) -> f64 {
        if self.nodes.len() == 1 || self.duration() <= 0.0 {
            return f(&self.nodes[0]);
        }
        let mut integral = 0.0;
        for w in self.nodes.windows(2) {
            integral += 0.5 * (f(&w[0]) + f(&w[1])) * (w[1].time - w[0].time);
        }
        integral / self.duration()
    }

    /// Trapezoid time average of the instantaneous speed.
    pub fn avg_v_k(&self) -> f64 {
        self.time_average(|n| n.v_k)
    }

    /// Trapezoid time average of the asymmetry.
    pub fn avg_asym(&self) -> f64 {
        self.time_average(|n| n.asym)
    }

    /// Trapezoid time average of the probe-basis l1 coherence, when
    /// every node recorded one.
    pub fn avg_c_l1(&self) -> Option<f64> {
        if self.nodes.iter().any(|n| n.c_l1.is_none()) {
            return None;
        }
        Some(self.time_average(|n| n.c_l1.unwrap()))
    }

    /// Rows of `t,vK,asym,c_l1,purity,exp_K`, floats in shortest
    /// round-trip form; the coherence field is empty when not recorded.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,vK,asym,c_l1,purity,exp_K\n");
        for n in &self.nodes {
            let cl1 = n.c_l1.map(|v| format!("{v}")).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                n.time, n.v_k, n.asym, cl1, n.purity, n.exp_k
            ));
        }
        out
    }
}

fn map_drift(node: usize, e: Error) -> Error {
    match e {
        Error::NotHermitian { dev } => Error::ValidationDrift {
            node,
            what: "hermiticity",
            dev,
        },
        Error::InvalidTrace { dev } => Error::ValidationDrift {
            node,
            what: "trace",
            dev,
        },
        Error::NotPositive { value } => Error::ValidationDrift {
            node,
            what: "positivity",
            dev: value.abs(),
        },
        other => other,
    }
}

struct NodeRecorder {
    probe: Observable,
    probe_basis: Option<OrthoBasis>,
    nodes: Vec<TrajectoryNode>,
}

impl NodeRecorder {
    fn new(probe: &Observable) -> Result<Self> {
        let probe_basis = if probe.dim() == 2 {
            Some(probe.eigenbasis()?)
        } else {
            None
        };
        Ok(Self {
            probe: probe.clone(),
            probe_basis,
            nodes: Vec::new(),
        })
    }

    fn push(&mut self, time: f64, state: DensityMatrix, h: &Observable) -> Result<()> {
        let node_idx = self.nodes.len();
        let v_k = instantaneous_speed(&state, h, &self.probe)?;
        let asym = quantify::trace_norm_asymmetry(&state, &self.probe)
            .map_err(|e| map_drift(node_idx, e))?;
        let c_l1 = match &self.probe_basis {
            Some(basis) => Some(quantify::c_l1(&state, basis)?),
            None => None,
        };
        let purity = state.purity();
        let exp_k = expectation(&state, &self.probe).map_err(|e| map_drift(node_idx, e))?;
        self.nodes.push(TrajectoryNode {
            time,
            state,
            v_k,
            asym,
            c_l1,
            purity,
            exp_k,
        });
        Ok(())
    }
}

/// Evolves `rho0` through the protocol, sampling every `dt` (plus the
/// exact segment boundaries) and recording speed diagnostics for the
/// probe observable. The step must not exceed any segment duration.
pub fn evolve(
    rho0: &DensityMatrix,
    protocol: &GeneratorProtocol,
    probe: &Observable,
    dt: f64,
) -> Result<Trajectory> {
    if !dt.is_finite() || dt <= 0.0 {
        return Err(Error::InvalidConfig {
            what: format!("dt must be positive, got {dt}"),
        });
    }
    if rho0.dim() != protocol.segments[0].0.dim() || rho0.dim() != probe.dim() {
        return Err(Error::DimMismatch {
            left: rho0.dim(),
            right: probe.dim(),
        });
    }
    let min_duration = protocol
        .segments
        .iter()
        .map(|(_, d)| *d)
        .fold(f64::INFINITY, f64::min);
    if dt > min_duration + tol::TAU_EPS {
        return Err(Error::StepTooLarge { dt, min_duration });
    }
    let mut recorder = NodeRecorder::new(probe)?;
    let mut state = rho0.clone();
    let mut segment_start = 0.0;
    for (h, duration) in &protocol.segments {
        let full_steps = (duration / dt + 1e-9).floor() as usize;
        let rem = duration - full_steps as f64 * dt;
        let step_u = h.mat().exp_hermitian_scaled(c(0.0, -dt))?;
        for i in 0..full_steps {
            recorder.push(segment_start + i as f64 * dt, state.clone(), h)?;
            let node_idx = recorder.nodes.len();
            state = state
                .conjugated(&step_u)
                .map_err(|e| map_drift(node_idx, e))?;
        }
        if rem > tol::TAU_EPS {
            recorder.push(segment_start + full_steps as f64 * dt, state.clone(), h)?;
            let rem_u = h.mat().exp_hermitian_scaled(c(0.0, -rem))?;
            let node_idx = recorder.nodes.len();
            state = state
                .conjugated(&rem_u)
                .map_err(|e| map_drift(node_idx, e))?;
        }
        segment_start += duration;
    }
    let last_h = &protocol.segments.last().unwrap().0;
    recorder.push(protocol.tau, state, last_h)?;
    Trajectory::new(recorder.nodes)
}

/// Evolves under a generator chosen anew at every step by `chooser`,
/// which receives the current state and time and must return a
/// unit-norm Hermitian drive for the next interval.
pub fn evolve_with(
    rho0: &DensityMatrix,
    probe: &Observable,
    tau: f64,
    dt: f64,
    mut chooser: impl FnMut(&DensityMatrix, f64) -> Result<Observable>,
) -> Result<Trajectory> {
    if !tau.is_finite() || tau <= 0.0 {
        return Err(Error::InvalidConfig {
            what: format!("tau must be positive, got {tau}"),
        });
    }
    if !dt.is_finite() || dt <= 0.0 {
        return Err(Error::InvalidConfig {
            what: format!("dt must be positive, got {dt}"),
        });
    }
    if dt > tau + tol::TAU_EPS {
        return Err(Error::StepTooLarge {
            dt,
            min_duration: tau,
        });
    }
    let mut recorder = NodeRecorder::new(probe)?;
    let mut state = rho0.clone();
    let full_steps = (tau / dt + 1e-9).floor() as usize;
    let rem = tau - full_steps as f64 * dt;
    let mut last_h: Option<Observable> = None;
    for i in 0..=full_steps {
        let t = i as f64 * dt;
        let width = if i < full_steps { dt } else { rem };
        if width <= tol::TAU_EPS {
            break;
        }
        let h = chooser(&state, t)?;
        let norm = h.op_norm();
        if (norm - 1.0).abs() > tol::GEN_NORM_TOL {
            return Err(Error::NotUnitNorm { norm });
        }
        recorder.push(t, state.clone(), &h)?;
        let u = h.mat().exp_hermitian_scaled(c(0.0, -width))?;
        let node_idx = recorder.nodes.len();
        state = state.conjugated(&u).map_err(|e| map_drift(node_idx, e))?;
        last_h = Some(h);
    }
    let final_h = last_h.expect("at least one step ran");
    recorder.push(tau, state, &final_h)?;
    Trajectory::new(recorder.nodes)
}

/// A minimal-time estimate; `degenerate` flags a vanishing denominator,
/// in which case the bound carries no information and `tau` is zero.
#[derive(Debug, Clone, Copy)]
pub struct TauBound {
    pub tau: f64,
    pub degenerate: bool,
}

/// Speed-limit time from the asymmetry budget: the net change of the
/// probe expectation over the trajectory, divided by twice the
/// time-averaged asymmetry. Never exceeds the actual duration (up to
/// integration error).
pub fn tau_qsl(traj: &Trajectory) -> TauBound {
    let nodes = traj.nodes();
    let delta = (nodes.last().unwrap().exp_k - nodes[0].exp_k).abs();
    let avg = traj.avg_asym();
    if avg <= tol::TAU_EPS {
        TauBound {
            tau: 0.0,
            degenerate: true,
        }
    } else {
        TauBound {
            tau: delta / (2.0 * avg),
            degenerate: false,
        }
    }
}

/// Coherence-route minimal time for a qubit trajectory, recomputed from
/// the stored states against the observable `n_k . sigma`: half the net
/// expectation change divided by the time-averaged l1 coherence in that
/// observable's eigenbasis.
pub fn tau_min_qubit(traj: &Trajectory, n_k: [f64; 3]) -> Result<TauBound> {
    let k = Observable::from_axis(n_k)?;
    let basis = k.eigenbasis()?;
    let nodes = traj.nodes();
    if nodes[0].state.dim() != 2 {
        return Err(Error::NotQubit {
            dim: nodes[0].state.dim(),
        });
    }
    let mut exps = Vec::with_capacity(nodes.len());
    let mut cohs = Vec::with_capacity(nodes.len());
    for n in nodes {
        exps.push(expectation(&n.state, &k)?);
        cohs.push(quantify::c_l1(&n.state, &basis)?);
    }
    let delta = (exps.last().unwrap() - exps[0]).abs();
    let mut integral = 0.0;
    for (w, pair) in nodes.windows(2).zip(cohs.windows(2)) {
        integral += 0.5 * (pair[0] + pair[1]) * (w[1].time - w[0].time);
    }
    let avg = if traj.duration() > 0.0 {
        integral / traj.duration()
    } else {
        cohs[0]
    };
    if avg <= tol::TAU_EPS {
        return Ok(TauBound {
            tau: 0.0,
            degenerate: true,
        });
    }
    Ok(TauBound {
        tau: 0.5 * delta / avg,
        degenerate: false,
    })
}

/// The unit-norm qubit generator that drives the expectation of `k` at
/// the maximal rate allowed by the asymmetry: with eigenkets
/// `|k+>, |k->` of `k` and `phi = arg <k+|rho|k->`, the drive is
/// `e^{-i beta} |k+><k-| + h.c.` at `beta = pi/2 - phi`. The resulting
/// speed equals the trace-norm asymmetry exactly.
pub fn optimal_qubit_generator(rho: &DensityMatrix, k: &Observable) -> Result<Observable> {
    if rho.dim() != 2 || k.dim() != 2 {
        return Err(Error::NotQubit {
            dim: rho.dim().max(k.dim()),
        });
    }
    let eig = k.eigen();
    let gap = eig.values[1] - eig.values[0];
    let scale = 1.0 + eig.values[0].abs().max(eig.values[1].abs());
    if gap <= 1e-12 * scale {
        return Err(Error::DegenerateObservable { gap });
    }
    let low = eig.vectors.column(0);
    let high = eig.vectors.column(1);
    let cross = crate::linalg::sandwich(&high, rho.mat(), &low)?;
    let phi = if cross.norm() > 1e-15 { cross.arg() } else { 0.0 };
    let beta = std::f64::consts::FRAC_PI_2 - phi;
    let phase = c(beta.cos(), -beta.sin());
    let up = outer(&high, &low)?.scale(phase);
    let h = up.add(&up.dagger())?;
    Observable::new(h)
}

/// Best achieved probe speed over unit-norm generators, found by
/// seeded random search with greedy refinement. A certified lower bound
/// on the asymmetry: every value reported is the speed of a concrete
/// admissible drive. Qubits delegate to the exact construction.
pub fn v_qsl_numeric(
    rho: &DensityMatrix,
    k: &Observable,
    seed: u64,
    budget: usize,
) -> Result<f64> {
    if rho.dim() != k.dim() {
        return Err(Error::DimMismatch {
            left: rho.dim(),
            right: k.dim(),
        });
    }
    if budget == 0 {
        return Err(Error::InvalidConfig {
            what: "search budget must be >= 1".to_string(),
        });
    }
    if rho.dim() == 2 {
        return match optimal_qubit_generator(rho, k) {
            Ok(h) => instantaneous_speed(rho, &h, k),
            // Degenerate probe commutes with everything: no motion.
            Err(Error::DegenerateObservable { .. }) => Ok(0.0),
            Err(e) => Err(e),
        };
    }
    let d = rho.dim();
    let mut best = 0.0_f64;
    let mut best_h: Option<Observable> = None;
    for i in 0..budget {
        let mut rng = sample::stream(seed, i as u64);
        let h = sample::random_unit_observable(&mut rng, d)?;
        let v = instantaneous_speed(rho, &h, k)?;
        if v > best || best_h.is_none() {
            best = v;
            best_h = Some(h);
        }
    }
    let mut current = best_h.expect("budget >= 1 produced a candidate");
    let mut rng = sample::stream(seed, u64::MAX);
    let mut eps = 0.3;
    for _ in 0..budget / 2 {
        let g = sample::gue(&mut rng, d)?;
        let perturbed = current.mat().add(&g.scale(c(eps, 0.0)))?;
        let norm = Observable::new(perturbed.clone())?.op_norm();
        if norm < 1e-14 {
            continue;
        }
        let h = Observable::new(perturbed.scale(c(1.0 / norm, 0.0)))?;
        let v = instantaneous_speed(rho, &h, k)?;
        if v > best {
            best = v;
            current = h;
        } else {
            eps *= 0.9;
        }
    }
    Ok(best)
}

/// The projector onto the nonnegative eigenspace of `rho1 - rho0`,
/// which is the unit-norm observable whose expectation separates the
/// two states the most, together with that separation
/// `tr(K (rho1 - rho0)) = ||rho1 - rho0||_1 / 2`. Indistinguishable
/// inputs give the zero observable.
pub fn optimal_distinguishing_observable(
    rho0: &DensityMatrix,
    rho1: &DensityMatrix,
) -> Result<(Observable, f64)> {
    if rho0.dim() != rho1.dim() {
        return Err(Error::DimMismatch {
            left: rho0.dim(),
            right: rho1.dim(),
        });
    }
    let d = rho0.dim();
    let diff = rho1.mat().sub(rho0.mat())?;
    let eig = diff.herm_eig()?;
    let top = eig.values.iter().fold(0.0_f64, |m, &l| m.max(l.abs()));
    if top <= 1e-12 {
        return Ok((Observable::new(ComplexMatrix::zeros(d)?)?, 0.0));
    }
    let mut projector = ComplexMatrix::zeros(d)?;
    let mut value = 0.0;
    for (idx, &l) in eig.values.iter().enumerate() {
        if l > 0.0 {
            let v = eig.vectors.column(idx);
            projector = projector.add(&outer(&v, &v)?)?;
            value += l;
        }
    }
    Ok((Observable::new(projector)?, value))
}
