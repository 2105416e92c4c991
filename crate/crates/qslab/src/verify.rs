//! Randomized stress sweeps of the full bound chain, with reproducer
//! seeds for anything that fails.

use rayon::prelude::*;

use qslab_core::quantify::{bound_report, BasisOptimizerConfig, Slacks};
use qslab_core::{sample, Error, Result};

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    /// Random instances per dimension.
    pub cases: usize,
    pub seed: u64,
    pub dims: Vec<usize>,
    pub optimizer: BasisOptimizerConfig,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            cases: 200,
            seed: 1,
            dims: vec![2, 3, 4],
            optimizer: light_optimizer(0),
        }
    }
}

/// A reduced-effort optimizer preset for bulk sweeps. The eigenbasis
/// candidate keeps the coherence links exact regardless of sampling
/// effort, so thin sampling only widens the conservatively reported
/// weak-value gap.
pub fn light_optimizer(seed: u64) -> BasisOptimizerConfig {
    BasisOptimizerConfig {
        qubit_polar: 31,
        qubit_azimuth: 60,
        refine_iters: 30,
        generic_samples: 25,
        local_steps: 15,
        seed,
    }
}

/// One chain violation, with the stream index that reproduces the
/// instance.
#[derive(Debug, Clone)]
pub struct Violation {
    pub dim: usize,
    pub case_index: usize,
    pub stream: u64,
    pub what: String,
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct DimSweep {
    pub dim: usize,
    pub cases: usize,
    /// Smallest slack seen per link.
    pub min_slacks: Slacks,
    /// Qubits: worst `|weak-value route - asymmetry|`; larger
    /// dimensions: worst overshoot `weak-value route - asymmetry`
    /// (the route only certifies a lower bound there).
    pub worst_weakval_gap: f64,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone)]
pub struct VerifySummary {
    pub sweeps: Vec<DimSweep>,
}

const SLACK_FLOOR: f64 = -1e-9;

fn stream_index(dim: usize, case: usize) -> u64 {
    ((dim as u64) << 32) | case as u64
}

fn sweep_dim(cfg: &VerifyConfig, dim: usize) -> Result<DimSweep> {
    struct CaseOut {
        slacks: [f64; 6],
        weakval_gap: f64,
        violations: Vec<Violation>,
    }
    let outcomes: Vec<CaseOut> = (0..cfg.cases)
        .into_par_iter()
        .map(|case| {
            let stream = stream_index(dim, case);
            let mut rng = sample::stream(cfg.seed, stream);
            let rho = sample::random_density(&mut rng, dim)?;
            let k = sample::random_observable(&mut rng, dim)?;
            let h = sample::random_observable(&mut rng, dim)?;
            let report = bound_report(&rho, &k, &h, &cfg.optimizer)?;
            let s = &report.slacks;
            let slacks = [s.eq2, s.eq5, s.eq10, s.eq12, s.eq15, s.eq16];
            let names = ["eq2", "eq5", "eq10", "eq12", "eq15", "eq16"];
            let mut violations = Vec::new();
            for (name, value) in names.iter().zip(slacks) {
                if value < SLACK_FLOOR {
                    violations.push(Violation {
                        dim,
                        case_index: case,
                        stream,
                        what: format!("{name} slack"),
                        value,
                    });
                }
            }
            let weakval_gap = if dim == 2 {
                (report.weakval_bound - report.asym).abs()
            } else {
                report.weakval_bound - report.asym
            };
            if dim > 2 && weakval_gap > 1e-9 {
                violations.push(Violation {
                    dim,
                    case_index: case,
                    stream,
                    what: "weak-value route above asymmetry".to_string(),
                    value: weakval_gap,
                });
            }
            Ok(CaseOut {
                slacks,
                weakval_gap,
                violations,
            })
        })
        .collect::<Result<_>>()?;

    let mut mins = [f64::INFINITY; 6];
    let mut worst_gap = f64::NEG_INFINITY;
    let mut violations = Vec::new();
    for out in outcomes {
        for (m, v) in mins.iter_mut().zip(out.slacks) {
            *m = m.min(v);
        }
        worst_gap = worst_gap.max(out.weakval_gap);
        violations.extend(out.violations);
    }
    violations.sort_by_key(|v| v.case_index);
    Ok(DimSweep {
        dim,
        cases: cfg.cases,
        min_slacks: Slacks {
            eq2: mins[0],
            eq5: mins[1],
            eq10: mins[2],
            eq12: mins[3],
            eq15: mins[4],
            eq16: mins[5],
        },
        worst_weakval_gap: worst_gap,
        violations,
    })
}

pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifySummary> {
    if cfg.cases == 0 || cfg.dims.is_empty() {
        return Err(Error::InvalidConfig {
            what: "verify needs at least one case and one dimension".to_string(),
        });
    }
    for &d in &cfg.dims {
        if !(2..=16).contains(&d) {
            return Err(Error::BadDimension { dim: d });
        }
    }
    let sweeps = cfg
        .dims
        .iter()
        .map(|&d| sweep_dim(cfg, d))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifySummary { sweeps })
}

impl VerifySummary {
    pub fn ok(&self) -> bool {
        self.sweeps.iter().all(|s| s.violations.is_empty())
    }

    pub fn violation_count(&self) -> usize {
        self.sweeps.iter().map(|s| s.violations.len()).sum()
    }

    pub fn report(&self) -> String {
        let mut out = String::new();
        for s in &self.sweeps {
            out.push_str(&format!(
                "dim {}: {} cases, min slacks eq2 {:.3e} | eq5 {:.3e} | eq10 {:.3e} | \
                 eq12 {:.3e} | eq15 {:.3e} | eq16 {:.3e}\n",
                s.dim,
                s.cases,
                s.min_slacks.eq2,
                s.min_slacks.eq5,
                s.min_slacks.eq10,
                s.min_slacks.eq12,
                s.min_slacks.eq15,
                s.min_slacks.eq16
            ));
            if s.dim == 2 {
                out.push_str(&format!(
                    "        weak-value route vs asymmetry, worst |gap| {:.3e}\n",
                    s.worst_weakval_gap
                ));
            } else {
                out.push_str(&format!(
                    "        weak-value route overshoot (<= 0 expected up to 1e-9): {:.3e}\n",
                    s.worst_weakval_gap
                ));
            }
            for v in &s.violations {
                out.push_str(&format!(
                    "        VIOLATION case {} (stream {}): {} = {:.6e}\n",
                    v.case_index, v.stream, v.what, v.value
                ));
            }
        }
        out.push_str(if self.ok() {
            "all sweeps clean\n"
        } else {
            "violations found\n"
        });
        out
    }
}
