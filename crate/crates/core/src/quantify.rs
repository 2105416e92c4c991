//! Speed bounds and coherence quantifiers for observable dynamics.
//!
//! The central quantity is the trace-norm asymmetry
//! `asym(rho, K) = ||[rho, K]||_1 / 2`, which caps how fast `<K>` can
//! move under any unit-norm generator. It is bounded above by the
//! Fisher-information route `sqrt(F)/2` and by the standard deviation of
//! `K`, and reproduced from below by a variational sweep over
//! postselection bases of the imaginary parts of weak values. For a
//! normalized observable the asymmetry is further dominated by two
//! coherence monotones in the observable eigenbasis: the nonreality of
//! the Kirkwood-Dirac quasiprobability and the l1 coherence.
//! [`bound_report`] evaluates the whole family at once and accounts for
//! the slack in every link.

use num_complex::Complex64;
use serde::Serialize;

use crate::linalg::{commutator, outer, ComplexMatrix};
use crate::qstate::{variance, DensityMatrix, Observable, OrthoBasis};
use crate::{sample, tol};
use crate::{Error, Result};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Settings for the basis optimizers behind the weak-value sweep and
/// the Kirkwood-Dirac nonreality coherence.
///
/// Qubit problems run an exhaustive polar-azimuth grid followed by
/// coordinate-wise golden-section refinement. Larger dimensions draw
/// seeded Haar-random bases plus greedy local rotations; their result is
/// a certified lower bound on the supremum (every candidate evaluated is
/// a genuine orthonormal basis). Both paths also evaluate the eigenbasis
/// of the objective's Hermitian kernel, which is the natural stationary
/// candidate, so reported values do not depend on sampling luck.
#[derive(Debug, Clone)]
pub struct BasisOptimizerConfig {
    /// Polar grid points over [0, pi], endpoints included.
    pub qubit_polar: usize,
    /// Azimuthal grid points over [0, 2 pi).
    pub qubit_azimuth: usize,
    /// Golden-section iterations per coordinate pass.
    pub refine_iters: usize,
    /// Haar-random candidate bases for dimension > 2.
    pub generic_samples: usize,
    /// Greedy local rotation steps after the random sweep.
    pub local_steps: usize,
    /// Seed for the candidate substreams.
    pub seed: u64,
}

impl Default for BasisOptimizerConfig {
    fn default() -> Self {
        Self {
            qubit_polar: 181,
            qubit_azimuth: 360,
            refine_iters: 40,
            generic_samples: 2000,
            local_steps: 200,
            seed: 0,
        }
    }
}

impl BasisOptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.qubit_polar < 2 {
            return Err(Error::InvalidConfig {
                what: format!("qubit_polar must be >= 2, got {}", self.qubit_polar),
            });
        }
        if self.qubit_azimuth < 1 {
            return Err(Error::InvalidConfig {
                what: "qubit_azimuth must be >= 1".to_string(),
            });
        }
        if self.generic_samples < 1 {
            return Err(Error::InvalidConfig {
                what: "generic_samples must be >= 1".to_string(),
            });
        }
        Ok(())
    }
}

/// `||[rho, K]||_1 / 2`.
///
/// The commutator is anti-Hermitian, so `i [rho, K]` is Hermitian and
/// its eigenvalue magnitudes are exactly the singular values of the
/// commutator. Going through that spectrum keeps absolute accuracy at
/// machine level even when the asymmetry is tiny, which the generic
/// `A A^dagger` singular-value route cannot guarantee.
pub fn trace_norm_asymmetry(rho: &DensityMatrix, k: &Observable) -> Result<f64> {
    let comm = commutator(rho.mat(), k.mat())?;
    let herm = comm.scale(c(0.0, 1.0));
    let eig = herm.herm_eig()?;
    Ok(0.5 * eig.values.iter().map(|l| l.abs()).sum::<f64>())
}

/// Hermitian kernel of the imaginary-part objective:
/// `Im <x|A|x> = <x| (A - A^dagger)/(2i) |x>`.
fn imag_kernel(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(a.sub(&a.dagger())?.scale(c(0.0, -0.5)))
}

/// Sum of |diagonal| of `M` in the basis given by `columns`.
fn abs_diag_objective(m: &ComplexMatrix, columns: &ComplexMatrix) -> f64 {
    let d = m.dim();
    let mut total = 0.0;
    for x in 0..d {
        let mut q = c(0.0, 0.0);
        for i in 0..d {
            let ci = columns[(i, x)];
            for j in 0..d {
                q += ci.conj() * m[(i, j)] * columns[(j, x)];
            }
        }
        total += q.re.abs();
    }
    total
}

/// Qubit objective over the basis {|b>, |b_perp>} with Bloch angles
/// (theta, phi).
fn qubit_objective(m: &ComplexMatrix, theta: f64, phi: f64) -> f64 {
    let (ct, st) = ((0.5 * theta).cos(), (0.5 * theta).sin());
    let phase = c(phi.cos(), phi.sin());
    let b = [c(ct, 0.0), phase * st];
    let bp = [-phase.conj() * st, c(ct, 0.0)];
    let quad = |v: &[Complex64; 2]| -> f64 {
        let mut q = c(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                q += v[i].conj() * m[(i, j)] * v[j];
            }
        }
        q.re
    };
    quad(&b).abs() + quad(&bp).abs()
}

fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Maximizes the absolute-diagonal objective for a Hermitian kernel
/// over orthonormal bases. Exact-method choice depends on dimension;
/// see [`BasisOptimizerConfig`].
fn maximize_abs_diag(m: &ComplexMatrix, cfg: &BasisOptimizerConfig) -> Result<f64> {
    cfg.validate()?;
    let eig = m.herm_eig()?;
    let mut best = abs_diag_objective(m, &eig.vectors);
    let d = m.dim();
    if d == 2 {
        let d_theta = std::f64::consts::PI / (cfg.qubit_polar - 1) as f64;
        let d_phi = 2.0 * std::f64::consts::PI / cfg.qubit_azimuth as f64;
        let mut best_angles = (0.0, 0.0);
        let mut best_grid = f64::NEG_INFINITY;
        for i in 0..cfg.qubit_polar {
            let theta = i as f64 * d_theta;
            for j in 0..cfg.qubit_azimuth {
                let phi = j as f64 * d_phi;
                let val = qubit_objective(m, theta, phi);
                if val > best_grid {
                    best_grid = val;
                    best_angles = (theta, phi);
                }
            }
        }
        let (mut theta, mut phi) = best_angles;
        let mut refined = best_grid;
        for _ in 0..3 {
            let (t, ft) = golden_max(
                |x| qubit_objective(m, x, phi),
                theta - d_theta,
                theta + d_theta,
                cfg.refine_iters,
            );
            theta = t;
            refined = refined.max(ft);
            let (p, fp) = golden_max(
                |x| qubit_objective(m, theta, x),
                phi - d_phi,
                phi + d_phi,
                cfg.refine_iters,
            );
            phi = p;
            refined = refined.max(fp);
        }
        return Ok(best.max(refined));
    }

    let mut best_columns = eig.vectors.clone();
    for i in 0..cfg.generic_samples {
        let mut rng = sample::stream(cfg.seed, i as u64);
        let basis = sample::haar_basis(&mut rng, d)?;
        let val = abs_diag_objective(m, basis.vectors());
        if val > best {
            best = val;
            best_columns = basis.vectors().clone();
        }
    }
    let mut rng = sample::stream(cfg.seed, u64::MAX);
    let mut eps = 0.25;
    for _ in 0..cfg.local_steps {
        let g = sample::gue(&mut rng, d)?;
        let u = g.exp_hermitian_scaled(c(0.0, eps))?;
        let candidate = best_columns.mul(&u)?;
        let val = abs_diag_objective(m, &candidate);
        if val > best {
            best = val;
            best_columns = candidate;
        } else {
            eps *= 0.85;
        }
    }
    Ok(best)
}

/// Variational route to the asymmetry: the supremum over orthonormal
/// measurement bases of `sum_x |Im K_w(x|rho)| Pr(x|rho)`, where `K_w`
/// is the weak value after postselecting on `|x>`. Terms with vanishing
/// postselection probability contribute zero (for positive `rho`,
/// `<x|rho|x> = 0` forces `<x|K rho|x> = 0`).
///
/// For qubits the optimizer is effectively exhaustive and the result
/// reproduces [`trace_norm_asymmetry`] to optimizer precision; in higher
/// dimensions the value is a certified lower bound that never exceeds
/// the asymmetry beyond roundoff.
pub fn asymmetry_via_weak_values(
    rho: &DensityMatrix,
    k: &Observable,
    cfg: &BasisOptimizerConfig,
) -> Result<f64> {
    if rho.dim() != k.dim() {
        return Err(Error::DimMismatch {
            left: rho.dim(),
            right: k.dim(),
        });
    }
    // sum_x |Im <x|K rho|x>| with kernel (K rho - rho K)/(2i).
    let m = imag_kernel(&k.mat().mul(rho.mat())?)?;
    maximize_abs_diag(&m, cfg)
}

/// Quantum Fisher information of `rho` for the generator `K`, from the
/// spectral representation. Eigenvalue pairs whose weight sum is at or
/// below the support gate are skipped; eigenvalue dust in
/// `[-EIG_NEG_TOL, 0)` is clamped to zero first.
pub fn qfi(rho: &DensityMatrix, k: &Observable) -> Result<f64> {
    if rho.dim() != k.dim() {
        return Err(Error::DimMismatch {
            left: rho.dim(),
            right: k.dim(),
        });
    }
    let eig = rho.eig()?;
    let d = rho.dim();
    let p: Vec<f64> = eig.values.iter().map(|&l| l.max(0.0)).collect();
    // K in the eigenbasis of rho.
    let kt = eig.vectors.dagger().mul(k.mat())?.mul(&eig.vectors)?;
    let mut total = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i == j {
                continue;
            }
            let s = p[i] + p[j];
            if s <= tol::QFI_EPS {
                continue;
            }
            let diff = p[i] - p[j];
            total += 2.0 * diff * diff / s * kt[(i, j)].norm_sqr();
        }
    }
    Ok(total)
}

/// l1 coherence of `rho` in a basis: sum of off-diagonal magnitudes.
pub fn c_l1(rho: &DensityMatrix, basis: &OrthoBasis) -> Result<f64> {
    if rho.dim() != basis.dim() {
        return Err(Error::DimMismatch {
            left: rho.dim(),
            right: basis.dim(),
        });
    }
    let v = basis.vectors();
    let transformed = v.dagger().mul(rho.mat())?.mul(v)?;
    let d = rho.dim();
    let mut total = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                total += transformed[(i, j)].norm();
            }
        }
    }
    Ok(total)
}

/// Kirkwood-Dirac nonreality coherence of `rho` relative to the basis
/// `{|k>}`: for each `k`, the supremum over conjugate bases of the
/// imaginary mass of the quasiprobability row, summed over `k`.
///
/// Each per-`k` supremum is a basis optimization with the Hermitian
/// kernel `(|k><k| rho - rho |k><k|)/(2i)` and shares the optimizer
/// with the weak-value route (including its lower-bound caveat for
/// dimension > 2).
pub fn c_kd_nonreality(
    rho: &DensityMatrix,
    kbasis: &OrthoBasis,
    cfg: &BasisOptimizerConfig,
) -> Result<f64> {
    if rho.dim() != kbasis.dim() {
        return Err(Error::DimMismatch {
            left: rho.dim(),
            right: kbasis.dim(),
        });
    }
    let d = rho.dim();
    let mut total = 0.0;
    for kidx in 0..d {
        let ket = kbasis.ket(kidx);
        let projector = outer(&ket, &ket)?;
        let m = imag_kernel(&projector.mul(rho.mat())?)?;
        total += maximize_abs_diag(&m, cfg)?;
    }
    Ok(total)
}

/// Relative entropy `S(rho || sigma)` in nats. Returns infinity when
/// `rho` has probability mass outside the support of `sigma`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        });
    }
    let er = rho.eig()?;
    let es = sigma.eig()?;
    let d = rho.dim();
    let p: Vec<f64> = er.values.iter().map(|&l| l.max(0.0)).collect();
    let q: Vec<f64> = es.values.iter().map(|&l| l.max(0.0)).collect();
    // Overlap matrix |<u_i|v_j>|^2 between the two eigenbases.
    let w = er.vectors.dagger().mul(&es.vectors)?;
    let mut leak = 0.0;
    for j in 0..d {
        if q[j] <= tol::SUPPORT_EPS {
            for i in 0..d {
                leak += p[i] * w[(i, j)].norm_sqr();
            }
        }
    }
    if leak > tol::SUPPORT_LEAK_TOL {
        return Ok(f64::INFINITY);
    }
    let mut s = 0.0;
    for i in 0..d {
        if p[i] <= tol::SUPPORT_EPS {
            continue;
        }
        s += p[i] * p[i].ln();
        for j in 0..d {
            if q[j] <= tol::SUPPORT_EPS {
                continue;
            }
            s -= p[i] * w[(i, j)].norm_sqr() * q[j].ln();
        }
    }
    Ok(s)
}

/// Entropy production rate `-tr(drho_dt ln sigma)` against a full-rank
/// reference state. `drho_dt` must be Hermitian and traceless (it is a
/// derivative of a unit-trace Hermitian family).
pub fn entropy_production_rate(drho_dt: &ComplexMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if drho_dt.dim() != sigma.dim() {
        return Err(Error::DimMismatch {
            left: drho_dt.dim(),
            right: sigma.dim(),
        });
    }
    let dev = drho_dt.herm_deviation();
    if dev > tol::SLACK_TOL {
        return Err(Error::NotHermitian { dev });
    }
    let tr = drho_dt.trace().norm();
    if tr > tol::SLACK_TOL {
        return Err(Error::Malformed(format!(
            "state derivative must be traceless, |tr| = {tr:.3e}"
        )));
    }
    let es = sigma.eig()?;
    if es.values.iter().any(|&q| q <= tol::SUPPORT_EPS) {
        return Err(Error::SingularReference);
    }
    let d = sigma.dim();
    let vm = &es.vectors;
    let ln_sigma = ComplexMatrix::from_fn(d, |i, j| {
        (0..d)
            .map(|kk| vm[(i, kk)] * es.values[kk].ln() * vm[(j, kk)].conj())
            .sum()
    })?;
    let t = drho_dt.mul(&ln_sigma)?.trace();
    if t.im.abs() > tol::IM_TRACE_TOL {
        return Err(Error::NonRealExpectation { imag: t.im });
    }
    Ok(-t.re)
}

/// Thermodynamic speed cap `(beta / 2) ||[rho, H_b]||_1` on the entropy
/// flux generated by any unit-norm drive, linear in the inverse
/// temperature.
pub fn thermo_speed_limit(rho: &DensityMatrix, hb: &Observable, beta: f64) -> Result<f64> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::InvalidConfig {
            what: format!("inverse temperature must be finite and >= 0, got {beta}"),
        });
    }
    Ok(beta * trace_norm_asymmetry(rho, hb)?)
}

/// Slack of every bound in the chain, each named after the link it
/// closes; nonnegative up to roundoff when the implementation is
/// correct.
#[derive(Debug, Clone, Serialize)]
pub struct Slacks {
    /// Variance product minus speed.
    pub eq2: f64,
    /// Asymmetry minus speed.
    pub eq5: f64,
    /// Fisher route minus asymmetry.
    pub eq10: f64,
    /// Observable standard deviation minus asymmetry.
    pub eq12: f64,
    /// Kirkwood-Dirac nonreality minus normalized asymmetry.
    pub eq15: f64,
    /// l1 coherence minus Kirkwood-Dirac nonreality.
    pub eq16: f64,
}

/// Which links are saturated (slack within [`tol::SAT_TOL`]).
#[derive(Debug, Clone, Serialize)]
pub struct Saturation {
    pub eq2: bool,
    pub eq5: bool,
    pub eq10: bool,
    pub eq12: bool,
    pub eq15: bool,
    pub eq16: bool,
}

/// One-stop evaluation of the speed and all its bounds for a state, an
/// observable, and a generator.
///
/// The generator is normalized to unit operator norm internally and the
/// coherence links compare against the asymmetry of `K / ||K||`; the raw
/// norms used for the rescaling are reported so callers can undo it.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    /// Instantaneous speed `|tr([H, rho] K)| / 2` with normalized `H`.
    pub v_k: f64,
    /// Trace-norm asymmetry of `rho` and `K`.
    pub asym: f64,
    /// Weak-value variational lower reproduction of the asymmetry.
    pub weakval_bound: f64,
    /// Quantum Fisher information for generator `K`.
    pub qfi: f64,
    pub stddev_k: f64,
    pub stddev_h: f64,
    /// Kirkwood-Dirac nonreality coherence in the eigenbasis of `K`.
    pub c_kd_nre: f64,
    /// l1 coherence in the eigenbasis of `K`.
    pub c_l1: f64,
    /// Operator norm of the observable as supplied.
    pub k_norm: f64,
    /// Operator norm of the generator as supplied.
    pub h_norm: f64,
    pub slacks: Slacks,
    pub saturated: Saturation,
}

pub fn bound_report(
    rho: &DensityMatrix,
    k: &Observable,
    h: &Observable,
    cfg: &BasisOptimizerConfig,
) -> Result<BoundReport> {
    let k_norm = k.op_norm();
    let h_norm = h.op_norm();
    if k_norm < 1e-14 || h_norm < 1e-14 {
        return Err(Error::ZeroOperator);
    }
    let h_unit = Observable::new(h.mat().scale(c(1.0 / h_norm, 0.0)))?;
    let v_k = crate::dynamics::instantaneous_speed(rho, &h_unit, k)?;
    let asym = trace_norm_asymmetry(rho, k)?;
    let weakval_bound = asymmetry_via_weak_values(rho, k, cfg)?;
    let fisher = qfi(rho, k)?;
    let stddev_k = variance(rho, k)?.sqrt();
    let stddev_h = variance(rho, &h_unit)?.sqrt();
    let kbasis = k.eigenbasis()?;
    let c_kd_nre = c_kd_nonreality(rho, &kbasis, cfg)?;
    let cl1 = c_l1(rho, &kbasis)?;
    let slacks = Slacks {
        eq2: stddev_k * stddev_h - v_k,
        eq5: asym - v_k,
        eq10: fisher.sqrt() / 2.0 - asym,
        eq12: stddev_k - asym,
        eq15: c_kd_nre - asym / k_norm,
        eq16: cl1 - c_kd_nre,
    };
    let saturated = Saturation {
        eq2: slacks.eq2.abs() <= tol::SAT_TOL,
        eq5: slacks.eq5.abs() <= tol::SAT_TOL,
        eq10: slacks.eq10.abs() <= tol::SAT_TOL,
        eq12: slacks.eq12.abs() <= tol::SAT_TOL,
        eq15: slacks.eq15.abs() <= tol::SAT_TOL,
        eq16: slacks.eq16.abs() <= tol::SAT_TOL,
    };
    Ok(BoundReport {
        v_k,
        asym,
        weakval_bound,
        qfi: fisher,
        stddev_k,
        stddev_h,
        c_kd_nre,
        c_l1: cl1,
        k_norm,
        h_norm,
        slacks,
        saturated,
    })
}

impl BoundReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{
        mub_qubit_bases, pauli_y, pauli_z, BlochVector,
    };
    use crate::sample;

    fn plus_x_state() -> DensityMatrix {
        DensityMatrix::from_bloch(BlochVector::new(1.0, 0.0, 0.0)).unwrap()
    }

    fn obs(m: ComplexMatrix) -> Observable {
        Observable::new(m).unwrap()
    }

    /// Independent qubit closed form: asym = |k+ - k-| |<k+|rho|k->|,
    /// straight from the observable eigendecomposition.
    fn qubit_asym_closed_form(rho: &DensityMatrix, k: &Observable) -> f64 {
        let eig = k.eigen();
        let low = eig.vectors.column(0);
        let high = eig.vectors.column(1);
        let cross = crate::linalg::sandwich(&high, rho.mat(), &low).unwrap();
        (eig.values[1] - eig.values[0]).abs() * cross.norm()
    }

    #[test]
    fn asymmetry_frozen_values() {
        let k = obs(pauli_z());
        assert!((trace_norm_asymmetry(&plus_x_state(), &k).unwrap() - 1.0).abs() < 1e-12);
        let partial = DensityMatrix::from_bloch(BlochVector::new(0.8, 0.0, 0.0)).unwrap();
        assert!((trace_norm_asymmetry(&partial, &k).unwrap() - 0.8).abs() < 1e-12);
        // Commuting pair.
        let up = DensityMatrix::from_bloch(BlochVector::new(0.0, 0.0, 0.7)).unwrap();
        assert!(trace_norm_asymmetry(&up, &k).unwrap() < 1e-14);
    }

    #[test]
    fn asymmetry_matches_qubit_closed_form() {
        let mut rng = sample::stream(31, 0);
        for _ in 0..200 {
            let rho = sample::random_density(&mut rng, 2).unwrap();
            let k = sample::random_observable(&mut rng, 2).unwrap();
            let a = trace_norm_asymmetry(&rho, &k).unwrap();
            let oracle = qubit_asym_closed_form(&rho, &k);
            assert!((a - oracle).abs() < 1e-12, "{a} vs {oracle}");
        }
    }

    #[test]
    fn asymmetry_matches_schatten_route() {
        let mut rng = sample::stream(32, 0);
        for d in [2usize, 3, 4] {
            for _ in 0..40 {
                let rho = sample::random_density(&mut rng, d).unwrap();
                let k = sample::random_observable(&mut rng, d).unwrap();
                let spectral = trace_norm_asymmetry(&rho, &k).unwrap();
                let comm = commutator(rho.mat(), k.mat()).unwrap();
                let generic = 0.5 * comm.schatten_norm(1.0).unwrap();
                assert!(
                    (spectral - generic).abs() < 1e-8,
                    "d={d}: {spectral} vs {generic}"
                );
            }
        }
    }

    #[test]
    fn weak_value_route_reproduces_asymmetry_for_qubits() {
        let cfg = BasisOptimizerConfig::default();
        let mut rng = sample::stream(33, 0);
        for _ in 0..25 {
            let rho = sample::random_density(&mut rng, 2).unwrap();
            let k = sample::random_observable(&mut rng, 2).unwrap();
            let asym = trace_norm_asymmetry(&rho, &k).unwrap();
            let wv = asymmetry_via_weak_values(&rho, &k, &cfg).unwrap();
            assert!(
                (wv - asym).abs() <= tol::QUBIT_OPT_TOL,
                "weak-value sweep {wv} vs asymmetry {asym}"
            );
        }
    }

    #[test]
    fn weak_value_route_never_exceeds_asymmetry() {
        let cfg = BasisOptimizerConfig {
            generic_samples: 60,
            local_steps: 40,
            ..Default::default()
        };
        let mut rng = sample::stream(34, 0);
        for d in [3usize, 4] {
            for _ in 0..10 {
                let rho = sample::random_density(&mut rng, d).unwrap();
                let k = sample::random_observable(&mut rng, d).unwrap();
                let asym = trace_norm_asymmetry(&rho, &k).unwrap();
                let wv = asymmetry_via_weak_values(&rho, &k, &cfg).unwrap();
                assert!(
                    wv <= asym + tol::SLACK_TOL,
                    "d={d}: lower bound {wv} exceeded asymmetry {asym}"
                );
            }
        }
    }

    #[test]
    fn qfi_frozen_value_and_pure_state_identity() {
        let k = obs(pauli_z());
        assert!((qfi(&plus_x_state(), &k).unwrap() - 4.0).abs() < 1e-10);
        let mut rng = sample::stream(35, 0);
        for d in [2usize, 3, 4] {
            for _ in 0..30 {
                let rho = sample::random_pure(&mut rng, d).unwrap();
                let k = sample::random_observable(&mut rng, d).unwrap();
                let f = qfi(&rho, &k).unwrap();
                let v = variance(&rho, &k).unwrap();
                assert!((f - 4.0 * v).abs() < 1e-8, "d={d}: {f} vs 4*{v}");
            }
        }
    }

    #[test]
    fn qfi_route_equals_asymmetry_for_qubits() {
        let mut rng = sample::stream(36, 0);
        for _ in 0..100 {
            let rho = sample::random_density(&mut rng, 2).unwrap();
            let k = sample::random_observable(&mut rng, 2).unwrap();
            let f = qfi(&rho, &k).unwrap();
            let asym = trace_norm_asymmetry(&rho, &k).unwrap();
            assert!((f.sqrt() / 2.0 - asym).abs() < 1e-8);
        }
    }

    #[test]
    fn qfi_is_shift_invariant() {
        let mut rng = sample::stream(37, 0);
        for d in [2usize, 3] {
            let rho = sample::random_density(&mut rng, d).unwrap();
            let k = sample::random_observable(&mut rng, d).unwrap();
            let shifted = obs(
                k.mat()
                    .add(&ComplexMatrix::identity(d).unwrap().scale(c(1.7, 0.0)))
                    .unwrap(),
            );
            let f0 = qfi(&rho, &k).unwrap();
            let f1 = qfi(&rho, &shifted).unwrap();
            assert!((f0 - f1).abs() < 1e-9);
        }
    }

    #[test]
    fn l1_coherence_closed_form_for_qubits() {
        let (_, _, z) = mub_qubit_bases();
        let mut rng = sample::stream(38, 0);
        for _ in 0..100 {
            let rho = sample::random_density(&mut rng, 2).unwrap();
            let r = rho.to_bloch().unwrap();
            let expect = (r.x * r.x + r.y * r.y).sqrt();
            let got = c_l1(&rho, &z).unwrap();
            assert!((got - expect).abs() < 1e-12);
        }
        // Diagonal state has no coherence in its own basis.
        let up = DensityMatrix::from_bloch(BlochVector::new(0.0, 0.0, 0.4)).unwrap();
        assert!(c_l1(&up, &z).unwrap() < 1e-14);
    }

    #[test]
    fn kd_nonreality_vanishes_for_diagonal_states() {
        let (_, _, z) = mub_qubit_bases();
        let cfg = BasisOptimizerConfig::default();
        let up = DensityMatrix::from_bloch(BlochVector::new(0.0, 0.0, 0.9)).unwrap();
        assert!(c_kd_nonreality(&up, &z, &cfg).unwrap() < 1e-12);
    }

    #[test]
    fn kd_nonreality_equals_l1_for_qubits() {
        let cfg = BasisOptimizerConfig::default();
        let mut rng = sample::stream(39, 0);
        for _ in 0..20 {
            let rho = sample::random_density(&mut rng, 2).unwrap();
            let basis = sample::haar_basis(&mut rng, 2).unwrap();
            let ckd = c_kd_nonreality(&rho, &basis, &cfg).unwrap();
            let cl = c_l1(&rho, &basis).unwrap();
            assert!(
                (ckd - cl).abs() <= tol::QUBIT_OPT_TOL,
                "KD nonreality {ckd} vs l1 {cl}"
            );
        }
    }

    #[test]
    fn kd_nonreality_below_l1_in_higher_dimensions() {
        let cfg = BasisOptimizerConfig {
            generic_samples: 40,
            local_steps: 20,
            ..Default::default()
        };
        let mut rng = sample::stream(40, 0);
        for d in [3usize, 4] {
            for _ in 0..8 {
                let rho = sample::random_density(&mut rng, d).unwrap();
                let basis = sample::haar_basis(&mut rng, d).unwrap();
                let ckd = c_kd_nonreality(&rho, &basis, &cfg).unwrap();
                let cl = c_l1(&rho, &basis).unwrap();
                assert!(ckd <= cl + tol::SLACK_TOL, "d={d}: {ckd} vs {cl}");
            }
        }
    }

    #[test]
    fn relative_entropy_basic_identities() {
        let mut rng = sample::stream(41, 0);
        for d in [2usize, 3] {
            let rho = sample::random_density(&mut rng, d).unwrap();
            // S(rho || rho) = 0.
            assert!(relative_entropy(&rho, &rho).unwrap().abs() < 1e-9);
            // S(rho || I/d) = ln d - S_vN(rho).
            let mixed = DensityMatrix::maximally_mixed(d).unwrap();
            let s = relative_entropy(&rho, &mixed).unwrap();
            let svn: f64 = rho
                .eig()
                .unwrap()
                .values
                .iter()
                .filter(|&&p| p > tol::SUPPORT_EPS)
                .map(|&p| -p * p.ln())
                .sum();
            assert!((s - ((d as f64).ln() - svn)).abs() < 1e-9, "d={d}");
            // Klein inequality.
            let sigma = sample::random_density(&mut rng, d).unwrap();
            assert!(relative_entropy(&rho, &sigma).unwrap() >= -1e-10);
        }
    }

    #[test]
    fn relative_entropy_detects_support_violation() {
        let up = DensityMatrix::from_bloch(BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        let down = DensityMatrix::from_bloch(BlochVector::new(0.0, 0.0, -1.0)).unwrap();
        assert!(relative_entropy(&up, &down).unwrap().is_infinite());
    }

    #[test]
    fn entropy_production_rate_matches_entropy_derivative() {
        // Along unitary motion, d/dt S(rho_t || sigma) = -tr(drho ln sigma).
        let (sigma, _) = crate::qstate::gibbs_state(&pauli_z(), 0.7).unwrap();
        let rho = plus_x_state();
        let h = pauli_y();
        let drho = commutator(&h, rho.mat()).unwrap().scale(c(0.0, -1.0));
        let rate = entropy_production_rate(&drho, &sigma).unwrap();
        let dt = 1e-6;
        let u = h.exp_hermitian_scaled(c(0.0, -dt)).unwrap();
        let fwd = rho.conjugated(&u).unwrap();
        let bwd = rho.conjugated(&u.dagger()).unwrap();
        let numeric = (relative_entropy(&fwd, &sigma).unwrap()
            - relative_entropy(&bwd, &sigma).unwrap())
            / (2.0 * dt);
        assert!((rate - numeric).abs() < 1e-6, "{rate} vs {numeric}");
    }

    #[test]
    fn entropy_production_rejects_singular_reference() {
        let pure = plus_x_state();
        let drho = commutator(&pauli_y(), pure.mat())
            .unwrap()
            .scale(c(0.0, -1.0));
        assert!(matches!(
            entropy_production_rate(&drho, &pure),
            Err(Error::SingularReference)
        ));
    }

    #[test]
    fn thermo_speed_limit_frozen_and_linear() {
        let hb = obs(pauli_z());
        let rho = plus_x_state();
        assert!((thermo_speed_limit(&rho, &hb, 2.0).unwrap() - 2.0).abs() < 1e-12);
        let at_beta = thermo_speed_limit(&rho, &hb, 1.3).unwrap();
        let at_half = thermo_speed_limit(&rho, &hb, 0.65).unwrap();
        assert!((at_beta - 2.0 * at_half).abs() < 1e-12);
        assert!(thermo_speed_limit(&rho, &hb, 0.0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn bound_report_fully_saturated_example() {
        // rho = |x+><x+|, K = sigma_z, H = sigma_y saturates every link.
        let cfg = BasisOptimizerConfig::default();
        let report = bound_report(
            &plus_x_state(),
            &obs(pauli_z()),
            &obs(pauli_y()),
            &cfg,
        )
        .unwrap();
        assert!((report.v_k - 1.0).abs() < 1e-10);
        assert!((report.asym - 1.0).abs() < 1e-10);
        assert!((report.qfi - 4.0).abs() < 1e-9);
        assert!(report.saturated.eq2);
        assert!(report.saturated.eq5);
        assert!(report.saturated.eq10);
        assert!(report.saturated.eq12);
        assert!(report.saturated.eq15);
        assert!(report.saturated.eq16);
    }

    #[test]
    fn bound_report_chain_holds_on_random_instances() {
        let cfg = BasisOptimizerConfig {
            qubit_polar: 37,
            qubit_azimuth: 72,
            generic_samples: 20,
            local_steps: 10,
            ..Default::default()
        };
        let mut rng = sample::stream(42, 0);
        for d in [2usize, 3, 4] {
            for _ in 0..15 {
                let rho = sample::random_density(&mut rng, d).unwrap();
                let k = sample::random_observable(&mut rng, d).unwrap();
                let h = sample::random_observable(&mut rng, d).unwrap();
                let report = bound_report(&rho, &k, &h, &cfg).unwrap();
                for (name, slack) in [
                    ("eq2", report.slacks.eq2),
                    ("eq5", report.slacks.eq5),
                    ("eq10", report.slacks.eq10),
                    ("eq12", report.slacks.eq12),
                    ("eq15", report.slacks.eq15),
                    ("eq16", report.slacks.eq16),
                ] {
                    assert!(
                        slack >= -tol::SLACK_TOL,
                        "d={d}: {name} slack {slack:.3e} below floor"
                    );
                }
                assert!(report.weakval_bound <= report.asym + tol::SLACK_TOL);
            }
        }
    }

    #[test]
    fn bound_report_rejects_zero_operators() {
        let cfg = BasisOptimizerConfig::default();
        let zero = obs(ComplexMatrix::zeros(2).unwrap());
        assert!(matches!(
            bound_report(&plus_x_state(), &zero, &obs(pauli_y()), &cfg),
            Err(Error::ZeroOperator)
        ));
    }

    #[test]
    fn bound_report_serializes_with_stable_keys() {
        let cfg = BasisOptimizerConfig {
            qubit_polar: 19,
            qubit_azimuth: 36,
            ..Default::default()
        };
        let report = bound_report(
            &plus_x_state(),
            &obs(pauli_z()),
            &obs(pauli_y()),
            &cfg,
        )
        .unwrap();
        let value: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        for key in [
            "v_k",
            "asym",
            "weakval_bound",
            "qfi",
            "stddev_k",
            "stddev_h",
            "c_kd_nre",
            "c_l1",
            "k_norm",
            "h_norm",
        ] {
            assert!(value.get(key).is_some(), "missing key {key}");
        }
        let slacks = value.get("slacks").unwrap();
        for key in ["eq2", "eq5", "eq10", "eq12", "eq15", "eq16"] {
            assert!(slacks.get(key).is_some(), "missing slack {key}");
            assert!(value["saturated"].get(key).is_some());
        }
    }
}
