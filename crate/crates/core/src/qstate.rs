//! Validated quantum state and observable types.
//!
//! Density matrices are checked for Hermiticity, unit trace, and
//! positivity on construction; observables carry their eigensystem so
//! spectral data is computed once. Bloch vectors give the qubit
//! specialization used heavily by the Monte-Carlo experiments. Free
//! functions cover expectations, variances, weak values after
//! postselection, Kirkwood-Dirac quasiprobability tables, Gibbs states,
//! and the three mutually unbiased qubit bases.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{inner, outer, sandwich, ComplexMatrix, HermitianEigen};
use crate::tol;
use crate::{Error, Result};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::new(2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
        .expect("static matrix")
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::new(2, vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
        .expect("static matrix")
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::new(2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
        .expect("static matrix")
}

/// `n . sigma` for an arbitrary (not necessarily unit) vector `n`.
pub fn axis_sigma(n: [f64; 3]) -> ComplexMatrix {
    ComplexMatrix::new(
        2,
        vec![
            c(n[2], 0.0),
            c(n[0], -n[1]),
            c(n[0], n[1]),
            c(-n[2], 0.0),
        ],
    )
    .expect("static matrix")
}

/// Unit-trace positive semidefinite Hermitian matrix.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace, and positivity (eigenvalues
    /// no more negative than the tolerance gate).
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        let dev = mat.herm_deviation();
        if dev > tol::HERM_TOL {
            return Err(Error::NotHermitian { dev });
        }
        let tr = mat.trace();
        let tr_dev = (tr - c(1.0, 0.0)).norm();
        if tr_dev > tol::TRACE_TOL {
            return Err(Error::InvalidTrace { dev: tr_dev });
        }
        let eig = mat.herm_eig()?;
        if let Some(&lowest) = eig.values.first() {
            if lowest < -tol::EIG_NEG_TOL {
                return Err(Error::NotPositive { value: lowest });
            }
        }
        Ok(Self { mat })
    }

    /// Pure state `|psi><psi|` from a ket, which is normalized first.
    pub fn pure(ket: &[Complex64]) -> Result<Self> {
        let norm = inner(ket, ket).re.sqrt();
        if norm < 1e-12 {
            return Err(Error::ZeroOperator);
        }
        let normalized: Vec<Complex64> = ket.iter().map(|z| z / norm).collect();
        Self::new(outer(&normalized, &normalized)?)
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        let scale = 1.0 / dim as f64;
        Self::new(ComplexMatrix::identity(dim)?.scale(c(scale, 0.0)))
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    /// `tr(rho^2)`, in [1/dim, 1].
    pub fn purity(&self) -> f64 {
        self.mat
            .entries()
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
    }

    pub fn eig(&self) -> Result<HermitianEigen> {
        self.mat.herm_eig()
    }

    /// `U rho U^dagger`, revalidated so numerical drift surfaces.
    pub fn conjugated(&self, u: &ComplexMatrix) -> Result<Self> {
        Self::new(u.mul(&self.mat)?.mul(&u.dagger())?)
    }

    pub fn from_bloch(r: BlochVector) -> Result<Self> {
        let len = r.len();
        if len > 1.0 + 1e-12 {
            return Err(Error::BlochTooLong { len });
        }
        let m = ComplexMatrix::identity(2)?
            .add(&axis_sigma([r.x, r.y, r.z]))?
            .scale(c(0.5, 0.0));
        Self::new(m)
    }

    /// Bloch coordinates `r_a = tr(rho sigma_a)`; qubit states only.
    pub fn to_bloch(&self) -> Result<BlochVector> {
        if self.dim() != 2 {
            return Err(Error::NotQubit { dim: self.dim() });
        }
        let m = &self.mat;
        Ok(BlochVector {
            x: 2.0 * m[(0, 1)].re,
            y: -2.0 * m[(0, 1)].im,
            z: m[(0, 0)].re - m[(1, 1)].re,
        })
    }
}

/// Hermitian observable with its eigensystem computed once.
#[derive(Debug, Clone)]
pub struct Observable {
    mat: ComplexMatrix,
    eigen: HermitianEigen,
}

impl Observable {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        let dev = mat.herm_deviation();
        if dev > tol::HERM_TOL {
            return Err(Error::NotHermitian { dev });
        }
        let eigen = mat.herm_eig()?;
        Ok(Self { mat, eigen })
    }

    /// `n_hat . sigma` for the normalized axis.
    pub fn from_axis(axis: [f64; 3]) -> Result<Self> {
        let len = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if len < 1e-15 {
            return Err(Error::ZeroAxis);
        }
        Self::new(axis_sigma([axis[0] / len, axis[1] / len, axis[2] / len]))
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn eigen(&self) -> &HermitianEigen {
        &self.eigen
    }

    /// Operator norm, i.e. the largest eigenvalue magnitude.
    pub fn op_norm(&self) -> f64 {
        self.eigen
            .values
            .iter()
            .fold(0.0, |m, &l| m.max(l.abs()))
    }

    /// Eigenvector columns as an orthonormal basis.
    pub fn eigenbasis(&self) -> Result<OrthoBasis> {
        OrthoBasis::new(self.eigen.vectors.clone())
    }
}

/// Orthonormal basis stored as matrix columns.
#[derive(Debug, Clone)]
pub struct OrthoBasis {
    vectors: ComplexMatrix,
}

impl OrthoBasis {
    pub fn new(vectors: ComplexMatrix) -> Result<Self> {
        let d = vectors.dim();
        let gram = vectors.dagger().mul(&vectors)?;
        let dev = gram.sub(&ComplexMatrix::identity(d)?)?.max_abs();
        if dev > tol::ORTHO_TOL {
            return Err(Error::NotOrthonormal { dev });
        }
        Ok(Self { vectors })
    }

    pub fn dim(&self) -> usize {
        self.vectors.dim()
    }

    pub fn vectors(&self) -> &ComplexMatrix {
        &self.vectors
    }

    pub fn ket(&self, j: usize) -> Vec<Complex64> {
        self.vectors.column(j)
    }

    /// Computational basis `{|0>, ..., |d-1>}`.
    pub fn computational(dim: usize) -> Result<Self> {
        Self::new(ComplexMatrix::identity(dim)?)
    }
}

/// Qubit Bloch vector; `len <= 1` corresponds to a physical state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn len(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0.0
    }

    pub fn dot(&self, o: &BlochVector) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(&self, o: &BlochVector) -> BlochVector {
        BlochVector {
            x: self.y * o.z - self.z * o.y,
            y: self.z * o.x - self.x * o.z,
            z: self.x * o.y - self.y * o.x,
        }
    }

    pub fn scaled(&self, s: f64) -> BlochVector {
        BlochVector {
            x: s * self.x,
            y: s * self.y,
            z: s * self.z,
        }
    }

    pub fn normalized(&self) -> Result<BlochVector> {
        let len = self.len();
        if len < 1e-15 {
            return Err(Error::ZeroAxis);
        }
        Ok(self.scaled(1.0 / len))
    }
}

/// `tr(rho K)`, guaranteed real up to a checked residue.
pub fn expectation(rho: &DensityMatrix, k: &Observable) -> Result<f64> {
    let t = rho.mat().mul(k.mat())?.trace();
    if t.im.abs() > tol::IM_TRACE_TOL {
        return Err(Error::NonRealExpectation { imag: t.im });
    }
    Ok(t.re)
}

/// `<K^2> - <K>^2`, clamped against roundoff at zero.
pub fn variance(rho: &DensityMatrix, k: &Observable) -> Result<f64> {
    let ksq = Observable::new(k.mat().mul(k.mat())?)?;
    let v = expectation(rho, &ksq)? - expectation(rho, k)?.powi(2);
    Ok(v.max(0.0))
}

/// Weak value `<x|K rho|x> / <x|rho|x>` for the postselection ket
/// `basis[index]`. Fails when the postselection probability vanishes.
pub fn weak_value(
    rho: &DensityMatrix,
    k: &Observable,
    basis: &OrthoBasis,
    index: usize,
) -> Result<Complex64> {
    if basis.dim() != rho.dim() || k.dim() != rho.dim() {
        return Err(Error::DimMismatch {
            left: rho.dim(),
            right: basis.dim().max(k.dim()),
        });
    }
    let x = basis.ket(index);
    let prob = sandwich(&x, rho.mat(), &x)?.re;
    if prob <= tol::POSTSELECT_EPS {
        return Err(Error::VanishingPostselection { prob });
    }
    let num = sandwich(&x, &k.mat().mul(rho.mat())?, &x)?;
    Ok(num / prob)
}

/// Kirkwood-Dirac quasiprobability table over a pair of bases:
/// entry (k, c) holds `<c|k><k|rho|c>`.
#[derive(Debug, Clone)]
pub struct KdTable {
    dim: usize,
    entries: Vec<Complex64>,
}

impl KdTable {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, k: usize, cidx: usize) -> Complex64 {
        self.entries[k * self.dim + cidx]
    }

    /// Sums to 1 for any state and basis pair (up to roundoff).
    pub fn sum(&self) -> Complex64 {
        self.entries.iter().sum()
    }

    /// Total imaginary mass `sum |Im|` over all entries.
    pub fn total_nonreality(&self) -> f64 {
        self.entries.iter().map(|z| z.im.abs()).sum()
    }
}

pub fn kd_quasiprob(
    rho: &DensityMatrix,
    kbasis: &OrthoBasis,
    cbasis: &OrthoBasis,
) -> Result<KdTable> {
    let d = rho.dim();
    if kbasis.dim() != d || cbasis.dim() != d {
        return Err(Error::DimMismatch {
            left: d,
            right: kbasis.dim().max(cbasis.dim()),
        });
    }
    let mut entries = Vec::with_capacity(d * d);
    for k in 0..d {
        let kket = kbasis.ket(k);
        let rho_applied = rho.mat().apply(&kket)?; // conj pairing below
        for ci in 0..d {
            let cket = cbasis.ket(ci);
            // <c|k> <k|rho|c>; note <k|rho|c> = conj(<c|rho|k>) for
            // Hermitian rho.
            let ck = inner(&cket, &kket);
            let krho_c = inner(&rho_applied, &cket);
            entries.push(ck * krho_c);
        }
    }
    Ok(KdTable { dim: d, entries })
}

/// Gibbs state `exp(-beta H) / Z` with the partition function returned
/// alongside. Weights are computed relative to the ground energy so
/// large `beta` cannot overflow the state itself.
pub fn gibbs_state(hb: &ComplexMatrix, beta: f64) -> Result<(DensityMatrix, f64)> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::InvalidConfig {
            what: format!("inverse temperature must be finite and >= 0, got {beta}"),
        });
    }
    let eig = hb.herm_eig()?;
    let ground = eig.values.first().copied().unwrap_or(0.0);
    let weights: Vec<f64> = eig.values.iter().map(|&e| (-beta * (e - ground)).exp()).collect();
    let z_shifted: f64 = weights.iter().sum();
    let z = (beta * ground).exp().recip() * z_shifted; // exp(-beta*ground) * sum
    let d = hb.dim();
    let vm = &eig.vectors;
    let mat = ComplexMatrix::from_fn(d, |i, j| {
        (0..d)
            .map(|k| vm[(i, k)] * (weights[k] / z_shifted) * vm[(j, k)].conj())
            .sum()
    })?;
    Ok((DensityMatrix::new(mat)?, z))
}

/// The three mutually unbiased qubit bases, returned as (X, Y, Z) with
/// the phase convention |x+-> = (|z+> +- |z->)/sqrt2 and
/// |y+-> = (|z+> +- i|z->)/sqrt2.
pub fn mub_qubit_bases() -> (OrthoBasis, OrthoBasis, OrthoBasis) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let x = ComplexMatrix::new(2, vec![c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)])
        .expect("static matrix");
    let y = ComplexMatrix::new(2, vec![c(s, 0.0), c(s, 0.0), c(0.0, s), c(0.0, -s)])
        .expect("static matrix");
    let z = ComplexMatrix::identity(2).expect("static matrix");
    (
        OrthoBasis::new(x).expect("unbiased basis"),
        OrthoBasis::new(y).expect("unbiased basis"),
        OrthoBasis::new(z).expect("unbiased basis"),
    )
}

#[derive(Serialize, Deserialize)]
struct FullOperatorRepr {
    kind: String,
    dim: usize,
    entries: Vec<[f64; 2]>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum StateRepr {
    Bloch { bloch: [f64; 3] },
    Full(FullOperatorRepr),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ObservableRepr {
    Axis { axis: [f64; 3] },
    Full(FullOperatorRepr),
}

fn matrix_from_repr(repr: &FullOperatorRepr) -> Result<ComplexMatrix> {
    ComplexMatrix::new(
        repr.dim,
        repr.entries
            .iter()
            .map(|&[re, im]| c(re, im))
            .collect(),
    )
}

/// Parses a state from JSON: either the qubit shorthand
/// `{"bloch": [x, y, z]}` or a kind-tagged full matrix
/// `{"kind": "state", "dim": d, "entries": [[re, im], ...]}`.
pub fn state_from_json(text: &str) -> Result<DensityMatrix> {
    let repr: StateRepr =
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    match repr {
        StateRepr::Bloch { bloch } => {
            DensityMatrix::from_bloch(BlochVector::new(bloch[0], bloch[1], bloch[2]))
        }
        StateRepr::Full(full) => {
            if full.kind != "state" {
                return Err(Error::Malformed(format!(
                    "expected kind \"state\", got \"{}\"",
                    full.kind
                )));
            }
            DensityMatrix::new(matrix_from_repr(&full)?)
        }
    }
}

/// Parses an observable from JSON: either the qubit shorthand
/// `{"axis": [x, y, z]}` (axis is normalized, so only the direction
/// matters) or a kind-tagged full matrix.
pub fn observable_from_json(text: &str) -> Result<Observable> {
    let repr: ObservableRepr =
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    match repr {
        ObservableRepr::Axis { axis } => Observable::from_axis(axis),
        ObservableRepr::Full(full) => {
            if full.kind != "observable" {
                return Err(Error::Malformed(format!(
                    "expected kind \"observable\", got \"{}\"",
                    full.kind
                )));
            }
            Observable::new(matrix_from_repr(&full)?)
        }
    }
}

pub fn state_to_json(rho: &DensityMatrix) -> String {
    let repr = FullOperatorRepr {
        kind: "state".to_string(),
        dim: rho.dim(),
        entries: rho.mat().entries().iter().map(|z| [z.re, z.im]).collect(),
    };
    serde_json::to_string(&repr).expect("state serialization cannot fail")
}

pub fn observable_to_json(k: &Observable) -> String {
    let repr = FullOperatorRepr {
        kind: "observable".to_string(),
        dim: k.dim(),
        entries: k.mat().entries().iter().map(|z| [z.re, z.im]).collect(),
    };
    serde_json::to_string(&repr).expect("observable serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plus_x_state() -> DensityMatrix {
        DensityMatrix::from_bloch(BlochVector::new(1.0, 0.0, 0.0)).unwrap()
    }

    fn up_state() -> DensityMatrix {
        DensityMatrix::from_bloch(BlochVector::new(0.0, 0.0, 1.0)).unwrap()
    }

    #[test]
    fn expectation_of_sigma_x_on_partially_polarized_state() {
        let rho = DensityMatrix::from_bloch(BlochVector::new(0.6, 0.0, 0.0)).unwrap();
        let k = Observable::new(pauli_x()).unwrap();
        assert!((expectation(&rho, &k).unwrap() - 0.6).abs() < 1e-12);
    }

    #[test]
    fn variance_of_sigma_z() {
        let k = Observable::new(pauli_z()).unwrap();
        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        assert!((variance(&mixed, &k).unwrap() - 1.0).abs() < 1e-12);
        assert!((variance(&plus_x_state(), &k).unwrap() - 1.0).abs() < 1e-12);
        // Eigenstate of K has zero variance.
        assert!(variance(&up_state(), &k).unwrap() < 1e-12);
    }

    #[test]
    fn purity_follows_bloch_length() {
        for r in [0.0, 0.3, 0.8, 1.0] {
            let rho = DensityMatrix::from_bloch(BlochVector::new(0.0, r, 0.0)).unwrap();
            assert!((rho.purity() - 0.5 * (1.0 + r * r)).abs() < 1e-12);
        }
    }

    #[test]
    fn bloch_round_trip() {
        let r = BlochVector::new(0.3, -0.4, 0.5);
        let rho = DensityMatrix::from_bloch(r).unwrap();
        let back = rho.to_bloch().unwrap();
        assert!((back.x - r.x).abs() < 1e-12);
        assert!((back.y - r.y).abs() < 1e-12);
        assert!((back.z - r.z).abs() < 1e-12);
    }

    #[test]
    fn overlong_bloch_vector_rejected() {
        assert!(matches!(
            DensityMatrix::from_bloch(BlochVector::new(0.8, 0.8, 0.8)),
            Err(Error::BlochTooLong { .. })
        ));
    }

    #[test]
    fn density_validation_rejects_bad_matrices() {
        // Trace 2.
        let m = ComplexMatrix::identity(2).unwrap();
        assert!(matches!(DensityMatrix::new(m), Err(Error::InvalidTrace { .. })));
        // Negative eigenvalue, trace still 1.
        let m = ComplexMatrix::new(
            2,
            vec![c(1.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.5, 0.0)],
        )
        .unwrap();
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotPositive { .. })));
        // Non-Hermitian.
        let m = ComplexMatrix::new(
            2,
            vec![c(0.5, 0.0), c(0.1, 0.0), c(0.3, 0.0), c(0.5, 0.0)],
        )
        .unwrap();
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn weak_value_of_sigma_z_after_x_postselection() {
        let (x, _, _) = mub_qubit_bases();
        let k = Observable::new(pauli_z()).unwrap();
        let w = weak_value(&up_state(), &k, &x, 0).unwrap();
        assert!((w - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn weak_value_of_sigma_x_is_real_here() {
        let (x, _, _) = mub_qubit_bases();
        let k = Observable::new(pauli_x()).unwrap();
        let w = weak_value(&up_state(), &k, &x, 0).unwrap();
        assert!((w - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn weak_value_requires_postselection_probability() {
        let (_, _, z) = mub_qubit_bases();
        let k = Observable::new(pauli_x()).unwrap();
        // <z-|rho|z-> = 0 for the up state.
        assert!(matches!(
            weak_value(&up_state(), &k, &z, 1),
            Err(Error::VanishingPostselection { .. })
        ));
    }

    #[test]
    fn kd_table_for_up_state_in_z_and_x() {
        let (x, _, z) = mub_qubit_bases();
        let table = kd_quasiprob(&up_state(), &z, &x).unwrap();
        for ci in 0..2 {
            assert!((table.get(0, ci) - c(0.5, 0.0)).norm() < 1e-12);
            assert!(table.get(1, ci).norm() < 1e-12);
        }
        assert!((table.sum() - c(1.0, 0.0)).norm() < 1e-12);
        assert!(table.total_nonreality() < 1e-12);
    }

    #[test]
    fn kd_table_for_plus_x_state_in_z_and_y_is_nonreal() {
        let (_, y, z) = mub_qubit_bases();
        let table = kd_quasiprob(&plus_x_state(), &z, &y).unwrap();
        assert!((table.sum() - c(1.0, 0.0)).norm() < 1e-10);
        assert!(table.total_nonreality() > 0.4);
    }

    #[test]
    fn kd_table_sums_to_one_for_random_bases() {
        use crate::sample;
        let mut rng = sample::stream(5, 0);
        for d in [2usize, 3, 4] {
            let rho = sample::random_density(&mut rng, d).unwrap();
            let a = sample::haar_basis(&mut rng, d).unwrap();
            let b = sample::haar_basis(&mut rng, d).unwrap();
            let table = kd_quasiprob(&rho, &a, &b).unwrap();
            assert!((table.sum() - c(1.0, 0.0)).norm() < 1e-10, "dim {d}");
        }
    }

    #[test]
    fn gibbs_state_of_sigma_z() {
        let (rho, z) = gibbs_state(&pauli_z(), 1.0).unwrap();
        let e = std::f64::consts::E;
        assert!((z - (e + 1.0 / e)).abs() < 1e-12);
        let m = rho.mat();
        assert!((m[(0, 0)].re - (1.0 / e) / (e + 1.0 / e)).abs() < 1e-12);
        assert!((m[(1, 1)].re - e / (e + 1.0 / e)).abs() < 1e-12);
        assert!(m[(0, 1)].norm() < 1e-14);
    }

    #[test]
    fn gibbs_state_limits() {
        // beta = 0: maximally mixed, Z = dim.
        let (rho, z) = gibbs_state(&pauli_z(), 0.0).unwrap();
        assert!((z - 2.0).abs() < 1e-12);
        assert!((rho.mat()[(0, 0)].re - 0.5).abs() < 1e-12);
        // Large beta: ground-state projector of sigma_z is |z-><z-|.
        let (rho, z) = gibbs_state(&pauli_z(), 60.0).unwrap();
        assert!(z.is_finite());
        assert!(rho.mat()[(0, 0)].norm() < 1e-20);
        assert!((rho.mat()[(1, 1)].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gibbs_rejects_negative_beta() {
        assert!(gibbs_state(&pauli_z(), -1.0).is_err());
    }

    #[test]
    fn mub_phase_convention_is_exact() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let (x, y, z) = mub_qubit_bases();
        assert_eq!(x.ket(0), vec![c(s, 0.0), c(s, 0.0)]);
        assert_eq!(x.ket(1), vec![c(s, 0.0), c(-s, 0.0)]);
        assert_eq!(y.ket(0), vec![c(s, 0.0), c(0.0, s)]);
        assert_eq!(y.ket(1), vec![c(s, 0.0), c(0.0, -s)]);
        assert_eq!(z.ket(0), vec![c(1.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn mub_bases_are_mutually_unbiased() {
        let (x, y, z) = mub_qubit_bases();
        for (a, b) in [(&x, &y), (&x, &z), (&y, &z)] {
            for i in 0..2 {
                for j in 0..2 {
                    let overlap = inner(&a.ket(i), &b.ket(j)).norm_sqr();
                    assert!((overlap - 0.5).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn observable_caches_spectrum_and_norm() {
        let k = Observable::new(pauli_y()).unwrap();
        assert_eq!(k.eigen().values.len(), 2);
        assert!((k.op_norm() - 1.0).abs() < 1e-14);
        let basis = k.eigenbasis().unwrap();
        assert_eq!(basis.dim(), 2);
    }

    #[test]
    fn axis_observable_normalizes() {
        let k = Observable::from_axis([0.0, 0.0, 2.5]).unwrap();
        assert!(k.mat().sub(&pauli_z()).unwrap().max_abs() < 1e-15);
        assert!(matches!(
            Observable::from_axis([0.0, 0.0, 0.0]),
            Err(Error::ZeroAxis)
        ));
    }

    #[test]
    fn state_json_accepts_both_forms() {
        let from_bloch = state_from_json("{\"bloch\": [0.0, 0.0, 1.0]}").unwrap();
        let text = state_to_json(&from_bloch);
        let full = state_from_json(&text).unwrap();
        assert!(full.mat().sub(from_bloch.mat()).unwrap().max_abs() < 1e-15);
        assert!(state_from_json("{\"kind\": \"observable\", \"dim\": 2, \"entries\": [[1,0],[0,0],[0,0],[0,0]]}").is_err());
    }

    #[test]
    fn observable_json_accepts_both_forms() {
        let from_axis = observable_from_json("{\"axis\": [1.0, 0.0, 0.0]}").unwrap();
        assert!(from_axis.mat().sub(&pauli_x()).unwrap().max_abs() < 1e-15);
        let text = observable_to_json(&from_axis);
        let full = observable_from_json(&text).unwrap();
        assert!(full.mat().sub(&pauli_x()).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn pure_state_constructor_normalizes() {
        let rho = DensityMatrix::pure(&[c(2.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-12);
        assert!(rho.mat().sub(up_state().mat()).unwrap().max_abs() < 1e-14);
    }
}
