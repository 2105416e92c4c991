//! Dense complex matrices with a self-contained Hermitian eigensolver.
//!
//! Everything downstream (states, speed quantifiers, propagators) runs on
//! [`ComplexMatrix`], a small row-major dense matrix of `Complex64`
//! entries. Eigendecompositions use cyclic complex Jacobi rotations,
//! which is accurate and entirely adequate for the dimensions this
//! library targets (2 through 16).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::tol;
use crate::{Error, Result};

/// Largest matrix dimension the library accepts.
pub const MAX_DIM: usize = 16;

/// Sweep budget for the Jacobi eigensolver. Quadratic convergence makes
/// this generous; hitting it means the input was pathological.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Square dense complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

/// Result of a Hermitian eigendecomposition: `values` ascending, the
/// j-th column of `vectors` is the eigenvector for `values[j]`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting bad dimensions,
    /// wrong entry counts, and non-finite values.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::BadDimension { dim });
        }
        if entries.len() != dim * dim {
            return Err(Error::BadEntryCount {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        for (idx, z) in entries.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite {
                    row: idx / dim,
                    col: idx % dim,
                });
            }
        }
        Ok(Self { dim, entries })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(dim, vec![Complex64::new(0.0, 0.0); dim * dim])
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        Ok(m)
    }

    /// Builds a matrix by evaluating `f(row, col)` on every entry.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self::new(dim, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn dagger(&self) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.entries[i * self.dim + j] = self.entries[j * self.dim + i].conj();
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs)?;
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            dim: self.dim,
            entries,
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs)?;
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            dim: self.dim,
            entries,
        })
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a * s).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs)?;
        let d = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for k in 0..d {
                let aik = self.entries[i * d + k];
                if aik.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..d {
                    out[i * d + j] += aik * rhs.entries[k * d + j];
                }
            }
        }
        Ok(Self { dim: d, entries: out })
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.entries[i * self.dim + i]).sum()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest entrywise deviation from its own conjugate transpose.
    pub fn herm_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let d = self.entries[i * self.dim + j] - self.entries[j * self.dim + i].conj();
                dev = dev.max(d.norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tolerance: f64) -> bool {
        self.herm_deviation() <= tolerance
    }

    /// Extracts column `j` as a ket.
    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.entries[i * self.dim + j]).collect()
    }

    /// Matrix-vector product `A|v>`.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(Error::DimMismatch {
                left: self.dim,
                right: v.len(),
            });
        }
        let d = self.dim;
        Ok((0..d)
            .map(|i| (0..d).map(|j| self.entries[i * d + j] * v[j]).sum())
            .collect())
    }

    fn check_dim(&self, rhs: &Self) -> Result<()> {
        if self.dim != rhs.dim {
            return Err(Error::DimMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        Ok(())
    }

    /// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
    ///
    /// Each rotation zeroes one off-diagonal pair (p, q) with a unitary
    /// that differs from the identity only in those two rows/columns;
    /// sweeps repeat until the off-diagonal Frobenius mass falls below
    /// 1e-14 of the matrix scale. Eigenvalues come back ascending with
    /// matching eigenvector columns.
    pub fn herm_eig(&self) -> Result<HermitianEigen> {
        let dev = self.herm_deviation();
        if dev > tol::HERM_TOL {
            return Err(Error::NotHermitian { dev });
        }
        let d = self.dim;
        let mut a = self.entries.clone();
        // Fold roundoff-level asymmetry away so the iteration sees an
        // exactly Hermitian matrix.
        for i in 0..d {
            for j in 0..i {
                let avg = 0.5 * (a[i * d + j] + a[j * d + i].conj());
                a[i * d + j] = avg;
                a[j * d + i] = avg.conj();
            }
            a[i * d + i] = Complex64::new(a[i * d + i].re, 0.0);
        }
        let mut v: Vec<Complex64> = ComplexMatrix::identity(d)?.entries;
        let scale = self.frobenius_norm().max(f64::MIN_POSITIVE);
        let target = 1e-14 * scale;

        let off = |a: &[Complex64]| -> f64 {
            let mut s = 0.0;
            for p in 0..d {
                for q in (p + 1)..d {
                    s += a[p * d + q].norm_sqr();
                }
            }
            (2.0 * s).sqrt()
        };

        let mut converged = off(&a) <= target;
        let mut sweeps = 0;
        while !converged && sweeps < JACOBI_MAX_SWEEPS {
            for p in 0..d {
                for q in (p + 1)..d {
                    let beta = a[p * d + q];
                    let b = beta.norm();
                    if b <= 1e-18 * scale {
                        continue;
                    }
                    let w = beta / b;
                    let alpha = a[p * d + p].re;
                    let gamma = a[q * d + q].re;
                    let tau = (alpha - gamma) / (2.0 * b);
                    let t = if tau == 0.0 {
                        1.0
                    } else {
                        tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    let sw = s * w;
                    let swc = s * w.conj();
                    // Columns: A <- A U with U[p][p]=U[q][q]=c,
                    // U[p][q] = -s w, U[q][p] = s conj(w).
                    for r in 0..d {
                        let arp = a[r * d + p];
                        let arq = a[r * d + q];
                        a[r * d + p] = c * arp + swc * arq;
                        a[r * d + q] = -sw * arp + c * arq;
                    }
                    // Rows: A <- U^dagger A.
                    for r in 0..d {
                        let apr = a[p * d + r];
                        let aqr = a[q * d + r];
                        a[p * d + r] = c * apr + sw * aqr;
                        a[q * d + r] = -swc * apr + c * aqr;
                    }
                    // Accumulate eigenvectors: V <- V U.
                    for r in 0..d {
                        let vrp = v[r * d + p];
                        let vrq = v[r * d + q];
                        v[r * d + p] = c * vrp + swc * vrq;
                        v[r * d + q] = -sw * vrp + c * vrq;
                    }
                }
            }
            sweeps += 1;
            converged = off(&a) <= target;
        }
        if !converged {
            return Err(Error::NoConvergence {
                sweeps,
                residue: off(&a),
            });
        }

        let mut order: Vec<usize> = (0..d).collect();
        let vals: Vec<f64> = (0..d).map(|i| a[i * d + i].re).collect();
        order.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
        let values: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
        let vectors = ComplexMatrix::from_fn(d, |r, cidx| v[r * d + order[cidx]])?;
        Ok(HermitianEigen { values, vectors })
    }

    /// Schatten p-norm. Singular values come from the eigenvalues of
    /// `A A^dagger`; tiny negative eigenvalues (roundoff, expected above
    /// -1e-12 relative) are clamped to zero before the square root.
    pub fn schatten_norm(&self, p: f64) -> Result<f64> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidOrder { p });
        }
        let gram = self.mul(&self.dagger())?;
        let eig = gram.herm_eig()?;
        let singulars: Vec<f64> = eig.values.iter().map(|&l| l.max(0.0).sqrt()).collect();
        if p.is_infinite() {
            return Ok(singulars.iter().fold(0.0, |m, &s| m.max(s)));
        }
        if p == 1.0 {
            return Ok(singulars.iter().sum());
        }
        Ok(singulars
            .iter()
            .map(|s| s.powf(p))
            .sum::<f64>()
            .powf(1.0 / p))
    }

    /// Applies a scalar function to the spectrum of a Hermitian matrix:
    /// returns `V diag(f(lambda)) V^dagger`.
    pub fn spectral_map(&self, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let eig = self.herm_eig()?;
        let d = self.dim;
        let fv: Vec<Complex64> = eig.values.iter().map(|&l| f(l)).collect();
        let vm = &eig.vectors;
        ComplexMatrix::from_fn(d, |i, j| {
            (0..d)
                .map(|k| vm[(i, k)] * fv[k] * vm[(j, k)].conj())
                .sum()
        })
    }

    /// `exp(s A)` for Hermitian `A` and an arbitrary complex scale `s`,
    /// evaluated exactly through the spectrum.
    pub fn exp_hermitian_scaled(&self, s: Complex64) -> Result<Self> {
        self.spectral_map(|l| (s * l).exp())
    }

    /// Serializes to the matrix interchange format
    /// `{"dim": d, "entries": [[re, im], ...]}` (row-major).
    pub fn to_json(&self) -> String {
        let repr = MatrixRepr {
            dim: self.dim,
            entries: self.entries.iter().map(|z| [z.re, z.im]).collect(),
        };
        serde_json::to_string(&repr).expect("matrix serialization cannot fail")
    }

    /// Parses the matrix interchange format, rejecting wrong entry
    /// counts and non-finite values.
    pub fn from_json(text: &str) -> Result<Self> {
        let repr: MatrixRepr =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        Self::new(
            repr.dim,
            repr.entries
                .iter()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect(),
        )
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.dim + j]
    }
}

impl HermitianEigen {
    /// Rebuilds `V diag(values) V^dagger`, mostly for accuracy checks.
    pub fn reconstruct(&self) -> Result<ComplexMatrix> {
        let d = self.vectors.dim();
        let vm = &self.vectors;
        ComplexMatrix::from_fn(d, |i, j| {
            (0..d)
                .map(|k| vm[(i, k)] * self.values[k] * vm[(j, k)].conj())
                .sum()
        })
    }
}

/// `[A, B] = AB - BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.mul(b)?.sub(&b.mul(a)?)
}

/// `<u|v>` with the physics convention (conjugate-linear in `u`).
pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// `<u|A|v>`.
pub fn sandwich(u: &[Complex64], a: &ComplexMatrix, v: &[Complex64]) -> Result<Complex64> {
    Ok(inner(u, &a.apply(v)?))
}

/// `|u><v|`.
pub fn outer(u: &[Complex64], v: &[Complex64]) -> Result<ComplexMatrix> {
    if u.len() != v.len() {
        return Err(Error::DimMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    ComplexMatrix::from_fn(u.len(), |i, j| u[i] * v[j].conj())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::new(2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap()
    }

    fn pauli_y() -> ComplexMatrix {
        ComplexMatrix::new(2, vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]).unwrap()
    }

    fn pauli_z() -> ComplexMatrix {
        ComplexMatrix::new(2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]).unwrap()
    }

    fn random_hermitian(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
        let g = ComplexMatrix::from_fn(d, |_, _| {
            c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        })
        .unwrap();
        g.add(&g.dagger()).unwrap().scale(c(0.5, 0.0))
    }

    /// Independent closed-form eigenvalues of a 2x2 Hermitian matrix
    /// [[a, b], [conj(b), d]]: mean +/- sqrt(((a-d)/2)^2 + |b|^2).
    fn qubit_eigvals_closed_form(m: &ComplexMatrix) -> [f64; 2] {
        let a = m[(0, 0)].re;
        let d = m[(1, 1)].re;
        let b = m[(0, 1)].norm();
        let mean = 0.5 * (a + d);
        let disc = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        [mean - disc, mean + disc]
    }

    /// Independent closed form for exp(-i theta n.sigma):
    /// cos(theta) I - i sin(theta) n.sigma for a unit axis n.
    fn qubit_exp_closed_form(theta: f64, n: [f64; 3]) -> ComplexMatrix {
        let nsigma = pauli_x()
            .scale(c(n[0], 0.0))
            .add(&pauli_y().scale(c(n[1], 0.0)))
            .unwrap()
            .add(&pauli_z().scale(c(n[2], 0.0)))
            .unwrap();
        ComplexMatrix::identity(2)
            .unwrap()
            .scale(c(theta.cos(), 0.0))
            .add(&nsigma.scale(c(0.0, -theta.sin())))
            .unwrap()
    }

    #[test]
    fn pauli_spectra_match_closed_form() {
        for m in [pauli_x(), pauli_y(), pauli_z()] {
            let eig = m.herm_eig().unwrap();
            assert!((eig.values[0] + 1.0).abs() < 1e-14, "low eigenvalue");
            assert!((eig.values[1] - 1.0).abs() < 1e-14, "high eigenvalue");
            let oracle = qubit_eigvals_closed_form(&m);
            assert!((eig.values[0] - oracle[0]).abs() < 1e-14);
            assert!((eig.values[1] - oracle[1]).abs() < 1e-14);
        }
    }

    #[test]
    fn pauli_x_eigenvectors() {
        let eig = pauli_x().herm_eig().unwrap();
        // Column 0 belongs to -1: proportional to (1, -1)/sqrt(2).
        let v0 = eig.vectors.column(0);
        let ratio = v0[1] / v0[0];
        assert!((ratio - c(-1.0, 0.0)).norm() < 1e-12);
        let v1 = eig.vectors.column(1);
        let ratio = v1[1] / v1[0];
        assert!((ratio - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn qubit_eigenvalues_match_closed_form_on_random_matrices() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..200 {
            let m = random_hermitian(&mut rng, 2);
            let eig = m.herm_eig().unwrap();
            let oracle = qubit_eigvals_closed_form(&m);
            assert!((eig.values[0] - oracle[0]).abs() < 1e-13);
            assert!((eig.values[1] - oracle[1]).abs() < 1e-13);
        }
    }

    #[test]
    fn eigendecomposition_reconstructs_input() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for d in [2usize, 3, 4, 5, 8, 16] {
            for _ in 0..20 {
                let m = random_hermitian(&mut rng, d);
                let eig = m.herm_eig().unwrap();
                let rec = eig.reconstruct().unwrap();
                let op_norm = m.schatten_norm(f64::INFINITY).unwrap();
                let err = rec.sub(&m).unwrap().max_abs();
                assert!(
                    err <= tol::RECON_TOL * op_norm.max(1e-30),
                    "d={d}: reconstruction error {err:.3e} vs norm {op_norm:.3e}"
                );
                // Ascending order.
                for w in eig.values.windows(2) {
                    assert!(w[0] <= w[1] + 1e-14);
                }
                // Orthonormal columns.
                let gram = eig.vectors.dagger().mul(&eig.vectors).unwrap();
                let dev = gram.sub(&ComplexMatrix::identity(d).unwrap()).unwrap().max_abs();
                assert!(dev < 1e-12, "d={d}: basis deviation {dev:.3e}");
            }
        }
    }

    #[test]
    fn diagonal_input_short_circuits() {
        let m = ComplexMatrix::new(
            3,
            vec![
                c(3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0),
                c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0),
                c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0),
            ],
        )
        .unwrap();
        let eig = m.herm_eig().unwrap();
        assert_eq!(eig.values, vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn non_hermitian_input_rejected() {
        let m = ComplexMatrix::new(2, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.0), c(0.0, 0.0)])
            .unwrap();
        match m.herm_eig() {
            Err(Error::NotHermitian { dev }) => assert!(dev > 0.4),
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }

    #[test]
    fn schatten_norms_of_pauli_y() {
        let y = pauli_y();
        assert!((y.schatten_norm(1.0).unwrap() - 2.0).abs() < 1e-12);
        assert!((y.schatten_norm(2.0).unwrap() - 2.0_f64.sqrt()).abs() < 1e-12);
        assert!((y.schatten_norm(f64::INFINITY).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn schatten_two_matches_frobenius() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for d in [2usize, 3, 5] {
            let g = ComplexMatrix::from_fn(d, |_, _| {
                c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            })
            .unwrap();
            let s2 = g.schatten_norm(2.0).unwrap();
            assert!((s2 - g.frobenius_norm()).abs() < 1e-10);
        }
    }

    #[test]
    fn schatten_rejects_order_below_one() {
        let y = pauli_y();
        assert!(matches!(
            y.schatten_norm(0.5),
            Err(Error::InvalidOrder { .. })
        ));
        assert!(matches!(
            y.schatten_norm(f64::NAN),
            Err(Error::InvalidOrder { .. })
        ));
    }

    #[test]
    fn commutator_of_pauli_x_and_y() {
        let lhs = commutator(&pauli_x(), &pauli_y()).unwrap();
        let rhs = pauli_z().scale(c(0.0, 2.0));
        assert!(lhs.sub(&rhs).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn exponential_of_diagonal_generator() {
        // exp(-i (pi/2) sigma_z) = diag(e^{-i pi/2}, e^{i pi/2}) = diag(-i, i).
        let u = pauli_z()
            .exp_hermitian_scaled(c(0.0, -std::f64::consts::FRAC_PI_2))
            .unwrap();
        let expect =
            ComplexMatrix::new(2, vec![c(0.0, -1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)])
                .unwrap();
        assert!(u.sub(&expect).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn qubit_exponential_matches_closed_form() {
        let mut rng = ChaCha12Rng::seed_from_u64(19);
        for _ in 0..50 {
            let theta = 4.0 * (rng.gen::<f64>() - 0.5);
            let raw = [
                rng.gen::<f64>() - 0.5,
                rng.gen::<f64>() - 0.5,
                rng.gen::<f64>() - 0.5,
            ];
            let len = (raw[0] * raw[0] + raw[1] * raw[1] + raw[2] * raw[2]).sqrt();
            if len < 1e-3 {
                continue;
            }
            let n = [raw[0] / len, raw[1] / len, raw[2] / len];
            let nsigma = pauli_x()
                .scale(c(n[0], 0.0))
                .add(&pauli_y().scale(c(n[1], 0.0)))
                .unwrap()
                .add(&pauli_z().scale(c(n[2], 0.0)))
                .unwrap();
            let spectral = nsigma.exp_hermitian_scaled(c(0.0, -theta)).unwrap();
            let closed = qubit_exp_closed_form(theta, n);
            let err = spectral.sub(&closed).unwrap().max_abs();
            assert!(err < 1e-13, "spectral vs closed form: {err:.3e}");
        }
    }

    #[test]
    fn exponential_is_unitary() {
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        for d in [2usize, 3, 4] {
            let h = random_hermitian(&mut rng, d);
            let u = h.exp_hermitian_scaled(c(0.0, -0.7)).unwrap();
            let gram = u.dagger().mul(&u).unwrap();
            let dev = gram.sub(&ComplexMatrix::identity(d).unwrap()).unwrap().max_abs();
            assert!(dev < 1e-13, "d={d}: U^dagger U deviation {dev:.3e}");
        }
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(matches!(
            ComplexMatrix::new(2, vec![c(0.0, 0.0); 3]),
            Err(Error::BadEntryCount { .. })
        ));
        assert!(matches!(
            ComplexMatrix::new(0, vec![]),
            Err(Error::BadDimension { .. })
        ));
        assert!(matches!(
            ComplexMatrix::new(17, vec![c(0.0, 0.0); 17 * 17]),
            Err(Error::BadDimension { .. })
        ));
        assert!(matches!(
            ComplexMatrix::new(1, vec![c(f64::NAN, 0.0)]),
            Err(Error::NonFinite { .. })
        ));
        assert!(matches!(
            pauli_x().mul(&ComplexMatrix::identity(3).unwrap()),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let y = pauli_y();
        let text = y.to_json();
        let back = ComplexMatrix::from_json(&text).unwrap();
        assert_eq!(y, back);
    }

    #[test]
    fn json_rejects_malformed_input() {
        assert!(matches!(
            ComplexMatrix::from_json("{\"dim\": 2, \"entries\": [[0,0]]}"),
            Err(Error::BadEntryCount { .. })
        ));
        assert!(matches!(
            ComplexMatrix::from_json("not json"),
            Err(Error::Malformed(_))
        ));
        // JSON has no NaN literal; serde_json must reject it.
        assert!(ComplexMatrix::from_json("{\"dim\": 1, \"entries\": [[NaN, 0]]}").is_err());
    }

    #[test]
    fn inner_and_sandwich_conventions() {
        let u = vec![c(1.0, 0.0), c(0.0, 0.0)];
        let v = vec![c(0.0, 0.0), c(1.0, 0.0)];
        assert!((inner(&u, &u) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((inner(&u, &v)).norm() < 1e-15);
        // <z+|sigma_x|z-> = 1.
        let s = sandwich(&u, &pauli_x(), &v).unwrap();
        assert!((s - c(1.0, 0.0)).norm() < 1e-15);
        let proj = outer(&u, &u).unwrap();
        assert!((proj.trace() - c(1.0, 0.0)).norm() < 1e-15);
    }
}
