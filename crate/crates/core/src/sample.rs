//! Deterministic seeded sampling of states, observables, and bases.
//!
//! Reproducibility contract: every independent unit of work (a trial, a
//! candidate basis, a verification case) draws from its own substream,
//! derived as `substream(seed, index)` through a SplitMix64 mix. Results
//! are therefore independent of evaluation order and of how work is
//! distributed over threads, and identical across platforms because the
//! generator is the counter-based ChaCha12 stream cipher.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::linalg::ComplexMatrix;
use crate::qstate::{DensityMatrix, Observable, OrthoBasis};
use crate::Result;

/// SplitMix64 finalizer; good avalanche, cheap, and stable.
fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the substream seed for unit-of-work `index` under a run seed.
pub fn substream(seed: u64, index: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ splitmix64(index.wrapping_mul(0xA24B_AED4_963E_E407)))
}

/// A fresh generator for unit-of-work `index` under a run seed.
pub fn stream(seed: u64, index: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(substream(seed, index))
}

fn normal(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

fn complex_normal(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(normal(rng), normal(rng))
}

/// Uniform direction on the unit sphere.
pub fn unit_sphere(rng: &mut impl Rng) -> [f64; 3] {
    loop {
        let v = [normal(rng), normal(rng), normal(rng)];
        let len = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if len > 1e-9 {
            return [v[0] / len, v[1] / len, v[2] / len];
        }
    }
}

/// Uniform point in the closed unit ball (direction times radius
/// u^(1/3)).
pub fn unit_ball(rng: &mut impl Rng) -> [f64; 3] {
    let dir = unit_sphere(rng);
    let radius = rng.gen::<f64>().cbrt();
    [dir[0] * radius, dir[1] * radius, dir[2] * radius]
}

/// Haar-random normalized ket.
pub fn haar_ket(rng: &mut impl Rng, dim: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..dim).map(|_| complex_normal(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-9 {
            return v.iter().map(|z| z / norm).collect();
        }
    }
}

/// Haar-random orthonormal basis: Gaussian columns pushed through
/// modified Gram-Schmidt (equivalent to QR with the phase fixed by the
/// positive real diagonal of R).
pub fn haar_basis(rng: &mut impl Rng, dim: usize) -> Result<OrthoBasis> {
    'redraw: loop {
        let mut cols: Vec<Vec<Complex64>> = (0..dim)
            .map(|_| (0..dim).map(|_| complex_normal(rng)).collect())
            .collect();
        for j in 0..dim {
            for i in 0..j {
                let proj: Complex64 = cols[i]
                    .iter()
                    .zip(&cols[j])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                for r in 0..dim {
                    let correction = proj * cols[i][r];
                    cols[j][r] -= correction;
                }
            }
            let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-9 {
                continue 'redraw;
            }
            for z in &mut cols[j] {
                *z /= norm;
            }
        }
        let mat = ComplexMatrix::from_fn(dim, |i, j| cols[j][i])?;
        return OrthoBasis::new(mat);
    }
}

/// GUE-style random Hermitian matrix, entries of order one.
pub fn gue(rng: &mut impl Rng, dim: usize) -> Result<ComplexMatrix> {
    let g = ComplexMatrix::from_fn(dim, |_, _| complex_normal(rng))?;
    Ok(g.add(&g.dagger())?.scale(Complex64::new(0.5, 0.0)))
}

/// Hilbert-Schmidt random mixed state `G G^dagger / tr`.
pub fn random_density(rng: &mut impl Rng, dim: usize) -> Result<DensityMatrix> {
    loop {
        let g = ComplexMatrix::from_fn(dim, |_, _| complex_normal(rng))?;
        let gram = g.mul(&g.dagger())?;
        let tr = gram.trace().re;
        if tr > 1e-9 {
            return DensityMatrix::new(gram.scale(Complex64::new(1.0 / tr, 0.0)));
        }
    }
}

/// Haar-random pure state.
pub fn random_pure(rng: &mut impl Rng, dim: usize) -> Result<DensityMatrix> {
    DensityMatrix::pure(&haar_ket(rng, dim))
}

/// Random Hermitian observable (GUE, not normalized).
pub fn random_observable(rng: &mut impl Rng, dim: usize) -> Result<Observable> {
    Observable::new(gue(rng, dim)?)
}

/// Random Hermitian observable rescaled to unit operator norm, suitable
/// as an evolution generator.
pub fn random_unit_observable(rng: &mut impl Rng, dim: usize) -> Result<Observable> {
    loop {
        let k = random_observable(rng, dim)?;
        let norm = k.op_norm();
        if norm > 1e-9 {
            return Observable::new(k.mat().scale(Complex64::new(1.0 / norm, 0.0)));
        }
    }
}
