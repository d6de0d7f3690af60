//! Random states and unitaries for property suites and Monte Carlo checks.

use nalgebra::DMatrix;
use rand::Rng;

use super::matrix::{ComplexMatrix, C64};
use super::state::{DensityOperator, PureState};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box–Muller; one variate per call is plenty here.
    let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(gaussian(rng), gaussian(rng))
}

/// Haar-random pure state.
pub fn random_pure<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> PureState {
    let amps = (0..dim).map(|_| complex_gaussian(rng)).collect();
    PureState::normalized(amps).expect("gaussian vector is non-zero")
}

/// Random density operator of the given rank (Ginibre construction).
pub fn random_density<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> DensityOperator {
    let g = DMatrix::from_fn(dim, rank.max(1), |_, _| complex_gaussian(rng));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityOperator::from_constructed(ComplexMatrix::from_nalgebra(m / C64::new(tr, 0.0)))
}

/// Random density operator that is diagonal in the computational basis.
pub fn random_diagonal_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityOperator {
    let raw: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    let probs: Vec<f64> = raw.iter().map(|x| x / total).collect();
    DensityOperator::from_constructed(ComplexMatrix::diag_real(&probs))
}

/// Haar-ish random unitary (QR of a Ginibre matrix with phase fix).
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = DMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let mut out = q.clone();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..dim {
            out[(i, j)] = q[(i, j)] * phase;
        }
    }
    ComplexMatrix::from_nalgebra(out)
}
