#![allow(dead_code)]

use qdent_core::linalg::{self, re, CMatrix, CVector, C64};
use qdent_core::DensityOperator;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller
    let u: f64 = rng.random::<f64>().max(1e-300);
    let v: f64 = rng.random();
    (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
}

pub fn random_complex_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| C64::new(gaussian(rng), gaussian(rng)))
}

/// Random mixed state `G G† / Tr` with a rank between 1 and `dim`.
pub fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> DensityOperator {
    let rank = rng.random_range(1..=dim);
    let g = random_complex_matrix(rng, dim, rank);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    let mut m = m * re(1.0 / tr);
    m = (&m + m.adjoint()) * re(0.5);
    DensityOperator::new(m).expect("random state is valid")
}

pub fn random_ket(rng: &mut ChaCha8Rng, dim: usize) -> CVector {
    let v = CVector::from_fn(dim, |_, _| C64::new(gaussian(rng), gaussian(rng)));
    let n = v.norm();
    v / re(n)
}

/// Haar-distributed unitary from the QR decomposition of a Ginibre matrix.
pub fn random_unitary(rng: &mut ChaCha8Rng, dim: usize) -> CMatrix {
    let g = random_complex_matrix(rng, dim, dim);
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = CMatrix::from_diagonal(&CVector::from_fn(dim, |i, _| {
        let d = r[(i, i)];
        d / re(d.norm())
    }));
    q * phases
}

pub fn random_local_unitary(rng: &mut ChaCha8Rng) -> CMatrix {
    linalg::tensor(&random_unitary(rng, 2), &random_unitary(rng, 2))
}

pub fn pure(v: &CVector) -> DensityOperator {
    DensityOperator::from_pure(v).unwrap()
}

/// Asserts the three density-operator invariants at the library tolerances.
pub fn assert_valid(rho: &DensityOperator) {
    if let Err(e) = rho.validate() {
        panic!("{e}");
    }
}
