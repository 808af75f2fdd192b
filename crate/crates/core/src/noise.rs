//! Lindblad generators for pure dephasing and spin relaxation of the two
//! dots, propagation by matrix exponential, and per-qubit Kraus channels
//! used as an independent cross-check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, identity, pauli, re, sigma_minus, tensor, unvec_col, vec_col, CMatrix, C64};
use crate::state::DensityOperator;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseKind {
    /// Lindblad operators `√(Γ₂/2) σz` on each dot.
    PureDephasing {
        gamma2: f64,
    },
    /// Lindblad operators `√Γ₁ σ⁻` on each dot.
    Relaxation {
        gamma1: f64,
    },
    NoiseFree,
}

/// Dissipation on the dots plus the Zeeman Hamiltonian `(ε/2)(σz₁ + σz₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub kind: NoiseKind,
    #[serde(default)]
    pub epsilon: f64,
}

impl NoiseModel {
    pub fn noise_free() -> Self {
        Self {
            kind: NoiseKind::NoiseFree,
            epsilon: 0.0,
        }
    }

    pub fn dephasing(gamma2: f64, epsilon: f64) -> Self {
        Self {
            kind: NoiseKind::PureDephasing { gamma2 },
            epsilon,
        }
    }

    pub fn relaxation(gamma1: f64, epsilon: f64) -> Self {
        Self {
            kind: NoiseKind::Relaxation { gamma1 },
            epsilon,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let rate = match self.kind {
            NoiseKind::PureDephasing { gamma2 } => gamma2,
            NoiseKind::Relaxation { gamma1 } => gamma1,
            NoiseKind::NoiseFree => 0.0,
        };
        if !rate.is_finite() || rate < 0.0 {
            return Err(Error::InvalidConfig(format!("noise rate must be >= 0, got {rate}")));
        }
        if !self.epsilon.is_finite() {
            return Err(Error::InvalidConfig("epsilon must be finite".into()));
        }
        Ok(())
    }

    /// Single-dot Hamiltonian and jump operators.
    fn single_dot_generators(&self) -> (CMatrix, Vec<CMatrix>) {
        let h = pauli(3) * re(self.epsilon / 2.0);
        let jumps = match self.kind {
            NoiseKind::PureDephasing { gamma2 } if gamma2 > 0.0 => {
                vec![pauli(3) * re((gamma2 / 2.0).sqrt())]
            }
            NoiseKind::Relaxation { gamma1 } if gamma1 > 0.0 => {
                vec![sigma_minus() * re(gamma1.sqrt())]
            }
            _ => Vec::new(),
        };
        (h, jumps)
    }
}

/// Superoperator acting on column-stacked density matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct Liouvillian {
    dim: usize,
    matrix: CMatrix,
    /// For photon-QD-QD generators: the QD-only generator. The photon
    /// carries no dynamics, so each photon block `|p⟩⟨q| ⊗ X` evolves under
    /// it independently.
    qd_generator: Option<Box<Liouvillian>>,
}

impl Liouvillian {
    /// `ℒρ = −i[H, ρ] + Σ (LρL† − ½{L†L, ρ})` using
    /// `vec(AρB) = (Bᵀ ⊗ A) vec(ρ)`.
    pub fn from_generators(hamiltonian: &CMatrix, jumps: &[CMatrix]) -> Self {
        let d = hamiltonian.nrows();
        let id = identity(d);
        let mut l = (tensor(&id, hamiltonian) - tensor(&hamiltonian.transpose(), &id)) * C64::new(0.0, -1.0);
        for jump in jumps {
            let jdj = jump.adjoint() * jump;
            l += tensor(&jump.conjugate(), jump);
            l -= tensor(&id, &jdj) * re(0.5);
            l -= tensor(&jdj.transpose(), &id) * re(0.5);
        }
        Self {
            dim: d,
            matrix: l,
            qd_generator: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `e^{ℒt}`. Photon-QD-QD generators are exponentiated on the 16×16 QD
    /// block only.
    pub fn propagator(&self, t: f64) -> Result<Propagator> {
        if t < 0.0 || t.is_nan() {
            return Err(Error::NegativeTime(t));
        }
        if t == 0.0 {
            return Ok(Propagator::identity(self.dim));
        }
        Ok(match &self.qd_generator {
            Some(qd) => Propagator {
                dim: self.dim,
                kind: PropagatorKind::PhotonBlocks((qd.matrix() * re(t)).exp()),
            },
            None => self.dense_propagator(t)?,
        })
    }

    /// `e^{ℒt}` from the full d²×d² exponential, whatever the structure.
    pub fn dense_propagator(&self, t: f64) -> Result<Propagator> {
        if t < 0.0 || t.is_nan() {
            return Err(Error::NegativeTime(t));
        }
        Ok(Propagator {
            dim: self.dim,
            kind: PropagatorKind::Dense((&self.matrix * re(t)).exp()),
        })
    }

    pub fn apply(&self, rho: &DensityOperator) -> Result<CMatrix> {
        check_dim(self.dim, rho)?;
        Ok(unvec_col(&(&self.matrix * vec_col(rho.matrix())), self.dim))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum PropagatorKind {
    Identity,
    Dense(CMatrix),
    /// QD superoperator applied to each 4×4 photon block.
    PhotonBlocks(CMatrix),
}

/// A fixed-time evolution map.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagator {
    dim: usize,
    kind: PropagatorKind,
}

impl Propagator {
    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            kind: PropagatorKind::Identity,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The full d²×d² matrix of the map.
    pub fn superoperator(&self) -> CMatrix {
        let n = self.dim * self.dim;
        match &self.kind {
            PropagatorKind::Identity => identity(n),
            PropagatorKind::Dense(m) => m.clone(),
            PropagatorKind::PhotonBlocks(_) => {
                let mut out = CMatrix::zeros(n, n);
                for k in 0..n {
                    let mut unit = CMatrix::zeros(self.dim, self.dim);
                    unit[(k % self.dim, k / self.dim)] = re(1.0);
                    out.set_column(k, &vec_col(&self.apply_matrix(&unit)));
                }
                out
            }
        }
    }

    fn apply_matrix(&self, rho: &CMatrix) -> CMatrix {
        match &self.kind {
            PropagatorKind::Identity => rho.clone(),
            PropagatorKind::Dense(m) => unvec_col(&(m * vec_col(rho)), self.dim),
            PropagatorKind::PhotonBlocks(m) => {
                let mut out = CMatrix::zeros(self.dim, self.dim);
                for p in 0..2 {
                    for q in 0..2 {
                        let block = rho.view((4 * p, 4 * q), (4, 4)).clone_owned();
                        let evolved = unvec_col(&(m * vec_col(&block)), 4);
                        out.view_mut((4 * p, 4 * q), (4, 4)).copy_from(&evolved);
                    }
                }
                out
            }
        }
    }

    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        check_dim(self.dim, rho)?;
        match self.kind {
            PropagatorKind::Identity => Ok(rho.clone()),
            _ => DensityOperator::from_matrix_unchecked(self.apply_matrix(rho.matrix())),
        }
    }
}

fn check_dim(expected: usize, rho: &DensityOperator) -> Result<()> {
    if rho.dim() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: rho.dim(),
        });
    }
    Ok(())
}

/// Generator on the two dots, optionally preceded by a noiseless photon
/// factor (dimension 8 instead of 4).
pub fn build_liouvillian(noise: &NoiseModel, include_photon: bool) -> Liouvillian {
    let (h1, jumps1) = noise.single_dot_generators();
    let id2 = identity(2);
    let prefix = if include_photon { identity(2) } else { identity(1) };
    let embed = |op: &CMatrix, dot: usize| -> CMatrix {
        let qd = if dot == 0 { tensor(op, &id2) } else { tensor(&id2, op) };
        tensor(&prefix, &qd)
    };
    let hamiltonian = embed(&h1, 0) + embed(&h1, 1);
    let jumps: Vec<CMatrix> = (0..2)
        .flat_map(|dot| jumps1.iter().map(move |j| (j, dot)))
        .map(|(j, dot)| embed(j, dot))
        .collect();
    let mut l = Liouvillian::from_generators(&hamiltonian, &jumps);
    if include_photon {
        l.qd_generator = Some(Box::new(build_liouvillian(noise, false)));
    }
    l
}

/// `e^{ℒt} ρ`.
pub fn evolve(rho: &DensityOperator, liouvillian: &Liouvillian, t: f64) -> Result<DensityOperator> {
    check_dim(liouvillian.dim(), rho)?;
    liouvillian.propagator(t)?.apply(rho)
}

/// Applies the analytic single-dot channel (Kraus form, followed by the
/// Zeeman phase) to each dot in turn. Works on QD-QD (dim 4) or
/// photon-QD-QD (dim 8) states.
pub fn kraus_channel_oracle(rho: &DensityOperator, noise: &NoiseModel, t: f64) -> Result<DensityOperator> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::NegativeTime(t));
    }
    let kraus = single_dot_kraus(noise, t)?;
    let (prefix, dots) = match rho.dim() {
        4 => (1, [0usize, 1]),
        8 => (2, [0, 1]),
        d => return Err(Error::DimensionMismatch { expected: 4, found: d }),
    };
    let id2 = identity(2);
    let pre = identity(prefix);
    let mut out = rho.matrix().clone();
    for dot in dots {
        let mut next = CMatrix::zeros(out.nrows(), out.ncols());
        for k in &kraus {
            let local = if dot == 0 { tensor(k, &id2) } else { tensor(&id2, k) };
            let full = tensor(&pre, &local);
            next += &full * &out * full.adjoint();
        }
        out = next;
    }
    DensityOperator::from_matrix_unchecked(out)
}

fn single_dot_kraus(noise: &NoiseModel, t: f64) -> Result<Vec<CMatrix>> {
    let zeeman = CMatrix::from_diagonal(&linalg::CVector::from_vec(vec![
        C64::from_polar(1.0, -noise.epsilon * t / 2.0),
        C64::from_polar(1.0, noise.epsilon * t / 2.0),
    ]));
    let base = match noise.kind {
        NoiseKind::PureDephasing { gamma2 } => {
            // coherence factor e^{−Γ₂t}
            let decay = (-gamma2 * t).exp();
            vec![
                identity(2) * re(((1.0 + decay) / 2.0).sqrt()),
                pauli(3) * re(((1.0 - decay) / 2.0).sqrt()),
            ]
        }
        NoiseKind::Relaxation { gamma1 } => {
            let p = 1.0 - (-gamma1 * t).exp();
            let mut k0 = CMatrix::zeros(2, 2);
            k0[(0, 0)] = re((1.0 - p).sqrt());
            k0[(1, 1)] = re(1.0);
            let k1 = sigma_minus() * re(p.sqrt());
            vec![k0, k1]
        }
        NoiseKind::NoiseFree => return Err(Error::UnsupportedNoise("noise-free model has no Kraus oracle")),
    };
    Ok(base.into_iter().map(|k| &zeeman * k).collect())
}

/// The projection onto operators diagonal in the spin basis of both dots
/// (photon indices untouched): `𝒫ρ = Σ_a |a⟩⟨a| ρ |a⟩⟨a|` with `a` running
/// over the four spin configurations.
pub fn spin_diagonal_projection(rho: &CMatrix) -> CMatrix {
    let d = rho.nrows();
    let mut out = rho.clone();
    for r in 0..d {
        for c in 0..d {
            if r % 4 != c % 4 {
                out[(r, c)] = re(0.0);
            }
        }
    }
    out
}

/// Superoperator matrix of [`spin_diagonal_projection`] in the
/// column-stacked representation.
pub fn spin_diagonal_projector_superop(dim: usize) -> CMatrix {
    let mut p = CMatrix::zeros(dim * dim, dim * dim);
    for c in 0..dim {
        for r in 0..dim {
            if r % 4 == c % 4 {
                let k = c * dim + r;
                p[(k, k)] = re(1.0);
            }
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use crate::state::bell;

    #[test]
    fn noise_free_zero_field_is_zero() {
        for photon in [false, true] {
            let l = build_liouvillian(&NoiseModel::noise_free(), photon);
            assert_eq!(linalg::max_abs(l.matrix()), 0.0);
        }
    }

    fn plus_state() -> DensityOperator {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityOperator::from_pure(&linalg::ket(&[re(s), re(s)])).unwrap()
    }

    #[test]
    fn single_qubit_dephasing_rate() {
        let gamma: f64 = 0.7;
        let l = Liouvillian::from_generators(&CMatrix::zeros(2, 2), &[pauli(3) * re((gamma / 2.0).sqrt())]);
        for t in [0.1, 1.0, 3.0] {
            let out = evolve(&plus_state(), &l, t).unwrap();
            assert!((out.matrix()[(0, 1)].re - 0.5 * (-gamma * t).exp()).abs() < 1e-13);
            assert!((out.matrix()[(0, 0)].re - 0.5).abs() < 1e-13);
        }
    }

    #[test]
    fn single_qubit_relaxation_rate() {
        let gamma: f64 = 1.3;
        let l = Liouvillian::from_generators(&CMatrix::zeros(2, 2), &[sigma_minus() * re(gamma.sqrt())]);
        let up = DensityOperator::from_pure(&linalg::ket(&[re(1.0), re(0.0)])).unwrap();
        for t in [0.2, 1.0, 2.5] {
            let out = evolve(&up, &l, t).unwrap();
            assert!((out.matrix()[(0, 0)].re - (-gamma * t).exp()).abs() < 1e-13);
        }
    }

    #[test]
    fn blockwise_propagator_matches_dense_exponential() {
        for noise in [NoiseModel::dephasing(0.7, 3.0), NoiseModel::relaxation(1.2, -2.0)] {
            let l = build_liouvillian(&noise, true);
            for t in [0.05, 0.9, 4.0] {
                let fast = l.propagator(t).unwrap().superoperator();
                let dense = l.dense_propagator(t).unwrap().superoperator();
                assert!(max_abs_diff(&fast, &dense) < 1e-12, "{noise:?} t={t}");
            }
        }
    }

    #[test]
    fn evolve_zero_time_is_exact_identity() {
        let l = build_liouvillian(&NoiseModel::dephasing(1.0, 3.0), false);
        let rho = DensityOperator::from_pure(&bell::psi_plus()).unwrap();
        assert_eq!(evolve(&rho, &l, 0.0).unwrap(), rho);
    }

    #[test]
    fn evolve_rejects_negative_time_and_wrong_dim() {
        let l = build_liouvillian(&NoiseModel::dephasing(1.0, 0.0), false);
        let rho = DensityOperator::maximally_mixed(4);
        assert!(matches!(evolve(&rho, &l, -1.0), Err(Error::NegativeTime(_))));
        let rho8 = DensityOperator::maximally_mixed(8);
        assert!(matches!(evolve(&rho8, &l, 1.0), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn up_up_population_under_relaxation() {
        let l = build_liouvillian(&NoiseModel::relaxation(1.0, 0.4), false);
        let mut v = linalg::CVector::zeros(4);
        v[0] = re(1.0);
        let rho = DensityOperator::from_pure(&v).unwrap();
        for t in [0.3, 1.0, 2.0] {
            let out = evolve(&rho, &l, t).unwrap();
            assert!((out.matrix()[(0, 0)].re - (-2.0 * t).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn kraus_rejects_noise_free_and_is_identity_at_zero() {
        let rho = DensityOperator::from_pure(&bell::psi_plus()).unwrap();
        assert!(kraus_channel_oracle(&rho, &NoiseModel::noise_free(), 1.0).is_err());
        for noise in [NoiseModel::dephasing(1.0, 2.0), NoiseModel::relaxation(1.0, 2.0)] {
            let out = kraus_channel_oracle(&rho, &noise, 0.0).unwrap();
            assert!(max_abs_diff(out.matrix(), rho.matrix()) < 1e-15);
        }
    }

    #[test]
    fn projector_superop_matches_direct_projection() {
        let rho = DensityOperator::from_pure(&bell::psi_plus())
            .unwrap()
            .tensor(&DensityOperator::maximally_mixed(2))
            .unwrap();
        // QD-QD ⊗ photon order is irrelevant here; any 8x8 matrix works
        let m = rho.matrix();
        let direct = spin_diagonal_projection(m);
        let via_superop = unvec_col(&(spin_diagonal_projector_superop(8) * vec_col(m)), 8);
        assert!(max_abs_diff(&direct, &via_superop) < 1e-15);
    }
}
