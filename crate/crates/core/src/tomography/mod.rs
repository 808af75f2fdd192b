//! State tomography of the QD-QD state using single-spin rotations and a
//! probe photon.
//!
//! Each setting rotates the dots, sends a fresh |V⟩ photon past one or both
//! of them and measures its polarisation. For a photon meeting both dots
//! the photon state in the (R, L) basis is `½[[1, −α̃zz], [−α̃zz, 1]]`, so
//! `α̃zz = P_H − P_V`. For a single dot the photon ends up in
//! `½[[1, −iα̃z0], [iα̃z0, 1]]`: a spin-up dot sends |V⟩ to
//! |+45°⟩ = (|R⟩ + i|L⟩)/√2, giving `α̃z0 = P₊₄₅ − P₋₄₅`. Both readouts are
//! therefore "first basis outcome minus second".

mod experiments;
mod settings;

pub use experiments::{
    entanglement_boost_experiment, photon_string_experiment, relaxation_tomography_drift, BoostParams, BoostStats,
    BoostTrajectory, DriftRow, PhotonStringStats,
};
pub use settings::{table_settings, Pattern, TomographySetting, CORRELATION_TABLE, LOCAL_TABLE};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::RotationSetting;
use crate::linalg::{hermitian_eigen, re, CMatrix, CVector};
use crate::measures::CorrelationMatrix;
use crate::noise::NoiseModel;
use crate::protocol::PhotonPassage;
use crate::sampling::bernoulli_count;
use crate::state::{DensityOperator, PolarizationBasis, Subsystem, POSITIVITY_TOL};

/// Probe photons use the ideal quarter-wave Faraday phase.
pub const PROBE_PHASE: f64 = std::f64::consts::FRAC_PI_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SamplingMode {
    Exact,
    Shots { n: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShotRecord {
    pub setting: TomographySetting,
    pub n_shots: u64,
    /// Count of the first basis outcome (H or +45°).
    pub n_outcome_plus: u64,
    pub estimate: f64,
    pub std_error: f64,
}

impl ShotRecord {
    fn from_counts(setting: TomographySetting, n_shots: u64, n_outcome_plus: u64) -> Self {
        let p = n_outcome_plus as f64 / n_shots as f64;
        Self {
            setting,
            n_shots,
            n_outcome_plus,
            estimate: (2.0 * p - 1.0).clamp(-1.0, 1.0),
            std_error: 2.0 * (p * (1.0 - p) / n_shots as f64).sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TomographyReport {
    pub alpha: CorrelationMatrix,
    /// One record per setting in Shots mode; empty in Exact mode.
    pub records: Vec<ShotRecord>,
}

/// `(r₁ ⊗ r₂) ρ (r₁ ⊗ r₂)†`.
pub fn apply_rotations(rho: &DensityOperator, setting: &RotationSetting) -> Result<DensityOperator> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.dim(),
        });
    }
    Ok(rho.conjugate(&setting.matrix()))
}

/// Probe-photon passages for the three interaction patterns, sharing one
/// set of free-evolution propagators.
#[derive(Debug, Clone)]
pub struct ProbeChannel {
    both: PhotonPassage,
    qd1: PhotonPassage,
    qd2: PhotonPassage,
}

impl ProbeChannel {
    pub fn new(noise: &NoiseModel, taus: [f64; 3]) -> Result<Self> {
        let both = PhotonPassage::new(noise, taus, PROBE_PHASE, true, true)?;
        Ok(Self {
            qd1: both.with_interactions(PROBE_PHASE, true, false),
            qd2: both.with_interactions(PROBE_PHASE, false, true),
            both,
        })
    }

    pub fn passage(&self, pattern: Pattern) -> &PhotonPassage {
        match pattern {
            Pattern::Both => &self.both,
            Pattern::Qd1Only => &self.qd1,
            Pattern::Qd2Only => &self.qd2,
        }
    }

    /// Joint photon-QD-QD state after a fresh photon passes the dots.
    pub fn interact(&self, rho_qds: &DensityOperator, pattern: Pattern) -> Result<DensityOperator> {
        if rho_qds.dim() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: rho_qds.dim(),
            });
        }
        self.passage(pattern).run_with_fresh_photon(rho_qds)
    }

    pub fn photon_state(&self, rho_qds: &DensityOperator, pattern: Pattern) -> Result<DensityOperator> {
        self.interact(rho_qds, pattern)?.partial_trace(&[Subsystem::Photon])
    }

    /// Exact readout probabilities for one setting on an unrotated state.
    pub fn setting_probabilities(&self, rho_qds: &DensityOperator, setting: &TomographySetting) -> Result<(f64, f64)> {
        let rotated = apply_rotations(rho_qds, &setting.rotation)?;
        let photon = self.photon_state(&rotated, setting.pattern)?;
        Ok(readout_probabilities(&photon, setting.basis))
    }
}

/// Reduced photon state after a probe passage.
pub fn second_photon_state(
    rho_qds: &DensityOperator,
    pattern: Pattern,
    noise: &NoiseModel,
    taus: [f64; 3],
) -> Result<DensityOperator> {
    ProbeChannel::new(noise, taus)?.photon_state(rho_qds, pattern)
}

/// Born-rule probabilities of the two basis outcomes, in basis order.
pub fn readout_probabilities(photon: &DensityOperator, basis: PolarizationBasis) -> (f64, f64) {
    assert_eq!(photon.dim(), 2, "readout expects a single photon");
    let [a, b] = basis.kets();
    let prob = |k: &CVector| k.dotc(&(photon.matrix() * k)).re.clamp(0.0, 1.0);
    (prob(&a), prob(&b))
}

/// The coefficient carried by the photon: first outcome minus second.
pub fn extract_coefficient(probabilities: (f64, f64)) -> f64 {
    probabilities.0 - probabilities.1
}

/// Runs all 15 settings, each on its own copy of `rho_qds` (a hardware run
/// would re-prepare the state per setting).
pub fn full_tomography(
    rho_qds: &DensityOperator,
    noise: &NoiseModel,
    taus: [f64; 3],
    mode: SamplingMode,
) -> Result<TomographyReport> {
    let channel = ProbeChannel::new(noise, taus)?;
    let mut alpha = CorrelationMatrix::identity_only();
    let mut records = Vec::new();
    for (index, setting) in table_settings().iter().enumerate() {
        let fresh = rho_qds.clone();
        let probabilities = channel.setting_probabilities(&fresh, setting)?;
        let value = match mode {
            SamplingMode::Exact => extract_coefficient(probabilities),
            SamplingMode::Shots { n, seed } => {
                if n == 0 {
                    return Err(Error::InvalidConfig("shot count must be positive".into()));
                }
                let plus = bernoulli_count(seed, index as u64, probabilities.0, n);
                let record = ShotRecord::from_counts(*setting, n, plus);
                records.push(record);
                record.estimate
            }
        };
        alpha.set(setting.target.0, setting.target.1, value);
    }
    Ok(TomographyReport { alpha, records })
}

/// Assembles `(1/4) Σ α_ij σ_i ⊗ σ_j`. With `physicalize`, negative
/// eigenvalues are clipped to zero and the trace renormalised.
pub fn reconstruct_density(alpha: &CorrelationMatrix, physicalize: bool) -> Result<DensityOperator> {
    if (alpha.get(0, 0) - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidState(format!("alpha_00 = {}", alpha.get(0, 0))));
    }
    let m = alpha.to_operator();
    let (values, vectors) = hermitian_eigen(&m);
    if values[0] >= POSITIVITY_TOL {
        return DensityOperator::from_matrix_unchecked(m);
    }
    if !physicalize {
        return Err(Error::NonPhysical {
            min_eigenvalue: values[0],
        });
    }
    let clipped: Vec<f64> = values.iter().map(|v| v.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    let diag = CMatrix::from_diagonal(&CVector::from_iterator(4, clipped.iter().map(|v| re(v / total))));
    let mut out = &vectors * diag * vectors.adjoint();
    out = (&out + out.adjoint()) * re(0.5);
    DensityOperator::from_matrix_unchecked(out)
}
