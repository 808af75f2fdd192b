//! First-photon entangling sequence: prepare |V⟩ ⊗ |φ₁⟩ ⊗ |φ₂⟩, interleave
//! free evolution with the two Faraday interactions, measure the photon and
//! post-select the QD-QD state. Also the closed-form results the numerical
//! pipeline is checked against.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{faraday_unitary, QdTarget};
use crate::linalg::{self, re, CMatrix, C64};
use crate::measures::{concurrence, entanglement_of_formation, state_fidelity};
use crate::noise::{build_liouvillian, NoiseKind, NoiseModel, Propagator};
use crate::state::{bell, spin_state, vertical, DensityOperator, PolarizationBasis, Subsystem};

/// Outcome probabilities below this leave the conditional state undefined.
pub const DEGENERATE_PROBABILITY: f64 = 1e-12;

/// Photon outcome: Φ for |H⟩, Ψ for |V⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Phi,
    Psi,
}

impl Outcome {
    /// Index into [`PolarizationBasis::Linear`] kets.
    pub fn linear_index(self) -> usize {
        match self {
            Outcome::Phi => 0,
            Outcome::Psi => 1,
        }
    }

    /// Noise-free target: |φ⁻⟩ for Φ, |ψ⁺⟩ for Ψ.
    pub fn ideal_state(self) -> linalg::CVector {
        match self {
            Outcome::Phi => bell::phi_minus(),
            Outcome::Psi => bell::psi_plus(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ProtocolTimings {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    #[serde(default)]
    pub tau1: f64,
    #[serde(default)]
    pub tau2: f64,
    #[serde(default)]
    pub tau3: f64,
}

impl ProtocolTimings {
    pub fn first_photon(t1: f64, t2: f64, t3: f64) -> Self {
        Self {
            t1,
            t2,
            t3,
            ..Self::default()
        }
    }

    pub fn total_first(&self) -> f64 {
        self.t1 + self.t2 + self.t3
    }

    pub fn taus(&self) -> [f64; 3] {
        [self.tau1, self.tau2, self.tau3]
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.t1, self.t2, self.t3, self.tau1, self.tau2, self.tau3];
        if let Some(bad) = all.iter().find(|t| !t.is_finite() || **t < 0.0) {
            return Err(Error::NegativeTime(*bad));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolConfig {
    pub alpha1: C64,
    pub beta1: C64,
    pub alpha2: C64,
    pub beta2: C64,
    pub phi: f64,
    pub noise: NoiseModel,
    pub timings: ProtocolTimings,
}

impl ProtocolConfig {
    /// Both dots in (|↑⟩ + |↓⟩)/√2, φ = π/2.
    pub fn balanced(noise: NoiseModel, timings: ProtocolTimings) -> Self {
        let s = re(std::f64::consts::FRAC_1_SQRT_2);
        Self {
            alpha1: s,
            beta1: s,
            alpha2: s,
            beta2: s,
            phi: FRAC_PI_2,
            noise,
            timings,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (i, (a, b)) in [(self.alpha1, self.beta1), (self.alpha2, self.beta2)]
            .iter()
            .enumerate()
        {
            let norm = a.norm_sqr() + b.norm_sqr();
            if (norm - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidConfig(format!(
                    "spin {} amplitudes have |α|²+|β|² = {norm}",
                    i + 1
                )));
            }
        }
        if !self.phi.is_finite() {
            return Err(Error::InvalidConfig("phi must be finite".into()));
        }
        self.noise.validate()?;
        self.timings.validate()
    }

    /// |V⟩ ⊗ |φ₁⟩ ⊗ |φ₂⟩.
    pub fn initial_state(&self) -> Result<DensityOperator> {
        let ket = linalg::ket_tensor(
            &vertical(),
            &linalg::ket_tensor(
                &spin_state(self.alpha1, self.beta1),
                &spin_state(self.alpha2, self.beta2),
            ),
        );
        DensityOperator::from_pure(&ket)
    }
}

/// One photon passage: free evolution, U₁, free evolution, U₂, free
/// evolution. Either interaction may be skipped, leaving only the
/// evolution in that slot.
#[derive(Debug, Clone)]
pub struct PhotonPassage {
    stages: [Propagator; 3],
    u1: Option<CMatrix>,
    u2: Option<CMatrix>,
}

impl PhotonPassage {
    pub fn new(noise: &NoiseModel, intervals: [f64; 3], phi: f64, qd1: bool, qd2: bool) -> Result<Self> {
        let l = build_liouvillian(noise, true);
        let stages = [
            l.propagator(intervals[0])?,
            l.propagator(intervals[1])?,
            l.propagator(intervals[2])?,
        ];
        Ok(Self {
            stages,
            u1: qd1.then(|| faraday_unitary(phi, QdTarget::Qd1)),
            u2: qd2.then(|| faraday_unitary(phi, QdTarget::Qd2)),
        })
    }

    /// Same free evolution with a different choice of interactions.
    pub fn with_interactions(&self, phi: f64, qd1: bool, qd2: bool) -> Self {
        Self {
            stages: self.stages.clone(),
            u1: qd1.then(|| faraday_unitary(phi, QdTarget::Qd1)),
            u2: qd2.then(|| faraday_unitary(phi, QdTarget::Qd2)),
        }
    }

    /// Runs the passage on a photon-QD-QD state.
    pub fn run(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        let mut state = self.stages[0].apply(rho)?;
        if let Some(u) = &self.u1 {
            state = state.conjugate(u);
        }
        state = self.stages[1].apply(&state)?;
        if let Some(u) = &self.u2 {
            state = state.conjugate(u);
        }
        self.stages[2].apply(&state)
    }

    /// Injects a fresh |V⟩ photon alongside `qds` and runs the passage.
    pub fn run_with_fresh_photon(&self, qds: &DensityOperator) -> Result<DensityOperator> {
        let photon = DensityOperator::from_pure(&vertical())?;
        self.run(&photon.tensor(qds)?)
    }
}

/// One branch of a photon measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub probability: f64,
    /// `None` when the probability is below [`DEGENERATE_PROBABILITY`].
    pub state: Option<DensityOperator>,
}

/// Measures the photon of an 8-dim state in `basis`; branches are returned
/// in basis order (first, second) with the conditional QD-QD states.
pub fn measure_photon(rho: &DensityOperator, basis: PolarizationBasis) -> Result<[Branch; 2]> {
    if rho.dim() != 8 {
        return Err(Error::DimensionMismatch {
            expected: 8,
            found: rho.dim(),
        });
    }
    let id4 = linalg::identity(4);
    let branch = |proj: &CMatrix| -> Result<Branch> {
        let full = linalg::tensor(proj, &id4);
        let projected = &full * rho.matrix() * &full;
        let probability = projected.trace().re;
        let state = if probability > DEGENERATE_PROBABILITY {
            let joint = DensityOperator::from_matrix_unchecked(projected * re(1.0 / probability))?;
            Some(joint.partial_trace(&[Subsystem::Qd1, Subsystem::Qd2])?)
        } else {
            None
        };
        Ok(Branch { probability, state })
    };
    let [p0, p1] = basis.projectors();
    Ok([branch(&p0)?, branch(&p1)?])
}

#[derive(Debug, Clone, PartialEq)]
pub struct PostSelectedEnsemble {
    pub p_phi: f64,
    pub p_psi: f64,
    pub rho_phi: DensityOperator,
    pub rho_psi: DensityOperator,
}

impl PostSelectedEnsemble {
    pub fn probability(&self, outcome: Outcome) -> f64 {
        match outcome {
            Outcome::Phi => self.p_phi,
            Outcome::Psi => self.p_psi,
        }
    }

    pub fn state(&self, outcome: Outcome) -> &DensityOperator {
        match outcome {
            Outcome::Phi => &self.rho_phi,
            Outcome::Psi => &self.rho_psi,
        }
    }
}

/// The photon-QD-QD state just before the photon is measured.
pub fn final_state(config: &ProtocolConfig) -> Result<DensityOperator> {
    config.validate()?;
    let t = &config.timings;
    let passage = PhotonPassage::new(&config.noise, [t.t1, t.t2, t.t3], config.phi, true, true)?;
    passage.run(&config.initial_state()?)
}

pub fn run_entanglement(config: &ProtocolConfig) -> Result<PostSelectedEnsemble> {
    post_select(&final_state(config)?)
}

/// Linear-basis measurement of an 8-dim state, failing on a degenerate
/// outcome.
pub fn post_select(rho_f: &DensityOperator) -> Result<PostSelectedEnsemble> {
    let [phi, psi] = measure_photon(rho_f, PolarizationBasis::Linear)?;
    let rho_phi = phi.state.ok_or(Error::DegenerateOutcome {
        outcome: Outcome::Phi,
        probability: phi.probability,
    })?;
    let rho_psi = psi.state.ok_or(Error::DegenerateOutcome {
        outcome: Outcome::Psi,
        probability: psi.probability,
    })?;
    Ok(PostSelectedEnsemble {
        p_phi: phi.probability,
        p_psi: psi.probability,
        rho_phi,
        rho_psi,
    })
}

fn dephasing_rate(noise: &NoiseModel) -> Result<f64> {
    match noise.kind {
        NoiseKind::PureDephasing { gamma2 } => Ok(gamma2),
        _ => Err(Error::UnsupportedNoise("closed form exists only for pure dephasing")),
    }
}

/// Fidelity of the post-selected state to its noise-free Bell target after
/// total dephasing time `t`:
/// `F_Φ = √(½(1 + e^{−2Γ₂t} cos 2εt))`, `F_Ψ = √(½(1 + e^{−2Γ₂t}))`.
pub fn fidelity_closed_form(t: f64, noise: &NoiseModel, outcome: Outcome) -> Result<f64> {
    let gamma2 = dephasing_rate(noise)?;
    let envelope = (-2.0 * gamma2 * t).exp();
    let value = match outcome {
        Outcome::Phi => 0.5 * (1.0 + envelope * (2.0 * noise.epsilon * t).cos()),
        Outcome::Psi => 0.5 * (1.0 + envelope),
    };
    Ok(value.sqrt())
}

/// `C(t) = e^{−2Γ₂t}`.
pub fn concurrence_closed_form(t: f64, gamma2: f64) -> f64 {
    (-2.0 * t * gamma2).exp()
}

/// Outcome probabilities `(p_Ψ, p_Φ)` under spin relaxation.
pub fn relaxation_outcome_probability(t1: f64, t2: f64, gamma1: f64) -> (f64, f64) {
    let p_psi = 0.5 * (-t1 * gamma1).exp() * (1.0 + (-t2 * gamma1).exp() - (-(t1 + t2) * gamma1).exp());
    (p_psi, 1.0 - p_psi)
}

/// Tolerance for `--verify` style cross-checks against the pipeline.
pub const VERIFY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Figure1Row {
    pub t: f64,
    pub entanglement: f64,
    pub f_psi: f64,
    pub f_phi: f64,
    /// Largest deviation from the numerical pipeline, when verified.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deviation: Option<f64>,
}

/// Entanglement and both fidelities on a grid of total dephasing times.
pub fn figure1_sweep(gamma2: f64, epsilon: f64, t_grid: &[f64], verify: bool) -> Result<Vec<Figure1Row>> {
    let noise = NoiseModel::dephasing(gamma2, epsilon);
    t_grid
        .iter()
        .map(|&t| {
            if t.is_nan() || t < 0.0 {
                return Err(Error::NegativeTime(t));
            }
            let c = concurrence_closed_form(t, gamma2);
            let mut row = Figure1Row {
                t,
                entanglement: entanglement_of_formation(c)?,
                f_psi: fidelity_closed_form(t, &noise, Outcome::Psi)?,
                f_phi: fidelity_closed_form(t, &noise, Outcome::Phi)?,
                deviation: None,
            };
            if verify {
                row.deviation = Some(pipeline_deviation(&row, &noise)?);
            }
            Ok(row)
        })
        .collect()
}

fn pipeline_deviation(row: &Figure1Row, noise: &NoiseModel) -> Result<f64> {
    let third = row.t / 3.0;
    let config = ProtocolConfig::balanced(*noise, ProtocolTimings::first_photon(third, third, third));
    let ens = run_entanglement(&config)?;
    let f_psi = state_fidelity(&ens.rho_psi, &Outcome::Psi.ideal_state());
    let f_phi = state_fidelity(&ens.rho_phi, &Outcome::Phi.ideal_state());
    let e = entanglement_of_formation(concurrence(&ens.rho_psi))?;
    Ok([
        (f_psi - row.f_psi).abs(),
        (f_phi - row.f_phi).abs(),
        (e - row.entanglement).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max))
}
