//! Multi-photon experiments: photon strings after a tomography setting,
//! coefficient drift under spin relaxation, and repeated Ψ-heralding.

use serde::{Deserialize, Serialize};

use super::{
    apply_rotations, extract_coefficient, readout_probabilities, ProbeChannel, SamplingMode, TomographySetting,
};
use crate::error::{Error, Result};
use crate::measures::concurrence;
use crate::noise::{build_liouvillian, NoiseKind, NoiseModel};
use crate::protocol::{measure_photon, run_entanglement, Branch, Outcome, PhotonPassage, ProtocolConfig};
use crate::sampling::KeyedStream;
use crate::state::{DensityOperator, Subsystem};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhotonStringStats {
    /// Probabilities (or frequencies) of the first string photon's two
    /// outcomes, in basis order.
    pub first_outcome: [f64; 2],
    /// Entry `j` is the probability that photon `j + 2` of the string
    /// matches the first.
    pub agreement: Vec<f64>,
    /// Number of sampled strings; zero in Exact mode.
    pub trajectories: u64,
}

fn sample_branch(branches: &[Branch; 2], u: f64) -> usize {
    if u < branches[0].probability || branches[1].state.is_none() {
        0
    } else {
        1
    }
}

/// Sends `string_length` probe photons after applying the setting's
/// rotation once. The first photon is conditioned on exactly; the later
/// photons see no further rotation.
pub fn photon_string_experiment(
    rho_qds: &DensityOperator,
    setting: &TomographySetting,
    string_length: usize,
    noise: &NoiseModel,
    taus: [f64; 3],
    mode: SamplingMode,
) -> Result<PhotonStringStats> {
    if string_length < 2 {
        return Err(Error::InvalidConfig(
            "a photon string needs at least two photons".into(),
        ));
    }
    setting.validate()?;
    let channel = ProbeChannel::new(noise, taus)?;
    let passage = channel.passage(setting.pattern);
    let rotated = apply_rotations(rho_qds, &setting.rotation)?;
    let branches = measure_photon(&passage.run_with_fresh_photon(&rotated)?, setting.basis)?;
    let first_outcome = [branches[0].probability, branches[1].probability];
    let later = string_length - 1;

    match mode {
        SamplingMode::Exact => {
            let mut agreement = vec![0.0; later];
            let mut weight = 0.0;
            for (b, branch) in branches.iter().enumerate() {
                let Some(mut sigma) = branch.state.clone() else {
                    continue;
                };
                weight += branch.probability;
                for slot in agreement.iter_mut() {
                    let joint = passage.run_with_fresh_photon(&sigma)?;
                    let probs = readout_probabilities(&joint.partial_trace(&[Subsystem::Photon])?, setting.basis);
                    *slot += branch.probability * if b == 0 { probs.0 } else { probs.1 };
                    // the outcome is not recorded here, so trace the photon out
                    sigma = joint.partial_trace(&[Subsystem::Qd1, Subsystem::Qd2])?;
                }
            }
            agreement.iter_mut().for_each(|a| *a /= weight);
            Ok(PhotonStringStats {
                first_outcome,
                agreement,
                trajectories: 0,
            })
        }
        SamplingMode::Shots { n, seed } => {
            if n == 0 {
                return Err(Error::InvalidConfig("trajectory count must be positive".into()));
            }
            let mut agree = vec![0u64; later];
            let mut first_counts = [0u64; 2];
            for trajectory in 0..n {
                let mut rng = KeyedStream::new(seed, trajectory);
                let first = sample_branch(&branches, rng.uniform());
                first_counts[first] += 1;
                let mut sigma = branches[first].state.clone().expect("sampled branch has support");
                for slot in agree.iter_mut() {
                    let next = measure_photon(&passage.run_with_fresh_photon(&sigma)?, setting.basis)?;
                    let outcome = sample_branch(&next, rng.uniform());
                    if outcome == first {
                        *slot += 1;
                    }
                    sigma = next[outcome].state.clone().expect("sampled branch has support");
                }
            }
            let n_f = n as f64;
            Ok(PhotonStringStats {
                first_outcome: first_counts.map(|c| c as f64 / n_f),
                agreement: agree.iter().map(|&c| c as f64 / n_f).collect(),
                trajectories: n,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftRow {
    pub tau_total: f64,
    pub extracted: f64,
}

/// Extracted coefficient under spin relaxation as the probe passage time
/// grows. Each total is split evenly over the three intervals.
pub fn relaxation_tomography_drift(
    rho_qds: &DensityOperator,
    setting: &TomographySetting,
    gamma1: f64,
    tau_totals: &[f64],
) -> Result<Vec<DriftRow>> {
    if gamma1.is_nan() || gamma1 <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "relaxation rate must be positive, got {gamma1}"
        )));
    }
    setting.validate()?;
    let noise = NoiseModel::relaxation(gamma1, 0.0);
    tau_totals
        .iter()
        .map(|&tau_total| {
            let third = tau_total / 3.0;
            let channel = ProbeChannel::new(&noise, [third; 3])?;
            let extracted = extract_coefficient(channel.setting_probabilities(rho_qds, setting)?);
            Ok(DriftRow { tau_total, extracted })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoostParams {
    /// Photons sent after the entangling photon.
    pub n_photons: usize,
    /// Free evolution between consecutive photons.
    pub delay: f64,
    pub trajectories: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoostTrajectory {
    /// Outcomes of the entangling photon and every later photon.
    pub outcomes: Vec<Outcome>,
    /// Concurrence of the conditional QD state after each photon.
    pub concurrence: Vec<f64>,
}

impl BoostTrajectory {
    /// Length of the leading run of Ψ outcomes.
    pub fn psi_prefix(&self) -> usize {
        self.outcomes.iter().take_while(|&&o| o == Outcome::Psi).count()
    }
}

/// Series indexed by photon number, entry 0 being the entangling photon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoostStats {
    /// Time since the entangling photon was measured.
    pub elapsed: Vec<f64>,
    /// Probability that every photon up to this one gave Ψ.
    pub all_psi_probability: Vec<f64>,
    /// Concurrence of the QD state conditioned on an all-Ψ record.
    pub conditional_concurrence: Vec<f64>,
    /// Concurrence of the first Ψ state left to evolve with no further
    /// photons for the same elapsed time.
    pub unconditional_concurrence: Vec<f64>,
    /// Fraction of sampled trajectories whose record is all Ψ so far.
    pub empirical_all_psi_fraction: Vec<f64>,
    pub trajectories: Vec<BoostTrajectory>,
}

/// Repeated inject-evolve-measure cycles under spin relaxation. Each later
/// photon follows the entangling photon's path and timings, separated by
/// `delay` of free evolution.
pub fn entanglement_boost_experiment(config: &ProtocolConfig, params: &BoostParams) -> Result<BoostStats> {
    if !matches!(config.noise.kind, NoiseKind::Relaxation { .. }) {
        return Err(Error::UnsupportedNoise("boosting is defined for spin relaxation"));
    }
    if params.n_photons < 1 {
        return Err(Error::InvalidConfig("need at least one photon after the first".into()));
    }
    if params.delay.is_nan() || params.delay < 0.0 {
        return Err(Error::NegativeTime(params.delay));
    }
    let ensemble = run_entanglement(config)?;
    let t = &config.timings;
    let passage = PhotonPassage::new(&config.noise, [t.t1, t.t2, t.t3], config.phi, true, true)?;
    let qd_liouvillian = build_liouvillian(&config.noise, false);
    let wait = qd_liouvillian.propagator(params.delay)?;
    let cycle = params.delay + t.total_first();

    let step = |sigma: &DensityOperator| -> Result<[Branch; 2]> {
        let joint = passage.run_with_fresh_photon(&wait.apply(sigma)?)?;
        measure_photon(&joint, crate::state::PolarizationBasis::Linear)
    };

    let len = params.n_photons + 1;
    let elapsed: Vec<f64> = (0..len).map(|j| j as f64 * cycle).collect();

    let mut all_psi_probability = vec![ensemble.p_psi];
    let mut conditional_concurrence = vec![concurrence(&ensemble.rho_psi)];
    let mut sigma = Some(ensemble.rho_psi.clone());
    for _ in 1..len {
        let prob = *all_psi_probability.last().unwrap();
        let (p, next) = match &sigma {
            Some(s) => {
                let [_, psi] = step(s)?;
                (psi.probability, psi.state)
            }
            None => (0.0, None),
        };
        all_psi_probability.push(prob * p);
        conditional_concurrence.push(next.as_ref().map_or(0.0, concurrence));
        sigma = next;
    }

    let unconditional_concurrence = elapsed
        .iter()
        .map(|&e| Ok(concurrence(&qd_liouvillian.propagator(e)?.apply(&ensemble.rho_psi)?)))
        .collect::<Result<Vec<f64>>>()?;

    let first = [
        Branch {
            probability: ensemble.p_phi,
            state: Some(ensemble.rho_phi.clone()),
        },
        Branch {
            probability: ensemble.p_psi,
            state: Some(ensemble.rho_psi.clone()),
        },
    ];
    let mut trajectories = Vec::with_capacity(params.trajectories as usize);
    let mut all_psi_counts = vec![0u64; len];
    for index in 0..params.trajectories {
        let mut rng = KeyedStream::new(params.seed, index);
        let mut outcomes = Vec::with_capacity(len);
        let mut conc = Vec::with_capacity(len);
        let mut branches = first.clone();
        for _ in 0..len {
            let k = sample_branch(&branches, rng.uniform());
            let state = branches[k].state.clone().expect("sampled branch has support");
            outcomes.push(if k == 0 { Outcome::Phi } else { Outcome::Psi });
            conc.push(concurrence(&state));
            if outcomes.len() < len {
                branches = step(&state)?;
            }
        }
        let trajectory = BoostTrajectory {
            outcomes,
            concurrence: conc,
        };
        for count in all_psi_counts.iter_mut().take(trajectory.psi_prefix()) {
            *count += 1;
        }
        trajectories.push(trajectory);
    }
    let empirical_all_psi_fraction = all_psi_counts
        .iter()
        .map(|&c| {
            if params.trajectories == 0 {
                0.0
            } else {
                c as f64 / params.trajectories as f64
            }
        })
        .collect();

    Ok(BoostStats {
        elapsed,
        all_psi_probability,
        conditional_concurrence,
        unconditional_concurrence,
        empirical_all_psi_fraction,
        trajectories,
    })
}
