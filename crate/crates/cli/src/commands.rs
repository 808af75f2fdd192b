//! Subcommand bodies. Each returns the text to emit.

use anyhow::anyhow;
use qdent_core::protocol::VERIFY_TOLERANCE;
use qdent_core::state::bell;
use qdent_core::tomography::{
    entanglement_boost_experiment, full_tomography, reconstruct_density, relaxation_tomography_drift, BoostParams,
    BoostStats, DriftRow, Pattern, SamplingMode, ShotRecord, TomographySetting,
};
use qdent_core::{
    concurrence, concurrence_closed_form, entanglement_of_formation, fidelity_closed_form, figure1_sweep,
    relaxation_outcome_probability, run_entanglement, state_fidelity, trace_distance, uhlmann_fidelity,
    DensityOperator, NoiseKind, Outcome, ProtocolConfig, ProtocolTimings, RotationSetting,
};
use serde::Serialize;

use crate::config::{OutputFormat, RunConfig, StateSource};
use crate::error::{CliError, CliResult};
use crate::output::{csv, to_json, ComplexMatrix};

/// Command-line overrides shared by all subcommands.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub format: Option<OutputFormat>,
    pub verify: bool,
    pub shots: Option<u64>,
    pub seed: Option<u64>,
}

impl Overrides {
    fn format(&self, config: &RunConfig, default: OutputFormat) -> OutputFormat {
        self.format.or(config.output.format).unwrap_or(default)
    }

    fn seed(&self, config: &RunConfig) -> u64 {
        self.seed.unwrap_or(config.seed)
    }
}

fn json_only(format: OutputFormat, command: &str) -> CliResult<()> {
    match format {
        OutputFormat::Json => Ok(()),
        OutputFormat::Csv => Err(CliError::config(anyhow!("{command} only emits JSON"))),
    }
}

#[derive(Serialize)]
struct OutcomeReport {
    probability: f64,
    rho: ComplexMatrix,
    fidelity: f64,
    concurrence: f64,
    entanglement_of_formation: f64,
}

#[derive(Serialize)]
struct EntangleReport {
    t_total: f64,
    p_phi: f64,
    p_psi: f64,
    phi: OutcomeReport,
    psi: OutcomeReport,
}

pub fn entangle(config: &RunConfig, overrides: &Overrides) -> CliResult<String> {
    json_only(overrides.format(config, OutputFormat::Json), "entangle")?;
    let protocol = config.protocol()?;
    let ens = run_entanglement(&protocol)?;
    let outcome = |o: Outcome| -> CliResult<OutcomeReport> {
        let rho = ens.state(o);
        let c = concurrence(rho);
        Ok(OutcomeReport {
            probability: ens.probability(o),
            rho: rho.matrix().into(),
            fidelity: state_fidelity(rho, &o.ideal_state()),
            concurrence: c,
            entanglement_of_formation: entanglement_of_formation(c)?,
        })
    };
    let report = EntangleReport {
        t_total: protocol.timings.total_first(),
        p_phi: ens.p_phi,
        p_psi: ens.p_psi,
        phi: outcome(Outcome::Phi)?,
        psi: outcome(Outcome::Psi)?,
    };
    if overrides.verify {
        verify_entangle(&protocol, &report)?;
    }
    to_json(&report)
}

fn is_balanced(protocol: &ProtocolConfig) -> bool {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [protocol.alpha1, protocol.beta1, protocol.alpha2, protocol.beta2]
        .iter()
        .all(|z| (z.re - s).abs() < 1e-12 && z.im.abs() < 1e-12)
        && (protocol.phi - std::f64::consts::FRAC_PI_2).abs() < 1e-12
}

fn verify_entangle(protocol: &ProtocolConfig, report: &EntangleReport) -> CliResult<()> {
    if !is_balanced(protocol) {
        return Err(CliError::config(anyhow!(
            "--verify needs balanced spins and phi = pi/2"
        )));
    }
    let t = protocol.timings.total_first();
    let noise = &protocol.noise;
    let deviation = match noise.kind {
        NoiseKind::PureDephasing { gamma2 } => {
            let c = concurrence_closed_form(t, gamma2);
            [
                report.phi.fidelity - fidelity_closed_form(t, noise, Outcome::Phi)?,
                report.psi.fidelity - fidelity_closed_form(t, noise, Outcome::Psi)?,
                report.phi.concurrence - c,
                report.psi.concurrence - c,
                report.p_psi - 0.5,
            ]
            .iter()
            .fold(0.0f64, |m, d| m.max(d.abs()))
        }
        NoiseKind::Relaxation { gamma1 } => {
            let timings = &protocol.timings;
            (report.p_psi - relaxation_outcome_probability(timings.t1, timings.t2, gamma1).0).abs()
        }
        NoiseKind::NoiseFree => (report.psi.fidelity - 1.0).abs().max((report.phi.fidelity - 1.0).abs()),
    };
    check_deviation("entangle", deviation)
}

fn check_deviation(what: &str, deviation: f64) -> CliResult<()> {
    if deviation > VERIFY_TOLERANCE {
        Err(CliError::verification(anyhow!(
            "{what}: pipeline deviates from closed form by {deviation:e} (tolerance {VERIFY_TOLERANCE:e})"
        )))
    } else {
        Ok(())
    }
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct Figure1JsonRow {
    t_over_T2: f64,
    E: f64,
    F_psi: f64,
    F_phi: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    deviation: Option<f64>,
}

pub fn figure1(config: &RunConfig, overrides: &Overrides) -> CliResult<String> {
    let grid = config.figure1.grid.values()?;
    let rows = figure1_sweep(1.0, config.figure1.epsilon, &grid, overrides.verify)?;
    if overrides.verify {
        let worst = rows.iter().filter_map(|r| r.deviation).fold(0.0, f64::max);
        check_deviation("figure1", worst)?;
    }
    match overrides.format(config, OutputFormat::Csv) {
        OutputFormat::Csv => Ok(csv(
            &["t_over_T2", "E", "F_psi", "F_phi"],
            rows.iter().map(|r| vec![r.t, r.entanglement, r.f_psi, r.f_phi]),
        )),
        OutputFormat::Json => to_json(
            &rows
                .iter()
                .map(|r| Figure1JsonRow {
                    t_over_T2: r.t,
                    E: r.entanglement,
                    F_psi: r.f_psi,
                    F_phi: r.f_phi,
                    deviation: r.deviation,
                })
                .collect::<Vec<_>>(),
        ),
    }
}

#[derive(Serialize)]
struct SweepEntry {
    taus: [f64; 3],
    alpha: [[f64; 4]; 4],
}

#[derive(Serialize)]
struct TomographyOutput {
    source: StateSource,
    mode: SamplingMode,
    taus: [f64; 3],
    alpha: [[f64; 4]; 4],
    rho_true: ComplexMatrix,
    rho_reconstructed: ComplexMatrix,
    physicalized: bool,
    fidelity: f64,
    trace_distance: f64,
    records: Vec<ShotRecord>,
    tau_sweep: Vec<SweepEntry>,
    tau_sweep_max_spread: f64,
}

fn source_state(config: &RunConfig) -> CliResult<DensityOperator> {
    let pure = |v| DensityOperator::from_pure(&v).map_err(CliError::from);
    match config.tomography.source {
        StateSource::PsiPlus => pure(bell::psi_plus()),
        StateSource::PhiMinus => pure(bell::phi_minus()),
        StateSource::EntangledPsi => Ok(run_entanglement(&config.protocol()?)?.rho_psi),
        StateSource::EntangledPhi => Ok(run_entanglement(&config.protocol()?)?.rho_phi),
    }
}

pub fn tomography(config: &RunConfig, overrides: &Overrides) -> CliResult<String> {
    json_only(overrides.format(config, OutputFormat::Json), "tomography")?;
    let protocol = config.protocol()?;
    let noise = protocol.noise;
    let taus = protocol.timings.taus();
    let truth = source_state(config)?;
    let mode = match overrides.shots.or(config.tomography.shots) {
        Some(n) => SamplingMode::Shots {
            n,
            seed: overrides.seed(config),
        },
        None => SamplingMode::Exact,
    };
    let report = full_tomography(&truth, &noise, taus, mode)?;
    let (rebuilt, physicalized) = match reconstruct_density(&report.alpha, false) {
        Ok(rho) => (rho, false),
        Err(qdent_core::Error::NonPhysical { .. }) => (reconstruct_density(&report.alpha, true)?, true),
        Err(e) => return Err(e.into()),
    };
    let fidelity = uhlmann_fidelity(&truth, &rebuilt);

    let mut tau_sweep = Vec::new();
    for triple in &config.tomography.tau_sweep {
        let alpha = full_tomography(&truth, &noise, *triple, SamplingMode::Exact)?.alpha;
        tau_sweep.push((*triple, alpha));
    }
    let spread = tau_sweep
        .iter()
        .map(|(_, a)| a.max_abs_diff(&tau_sweep[0].1))
        .fold(0.0, f64::max);

    if let Some(bad) = report.alpha.alpha.iter().flatten().find(|v| v.abs() > 1.0 + 1e-10) {
        return Err(CliError::verification(anyhow!("coefficient {bad} outside [-1, 1]")));
    }
    if overrides.verify && mode == SamplingMode::Exact && fidelity < 1.0 - VERIFY_TOLERANCE {
        return Err(CliError::verification(anyhow!(
            "exact reconstruction fidelity {fidelity} below 1 - 1e-9"
        )));
    }
    to_json(&TomographyOutput {
        source: config.tomography.source,
        mode,
        taus,
        alpha: report.alpha.alpha,
        rho_true: truth.matrix().into(),
        rho_reconstructed: rebuilt.matrix().into(),
        physicalized,
        fidelity,
        trace_distance: trace_distance(&truth, &rebuilt),
        records: report.records,
        tau_sweep: tau_sweep
            .into_iter()
            .map(|(taus, a)| SweepEntry { taus, alpha: a.alpha })
            .collect(),
        tau_sweep_max_spread: spread,
    })
}

#[derive(Serialize)]
struct ProbabilityRow {
    t1: f64,
    t2: f64,
    p_psi: f64,
    p_phi: f64,
    p_psi_closed_form: f64,
}

#[derive(Serialize)]
struct DriftOutput {
    setting: String,
    rows: Vec<DriftRow>,
}

#[derive(Serialize)]
struct RelaxationOutput {
    gamma1: f64,
    outcome_probabilities: Vec<ProbabilityRow>,
    drift: DriftOutput,
    boost: BoostStats,
}

pub fn relaxation(config: &RunConfig, overrides: &Overrides) -> CliResult<String> {
    let protocol = config.protocol()?;
    let NoiseKind::Relaxation { gamma1 } = protocol.noise.kind else {
        return Err(CliError::config(anyhow!("relaxation needs noise model \"relaxation\"")));
    };
    let grid = config.relaxation.probability_grid.values()?;
    let mut rows = Vec::with_capacity(grid.len() * grid.len());
    for &t1 in &grid {
        for &t2 in &grid {
            let mut point = protocol;
            point.timings = ProtocolTimings {
                t1,
                t2,
                ..protocol.timings
            };
            let ens = run_entanglement(&point)?;
            rows.push(ProbabilityRow {
                t1,
                t2,
                p_psi: ens.p_psi,
                p_phi: ens.p_phi,
                p_psi_closed_form: relaxation_outcome_probability(t1, t2, gamma1).0,
            });
        }
    }
    if overrides.verify {
        if !is_balanced(&protocol) {
            return Err(CliError::config(anyhow!(
                "--verify needs balanced spins and phi = pi/2"
            )));
        }
        let worst = rows
            .iter()
            .map(|r| (r.p_psi - r.p_psi_closed_form).abs())
            .fold(0.0, f64::max);
        check_deviation("relaxation", worst)?;
    }

    if overrides.format(config, OutputFormat::Json) == OutputFormat::Csv {
        return Ok(csv(
            &["t1_over_T1", "t2_over_T1", "p_psi", "p_phi", "p_psi_closed_form"],
            rows.iter()
                .map(|r| vec![r.t1, r.t2, r.p_psi, r.p_phi, r.p_psi_closed_form]),
        ));
    }

    let setting = TomographySetting::new(RotationSetting::NONE, Pattern::Both, (3, 3));
    let psi = DensityOperator::from_pure(&bell::psi_plus())?;
    let drift = relaxation_tomography_drift(&psi, &setting, gamma1, &config.relaxation.drift_grid.values()?)?;
    let boost_config = config.relaxation.boost;
    let params = BoostParams {
        n_photons: boost_config.n_photons,
        delay: boost_config.delay,
        trajectories: overrides.shots.unwrap_or(boost_config.trajectories),
        seed: overrides.seed(config),
    };
    let boost = entanglement_boost_experiment(&protocol, &params)?;
    to_json(&RelaxationOutput {
        gamma1,
        outcome_probabilities: rows,
        drift: DriftOutput {
            setting: setting.label(),
            rows: drift,
        },
        boost,
    })
}
