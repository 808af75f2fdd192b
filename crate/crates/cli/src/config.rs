//! JSON run configuration. Times are in units of the noise time (T₂ for
//! dephasing, T₁ for relaxation) and rates in its inverse.

use std::path::{Path, PathBuf};

use anyhow::Context;
use qdent_core::linalg::C64;
use qdent_core::{NoiseModel, ProtocolConfig, ProtocolTimings};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKindConfig {
    NoiseFree,
    PureDephasing,
    Relaxation,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseConfig {
    pub model: NoiseKindConfig,
    /// Γ₂ or Γ₁; 1 means times are measured in T₂ or T₁.
    pub rate: f64,
    pub epsilon: f64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self {
            model: NoiseKindConfig::NoiseFree,
            rate: 1.0,
            epsilon: 0.0,
        }
    }
}

impl NoiseConfig {
    pub fn model(&self) -> NoiseModel {
        match self.model {
            NoiseKindConfig::NoiseFree => NoiseModel {
                epsilon: self.epsilon,
                ..NoiseModel::noise_free()
            },
            NoiseKindConfig::PureDephasing => NoiseModel::dephasing(self.rate, self.epsilon),
            NoiseKindConfig::Relaxation => NoiseModel::relaxation(self.rate, self.epsilon),
        }
    }
}

/// Spin amplitudes `α|↑⟩ + β|↓⟩` as `[re, im]` pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinConfig {
    pub alpha: [f64; 2],
    pub beta: [f64; 2],
}

impl Default for SpinConfig {
    fn default() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            alpha: [s, 0.0],
            beta: [s, 0.0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TimingConfig {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub tau1: f64,
    pub tau2: f64,
    pub tau3: f64,
}

/// `points` evenly spaced values from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl GridConfig {
    pub fn values(&self) -> CliResult<Vec<f64>> {
        if self.points == 0 || !self.start.is_finite() || !self.stop.is_finite() {
            return Err(CliError::config(anyhow::anyhow!("invalid grid {self:?}")));
        }
        if self.points == 1 {
            return Ok(vec![self.start]);
        }
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        Ok((0..self.points)
            .map(|k| {
                if k + 1 == self.points {
                    self.stop
                } else {
                    self.start + step * k as f64
                }
            })
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Figure1Config {
    pub epsilon: f64,
    pub grid: GridConfig,
}

impl Default for Figure1Config {
    fn default() -> Self {
        Self {
            epsilon: 10.0,
            grid: GridConfig {
                start: 0.0,
                stop: 3.0,
                points: 50,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateSource {
    PsiPlus,
    PhiMinus,
    /// The Ψ-conditioned state produced by the entangling photon.
    EntangledPsi,
    EntangledPhi,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TomographyConfig {
    pub source: StateSource,
    /// Shots per setting; absent means exact probabilities.
    pub shots: Option<u64>,
    /// Extra probe timings `[τ₁, τ₂, τ₃]` to repeat the exact tomography at.
    pub tau_sweep: Vec<[f64; 3]>,
}

impl Default for TomographyConfig {
    fn default() -> Self {
        Self {
            source: StateSource::EntangledPsi,
            shots: None,
            tau_sweep: vec![[0.0, 0.0, 0.0], [1.0, 1.0, 1.0], [3.0, 0.0, 0.0]],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoostConfig {
    pub n_photons: usize,
    pub delay: f64,
    pub trajectories: u64,
}

impl Default for BoostConfig {
    fn default() -> Self {
        Self {
            n_photons: 10,
            delay: 0.1,
            trajectories: 50,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RelaxationConfig {
    /// Grid used for both t₁ and t₂ of the outcome-probability sweep.
    pub probability_grid: GridConfig,
    /// Total probe passage times for the coefficient drift table.
    pub drift_grid: GridConfig,
    pub boost: BoostConfig,
}

impl Default for RelaxationConfig {
    fn default() -> Self {
        Self {
            probability_grid: GridConfig {
                start: 0.0,
                stop: 3.0,
                points: 20,
            },
            drift_grid: GridConfig {
                start: 0.0,
                stop: 5.0,
                points: 51,
            },
            boost: BoostConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub qd1: SpinConfig,
    pub qd2: SpinConfig,
    pub phi: f64,
    pub noise: NoiseConfig,
    pub timings: TimingConfig,
    pub figure1: Figure1Config,
    pub tomography: TomographyConfig,
    pub relaxation: RelaxationConfig,
    pub seed: u64,
    pub output: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            qd1: SpinConfig::default(),
            qd2: SpinConfig::default(),
            phi: std::f64::consts::FRAC_PI_2,
            noise: NoiseConfig::default(),
            timings: TimingConfig::default(),
            figure1: Figure1Config::default(),
            tomography: TomographyConfig::default(),
            relaxation: RelaxationConfig::default(),
            seed: 0,
            output: OutputConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text)
            .context("malformed configuration")
            .map_err(CliError::config)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read configuration {}", path.display()))
            .map_err(CliError::config)?;
        Self::from_json(&text)
    }

    /// Pretty-printed JSON with every field present.
    pub fn canonical_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("configuration serializes");
        text.push('\n');
        text
    }

    pub fn timings(&self) -> ProtocolTimings {
        let t = &self.timings;
        ProtocolTimings {
            t1: t.t1,
            t2: t.t2,
            t3: t.t3,
            tau1: t.tau1,
            tau2: t.tau2,
            tau3: t.tau3,
        }
    }

    pub fn protocol(&self) -> CliResult<ProtocolConfig> {
        let c = |v: [f64; 2]| C64::new(v[0], v[1]);
        let config = ProtocolConfig {
            alpha1: c(self.qd1.alpha),
            beta1: c(self.qd1.beta),
            alpha2: c(self.qd2.alpha),
            beta2: c(self.qd2.beta),
            phi: self.phi,
            noise: self.noise.model(),
            timings: self.timings(),
        };
        config.validate()?;
        Ok(config)
    }
}
