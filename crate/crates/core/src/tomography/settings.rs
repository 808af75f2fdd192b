use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{Rotation, RotationSetting};
use crate::measures::pauli_label;
use crate::state::PolarizationBasis;

/// Which dots the probe photon interacts with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pattern {
    Both,
    Qd1Only,
    Qd2Only,
}

impl Pattern {
    pub fn interacts(self) -> (bool, bool) {
        match self {
            Pattern::Both => (true, true),
            Pattern::Qd1Only => (true, false),
            Pattern::Qd2Only => (false, true),
        }
    }

    pub fn basis(self) -> PolarizationBasis {
        match self {
            Pattern::Both => PolarizationBasis::Linear,
            Pattern::Qd1Only | Pattern::Qd2Only => PolarizationBasis::Diagonal,
        }
    }

    /// The coefficient of the rotated state the photon reads out:
    /// `α̃_zz`, `α̃_z0` or `α̃_0z`.
    pub fn readout_index(self) -> (usize, usize) {
        match self {
            Pattern::Both => (3, 3),
            Pattern::Qd1Only => (3, 0),
            Pattern::Qd2Only => (0, 3),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TomographySetting {
    pub rotation: RotationSetting,
    pub pattern: Pattern,
    pub basis: PolarizationBasis,
    /// Coefficient `(i, j)` of the unrotated state this setting measures.
    pub target: (usize, usize),
}

impl TomographySetting {
    pub fn new(rotation: RotationSetting, pattern: Pattern, target: (usize, usize)) -> Self {
        Self {
            rotation,
            pattern,
            basis: pattern.basis(),
            target,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.basis != self.pattern.basis() {
            return Err(Error::InvalidConfig(format!(
                "pattern {:?} is read out in the {:?} basis, not {:?}",
                self.pattern,
                self.pattern.basis(),
                self.basis
            )));
        }
        if self.target.0 > 3 || self.target.1 > 3 || self.target == (0, 0) {
            return Err(Error::InvalidConfig(format!("bad target {:?}", self.target)));
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        let pattern = match self.pattern {
            Pattern::Both => "both",
            Pattern::Qd1Only => "qd1",
            Pattern::Qd2Only => "qd2",
        };
        format!(
            "{}{}/{pattern}->a{}{}",
            self.rotation.qd1.label(),
            self.rotation.qd2.label(),
            pauli_label(self.target.0),
            pauli_label(self.target.1)
        )
    }
}

use Rotation::{Id, X, Y};

/// Rotation pairs that move `α_ij` (i, j ≠ 0) into the `α̃_zz` slot for a
/// photon interacting with both dots. Every entry has been checked to
/// give `+α_ij`.
pub const CORRELATION_TABLE: [(Rotation, Rotation, (usize, usize)); 9] = [
    (Id, Id, (3, 3)),
    (Id, X, (3, 2)),
    (Id, Y, (3, 1)),
    (X, Id, (2, 3)),
    (Y, Id, (1, 3)),
    (X, Y, (2, 1)),
    (Y, X, (1, 2)),
    (X, X, (2, 2)),
    (Y, Y, (1, 1)),
];

/// Single-dot settings: the photon meets only one dot and is read out in
/// the diagonal basis.
pub const LOCAL_TABLE: [(Pattern, Rotation, (usize, usize)); 6] = [
    (Pattern::Qd1Only, Id, (3, 0)),
    (Pattern::Qd1Only, X, (2, 0)),
    (Pattern::Qd1Only, Y, (1, 0)),
    (Pattern::Qd2Only, Id, (0, 3)),
    (Pattern::Qd2Only, X, (0, 2)),
    (Pattern::Qd2Only, Y, (0, 1)),
];

/// All 15 settings, correlation table first.
pub fn table_settings() -> Vec<TomographySetting> {
    let correlations = CORRELATION_TABLE
        .iter()
        .map(|&(r1, r2, target)| TomographySetting::new(RotationSetting::new(r1, r2), Pattern::Both, target));
    let locals = LOCAL_TABLE.iter().map(|&(pattern, r, target)| {
        let rotation = match pattern {
            Pattern::Qd2Only => RotationSetting::new(Id, r),
            _ => RotationSetting::new(r, Id),
        };
        TomographySetting::new(rotation, pattern, target)
    });
    correlations.chain(locals).collect()
}
