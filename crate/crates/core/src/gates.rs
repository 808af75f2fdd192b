//! Spin-photon Faraday interaction and single-spin rotations.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::linalg::{self, pauli, CMatrix, C64};
use crate::state::SystemLayout;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QdTarget {
    Qd1,
    Qd2,
}

/// `exp[iφ(|L⟩⟨L| ⊗ |↑⟩⟨↑| + |R⟩⟨R| ⊗ |↓⟩⟨↓|)]` on the target dot, identity on
/// the other. Diagonal in the product basis.
pub fn faraday_unitary(phi: f64, target: QdTarget) -> CMatrix {
    let phase = C64::from_polar(1.0, phi);
    let mut u = CMatrix::identity(SystemLayout::FULL_DIM, SystemLayout::FULL_DIM);
    for flat in 0..SystemLayout::FULL_DIM {
        let (p, s1, s2) = SystemLayout::split_index(flat);
        let spin = match target {
            QdTarget::Qd1 => s1,
            QdTarget::Qd2 => s2,
        };
        let coupled =
            (p == SystemLayout::L && spin == SystemLayout::UP) || (p == SystemLayout::R && spin == SystemLayout::DOWN);
        if coupled {
            u[(flat, flat)] = phase;
        }
    }
    u
}

/// `exp[(i/2) θ·σ]` for a single spin.
pub fn spin_rotation(theta: [f64; 3]) -> CMatrix {
    let angle = theta.iter().map(|t| t * t).sum::<f64>().sqrt();
    if angle == 0.0 {
        return linalg::identity(2);
    }
    let half = angle / 2.0;
    let mut generator = CMatrix::zeros(2, 2);
    for (k, t) in theta.iter().enumerate() {
        generator += pauli(k + 1) * linalg::re(t / angle);
    }
    linalg::identity(2) * linalg::re(half.cos()) + generator * linalg::im(half.sin())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rotation {
    #[serde(rename = "I")]
    Id,
    X,
    Y,
}

impl Rotation {
    /// `Id`, `X = exp(−iπσx/4)` or `Y = exp(+iπσy/4)`.
    pub fn matrix(self) -> CMatrix {
        match self {
            Rotation::Id => linalg::identity(2),
            Rotation::X => spin_rotation([-FRAC_PI_2, 0.0, 0.0]),
            Rotation::Y => spin_rotation([0.0, FRAC_PI_2, 0.0]),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Rotation::Id => "I",
            Rotation::X => "X",
            Rotation::Y => "Y",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RotationSetting {
    pub qd1: Rotation,
    pub qd2: Rotation,
}

impl RotationSetting {
    pub const NONE: Self = Self::new(Rotation::Id, Rotation::Id);

    pub const fn new(qd1: Rotation, qd2: Rotation) -> Self {
        Self { qd1, qd2 }
    }

    /// `r1 ⊗ r2` on the QD-QD space.
    pub fn matrix(&self) -> CMatrix {
        linalg::tensor(&self.qd1.matrix(), &self.qd2.matrix())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    #[test]
    fn zero_phase_is_identity() {
        for t in [QdTarget::Qd1, QdTarget::Qd2] {
            assert_eq!(faraday_unitary(0.0, t), CMatrix::identity(8, 8));
        }
    }

    #[test]
    fn faraday_is_unitary() {
        for phi in [0.3, 1.1, -2.7, 5.0] {
            let u = faraday_unitary(phi, QdTarget::Qd2);
            assert!(max_abs_diff(&(&u * u.adjoint()), &CMatrix::identity(8, 8)) < 1e-14);
        }
    }

    #[test]
    fn faraday_phase_placement() {
        let u = faraday_unitary(FRAC_PI_2, QdTarget::Qd1);
        let i = C64::new(0.0, 1.0);
        // (L, ↑, *) and (R, ↓, *) pick up the phase; QD2 is irrelevant
        assert!((u[(SystemLayout::flat_index(1, 0, 0), SystemLayout::flat_index(1, 0, 0))] - i).norm() < 1e-15);
        assert!((u[(SystemLayout::flat_index(1, 0, 1), SystemLayout::flat_index(1, 0, 1))] - i).norm() < 1e-15);
        assert!((u[(SystemLayout::flat_index(0, 1, 0), SystemLayout::flat_index(0, 1, 0))] - i).norm() < 1e-15);
        assert_eq!(
            u[(SystemLayout::flat_index(0, 0, 1), SystemLayout::flat_index(0, 0, 1))],
            linalg::re(1.0)
        );
        assert_eq!(
            u[(SystemLayout::flat_index(1, 1, 0), SystemLayout::flat_index(1, 1, 0))],
            linalg::re(1.0)
        );
    }

    #[test]
    fn rotations_are_unitary() {
        for r in [Rotation::Id, Rotation::X, Rotation::Y] {
            let m = r.matrix();
            assert!(max_abs_diff(&(&m * m.adjoint()), &linalg::identity(2)) < 1e-14);
        }
    }

    #[test]
    fn x_and_y_closed_forms() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let x = CMatrix::from_row_slice(2, 2, &[linalg::re(s), linalg::im(-s), linalg::im(-s), linalg::re(s)]);
        let y = CMatrix::from_row_slice(2, 2, &[linalg::re(s), linalg::re(s), linalg::re(-s), linalg::re(s)]);
        assert!(max_abs_diff(&Rotation::X.matrix(), &x) < 1e-15);
        assert!(max_abs_diff(&Rotation::Y.matrix(), &y) < 1e-15);
    }
}
