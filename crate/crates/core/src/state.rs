//! Density operators, the fixed photon ⊗ QD1 ⊗ QD2 layout, and photon
//! polarisation bases.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, hermitian_eigenvalues, hermiticity_defect, projector, re, CMatrix, CVector, C64};

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const POSITIVITY_TOL: f64 = -1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subsystem {
    Photon,
    Qd1,
    Qd2,
}

/// Subsystem order (photon, QD1, QD2), each two-dimensional. Photon basis
/// is (|R⟩, |L⟩) and spin basis (|↑⟩, |↓⟩), so the tensor index
/// `(p, s1, s2)` sits at flat position `4p + 2s1 + s2`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SystemLayout;

impl SystemLayout {
    pub const ORDER: [Subsystem; 3] = [Subsystem::Photon, Subsystem::Qd1, Subsystem::Qd2];
    pub const DIMS: [usize; 3] = [2, 2, 2];
    pub const FULL_DIM: usize = 8;

    pub const R: usize = 0;
    pub const L: usize = 1;
    pub const UP: usize = 0;
    pub const DOWN: usize = 1;

    pub fn flat_index(photon: usize, s1: usize, s2: usize) -> usize {
        debug_assert!(photon < 2 && s1 < 2 && s2 < 2);
        4 * photon + 2 * s1 + s2
    }

    pub fn split_index(flat: usize) -> (usize, usize, usize) {
        debug_assert!(flat < Self::FULL_DIM);
        (flat / 4, (flat / 2) % 2, flat % 2)
    }

    /// Subsystems present in a state of the given dimension.
    pub fn subsystems_for_dim(dim: usize) -> Option<&'static [Subsystem]> {
        match dim {
            8 => Some(&Self::ORDER),
            4 => Some(&Self::ORDER[1..]),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let rho = Self::from_matrix_unchecked(matrix)?;
        rho.validate()?;
        Ok(rho)
    }

    /// Only the shape is checked. Used for outputs of maps already known to
    /// be CPTP; the invariants are exercised in tests instead.
    pub fn from_matrix_unchecked(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidState(format!(
                "matrix is {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if !matches!(matrix.nrows(), 1 | 2 | 4 | 8) {
            return Err(Error::InvalidState(format!("unsupported dimension {}", matrix.nrows())));
        }
        Ok(Self { matrix })
    }

    pub fn from_pure(state: &CVector) -> Result<Self> {
        let norm = state.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!("ket has norm {norm}")));
        }
        Self::from_matrix_unchecked(projector(state))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim, dim) * re(1.0 / dim as f64),
        }
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Self::from_matrix_unchecked(linalg::tensor(&self.matrix, &other.matrix))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn expectation(&self, op: &CMatrix) -> C64 {
        (&self.matrix * op).trace()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn validate(&self) -> Result<()> {
        let defect = hermiticity_defect(&self.matrix);
        if defect > HERMITICITY_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (defect {defect:e})")));
        }
        let tr = self.trace();
        if (tr - re(1.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}")));
        }
        let min = self.min_eigenvalue();
        if min < POSITIVITY_TOL {
            return Err(Error::InvalidState(format!("smallest eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// Conjugation by a unitary, `U ρ U†`.
    pub fn conjugate(&self, unitary: &CMatrix) -> Self {
        assert_eq!(unitary.nrows(), self.dim());
        Self {
            matrix: unitary * &self.matrix * unitary.adjoint(),
        }
    }

    /// Reduced state on `keep`. Valid for the 8-dimensional photon-QD-QD
    /// state or the 4-dimensional QD-QD state.
    pub fn partial_trace(&self, keep: &[Subsystem]) -> Result<Self> {
        let present = SystemLayout::subsystems_for_dim(self.dim())
            .ok_or_else(|| Error::InvalidKeepSet(format!("no subsystem layout for dimension {}", self.dim())))?;
        if keep.is_empty() {
            return Err(Error::InvalidKeepSet("nothing to keep".into()));
        }
        let mut positions = Vec::with_capacity(keep.len());
        for s in keep {
            let pos = present
                .iter()
                .position(|p| p == s)
                .ok_or_else(|| Error::InvalidKeepSet(format!("{s:?} absent from a {}-dim state", self.dim())))?;
            positions.push(pos);
        }
        let mut sorted = positions.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != positions.len() {
            return Err(Error::InvalidKeepSet("duplicate subsystem".into()));
        }
        if sorted != positions {
            return Err(Error::InvalidKeepSet("subsystems must follow layout order".into()));
        }
        let dims = vec![2; present.len()];
        Ok(Self {
            matrix: linalg::partial_trace_dims(&self.matrix, &dims, &positions),
        })
    }
}

impl AsRef<CMatrix> for DensityOperator {
    fn as_ref(&self) -> &CMatrix {
        &self.matrix
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolarizationBasis {
    /// (|H⟩, |V⟩) with |H⟩ = (|R⟩ − |L⟩)/√2 and |V⟩ = (|R⟩ + |L⟩)/√2.
    Linear,
    /// (|+45°⟩, |−45°⟩) with |±45°⟩ = (|R⟩ ± i|L⟩)/√2.
    Diagonal,
}

impl PolarizationBasis {
    /// The two basis kets in order (first, second).
    pub fn kets(self) -> [CVector; 2] {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            Self::Linear => [linalg::ket(&[re(s), re(-s)]), linalg::ket(&[re(s), re(s)])],
            Self::Diagonal => [
                linalg::ket(&[re(s), C64::new(0.0, s)]),
                linalg::ket(&[re(s), C64::new(0.0, -s)]),
            ],
        }
    }

    pub fn projectors(self) -> [CMatrix; 2] {
        self.kets().map(|k| projector(&k))
    }
}

/// |H⟩
pub fn horizontal() -> CVector {
    PolarizationBasis::Linear.kets()[0].clone()
}

/// |V⟩
pub fn vertical() -> CVector {
    PolarizationBasis::Linear.kets()[1].clone()
}

/// Single-spin state α|↑⟩ + β|↓⟩.
pub fn spin_state(alpha: C64, beta: C64) -> CVector {
    linalg::ket(&[alpha, beta])
}

/// Two-qubit Bell states in the (↑↑, ↑↓, ↓↑, ↓↓) ordering.
pub mod bell {
    use super::*;

    fn build(coeffs: [f64; 4]) -> CVector {
        CVector::from_iterator(4, coeffs.iter().map(|&c| re(c * std::f64::consts::FRAC_1_SQRT_2)))
    }

    pub fn phi_plus() -> CVector {
        build([1.0, 0.0, 0.0, 1.0])
    }

    pub fn phi_minus() -> CVector {
        build([1.0, 0.0, 0.0, -1.0])
    }

    pub fn psi_plus() -> CVector {
        build([0.0, 1.0, 1.0, 0.0])
    }

    pub fn psi_minus() -> CVector {
        build([0.0, 1.0, -1.0, 0.0])
    }
}
