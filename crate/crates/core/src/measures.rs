//! Pauli-basis coefficients, entanglement measures and state distances for
//! two-qubit states.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, hermitian_eigen, hermitian_eigenvalues, hermitian_map, pauli, re, CMatrix, CVector};
use crate::state::DensityOperator;

/// Imaginary part above which a Pauli expectation signals a non-Hermitian
/// input.
pub const HS_IMAG_TOL: f64 = 1e-10;

/// The 4×4 real array `α_ij = Tr(ρ σ_i ⊗ σ_j)`, indices 0..4 ↔ (1, x, y, z).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub alpha: [[f64; 4]; 4],
}

impl CorrelationMatrix {
    /// Coefficients of the maximally mixed state.
    pub fn identity_only() -> Self {
        let mut alpha = [[0.0; 4]; 4];
        alpha[0][0] = 1.0;
        Self { alpha }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.alpha[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.alpha[i][j] = value;
    }

    /// `(1/4) Σ α_ij σ_i ⊗ σ_j`.
    pub fn to_operator(&self) -> CMatrix {
        let mut m = CMatrix::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                if self.alpha[i][j] != 0.0 {
                    m += linalg::tensor(&pauli(i), &pauli(j)) * re(self.alpha[i][j] / 4.0);
                }
            }
        }
        m
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.alpha
            .iter()
            .flatten()
            .zip(other.alpha.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub fn pauli_label(index: usize) -> char {
    ['0', 'x', 'y', 'z'][index]
}

pub fn hs_coefficients(rho: &DensityOperator) -> Result<CorrelationMatrix> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.dim(),
        });
    }
    let mut alpha = [[0.0; 4]; 4];
    for (i, row) in alpha.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            let value = rho.expectation(&linalg::tensor(&pauli(i), &pauli(j)));
            if value.im.abs() > HS_IMAG_TOL {
                return Err(Error::NonHermitian { imag: value.im });
            }
            *slot = value.re;
        }
    }
    Ok(CorrelationMatrix { alpha })
}

/// Eigenvalues of ρ below this are treated as rounding noise in
/// [`concurrence`]; the square roots taken there would otherwise turn
/// 1e-17 noise into 1e-9 errors.
pub const SPECTRUM_FLOOR: f64 = 1e-14;

/// Wootters concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)`.
///
/// The `λ` (square roots of the spectrum of `ρ ρ̃`) are taken as the
/// singular values of `τ = Aᵀ (σy ⊗ σy) A`, where `ρ = A A†` with the
/// columns of `A` the eigenvectors scaled by `√p`. `τ τ†` is similar to
/// `ρ ρ̃`, so no non-Hermitian eigenproblem or matrix square root is needed.
pub fn concurrence(rho: &DensityOperator) -> f64 {
    assert_eq!(rho.dim(), 4, "concurrence is defined for two qubits");
    let (values, vectors) = hermitian_eigen(rho.matrix());
    let kept: Vec<usize> = (0..4).filter(|&k| values[k] > SPECTRUM_FLOOR).collect();
    if kept.is_empty() {
        return 0.0;
    }
    let mut factor = CMatrix::zeros(4, kept.len());
    for (col, &k) in kept.iter().enumerate() {
        factor.set_column(col, &(vectors.column(k) * re(values[k].sqrt())));
    }
    let yy = linalg::tensor(&pauli(2), &pauli(2));
    let tau = factor.transpose() * yy * &factor;
    let mut lambdas: Vec<f64> = tau.singular_values().iter().copied().collect();
    lambdas.resize(4, 0.0);
    lambdas.sort_by(|a, b| b.total_cmp(a));
    (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0)
}

fn binary_entropy(x: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    term(x) + term(1.0 - x)
}

/// Entanglement of formation as a function of the concurrence.
pub fn entanglement_of_formation(concurrence: f64) -> Result<f64> {
    const SLACK: f64 = 1e-12;
    if !(-SLACK..=1.0 + SLACK).contains(&concurrence) || concurrence.is_nan() {
        return Err(Error::Domain(concurrence));
    }
    let c = concurrence.clamp(0.0, 1.0);
    let x = 0.5 * (1.0 + (1.0 - c * c).sqrt());
    Ok(binary_entropy(x))
}

/// `√⟨ψ|ρ|ψ⟩`. Note the square root: some texts call the bare overlap the
/// fidelity.
pub fn state_fidelity(rho: &DensityOperator, target: &CVector) -> f64 {
    assert_eq!(target.len(), rho.dim());
    let overlap = target.dotc(&(rho.matrix() * target)).re;
    overlap.max(0.0).sqrt()
}

/// Uhlmann fidelity `(Tr √(√ρ σ √ρ))²` between two mixed states, clamped
/// to [0, 1].
pub fn uhlmann_fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> f64 {
    let sqrt_rho = hermitian_map(rho.matrix(), |x| x.max(0.0).sqrt());
    let mut inner = &sqrt_rho * sigma.matrix() * &sqrt_rho;
    inner = (&inner + inner.adjoint()) * re(0.5);
    let root_trace: f64 = hermitian_eigenvalues(&inner)
        .into_iter()
        .map(|x| x.max(0.0).sqrt())
        .sum();
    (root_trace * root_trace).min(1.0)
}

/// `½ ‖ρ − σ‖₁`.
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> f64 {
    let diff = rho.matrix() - sigma.matrix();
    0.5 * hermitian_eigenvalues(&diff).iter().map(|x| x.abs()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::bell;

    fn pure(v: CVector) -> DensityOperator {
        DensityOperator::from_pure(&v).unwrap()
    }

    #[test]
    fn maximally_mixed_coefficients() {
        let a = hs_coefficients(&DensityOperator::maximally_mixed(4)).unwrap();
        assert!(a.max_abs_diff(&CorrelationMatrix::identity_only()) < 1e-15);
    }

    #[test]
    fn psi_plus_coefficients() {
        let a = hs_coefficients(&pure(bell::psi_plus())).unwrap();
        assert!((a.get(1, 1) - 1.0).abs() < 1e-14);
        assert!((a.get(2, 2) - 1.0).abs() < 1e-14);
        assert!((a.get(3, 3) + 1.0).abs() < 1e-14);
        assert!(a.get(3, 0).abs() < 1e-14 && a.get(0, 3).abs() < 1e-14);
    }

    #[test]
    fn phi_minus_coefficients() {
        let a = hs_coefficients(&pure(bell::phi_minus())).unwrap();
        assert!((a.get(3, 3) - 1.0).abs() < 1e-14);
        assert!((a.get(1, 1) + 1.0).abs() < 1e-14);
        assert!((a.get(2, 2) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn hs_rejects_non_hermitian() {
        let mut m = CMatrix::identity(4, 4) * re(0.25);
        m[(0, 1)] = re(0.2);
        let rho = DensityOperator::from_matrix_unchecked(m).unwrap();
        assert!(matches!(hs_coefficients(&rho), Err(Error::NonHermitian { .. })));
    }

    #[test]
    fn concurrence_extremes() {
        assert!((concurrence(&pure(bell::psi_plus())) - 1.0).abs() < 1e-12);
        assert!(concurrence(&DensityOperator::maximally_mixed(4)) < 1e-12);
    }

    #[test]
    fn eof_endpoints_and_domain() {
        assert_eq!(entanglement_of_formation(1.0).unwrap(), 1.0);
        assert_eq!(entanglement_of_formation(0.0).unwrap(), 0.0);
        assert!(entanglement_of_formation(1.0 + 1e-13).is_ok());
        assert!(entanglement_of_formation(1.1).is_err());
        assert!(entanglement_of_formation(-0.01).is_err());
        assert!(entanglement_of_formation(f64::NAN).is_err());
    }

    #[test]
    fn fidelity_examples() {
        let psi = bell::psi_plus();
        assert!((state_fidelity(&pure(psi.clone()), &psi) - 1.0).abs() < 1e-14);
        assert!((state_fidelity(&DensityOperator::maximally_mixed(4), &psi) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn uhlmann_and_trace_distance_on_orthogonal_states() {
        let a = pure(bell::psi_plus());
        let b = pure(bell::phi_minus());
        assert!(uhlmann_fidelity(&a, &b) < 1e-12);
        assert!((uhlmann_fidelity(&a, &a) - 1.0).abs() < 1e-10);
        assert!((trace_distance(&a, &b) - 1.0).abs() < 1e-12);
    }
}
