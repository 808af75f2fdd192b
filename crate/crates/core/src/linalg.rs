//! Dense complex linear algebra for the 2-, 4- and 8-dimensional spaces used
//! throughout the crate.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

#[inline]
pub fn im(x: f64) -> C64 {
    C64::new(0.0, x)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Pauli matrices indexed 0..4 as (1, x, y, z).
pub fn pauli(index: usize) -> CMatrix {
    let z = re(0.0);
    let o = re(1.0);
    let data = match index {
        0 => [o, z, z, o],
        1 => [z, o, o, z],
        2 => [z, im(-1.0), im(1.0), z],
        3 => [o, z, z, -o],
        _ => panic!("Pauli index {index} out of range"),
    };
    CMatrix::from_row_slice(2, 2, &data)
}

/// σ⁻ = |↓⟩⟨↑| in the (↑, ↓) ordering.
pub fn sigma_minus() -> CMatrix {
    let mut m = CMatrix::zeros(2, 2);
    m[(1, 0)] = re(1.0);
    m
}

/// Kronecker product; the left operand is the slow index.
pub fn tensor(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert!(a.is_square() && b.is_square(), "tensor requires square operands");
    a.kronecker(b)
}

pub fn tensor_all(ops: &[&CMatrix]) -> CMatrix {
    ops.iter().fold(CMatrix::identity(1, 1), |acc, op| tensor(&acc, op))
}

pub fn ket(amplitudes: &[C64]) -> CVector {
    CVector::from_column_slice(amplitudes)
}

pub fn ket_tensor(a: &CVector, b: &CVector) -> CVector {
    a.kronecker(b)
}

pub fn projector(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Largest element of `m - m†`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Applies `f` to the spectrum of a Hermitian matrix.
pub fn hermitian_map(m: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let (values, vectors) = hermitian_eigen(m);
    let diag = CMatrix::from_diagonal(&CVector::from_iterator(values.len(), values.iter().map(|&x| re(f(x)))));
    &vectors * diag * vectors.adjoint()
}

/// Partial trace of an operator on a tensor product space with subsystem
/// dimensions `dims` (first entry slowest), keeping the subsystems whose
/// indices appear in `keep` (must be strictly increasing).
pub fn partial_trace_dims(m: &CMatrix, dims: &[usize], keep: &[usize]) -> CMatrix {
    let total: usize = dims.iter().product();
    assert_eq!(m.nrows(), total);
    let kept_dim: usize = keep.iter().map(|&k| dims[k]).product();

    let split = |flat: usize| -> Vec<usize> {
        let mut idx = vec![0; dims.len()];
        let mut rest = flat;
        for (slot, &d) in idx.iter_mut().zip(dims).rev() {
            *slot = rest % d;
            rest /= d;
        }
        idx
    };
    let kept_flat = |idx: &[usize]| keep.iter().fold(0, |acc, &k| acc * dims[k] + idx[k]);
    let traced_equal = |a: &[usize], b: &[usize]| (0..dims.len()).all(|k| keep.contains(&k) || a[k] == b[k]);

    let mut out = CMatrix::zeros(kept_dim, kept_dim);
    let indices: Vec<Vec<usize>> = (0..total).map(split).collect();
    for (r, ri) in indices.iter().enumerate() {
        for (c, ci) in indices.iter().enumerate() {
            if traced_equal(ri, ci) {
                out[(kept_flat(ri), kept_flat(ci))] += m[(r, c)];
            }
        }
    }
    out
}

/// Column-stacking vectorisation.
pub fn vec_col(m: &CMatrix) -> CVector {
    CVector::from_column_slice(m.as_slice())
}

pub fn unvec_col(v: &CVector, dim: usize) -> CMatrix {
    CMatrix::from_column_slice(dim, dim, v.as_slice())
}
