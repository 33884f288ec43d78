//! Small dense complex matrices and residual helpers.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

pub fn zeros(n: usize) -> CMatrix {
    CMatrix::zeros(n, n)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn real_diag(values: &[f64]) -> CMatrix {
    let mut m = zeros(values.len());
    for (i, v) in values.iter().enumerate() {
        m[(i, i)] = Complex64::new(*v, 0.0);
    }
    m
}

pub fn scaled(m: &CMatrix, s: f64) -> CMatrix {
    m * Complex64::new(s, 0.0)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entry modulus split into entries away from the masked indices
/// and entries whose row or column is masked.
pub fn max_abs_split(m: &CMatrix, masked: &[usize]) -> (f64, f64) {
    let mut interior = 0.0f64;
    let mut boundary = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let v = m[(i, j)].norm();
            if masked.contains(&i) || masked.contains(&j) {
                boundary = boundary.max(v);
            } else {
                interior = interior.max(v);
            }
        }
    }
    (interior, boundary)
}

pub fn hermitian_residual(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// Largest off-diagonal modulus.
pub fn off_diagonal(m: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if i != j {
                worst = worst.max(m[(i, j)].norm());
            }
        }
    }
    worst
}

/// Real parts of the diagonal.
pub fn diagonal_re(m: &CMatrix) -> Vec<f64> {
    (0..m.nrows().min(m.ncols()))
        .map(|i| m[(i, i)].re)
        .collect()
}

pub fn power(m: &CMatrix, n: usize) -> CMatrix {
    (0..n).fold(identity(m.nrows()), |acc, _| &acc * m)
}
