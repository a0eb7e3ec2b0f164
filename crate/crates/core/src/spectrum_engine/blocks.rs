//! The 2×2 blocks into which the Dirac operator decomposes.

use nalgebra::{Matrix2, Vector2, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Restriction of the Dirac operator to span{σ^{l+}_m, σ^{l−}_m}.
pub fn block_matrix(lambda: f64, mu: f64) -> Matrix2<f64> {
    Matrix2::new(lambda, mu, mu, -lambda)
}

/// Closed-form eigen-data of [`block_matrix`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockEigenData {
    pub lambda: f64,
    pub mu: f64,
    pub s: f64,
    /// Eigenvector for `+s`.
    pub vplus: Vector2<f64>,
    /// Eigenvector for `-s`.
    pub vminus: Vector2<f64>,
}

impl BlockEigenData {
    pub fn new(lambda: f64, mu: f64) -> Self {
        let s = lambda.hypot(mu);
        Self {
            lambda,
            mu,
            s,
            vplus: Vector2::new(lambda + mu + s, -lambda + mu + s),
            vminus: Vector2::new(lambda + mu - s, -lambda + mu - s),
        }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The Clifford triple used throughout: E₁ = σ_x, E₂ = σ_y, E₃ = σ_z.
///
/// ```text
/// E1 = [[0, 1], [1, 0]]   E2 = [[0, -i], [i, 0]]   E3 = [[1, 0], [0, -1]]
/// ```
pub fn clifford_generators() -> [Matrix2<Complex64>; 3] {
    let z = c(0.0, 0.0);
    [
        Matrix2::new(z, c(1.0, 0.0), c(1.0, 0.0), z),
        Matrix2::new(z, c(0.0, -1.0), c(0.0, 1.0), z),
        Matrix2::new(c(1.0, 0.0), z, z, c(-1.0, 0.0)),
    ]
}

/// β₁E₁ + β₂E₂ + β₃E₃.
pub fn clifford_block(beta: &Vector3<f64>) -> Matrix2<Complex64> {
    Matrix2::new(
        c(beta.z, 0.0),
        c(beta.x, -beta.y),
        c(beta.x, beta.y),
        c(-beta.z, 0.0),
    )
}

/// Restriction of 𝒟_α to Σ_b = span{σ⁺_b, σ⁻_b}, with β = α + 2πb.
///
/// Clifford multiplication is c(e_j) = iE_j, so 𝒟_α σ_b = i·c(β)σ_b = −β·E.
pub fn dirac_block(beta: &Vector3<f64>) -> Matrix2<Complex64> {
    -clifford_block(beta)
}

/// Projector (1 + u·E)/2 for a Bloch vector u.
pub fn bloch_projector(u: &Vector3<f64>) -> Matrix2<Complex64> {
    let half = c(0.5, 0.0);
    (Matrix2::identity() + clifford_block(u)) * half
}

/// Bloch vector of a 2×2 matrix: u_i = tr(P E_i).
pub fn bloch_vector(p: &Matrix2<Complex64>) -> Vector3<f64> {
    Vector3::new(
        (p[(0, 1)] + p[(1, 0)]).re,
        (p[(1, 0)] - p[(0, 1)]).im,
        (p[(0, 0)] - p[(1, 1)]).re,
    )
}
