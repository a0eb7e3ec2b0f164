use nalgebra::{Matrix2, Vector3};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::spectrum_engine::{block_matrix, bloch_projector, clifford_block, BlockEigenData};

/// Numerical eigensolves of the 2×2 blocks against their closed forms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeBlockReport {
    pub count: usize,
    /// max |numerical − (±‖β‖)| over the Clifford blocks.
    pub max_beta_eigenvalue_deviation: f64,
    /// max ‖P_numerical − (1 − β̂·E)/2‖ for the negative eigenprojector.
    pub max_beta_projector_deviation: f64,
    /// max relative deviation of block_matrix eigenvalues from ±√(λ²+μ²).
    pub max_block_eigenvalue_deviation: f64,
    /// max angle in radians between the numerical and closed-form eigenvectors.
    pub max_vplus_angle: f64,
    pub max_vminus_angle: f64,
    /// max |⟨vplus, vminus⟩| / (‖vplus‖‖vminus‖).
    pub max_orthogonality_defect: f64,
    /// At β = 0 the block vanishes: both eigenvalues are 0 and the kernel is
    /// all of ℂ², so no eigenprojector split is defined.
    pub zero_beta_kernel_dim: usize,
}

fn angle(a: &nalgebra::Vector2<f64>, b: &nalgebra::Vector2<f64>) -> f64 {
    let cross = a.x * b.y - a.y * b.x;
    cross.abs().atan2(a.dot(b).abs())
}

pub fn mode_block_oracle(count: usize, seed: u64) -> ModeBlockReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = ModeBlockReport {
        count,
        max_beta_eigenvalue_deviation: 0.0,
        max_beta_projector_deviation: 0.0,
        max_block_eigenvalue_deviation: 0.0,
        max_vplus_angle: 0.0,
        max_vminus_angle: 0.0,
        max_orthogonality_defect: 0.0,
        zero_beta_kernel_dim: 0,
    };
    for _ in 0..count {
        let beta = Vector3::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        let nb = beta.norm();
        let eig = clifford_block(&beta).symmetric_eigen();
        let (lo, hi) = if eig.eigenvalues[0] <= eig.eigenvalues[1] { (0, 1) } else { (1, 0) };
        r.max_beta_eigenvalue_deviation = r
            .max_beta_eigenvalue_deviation
            .max((eig.eigenvalues[lo] + nb).abs())
            .max((eig.eigenvalues[hi] - nb).abs());
        let v = eig.eigenvectors.column(lo);
        let p: Matrix2<Complex64> = v * v.adjoint();
        r.max_beta_projector_deviation = r.max_beta_projector_deviation.max((p - bloch_projector(&(-beta / nb))).norm());

        let (lambda, mu) = (rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        let closed = BlockEigenData::new(lambda, mu);
        let eig = block_matrix(lambda, mu).symmetric_eigen();
        let (lo, hi) = if eig.eigenvalues[0] <= eig.eigenvalues[1] { (0, 1) } else { (1, 0) };
        let s = closed.s;
        r.max_block_eigenvalue_deviation = r
            .max_block_eigenvalue_deviation
            .max((eig.eigenvalues[hi] - s).abs() / s)
            .max((eig.eigenvalues[lo] + s).abs() / s);
        r.max_vplus_angle = r.max_vplus_angle.max(angle(&eig.eigenvectors.column(hi).into_owned(), &closed.vplus));
        r.max_vminus_angle = r.max_vminus_angle.max(angle(&eig.eigenvectors.column(lo).into_owned(), &closed.vminus));
        let ortho = closed.vplus.dot(&closed.vminus).abs() / (closed.vplus.norm() * closed.vminus.norm());
        r.max_orthogonality_defect = r.max_orthogonality_defect.max(ortho);
    }
    let zero = clifford_block(&Vector3::zeros()).symmetric_eigen();
    r.zero_beta_kernel_dim = zero.eigenvalues.iter().filter(|v| v.abs() < 1e-15).count();
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_match_closed_forms() {
        let r = mode_block_oracle(2000, 7);
        assert!(r.max_beta_eigenvalue_deviation < 1e-12, "{r:?}");
        assert!(r.max_beta_projector_deviation < 1e-10, "{r:?}");
        assert!(r.max_block_eigenvalue_deviation < 1e-10, "{r:?}");
        assert!(r.max_vplus_angle < 1e-8 && r.max_vminus_angle < 1e-8, "{r:?}");
        assert!(r.max_orthogonality_defect < 1e-10, "{r:?}");
        assert_eq!(r.zero_beta_kernel_dim, 2);
    }
}
