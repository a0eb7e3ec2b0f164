use std::f64::consts::TAU;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::torus_geometry::{ivec, IVec3};

/// A harmonic 1-form α ∈ H¹(T³;ℝ) ≅ ℝ³.
///
/// Stored in turns, θ = α/2π, so that gauge shifts α ↦ α + 2πa are exact
/// additions of integers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicForm {
    turns: Vector3<f64>,
}

impl HarmonicForm {
    pub fn new(alpha: Vector3<f64>) -> Self {
        Self { turns: alpha / TAU }
    }

    pub fn zero() -> Self {
        Self::from_turns(Vector3::zeros())
    }

    pub fn from_turns(turns: Vector3<f64>) -> Self {
        Self { turns }
    }

    pub fn alpha(&self) -> Vector3<f64> {
        self.turns * TAU
    }

    pub fn turns(&self) -> Vector3<f64> {
        self.turns
    }

    /// The gauge-equivalent form α + 2πa.
    pub fn shifted(&self, a: &IVec3) -> Self {
        Self::from_turns(self.turns + ivec::to_real(a))
    }

    /// ⟨k, α⟩ / 2π.
    pub fn pairing_turns(&self, k: &IVec3) -> f64 {
        k[0] as f64 * self.turns.x + k[1] as f64 * self.turns.y + k[2] as f64 * self.turns.z
    }

    /// Splits α into the part in W = k^⊥ and the part along k.
    pub fn split(&self, k: &IVec3) -> (Vector3<f64>, Vector3<f64>) {
        let kk = ivec::to_real(k);
        let alpha = self.alpha();
        let perp = kk * (alpha.dot(&kk) / kk.norm_squared());
        (alpha - perp, perp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_is_orthogonal() {
        let f = HarmonicForm::new(Vector3::new(0.3, -1.2, 2.5));
        let k = [1, 2, -2];
        let (par, perp) = f.split(&k);
        assert!((par + perp - f.alpha()).norm() < 1e-14);
        assert!(par.dot(&ivec::to_real(&k)).abs() < 1e-14);
        assert!(perp.cross(&ivec::to_real(&k)).norm() < 1e-14);
    }

    #[test]
    fn dyadic_shift_is_exact() {
        let f = HarmonicForm::from_turns(Vector3::new(0.375, -0.8125, 0.0625));
        let g = f.shifted(&[3, -2, 7]);
        assert_eq!(g.turns() - f.turns(), Vector3::new(3.0, -2.0, 7.0));
        assert_eq!(g.pairing_turns(&[1, 1, 1]), f.pairing_turns(&[1, 1, 1]) + 8.0);
    }
}
