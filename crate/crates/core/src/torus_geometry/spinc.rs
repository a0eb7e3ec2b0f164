use serde::{Deserialize, Serialize};

use super::ivec::{self, IVec3};

/// A Spin^c structure on T³, labelled by its class `khat` in H²(T³;ℤ) ≅ ℤ³.
///
/// For `khat ≠ 0` the class splits as `khat = h·k` with `h` the gcd of the
/// components and `k` primitive. The zero class has `h = 0` and no `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpincStructure {
    khat: IVec3,
    h: i64,
    k: Option<IVec3>,
}

impl SpincStructure {
    pub fn khat(&self) -> IVec3 {
        self.khat
    }

    pub fn h(&self) -> i64 {
        self.h
    }

    pub fn k(&self) -> Option<IVec3> {
        self.k
    }

    pub fn is_trivial(&self) -> bool {
        self.h == 0
    }

    pub fn norm_k(&self) -> Option<f64> {
        self.k.as_ref().map(ivec::norm)
    }
}

pub fn decompose_spinc(khat: IVec3) -> SpincStructure {
    let h = ivec::content(&khat);
    let k = (h != 0).then(|| [khat[0] / h, khat[1] / h, khat[2] / h]);
    SpincStructure { khat, h, k }
}

/// Evaluation of `khat ∪ a` on the fundamental class, i.e. the dot product.
pub fn cup_pairing(khat: &IVec3, a: &IVec3) -> i64 {
    ivec::dot(khat, a)
}
