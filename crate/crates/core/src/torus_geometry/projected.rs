use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use super::ivec::{self, IVec3};
use super::smith::smith_normal_form;
use crate::error::GeometryError;

/// The lattice Λ = π_k(ℤ³) in the plane W = k^⊥, with a reduced basis.
///
/// Basis vectors are stored exactly as `‖k‖²·w_i ∈ ℤ³` together with integer
/// preimages `z_i` satisfying `π_k(z_i) = w_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectedLattice {
    k: IVec3,
    norm_k_sq: i64,
    scaled: [IVec3; 2],
    preimages: [IVec3; 2],
    /// Numerators of c¹, c² over the common denominator ‖k‖².
    c_num: [i64; 2],
    pub w1: Vector3<f64>,
    pub w2: Vector3<f64>,
    pub c1: f64,
    pub c2: f64,
    pub area: f64,
}

/// Image of a point of T³ under the trivialisation T³ → T_Λ × ℝ/ℤ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrivializedPoint {
    /// Coordinates of the T_Λ point in the basis (w1, w2), reduced to [0,1).
    pub base: [f64; 2],
    /// The same point as a vector in W.
    pub base_vector: Vector3<f64>,
    /// Circle coordinate in [0,1).
    pub fiber: f64,
}

/// Covector of d(s_l ∘ tr)/(2πi(s_l ∘ tr)) split against W.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiberFormSplit {
    pub l: i64,
    pub omega_par: Vector3<f64>,
    pub omega_perp: Vector3<f64>,
}

fn project_scaled(z: &IVec3, k: &IVec3, norm_k_sq: i64) -> IVec3 {
    ivec::sub(&ivec::scale(norm_k_sq, z), &ivec::scale(ivec::dot(z, k), k))
}

fn frac(x: f64) -> f64 {
    let f = x - x.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

// Lagrange–Gauss reduction of a 2D basis; vectors carried with their preimages.
fn gauss_reduce(mut a: (IVec3, IVec3), mut b: (IVec3, IVec3)) -> ((IVec3, IVec3), (IVec3, IVec3)) {
    loop {
        if ivec::dot_wide(&a.0, &a.0) > ivec::dot_wide(&b.0, &b.0) {
            std::mem::swap(&mut a, &mut b);
        }
        let aa = ivec::dot_wide(&a.0, &a.0);
        let ab = ivec::dot_wide(&a.0, &b.0);
        // nearest integer to ab/aa, ties toward zero
        let q = {
            let twice = 2 * ab;
            let r = twice.div_euclid(2 * aa);
            let lo = r;
            let hi = r + 1;
            let dlo = (twice - 2 * aa * lo).abs();
            let dhi = (twice - 2 * aa * hi).abs();
            if dlo < dhi || (dlo == dhi && lo.abs() <= hi.abs()) {
                lo
            } else {
                hi
            }
        } as i64;
        if q == 0 {
            return (a, b);
        }
        b = (
            ivec::sub(&b.0, &ivec::scale(q, &a.0)),
            ivec::sub(&b.1, &ivec::scale(q, &a.1)),
        );
    }
}

pub fn projected_lattice(k: IVec3) -> Result<ProjectedLattice, GeometryError> {
    if ivec::is_zero(&k) {
        return Err(GeometryError::ZeroClass);
    }
    if !ivec::is_primitive(&k) {
        return Err(GeometryError::NotPrimitive(k));
    }
    let norm_k_sq = ivec::norm_sq(&k);
    // rows 2,3 of the inverse Smith transform complete k to a basis of ℤ³
    let snf = smith_normal_form(&vec![k.to_vec()]);
    let row = |i: usize| -> IVec3 { [snf.right_inv[i][0], snf.right_inv[i][1], snf.right_inv[i][2]] };
    let (z1, z2) = (row(1), row(2));
    let (a, b) = gauss_reduce(
        (project_scaled(&z1, &k, norm_k_sq), z1),
        (project_scaled(&z2, &k, norm_k_sq), z2),
    );

    // Canonical choice among all reduced bases: positively oriented with k,
    // then lexicographically smallest.
    let cands = [
        a,
        b,
        (ivec::add(&a.0, &b.0), ivec::add(&a.1, &b.1)),
        (ivec::sub(&a.0, &b.0), ivec::sub(&a.1, &b.1)),
    ];
    let all: Vec<(IVec3, IVec3)> = cands
        .iter()
        .flat_map(|&(v, z)| [(v, z), (ivec::neg(&v), ivec::neg(&z))])
        .collect();
    let n1 = ivec::dot_wide(&a.0, &a.0);
    let n2 = ivec::dot_wide(&b.0, &b.0);
    // (‖k‖²w₁ × ‖k‖²w₂)·k = ‖k‖⁴ for a positively oriented basis of covolume 1/‖k‖
    let unit = norm_k_sq as i128 * norm_k_sq as i128;
    let mut best: Option<((IVec3, IVec3), (IVec3, IVec3))> = None;
    for u in &all {
        if ivec::dot_wide(&u.0, &u.0) != n1 {
            continue;
        }
        for v in &all {
            if ivec::dot_wide(&v.0, &v.0) != n2 {
                continue;
            }
            let c = ivec::cross(&u.0, &v.0);
            let orient = ivec::dot_wide(&c, &k);
            if orient != unit {
                continue;
            }
            let key = (u.0, v.0);
            if best.map_or(true, |(bu, bv)| key < (bu.0, bv.0)) {
                best = Some((*u, *v));
            }
        }
    }
    let (u, v) = best.expect("a reduced basis always has a positively oriented arrangement");
    let c_num = [
        (-ivec::dot(&u.1, &k)).rem_euclid(norm_k_sq),
        (-ivec::dot(&v.1, &k)).rem_euclid(norm_k_sq),
    ];
    let s = norm_k_sq as f64;
    let w1 = ivec::to_real(&u.0) / s;
    let w2 = ivec::to_real(&v.0) / s;
    Ok(ProjectedLattice {
        k,
        norm_k_sq,
        scaled: [u.0, v.0],
        preimages: [u.1, v.1],
        c_num,
        w1,
        w2,
        c1: c_num[0] as f64 / s,
        c2: c_num[1] as f64 / s,
        area: w1.cross(&w2).norm(),
    })
}

impl ProjectedLattice {
    pub fn k(&self) -> IVec3 {
        self.k
    }

    pub fn norm_k(&self) -> f64 {
        (self.norm_k_sq as f64).sqrt()
    }

    /// `‖k‖²·w_i` as exact integer vectors.
    pub fn scaled_basis(&self) -> [IVec3; 2] {
        self.scaled
    }

    pub fn preimages(&self) -> [IVec3; 2] {
        self.preimages
    }

    /// c^i as exact fractions `(numerator, ‖k‖²)`.
    pub fn c_exact(&self) -> [(i64, i64); 2] {
        [(self.c_num[0], self.norm_k_sq), (self.c_num[1], self.norm_k_sq)]
    }

    /// c^i recomputed from an arbitrary integer preimage of the scaled vector
    /// `target`; `None` if `z` is not a preimage.
    pub fn c_from_preimage(&self, z: &IVec3, target: &IVec3) -> Option<i64> {
        (project_scaled(z, &self.k, self.norm_k_sq) == *target)
            .then(|| (-ivec::dot(z, &self.k)).rem_euclid(self.norm_k_sq))
    }

    fn frame(&self) -> Matrix3<f64> {
        Matrix3::from_columns(&[self.w1, self.w2, ivec::to_real(&self.k)])
    }

    /// Coordinates (χ₁, χ₂, χ) of `x = χ₁w₁ + χ₂w₂ + χk`.
    pub fn coordinates(&self, x: &Vector3<f64>) -> [f64; 3] {
        let kk = ivec::to_real(&self.k);
        let chi = x.dot(&kk) / self.norm_k_sq as f64;
        let xp = x - kk * chi;
        let g11 = self.w1.dot(&self.w1);
        let g12 = self.w1.dot(&self.w2);
        let g22 = self.w2.dot(&self.w2);
        let det = g11 * g22 - g12 * g12;
        let p1 = xp.dot(&self.w1);
        let p2 = xp.dot(&self.w2);
        [(g22 * p1 - g12 * p2) / det, (g11 * p2 - g12 * p1) / det, chi]
    }

    pub fn point(&self, chi: [f64; 3]) -> Vector3<f64> {
        self.frame() * Vector3::new(chi[0], chi[1], chi[2])
    }

    pub fn trivialize(&self, chi: [f64; 3]) -> TrivializedPoint {
        let base = [frac(chi[0]), frac(chi[1])];
        TrivializedPoint {
            base,
            base_vector: self.w1 * base[0] + self.w2 * base[1],
            fiber: frac(self.c1 * chi[0] + self.c2 * chi[1] + chi[2]),
        }
    }

    /// Inverse of [`Self::trivialize`]; the result is reduced to [0,1)³.
    pub fn untrivialize(&self, base: [f64; 2], fiber: f64) -> Vector3<f64> {
        let chi = fiber - self.c1 * base[0] - self.c2 * base[1];
        self.point([base[0], base[1], chi]).map(frac)
    }

    pub fn fiber_form_split(&self, l: i64) -> FiberFormSplit {
        let kk = ivec::to_real(&self.k);
        let g11 = self.w1.dot(&self.w1);
        let g12 = self.w1.dot(&self.w2);
        let g22 = self.w2.dot(&self.w2);
        let det = g11 * g22 - g12 * g12;
        // dual basis of (w1, w2) inside W
        let r1 = (self.w1 * g22 - self.w2 * g12) / det;
        let r2 = (self.w2 * g11 - self.w1 * g12) / det;
        let l = l as f64;
        FiberFormSplit {
            l: l as i64,
            omega_par: (r1 * self.c1 + r2 * self.c2) * l,
            omega_perp: kk * (l / self.norm_k_sq as f64),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn is_integral(v: &Vector3<f64>) -> bool {
        v.iter().all(|x| (x - x.round()).abs() < 1e-9)
    }

    #[test]
    fn axis_aligned() {
        let p = projected_lattice([0, 0, 1]).unwrap();
        let mut basis = [p.w1, p.w2];
        basis.sort_by(|a, b| b.norm().partial_cmp(&a.norm()).unwrap());
        assert_abs_diff_eq!(p.area, 1.0, epsilon = 1e-12);
        assert_eq!((p.c1, p.c2), (0.0, 0.0));
        for w in [p.w1, p.w2] {
            assert_abs_diff_eq!(w.norm(), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(w.z, 0.0);
        }
        assert!(p.w1.cross(&p.w2).z > 0.0);
    }

    #[test]
    fn rejects_bad_k() {
        assert_eq!(projected_lattice([0, 0, 0]), Err(GeometryError::ZeroClass));
        assert_eq!(projected_lattice([0, 2, 2]), Err(GeometryError::NotPrimitive([0, 2, 2])));
    }

    #[test]
    fn invariants_on_box() {
        for x in -10i64..=10 {
            for y in -10i64..=10 {
                for z in -10i64..=10 {
                    let k = [x, y, z];
                    if !ivec::is_primitive(&k) {
                        continue;
                    }
                    let p = projected_lattice(k).unwrap();
                    let kr = ivec::to_real(&k);
                    assert!(p.w1.dot(&kr).abs() < 1e-9 && p.w2.dot(&kr).abs() < 1e-9);
                    assert!((p.area * kr.norm() - 1.0).abs() < 1e-9, "{k:?}");
                    assert!(is_integral(&(p.w1 - kr * p.c1)), "{k:?}");
                    assert!(is_integral(&(p.w2 - kr * p.c2)), "{k:?}");
                    assert!((0.0..1.0).contains(&p.c1) && (0.0..1.0).contains(&p.c2));
                    assert!(p.w1.norm() <= p.w2.norm() + 1e-12);
                    assert!(p.w1.dot(&p.w2).abs() <= 0.5 * p.w1.norm_squared() + 1e-12);
                }
            }
        }
    }

    #[test]
    fn c_is_independent_of_preimage() {
        let p = projected_lattice([2, -3, 5]).unwrap();
        let k = p.k();
        let [s1, s2] = p.scaled_basis();
        let [z1, z2] = p.preimages();
        for t in -4..=4 {
            let a = ivec::add(&z1, &ivec::scale(t, &k));
            let b = ivec::add(&z2, &ivec::scale(t, &k));
            assert_eq!(p.c_from_preimage(&a, &s1), Some(p.c_exact()[0].0));
            assert_eq!(p.c_from_preimage(&b, &s2), Some(p.c_exact()[1].0));
        }
    }

    #[test]
    fn trivialize_examples() {
        let p = projected_lattice([0, 0, 1]).unwrap();
        let t = p.trivialize([0.3, 0.4, 0.2]);
        assert_abs_diff_eq!(t.base[0], 0.3);
        assert_abs_diff_eq!(t.base[1], 0.4);
        assert_abs_diff_eq!(t.fiber, 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!((t.base_vector - (p.w1 * 0.3 + p.w2 * 0.4)).norm(), 0.0);

        let p = projected_lattice([1, 1, 0]).unwrap();
        let t = p.trivialize([1.0, 0.0, 0.0]);
        assert_abs_diff_eq!(t.fiber, p.c1, epsilon = 1e-15);
        assert_abs_diff_eq!(t.base[0], 0.0);
    }

    #[test]
    fn fiber_split_matches_dual_basis_solve() {
        for (k, l) in [([1, 1, 0], 1), ([1, 2, 3], -2), ([0, 0, 1], 1), ([3, -1, 4], 5)] {
            let p = projected_lattice(k).unwrap();
            let split = p.fiber_form_split(l);
            // oracle: covector ω with ω(w1) = l c¹, ω(w2) = l c², ω(k) = l
            let m = Matrix3::from_columns(&[p.w1, p.w2, ivec::to_real(&k)]);
            let rhs = Vector3::new(p.c1, p.c2, 1.0) * l as f64;
            let omega = m.transpose().lu().solve(&rhs).unwrap();
            assert!((split.omega_par + split.omega_perp - omega).norm() < 1e-10);
            let kr = ivec::to_real(&k);
            assert!(split.omega_par.dot(&kr).abs() < 1e-10);
            assert!(split.omega_perp.cross(&kr).norm() < 1e-10);
        }
        let p = projected_lattice([0, 0, 1]).unwrap();
        let s = p.fiber_form_split(1);
        assert_abs_diff_eq!(s.omega_par.norm(), 0.0);
        assert_abs_diff_eq!((s.omega_perp - Vector3::new(0.0, 0.0, 1.0)).norm(), 0.0);
        let s = projected_lattice([4, 1, -7]).unwrap().fiber_form_split(0);
        assert_eq!(s.omega_par.norm() + s.omega_perp.norm(), 0.0);
    }
}
