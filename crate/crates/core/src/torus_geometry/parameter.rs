use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::ivec::{self, IVec3};
use super::smith::{smith_normal_form, IMatrix};
use crate::error::GeometryError;

/// An integer lattice ℓ ⊂ ℤ³ of rank 1 or 2 with its saturation
/// ℓ_ℤ = (ℓ⊗ℝ) ∩ ℤ³ and coset representatives of ℓ_ℤ/ℓ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParameterLattice {
    generators: Vec<IVec3>,
    saturation: Vec<IVec3>,
    invariants: Vec<i64>,
    cosets: Vec<IVec3>,
    // maps x ↦ coordinates of x in the Smith basis of ℤ³
    #[serde(skip)]
    right: IMatrix,
}

pub fn saturate_and_cosets(generators: &[IVec3]) -> Result<ParameterLattice, GeometryError> {
    if generators.is_empty() || generators.len() > 2 {
        return Err(GeometryError::BadRank(generators.len()));
    }
    let a: IMatrix = generators.iter().map(|g| g.to_vec()).collect();
    let snf = smith_normal_form(&a);
    if snf.diag.contains(&0) {
        return Err(GeometryError::DependentGenerators);
    }
    let rank = generators.len();
    // rows of right_inv are a basis v_i of ℤ³ with ℓ = span{d_i v_i}
    let basis: Vec<IVec3> = (0..rank)
        .map(|i| [snf.right_inv[i][0], snf.right_inv[i][1], snf.right_inv[i][2]])
        .collect();
    let invariants = snf.diag.clone();
    let mut cosets = vec![[0, 0, 0]];
    for (v, &d) in basis.iter().zip(&invariants) {
        cosets = cosets
            .iter()
            .flat_map(|c| (0..d).map(move |j| ivec::add(c, &ivec::scale(j, v))))
            .collect();
    }
    Ok(ParameterLattice {
        generators: generators.to_vec(),
        saturation: basis,
        invariants,
        cosets,
        right: snf.right,
    })
}

impl ParameterLattice {
    pub fn generators(&self) -> &[IVec3] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Basis of the saturation ℓ_ℤ.
    pub fn saturation(&self) -> &[IVec3] {
        &self.saturation
    }

    /// Nontrivial Smith invariants of the inclusion ℓ ⊂ ℓ_ℤ.
    pub fn invariants(&self) -> &[i64] {
        &self.invariants
    }

    pub fn index(&self) -> i64 {
        self.invariants.iter().product()
    }

    pub fn cosets(&self) -> &[IVec3] {
        &self.cosets
    }

    fn smith_coordinates(&self, x: &IVec3) -> IVec3 {
        let mut y = [0; 3];
        for (j, yj) in y.iter_mut().enumerate() {
            *yj = (0..3).map(|i| x[i] * self.right[i][j]).sum();
        }
        y
    }

    /// Coordinates of `x` in the saturation basis, if `x ∈ ℓ_ℤ`.
    pub fn saturation_coordinates(&self, x: &IVec3) -> Option<Vec<i64>> {
        let y = self.smith_coordinates(x);
        y[self.rank()..]
            .iter()
            .all(|&c| c == 0)
            .then(|| y[..self.rank()].to_vec())
    }

    pub fn contains_saturated(&self, x: &IVec3) -> bool {
        self.saturation_coordinates(x).is_some()
    }

    /// Whether `x` lies in ℓ itself.
    pub fn contains(&self, x: &IVec3) -> bool {
        self.saturation_coordinates(x).map_or(false, |y| {
            y.iter().zip(&self.invariants).all(|(c, d)| c.rem_euclid(*d) == 0)
        })
    }

    /// Index into [`Self::cosets`] of the class of `x ∈ ℓ_ℤ`.
    pub fn coset_of(&self, x: &IVec3) -> Result<usize, GeometryError> {
        let y = self
            .saturation_coordinates(x)
            .ok_or(GeometryError::NotInSaturation(*x))?;
        // cosets were enumerated with the last basis direction varying fastest
        Ok(y.iter()
            .zip(&self.invariants)
            .fold(0usize, |acc, (c, d)| acc * *d as usize + c.rem_euclid(*d) as usize))
    }

    /// Primitive normal of the plane ℓ⊗ℝ (rank 2 only).
    pub fn plane_normal(&self) -> Option<IVec3> {
        (self.rank() == 2).then(|| {
            let n = ivec::cross(&self.saturation[0], &self.saturation[1]);
            let g = ivec::content(&n);
            [n[0] / g, n[1] / g, n[2] / g]
        })
    }

    /// Orthonormal frame (e1, e2, e3) with e1 (and e2 for rank 2) spanning ℓ⊗ℝ.
    pub fn orthonormal_frame(&self) -> [Vector3<f64>; 3] {
        let s0 = ivec::to_real(&self.saturation[0]);
        let e1 = s0.normalize();
        let e2 = if self.rank() == 2 {
            let s1 = ivec::to_real(&self.saturation[1]);
            (s1 - e1 * e1.dot(&s1)).normalize()
        } else {
            // any unit vector orthogonal to e1, chosen from the least aligned axis
            let axis = (0..3)
                .min_by(|&i, &j| e1[i].abs().partial_cmp(&e1[j].abs()).unwrap())
                .unwrap();
            let mut a = Vector3::zeros();
            a[axis] = 1.0;
            (a - e1 * e1.dot(&a)).normalize()
        };
        [e1, e2, e1.cross(&e2)]
    }

    /// Minimal Euclidean distance from ℓ⊗ℝ to an integer point off it.
    pub fn min_offplane_distance(&self) -> f64 {
        match self.plane_normal() {
            Some(n) => 1.0 / ivec::norm(&n),
            None => offline_distance(&self.saturation[0]),
        }
    }
}

// Distance from the line ℝd to the nearest integer point off the line.
//
// Every b can be shifted along d so that |⟨b,d⟩| ≤ ‖d‖²/2; a known candidate
// distance D0 then bounds the search to ‖b‖² ≤ D0² + ‖d‖²/4.
fn offline_distance(d: &IVec3) -> f64 {
    let dd = ivec::norm_sq(d) as f64;
    let dist_sq = |b: &IVec3| ivec::norm_sq(&ivec::cross(b, d)) as f64 / dd;
    let mut best = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        .iter()
        .map(dist_sq)
        .filter(|&x| x > 0.0)
        .fold(f64::INFINITY, f64::min);
    let r = (best + dd / 4.0).sqrt().ceil() as i64;
    for x in -r..=r {
        for y in -r..=r {
            for z in -r..=r {
                let b = [x, y, z];
                let ds = dist_sq(&b);
                if ds > 0.0 && ds < best {
                    best = ds;
                }
            }
        }
    }
    best.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let l = saturate_and_cosets(&[[2, 0, 0], [0, 1, 0]]).unwrap();
        assert_eq!(l.index(), 2);
        assert_eq!(l.cosets().len(), 2);
        assert!(l.cosets().contains(&[0, 0, 0]));
        assert!(l.cosets().iter().any(|c| c[0].rem_euclid(2) == 1 && c[2] == 0));
        for e in [[1, 0, 0], [0, 1, 0]] {
            assert!(l.contains_saturated(&e));
        }
        assert!(!l.contains(&[1, 0, 0]));
        assert!(l.contains(&[2, 5, 0]));

        let l = saturate_and_cosets(&[[1, 0, 0], [0, 1, 0]]).unwrap();
        assert_eq!((l.index(), l.cosets().len()), (1, 1));

        let l = saturate_and_cosets(&[[1, 1, 0]]).unwrap();
        assert_eq!(l.index(), 1);
        assert!(l.saturation()[0] == [1, 1, 0] || l.saturation()[0] == [-1, -1, 0]);
    }

    #[test]
    fn errors() {
        assert_eq!(saturate_and_cosets(&[]), Err(GeometryError::BadRank(0)));
        assert_eq!(
            saturate_and_cosets(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]),
            Err(GeometryError::BadRank(3))
        );
        assert_eq!(
            saturate_and_cosets(&[[1, 2, 3], [-2, -4, -6]]),
            Err(GeometryError::DependentGenerators)
        );
        assert_eq!(saturate_and_cosets(&[[0, 0, 0]]), Err(GeometryError::DependentGenerators));
    }

    #[test]
    fn coset_lookup() {
        let l = saturate_and_cosets(&[[2, 0, 0], [0, 3, 0]]).unwrap();
        assert_eq!(l.index(), 6);
        for (i, c) in l.cosets().iter().enumerate() {
            assert_eq!(l.coset_of(c).unwrap(), i);
            let shifted = ivec::add(c, &[4, -9, 0]);
            assert_eq!(l.coset_of(&shifted).unwrap(), i);
        }
        assert!(l.coset_of(&[0, 0, 1]).is_err());
    }

    #[test]
    fn offplane_distances() {
        let l = saturate_and_cosets(&[[1, 0, 0], [0, 1, 0]]).unwrap();
        assert!((l.min_offplane_distance() - 1.0).abs() < 1e-12);
        let l = saturate_and_cosets(&[[1, 1, 0], [0, 0, 1]]).unwrap();
        assert!((l.min_offplane_distance() - 0.5f64.sqrt()).abs() < 1e-12);
        let l = saturate_and_cosets(&[[0, 0, 1]]).unwrap();
        assert!((l.min_offplane_distance() - 1.0).abs() < 1e-12);
        let l = saturate_and_cosets(&[[1, 1, 1]]).unwrap();
        assert!((l.min_offplane_distance() - (2.0f64 / 3.0).sqrt()).abs() < 1e-12);
    }
}
