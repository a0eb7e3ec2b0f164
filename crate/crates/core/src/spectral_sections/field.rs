use nalgebra::{DMatrix, Vector3};
use num_complex::Complex64;
use serde::ser::{Serialize, SerializeStruct, Serializer};
use serde::Deserialize;

use crate::spectrum_engine::bloch_vector;
use crate::torus_geometry::IVec3;

pub type CMatrix = DMatrix<Complex64>;

/// Sampling pattern of a projector field.
///
/// * `Torus`: sample `(i, j)` sits at `s = ((i+½)/n1, (j+½)/n2)` on the base
///   torus, in coordinates relative to the generators of ℓ.
/// * `Chart`: the same points, read as a fundamental domain of the base, so
///   opposite edges are not neighbours.
/// * `Polar`: sample `(i, j)` sits at `β = i·dr·(cos θ, sin θ)` with
///   `θ = 2πj/angles`; ring `boundary_ring` lies exactly on ‖β‖ = R.
/// * `Line`: sample `i` sits at `β = (i − half)·dr`; `boundary` is the number
///   of steps from the centre to ‖β‖ = R.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldGrid {
    Torus { n1: usize, n2: usize },
    Chart { n1: usize, n2: usize },
    Polar { rings: usize, angles: usize, dr: f64, boundary_ring: usize },
    Line { half: usize, dr: f64, boundary: usize },
}

impl FieldGrid {
    pub fn len(&self) -> usize {
        match *self {
            FieldGrid::Torus { n1, n2 } | FieldGrid::Chart { n1, n2 } => n1 * n2,
            FieldGrid::Polar { rings, angles, .. } => rings * angles,
            FieldGrid::Line { half, .. } => 2 * half + 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid coordinates of sample `index`: `(s1, s2)`, `(r, θ)` or `(β,)`.
    pub fn coords(&self, index: usize) -> Vec<f64> {
        match *self {
            FieldGrid::Torus { n1, n2 } | FieldGrid::Chart { n1, n2 } => {
                let (i, j) = (index / n2, index % n2);
                vec![(i as f64 + 0.5) / n1 as f64, (j as f64 + 0.5) / n2 as f64]
            }
            FieldGrid::Polar { angles, dr, .. } => {
                let (i, j) = (index / angles, index % angles);
                vec![i as f64 * dr, std::f64::consts::TAU * j as f64 / angles as f64]
            }
            FieldGrid::Line { half, dr, .. } => vec![(index as f64 - half as f64) * dr],
        }
    }

    /// Nearest-neighbour pairs (each unordered pair once), periodic where the
    /// grid is periodic.
    pub fn neighbours(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        match *self {
            FieldGrid::Torus { n1, n2 } => {
                for i in 0..n1 {
                    for j in 0..n2 {
                        let p = i * n2 + j;
                        if n1 > 1 {
                            out.push((p, ((i + 1) % n1) * n2 + j));
                        }
                        if n2 > 1 {
                            out.push((p, i * n2 + (j + 1) % n2));
                        }
                    }
                }
            }
            FieldGrid::Chart { n1, n2 } => {
                for i in 0..n1 {
                    for j in 0..n2 {
                        let p = i * n2 + j;
                        if i + 1 < n1 {
                            out.push((p, p + n2));
                        }
                        if j + 1 < n2 {
                            out.push((p, p + 1));
                        }
                    }
                }
            }
            FieldGrid::Polar { rings, angles, .. } => {
                for i in 0..rings {
                    for j in 0..angles {
                        let p = i * angles + j;
                        if i + 1 < rings {
                            out.push((p, p + angles));
                        }
                        out.push((p, i * angles + (j + 1) % angles));
                    }
                }
            }
            FieldGrid::Line { half, .. } => out.extend((0..2 * half).map(|i| (i, i + 1))),
        }
        out
    }

    /// Number of samples per unit of the grid parameter, used to turn the
    /// largest neighbour jump into a continuity constant.
    pub fn resolution(&self) -> usize {
        match *self {
            FieldGrid::Torus { n1, n2 } | FieldGrid::Chart { n1, n2 } => n1.max(n2),
            FieldGrid::Polar { rings, angles, .. } => rings.max(angles),
            FieldGrid::Line { half, .. } => 2 * half + 1,
        }
    }
}

/// A sampled family of orthogonal projections.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectorField {
    pub grid: FieldGrid,
    pub dim: usize,
    /// Block label Σ_b (trivial case only): a coset representative of ℓ_ℤ/ℓ
    /// for the free blocks, or the lattice point b for a forced block.
    pub block: Option<IVec3>,
    pub coset: Option<usize>,
    /// Orthonormal frame (e1, e2, e3) of ℝ³ with ℓ⊗ℝ ⊂ span{e1, e2}; β-plane
    /// coordinates and Bloch vectors of disc fields are taken in this frame.
    pub frame: Option<[Vector3<f64>; 3]>,
    pub values: Vec<CMatrix>,
}

impl ProjectorField {
    pub fn constant(grid: FieldGrid, p: CMatrix) -> Self {
        ProjectorField {
            grid,
            dim: p.nrows(),
            block: None,
            coset: None,
            frame: None,
            values: vec![p; grid.len()],
        }
    }

    /// Block-diagonal sum of two fields on the same grid.
    pub fn direct_sum(&self, other: &ProjectorField) -> Option<ProjectorField> {
        if self.grid != other.grid {
            return None;
        }
        let dim = self.dim + other.dim;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| {
                let mut m = CMatrix::zeros(dim, dim);
                m.view_mut((0, 0), (self.dim, self.dim)).copy_from(a);
                m.view_mut((self.dim, self.dim), (other.dim, other.dim)).copy_from(b);
                m
            })
            .collect();
        Some(ProjectorField {
            grid: self.grid,
            dim,
            block: None,
            coset: None,
            frame: None,
            values,
        })
    }

    /// Bloch vector of a 2×2 sample, expressed in the field frame if present.
    pub fn bloch(&self, index: usize) -> Vector3<f64> {
        let p = &self.values[index];
        let m = nalgebra::Matrix2::new(p[(0, 0)], p[(0, 1)], p[(1, 0)], p[(1, 1)]);
        let u = bloch_vector(&m);
        match &self.frame {
            Some([e1, e2, e3]) => Vector3::new(u.dot(e1), u.dot(e2), u.dot(e3)),
            None => u,
        }
    }

    /// One line per sample: grid coordinates followed by the Bloch vector
    /// (frame coordinates when the field carries a frame). 2×2 fields only.
    pub fn to_bloch_csv(&self) -> Option<String> {
        if self.dim != 2 {
            return None;
        }
        let head = match self.grid {
            FieldGrid::Torus { .. } | FieldGrid::Chart { .. } => "s1,s2",
            FieldGrid::Polar { .. } => "r,theta",
            FieldGrid::Line { .. } => "beta",
        };
        let mut out = format!("{head},u1,u2,u3\n");
        for i in 0..self.values.len() {
            let u = self.bloch(i);
            let mut cells: Vec<String> = self.grid.coords(i).iter().map(|&x| crate::io::fmt_float(x)).collect();
            cells.extend(u.iter().map(|&x| crate::io::fmt_float(x)));
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        Some(out)
    }
}

impl Serialize for ProjectorField {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let values: Vec<Vec<[f64; 2]>> = self
            .values
            .iter()
            .map(|m| {
                let mut row_major = Vec::with_capacity(self.dim * self.dim);
                for r in 0..self.dim {
                    for c in 0..self.dim {
                        let z = m[(r, c)];
                        row_major.push([z.re, z.im]);
                    }
                }
                row_major
            })
            .collect();
        let frame = self.frame.map(|f| f.map(|e| [e.x, e.y, e.z]));
        let mut st = s.serialize_struct("ProjectorField", 6)?;
        st.serialize_field("grid", &self.grid)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("block", &self.block)?;
        st.serialize_field("coset", &self.coset)?;
        st.serialize_field("frame", &frame)?;
        st.serialize_field("values", &values)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neighbour_counts() {
        assert_eq!(FieldGrid::Torus { n1: 4, n2: 3 }.neighbours().len(), 24);
        assert_eq!(FieldGrid::Torus { n1: 5, n2: 1 }.neighbours().len(), 5);
        assert_eq!(FieldGrid::Chart { n1: 4, n2: 3 }.neighbours().len(), 17);
        let polar = FieldGrid::Polar { rings: 3, angles: 4, dr: 0.1, boundary_ring: 2 };
        assert_eq!(polar.neighbours().len(), 8 + 12);
        assert_eq!(FieldGrid::Line { half: 3, dr: 1.0, boundary: 2 }.neighbours().len(), 6);
    }

    #[test]
    fn json_layout_is_row_major_pairs() {
        let mut p = CMatrix::zeros(2, 2);
        p[(0, 1)] = Complex64::new(0.25, -0.5);
        let f = ProjectorField::constant(FieldGrid::Torus { n1: 1, n2: 1 }, p);
        let v = serde_json::to_value(&f).unwrap();
        assert_eq!(v["grid"]["kind"], "torus");
        assert_eq!(v["values"][0][1], serde_json::json!([0.25, -0.5]));
    }
}
