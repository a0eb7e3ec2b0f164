use std::f64::consts::{PI, TAU};

use nalgebra::Vector3;
use num_complex::Complex64;
use rayon::prelude::*;

use super::field::{CMatrix, FieldGrid, ProjectorField};
use super::trivial::bubble_continuation;
use super::{PROJECTOR_TOL, ROUNDING_TOL};
use crate::error::SectionError;

/// Signed solid angle of the spherical triangle (a, b, c) of unit vectors
/// (Van Oosterom and Strackee).
pub fn solid_angle(a: &Vector3<f64>, b: &Vector3<f64>, c: &Vector3<f64>) -> f64 {
    let num = a.dot(&b.cross(c));
    let den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
    2.0 * num.atan2(den)
}

pub(crate) fn projector_defect(p: &CMatrix) -> f64 {
    let idem = (p * p - p).norm();
    let herm = (p - p.adjoint()).norm();
    idem.max(herm)
}

fn rank_of(p: &CMatrix) -> usize {
    p.trace().re.round().max(0.0) as usize
}

// Oriented area swept by the Bloch vectors `u` over the disc rings 0..=m.
fn disc_area(u: &[Vector3<f64>], angles: usize, m: usize) -> f64 {
    let at = |i: usize, j: usize| &u[i * angles + j % angles];
    (0..m)
        .map(|i| {
            (0..angles)
                .map(|j| {
                    solid_angle(at(i, j), at(i + 1, j), at(i + 1, j + 1))
                        + solid_angle(at(i, j), at(i + 1, j + 1), at(i, j + 1))
                })
                .sum::<f64>()
        })
        .sum()
}

/// Degree of the sphere obtained by capping a rank-one polar disc field with
/// the degree-0 reference continuation.
///
/// The disc carries the orientation of the β-plane and S² the outward
/// normal, so the reference bubble of degree n is counted as +n.
pub fn relative_degree(field: &ProjectorField) -> Result<i64, SectionError> {
    let (angles, dr, m) = match field.grid {
        FieldGrid::Polar { angles, dr, boundary_ring, .. } => (angles, dr, boundary_ring),
        _ => return Err(SectionError::Grid("relative degree needs a polar disc field".into())),
    };
    if field.dim != 2 {
        return Err(SectionError::Grid("relative degree needs a 2×2 field".into()));
    }
    for (index, p) in field.values.iter().enumerate() {
        let defect = projector_defect(p);
        if defect > PROJECTOR_TOL {
            return Err(SectionError::NotProjector { index, defect });
        }
        let rank = rank_of(p);
        if rank != 1 {
            return Err(SectionError::RankJump { index, expected: 1, found: rank });
        }
    }
    let u: Vec<Vector3<f64>> = (0..=m)
        .flat_map(|i| (0..angles).map(move |j| i * angles + j))
        .map(|idx| field.bloch(idx))
        .collect();
    for j in 0..angles {
        let th = TAU * j as f64 / angles as f64;
        let forced = Vector3::new(-th.cos(), -th.sin(), 0.0);
        let mismatch = (u[m * angles + j] - forced).norm();
        if mismatch > 1e-8 {
            return Err(SectionError::BoundaryMismatch { index: m * angles + j, mismatch });
        }
    }
    let reference_bubble = bubble_continuation(0, m as f64 * dr);
    let reference: Vec<Vector3<f64>> = (0..=m)
        .flat_map(|i| (0..angles).map(move |j| (i, j)))
        .map(|(i, j)| reference_bubble.eval(i as f64 * dr, TAU * j as f64 / angles as f64))
        .collect();
    let total = (disc_area(&u, angles, m) - disc_area(&reference, angles, m)) / (4.0 * PI);
    let rounded = total.round();
    let residual = (total - rounded).abs();
    if residual >= ROUNDING_TOL {
        return Err(SectionError::Residual { residual });
    }
    Ok(rounded as i64)
}

fn frame_of(p: &CMatrix, rank: usize) -> CMatrix {
    let eig = p.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..p.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let cols: Vec<_> = order[..rank].iter().map(|&c| eig.eigenvectors.column(c).into_owned()).collect();
    if cols.is_empty() {
        CMatrix::zeros(p.nrows(), 0)
    } else {
        CMatrix::from_columns(&cols)
    }
}

fn link(a: &CMatrix, b: &CMatrix) -> Complex64 {
    if a.ncols() == 0 {
        return Complex64::new(1.0, 0.0);
    }
    (a.adjoint() * b).determinant()
}

/// First Chern number of a projector field on a periodic torus grid, from
/// plaquette products of frame overlap determinants (Fukui, Hatsugai and
/// Suzuki). The orientation is that of (s1, s2).
pub fn chern_number(field: &ProjectorField) -> Result<i64, SectionError> {
    let (n1, n2) = match field.grid {
        FieldGrid::Torus { n1, n2 } if n1 >= 2 && n2 >= 2 => (n1, n2),
        _ => return Err(SectionError::Grid("Chern number needs a torus grid of at least 2×2".into())),
    };
    let rank = field.values.first().map(rank_of).unwrap_or(0);
    for (index, p) in field.values.iter().enumerate() {
        let defect = projector_defect(p);
        if defect > PROJECTOR_TOL {
            return Err(SectionError::NotProjector { index, defect });
        }
        let r = rank_of(p);
        if r != rank {
            return Err(SectionError::RankJump { index, expected: rank, found: r });
        }
    }
    let frames: Vec<CMatrix> = field.values.par_iter().map(|p| frame_of(p, rank)).collect();
    let at = |i: usize, j: usize| &frames[(i % n1) * n2 + j % n2];
    let unit = |z: Complex64| -> Result<Complex64, SectionError> {
        let r = z.norm();
        if r < 1e-8 {
            Err(SectionError::Residual { residual: 0.5 })
        } else {
            Ok(z / r)
        }
    };
    let mut total = 0.0;
    for i in 0..n1 {
        for j in 0..n2 {
            let u1 = unit(link(at(i, j), at(i + 1, j)))?;
            let u2 = unit(link(at(i + 1, j), at(i + 1, j + 1)))?;
            let u3 = unit(link(at(i, j + 1), at(i + 1, j + 1)))?;
            let u4 = unit(link(at(i, j), at(i, j + 1)))?;
            total += (u1 * u2 * u3.conj() * u4.conj()).arg();
        }
    }
    let c = total / TAU;
    let rounded = c.round();
    let residual = (c - rounded).abs();
    if residual >= ROUNDING_TOL {
        return Err(SectionError::Residual { residual });
    }
    Ok(rounded as i64)
}
