use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::classify::{SectionClass, SectionDescriptor};
use super::field::{CMatrix, FieldGrid, ProjectorField};
use crate::error::SectionError;

/// Torus-to-sphere pinch map: the open square (0,1)² is stretched onto ℂ by
/// `tan(π(s − ½))` in each coordinate, and the boundary collapses to ∞.
/// Returns `None` at the pinch point.
pub fn pinch_map(s1: f64, s2: f64) -> Option<Complex64> {
    let x = (PI * (s1.rem_euclid(1.0) - 0.5)).tan();
    let y = (PI * (s2.rem_euclid(1.0) - 0.5)).tan();
    let z = Complex64::new(x, y);
    z.is_finite().then_some(z)
}

// Unit vector spanning the line through (1, w(z)) in ℂ², w = z^d for d ≥ 0 and
// conj(z)^|d| for d < 0; the line through (0, 1) at ∞.
fn degree_line(z: Option<Complex64>, d: i64) -> [Complex64; 2] {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    if d == 0 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        return [one * s, one * s];
    }
    let Some(z) = z else { return [zero, one] };
    let base = if d > 0 { z } else { z.conj() };
    // compare in logarithms so large |z| cannot overflow
    let log_r = d.unsigned_abs() as f64 * base.norm().ln();
    let phase = Complex64::from_polar(1.0, d.unsigned_abs() as f64 * base.arg());
    if log_r <= 0.0 {
        let w = phase * log_r.exp();
        let n = (1.0 + w.norm_sqr()).sqrt();
        [one / n, w / n]
    } else {
        let inv = (-log_r).exp();
        let n = (1.0 + inv * inv).sqrt();
        [Complex64::new(inv / n, 0.0), phase / n]
    }
}

fn validate(h: usize, rank: i64, chern: i64) -> Result<usize, SectionError> {
    if rank < 0 || rank as usize > h {
        return Err(SectionError::InvalidDescriptor(format!("rank {rank} outside 0..={h}")));
    }
    if (rank == 0 || rank as usize == h) && chern != 0 {
        return Err(SectionError::InvalidDescriptor(format!(
            "rank {rank} of {h} is a trivial bundle; its Chern number must be 0, got {chern}"
        )));
    }
    Ok(rank as usize)
}

/// Rank-r projector field on the N×N grid of the base torus inside B×ℂ^h
/// with first Chern number d.
pub fn build_projector_field_nontrivial(
    h: usize,
    descriptor: &SectionDescriptor,
    n: usize,
) -> Result<ProjectorField, SectionError> {
    build_projector_field_nontrivial_grid(h, descriptor, FieldGrid::Torus { n1: n, n2: n })
}

pub fn build_projector_field_nontrivial_grid(
    h: usize,
    descriptor: &SectionDescriptor,
    grid: FieldGrid,
) -> Result<ProjectorField, SectionError> {
    let (rank, chern) = match descriptor.class {
        SectionClass::Nontrivial { rank, chern } => (rank, chern),
        SectionClass::Trivial { .. } => return Err(SectionError::CaseMismatch),
    };
    let r = validate(h, rank, chern)?;
    if grid.is_empty() {
        return Err(SectionError::Grid("empty grid".into()));
    }
    if r == 0 || r == h {
        let p = if r == 0 { CMatrix::zeros(h, h) } else { CMatrix::identity(h, h) };
        return Ok(ProjectorField::constant(grid, p));
    }
    // a line in span{e₀, e₁} plus the constant directions e₂, …, e_r
    let values = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let c = grid.coords(idx);
            let s2 = c.get(1).copied().unwrap_or(0.5);
            let v = degree_line(pinch_map(c[0], s2), chern);
            let mut p = CMatrix::zeros(h, h);
            for a in 0..2 {
                for b in 0..2 {
                    p[(a, b)] = v[a] * v[b].conj();
                }
            }
            for e in 2..=r {
                p[(e, e)] = Complex64::new(1.0, 0.0);
            }
            p
        })
        .collect();
    Ok(ProjectorField {
        grid,
        dim: h,
        block: None,
        coset: None,
        frame: None,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral_sections::{chern_number, SectionDescriptor};

    fn desc(rank: i64, chern: i64) -> SectionDescriptor {
        SectionDescriptor::nontrivial(rank, chern, 0.5)
    }

    #[test]
    fn trivial_ranks() {
        let z = build_projector_field_nontrivial(3, &desc(0, 0), 8).unwrap();
        assert!(z.values.iter().all(|p| p.norm() == 0.0));
        let id = build_projector_field_nontrivial(3, &desc(3, 0), 8).unwrap();
        assert!(id.values.iter().all(|p| *p == CMatrix::identity(3, 3)));
        assert!(build_projector_field_nontrivial(3, &desc(3, 1), 8).is_err());
        assert!(build_projector_field_nontrivial(3, &desc(4, 0), 8).is_err());
    }

    #[test]
    fn chern_matches_degree() {
        for d in -3..=3 {
            let f = build_projector_field_nontrivial(2, &desc(1, d), 24).unwrap();
            assert_eq!(chern_number(&f).unwrap(), d, "d = {d}");
        }
        let f = build_projector_field_nontrivial(3, &desc(1, 2), 32).unwrap();
        assert_eq!(chern_number(&f).unwrap(), 2);
    }

    #[test]
    fn direct_sum_adds() {
        let a = build_projector_field_nontrivial(2, &desc(1, 2), 24).unwrap();
        let b = build_projector_field_nontrivial(2, &desc(1, -3), 24).unwrap();
        assert_eq!(chern_number(&a.direct_sum(&b).unwrap()).unwrap(), -1);
    }
}
