use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix2, Vector2, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;

use super::classify::{SectionClass, SectionDescriptor};
use super::field::{CMatrix, FieldGrid, ProjectorField};
use crate::error::SectionError;
use crate::spectrum_engine::bloch_projector;
use crate::torus_geometry::{ivec, IVec3, ParameterLattice};

/// The polar disc extends this factor beyond R so that the forced region is
/// sampled too.
pub const DISC_OVERSHOOT: f64 = 1.125;
/// Minimal number of grid rings strictly inside the disc ‖β‖ < R.
pub const MIN_RINGS: usize = 8;

fn to_cmatrix(p: &Matrix2<Complex64>) -> CMatrix {
    CMatrix::from_iterator(2, 2, p.iter().copied())
}

/// Negative eigenprojector of the Clifford block of a nonzero in-plane β,
/// with the plane identified with span{e₁, e₂} of the standard frame.
pub fn boundary_projector(beta: &Vector2<f64>) -> Result<Matrix2<Complex64>, SectionError> {
    let frame = [Vector3::x(), Vector3::y(), Vector3::z()];
    boundary_projector_in(&frame, beta)
}

/// As [`boundary_projector`] for β = β₁e₁ + β₂e₂ in an arbitrary frame.
pub fn boundary_projector_in(
    frame: &[Vector3<f64>; 3],
    beta: &Vector2<f64>,
) -> Result<Matrix2<Complex64>, SectionError> {
    let norm = beta.norm();
    if norm == 0.0 || !norm.is_finite() {
        return Err(SectionError::ZeroBeta);
    }
    let u = -(frame[0] * beta.x + frame[1] * beta.y) / norm;
    Ok(bloch_projector(&u))
}

/// Reference continuation of the boundary values u = −β̂ over the disc of
/// radius R, wrapping a degree-`n` bubble around the sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BubbleContinuation {
    pub n: i64,
    pub radius: f64,
}

pub fn bubble_continuation(n: i64, radius: f64) -> BubbleContinuation {
    BubbleContinuation { n, radius }
}

impl BubbleContinuation {
    /// Bloch vector at polar coordinates (r, θ) of the β-plane; the forced
    /// value −(cos θ, sin θ, 0) for r ≥ R.
    pub fn eval(&self, r: f64, theta: f64) -> Vector3<f64> {
        let big_r = self.radius;
        if r >= big_r {
            Vector3::new(-theta.cos(), -theta.sin(), 0.0)
        } else if r >= big_r / 2.0 {
            let phi = PI * (2.0 * r - big_r) / (2.0 * big_r);
            Vector3::new(-phi.sin() * theta.cos(), -phi.sin() * theta.sin(), -phi.cos())
        } else {
            let big_theta = PI * (1.0 - 2.0 * r / big_r);
            let nt = self.n as f64 * theta;
            Vector3::new(big_theta.sin() * nt.cos(), big_theta.sin() * nt.sin(), -big_theta.cos())
        }
    }
}

fn check_grid(n: usize) -> Result<usize, SectionError> {
    let boundary = ((n.saturating_sub(1)) as f64 / DISC_OVERSHOOT).floor() as usize;
    if boundary < MIN_RINGS {
        return Err(SectionError::Grid(format!(
            "N = {n} puts only {boundary} rings inside the disc, need at least {MIN_RINGS}"
        )));
    }
    Ok(boundary)
}

/// Polar field (1 + u·E)/2 for the continuation `bubble` on an N×N grid; the
/// Bloch vector is lifted from frame coordinates to ℝ³.
pub fn polar_disc_field(
    frame: &[Vector3<f64>; 3],
    bubble: &BubbleContinuation,
    n: usize,
) -> Result<ProjectorField, SectionError> {
    let boundary_ring = check_grid(n)?;
    let grid = FieldGrid::Polar {
        rings: n,
        angles: n,
        dr: bubble.radius / boundary_ring as f64,
        boundary_ring,
    };
    let values = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let c = grid.coords(idx);
            let u = bubble.eval(c[0], c[1]);
            let lifted = frame[0] * u.x + frame[1] * u.y + frame[2] * u.z;
            to_cmatrix(&bloch_projector(&lifted))
        })
        .collect();
    Ok(ProjectorField {
        grid,
        dim: 2,
        block: None,
        coset: None,
        frame: Some(*frame),
        values,
    })
}

// Rank-one ℓ: the disc is an interval and the boundary values ∓e₁ at β = ±R
// are joined through the south pole; every continuation is homotopic to it.
fn line_field(frame: &[Vector3<f64>; 3], radius: f64, n: usize) -> Result<ProjectorField, SectionError> {
    let boundary = check_grid(n)?;
    let dr = radius / boundary as f64;
    let half = ((DISC_OVERSHOOT * radius) / dr).ceil() as usize;
    let grid = FieldGrid::Line { half, dr, boundary };
    let values = (0..grid.len())
        .map(|idx| {
            let beta = grid.coords(idx)[0];
            let phi = 0.5 * PI * (beta / radius).clamp(-1.0, 1.0);
            let u = Vector3::new(-phi.sin(), 0.0, -phi.cos());
            let lifted = frame[0] * u.x + frame[1] * u.y + frame[2] * u.z;
            to_cmatrix(&bloch_projector(&lifted))
        })
        .collect();
    Ok(ProjectorField {
        grid,
        dim: 2,
        block: None,
        coset: None,
        frame: Some(*frame),
        values,
    })
}

// Blocks Σ_b with b ∉ ℓ_ℤ never reach the gap: P is the positive spectral
// projector of the Dirac block, sampled over the base torus.
fn forced_block_field(lattice: &ParameterLattice, b: &IVec3, n: usize) -> ProjectorField {
    let gens = lattice.generators();
    let grid = FieldGrid::Chart {
        n1: n,
        n2: if gens.len() == 2 { n } else { 1 },
    };
    let values = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let beta = forced_beta(gens, b, &grid.coords(idx));
            to_cmatrix(&bloch_projector(&(-beta / beta.norm())))
        })
        .collect();
    ProjectorField {
        grid,
        dim: 2,
        block: Some(*b),
        coset: None,
        frame: None,
        values,
    }
}

pub(crate) fn forced_beta(gens: &[IVec3], b: &IVec3, s: &[f64]) -> Vector3<f64> {
    let mut theta = ivec::to_real(b);
    for (g, si) in gens.iter().zip(s) {
        theta += ivec::to_real(g) * *si;
    }
    theta * TAU
}

/// Lattice points b with |b|∞ ≤ 1 off ℓ_ℤ, whose forced blocks are sampled.
pub(crate) fn sampled_forced_blocks(lattice: &ParameterLattice) -> Vec<IVec3> {
    let mut out = Vec::new();
    for x in -1..=1 {
        for y in -1..=1 {
            for z in -1..=1 {
                let b = [x, y, z];
                if !lattice.contains_saturated(&b) {
                    out.push(b);
                }
            }
        }
    }
    out
}

/// Projector fields of the trivial-case section with degrees g: one disc
/// (or interval) field per coset of ℓ_ℤ/ℓ, followed by forced fields for the
/// nearest off-lattice blocks.
pub fn build_projector_field_trivial(
    lattice: &ParameterLattice,
    descriptor: &SectionDescriptor,
    n: usize,
) -> Result<Vec<ProjectorField>, SectionError> {
    let degrees = match &descriptor.class {
        SectionClass::Trivial { degrees } => degrees,
        SectionClass::Nontrivial { .. } => return Err(SectionError::CaseMismatch),
    };
    let cosets = lattice.cosets();
    if degrees.len() != cosets.len() {
        return Err(SectionError::InvalidDescriptor(format!(
            "{} degrees given for {} cosets",
            degrees.len(),
            cosets.len()
        )));
    }
    if !(descriptor.radius > 0.0 && descriptor.radius.is_finite()) {
        return Err(SectionError::InvalidDescriptor(format!("R = {} must be positive", descriptor.radius)));
    }
    let frame = lattice.orthonormal_frame();
    let mut fields = Vec::with_capacity(cosets.len());
    for (idx, (coset, entry)) in cosets.iter().zip(degrees).enumerate() {
        if entry.coset != *coset {
            return Err(SectionError::InvalidDescriptor(format!(
                "degree {} is attached to {:?}, expected coset {:?}",
                idx, entry.coset, coset
            )));
        }
        let mut field = if lattice.rank() == 2 {
            polar_disc_field(&frame, &bubble_continuation(entry.degree, descriptor.radius), n)?
        } else {
            if entry.degree != 0 {
                return Err(SectionError::InvalidDescriptor(
                    "a rank-one parameter lattice admits only zero degrees".into(),
                ));
            }
            line_field(&frame, descriptor.radius, n)?
        };
        field.block = Some(*coset);
        field.coset = Some(idx);
        fields.push(field);
    }
    fields.extend(sampled_forced_blocks(lattice).iter().map(|b| forced_block_field(lattice, b, n)));
    Ok(fields)
}
