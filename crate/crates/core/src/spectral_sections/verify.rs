use nalgebra::{Matrix2, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::classify::{epsilon_bound, SectionClass, SectionDescriptor};
use super::field::{CMatrix, FieldGrid, ProjectorField};
use super::nontrivial::build_projector_field_nontrivial_grid;
use super::topology::projector_defect;
use super::trivial::{build_projector_field_trivial, forced_beta};
use super::PROJECTOR_TOL;
use crate::error::SectionError;
use crate::spectrum_engine::{bloch_projector, enumerate_spectrum, HarmonicForm, ZERO_TOL};
use crate::torus_geometry::{ivec, ParameterLattice, SpincStructure};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    #[serde(rename = "R")]
    pub radius: f64,
    pub epsilon_bound: f64,
    pub fields: usize,
    pub samples: usize,
    pub max_projector_defect: f64,
    /// Largest of ‖PΠ₊ − Π₊‖ and ‖PΠ₋‖ over blocks with ‖β‖ ≥ R.
    pub max_action_defect: f64,
    pub forced_samples: usize,
    pub max_jump: f64,
    /// `max_jump` times the grid resolution.
    pub continuity_constant: f64,
}

fn to_m2(p: &CMatrix) -> Matrix2<Complex64> {
    Matrix2::new(p[(0, 0)], p[(0, 1)], p[(1, 0)], p[(1, 1)])
}

fn op_norm(m: &CMatrix) -> f64 {
    m.clone()
        .symmetric_eigenvalues()
        .iter()
        .fold(0.0f64, |acc, x| acc.max(x.abs()))
}

fn validate_radius(spinc: &SpincStructure, lattice: &ParameterLattice, radius: f64) -> Result<f64, SectionError> {
    let bound = epsilon_bound(spinc, lattice)?;
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(SectionError::InvalidDescriptor(format!("R = {radius} must be positive")));
    }
    if radius >= bound {
        return Err(SectionError::RadiusTooLarge { r: radius, bound });
    }
    Ok(bound)
}

/// Projector fields of the section described by `descriptor` on an N-point
/// grid (N×N for two-dimensional bases and discs).
pub fn build_sections(
    spinc: &SpincStructure,
    lattice: &ParameterLattice,
    descriptor: &SectionDescriptor,
    n: usize,
) -> Result<Vec<ProjectorField>, SectionError> {
    validate_radius(spinc, lattice, descriptor.radius)?;
    match (&descriptor.class, spinc.is_trivial()) {
        (SectionClass::Nontrivial { chern, .. }, false) => {
            if lattice.rank() == 1 && *chern != 0 {
                return Err(SectionError::InvalidDescriptor(
                    "bundles over a circle have no Chern number".into(),
                ));
            }
            let n2 = if lattice.rank() == 2 { n } else { 1 };
            let grid = FieldGrid::Torus { n1: n, n2 };
            Ok(vec![build_projector_field_nontrivial_grid(spinc.h() as usize, descriptor, grid)?])
        }
        (SectionClass::Trivial { .. }, true) => build_projector_field_trivial(lattice, descriptor, n),
        _ => Err(SectionError::CaseMismatch),
    }
}

// β of a 2×2 block sample in ℝ³, when the sample is in the forced region.
fn block_beta(field: &ProjectorField, lattice: &ParameterLattice, index: usize) -> Option<Vector3<f64>> {
    let c = field.grid.coords(index);
    match (field.grid, &field.frame) {
        (FieldGrid::Polar { .. }, Some(f)) => Some((f[0] * c[1].cos() + f[1] * c[1].sin()) * c[0]),
        (FieldGrid::Line { .. }, Some(f)) => Some(f[0] * c[0]),
        (FieldGrid::Chart { .. }, None) => field.block.map(|b| forced_beta(lattice.generators(), &b, &c)),
        _ => None,
    }
}

/// Checks that the fields form a spectral section for level R: Hermitian
/// idempotents of constant rank, the positive spectral projection on every
/// eigenspace outside [−R, R], and a bounded jump between grid neighbours.
pub fn verify_spectral_section(
    fields: &[ProjectorField],
    spinc: &SpincStructure,
    lattice: &ParameterLattice,
    radius: f64,
) -> Result<VerifyReport, SectionError> {
    let bound = validate_radius(spinc, lattice, radius)?;
    let mut report = VerifyReport {
        radius,
        epsilon_bound: bound,
        fields: fields.len(),
        samples: 0,
        max_projector_defect: 0.0,
        max_action_defect: 0.0,
        forced_samples: 0,
        max_jump: 0.0,
        continuity_constant: 0.0,
    };
    for field in fields {
        let n = field.values.len();
        report.samples += n;
        let expected_rank = field.values.first().map(|p| p.trace().re.round() as usize).unwrap_or(0);
        for (index, p) in field.values.iter().enumerate() {
            let defect = projector_defect(p);
            report.max_projector_defect = report.max_projector_defect.max(defect);
            if defect > PROJECTOR_TOL {
                return Err(SectionError::NotProjector { index, defect });
            }
            let rank = p.trace().re.round() as usize;
            if rank != expected_rank {
                return Err(SectionError::RankJump { index, expected: expected_rank, found: rank });
            }
        }
        if spinc.is_trivial() {
            if field.dim != 2 || expected_rank != 1 {
                return Err(SectionError::CaseMismatch);
            }
            for index in 0..n {
                let Some(beta) = block_beta(field, lattice, index) else {
                    return Err(SectionError::Check {
                        index,
                        coords: field.grid.coords(index),
                        what: "field does not locate its block".into(),
                    });
                };
                let norm = beta.norm();
                if norm < radius * (1.0 - 1e-12) {
                    continue;
                }
                report.forced_samples += 1;
                let plus = bloch_projector(&(-beta / norm));
                let minus = bloch_projector(&(beta / norm));
                let p = to_m2(&field.values[index]);
                let defect = (p * plus - plus).norm().max((p * minus).norm());
                report.max_action_defect = report.max_action_defect.max(defect);
                if defect > PROJECTOR_TOL {
                    return Err(SectionError::Check {
                        index,
                        coords: field.grid.coords(index),
                        what: format!("not the positive spectral projection at |beta| = {norm} (defect {defect:e})"),
                    });
                }
            }
        } else {
            check_nontrivial(field, spinc, lattice, radius)?;
        }
        let jump = field
            .grid
            .neighbours()
            .par_iter()
            .map(|&(a, b)| op_norm(&(&field.values[a] - &field.values[b])))
            .reduce(|| 0.0, f64::max);
        report.max_jump = report.max_jump.max(jump);
        report.continuity_constant = report.continuity_constant.max(jump * field.grid.resolution() as f64);
    }
    Ok(report)
}

// Inside [−R, R] the spectrum must consist of the h-dimensional kernel only,
// on which the field acts; everywhere else P is the positive projection.
fn check_nontrivial(
    field: &ProjectorField,
    spinc: &SpincStructure,
    lattice: &ParameterLattice,
    radius: f64,
) -> Result<(), SectionError> {
    let h = spinc.h() as usize;
    if field.dim != h {
        return Err(SectionError::InvalidDescriptor(format!("field dimension {} differs from h = {h}", field.dim)));
    }
    let gens = lattice.generators();
    let bad = (0..field.values.len()).into_par_iter().find_first(|&index| {
        let s = field.grid.coords(index);
        let mut turns = Vector3::zeros();
        for (g, si) in gens.iter().zip(&s) {
            turns += ivec::to_real(g) * *si;
        }
        let slice = enumerate_spectrum(spinc, &HarmonicForm::from_turns(turns), radius).expect("positive cutoff");
        let kernel: u64 = slice.entries.iter().filter(|e| e.value.abs() <= ZERO_TOL).map(|e| e.mult).sum();
        kernel != h as u64 || slice.total_multiplicity() != kernel
    });
    match bad {
        Some(index) => Err(SectionError::Check {
            index,
            coords: field.grid.coords(index),
            what: "spectrum in [-R, R] is not exactly the kernel".into(),
        }),
        None => Ok(()),
    }
}
