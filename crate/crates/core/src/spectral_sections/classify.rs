use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::SectionError;
use crate::flow_index::index_element;
use crate::spectrum_engine::{enumerate_spectrum, HarmonicForm, ZERO_TOL};
use crate::torus_geometry::{IVec3, ParameterLattice, SpincStructure};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetDegree {
    pub coset: IVec3,
    pub degree: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "lowercase")]
pub enum SectionClass {
    /// A rank-r subbundle F of the kernel bundle B×ℂ^h with c₁(F) = chern.
    Nontrivial { rank: i64, chern: i64 },
    /// A π₂(ℂP¹) class for every coset of ℓ_ℤ/ℓ, in coset order.
    Trivial { degrees: Vec<CosetDegree> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionDescriptor {
    #[serde(flatten)]
    pub class: SectionClass,
    #[serde(rename = "R")]
    pub radius: f64,
}

impl SectionDescriptor {
    pub fn nontrivial(rank: i64, chern: i64, radius: f64) -> Self {
        SectionDescriptor { class: SectionClass::Nontrivial { rank, chern }, radius }
    }

    /// Degrees listed in the coset order of `lattice`.
    pub fn trivial(lattice: &ParameterLattice, degrees: &[i64], radius: f64) -> Result<Self, SectionError> {
        if degrees.len() != lattice.cosets().len() {
            return Err(SectionError::InvalidDescriptor(format!(
                "{} degrees given for {} cosets",
                degrees.len(),
                lattice.cosets().len()
            )));
        }
        let degrees = lattice
            .cosets()
            .iter()
            .zip(degrees)
            .map(|(c, &degree)| CosetDegree { coset: *c, degree })
            .collect();
        Ok(SectionDescriptor { class: SectionClass::Trivial { degrees }, radius })
    }

    pub fn degree_values(&self) -> Option<Vec<i64>> {
        match &self.class {
            SectionClass::Trivial { degrees } => Some(degrees.iter().map(|d| d.degree).collect()),
            SectionClass::Nontrivial { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KDifference {
    pub delta_rank: i64,
    pub delta_c1: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankClass {
    pub rank: i64,
    pub chern_free: bool,
}

/// A minimal system of infinitesimal spectral sections.
///
/// Nontrivial k̂: one class per subbundle of the kernel bundle, i.e. a rank
/// and, for proper nonzero subbundles over a 2-dimensional base, a free Chern
/// number. Trivial k̂: the degree maps g agreeing with the reference `g0`
/// away from `base_coset`, with one free integer there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "lowercase")]
pub enum Classification {
    Nontrivial {
        h: i64,
        r_inf: f64,
        epsilon_bound: f64,
        ranks: Vec<RankClass>,
        representatives: Vec<SectionDescriptor>,
    },
    Trivial {
        r_inf: f64,
        epsilon_bound: f64,
        cosets: Vec<IVec3>,
        reference: Vec<i64>,
        base_coset: usize,
        free_integer: bool,
        representatives: Vec<SectionDescriptor>,
    },
}

impl Classification {
    pub fn representatives(&self) -> &[SectionDescriptor] {
        match self {
            Classification::Nontrivial { representatives, .. }
            | Classification::Trivial { representatives, .. } => representatives,
        }
    }

    pub fn epsilon_bound(&self) -> f64 {
        match self {
            Classification::Nontrivial { epsilon_bound, .. }
            | Classification::Trivial { epsilon_bound, .. } => *epsilon_bound,
        }
    }
}

fn require_sections(spinc: &SpincStructure, lattice: &ParameterLattice) -> Result<(), SectionError> {
    let idx = index_element(spinc, lattice);
    if idx.is_zero() {
        Ok(())
    } else {
        Err(SectionError::NoSections(idx.values))
    }
}

/// Largest R for which the small-R construction applies.
///
/// Nontrivial k̂: the smallest nonzero |eigenvalue|, constant over B.
/// Trivial k̂: 2π times the distance from ℓ⊗ℝ to the nearest integer point
/// off it, below which only the blocks Σ_b with b ∈ ℓ_ℤ enter [−R, R].
pub fn epsilon_bound(spinc: &SpincStructure, lattice: &ParameterLattice) -> Result<f64, SectionError> {
    require_sections(spinc, lattice)?;
    match spinc.norm_k() {
        Some(nk) => {
            let landau = (TAU * spinc.h() as f64 * nk).sqrt();
            let cutoff = (TAU / nk).min(landau) * 1.5;
            let slice = enumerate_spectrum(spinc, &HarmonicForm::zero(), cutoff)
                .expect("positive cutoff");
            Ok(slice
                .entries
                .iter()
                .map(|e| e.value.abs())
                .filter(|&v| v > ZERO_TOL)
                .fold(f64::INFINITY, f64::min))
        }
        None => Ok(TAU * lattice.min_offplane_distance()),
    }
}

pub fn classify_small_r(spinc: &SpincStructure, lattice: &ParameterLattice) -> Result<Classification, SectionError> {
    let eps = epsilon_bound(spinc, lattice)?;
    let radius = eps / 2.0;
    if !spinc.is_trivial() {
        let h = spinc.h();
        let chern_free = |r: i64| 0 < r && r < h && lattice.rank() == 2;
        let ranks: Vec<RankClass> = (0..=h).map(|rank| RankClass { rank, chern_free: chern_free(rank) }).collect();
        let representatives = ranks
            .iter()
            .flat_map(|rc| {
                let cherns: &[i64] = if rc.chern_free { &[-1, 0, 1] } else { &[0] };
                cherns.iter().map(move |&d| SectionDescriptor::nontrivial(rc.rank, d, radius))
            })
            .collect();
        return Ok(Classification::Nontrivial { h, r_inf: 0.0, epsilon_bound: eps, ranks, representatives });
    }
    let cosets = lattice.cosets().to_vec();
    let reference = vec![0; cosets.len()];
    let base_coset = cosets.iter().position(|c| *c == [0, 0, 0]).unwrap_or(0);
    let free_integer = lattice.rank() == 2;
    let mut representatives = vec![SectionDescriptor::trivial(lattice, &reference, radius)?];
    if free_integer {
        for z in [-1, 1] {
            let mut g = reference.clone();
            g[base_coset] = z;
            representatives.push(SectionDescriptor::trivial(lattice, &g, radius)?);
        }
    }
    Ok(Classification::Trivial {
        r_inf: 0.0,
        epsilon_bound: eps,
        cosets,
        reference,
        base_coset,
        free_integer,
        representatives,
    })
}

/// The member of the minimal system J (reference g0 ≡ 0, free coset
/// `base_coset`) in the K-class of a trivial-case descriptor.
pub fn minimal_representative(
    descriptor: &SectionDescriptor,
    base_coset: usize,
) -> Result<SectionDescriptor, SectionError> {
    match &descriptor.class {
        SectionClass::Trivial { degrees } => {
            if base_coset >= degrees.len() {
                return Err(SectionError::InvalidDescriptor(format!("no coset {base_coset}")));
            }
            let total: i64 = degrees.iter().map(|d| d.degree).sum();
            let degrees = degrees
                .iter()
                .enumerate()
                .map(|(i, d)| CosetDegree { coset: d.coset, degree: if i == base_coset { total } else { 0 } })
                .collect();
            Ok(SectionDescriptor { class: SectionClass::Trivial { degrees }, radius: descriptor.radius })
        }
        SectionClass::Nontrivial { .. } => Err(SectionError::CaseMismatch),
    }
}

/// Class of Im P₁ − Im P₂ in K(B) ≅ ℤ⊕ℤ.
pub fn k_difference(d1: &SectionDescriptor, d2: &SectionDescriptor) -> Result<KDifference, SectionError> {
    match (&d1.class, &d2.class) {
        (SectionClass::Nontrivial { rank: r1, chern: c1 }, SectionClass::Nontrivial { rank: r2, chern: c2 }) => {
            Ok(KDifference { delta_rank: r1 - r2, delta_c1: c1 - c2 })
        }
        (SectionClass::Trivial { degrees: g1 }, SectionClass::Trivial { degrees: g2 }) => {
            let same_cosets = g1.len() == g2.len() && g1.iter().zip(g2).all(|(a, b)| a.coset == b.coset);
            if !same_cosets {
                return Err(SectionError::InvalidDescriptor("descriptors use different coset lists".into()));
            }
            let sum = |g: &[CosetDegree]| g.iter().map(|d| d.degree).sum::<i64>();
            Ok(KDifference { delta_rank: 0, delta_c1: sum(g1) - sum(g2) })
        }
        _ => Err(SectionError::CaseMismatch),
    }
}
