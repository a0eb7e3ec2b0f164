use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::lattice::{dirac_from_lattice, FluxLattice};
use super::solver::{grid_permutation, lowest_eigenpairs, BandHermitian};
use super::sparse::CsrMatrix;
use crate::error::OracleError;
use crate::spectrum_engine::{enumerate_spectrum, BranchLabel, HarmonicForm, Sign, SpectrumEntry, SpectrumSlice};
use crate::torus_geometry::SpincStructure;

/// Mean kinetic energy a²⟨−Δ_A⟩ separating continuum-like modes (near 0)
/// from the species doubler (near 4).
pub const DOUBLER_THRESHOLD: f64 = 2.0;
/// Eigenvalues of D² closer than this fraction of the level spacing are
/// clustered into one level.
pub const CLUSTER_GAP: f64 = 0.3;
/// Ritz residual tolerance relative to ‖D⁺D⁻‖.
pub const SOLVER_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub h: i64,
    #[serde(rename = "N")]
    pub n: usize,
    pub norm_k: f64,
    /// Level spacing 2πh‖k‖ of the continuum operator.
    pub unit: f64,
    /// Continuum-like eigenvalues of D² on the negative-chirality half, in
    /// ascending order, levels 0..=n_max.
    pub computed_levels: Vec<f64>,
    pub predicted_levels: Vec<f64>,
    /// Eigenvalues of the same half attributed to the species doubler.
    pub doubler_levels: Vec<f64>,
    pub zero_modes: usize,
    /// Relative error of each nonzero level (worst member), n = 1..=n_max.
    pub level_errors: Vec<f64>,
    pub max_rel_error: f64,
    pub iterations: usize,
}

/// Side length used for the zero-mode count at flux h.
pub fn zero_mode_baseline(h: i64) -> usize {
    let m = (8.0 * (h as f64).sqrt()).ceil() as usize;
    (m * 8).max(32)
}

/// Side length used for the Landau-level comparison.
pub const LANDAU_BASELINE: usize = 32;

/// Low spectrum of D² = D⁻D⁺ ⊕ D⁺D⁻ on the flux lattice compared with the
/// Landau levels 2πh‖k‖n.
///
/// Only the negative-chirality half D⁺D⁻ is diagonalized: with this
/// orientation of the flux the continuum-like zero modes lie in ker D⁻,
/// while ker D⁺ belongs to the doubler, and the nonzero eigenvalues repeat
/// on the other half. Each
/// eigenvalue cluster is split into continuum-like and doubler modes by
/// diagonalizing the kinetic form inside the cluster.
pub fn landau_check(h: i64, norm_k: f64, n: usize, n_max: usize) -> Result<OracleReport, OracleError> {
    if !(norm_k > 0.0 && norm_k.is_finite()) {
        return Err(OracleError::Parameters(format!("‖k‖ = {norm_k} must be positive")));
    }
    let lattice = FluxLattice::landau(h, n, 1.0 / norm_k)?;
    let unit = TAU * h as f64 * norm_k;
    let hu = h as usize;
    let dm = lattice.d_plus().adjoint();
    let perm = grid_permutation(n);
    let shift = unit / 100.0;
    let gram = BandHermitian::gram(&dm, &perm, 2 * n + 2, shift);
    // levels 0..=n_max+1, doubled by the doubler above level 0
    let wanted = (2 * n_max + 3) * hu;
    let dm_band = dm.permuted(&perm);
    let dm_band_adj = dm_band.adjoint();
    let apply = |x: &[Complex64]| -> Vec<Complex64> {
        let y = dm_band_adj.mul_vec(&dm_band.mul_vec(x));
        y.iter().zip(x).map(|(a, b)| a + b * shift).collect()
    };
    let pairs = lowest_eigenpairs(&gram, apply, shift, wanted, wanted + 8, SOLVER_TOL, 0x5eed + n as u64)?;
    let m = n * n;
    let vectors = DMatrix::from_fn(m, wanted, |s, c| pairs.vectors[(perm[s], c)]);

    let values = &pairs.values[..wanted];
    let mut clusters: Vec<Vec<usize>> = vec![vec![0]];
    for i in 1..wanted {
        if values[i] - values[i - 1] > CLUSTER_GAP * unit {
            clusters.push(Vec::new());
        }
        clusters.last_mut().unwrap().push(i);
    }
    let mut report = OracleReport {
        h,
        n,
        norm_k,
        unit,
        computed_levels: Vec::new(),
        predicted_levels: Vec::new(),
        doubler_levels: Vec::new(),
        zero_modes: 0,
        level_errors: Vec::new(),
        max_rel_error: 0.0,
        iterations: pairs.iterations,
    };
    for (level, members) in clusters.iter().enumerate().take(n_max + 1) {
        let width = values[*members.last().unwrap()] - values[members[0]];
        if width > CLUSTER_GAP * unit {
            return Err(OracleError::Inconclusive(format!("level {level} spreads over {width:e}")));
        }
        let x = DMatrix::from_fn(m, members.len(), |s, c| vectors[(s, members[c])]);
        let cols: Vec<Vec<Complex64>> = (0..members.len()).map(|c| x.column(c).iter().copied().collect()).collect();
        let kin = DMatrix::from_fn(members.len(), members.len(), |i, j| lattice.kinetic_form(&cols[i], &cols[j]));
        let kin = (&kin + kin.adjoint()) * Complex64::new(0.5, 0.0);
        let keig = kin.symmetric_eigen();
        if keig.eigenvalues.iter().any(|&k| (DOUBLER_THRESHOLD - k).abs() < 1.0) {
            return Err(OracleError::Inconclusive(format!(
                "level {level} has modes with kinetic energy near the doubler threshold"
            )));
        }
        let split = |physical: bool| -> Vec<f64> {
            let idx: Vec<usize> = (0..members.len()).filter(|&i| (keig.eigenvalues[i] < DOUBLER_THRESHOLD) == physical).collect();
            if idx.is_empty() {
                return Vec::new();
            }
            let basis = &x * DMatrix::from_fn(members.len(), idx.len(), |r, c| keig.eigenvectors[(r, idx[c])]);
            let hb: Vec<Vec<Complex64>> = (0..idx.len()).map(|c| dm.mul_vec(basis.column(c).as_slice())).collect();
            let hmat = DMatrix::from_fn(idx.len(), idx.len(), |i, j| {
                hb[i].iter().zip(&hb[j]).map(|(a, b)| a.conj() * b).sum::<Complex64>()
            });
            let hmat = (&hmat + hmat.adjoint()) * Complex64::new(0.5, 0.0);
            let mut v: Vec<f64> = hmat.symmetric_eigenvalues().iter().copied().collect();
            v.sort_by(f64::total_cmp);
            v
        };
        let physical = split(true);
        report.doubler_levels.extend(split(false));
        if physical.len() != hu {
            return Err(OracleError::Inconclusive(format!(
                "level {level} has {} continuum-like modes, expected {h}",
                physical.len()
            )));
        }
        let predicted = unit * level as f64;
        if level == 0 {
            // |λ| of D is the singular value of D⁻
            report.zero_modes = physical.iter().filter(|&&v| v.max(0.0).sqrt() < 1e-6 * unit.sqrt()).count();
        } else {
            let err = physical.iter().map(|v| (v - predicted).abs() / predicted).fold(0.0, f64::max);
            report.level_errors.push(err);
            report.max_rel_error = report.max_rel_error.max(err);
        }
        report.computed_levels.extend(physical);
        report.predicted_levels.extend(std::iter::repeat(predicted).take(hu));
    }
    if report.computed_levels.len() != (n_max + 1) * hu {
        return Err(OracleError::Inconclusive("fewer levels resolved than requested".into()));
    }
    report.doubler_levels.sort_by(f64::total_cmp);
    Ok(report)
}

/// Full spectrum of a small Hermitian matrix by dense diagonalization.
pub fn dense_spectrum(matrix: &CsrMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = matrix.to_dense().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Dense spectrum of the lattice Dirac operator; intended for N ≤ 16.
pub fn dense_dirac_spectrum(lattice: &FluxLattice) -> Vec<f64> {
    dense_spectrum(&dirac_from_lattice(lattice))
}

/// Spectrum slice built from the exact fiber eigenvalues λ_l and the
/// oracle's transverse levels: ±√(λ_l² + L_n), each with multiplicity h,
/// together with the sign-0 branches. Levels beyond those in the report are
/// omitted.
pub fn assemble_3d_spectrum(
    spinc: &SpincStructure,
    form: &HarmonicForm,
    cutoff: f64,
    report: &OracleReport,
) -> Result<SpectrumSlice, OracleError> {
    let h = spinc.h();
    if spinc.is_trivial() || h != report.h {
        return Err(OracleError::Parameters("report does not belong to this Spin^c structure".into()));
    }
    let hu = h as usize;
    let levels: Vec<f64> = report
        .computed_levels
        .chunks(hu)
        .skip(1)
        .map(|c| c.iter().sum::<f64>() / c.len() as f64)
        .collect();
    let exact = enumerate_spectrum(spinc, form, cutoff).map_err(|e| OracleError::Parameters(e.to_string()))?;
    // reuse the exact λ_l branches; the transverse part comes from the oracle
    let wide = enumerate_spectrum(spinc, form, cutoff + 1.0).map_err(|e| OracleError::Parameters(e.to_string()))?;
    let mut entries: Vec<SpectrumEntry> = Vec::new();
    for e in &wide.entries {
        let BranchLabel::Nontrivial { l, sign: Sign::Zero, .. } = e.label else { continue };
        let lambda = e.value;
        if lambda.abs() <= cutoff {
            entries.push(*e);
        }
        for (i, level) in levels.iter().enumerate() {
            let value = (lambda * lambda + level).sqrt();
            if value > cutoff {
                continue;
            }
            for (sign, v) in [(Sign::Plus, value), (Sign::Minus, -value)] {
                entries.push(SpectrumEntry {
                    value: v,
                    mult: e.mult,
                    label: BranchLabel::Nontrivial { l, n: i as u64 + 1, sign },
                });
            }
        }
    }
    entries.sort_by(|a, b| a.value.total_cmp(&b.value).then(a.label.cmp(&b.label)));
    Ok(SpectrumSlice { alpha: exact.alpha, entries })
}
