//! Spectral flow along integer loops, the K¹ index of the family over
//! B = (ℓ⊗ℝ)/ℓ, and the existence criterion for spectral sections.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::FlowError;
use crate::spectrum_engine::{enumerate_spectrum, lambda_l, BranchLabel, HarmonicForm, Sign};
use crate::torus_geometry::{cup_pairing, ivec, IVec3, ParameterLattice, SpincStructure};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub t: f64,
    pub branch: BranchLabel,
    pub dir: i8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowResult {
    #[serde(rename = "loop")]
    pub loop_vector: IVec3,
    pub flow: i64,
    pub crossings: Vec<Crossing>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexElement {
    pub values: Vec<i64>,
}

impl IndexElement {
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }
}

/// Sample points closer than this to a zero trigger local refinement.
pub const DEGENERACY_TOL: f64 = 1e-9;

pub fn spectral_flow_closed_form(spinc: &SpincStructure, a: &IVec3) -> i64 {
    cup_pairing(&spinc.khat(), a)
}

/// A sign change of a tracked branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignChange {
    pub t: f64,
    pub dir: i8,
}

fn raw_sign(x: f64) -> i8 {
    if x.abs() <= DEGENERACY_TOL {
        0
    } else if x > 0.0 {
        1
    } else {
        -1
    }
}

// One-sided sign limit at t; `side` is +1 for the right limit, -1 for the left.
fn sign_limit<F: Fn(f64) -> f64>(f: &F, t: f64, side: f64, step: f64) -> i8 {
    let mut delta = step * 1e-6;
    for _ in 0..12 {
        let s = raw_sign(f(t + side * delta));
        if s != 0 {
            return s;
        }
        delta *= 4.0;
    }
    0
}

/// Counts zero crossings of a continuous branch over the half-open loop
/// `[0, 1)`, sampled at `samples` equally spaced points.
///
/// Signs are right-continuous, so a crossing exactly at `t = 0` belongs to
/// this loop and one exactly at `t = 1` to the next. Returns the crossings and
/// the sample times that landed within [`DEGENERACY_TOL`] of a zero.
pub fn track_sign_changes<F: Fn(f64) -> f64>(f: F, samples: usize) -> (Vec<SignChange>, Vec<f64>) {
    let step = 1.0 / samples as f64;
    let mut degenerate = Vec::new();
    let mut sigma = |t: f64| -> i8 {
        let s = raw_sign(f(t));
        if s != 0 {
            return s;
        }
        degenerate.push(t);
        sign_limit(&f, t, 1.0, step)
    };
    let mut seq: Vec<(f64, i8)> = Vec::with_capacity(samples + 2);
    seq.push((0.0, sign_limit(&f, 0.0, -1.0, step)));
    for j in 0..samples {
        let t = j as f64 * step;
        seq.push((t, sigma(t)));
    }
    seq.push((1.0, sign_limit(&f, 1.0, -1.0, step)));

    let mut out = Vec::new();
    for (idx, w) in seq.windows(2).enumerate() {
        let ((t0, s0), (t1, s1)) = (w[0], w[1]);
        if s0 == s1 || s0 == 0 || s1 == 0 {
            continue;
        }
        let dir = if s1 > s0 { 1 } else { -1 };
        if idx == 0 {
            out.push(SignChange { t: 0.0, dir });
            continue;
        }
        // bisection on the sign, keeping the left end on the old side
        let (mut lo, mut hi) = (t0, t1);
        for _ in 0..64 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let v = f(mid);
            if v != 0.0 && (v > 0.0) == (s0 > 0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t = hi;
        out.push(SignChange { t: t.min(1.0 - f64::EPSILON), dir });
    }
    (out, degenerate)
}

/// Spectral flow of the loop α(t) = 2πt·a, t ∈ [0,1), tracked numerically.
pub fn spectral_flow_numeric(
    spinc: &SpincStructure,
    a: &IVec3,
    samples: usize,
) -> Result<FlowResult, FlowError> {
    spectral_flow_from(spinc, &HarmonicForm::zero(), a, samples)
}

/// As [`spectral_flow_numeric`], for the loop α(t) = α₀ + 2πt·a.
pub fn spectral_flow_from(
    spinc: &SpincStructure,
    start: &HarmonicForm,
    a: &IVec3,
    samples: usize,
) -> Result<FlowResult, FlowError> {
    if ivec::is_zero(a) {
        return Err(FlowError::ZeroLoop);
    }
    if samples < 16 {
        return Err(FlowError::TooFewSamples(samples));
    }
    let closed = spectral_flow_closed_form(spinc, a);
    let path = |t: f64| HarmonicForm::from_turns(start.turns() + ivec::to_real(a) * t);
    let mut result = FlowResult {
        loop_vector: *a,
        flow: 0,
        crossings: Vec::new(),
        warnings: Vec::new(),
    };
    match spinc.k() {
        Some(k) => {
            // only the sign-0 branches λ_l can vanish; the others are bounded
            // away from zero by the first Landau level
            let q = ivec::dot(&k, a);
            let t0 = start.pairing_turns(&k);
            let reach = q.abs() + t0.abs().ceil() as i64 + 1;
            let h = spinc.h();
            let per_branch: Vec<(i64, Vec<SignChange>, Vec<f64>)> = (-reach..=reach)
                .into_par_iter()
                .map(|l| {
                    let f = |t: f64| lambda_l(spinc, &path(t), l).expect("nontrivial structure");
                    let (changes, degenerate) = track_sign_changes(f, samples);
                    (l, changes, degenerate)
                })
                .collect();
            for (l, changes, degenerate) in per_branch {
                for t in degenerate {
                    result.warnings.push(format!(
                        "branch l={l} within {DEGENERACY_TOL:e} of zero at sample t={t}; refined locally"
                    ));
                }
                for c in changes {
                    for _ in 0..h {
                        result.crossings.push(Crossing {
                            t: c.t,
                            branch: BranchLabel::Nontrivial { l, n: 0, sign: Sign::Zero },
                            dir: c.dir,
                        });
                        result.flow += c.dir as i64;
                    }
                }
            }
            result
                .crossings
                .sort_by(|x, y| x.t.total_cmp(&y.t).then(x.branch.cmp(&y.branch)));
        }
        None => {
            // the spectrum is symmetric at every sample, so nothing can flow
            let cutoff = std::f64::consts::TAU * 1.5;
            for j in 0..samples {
                let t = j as f64 / samples as f64;
                let slice = enumerate_spectrum(spinc, &path(t), cutoff)
                    .expect("positive cutoff");
                let v = slice.expanded_values();
                let paired = v.iter().zip(v.iter().rev()).all(|(x, y)| (x + y).abs() < 1e-12);
                if !paired {
                    result.warnings.push(format!("spectrum not symmetric at t={t}"));
                }
            }
        }
    }
    if result.flow != closed {
        return Err(FlowError::Mismatch { numeric: result.flow, closed });
    }
    Ok(result)
}

/// Values of x ↦ ⟨k̂ ∪ x, [T³]⟩ on the generators of ℓ.
pub fn index_element(spinc: &SpincStructure, lattice: &ParameterLattice) -> IndexElement {
    let khat = spinc.khat();
    IndexElement {
        values: lattice.generators().iter().map(|g| cup_pairing(&khat, g)).collect(),
    }
}

pub fn sections_exist(spinc: &SpincStructure, lattice: &ParameterLattice) -> bool {
    index_element(spinc, lattice).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus_geometry::{decompose_spinc, saturate_and_cosets};
    use nalgebra::Vector3;

    #[test]
    fn closed_form_examples() {
        assert_eq!(spectral_flow_closed_form(&decompose_spinc([0, 0, 2]), &[0, 0, 1]), 2);
        assert_eq!(spectral_flow_closed_form(&decompose_spinc([0, 0, 0]), &[1, 1, 1]), 0);
        assert_eq!(spectral_flow_closed_form(&decompose_spinc([1, 2, 3]), &[1, 0, 0]), 1);
    }

    #[test]
    fn numeric_examples() {
        let r = spectral_flow_numeric(&decompose_spinc([0, 0, 2]), &[0, 0, 1], 64).unwrap();
        assert_eq!(r.flow, 2);
        assert_eq!(r.crossings.len(), 2);
        assert!(r.crossings.iter().all(|c| c.dir == 1 && c.t == 0.0));

        let r = spectral_flow_numeric(&decompose_spinc([0, 0, 2]), &[1, 0, 0], 64).unwrap();
        assert_eq!((r.flow, r.crossings.len()), (0, 0));

        let r = spectral_flow_numeric(&decompose_spinc([1, 1, 0]), &[1, 0, 0], 16).unwrap();
        assert_eq!(r.flow, 1);

        let r = spectral_flow_numeric(&decompose_spinc([0, 0, 0]), &[1, 2, 0], 16).unwrap();
        assert_eq!(r.flow, 0);
        assert!(r.crossings.is_empty() && r.warnings.is_empty());
    }

    #[test]
    fn numeric_errors() {
        let s = decompose_spinc([0, 0, 1]);
        assert_eq!(spectral_flow_numeric(&s, &[0, 0, 0], 64), Err(FlowError::ZeroLoop));
        assert_eq!(spectral_flow_numeric(&s, &[0, 0, 1], 8), Err(FlowError::TooFewSamples(8)));
    }

    #[test]
    fn interior_crossings_are_located() {
        let s = decompose_spinc([0, 0, 1]);
        let start = HarmonicForm::from_turns(Vector3::new(0.0, 0.0, 0.3));
        let r = spectral_flow_from(&s, &start, &[0, 0, -2], 16).unwrap();
        assert_eq!(r.flow, -2);
        let ts: Vec<f64> = r.crossings.iter().map(|c| c.t).collect();
        // λ_l(t) ∝ l + 0.3 − 2t vanishes at t = 0.15 and t = 0.65
        assert!((ts[0] - 0.15).abs() < 1e-12 && (ts[1] - 0.65).abs() < 1e-12, "{ts:?}");
        assert!(r.crossings.iter().all(|c| c.dir == -1));
    }

    #[test]
    fn generic_tracker_on_a_cosine() {
        let (c, _) = track_sign_changes(|t| (std::f64::consts::TAU * t).cos(), 32);
        assert_eq!(c.len(), 2);
        assert!((c[0].t - 0.25).abs() < 1e-12 && c[0].dir == -1);
        assert!((c[1].t - 0.75).abs() < 1e-12 && c[1].dir == 1);
    }

    #[test]
    fn index_examples() {
        let s = decompose_spinc([0, 0, 2]);
        let plane = saturate_and_cosets(&[[1, 0, 0], [0, 1, 0]]).unwrap();
        let line = saturate_and_cosets(&[[0, 0, 1]]).unwrap();
        assert_eq!(index_element(&s, &plane).values, vec![0, 0]);
        assert_eq!(index_element(&s, &line).values, vec![2]);
        assert!(sections_exist(&s, &plane));
        assert!(!sections_exist(&s, &line));
        let t = decompose_spinc([0, 0, 0]);
        assert!(sections_exist(&t, &plane));
        assert!(index_element(&t, &line).is_zero());
    }
}
