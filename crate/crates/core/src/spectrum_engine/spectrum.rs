use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::form::HarmonicForm;
use crate::error::SpectrumError;
use crate::torus_geometry::{IVec3, SpincStructure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "+")]
    Plus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Minus => "-",
            Sign::Zero => "0",
            Sign::Plus => "+",
        })
    }
}

/// Which eigenbasis branch an eigenvalue belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "lowercase")]
pub enum BranchLabel {
    /// Fiber mode `l`, Landau index `n`; sign 0 is the λ_l branch.
    Nontrivial { l: i64, n: u64, sign: Sign },
    Trivial { b: IVec3, sign: Sign },
}

impl fmt::Display for BranchLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BranchLabel::Nontrivial { l, n, sign } => write!(f, "l={l} n={n} sign={sign}"),
            BranchLabel::Trivial { b, sign } => {
                write!(f, "b={} {} {} sign={sign}", b[0], b[1], b[2])
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub value: f64,
    pub mult: u64,
    pub label: BranchLabel,
}

/// Eigenvalues of 𝒟^K_α in [−cutoff, cutoff], sorted ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSlice {
    pub alpha: [f64; 3],
    pub entries: Vec<SpectrumEntry>,
}

impl SpectrumSlice {
    /// All eigenvalues repeated by multiplicity, ascending.
    pub fn expanded_values(&self) -> Vec<f64> {
        self.entries
            .iter()
            .flat_map(|e| std::iter::repeat(e.value).take(e.mult as usize))
            .collect()
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.entries.iter().map(|e| e.mult).sum()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("value,mult,label\n");
        for e in &self.entries {
            out.push_str(&format!("{},{},{}\n", crate::io::fmt_float(e.value), e.mult, e.label));
        }
        out
    }
}

fn nontrivial_parts(spinc: &SpincStructure) -> Result<(IVec3, f64, f64), SpectrumError> {
    match (spinc.k(), spinc.norm_k()) {
        (Some(k), Some(nk)) => Ok((k, nk, spinc.h() as f64)),
        _ => Err(SpectrumError::TrivialStructure),
    }
}

/// λ_l = (2πl + ⟨k,α⟩)/‖k‖.
pub fn lambda_l(spinc: &SpincStructure, form: &HarmonicForm, l: i64) -> Result<f64, SpectrumError> {
    let (k, nk, _) = nontrivial_parts(spinc)?;
    Ok(TAU * (l as f64 + form.pairing_turns(&k)) / nk)
}

/// μ_m = sgn(m)·√(2πh‖k‖⌊|m|/h⌋).
pub fn mu_m(spinc: &SpincStructure, m: i64) -> Result<f64, SpectrumError> {
    let (_, nk, h) = nontrivial_parts(spinc)?;
    let n = (m.unsigned_abs() / spinc.h() as u64) as f64;
    Ok(m.signum() as f64 * (TAU * h * nk * n).sqrt())
}

/// The Landau level 2πh‖k‖n of the transverse operator squared.
pub fn landau_level(spinc: &SpincStructure, n: u64) -> Result<f64, SpectrumError> {
    let (_, nk, h) = nontrivial_parts(spinc)?;
    Ok(TAU * h * nk * n as f64)
}

fn sort_entries(entries: &mut [SpectrumEntry]) {
    entries.sort_by(|a, b| a.value.total_cmp(&b.value).then(a.label.cmp(&b.label)));
}

pub fn enumerate_spectrum(
    spinc: &SpincStructure,
    form: &HarmonicForm,
    cutoff: f64,
) -> Result<SpectrumSlice, SpectrumError> {
    if !(cutoff > 0.0) {
        return Err(SpectrumError::NonPositiveCutoff(cutoff));
    }
    let mut entries = match spinc.k() {
        Some(k) => nontrivial_entries(spinc, &k, form, cutoff),
        None => trivial_entries(form, cutoff),
    };
    sort_entries(&mut entries);
    let a = form.alpha();
    Ok(SpectrumSlice {
        alpha: [a.x, a.y, a.z],
        entries,
    })
}

fn nontrivial_entries(
    spinc: &SpincStructure,
    k: &IVec3,
    form: &HarmonicForm,
    cutoff: f64,
) -> Vec<SpectrumEntry> {
    let nk = spinc.norm_k().unwrap();
    let h = spinc.h() as u64;
    let unit = TAU * h as f64 * nk;
    // λ depends on ⟨k,α⟩ only through its fractional part in turns
    let t = form.pairing_turns(k);
    let shift = t.floor();
    let frac = t - shift;
    let reach = cutoff * nk / TAU;
    let lo = (-reach - frac).floor() as i64 - 1;
    let hi = (reach - frac).ceil() as i64 + 1;
    let mut entries = Vec::new();
    for j in lo..=hi {
        let lambda = TAU * (j as f64 + frac) / nk;
        if lambda.abs() > cutoff {
            continue;
        }
        let l = j - shift as i64;
        entries.push(SpectrumEntry {
            value: lambda,
            mult: h,
            label: BranchLabel::Nontrivial { l, n: 0, sign: Sign::Zero },
        });
        let room = cutoff * cutoff - lambda * lambda;
        let n_max = (room / unit).floor() as u64 + 1;
        for n in 1..=n_max {
            let value = (lambda * lambda + unit * n as f64).sqrt();
            if value > cutoff {
                continue;
            }
            for (sign, v) in [(Sign::Plus, value), (Sign::Minus, -value)] {
                entries.push(SpectrumEntry {
                    value: v,
                    mult: h,
                    label: BranchLabel::Nontrivial { l, n, sign },
                });
            }
        }
    }
    entries
}

fn trivial_entries(form: &HarmonicForm, cutoff: f64) -> Vec<SpectrumEntry> {
    let theta = form.turns();
    let reach = cutoff / TAU;
    let range = |x: f64| ((-reach - x).floor() as i64 - 1)..=((reach - x).ceil() as i64 + 1);
    let mut entries = Vec::new();
    for b0 in range(theta.x) {
        for b1 in range(theta.y) {
            for b2 in range(theta.z) {
                let v = [theta.x + b0 as f64, theta.y + b1 as f64, theta.z + b2 as f64];
                let value = TAU * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                if value > cutoff {
                    continue;
                }
                let b = [b0, b1, b2];
                for (sign, v) in [(Sign::Plus, value), (Sign::Minus, -value)] {
                    entries.push(SpectrumEntry {
                        value: v,
                        mult: 1,
                        label: BranchLabel::Trivial { b, sign },
                    });
                }
            }
        }
    }
    entries
}

/// Absolute tolerance for deciding that ⟨k,α⟩/2π is an integer or β = 0.
pub const ZERO_TOL: f64 = 1e-9;

pub fn kernel_dimension(spinc: &SpincStructure, form: &HarmonicForm) -> u64 {
    match spinc.k() {
        Some(k) => {
            let t = form.pairing_turns(&k);
            if (t - t.round()).abs() < ZERO_TOL {
                spinc.h() as u64
            } else {
                0
            }
        }
        None => {
            let th = form.turns();
            let d = (th - th.map(f64::round)).norm() * TAU;
            if d < ZERO_TOL {
                2
            } else {
                0
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus_geometry::decompose_spinc;
    use nalgebra::Vector3;

    #[test]
    fn lambda_examples() {
        let s = decompose_spinc([0, 0, 1]);
        let zero = HarmonicForm::zero();
        assert_eq!(lambda_l(&s, &zero, 0).unwrap(), 0.0);
        assert!((lambda_l(&s, &zero, 1).unwrap() - 6.283185).abs() < 1e-6);
        let f = HarmonicForm::new(Vector3::new(0.0, 0.0, -TAU));
        assert!(lambda_l(&s, &f, 1).unwrap().abs() < 1e-15);
        assert_eq!(
            lambda_l(&decompose_spinc([0, 0, 0]), &zero, 0),
            Err(SpectrumError::TrivialStructure)
        );
    }

    #[test]
    fn mu_examples() {
        let s = decompose_spinc([0, 0, 2]);
        assert_eq!(mu_m(&s, 0).unwrap(), 0.0);
        assert_eq!(mu_m(&s, 1).unwrap(), 0.0);
        assert!((mu_m(&s, 3).unwrap() - 3.544908).abs() < 1e-6);
        assert!((mu_m(&s, -3).unwrap() + 3.544908).abs() < 1e-6);
        assert!(mu_m(&decompose_spinc([0, 0, 0]), 1).is_err());
    }

    #[test]
    fn enumerate_small_cases() {
        let s = decompose_spinc([0, 0, 1]);
        let sl = enumerate_spectrum(&s, &HarmonicForm::zero(), 1.0).unwrap();
        assert_eq!(sl.entries.len(), 1);
        assert_eq!((sl.entries[0].value, sl.entries[0].mult), (0.0, 1));

        let t = decompose_spinc([0, 0, 0]);
        let sl = enumerate_spectrum(&t, &HarmonicForm::zero(), 1.0).unwrap();
        assert_eq!(sl.expanded_values(), vec![0.0, 0.0]);

        assert_eq!(
            enumerate_spectrum(&t, &HarmonicForm::zero(), -1.0),
            Err(SpectrumError::NonPositiveCutoff(-1.0))
        );
        assert!(enumerate_spectrum(&s, &HarmonicForm::zero(), 0.0).is_err());
    }

    #[test]
    fn kernel_examples() {
        let s = decompose_spinc([0, 0, 3]);
        assert_eq!(kernel_dimension(&s, &HarmonicForm::zero()), 3);
        assert_eq!(kernel_dimension(&s, &HarmonicForm::new(Vector3::new(0.0, 0.0, 0.5))), 0);
        let t = decompose_spinc([0, 0, 0]);
        let f = HarmonicForm::new(Vector3::new(TAU, TAU, 0.0));
        assert_eq!(kernel_dimension(&t, &f), 2);
        assert_eq!(kernel_dimension(&t, &HarmonicForm::new(Vector3::new(0.1, 0.0, 0.0))), 0);
    }
}
