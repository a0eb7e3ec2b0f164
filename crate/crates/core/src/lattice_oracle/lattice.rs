use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::sparse::CsrMatrix;
use crate::error::OracleError;

/// U(1) lattice gauge field on an N×N periodic square grid carrying h flux
/// quanta through a torus of the given area.
///
/// Sites are numbered `y·N + x`. The transport along μ is
/// `(T_μψ)(x) = U_μ(x)ψ(x+μ)`, and the Landau gauge reads
///
/// ```text
/// U_y(x, y)   = exp(iφx)
/// U_x(x, y)   = 1                  for x < N−1
/// U_x(N−1, y) = exp(−iφNy)         (twisted column)
/// φ = 2πh/N²
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluxLattice {
    pub n: usize,
    pub h: i64,
    pub area: f64,
    pub spacing: f64,
    pub link_x: Vec<f64>,
    pub link_y: Vec<f64>,
}

/// Smallest side length accepted by [`FluxLattice::landau`].
pub const MIN_SIDE: usize = 8;

impl FluxLattice {
    pub fn landau(h: i64, n: usize, area: f64) -> Result<Self, OracleError> {
        if h < 1 {
            return Err(OracleError::Parameters(format!("flux h = {h} must be at least 1")));
        }
        if n < MIN_SIDE {
            return Err(OracleError::Parameters(format!("N = {n} is below {MIN_SIDE}")));
        }
        if ((n * n) as i64) < 64 * h {
            return Err(OracleError::Parameters(format!(
                "N² = {} violates N² ≥ 64h = {}",
                n * n,
                64 * h
            )));
        }
        if !(area > 0.0 && area.is_finite()) {
            return Err(OracleError::Parameters(format!("area {area} must be positive")));
        }
        let phi = TAU * h as f64 / (n * n) as f64;
        let mut link_x = vec![0.0; n * n];
        let mut link_y = vec![0.0; n * n];
        for y in 0..n {
            for x in 0..n {
                link_y[y * n + x] = phi * x as f64;
            }
            link_x[y * n + n - 1] = -phi * (n * y) as f64;
        }
        Ok(FluxLattice {
            n,
            h,
            area,
            spacing: area.sqrt() / n as f64,
            link_x,
            link_y,
        })
    }

    pub fn site(&self, x: usize, y: usize) -> usize {
        (y % self.n) * self.n + x % self.n
    }

    pub fn flux_per_plaquette(&self) -> f64 {
        TAU * self.h as f64 / (self.n * self.n) as f64
    }

    /// Plaquette phases reduced to (−π, π].
    pub fn plaquette_fluxes(&self) -> Vec<f64> {
        let n = self.n;
        let mut out = Vec::with_capacity(n * n);
        for y in 0..n {
            for x in 0..n {
                let raw = self.link_x[self.site(x, y)] + self.link_y[self.site(x + 1, y)]
                    - self.link_x[self.site(x, y + 1)]
                    - self.link_y[self.site(x, y)];
                out.push(reduce_angle(raw));
            }
        }
        out
    }

    /// Product of all plaquette phases, exp(2πih) in exact arithmetic.
    pub fn total_holonomy(&self) -> Complex64 {
        let raw: f64 = self.plaquette_fluxes().iter().sum();
        Complex64::from_polar(1.0, raw)
    }

    /// Links after ψ(x) ↦ e^{iχ(x)}ψ(x).
    pub fn gauge_transformed(&self, chi: &[f64]) -> FluxLattice {
        let n = self.n;
        let mut out = self.clone();
        for y in 0..n {
            for x in 0..n {
                let s = self.site(x, y);
                out.link_x[s] += chi[s] - chi[self.site(x + 1, y)];
                out.link_y[s] += chi[s] - chi[self.site(x, y + 1)];
            }
        }
        out
    }

    /// The chiral block D⁺ = (Π_x + iΠ_y)/√2 with forward covariant
    /// differences Π_μ = −i(T_μ − 1)/a, an N²×N² matrix.
    pub fn d_plus(&self) -> CsrMatrix {
        let n = self.n;
        let scale = FRAC_1_SQRT_2 / self.spacing;
        let mut t = Vec::with_capacity(3 * n * n);
        for y in 0..n {
            for x in 0..n {
                let s = self.site(x, y);
                t.push((s, s, Complex64::new(-1.0, 1.0) * scale));
                let ux = Complex64::from_polar(scale, self.link_x[s]);
                t.push((s, self.site(x + 1, y), Complex64::new(0.0, -1.0) * ux));
                t.push((s, self.site(x, y + 1), Complex64::from_polar(scale, self.link_y[s])));
            }
        }
        CsrMatrix::from_triplets(n * n, n * n, t)
    }

    /// ⟨ψ, a²(−Δ_A)ψ⟩ = Σ_μ ‖(T_μ − 1)ψ‖², small for modes that vary slowly
    /// on the lattice scale.
    pub fn kinetic_form(&self, psi: &[Complex64], phi: &[Complex64]) -> Complex64 {
        let n = self.n;
        let mut acc = Complex64::new(0.0, 0.0);
        for y in 0..n {
            for x in 0..n {
                let s = self.site(x, y);
                for (link, nb) in [(self.link_x[s], self.site(x + 1, y)), (self.link_y[s], self.site(x, y + 1))] {
                    let u = Complex64::from_polar(1.0, link);
                    let a = u * psi[nb] - psi[s];
                    let b = u * phi[nb] - phi[s];
                    acc += a.conj() * b;
                }
            }
        }
        acc
    }
}

fn reduce_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// The Hermitian lattice Dirac operator D = [[0, D⁻], [D⁺, 0]] on
/// ℂ^{N²} ⊕ ℂ^{N²}, with D⁻ = (D⁺)†.
pub fn dirac_from_lattice(lattice: &FluxLattice) -> CsrMatrix {
    let dp = lattice.d_plus();
    let dm = dp.adjoint();
    let m = dp.nrows;
    let mut t = Vec::with_capacity(2 * dp.nnz());
    for r in 0..m {
        t.extend(dm.row(r).map(|(c, v)| (r, m + c, v)));
        t.extend(dp.row(r).map(|(c, v)| (m + r, c, v)));
    }
    CsrMatrix::from_triplets(2 * m, 2 * m, t)
}

pub fn build_flux_dirac(h: i64, n: usize, area: f64) -> Result<CsrMatrix, OracleError> {
    Ok(dirac_from_lattice(&FluxLattice::landau(h, n, area)?))
}
