use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::sparse::CsrMatrix;
use crate::error::OracleError;

type C = Complex64;

/// Position of coordinate x in the sequence 0, N−1, 1, N−2, …, which keeps
/// periodic neighbours at most two positions apart.
fn zigzag_positions(n: usize) -> Vec<usize> {
    let mut pos = vec![0; n];
    for (p, m) in (0..n).enumerate() {
        let x = if p % 2 == 0 { p / 2 } else { n - 1 - p / 2 };
        pos[x] = m;
    }
    pos
}

/// Permutation of the sites `y·N + x` of an N×N periodic grid that makes
/// nearest- and next-nearest-neighbour operators banded with bandwidth 2N+2.
pub fn grid_permutation(n: usize) -> Vec<usize> {
    let pos = zigzag_positions(n);
    (0..n * n).map(|s| pos[s / n] * n + pos[s % n]).collect()
}

/// Hermitian band matrix, lower triangle stored row by row.
#[derive(Debug, Clone)]
pub struct BandHermitian {
    pub n: usize,
    pub band: usize,
    data: Vec<C>,
}

impl BandHermitian {
    fn zeros(n: usize, band: usize) -> Self {
        BandHermitian { n, band, data: vec![C::default(); n * (band + 1)] }
    }

    fn at(&self, i: usize, j: usize) -> C {
        self.data[i * (self.band + 1) + j + self.band - i]
    }

    fn at_mut(&mut self, i: usize, j: usize) -> &mut C {
        &mut self.data[i * (self.band + 1) + j + self.band - i]
    }

    /// A†A + shift·I for a square sparse A, after relabelling columns by
    /// `perm`. Panics if the product does not fit the band.
    pub fn gram(a: &CsrMatrix, perm: &[usize], band: usize, shift: f64) -> Self {
        let mut m = BandHermitian::zeros(a.ncols, band);
        for r in 0..a.nrows {
            let row: Vec<(usize, C)> = a.row(r).map(|(c, v)| (perm[c], v)).collect();
            for &(p1, v1) in &row {
                for &(p2, v2) in &row {
                    if p1 >= p2 {
                        assert!(p1 - p2 <= band, "entry outside band");
                        *m.at_mut(p1, p2) += v1.conj() * v2;
                    }
                }
            }
        }
        for i in 0..m.n {
            *m.at_mut(i, i) += shift;
        }
        m
    }

    pub fn mul(&self, x: &[C]) -> Vec<C> {
        let b = self.band;
        (0..self.n)
            .into_par_iter()
            .map(|i| {
                let lo = i.saturating_sub(b);
                let hi = (i + b).min(self.n - 1);
                let mut acc = C::default();
                for j in lo..=i {
                    acc += self.at(i, j) * x[j];
                }
                for j in i + 1..=hi {
                    acc += self.at(j, i).conj() * x[j];
                }
                acc
            })
            .collect()
    }

    /// Gershgorin bound on the spectral radius.
    pub fn norm_bound(&self) -> f64 {
        let b = self.band;
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(b);
                let hi = (i + b).min(self.n - 1);
                (lo..=i).map(|j| self.at(i, j).norm()).sum::<f64>()
                    + (i + 1..=hi).map(|j| self.at(j, i).norm()).sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    pub fn cholesky(&self) -> Result<BandCholesky, OracleError> {
        let b = self.band;
        let w = b + 1;
        let mut l = BandHermitian::zeros(self.n, b);
        for i in 0..self.n {
            let lo = i.saturating_sub(b);
            for j in lo..=i {
                // Σ_k L[i][k]·conj(L[j][k]) over lo ≤ k < j, both rows contiguous
                let (ri, rj) = (i * w + b - i, j * w + b - j);
                let mut acc = C::default();
                for (a, c) in l.data[ri + lo..ri + j].iter().zip(&l.data[rj + lo..rj + j]) {
                    acc += a * c.conj();
                }
                let sum = self.at(i, j) - acc;
                if i == j {
                    if !(sum.re > 0.0) {
                        return Err(OracleError::Solver(format!("matrix not positive definite at row {i}")));
                    }
                    *l.at_mut(i, i) = C::new(sum.re.sqrt(), 0.0);
                } else {
                    *l.at_mut(i, j) = sum / l.at(j, j).re;
                }
            }
        }
        Ok(BandCholesky { l })
    }
}

pub struct BandCholesky {
    l: BandHermitian,
}

impl BandCholesky {
    /// Solves L L† x = rhs.
    pub fn solve(&self, rhs: &[C]) -> Vec<C> {
        let l = &self.l;
        let (n, b) = (l.n, l.band);
        let w = b + 1;
        let mut y = rhs.to_vec();
        for i in 0..n {
            let lo = i.saturating_sub(b);
            let row = &l.data[i * w + b - i + lo..i * w + b];
            let mut acc = y[i];
            for (a, v) in row.iter().zip(&y[lo..i]) {
                acc -= a * v;
            }
            y[i] = acc / l.at(i, i).re;
        }
        for i in (0..n).rev() {
            y[i] /= l.at(i, i).re;
            let lo = i.saturating_sub(b);
            let yi = y[i];
            let row = &l.data[i * w + b - i + lo..i * w + b];
            for (v, a) in y[lo..i].iter_mut().zip(row) {
                *v -= a.conj() * yi;
            }
        }
        y
    }
}

/// Lowest eigenpairs of a Hermitian positive semidefinite band matrix.
#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    /// Columns are orthonormal eigenvectors, in the band ordering.
    pub vectors: DMatrix<C>,
    pub iterations: usize,
}

fn orthonormalize(y: DMatrix<C>) -> DMatrix<C> {
    y.qr().q()
}

/// Shift-and-invert block subspace iteration with Rayleigh–Ritz
/// extraction.
///
/// `shifted` holds H + sI with s > 0 and is only factorized; `apply`
/// multiplies by the same matrix, typically through a sparser
/// representation. Eigenvalues are reported for H. The first `wanted` pairs
/// are iterated until their residuals fall below `tol`·‖H‖, using a block
/// of `block` vectors started from a seeded random basis.
pub fn lowest_eigenpairs<F>(
    shifted: &BandHermitian,
    apply: F,
    shift: f64,
    wanted: usize,
    block: usize,
    tol: f64,
    seed: u64,
) -> Result<EigenPairs, OracleError>
where
    F: Fn(&[C]) -> Vec<C> + Sync,
{
    let n = shifted.n;
    let block = block.max(wanted).min(n);
    let factor = shifted.cholesky()?;
    let scale = shifted.norm_bound();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = DMatrix::from_fn(n, block, |_, _| C::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
    let mut q = orthonormalize(start);
    const MAX_ITER: usize = 500;
    for iter in 1..=MAX_ITER {
        let cols: Vec<Vec<C>> = (0..block)
            .into_par_iter()
            .map(|c| factor.solve(q.column(c).as_slice()))
            .collect();
        let y = DMatrix::from_fn(n, block, |r, c| cols[c][r]);
        q = orthonormalize(y);
        let hq_cols: Vec<Vec<C>> = (0..block).into_par_iter().map(|c| apply(q.column(c).as_slice())).collect();
        let hq = DMatrix::from_fn(n, block, |r, c| hq_cols[c][r]);
        let small = q.adjoint() * &hq;
        let small = (&small + small.adjoint()) * C::new(0.5, 0.0);
        let eig = small.symmetric_eigen();
        let mut order: Vec<usize> = (0..block).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let v = DMatrix::from_fn(block, block, |r, c| eig.eigenvectors[(r, order[c])]);
        let theta: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let x = &q * &v;
        let hx = &hq * &v;
        let converged = (0..wanted).all(|c| {
            let res = hx.column(c) - x.column(c) * C::new(theta[c], 0.0);
            res.norm() <= tol * scale
        });
        q = x;
        if converged {
            return Ok(EigenPairs {
                values: theta.iter().map(|t| t - shift).collect(),
                vectors: q,
                iterations: iter,
            });
        }
    }
    Err(OracleError::Solver(format!("subspace iteration did not converge in {MAX_ITER} steps")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_is_banded() {
        for n in [8, 9, 16] {
            let p = grid_permutation(n);
            let mut seen = p.clone();
            seen.sort();
            assert_eq!(seen, (0..n * n).collect::<Vec<_>>());
            for y in 0..n {
                for x in 0..n {
                    let s = y * n + x;
                    for t in [y * n + (x + 1) % n, ((y + 1) % n) * n + x, ((y + 1) % n) * n + (x + 1) % n] {
                        assert!(p[s].abs_diff(p[t]) <= 2 * n + 2);
                    }
                }
            }
        }
    }

    #[test]
    fn lowest_pairs_of_a_path_laplacian() {
        // periodic 1-d difference operator: eigenvalues 4 sin²(πj/n)
        let n = 40;
        let t: Vec<_> = (0..n)
            .flat_map(|i| [(i, i, C::new(-1.0, 0.0)), (i, (i + 1) % n, C::new(1.0, 0.0))])
            .collect();
        let a = CsrMatrix::from_triplets(n, n, t);
        let perm = zigzag_positions(n);
        let m = BandHermitian::gram(&a, &perm, 2, 0.05);
        let pairs = lowest_eigenpairs(&m, |x| m.mul(x), 0.05, 5, 10, 1e-12, 1).unwrap();
        let mut exact: Vec<f64> = (0..n)
            .map(|j| 4.0 * (std::f64::consts::PI * j as f64 / n as f64).sin().powi(2))
            .collect();
        exact.sort_by(f64::total_cmp);
        for i in 0..5 {
            assert!((pairs.values[i] - exact[i]).abs() < 1e-10, "{:?}", pairs.values);
        }
    }
}
