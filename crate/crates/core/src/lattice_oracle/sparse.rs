use std::fmt::Write;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Compressed sparse row matrix over ℂ.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<usize>,
    pub vals: Vec<Complex64>,
}

impl CsrMatrix {
    /// Builds from (row, col, value) triplets; duplicates are summed.
    pub fn from_triplets(nrows: usize, ncols: usize, mut t: Vec<(usize, usize, Complex64)>) -> Self {
        t.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0; nrows + 1];
        let mut cols = Vec::with_capacity(t.len());
        let mut vals: Vec<Complex64> = Vec::with_capacity(t.len());
        let mut last = None;
        for (r, c, v) in t {
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
                continue;
            }
            last = Some((r, c));
            cols.push(c);
            vals.push(v);
            row_ptr[r + 1] = cols.len();
        }
        for r in 0..nrows {
            row_ptr[r + 1] = row_ptr[r + 1].max(row_ptr[r]);
        }
        CsrMatrix { nrows, ncols, row_ptr, cols, vals }
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let range = self.row_ptr[r]..self.row_ptr[r + 1];
        self.cols[range.clone()].iter().copied().zip(self.vals[range].iter().copied())
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.nrows).map(|r| self.row(r).map(|(c, v)| v * x[c]).sum()).collect()
    }

    pub fn adjoint(&self) -> CsrMatrix {
        let t = (0..self.nrows)
            .flat_map(|r| self.row(r).map(move |(c, v)| (c, r, v.conj())).collect::<Vec<_>>())
            .collect();
        CsrMatrix::from_triplets(self.ncols, self.nrows, t)
    }

    /// P A Pᵀ for the relabelling i ↦ perm[i] of rows and columns.
    pub fn permuted(&self, perm: &[usize]) -> CsrMatrix {
        let t = (0..self.nrows)
            .flat_map(|r| self.row(r).map(move |(c, v)| (perm[r], perm[c], v)).collect::<Vec<_>>())
            .collect();
        CsrMatrix::from_triplets(self.nrows, self.ncols, t)
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.nrows, self.ncols);
        for r in 0..self.nrows {
            for (c, v) in self.row(r) {
                m[(r, c)] += v;
            }
        }
        m
    }

    pub fn mul_dense_vec(&self, x: &DVector<Complex64>) -> DVector<Complex64> {
        DVector::from_vec(self.mul_vec(x.as_slice()))
    }

    /// Largest |A − A†| entry.
    pub fn hermiticity_defect(&self) -> f64 {
        let adj = self.adjoint();
        let mut worst = 0.0f64;
        for r in 0..self.nrows {
            let mine: Vec<_> = self.row(r).collect();
            let theirs: Vec<_> = adj.row(r).collect();
            let mut i = 0;
            let mut j = 0;
            while i < mine.len() || j < theirs.len() {
                let (ci, vi) = mine.get(i).copied().unwrap_or((usize::MAX, Complex64::default()));
                let (cj, vj) = theirs.get(j).copied().unwrap_or((usize::MAX, Complex64::default()));
                let d = if ci == cj {
                    i += 1;
                    j += 1;
                    vi - vj
                } else if ci < cj {
                    i += 1;
                    vi
                } else {
                    j += 1;
                    vj
                };
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    /// Coordinate text dump: a `# rows cols nnz` header, then one
    /// `row col re im` line per stored entry (0-based, round-trip precision).
    pub fn to_coordinate_text(&self) -> String {
        let mut out = format!("# {} {} {}\n", self.nrows, self.ncols, self.nnz());
        for r in 0..self.nrows {
            for (c, v) in self.row(r) {
                writeln!(out, "{r} {c} {:e} {:e}", v.re, v.im).unwrap();
            }
        }
        out
    }

    pub fn from_coordinate_text(text: &str) -> Option<CsrMatrix> {
        let mut lines = text.lines();
        let head: Vec<usize> = lines.next()?.trim_start_matches('#').split_whitespace().map(|x| x.parse().ok()).collect::<Option<_>>()?;
        let [nrows, ncols, _] = head[..] else { return None };
        let mut t = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 4 {
                return None;
            }
            t.push((f[0].parse().ok()?, f[1].parse().ok()?, Complex64::new(f[2].parse().ok()?, f[3].parse().ok()?)));
        }
        Some(CsrMatrix::from_triplets(nrows, ncols, t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_and_dump_round_trip() {
        let c = |re, im| Complex64::new(re, im);
        let m = CsrMatrix::from_triplets(3, 3, vec![(2, 0, c(1.0, 2.0)), (0, 1, c(0.5, 0.0)), (0, 1, c(0.25, -1.0))]);
        assert_eq!(m.nnz(), 2);
        assert_eq!(m.row(0).collect::<Vec<_>>(), vec![(1, c(0.75, -1.0))]);
        assert!(m.row(1).next().is_none());
        let back = CsrMatrix::from_coordinate_text(&m.to_coordinate_text()).unwrap();
        assert_eq!(back, m);
        assert!(m.hermiticity_defect() > 0.5);
        assert_eq!(m.mul_vec(&[c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)])[0], c(1.5, -2.0));
    }
}
