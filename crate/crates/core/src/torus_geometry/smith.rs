//! Smith normal form of small integer matrices.

pub type IMatrix = Vec<Vec<i64>>;

/// `left · a · right = diag`, with `left`, `right` unimodular and the
/// diagonal entries nonnegative, each dividing the next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub diag: Vec<i64>,
    pub left: IMatrix,
    pub right: IMatrix,
    pub right_inv: IMatrix,
}

fn identity(n: usize) -> IMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

struct Work {
    a: IMatrix,
    left: IMatrix,
    right: IMatrix,
    right_inv: IMatrix,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.left.swap(i, j);
    }

    // row_i += q * row_j
    fn add_row(&mut self, i: usize, j: usize, q: i64) {
        for c in 0..self.a[0].len() {
            self.a[i][c] += q * self.a[j][c];
        }
        for c in 0..self.left[0].len() {
            self.left[i][c] += q * self.left[j][c];
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.a[i].iter_mut().for_each(|x| *x = -*x);
        self.left[i].iter_mut().for_each(|x| *x = -*x);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut().chain(self.right.iter_mut()) {
            row.swap(i, j);
        }
        self.right_inv.swap(i, j);
    }

    // col_i += q * col_j; the inverse picks up row_j -= q * row_i
    fn add_col(&mut self, i: usize, j: usize, q: i64) {
        for row in self.a.iter_mut().chain(self.right.iter_mut()) {
            row[i] += q * row[j];
        }
        let n = self.right_inv.len();
        for c in 0..n {
            let v = self.right_inv[i][c];
            self.right_inv[j][c] -= q * v;
        }
    }
}

pub fn smith_normal_form(a: &IMatrix) -> SmithForm {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut w = Work {
        a: a.clone(),
        left: identity(m),
        right: identity(n),
        right_inv: identity(n),
    };
    let mut diag = Vec::new();
    for t in 0..m.min(n) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if w.a[i][j] != 0
                        && best.map_or(true, |(bi, bj)| w.a[i][j].abs() < w.a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                diag.push(0);
                break;
            };
            if pi != t {
                w.swap_rows(pi, t);
            }
            if pj != t {
                w.swap_cols(pj, t);
            }
            let p = w.a[t][t];
            let mut clean = true;
            for i in t + 1..m {
                let q = w.a[i][t].div_euclid(p);
                if q != 0 {
                    w.add_row(i, t, -q);
                }
                clean &= w.a[i][t] == 0;
            }
            for j in t + 1..n {
                let q = w.a[t][j].div_euclid(p);
                if q != 0 {
                    w.add_col(j, t, -q);
                }
                clean &= w.a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| w.a[i][j] % p != 0));
            if let Some(i) = bad {
                w.add_row(t, i, 1);
                continue;
            }
            if p < 0 {
                w.negate_row(t);
            }
            diag.push(w.a[t][t]);
            break;
        }
    }
    SmithForm {
        diag,
        left: w.left,
        right: w.right,
        right_inv: w.right_inv,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mul(a: &IMatrix, b: &IMatrix) -> IMatrix {
        let n = b[0].len();
        a.iter()
            .map(|row| {
                (0..n)
                    .map(|j| row.iter().zip(b).map(|(x, r)| x * r[j]).sum())
                    .collect()
            })
            .collect()
    }

    fn check(a: IMatrix) -> SmithForm {
        let s = smith_normal_form(&a);
        let d = mul(&mul(&s.left, &a), &s.right);
        for (i, row) in d.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                let expected = if i == j { s.diag[i] } else { 0 };
                assert_eq!(x, expected, "{a:?} -> {d:?}");
            }
        }
        assert_eq!(mul(&s.right, &s.right_inv), identity(a[0].len()));
        for pair in s.diag.windows(2) {
            assert!(pair[0] >= 0 && pair[1] >= 0);
            if pair[0] != 0 {
                assert_eq!(pair[1] % pair[0], 0);
            }
        }
        s
    }

    #[test]
    fn known_invariants() {
        assert_eq!(check(vec![vec![2, 0, 0], vec![0, 1, 0]]).diag, vec![1, 2]);
        assert_eq!(check(vec![vec![1, 1, 0]]).diag, vec![1]);
        assert_eq!(check(vec![vec![2, 4, 6]]).diag, vec![2]);
        assert_eq!(check(vec![vec![2, 4, 4], vec![-6, 6, 12]]).diag, vec![2, 6]);
        assert_eq!(check(vec![vec![1, 2, 3], vec![2, 4, 6]]).diag, vec![1, 0]);
        assert_eq!(check(vec![vec![6, 0, 0], vec![0, 4, 0]]).diag, vec![2, 12]);
    }

    #[test]
    fn scan_small_matrices() {
        for a in -3..=3 {
            for b in -2..=2 {
                for c in -3..=3 {
                    for d in [-4, 0, 5] {
                        check(vec![vec![a, b, c], vec![d, a - c, 2 * b]]);
                    }
                }
            }
        }
    }
}
