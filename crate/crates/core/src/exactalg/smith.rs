use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Smith normal form `u · m · v = d` together with the inverses of both
/// unimodular factors.
///
/// The diagonal of `d` is nonnegative and forms a divisibility chain
/// `d_0 | d_1 | …`, with all zeros at the end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    pub m: IntMatrix,
}

impl SmithDecomposition {
    /// The `min(rows, cols)` diagonal entries of `d`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Row-major working copy with the four bookkeeping matrices kept in lockstep.
struct Reducer {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    u_inv: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
    v_inv: Vec<Vec<BigInt>>,
}

fn identity_rows(n: usize) -> Vec<Vec<BigInt>> {
    IntMatrix::identity(n).to_rows()
}

fn rows_to_matrix(rows: Vec<Vec<BigInt>>, n_rows: usize, n_cols: usize) -> IntMatrix {
    IntMatrix::new(n_rows, n_cols, rows.into_iter().flatten().collect())
        .expect("reducer keeps shapes consistent")
}

impl Reducer {
    // row_i += c * row_j on a; u follows, u_inv gets the inverse column op.
    fn add_row(&mut self, i: usize, j: usize, c: &BigInt) {
        for mat in [&mut self.a, &mut self.u] {
            let src = mat[j].clone();
            for (x, y) in mat[i].iter_mut().zip(&src) {
                *x += c * y;
            }
        }
        for row in self.u_inv.iter_mut() {
            let t = c * &row[i];
            row[j] -= t;
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        self.u.swap(i, j);
        for row in self.u_inv.iter_mut() {
            row.swap(i, j);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut().chain(self.u[i].iter_mut()) {
            *x = -&*x;
        }
        for row in self.u_inv.iter_mut() {
            row[i] = -&row[i];
        }
    }

    // col_j += c * col_i on a; v follows, v_inv gets the inverse row op.
    fn add_col(&mut self, j: usize, i: usize, c: &BigInt) {
        for mat in [&mut self.a, &mut self.v] {
            for row in mat.iter_mut() {
                let t = c * &row[i];
                row[j] += t;
            }
        }
        let src = self.v_inv[j].clone();
        for (x, y) in self.v_inv[i].iter_mut().zip(&src) {
            *x -= c * y;
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for mat in [&mut self.a, &mut self.v] {
            for row in mat.iter_mut() {
                row.swap(i, j);
            }
        }
        self.v_inv.swap(i, j);
    }

    fn min_nonzero_from(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for (i, row) in self.a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                    best = Some((i, j, ax));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    /// Brings a pivot to `(t, t)` that clears its row and column and divides
    /// the remaining lower-right block. Returns false when that block is zero.
    fn settle_pivot(&mut self, t: usize) -> bool {
        let rows = self.a.len();
        let cols = self.a[0].len();
        loop {
            let Some((pi, pj)) = self.min_nonzero_from(t) else {
                return false;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if self.a[i][t].is_zero() {
                    continue;
                }
                let q = &self.a[i][t] / &self.a[t][t];
                self.add_row(i, t, &-q);
                clean &= self.a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if self.a[t][j].is_zero() {
                    continue;
                }
                let q = &self.a[t][j] / &self.a[t][t];
                self.add_col(j, t, &-q);
                clean &= self.a[t][j].is_zero();
            }
            if !clean {
                continue;
            }

            let pivot = self.a[t][t].clone();
            let offender =
                (t + 1..rows).find(|&i| self.a[i][t + 1..].iter().any(|x| !(x % &pivot).is_zero()));
            match offender {
                Some(i) => self.add_row(t, i, &BigInt::from(1)),
                None => {
                    if self.a[t][t].is_negative() {
                        self.negate_row(t);
                    }
                    return true;
                }
            }
        }
    }
}

/// Smith normal form of an arbitrary integer matrix (any shape, including empty).
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut red = Reducer {
        a: m.to_rows(),
        u: identity_rows(rows),
        u_inv: identity_rows(rows),
        v: identity_rows(cols),
        v_inv: identity_rows(cols),
    };
    if rows > 0 && cols > 0 {
        for t in 0..rows.min(cols) {
            if !red.settle_pivot(t) {
                break;
            }
        }
    }
    SmithDecomposition {
        u: rows_to_matrix(red.u, rows, rows),
        d: rows_to_matrix(red.a, rows, cols),
        v: rows_to_matrix(red.v, cols, cols),
        u_inv: rows_to_matrix(red.u_inv, rows, rows),
        v_inv: rows_to_matrix(red.v_inv, cols, cols),
        m: m.clone(),
    }
}
