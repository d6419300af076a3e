use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::matrix::{hermite_rows, sub_scaled, IntegerMatrix};
use crate::error::{Error, Result};

/// Smith normal form `u * a * v = diag(d_1, ..., d_r, 0, ...)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    /// Diagonal entries, `min(rows, cols)` of them. Nonzero entries come
    /// first and form a divisibility chain.
    pub diagonal: Vec<BigInt>,
    pub left: IntegerMatrix,
    pub right: IntegerMatrix,
    pub shape: (usize, usize),
}

impl SmithDecomposition {
    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diagonal.iter().take_while(|d| !d.is_zero()).count()
    }

    /// The diagonal matrix `u * a * v` as a full `rows x cols` matrix.
    pub fn diagonal_matrix(&self) -> IntegerMatrix {
        let (rows, cols) = self.shape;
        let mut d = IntegerMatrix::zeros(rows, cols);
        for (i, x) in self.diagonal.iter().enumerate() {
            d.set(i, i, x.clone());
        }
        d
    }
}

/// Computes the Smith normal form of `a` together with unimodular transforms.
///
/// Pivoting always picks the entry of smallest nonzero absolute value in the
/// remaining block, breaking ties by row and then column index, so the
/// transforms are a deterministic function of the input.
pub fn smith_normal_form(a: &IntegerMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut w = a.to_row_vecs();
    let mut u = IntegerMatrix::identity(m).to_row_vecs();
    // v is tracked transposed: column operations on v become row operations here.
    let mut vt = IntegerMatrix::identity(n).to_row_vecs();

    let mut rank = 0;
    'outer: for k in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = find_pivot(&w, k) else {
                break 'outer;
            };
            if pi != k {
                w.swap(k, pi);
                u.swap(k, pi);
            }
            if pj != k {
                for row in w.iter_mut() {
                    row.swap(k, pj);
                }
                vt.swap(k, pj);
            }

            let mut clean = true;
            for i in k + 1..m {
                if w[i][k].is_zero() {
                    continue;
                }
                let q = &w[i][k] / &w[k][k];
                if !q.is_zero() {
                    let (head, tail) = w.split_at_mut(i);
                    sub_scaled(&mut tail[0], &head[k], &q);
                    let (head, tail) = u.split_at_mut(i);
                    sub_scaled(&mut tail[0], &head[k], &q);
                }
                if !w[i][k].is_zero() {
                    clean = false;
                }
            }
            for j in k + 1..n {
                if w[k][j].is_zero() {
                    continue;
                }
                let q = &w[k][j] / &w[k][k];
                if !q.is_zero() {
                    for row in w.iter_mut() {
                        let t = &row[k] * &q;
                        row[j] -= t;
                    }
                    let (head, tail) = vt.split_at_mut(j);
                    sub_scaled(&mut tail[0], &head[k], &q);
                }
                if !w[k][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }

            // pivot must divide the whole remaining block
            let bad_row = (k + 1..m).find(|&i| {
                (k + 1..n).any(|j| !(&w[i][j] % &w[k][k]).is_zero())
            });
            match bad_row {
                Some(i) => {
                    let (head, tail) = w.split_at_mut(i);
                    add_into(&mut head[k], &tail[0]);
                    let (head, tail) = u.split_at_mut(i);
                    add_into(&mut head[k], &tail[0]);
                }
                None => break,
            }
        }
        if w[k][k].is_negative() {
            for x in w[k].iter_mut().chain(u[k].iter_mut()) {
                *x = -&*x;
            }
        }
        rank += 1;
    }

    let diagonal = (0..m.min(n))
        .map(|i| if i < rank { w[i][i].clone() } else { BigInt::zero() })
        .collect();
    SmithDecomposition {
        diagonal,
        left: IntegerMatrix::from_row_vecs(m, u),
        right: IntegerMatrix::from_row_vecs(n, vt).transpose(),
        shape: (m, n),
    }
}

fn find_pivot(w: &[Vec<BigInt>], k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for (i, row) in w.iter().enumerate().skip(k) {
        for (j, x) in row.iter().enumerate().skip(k) {
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

fn add_into(target: &mut [BigInt], source: &[BigInt]) {
    for (t, s) in target.iter_mut().zip(source) {
        *t += s;
    }
}

/// Finds an integer `x` with `a * x = b`, or `None` when no integral solution exists.
pub fn solve_integral(a: &IntegerMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for {} rows",
            b.len(),
            a.rows()
        )));
    }
    let snf = smith_normal_form(a);
    let c = snf.left.mul_vec(b)?;
    let rank = snf.rank();
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, ci) in c.iter().enumerate() {
        if i < rank {
            let d = &snf.diagonal[i];
            if !(ci % d).is_zero() {
                return Ok(None);
            }
            y[i] = ci / d;
        } else if !ci.is_zero() {
            return Ok(None);
        }
    }
    Ok(Some(snf.right.mul_vec(&y)?))
}

/// A basis of the integer kernel `{x : a * x = 0}` as the columns of the
/// returned `cols x k` matrix, in Hermite normal form.
pub fn kernel_basis(a: &IntegerMatrix) -> IntegerMatrix {
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    let n = a.cols();
    let rows: Vec<Vec<BigInt>> = (rank..n).map(|j| snf.right.column(j)).collect();
    let rows = hermite_rows(rows, n);
    IntegerMatrix::from_row_vecs(n, rows).transpose()
}
