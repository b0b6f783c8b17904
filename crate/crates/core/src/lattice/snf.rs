//! Smith normal form over the integers.
//!
//! Pivots on the smallest non-zero entry of the active block, clears its row
//! and column by Euclidean division, and folds any non-divisible entry back
//! into the pivot row until the pivot divides the whole remaining block.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// `d_1 | d_2 | ...`, non-negative, `min(rows, cols)` entries (trailing zeros for rank deficiency).
    pub diagonal: Vec<BigInt>,
    /// Unimodular `U` with `U * M * V = D`.
    pub left: IntMatrix,
    /// `U^{-1}`.
    pub left_inverse: IntMatrix,
    /// Unimodular `V`.
    pub right: IntMatrix,
    pub rank: usize,
}

impl SmithForm {
    pub fn diagonal_matrix(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.left.rows(), self.right.rows());
        for (k, x) in self.diagonal.iter().enumerate() {
            d[(k, k)] = x.clone();
        }
        d
    }
}

struct Work {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
    }

    /// `row[dst] += k * row[src]`.
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_row_multiple(dst, src, k);
        self.u.add_row_multiple(dst, src, k);
        self.u_inv.add_col_multiple(src, dst, &-k);
    }

    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_col_multiple(dst, src, k);
        self.v.add_col_multiple(dst, src, k);
    }

    fn negate_row(&mut self, r: usize) {
        self.a.negate_row(r);
        self.u.negate_row(r);
        self.u_inv.negate_col(r);
    }

    fn smallest_in_block(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for r in t..self.a.rows() {
            for c in t..self.a.cols() {
                let x = &self.a[(r, c)];
                if x.is_zero() {
                    continue;
                }
                if best.map_or(true, |(br, bc)| x.abs() < self.a[(br, bc)].abs()) {
                    best = Some((r, c));
                }
            }
        }
        best
    }

    /// Clears row and column `t` below/right of the pivot. Returns false if a
    /// smaller remainder appeared and the pivot has to be chosen again.
    fn clear_cross(&mut self, t: usize) -> bool {
        let p = self.a[(t, t)].clone();
        let mut clean = true;
        for r in t + 1..self.a.rows() {
            if self.a[(r, t)].is_zero() {
                continue;
            }
            let q = self.a[(r, t)].div_floor(&p);
            self.add_row(r, t, &-q);
            if !self.a[(r, t)].is_zero() {
                clean = false;
            }
        }
        for c in t + 1..self.a.cols() {
            if self.a[(t, c)].is_zero() {
                continue;
            }
            let q = self.a[(t, c)].div_floor(&p);
            self.add_col(c, t, &-q);
            if !self.a[(t, c)].is_zero() {
                clean = false;
            }
        }
        clean
    }
}

pub fn smith_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        a: m.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
    };
    let steps = rows.min(cols);
    let mut rank = 0;
    for t in 0..steps {
        let Some((r, c)) = w.smallest_in_block(t) else {
            break;
        };
        w.swap_rows(t, r);
        w.swap_cols(t, c);
        loop {
            if !w.clear_cross(t) {
                let (r, c) = w.smallest_in_block(t).expect("block is non-zero");
                w.swap_rows(t, r);
                w.swap_cols(t, c);
                continue;
            }
            let p = w.a[(t, t)].clone();
            let offender = (t + 1..rows)
                .flat_map(|r| (t + 1..cols).map(move |c| (r, c)))
                .find(|&(r, c)| !w.a[(r, c)].is_multiple_of(&p));
            match offender {
                Some((r, _)) => {
                    let one = BigInt::from(1);
                    w.add_row(t, r, &one);
                }
                None => break,
            }
        }
        if w.a[(t, t)].is_negative() {
            w.negate_row(t);
        }
        rank += 1;
    }
    let diagonal = (0..steps).map(|k| w.a[(k, k)].clone()).collect();
    SmithForm {
        diagonal,
        left: w.u,
        left_inverse: w.u_inv,
        right: w.v,
        rank,
    }
}

/// Lattice spanned by the columns of `generators`, as a basis matrix with
/// `rank` columns.
pub fn column_span_basis(generators: &IntMatrix) -> IntMatrix {
    let snf = smith_form(generators);
    let cols: Vec<Vec<BigInt>> = (0..snf.rank)
        .map(|k| {
            snf.left_inverse
                .column(k)
                .into_iter()
                .map(|x| x * &snf.diagonal[k])
                .collect()
        })
        .collect();
    IntMatrix::from_columns(&cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(m: &IntMatrix) -> Vec<i64> {
        smith_form(m)
            .diagonal
            .iter()
            .map(|x| i64::try_from(x).unwrap())
            .collect()
    }

    fn check_transforms(m: &IntMatrix) {
        let s = smith_form(m);
        assert_eq!(&(&s.left * m) * &s.right, s.diagonal_matrix());
        assert_eq!(&s.left * &s.left_inverse, IntMatrix::identity(m.rows()));
    }

    #[test]
    fn worked_examples() {
        assert_eq!(diag(&IntMatrix::identity(3)), vec![1, 1, 1]);
        assert_eq!(diag(&IntMatrix::diagonal(&[2, 12])), vec![2, 12]);
        assert_eq!(diag(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]])), vec![2, 4]);
        assert_eq!(diag(&IntMatrix::diagonal(&[6, 4])), vec![2, 12]);
        check_transforms(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]));
    }

    #[test]
    fn rectangular_and_singular() {
        let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(diag(&m), vec![2, 6, 12]);
        check_transforms(&m);
        let m = IntMatrix::from_rows(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let s = smith_form(&m);
        assert_eq!(s.rank, 1);
        check_transforms(&m);
    }

    #[test]
    fn span_basis() {
        let g = IntMatrix::from_rows(&[vec![2, 0, 1], vec![0, 2, 1]]);
        let b = column_span_basis(&g);
        assert_eq!(b.cols(), 2);
        assert_eq!(b.determinant().abs(), BigInt::from(2));
    }
}
