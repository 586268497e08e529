//! Exact linear algebra over the rationals for homology computations:
//! fraction-free rank, kernel bases, and subspace arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::Q;

/// Dense column-major matrix over `Q`.
#[derive(Clone, Debug, PartialEq)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: Vec<Vec<Q>>,
}

impl QMatrix {
    pub fn from_columns(rows: usize, cols: Vec<Vec<Q>>) -> Self {
        for c in &cols {
            assert_eq!(c.len(), rows, "column length mismatch");
        }
        QMatrix { rows, cols }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols: vec![vec![Q::zero(); rows]; cols],
        }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.rows, other.rows);
        let mut cols = self.cols.clone();
        cols.extend(other.cols.iter().cloned());
        QMatrix {
            rows: self.rows,
            cols,
        }
    }

    /// Rank by fraction-free (Bareiss) elimination on the integer-scaled
    /// matrix; all arithmetic stays in `BigInt`.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols.is_empty() {
            return 0;
        }
        // Row-major integer matrix: scale each row by the lcm of its
        // denominators (rank is invariant under row scaling).
        let mut m: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|r| {
                let mut lcm = BigInt::one();
                for c in &self.cols {
                    if !c[r].is_zero() {
                        lcm = lcm.lcm(c[r].denom());
                    }
                }
                self.cols
                    .iter()
                    .map(|c| (c[r].numer() * &lcm) / c[r].denom())
                    .collect()
            })
            .collect();
        let nrows = m.len();
        let ncols = m[0].len();
        let mut prev = BigInt::one();
        let mut rank = 0usize;
        let mut row = 0usize;
        let mut col = 0usize;
        while row < nrows && col < ncols {
            // Find a pivot in the current column at or below `row`.
            let pivot = (row..nrows).find(|&r| !m[r][col].is_zero());
            let Some(p) = pivot else {
                col += 1;
                continue;
            };
            m.swap(row, p);
            for r in row + 1..nrows {
                for c in col + 1..ncols {
                    let t = &m[row][col] * &m[r][c] - &m[r][col] * &m[row][c];
                    let (q, rem) = t.div_rem(&prev);
                    debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                    m[r][c] = q;
                }
                m[r][col] = BigInt::zero();
            }
            prev = m[row][col].clone();
            rank += 1;
            row += 1;
            col += 1;
        }
        rank
    }

    /// Basis of the null space `{x : A x = 0}` via Gauss-Jordan elimination.
    pub fn kernel_basis(&self) -> Vec<Vec<Q>> {
        let ncols = self.cols.len();
        if ncols == 0 {
            return Vec::new();
        }
        // Row-major copy for row reduction.
        let mut m: Vec<Vec<Q>> = (0..self.rows)
            .map(|r| self.cols.iter().map(|c| c[r].clone()).collect())
            .collect();
        let mut pivot_cols: Vec<usize> = Vec::new();
        let mut row = 0usize;
        for col in 0..ncols {
            let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(row, p);
            let inv = m[row][col].clone().recip();
            for c in col..ncols {
                let v = &m[row][c] * &inv;
                m[row][c] = v;
            }
            for r in 0..m.len() {
                if r != row && !m[r][col].is_zero() {
                    let factor = m[r][col].clone();
                    for c in col..ncols {
                        let v = &m[r][c] - &(&m[row][c] * &factor);
                        m[r][c] = v;
                    }
                }
            }
            pivot_cols.push(col);
            row += 1;
            if row == m.len() {
                break;
            }
        }
        let mut basis = Vec::new();
        let pivot_set: std::collections::BTreeSet<usize> = pivot_cols.iter().copied().collect();
        for free in (0..ncols).filter(|c| !pivot_set.contains(c)) {
            let mut v = vec![Q::zero(); ncols];
            v[free] = Q::one();
            for (r, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -m[r][free].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Solves `A x = b` when consistent.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(b.len(), self.rows);
        let ncols = self.cols.len();
        let mut m: Vec<Vec<Q>> = (0..self.rows)
            .map(|r| {
                let mut row: Vec<Q> = self.cols.iter().map(|c| c[r].clone()).collect();
                row.push(b[r].clone());
                row
            })
            .collect();
        let mut pivot_cols: Vec<usize> = Vec::new();
        let mut row = 0usize;
        for col in 0..ncols {
            let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(row, p);
            let inv = m[row][col].clone().recip();
            for c in col..=ncols {
                let v = &m[row][c] * &inv;
                m[row][c] = v;
            }
            for r in 0..m.len() {
                if r != row && !m[r][col].is_zero() {
                    let factor = m[r][col].clone();
                    for c in col..=ncols {
                        let v = &m[r][c] - &(&m[row][c] * &factor);
                        m[r][c] = v;
                    }
                }
            }
            pivot_cols.push(col);
            row += 1;
            if row == m.len() {
                break;
            }
        }
        // Inconsistent if a zero row has nonzero augmented entry.
        for r in row..m.len() {
            if !m[r][ncols].is_zero() {
                return None;
            }
        }
        let mut x = vec![Q::zero(); ncols];
        for (r, &pc) in pivot_cols.iter().enumerate() {
            x[pc] = m[r][ncols].clone();
        }
        Some(x)
    }
}

/// Incremental column space over `Q`: supports independence tests and rank.
#[derive(Clone, Default)]
pub struct ColSpace {
    /// Reduced basis columns, each with a distinct pivot row.
    reduced: Vec<Vec<Q>>,
    pivots: Vec<usize>,
}

impl ColSpace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.reduced.len()
    }

    /// Residual of `v` after reduction against the stored basis.
    fn residual(&self, v: &[Q]) -> Vec<Q> {
        let mut v = v.to_vec();
        for (col, &p) in self.reduced.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let factor = v[p].clone();
            for (x, y) in v.iter_mut().zip(col) {
                let t = &*x - &(y * &factor);
                *x = t;
            }
        }
        v
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.residual(v).iter().all(|x| x.is_zero())
    }

    /// Inserts `v`; returns true when it enlarges the space.
    pub fn insert(&mut self, v: &[Q]) -> bool {
        let mut r = self.residual(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].clone().recip();
        for x in r.iter_mut() {
            let t = &*x * &inv;
            *x = t;
        }
        self.reduced.push(r);
        self.pivots.push(p);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q_int, q_ratio};

    fn col(vals: &[i64]) -> Vec<Q> {
        vals.iter().map(|&v| q_int(v)).collect()
    }

    #[test]
    fn rank_and_kernel() {
        let m = QMatrix::from_columns(3, vec![col(&[1, 0, 1]), col(&[0, 1, 1]), col(&[1, 1, 2])]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        // Third column is the sum of the first two.
        assert_eq!(k[0], vec![q_int(-1), q_int(-1), q_int(1)]);

        let id = QMatrix::from_columns(2, vec![col(&[1, 0]), col(&[0, 1])]);
        assert_eq!(id.rank(), 2);
        assert!(id.kernel_basis().is_empty());
    }

    #[test]
    fn rank_with_fractions() {
        let m = QMatrix::from_columns(
            2,
            vec![
                vec![q_ratio(1, 2), q_ratio(1, 3)],
                vec![q_ratio(3, 2), q_int(2)],
            ],
        );
        assert_eq!(m.rank(), 2);
        // A scalar multiple adds no rank.
        let m = QMatrix::from_columns(
            2,
            vec![
                vec![q_ratio(1, 2), q_ratio(1, 3)],
                vec![q_ratio(3, 2), q_int(1)],
                vec![q_int(2), q_ratio(4, 3)],
            ],
        );
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = QMatrix::from_columns(2, vec![col(&[1, 0]), col(&[1, 1])]);
        let x = m.solve(&col(&[3, 2])).unwrap();
        assert_eq!(x, vec![q_int(1), q_int(2)]);
        let singular = QMatrix::from_columns(2, vec![col(&[1, 1])]);
        assert!(singular.solve(&col(&[1, 2])).is_none());
    }

    #[test]
    fn incremental_column_space() {
        let mut s = ColSpace::new();
        assert!(s.insert(&col(&[1, 0, 1])));
        assert!(s.insert(&col(&[0, 1, 1])));
        assert!(!s.insert(&col(&[1, 1, 2])));
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&col(&[2, 2, 4])));
        assert!(!s.contains(&col(&[0, 0, 1])));
    }
}
