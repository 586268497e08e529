//! Finite abstract simplicial complexes and boundary matrices over `Q`.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::linalg::QMatrix;
use crate::rational::Q;

/// A simplex: strictly increasing list of vertex ids.
pub type Simplex = Vec<usize>;

/// Finite simplicial complex, closed under taking faces.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SimplicialComplex {
    simplices: BTreeSet<Simplex>,
}

impl SimplicialComplex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds the complex generated by the given simplices (faces added).
    pub fn from_simplices<I: IntoIterator<Item = Simplex>>(simplices: I) -> Result<Self, String> {
        let mut k = Self::new();
        for s in simplices {
            k.insert_with_faces(s)?;
        }
        Ok(k)
    }

    /// Inserts a simplex together with all of its faces.
    pub fn insert_with_faces(&mut self, mut simplex: Simplex) -> Result<(), String> {
        simplex.sort_unstable();
        let before = simplex.len();
        simplex.dedup();
        if simplex.is_empty() || simplex.len() != before {
            return Err(format!("invalid simplex {simplex:?}"));
        }
        if self.simplices.contains(&simplex) {
            return Ok(());
        }
        for mask in 1u64..(1 << simplex.len()) {
            let face: Simplex = simplex
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &v)| v)
                .collect();
            self.simplices.insert(face);
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.simplices.contains(s)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter()
    }

    /// Largest simplex dimension, or `None` when empty.
    pub fn dim(&self) -> Option<usize> {
        self.simplices.iter().map(|s| s.len() - 1).max()
    }

    /// Simplices of dimension `p`, in lexicographic order.
    pub fn simplices_of_dim(&self, p: usize) -> Vec<&Simplex> {
        self.simplices.iter().filter(|s| s.len() == p + 1).collect()
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.simplices.is_subset(&other.simplices)
    }

    /// Every face of every simplex is present.
    pub fn is_closed_under_faces(&self) -> bool {
        self.simplices.iter().all(|s| {
            s.len() == 1
                || (0..s.len()).all(|i| {
                    let mut f = s.clone();
                    f.remove(i);
                    self.simplices.contains(&f)
                })
        })
    }
}

/// Matrix of the boundary map from `p`-chains to `(p-1)`-chains in the
/// lexicographically sorted simplex bases, with the alternating-sign face
/// convention. For `p = 0` the matrix has zero rows.
pub fn boundary_matrix(k: &SimplicialComplex, p: usize) -> QMatrix {
    let cols_basis = k.simplices_of_dim(p);
    if p == 0 {
        return QMatrix::zero(0, cols_basis.len());
    }
    let rows_basis = k.simplices_of_dim(p - 1);
    let row_index: std::collections::BTreeMap<&Simplex, usize> = rows_basis
        .iter()
        .enumerate()
        .map(|(i, s)| (*s, i))
        .collect();
    let mut cols = Vec::with_capacity(cols_basis.len());
    for s in cols_basis {
        let mut col = vec![Q::zero(); rows_basis.len()];
        for i in 0..s.len() {
            let mut face = s.clone();
            face.remove(i);
            let r = row_index[&face];
            col[r] = if i % 2 == 0 { Q::one() } else { -Q::one() };
        }
        cols.push(col);
    }
    QMatrix::from_columns(rows_basis.len(), cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q_int;

    #[test]
    fn closure_and_membership() {
        let k = SimplicialComplex::from_simplices(vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(k.len(), 7);
        assert!(k.is_closed_under_faces());
        assert!(k.contains(&vec![0, 2]));
        assert_eq!(k.dim(), Some(2));
        assert!(SimplicialComplex::from_simplices(vec![vec![1, 1]]).is_err());
    }

    #[test]
    fn boundary_of_edge() {
        let k = SimplicialComplex::from_simplices(vec![vec![0, 1]]).unwrap();
        let d1 = boundary_matrix(&k, 1);
        assert_eq!(d1.rows, 2);
        assert_eq!(d1.cols.len(), 1);
        assert_eq!(d1.cols[0], vec![-q_int(1), q_int(1)]);
    }

    #[test]
    fn boundary_of_triangle_boundary() {
        let k =
            SimplicialComplex::from_simplices(vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let d1 = boundary_matrix(&k, 1);
        assert_eq!(d1.rows, 3);
        assert_eq!(d1.cols.len(), 3);
        assert_eq!(d1.rank(), 2);
    }

    #[test]
    fn boundary_of_filled_triangle() {
        let k = SimplicialComplex::from_simplices(vec![vec![0, 1, 2]]).unwrap();
        let d2 = boundary_matrix(&k, 2);
        assert_eq!(d2.rows, 3);
        assert_eq!(d2.cols.len(), 1);
        assert_eq!(d2.rank(), 1);
    }
}
