//! Exact homology over `Q`: Betti numbers, persistent Betti numbers, bar
//! multiplicities via the persistence formula, and an independent
//! subquotient oracle that computes the same multiplicities directly from
//! explicit bases of the homology subspaces.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::complex::{boundary_matrix, Simplex, SimplicialComplex};
use crate::filtration::{Bar, Barcode, Filtration, FiltrationValue};
use crate::linalg::{ColSpace, QMatrix};
use crate::rational::Q;

/// `p`-th Betti number of `K` over `Q`.
pub fn betti(k: &SimplicialComplex, p: usize) -> usize {
    let n_p = k.simplices_of_dim(p).len();
    if n_p == 0 {
        return 0;
    }
    let rank_dp = boundary_matrix(k, p).rank();
    let rank_dp1 = boundary_matrix(k, p + 1).rank();
    n_p - rank_dp - rank_dp1
}

/// Embeds the cycle space of `small` into the `p`-chain coordinates of
/// `big`, returning the kernel basis columns.
fn embedded_cycles(small: &SimplicialComplex, big: &SimplicialComplex, p: usize) -> Vec<Vec<Q>> {
    let small_basis = small.simplices_of_dim(p);
    if small_basis.is_empty() {
        return Vec::new();
    }
    let big_basis = big.simplices_of_dim(p);
    let big_index: BTreeMap<&Simplex, usize> = big_basis
        .iter()
        .enumerate()
        .map(|(i, s)| (*s, i))
        .collect();
    let map: Vec<usize> = small_basis.iter().map(|s| big_index[s]).collect();
    let kernel = boundary_matrix(small, p).kernel_basis();
    kernel
        .into_iter()
        .map(|v| {
            let mut w = vec![Q::zero(); big_basis.len()];
            for (i, x) in v.into_iter().enumerate() {
                w[map[i]] = x;
            }
            w
        })
        .collect()
}

/// Persistent Betti number `b_p^{i,j}`: the rank of the map
/// `H_p(K_i) -> H_p(K_j)` induced by inclusion, computed exactly as
/// `dim Z_p(K_i) - dim(Z_p(K_i) ∩ B_p(K_j))`. Index `-1` denotes the empty
/// complex and `N + 1` repeats the final complex.
pub fn persistent_betti(f: &Filtration, p: usize, i: isize, j: isize) -> Result<usize, String> {
    let n = f.last_index() as isize;
    if i < -1 || j > n + 1 || i > j {
        return Err(format!("index pair ({i}, {j}) out of range"));
    }
    let ki = f.complex_at(i);
    let kj = f.complex_at(j);
    let z_i = embedded_cycles(&ki, &kj, p);
    if z_i.is_empty() {
        return Ok(0);
    }
    let b_j = boundary_matrix(&kj, p + 1);
    // dim(Z + B) - dim B = dim Z - dim(Z ∩ B) = b_p^{i,j}.
    let mut space = ColSpace::new();
    for col in &b_j.cols {
        space.insert(col);
    }
    let dim_b = space.dim();
    for col in &z_i {
        space.insert(col);
    }
    Ok(space.dim() - dim_b)
}

/// Bar multiplicity via the persistence formula. `j = N + 1` encodes death
/// at infinity. Queries with `i = j` return zero: nothing dies at its own
/// birth step.
pub fn multiplicity(f: &Filtration, p: usize, i: usize, j: usize) -> Result<u32, String> {
    let n = f.last_index();
    if i > j || j > n + 1 {
        return Err(format!("index pair ({i}, {j}) out of range"));
    }
    if i == j {
        return Ok(0);
    }
    let i = i as isize;
    let j = j as isize;
    let b = |s: isize, t: isize| persistent_betti(f, p, s, t);
    let mu = if j == (n as isize) + 1 {
        b(i, j)? as i64 - b(i - 1, j)? as i64
    } else {
        (b(i, j - 1)? as i64 - b(i, j)? as i64) - (b(i - 1, j - 1)? as i64 - b(i - 1, j)? as i64)
    };
    debug_assert!(mu >= 0, "negative multiplicity");
    Ok(mu.max(0) as u32)
}

/// Dimensions of the subspaces `M ⊇ N` of `H_p(K_i)` and of the subquotient
/// `P = M/N` for a query `(p, i, j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubquotientReport {
    pub dim_m: usize,
    pub dim_n: usize,
    pub dim_p: usize,
}

/// Explicit bases for the homology of `k` inside the chain coordinates of
/// `ambient`: a basis of the boundary space and coset representatives that
/// extend it to the cycle space.
struct HomologyBasis {
    /// Cycle vectors representing a homology basis, in ambient coordinates.
    reps: Vec<Vec<Q>>,
    /// Columns spanning the boundary space, in ambient coordinates.
    boundaries: Vec<Vec<Q>>,
    ambient_len: usize,
}

fn homology_basis(k: &SimplicialComplex, ambient: &SimplicialComplex, p: usize) -> HomologyBasis {
    let ambient_len = ambient.simplices_of_dim(p).len();
    let cycles = embedded_cycles(k, ambient, p);
    // Boundaries of (p+1)-chains of k, embedded.
    let k_basis = k.simplices_of_dim(p);
    let ambient_basis = ambient.simplices_of_dim(p);
    let ambient_index: BTreeMap<&Simplex, usize> = ambient_basis
        .iter()
        .enumerate()
        .map(|(i, s)| (*s, i))
        .collect();
    let map: Vec<usize> = k_basis.iter().map(|s| ambient_index[s]).collect();
    let boundaries: Vec<Vec<Q>> = boundary_matrix(k, p + 1)
        .cols
        .iter()
        .map(|c| {
            let mut w = vec![Q::zero(); ambient_len];
            for (i, x) in c.iter().enumerate() {
                w[map[i]] = x.clone();
            }
            w
        })
        .collect();
    let mut space = ColSpace::new();
    for b in &boundaries {
        space.insert(b);
    }
    let mut reps = Vec::new();
    for z in &cycles {
        if space.insert(z) {
            reps.push(z.clone());
        }
    }
    HomologyBasis {
        reps,
        boundaries,
        ambient_len,
    }
}

/// Coordinates of the class of cycle `v` with respect to `basis.reps`,
/// modulo boundaries.
fn class_coordinates(basis: &HomologyBasis, v: &[Q]) -> Vec<Q> {
    if basis.reps.is_empty() {
        return Vec::new();
    }
    let mut cols = basis.reps.clone();
    cols.extend(basis.boundaries.iter().cloned());
    let m = QMatrix::from_columns(basis.ambient_len, cols);
    let x = m
        .solve(v)
        .expect("a cycle of a subcomplex is a cycle of the ambient complex");
    x[..basis.reps.len()].to_vec()
}

/// Basis dimension of the preimage `A^{-1}(span W)` for the linear map with
/// columns `a_cols` (dim_from -> dim_to) and subspace spanning set `w_cols`.
fn preimage_dim(dim_from: usize, dim_to: usize, a_cols: &[Vec<Q>], w_cols: &[Vec<Q>]) -> usize {
    if dim_from == 0 {
        return 0;
    }
    if dim_to == 0 {
        return dim_from;
    }
    // Kernel of [A | W]; the projection of its kernel onto the first block
    // spans the preimage.
    let mut cols: Vec<Vec<Q>> = a_cols.to_vec();
    cols.extend(w_cols.iter().cloned());
    let kernel = QMatrix::from_columns(dim_to, cols).kernel_basis();
    let mut proj = ColSpace::new();
    let mut dim = 0usize;
    for v in kernel {
        if proj.insert(&v[..dim_from]) {
            dim += 1;
        }
    }
    dim
}

/// Direct computation of `dim M`, `dim N` and `dim P = dim M - dim N` from
/// explicit homology bases — no use of the persistence formula. For a
/// finite filtration the unions over `s' < s` collapse to the predecessor
/// index, with the empty complex preceding index 0.
///
/// `j = N + 1` encodes death at infinity: the report then carries
/// `dim_m = dim H_p(K_i)` and `dim_n = dim M^{i, N+1}`, so that
/// `dim_p` is the number of classes born at `i` that never die. For `i = j`
/// the convention `N = M` applies (nothing dies at its birth step).
pub fn subquotient_oracle(
    f: &Filtration,
    p: usize,
    i: usize,
    j: usize,
) -> Result<SubquotientReport, String> {
    let n = f.last_index();
    if i > j || j > n + 1 {
        return Err(format!("index pair ({i}, {j}) out of range"));
    }
    let ki = f.complex_at(i as isize);

    // dim M^{i,t} = dim of the preimage, under the induced map
    // H_p(K_i) -> H_p(K_t), of the image of H_p(K_{i-1}) in H_p(K_t).
    let dim_m_at = |t: usize| -> usize {
        let kt = f.complex_at(t as isize);
        let basis_i = homology_basis(&ki, &kt, p);
        let basis_t = homology_basis(&kt, &kt, p);
        let h_i = basis_i.reps.len();
        let h_t = basis_t.reps.len();
        let a_cols: Vec<Vec<Q>> = basis_i
            .reps
            .iter()
            .map(|v| class_coordinates(&basis_t, v))
            .collect();
        let prev = f.complex_at(i as isize - 1);
        let basis_prev = homology_basis(&prev, &kt, p);
        let w_cols: Vec<Vec<Q>> = basis_prev
            .reps
            .iter()
            .map(|v| class_coordinates(&basis_t, v))
            .collect();
        preimage_dim(h_i, h_t, &a_cols, &w_cols)
    };

    let (dim_m, dim_n) = if j == n + 1 {
        // P^{i,inf} = H_p(K_i) / M^{i, N+1}.
        let dim_h = betti(&ki, p);
        (dim_h, dim_m_at(n + 1))
    } else if i == j {
        let m = dim_m_at(j);
        (m, m)
    } else {
        (dim_m_at(j), dim_m_at(j - 1))
    };
    if dim_n > dim_m {
        return Err("oracle invariant violated: dim N > dim M".to_string());
    }
    Ok(SubquotientReport {
        dim_m,
        dim_n,
        dim_p: dim_m - dim_n,
    })
}

/// Barcode of a finite filtration in homology dimension `p`, computed with
/// the persistence formula over all index pairs; index births and deaths are
/// mapped through the filtration values when present.
pub fn barcode(f: &Filtration, p: usize) -> Result<Barcode, String> {
    let n = f.last_index();
    let mut bars = Vec::new();
    for i in 0..=n {
        for j in i + 1..=n {
            let mu = multiplicity(f, p, i, j)?;
            if mu > 0 {
                bars.push(Bar {
                    birth: f.value_at(i),
                    death: f.value_at(j),
                    multiplicity: mu,
                });
            }
        }
        let mu = multiplicity(f, p, i, n + 1)?;
        if mu > 0 {
            bars.push(Bar {
                birth: f.value_at(i),
                death: FiltrationValue::PlusInfinity,
                multiplicity: mu,
            });
        }
    }
    let mut code = Barcode { p, bars };
    code.sort();
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::SimplicialComplex;

    fn complex(simplices: &[&[usize]]) -> SimplicialComplex {
        SimplicialComplex::from_simplices(simplices.iter().map(|s| s.to_vec())).unwrap()
    }

    fn filt(steps: &[&[&[usize]]]) -> Filtration {
        let complexes: Vec<SimplicialComplex> = steps.iter().map(|s| complex(s)).collect();
        Filtration::new(complexes, None).unwrap()
    }

    #[test]
    fn betti_examples() {
        let circle = complex(&[&[0, 1], &[1, 2], &[2, 3], &[0, 3]]);
        assert_eq!(betti(&circle, 0), 1);
        assert_eq!(betti(&circle, 1), 1);

        let two_points = complex(&[&[0], &[1]]);
        assert_eq!(betti(&two_points, 0), 2);

        let hollow_tetra = complex(&[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]]);
        assert_eq!(betti(&hollow_tetra, 0), 1);
        assert_eq!(betti(&hollow_tetra, 1), 0);
        assert_eq!(betti(&hollow_tetra, 2), 1);
    }

    #[test]
    fn persistent_betti_examples() {
        // {a, b} ⊂ edge(ab).
        let f = filt(&[&[&[0], &[1]], &[&[0, 1]]]);
        assert_eq!(persistent_betti(&f, 0, 0, 1).unwrap(), 1);
        // b_p^{i,i} equals the Betti number.
        assert_eq!(persistent_betti(&f, 0, 0, 0).unwrap(), 2);
        assert_eq!(persistent_betti(&f, 0, 1, 1).unwrap(), 1);
        // The empty complex maps nothing.
        for j in -1..=2 {
            assert_eq!(persistent_betti(&f, 0, -1, j).unwrap(), 0);
        }
        assert!(persistent_betti(&f, 0, 2, 1).is_err());
    }

    #[test]
    fn multiplicity_examples() {
        let f = filt(&[&[&[0], &[1]], &[&[0, 1]]]);
        assert_eq!(multiplicity(&f, 0, 0, 1).unwrap(), 1);
        assert_eq!(multiplicity(&f, 0, 0, 2).unwrap(), 1); // death at infinity

        // 4 vertices ⊂ path ⊂ cycle.
        let f = filt(&[
            &[&[0], &[1], &[2], &[3]],
            &[&[0, 1], &[1, 2], &[2, 3]],
            &[&[0, 1], &[1, 2], &[2, 3], &[0, 3]],
        ]);
        assert_eq!(multiplicity(&f, 0, 0, 1).unwrap(), 3);
        assert_eq!(multiplicity(&f, 0, 0, 3).unwrap(), 1);
        assert_eq!(multiplicity(&f, 1, 2, 3).unwrap(), 1);

        // Constant filtration: ordinary homology, everything lives forever.
        let k: &[&[usize]] = &[&[0, 1], &[1, 2], &[2, 3], &[0, 3]];
        let f = filt(&[k, k]);
        for p in 0..=1 {
            assert_eq!(multiplicity(&f, p, 0, 2).unwrap(), betti(&f.complex_at(1), p) as u32);
            assert_eq!(multiplicity(&f, p, 0, 1).unwrap(), 0);
            assert_eq!(multiplicity(&f, p, 1, 2).unwrap(), 0);
        }
    }

    #[test]
    fn oracle_examples() {
        // {a,b} ⊂ edge(ab): H_0(K_0) is 2-dimensional; the class a - b dies
        // entering K_1, so M is its span and N is trivial.
        let f = filt(&[&[&[0], &[1]], &[&[0, 1]]]);
        let r = subquotient_oracle(&f, 0, 0, 1).unwrap();
        assert_eq!(
            r,
            SubquotientReport {
                dim_m: 1,
                dim_n: 0,
                dim_p: 1
            }
        );
        // Consistency identity at (0, 0).
        let r = subquotient_oracle(&f, 0, 0, 0).unwrap();
        assert_eq!(r.dim_p, r.dim_m - r.dim_n);
        assert_eq!(r.dim_p, 0);

        // Constant filtration creates no bars at step 1.
        let k: &[&[usize]] = &[&[0], &[1]];
        let f = filt(&[k, k]);
        let r = subquotient_oracle(&f, 0, 0, 1).unwrap();
        assert_eq!(r.dim_m, r.dim_n);
        assert_eq!(r.dim_p, 0);
    }

    #[test]
    fn formula_matches_oracle_on_small_cases() {
        let filtrations = vec![
            filt(&[&[&[0], &[1]], &[&[0, 1]]]),
            filt(&[
                &[&[0], &[1], &[2], &[3]],
                &[&[0, 1], &[1, 2], &[2, 3]],
                &[&[0, 1], &[1, 2], &[2, 3], &[0, 3]],
            ]),
            filt(&[
                &[&[0, 1], &[1, 2], &[0, 2]],
                &[&[0, 1, 2]],
            ]),
        ];
        for f in &filtrations {
            let n = f.last_index();
            for p in 0..=2 {
                for i in 0..=n {
                    for j in i..=n + 1 {
                        let mu = multiplicity(f, p, i, j).unwrap();
                        let rep = subquotient_oracle(f, p, i, j).unwrap();
                        assert_eq!(mu as usize, rep.dim_p, "p={p} i={i} j={j}");
                        // Cross-check dim M and dim N against the rank
                        // identities dim M = b_p(K_i) - (b^{i,j} - b^{i-1,j})
                        // and dim N likewise at j - 1.
                        if i < j && j <= n {
                            let bp = betti(&f.complex_at(i as isize), p);
                            let ii = i as isize;
                            let jj = j as isize;
                            let m_expect = bp
                                - (persistent_betti(f, p, ii, jj).unwrap()
                                    - persistent_betti(f, p, ii - 1, jj).unwrap());
                            let n_expect = bp
                                - (persistent_betti(f, p, ii, jj - 1).unwrap()
                                    - persistent_betti(f, p, ii - 1, jj - 1).unwrap());
                            assert_eq!(rep.dim_m, m_expect, "dim M p={p} i={i} j={j}");
                            assert_eq!(rep.dim_n, n_expect, "dim N p={p} i={i} j={j}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn barcode_examples() {
        let f = filt(&[&[&[0], &[1]], &[&[0, 1]]]);
        let b0 = barcode(&f, 0).unwrap();
        assert_eq!(b0.bars.len(), 2);
        assert_eq!(b0.total_multiplicity(), 2);

        let empty = filt(&[&[&[0]]]);
        assert!(barcode(&empty, 1).unwrap().bars.is_empty());
    }

    #[test]
    fn betti_monotonicity_in_j() {
        let f = filt(&[
            &[&[0], &[1], &[2], &[3]],
            &[&[0, 1], &[1, 2], &[2, 3]],
            &[&[0, 1], &[1, 2], &[2, 3], &[0, 3]],
            &[&[0, 1, 2], &[2, 3], &[0, 3]],
        ]);
        let n = f.last_index() as isize;
        for p in 0..=1 {
            for i in 0..=n {
                let mut prev: Option<usize> = None;
                for j in i..=n {
                    let b = persistent_betti(&f, p, i, j).unwrap();
                    if let Some(pv) = prev {
                        assert!(b <= pv, "b_p^{{i,j}} must be non-increasing in j");
                    }
                    prev = Some(b);
                }
                // Monotone in i as well: b^{i',j} <= b^{i,j} for i' <= i <= j.
                for j in i..=n {
                    for i2 in 0..=i {
                        assert!(
                            persistent_betti(&f, p, i2, j).unwrap()
                                <= persistent_betti(&f, p, i, j).unwrap()
                                || i2 > j
                        );
                    }
                }
            }
        }
    }
}
