//! Vietoris-Rips filtrations of rational point clouds, with exact squared
//! distances as filtration values.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::complex::SimplicialComplex;
use crate::filtration::{Filtration, FiltrationValue};
use crate::rational::Q;

/// Rational point in `R^k`.
pub type Point = Vec<Q>;

fn squared_distance(a: &Point, b: &Point) -> Q {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            &d * &d
        })
        .fold(Q::zero(), |acc, v| acc + v)
}

/// Rips filtration over the sorted distinct squared pairwise distances
/// (level 0 holds the vertices). A simplex enters when its largest squared
/// edge length is at most the threshold; simplices up to `max_dim` are kept.
pub fn rips_filtration(points: &[Point], max_dim: usize) -> Result<Filtration, String> {
    if points.is_empty() {
        return Err("rips filtration needs at least one point".to_string());
    }
    if max_dim > 3 {
        return Err("rips max_dim is limited to 3".to_string());
    }
    let dim = points[0].len();
    for p in points {
        if p.len() != dim {
            return Err("points must share one dimension".to_string());
        }
    }
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            if p == q {
                return Err("points must be distinct".to_string());
            }
        }
    }
    let n = points.len();
    let mut dist = vec![vec![Q::zero(); n]; n];
    let mut thresholds: BTreeSet<Q> = BTreeSet::new();
    thresholds.insert(Q::zero());
    for i in 0..n {
        for j in i + 1..n {
            let d = squared_distance(&points[i], &points[j]);
            thresholds.insert(d.clone());
            dist[i][j] = d.clone();
            dist[j][i] = d;
        }
    }
    let thresholds: Vec<Q> = thresholds.into_iter().collect();

    // Enumerate simplices up to max_dim with their enter levels.
    let mut simplices: Vec<(Vec<usize>, usize)> = Vec::new();
    let level_of = |d: &Q| thresholds.binary_search(d).expect("threshold present");
    let mut frontier: Vec<(Vec<usize>, Q)> = (0..n).map(|v| (vec![v], Q::zero())).collect();
    for (s, d) in &frontier {
        simplices.push((s.clone(), level_of(d)));
    }
    for _ in 0..max_dim {
        let mut next = Vec::new();
        for (s, d) in &frontier {
            let last = *s.last().unwrap();
            for v in last + 1..n {
                let mut worst = d.clone();
                for &u in s {
                    if dist[u][v] > worst {
                        worst = dist[u][v].clone();
                    }
                }
                let mut t = s.clone();
                t.push(v);
                simplices.push((t.clone(), level_of(&worst)));
                next.push((t, worst));
            }
        }
        frontier = next;
    }

    let mut complexes = Vec::with_capacity(thresholds.len());
    for lvl in 0..thresholds.len() {
        let k = SimplicialComplex::from_simplices(
            simplices
                .iter()
                .filter(|(_, b)| *b <= lvl)
                .map(|(s, _)| s.clone()),
        )?;
        complexes.push(k);
    }
    let values = thresholds
        .into_iter()
        .map(FiltrationValue::Rational)
        .collect();
    Filtration::new(complexes, Some(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{barcode, multiplicity, subquotient_oracle};
    use crate::rational::q_int;

    fn pts(coords: &[(i64, i64)]) -> Vec<Point> {
        coords
            .iter()
            .map(|&(x, y)| vec![q_int(x), q_int(y)])
            .collect()
    }

    #[test]
    fn single_point() {
        let f = rips_filtration(&pts(&[(0, 0)]), 2).unwrap();
        let b0 = barcode(&f, 0).unwrap();
        assert_eq!(b0.bars.len(), 1);
        assert!(b0.bars[0].death.is_infinite());
    }

    #[test]
    fn two_points_squared_distance_4() {
        let f = rips_filtration(&pts(&[(0, 0), (2, 0)]), 1).unwrap();
        let b0 = barcode(&f, 0).unwrap();
        assert_eq!(b0.bars.len(), 2);
        // One bar (0, 4, 1), one bar (0, inf, 1).
        let finite: Vec<_> = b0.bars.iter().filter(|b| !b.death.is_infinite()).collect();
        assert_eq!(finite.len(), 1);
        match &finite[0].death {
            FiltrationValue::Rational(q) => assert_eq!(q, &q_int(4)),
            other => panic!("unexpected death value {other}"),
        }
    }

    #[test]
    fn unit_square_loop_is_born_at_1_and_dies_at_2() {
        let f = rips_filtration(&pts(&[(0, 0), (1, 0), (0, 1), (1, 1)]), 2).unwrap();
        let b1 = barcode(&f, 1).unwrap();
        assert_eq!(b1.bars.len(), 1);
        let bar = &b1.bars[0];
        match (&bar.birth, &bar.death) {
            (FiltrationValue::Rational(b), FiltrationValue::Rational(d)) => {
                assert_eq!(b, &q_int(1));
                assert_eq!(d, &q_int(2));
            }
            _ => panic!("expected rational endpoints"),
        }
        assert_eq!(bar.multiplicity, 1);

        // Brute-force oracle cross-check over every index pair.
        let n = f.last_index();
        for p in 0..=2usize {
            for i in 0..=n {
                for j in i..=n + 1 {
                    assert_eq!(
                        multiplicity(&f, p, i, j).unwrap() as usize,
                        subquotient_oracle(&f, p, i, j).unwrap().dim_p
                    );
                }
            }
        }
    }

    #[test]
    fn values_strictly_increasing_and_exact() {
        let f = rips_filtration(&pts(&[(0, 0), (3, 0), (0, 4)]), 2).unwrap();
        let vals = f.values().unwrap();
        for w in vals.windows(2) {
            assert_eq!(
                w[0].try_cmp(&w[1]),
                Some(std::cmp::Ordering::Less)
            );
        }
        assert_eq!(vals.len(), 4); // 0, 9, 16, 25
    }

    #[test]
    fn rejects_bad_input() {
        assert!(rips_filtration(&[], 1).is_err());
        assert!(rips_filtration(&pts(&[(0, 0), (0, 0)]), 1).is_err());
    }
}
