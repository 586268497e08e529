//! Freudenthal (standard simplicial) triangulation of a cube grid and
//! vertex-tested sub-level complexes: a simplex is included exactly when
//! every vertex satisfies the region formula and the level bound.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::complex::{Simplex, SimplicialComplex};
use crate::formula::{ClosedFormula, WeakRel};
use crate::multipoly::MultiPoly;
use crate::rational::Q;

/// Exact vertex evaluator over the cube `[-R, R]^k` with `n` subdivisions
/// per axis. Axis order is the sorted variable list.
///
/// Conjuncts containing an equality constraint on a polynomial (an `=` atom
/// or a `<=`/`>=` pair on the same polynomial) describe measure-zero pieces;
/// the filtration builder represents those by sign-crossing top simplices
/// instead of the all-vertices rule, which would miss them entirely.
pub struct GridSampler {
    pub vars: Vec<String>,
    pub radius: Q,
    pub n: usize,
    polys: Vec<MultiPoly>,
    conjuncts: Vec<ConjunctTest>,
    level_poly: MultiPoly,
    thicken: Q,
}

/// One conjunct split into vertex-wise weak atoms and sign-crossing
/// polynomials (indices into `GridSampler::polys`).
struct ConjunctTest {
    weak: Vec<(usize, WeakRel)>,
    crossing: Vec<usize>,
}

/// Per-vertex evaluation results.
#[derive(Clone)]
struct VertexData {
    /// First admissible level, `None` when every bound fails.
    level: Option<u32>,
    /// Weak-atom pass per conjunct.
    weak_pass: Vec<bool>,
    /// Sign of each polynomial that appears in a crossing constraint
    /// (entries for non-crossing polynomials are unused).
    signs: Vec<i8>,
    /// Whether each polynomial's magnitude is within the thickening.
    eq_pass: Vec<bool>,
}

impl GridSampler {
    /// `thicken` relaxes every formula atom by the given non-negative
    /// amount (`p <= 0` becomes `p <= thicken`, `p >= 0` becomes
    /// `p >= -thicken`); zero keeps the exact region. Thickening makes
    /// measure-zero realizations visible to the grid.
    pub fn new(
        formula: &ClosedFormula,
        level_poly: &MultiPoly,
        radius: Q,
        n: usize,
        thicken: Q,
    ) -> Result<GridSampler, String> {
        if n < 2 {
            return Err("grid_n must be at least 2".to_string());
        }
        if radius <= Q::zero() {
            return Err("radius must be positive".to_string());
        }
        if thicken.is_negative() {
            return Err("thickening must be non-negative".to_string());
        }
        let mut vars: Vec<String> = formula
            .polys()
            .iter()
            .flat_map(|p| p.support_vars())
            .chain(level_poly.support_vars())
            .collect();
        vars.sort();
        vars.dedup();
        if vars.is_empty() {
            return Err("the region and level polynomials name no variables".to_string());
        }
        let polys = formula.polys();
        let conjuncts = formula
            .conjuncts
            .iter()
            .map(|c| {
                let atoms: Vec<(usize, WeakRel)> = c
                    .iter()
                    .map(|(p, w)| (polys.iter().position(|q| q == p).unwrap(), *w))
                    .collect();
                let mut crossing = Vec::new();
                let mut weak = Vec::new();
                for &(i, w) in &atoms {
                    if crossing.contains(&i) {
                        continue;
                    }
                    let le = atoms.iter().any(|&(j, v)| j == i && v == WeakRel::Le);
                    let ge = atoms.iter().any(|&(j, v)| j == i && v == WeakRel::Ge);
                    if w == WeakRel::Eq || (le && ge) {
                        crossing.push(i);
                    } else {
                        weak.push((i, w));
                    }
                }
                ConjunctTest { weak, crossing }
            })
            .collect();
        Ok(GridSampler {
            vars,
            radius,
            n,
            polys,
            conjuncts,
            level_poly: level_poly.clone(),
            thicken,
        })
    }

    pub fn k(&self) -> usize {
        self.vars.len()
    }

    pub fn num_vertices(&self) -> usize {
        (self.n + 1).pow(self.k() as u32)
    }

    fn coords_of(&self, id: usize) -> Vec<Q> {
        let k = self.k();
        let step = self.n + 1;
        let mut out = Vec::with_capacity(k);
        let mut rest = id;
        for _ in 0..k {
            let i = rest % step;
            rest /= step;
            // -R + 2R * i / n
            let c = -self.radius.clone()
                + Q::new((2 * i as i64).into(), (self.n as i64).into()) * &self.radius;
            out.push(c);
        }
        out
    }

    fn eval_poly(&self, p: &MultiPoly, coords: &[Q]) -> Q {
        // Axis lookup by variable name; powers computed on demand.
        let axis: Vec<usize> = p
            .vars()
            .iter()
            .map(|v| self.vars.iter().position(|w| w == v).unwrap())
            .collect();
        let mut acc = Q::zero();
        for (exp, c) in p.terms() {
            let mut term = c.clone();
            for (j, &e) in exp.iter().enumerate() {
                for _ in 0..e {
                    term *= &coords[axis[j]];
                }
            }
            acc += term;
        }
        acc
    }

    /// Full evaluation of one vertex against all conjunct parts.
    fn eval_vertex_data(&self, id: usize, samples: &[Q]) -> VertexData {
        let coords = self.coords_of(id);
        let values: Vec<Q> = self
            .polys
            .iter()
            .map(|p| self.eval_poly(p, &coords))
            .collect();
        let weak_pass: Vec<bool> = self
            .conjuncts
            .iter()
            .map(|c| {
                c.weak.iter().all(|&(i, w)| match w {
                    WeakRel::Le => values[i] <= self.thicken,
                    WeakRel::Ge => values[i] >= -self.thicken.clone(),
                    WeakRel::Eq => values[i].abs() <= self.thicken,
                })
            })
            .collect();
        let signs: Vec<i8> = values.iter().map(crate::rational::q_sign).collect();
        let eq_pass: Vec<bool> = values.iter().map(|v| v.abs() <= self.thicken).collect();
        let level_value = self.eval_poly(&self.level_poly, &coords);
        let lvl = samples.partition_point(|c| c < &level_value);
        let level = if lvl < samples.len() {
            Some(lvl as u32)
        } else {
            None
        };
        VertexData {
            level,
            weak_pass,
            signs,
            eq_pass,
        }
    }

    fn vertex_data(&self, samples: &[Q]) -> Vec<VertexData> {
        let total = self.num_vertices();
        let threads = worker_count(total);
        let chunk = total.div_ceil(threads);
        let mut out: Vec<Option<VertexData>> = vec![None; total];
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for t in 0..threads {
                let lo = t * chunk;
                let hi = ((t + 1) * chunk).min(total);
                let sampler = &*self;
                handles.push(scope.spawn(move || {
                    let part: Vec<VertexData> = (lo..hi)
                        .map(|id| sampler.eval_vertex_data(id, samples))
                        .collect();
                    (lo, part)
                }));
            }
            for h in handles {
                let (lo, part) = h.join().expect("vertex evaluation worker");
                for (i, d) in part.into_iter().enumerate() {
                    out[lo + i] = Some(d);
                }
            }
        });
        out.into_iter().map(|d| d.unwrap()).collect()
    }

    /// Pure vertex rule: the first level admitting each vertex, `None` when
    /// the vertex fails the formula (crossing constraints hold only where
    /// the polynomial is exactly zero, up to the thickening) or every bound.
    pub fn vertex_levels(&self, samples: &[Q]) -> Vec<Option<u32>> {
        self.vertex_data(samples)
            .into_iter()
            .map(|d| {
                let pass = self.conjuncts.iter().enumerate().any(|(ci, c)| {
                    d.weak_pass[ci] && c.crossing.iter().all(|&i| d.eq_pass[i])
                });
                if pass {
                    d.level
                } else {
                    None
                }
            })
            .collect()
    }

    /// Births of all filtration simplices under the mixed rule:
    /// - conjuncts without crossing constraints contribute every simplex
    ///   whose vertices all pass, with birth the maximum vertex level;
    /// - conjuncts with crossing constraints contribute top simplices whose
    ///   vertices pass the weak atoms and straddle every crossing
    ///   polynomial's zero set (minimum sign <= 0 <= maximum sign), together
    ///   with all faces, at the top's birth.
    pub fn filtration_births(&self, samples: &[Q]) -> Vec<(Simplex, usize)> {
        let data = self.vertex_data(samples);
        let vertex_only_pass: Vec<bool> = data
            .iter()
            .map(|d| {
                self.conjuncts
                    .iter()
                    .enumerate()
                    .any(|(ci, c)| c.crossing.is_empty() && d.weak_pass[ci])
            })
            .collect();
        let crossing_conjuncts: Vec<(usize, &ConjunctTest)> = self
            .conjuncts
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.crossing.is_empty())
            .collect();

        let k = self.k();
        let n = self.n;
        let step = n + 1;
        let perms = permutations(k);
        let stride: Vec<usize> = (0..k).map(|j| step.pow(j as u32)).collect();
        let mut births: BTreeMap<Simplex, usize> = BTreeMap::new();
        let record = |s: Simplex, b: usize, births: &mut BTreeMap<Simplex, usize>| {
            births
                .entry(s)
                .and_modify(|old| *old = (*old).min(b))
                .or_insert(b);
        };
        let num_cells = n.pow(k as u32);
        for cell in 0..num_cells {
            let mut rest = cell;
            let mut base = 0usize;
            for j in 0..k {
                let c = rest % n;
                rest /= n;
                base += c * stride[j];
            }
            for perm in &perms {
                let mut verts = Vec::with_capacity(k + 1);
                let mut v = base;
                verts.push(v);
                for &axis in perm {
                    v += stride[axis];
                    verts.push(v);
                }
                let m = verts.len();
                // Vertex-rule subsets.
                for mask in 1u32..(1 << m) {
                    let mut s: Simplex = Vec::with_capacity(mask.count_ones() as usize);
                    let mut birth = 0u32;
                    let mut alive = true;
                    for (i, &vid) in verts.iter().enumerate() {
                        if mask & (1 << i) == 0 {
                            continue;
                        }
                        match data[vid].level {
                            Some(l) if vertex_only_pass[vid] => birth = birth.max(l),
                            _ => {
                                alive = false;
                                break;
                            }
                        }
                        s.push(vid);
                    }
                    if alive {
                        s.sort_unstable();
                        record(s, birth as usize, &mut births);
                    }
                }
                // Crossing-rule tops.
                if crossing_conjuncts.is_empty() {
                    continue;
                }
                let all_levels: Option<u32> = verts
                    .iter()
                    .try_fold(0u32, |acc, &vid| data[vid].level.map(|l| acc.max(l)));
                let Some(top_birth) = all_levels else {
                    continue;
                };
                let included = crossing_conjuncts.iter().any(|&(ci, c)| {
                    verts.iter().all(|&vid| data[vid].weak_pass[ci])
                        && c.crossing.iter().all(|&pi| {
                            let mut lo = 1i8;
                            let mut hi = -1i8;
                            for &vid in &verts {
                                let s = data[vid].signs[pi];
                                lo = lo.min(s);
                                hi = hi.max(s);
                            }
                            lo <= 0 && hi >= 0
                        })
                });
                if !included {
                    continue;
                }
                for mask in 1u32..(1 << m) {
                    let mut s: Simplex = Vec::with_capacity(mask.count_ones() as usize);
                    for (i, &vid) in verts.iter().enumerate() {
                        if mask & (1 << i) != 0 {
                            s.push(vid);
                        }
                    }
                    s.sort_unstable();
                    record(s, top_birth as usize, &mut births);
                }
            }
        }
        births.into_iter().collect()
    }
}

/// Worker cap from `SABAR_THREADS`, defaulting to the available parallelism.
fn worker_count(total: usize) -> usize {
    let avail = std::thread::available_parallelism()
        .map(|v| v.get())
        .unwrap_or(1);
    let cap = std::env::var("SABAR_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v >= 1)
        .unwrap_or(avail);
    cap.min(total.max(1)).max(1)
}

/// All permutations of `0..k`.
fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..k).collect();
    permute(&mut items, 0, &mut out);
    out.sort();
    out
}

fn permute(items: &mut Vec<usize>, start: usize, out: &mut Vec<Vec<usize>>) {
    if start == items.len() {
        out.push(items.clone());
        return;
    }
    for i in start..items.len() {
        items.swap(start, i);
        permute(items, start + 1, out);
        items.swap(start, i);
    }
}

/// Simplices of the Freudenthal triangulation restricted to vertices with a
/// level, each with its birth level (the maximum of its vertex levels).
/// Faces receive levels no later than their cofaces by construction.
pub fn freudenthal_births(
    k: usize,
    n: usize,
    levels: &[Option<u32>],
) -> Vec<(Simplex, usize)> {
    let step = n + 1;
    let perms = permutations(k);
    let mut births: BTreeMap<Simplex, usize> = BTreeMap::new();
    let num_cells = n.pow(k as u32);
    let stride: Vec<usize> = (0..k).map(|j| step.pow(j as u32)).collect();
    for cell in 0..num_cells {
        // Base vertex of the cell.
        let mut rest = cell;
        let mut base = 0usize;
        for j in 0..k {
            let c = rest % n;
            rest /= n;
            base += c * stride[j];
        }
        for perm in &perms {
            // Path simplex: v_0 = base, v_{m+1} = v_m + e_{perm[m]}.
            let mut verts = Vec::with_capacity(k + 1);
            let mut v = base;
            verts.push(v);
            let mut ok = levels[v].is_some();
            for &axis in perm {
                v += stride[axis];
                verts.push(v);
                ok &= levels[v].is_some();
            }
            if !ok {
                // Lower faces may still be alive; enumerate subsets below.
            }
            let m = verts.len();
            for mask in 1u32..(1 << m) {
                let mut s: Simplex = Vec::with_capacity(mask.count_ones() as usize);
                let mut birth = 0u32;
                let mut alive = true;
                for (i, &vid) in verts.iter().enumerate() {
                    if mask & (1 << i) == 0 {
                        continue;
                    }
                    match levels[vid] {
                        Some(l) => birth = birth.max(l),
                        None => {
                            alive = false;
                            break;
                        }
                    }
                    s.push(vid);
                }
                if !alive {
                    continue;
                }
                s.sort_unstable();
                let b = birth as usize;
                births
                    .entry(s)
                    .and_modify(|old| *old = (*old).min(b))
                    .or_insert(b);
            }
        }
    }
    births.into_iter().collect()
}

/// The sub-level complex at a single bound: simplices whose vertices all
/// satisfy the (thickened) formula and `P(v) <= t`.
pub fn sublevel_complex(
    sampler: &GridSampler,
    t: &Q,
) -> Result<SimplicialComplex, String> {
    let levels = sampler.vertex_levels(std::slice::from_ref(t));
    let births = freudenthal_births(sampler.k(), sampler.n, &levels);
    SimplicialComplex::from_simplices(births.into_iter().map(|(s, _)| s))
}
