//! Exact realization of univariate formulas as points and intervals with
//! Thom-encoded endpoints, enumeration of realizable sign conditions, and
//! the conversion of a formula with closed realization into a closed
//! (negation-free, weak-relation) formula.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::One;

use crate::formula::{to_sign_dnf, ClosedFormula, QfFormula, WeakRel};
use crate::multipoly::MultiPoly;
use crate::rational::{format_rational, q_sign, Q};
use crate::thom::{order_roots, separate_intervals, SignCondition, ThomEncoding};
use crate::unipoly::UniPoly;

/// Default cap on the total number of atoms produced by DNF expansion.
pub const DEFAULT_ATOM_BUDGET: usize = 64;

/// Extended endpoint of a realization piece.
#[derive(Clone)]
pub enum Endpoint {
    NegInf,
    Root(ThomEncoding),
    PosInf,
}

impl Endpoint {
    fn same(&self, other: &Endpoint) -> bool {
        match (self, other) {
            (Endpoint::NegInf, Endpoint::NegInf) => true,
            (Endpoint::PosInf, Endpoint::PosInf) => true,
            (Endpoint::Root(a), Endpoint::Root(b)) => a.is_same_root(b),
            _ => false,
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::NegInf => write!(f, "-inf"),
            Endpoint::PosInf => write!(f, "+inf"),
            Endpoint::Root(t) => {
                let (a, b) = t.rational_approx(&Q::new(1.into(), 1000.into()));
                write!(f, "[{}, {}]", format_rational(&a), format_rational(&b))
            }
        }
    }
}

/// One maximal connected component of a realization: a point when both
/// endpoints coincide, otherwise an interval with each finite endpoint
/// either included (closed) or excluded (open).
#[derive(Clone)]
pub struct Piece {
    pub lo: Endpoint,
    pub lo_closed: bool,
    pub hi: Endpoint,
    pub hi_closed: bool,
}

impl Piece {
    pub fn is_point(&self) -> bool {
        self.lo_closed
            && self.hi_closed
            && match (&self.lo, &self.hi) {
                (Endpoint::Root(a), Endpoint::Root(b)) => a.is_same_root(b),
                _ => false,
            }
    }

    /// Closed as a subset of the line: infinite ends count as closed.
    pub fn is_closed(&self) -> bool {
        let lo_ok = matches!(self.lo, Endpoint::NegInf) || self.lo_closed;
        let hi_ok = matches!(self.hi, Endpoint::PosInf) || self.hi_closed;
        lo_ok && hi_ok
    }

    pub fn same(&self, other: &Piece) -> bool {
        self.lo.same(&other.lo)
            && self.hi.same(&other.hi)
            && self.lo_closed == other.lo_closed
            && self.hi_closed == other.hi_closed
    }
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            return write!(f, "{{{}}}", self.lo);
        }
        let l = if self.lo_closed { '[' } else { '(' };
        let r = if self.hi_closed { ']' } else { ')' };
        write!(f, "{}{}, {}{}", l, self.lo, self.hi, r)
    }
}

/// Sorted, pairwise disjoint, maximal pieces of a univariate realization.
pub struct UnivariateRealization {
    pub pieces: Vec<Piece>,
}

impl UnivariateRealization {
    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.pieces.iter().all(|p| p.is_closed())
    }

    pub fn same(&self, other: &UnivariateRealization) -> bool {
        self.pieces.len() == other.pieces.len()
            && self
                .pieces
                .iter()
                .zip(&other.pieces)
                .all(|(a, b)| a.same(b))
    }
}

impl fmt::Display for UnivariateRealization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.is_empty() {
            return write!(f, "empty");
        }
        let parts: Vec<String> = self.pieces.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(" u "))
    }
}

fn single_variable(formula: &QfFormula) -> Result<String, String> {
    let vars = formula.variables();
    match vars.len() {
        0 => Ok("X".to_string()),
        1 => Ok(vars.into_iter().next().unwrap()),
        _ => Err(format!(
            "formula is not univariate (variables {})",
            vars.join(", ")
        )),
    }
}

/// Exact realization of a univariate formula as sorted disjoint maximal
/// pieces with Thom-encoded endpoints.
pub fn realize_univariate(formula: &QfFormula) -> Result<UnivariateRealization, String> {
    let var = single_variable(formula)?;
    let polys = formula.atom_polys();
    let unis: Vec<UniPoly> = polys
        .iter()
        .map(|p| UniPoly::from_multipoly(p, &var))
        .collect::<Result<_, _>>()?;
    let mut roots = order_roots(&unis)?;
    separate_intervals(&mut roots);

    // Truth at each root and on each complementary open interval.
    let at_root: Vec<bool> = roots
        .iter()
        .map(|t| {
            let signs = t.signs_at_root(&unis);
            let map: BTreeMap<MultiPoly, i8> =
                polys.iter().cloned().zip(signs.iter().copied()).collect();
            formula.eval_signs(&map)
        })
        .collect();
    let samples: Vec<Q> = interval_samples(&roots);
    let on_interval: Vec<bool> = samples
        .iter()
        .map(|x| {
            let map: BTreeMap<MultiPoly, i8> = polys
                .iter()
                .cloned()
                .zip(unis.iter().map(|u| q_sign(&u.eval(x))))
                .collect();
            formula.eval_signs(&map)
        })
        .collect();

    // Scan the alternating sequence interval_0, root_1, interval_1, ...
    let mut pieces = Vec::new();
    let n = roots.len();
    let mut current: Option<Piece> = None;
    for i in 0..=n {
        // Open interval i: (root_{i-1}, root_i) with infinite outer ends.
        if on_interval[i] {
            let lo = if i == 0 {
                Endpoint::NegInf
            } else {
                Endpoint::Root(roots[i - 1].clone())
            };
            match &mut current {
                Some(piece) => {
                    piece.hi = if i == n {
                        Endpoint::PosInf
                    } else {
                        Endpoint::Root(roots[i].clone())
                    };
                    piece.hi_closed = false;
                }
                None => {
                    current = Some(Piece {
                        lo,
                        lo_closed: false,
                        hi: if i == n {
                            Endpoint::PosInf
                        } else {
                            Endpoint::Root(roots[i].clone())
                        },
                        hi_closed: false,
                    });
                }
            }
            if i == n {
                pieces.extend(current.take());
            }
        } else if let Some(piece) = current.take() {
            pieces.push(piece);
        }
        if i == n {
            break;
        }
        // Root i.
        if at_root[i] {
            match &mut current {
                Some(piece) => {
                    piece.hi = Endpoint::Root(roots[i].clone());
                    piece.hi_closed = true;
                }
                None => {
                    current = Some(Piece {
                        lo: Endpoint::Root(roots[i].clone()),
                        lo_closed: true,
                        hi: Endpoint::Root(roots[i].clone()),
                        hi_closed: true,
                    });
                }
            }
        } else if let Some(piece) = current.take() {
            pieces.push(piece);
        }
    }
    if let Some(piece) = current.take() {
        pieces.push(piece);
    }
    Ok(UnivariateRealization { pieces })
}

/// Rational sample points: one strictly inside each complementary interval,
/// including one below the smallest root and one above the largest.
fn interval_samples(roots: &[ThomEncoding]) -> Vec<Q> {
    if roots.is_empty() {
        return vec![Q::from_integer(0.into())];
    }
    let mut out = Vec::with_capacity(roots.len() + 1);
    out.push(roots[0].lower() - Q::one());
    for w in roots.windows(2) {
        let a = w[0].upper();
        let b = w[1].lower();
        out.push((&a + &b) / Q::from_integer(2.into()));
    }
    out.push(roots[roots.len() - 1].upper() + Q::one());
    out
}

/// All sign conditions realized by the family `F` at some real point,
/// enumerated at every root of every member and at one sample point per
/// complementary interval.
pub fn realizable_sign_conditions(family: &[UniPoly]) -> Result<BTreeSet<SignCondition>, String> {
    for f in family {
        if f.is_zero() {
            return Err("sign conditions require nonzero polynomials".to_string());
        }
    }
    let mut roots = order_roots(family)?;
    separate_intervals(&mut roots);
    let mut out = BTreeSet::new();
    for t in &roots {
        let signs = t.signs_at_root(family);
        out.insert(SignCondition {
            assignments: signs.into_iter().enumerate().collect(),
        });
    }
    for x in interval_samples(&roots) {
        let signs: Vec<i8> = family.iter().map(|f| q_sign(&f.eval(&x))).collect();
        out.insert(SignCondition {
            assignments: signs.into_iter().enumerate().collect(),
        });
    }
    Ok(out)
}

/// Weak sign condition: per-polynomial weak signs, the relaxation of a
/// strict sign condition.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct WeakSignCondition {
    /// `(polynomial id, weak sign)`; weak signs are `{0}`, `{0,1}`, `{0,-1}`
    /// encoded as `WeakRel::{Eq, Ge, Le}`.
    pub assignments: Vec<(usize, WeakRel)>,
}

impl WeakSignCondition {
    pub fn relaxation_of(sigma: &SignCondition) -> WeakSignCondition {
        WeakSignCondition {
            assignments: sigma
                .assignments
                .iter()
                .map(|&(i, s)| {
                    let w = match s.cmp(&0) {
                        Ordering::Less => WeakRel::Le,
                        Ordering::Equal => WeakRel::Eq,
                        Ordering::Greater => WeakRel::Ge,
                    };
                    (i, w)
                })
                .collect(),
        }
    }
}

/// Converts a univariate formula whose realization is closed into an
/// equivalent closed formula (negation-free DNF of weak atoms).
///
/// Each strict atom `sign(F) = s` is replaced by the disjunction of the
/// relaxations of the realizable sign conditions of `Der(F)` that assign
/// sign `s` to `F` itself; naive weakening of the relation alone would
/// enlarge the realization.
pub fn make_closed(formula: &QfFormula, budget: usize) -> Result<ClosedFormula, String> {
    let var = single_variable(formula)?;
    let realization = realize_univariate(formula)?;
    if !realization.is_closed() {
        return Err("realization not closed".to_string());
    }
    let dnf = to_sign_dnf(formula, budget)?;

    let mut out: Vec<Vec<(MultiPoly, WeakRel)>> = Vec::new();
    for conjunct in &dnf {
        // Per-atom replacement factors: each factor is a disjunction of
        // weak-atom conjunctions.
        let mut factors: Vec<Vec<Vec<(MultiPoly, WeakRel)>>> = Vec::new();
        let mut dead = false;
        for (poly, sign) in conjunct {
            if poly.is_constant() {
                let s = q_sign(&poly.constant_term());
                if s == *sign {
                    continue;
                }
                dead = true;
                break;
            }
            if *sign == 0 {
                factors.push(vec![vec![(poly.clone(), WeakRel::Eq)]]);
                continue;
            }
            let f = UniPoly::from_multipoly(poly, &var)?;
            let ders = f.derivatives()?;
            let conditions = realizable_sign_conditions(&ders)?;
            let mut options: Vec<Vec<(MultiPoly, WeakRel)>> = Vec::new();
            for sigma in conditions {
                if sigma.assignments[0].1 != *sign {
                    continue;
                }
                let relaxed = WeakSignCondition::relaxation_of(&sigma);
                let mut atoms = Vec::new();
                let mut unsat = false;
                for (i, w) in relaxed.assignments {
                    let der_poly = ders[i].to_multipoly();
                    if der_poly.is_constant() {
                        if !w.holds(q_sign(&der_poly.constant_term())) {
                            unsat = true;
                            break;
                        }
                        continue;
                    }
                    atoms.push((der_poly, w));
                }
                if !unsat {
                    options.push(atoms);
                }
            }
            factors.push(options);
        }
        if dead {
            continue;
        }
        // Distribute the factors into DNF conjuncts.
        let mut acc: Vec<Vec<(MultiPoly, WeakRel)>> = vec![Vec::new()];
        for factor in &factors {
            let mut next = Vec::new();
            for base in &acc {
                for option in factor {
                    let mut merged = base.clone();
                    for atom in option {
                        if !merged.contains(atom) {
                            merged.push(atom.clone());
                        }
                    }
                    next.push(merged);
                }
            }
            let atoms: usize = next.iter().map(|c| c.len()).sum();
            if atoms > budget {
                return Err(format!(
                    "closed-formula expansion exceeds the atom budget ({atoms} > {budget})"
                ));
            }
            acc = next;
        }
        for c in acc {
            if !out.contains(&c) {
                out.push(c);
            }
        }
    }
    Ok(ClosedFormula { conjuncts: out })
}
