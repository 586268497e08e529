//! Quantifier-free formulas over polynomial atoms: AST, text grammar,
//! exact evaluation, and conversion to a strict-sign DNF.

use std::collections::BTreeMap;
use std::fmt;

use crate::multipoly::{parse_poly, MultiPoly};
use crate::rational::{q_sign, Q};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Relation {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
    Ne,
}

impl Relation {
    pub fn holds(self, sign: i8) -> bool {
        match self {
            Relation::Lt => sign < 0,
            Relation::Le => sign <= 0,
            Relation::Eq => sign == 0,
            Relation::Ge => sign >= 0,
            Relation::Gt => sign > 0,
            Relation::Ne => sign != 0,
        }
    }

    pub fn negated(self) -> Relation {
        match self {
            Relation::Lt => Relation::Ge,
            Relation::Le => Relation::Gt,
            Relation::Eq => Relation::Ne,
            Relation::Ge => Relation::Lt,
            Relation::Gt => Relation::Le,
            Relation::Ne => Relation::Eq,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
            Relation::Gt => ">",
            Relation::Ne => "!=",
        }
    }
}

/// Weak relation used by closed formulas.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum WeakRel {
    Le,
    Eq,
    Ge,
}

impl WeakRel {
    pub fn holds(self, sign: i8) -> bool {
        match self {
            WeakRel::Le => sign <= 0,
            WeakRel::Eq => sign == 0,
            WeakRel::Ge => sign >= 0,
        }
    }

    pub fn to_relation(self) -> Relation {
        match self {
            WeakRel::Le => Relation::Le,
            WeakRel::Eq => Relation::Eq,
            WeakRel::Ge => Relation::Ge,
        }
    }
}

/// Quantifier-free formula over polynomial sign atoms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum QfFormula {
    Atom(MultiPoly, Relation),
    And(Vec<QfFormula>),
    Or(Vec<QfFormula>),
    Not(Box<QfFormula>),
}

impl QfFormula {
    pub fn atom(poly: MultiPoly, rel: Relation) -> Result<Self, String> {
        if poly.is_zero() {
            return Err("atom polynomial must be nonzero".to_string());
        }
        Ok(QfFormula::Atom(poly, rel))
    }

    /// All distinct atom polynomials, in first-occurrence order.
    pub fn atom_polys(&self) -> Vec<MultiPoly> {
        let mut out = Vec::new();
        self.walk_atoms(&mut |p, _| {
            if !out.contains(p) {
                out.push(p.clone());
            }
        });
        out
    }

    fn walk_atoms(&self, f: &mut impl FnMut(&MultiPoly, Relation)) {
        match self {
            QfFormula::Atom(p, r) => f(p, *r),
            QfFormula::And(cs) | QfFormula::Or(cs) => {
                for c in cs {
                    c.walk_atoms(f);
                }
            }
            QfFormula::Not(c) => c.walk_atoms(f),
        }
    }

    /// Variables occurring in any atom, sorted.
    pub fn variables(&self) -> Vec<String> {
        let mut vars: Vec<String> = Vec::new();
        self.walk_atoms(&mut |p, _| {
            for v in p.support_vars() {
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
        });
        vars.sort();
        vars
    }

    /// Truth of the formula at a rational point. Errors on missing bindings.
    pub fn eval(&self, point: &BTreeMap<String, Q>) -> Result<bool, String> {
        match self {
            QfFormula::Atom(p, rel) => Ok(rel.holds(q_sign(&p.eval(point)?))),
            QfFormula::And(cs) => {
                for c in cs {
                    if !c.eval(point)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            QfFormula::Or(cs) => {
                for c in cs {
                    if c.eval(point)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            QfFormula::Not(c) => Ok(!c.eval(point)?),
        }
    }

    /// Truth of the formula given the sign of every atom polynomial.
    pub fn eval_signs(&self, signs: &BTreeMap<MultiPoly, i8>) -> bool {
        match self {
            QfFormula::Atom(p, rel) => rel.holds(signs[p]),
            QfFormula::And(cs) => cs.iter().all(|c| c.eval_signs(signs)),
            QfFormula::Or(cs) => cs.iter().any(|c| c.eval_signs(signs)),
            QfFormula::Not(c) => !c.eval_signs(signs),
        }
    }

    /// Canonical text form; parses back to the same tree.
    pub fn to_text(&self) -> String {
        match self {
            QfFormula::Atom(p, rel) => format!("({} {} 0)", p.to_canonical_string(), rel.symbol()),
            QfFormula::And(cs) => cs
                .iter()
                .map(|c| c.to_text_wrapped(matches!(c, QfFormula::Or(_) | QfFormula::And(_))))
                .collect::<Vec<_>>()
                .join(" & "),
            QfFormula::Or(cs) => cs
                .iter()
                .map(|c| c.to_text_wrapped(matches!(c, QfFormula::Or(_))))
                .collect::<Vec<_>>()
                .join(" | "),
            QfFormula::Not(c) => {
                let inner = matches!(**c, QfFormula::Atom(..));
                if inner {
                    format!("!{}", c.to_text())
                } else {
                    format!("!({})", c.to_text())
                }
            }
        }
    }

    fn to_text_wrapped(&self, wrap: bool) -> String {
        if wrap {
            format!("({})", self.to_text())
        } else {
            self.to_text()
        }
    }
}

impl fmt::Display for QfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// One conjunct of a strict-sign DNF: `(poly, sign)` pairs.
pub type SignConjunct = Vec<(MultiPoly, i8)>;

/// Converts to a disjunction of conjunctions of strict sign atoms
/// (`sign ∈ {-1, 0, 1}`), with non-strict and negated relations expanded.
/// Errors when the expansion exceeds `budget` atoms in total.
pub fn to_sign_dnf(formula: &QfFormula, budget: usize) -> Result<Vec<SignConjunct>, String> {
    let dnf = dnf_rec(formula, false, budget)?;
    Ok(dnf)
}

fn dnf_rec(f: &QfFormula, negate: bool, budget: usize) -> Result<Vec<SignConjunct>, String> {
    let out = match (f, negate) {
        (QfFormula::Not(c), n) => dnf_rec(c, !n, budget)?,
        (QfFormula::Atom(p, rel), n) => {
            let rel = if n { rel.negated() } else { *rel };
            let signs: &[i8] = match rel {
                Relation::Lt => &[-1],
                Relation::Eq => &[0],
                Relation::Gt => &[1],
                Relation::Le => &[-1, 0],
                Relation::Ge => &[0, 1],
                Relation::Ne => &[-1, 1],
            };
            signs.iter().map(|&s| vec![(p.clone(), s)]).collect()
        }
        (QfFormula::And(cs), false) | (QfFormula::Or(cs), true) => {
            let mut acc: Vec<SignConjunct> = vec![Vec::new()];
            for c in cs {
                let d = dnf_rec(c, negate, budget)?;
                let mut next = Vec::new();
                for a in &acc {
                    for b in &d {
                        if let Some(merged) = merge_conjuncts(a, b) {
                            next.push(merged);
                        }
                    }
                }
                check_budget(&next, budget)?;
                acc = next;
            }
            acc
        }
        (QfFormula::Or(cs), false) | (QfFormula::And(cs), true) => {
            let mut acc = Vec::new();
            for c in cs {
                acc.extend(dnf_rec(c, negate, budget)?);
                check_budget(&acc, budget)?;
            }
            acc
        }
    };
    Ok(out)
}

fn check_budget(dnf: &[SignConjunct], budget: usize) -> Result<(), String> {
    let atoms: usize = dnf.iter().map(|c| c.len()).sum();
    if atoms > budget {
        return Err(format!(
            "DNF expansion exceeds the atom budget ({atoms} > {budget})"
        ));
    }
    Ok(())
}

/// Merges two conjuncts; `None` when they assign conflicting signs to the
/// same polynomial.
fn merge_conjuncts(a: &SignConjunct, b: &SignConjunct) -> Option<SignConjunct> {
    let mut out = a.clone();
    for (p, s) in b {
        match out.iter().find(|(q, _)| q == p) {
            Some((_, t)) if t != s => return None,
            Some(_) => {}
            None => out.push((p.clone(), *s)),
        }
    }
    Some(out)
}

/// Negation-free DNF with weak relations only; realizes a closed set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClosedFormula {
    pub conjuncts: Vec<Vec<(MultiPoly, WeakRel)>>,
}

impl ClosedFormula {
    /// Structural conversion from a formula already in the closed shape:
    /// a disjunction of conjunctions of weak atoms (single atoms and single
    /// conjunctions allowed).
    pub fn from_formula(f: &QfFormula) -> Result<ClosedFormula, String> {
        fn weak_atom(f: &QfFormula) -> Result<(MultiPoly, WeakRel), String> {
            match f {
                QfFormula::Atom(p, Relation::Le) => Ok((p.clone(), WeakRel::Le)),
                QfFormula::Atom(p, Relation::Eq) => Ok((p.clone(), WeakRel::Eq)),
                QfFormula::Atom(p, Relation::Ge) => Ok((p.clone(), WeakRel::Ge)),
                _ => Err("closed formulas allow only <=, =, >= atoms".to_string()),
            }
        }
        fn conjunct(f: &QfFormula) -> Result<Vec<(MultiPoly, WeakRel)>, String> {
            match f {
                QfFormula::And(cs) => cs.iter().map(weak_atom).collect(),
                other => Ok(vec![weak_atom(other)?]),
            }
        }
        match f {
            QfFormula::Or(cs) => Ok(ClosedFormula {
                conjuncts: cs.iter().map(conjunct).collect::<Result<_, _>>()?,
            }),
            other => Ok(ClosedFormula {
                conjuncts: vec![conjunct(other)?],
            }),
        }
    }

    pub fn to_formula(&self) -> QfFormula {
        let one = MultiPoly::constant(&[], Q::from_integer(1.into()));
        if self.conjuncts.is_empty() {
            // Empty disjunction: false everywhere.
            return QfFormula::Atom(one, Relation::Le);
        }
        let parts: Vec<QfFormula> = self
            .conjuncts
            .iter()
            .map(|c| {
                if c.is_empty() {
                    return QfFormula::Atom(one.clone(), Relation::Ge);
                }
                let atoms: Vec<QfFormula> = c
                    .iter()
                    .map(|(p, w)| QfFormula::Atom(p.clone(), w.to_relation()))
                    .collect();
                if atoms.len() == 1 {
                    atoms.into_iter().next().unwrap()
                } else {
                    QfFormula::And(atoms)
                }
            })
            .collect();
        if parts.len() == 1 {
            parts.into_iter().next().unwrap()
        } else {
            QfFormula::Or(parts)
        }
    }

    /// Distinct polynomials of all atoms.
    pub fn polys(&self) -> Vec<MultiPoly> {
        let mut out = Vec::new();
        for c in &self.conjuncts {
            for (p, _) in c {
                if !out.contains(p) {
                    out.push(p.clone());
                }
            }
        }
        out
    }

    pub fn eval(&self, point: &BTreeMap<String, Q>) -> Result<bool, String> {
        'next: for c in &self.conjuncts {
            for (p, w) in c {
                if !w.holds(q_sign(&p.eval(point)?)) {
                    continue 'next;
                }
            }
            return Ok(true);
        }
        Ok(false)
    }
}

/// Parses the formula grammar: atoms `(<poly> <op> 0)` with
/// `op ∈ {<, <=, =, >=, >, !=}`, connectives `&`, `|`, `!`, parentheses.
pub fn parse_formula(input: &str) -> Result<QfFormula, String> {
    let mut p = FormulaParser {
        chars: input.chars().collect(),
        pos: 0,
    };
    let f = p.parse_or()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(format!("unexpected trailing input at offset {}", p.pos));
    }
    Ok(f)
}

struct FormulaParser {
    chars: Vec<char>,
    pos: usize,
}

impl FormulaParser {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn parse_or(&mut self) -> Result<QfFormula, String> {
        let mut parts = vec![self.parse_and()?];
        while self.peek() == Some('|') {
            self.pos += 1;
            parts.push(self.parse_and()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            QfFormula::Or(parts)
        })
    }

    fn parse_and(&mut self) -> Result<QfFormula, String> {
        let mut parts = vec![self.parse_unary()?];
        while self.peek() == Some('&') {
            self.pos += 1;
            parts.push(self.parse_unary()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            QfFormula::And(parts)
        })
    }

    fn parse_unary(&mut self) -> Result<QfFormula, String> {
        match self.peek() {
            Some('!') => {
                self.pos += 1;
                Ok(QfFormula::Not(Box::new(self.parse_unary()?)))
            }
            Some('(') => self.parse_group_or_atom(),
            _ => Err("expected `(`, `!`, or an atom".to_string()),
        }
    }

    /// A parenthesized unit: an atom `(poly op 0)` if a top-level relational
    /// operator occurs inside, otherwise a grouped sub-formula.
    fn parse_group_or_atom(&mut self) -> Result<QfFormula, String> {
        self.skip_ws();
        debug_assert_eq!(self.chars.get(self.pos), Some(&'('));
        let open = self.pos;
        let close = self.matching_paren(open)?;
        let inner: String = self.chars[open + 1..close].iter().collect();
        if let Some((lhs, rel, rhs)) = split_relation(&inner) {
            let poly = parse_poly(lhs)?;
            if poly.is_zero() {
                return Err("atom polynomial must be nonzero".to_string());
            }
            if rhs.trim() != "0" {
                return Err(format!("atom right-hand side must be 0, found `{rhs}`"));
            }
            self.pos = close + 1;
            return Ok(QfFormula::Atom(poly, rel));
        }
        // Grouped sub-formula.
        self.pos = open + 1;
        let f = self.parse_or()?;
        self.skip_ws();
        if self.chars.get(self.pos) != Some(&')') {
            return Err("missing closing parenthesis".to_string());
        }
        self.pos += 1;
        Ok(f)
    }

    fn matching_paren(&self, open: usize) -> Result<usize, String> {
        let mut depth = 0usize;
        for (i, &c) in self.chars.iter().enumerate().skip(open) {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(i);
                    }
                }
                _ => {}
            }
        }
        Err("unbalanced parentheses".to_string())
    }
}

/// Splits `lhs op rhs` at a top-level relational operator.
fn split_relation(s: &str) -> Option<(&str, Relation, &str)> {
    let bytes = s.as_bytes();
    let mut depth = 0usize;
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'<' | b'>' | b'=' | b'!' if depth == 0 => {
                let two = i + 1 < bytes.len() && bytes[i + 1] == b'=';
                let rel = match (bytes[i], two) {
                    (b'<', true) => Relation::Le,
                    (b'<', false) => Relation::Lt,
                    (b'>', true) => Relation::Ge,
                    (b'>', false) => Relation::Gt,
                    (b'=', false) => Relation::Eq,
                    (b'!', true) => Relation::Ne,
                    _ => return None,
                };
                let end = if two { i + 2 } else { i + 1 };
                return Some((&s[..i], rel, &s[end..]));
            }
            _ => {}
        }
        i += 1;
    }
    None
}
