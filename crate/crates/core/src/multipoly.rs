//! Exact multivariate polynomials with named variables.
//!
//! Variables are fixed and sorted lexicographically at construction, so term
//! maps and the canonical string form are deterministic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::rational::{format_rational, parse_rational, Q};

/// Multivariate polynomial over `Q`. The zero polynomial has an empty term
/// map; stored coefficients are never zero. Equality, ordering and hashing
/// ignore declared-but-unused variables.
#[derive(Clone)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, Q>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        let a = self.shrink_vars();
        let b = other.shrink_vars();
        a.vars == b.vars && a.terms == b.terms
    }
}

impl Eq for MultiPoly {}

impl PartialOrd for MultiPoly {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiPoly {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let a = self.shrink_vars();
        let b = other.shrink_vars();
        a.vars.cmp(&b.vars).then_with(|| a.terms.cmp(&b.terms))
    }
}

impl std::hash::Hash for MultiPoly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        let a = self.shrink_vars();
        a.vars.hash(state);
        a.terms.hash(state);
    }
}

impl MultiPoly {
    pub fn zero(vars: &[&str]) -> Self {
        Self::with_vars(vars.iter().map(|s| s.to_string()).collect())
    }

    fn with_vars(mut vars: Vec<String>) -> Self {
        vars.sort();
        vars.dedup();
        MultiPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[&str], c: Q) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            let exp = vec![0; p.vars.len()];
            p.terms.insert(exp, c);
        }
        p
    }

    pub fn var(vars: &[&str], name: &str) -> Self {
        let mut p = Self::zero(vars);
        let idx = p
            .vars
            .iter()
            .position(|v| v == name)
            .unwrap_or_else(|| panic!("variable `{name}` not among declared variables"));
        let mut exp = vec![0; p.vars.len()];
        exp[idx] = 1;
        p.terms.insert(exp, Q::one());
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when the polynomial has no term of positive degree.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// The constant term (zero if absent).
    pub fn constant_term(&self) -> Q {
        let exp = vec![0; self.vars.len()];
        self.terms.get(&exp).cloned().unwrap_or_else(Q::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, var: &str) -> u32 {
        match self.var_index(var) {
            Some(i) => self.terms.keys().map(|e| e[i]).max().unwrap_or(0),
            None => 0,
        }
    }

    fn var_index(&self, var: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == var)
    }

    /// Variables that actually occur with positive degree.
    pub fn support_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, v) in self.vars.iter().enumerate() {
            if self.terms.keys().any(|e| e[i] > 0) {
                out.push(v.clone());
            }
        }
        out
    }

    fn add_term(&mut self, exp: Vec<u32>, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Returns both polynomials rewritten over the union of their variables.
    fn align(&self, other: &Self) -> (Self, Self) {
        if self.vars == other.vars {
            return (self.clone(), other.clone());
        }
        let mut vars: BTreeSet<String> = self.vars.iter().cloned().collect();
        vars.extend(other.vars.iter().cloned());
        let vars: Vec<String> = vars.into_iter().collect();
        (self.embed(&vars), other.embed(&vars))
    }

    /// Rewrites the polynomial over a superset of its variables (sorted).
    pub fn embed(&self, vars: &[String]) -> Self {
        let mut p = Self::with_vars(vars.to_vec());
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| {
                p.vars
                    .iter()
                    .position(|w| w == v)
                    .expect("embed target must contain all variables")
            })
            .collect();
        for (exp, c) in &self.terms {
            let mut e = vec![0; p.vars.len()];
            for (i, &x) in exp.iter().enumerate() {
                e[map[i]] = x;
            }
            p.terms.insert(e, c.clone());
        }
        p
    }

    /// Drops variables that do not occur; keeps at least the empty list.
    pub fn shrink_vars(&self) -> Self {
        let keep = self.support_vars();
        let mut p = Self::with_vars(keep);
        let map: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| p.vars.iter().position(|w| w == v))
            .collect();
        for (exp, c) in &self.terms {
            let mut e = vec![0; p.vars.len()];
            for (i, &x) in exp.iter().enumerate() {
                if x > 0 {
                    e[map[i].unwrap()] = x;
                }
            }
            p.terms.insert(e, c.clone());
        }
        p
    }

    pub fn neg(&self) -> Self {
        let mut p = Self::with_vars(self.vars.clone());
        for (exp, c) in &self.terms {
            p.terms.insert(exp.clone(), -c.clone());
        }
        p
    }

    pub fn add(&self, other: &Self) -> Self {
        let (mut a, b) = self.align(other);
        for (exp, c) in b.terms {
            a.add_term(exp, c);
        }
        a
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.align(other);
        let mut p = Self::with_vars(a.vars.clone());
        for (e1, c1) in &a.terms {
            for (e2, c2) in &b.terms {
                let exp: Vec<u32> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                p.add_term(exp, c1 * c2);
            }
        }
        p
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::with_vars(self.vars.clone());
        }
        let mut p = Self::with_vars(self.vars.clone());
        for (exp, k) in &self.terms {
            p.terms.insert(exp.clone(), k * c);
        }
        p
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::constant(&[], Q::one()).embed(&self.vars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        result
    }

    pub fn partial_derivative(&self, var: &str) -> Self {
        let mut p = Self::with_vars(self.vars.clone());
        let Some(i) = self.var_index(var) else {
            return p;
        };
        for (exp, c) in &self.terms {
            if exp[i] == 0 {
                continue;
            }
            let mut e = exp.clone();
            e[i] -= 1;
            p.add_term(e, c * Q::from_integer(exp[i].into()));
        }
        p
    }

    /// Evaluates at a full rational point. Errors on a missing binding.
    pub fn eval(&self, point: &BTreeMap<String, Q>) -> Result<Q, String> {
        for v in &self.support_vars() {
            if !point.contains_key(v) {
                return Err(format!("missing binding for variable `{v}`"));
            }
        }
        let mut acc = Q::zero();
        for (exp, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in exp.iter().enumerate() {
                if e > 0 {
                    let x = &point[&self.vars[i]];
                    let mut p = Q::one();
                    for _ in 0..e {
                        p *= x;
                    }
                    term *= p;
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Substitutes a polynomial for one variable.
    pub fn substitute(&self, var: &str, value: &MultiPoly) -> Self {
        let Some(i) = self.var_index(var) else {
            return self.clone();
        };
        // Group by the exponent of `var`, then use Horner on the groups.
        let mut by_deg: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        let rest_vars: Vec<String> = self
            .vars
            .iter()
            .filter(|v| v.as_str() != var)
            .cloned()
            .collect();
        for (exp, c) in &self.terms {
            let d = exp[i];
            let mut e = exp.clone();
            e.remove(i);
            let entry = by_deg
                .entry(d)
                .or_insert_with(|| Self::with_vars(rest_vars.clone()));
            entry.add_term(e, c.clone());
        }
        let max_d = by_deg.keys().max().copied().unwrap_or(0);
        let mut acc = Self::zero(&[]);
        for d in (0..=max_d).rev() {
            acc = acc.mul(value);
            if let Some(coeff) = by_deg.get(&d) {
                acc = acc.add(coeff);
            }
        }
        acc.shrink_vars()
    }

    /// Renames a variable. The new name must not collide with another.
    pub fn rename_var(&self, from: &str, to: &str) -> Self {
        if self.var_index(from).is_none() {
            return self.clone();
        }
        assert!(
            self.var_index(to).is_none(),
            "rename target already present"
        );
        let names: Vec<String> = self
            .vars
            .iter()
            .map(|v| {
                if v == from {
                    to.to_string()
                } else {
                    v.clone()
                }
            })
            .collect();
        let mut p = Self::with_vars(names.clone());
        for (exp, c) in &self.terms {
            let mut e = vec![0; p.vars.len()];
            for (i, &x) in exp.iter().enumerate() {
                let pos = p.vars.iter().position(|w| *w == names[i]).unwrap();
                e[pos] = x;
            }
            p.terms.insert(e, c.clone());
        }
        p
    }

    /// Coefficient list of the polynomial viewed as univariate in `var`,
    /// lowest degree first. Coefficients are polynomials in the remaining
    /// variables.
    pub fn as_univariate_in(&self, var: &str) -> Vec<MultiPoly> {
        let rest_vars: Vec<String> = self
            .vars
            .iter()
            .filter(|v| v.as_str() != var)
            .cloned()
            .collect();
        let Some(i) = self.var_index(var) else {
            return vec![self.clone()];
        };
        let deg = self.degree_in(var) as usize;
        let mut coeffs = vec![Self::with_vars(rest_vars.clone()); deg + 1];
        for (exp, c) in &self.terms {
            let d = exp[i] as usize;
            let mut e = exp.clone();
            e.remove(i);
            coeffs[d].add_term(e, c.clone());
        }
        coeffs
    }

    /// Rebuilds a polynomial from univariate-in-`var` coefficients.
    pub fn from_univariate_in(var: &str, coeffs: &[MultiPoly]) -> Self {
        let mut vars: BTreeSet<String> = coeffs.iter().flat_map(|c| c.vars.iter().cloned()).collect();
        vars.insert(var.to_string());
        let vars: Vec<String> = vars.into_iter().collect();
        let x = Self::var(
            &vars.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
            var,
        );
        let mut acc = Self::zero(&[]);
        for c in coeffs.iter().rev() {
            acc = acc.mul(&x).add(c);
        }
        acc
    }

    /// Rational content: gcd of the coefficient numerators over the lcm of
    /// denominators, with the sign of the leading (lex-largest) term.
    pub fn numeric_content(&self) -> Q {
        use num_integer::Integer;
        if self.is_zero() {
            return Q::zero();
        }
        let mut num = num_bigint::BigInt::zero();
        let mut den = num_bigint::BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        let mut content = Q::new(num, den);
        if self
            .terms
            .iter()
            .next_back()
            .map(|(_, c)| c.is_negative())
            .unwrap_or(false)
        {
            content = -content;
        }
        content
    }

    /// Divides out the numeric content, leaving a primitive polynomial with a
    /// positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.numeric_content();
        self.scale(&c.recip())
    }

    /// The largest monomial dividing every term, as (variable, exponent)
    /// pairs restricted to positive exponents.
    pub fn monomial_content(&self) -> Vec<(String, u32)> {
        if self.is_zero() {
            return Vec::new();
        }
        let n = self.vars.len();
        let mut min = vec![u32::MAX; n];
        for exp in self.terms.keys() {
            for (i, &e) in exp.iter().enumerate() {
                min[i] = min[i].min(e);
            }
        }
        (0..n)
            .filter(|&i| min[i] > 0)
            .map(|i| (self.vars[i].clone(), min[i]))
            .collect()
    }

    /// Divides out the monomial content.
    pub fn strip_monomial_content(&self) -> Self {
        let content = self.monomial_content();
        if content.is_empty() {
            return self.clone();
        }
        let n = self.vars.len();
        let mut min = vec![0u32; n];
        for (v, e) in &content {
            min[self.var_index(v).unwrap()] = *e;
        }
        let mut p = Self::with_vars(self.vars.clone());
        for (exp, c) in &self.terms {
            let e: Vec<u32> = exp.iter().zip(&min).map(|(x, m)| x - m).collect();
            p.terms.insert(e, c.clone());
        }
        p
    }

    /// Exact division: panics unless `divisor` divides `self` exactly.
    /// Used by fraction-free elimination where exactness is guaranteed.
    pub fn div_exact(&self, divisor: &Self) -> Self {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let (mut rem, div) = self.align(divisor);
        let vars = rem.vars.clone();
        let mut quot = Self::with_vars(vars);
        let (dexp, dcoef) = div
            .terms
            .iter()
            .next_back()
            .map(|(e, c)| (e.clone(), c.clone()))
            .unwrap();
        while !rem.is_zero() {
            let (rexp, rcoef) = rem
                .terms
                .iter()
                .next_back()
                .map(|(e, c)| (e.clone(), c.clone()))
                .unwrap();
            let mut qexp = Vec::with_capacity(rexp.len());
            for (r, d) in rexp.iter().zip(&dexp) {
                assert!(r >= d, "inexact polynomial division");
                qexp.push(r - d);
            }
            let qcoef = &rcoef / &dcoef;
            let mut t = Self::with_vars(quot.vars.clone());
            t.terms.insert(qexp.clone(), qcoef.clone());
            rem = rem.sub(&t.mul(&div));
            quot.add_term(qexp, qcoef);
        }
        quot
    }

    /// Canonical string: terms in descending lex order of exponent vectors.
    pub fn to_canonical_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (exp, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in exp.iter().enumerate() {
                if e == 1 {
                    factors.push(self.vars[i].clone());
                } else if e > 1 {
                    factors.push(format!("{}^{}", self.vars[i], e));
                }
            }
            if factors.is_empty() {
                out.push_str(&format_rational(&abs));
            } else {
                if !abs.is_one() {
                    out.push_str(&format_rational(&abs));
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

/// Recursive-descent parser for the shared polynomial grammar:
/// integers (and `p/q` rationals), variable names, `+ - * ^`, parentheses.
pub fn parse_poly(input: &str) -> Result<MultiPoly, String> {
    let mut p = Parser {
        chars: input.chars().collect(),
        pos: 0,
    };
    let poly = p.parse_expr()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(format!(
            "unexpected trailing input at offset {} in `{input}`",
            p.pos
        ));
    }
    Ok(poly.shrink_vars())
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn parse_expr(&mut self) -> Result<MultiPoly, String> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                self.parse_term()?.neg()
            }
            Some('+') => {
                self.pos += 1;
                self.parse_term()?
            }
            _ => self.parse_term()?,
        };
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = acc.add(&self.parse_term()?);
                }
                Some('-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.parse_term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_term(&mut self) -> Result<MultiPoly, String> {
        let mut acc = self.parse_factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.parse_factor()?);
                }
                // Implicit multiplication when a factor starts right away.
                Some(c) if c.is_ascii_alphabetic() || c == '(' => {
                    acc = acc.mul(&self.parse_factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_factor(&mut self) -> Result<MultiPoly, String> {
        let base = self.parse_atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err("expected integer exponent after `^`".into());
            }
            let exp: u32 = self.chars[start..self.pos]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| "exponent out of range".to_string())?;
            return Ok(base.pow(exp));
        }
        Ok(base)
    }

    fn parse_atom(&mut self) -> Result<MultiPoly, String> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.parse_expr()?;
                if self.peek() != Some(')') {
                    return Err("missing closing parenthesis".into());
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                // Optional `/q` for a rational literal.
                if self.chars.get(self.pos) == Some(&'/')
                    && self
                        .chars
                        .get(self.pos + 1)
                        .map(|c| c.is_ascii_digit())
                        .unwrap_or(false)
                {
                    self.pos += 1;
                    while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                }
                let lit: String = self.chars[start..self.pos].iter().collect();
                let q = parse_rational(&lit)?;
                Ok(MultiPoly::constant(&[], q))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                self.pos += 1;
                while self.pos < self.chars.len()
                    && (self.chars[self.pos].is_ascii_alphanumeric() || self.chars[self.pos] == '_')
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                Ok(MultiPoly::var(&[name.as_str()], &name))
            }
            Some(c) => Err(format!("unexpected character `{c}` in polynomial")),
            None => Err("unexpected end of polynomial".into()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q_int;

    fn p(s: &str) -> MultiPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn parse_print_round_trip() {
        for s in [
            "x^2 + y^2 - 1",
            "3*x*y - 2",
            "x^3 - x",
            "(x + y)^2 - x^2 - 2*x*y - y^2",
            "1/2*x - 3",
        ] {
            let a = p(s);
            let b = p(&a.to_canonical_string());
            assert_eq!(a, b, "round trip failed for {s}");
        }
    }

    #[test]
    fn arithmetic_identities() {
        let a = p("x^2 + y^2 - 1");
        let b = p("x - y");
        assert_eq!(a.sub(&a), MultiPoly::zero(&[]).embed(a.vars()));
        assert_eq!(a.mul(&b), b.mul(&a));
        assert!(p("(x+y)^2 - (x^2 + 2*x*y + y^2)").is_zero());
    }

    #[test]
    fn eval_and_derivative() {
        let a = p("x^2*y + 3*x");
        let mut pt = BTreeMap::new();
        pt.insert("x".to_string(), q_int(2));
        pt.insert("y".to_string(), q_int(5));
        assert_eq!(a.eval(&pt).unwrap(), q_int(26));
        assert_eq!(a.partial_derivative("x"), p("2*x*y + 3"));
        assert_eq!(a.partial_derivative("y"), p("x^2"));
        assert!(a.eval(&BTreeMap::new()).is_err());
    }

    #[test]
    fn substitution() {
        let a = p("x^2 + y");
        assert_eq!(a.substitute("x", &p("t - 1")), p("t^2 - 2*t + 1 + y"));
        assert_eq!(a.substitute("y", &p("0")), p("x^2"));
    }

    #[test]
    fn contents_and_exact_division() {
        let a = p("4*x^2*y + 6*x*y^2");
        assert_eq!(a.numeric_content(), q_int(2));
        assert_eq!(
            a.monomial_content(),
            vec![("x".to_string(), 1), ("y".to_string(), 1)]
        );
        assert_eq!(a.strip_monomial_content(), p("4*x + 6*y"));
        let prod = p("x^2 - y^2");
        assert_eq!(prod.div_exact(&p("x - y")), p("x + y"));
    }

    #[test]
    fn univariate_view_round_trip() {
        let a = p("x^2*y + x*z + 7");
        let coeffs = a.as_univariate_in("x");
        assert_eq!(coeffs.len(), 3);
        assert_eq!(MultiPoly::from_univariate_in("x", &coeffs), a);
    }

    #[test]
    fn canonicalization_idempotent() {
        let a = p("x^2 + 2*x + 1");
        let again = parse_poly(&a.to_canonical_string()).unwrap();
        assert_eq!(a.to_canonical_string(), again.to_canonical_string());
    }
}
