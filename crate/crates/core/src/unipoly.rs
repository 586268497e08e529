//! Dense univariate polynomials over `Q`: derivative tuples, signed remainder
//! sequences, root counting and isolation.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::multipoly::MultiPoly;
use crate::rational::{q_sign, Q};

/// Univariate polynomial over `Q` with a distinguished main variable.
/// Coefficients are stored lowest degree first; the leading coefficient is
/// nonzero unless the polynomial is zero.
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    var: String,
    coeffs: Vec<Q>,
}

/// Interval endpoint for root counting.
#[derive(Clone, Debug, PartialEq)]
pub enum Bound {
    NegInf,
    Val(Q),
    PosInf,
}

impl UniPoly {
    pub fn new(var: &str, mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        UniPoly {
            var: var.to_string(),
            coeffs,
        }
    }

    pub fn zero(var: &str) -> Self {
        Self::new(var, Vec::new())
    }

    pub fn constant(var: &str, c: Q) -> Self {
        Self::new(var, vec![c])
    }

    /// Converts a multivariate polynomial that involves at most `var`.
    pub fn from_multipoly(p: &MultiPoly, var: &str) -> Result<Self, String> {
        let support = p.support_vars();
        if support.iter().any(|v| v != var) {
            return Err(format!(
                "polynomial `{p}` is not univariate in `{var}`"
            ));
        }
        let coeffs = p
            .as_univariate_in(var)
            .into_iter()
            .map(|c| c.constant_term())
            .collect();
        Ok(Self::new(var, coeffs))
    }

    pub fn to_multipoly(&self) -> MultiPoly {
        let var = self.var.as_str();
        let x = MultiPoly::var(&[var], var);
        let mut acc = MultiPoly::zero(&[]);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&x).add(&MultiPoly::constant(&[], c.clone()));
        }
        acc
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading_coeff(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero(&self.var);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Q::from_integer(i.into()))
            .collect();
        Self::new(&self.var, coeffs)
    }

    /// The tuple `(f, f', ..., f^(deg f))`; the last entry is a nonzero
    /// constant. Errors on the zero polynomial.
    pub fn derivatives(&self) -> Result<Vec<UniPoly>, String> {
        if self.is_zero() {
            return Err("zero polynomial has no Der tuple".to_string());
        }
        let mut out = vec![self.clone()];
        while !out.last().unwrap().is_constant() {
            out.push(out.last().unwrap().derivative());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.var, self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![Q::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        Self::new(&self.var, coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.var);
        }
        let mut coeffs = vec![Q::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::new(&self.var, coeffs)
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::new(&self.var, self.coeffs.iter().map(|k| k * c).collect())
    }

    /// Euclidean division over `Q`, returning (quotient, remainder).
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.degree() < divisor.degree() || self.is_zero() {
            return (Self::zero(&self.var), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let dlc = divisor.leading_coeff();
        let ddeg = divisor.degree();
        let qdeg = self.degree() - ddeg;
        let mut quot = vec![Q::zero(); qdeg + 1];
        for k in (0..=qdeg).rev() {
            let c = &rem[k + ddeg] / &dlc;
            if c.is_zero() {
                continue;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                let v = &rem[k + i] - &(d * &c);
                rem[k + i] = v;
            }
            quot[k] = c;
        }
        (Self::new(&self.var, quot), Self::new(&self.var, rem))
    }

    /// Divides every coefficient by the positive content, preserving signs.
    fn primitive_positive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        use num_integer::Integer;
        let mut num = num_bigint::BigInt::zero();
        let mut den = num_bigint::BigInt::one();
        for c in &self.coeffs {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        let content = Q::new(num, den);
        self.scale(&content.recip())
    }

    /// Greatest common divisor, primitive with positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        if a.is_zero() {
            return normalize_gcd(b);
        }
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.primitive_positive();
        }
        normalize_gcd(a)
    }

    /// Square-free part `f / gcd(f, f')`, primitive, same distinct real roots.
    pub fn square_free(&self) -> Result<Self, String> {
        if self.is_zero() {
            return Err("zero polynomial has no square-free part".to_string());
        }
        if self.is_constant() {
            return Ok(self.primitive_positive());
        }
        let g = self.gcd(&self.derivative());
        let (q, r) = self.div_rem(&g);
        debug_assert!(r.is_zero());
        Ok(normalize_gcd(q))
    }

    /// Sign of the polynomial at an extended point.
    pub fn sign_at(&self, x: &Bound) -> i8 {
        if self.is_zero() {
            return 0;
        }
        match x {
            Bound::Val(q) => q_sign(&self.eval(q)),
            Bound::PosInf => q_sign(&self.leading_coeff()),
            Bound::NegInf => {
                let s = q_sign(&self.leading_coeff());
                if self.degree() % 2 == 0 {
                    s
                } else {
                    -s
                }
            }
        }
    }

    /// Cauchy bound: every real root lies in `(-B, B)`.
    pub fn root_bound(&self) -> Q {
        if self.coeffs.len() <= 1 {
            return Q::one();
        }
        let lc = self.leading_coeff().abs();
        let mut max = Q::zero();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let v = c.abs() / &lc;
            if v > max {
                max = v;
            }
        }
        max + Q::one()
    }
}

fn normalize_gcd(p: UniPoly) -> UniPoly {
    if p.is_zero() {
        return p;
    }
    let mut q = p.primitive_positive();
    if q.leading_coeff().is_negative() {
        q = q.neg();
    }
    q
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_multipoly().to_canonical_string())
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Signed remainder (Sturm) sequence of `(f, g)` with primitive-part
/// reduction at each step; reductions divide by positive constants only, so
/// every sign evaluation agrees with the unreduced sequence.
pub fn signed_remainder_sequence(f: &UniPoly, g: &UniPoly) -> Vec<UniPoly> {
    let mut seq = vec![f.clone()];
    if g.is_zero() {
        return seq;
    }
    seq.push(g.clone());
    loop {
        let n = seq.len();
        let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
        if r.is_zero() {
            return seq;
        }
        seq.push(r.neg().primitive_positive());
    }
}

/// Number of sign variations, zeros ignored.
pub fn sign_variations(signs: &[i8]) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for &s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn variations_at(seq: &[UniPoly], x: &Bound) -> usize {
    let signs: Vec<i8> = seq.iter().map(|p| p.sign_at(x)).collect();
    sign_variations(&signs)
}

/// Number of distinct real roots of `f` in the open interval `(a, b)`.
/// Finite endpoints must not be roots.
pub fn sturm_count(f: &UniPoly, a: &Bound, b: &Bound) -> Result<usize, String> {
    if f.is_zero() {
        return Err("zero polynomial".to_string());
    }
    for x in [a, b] {
        if let Bound::Val(q) = x {
            if f.eval(q).is_zero() {
                return Err("endpoint is a root".to_string());
            }
        }
    }
    if let (Bound::Val(lo), Bound::Val(hi)) = (a, b) {
        assert!(lo < hi, "empty interval");
    }
    let seq = signed_remainder_sequence(f, &f.derivative());
    Ok(variations_at(&seq, a).saturating_sub(variations_at(&seq, b)))
}

/// Isolating intervals for the distinct real roots of `f`, in increasing
/// order. Each open interval `(a, b)` has rational non-root endpoints and
/// contains exactly one root.
pub fn isolate_roots(f: &UniPoly) -> Result<Vec<(Q, Q)>, String> {
    if f.is_zero() {
        return Err("zero polynomial".to_string());
    }
    let g = f.square_free()?;
    if g.is_constant() {
        return Ok(Vec::new());
    }
    let seq = signed_remainder_sequence(&g, &g.derivative());
    let bound = g.root_bound();
    let lo = -bound.clone() - Q::one();
    let hi = bound + Q::one();
    let count = |a: &Q, b: &Q| -> usize {
        variations_at(&seq, &Bound::Val(a.clone()))
            .saturating_sub(variations_at(&seq, &Bound::Val(b.clone())))
    };
    let mut out = Vec::new();
    let total = count(&lo, &hi);
    let mut stack = vec![(lo, hi, total)];
    while let Some((a, b, n)) = stack.pop() {
        match n {
            0 => {}
            1 => out.push((a, b)),
            _ => {
                let mid = (&a + &b) / Q::from_integer(2.into());
                if g.eval(&mid).is_zero() {
                    // The midpoint is a rational root: carve out a small
                    // isolating interval around it and recurse on both sides.
                    let mut delta = (&b - &a) / Q::from_integer(8.into());
                    loop {
                        let l = &mid - &delta;
                        let r = &mid + &delta;
                        if !g.eval(&l).is_zero() && !g.eval(&r).is_zero() && count(&l, &r) == 1 {
                            let n_left = count(&a, &l);
                            let n_right = count(&r, &b);
                            stack.push((r.clone(), b, n_right));
                            out.push((l.clone(), r));
                            stack.push((a, l, n_left));
                            break;
                        }
                        delta /= Q::from_integer(2.into());
                    }
                    continue;
                }
                let n_left = count(&a, &mid);
                let n_right = n - n_left;
                stack.push((mid.clone(), b, n_right));
                stack.push((a, mid, n_left));
            }
        }
    }
    // The stack discipline above does not guarantee global ordering; sort by
    // the left endpoint, which is safe because intervals are disjoint.
    out.sort_by(|x, y| x.0.cmp(&y.0));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::parse_poly;
    use crate::rational::{q_int, q_ratio};

    pub(crate) fn up(s: &str) -> UniPoly {
        let p = parse_poly(s).unwrap();
        let var = p
            .support_vars()
            .first()
            .cloned()
            .unwrap_or_else(|| "X".to_string());
        UniPoly::from_multipoly(&p, &var).unwrap()
    }

    #[test]
    fn der_tuple_examples() {
        let ders = up("X^2 - 2").derivatives().unwrap();
        assert_eq!(ders.len(), 3);
        assert_eq!(ders[1], up("2*X"));
        assert_eq!(ders[2], UniPoly::constant("X", q_int(2)));

        let ders = up("X^3 - X").derivatives().unwrap();
        assert_eq!(ders.len(), 4);
        assert_eq!(ders[1], up("3*X^2 - 1"));
        assert_eq!(ders[2], up("6*X"));
        assert_eq!(ders[3], UniPoly::constant("X", q_int(6)));

        let ders = UniPoly::constant("X", q_int(5)).derivatives().unwrap();
        assert_eq!(ders.len(), 1);

        assert_eq!(
            UniPoly::zero("X").derivatives().unwrap_err(),
            "zero polynomial has no Der tuple"
        );
    }

    #[test]
    fn derivative_chain_property() {
        let f = up("3*X^5 - X^2 + 7");
        let ders = f.derivatives().unwrap();
        for i in 0..ders.len() - 1 {
            assert_eq!(ders[i].derivative(), ders[i + 1]);
        }
        assert!(ders.last().unwrap().is_constant());
    }

    #[test]
    fn sturm_count_examples() {
        let f = up("X^3 - X");
        assert_eq!(
            sturm_count(&f, &Bound::Val(q_int(-2)), &Bound::Val(q_int(2))).unwrap(),
            3
        );
        let g = up("X^2 + 1");
        assert_eq!(sturm_count(&g, &Bound::NegInf, &Bound::PosInf).unwrap(), 0);
        let h = up("X^2 - 2");
        assert_eq!(
            sturm_count(&h, &Bound::Val(q_int(0)), &Bound::Val(q_int(2))).unwrap(),
            1
        );
        assert_eq!(
            sturm_count(&f, &Bound::Val(q_int(1)), &Bound::Val(q_int(2))).unwrap_err(),
            "endpoint is a root"
        );
    }

    #[test]
    fn sturm_counts_distinct_roots_with_multiplicity_present() {
        let f = up("X^2 - 2*X + 1"); // (X-1)^2
        assert_eq!(sturm_count(&f, &Bound::NegInf, &Bound::PosInf).unwrap(), 1);
    }

    #[test]
    fn square_free_examples() {
        assert_eq!(up("X^2").square_free().unwrap(), up("X"));
        let f = up("(X - 1)^2 * (X + 2)").square_free().unwrap();
        assert_eq!(f, up("(X - 1)*(X + 2)"));
        assert_eq!(up("X^2 - 2").square_free().unwrap(), up("X^2 - 2"));
    }

    #[test]
    fn gcd_basics() {
        let a = up("(X - 1)*(X + 3)");
        let b = up("(X - 1)*(X - 5)");
        assert_eq!(a.gcd(&b), up("X - 1"));
        assert_eq!(up("X^2 - 2").gcd(&up("X - 1")).degree(), 0);
    }

    #[test]
    fn isolation_finds_all_roots() {
        let f = up("X^3 - X");
        let roots = isolate_roots(&f).unwrap();
        assert_eq!(roots.len(), 3);
        for ((a, b), target) in roots.iter().zip([q_int(-1), q_int(0), q_int(1)]) {
            assert!(a < &target && &target < b, "{a} < {target} < {b}");
        }
        assert!(isolate_roots(&up("X^2 + 1")).unwrap().is_empty());
        // Rational root exactly at a bisection midpoint.
        let g = up("X^2 - 1/4");
        let roots = isolate_roots(&g).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots[0].0 < q_ratio(-1, 2) && q_ratio(-1, 2) < roots[0].1);
    }
}
