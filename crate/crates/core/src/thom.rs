//! Real algebraic numbers as Thom encodings: a square-free defining
//! polynomial together with the signs of its derivative tuple at the root,
//! plus a rational isolating interval used to make comparisons and sign
//! queries effective.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;

use crate::rational::{format_rational, Q};
use crate::unipoly::{signed_remainder_sequence, sign_variations, sturm_count, Bound, UniPoly};

/// Sign condition on an indexed family of polynomials.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct SignCondition {
    /// `(polynomial id, sign)` pairs; each id appears at most once.
    pub assignments: Vec<(usize, i8)>,
}

/// One real algebraic number.
#[derive(Clone)]
pub struct ThomEncoding {
    poly: UniPoly,
    der_signs: Vec<i8>,
    interval: (Q, Q),
}

impl ThomEncoding {
    /// Encodings of all distinct real roots of `f`, in increasing order.
    /// A constant polynomial yields the empty list.
    pub fn encode_roots(f: &UniPoly) -> Result<Vec<ThomEncoding>, String> {
        if f.is_zero() {
            return Err("cannot encode roots of the zero polynomial".to_string());
        }
        let g = f.square_free()?;
        if g.is_constant() {
            return Ok(Vec::new());
        }
        let ders = g.derivatives()?;
        let mut out = Vec::new();
        for (a, b) in crate::unipoly::isolate_roots(&g)? {
            let interval = (a, b);
            let der_signs = ders
                .iter()
                .map(|d| sign_at_root(&g, &interval, d))
                .collect();
            out.push(ThomEncoding {
                poly: g.clone(),
                der_signs,
                interval,
            });
        }
        Ok(out)
    }

    /// Encodes a rational number via the linear polynomial `var - q`.
    pub fn from_rational(var: &str, q: &Q) -> ThomEncoding {
        let poly = UniPoly::new(var, vec![-q.clone(), Q::from_integer(1.into())]);
        ThomEncoding {
            poly,
            der_signs: vec![0, 1],
            interval: (q - Q::from_integer(1.into()), q + Q::from_integer(1.into())),
        }
    }

    pub fn poly(&self) -> &UniPoly {
        &self.poly
    }

    pub fn der_signs(&self) -> &[i8] {
        &self.der_signs
    }

    pub fn interval(&self) -> &(Q, Q) {
        &self.interval
    }

    /// A rational strictly below the root.
    pub fn lower(&self) -> Q {
        self.interval.0.clone()
    }

    /// A rational strictly above the root.
    pub fn upper(&self) -> Q {
        self.interval.1.clone()
    }

    /// Isolating interval of width at most `width`.
    pub fn rational_approx(&self, width: &Q) -> (Q, Q) {
        assert!(width > &Q::zero(), "width must be positive");
        let mut iv = self.interval.clone();
        while &(&iv.1 - &iv.0) > width {
            iv = refine_once(&self.poly, &iv);
        }
        iv
    }

    /// Signs of each polynomial in `polys` at the encoded root.
    pub fn signs_at_root(&self, polys: &[UniPoly]) -> Vec<i8> {
        polys
            .iter()
            .map(|q| sign_at_root(&self.poly, &self.interval, q))
            .collect()
    }

    /// Sign of a single polynomial at the encoded root.
    pub fn sign_of(&self, q: &UniPoly) -> i8 {
        sign_at_root(&self.poly, &self.interval, q)
    }

    /// Total order on the represented real numbers. `Equal` means the two
    /// encodings represent the same real number, possibly via different
    /// defining polynomials.
    pub fn compare(&self, other: &ThomEncoding) -> Ordering {
        let mut iv1 = self.interval.clone();
        let mut iv2 = other.interval.clone();
        let h = self.poly.gcd(&other.poly);
        loop {
            if iv1.1 <= iv2.0 {
                return Ordering::Less;
            }
            if iv2.1 <= iv1.0 {
                return Ordering::Greater;
            }
            if !h.is_constant() {
                let lo = if iv1.0 >= iv2.0 { iv1.0.clone() } else { iv2.0.clone() };
                let hi = if iv1.1 <= iv2.1 { iv1.1.clone() } else { iv2.1.clone() };
                if lo < hi
                    && !h.eval(&lo).is_zero()
                    && !h.eval(&hi).is_zero()
                    && sturm_count(&h, &Bound::Val(lo.clone()), &Bound::Val(hi.clone())).unwrap()
                        >= 1
                {
                    return Ordering::Equal;
                }
            }
            iv1 = refine_once(&self.poly, &iv1);
            iv2 = refine_once(&other.poly, &iv2);
        }
    }

    pub fn is_same_root(&self, other: &ThomEncoding) -> bool {
        self.compare(other) == Ordering::Equal
    }

    /// Canonical JSON form:
    /// `{ "poly": "...", "der_signs": [..], "interval": ["p/q", "p/q"] }`.
    pub fn to_json(&self) -> String {
        let signs: Vec<String> = self.der_signs.iter().map(|s| s.to_string()).collect();
        format!(
            "{{\"poly\": \"{}\", \"der_signs\": [{}], \"interval\": [\"{}\", \"{}\"]}}",
            self.poly,
            signs.join(", "),
            format_rational(&self.interval.0),
            format_rational(&self.interval.1)
        )
    }
}

impl fmt::Display for ThomEncoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "root of {} in ({}, {})",
            self.poly,
            format_rational(&self.interval.0),
            format_rational(&self.interval.1)
        )
    }
}

impl fmt::Debug for ThomEncoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Strictly increasing, duplicate-free list of the real roots of all
/// polynomials in `polys`; roots shared between polynomials appear once.
pub fn order_roots(polys: &[UniPoly]) -> Result<Vec<ThomEncoding>, String> {
    let mut all = Vec::new();
    for p in polys {
        if p.is_zero() {
            return Err("order_roots requires nonzero polynomials".to_string());
        }
        if p.is_constant() {
            continue;
        }
        all.extend(ThomEncoding::encode_roots(p)?);
    }
    all.sort_by(|a, b| a.compare(b));
    let mut out: Vec<ThomEncoding> = Vec::new();
    for t in all {
        if out.last().map(|u| u.is_same_root(&t)).unwrap_or(false) {
            continue;
        }
        out.push(t);
    }
    Ok(out)
}

/// Refines the isolating intervals of an ordered root list until they are
/// pairwise disjoint (each upper endpoint at most the next lower endpoint).
pub fn separate_intervals(roots: &mut [ThomEncoding]) {
    for i in 0..roots.len().saturating_sub(1) {
        loop {
            let b = roots[i].interval.1.clone();
            let a = roots[i + 1].interval.0.clone();
            if b <= a {
                break;
            }
            roots[i].interval = refine_once(&roots[i].poly, &roots[i].interval);
            roots[i + 1].interval = refine_once(&roots[i + 1].poly, &roots[i + 1].interval);
        }
    }
}

/// One bisection step on an isolating interval, keeping endpoints non-roots.
fn refine_once(g: &UniPoly, iv: &(Q, Q)) -> (Q, Q) {
    let (a, b) = iv;
    let two = Q::from_integer(2.into());
    let mid = (a + b) / &two;
    if g.eval(&mid).is_zero() {
        // The root is exactly `mid`.
        let w = (b - a) / Q::from_integer(8.into());
        return (&mid - &w, &mid + &w);
    }
    let left =
        sturm_count(g, &Bound::Val(a.clone()), &Bound::Val(mid.clone())).expect("non-root cut");
    if left == 1 {
        (a.clone(), mid)
    } else {
        (mid, b.clone())
    }
}

/// Exact sign of `q` at the root of the square-free `g` isolated by `iv`.
fn sign_at_root(g: &UniPoly, iv: &(Q, Q), q: &UniPoly) -> i8 {
    if q.is_zero() {
        return 0;
    }
    if q.is_constant() {
        return q.sign_at(&Bound::PosInf);
    }
    // Zero test: the root of g is a root of q iff it is a root of gcd(g, q).
    let h = g.gcd(q);
    if !h.is_constant() {
        let count = sturm_count(
            &h,
            &Bound::Val(iv.0.clone()),
            &Bound::Val(iv.1.clone()),
        )
        .expect("isolating endpoints are not roots of gcd");
        if count == 1 {
            return 0;
        }
    }
    // Nonzero at the root: shrink the interval until q has constant sign on
    // it, then read the sign at the left endpoint.
    let mut iv = iv.clone();
    loop {
        let qa = q.eval(&iv.0);
        let qb = q.eval(&iv.1);
        if !qa.is_zero() && !qb.is_zero() {
            let roots_inside =
                sturm_count(q, &Bound::Val(iv.0.clone()), &Bound::Val(iv.1.clone())).unwrap();
            if roots_inside == 0 {
                return crate::rational::q_sign(&qa);
            }
        }
        iv = refine_once(g, &iv);
    }
}

/// Number of distinct real roots of `q` strictly between two rational
/// bounds, allowing the bounds to be roots of `q` themselves.
pub fn count_roots_open(q: &UniPoly, lo: &Q, hi: &Q) -> usize {
    if q.is_constant() {
        return 0;
    }
    let g = q.square_free().expect("nonzero");
    let seq = signed_remainder_sequence(&g, &g.derivative());
    let vars_at = |x: &Q| {
        let signs: Vec<i8> = seq.iter().map(|p| p.sign_at(&Bound::Val(x.clone()))).collect();
        sign_variations(&signs)
    };
    let raw = vars_at(lo).saturating_sub(vars_at(hi));
    // Sign variations are right-continuous at roots, so `raw` counts roots in
    // (lo, hi]; drop hi itself when it is a root.
    if g.eval(hi).is_zero() {
        raw.saturating_sub(1)
    } else {
        raw
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::parse_poly;
    use crate::rational::{q_int, q_ratio};

    fn up(s: &str) -> UniPoly {
        let p = parse_poly(s).unwrap();
        let var = p
            .support_vars()
            .first()
            .cloned()
            .unwrap_or_else(|| "X".to_string());
        UniPoly::from_multipoly(&p, &var).unwrap()
    }

    #[test]
    fn encode_roots_examples() {
        let roots = ThomEncoding::encode_roots(&up("X^2 - 2")).unwrap();
        assert_eq!(roots.len(), 2);
        // First root is -sqrt(2): derivative 2X is negative there.
        assert_eq!(roots[0].der_signs(), &[0, -1, 1]);
        assert_eq!(roots[1].der_signs(), &[0, 1, 1]);

        assert!(ThomEncoding::encode_roots(&up("X^2 + 1"))
            .unwrap()
            .is_empty());

        let roots = ThomEncoding::encode_roots(&up("X^3 - X")).unwrap();
        assert_eq!(roots.len(), 3);
        for (r, target) in roots.iter().zip([q_int(-1), q_int(0), q_int(1)]) {
            let (a, b) = r.rational_approx(&q_ratio(1, 100));
            assert!(a < target && target < b);
        }
    }

    #[test]
    fn thom_determinacy() {
        // Distinct roots of a square-free polynomial get distinct sign
        // vectors on the derivative tuple.
        for s in ["X^2 - 2", "X^3 - X", "X^4 - 5*X^2 + 4"] {
            let roots = ThomEncoding::encode_roots(&up(s)).unwrap();
            for i in 0..roots.len() {
                for j in i + 1..roots.len() {
                    assert_ne!(roots[i].der_signs(), roots[j].der_signs());
                }
            }
        }
    }

    #[test]
    fn compare_examples() {
        let sqrt2 = ThomEncoding::encode_roots(&up("X^2 - 2")).unwrap()[1].clone();
        let sqrt3 = ThomEncoding::encode_roots(&up("X^2 - 3")).unwrap()[1].clone();
        assert_eq!(sqrt2.compare(&sqrt3), Ordering::Less);

        let one_linear = ThomEncoding::encode_roots(&up("X - 1")).unwrap()[0].clone();
        let one_quadratic = ThomEncoding::encode_roots(&up("X^2 - 1")).unwrap()[1].clone();
        assert_eq!(one_linear.compare(&one_quadratic), Ordering::Equal);

        let neg_sqrt2 = ThomEncoding::encode_roots(&up("X^2 - 2")).unwrap()[0].clone();
        let zero = ThomEncoding::encode_roots(&up("X")).unwrap()[0].clone();
        assert_eq!(neg_sqrt2.compare(&zero), Ordering::Less);
    }

    #[test]
    fn order_roots_examples() {
        let merged = order_roots(&[up("X^2 - 2"), up("X^2 - 3")]).unwrap();
        assert_eq!(merged.len(), 4);
        let approximations: Vec<(Q, Q)> = merged
            .iter()
            .map(|t| t.rational_approx(&q_ratio(1, 100)))
            .collect();
        for w in approximations.windows(2) {
            assert!(w[0].1 <= w[1].1);
        }

        let merged = order_roots(&[up("X^2 - 1"), up("X - 1")]).unwrap();
        assert_eq!(merged.len(), 2);

        let merged = order_roots(&[UniPoly::constant("X", q_int(7))]).unwrap();
        assert!(merged.is_empty());
    }

    #[test]
    fn signs_at_root_examples() {
        let sqrt2 = ThomEncoding::encode_roots(&up("X^2 - 2")).unwrap()[1].clone();
        assert_eq!(sqrt2.signs_at_root(&[up("X")]), vec![1]);
        assert_eq!(sqrt2.signs_at_root(&[up("X^2 - 2")]), vec![0]);
        assert_eq!(sqrt2.signs_at_root(&[up("X - 2"), up("X - 1")]), vec![-1, 1]);
        // Identity: the defining polynomial is zero at its own root.
        assert_eq!(sqrt2.sign_of(sqrt2.poly()), 0);
    }

    #[test]
    fn rational_approx_examples() {
        let sqrt2 = ThomEncoding::encode_roots(&up("X^2 - 2")).unwrap()[1].clone();
        let (a, b) = sqrt2.rational_approx(&q_ratio(1, 100));
        assert!(&b - &a <= q_ratio(1, 100));
        assert!(a > q_ratio(140, 100) && b < q_ratio(143, 100));

        let neg_sqrt3 = ThomEncoding::encode_roots(&up("X^2 - 3")).unwrap()[0].clone();
        let (a, b) = neg_sqrt3.rational_approx(&q_ratio(1, 10));
        assert!(a > q_ratio(-18, 10) && b < q_ratio(-17, 10));
    }

    #[test]
    fn count_roots_open_handles_endpoint_roots() {
        let f = up("X^3 - X");
        assert_eq!(count_roots_open(&f, &q_int(-1), &q_int(1)), 1);
        assert_eq!(count_roots_open(&f, &q_int(-2), &q_int(2)), 3);
        assert_eq!(count_roots_open(&f, &q_int(0), &q_int(1)), 0);
    }

    #[test]
    fn comparison_is_total_order_on_mixed_roots() {
        let mut all = Vec::new();
        for s in ["X^2 - 2", "X^3 - X", "X^2 - 3", "2*X - 3"] {
            all.extend(ThomEncoding::encode_roots(&up(s)).unwrap());
        }
        // Antisymmetry and transitivity spot checks on all triples.
        for a in &all {
            for b in &all {
                let ab = a.compare(b);
                let ba = b.compare(a);
                assert_eq!(ab, ba.reverse());
                for c in &all {
                    if ab != Ordering::Greater && b.compare(c) != Ordering::Greater {
                        assert_ne!(a.compare(c), Ordering::Greater);
                    }
                }
            }
        }
    }
}
