//! Polynomials in one main variable `T` with infinitesimal coefficients
//! `e0, e1, ...` (ordered `0 < e_m << ... << e0 << 1`), their decomposition
//! into coefficient polynomials per infinitesimal monomial, and the removal
//! of infinitesimals that produces Thom-encoded real values.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::multipoly::MultiPoly;
use crate::rational::Q;
use crate::thom::{order_roots, separate_intervals, ThomEncoding};
use crate::unipoly::{sturm_count, Bound, UniPoly};

/// Reserved main variable name.
pub const MAIN_VAR: &str = "T";

/// Polynomial in `D[e0, ..., em][T]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EpsPoly {
    body: MultiPoly,
}

impl EpsPoly {
    /// Wraps a polynomial whose variables are `T` and `e<k>` names only.
    pub fn new(body: MultiPoly) -> Result<EpsPoly, String> {
        if body.is_zero() {
            return Err("eps-polynomial must be nonzero".to_string());
        }
        for v in body.support_vars() {
            if v != MAIN_VAR && eps_index(&v).is_none() {
                return Err(format!(
                    "variable `{v}` is neither `{MAIN_VAR}` nor an eps variable `e<k>`"
                ));
            }
        }
        Ok(EpsPoly { body })
    }

    pub fn parse(text: &str) -> Result<EpsPoly, String> {
        EpsPoly::new(crate::multipoly::parse_poly(text)?)
    }

    pub fn body(&self) -> &MultiPoly {
        &self.body
    }

    /// Indices of the eps variables that occur.
    pub fn eps_indices(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .body
            .support_vars()
            .iter()
            .filter_map(|v| eps_index(v))
            .collect();
        out.sort_unstable();
        out
    }

    /// Substitutes `e_i := eta^(i+1)`, matching the infinitesimal ordering,
    /// and returns the resulting univariate polynomial in `T`.
    pub fn substitute_eta(&self, eta: &Q) -> UniPoly {
        let mut body = self.body.clone();
        for v in self.body.support_vars() {
            if let Some(i) = eps_index(&v) {
                let mut value = Q::one();
                for _ in 0..=i {
                    value *= eta;
                }
                body = body.substitute(&v, &MultiPoly::constant(&[], value));
            }
        }
        UniPoly::from_multipoly(&body, MAIN_VAR).expect("only T remains after substitution")
    }
}

fn eps_index(name: &str) -> Option<usize> {
    let rest = name.strip_prefix('e')?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

/// Decomposition `G = sum_alpha m_alpha * G_alpha` with `m_alpha` a monomial
/// in the eps variables and `G_alpha` univariate in `T` over `Q`.
#[derive(Clone, Debug)]
pub struct CoefficientDecomposition {
    /// `(eps monomial, coefficient polynomial)`, eps monomials in increasing
    /// lex order of their exponent vectors; all coefficients nonzero.
    pub parts: Vec<(MultiPoly, UniPoly)>,
}

impl CoefficientDecomposition {
    /// Reassembles `sum_alpha m_alpha * G_alpha`.
    pub fn reassemble(&self) -> MultiPoly {
        let mut acc = MultiPoly::zero(&[]);
        for (m, g) in &self.parts {
            acc = acc.add(&m.mul(&g.to_multipoly()));
        }
        acc
    }

    /// The nonconstant coefficient polynomials.
    pub fn nonconstant_coeffs(&self) -> Vec<UniPoly> {
        self.parts
            .iter()
            .map(|(_, g)| g.clone())
            .filter(|g| !g.is_constant())
            .collect()
    }
}

/// Groups `G` by its eps-monomials.
pub fn decompose(g: &EpsPoly) -> CoefficientDecomposition {
    let body = &g.body;
    let vars = body.vars().to_vec();
    let eps_positions: Vec<usize> = vars
        .iter()
        .enumerate()
        .filter(|(_, v)| eps_index(v).is_some())
        .map(|(i, _)| i)
        .collect();
    let t_pos = vars.iter().position(|v| v == MAIN_VAR);

    let mut groups: BTreeMap<Vec<u32>, Vec<Q>> = BTreeMap::new();
    for (exp, c) in body.terms() {
        let key: Vec<u32> = eps_positions.iter().map(|&i| exp[i]).collect();
        let t_deg = t_pos.map(|i| exp[i]).unwrap_or(0) as usize;
        let coeffs = groups.entry(key).or_default();
        if coeffs.len() <= t_deg {
            coeffs.resize(t_deg + 1, Q::zero());
        }
        coeffs[t_deg] = &coeffs[t_deg] + c;
    }

    let parts = groups
        .into_iter()
        .map(|(key, coeffs)| {
            let mut monomial = MultiPoly::constant(&[], Q::one());
            for (k, &pos) in eps_positions.iter().enumerate() {
                if key[k] > 0 {
                    let v = MultiPoly::var(&[vars[pos].as_str()], &vars[pos]);
                    monomial = monomial.mul(&v.pow(key[k]));
                }
            }
            (monomial, UniPoly::new(MAIN_VAR, coeffs))
        })
        .filter(|(_, g)| !g.is_zero())
        .collect();
    CoefficientDecomposition { parts }
}

/// Removal of infinitesimals: collects the nonconstant coefficient
/// polynomials `G_alpha` of every member of `g_set` into a family `H` and
/// returns the ordered Thom encodings of all real roots of `H`. Every open
/// interval between consecutive output values avoids the (infinitesimally
/// perturbed) roots of the inputs.
pub fn remove_infinitesimals(g_set: &[EpsPoly]) -> Result<Vec<ThomEncoding>, String> {
    let mut family: Vec<UniPoly> = Vec::new();
    for g in g_set {
        for coeff in decompose(g).nonconstant_coeffs() {
            if !family.contains(&coeff) {
                family.push(coeff);
            }
        }
    }
    order_roots(&family)
}

/// Finite-eta verification instrument for the removal step: substitutes
/// `e_i := eta^(i+1)` and checks that no substituted polynomial has a root
/// in the middle half of any gap between consecutive values of `s_list`.
/// Roots of the substituted polynomials hug the gap endpoints as `eta`
/// shrinks, so a mid-gap root signals a wrong coefficient family. This is a
/// falsifiable proxy for the infinitesimal statement, not its semantics.
pub fn lemma_check(g_set: &[EpsPoly], s_list: &[ThomEncoding], eta: &Q) -> bool {
    assert!(eta > &Q::zero(), "eta must be positive");
    if s_list.len() < 2 {
        return true;
    }
    let mut roots: Vec<ThomEncoding> = s_list.to_vec();
    separate_intervals(&mut roots);
    // Shrink the isolating intervals well below the smallest gap.
    let mut min_gap: Option<Q> = None;
    for w in roots.windows(2) {
        let gap = w[1].lower() - w[0].upper();
        if min_gap.as_ref().map(|g| &gap < g).unwrap_or(true) {
            min_gap = Some(gap);
        }
    }
    let width = min_gap
        .filter(|g| g > &Q::zero())
        .map(|g| g / Q::from_integer(16.into()))
        .unwrap_or_else(|| Q::new(1.into(), 1024.into()));
    let intervals: Vec<(Q, Q)> = roots.iter().map(|t| t.rational_approx(&width)).collect();

    let substituted: Vec<UniPoly> = g_set.iter().map(|g| g.substitute_eta(eta)).collect();
    for w in intervals.windows(2) {
        let a = &w[0].1;
        let b = &w[1].0;
        if a >= b {
            continue;
        }
        let quarter = (b - a) / Q::from_integer(4.into());
        let mut u = a + &quarter;
        let mut v = b - &quarter;
        for g_hat in &substituted {
            if g_hat.is_constant() {
                continue;
            }
            // Nudge the test points off any root of g_hat.
            let step = (&v - &u) / Q::from_integer(1024.into());
            while g_hat.eval(&u).is_zero() {
                u += &step;
            }
            while g_hat.eval(&v).is_zero() {
                v -= &step;
            }
            if u >= v {
                return false;
            }
            let count = sturm_count(g_hat, &Bound::Val(u.clone()), &Bound::Val(v.clone()))
                .expect("endpoints nudged off roots");
            if count > 0 {
                return false;
            }
        }
    }
    true
}
