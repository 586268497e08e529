//! Sub-level-set barcodes of bounded semi-algebraic sets: perturb the
//! defining family with one infinitesimal per member, collect critical-value
//! systems from Jacobian rank conditions, eliminate the space variables by
//! iterated resultants, strip the infinitesimals to Thom-encoded real
//! values, build grid sub-level complexes at rational samples between those
//! values, and reduce to a barcode.

use num_traits::{One, Zero};

use crate::eps::{remove_infinitesimals, EpsPoly};
use crate::filtration::{Bar, Barcode, FiltrationValue};
use crate::formula::ClosedFormula;
use crate::grid::GridSampler;
use crate::multipoly::MultiPoly;
use crate::rational::Q;
use crate::reduction::{reduce_index_barcodes, IndexedFiltration};
use crate::thom::{separate_intervals, ThomEncoding};

/// Reserved name for the level variable introduced by `P - Y`.
pub const LEVEL_VAR: &str = "Y";

/// Bounded semi-algebraic set with a filtering polynomial.
pub struct SemialgebraicInput {
    pub formula: ClosedFormula,
    pub poly: MultiPoly,
    /// Cube half-width; the ball member is `sum X_i^2 - radius`.
    pub radius: Q,
    /// Highest homology dimension to report.
    pub level: usize,
}

impl SemialgebraicInput {
    /// Sorted space variables of the formula and the filtering polynomial.
    pub fn space_vars(&self) -> Vec<String> {
        let mut vars: Vec<String> = self
            .formula
            .polys()
            .iter()
            .flat_map(|p| p.support_vars())
            .chain(self.poly.support_vars())
            .collect();
        vars.sort();
        vars.dedup();
        vars
    }

    fn validate(&self) -> Result<Vec<String>, String> {
        let vars = self.space_vars();
        if vars.is_empty() {
            return Err("input names no space variables".to_string());
        }
        for v in &vars {
            if v == LEVEL_VAR || v == crate::eps::MAIN_VAR || v.starts_with('e') {
                return Err(format!("variable name `{v}` is reserved"));
            }
        }
        if self.radius <= Q::zero() {
            return Err("radius must be positive".to_string());
        }
        Ok(vars)
    }
}

/// The perturbed family: base members `P_0, ..., P_{s+1}` with two signed
/// copies `P_i + e_i` and `P_i - e_i` each.
pub struct PerturbedFamily {
    /// `P_0 = sum X_i^2 - R`, the formula polynomials, `P_{s+1} = P - Y`.
    pub base: Vec<MultiPoly>,
    /// `members[i] = [P_i + e_i, P_i - e_i]`.
    pub members: Vec<[MultiPoly; 2]>,
    pub space_vars: Vec<String>,
}

/// Builds the perturbed family for an input.
pub fn perturb(input: &SemialgebraicInput) -> Result<PerturbedFamily, String> {
    let vars = input.validate()?;
    let mut base = Vec::new();
    let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let mut ball = MultiPoly::constant(&var_refs, -input.radius.clone());
    for v in &vars {
        ball = ball.add(&MultiPoly::var(&var_refs, v).pow(2));
    }
    base.push(ball);
    base.extend(input.formula.polys());
    let y = MultiPoly::var(&[LEVEL_VAR], LEVEL_VAR);
    base.push(input.poly.sub(&y));
    let members = base
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let name = format!("e{i}");
            let eps = MultiPoly::var(&[name.as_str()], &name);
            [p.add(&eps), p.sub(&eps)]
        })
        .collect();
    Ok(PerturbedFamily {
        base,
        members,
        space_vars: vars,
    })
}

/// One critical-value system: chosen signed members plus the rank-deficiency
/// condition of their Jacobian in the space variables.
pub struct CriticalSystem {
    pub members: Vec<MultiPoly>,
    /// Sum of squares of the maximal minors (`card <= k` systems).
    pub jac_poly: Option<MultiPoly>,
    /// Sum of squares of the members (`card = k + 1` systems).
    pub sigma_poly: Option<MultiPoly>,
    /// Individual maximal minors; they vanish simultaneously exactly on the
    /// rank-deficiency locus, so the elimination uses them directly.
    pub minors: Vec<MultiPoly>,
}

/// Determinant by cofactor expansion; the minors here are at most 3x3.
fn det(m: &[Vec<MultiPoly>]) -> MultiPoly {
    let n = m.len();
    match n {
        0 => MultiPoly::constant(&[], Q::one()),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = MultiPoly::zero(&[]);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let sub: Vec<Vec<MultiPoly>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let cof = m[0][j].mul(&det(&sub));
                acc = if j % 2 == 0 { acc.add(&cof) } else { acc.sub(&cof) };
            }
            acc
        }
    }
}

fn combinations(n: usize, c: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..c).collect();
    if c == 0 || c > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let mut i = c;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - c {
                break;
            }
        }
        if idx[i] == i + n - c {
            return out;
        }
        idx[i] += 1;
        for j in i + 1..c {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Enumerates the critical systems of the perturbed family: every subset of
/// distinct base members that contains the level member `P - Y` (subsets
/// without it eliminate to level-free constraints and contribute no
/// critical values; subsets with both signed copies of one member have empty
/// zero sets), with one signed copy per member.
pub fn critical_systems(family: &PerturbedFamily) -> Vec<CriticalSystem> {
    let k = family.space_vars.len();
    let level_idx = family.base.len() - 1;
    let other_indices: Vec<usize> = (0..level_idx).collect();
    let mut out = Vec::new();
    for extra in 0..=k.min(other_indices.len()) {
        let card = extra + 1;
        if card > k + 1 {
            continue;
        }
        for combo in combinations(other_indices.len(), extra)
            .into_iter()
            .chain(if extra == 0 { vec![vec![]] } else { vec![] })
        {
            let mut chosen_base: Vec<usize> = combo.iter().map(|&i| other_indices[i]).collect();
            chosen_base.push(level_idx);
            // Jacobian rows are sign-independent.
            let jac_rows: Vec<Vec<MultiPoly>> = chosen_base
                .iter()
                .map(|&b| {
                    family
                        .space_vars
                        .iter()
                        .map(|v| family.base[b].partial_derivative(v))
                        .collect()
                })
                .collect();
            let (minors, jac_poly, sigma_template) = if card <= k {
                let mut minors = Vec::new();
                for cols in combinations(k, card) {
                    let sub: Vec<Vec<MultiPoly>> = jac_rows
                        .iter()
                        .map(|row| cols.iter().map(|&c| row[c].clone()).collect())
                        .collect();
                    let d = det(&sub);
                    if !d.is_zero() {
                        minors.push(d);
                    }
                }
                let sos = minors
                    .iter()
                    .fold(MultiPoly::zero(&[]), |acc, m| acc.add(&m.mul(m)));
                (minors, Some(sos), false)
            } else {
                (Vec::new(), None, true)
            };
            for signs in 0..(1u32 << card) {
                let members: Vec<MultiPoly> = chosen_base
                    .iter()
                    .enumerate()
                    .map(|(pos, &b)| {
                        family.members[b][((signs >> pos) & 1) as usize].clone()
                    })
                    .collect();
                let sigma_poly = if sigma_template {
                    Some(
                        members
                            .iter()
                            .fold(MultiPoly::zero(&[]), |acc, m| acc.add(&m.mul(m))),
                    )
                } else {
                    None
                };
                out.push(CriticalSystem {
                    members,
                    jac_poly: jac_poly.clone(),
                    sigma_poly,
                    minors: minors.clone(),
                });
            }
        }
    }
    out
}

/// Desk-scale caps on intermediate elimination polynomials.
const MAX_ELIM_TERMS: usize = 100_000;
const MAX_ELIM_DEGREE: u32 = 400;

fn check_size(p: &MultiPoly) -> Result<(), String> {
    if p.terms().count() > MAX_ELIM_TERMS || p.total_degree() > MAX_ELIM_DEGREE {
        return Err("elimination exceeded the desk-scale size budget".to_string());
    }
    Ok(())
}

/// Eliminates the variables in `elim_vars` from the system by iterated
/// resultants, branching on monomial content. Every output polynomial
/// vanishes at the projection of the system's common zeros; extra factors
/// (a superset of critical values) are expected and harmless downstream.
fn eliminate(system: Vec<MultiPoly>, elim_vars: &[String]) -> Result<Vec<MultiPoly>, String> {
    let mut finals = Vec::new();
    let mut stack = vec![system];
    'branches: while let Some(branch) = stack.pop() {
        // Normalize: strip numeric content and eps-monomial factors, drop
        // zero polynomials, kill branches containing a nonzero constant.
        let mut polys: Vec<MultiPoly> = Vec::new();
        for p in branch {
            if p.is_zero() {
                continue;
            }
            let mut p = p.primitive_part();
            // Monomial factors in eps variables never vanish; strip them.
            for (v, _) in p.monomial_content() {
                if v.starts_with('e') && v != *LEVEL_VAR {
                    let content: Vec<(String, u32)> = p
                        .monomial_content()
                        .into_iter()
                        .filter(|(w, _)| w == &v)
                        .collect();
                    for (w, e) in content {
                        let var = MultiPoly::var(&[w.as_str()], &w);
                        for _ in 0..e {
                            p = p.div_exact(&var);
                        }
                    }
                }
            }
            if p.is_constant() {
                continue 'branches; // nonzero constant: empty zero set
            }
            check_size(&p)?;
            if !polys.contains(&p) {
                polys.push(p);
            }
        }
        // Branch on monomial content in an elimination variable or in Y.
        let mut branched = false;
        for (i, p) in polys.iter().enumerate() {
            let content = p.monomial_content();
            if let Some((v, _)) = content
                .iter()
                .find(|(v, _)| elim_vars.contains(v) || v == LEVEL_VAR)
            {
                if v == LEVEL_VAR {
                    // Zero is then a candidate critical value; keep it as a
                    // superset contribution rather than exploring Y = 0.
                    finals.push(MultiPoly::var(&[LEVEL_VAR], LEVEL_VAR));
                } else {
                    let mut zeroed = polys.clone();
                    for q in zeroed.iter_mut() {
                        *q = q.substitute(v, &MultiPoly::zero(&[]));
                    }
                    stack.push(zeroed);
                }
                let mut primitive = polys.clone();
                primitive[i] = p.strip_monomial_content();
                stack.push(primitive);
                branched = true;
                break;
            }
        }
        if branched {
            continue;
        }
        // Pick the next variable to eliminate.
        let active: Vec<&String> = elim_vars
            .iter()
            .filter(|v| polys.iter().any(|p| p.degree_in(v) > 0))
            .collect();
        let Some(var) = active
            .iter()
            .min_by_key(|v| {
                polys
                    .iter()
                    .map(|p| p.degree_in(v))
                    .filter(|&d| d > 0)
                    .min()
                    .unwrap_or(u32::MAX)
            })
            .copied()
        else {
            // Fully eliminated: keep results that still involve Y.
            for p in polys {
                if p.degree_in(LEVEL_VAR) > 0 && !finals.contains(&p) {
                    finals.push(p);
                }
            }
            continue;
        };
        let involving: Vec<usize> = (0..polys.len())
            .filter(|&i| polys[i].degree_in(var) > 0)
            .collect();
        if involving.len() == 1 {
            // A single constraint in this variable projects onto everything;
            // drop it (the remaining system is a superset of the projection).
            let rest: Vec<MultiPoly> = polys
                .into_iter()
                .enumerate()
                .filter(|(i, _)| *i != involving[0])
                .map(|(_, p)| p)
                .collect();
            stack.push(rest);
            continue;
        }
        let pivot_idx = *involving
            .iter()
            .min_by_key(|&&i| (polys[i].degree_in(var), polys[i].terms().count()))
            .unwrap();
        let pivot = polys[pivot_idx].clone();
        let mut next: Vec<MultiPoly> = Vec::new();
        for (i, p) in polys.iter().enumerate() {
            if i == pivot_idx {
                continue;
            }
            if p.degree_in(var) == 0 {
                next.push(p.clone());
                continue;
            }
            let r = crate::resultant::resultant(&pivot, p, var)?;
            check_size(&r)?;
            // An identically zero resultant signals a shared factor; the
            // projection stays covered by the remaining constraints.
            if !r.is_zero() {
                next.push(r);
            }
        }
        stack.push(next);
    }
    Ok(finals)
}

/// The set `G` of candidate critical-value polynomials in `T` (with eps
/// coefficients). Requires `k <= 2`, or `k = 3` when the filtering
/// polynomial is linear in one space variable with constant coefficient, so
/// the first elimination step is a substitution.
pub fn critical_value_polys(family: &PerturbedFamily) -> Result<Vec<EpsPoly>, String> {
    let k = family.space_vars.len();
    if k > 3 {
        return Err(format!(
            "exact critical values support k <= 3, got k = {k}"
        ));
    }
    if k == 3 {
        let p = &family.base[family.base.len() - 1]; // P - Y
        let linear_in_some = family.space_vars.iter().any(|v| {
            p.degree_in(v) == 1 && {
                let coeffs = p.as_univariate_in(v);
                coeffs.len() == 2 && coeffs[1].is_constant()
            }
        });
        if !linear_in_some {
            return Err(
                "k = 3 on the exact path needs a filtering polynomial linear in one variable"
                    .to_string(),
            );
        }
    }
    let mut out: Vec<EpsPoly> = Vec::new();
    for sys in critical_systems(family) {
        let mut system = sys.members.clone();
        system.extend(sys.minors.iter().cloned());
        for final_poly in eliminate(system, &family.space_vars)? {
            let body = final_poly
                .rename_var(LEVEL_VAR, crate::eps::MAIN_VAR)
                .primitive_part();
            let ep = EpsPoly::new(body)?;
            if !out.contains(&ep) {
                out.push(ep);
            }
        }
    }
    Ok(out)
}

/// Ordered critical values with interleaved rational samples: one strictly
/// inside each gap, one below the smallest and one above the largest.
pub struct CriticalValueList {
    pub encodings: Vec<ThomEncoding>,
    pub samples: Vec<Q>,
}

/// Critical values of the filtering polynomial on the input set, as Thom
/// encodings, via perturbation, elimination and infinitesimal removal.
/// The list may strictly contain the true critical set; extra values are
/// harmless because the induced filtration steps are homotopy-equivalent.
pub fn critical_values(input: &SemialgebraicInput) -> Result<CriticalValueList, String> {
    let family = perturb(input)?;
    let g_set = critical_value_polys(&family)?;
    let mut encodings = remove_infinitesimals(&g_set)?;
    separate_intervals(&mut encodings);
    // Tighten every isolating interval so each sample hugs its value from
    // above; grid planes between consecutive values then enter the
    // filtration at the level of the first value at or above them.
    let width = Q::new(1.into(), 65536.into());
    let tight: Vec<(Q, Q)> = encodings.iter().map(|t| t.rational_approx(&width)).collect();
    let mut samples = Vec::with_capacity(encodings.len() + 1);
    if encodings.is_empty() {
        samples.push(Q::zero());
    } else {
        samples.push(tight[0].0.clone() - Q::one());
        for w in tight.windows(2) {
            // Right endpoint of the earlier interval: strictly between the
            // two values once the intervals are this narrow.
            debug_assert!(w[0].1 <= w[1].0);
            samples.push(w[0].1.clone());
        }
        samples.push(tight[encodings.len() - 1].1.clone() + Q::one());
    }
    Ok(CriticalValueList { encodings, samples })
}

/// Options for the semi-algebraic barcode computation.
pub struct PipelineOptions {
    pub grid_n: usize,
    /// Grid thickening of the region formula (zero keeps it exact).
    pub thicken: Q,
    /// Width of the reported isolating intervals for birth/death values.
    pub approx_width: Q,
    /// Extra (non-critical) levels to insert, for superset robustness runs.
    pub extra_levels: Vec<Q>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            grid_n: 32,
            thicken: Q::zero(),
            approx_width: Q::new(1.into(), 1000.into()),
            extra_levels: Vec::new(),
        }
    }
}

/// Barcodes `B_0 .. B_level` of the sub-level filtration of the input set by
/// its filtering polynomial. Filtration steps sit at the Thom-encoded
/// critical values; complexes are grid sub-level sets sampled strictly
/// inside each gap.
pub fn barcode_semialgebraic(
    input: &SemialgebraicInput,
    opts: &PipelineOptions,
) -> Result<Vec<Barcode>, String> {
    let cv = critical_values(input)?;
    // Filtration levels: one per critical value (bounded by the sample just
    // above it), plus any injected extra rational levels.
    let mut levels: Vec<(Q, FiltrationValue)> = Vec::new();
    for (i, t) in cv.encodings.iter().enumerate() {
        levels.push((
            cv.samples[i + 1].clone(),
            FiltrationValue::algebraic(t.clone(), &opts.approx_width),
        ));
    }
    for extra in &opts.extra_levels {
        if levels.iter().any(|(b, _)| b == extra) {
            return Err("extra level collides with a sample bound".to_string());
        }
        levels.push((extra.clone(), FiltrationValue::Rational(extra.clone())));
    }
    levels.sort_by(|(a, _), (b, _)| a.cmp(b));
    for w in levels.windows(2) {
        if let Some(std::cmp::Ordering::Less) = w[1].1.try_cmp(&w[0].1) {
            return Err("extra level breaks the value ordering".to_string());
        }
    }
    if levels.is_empty() {
        levels.push((Q::zero(), FiltrationValue::Rational(Q::zero())));
    }
    let bounds: Vec<Q> = levels.iter().map(|(b, _)| b.clone()).collect();
    let values: Vec<FiltrationValue> = levels.into_iter().map(|(_, v)| v).collect();

    let sampler = GridSampler::new(
        &input.formula,
        &input.poly,
        input.radius.clone(),
        opts.grid_n,
        opts.thicken.clone(),
    )?;
    let births = sampler.filtration_births(&bounds);
    let mut out = Vec::new();
    if births.is_empty() {
        for p in 0..=input.level {
            out.push(Barcode { p, bars: Vec::new() });
        }
        return Ok(out);
    }
    let indexed = IndexedFiltration::from_births(births, bounds.len());
    let index_bars = reduce_index_barcodes(&indexed, input.level);
    for (p, counts) in index_bars.into_iter().enumerate() {
        let mut bars = Vec::new();
        for ((birth, death), mult) in counts {
            bars.push(Bar {
                birth: values[birth].clone(),
                death: match death {
                    Some(d) => values[d].clone(),
                    None => FiltrationValue::PlusInfinity,
                },
                multiplicity: mult,
            });
        }
        let mut code = Barcode { p, bars };
        code.sort();
        out.push(code);
    }
    out.truncate(input.level + 1);
    while out.len() <= input.level {
        let p = out.len();
        out.push(Barcode { p, bars: Vec::new() });
    }
    Ok(out)
}
