//! Filtrations of finite simplicial complexes, filtration values, barcodes,
//! and the `filtration v1` text format.

use std::cmp::Ordering;
use std::fmt;

use crate::complex::{Simplex, SimplicialComplex};
use crate::rational::{format_rational, parse_rational, Q};
use crate::thom::ThomEncoding;

/// Value attached to one filtration step.
#[derive(Clone, Debug)]
pub enum FiltrationValue {
    Index(usize),
    Rational(Q),
    /// Thom-encoded real value together with a rational approximation
    /// interval for reporting.
    Algebraic(ThomEncoding, (Q, Q)),
    MinusInfinity,
    PlusInfinity,
}

impl FiltrationValue {
    pub fn algebraic(t: ThomEncoding, width: &Q) -> FiltrationValue {
        let approx = t.rational_approx(width);
        FiltrationValue::Algebraic(t, approx)
    }

    /// Total order on comparable values; `None` when an `Index` meets a
    /// numeric value.
    pub fn try_cmp(&self, other: &FiltrationValue) -> Option<Ordering> {
        use FiltrationValue::*;
        let rank = |v: &FiltrationValue| match v {
            MinusInfinity => 0u8,
            Index(_) | Rational(_) | Algebraic(..) => 1,
            PlusInfinity => 2,
        };
        let (ra, rb) = (rank(self), rank(other));
        if ra != rb {
            return Some(ra.cmp(&rb));
        }
        match (self, other) {
            (MinusInfinity, MinusInfinity) | (PlusInfinity, PlusInfinity) => {
                Some(Ordering::Equal)
            }
            (Index(a), Index(b)) => Some(a.cmp(b)),
            (Rational(a), Rational(b)) => Some(a.cmp(b)),
            (Algebraic(a, _), Algebraic(b, _)) => Some(a.compare(b)),
            (Rational(a), Algebraic(b, _)) => {
                Some(ThomEncoding::from_rational(b.poly().var(), a).compare(b))
            }
            (Algebraic(a, _), Rational(b)) => {
                Some(a.compare(&ThomEncoding::from_rational(a.poly().var(), b)))
            }
            _ => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(
            self,
            FiltrationValue::PlusInfinity | FiltrationValue::MinusInfinity
        )
    }
}

impl fmt::Display for FiltrationValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiltrationValue::Index(i) => write!(f, "{i}"),
            FiltrationValue::Rational(q) => write!(f, "{}", format_rational(q)),
            FiltrationValue::Algebraic(_, (a, b)) => {
                write!(f, "[{}, {}]", format_rational(a), format_rational(b))
            }
            FiltrationValue::MinusInfinity => write!(f, "-inf"),
            FiltrationValue::PlusInfinity => write!(f, "inf"),
        }
    }
}

/// Nested finite simplicial complexes `K_0 ⊆ ... ⊆ K_N` with optional
/// strictly increasing values per step.
#[derive(Clone, Debug)]
pub struct Filtration {
    complexes: Vec<SimplicialComplex>,
    values: Option<Vec<FiltrationValue>>,
}

impl Filtration {
    pub fn new(
        complexes: Vec<SimplicialComplex>,
        values: Option<Vec<FiltrationValue>>,
    ) -> Result<Filtration, String> {
        if complexes.is_empty() {
            return Err("a filtration needs at least one complex".to_string());
        }
        for w in complexes.windows(2) {
            if !w[0].is_subcomplex_of(&w[1]) {
                return Err("complexes are not nested".to_string());
            }
        }
        if let Some(vals) = &values {
            if vals.len() != complexes.len() {
                return Err("value list length differs from complex count".to_string());
            }
            for w in vals.windows(2) {
                match w[0].try_cmp(&w[1]) {
                    Some(Ordering::Less) => {}
                    _ => return Err("filtration values must be strictly increasing".to_string()),
                }
            }
        }
        Ok(Filtration { complexes, values })
    }

    /// Number of steps `N + 1`.
    pub fn len(&self) -> usize {
        self.complexes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Index of the last step, `N`.
    pub fn last_index(&self) -> usize {
        self.complexes.len() - 1
    }

    /// Complex at step `i`, where `-1` is the empty complex and `N + 1`
    /// repeats the final complex.
    pub fn complex_at(&self, i: isize) -> SimplicialComplex {
        if i < 0 {
            return SimplicialComplex::new();
        }
        let i = (i as usize).min(self.last_index());
        self.complexes[i].clone()
    }

    pub fn complexes(&self) -> &[SimplicialComplex] {
        &self.complexes
    }

    pub fn values(&self) -> Option<&[FiltrationValue]> {
        self.values.as_deref()
    }

    /// The value attached to step `i` (its index when no values present).
    pub fn value_at(&self, i: usize) -> FiltrationValue {
        match &self.values {
            Some(vals) => vals[i].clone(),
            None => FiltrationValue::Index(i),
        }
    }

    /// Birth step of every simplex of the final complex.
    pub fn birth_levels(&self) -> Vec<(Simplex, usize)> {
        let mut out = Vec::new();
        for s in self.complexes[self.last_index()].iter() {
            let birth = self
                .complexes
                .iter()
                .position(|k| k.contains(s))
                .expect("simplex present in the last complex");
            out.push((s.clone(), birth));
        }
        out
    }
}

/// One bar: birth value, death value (`PlusInfinity` when the class never
/// dies) and a positive multiplicity.
#[derive(Clone, Debug)]
pub struct Bar {
    pub birth: FiltrationValue,
    pub death: FiltrationValue,
    pub multiplicity: u32,
}

/// All bars of one homology dimension, sorted by (birth, death).
#[derive(Clone, Debug)]
pub struct Barcode {
    pub p: usize,
    pub bars: Vec<Bar>,
}

impl Barcode {
    pub fn sort(&mut self) {
        self.bars.sort_by(|a, b| {
            a.birth
                .try_cmp(&b.birth)
                .unwrap_or(Ordering::Equal)
                .then(a.death.try_cmp(&b.death).unwrap_or(Ordering::Equal))
        });
    }

    pub fn total_multiplicity(&self) -> u32 {
        self.bars.iter().map(|b| b.multiplicity).sum()
    }
}

impl fmt::Display for Barcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "B_{}:", self.p)?;
        if self.bars.is_empty() {
            writeln!(f, "  (empty)")?;
        }
        for bar in &self.bars {
            writeln!(
                f,
                "  ({}, {}) x{}",
                bar.birth, bar.death, bar.multiplicity
            )?;
        }
        Ok(())
    }
}

/// Parses the `filtration v1` text format: one simplex per line as
/// `<birth_index> <v0> <v1> ...`, optional `value <index> <rational>` lines.
pub fn parse_filtration(text: &str) -> Result<Filtration, String> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    match lines.next() {
        Some("filtration v1") => {}
        _ => return Err("missing `filtration v1` header".to_string()),
    }
    let mut simplices: Vec<(usize, Simplex)> = Vec::new();
    let mut values: Vec<(usize, FiltrationValue)> = Vec::new();
    for line in lines {
        if line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("value ") {
            let mut parts = rest.splitn(2, char::is_whitespace);
            let idx: usize = parts
                .next()
                .ok_or("missing value index")?
                .parse()
                .map_err(|_| "malformed value index".to_string())?;
            let tok = parts.next().ok_or("missing value literal")?.trim();
            let value = if tok.starts_with('{') {
                let (t, approx) = parse_thom_json(tok)?;
                FiltrationValue::Algebraic(t, approx)
            } else {
                FiltrationValue::Rational(parse_rational(tok)?)
            };
            values.push((idx, value));
            continue;
        }
        let mut nums = line.split_whitespace().map(|t| {
            t.parse::<usize>()
                .map_err(|_| format!("malformed simplex line `{line}`"))
        });
        let birth = nums.next().ok_or("empty simplex line")??;
        let verts: Vec<usize> = nums.collect::<Result<_, _>>()?;
        if verts.is_empty() {
            return Err(format!("simplex line `{line}` has no vertices"));
        }
        simplices.push((birth, verts));
    }
    if simplices.is_empty() {
        return Err("filtration file has no simplices".to_string());
    }
    let max_birth = simplices.iter().map(|(b, _)| *b).max().unwrap();
    let mut complexes = Vec::with_capacity(max_birth + 1);
    for i in 0..=max_birth {
        let k = SimplicialComplex::from_simplices(
            simplices
                .iter()
                .filter(|(b, _)| *b <= i)
                .map(|(_, s)| s.clone()),
        )?;
        complexes.push(k);
    }
    // Face birth indices must not exceed coface birth indices: equivalent to
    // each prefix complex being closed, which `from_simplices` guarantees,
    // plus every listed simplex appearing no earlier than its faces.
    for (b, s) in &simplices {
        let mut sorted = s.clone();
        sorted.sort_unstable();
        for (b2, s2) in &simplices {
            let mut sorted2 = s2.clone();
            sorted2.sort_unstable();
            if sorted2.iter().all(|v| sorted.contains(v)) && sorted2.len() < sorted.len() && b2 > b
            {
                return Err(format!(
                    "face {sorted2:?} is born after its coface {sorted:?}"
                ));
            }
        }
    }
    let values = if values.is_empty() {
        None
    } else {
        values.sort_by_key(|(i, _)| *i);
        let mut out = Vec::new();
        for (expect, (idx, v)) in values.into_iter().enumerate() {
            if idx != expect {
                return Err("value table must cover indices 0..N exactly".to_string());
            }
            out.push(v);
        }
        if out.len() != complexes.len() {
            return Err("value table must cover every filtration index".to_string());
        }
        Some(out)
    };
    Filtration::new(complexes, values)
}

/// Writes the `filtration v1` format with simplices sorted by
/// (birth, dimension, vertex order).
pub fn write_filtration(f: &Filtration) -> String {
    let mut entries = f.birth_levels();
    entries.sort_by(|(s1, b1), (s2, b2)| b1.cmp(b2).then(s1.len().cmp(&s2.len())).then(s1.cmp(s2)));
    let mut out = String::from("filtration v1\n");
    for (s, b) in entries {
        let verts: Vec<String> = s.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("{} {}\n", b, verts.join(" ")));
    }
    if let Some(vals) = f.values() {
        for (i, v) in vals.iter().enumerate() {
            match v {
                FiltrationValue::Rational(q) => {
                    out.push_str(&format!("value {} {}\n", i, format_rational(q)));
                }
                FiltrationValue::Algebraic(t, _) => {
                    out.push_str(&format!("value {} {}\n", i, t.to_json()));
                }
                FiltrationValue::Index(n) => {
                    out.push_str(&format!("value {} {}\n", i, n));
                }
                FiltrationValue::MinusInfinity | FiltrationValue::PlusInfinity => {}
            }
        }
    }
    out
}

/// Parses the canonical Thom-encoding JSON emitted by `ThomEncoding::to_json`.
pub fn parse_thom_json(text: &str) -> Result<(ThomEncoding, (Q, Q)), String> {
    let poly_text = json_string_field(text, "poly")?;
    let interval = json_array_field(text, "interval")?;
    if interval.len() != 2 {
        return Err("interval must have two entries".to_string());
    }
    let lo = parse_rational(interval[0].trim_matches('"'))?;
    let hi = parse_rational(interval[1].trim_matches('"'))?;
    let poly = crate::multipoly::parse_poly(&poly_text)?;
    let var = poly
        .support_vars()
        .first()
        .cloned()
        .ok_or("constant polynomial in Thom JSON")?;
    let uni = crate::unipoly::UniPoly::from_multipoly(&poly, &var)?;
    // Re-identify the encoded root as the unique root inside the interval.
    let roots = ThomEncoding::encode_roots(&uni)?;
    let mut found = None;
    for r in roots {
        let (a, b) = r.rational_approx(&{
            let w = &hi - &lo;
            if w > Q::new(1.into(), 4.into()) {
                Q::new(1.into(), 4.into())
            } else {
                w
            }
        });
        if a >= lo && b <= hi {
            found = Some(r);
            break;
        }
    }
    let t = found.ok_or("no root of the polynomial inside the stated interval")?;
    Ok((t, (lo, hi)))
}

/// Position just past `"key":` and any following whitespace.
fn json_field_start(text: &str, key: &str) -> Result<usize, String> {
    let pat = format!("\"{key}\":");
    let mut pos = text
        .find(&pat)
        .ok_or_else(|| format!("missing `{key}` field"))?
        + pat.len();
    while text[pos..].starts_with(' ') {
        pos += 1;
    }
    Ok(pos)
}

fn json_string_field(text: &str, key: &str) -> Result<String, String> {
    let start = json_field_start(text, key)?;
    if !text[start..].starts_with('"') {
        return Err(format!("`{key}` field is not a string"));
    }
    let start = start + 1;
    let end = text[start..]
        .find('"')
        .ok_or_else(|| format!("unterminated `{key}` field"))?;
    Ok(text[start..start + end].to_string())
}

fn json_array_field(text: &str, key: &str) -> Result<Vec<String>, String> {
    let start = json_field_start(text, key)?;
    if !text[start..].starts_with('[') {
        return Err(format!("`{key}` field is not an array"));
    }
    let start = start + 1;
    let end = text[start..]
        .find(']')
        .ok_or_else(|| format!("unterminated `{key}` field"))?;
    Ok(text[start..start + end]
        .split(',')
        .map(|s| s.trim().to_string())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q_int;

    fn two_step() -> Filtration {
        let k0 = SimplicialComplex::from_simplices(vec![vec![0], vec![1]]).unwrap();
        let k1 = SimplicialComplex::from_simplices(vec![vec![0, 1]]).unwrap();
        Filtration::new(vec![k0, k1], None).unwrap()
    }

    #[test]
    fn validates_nesting_and_values() {
        let k0 = SimplicialComplex::from_simplices(vec![vec![0, 1]]).unwrap();
        let k1 = SimplicialComplex::from_simplices(vec![vec![0]]).unwrap();
        assert!(Filtration::new(vec![k0.clone(), k1], None).is_err());
        let vals = vec![
            FiltrationValue::Rational(q_int(1)),
            FiltrationValue::Rational(q_int(1)),
        ];
        assert!(Filtration::new(vec![k0.clone(), k0.clone()], Some(vals)).is_err());
    }

    #[test]
    fn file_round_trip() {
        let f = two_step();
        let text = write_filtration(&f);
        let g = parse_filtration(&text).unwrap();
        assert_eq!(g.complexes(), f.complexes());
        assert_eq!(write_filtration(&g), text);
    }

    #[test]
    fn file_round_trip_with_values() {
        let k0 = SimplicialComplex::from_simplices(vec![vec![0]]).unwrap();
        let k1 = SimplicialComplex::from_simplices(vec![vec![0, 1]]).unwrap();
        let vals = vec![
            FiltrationValue::Rational(q_int(0)),
            FiltrationValue::Rational(q_int(4)),
        ];
        let f = Filtration::new(vec![k0, k1], Some(vals)).unwrap();
        let text = write_filtration(&f);
        let g = parse_filtration(&text).unwrap();
        assert_eq!(write_filtration(&g), text);
    }

    #[test]
    fn rejects_face_after_coface() {
        let text = "filtration v1\n0 0 1\n1 0\n";
        assert!(parse_filtration(text).is_err());
    }

    #[test]
    fn thom_value_round_trip() {
        let sqrt2 = {
            let p = crate::multipoly::parse_poly("T^2 - 2").unwrap();
            let u = crate::unipoly::UniPoly::from_multipoly(&p, "T").unwrap();
            ThomEncoding::encode_roots(&u).unwrap()[1].clone()
        };
        let json = sqrt2.to_json();
        let (t, _) = parse_thom_json(&json).unwrap();
        assert!(t.is_same_root(&sqrt2));
    }

    #[test]
    fn value_ordering_mixed() {
        let sqrt2 = {
            let p = crate::multipoly::parse_poly("T^2 - 2").unwrap();
            let u = crate::unipoly::UniPoly::from_multipoly(&p, "T").unwrap();
            ThomEncoding::encode_roots(&u).unwrap()[1].clone()
        };
        let v1 = FiltrationValue::Rational(q_int(1));
        let v2 = FiltrationValue::algebraic(sqrt2, &Q::new(1.into(), 8.into()));
        assert_eq!(v1.try_cmp(&v2), Some(Ordering::Less));
        assert_eq!(v2.try_cmp(&FiltrationValue::PlusInfinity), Some(Ordering::Less));
    }
}
