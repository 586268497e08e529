//! Deterministic JSON and human-readable emitters for barcodes.

use sabar_core::filtration::{Barcode, FiltrationValue};
use sabar_core::rational::{decimal_string, format_rational, Q};

/// JSON form of a filtration value. Algebraic values carry their defining
/// polynomial, the Thom derivative signs and the refined isolating interval;
/// rationals are `"p/q"` strings, never floats.
fn value_json(v: &FiltrationValue) -> String {
    match v {
        FiltrationValue::Index(i) => i.to_string(),
        FiltrationValue::Rational(q) => format!("\"{}\"", format_rational(q)),
        FiltrationValue::Algebraic(t, (lo, hi)) => {
            let signs: Vec<String> = t.der_signs().iter().map(|s| s.to_string()).collect();
            format!(
                "{{\"poly\": \"{}\", \"der_signs\": [{}], \"interval\": [\"{}\", \"{}\"]}}",
                t.poly(),
                signs.join(", "),
                format_rational(lo),
                format_rational(hi)
            )
        }
        FiltrationValue::MinusInfinity => "\"-inf\"".to_string(),
        FiltrationValue::PlusInfinity => "\"inf\"".to_string(),
    }
}

/// Byte-identical JSON for identical inputs: bars are already sorted by
/// (p, birth, death).
pub fn barcodes_json(codes: &[Barcode]) -> String {
    if codes.is_empty() {
        return "[]".to_string();
    }
    let mut out = String::from("[\n");
    for (ci, code) in codes.iter().enumerate() {
        out.push_str(&format!("  {{\"p\": {}, \"bars\": [", code.p));
        for (bi, bar) in code.bars.iter().enumerate() {
            if bi > 0 {
                out.push_str(", ");
            }
            out.push_str(&format!(
                "{{\"birth\": {}, \"death\": {}, \"mult\": {}}}",
                value_json(&bar.birth),
                match bar.death {
                    FiltrationValue::PlusInfinity => "\"inf\"".to_string(),
                    ref d => value_json(d),
                },
                bar.multiplicity
            ));
        }
        out.push_str("]}");
        if ci + 1 < codes.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("]\n");
    out
}

/// Rational proxy used for display positioning.
pub fn value_position(v: &FiltrationValue) -> Option<Q> {
    match v {
        FiltrationValue::Index(i) => Some(Q::from_integer((*i as i64).into())),
        FiltrationValue::Rational(q) => Some(q.clone()),
        FiltrationValue::Algebraic(_, (lo, hi)) => {
            Some((lo + hi) / Q::from_integer(2.into()))
        }
        _ => None,
    }
}

pub fn barcodes_text(codes: &[Barcode]) -> String {
    let mut out = String::new();
    for code in codes {
        out.push_str(&format!("B_{}:\n", code.p));
        if code.bars.is_empty() {
            out.push_str("  (empty)\n");
            continue;
        }
        for bar in &code.bars {
            let birth = match value_position(&bar.birth) {
                Some(q) => decimal_string(&q, 4),
                None => bar.birth.to_string(),
            };
            let death = if bar.death.is_infinite() {
                "inf".to_string()
            } else {
                match value_position(&bar.death) {
                    Some(q) => decimal_string(&q, 4),
                    None => bar.death.to_string(),
                }
            };
            out.push_str(&format!(
                "  [{birth}, {death}) x{}  birth={}\n",
                bar.multiplicity, bar.birth
            ));
        }
    }
    out
}
