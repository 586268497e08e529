//! Deterministic SVG bar plots: one row per bar, infinite deaths drawn to
//! the right margin with an arrowhead. All coordinates are computed with
//! integer arithmetic from exact rational positions.

use num_traits::{ToPrimitive, Zero};
use sabar_core::filtration::Barcode;
use sabar_core::rational::Q;

use crate::emit::value_position;

const LEFT: i64 = 60;
const RIGHT_PAD: i64 = 50;
const PLOT_WIDTH: i64 = 520;
const ROW: i64 = 18;
const BAR: i64 = 10;

const COLORS: [&str; 4] = ["#1b6ca8", "#b0413e", "#3e8e41", "#8e5ea2"];

fn scale(v: &Q, lo: &Q, hi: &Q) -> i64 {
    let span = hi - lo;
    if span.is_zero() {
        return LEFT + PLOT_WIDTH / 2;
    }
    let rel = (v - lo) * Q::from_integer(PLOT_WIDTH.into()) / span;
    LEFT + rel.floor().to_integer().to_i64().unwrap_or(0)
}

pub fn barcodes_svg(codes: &[Barcode]) -> String {
    // Collect finite positions for the value range.
    let mut positions: Vec<Q> = Vec::new();
    for code in codes {
        for bar in &code.bars {
            if let Some(q) = value_position(&bar.birth) {
                positions.push(q);
            }
            if !bar.death.is_infinite() {
                if let Some(q) = value_position(&bar.death) {
                    positions.push(q);
                }
            }
        }
    }
    let (lo, hi) = match (positions.iter().min(), positions.iter().max()) {
        (Some(a), Some(b)) => (a.clone(), b.clone()),
        _ => (Q::zero(), Q::from_integer(1.into())),
    };
    let n_bars: usize = codes.iter().map(|c| c.bars.len()).sum();
    let height = 40 + (n_bars.max(1) as i64) * ROW;
    let width = LEFT + PLOT_WIDTH + RIGHT_PAD;
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n"
    ));
    out.push_str(&format!(
        "  <line x1=\"{LEFT}\" y1=\"{y}\" x2=\"{x2}\" y2=\"{y}\" stroke=\"#999\"/>\n",
        y = height - 20,
        x2 = LEFT + PLOT_WIDTH
    ));
    out.push_str(&format!(
        "  <text x=\"{LEFT}\" y=\"{y}\" font-size=\"11\" fill=\"#333\">{}</text>\n",
        sabar_core::rational::decimal_string(&lo, 3),
        y = height - 6
    ));
    out.push_str(&format!(
        "  <text x=\"{x}\" y=\"{y}\" font-size=\"11\" fill=\"#333\" text-anchor=\"end\">{}</text>\n",
        sabar_core::rational::decimal_string(&hi, 3),
        x = LEFT + PLOT_WIDTH,
        y = height - 6
    ));
    let mut row = 0i64;
    for code in codes {
        let color = COLORS[code.p % COLORS.len()];
        for bar in &code.bars {
            let y = 20 + row * ROW;
            let x1 = value_position(&bar.birth)
                .map(|q| scale(&q, &lo, &hi))
                .unwrap_or(LEFT);
            let (x2, arrow) = if bar.death.is_infinite() {
                (LEFT + PLOT_WIDTH + 24, true)
            } else {
                (
                    value_position(&bar.death)
                        .map(|q| scale(&q, &lo, &hi))
                        .unwrap_or(LEFT),
                    false,
                )
            };
            out.push_str(&format!(
                "  <rect x=\"{x1}\" y=\"{y}\" width=\"{w}\" height=\"{BAR}\" fill=\"{color}\">\
                 <title>p={} mult={}</title></rect>\n",
                code.p,
                bar.multiplicity,
                w = (x2 - x1).max(2)
            ));
            if arrow {
                let ay = y + BAR / 2;
                out.push_str(&format!(
                    "  <polygon points=\"{x2},{t} {x2},{b} {tip},{ay}\" fill=\"{color}\"/>\n",
                    t = y - 2,
                    b = y + BAR + 2,
                    tip = x2 + 12
                ));
            }
            out.push_str(&format!(
                "  <text x=\"8\" y=\"{ty}\" font-size=\"11\" fill=\"#333\">p={} x{}</text>\n",
                code.p,
                bar.multiplicity,
                ty = y + BAR - 1
            ));
            row += 1;
        }
    }
    out.push_str("</svg>\n");
    out
}
