//! Sylvester resultants of multivariate polynomials with respect to one
//! variable, computed by fraction-free (Bareiss) elimination so that entries
//! stay polynomial throughout.

use crate::multipoly::MultiPoly;
use crate::rational::Q;
use num_traits::One;

/// Resultant of `f` and `g` with respect to `var`. The result is a polynomial
/// in the remaining variables; it vanishes at parameter values where `f` and
/// `g` share a root in `var` or where both leading coefficients vanish.
pub fn resultant(f: &MultiPoly, g: &MultiPoly, var: &str) -> Result<MultiPoly, String> {
    if f.is_zero() || g.is_zero() {
        return Err("resultant of a zero polynomial".to_string());
    }
    let df = f.degree_in(var) as usize;
    let dg = g.degree_in(var) as usize;
    if df == 0 && dg == 0 {
        return Err(format!("variable `{var}` absent from both inputs"));
    }
    // Res(f, g) with deg g = 0 is g^(deg f), and symmetrically.
    if dg == 0 {
        return Ok(g.pow(df as u32));
    }
    if df == 0 {
        return Ok(f.pow(dg as u32));
    }
    let fc = f.as_univariate_in(var);
    let gc = g.as_univariate_in(var);
    let n = df + dg;
    let zero = MultiPoly::zero(&[]);
    let mut m = vec![vec![zero.clone(); n]; n];
    for row in 0..dg {
        for (j, c) in fc.iter().enumerate() {
            m[row][row + (df - j)] = c.clone();
        }
    }
    for row in 0..df {
        for (j, c) in gc.iter().enumerate() {
            m[dg + row][row + (dg - j)] = c.clone();
        }
    }
    Ok(bareiss_determinant(m))
}

/// Fraction-free determinant of a square matrix of polynomials.
fn bareiss_determinant(mut m: Vec<Vec<MultiPoly>>) -> MultiPoly {
    let n = m.len();
    if n == 0 {
        return MultiPoly::constant(&[], Q::one());
    }
    let mut sign = 1i8;
    let mut prev = MultiPoly::constant(&[], Q::one());
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return MultiPoly::zero(&[]),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = t.div_exact(&prev);
            }
            m[i][k] = MultiPoly::zero(&[]);
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        det.neg()
    } else {
        det
    }
}
