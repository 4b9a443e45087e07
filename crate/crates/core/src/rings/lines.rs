//! Bivariate helpers behind the normal form of line-arrangement complements.
//! Elements are stored as `f(x, y) / prod l_i^{e_i}` in lowest terms.

use std::collections::BTreeMap;

use num::Zero;

use crate::Rational;

pub type BiPoly = BTreeMap<(i32, i32), Rational>;

pub fn add_into(acc: &mut BiPoly, p: &BiPoly) {
    for (k, c) in p {
        let e = acc.entry(*k).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            acc.remove(k);
        }
    }
}

pub fn mul(a: &BiPoly, b: &BiPoly) -> BiPoly {
    let mut out = BiPoly::new();
    for ((a0, a1), ca) in a {
        for ((b0, b1), cb) in b {
            let e = out.entry((a0 + b0, a1 + b1)).or_insert_with(Rational::zero);
            *e += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn linear(line: &[Rational; 2]) -> BiPoly {
    let mut p = BiPoly::new();
    if !line[0].is_zero() {
        p.insert((1, 0), line[0].clone());
    }
    if !line[1].is_zero() {
        p.insert((0, 1), line[1].clone());
    }
    p
}

pub fn linear_pow(line: &[Rational; 2], k: u32) -> BiPoly {
    let mut out = BiPoly::new();
    out.insert((0, 0), num::One::one());
    let l = linear(line);
    for _ in 0..k {
        out = mul(&out, &l);
    }
    out
}

/// Exact quotient `f / (a x + b y)` when it exists.
pub fn divide_by_line(f: &BiPoly, line: &[Rational; 2]) -> Option<BiPoly> {
    let (a, b) = (&line[0], &line[1]);
    if b.is_zero() {
        if f.keys().any(|&(ex, _)| ex < 1) {
            return None;
        }
        return Some(f.iter().map(|(&(ex, ey), c)| ((ex - 1, ey), c / a)).collect());
    }
    // Synthetic division in y with coefficients in Q[x].
    let mut by_y: BTreeMap<i32, BTreeMap<i32, Rational>> = BTreeMap::new();
    for (&(ex, ey), c) in f {
        by_y.entry(ey).or_default().insert(ex, c.clone());
    }
    let mut quotient = BiPoly::new();
    while let Some((&ey, _)) = by_y.iter().next_back() {
        let coeffs = by_y.remove(&ey).unwrap();
        if coeffs.values().all(|c| c.is_zero()) {
            continue;
        }
        if ey == 0 {
            return None;
        }
        for (ex, c) in coeffs {
            if c.is_zero() {
                continue;
            }
            let qc = &c / b;
            quotient.insert((ex, ey - 1), qc.clone());
            if !a.is_zero() {
                let slot = by_y.entry(ey - 1).or_default().entry(ex + 1).or_insert_with(Rational::zero);
                *slot -= &qc * a;
            }
        }
    }
    quotient.retain(|_, c| !c.is_zero());
    Some(quotient)
}
