use num::One;

use crate::Rational;
use serde::{Deserialize, Serialize};

use super::element::RingElement;
use super::monomial::Monomial;
use super::presentation::{Ring, RingKind};

/// A finite degree window. Degrees are weighted sums of signed exponents;
/// each negative exponent (or pole order along a line) is at most `neg_cap`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub min_degree: Option<i64>,
    pub max_degree: i64,
    pub neg_cap: i32,
}

impl Window {
    pub fn upto(max_degree: i64) -> Self {
        Window { min_degree: None, max_degree, neg_cap: 4 }
    }

    pub fn range(min_degree: i64, max_degree: i64, neg_cap: i32) -> Self {
        Window { min_degree: Some(min_degree), max_degree, neg_cap }
    }

    pub fn with_neg_cap(mut self, neg_cap: i32) -> Self {
        self.neg_cap = neg_cap;
        self
    }

    /// Window enlarged by `s` in degree and in the negative cap.
    pub fn enlarged(&self, s: i64) -> Self {
        Window {
            min_degree: self.min_degree.map(|m| m - s),
            max_degree: self.max_degree + s,
            neg_cap: self.neg_cap + s as i32,
        }
    }

    /// The same window shifted down by `shift` degrees.
    pub fn shifted(&self, shift: i64) -> Self {
        Window {
            min_degree: self.min_degree.map(|m| m - shift),
            max_degree: self.max_degree - shift,
            neg_cap: self.neg_cap,
        }
    }

    fn admits(&self, deg: i64) -> bool {
        deg <= self.max_degree && self.min_degree.is_none_or(|m| deg >= m)
    }
}

/// Normal-form basis elements of a ring within a window, in graded
/// lexicographic order.
#[derive(Clone, Debug)]
pub struct TruncatedBasis {
    pub window: Window,
    pub weights: Vec<i64>,
    pub elements: Vec<RingElement>,
}

impl TruncatedBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Basis of the window under unit weights.
pub fn truncated_basis(ring: &Ring, window: &Window) -> TruncatedBasis {
    truncated_basis_weighted(ring, window, &ring.unit_weights())
}

pub fn truncated_basis_weighted(ring: &Ring, window: &Window, weights: &[i64]) -> TruncatedBasis {
    let elements = match ring.kind() {
        RingKind::LineComplement { lines } => {
            // Elements with pole order at most E along each line and degree in
            // the window are exactly g / prod l_i^E with deg g shifted by kE.
            let cap = window.neg_cap.max(0);
            let shift = lines.len() as i64 * cap as i64;
            let mut out = Vec::new();
            for total in 0..=(window.max_degree + shift).max(-1) {
                if !window.admits(total - shift) {
                    continue;
                }
                for a in 0..=total {
                    let mut e = vec![a as i32, (total - a) as i32];
                    e.extend(std::iter::repeat_n(-cap, lines.len()));
                    out.push(RingElement::monomial(ring, Monomial(e), Rational::one()).expect("window element"));
                }
            }
            out
        }
        _ => {
            let n = ring.nvars();
            let lo: Vec<i64> = (0..n).map(|i| if ring.is_inverted(i) { -(window.neg_cap as i64) } else { 0 }).collect();
            let mut out = Vec::new();
            let mut exps = vec![0i32; n];
            enumerate(ring, window, weights, &lo, 0, 0, &mut exps, &mut out);
            out.sort();
            out.into_iter()
                .map(|m| RingElement::monomial(ring, m, Rational::one()).expect("window monomial"))
                .collect()
        }
    };
    TruncatedBasis { window: window.clone(), weights: weights.to_vec(), elements }
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    ring: &Ring,
    window: &Window,
    weights: &[i64],
    lo: &[i64],
    i: usize,
    acc: i64,
    exps: &mut Vec<i32>,
    out: &mut Vec<Monomial>,
) {
    let n = exps.len();
    if i == n {
        if !window.admits(acc) {
            return;
        }
        if ring.danielewski_p().is_some() && exps[0] > 0 && exps[1] > 0 {
            return;
        }
        out.push(Monomial(exps.clone()));
        return;
    }
    let rest_min: i64 = (i + 1..n).map(|j| lo[j] * weights[j]).sum();
    let mut e = lo[i];
    while acc + e * weights[i] + rest_min <= window.max_degree {
        exps[i] = e as i32;
        enumerate(ring, window, weights, lo, i + 1, acc + e * weights[i], exps, out);
        e += 1;
    }
    exps[i] = 0;
}

