use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Zero};

use super::lines::{self, BiPoly};
use super::monomial::Monomial;
use super::presentation::{is_negative, rational_string, Ring, RingKind, Terms};
use crate::error::{Error, Result};
use crate::linalg::SparseVec;
use crate::Rational;

/// A regular function on a catalog variety, always kept in normal form.
#[derive(Clone)]
pub struct RingElement {
    ring: Ring,
    terms: Terms,
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_as(&other.ring) && self.terms == other.terms
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl RingElement {
    pub fn zero(ring: &Ring) -> Self {
        RingElement { ring: ring.clone(), terms: Terms::new() }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn constant(ring: &Ring, c: Rational) -> Self {
        let mut terms = Terms::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(ring.nvars()), c);
        }
        RingElement { ring: ring.clone(), terms }
    }

    pub fn int(ring: &Ring, c: i64) -> Self {
        Self::constant(ring, Rational::from_integer(c.into()))
    }

    /// The ring variable with index `i` (for line complements, `l_i` expands
    /// to its linear form).
    pub fn var(ring: &Ring, i: usize) -> Self {
        Self::monomial(ring, Monomial::var(ring.nvars(), i), Rational::one()).expect("variable")
    }

    pub fn monomial(ring: &Ring, m: Monomial, c: Rational) -> Result<Self> {
        let mut t = Terms::new();
        t.insert(m, c);
        Self::from_terms(ring, t)
    }

    /// Normal form of a raw expression.
    pub fn from_terms(ring: &Ring, terms: Terms) -> Result<Self> {
        let terms = ring.normalize(terms)?;
        Ok(RingElement { ring: ring.clone(), terms })
    }

    pub(crate) fn from_terms_unchecked(ring: &Ring, terms: Terms) -> Self {
        Self::from_terms(ring, terms).expect("normal form of well-formed terms")
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &Terms {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ring.same_as(&other.ring) {
            Ok(())
        } else {
            Err(Error::MixedRings)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut t = self.terms.clone();
        for (m, c) in &other.terms {
            *t.entry(m.clone()).or_insert_with(Rational::zero) += c;
        }
        Ok(Self::from_terms_unchecked(&self.ring, t))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut t = Terms::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                *t.entry(m1.mul(m2)).or_insert_with(Rational::zero) += c1 * c2;
            }
        }
        Ok(Self::from_terms_unchecked(&self.ring, t))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        RingElement {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: i32) -> Result<Self> {
        let base = if k < 0 {
            self.inverse().ok_or_else(|| Error::Degree(format!("{self} is not a unit")))?
        } else {
            self.clone()
        };
        let mut out = Self::one(&self.ring);
        for _ in 0..k.unsigned_abs() {
            out = &out * &base;
        }
        Ok(out)
    }

    /// Multiplicative inverse when the element is a unit of the ring.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let RingKind::LineComplement { lines: ls } = self.ring.kind() {
            // A unit is a constant times a product of line forms.
            let k = ls.len();
            let mut f: BiPoly = self.terms.iter().map(|(m, c)| ((m.0[0], m.0[1]), c.clone())).collect();
            let mut exps: Vec<i32> = self.ring.pole_orders(&self.terms);
            loop {
                let mut progressed = false;
                for (i, l) in ls.iter().enumerate() {
                    if let Some(q) = lines::divide_by_line(&f, l) {
                        f = q;
                        exps[i] -= 1;
                        progressed = true;
                    }
                }
                if !progressed {
                    break;
                }
            }
            if f.len() != 1 || !f.contains_key(&(0, 0)) {
                return None;
            }
            let c = f[&(0, 0)].recip();
            let mut e = vec![0, 0];
            e.extend((0..k).map(|i| exps[i]));
            return Self::monomial(&self.ring, Monomial(e), c).ok();
        }
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        if m.0.iter().enumerate().any(|(i, &e)| e != 0 && !self.ring.is_inverted(i)) {
            return None;
        }
        let inv = Monomial(m.0.iter().map(|e| -e).collect());
        Self::monomial(&self.ring, inv, c.recip()).ok()
    }

    /// Partial derivative with respect to the ambient variable `j`, applied
    /// to the stored representative.
    fn ambient_partial(&self, j: usize) -> Terms {
        let mut t = Terms::new();
        for (m, c) in &self.terms {
            let e = m.0[j];
            if e != 0 {
                *t.entry(m.with(j, -1)).or_insert_with(Rational::zero) += c * Rational::from_integer(e.into());
            }
        }
        t
    }

    /// Derivative with respect to coordinate `i`; derived variables (line
    /// forms) contribute through the chain rule.
    pub fn partial(&self, i: usize) -> Self {
        let mut t = Terms::new();
        for j in 0..self.ring.nvars() {
            let chain = self.ring.chain_coefficient(j, i);
            if chain.is_zero() {
                continue;
            }
            for (m, c) in self.ambient_partial(j) {
                *t.entry(m).or_insert_with(Rational::zero) += c * &chain;
            }
        }
        Self::from_terms_unchecked(&self.ring, t)
    }

    /// Evaluates at a point given by coordinate values. `None` when an
    /// inverted quantity vanishes there.
    pub fn eval(&self, point: &[Rational]) -> Option<Rational> {
        let n = self.ring.nvars();
        let mut values = Vec::with_capacity(n);
        for j in 0..n {
            if j < self.ring.coordinates() {
                values.push(point[j].clone());
            } else {
                let mut v = Rational::zero();
                for (i, p) in point.iter().enumerate().take(self.ring.coordinates()) {
                    v += self.ring.chain_coefficient(j, i) * p;
                }
                values.push(v);
            }
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (j, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if values[j].is_zero() && e < 0 {
                    return None;
                }
                let base = if e < 0 { values[j].recip() } else { values[j].clone() };
                for _ in 0..e.unsigned_abs() {
                    t *= &base;
                }
            }
            acc += t;
        }
        Some(acc)
    }

    /// Max weighted degree over terms, `None` for zero.
    pub fn degree(&self, weights: &[i64]) -> Option<i64> {
        self.terms.keys().map(|m| m.weighted_degree(weights)).max()
    }

    /// Linear coordinates. For line complements the element is multiplied by
    /// `prod l_i^pole_cap` and the numerator coefficients are returned.
    pub fn coordinates(&self, pole_cap: i32) -> Result<SparseVec<Monomial>> {
        let RingKind::LineComplement { lines: ls } = self.ring.kind() else {
            return Ok(self.terms.clone());
        };
        let poles = self.ring.pole_orders(&self.terms);
        if let Some(p) = poles.iter().find(|&&p| p > pole_cap) {
            return Err(Error::WindowMismatch(format!("pole order {p} exceeds coordinate cap {pole_cap}")));
        }
        let mut f: BiPoly = self.terms.iter().map(|(m, c)| ((m.0[0], m.0[1]), c.clone())).collect();
        for (i, l) in ls.iter().enumerate() {
            let extra = pole_cap - poles[i];
            if extra > 0 {
                f = lines::mul(&f, &lines::linear_pow(l, extra as u32));
            }
        }
        Ok(f.into_iter().map(|((a, b), c)| (Monomial(vec![a, b]), c)).collect())
    }

    /// Inverse of [`RingElement::coordinates`].
    pub fn from_coordinates(ring: &Ring, coords: &SparseVec<Monomial>, pole_cap: i32) -> Self {
        let t: Terms = match ring.kind() {
            RingKind::LineComplement { lines: ls } => coords
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e.extend(std::iter::repeat_n(-pole_cap, ls.len()));
                    (Monomial(e), c.clone())
                })
                .collect(),
            _ => coords.clone(),
        };
        Self::from_terms_unchecked(ring, t)
    }

    pub fn to_poly_string(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = is_negative(c);
            let abs = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mono = self.ring.monomial_string(m);
            if m.is_one() {
                write!(f, "{}", rational_string(&abs))?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{mono}", rational_string(&abs))?;
            }
        }
        Ok(())
    }
}

impl Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        self.checked_add(rhs).expect("operands share a ring")
    }
}

impl Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        self.checked_add(&-rhs).expect("operands share a ring")
    }
}

impl Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        self.checked_mul(rhs).expect("operands share a ring")
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        self.scale(&-Rational::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RingElement {
            type Output = RingElement;
            fn $m(self, rhs: RingElement) -> RingElement {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RingElement> for RingElement {
            type Output = RingElement;
            fn $m(self, rhs: &RingElement) -> RingElement {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        -&self
    }
}
