//! Algebraic differential forms: exterior derivative, wedge product,
//! canonical representatives on the Danielewski quotient and truncated
//! presentations of the de Rham complex.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SparseVec;
use crate::parse::{self, divide_by, Expr};
use crate::rings::{
    rational_string, truncated_basis_weighted, univariate, Monomial, Ring, RingElement, RingKind, Terms, Window,
};
use crate::Rational;

/// Strictly increasing coordinate indices of a wedge of differentials.
pub type Wedge = Vec<usize>;

/// Coordinate labels of forms: the wedge and the coefficient monomial.
/// Top-degree forms on a Danielewski surface use the empty wedge and the
/// monomials of the coefficient against the volume form.
pub type FormKey = (Wedge, Monomial);

/// A k-form stored as an ambient representative.
#[derive(Clone)]
pub struct DifferentialForm {
    ring: Ring,
    degree: usize,
    terms: BTreeMap<Wedge, RingElement>,
}

impl DifferentialForm {
    pub fn zero(ring: &Ring, degree: usize) -> Self {
        DifferentialForm { ring: ring.clone(), degree, terms: BTreeMap::new() }
    }

    pub fn function(f: &RingElement) -> Self {
        Self::zero(f.ring(), 0).with_term(Vec::new(), f.clone())
    }

    /// The differential of coordinate `i`.
    pub fn dx(ring: &Ring, i: usize) -> Self {
        Self::zero(ring, 1).with_term(vec![i], RingElement::one(ring))
    }

    /// `f dx_I` for an arbitrary list of indices, sorted with sign.
    pub fn monomial_form(f: &RingElement, wedge: &[usize]) -> Self {
        let mut out = Self::zero(f.ring(), wedge.len());
        if let Some((sign, w)) = sort_wedge(wedge) {
            out.add_term(w, if sign < 0 { -f.clone() } else { f.clone() });
        }
        out
    }

    pub fn from_terms(ring: &Ring, degree: usize, terms: impl IntoIterator<Item = (Wedge, RingElement)>) -> Self {
        let mut out = Self::zero(ring, degree);
        for (w, f) in terms {
            let part = Self::monomial_form(&f, &w);
            assert_eq!(w.len(), degree, "wedge length must equal the degree");
            out = out + part;
        }
        out
    }

    fn with_term(mut self, w: Wedge, f: RingElement) -> Self {
        self.add_term(w, f);
        self
    }

    fn add_term(&mut self, w: Wedge, f: RingElement) {
        if f.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&w) {
            Some(g) => g + f,
            None => f,
        };
        if !sum.is_zero() {
            self.terms.insert(w, sum);
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Wedge, RingElement> {
        &self.terms
    }

    pub fn coefficient(&self, w: &[usize]) -> RingElement {
        self.terms.get(w).cloned().unwrap_or_else(|| RingElement::zero(&self.ring))
    }

    /// Whether the ambient representative is zero; see [`Self::is_zero`].
    pub fn is_zero_ambient(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.normal_form().terms.is_empty()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.clone() + other.clone())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ring.same_as(&other.ring) {
            Ok(())
        } else {
            Err(Error::MixedRings)
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(&self.ring, self.degree);
        for (w, f) in &self.terms {
            out.add_term(w.clone(), f.scale(c));
        }
        out
    }

    /// Multiplication by a function.
    pub fn mul_fn(&self, g: &RingElement) -> Self {
        let mut out = Self::zero(&self.ring, self.degree);
        for (w, f) in &self.terms {
            out.add_term(w.clone(), f * g);
        }
        out
    }

    pub fn d(&self) -> Self {
        let mut out = Self::zero(&self.ring, self.degree + 1);
        for (w, f) in &self.terms {
            for i in 0..self.ring.coordinates() {
                if w.contains(&i) {
                    continue;
                }
                let df = f.partial(i);
                if df.is_zero() {
                    continue;
                }
                let mut idx = vec![i];
                idx.extend_from_slice(w);
                let (sign, sorted) = sort_wedge(&idx).expect("distinct indices");
                out.add_term(sorted, if sign < 0 { -df } else { df });
            }
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(&self.ring, self.degree + other.degree);
        for (a, f) in &self.terms {
            for (b, g) in &other.terms {
                let mut idx = a.clone();
                idx.extend_from_slice(b);
                if let Some((sign, sorted)) = sort_wedge(&idx) {
                    let c = f * g;
                    out.add_term(sorted, if sign < 0 { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Canonical representative. On a Danielewski surface 1-forms are
    /// reduced modulo `df`, 2-forms are written as `q` times a fixed
    /// representative of the volume form and higher forms vanish. Forms on
    /// the other catalog varieties are already canonical.
    pub fn normal_form(&self) -> Self {
        let Some(p) = self.ring.danielewski_p() else {
            return self.clone();
        };
        match self.degree {
            0 => self.clone(),
            1 => reduce_danielewski_one_form(self, p),
            2 => {
                let q = self.top_coefficient().expect("surface top degree");
                danielewski_volume_representative(&self.ring).mul_fn(&q)
            }
            _ => Self::zero(&self.ring, self.degree),
        }
    }

    /// For a top-degree form on a surface (or `n`-form on an `n`-dimensional
    /// catalog variety) the function `q` with `self = q ω`, where `ω` is the
    /// catalog volume form.
    pub fn top_coefficient(&self) -> Result<RingElement> {
        let n = self.ring.dimension();
        if self.degree != n {
            return Err(Error::Degree(format!("expected a {n}-form, got a {}-form", self.degree)));
        }
        let ring = &self.ring;
        Ok(match ring.kind() {
            RingKind::AffineSpace { .. } | RingKind::LineComplement { .. } => self.coefficient(&(0..n).collect::<Vec<_>>()),
            RingKind::Torus { .. } => {
                let mut all = self.coefficient(&(0..n).collect::<Vec<_>>());
                for i in 0..n {
                    all = all * RingElement::var(ring, i);
                }
                all
            }
            RingKind::Danielewski { p } => {
                let dp = poly_in_z(ring, &univariate::derivative(p));
                let u = RingElement::var(ring, 0);
                let v = RingElement::var(ring, 1);
                self.coefficient(&[0, 1]) * dp + self.coefficient(&[0, 2]) * u - self.coefficient(&[1, 2]) * v
            }
        })
    }

    /// Linear coordinates of the canonical representative. `pole_cap`
    /// bounds pole orders on line complements.
    pub fn coordinates(&self, pole_cap: i32) -> Result<SparseVec<FormKey>> {
        let mut out = SparseVec::new();
        if self.ring.danielewski_p().is_some() && self.degree >= 2 {
            if self.degree == 2 {
                for (m, c) in self.top_coefficient()?.coordinates(pole_cap)? {
                    out.insert((Vec::new(), m), c);
                }
            }
            return Ok(out);
        }
        for (w, f) in &self.normal_form().terms {
            for (m, c) in f.coordinates(pole_cap)? {
                out.insert((w.clone(), m), c);
            }
        }
        Ok(out)
    }

    /// Inverse of [`Self::coordinates`].
    pub fn from_coordinates(ring: &Ring, degree: usize, coords: &SparseVec<FormKey>, pole_cap: i32) -> Self {
        let mut grouped: BTreeMap<Wedge, SparseVec<Monomial>> = BTreeMap::new();
        for ((w, m), c) in coords {
            grouped.entry(w.clone()).or_default().insert(m.clone(), c.clone());
        }
        let mut out = Self::zero(ring, degree);
        for (w, cs) in grouped {
            let f = RingElement::from_coordinates(ring, &cs, pole_cap);
            if w.is_empty() && degree == 2 {
                out = out + danielewski_volume_representative(ring).mul_fn(&f);
            } else {
                out.add_term(w, f);
            }
        }
        out
    }

    /// Largest graded degree of a term.
    pub fn graded_degree(&self, grading: &Grading) -> Option<i64> {
        self.terms
            .iter()
            .filter_map(|(w, f)| f.degree(&grading.weights).map(|d| d + grading.wedge_weight(w)))
            .max()
    }

    /// Degree in the filtration used by truncations: Danielewski top forms
    /// count as `q ω` with `ω` of the weight of `dz`.
    pub fn filtered_degree(&self, grading: &Grading) -> Option<i64> {
        if self.ring.danielewski_p().is_some() && self.degree == 2 {
            let q = self.top_coefficient().ok()?;
            return q.degree(&grading.weights).map(|d| d + grading.wedge_weight(&[2]));
        }
        self.normal_form().graded_degree(grading)
    }

    /// Largest pole order of a coefficient: along a line of a line
    /// complement, or a negative exponent of a torus coordinate.
    pub fn max_pole(&self) -> i32 {
        let poles = |f: &RingElement| -> i32 {
            if f.ring().has_monomial_basis() {
                f.terms().keys().flat_map(|m| m.exps().iter().map(|e| -e)).max().unwrap_or(0)
            } else {
                f.ring().pole_orders(f.terms()).into_iter().max().unwrap_or(0)
            }
        };
        self.terms.values().map(poles).max().unwrap_or(0).max(0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<FormTermJson> = self
            .terms
            .iter()
            .map(|(w, f)| FormTermJson {
                wedge: w.clone(),
                coeff: f
                    .terms()
                    .iter()
                    .map(|(m, c)| (self.ring.monomial_string(m), rational_string(c)))
                    .collect(),
            })
            .collect();
        serde_json::to_value(FormJson { degree: self.degree, terms }).expect("form serializes")
    }

    pub fn from_json(ring: &Ring, value: &serde_json::Value) -> Result<Self> {
        let raw: FormJson = serde_json::from_value(value.clone())?;
        let mut out = Self::zero(ring, raw.degree);
        for t in raw.terms {
            if t.wedge.len() != raw.degree {
                return Err(Error::Degree(format!("wedge {:?} in a {}-form", t.wedge, raw.degree)));
            }
            if let Some(&i) = t.wedge.iter().find(|&&i| i >= ring.coordinates()) {
                return Err(Error::InvalidDescriptor(format!("no coordinate with index {i}")));
            }
            let mut f = RingElement::zero(ring);
            for (m, c) in &t.coeff {
                let c: Rational = c
                    .parse()
                    .map_err(|_| Error::Parse { pos: 0, msg: format!("bad rational `{c}`") })?;
                f = f + parse::parse_element(m, ring)?.scale(&c);
            }
            out = out + Self::monomial_form(&f, &t.wedge);
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct FormJson {
    degree: usize,
    terms: Vec<FormTermJson>,
}

#[derive(Serialize, Deserialize)]
struct FormTermJson {
    wedge: Vec<usize>,
    coeff: BTreeMap<String, String>,
}

/// Sorts indices, returning the permutation sign, or `None` on a repeat.
fn sort_wedge(idx: &[usize]) -> Option<(i32, Wedge)> {
    let mut v = idx.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            } else if v[j] == v[j + 1] {
                return None;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sign, v))
}

fn poly_in_z(ring: &Ring, p: &[Rational]) -> RingElement {
    let t: Terms = p
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (Monomial(vec![0, 0, k as i32]), c.clone()))
        .collect();
    RingElement::from_terms(ring, t).expect("polynomial in z")
}

/// `df = v du + u dv - p'(z) dz` on a Danielewski surface.
pub fn danielewski_relation(ring: &Ring) -> Option<DifferentialForm> {
    let p = ring.danielewski_p()?;
    let dp = poly_in_z(ring, &univariate::derivative(p));
    Some(DifferentialForm::from_terms(
        ring,
        1,
        [(vec![0], RingElement::var(ring, 1)), (vec![1], RingElement::var(ring, 0)), (vec![2], -dp)],
    ))
}

/// `a(z) v du∧dz + b(z) du∧dv` with `a p + b p' = 1`: a 2-form whose
/// coefficient against `du∧dz / u` is one.
pub fn danielewski_volume_representative(ring: &Ring) -> DifferentialForm {
    let p = ring.danielewski_p().expect("Danielewski ring");
    let (_, a, b) = univariate::ext_gcd(p, &univariate::derivative(p));
    let v = RingElement::var(ring, 1);
    DifferentialForm::from_terms(ring, 2, [(vec![0, 2], poly_in_z(ring, &a) * v), (vec![0, 1], poly_in_z(ring, &b))])
}

fn reduce_danielewski_one_form(form: &DifferentialForm, p: &[Rational]) -> DifferentialForm {
    let ring = &form.ring;
    let df = danielewski_relation(ring).expect("Danielewski ring");
    let mut out = form.clone();
    // dv-coefficients divisible by u are traded for du and dz terms.
    let g: Terms = out
        .coefficient(&[1])
        .terms()
        .iter()
        .filter(|(m, _)| m.0[0] >= 1)
        .map(|(m, c)| (m.with(0, -1), c.clone()))
        .collect();
    out = out - df.mul_fn(&RingElement::from_terms(ring, g).expect("normal form"));
    // du-coefficients of v-degree at least two likewise.
    let g: Terms = out
        .coefficient(&[0])
        .terms()
        .iter()
        .filter(|(m, _)| m.0[1] >= 2)
        .map(|(m, c)| (m.with(1, -1), c.clone()))
        .collect();
    out = out - df.mul_fn(&RingElement::from_terms(ring, g).expect("normal form"));
    debug_assert!(!p.is_empty());
    out
}

impl PartialEq for DifferentialForm {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_as(&other.ring)
            && self.degree == other.degree
            && (self.clone() - other.clone()).is_zero()
    }
}

impl fmt::Debug for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = self.ring.variables();
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for &j in w {
                write!(f, "*d{}", names[j])?;
            }
        }
        Ok(())
    }
}

impl Add for DifferentialForm {
    type Output = DifferentialForm;
    fn add(mut self, rhs: Self) -> Self {
        assert!(self.ring.same_as(&rhs.ring), "mixed rings");
        assert_eq!(self.degree, rhs.degree, "adding forms of different degrees");
        for (w, f) in rhs.terms {
            self.add_term(w, f);
        }
        self
    }
}

impl Neg for DifferentialForm {
    type Output = DifferentialForm;
    fn neg(self) -> Self {
        self.scale(&-Rational::one())
    }
}

impl Sub for DifferentialForm {
    type Output = DifferentialForm;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

/// Parses a form such as `x*dy - y*dx` or `dx*dy/(x*y)`; `dX` denotes the
/// differential of coordinate `X` and products of forms are wedges.
pub fn parse_form(src: &str, ring: &Ring) -> Result<DifferentialForm> {
    eval_form(&parse::parse(src)?, ring)
}

fn eval_form(e: &Expr, ring: &Ring) -> Result<DifferentialForm> {
    let same_degree = |a: DifferentialForm, b: DifferentialForm, negate: bool| -> Result<DifferentialForm> {
        let b = if negate { -b } else { b };
        if a.is_zero_ambient() && a.degree == 0 {
            return Ok(b);
        }
        if b.is_zero_ambient() && b.degree == 0 {
            return Ok(a);
        }
        if a.degree != b.degree {
            return Err(Error::Degree(format!("cannot add a {}-form and a {}-form", a.degree, b.degree)));
        }
        Ok(a + b)
    };
    Ok(match e {
        Expr::Ident(name, pos) => {
            if ring.var_index(name).is_none() {
                if let Some(i) = name.strip_prefix('d').and_then(|v| ring.var_index(v)) {
                    if i < ring.coordinates() {
                        return Ok(DifferentialForm::dx(ring, i));
                    }
                    let mut out = DifferentialForm::zero(ring, 1);
                    for c in 0..ring.coordinates() {
                        let k = ring.chain_coefficient(i, c);
                        out.add_term(vec![c], RingElement::constant(ring, k));
                    }
                    return Ok(out);
                }
                return Err(Error::Parse { pos: *pos, msg: format!("unknown variable `{name}`") });
            }
            DifferentialForm::function(&parse::eval_element(e, ring)?)
        }
        Expr::Num(_) | Expr::Pow(..) => DifferentialForm::function(&parse::eval_element(e, ring)?),
        Expr::Add(a, b) => same_degree(eval_form(a, ring)?, eval_form(b, ring)?, false)?,
        Expr::Sub(a, b) => same_degree(eval_form(a, ring)?, eval_form(b, ring)?, true)?,
        Expr::Neg(a) => -eval_form(a, ring)?,
        Expr::Mul(a, b) => eval_form(a, ring)?.wedge(&eval_form(b, ring)?)?,
        Expr::Div(a, b, pos) => {
            let denom = eval_form(b, ring)?;
            if denom.degree != 0 {
                return Err(Error::Parse { pos: *pos, msg: "cannot divide by a form of positive degree".into() });
            }
            let inv = divide_by(&denom.coefficient(&[]), *pos)?;
            eval_form(a, ring)?.mul_fn(&inv)
        }
    })
}

/// Weights of variables and whether differentials carry the weight of their
/// coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grading {
    pub weights: Vec<i64>,
    pub count_differentials: bool,
}

impl Grading {
    /// Unit weights; a form's degree is the degree of its coefficients.
    pub fn standard(ring: &Ring) -> Self {
        Grading { weights: ring.unit_weights(), count_differentials: false }
    }

    /// The filtration used by truncated cohomology: `dx_i` has the weight of
    /// `x_i`, so `d` preserves degree.
    pub fn cohomological(ring: &Ring) -> Self {
        Grading { weights: ring.cohomology_weights().to_vec(), count_differentials: true }
    }

    pub fn wedge_weight(&self, w: &[usize]) -> i64 {
        if self.count_differentials {
            w.iter().map(|&i| self.weights[i]).sum()
        } else {
            0
        }
    }
}

/// A basis of the k-forms of bounded degree.
#[derive(Clone, Debug)]
pub struct TruncatedFormSpace {
    pub degree: usize,
    pub window: Window,
    pub basis: Vec<DifferentialForm>,
}

impl TruncatedFormSpace {
    pub fn new(ring: &Ring, degree: usize, window: &Window, grading: &Grading) -> Self {
        let mut basis = Vec::new();
        let n = ring.coordinates();
        if let Some(p) = ring.danielewski_p() {
            match degree {
                0 => basis.extend(functions(ring, window, grading).into_iter().map(|f| DifferentialForm::function(&f))),
                1 => {
                    for i in 0..3 {
                        for f in functions(ring, &window.shifted(grading.wedge_weight(&[i])), grading) {
                            let m = f.terms().keys().next().expect("monomial").0.clone();
                            let canonical = match i {
                                0 => m[1] <= 1,
                                1 => m[0] == 0,
                                _ => true,
                            };
                            if canonical {
                                basis.push(DifferentialForm::monomial_form(&f, &[i]));
                            }
                        }
                    }
                }
                2 => {
                    let omega = danielewski_volume_representative(ring);
                    let shift = grading.wedge_weight(&[2]);
                    for f in functions(ring, &window.shifted(shift), grading) {
                        basis.push(omega.mul_fn(&f));
                    }
                }
                _ => {}
            }
            debug_assert!(!p.is_empty());
        } else if degree <= n {
            for w in subsets(n, degree) {
                for f in functions(ring, &window.shifted(grading.wedge_weight(&w)), grading) {
                    basis.push(DifferentialForm::monomial_form(&f, &w));
                }
            }
        }
        TruncatedFormSpace { degree, window: window.clone(), basis }
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

fn functions(ring: &Ring, window: &Window, grading: &Grading) -> Vec<RingElement> {
    truncated_basis_weighted(ring, window, &grading.weights).elements
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Wedge> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Wedge, out: &mut Vec<Wedge>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Truncations of the de Rham complex in every degree together with the
/// exact coordinates of `d` on the window and on the enlarged window.
#[derive(Clone, Debug)]
pub struct TruncatedComplex {
    pub ring: Ring,
    pub grading: Grading,
    pub window: Window,
    pub slack: i64,
    pub pole_cap: i32,
    pub spaces: Vec<TruncatedFormSpace>,
    pub enlarged: Vec<TruncatedFormSpace>,
    /// `d_window[k][j]` are the coordinates of `d` of basis form `j` of `spaces[k]`.
    pub d_window: Vec<Vec<SparseVec<FormKey>>>,
    pub d_enlarged: Vec<Vec<SparseVec<FormKey>>>,
}

impl TruncatedComplex {
    pub fn coordinates(&self, form: &DifferentialForm) -> Result<SparseVec<FormKey>> {
        form.coordinates(self.pole_cap)
    }

    pub fn form(&self, degree: usize, coords: &SparseVec<FormKey>) -> DifferentialForm {
        DifferentialForm::from_coordinates(&self.ring, degree, coords, self.pole_cap)
    }

    pub fn basis_coordinates(&self, k: usize) -> Vec<SparseVec<FormKey>> {
        self.spaces[k].basis.iter().map(|b| self.coordinates(b).expect("window form")).collect()
    }
}

pub fn truncate_complex(ring: &Ring, window: &Window, slack: i64, grading: &Grading) -> Result<TruncatedComplex> {
    let n = ring.dimension();
    let big = window.enlarged(slack);
    let pole_cap = big.neg_cap.max(0) + 2;
    let mut spaces = Vec::new();
    let mut enlarged = Vec::new();
    let mut d_window = Vec::new();
    let mut d_enlarged = Vec::new();
    for k in 0..=n {
        let s = TruncatedFormSpace::new(ring, k, window, grading);
        let e = TruncatedFormSpace::new(ring, k, &big, grading);
        let images = |sp: &TruncatedFormSpace| -> Result<Vec<SparseVec<FormKey>>> {
            sp.basis.iter().map(|b| if k < n { b.d().coordinates(pole_cap) } else { Ok(SparseVec::new()) }).collect()
        };
        d_window.push(images(&s)?);
        d_enlarged.push(images(&e)?);
        spaces.push(s);
        enlarged.push(e);
    }
    Ok(TruncatedComplex {
        ring: ring.clone(),
        grading: grading.clone(),
        window: window.clone(),
        slack,
        pole_cap,
        spaces,
        enlarged,
        d_window,
        d_enlarged,
    })
}

#[cfg(test)]
mod tests;
