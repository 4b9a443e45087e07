use std::collections::BTreeMap;
use std::sync::Arc;

use num::{One, Signed, Zero};

use super::lines::{self, BiPoly};
use super::monomial::{Monomial, MonomialDisplay};
use super::univariate;
use crate::error::{Error, Result};
use crate::Rational;

pub type Terms = BTreeMap<Monomial, Rational>;

/// The catalog of varieties the engine knows how to present.
#[derive(Clone, Debug, PartialEq)]
pub enum RingKind {
    AffineSpace { n: usize },
    Torus { n: usize },
    /// The surface `uv = p(z)`; coefficients constant term first.
    Danielewski { p: Vec<Rational> },
    /// Complement of lines `a x + b y = 0` in the plane.
    LineComplement { lines: Vec<[Rational; 2]> },
}

/// A rewrite rule `lead -> replacement` derived from a defining polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    pub lead: Monomial,
    pub replacement: Terms,
}

impl Relation {
    /// The defining polynomial `lead - replacement` as ambient terms.
    pub fn ambient(&self) -> Terms {
        let mut t: Terms = self.replacement.iter().map(|(m, c)| (m.clone(), -c.clone())).collect();
        *t.entry(self.lead.clone()).or_insert_with(Rational::zero) += Rational::one();
        t.retain(|_, c| !c.is_zero());
        t
    }
}

#[derive(Debug)]
pub struct RingPresentation {
    kind: RingKind,
    variables: Vec<String>,
    coordinates: usize,
    inverted: Vec<bool>,
    linear: Vec<Option<[Rational; 2]>>,
    relations: Vec<Relation>,
    cohomology_weights: Vec<i64>,
}

pub type Ring = Arc<RingPresentation>;

fn coordinate_names(n: usize) -> Vec<String> {
    match n {
        1 => vec!["x".into()],
        2 => vec!["x".into(), "y".into()],
        3 => vec!["x".into(), "y".into(), "z".into()],
        _ => (1..=n).map(|i| format!("x{i}")).collect(),
    }
}

/// Builds the presentation of a catalog variety, validating smoothness.
pub fn make_ring(kind: RingKind) -> Result<Ring> {
    let r = match &kind {
        RingKind::AffineSpace { n } | RingKind::Torus { n } => {
            if *n == 0 {
                return Err(Error::InvalidDescriptor("dimension must be positive".into()));
            }
            let torus = matches!(kind, RingKind::Torus { .. });
            RingPresentation {
                variables: coordinate_names(*n),
                coordinates: *n,
                inverted: vec![torus; *n],
                linear: vec![None; *n],
                relations: Vec::new(),
                cohomology_weights: vec![1; *n],
                kind: kind.clone(),
            }
        }
        RingKind::Danielewski { p } => {
            let p = univariate::trim(p.clone());
            let d = univariate::degree(&p)
                .filter(|&d| d >= 1)
                .ok_or_else(|| Error::InvalidDescriptor("p must have degree at least 1".into()))?;
            let g = univariate::gcd(&p, &univariate::derivative(&p));
            if univariate::degree(&g) != Some(0) {
                return Err(Error::SingularVariety(format!(
                    "p has a repeated root (gcd(p, p') has degree {})",
                    univariate::degree(&g).unwrap_or(0)
                )));
            }
            let mut replacement = Terms::new();
            for (c, coeff) in p.iter().enumerate() {
                if !coeff.is_zero() {
                    replacement.insert(Monomial(vec![0, 0, c as i32]), coeff.clone());
                }
            }
            let g = num::integer::gcd(d as i64, 2);
            RingPresentation {
                variables: vec!["u".into(), "v".into(), "z".into()],
                coordinates: 3,
                inverted: vec![false; 3],
                linear: vec![None; 3],
                relations: vec![Relation { lead: Monomial(vec![1, 1, 0]), replacement }],
                cohomology_weights: vec![d as i64 / g, d as i64 / g, 2 / g],
                kind: RingKind::Danielewski { p },
            }
        }
        RingKind::LineComplement { lines } => {
            if lines.is_empty() {
                return Err(Error::InvalidDescriptor("at least one line is required".into()));
            }
            for (i, l) in lines.iter().enumerate() {
                if l[0].is_zero() && l[1].is_zero() {
                    return Err(Error::InvalidDescriptor(format!("line {} is the zero form", i + 1)));
                }
                for (j, m) in lines.iter().enumerate().skip(i + 1) {
                    if (&l[0] * &m[1] - &l[1] * &m[0]).is_zero() {
                        return Err(Error::InvalidDescriptor(format!(
                            "lines {} and {} are proportional",
                            i + 1,
                            j + 1
                        )));
                    }
                }
            }
            let k = lines.len();
            let mut variables = coordinate_names(2);
            variables.extend((1..=k).map(|i| format!("l{i}")));
            let mut linear = vec![None, None];
            linear.extend(lines.iter().cloned().map(Some));
            let mut inverted = vec![false, false];
            inverted.extend(std::iter::repeat_n(true, k));
            RingPresentation {
                variables,
                coordinates: 2,
                inverted,
                linear,
                relations: Vec::new(),
                cohomology_weights: vec![1; 2 + k],
                kind: kind.clone(),
            }
        }
    };
    Ok(Arc::new(r))
}

impl RingPresentation {
    pub fn kind(&self) -> &RingKind {
        &self.kind
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    /// Number of coordinate functions; differentials and vector field
    /// components are indexed by these.
    pub fn coordinates(&self) -> usize {
        self.coordinates
    }

    pub fn is_inverted(&self, i: usize) -> bool {
        self.inverted[i]
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    /// Dimension of the variety.
    pub fn dimension(&self) -> usize {
        self.coordinates - self.relations.len()
    }

    pub fn is_surface(&self) -> bool {
        self.dimension() == 2
    }

    /// Per-variable weights of the grading used by truncated cohomology.
    /// Danielewski surfaces weight `u, v` by `deg p` and `z` by 2 (reduced by
    /// their gcd), which makes the relation filtered.
    pub fn cohomology_weights(&self) -> &[i64] {
        &self.cohomology_weights
    }

    pub fn unit_weights(&self) -> Vec<i64> {
        vec![1; self.nvars()]
    }

    pub fn danielewski_p(&self) -> Option<&[Rational]> {
        match &self.kind {
            RingKind::Danielewski { p } => Some(p),
            _ => None,
        }
    }

    pub fn lines(&self) -> Option<&[[Rational; 2]]> {
        match &self.kind {
            RingKind::LineComplement { lines } => Some(lines),
            _ => None,
        }
    }

    pub fn same_as(&self, other: &RingPresentation) -> bool {
        std::ptr::eq(self, other) || self.kind == other.kind
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    /// `d(var_j)/d(coordinate i)`.
    pub fn chain_coefficient(&self, var: usize, coord: usize) -> Rational {
        if var < self.coordinates {
            if var == coord {
                Rational::one()
            } else {
                Rational::zero()
            }
        } else {
            self.linear[var].as_ref().map(|l| l[coord].clone()).unwrap_or_else(Rational::zero)
        }
    }

    pub fn monomial_string(&self, m: &Monomial) -> String {
        MonomialDisplay { monomial: m, names: &self.variables }.to_string()
    }

    /// Canonical form of a raw sum of terms.
    pub fn normalize(&self, terms: Terms) -> Result<Terms> {
        for m in terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if e < 0 && !self.inverted[i] {
                    return Err(Error::NegativePower(self.variables[i].clone()));
                }
            }
        }
        let mut terms = terms;
        terms.retain(|_, c| !c.is_zero());
        Ok(match &self.kind {
            RingKind::AffineSpace { .. } | RingKind::Torus { .. } => terms,
            RingKind::Danielewski { p } => self.rewrite_danielewski(p, terms),
            RingKind::LineComplement { lines } => self.normalize_lines(lines, terms),
        })
    }

    fn rewrite_danielewski(&self, p: &[Rational], terms: Terms) -> Terms {
        let mut out = Terms::new();
        let mut add = |m: Monomial, c: Rational| {
            let e = out.entry(m.clone()).or_insert_with(Rational::zero);
            *e += c;
            if e.is_zero() {
                out.remove(&m);
            }
        };
        let mut powers: Vec<Vec<Rational>> = vec![vec![Rational::one()]];
        for (m, c) in terms {
            let k = m.0[0].min(m.0[1]);
            if k == 0 {
                add(m, c);
                continue;
            }
            while powers.len() <= k as usize {
                let next = univariate::mul(powers.last().unwrap(), p);
                powers.push(next);
            }
            for (j, pc) in powers[k as usize].iter().enumerate() {
                if pc.is_zero() {
                    continue;
                }
                let nm = Monomial(vec![m.0[0] - k, m.0[1] - k, m.0[2] + j as i32]);
                add(nm, &c * pc);
            }
        }
        out
    }

    fn normalize_lines(&self, lines_: &[[Rational; 2]], terms: Terms) -> Terms {
        let k = lines_.len();
        let mut groups: BTreeMap<Vec<i32>, BiPoly> = BTreeMap::new();
        for (m, c) in terms {
            let mut num = BiPoly::new();
            num.insert((m.0[0], m.0[1]), c);
            let mut poles = vec![0; k];
            for i in 0..k {
                let e = m.0[2 + i];
                if e > 0 {
                    num = lines::mul(&num, &lines::linear_pow(&lines_[i], e as u32));
                } else {
                    poles[i] = -e;
                }
            }
            lines::add_into(groups.entry(poles).or_default(), &num);
        }
        let mut top = vec![0; k];
        for poles in groups.keys() {
            for i in 0..k {
                top[i] = top[i].max(poles[i]);
            }
        }
        let mut f = BiPoly::new();
        for (poles, num) in groups {
            let mut scaled = num;
            for i in 0..k {
                if top[i] > poles[i] {
                    scaled = lines::mul(&scaled, &lines::linear_pow(&lines_[i], (top[i] - poles[i]) as u32));
                }
            }
            lines::add_into(&mut f, &scaled);
        }
        if f.is_empty() {
            return Terms::new();
        }
        for i in 0..k {
            while top[i] > 0 {
                match lines::divide_by_line(&f, &lines_[i]) {
                    Some(q) => {
                        f = q;
                        top[i] -= 1;
                    }
                    None => break,
                }
            }
        }
        f.into_iter()
            .map(|((a, b), c)| {
                let mut e = vec![a, b];
                e.extend(top.iter().map(|t| -t));
                (Monomial(e), c)
            })
            .collect()
    }

    /// Pole orders along each line of a normalized line-complement element.
    pub fn pole_orders(&self, terms: &Terms) -> Vec<i32> {
        match &self.kind {
            RingKind::LineComplement { lines } => match terms.keys().next() {
                Some(m) => m.0[2..].iter().map(|e| -e).collect(),
                None => vec![0; lines.len()],
            },
            _ => Vec::new(),
        }
    }

    /// Whether every normalized monomial of this ring is a basis vector, i.e.
    /// coordinates are just coefficients.
    pub fn has_monomial_basis(&self) -> bool {
        !matches!(self.kind, RingKind::LineComplement { .. })
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            RingKind::AffineSpace { n } => format!("affine space of dimension {n}"),
            RingKind::Torus { n } => format!("torus (C*)^{n}"),
            RingKind::Danielewski { p } => {
                format!("Danielewski surface uv = p(z), deg p = {}", univariate::degree(p).unwrap_or(0))
            }
            RingKind::LineComplement { lines } => format!("complement of {} lines through the origin", lines.len()),
        }
    }
}

pub(crate) fn rational_string(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub(crate) fn is_negative(q: &Rational) -> bool {
    q.is_negative()
}
