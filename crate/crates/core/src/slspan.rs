//! Spanning sets of Λ²(sl_n) by wedges of nilpotent pairs taken from
//! sl₂-triplets, built from the pair (e, f) = (E_n1, E_1n) by adjoint
//! exponentials of simple root vectors.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use num::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseVec};
use crate::rings::rational_string;
use crate::Rational;

/// A traceless `n × n` matrix with rational entries.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatrixLieElement {
    n: usize,
    entries: Vec<Rational>,
}

impl MatrixLieElement {
    pub fn new(n: usize, entries: Vec<Rational>) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return Err(Error::Degree(format!("expected {} entries for sl_{n}", n * n)));
        }
        let m = MatrixLieElement { n, entries };
        if !m.trace().is_zero() {
            return Err(Error::Degree("trace must be 0".into()));
        }
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        let entries = rows.iter().flat_map(|r| r.iter().map(|&x| crate::q(x))).collect();
        Self::new(n, entries)
    }

    pub fn zero(n: usize) -> Self {
        MatrixLieElement { n, entries: vec![Rational::zero(); n * n] }
    }

    /// Matrix unit `E_ij` (0-indexed), `i != j`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        assert!(i != j, "E_ii is not traceless");
        let mut m = Self::zero(n);
        m.entries[i * n + j] = Rational::one();
        m
    }

    /// `H_i = E_ii − E_{i+1,i+1}`.
    pub fn cartan(n: usize, i: usize) -> Self {
        let mut m = Self::zero(n);
        m.entries[i * n + i] = Rational::one();
        m.entries[(i + 1) * n + i + 1] = -Rational::one();
        m
    }

    /// Chevalley basis: the `E_ij`, `i != j`, in row-major order followed by
    /// `H_1, …, H_{n−1}`.
    pub fn basis(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    out.push(Self::unit(n, i, j));
                }
            }
        }
        out.extend((0..n - 1).map(|i| Self::cartan(n, i)));
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn trace(&self) -> Rational {
        (0..self.n).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        MatrixLieElement { n: self.n, entries: self.entries.iter().map(|x| x * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        MatrixLieElement { n: self.n, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    fn matmul(a: &[Rational], b: &[Rational], n: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let x = &a[i * n + k];
                if x.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let y = &b[k * n + j];
                    if !y.is_zero() {
                        out[i * n + j] += x * y;
                    }
                }
            }
        }
        out
    }

    pub fn bracket(&self, other: &Self) -> Self {
        let ab = Self::matmul(&self.entries, &other.entries, self.n);
        let ba = Self::matmul(&other.entries, &self.entries, self.n);
        MatrixLieElement { n: self.n, entries: ab.into_iter().zip(ba).map(|(x, y)| x - y).collect() }
    }

    /// `x^n = 0`.
    pub fn is_nilpotent(&self) -> bool {
        let mut p = self.entries.clone();
        for _ in 1..self.n {
            p = Self::matmul(&p, &self.entries, self.n);
        }
        p.iter().all(Zero::is_zero)
    }

    /// Coordinates in the Chevalley basis of [`MatrixLieElement::basis`].
    pub fn coordinates(&self) -> Vec<Rational> {
        let n = self.n;
        let mut out = Vec::with_capacity(n * n - 1);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    out.push(self.get(i, j).clone());
                }
            }
        }
        let mut acc = Rational::zero();
        for i in 0..n - 1 {
            acc += self.get(i, i);
            out.push(acc.clone());
        }
        out
    }

    pub fn to_rows(&self) -> Vec<Vec<String>> {
        (0..self.n).map(|i| (0..self.n).map(|j| rational_string(self.get(i, j))).collect()).collect()
    }
}

impl fmt::Debug for MatrixLieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_rows())
    }
}

impl Serialize for MatrixLieElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

/// A group element of SL_n stored with its inverse.
#[derive(Clone, Debug)]
pub struct GroupElement {
    n: usize,
    g: Vec<Rational>,
    inv: Vec<Rational>,
}

impl GroupElement {
    pub fn identity(n: usize) -> Self {
        let mut g = vec![Rational::zero(); n * n];
        for i in 0..n {
            g[i * n + i] = Rational::one();
        }
        GroupElement { n, g: g.clone(), inv: g }
    }

    /// `exp(t v)` for nilpotent `v`, a finite sum.
    pub fn exp(v: &MatrixLieElement, t: &Rational) -> Result<Self> {
        if !v.is_nilpotent() {
            return Err(Error::NotNilpotent);
        }
        let n = v.n;
        let series = |s: &Rational| {
            let tv = v.scale(s).entries;
            let mut out = GroupElement::identity(n).g;
            let mut term = out.clone();
            for k in 1..n {
                term = MatrixLieElement::matmul(&term, &tv, n);
                let inv_k = Rational::new(1.into(), (k as i64).into());
                term.iter_mut().for_each(|x| *x *= &inv_k);
                out.iter_mut().zip(&term).for_each(|(o, x)| *o += x);
            }
            out
        };
        let g = series(t);
        let inv = series(&-t.clone());
        Ok(GroupElement { n, g, inv })
    }

    pub fn compose(&self, other: &Self) -> Self {
        GroupElement {
            n: self.n,
            g: MatrixLieElement::matmul(&self.g, &other.g, self.n),
            inv: MatrixLieElement::matmul(&other.inv, &self.inv, self.n),
        }
    }

    /// `g x g⁻¹`.
    pub fn conjugate(&self, x: &MatrixLieElement) -> MatrixLieElement {
        let gx = MatrixLieElement::matmul(&self.g, &x.entries, self.n);
        MatrixLieElement { n: self.n, entries: MatrixLieElement::matmul(&gx, &self.inv, self.n) }
    }

    fn is_consistent(&self) -> bool {
        let p = MatrixLieElement::matmul(&self.g, &self.inv, self.n);
        p == GroupElement::identity(self.n).g
    }
}

/// `Σ_k t^k/k! ad(v)^k x`.
fn ad_series(v: &MatrixLieElement, t: &Rational, x: &MatrixLieElement) -> MatrixLieElement {
    let mut out = x.clone();
    let mut term = x.clone();
    let mut k = 1i64;
    loop {
        term = v.bracket(&term).scale(&(t / Rational::from_integer(k.into())));
        if term.is_zero() {
            return out;
        }
        out = out.add(&term);
        k += 1;
    }
}

/// `Ad_{exp(t v)} x` by the ad-series, cross-checked against conjugation by
/// the matrix exponential.
pub fn adjoint_exp(v: &MatrixLieElement, t: &Rational, x: &MatrixLieElement) -> Result<MatrixLieElement> {
    let g = GroupElement::exp(v, t)?;
    let series = ad_series(v, t, x);
    if !g.is_consistent() || g.conjugate(x) != series {
        return Err(Error::Inconsistent("ad-series differs from conjugation".into()));
    }
    Ok(series)
}

/// Number of sample points minus one used by [`vandermonde_extract`].
pub fn sample_bound(n: usize) -> usize {
    2 * n
}

/// `(1/r!) ad(v)^r f` from the values `Ad_{exp(t v)} f` at `t = 0, …, N`,
/// by solving the Vandermonde system; cross-checked with the iterated
/// bracket.
pub fn vandermonde_extract(v: &MatrixLieElement, f: &MatrixLieElement, r: usize) -> Result<MatrixLieElement> {
    let n = v.n;
    let big_n = sample_bound(n);
    if r > big_n {
        return Err(Error::Degree(format!("order {r} exceeds the sample bound {big_n}")));
    }
    let samples: Vec<MatrixLieElement> =
        (0..=big_n).map(|t| adjoint_exp(v, &crate::q(t as i64), f)).collect::<Result<_>>()?;
    // Rows [1, t, t², …] augmented with the sampled matrices; Gauss–Jordan.
    let m = big_n + 1;
    let mut rows: Vec<(Vec<Rational>, MatrixLieElement)> = (0..m)
        .map(|t| {
            let tq = crate::q(t as i64);
            let mut p = Rational::one();
            let row = (0..m)
                .map(|_| {
                    let x = p.clone();
                    p *= &tq;
                    x
                })
                .collect();
            (row, samples[t].clone())
        })
        .collect();
    for col in 0..m {
        let pivot = (col..m)
            .find(|&i| !rows[i].0[col].is_zero())
            .ok_or_else(|| Error::Inconsistent("singular Vandermonde system".into()))?;
        rows.swap(col, pivot);
        let inv = rows[col].0[col].recip();
        rows[col].0.iter_mut().for_each(|x| *x *= &inv);
        rows[col].1 = rows[col].1.scale(&inv);
        for i in 0..m {
            if i == col || rows[i].0[col].is_zero() {
                continue;
            }
            let c = rows[i].0[col].clone();
            let (pr, pm) = (rows[col].0.clone(), rows[col].1.clone());
            rows[i].0.iter_mut().zip(&pr).for_each(|(x, y)| *x -= &c * y);
            rows[i].1 = rows[i].1.sub(&pm.scale(&c));
        }
    }
    let result = rows[r].1.clone();
    let mut direct = f.clone();
    for k in 1..=r {
        direct = v.bracket(&direct).scale(&Rational::new(1.into(), (k as i64).into()));
    }
    if direct != result {
        return Err(Error::Inconsistent("Vandermonde extraction differs from the iterated bracket".into()));
    }
    Ok(result)
}

/// One adjoint exponential step `exp(t E_ij)`.
#[derive(Clone, Debug, Serialize)]
pub struct RootStep {
    pub i: usize,
    pub j: usize,
    pub t: i64,
}

/// `(e', h', f')` with `[h',e'] = 2e'`, `[h',f'] = −2f'`, `[e',f'] = h'`.
#[derive(Clone, Debug, Serialize)]
pub struct Triplet {
    pub e: MatrixLieElement,
    pub h: MatrixLieElement,
    pub f: MatrixLieElement,
}

impl Triplet {
    pub fn verify(&self) -> bool {
        let two = crate::q(2);
        self.h.bracket(&self.e) == self.e.scale(&two)
            && self.h.bracket(&self.f) == self.f.scale(&-two)
            && self.e.bracket(&self.f) == self.h
    }
}

/// A nilpotent pair `(a, b)` with `a = Ad_{g} Ad_{h} e`, `b = Ad_{g} f`.
#[derive(Clone, Debug, Serialize)]
pub struct NilpotentPair {
    pub a: MatrixLieElement,
    pub b: MatrixLieElement,
    /// Steps of `g`, innermost first (negative simple roots).
    pub outer: Vec<RootStep>,
    /// Steps of `h`, innermost first (positive simple roots).
    pub inner: Vec<RootStep>,
    /// Triplet with raising element `b` and lowering element `a`.
    pub certificate: Triplet,
}

/// Rank of `{a ∧ b}` in the basis `x_p ∧ x_q`, `p < q`, of Λ²(sl_n).
#[derive(Clone, Debug, Serialize)]
pub struct SpanReport {
    pub n: usize,
    pub rank: usize,
    pub expected: usize,
    pub spans: bool,
}

pub fn wedge_coordinates(a: &MatrixLieElement, b: &MatrixLieElement) -> SparseVec<(usize, usize)> {
    let (x, y) = (a.coordinates(), b.coordinates());
    let mut out = SparseVec::new();
    for p in 0..x.len() {
        for q in p + 1..x.len() {
            let c = &x[p] * &y[q] - &x[q] * &y[p];
            if !c.is_zero() {
                out.insert((p, q), c);
            }
        }
    }
    out
}

pub fn verify_span(n: usize, pairs: &[(MatrixLieElement, MatrixLieElement)]) -> SpanReport {
    let d = n * n - 1;
    let expected = d * (d - 1) / 2;
    let mut ech = Echelon::new();
    for (a, b) in pairs {
        ech.insert(wedge_coordinates(a, b));
    }
    SpanReport { n, rank: ech.rank(), expected, spans: ech.rank() == expected }
}

/// Simple root vectors `E_{i,i+1}` (positive) or `E_{i+1,i}` (negative).
fn simple_roots(n: usize, positive: bool) -> Vec<(usize, usize)> {
    (0..n - 1).map(|i| if positive { (i, i + 1) } else { (i + 1, i) }).collect()
}

/// Breadth-first search over words in exponentials of simple root vectors
/// applied to `start`, keeping images that enlarge the span, until the span
/// is all of sl_n.
fn orbit_basis(start: &MatrixLieElement, positive: bool) -> Result<Vec<(MatrixLieElement, Vec<RootStep>)>> {
    let n = start.n;
    let dim = n * n - 1;
    let to_sparse = |m: &MatrixLieElement| -> SparseVec<usize> {
        m.coordinates().into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()
    };
    let mut ech = Echelon::new();
    let mut found = Vec::new();
    let mut queue = VecDeque::new();
    ech.insert(to_sparse(start));
    found.push((start.clone(), Vec::new()));
    queue.push_back((start.clone(), Vec::new()));
    let mut seen: BTreeMap<MatrixLieElement, ()> = BTreeMap::new();
    seen.insert(start.clone(), ());
    while let Some((x, word)) = queue.pop_front() {
        if ech.rank() == dim {
            break;
        }
        for (i, j) in simple_roots(n, positive) {
            let v = MatrixLieElement::unit(n, i, j);
            for t in 1..=sample_bound(n) as i64 {
                let y = adjoint_exp(&v, &crate::q(t), &x)?;
                if seen.insert(y.clone(), ()).is_some() {
                    continue;
                }
                let mut w: Vec<RootStep> = word.clone();
                w.push(RootStep { i, j, t });
                if ech.insert(to_sparse(&y)) {
                    found.push((y.clone(), w.clone()));
                    queue.push_back((y, w));
                }
            }
        }
    }
    if ech.rank() != dim {
        return Err(Error::Inconsistent(format!("orbit spans {} of {dim} dimensions", ech.rank())));
    }
    Ok(found)
}

fn apply_word(word: &[RootStep], n: usize, x: &MatrixLieElement) -> Result<MatrixLieElement> {
    word.iter().try_fold(x.clone(), |acc, s| adjoint_exp(&MatrixLieElement::unit(n, s.i, s.j), &crate::q(s.t), &acc))
}

/// The spanning set: `f_k = Ad_{g_k} f` over a basis found from negative
/// simple roots, and for each `k` the pairs `(Ad_{g_k} Ad_{h_j} e, f_k)` with
/// `Ad_{h_j} e` a basis found from positive simple roots. Every pair is
/// checked for nilpotency and carries a verified triplet.
pub fn build_spanning_set(n: usize) -> Result<Vec<NilpotentPair>> {
    if n < 2 {
        return Err(Error::Degree("sl_n needs n >= 2".into()));
    }
    let f = MatrixLieElement::unit(n, 0, n - 1);
    let e = MatrixLieElement::unit(n, n - 1, 0);
    let outer = orbit_basis(&f, false)?;
    let inner = orbit_basis(&e, true)?;
    let mut pairs = Vec::new();
    for (fk, gword) in &outer {
        for (hj, hword) in &inner {
            let a = apply_word(gword, n, hj)?;
            let b = fk.clone();
            if !a.is_nilpotent() || !b.is_nilpotent() {
                return Err(Error::Inconsistent("non-nilpotent element in a pair".into()));
            }
            let certificate = Triplet { e: b.clone(), h: b.bracket(&a), f: a.clone() };
            if !certificate.verify() {
                return Err(Error::CertificateSearch(format!("no sl2-triplet for pair {a:?}, {b:?}")));
            }
            pairs.push(NilpotentPair { a, b, outer: gword.clone(), inner: hword.clone(), certificate });
        }
    }
    Ok(pairs)
}

/// Spanning-set report.
#[derive(Clone, Debug, Serialize)]
pub struct SpanningSetReport {
    pub pairs: Vec<NilpotentPair>,
    #[serde(flatten)]
    pub span: SpanReport,
}

pub fn spanning_set_report(n: usize) -> Result<SpanningSetReport> {
    let pairs = build_spanning_set(n)?;
    let span = verify_span(n, &pairs.iter().map(|p| (p.a.clone(), p.b.clone())).collect::<Vec<_>>());
    Ok(SpanningSetReport { pairs, span })
}
