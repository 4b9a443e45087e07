//! Sparse exact linear algebra over the rationals.
//!
//! Vectors are ordered maps from an arbitrary key type to nonzero rational
//! coefficients. Row reduction always pivots on the largest key of a row, so
//! every result depends only on the key ordering and the insertion order.

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::Rational;

pub type SparseVec<K> = BTreeMap<K, Rational>;

/// `y += a * x`, dropping entries that cancel.
pub fn axpy<K: Ord + Clone>(y: &mut SparseVec<K>, a: &Rational, x: &SparseVec<K>) {
    if a.is_zero() {
        return;
    }
    for (k, v) in x {
        let entry = y.entry(k.clone()).or_insert_with(Rational::zero);
        *entry += a * v;
        if entry.is_zero() {
            y.remove(k);
        }
    }
}

pub fn scale<K: Ord + Clone>(x: &SparseVec<K>, a: &Rational) -> SparseVec<K> {
    if a.is_zero() {
        return SparseVec::new();
    }
    x.iter().map(|(k, v)| (k.clone(), v * a)).collect()
}

/// Row echelon form keyed by pivot; each stored row has its pivot as largest
/// key, normalized to coefficient one.
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Clone> {
    rows: BTreeMap<K, SparseVec<K>>,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Echelon { rows: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_vectors<'a, I>(vectors: I) -> Self
    where
        I: IntoIterator<Item = &'a SparseVec<K>>,
        K: 'a,
    {
        let mut e = Self::new();
        for v in vectors {
            e.insert(v.clone());
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<K>> {
        self.rows.values()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    /// Remainder of `v` after eliminating every pivot key.
    pub fn reduce(&self, v: &SparseVec<K>) -> SparseVec<K> {
        let mut v = v.clone();
        let mut cursor: Option<K> = None;
        loop {
            let next = match &cursor {
                None => v.keys().next_back().cloned(),
                Some(c) => v.range(..c.clone()).next_back().map(|(k, _)| k.clone()),
            };
            let Some(k) = next else { break };
            if let Some(row) = self.rows.get(&k) {
                let c = -v[&k].clone();
                axpy(&mut v, &c, row);
            }
            cursor = Some(k);
        }
        v
    }

    /// Inserts `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: SparseVec<K>) -> bool {
        let r = self.reduce(&v);
        match r.iter().next_back() {
            None => false,
            Some((lead, c)) => {
                let lead = lead.clone();
                let inv = c.recip();
                let r = scale(&r, &inv);
                self.rows.insert(lead, r);
                true
            }
        }
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Aug<K> {
    Tag(usize),
    Val(K),
}

fn augment<K: Ord + Clone>(v: &SparseVec<K>, tag: Option<usize>) -> SparseVec<Aug<K>> {
    let mut out: SparseVec<Aug<K>> = v.iter().map(|(k, c)| (Aug::Val(k.clone()), c.clone())).collect();
    if let Some(t) = tag {
        out.insert(Aug::Tag(t), Rational::one());
    }
    out
}

fn split_tags<K: Ord + Clone>(v: SparseVec<Aug<K>>) -> (bool, SparseVec<usize>) {
    let mut tags = SparseVec::new();
    let mut has_val = false;
    for (k, c) in v {
        match k {
            Aug::Tag(t) => {
                tags.insert(t, c);
            }
            Aug::Val(_) => has_val = true,
        }
    }
    (has_val, tags)
}

/// Solves `sum_j x_j * images[j] = target` for many targets.
pub struct Solver<K: Ord + Clone> {
    echelon: Echelon<Aug<K>>,
    kernel: Vec<SparseVec<usize>>,
}

impl<K: Ord + Clone> Solver<K> {
    pub fn new(images: &[SparseVec<K>]) -> Self {
        let mut echelon = Echelon::new();
        let mut kernel = Vec::new();
        for (j, img) in images.iter().enumerate() {
            let a = augment(img, Some(j));
            let r = echelon.reduce(&a);
            let (has_val, tags) = split_tags(r.clone());
            if has_val {
                echelon.insert(r);
            } else {
                kernel.push(tags);
            }
        }
        Solver { echelon, kernel }
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    /// Basis of the relations among the images, as coefficient vectors.
    pub fn kernel(&self) -> &[SparseVec<usize>] {
        &self.kernel
    }

    pub fn solve(&self, target: &SparseVec<K>) -> Option<SparseVec<usize>> {
        let r = self.echelon.reduce(&augment(target, None));
        let (has_val, tags) = split_tags(r);
        if has_val {
            None
        } else {
            Some(tags.into_iter().map(|(k, c)| (k, -c)).collect())
        }
    }
}

pub fn rank<K: Ord + Clone>(vectors: &[SparseVec<K>]) -> usize {
    Echelon::from_vectors(vectors.iter()).rank()
}

pub fn kernel<K: Ord + Clone>(images: &[SparseVec<K>]) -> Vec<SparseVec<usize>> {
    Solver::new(images).kernel
}

/// `sum_j coeffs[j] * vectors[j]`.
pub fn combine<K: Ord + Clone>(coeffs: &SparseVec<usize>, vectors: &[SparseVec<K>]) -> SparseVec<K> {
    let mut out = SparseVec::new();
    for (j, c) in coeffs {
        axpy(&mut out, c, &vectors[*j]);
    }
    out
}

/// Spanning vectors of `span(a) ∩ span(b)`.
pub fn intersect<K: Ord + Clone>(a: &[SparseVec<K>], b: &[SparseVec<K>]) -> Vec<SparseVec<K>> {
    let ea = Echelon::from_vectors(a.iter());
    let residues: Vec<_> = b.iter().map(|v| ea.reduce(v)).collect();
    kernel(&residues).iter().map(|c| combine(c, b)).filter(|v| !v.is_empty()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn v(entries: &[(u32, i64)]) -> SparseVec<u32> {
        entries.iter().filter(|(_, c)| *c != 0).map(|(k, c)| (*k, q(*c))).collect()
    }

    #[test]
    fn rank_and_kernel() {
        let vs = vec![v(&[(0, 1), (1, 2)]), v(&[(0, 2), (1, 4)]), v(&[(2, 1)])];
        assert_eq!(rank(&vs), 2);
        let k = kernel(&vs);
        assert_eq!(k.len(), 1);
        assert!(combine(&k[0], &vs).is_empty());
    }

    #[test]
    fn solve_finds_combination() {
        let vs = vec![v(&[(0, 1), (1, 1)]), v(&[(1, 1), (2, 1)])];
        let s = Solver::new(&vs);
        let t = v(&[(0, 1), (1, 2), (2, 1)]);
        let x = s.solve(&t).unwrap();
        assert_eq!(combine(&x, &vs), t);
        assert!(s.solve(&v(&[(0, 1)])).is_none());
    }

    #[test]
    fn intersection_dimension() {
        let a = vec![v(&[(0, 1)]), v(&[(1, 1)])];
        let b = vec![v(&[(1, 1), (0, 1)]), v(&[(2, 1)])];
        let i = intersect(&a, &b);
        assert_eq!(rank(&i), 1);
        assert_eq!(i[0], v(&[(0, 1), (1, 1)]));
    }

    #[test]
    fn reduce_leaves_no_pivots() {
        let e = Echelon::from_vectors([v(&[(3, 1), (1, 1)]), v(&[(1, 2), (0, 1)])].iter());
        let r = e.reduce(&v(&[(3, 5), (2, 1)]));
        assert!(e.pivots().all(|p| !r.contains_key(p)));
    }
}
