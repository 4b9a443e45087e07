//! Truncated algebraic de Rham cohomology: Betti number estimates with a
//! stabilization check, exactness certificates, class coordinates and the
//! wedge map from pairs of 1-classes to 2-classes.

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{subsets, truncate_complex, DifferentialForm, FormKey, Grading, TruncatedComplex, TruncatedFormSpace};
use crate::linalg::{kernel, combine, Echelon, Solver, SparseVec};
use crate::rings::{Ring, RingElement, RingKind, Window};
use crate::Rational;

/// Degree window, pole cap and slack of a truncated computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationParams {
    pub max_degree: i64,
    pub neg_cap: i32,
    pub slack: i64,
}

impl Default for TruncationParams {
    fn default() -> Self {
        TruncationParams { max_degree: 8, neg_cap: 4, slack: 2 }
    }
}

impl TruncationParams {
    pub fn window(&self) -> Window {
        Window::upto(self.max_degree).with_neg_cap(self.neg_cap)
    }

    pub fn with_max_degree(&self, max_degree: i64) -> Self {
        TruncationParams { max_degree, ..self.clone() }
    }
}

/// Cohomology in one degree.
#[derive(Clone, Debug)]
pub struct DegreeCohomology {
    pub degree: usize,
    pub dimension: usize,
    /// Whether the estimate is unchanged at a window two degrees larger.
    pub stable: bool,
    /// Closed forms whose classes form a basis.
    pub representatives: Vec<DifferentialForm>,
    boundaries: Vec<SparseVec<FormKey>>,
    window_span: Echelon<FormKey>,
}

#[derive(Clone, Debug)]
pub struct CohomologyReport {
    pub ring: Ring,
    pub params: TruncationParams,
    pub grading: Grading,
    pub pole_cap: i32,
    pub degrees: Vec<DegreeCohomology>,
}

impl CohomologyReport {
    pub fn betti_numbers(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.dimension).collect()
    }

    pub fn is_stable(&self) -> bool {
        self.degrees.iter().all(|d| d.stable)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let degrees: Vec<serde_json::Value> = self
            .degrees
            .iter()
            .map(|d| {
                serde_json::json!({
                    "degree": d.degree,
                    "dimension": d.dimension,
                    "stable": d.stable,
                    "representatives": d.representatives.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({
            "variety": self.ring.describe(),
            "params": self.params,
            "grading": self.grading,
            "betti": self.betti_numbers(),
            "stable": self.is_stable(),
            "degrees": degrees,
        })
    }
}

/// Closed forms tried first as class representatives: constants,
/// logarithmic forms and their wedges, and `z^j ω` on Danielewski surfaces.
pub fn preferred_representatives(ring: &Ring, k: usize, max_degree: i64) -> Vec<DifferentialForm> {
    if k == 0 {
        return vec![DifferentialForm::function(&RingElement::one(ring))];
    }
    let logs: Vec<DifferentialForm> = match ring.kind() {
        RingKind::Torus { n } => (0..*n)
            .map(|i| DifferentialForm::dx(ring, i).mul_fn(&RingElement::var(ring, i).pow(-1).expect("unit")))
            .collect(),
        RingKind::LineComplement { lines } => (0..lines.len())
            .map(|i| {
                let l = 2 + i;
                let dl = DifferentialForm::from_terms(
                    ring,
                    1,
                    (0..2).map(|c| (vec![c], RingElement::constant(ring, ring.chain_coefficient(l, c)))),
                );
                dl.mul_fn(&RingElement::var(ring, l).pow(-1).expect("unit"))
            })
            .collect(),
        RingKind::Danielewski { .. } if k == 2 => {
            let omega = crate::exterior::danielewski_volume_representative(ring);
            return (0..=max_degree.max(0))
                .map(|j| omega.mul_fn(&RingElement::var(ring, 2).pow(j as i32).expect("power")))
                .collect();
        }
        _ => Vec::new(),
    };
    subsets(logs.len(), k)
        .into_iter()
        .map(|s| {
            s[1..].iter().fold(logs[s[0]].clone(), |acc, &i| acc.wedge(&logs[i]).expect("same ring"))
        })
        .collect()
}

fn degree_cohomology(cx: &TruncatedComplex, k: usize) -> Result<DegreeCohomology> {
    let n = cx.spaces.len() - 1;
    let w = cx.basis_coordinates(k);
    let window_span = Echelon::from_vectors(w.iter());
    let cycles: Vec<SparseVec<FormKey>> = if k < n {
        kernel(&cx.d_window[k]).iter().map(|c| combine(c, &w)).collect()
    } else {
        w.clone()
    };
    let boundaries: Vec<SparseVec<FormKey>> =
        if k == 0 { Vec::new() } else { cx.d_enlarged[k - 1].iter().filter(|v| !v.is_empty()).cloned().collect() };
    let mut span = Echelon::from_vectors(boundaries.iter());
    let mut representatives = Vec::new();
    for c in preferred_representatives(&cx.ring, k, cx.window.max_degree) {
        if k < n && !c.d().is_zero() {
            continue;
        }
        let Ok(coords) = cx.coordinates(&c) else { continue };
        if window_span.contains(&coords) && span.insert(coords) {
            representatives.push(c);
        }
    }
    for z in cycles {
        if span.insert(z.clone()) {
            representatives.push(cx.form(k, &z));
        }
    }
    Ok(DegreeCohomology {
        degree: k,
        dimension: representatives.len(),
        stable: false,
        representatives,
        boundaries,
        window_span,
    })
}

/// Cohomology in every degree at the given truncation; the stable flags
/// compare against a window two degrees larger.
pub fn cohomology(ring: &Ring, params: &TruncationParams) -> Result<CohomologyReport> {
    let grading = Grading::cohomological(ring);
    let cx = truncate_complex(ring, &params.window(), params.slack, &grading)?;
    let bigger = truncate_complex(ring, &params.with_max_degree(params.max_degree + 2).window(), params.slack, &grading)?;
    let mut degrees = Vec::new();
    for k in 0..cx.spaces.len() {
        let mut d = degree_cohomology(&cx, k)?;
        d.stable = degree_cohomology(&bigger, k)?.dimension == d.dimension;
        degrees.push(d);
    }
    Ok(CohomologyReport { ring: ring.clone(), params: params.clone(), grading, pole_cap: cx.pole_cap, degrees })
}

/// `(dimension, representatives, stable)` in degree `k`.
pub fn betti(ring: &Ring, k: usize, params: &TruncationParams) -> Result<(usize, Vec<DifferentialForm>, bool)> {
    let report = cohomology(ring, params)?;
    let d = report
        .degrees
        .into_iter()
        .nth(k)
        .ok_or_else(|| Error::Degree(format!("no {k}-forms on a {}-dimensional variety", ring.dimension())))?;
    Ok((d.dimension, d.representatives, d.stable))
}

/// Outcome of [`is_exact`].
#[derive(Clone, Debug)]
pub enum Exactness {
    /// `dξ = η` holds exactly.
    Exact { primitive: DifferentialForm, window: Window },
    /// No primitive in the largest window tried; `residue` is the reduction
    /// of `η` modulo the boundaries found there.
    NotExactWithin { window: Window, residue: SparseVec<FormKey> },
}

impl Exactness {
    pub fn is_exact(&self) -> bool {
        matches!(self, Exactness::Exact { .. })
    }
}

/// Searches for a primitive of a closed form in a window covering the form,
/// then in a window of twice the degree.
pub fn is_exact(eta: &DifferentialForm, params: &TruncationParams) -> Result<Exactness> {
    let k = eta.degree();
    if k == 0 {
        return Err(Error::Degree("exactness is defined for forms of positive degree".into()));
    }
    if !eta.d().is_zero() {
        return Err(Error::NotClosed);
    }
    let ring = eta.ring();
    let grading = Grading::cohomological(ring);
    let start = params.max_degree.max(eta.filtered_degree(&grading).unwrap_or(0));
    let neg_cap = params.neg_cap.max(eta.max_pole());
    let mut last = None;
    for max_degree in [start, 2 * start.max(1)] {
        let window = Window::upto(max_degree).with_neg_cap(neg_cap);
        let source_window = window.enlarged(params.slack);
        let pole_cap = source_window.neg_cap + 2;
        let source = TruncatedFormSpace::new(ring, k - 1, &source_window, &grading);
        let images: Vec<SparseVec<FormKey>> =
            source.basis.iter().map(|b| b.d().coordinates(pole_cap)).collect::<Result<_>>()?;
        let target = eta.coordinates(pole_cap)?;
        let solver = Solver::new(&images);
        if let Some(sol) = solver.solve(&target) {
            let mut primitive = DifferentialForm::zero(ring, k - 1);
            for (j, c) in sol {
                primitive = primitive + source.basis[j].scale(&c);
            }
            if primitive.d() != *eta {
                return Err(Error::Inconsistent("primitive does not differentiate to the form".into()));
            }
            return Ok(Exactness::Exact { primitive, window });
        }
        let boundary = Echelon::from_vectors(images.iter());
        last = Some((window, boundary.reduce(&target)));
    }
    let (window, residue) = last.expect("at least one window");
    Ok(Exactness::NotExactWithin { window, residue })
}

/// Coordinates of the class of a closed form in the representative basis.
pub fn class_of(report: &CohomologyReport, eta: &DifferentialForm) -> Result<Vec<Rational>> {
    let k = eta.degree();
    let d = report
        .degrees
        .get(k)
        .ok_or_else(|| Error::Degree(format!("no {k}-forms on this variety")))?;
    if !eta.ring().same_as(&report.ring) {
        return Err(Error::MixedRings);
    }
    if !eta.d().is_zero() {
        return Err(Error::NotClosed);
    }
    let coords = eta.coordinates(report.pole_cap)?;
    if !d.window_span.contains(&coords) {
        return Err(Error::WindowMismatch(format!(
            "form lies outside the degree-{} window of the report",
            report.params.max_degree
        )));
    }
    let mut images: Vec<SparseVec<FormKey>> = d
        .representatives
        .iter()
        .map(|r| r.coordinates(report.pole_cap))
        .collect::<Result<_>>()?;
    let nreps = images.len();
    images.extend(d.boundaries.iter().cloned());
    let sol = Solver::new(&images)
        .solve(&coords)
        .ok_or_else(|| Error::Inconsistent("closed form outside cycles + boundaries".into()))?;
    Ok((0..nreps).map(|i| sol.get(&i).cloned().unwrap_or_else(Rational::zero)).collect())
}

/// The span of the classes of `α_i ∧ α_j` over pairs of 1-class
/// representatives, as a subspace of the 2-class coordinates.
#[derive(Clone, Debug)]
pub struct WedgeImage {
    pub classes: Vec<Vec<Rational>>,
    pub basis: Vec<Vec<Rational>>,
}

impl WedgeImage {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

pub fn lambda2_h1_image(report: &CohomologyReport) -> Result<WedgeImage> {
    let Some(h1) = report.degrees.get(1) else {
        return Ok(WedgeImage { classes: Vec::new(), basis: Vec::new() });
    };
    if report.degrees.len() < 3 {
        return Ok(WedgeImage { classes: Vec::new(), basis: Vec::new() });
    }
    let mut classes = Vec::new();
    let reps = &h1.representatives;
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            classes.push(class_of(report, &reps[i].wedge(&reps[j])?)?);
        }
    }
    let as_sparse: Vec<SparseVec<usize>> = classes
        .iter()
        .map(|c| c.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect())
        .collect();
    let ech = Echelon::from_vectors(as_sparse.iter());
    let dim = report.degrees[2].dimension;
    let basis = ech
        .rows()
        .map(|r| (0..dim).map(|i| r.get(&i).cloned().unwrap_or_else(Rational::zero)).collect())
        .collect();
    Ok(WedgeImage { classes, basis })
}

#[cfg(test)]
mod tests;
