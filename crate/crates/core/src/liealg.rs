//! Truncated Lie algebra of divergence-free fields: bases of L₀, Jacobian
//! membership, the commutator image `span d ψ(v_i, v_j)`, the quotient
//! `L_J / [L₀, L₀]` on surfaces and semi-compatible pairs.

use std::collections::BTreeMap;

use num::Zero;
use serde::Serialize;

use crate::cohomology::{class_of, cohomology, is_exact, lambda2_h1_image, Exactness, TruncationParams};
use crate::error::{Error, Result};
use crate::exterior::{DifferentialForm, FormKey, Grading, TruncatedFormSpace};
use crate::fields::{unit_ideal_certificate, VectorField, VolumeForm};
use crate::linalg::{intersect, kernel, Echelon, SparseVec};
use crate::rings::{truncated_basis_weighted, Monomial, Ring, RingElement, Window};
use crate::Rational;

/// Truncation used by the quadratic constructions of this module (products
/// and ψ-spans of basis fields).
pub fn default_lie_params() -> TruncationParams {
    TruncationParams { max_degree: 4, neg_cap: 2, slack: 2 }
}

fn functions(ring: &Ring, window: &Window) -> Vec<RingElement> {
    truncated_basis_weighted(ring, window, ring.cohomology_weights()).elements
}

/// Coordinate cap large enough for elements built from a window.
fn cap_for(window: &Window) -> i32 {
    window.neg_cap.max(0) * 2 + 4
}

/// Rings whose relations are homogeneous for the cohomology weights; there
/// every construction below splits into homogeneous blocks.
fn is_graded(ring: &Ring) -> bool {
    ring.danielewski_p().is_none()
}

/// Span of coordinate vectors kept as one echelon per degree. On ungraded
/// rings everything lives in block 0.
struct GradedSpan {
    graded: bool,
    weights: Vec<i64>,
    blocks: BTreeMap<i64, Echelon<Monomial>>,
}

impl GradedSpan {
    fn new(ring: &Ring) -> Self {
        GradedSpan { graded: is_graded(ring), weights: ring.cohomology_weights().to_vec(), blocks: BTreeMap::new() }
    }

    fn block(&self, c: &SparseVec<Monomial>) -> Result<i64> {
        if !self.graded {
            return Ok(0);
        }
        let mut degrees = c.keys().map(|m| m.weighted_degree(&self.weights));
        let first = degrees.next().unwrap_or(0);
        if degrees.any(|d| d != first) {
            return Err(Error::Inconsistent("inhomogeneous generator on a graded ring".into()));
        }
        Ok(first)
    }

    fn insert(&mut self, c: SparseVec<Monomial>) -> Result<bool> {
        if c.is_empty() {
            return Ok(false);
        }
        let b = self.block(&c)?;
        Ok(self.blocks.entry(b).or_default().insert(c))
    }

    fn contains(&self, c: &SparseVec<Monomial>) -> Result<bool> {
        if c.is_empty() {
            return Ok(true);
        }
        Ok(self.blocks.get(&self.block(c)?).is_some_and(|e| e.contains(c)))
    }

    fn rank(&self) -> usize {
        self.blocks.values().map(Echelon::rank).sum()
    }

    fn rows(&self) -> impl Iterator<Item = &SparseVec<Monomial>> {
        self.blocks.values().flat_map(Echelon::rows)
    }

    /// `self ∩ span(window)` where `window` is a list of homogeneous vectors.
    fn intersect(&self, window: &[SparseVec<Monomial>]) -> Result<GradedSpan> {
        let mut by_block: BTreeMap<i64, Vec<SparseVec<Monomial>>> = BTreeMap::new();
        for c in window {
            by_block.entry(self.block(c)?).or_default().push(c.clone());
        }
        let mut out = GradedSpan { graded: self.graded, weights: self.weights.clone(), blocks: BTreeMap::new() };
        for (b, ws) in by_block {
            let Some(e) = self.blocks.get(&b) else { continue };
            let rows: Vec<_> = e.rows().cloned().collect();
            out.blocks.insert(b, Echelon::from_vectors(intersect(ws.as_slice(), &rows).iter()));
        }
        Ok(out)
    }
}

fn element_pole(f: &RingElement) -> i32 {
    f.ring().pole_orders(f.terms()).into_iter().max().unwrap_or(0).max(0)
}

/// Smallest coordinate cap valid for every element.
fn tight_cap<'a>(elements: impl IntoIterator<Item = &'a RingElement>) -> i32 {
    elements.into_iter().map(element_pole).max().unwrap_or(0)
}

/// Tangent fields whose components lie in the window.
pub fn tangent_fields(ring: &Ring, window: &Window) -> Vec<VectorField> {
    let fs = functions(ring, window);
    let n = ring.coordinates();
    let mut ambient = Vec::new();
    for i in 0..n {
        for f in &fs {
            let mut c = vec![RingElement::zero(ring); n];
            c[i] = f.clone();
            ambient.push(c);
        }
    }
    if ring.danielewski_p().is_none() {
        return ambient.into_iter().map(|c| VectorField::new(ring, c).expect("free ring")).collect();
    }
    // Kernel of the tangency residue v(u) v + u v(v) - p'(z) v(z).
    let p = ring.danielewski_p().expect("Danielewski");
    let dp = crate::rings::univariate::derivative(p);
    let dp: RingElement = dp
        .iter()
        .enumerate()
        .fold(RingElement::zero(ring), |acc, (k, c)| acc + RingElement::var(ring, 2).pow(k as i32).expect("power").scale(c));
    let partials = [RingElement::var(ring, 1), RingElement::var(ring, 0), -dp];
    let images: Vec<SparseVec<Monomial>> = ambient
        .iter()
        .map(|c| {
            let r = (0..n).fold(RingElement::zero(ring), |acc, i| acc + &c[i] * &partials[i]);
            r.terms().clone()
        })
        .collect();
    kernel(&images)
        .iter()
        .map(|k| {
            let mut c = vec![RingElement::zero(ring); n];
            for (j, coeff) in k {
                for i in 0..n {
                    c[i] = c[i].clone() + ambient[*j][i].scale(coeff);
                }
            }
            VectorField::new(ring, c).expect("kernel of the tangency residue")
        })
        .collect()
}

/// Divergence-free fields with components in a window.
#[derive(Clone, Debug)]
pub struct TruncatedL0 {
    pub window: Window,
    pub basis: Vec<VectorField>,
    /// Filtered degree `max_i (deg v(x_i) − w_i)` of each basis field.
    pub degrees: Vec<i64>,
    pub poles: Vec<i32>,
    pub tangent_dimension: usize,
}

impl TruncatedL0 {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

pub fn field_degree(v: &VectorField) -> i64 {
    let w = v.ring().cohomology_weights();
    v.components()
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.degree(w).map(|d| d - w[i]))
        .max()
        .unwrap_or(i64::MIN / 4)
}

fn field_pole(v: &VectorField) -> i32 {
    v.components().iter().map(element_pole).max().unwrap_or(0)
}

/// Kernel of `v ↦ div v` on the windowed tangent fields; every element is
/// cross-checked by `d μ(v) = 0`.
pub fn l0_basis(vol: &VolumeForm, window: &Window) -> Result<TruncatedL0> {
    let ring = vol.ring();
    let fields = tangent_fields(ring, window);
    let cap = cap_for(window);
    let images: Vec<SparseVec<Monomial>> =
        fields.iter().map(|v| vol.divergence(v)?.coordinates(cap)).collect::<Result<_>>()?;
    let mut groups: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (j, v) in fields.iter().enumerate() {
        let key = if is_graded(ring) { field_degree(v) } else { 0 };
        groups.entry(key).or_default().push(j);
    }
    let mut basis = Vec::new();
    for idx in groups.values() {
        let block: Vec<_> = idx.iter().map(|&j| images[j].clone()).collect();
        for k in kernel(&block) {
            let mut v = VectorField::zero(ring);
            for (j, c) in &k {
                v = v + fields[idx[*j]].scale(c);
            }
            if !vol.mu(&v)?.d().is_zero() {
                return Err(Error::Inconsistent("divergence-free field with non-closed μ(v)".into()));
            }
            basis.push(v);
        }
    }
    let degrees = basis.iter().map(field_degree).collect();
    let poles = basis.iter().map(field_pole).collect();
    Ok(TruncatedL0 { window: window.clone(), basis, degrees, poles, tangent_dimension: fields.len() })
}

/// Outcome of [`is_jacobian`].
#[derive(Clone, Debug)]
pub enum JacobianVerdict {
    /// `μ(v) = d potential`.
    Jacobian { potential: RingElement },
    NotJacobianWithin { window: Window },
}

impl JacobianVerdict {
    pub fn is_jacobian(&self) -> bool {
        matches!(self, JacobianVerdict::Jacobian { .. })
    }
}

pub fn is_jacobian(vol: &VolumeForm, v: &VectorField, params: &TruncationParams) -> Result<JacobianVerdict> {
    if !vol.divergence(v)?.is_zero() {
        return Err(Error::NonzeroDivergence);
    }
    if vol.ring().dimension() != 2 {
        return Err(Error::Unsupported("Jacobian certificates are implemented for surfaces".into()));
    }
    Ok(match is_exact(&vol.mu(v)?, params)? {
        Exactness::Exact { primitive, .. } => JacobianVerdict::Jacobian { potential: primitive.coefficient(&[]) },
        Exactness::NotExactWithin { window, .. } => JacobianVerdict::NotJacobianWithin { window },
    })
}

/// Which pairs of basis fields enter a quadratic span. Pairs whose product
/// has filtered degree above `max_degree` (or, on line complements, pole
/// order above `max_pole`) are skipped; on graded rings this loses nothing
/// in the target window.
#[derive(Clone, Debug)]
pub struct PairBound {
    pub max_degree: i64,
    pub max_pole: i32,
}

impl PairBound {
    pub fn for_window(window: &Window, slack: i64) -> Self {
        PairBound { max_degree: window.max_degree + slack, max_pole: window.neg_cap + slack as i32 }
    }

    fn admits(&self, ring: &Ring, degree: i64, pole: i32) -> bool {
        if ring.danielewski_p().is_some() {
            return true;
        }
        let _ = pole;
        degree <= self.max_degree
    }
}

fn volume_degree(vol: &VolumeForm) -> i64 {
    let ring = vol.ring();
    let g = Grading::cohomological(ring);
    let all: Vec<usize> = (0..ring.dimension()).collect();
    match ring.danielewski_p() {
        Some(_) => g.wedge_weight(&[2]),
        None => vol.form().coefficient(&all).degree(&g.weights).unwrap_or(0) + g.wedge_weight(&all),
    }
}

/// `ψ(v_i, v_j)` over admissible pairs of basis fields.
pub fn psi_generators(l0: &TruncatedL0, vol: &VolumeForm, bound: &PairBound) -> Result<Vec<RingElement>> {
    let ring = vol.ring();
    let wd = volume_degree(vol);
    let mut out = Vec::new();
    for i in 0..l0.basis.len() {
        for j in i + 1..l0.basis.len() {
            if !bound.admits(ring, l0.degrees[i] + l0.degrees[j] + wd, l0.poles[i] + l0.poles[j]) {
                continue;
            }
            let p = vol.psi_function(&l0.basis[i], &l0.basis[j])?;
            if !p.is_zero() {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// The exact 1-forms `d ψ(v_i, v_j)`, equal to `μ([v_i, v_j])` for
/// divergence-free fields.
#[derive(Clone, Debug)]
pub struct CommutatorImage {
    pub generators: Vec<DifferentialForm>,
    pub basis: Vec<SparseVec<FormKey>>,
}

impl CommutatorImage {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

pub fn commutator_image(l0: &TruncatedL0, vol: &VolumeForm, bound: &PairBound) -> Result<CommutatorImage> {
    if vol.ring().dimension() != 2 {
        return Err(Error::Unsupported("commutator images are implemented for surfaces".into()));
    }
    let cap = cap_for(&l0.window) * 2;
    let generators: Vec<DifferentialForm> = psi_generators(l0, vol, bound)?
        .into_iter()
        .map(|p| DifferentialForm::function(&p).d())
        .filter(|f| !f.is_zero())
        .collect();
    let coords: Vec<SparseVec<FormKey>> = generators.iter().map(|g| g.coordinates(cap)).collect::<Result<_>>()?;
    let basis = Echelon::from_vectors(coords.iter()).rows().cloned().collect();
    Ok(CommutatorImage { generators, basis })
}

/// Both sides of the surface formula for `dim L_J / [L₀, L₀]` and the
/// quotient `L₀ / L_J`.
#[derive(Clone, Debug, Serialize)]
pub struct QuotientReport {
    pub cohomology_params: TruncationParams,
    pub lie_params: TruncationParams,
    pub h1: usize,
    pub h2: usize,
    pub cohomology_stable: bool,
    pub omega_exact: bool,
    pub omega_class_dimension: usize,
    pub lambda2_h1_dimension: usize,
    /// `dim span{[ω], Λ²H¹}` inside H².
    pub span_dimension: usize,
    /// `h² − dim span{[ω], Λ²H¹}`.
    pub formula_value: i64,
    pub window_dimension: usize,
    pub l0_dimension: usize,
    pub psi_span_in_window: usize,
    /// `dim W / ((span ψ(L₀, L₀) ∩ W) + C)`.
    pub brute_force_value: i64,
    pub formula_agrees: bool,
    /// `dim` of closed `μ(L₀)` modulo exact forms in the window.
    pub l0_mod_lj: usize,
    pub l0_mod_lj_agrees: bool,
}

pub fn surface_theorem(vol: &VolumeForm, cparams: &TruncationParams, lparams: &TruncationParams) -> Result<QuotientReport> {
    let ring = vol.ring();
    if ring.dimension() != 2 {
        return Err(Error::Unsupported("the quotient formula applies to surfaces".into()));
    }
    let report = cohomology(ring, cparams)?;
    let h1 = report.degrees[1].dimension;
    let h2 = report.degrees[2].dimension;
    let omega = vol.form().clone();
    let omega_exact = is_exact(&omega, cparams)?.is_exact();
    let wedge = lambda2_h1_image(&report)?;
    let to_sparse = |c: &[Rational]| -> SparseVec<usize> {
        c.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
    };
    let mut span: Echelon<usize> = Echelon::from_vectors(wedge.basis.iter().map(|b| to_sparse(b)).collect::<Vec<_>>().iter());
    let omega_class = class_of(&report, &omega)?;
    let omega_class_dimension = usize::from(omega_class.iter().any(|c| !c.is_zero()));
    span.insert(to_sparse(&omega_class));
    let span_dimension = span.rank();
    let formula_value = h2 as i64 - span_dimension as i64;

    // Brute force: functions in the window modulo ψ(L₀, L₀) and constants.
    let window = lparams.window();
    let big = window.enlarged(lparams.slack);
    let l0_big = l0_basis(vol, &big)?;
    let bound = PairBound::for_window(&window, lparams.slack);
    let psis = psi_generators(&l0_big, vol, &bound)?;
    let wf = functions(ring, &window);
    let cap = tight_cap(psis.iter().chain(&wf));
    let w_coords: Vec<SparseVec<Monomial>> = wf.iter().map(|f| f.coordinates(cap)).collect::<Result<_>>()?;
    let mut r = GradedSpan::new(ring);
    for p in &psis {
        r.insert(p.coordinates(cap)?)?;
    }
    let mut r_in_w = r.intersect(&w_coords)?;
    let psi_span_in_window = r_in_w.rank();
    r_in_w.insert(RingElement::one(ring).coordinates(cap)?)?;
    let brute_force_value = w_coords.len() as i64 - r_in_w.rank() as i64;

    // L₀ / L_J: closed μ(L₀) in the window modulo exact forms.
    let l0 = l0_basis(vol, &window)?;
    let grading = Grading::cohomological(ring);
    let sources = TruncatedFormSpace::new(ring, 0, &big, &grading);
    let cap = cap_for(&big) * 2;
    let boundaries: Vec<SparseVec<FormKey>> =
        sources.basis.iter().map(|f| f.d().coordinates(cap)).collect::<Result<_>>()?;
    let mut ech = Echelon::from_vectors(boundaries.iter());
    let mut l0_mod_lj = 0;
    for v in &l0.basis {
        if ech.insert(vol.mu(v)?.coordinates(cap)?) {
            l0_mod_lj += 1;
        }
    }
    Ok(QuotientReport {
        cohomology_params: cparams.clone(),
        lie_params: lparams.clone(),
        h1,
        h2,
        cohomology_stable: report.is_stable(),
        omega_exact,
        omega_class_dimension,
        lambda2_h1_dimension: wedge.dimension(),
        span_dimension,
        formula_value,
        window_dimension: w_coords.len(),
        l0_dimension: l0_big.dimension(),
        psi_span_in_window,
        brute_force_value,
        formula_agrees: formula_value == brute_force_value,
        l0_mod_lj,
        l0_mod_lj_agrees: l0_mod_lj == h1,
    })
}

/// `dim W / (span{v(f) : v ∈ L₀, f} ∩ W)` and whether 1 lies in the span.
#[derive(Clone, Debug, Serialize)]
pub struct ModuleQuotient {
    pub window_dimension: usize,
    pub span_dimension: usize,
    pub quotient_dimension: usize,
    pub contains_one: bool,
}

pub fn l0_module_quotient(vol: &VolumeForm, params: &TruncationParams) -> Result<ModuleQuotient> {
    let ring = vol.ring();
    let window = params.window();
    let big = window.enlarged(params.slack);
    let l0 = l0_basis(vol, &big)?;
    let fs = functions(ring, &big);
    let w = ring.cohomology_weights();
    let bound = PairBound::for_window(&window, params.slack);
    let mut products = Vec::new();
    for (i, v) in l0.basis.iter().enumerate() {
        for f in &fs {
            let deg = l0.degrees[i] + f.degree(w).unwrap_or(0);
            if !bound.admits(ring, deg, l0.poles[i] + element_pole(f) + 1) {
                continue;
            }
            let g = v.apply(f);
            if !g.is_zero() {
                products.push(g);
            }
        }
    }
    let wf = functions(ring, &window);
    let cap = tight_cap(products.iter().chain(&wf));
    let mut span = GradedSpan::new(ring);
    for g in &products {
        span.insert(g.coordinates(cap)?)?;
    }
    let w_coords: Vec<SparseVec<Monomial>> = wf.iter().map(|f| f.coordinates(cap)).collect::<Result<_>>()?;
    let inside = span.intersect(&w_coords)?;
    let contains_one = inside.contains(&RingElement::one(ring).coordinates(cap)?)?;
    Ok(ModuleQuotient {
        window_dimension: w_coords.len(),
        span_dimension: inside.rank(),
        quotient_dimension: w_coords.len() - inside.rank(),
        contains_one,
    })
}

/// Verdict of [`semi_compatible`].
#[derive(Clone, Debug)]
pub enum SemiCompatibility {
    /// The span of products of kernel elements contains every window element.
    YesUnit,
    /// The span contains `witness · f` for every window element `f`.
    Yes { witness: RingElement },
    UndecidedWithin { window: Window, span_dimension: usize, window_dimension: usize, span_sample: Vec<String> },
}

impl SemiCompatibility {
    pub fn label(&self) -> &'static str {
        match self {
            SemiCompatibility::YesUnit => "YES-UNIT",
            SemiCompatibility::Yes { .. } => "YES",
            SemiCompatibility::UndecidedWithin { .. } => "UNDECIDED-WITHIN",
        }
    }
}

fn field_kernel(v: &VectorField, fs: &[RingElement], cap: i32) -> Result<Vec<RingElement>> {
    let ring = v.ring();
    let mut groups: BTreeMap<i64, Vec<&RingElement>> = BTreeMap::new();
    for f in fs {
        let key = if is_graded(ring) { f.degree(ring.cohomology_weights()).unwrap_or(0) } else { 0 };
        groups.entry(key).or_default().push(f);
    }
    let mut out = Vec::new();
    for group in groups.values() {
        let images: Vec<SparseVec<Monomial>> = group.iter().map(|f| v.apply(f).coordinates(cap)).collect::<Result<_>>()?;
        for k in kernel(&images) {
            out.push(k.iter().fold(RingElement::zero(ring), |acc, (j, c)| acc + group[*j].scale(c)));
        }
    }
    Ok(out)
}

pub fn semi_compatible(vol: &VolumeForm, v: &VectorField, w: &VectorField, params: &TruncationParams) -> Result<SemiCompatibility> {
    if !vol.divergence(v)?.is_zero() || !vol.divergence(w)?.is_zero() {
        return Err(Error::NonzeroDivergence);
    }
    let ring = vol.ring();
    let window = params.window();
    // Factors of a window element may leave the window through negative
    // exponents, so kernels are taken on a larger one.
    let big = window.enlarged(params.slack + params.neg_cap as i64);
    let cap = cap_for(&big) * 2;
    let fs = functions(ring, &window);
    let kernel_source = functions(ring, &big);
    let kv = field_kernel(v, &kernel_source, cap)?;
    let kw = field_kernel(w, &kernel_source, cap)?;
    let weights = ring.cohomology_weights();
    let mut span = GradedSpan::new(ring);
    for a in &kv {
        for b in &kw {
            if is_graded(ring) && a.degree(weights).unwrap_or(0) + b.degree(weights).unwrap_or(0) > 2 * window.max_degree {
                continue;
            }
            span.insert((a * b).coordinates(cap)?)?;
        }
    }
    let wc: Vec<SparseVec<Monomial>> = fs.iter().map(|f| f.coordinates(cap)).collect::<Result<_>>()?;
    let mut all = true;
    for c in &wc {
        all &= span.contains(c)?;
    }
    if all {
        return Ok(SemiCompatibility::YesUnit);
    }
    let inside = span.intersect(&wc)?;
    for g in fs.iter().skip(1) {
        let mut ok = true;
        for f in &fs {
            if !span.contains(&(g * f).coordinates(cap)?)? {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(SemiCompatibility::Yes { witness: g.clone() });
        }
    }
    let mut span_sample: Vec<String> =
        inside.rows().map(|r| RingElement::from_coordinates(ring, r, cap).to_string()).collect();
    span_sample.sort();
    Ok(SemiCompatibility::UndecidedWithin {
        window,
        span_dimension: inside.rank(),
        window_dimension: wc.len(),
        span_sample,
    })
}

/// Verdict of [`lambda2_spanning`].
#[derive(Clone, Debug)]
pub enum Lambda2Verdict {
    /// `Σ multipliers_k · g_k ψ(v_k, w_k) = 1`.
    Yes { generators: Vec<RingElement>, multipliers: Vec<RingElement> },
    NoUpToBound { max_degree: i64 },
}

impl Lambda2Verdict {
    pub fn spans(&self) -> bool {
        matches!(self, Lambda2Verdict::Yes { .. })
    }
}

/// Whether the bivectors `g_k v_k ∧ w_k` generate `Λ²T_xX` at every point of
/// a surface: the ideal generated by the `g_k ψ(v_k, w_k)` must contain 1.
pub fn lambda2_spanning(
    vol: &VolumeForm,
    pairs: &[(VectorField, VectorField, RingElement)],
    max_degree: i64,
) -> Result<Lambda2Verdict> {
    if vol.ring().dimension() != 2 {
        return Err(Error::Unsupported("bivector spanning is implemented for surfaces".into()));
    }
    let generators: Vec<RingElement> =
        pairs.iter().map(|(v, w, g)| Ok(vol.psi_function(v, w)? * g.clone())).collect::<Result<_>>()?;
    Ok(match unit_ideal_certificate(&generators, max_degree) {
        Some(multipliers) => Lambda2Verdict::Yes { generators, multipliers },
        None => Lambda2Verdict::NoUpToBound { max_degree },
    })
}

#[cfg(test)]
mod tests;
