//! Vector fields as derivations of the coordinate ring, contraction and
//! Lie derivatives of forms, certified volume forms, divergence and the
//! isomorphisms `μ(v) = i_v ω` and `ψ(v ∧ w) = i_v i_w ω`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{danielewski_volume_representative, subsets, DifferentialForm};
use crate::linalg::{SparseVec, Solver};
use crate::parse::parse_element;
use crate::rings::{truncated_basis, univariate, Monomial, Ring, RingElement, RingKind, Terms, Window};
use crate::Rational;

/// A derivation given by its values on the coordinates. Always tangent.
#[derive(Clone)]
pub struct VectorField {
    ring: Ring,
    components: Vec<RingElement>,
}

impl VectorField {
    pub fn new(ring: &Ring, components: Vec<RingElement>) -> Result<Self> {
        if components.len() != ring.coordinates() {
            return Err(Error::InvalidDescriptor(format!(
                "expected {} components, got {}",
                ring.coordinates(),
                components.len()
            )));
        }
        if components.iter().any(|c| !c.ring().same_as(ring)) {
            return Err(Error::MixedRings);
        }
        let v = VectorField { ring: ring.clone(), components };
        let residue = v.relation_residue();
        if !residue.is_zero() {
            return Err(Error::NotTangent(residue.to_string()));
        }
        Ok(v)
    }

    pub fn zero(ring: &Ring) -> Self {
        VectorField { ring: ring.clone(), components: vec![RingElement::zero(ring); ring.coordinates()] }
    }

    /// `∂/∂x_i`; fails on a Danielewski surface where it is not tangent.
    pub fn coordinate(ring: &Ring, i: usize) -> Result<Self> {
        let mut c = vec![RingElement::zero(ring); ring.coordinates()];
        c[i] = RingElement::one(ring);
        Self::new(ring, c)
    }

    /// Parses components given as `(variable, polynomial)` pairs; missing
    /// variables get zero.
    /// Parses `var=expr;var=expr`; omitted variables get component 0.
    pub fn parse_spec(ring: &Ring, src: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        let mut pos = 0;
        for part in src.split(';') {
            if !part.trim().is_empty() {
                let (var, expr) = part
                    .split_once('=')
                    .ok_or_else(|| Error::Parse { pos, msg: format!("expected `var=expr`, got `{}`", part.trim()) })?;
                pairs.push((var.trim(), expr.trim()));
            }
            pos += part.len() + 1;
        }
        Self::parse(ring, &pairs)
    }

    pub fn parse(ring: &Ring, components: &[(&str, &str)]) -> Result<Self> {
        let mut c = vec![RingElement::zero(ring); ring.coordinates()];
        for (name, src) in components {
            let i = ring
                .var_index(name)
                .filter(|&i| i < ring.coordinates())
                .ok_or_else(|| Error::InvalidDescriptor(format!("`{name}` is not a coordinate")))?;
            c[i] = parse_element(src, ring)?;
        }
        Self::new(ring, c)
    }

    fn relation_residue(&self) -> RingElement {
        match self.ring.danielewski_p() {
            Some(p) => {
                let dp = z_poly(&self.ring, &univariate::derivative(p));
                let u = RingElement::var(&self.ring, 0);
                let v = RingElement::var(&self.ring, 1);
                &self.components[0] * &v + &u * &self.components[1] - dp * self.components[2].clone()
            }
            None => RingElement::zero(&self.ring),
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn components(&self) -> &[RingElement] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &RingElement {
        &self.components[i]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(RingElement::is_zero)
    }

    /// `v(f)`.
    pub fn apply(&self, f: &RingElement) -> RingElement {
        let mut out = RingElement::zero(&self.ring);
        for (i, c) in self.components.iter().enumerate() {
            if !c.is_zero() {
                out = out + c * &f.partial(i);
            }
        }
        out
    }

    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let components = (0..self.ring.coordinates())
            .map(|i| self.apply(&other.components[i]) - other.apply(&self.components[i]))
            .collect();
        Ok(VectorField { ring: self.ring.clone(), components })
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ring.same_as(&other.ring) {
            Ok(())
        } else {
            Err(Error::MixedRings)
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        VectorField { ring: self.ring.clone(), components: self.components.iter().map(|f| f.scale(c)).collect() }
    }

    pub fn mul_fn(&self, g: &RingElement) -> Self {
        VectorField { ring: self.ring.clone(), components: self.components.iter().map(|f| f * g).collect() }
    }

    /// `i_v η` with `i_v(dx_{i_1} ∧ … ∧ dx_{i_k}) = Σ_j (−1)^{j−1} v(x_{i_j}) (omit j)`.
    pub fn contract(&self, eta: &DifferentialForm) -> Result<DifferentialForm> {
        if eta.degree() == 0 {
            return Err(Error::Degree("cannot contract a function".into()));
        }
        if !eta.ring().same_as(&self.ring) {
            return Err(Error::MixedRings);
        }
        let mut out = DifferentialForm::zero(&self.ring, eta.degree() - 1);
        for (w, f) in eta.terms() {
            for (j, &i) in w.iter().enumerate() {
                let c = &self.components[i];
                if c.is_zero() {
                    continue;
                }
                let mut rest = w.clone();
                rest.remove(j);
                let mut g = f * c;
                if j % 2 == 1 {
                    g = -g;
                }
                out = out + DifferentialForm::monomial_form(&g, &rest);
            }
        }
        Ok(out)
    }

    /// `L_v η = d i_v η + i_v dη`.
    pub fn lie_derivative(&self, eta: &DifferentialForm) -> DifferentialForm {
        if eta.degree() == 0 {
            return DifferentialForm::function(&self.apply(&eta.coefficient(&[])));
        }
        let a = self.contract(eta).expect("positive degree").d();
        let b = self.contract(&eta.d()).expect("positive degree");
        a + b
    }

    pub fn to_json(&self) -> serde_json::Value {
        let components: BTreeMap<String, String> = self
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| (self.ring.variables()[i].clone(), c.to_string()))
            .collect();
        serde_json::json!({ "components": components })
    }

    pub fn from_json(ring: &Ring, value: &serde_json::Value) -> Result<Self> {
        let raw: FieldJson = serde_json::from_value(value.clone())?;
        let pairs: Vec<(&str, &str)> = raw.components.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
        Self::parse(ring, &pairs)
    }
}

#[derive(Serialize, Deserialize)]
struct FieldJson {
    components: BTreeMap<String, String>,
}

impl PartialEq for VectorField {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_as(&other.ring) && self.components == other.components
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.components.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*d/d{}", self.ring.variables()[i])?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for VectorField {
    type Output = VectorField;
    fn add(self, rhs: Self) -> Self {
        assert!(self.ring.same_as(&rhs.ring), "mixed rings");
        let components = self.components.into_iter().zip(rhs.components).map(|(a, b)| a + b).collect();
        VectorField { ring: self.ring, components }
    }
}

impl Neg for VectorField {
    type Output = VectorField;
    fn neg(self) -> Self {
        self.scale(&-Rational::one())
    }
}

impl Sub for VectorField {
    type Output = VectorField;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

fn z_poly(ring: &Ring, p: &[Rational]) -> RingElement {
    let t: Terms = p
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (Monomial(vec![0, 0, k as i32]), c.clone()))
        .collect();
    RingElement::from_terms(ring, t).expect("polynomial in z")
}

/// `i_{f_1} i_{f_2} … i_{f_k} η`.
pub fn contract_all(fields: &[VectorField], eta: &DifferentialForm) -> Result<DifferentialForm> {
    let mut out = eta.clone();
    for f in fields.iter().rev() {
        out = f.contract(&out)?;
    }
    Ok(out)
}

/// One summand `coefficient · i_{f_1} … i_{f_n} ω` of a volume certificate.
#[derive(Clone, Debug)]
pub struct CertificateTerm {
    pub fields: Vec<VectorField>,
    pub coefficient: RingElement,
}

/// A top-degree form with a proof that it generates the top forms freely:
/// the certificate terms sum to the constant 1.
#[derive(Clone, Debug)]
pub struct VolumeForm {
    form: DifferentialForm,
    certificate: Vec<CertificateTerm>,
    frame: Vec<VectorField>,
}

impl VolumeForm {
    pub fn form(&self) -> &DifferentialForm {
        &self.form
    }

    pub fn ring(&self) -> &Ring {
        self.form.ring()
    }

    pub fn certificate(&self) -> &[CertificateTerm] {
        &self.certificate
    }

    /// Rechecks the certificate and the Jacobian frame exactly.
    pub fn verify(&self) -> Result<()> {
        let mut total = RingElement::zero(self.ring());
        for t in &self.certificate {
            let c = contract_all(&t.fields, &self.form)?;
            total = total + c.coefficient(&[]) * t.coefficient.clone();
        }
        if !total.is_one() {
            return Err(Error::BrokenCertificate(format!("certificate sums to {total}, not 1")));
        }
        for (i, j) in self.frame.iter().enumerate() {
            if self.mu(j)? != DifferentialForm::dx(self.ring(), i) {
                return Err(Error::BrokenCertificate(format!("frame field {i} does not map to a coordinate differential")));
            }
        }
        Ok(())
    }

    /// `μ(v) = i_v ω`.
    pub fn mu(&self, v: &VectorField) -> Result<DifferentialForm> {
        v.contract(&self.form)
    }

    /// The field `J_i` with `μ(J_i) = dx_i`.
    pub fn jacobian_frame(&self) -> &[VectorField] {
        &self.frame
    }

    /// `μ⁻¹(dx_I)` over all `(n−1)`-subsets `I` of the coordinates; these
    /// Jacobian fields span the tangent space everywhere.
    pub fn jacobian_generators(&self) -> Result<Vec<VectorField>> {
        let ring = self.ring();
        let n = ring.dimension();
        subsets(ring.coordinates(), n - 1)
            .iter()
            .map(|w| self.mu_inverse(&DifferentialForm::monomial_form(&RingElement::one(ring), w)))
            .collect()
    }

    /// The unique field with `i_v ω = η`.
    pub fn mu_inverse(&self, eta: &DifferentialForm) -> Result<VectorField> {
        let ring = self.ring();
        let n = ring.dimension();
        if eta.degree() + 1 != n {
            return Err(Error::Degree(format!("μ⁻¹ expects a {}-form, got a {}-form", n - 1, eta.degree())));
        }
        let components: Vec<RingElement> = if n == 2 {
            // v(x_i) = i_v i_{J_i} ω = −i_{J_i} η
            self.frame.iter().map(|j| -j.contract(eta).expect("1-form").coefficient(&[])).collect()
        } else {
            let all: Vec<usize> = (0..n).collect();
            let c = self.form.coefficient(&all).inverse().ok_or(Error::BrokenCertificate("volume coefficient is not a unit".into()))?;
            (0..n)
                .map(|j| {
                    let mut rest = all.clone();
                    rest.remove(j);
                    let g = eta.coefficient(&rest) * c.clone();
                    if j % 2 == 1 {
                        -g
                    } else {
                        g
                    }
                })
                .collect()
        };
        let v = VectorField::new(ring, components)?;
        if self.mu(&v)? != *eta {
            return Err(Error::Inconsistent("μ(μ⁻¹(η)) differs from η".into()));
        }
        Ok(v)
    }

    /// `ψ(v ∧ w) = i_v i_w ω`, an `(n−2)`-form.
    pub fn psi(&self, v: &VectorField, w: &VectorField) -> Result<DifferentialForm> {
        v.contract(&w.contract(&self.form)?)
    }

    /// `ψ(v ∧ w)` as a function on a surface.
    pub fn psi_function(&self, v: &VectorField, w: &VectorField) -> Result<RingElement> {
        let f = self.psi(v, w)?;
        if f.degree() != 0 {
            return Err(Error::Degree("ψ is a function only on surfaces".into()));
        }
        Ok(f.coefficient(&[]))
    }

    /// The function `q` with `L_v ω = q ω`.
    pub fn divergence(&self, v: &VectorField) -> Result<RingElement> {
        let l = v.lie_derivative(&self.form);
        let mut q = RingElement::zero(self.ring());
        for t in &self.certificate {
            q = q + contract_all(&t.fields, &l)?.coefficient(&[]) * t.coefficient.clone();
        }
        if self.form.mul_fn(&q) != l {
            return Err(Error::BrokenCertificate("L_v ω is not a multiple of ω".into()));
        }
        Ok(q)
    }

    /// The function `q` with `η = q ω` for a top-degree form.
    pub fn density(&self, eta: &DifferentialForm) -> Result<RingElement> {
        let mut q = RingElement::zero(self.ring());
        for t in &self.certificate {
            q = q + contract_all(&t.fields, eta)?.coefficient(&[]) * t.coefficient.clone();
        }
        if self.form.mul_fn(&q) != *eta {
            return Err(Error::BrokenCertificate("form is not a multiple of ω".into()));
        }
        Ok(q)
    }
}

/// The standard volume form of a catalog variety with its certificate.
pub fn make_catalog_volume(ring: &Ring) -> Result<VolumeForm> {
    let n = ring.dimension();
    let all: Vec<usize> = (0..n).collect();
    let vol = match ring.kind() {
        RingKind::Danielewski { p } => {
            let dp = univariate::derivative(p);
            let (_, a, b) = univariate::ext_gcd(p, &dp);
            let form = danielewski_volume_representative(ring);
            let pp = z_poly(ring, &dp);
            let u = RingElement::var(ring, 0);
            let v = RingElement::var(ring, 1);
            let zero = RingElement::zero(ring);
            let field = |c: [RingElement; 3]| VectorField::new(ring, c.to_vec());
            let ju = field([zero.clone(), -pp.clone(), -u.clone()])?;
            let jv = field([pp.clone(), zero.clone(), v.clone()])?;
            let jz = field([u, -v.clone(), zero])?;
            // ψ(J_u, J_v) = −p', ψ(J_u, J_z) = −u and a p + b p' = 1.
            let certificate = vec![
                CertificateTerm { fields: vec![ju.clone(), jv.clone()], coefficient: -z_poly(ring, &b) },
                CertificateTerm { fields: vec![ju.clone(), jz.clone()], coefficient: -(z_poly(ring, &a) * v) },
            ];
            VolumeForm { form, certificate, frame: vec![ju, jv, jz] }
        }
        _ => {
            let mut c = RingElement::one(ring);
            let mut fields = Vec::new();
            for i in 0..n {
                let mut f = VectorField::coordinate(ring, i)?;
                if matches!(ring.kind(), RingKind::Torus { .. }) {
                    let x = RingElement::var(ring, i);
                    c = c * x.pow(-1)?;
                    f = f.mul_fn(&x);
                }
                fields.push(f);
            }
            let form = DifferentialForm::monomial_form(&c, &all);
            let value = contract_all(&fields, &form)?.coefficient(&[]);
            let coefficient = value.inverse().ok_or(Error::CertificateSearch("frame contraction is not a unit".into()))?;
            let mut vol = VolumeForm { form, certificate: vec![CertificateTerm { fields, coefficient }], frame: Vec::new() };
            if n == 2 {
                vol.frame = (0..n)
                    .map(|i| free_mu_inverse(&vol, &DifferentialForm::dx(ring, i)))
                    .collect::<Result<_>>()?;
            }
            vol
        }
    };
    vol.verify()?;
    Ok(vol)
}

fn free_mu_inverse(vol: &VolumeForm, eta: &DifferentialForm) -> Result<VectorField> {
    let ring = vol.ring();
    let c = vol.form.coefficient(&[0, 1]).inverse().ok_or(Error::BrokenCertificate("volume coefficient is not a unit".into()))?;
    VectorField::new(ring, vec![eta.coefficient(&[1]) * c.clone(), -(eta.coefficient(&[0]) * c)])
}

/// Multipliers `c_i` with `Σ c_i g_i = 1`, searched among elements of
/// degree at most `D` for `D = 0, 1, …, max_degree`.
pub fn unit_ideal_certificate(gens: &[RingElement], max_degree: i64) -> Option<Vec<RingElement>> {
    let ring = gens.first()?.ring().clone();
    let one = RingElement::one(&ring);
    for d in 0..=max_degree {
        let window = Window::upto(d).with_neg_cap(d.min(3) as i32);
        let basis = truncated_basis(&ring, &window).elements;
        let mut products = Vec::new();
        let mut labels = Vec::new();
        for (gi, g) in gens.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            for b in &basis {
                products.push(b * g);
                labels.push((gi, b.clone()));
            }
        }
        let cap = products.iter().flat_map(|p| ring.pole_orders(p.terms())).max().unwrap_or(0).max(0) + 1;
        let images: Vec<SparseVec<Monomial>> = products.iter().map(|p| p.coordinates(cap).expect("within cap")).collect();
        let solver = Solver::new(&images);
        if let Some(sol) = solver.solve(&one.coordinates(cap).expect("constant")) {
            let mut mult = vec![RingElement::zero(&ring); gens.len()];
            for (j, c) in sol {
                let (gi, b) = &labels[j];
                mult[*gi] = mult[*gi].clone() + b.scale(&c);
            }
            let check = gens.iter().zip(&mult).fold(RingElement::zero(&ring), |acc, (g, c)| acc + g * c);
            if check.is_one() {
                return Some(mult);
            }
        }
    }
    None
}

/// Outcome of [`flexibility_check`].
#[derive(Clone, Debug)]
pub enum Flexibility {
    /// The maximal minors of the component matrix generate the unit ideal.
    Flexible { minors: Vec<RingElement>, multipliers: Vec<RingElement> },
    NotWithinBound { max_degree: i64 },
}

impl Flexibility {
    pub fn is_flexible(&self) -> bool {
        matches!(self, Flexibility::Flexible { .. })
    }
}

/// Maximal minors (size = dimension of the variety) of the matrix whose rows
/// are the components of `fields`.
pub fn maximal_minors(fields: &[VectorField]) -> Vec<RingElement> {
    let Some(first) = fields.first() else { return Vec::new() };
    let ring = first.ring();
    let n = ring.dimension();
    let mut out = Vec::new();
    for rows in subsets(fields.len(), n) {
        for cols in subsets(ring.coordinates(), n) {
            let m: Vec<Vec<RingElement>> =
                rows.iter().map(|&r| cols.iter().map(|&c| fields[r].components[c].clone()).collect()).collect();
            let det = determinant(ring, &m);
            if !det.is_zero() {
                out.push(det);
            }
        }
    }
    out
}

fn determinant(ring: &Ring, m: &[Vec<RingElement>]) -> RingElement {
    let n = m.len();
    if n == 0 {
        return RingElement::one(ring);
    }
    let mut out = RingElement::zero(ring);
    for j in 0..n {
        let minor: Vec<Vec<RingElement>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect()).collect();
        let term = &m[0][j] * &determinant(ring, &minor);
        out = if j % 2 == 0 { out + term } else { out - term };
    }
    out
}

/// Whether the fields span the tangent space everywhere, certified by a
/// combination of maximal minors equal to 1.
pub fn flexibility_check(fields: &[VectorField], max_degree: i64) -> Result<Flexibility> {
    if let Some(f) = fields.first() {
        if fields.iter().any(|g| !g.ring.same_as(&f.ring)) {
            return Err(Error::MixedRings);
        }
    }
    let minors = maximal_minors(fields);
    Ok(match unit_ideal_certificate(&minors, max_degree) {
        Some(multipliers) => Flexibility::Flexible { minors, multipliers },
        None => Flexibility::NotWithinBound { max_degree },
    })
}
