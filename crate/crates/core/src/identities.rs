//! Seeded randomized checks of the calculus identities on a variety.

use serde::Serialize;

use crate::exterior::DifferentialForm;
use crate::fields::{VectorField, VolumeForm};
use crate::random::{small_window, RandomSource};
use crate::Result;

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub seed: u64,
    pub cases: usize,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.failed == 0 && c.passed == self.cases)
    }
}

/// `L_v η` from the derivation rule on `f dx_I`: `v(f) dx_I` plus `f` times
/// the sum over slots of `dx_I` with `dx_i` replaced by `d(v(x_i))`.
pub fn lie_derivative_by_slots(v: &VectorField, eta: &DifferentialForm) -> DifferentialForm {
    let ring = v.ring();
    let mut out = DifferentialForm::zero(ring, eta.degree());
    for (w, c) in eta.terms() {
        out = out + DifferentialForm::monomial_form(&v.apply(c), w);
        for slot in 0..w.len() {
            let mut piece = DifferentialForm::function(c);
            for (pos, &i) in w.iter().enumerate() {
                let factor = if pos == slot {
                    DifferentialForm::function(&v.apply(&crate::rings::RingElement::var(ring, i))).d()
                } else {
                    DifferentialForm::dx(ring, i)
                };
                piece = piece.wedge(&factor).expect("same ring");
            }
            out = out + piece;
        }
    }
    out
}

const NAMES: [&str; 8] = ["cartan", "divergence", "div0", "comm", "bracket_divergence", "jacobi", "d_squared", "leibniz"];

fn run_case(rng: &mut RandomSource, vol: &VolumeForm) -> Result<[bool; 8]> {
    let ring = vol.ring();
    let n = ring.dimension();
    let v = rng.field(vol);
    let w = rng.field(vol);
    let u = rng.field(vol);
    let k = rng.index(n + 1);
    let eta = rng.form(ring, k.min(ring.coordinates()));

    let cartan = v.lie_derivative(&eta) == lie_derivative_by_slots(&v, &eta);

    let div = vol.divergence(&v)?;
    let lvw = v.lie_derivative(vol.form());
    let h = rng.element(ring, &small_window(), 2);
    let divergence = lvw == vol.form().mul_fn(&div)
        && vol.density(&lvw)? == div
        && (h.is_zero() || !vol.form().mul_fn(&h).is_zero());

    let dmu = vol.mu(&v)?.d();
    let a = rng.divergence_free(vol);
    let b = rng.divergence_free(vol);
    let div0 = div.is_zero() == dmu.is_zero()
        && dmu == vol.form().mul_fn(&div)
        && vol.divergence(&a)?.is_zero()
        && vol.mu(&a)?.d().is_zero();

    let comm = vol.mu(&a.bracket(&b)?)? == vol.psi(&a, &b)?.d();

    let vw = v.bracket(&w)?;
    let bracket_divergence =
        vol.divergence(&vw)? == v.apply(&vol.divergence(&w)?) - w.apply(&vol.divergence(&v)?);

    let jacobi = (v.bracket(&w.bracket(&u)?)? + w.bracket(&u.bracket(&v)?)? + u.bracket(&v.bracket(&w)?)?).is_zero();

    let d_squared = eta.d().d().is_zero();

    let j = rng.index(n.min(2));
    let beta = rng.form(ring, j);
    let sign = if k.is_multiple_of(2) { crate::q(1) } else { crate::q(-1) };
    let leibniz = match eta.wedge(&beta) {
        Ok(ab) => ab.d() == eta.d().wedge(&beta)? + eta.wedge(&beta.d())?.scale(&sign),
        Err(_) => true,
    };
    Ok([cartan, divergence, div0, comm, bracket_divergence, jacobi, d_squared, leibniz])
}

pub fn run_identity_suite(vol: &VolumeForm, seed: u64, cases: usize) -> Result<IdentityReport> {
    let mut rng = RandomSource::new(seed);
    let mut passed = [0usize; 8];
    for _ in 0..cases {
        for (i, ok) in run_case(&mut rng, vol)?.into_iter().enumerate() {
            passed[i] += usize::from(ok);
        }
    }
    let checks = NAMES
        .iter()
        .zip(passed)
        .map(|(&name, p)| IdentityCheck { name, passed: p, failed: cases - p })
        .collect();
    Ok(IdentityReport { seed, cases, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{catalog, volume};

    #[test]
    fn suite_passes_on_catalog() {
        for ring in catalog() {
            let t = std::time::Instant::now();
            let r = run_identity_suite(&volume(&ring), 7, 10).unwrap();
            eprintln!("{}: {:?} {:?}", ring.describe(), r.checks, t.elapsed());
            assert!(r.all_passed(), "{}", ring.describe());
        }
    }
}
