//! Seeded generators for randomized identity checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exterior::{subsets, DifferentialForm};
use crate::fields::{VectorField, VolumeForm};
use crate::rings::{truncated_basis, Ring, RingElement, RingKind, Window};
use crate::Rational;

/// Window used for random coefficients: degrees −2..3, poles up to 2.
pub fn small_window() -> Window {
    Window::range(-2, 3, 2)
}

pub struct RandomSource {
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        RandomSource { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn small_int(&mut self, bound: i64) -> i64 {
        self.rng.gen_range(-bound..=bound)
    }

    pub fn nonzero_rational(&mut self) -> Rational {
        loop {
            let n = self.small_int(5);
            if n != 0 {
                let d = self.rng.gen_range(1..=3i64);
                return Rational::new(n.into(), d.into());
            }
        }
    }

    pub fn index(&mut self, len: usize) -> usize {
        self.rng.gen_range(0..len)
    }

    /// Random element with up to `terms` basis terms from the window.
    pub fn element(&mut self, ring: &Ring, window: &Window, terms: usize) -> RingElement {
        let basis = truncated_basis(ring, window);
        let mut out = RingElement::zero(ring);
        if basis.is_empty() {
            return out;
        }
        for _ in 0..terms {
            let b = &basis.elements[self.index(basis.len())];
            out = out + b.scale(&Rational::from_integer(self.small_int(3).into()));
        }
        out
    }

    pub fn form(&mut self, ring: &Ring, k: usize) -> DifferentialForm {
        let mut out = DifferentialForm::zero(ring, k);
        for w in subsets(ring.coordinates(), k) {
            let f = self.element(ring, &small_window(), 3);
            out = out + DifferentialForm::monomial_form(&f, &w);
        }
        out
    }

    /// A random tangent field: free components, or a combination of the
    /// Jacobian frame on a Danielewski surface.
    pub fn field(&mut self, vol: &VolumeForm) -> VectorField {
        let ring = vol.ring();
        if ring.danielewski_p().is_some() {
            let mut out = VectorField::zero(ring);
            for j in vol.jacobian_frame() {
                out = out + j.mul_fn(&self.element(ring, &Window::upto(2), 2));
            }
            out
        } else {
            let c = (0..ring.coordinates()).map(|_| self.element(ring, &small_window(), 3)).collect();
            VectorField::new(ring, c).expect("free ring")
        }
    }

    /// A random divergence-free field `μ⁻¹(d η)` with `η` an exact-closed
    /// seed, plus on tori a field dual to `dlog x₁`.
    pub fn divergence_free(&mut self, vol: &VolumeForm) -> VectorField {
        let ring = vol.ring();
        let n = ring.dimension();
        let mut closed = DifferentialForm::function(&self.element(ring, &small_window(), 3)).d();
        for _ in 2..n {
            let g = self.element(ring, &Window::upto(2), 2);
            closed = closed.wedge(&DifferentialForm::function(&g).d()).expect("same ring");
        }
        let mut v = vol.mu_inverse(&closed).expect("catalog volume");
        if matches!(ring.kind(), RingKind::Torus { .. }) {
            let x = RingElement::var(ring, 0);
            let mut dlog = DifferentialForm::dx(ring, 0).mul_fn(&x.pow(-1).expect("unit"));
            for i in 1..n - 1 {
                dlog = dlog.wedge(&DifferentialForm::dx(ring, i)).expect("same ring");
            }
            let c = Rational::from_integer(self.small_int(2).into());
            v = v + vol.mu_inverse(&dlog).expect("catalog volume").scale(&c);
        }
        v
    }
}
