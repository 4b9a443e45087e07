//! Shared fixtures for unit tests.

use crate::exterior::DifferentialForm;
use crate::fields::{make_catalog_volume, VectorField, VolumeForm};
use crate::q;
use crate::random::RandomSource;
use crate::rings::{make_ring, univariate, Ring, RingKind};

pub fn affine(n: usize) -> Ring {
    make_ring(RingKind::AffineSpace { n }).unwrap()
}

pub fn torus(n: usize) -> Ring {
    make_ring(RingKind::Torus { n }).unwrap()
}

/// `uv = z (z - 1) ... (z - d + 1)`
pub fn danielewski(d: i64) -> Ring {
    let mut p = vec![q(1)];
    for r in 0..d {
        p = univariate::mul(&p, &[q(-r), q(1)]);
    }
    make_ring(RingKind::Danielewski { p }).unwrap()
}

pub fn line_complement(k: usize) -> Ring {
    let all = [[1, 0], [0, 1], [1, 1], [1, -1], [1, 2]];
    make_ring(RingKind::LineComplement { lines: all[..k].iter().map(|l| [q(l[0]), q(l[1])]).collect() }).unwrap()
}

pub fn catalog() -> Vec<Ring> {
    vec![affine(2), affine(3), torus(2), danielewski(2), danielewski(3), line_complement(3)]
}

pub fn surfaces() -> Vec<Ring> {
    vec![affine(2), torus(2), danielewski(2), danielewski(3), line_complement(3)]
}

pub use crate::random::small_window;

pub fn random_form(rng: &mut RandomSource, ring: &Ring, k: usize) -> DifferentialForm {
    rng.form(ring, k)
}

pub fn random_field(rng: &mut RandomSource, vol: &VolumeForm) -> VectorField {
    rng.field(vol)
}

pub fn random_divergence_free(rng: &mut RandomSource, vol: &VolumeForm) -> VectorField {
    rng.divergence_free(vol)
}

pub fn volume(ring: &Ring) -> VolumeForm {
    make_catalog_volume(ring).unwrap()
}
