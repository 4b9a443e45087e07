use std::time::Instant;

use super::*;
use crate::exterior::parse_form;
use crate::parse::parse_element;
use crate::q;
use crate::testing::*;

fn field(ring: &Ring, comps: &[(&str, &str)]) -> VectorField {
    VectorField::parse(ring, comps).unwrap()
}

fn in_span(l0: &TruncatedL0, v: &VectorField) -> bool {
    let coords = |f: &VectorField| -> SparseVec<(usize, Monomial)> {
        let mut out = SparseVec::new();
        for (i, c) in f.components().iter().enumerate() {
            for (m, x) in c.coordinates(12).unwrap() {
                out.insert((i, m), x);
            }
        }
        out
    };
    let ech = Echelon::from_vectors(l0.basis.iter().map(coords).collect::<Vec<_>>().iter());
    ech.contains(&coords(v))
}

#[test]
fn l0_examples() {
    let a2 = affine(2);
    let vol = volume(&a2);
    let l0 = l0_basis(&vol, &Window::upto(1)).unwrap();
    assert_eq!(l0.tangent_dimension, 6);
    assert_eq!(l0.dimension(), 5);
    for comps in [vec![("x", "1")], vec![("y", "1")], vec![("x", "x"), ("y", "-y")], vec![("x", "y")], vec![("y", "x")]] {
        assert!(in_span(&l0, &field(&a2, &comps)));
    }
    let t2 = torus(2);
    let vol = volume(&t2);
    let l0 = l0_basis(&vol, &Window::upto(1).with_neg_cap(1)).unwrap();
    assert!(in_span(&l0, &field(&t2, &[("x", "x")])));
    assert!(in_span(&l0, &field(&t2, &[("y", "y")])));
    let s = danielewski(3);
    let vol = volume(&s);
    let l0 = l0_basis(&vol, &Window::upto(4)).unwrap();
    assert!(in_span(&l0, &field(&s, &[("z", "u"), ("v", "3*z^2 - 6*z + 2")])));
    assert!(in_span(&l0, &field(&s, &[("u", "u"), ("v", "-v")])));
}

#[test]
fn jacobian_examples() {
    let params = TruncationParams::default();
    let a2 = affine(2);
    let vol = volume(&a2);
    match is_jacobian(&vol, &field(&a2, &[("x", "1")]), &params).unwrap() {
        JacobianVerdict::Jacobian { potential } => {
            assert_eq!(DifferentialForm::function(&potential).d(), parse_form("dy", &a2).unwrap())
        }
        other => panic!("{other:?}"),
    }
    let g = parse_element("x^3*y - y^2", &a2).unwrap();
    let v = vol.mu_inverse(&DifferentialForm::function(&g).d()).unwrap();
    assert!(is_jacobian(&vol, &v, &params).unwrap().is_jacobian());
    let t2 = torus(2);
    let vol = volume(&t2);
    assert!(!is_jacobian(&vol, &field(&t2, &[("x", "x")]), &params).unwrap().is_jacobian());
    assert!(matches!(is_jacobian(&vol, &field(&t2, &[("x", "1")]), &params), Err(Error::NonzeroDivergence)));
}

#[test]
fn commutator_image_examples() {
    let a2 = affine(2);
    let vol = volume(&a2);
    let l0 = l0_basis(&vol, &Window::upto(1)).unwrap();
    let bound = PairBound::for_window(&Window::upto(4), 0);
    let image = commutator_image(&l0, &vol, &bound).unwrap();
    assert!(image.dimension() > 0);
    for g in &image.generators {
        // exact, and μ⁻¹ of it is divergence-free
        assert!(g.d().is_zero());
        assert!(vol.divergence(&vol.mu_inverse(g).unwrap()).unwrap().is_zero());
    }
    let t2 = torus(2);
    let vol = volume(&t2);
    let p = vol.psi_function(&field(&t2, &[("x", "x")]), &field(&t2, &[("y", "y")])).unwrap();
    assert!(DifferentialForm::function(&p).d().is_zero());
}

#[test]
fn surface_theorem_values() {
    let cases = vec![(affine(2), 0), (torus(2), 0), (danielewski(2), 0), (danielewski(3), 1), (line_complement(3), 0)];
    for (ring, expected) in cases {
        let t = Instant::now();
        let vol = volume(&ring);
        let r = surface_theorem(&vol, &TruncationParams::default(), &default_lie_params()).unwrap();
        eprintln!("{}: {:?} in {:?}", ring.describe(), r, t.elapsed());
        assert_eq!(r.formula_value, expected, "{}", ring.describe());
        assert!(r.formula_agrees, "{}", ring.describe());
        assert!(r.l0_mod_lj_agrees, "{}", ring.describe());
    }
}

#[test]
fn module_quotient_matches_top_cohomology() {
    let cases = [
        (affine(2), 0, true),
        (torus(2), 1, false),
        (danielewski(2), 1, false),
        (danielewski(3), 2, false),
        (line_complement(3), 2, true),
    ];
    for (ring, h2, omega_exact) in cases {
        let t = Instant::now();
        let vol = volume(&ring);
        let m = l0_module_quotient(&vol, &default_lie_params()).unwrap();
        eprintln!("{}: {:?} in {:?}", ring.describe(), m, t.elapsed());
        assert_eq!(m.quotient_dimension, h2, "{}", ring.describe());
        assert_eq!(m.contains_one, omega_exact, "{}", ring.describe());
    }
}

#[test]
fn semi_compatible_examples() {
    let params = default_lie_params();
    let a2 = affine(2);
    let vol = volume(&a2);
    let dx = field(&a2, &[("x", "1")]);
    let dy = field(&a2, &[("y", "1")]);
    assert!(matches!(semi_compatible(&vol, &dx, &dy, &params).unwrap(), SemiCompatibility::YesUnit));
    match semi_compatible(&vol, &dx, &dx, &params).unwrap() {
        SemiCompatibility::UndecidedWithin { span_dimension, span_sample, .. } => {
            assert_eq!(span_dimension, 5);
            assert!(span_sample.iter().all(|s| !s.contains('x')));
        }
        other => panic!("{other:?}"),
    }
    let t2 = torus(2);
    let vol = volume(&t2);
    let ex = field(&t2, &[("x", "x")]);
    let ey = field(&t2, &[("y", "y")]);
    assert!(matches!(semi_compatible(&vol, &ex, &ey, &params).unwrap(), SemiCompatibility::YesUnit));
}

#[test]
fn lambda2_spanning_examples() {
    let a2 = affine(2);
    let vol = volume(&a2);
    let one = RingElement::one(&a2);
    let pairs = [(field(&a2, &[("x", "1")]), field(&a2, &[("y", "1")]), one.clone())];
    assert!(lambda2_spanning(&vol, &pairs, 2).unwrap().spans());
    let pairs = [(field(&a2, &[("y", "x")]), field(&a2, &[("x", "y")]), one)];
    assert!(!lambda2_spanning(&vol, &pairs, 3).unwrap().spans());
    let t2 = torus(2);
    let vol = volume(&t2);
    let pairs = [(field(&t2, &[("x", "x")]), field(&t2, &[("y", "y")]), RingElement::one(&t2))];
    assert!(lambda2_spanning(&vol, &pairs, 1).unwrap().spans());
    let _ = q(1);
}

