use num::{One, Zero};
use proptest::prelude::*;

use super::*;
use crate::parse::parse_element;
use crate::random::RandomSource;
use crate::{q, Error, Rational};

fn qs(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&c| q(c)).collect()
}

fn dan3() -> Ring {
    make_ring(RingKind::Danielewski { p: qs(&[0, 2, -3, 1]) }).unwrap()
}

fn el(s: &str, r: &Ring) -> RingElement {
    parse_element(s, r).unwrap()
}

#[test]
fn affine_plane_presentation() {
    let r = make_ring(RingKind::AffineSpace { n: 2 }).unwrap();
    assert_eq!(r.variables(), &["x".to_string(), "y".to_string()]);
    assert!(r.relations().is_empty());
    assert!((0..2).all(|i| !r.is_inverted(i)));
}

#[test]
fn danielewski_relation_rewrites_uv() {
    let r = dan3();
    assert_eq!(r.relations().len(), 1);
    assert_eq!(el("u*v", &r), el("z^3 - 3*z^2 + 2*z", &r));
    assert_eq!(el("u*v", &r).to_string(), "z^3 - 3*z^2 + 2*z");
}

#[test]
fn repeated_root_is_rejected() {
    let err = make_ring(RingKind::Danielewski { p: qs(&[0, 0, 1]) }).unwrap_err();
    assert!(matches!(err, Error::SingularVariety(_)));
}

#[test]
fn proportional_lines_are_rejected() {
    let err = make_ring(RingKind::LineComplement { lines: vec![[q(1), q(2)], [q(2), q(4)]] }).unwrap_err();
    assert!(matches!(err, Error::InvalidDescriptor(_)));
}

#[test]
fn u2v_reduces_to_u_times_p() {
    let r = dan3();
    let lhs = el("u^2*v", &r);
    assert_eq!(lhs, el("u*(z^3 - 3*z^2 + 2*z)", &r));
    // Oracle: on the surface v = p(z)/u, so both sides agree pointwise.
    let mut rs = RandomSource::new(11);
    for _ in 0..20 {
        let u0 = rs.nonzero_rational();
        let z0 = Rational::from_integer(rs.small_int(7).into());
        let v0 = univariate::eval(&qs(&[0, 2, -3, 1]), &z0) / &u0;
        let pt = [u0.clone(), v0.clone(), z0.clone()];
        assert_eq!(lhs.eval(&pt).unwrap(), &u0 * &u0 * &v0);
    }
}

#[test]
fn torus_units_cancel() {
    let r = make_ring(RingKind::Torus { n: 2 }).unwrap();
    assert!(el("x*x^-1", &r).is_one());
    assert_eq!(el("x^-1", &r).partial(0), el("-x^-2", &r));
}

#[test]
fn negative_power_of_polynomial_variable() {
    let r = make_ring(RingKind::AffineSpace { n: 2 }).unwrap();
    assert!(matches!(parse_element("x^-1", &r), Err(Error::NegativePower(_))));
    let raw: Terms = [(Monomial(vec![-1, 0]), Rational::one())].into_iter().collect();
    assert!(matches!(RingElement::from_terms(&r, raw), Err(Error::NegativePower(_))));
}

#[test]
fn mixed_rings_are_rejected() {
    let a = RingElement::one(&make_ring(RingKind::AffineSpace { n: 2 }).unwrap());
    let b = RingElement::one(&make_ring(RingKind::Torus { n: 2 }).unwrap());
    assert!(matches!(a.checked_add(&b), Err(Error::MixedRings)));
    assert!(matches!(a.checked_mul(&b), Err(Error::MixedRings)));
}

#[test]
fn derivatives() {
    let r = dan3();
    assert_eq!(el("z^3 - 3*z^2 + 2*z", &r).partial(2), el("3*z^2 - 6*z + 2", &r));
    let sq = el("(u + v)^2", &r);
    assert_eq!(sq, el("u^2 + v^2 + 2*(z^3 - 3*z^2 + 2*z)", &r));
}

#[test]
fn line_complement_fractions() {
    let r = make_ring(RingKind::LineComplement { lines: vec![[q(1), q(0)], [q(0), q(1)], [q(1), q(1)]] }).unwrap();
    assert!(el("l3 * l3^-1", &r).is_one());
    let a = el("1/(x*y)", &r);
    let b = el("l1^-1 * l2^-1", &r);
    assert_eq!(a, b);
    // 1/(x y) - 1/(x (x+y)) = 1/(y (x+y))
    assert_eq!(el("1/(x*y) - 1/(x*l3)", &r), el("1/(y*l3)", &r));
    // d/dx of 1/(x+y) is -1/(x+y)^2
    assert_eq!(el("l3^-1", &r).partial(0), el("-l3^-2", &r));
    let inv = el("2*x*l3", &r).inverse().unwrap();
    assert!((inv * el("2*x*l3", &r)).is_one());
}

#[test]
fn truncated_bases() {
    let a2 = make_ring(RingKind::AffineSpace { n: 2 }).unwrap();
    let b = truncated_basis(&a2, &Window::range(0, 1, 0));
    assert_eq!(b.len(), 3);
    let d = dan3();
    let b = truncated_basis(&d, &Window::range(0, 2, 0));
    let names: Vec<String> = b.elements.iter().map(|e| e.to_string()).collect();
    assert_eq!(b.len(), 9, "{names:?}");
    for expect in ["1", "z", "z^2", "u", "v", "u*z", "v*z", "u^2", "v^2"] {
        assert!(names.contains(&expect.to_string()), "{expect} missing from {names:?}");
    }
    let t1 = make_ring(RingKind::Torus { n: 1 }).unwrap();
    let b = truncated_basis(&t1, &Window::range(-1, 1, 1));
    let names: Vec<String> = b.elements.iter().map(|e| e.to_string()).collect();
    assert_eq!(names, vec!["x^-1", "1", "x"]);
}

#[test]
fn line_complement_coordinates_round_trip() {
    let r = make_ring(RingKind::LineComplement { lines: vec![[q(1), q(0)], [q(0), q(1)], [q(1), q(-1)]] }).unwrap();
    let e = el("x/(y*l3^2) + 3 - y^2/l1", &r);
    let c = e.coordinates(3).unwrap();
    assert_eq!(RingElement::from_coordinates(&r, &c, 3), e);
    assert!(e.coordinates(1).is_err());
}

fn catalog() -> Vec<Ring> {
    vec![
        make_ring(RingKind::AffineSpace { n: 2 }).unwrap(),
        make_ring(RingKind::Torus { n: 2 }).unwrap(),
        dan3(),
        make_ring(RingKind::LineComplement { lines: vec![[q(1), q(0)], [q(0), q(1)], [q(1), q(1)]] }).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn ring_axioms_and_idempotence(seed in any::<u64>(), which in 0usize..4) {
        let r = &catalog()[which];
        let mut rs = RandomSource::new(seed);
        let w = Window::upto(3).with_neg_cap(1);
        let a = rs.element(r, &w, 3);
        let b = rs.element(r, &w, 3);
        let c = rs.element(r, &w, 3);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        let again = RingElement::from_terms(r, a.terms().clone()).unwrap();
        prop_assert_eq!(again, a.clone());
        // Raw partials are only derivations of free rings; quotient rings
        // are covered by tangent fields.
        for i in 0..r.coordinates() * usize::from(r.relations().is_empty()) {
            prop_assert_eq!((&a * &b).partial(i), &a.partial(i) * &b + &a * &b.partial(i));
        }
        prop_assert!((&a - &a).is_zero());
        prop_assert!(RingElement::zero(r).constant_value().unwrap().is_zero());
    }

    #[test]
    fn danielewski_evaluation_is_a_homomorphism(seed in any::<u64>()) {
        let r = dan3();
        let p = qs(&[0, 2, -3, 1]);
        let mut rs = RandomSource::new(seed);
        let w = Window::upto(3);
        let a = rs.element(&r, &w, 4);
        let b = rs.element(&r, &w, 4);
        let prod = &a * &b;
        for _ in 0..20 {
            let u0 = rs.nonzero_rational();
            let z0 = rs.nonzero_rational();
            let v0 = univariate::eval(&p, &z0) / &u0;
            let pt = [u0, v0, z0];
            prop_assert_eq!(prod.eval(&pt).unwrap(), a.eval(&pt).unwrap() * b.eval(&pt).unwrap());
        }
    }
}

