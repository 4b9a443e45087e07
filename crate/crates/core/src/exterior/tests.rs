use proptest::prelude::*;

use super::*;
use crate::parse::parse_element;
use crate::q;
use crate::random::RandomSource;
use crate::testing::*;

fn form(src: &str, ring: &Ring) -> DifferentialForm {
    parse_form(src, ring).unwrap()
}

#[test]
fn exterior_derivative_examples() {
    let a2 = affine(2);
    assert_eq!(form("x*dy", &a2).d(), form("dx*dy", &a2));
    let t2 = torus(2);
    assert!(form("x^-1*dx", &t2).d().is_zero());
    let s = danielewski(3);
    let lhs = form("z*du", &s).d();
    assert_eq!(lhs, form("dz*du", &s));
    assert_eq!(lhs.coefficient(&[0, 2]), RingElement::int(&s, -1));
}

#[test]
fn wedge_examples() {
    let a2 = affine(2);
    let w = form("dx", &a2).wedge(&form("dy", &a2)).unwrap();
    assert_eq!(w.coefficient(&[0, 1]), RingElement::one(&a2));
    let t2 = torus(2);
    let w = form("dx/x", &t2).wedge(&form("dy/y", &t2)).unwrap();
    assert_eq!(w.coefficient(&[0, 1]), parse_element("x^-1*y^-1", &t2).unwrap());
    let lc = line_complement(2);
    let w = form("dl1/l1", &lc).wedge(&form("dl2/l2", &lc)).unwrap();
    assert_eq!(w, form("dx*dy/(x*y)", &lc));
    assert!(w.wedge(&form("dx", &lc)).unwrap().is_zero());
    assert!(form("dx", &a2).wedge(&form("dx", &torus(2))).is_err());
}

#[test]
fn danielewski_normal_forms() {
    let s = danielewski(3);
    let df = danielewski_relation(&s).unwrap();
    assert!(df.is_zero());
    assert!(!df.is_zero_ambient());
    let reduced = form("u*dv", &s).normal_form();
    let expected = form("(3*z^2 - 6*z + 2)*dz - v*du", &s);
    assert_eq!(reduced.terms(), expected.terms());
    // The difference is the ring multiple 1 * df of the relation form.
    let diff = form("u*dv", &s) - expected;
    assert_eq!(diff.terms(), df.terms());
    let a2 = affine(2);
    let f = form("x^2*dy - 3*dx", &a2);
    assert_eq!(f.normal_form().terms(), f.terms());
}

#[test]
fn danielewski_top_forms_reduce_to_volume() {
    let s = danielewski(2);
    let omega = danielewski_volume_representative(&s);
    assert!(omega.top_coefficient().unwrap().is_one());
    let dudz = form("du*dz", &s);
    assert_eq!(dudz.top_coefficient().unwrap(), RingElement::var(&s, 0));
    // u dv ∧ dz = -v du ∧ dz on the surface
    let lhs = form("u*dv*dz", &s);
    let rhs = form("-v*du*dz", &s);
    assert_eq!(lhs, rhs);
    assert!(form("du*dv*dz", &s).is_zero());
}

#[test]
fn truncated_dimensions() {
    let a2 = affine(2);
    let g = Grading::standard(&a2);
    let dims: Vec<usize> =
        (0..=2).map(|k| TruncatedFormSpace::new(&a2, k, &Window::upto(2), &g).dimension()).collect();
    assert_eq!(dims, vec![6, 12, 6]);
    let t1 = torus(1);
    let w = Window::range(-2, 2, 2);
    let g = Grading::standard(&t1);
    assert_eq!(TruncatedFormSpace::new(&t1, 0, &w, &g).dimension(), 5);
    assert_eq!(TruncatedFormSpace::new(&t1, 1, &w, &g).dimension(), 5);
    let s = danielewski(3);
    let sp = TruncatedFormSpace::new(&s, 0, &Window::upto(1), &Grading::standard(&s));
    let names: Vec<String> = sp.basis.iter().map(|b| b.coefficient(&[]).to_string()).collect();
    assert_eq!(names, vec!["1", "z", "v", "u"]);
}

#[test]
fn truncated_bases_are_independent() {
    for ring in catalog() {
        let g = Grading::cohomological(&ring);
        let cx = truncate_complex(&ring, &Window::upto(3).with_neg_cap(2), 1, &g).unwrap();
        for k in 0..cx.spaces.len() {
            let coords = cx.basis_coordinates(k);
            assert_eq!(crate::linalg::rank(&coords), coords.len(), "{} degree {k}", ring.describe());
        }
    }
}

#[test]
fn coordinates_round_trip() {
    let mut rng = RandomSource::new(5);
    for ring in catalog() {
        for k in 0..=ring.dimension() {
            let f = random_form(&mut rng, &ring, k);
            let c = f.coordinates(8).unwrap();
            assert_eq!(DifferentialForm::from_coordinates(&ring, k, &c, 8), f);
        }
    }
}

#[test]
fn json_and_text_round_trip() {
    let lc = line_complement(3);
    let f = form("x*dx/l3 - 2/3*y^2*dy", &lc);
    let back = DifferentialForm::from_json(&lc, &f.to_json()).unwrap();
    assert_eq!(back, f);
    let s = danielewski(3);
    let f = form("u^2*dv*dz + z*du*dv", &s);
    assert_eq!(form(&f.to_string(), &s), f);
    assert_eq!(DifferentialForm::from_json(&s, &f.to_json()).unwrap(), f);
    assert!(parse_form("x + dx", &affine(2)).is_err());
}

#[test]
fn truncation_is_monotone() {
    for ring in catalog() {
        let g = Grading::cohomological(&ring);
        for k in 0..=ring.dimension() {
            let small = TruncatedFormSpace::new(&ring, k, &Window::upto(2).with_neg_cap(1), &g);
            let big = TruncatedFormSpace::new(&ring, k, &Window::upto(3).with_neg_cap(2), &g);
            assert!(small.dimension() <= big.dimension());
            let mut all: Vec<_> = big.basis.iter().map(|b| b.coordinates(6).unwrap()).collect();
            let r = crate::linalg::rank(&all);
            all.extend(small.basis.iter().map(|b| b.coordinates(6).unwrap()));
            assert_eq!(crate::linalg::rank(&all), r, "small window not contained in the big one");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn d_squared_vanishes(seed in any::<u64>(), which in 0usize..6, k in 0usize..3) {
        let ring = &catalog()[which];
        let mut rng = RandomSource::new(seed);
        let f = random_form(&mut rng, ring, k.min(ring.coordinates()));
        prop_assert!(f.d().d().is_zero());
    }

    #[test]
    fn leibniz_and_anticommutativity(seed in any::<u64>(), which in 0usize..6, a in 0usize..2, b in 0usize..2) {
        let ring = &catalog()[which];
        let mut rng = RandomSource::new(seed);
        let alpha = random_form(&mut rng, ring, a);
        let beta = random_form(&mut rng, ring, b);
        let lhs = alpha.wedge(&beta).unwrap().d();
        let sign = if a % 2 == 0 { q(1) } else { q(-1) };
        let rhs = alpha.d().wedge(&beta).unwrap() + alpha.wedge(&beta.d()).unwrap().scale(&sign);
        prop_assert_eq!(lhs, rhs);
        let ab = alpha.wedge(&beta).unwrap();
        let ba = beta.wedge(&alpha).unwrap();
        let sign = if (a * b) % 2 == 0 { q(1) } else { q(-1) };
        prop_assert_eq!(ab, ba.scale(&sign));
    }
}
