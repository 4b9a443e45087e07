use std::time::Instant;

use super::*;
use crate::exterior::parse_form;
use crate::q;
use crate::testing::*;

fn form(src: &str, ring: &Ring) -> DifferentialForm {
    parse_form(src, ring).unwrap()
}

fn timed_cohomology(ring: &Ring) -> CohomologyReport {
    let t = Instant::now();
    let r = cohomology(ring, &TruncationParams::default()).unwrap();
    eprintln!("{}: {:?} stable={} in {:?}", ring.describe(), r.betti_numbers(), r.is_stable(), t.elapsed());
    r
}

#[test]
fn golden_betti_numbers() {
    let cases: Vec<(Ring, Vec<usize>)> = vec![
        (affine(2), vec![1, 0, 0]),
        (torus(2), vec![1, 2, 1]),
        (danielewski(2), vec![1, 0, 1]),
        (danielewski(3), vec![1, 0, 2]),
        (line_complement(2), vec![1, 2, 1]),
        (line_complement(3), vec![1, 3, 2]),
        (danielewski(4), vec![1, 0, 3]),
        (danielewski(5), vec![1, 0, 4]),
        (line_complement(4), vec![1, 4, 3]),
    ];
    for (ring, expected) in cases {
        let r = timed_cohomology(&ring);
        assert_eq!(r.betti_numbers(), expected, "{}", ring.describe());
        assert!(r.is_stable());
        for d in &r.degrees {
            for rep in &d.representatives {
                assert!(rep.d().is_zero());
            }
        }
    }
}

#[test]
fn torus_representatives_are_logarithmic() {
    let t2 = torus(2);
    let r = cohomology(&t2, &TruncationParams::default()).unwrap();
    assert_eq!(r.degrees[1].representatives, vec![form("dx/x", &t2), form("dy/y", &t2)]);
    assert_eq!(r.degrees[2].representatives, vec![form("dx/x*dy/y", &t2)]);
    assert_eq!(class_of(&r, &form("dx/x", &t2)).unwrap(), vec![q(1), q(0)]);
    assert_eq!(class_of(&r, &form("y*dx + x*dy", &t2)).unwrap(), vec![q(0), q(0)]);
    assert_eq!(lambda2_h1_image(&r).unwrap().dimension(), 1);
}

#[test]
fn line_complement_classes() {
    let lc = line_complement(3);
    let r = cohomology(&lc, &TruncationParams::default()).unwrap();
    assert_eq!(class_of(&r, &form("dl1/l1 - dl2/l2", &lc)).unwrap(), vec![q(1), q(-1), q(0)]);
    let image = lambda2_h1_image(&r).unwrap();
    assert_eq!(image.dimension(), 2);
    // Adding an exact form to α leaves the class of α ∧ β unchanged.
    let alpha = form("dl1/l1", &lc);
    let beta = form("dl3/l3", &lc);
    let exact = form("y*dx + x*dy", &lc);
    let a = class_of(&r, &alpha.wedge(&beta).unwrap()).unwrap();
    let b = class_of(&r, &(alpha + exact).wedge(&beta).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn danielewski_wedge_image_is_zero() {
    let s = danielewski(3);
    let r = cohomology(&s, &TruncationParams::default()).unwrap();
    assert_eq!(lambda2_h1_image(&r).unwrap().dimension(), 0);
}

#[test]
fn exactness_examples() {
    let params = TruncationParams::default();
    let a2 = affine(2);
    match is_exact(&form("dx*dy", &a2), &params).unwrap() {
        Exactness::Exact { primitive, .. } => assert_eq!(primitive.d(), form("dx*dy", &a2)),
        other => panic!("{other:?}"),
    }
    let t2 = torus(2);
    assert!(!is_exact(&form("dx/x*dy/y", &t2), &params).unwrap().is_exact());
    let d1 = crate::rings::make_ring(RingKind::Danielewski { p: vec![q(0), q(1)] }).unwrap();
    let omega = crate::exterior::danielewski_volume_representative(&d1);
    assert!(is_exact(&omega, &params).unwrap().is_exact());
    let d2 = danielewski(2);
    let omega = crate::exterior::danielewski_volume_representative(&d2);
    assert!(!is_exact(&omega, &params).unwrap().is_exact());
    assert!(matches!(is_exact(&form("x*dy", &a2), &params), Err(Error::NotClosed)));
}

#[test]
fn exactness_agrees_with_classes() {
    let t2 = torus(2);
    let r = cohomology(&t2, &TruncationParams::default()).unwrap();
    for src in ["y*dx + x*dy", "dx/x", "x^-2*dx", "dx/x + y^2*dy"] {
        let eta = form(src, &t2);
        let zero = class_of(&r, &eta).unwrap().iter().all(|c| c.is_zero());
        assert_eq!(zero, is_exact(&eta, &r.params).unwrap().is_exact(), "{src}");
    }
}

#[test]
fn class_of_rejects_forms_outside_the_window() {
    let t2 = torus(2);
    let r = cohomology(&t2, &TruncationParams { max_degree: 3, neg_cap: 1, slack: 1 }).unwrap();
    assert!(matches!(class_of(&r, &form("x^-3*dx", &t2)), Err(Error::WindowMismatch(_))));
}
