mod common;

use common::*;
use proptest::prelude::*;
use toric_hdi::cohomology::{cohomology_dims, line_bundle_cohomology};
use toric_hdi::{DivisorClass, TDivisor, ToricVariety};

/// Riemann-Roch on `F1` in the class basis (fiber, section of self-intersection 1).
fn euler_f1(c: &DivisorClass) -> i64 {
    let dot = |x: &[i64], y: &[i64]| x[0] * y[1] + x[1] * y[0] + x[1] * y[1];
    let d = &c.0;
    let minus_k = [1, 2];
    let dk = [d[0] + minus_k[0], d[1] + minus_k[1]];
    1 + dot(d, &dk) / 2
}

fn euler_p2(d: i64) -> i64 {
    (d + 1) * (d + 2) / 2
}

fn chi(h: &[usize]) -> i64 {
    h.iter().enumerate().map(|(i, &v)| if i % 2 == 0 { v as i64 } else { -(v as i64) }).sum()
}

#[test]
fn hirzebruch_example() {
    let x = f1();
    let d = TDivisor(vec![0, -1, -2, -3]);
    assert_eq!(x.class_of(&d), DivisorClass(vec![-1, -4]));
    assert_eq!(cohomology_dims(&x, &d).unwrap(), vec![0, 0, 6]);
    let top = line_bundle_cohomology(&x, &d, 2).unwrap();
    assert_eq!(top.total(), 6);
}

#[test]
fn projective_line() {
    let x = p(1);
    for a in -4..4 {
        let h = cohomology_dims(&x, &TDivisor(vec![a, 0])).unwrap();
        assert_eq!(h, vec![(a + 1).max(0) as usize, (-a - 1).max(0) as usize]);
    }
}

fn small_divisor(rays: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, rays)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn plane_matches_riemann_roch_and_point_counts(a in small_divisor(3)) {
        let x = p(2);
        let d = TDivisor(a.clone());
        let h = cohomology_dims(&x, &d).unwrap();
        prop_assert_eq!(chi(&h), euler_p2(x.class_of(&d).0[0]));
        prop_assert_eq!(h[0], count_points_oracle(x.rays(), &a));
    }

    #[test]
    fn hirzebruch_matches_riemann_roch_and_point_counts(a in small_divisor(4)) {
        let x = f1();
        let d = TDivisor(a.clone());
        let h = cohomology_dims(&x, &d).unwrap();
        prop_assert_eq!(chi(&h), euler_f1(&x.class_of(&d)));
        prop_assert_eq!(h[0], count_points_oracle(x.rays(), &a));
        let dual = cohomology_dims(&x, &(&x.canonical_divisor() - &d)).unwrap();
        prop_assert!((0..3).all(|i| h[i] == dual[2 - i]));
    }

    #[test]
    fn classes_are_additive_and_kill_principal_divisors(a in small_divisor(4), b in small_divisor(4), m in prop::collection::vec(-5i64..=5, 2)) {
        let x = f1();
        let (d, e) = (TDivisor(a), TDivisor(b));
        prop_assert_eq!(x.class_of(&(&d + &e)), &x.class_of(&d) + &x.class_of(&e));
        prop_assert_eq!(x.class_of(&x.principal_divisor(&m)), DivisorClass(vec![0, 0]));
        prop_assert_eq!(x.class_of(&x.divisor_of_class(&x.class_of(&d))), x.class_of(&d));
    }
}

#[test]
fn product_and_blowup_are_smooth_complete() {
    let x = f1().product(&ToricVariety::projective_space(1).unwrap()).unwrap();
    assert_eq!(x.class_rank(), 3);
    let b = x.blowup(&[1, 5]).unwrap();
    assert!(b.is_smooth() && b.is_complete());
    assert_eq!(b.class_rank(), 4);
    // cohomology of the structure sheaf of a smooth complete toric variety
    assert_eq!(cohomology_dims(&b, &TDivisor::zero(b.num_rays())).unwrap(), vec![1, 0, 0, 0]);
}
