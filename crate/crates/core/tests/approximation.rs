use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use zonofit::approx::{c0_approximate, cinf_approximate, contains, hausdorff_bound};
use zonofit::geometry::{diameter, hausdorff_distance, regular_subdivision};
use zonofit::{Body64, Zonotope64};

fn random_ellipses(count: usize, seed: u64) -> Vec<Body64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let a = rng.random_range(0.1..5.0);
            let b = rng.random_range(0.1..5.0);
            Body64::ellipse(a, b, rng.random_range(0.0..PI)).unwrap()
        })
        .collect()
}

#[test]
fn interpolation_containment_and_bound() {
    for x in random_ellipses(100, 1) {
        let diam = diameter(&x).unwrap();
        for n in [2, 3, 4, 8, 16] {
            let z = c0_approximate(&x, n).unwrap();
            for &t in &regular_subdivision::<f64>(n) {
                assert!((z.feret(t) - x.feret(t)).abs() <= 1e-9);
            }
            assert!(contains(&z, &x), "containment failed at n={n}");
            let d = hausdorff_distance(&x, &Body64::Zonotope(z)).unwrap();
            assert!(d <= hausdorff_bound(n, diam));
        }
    }
}

#[test]
fn convergence() {
    for x in random_ellipses(10, 2) {
        let d = |n| hausdorff_distance(&x, &Body64::Zonotope(c0_approximate(&x, n).unwrap())).unwrap();
        assert!(d(64) < d(2));
    }
    assert!(hausdorff_bound(1 << 20, 1.0f64) < 2e-5);
}

fn zonotope(n: usize) -> impl Strategy<Value = Zonotope64> {
    prop::collection::vec(0.0..3.0f64, n).prop_map(|a| Zonotope64::regular(a, 0.0).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn minkowski_homomorphism(
        a in 0.1..4.0f64, b in 0.1..4.0f64, p in 0.0..PI,
        c in 0.1..4.0f64, d in 0.1..4.0f64, q in 0.0..PI,
        n in 2usize..12,
    ) {
        let x = Body64::ellipse(a, b, p).unwrap();
        let y = Body64::ellipse(c, d, q).unwrap();
        let sum = Body64::minkowski_sum(vec![x.clone(), y.clone()]).unwrap();
        let (zx, zy, zs) = (c0_approximate(&x, n).unwrap(), c0_approximate(&y, n).unwrap(), c0_approximate(&sum, n).unwrap());
        for i in 0..n {
            prop_assert!((zs.alpha()[i] - zx.alpha()[i] - zy.alpha()[i]).abs() <= 1e-9);
        }
    }

    #[test]
    fn idempotence_on_refined_grid(z in zonotope(4), mult in 1usize..4) {
        let m = 4 * mult;
        let again = c0_approximate(&Body64::Zonotope(z.clone()), m).unwrap();
        for (j, &a) in again.alpha().iter().enumerate() {
            let expected = if j % mult == 0 { z.alpha()[j / mult] } else { 0.0 };
            prop_assert!((a - expected).abs() <= 1e-9);
        }
    }

    #[test]
    fn functionals_match_vertices(z in (2usize..9).prop_flat_map(zonotope), t in 0.0..PI) {
        let z = z.with_offset(t);
        let poly = z.vertices();
        prop_assert!((z.area() - poly.area()).abs() <= 1e-10 * (1.0 + z.area()));
        prop_assert!((z.perimeter() - poly.perimeter()).abs() <= 1e-10 * (1.0 + z.perimeter()));
    }
}

#[test]
fn cinf_dominates_c0() {
    let fixtures = vec![
        Body64::disk(1.0).unwrap(),
        Body64::ellipse(3.0, 1.0, 0.0).unwrap(),
        Body64::ellipse(3.0, 1.0, 0.7).unwrap(),
        Body64::ellipse(10.0, 1.0, 1.3).unwrap(),
        Body64::unit_square(),
        Body64::segment(2.0, 0.4).unwrap(),
    ];
    for x in &fixtures {
        for n in [2, 3, 4, 6] {
            let c0 = hausdorff_distance(x, &Body64::Zonotope(c0_approximate(x, n).unwrap())).unwrap();
            let ci = cinf_approximate(x, n).unwrap();
            assert!(ci.objective <= c0 + 1e-6);
            assert!(ci.tau >= 0.0 && ci.tau < PI / n as f64);
        }
    }
}

#[test]
fn cinf_rotation_invariance() {
    let x = Body64::ellipse(3.0, 1.0, 0.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in [2, 3, 4] {
        let base = cinf_approximate(&x, n).unwrap().objective;
        for _ in 0..5 {
            let phi = rng.random_range(0.0..PI);
            let r = cinf_approximate(&x.clone().rotated(phi), n).unwrap().objective;
            assert!((r - base).abs() <= 1e-5, "n={n} phi={phi}: {r} vs {base}");
        }
    }
}

#[test]
fn single_precision_path() {
    let x = zonofit::Body32::ellipse(3.0, 1.0, 0.2).unwrap();
    let z = c0_approximate(&x, 8).unwrap();
    for &t in &regular_subdivision::<f32>(8) {
        assert!((z.feret(t) - x.feret(t)).abs() < 1e-4);
    }
    let d = hausdorff_distance(&x, &zonofit::Body32::Zonotope(z)).unwrap();
    assert!(d <= hausdorff_bound(8, diameter(&x).unwrap()));
}
