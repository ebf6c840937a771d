use num_complex::Complex64;
use parafatou::maps::{s_inverse, s_map, MapKind, MapSpec, ParabolicMap};
use parafatou::verify::catalog;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn catalog_fixed_points_are_parabolic() {
    for map in catalog() {
        let p = map.fixed_point();
        let fp = map.eval(p).unwrap();
        assert!((fp - p).norm() < 1e-12, "{:?}: f(p) = {fp}", map.kind());
        let df = map.derivative(p).unwrap();
        assert!((df - 1.0).norm() < 1e-9, "{:?}: f'(p) = {df}", map.kind());
    }
}

#[test]
fn make_map_values() {
    let b2 = ParabolicMap::new(MapKind::Blaschke(2)).unwrap();
    assert!((b2.eval(c(0.0, 0.0)).unwrap() - 1.0 / 9.0).norm() < 1e-15);
    assert!((b2.eval(c(1.0, 0.0)).unwrap() - 1.0).norm() < 1e-15);
    assert!((b2.derivative(c(1.0, 0.0)).unwrap() - 1.0).norm() < 1e-12);

    let binf = ParabolicMap::new(MapKind::BInf).unwrap();
    let e2 = (-2.0f64).exp();
    assert!((binf.eval(c(0.0, 0.0)).unwrap() - e2).norm() < 1e-15);
    assert!((binf.derivative(c(0.0, 0.0)).unwrap() - 4.0 * e2).norm() < 1e-12);

    let cinf = ParabolicMap::new(MapKind::CInf).unwrap();
    let t = 0.1f64.tan();
    assert!((cinf.eval(c(0.01, 0.0)).unwrap() - t * t).norm() < 1e-14);
    // tan series v + (2/3)v² + (17/45)v³ truncated at v = 0.01
    let v = 0.01;
    assert!((t * t - (v + 2.0 / 3.0 * v * v + 17.0 / 45.0 * v * v * v)).abs() < 1e-8);
    assert!((t * t - 0.01006705).abs() < 1e-8);

    assert_eq!(ParabolicMap::quad().eval(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
    assert_eq!(ParabolicMap::expm1().eval(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(ParabolicMap::new(MapKind::Blaschke(1)).is_err());
    assert!(ParabolicMap::new(MapKind::Cd(0)).is_err());
    assert!(ParabolicMap::new(MapKind::Poly(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])).is_err());
    assert!(ParabolicMap::new(MapKind::Poly(vec![c(0.1, 0.0), c(1.0, 0.0), c(1.0, 0.0)])).is_err());
}

#[test]
fn s_map_examples() {
    assert!(s_map(c(1.0, 0.0)).unwrap().norm() < 1e-15);
    assert!((s_map(c(0.0, 0.0)).unwrap() + 1.0).norm() < 1e-15);
    let z = c(0.3, 0.2);
    assert!((s_inverse(s_map(z).unwrap()).unwrap() - z).norm() < 1e-14);
    assert!(s_map(c(-1.0, 0.0)).is_err());
    assert!(s_inverse(c(0.5, 0.0)).is_err());
}

#[test]
fn inverse_branch_of_quad() {
    let quad = ParabolicMap::quad();
    assert_eq!(quad.inverse_branch_zero(c(0.0, 0.0), 1e-14).unwrap(), c(0.0, 0.0));
    let x = quad.inverse_branch_zero(quad.eval(c(0.1, 0.0)).unwrap(), 1e-14).unwrap();
    assert!((x - 0.1).norm() < 1e-12);
    // closed form of the branch: (−1 + √(1 + 4z))/2
    let l = quad.inverse_branch_zero(c(0.01, 0.0), 1e-14).unwrap();
    let exact = (-1.0 + (1.04f64).sqrt()) / 2.0;
    assert!((l - exact).norm() < 1e-15);
    assert!((l - 0.00990195).norm() < 1e-8);
}

#[test]
fn blaschke_converges_to_b_inf() {
    let binf = ParabolicMap::new(MapKind::BInf).unwrap();
    let sup = |d: u32| {
        let b = ParabolicMap::new(MapKind::Blaschke(d)).unwrap();
        let mut worst = 0.0f64;
        for j in 0..32 {
            for k in 0..32 {
                let z = c(-0.5 + j as f64 / 31.0, -0.5 + k as f64 / 31.0);
                if z.norm() <= 0.5 {
                    worst = worst.max((b.eval(z).unwrap() - binf.eval(z).unwrap()).norm());
                }
            }
        }
        worst
    };
    let (s10, s100) = (sup(10), sup(100));
    assert!(s100 < s10);
    assert!(s100 < 0.02, "sup |B_100 - B_inf| = {s100}");
}

#[test]
fn json_descriptors_round_trip() {
    for map in catalog() {
        let json = map.spec().to_json();
        let back = MapSpec::from_json(&json).unwrap().build().unwrap();
        assert_eq!(back.kind(), map.kind());
    }
    assert!(MapSpec::from_json(r#"{"kind":"blaschke"}"#).and_then(|s| s.build()).is_err());
    assert!(MapSpec::from_json(r#"{"kind":"nope"}"#).and_then(|s| s.build()).is_err());
}

fn unit_disk_point(max: f64) -> impl Strategy<Value = Complex64> {
    (0.0..max, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn semiconjugacy_holds(z in unit_disk_point(0.9), d in prop::sample::select(vec![2u32, 3, 5])) {
        let b = ParabolicMap::new(MapKind::Blaschke(d)).unwrap();
        let cd = ParabolicMap::new(MapKind::Cd(d)).unwrap();
        let sz = s_map(z).unwrap();
        // skip the slit, where C_d is not defined through the disk branch
        prop_assume!(!(sz.re >= 0.0 && sz.im.abs() < 1e-12));
        let lhs = cd.eval(sz).unwrap();
        let rhs = s_map(b.eval(z).unwrap()).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm()), "{lhs} vs {rhs}");
    }

    #[test]
    fn inverse_branch_inverts(
        idx in 0usize..12,
        r in 0.0..1.0f64,
        t in 0.0..std::f64::consts::TAU,
    ) {
        let map = &catalog()[idx];
        let zeta = Complex64::from_polar(r * map.branch_radius(), t);
        let fz = map.germ(zeta).unwrap();
        let x = map.inverse_branch_zero(fz, 1e-13).unwrap();
        prop_assert!((x - zeta).norm() < 1e-10, "{:?}: {x} vs {zeta}", map.kind());
    }

    #[test]
    fn s_inverse_lands_in_disk(v in (-5.0..5.0f64, -5.0..5.0f64)) {
        let v = Complex64::new(v.0, v.1);
        prop_assume!(v.im.abs() > 1e-9 || v.re < 0.0);
        let z = s_inverse(v).unwrap();
        prop_assert!(z.norm() < 1.0);
        prop_assert!((s_map(z).unwrap() - v).norm() < 1e-12 * (1.0 + v.norm()));
    }
}
