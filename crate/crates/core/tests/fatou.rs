use num_complex::Complex64;
use parafatou::error::Error;
use parafatou::fatou::{
    choose_petal, validate_petal, BasinStatus, BlaschkeFatou, FatouSolver, Petal, PetalKind,
    EXTENSION_MAX_ITER,
};
use parafatou::maps::{MapKind, ParabolicMap};
use parafatou::series::log_p;
use parafatou::verify::{blaschke_abel_residual, sample_box};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn phi(solver: &FatouSolver, z: Complex64) -> Result<Complex64, Error> {
    solver.phi_attr_extended(z, EXTENSION_MAX_ITER).map(|v| v.value)
}

#[test]
fn petal_examples() {
    let quad = ParabolicMap::quad();
    let g = quad.germ_data().unwrap();
    let petal = choose_petal(&quad, &g, PetalKind::Attracting).unwrap();
    assert!(petal.validated && (petal.r0 - 0.125).abs() < 1e-12);
    let wide = Petal { r0: 0.9, validated: false, ..petal };
    assert!(!validate_petal(&quad, &g, &wide));

    let expm1 = ParabolicMap::expm1();
    let rep = choose_petal(&expm1, &expm1.germ_data().unwrap(), PetalKind::Repelling).unwrap();
    assert!(rep.validated && rep.alpha.abs() < 1e-12);
}

/// `w_N − N` with `w = u − log u`, extrapolated from `N` and `2N` steps.
fn brute_force_quad(z: Complex64, n: usize) -> Complex64 {
    let w = |z: Complex64| {
        let u = -z.inv();
        u - log_p(u)
    };
    let mut z = z;
    let mut at_n = c(0.0, 0.0);
    for k in 1..=2 * n {
        z += z * z;
        if k == n {
            at_n = w(z) - n as f64;
        }
    }
    let at_2n = w(z) - (2 * n) as f64;
    2.0 * at_2n - at_n
}

#[test]
fn quad_matches_brute_force_limit() {
    let solver = FatouSolver::new(ParabolicMap::quad()).unwrap();
    let z = c(-0.1, 0.0);
    let oracle = brute_force_quad(z, 100_000);
    let value = phi(&solver, z).unwrap();
    assert!((value - oracle).norm() < 1e-6, "{value} vs {oracle}");
}

#[test]
fn quad_normalization_near_the_axis() {
    let solver = FatouSolver::new(ParabolicMap::quad()).unwrap();
    let z = c(-0.001, 0.0);
    let u = -z.inv();
    assert!((phi(&solver, z).unwrap() - (u - log_p(u))).norm() < 1e-3);

    // Φ(z)·a2·z → −1 and Φ − (u − γ log u) → 0 along the axis
    let mut prev = (f64::INFINITY, f64::INFINITY);
    for r in [1e-2, 1e-3] {
        let z = c(-r, 0.0);
        let u = -z.inv();
        let value = phi(&solver, z).unwrap();
        let ratio = (value * z + 1.0).norm();
        let expansion = (value - (u - log_p(u))).norm();
        assert!(ratio < prev.0 && expansion < prev.1);
        prev = (ratio, expansion);
    }
    assert!(prev.0 < 1e-2 && prev.1 < 1e-3);
}

#[test]
fn abel_equation_on_basins() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cases = [
        (ParabolicMap::quad(), c(-1.2, -0.7), c(0.2, 0.7)),
        (ParabolicMap::expm1(), c(-3.0, -2.0), c(0.5, 2.0)),
    ];
    for (map, lo, hi) in cases {
        let solver = FatouSolver::new(map.clone()).unwrap();
        let deeper = solver.clone().with_depth(2.0 * solver.depth() + 7.5);
        let pts = sample_box(&mut rng, 100, lo, hi, |z| {
            phi(&deeper, z).is_ok() && map.germ(z).and_then(|w| phi(&solver, w)).is_ok()
        });
        assert_eq!(pts.len(), 100);
        for z in pts {
            let r = phi(&solver, map.germ(z).unwrap()).unwrap() - phi(&deeper, z).unwrap() - 1.0;
            assert!(r.norm() < 1e-8, "{:?} at {z}: {r}", map.kind());
        }
    }
}

#[test]
fn blaschke_abel_equation() {
    let fatou = BlaschkeFatou::new(ParabolicMap::new(MapKind::Blaschke(2)).unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let pts = sample_box(&mut rng, 100, c(-0.95, -0.95), c(0.95, 0.95), |z| {
        z.norm() < 0.95 && blaschke_abel_residual(&fatou, z).is_ok()
    });
    assert_eq!(pts.len(), 100);
    for z in pts {
        let r = blaschke_abel_residual(&fatou, z).unwrap();
        assert!(r < 1e-8, "at {z}: {r}");
    }
    assert!(matches!(fatou.phi_attr_extended(c(1.5, 0.0), 100), Err(Error::NotInBasin)));
}

#[test]
fn extension_examples() {
    let expm1 = FatouSolver::new(ParabolicMap::expm1()).unwrap();
    let z = c(-1.0, 0.0);
    let a = phi(&expm1, z).unwrap();
    assert!(a.is_finite());
    let fz = ParabolicMap::expm1().eval(z).unwrap();
    assert!((phi(&expm1, fz).unwrap() - a - 1.0).norm() < 1e-8);

    let quad = FatouSolver::new(ParabolicMap::quad()).unwrap();
    assert!(matches!(quad.phi_attr_extended(c(1.0, 0.0), 1000), Err(Error::Escaped(_))));
    // inside the petal the extension is the petal coordinate
    let inside = c(-0.05, 0.01);
    assert_eq!(phi(&quad, inside).unwrap(), quad.phi_petal(inside).unwrap().value);
}

#[test]
fn basin_examples() {
    let quad = FatouSolver::new(ParabolicMap::quad()).unwrap();
    assert!(matches!(quad.basin_test(c(-0.5, 0.0), 1000), BasinStatus::Attracted(_)));
    assert_eq!(quad.basin_test(c(1.0, 0.0), 1000), BasinStatus::Escaped);
    assert_eq!(quad.basin_test(c(0.0, 0.0), 1000), BasinStatus::Undecided);
}

#[test]
fn repelling_parametrization() {
    let map = ParabolicMap::quad();
    let solver = FatouSolver::new(map.clone()).unwrap();
    let t = solver.rep_threshold();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let pts = sample_box(&mut rng, 20, c(-t - 40.0, -10.0), c(-t, 10.0), |_| true);
    for big_z in pts {
        let z = solver.psi_rep_extended(big_z, EXTENSION_MAX_ITER).unwrap();
        let z1 = solver.psi_rep_extended(big_z + 1.0, EXTENSION_MAX_ITER).unwrap();
        assert!((z1 - map.germ(z).unwrap()).norm() < 1e-9);
        let back = solver.phi_rep_petal(z).unwrap().value;
        assert!((back - big_z).norm() < 1e-9, "{back} vs {big_z}");
    }

    let big_z = c(-1000.0, 0.0);
    let z = solver.psi_rep_extended(big_z, EXTENSION_MAX_ITER).unwrap();
    let u = -z.inv();
    assert!((u - (big_z + log_p(-big_z))).norm() < 0.05);
}

#[test]
fn psi_commutes_with_the_map_after_extension() {
    let map = ParabolicMap::expm1();
    let solver = FatouSolver::new(map.clone()).unwrap();
    let mut checked = 0;
    for j in 0..10 {
        let big_z = c(-5.0 + j as f64, 2.0 + 0.3 * j as f64);
        let (Ok(z), Ok(z1)) = (
            solver.psi_rep_extended(big_z, EXTENSION_MAX_ITER),
            solver.psi_rep_extended(big_z + 1.0, EXTENSION_MAX_ITER),
        ) else {
            continue;
        };
        assert!((z1 - map.germ(z).unwrap()).norm() < 1e-9 * (1.0 + z1.norm()));
        checked += 1;
    }
    assert!(checked >= 5);
}
