//! Property tests: random operators and bodies come from seeded generators,
//! proptest drives the seeds.

use polarfix::conjugate::{
    gauge_power_conjugate, half_gauge_squared, legendre_grid, legendre_grid_on, GridFunction, GridSpec,
};
use polarfix::gallery::{gallery, Params, ENTRIES};
use polarfix::linalg::{
    coercivity_constant, dot, enumerate_vertices, lp_support, norm, operator_norm, spectral_abs, sym_eig, HPolyData,
    Matrix,
};
use polarfix::polarity::{polar, polarity_map, pushforward, Operator};
use polarfix::random;
use polarfix::solver::{
    operator_equation_residual, semi_skew_decompose, solve_positive_definite, solve_symmetric, SemiSkewForm,
};
use polarfix::verify::{sample_directions, support_residual, verify_fixed_point, VerifyConfig};
use polarfix::ConvexSet;
use proptest::prelude::*;

fn body(seed: u64, n: usize) -> ConvexSet {
    let mut rng = random::rng(seed);
    if seed.is_multiple_of(2) {
        random::ellipsoid(n, &mut rng)
    } else {
        random::polytope_v(n, n + 3, &mut rng)
    }
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: std::env::var("PROPTEST_CASES").ok().and_then(|v| v.parse().ok()).unwrap_or(48),
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn eigen_decomposition_reconstructs(seed in any::<u64>(), n in 1usize..7) {
        let m = random::symmetric_mixed(n, &mut random::rng(seed));
        let d = sym_eig(&m).unwrap();
        let u = Matrix::from_columns(&(0..n).map(|k| d.eigenvector(k)).collect::<Vec<_>>());
        prop_assert!((&(&u.transpose() * &u) - &Matrix::identity(n)).frobenius_norm() < 1e-10);
        prop_assert!((&d.reconstruct() - &m).frobenius_norm() < 1e-10 * (1.0 + m.frobenius_norm()));
    }

    #[test]
    fn spectral_abs_commutes_and_squares(seed in any::<u64>(), n in 1usize..7) {
        let m = random::symmetric_mixed(n, &mut random::rng(seed));
        let a = spectral_abs(&m).unwrap();
        let scale = m.frobenius_norm().powi(2);
        prop_assert!((&(&a * &m) - &(&m * &a)).frobenius_norm() <= 1e-8 * scale);
        prop_assert!((&(&a * &a) - &(&m * &m)).frobenius_norm() <= 1e-8 * scale);
    }

    #[test]
    fn operator_norm_is_transpose_invariant(seed in any::<u64>(), n in 1usize..7) {
        let m = random::invertible(n, &mut random::rng(seed));
        prop_assert!((operator_norm(&m) - operator_norm(&m.transpose())).abs() < 1e-10);
    }

    #[test]
    fn coercivity_times_inverse_norm_is_one(seed in any::<u64>(), n in 1usize..7) {
        let a = random::spd(n, &mut random::rng(seed));
        let beta = coercivity_constant(&a).unwrap();
        prop_assert!((beta * operator_norm(&a.inverse().unwrap()) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn lp_support_matches_vertex_maximum(seed in any::<u64>(), n in 2usize..5) {
        let mut rng = random::rng(seed);
        let ConvexSet::PolytopeV(v) = random::polytope_v(n, 12 - 2 * n, &mut rng) else { unreachable!() };
        // H-rep of the same body: its facets are the vertices of the polar.
        let facets = enumerate_vertices(&v);
        let h = HPolyData::new(facets).unwrap();
        for u in sample_directions(n, 32, seed) {
            let brute = v.iter().map(|p| dot(p, &u)).fold(f64::NEG_INFINITY, f64::max);
            prop_assert!((lp_support(&u, &h).unwrap() - brute).abs() < 1e-9);
        }
    }

    #[test]
    fn gauge_is_homogeneous_and_subadditive(seed in any::<u64>(), n in 2usize..6, t in 0.0f64..5.0) {
        let c = body(seed, n);
        let xs = sample_directions(n, 24, seed);
        for (x, y) in xs.iter().zip(xs.iter().rev()) {
            let gx = c.gauge(x).unwrap();
            let tx: Vec<f64> = x.iter().map(|v| v * t).collect();
            prop_assert!((c.gauge(&tx).unwrap() - t * gx).abs() <= 1e-12 * (1.0 + t * gx));
            let xy: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
            prop_assert!(c.gauge(&xy).unwrap() <= gx + c.gauge(y).unwrap() + 1e-9);
        }
    }

    #[test]
    fn membership_agrees_with_gauge(seed in any::<u64>(), n in 2usize..6) {
        let c = body(seed, n);
        for (k, x) in sample_directions(n, 40, seed).iter().enumerate() {
            let x: Vec<f64> = x.iter().map(|v| v * (0.2 + 0.05 * k as f64)).collect();
            let g = c.gauge(&x).unwrap();
            if (g - 1.0).abs() > 1e-9 {
                prop_assert_eq!(c.contains(&x, 0.0).unwrap(), g <= 1.0);
            }
        }
    }

    #[test]
    fn polarity_routes_agree(seed in any::<u64>(), n in 2usize..6) {
        let c = body(seed, n);
        let g = Operator::new(random::invertible(n, &mut random::rng(seed ^ 0xabcd))).unwrap();
        let a = polar(&pushforward(&g, &c).unwrap()).unwrap();
        let b = pushforward(&g.inv_transpose_op(), &polar(&c).unwrap()).unwrap();
        prop_assert!(support_residual(&a, &b, 256, seed).unwrap().max_residual <= 1e-10);
        prop_assert!(support_residual(&polar(&polar(&c).unwrap()).unwrap(), &c, 256, seed).unwrap().max_residual <= 1e-10);
        prop_assert!(polar(&c).unwrap().contains(&vec![0.0; n], 0.0).unwrap());
    }

    #[test]
    fn polar_reverses_order(seed in any::<u64>(), n in 2usize..6, bump in 0.01f64..2.0) {
        let a2 = random::spd(n, &mut random::rng(seed));
        let a1 = &a2 + &Matrix::scalar(n, bump);
        let (c1, c2) = (ConvexSet::ellipsoid(a1).unwrap(), ConvexSet::ellipsoid(a2).unwrap());
        let (p1, p2) = (polar(&c1).unwrap(), polar(&c2).unwrap());
        for u in sample_directions(n, 64, seed) {
            prop_assert!(c1.support(&u).unwrap() <= c2.support(&u).unwrap() + 1e-12);
            prop_assert!(p2.support(&u).unwrap() <= p1.support(&u).unwrap() + 1e-12);
        }
    }

    #[test]
    fn positive_definite_solution_is_unique_up_to_scale(seed in any::<u64>(), n in 2usize..6) {
        let a = random::spd(n, &mut random::rng(seed));
        let g = Operator::new(a.clone()).unwrap();
        let cfg = VerifyConfig::default();
        prop_assert!(verify_fixed_point(&g, &solve_positive_definite(&g).unwrap(), &cfg).unwrap().passed());
        let r = verify_fixed_point(&g, &ConvexSet::ellipsoid(a.scale(1.01)).unwrap(), &cfg).unwrap();
        prop_assert!(r.max_residual >= 1e-3);
        let (abs, _) = solve_symmetric(&g).unwrap();
        prop_assert!((&abs - &a).max_abs() < 1e-10);
    }

    #[test]
    fn operator_equation_implies_fixed_point(seed in any::<u64>(), n in 2usize..6) {
        let g = Operator::new(random::symmetric_mixed(n, &mut random::rng(seed))).unwrap();
        let (a, c) = solve_symmetric(&g).unwrap();
        prop_assert!(operator_equation_residual(&a, &g).unwrap() <= 1e-10);
        prop_assert!(verify_fixed_point(&g, &c, &VerifyConfig::default()).unwrap().max_residual <= 1e-8);
    }

    #[test]
    fn semi_skew_identities(theta in 0.0f64..std::f64::consts::TAU, a1 in 0.2f64..5.0, ratio in 1.1f64..4.0, negative in any::<bool>()) {
        let s = if negative { -1.0 } else { 1.0 };
        let u = [theta.cos(), theta.sin()];
        let e = SemiSkewForm::new(u, s * a1, s * a1 * ratio).unwrap();
        let m = e.matrix();
        prop_assert!((&e.adjoint().matrix() - &m.transpose()).max_abs() < 1e-10);
        prop_assert!((&e.inverse().matrix() - &m.inverse().unwrap()).max_abs() < 1e-10);
        let back = semi_skew_decompose(&m, 1e-10).unwrap();
        prop_assert!((&back.matrix() - &m).max_abs() < 1e-10);
    }

    #[test]
    fn support_residual_is_a_pseudometric(seed in any::<u64>(), n in 2usize..5) {
        let (a, b, c) = (body(seed, n), body(seed.wrapping_add(1), n), body(seed.wrapping_add(2), n));
        let d = |x: &ConvexSet, y: &ConvexSet| support_residual(x, y, 256, 7).unwrap().max_residual;
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert_eq!(d(&a, &a), 0.0);
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-12);
    }

    #[test]
    fn more_directions_never_lower_the_residual(seed in any::<u64>(), n in 2usize..6, k in 4usize..200) {
        let (a, b) = (body(seed, n), body(seed.wrapping_add(1), n));
        let lo = support_residual(&a, &b, k, seed).unwrap().max_residual;
        let hi = support_residual(&a, &b, 2 * k, seed).unwrap().max_residual;
        prop_assert!(hi >= lo);
    }

    #[test]
    fn passing_bodies_contain_zero(seed in any::<u64>(), n in 2usize..5) {
        let g = Operator::new(random::spd(n, &mut random::rng(seed))).unwrap();
        let c = solve_positive_definite(&g).unwrap();
        let r = verify_fixed_point(&g, &c, &VerifyConfig::default()).unwrap();
        prop_assert!(r.passed() && r.sanity.zero_in_set && c.gauge(&vec![0.0; n]).unwrap() == 0.0);
    }

    #[test]
    fn set_documents_round_trip(seed in any::<u64>(), n in 2usize..5) {
        let c = body(seed, n);
        for s in [c.clone(), polar(&c).unwrap()] {
            let text = serde_json::to_string(&s).unwrap();
            let back: ConvexSet = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(&back, &s);
            prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
        }
    }
}

#[test]
fn ellipse_residual_tracks_dense_sweep() {
    let mut rng = random::rng(99);
    for _ in 0..20 {
        let (a, b) = (random::ellipsoid(2, &mut rng), random::ellipsoid(2, &mut rng));
        let sampled = support_residual(&a, &b, 512, 0).unwrap().max_residual;
        let dense = (0..100_000)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / 100_000.0;
                let u = [t.cos(), t.sin()];
                (a.support(&u).unwrap() - b.support(&u).unwrap()).abs()
            })
            .fold(0.0, f64::max);
        assert!(sampled <= dense * (1.0 + 1e-9) && sampled >= 0.95 * dense, "{sampled} vs {dense}");
    }
}

#[test]
fn representations_agree_on_square_and_simplex() {
    let square_v =
        ConvexSet::polytope_v(vec![vec![1.0, 1.0], vec![-1.0, 1.0], vec![-1.0, -1.0], vec![1.0, -1.0]]).unwrap();
    let square_h =
        ConvexSet::polytope_h(vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]]).unwrap();
    let tri = polarfix::gallery::simplex_vertices(3, 1.0).unwrap();
    let tri_v = ConvexSet::polytope_v(tri.clone()).unwrap();
    let tri_h = ConvexSet::polytope_h(enumerate_vertices(&tri)).unwrap();
    for (v, h) in [(&square_v, &square_h), (&tri_v, &tri_h)] {
        let n = v.dim();
        for u in sample_directions(n, 512, 3) {
            assert!((v.support(&u).unwrap() - h.support(&u).unwrap()).abs() < 1e-9);
            assert!((v.gauge(&u).unwrap() - h.gauge(&u).unwrap()).abs() < 1e-9);
        }
    }
}

#[test]
fn gallery_reproduces_under_several_seeds() {
    for seed in 0..3 {
        let cfg = VerifyConfig { seed, ..VerifyConfig::default() };
        for name in ENTRIES {
            let e = gallery(name, &Params::new()).unwrap();
            for s in &e.sets {
                let r = verify_fixed_point(&e.g, &s.set, &cfg).unwrap();
                assert_eq!(r.verdict, s.expected, "{name} / {} / seed {seed}", s.label);
            }
        }
    }
}

#[test]
fn rotation_entry_is_invariant() {
    for alpha in [0.0, std::f64::consts::FRAC_PI_6, std::f64::consts::FRAC_PI_3] {
        for lambda in [0.5, 2.0] {
            let p: Params = [("alpha".to_string(), alpha), ("lambda".to_string(), lambda)].into();
            let e = gallery("rotation_invariance", &p).unwrap();
            let r = support_residual(&e.sets[0].set, &e.sets[1].set, 512, 0).unwrap();
            assert!(r.max_residual <= 1e-9);
        }
    }
}

#[test]
fn power_conjugate_matches_half_support_squared() {
    let spec = GridSpec { half_width: 4.0, nodes: 129 };
    for name in ["square_rhombus_disc", "ellipse_family"] {
        let e = gallery(name, &Params::new()).unwrap();
        for s in &e.sets {
            let c = &s.set;
            let conj = legendre_grid(&half_gauge_squared(c, spec).unwrap());
            let mut used = 0;
            for (k, u) in sample_directions(2, 256, 1).iter().enumerate() {
                let xs: Vec<f64> = u.iter().map(|v| v * (0.05 + 0.004 * k as f64)).collect();
                let closed = gauge_power_conjugate(c, 2.0, &xs).unwrap();
                let h = c.support(&xs).unwrap();
                assert_eq!(closed, 0.5 * h * h);
                if let Some(g) = conj.eval(&xs) {
                    used += 1;
                    assert!((g - closed).abs() <= 5.0 * spec.spacing(), "{name}: {g} vs {closed}");
                }
            }
            assert!(used > 128, "{name}: only {used} reliable samples");
        }
    }
}

#[test]
fn young_fenchel_and_biconjugation() {
    let spec = GridSpec { half_width: 4.0, nodes: 201 };
    let h = spec.spacing();
    let f = GridFunction::on_spec(1, spec, |x| 0.5 * x[0] * x[0] + 0.25 * x[0].abs()).unwrap();
    let conj = legendre_grid(&f);
    let dual = &conj.values;
    for i in 0..f.len() {
        for j in 0..dual.len() {
            let (x, y) = (f.point(i), dual.point(j));
            assert!(f.values()[i] + dual.values()[j] >= x[0] * y[0] - 5.0 * h);
        }
    }
    let (lo, hi) = f.bounds();
    let back = legendre_grid_on(dual, lo, hi, f.nodes()).unwrap();
    let mut used = 0;
    for k in 0..f.len() {
        if back.reliable[k] {
            used += 1;
            assert!((back.values.values()[k] - f.values()[k]).abs() <= 5.0 * h);
        }
    }
    assert!(used > f.len() / 2);
}

#[test]
fn polarity_map_of_cones_is_self_consistent() {
    for n in [2, 3, 5] {
        let g = Operator::scalar(n, -1.0).unwrap();
        let c = ConvexSet::lorentz(vec![1.0; n]).unwrap();
        let image = polarity_map(&g, &c).unwrap();
        for u in sample_directions(n, 200, 0) {
            if !c.near_cone_boundary(&u, 1e-9).unwrap() {
                assert_eq!(c.contains(&u, 0.0).unwrap(), image.contains(&u, 0.0).unwrap());
            }
        }
        assert!(norm(&vec![1.0; n]) > 0.0);
    }
}
