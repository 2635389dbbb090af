use std::sync::Arc;

use bohr_radius::extremal::ExtremalSet;
use bohr_radius::integrals::RadiusIntegral;
use bohr_radius::quadrature::gauss_kronrod;
use bohr_radius::radius::{solve_radius, ClassId, RadiusProblem, SolverOptions};
use bohr_radius::series::DEFAULT_ORDER;
use bohr_radius::verify::{check_subordination_lemma, run_campaign, SelfMap};
use bohr_radius::{PhiSpec, TruncatedSeries};
use proptest::prelude::*;

fn series(max_order: usize, c0: Option<f64>) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(-1.0f64..1.0, 1..=max_order).prop_map(move |mut c| {
        if let Some(v) = c0 {
            c[0] = v;
        }
        TruncatedSeries::new(c).unwrap()
    })
}

fn pair(max_order: usize, c0: Option<f64>) -> impl Strategy<Value = (TruncatedSeries, TruncatedSeries)> {
    (1..=max_order).prop_flat_map(move |n| {
        let one = prop::collection::vec(-1.0f64..1.0, n);
        (one.clone(), one).prop_map(move |(mut a, mut b)| {
            if let Some(v) = c0 {
                a[0] = v;
                b[0] = v;
            }
            (TruncatedSeries::new(a).unwrap(), TruncatedSeries::new(b).unwrap())
        })
    })
}

fn catalog_spec() -> impl Strategy<Value = PhiSpec> {
    prop_oneof![
        (-1.0f64..0.9, 0.01f64..1.0).prop_map(|(b, t)| PhiSpec::janowski(b + t * (1.0 - b), b).unwrap()),
        (0.0f64..0.95).prop_map(|g| PhiSpec::sakaguchi(g).unwrap()),
        (0.05f64..0.7).prop_map(|s| PhiSpec::lemniscate(s).unwrap()),
        (0.0f64..0.95).prop_map(|a| PhiSpec::exp_blend(a).unwrap()),
        (0.1f64..1.0).prop_map(|a| PhiSpec::strongly(a).unwrap()),
        (0.0f64..1.0, 0.1f64..1.0).prop_map(|(a, b)| PhiSpec::wang(a, b).unwrap()),
    ]
}

fn assert_close(a: &TruncatedSeries, b: &TruncatedSeries, tol: f64) -> Result<(), TestCaseError> {
    prop_assert_eq!(a.order(), b.order());
    for (n, (x, y)) in a.coeffs().iter().zip(b.coeffs()).enumerate() {
        prop_assert!(
            (x - y).abs() <= tol * (1.0 + x.abs()),
            "coefficient {}: {} vs {}",
            n,
            x,
            y
        );
    }
    Ok(())
}

proptest! {
    #[test]
    fn mul_commutes((a, b) in pair(16, None)) {
        assert_close(&(&a * &b), &(&b * &a), 1e-12)?;
    }

    #[test]
    fn mul_associates((a, b) in pair(16, None), seed in series(16, None)) {
        let c = seed.with_order(a.order());
        assert_close(&(&(&a * &b) * &c), &(&a * &(&b * &c)), 1e-12)?;
    }

    #[test]
    fn exp_of_sum_is_product((a, b) in pair(16, Some(0.0))) {
        let lhs = (&a + &b).exp_series().unwrap();
        let rhs = &a.exp_series().unwrap() * &b.exp_series().unwrap();
        assert_close(&lhs, &rhs, 1e-10)?;
    }

    #[test]
    fn sqrt_squares_back(s in series(16, Some(1.0))) {
        let root = s.sqrt_series().unwrap();
        assert_close(&(&root * &root), &s, 1e-9)?;
    }

    #[test]
    fn majorant_of_product_is_bounded((a, b) in pair(24, None), r in 0.0f64..0.999) {
        let lhs = (&a * &b).majorant().horner(r);
        let rhs = a.majorant().horner(r) * b.majorant().horner(r);
        prop_assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn subordinate_majorant_is_smaller(f in series(32, None), eps in 0.0f64..=1.0, m in 1u32..=4) {
        let grid = [0.05, 0.1, 0.2, 0.3, 1.0 / 3.0];
        prop_assert!(check_subordination_lemma(&f, SelfMap::new(eps, m).unwrap(), &grid).unwrap());
    }

    #[test]
    fn termwise_integral_matches_quadrature(g in series(32, None), r in 0.0f64..0.9) {
        let m = g.majorant();
        let termwise = m.integrate_from_zero().horner(r);
        let quad = gauss_kronrod(|t| m.horner(t), 0.0, r, 1e-12).unwrap().value;
        prop_assert!((termwise - quad).abs() <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn radius_integrals_are_monotone(spec in catalog_spec()) {
        let es = Arc::new(ExtremalSet::build(spec, DEFAULT_ORDER).unwrap());
        for kind in [RadiusIntegral::R, RadiusIntegral::P, RadiusIntegral::T, RadiusIntegral::Rs] {
            let mut last = 0.0;
            for i in 1..=10 {
                let v = kind.by_quadrature(&es, 0.06 * i as f64, 1e-10).unwrap().value;
                prop_assert!(v >= last, "{} decreased at step {}", kind, i);
                last = v;
            }
        }
    }

    #[test]
    fn solved_roots_are_smallest(spec in catalog_spec(), class_idx in 0usize..4) {
        let class = ClassId::ALL[class_idx];
        let opts = SolverOptions::default();
        let res = solve_radius(class, spec, opts).unwrap();
        prop_assert!(res.residual <= 1e-8);
        let problem = RadiusProblem::new(class, spec, opts).unwrap();
        if res.r_f > 1e-4 {
            prop_assert!(problem.lhs(res.r_f - 1e-4).unwrap() < problem.target);
        }
        prop_assert!(problem.lhs((res.r_f + 1e-4).min(1.0 - 1e-6)).unwrap() > problem.target);
        prop_assert_eq!(res.capped, res.r_f.min(1.0 / 3.0));
    }
}

#[test]
fn campaigns_are_byte_deterministic() {
    let spec = PhiSpec::strongly(0.5).unwrap();
    for class in ClassId::ALL {
        let a = run_campaign(class, spec, 30, 7, None, SolverOptions::default()).unwrap();
        let b = run_campaign(class, spec, 30, 7, None, SolverOptions::default()).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }
}
