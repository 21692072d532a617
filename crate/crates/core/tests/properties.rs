mod common;

use common::{dirichlet_table, random_product, rng};
use ppsm::ci::{ci_report, ProductModel};
use ppsm::model::pairs;
use ppsm::shift::{post_shift_closed_form, pre_shift_closed_form, shift_report};
use ppsm::{tol, CoefficientVector, Outcome, ProbabilityTable, Sign};
use proptest::prelude::*;

fn table_strategy() -> impl Strategy<Value = ProbabilityTable> {
    any::<u64>().prop_map(|seed| dirichlet_table(&mut rng(seed)))
}

fn product_strategy() -> impl Strategy<Value = ProductModel> {
    (
        0.0..=1.0f64,
        0.0..=1.0f64,
        0.0..=1.0f64,
        0.0..=1.0f64,
        0.0..=1.0f64,
    )
        .prop_map(|(a, b, c, d, e)| ProductModel::new(a, [b, c], [d, e]).unwrap())
}

/// Brute-force `E[s | event]` by enumerating outcomes that satisfy `keep`.
fn brute_mean(t: &ProbabilityTable, keep: impl Fn(Outcome) -> bool) -> Option<f64> {
    let (mut mass, mut acc) = (0.0, 0.0);
    for o in Outcome::all().filter(|&o| keep(o)) {
        mass += t.get(o);
        acc += o.s.value() * t.get(o);
    }
    (mass > tol::NULL_EVENT).then(|| acc / mass)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn coefficient_round_trip(t in table_strategy()) {
        let back = t.coefficients().to_table().unwrap();
        prop_assert!(back.max_abs_diff(&t) <= 1e-12);
        let c = t.coefficients();
        prop_assert!(back.coefficients().max_abs_diff(&c) <= 1e-12);
        prop_assert!(c.as_array().iter().all(|v| v.abs() <= 1.0 + 1e-12));
    }

    #[test]
    fn closed_forms_agree_with_summation(t in table_strategy()) {
        let c = t.coefficients();
        let r = shift_report(&t).unwrap();
        for psi in Sign::BOTH {
            let a = r.pre(psi).unwrap();
            let b = pre_shift_closed_form(&c, psi).unwrap();
            prop_assert!((a - b).abs() <= 1e-12);
            prop_assert!((a - brute_mean(&t, |o| o.psi == psi).unwrap()).abs() <= 1e-12);
        }
        for (psi, phi) in pairs() {
            let a = r.post(psi, phi).unwrap();
            let b = post_shift_closed_form(&c, psi, phi).unwrap();
            prop_assert!((a - b).abs() <= 1e-12);
            let brute = brute_mean(&t, |o| o.psi == psi && o.phi == phi).unwrap();
            prop_assert!((a - brute).abs() <= 1e-12);
        }
    }

    #[test]
    fn shifts_are_bounded(t in table_strategy()) {
        let r = shift_report(&t).unwrap();
        for (psi, phi) in pairs() {
            prop_assert!(r.pre(psi).unwrap().abs() <= 1.0);
            prop_assert!(r.post(psi, phi).unwrap().abs() <= 1.0);
        }
    }

    #[test]
    fn anomaly_implies_correlation(t in table_strategy()) {
        let r = shift_report(&t).unwrap();
        if r.apss() {
            prop_assert!(!ci_report(&t).is_ci);
        }
        // margin witnesses and the flag agree
        let any = pairs().iter().any(|&(a, b)| r.margin(a, b).unwrap() > tol::ANOMALY);
        prop_assert_eq!(any, r.apss());
    }

    #[test]
    fn product_models_have_no_anomaly(m in product_strategy()) {
        let t = m.table();
        let ci = ci_report(&t);
        prop_assert!(ci.is_ci);
        let r = shift_report(&t).unwrap();
        for (psi, phi) in pairs() {
            if let (Some(pre), Some(post)) = (r.pre(psi), r.post(psi, phi)) {
                prop_assert!(r.margin(psi, phi).unwrap() <= tol::CONDITIONAL_INDEPENDENCE);
                prop_assert!((post - pre).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn paper_residuals_decide_ci_when_c1_vanishes(
        s_plus in prop::array::uniform2(0.0..=1.0f64),
        phi_plus in prop::array::uniform2(0.0..=1.0f64),
        mix in 0.0..=1.0f64,
        seed in any::<u64>(),
    ) {
        // A product model with Pr(psi) = 1/2, optionally blended toward a random
        // c1 = 0 table to break independence.
        let product = ProductModel::new(0.5, s_plus, phi_plus).unwrap().table();
        let noise = dirichlet_table(&mut rng(seed));
        let mut c = [0.0; 7];
        for (k, v) in c.iter_mut().enumerate() {
            *v = (1.0 - mix) * product.coefficients().as_array()[k]
                + mix * noise.coefficients().as_array()[k];
        }
        c[0] = 0.0;
        let c = CoefficientVector::new(c);
        // Blending two valid tables and zeroing c1 can leave the polytope; skip those.
        prop_assume!(c.is_valid());
        let t = c.to_table().unwrap();
        let r = ci_report(&t);
        let (r6, r7) = r.paper_residuals;
        let by_coefficients = r6 <= tol::CONDITIONAL_INDEPENDENCE && r7 <= tol::CONDITIONAL_INDEPENDENCE;
        prop_assert_eq!(r.is_ci, by_coefficients);
    }

    #[test]
    fn general_residuals_vanish_on_product_models(m in product_strategy()) {
        let r = ci_report(&m.table());
        prop_assert!(r.general_residuals.0 <= 1e-12 && r.general_residuals.1 <= 1e-12);
    }

    #[test]
    fn margins_invariant_under_s_flip(t in table_strategy()) {
        let a = shift_report(&t).unwrap();
        let b = shift_report(&t.flip_s()).unwrap();
        for (psi, phi) in pairs() {
            prop_assert!((a.margin(psi, phi).unwrap() - b.margin(psi, phi).unwrap()).abs() <= 1e-15);
        }
    }

    #[test]
    fn marginals_match_coefficient_formula(t in table_strategy()) {
        let c = t.coefficients();
        let m = t.marginal_psiphi();
        for (psi, phi) in pairs() {
            let (a, b) = (psi.value(), phi.value());
            let expected = 0.25 * (1.0 + c.get(1) * a + c.get(3) * b + c.get(5) * a * b);
            prop_assert!((m.get(psi, phi) - expected).abs() <= 1e-12);
        }
    }
}

#[test]
fn no_anomaly_over_many_product_models() {
    let mut r = rng(2024);
    let mut worst_margin = f64::NEG_INFINITY;
    for _ in 0..100_000 {
        let t = random_product(&mut r).table();
        let rep = shift_report(&t).unwrap();
        assert!(ci_report(&t).is_ci);
        for (psi, phi) in pairs() {
            if let Some(m) = rep.margin(psi, phi) {
                worst_margin = worst_margin.max(m);
                let gap = (rep.post(psi, phi).unwrap() - rep.pre(psi).unwrap()).abs();
                assert!(gap <= 1e-10, "post != pre by {gap}");
            }
        }
    }
    assert!(
        worst_margin <= tol::CONDITIONAL_INDEPENDENCE,
        "{worst_margin}"
    );
}
