use fmac_core::copula::DependenceModel;
use fmac_core::metrics::{op_dirty_correlated, op_dirty_independent, EvalOptions};
use fmac_core::{FadingParams, MacScenario, Method, Scenario};
use proptest::prelude::*;

fn shape() -> impl Strategy<Value = f64> {
    0.6f64..30.0
}

fn mean_snr() -> impl Strategy<Value = f64> {
    (-20.0f64..40.0).prop_map(|db| 10f64.powf(db / 10.0))
}

proptest! {
    #[test]
    fn quantile_inverts_cdf(m in shape(), ms in shape(), g in mean_snr(), u in 1e-6f64..(1.0 - 1e-6)) {
        let p = FadingParams::new(m, ms, g).unwrap();
        let x = p.quantile(u);
        prop_assert!(x > 0.0 && x.is_finite());
        prop_assert!((p.cdf(x) - u).abs() < 1e-9);
        prop_assert!((p.cdf(x) + p.sf(x) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn clayton_rectangles_have_nonnegative_mass(
        theta in 1e-3f64..60.0,
        a in 0.0f64..1.0, b in 0.0f64..1.0, c in 0.0f64..1.0, d in 0.0f64..1.0,
    ) {
        let cop = DependenceModel::clayton(theta).unwrap();
        let (u0, u1) = (a.min(b), a.max(b));
        let (v0, v1) = (c.min(d), c.max(d));
        let vol = cop.cdf(u1, v1) - cop.cdf(u0, v1) - cop.cdf(u1, v0) + cop.cdf(u0, v0);
        prop_assert!(vol >= -1e-14, "{vol}");
        prop_assert!(cop.cdf(a, c) >= a * c - 1e-15);
        prop_assert!(cop.cdf(a, c) <= a.min(c) + 1e-15);
    }

    #[test]
    fn conditional_quantile_inverts_partial(theta in 1e-3f64..60.0, u1 in 1e-6f64..1.0, w in 1e-6f64..(1.0 - 1e-6)) {
        let cop = DependenceModel::clayton(theta).unwrap();
        let u2 = cop.conditional_quantile(u1, w);
        prop_assert!((0.0..=1.0).contains(&u2));
        if u2 > 1e-300 && u2 < 1.0 {
            prop_assert!((cop.partial_u1(u1, u2) - w).abs() < 1e-8);
        }
    }

    #[test]
    fn dirty_outage_orderings(
        m1 in shape(), ms1 in shape(), m2 in shape(), ms2 in shape(),
        g1 in mean_snr(), g2 in mean_snr(), rate in 0.05f64..4.0, theta in 1e-3f64..60.0,
    ) {
        let l1 = FadingParams::new(m1, ms1, g1).unwrap();
        let l2 = FadingParams::new(m2, ms2, g2).unwrap();
        let opts = EvalOptions::default();
        let ind = MacScenario::new(Scenario::DoublyDirty, l1, l2, DependenceModel::Independent, rate).unwrap();
        let cor = ind.with_dependence(DependenceModel::clayton(theta).unwrap());
        let a = op_dirty_independent(&ind, Method::ClosedForm, &opts).unwrap().value;
        let b = op_dirty_correlated(&cor, Method::ClosedForm, &opts).unwrap().value;
        let gt = ind.gamma_t();
        let floor = l1.cdf(gt).max(l2.cdf(gt));
        prop_assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b));
        prop_assert!(b <= a + 1e-12, "{b} > {a}");
        prop_assert!(b >= floor - 1e-12 && a >= floor - 1e-12);
        let higher = MacScenario { rate_threshold: rate * 1.1, ..ind };
        prop_assert!(op_dirty_independent(&higher, Method::ClosedForm, &opts).unwrap().value >= a - 1e-15);
    }
}
