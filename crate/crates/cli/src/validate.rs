//! Cross-check suite behind `fmac validate`.

use fmac_core::copula::DependenceModel;
use fmac_core::meijer::meijer_g_real;
use fmac_core::metrics::{
    ac_clean_correlated, ac_clean_independent, ac_dirty_correlated, ac_dirty_independent, correlation_coefficient,
    op_clean_correlated, op_clean_independent, op_dirty_correlated, op_dirty_independent, EvalOptions,
};
use fmac_core::specfun::beta_regularized_inverse;
use fmac_core::specfun::{beta_regularized, BetaRegularizedQuery};
use fmac_core::{FadingParams, MacScenario, McConfig, Method, Scenario};
use rayon::prelude::*;
use serde::Serialize;

use crate::reference::{corr_tolerance, CORR_ROWS, CORR_THETAS};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub value: f64,
    pub reference: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub schema_version: u32,
    pub seed: u64,
    pub pass: bool,
    pub checks: Vec<Check>,
}

type CheckFn = fn(u64) -> Vec<Check>;

fn check(name: impl Into<String>, value: f64, reference: f64, tolerance: f64) -> Check {
    Check {
        name: name.into(),
        pass: (value - reference).abs() <= tolerance,
        value,
        reference,
        tolerance,
    }
}

fn failed(name: impl Into<String>, reason: impl std::fmt::Display) -> Check {
    Check {
        name: format!("{}: {reason}", name.into()),
        pass: false,
        value: f64::NAN,
        reference: f64::NAN,
        tolerance: 0.0,
    }
}

fn link(m: f64, ms: f64, g: f64) -> FadingParams {
    FadingParams::new(m, ms, g).expect("fixed parameters are valid")
}

fn meijer_identities(_: u64) -> Vec<Check> {
    let mut out = Vec::new();
    let mut g = |name: &str, m, n, a: &[f64], b: &[f64], z: f64, want: f64| {
        out.push(match meijer_g_real(m, n, a, b, z) {
            Ok(v) => check(format!("meijer {name} z={z}"), v, want, 1e-9 * want.abs().max(1e-300)),
            Err(e) => failed(format!("meijer {name} z={z}"), e),
        });
    };
    for z in [0.1, 1.0, 10.0] {
        g("log", 1, 2, &[1.0, 1.0], &[1.0, 0.0], z, (1.0 + z).ln());
        g("exp", 1, 0, &[], &[0.0], z, (-z).exp());
        g("power", 1, 1, &[0.0], &[0.0], z, 1.0 / (1.0 + z));
    }
    out
}

fn beta_round_trips(_: u64) -> Vec<Check> {
    let mut out = Vec::new();
    for &(a, b) in &[(2.0, 3.0), (0.5, 5.0), (7.0, 30.0)] {
        for &p in &[1e-6, 0.3, 0.999] {
            let name = format!("beta inverse a={a} b={b} p={p}");
            out.push(match beta_regularized_inverse(a, b, p).and_then(|x| BetaRegularizedQuery::new(a, b, x)) {
                Ok(q) => check(name, beta_regularized(q), p, 1e-9),
                Err(e) => failed(name, e),
            });
        }
    }
    out
}

fn triple_agreement(seed: u64) -> Vec<Check> {
    let l = link(2.0, 3.0, 10.0);
    let s = MacScenario::new(Scenario::Clean, l, l, DependenceModel::Independent, 2.5).expect("valid");
    let opts = EvalOptions {
        mc: McConfig::new(1_000_000, seed).expect("valid"),
        ..EvalOptions::default()
    };
    let run = |m| op_clean_independent(&s, m, &opts);
    match (run(Method::Quadrature), run(Method::ClosedForm), run(Method::MonteCarlo)) {
        (Ok(q), Ok(c), Ok(mc)) => vec![
            check("op clean closed vs quadrature", c.value, q.value, 1e-4),
            check("op clean mc vs quadrature", mc.value, q.value, 3.0 * mc.err),
        ],
        (q, c, mc) => vec![failed(
            "op clean triple agreement",
            format!("{:?} {:?} {:?}", q.err(), c.err(), mc.err()),
        )],
    }
}

fn capacity_closed_form(_: u64) -> Vec<Check> {
    let opts = EvalOptions::default();
    let mut out = Vec::new();
    for (l1, l2) in [(link(2.0, 3.0, 10.0), link(2.0, 3.0, 10.0)), (link(3.0, 5.0, 3.0), link(2.0, 4.0, 20.0))] {
        let s = MacScenario::new(Scenario::DoublyDirty, l1, l2, DependenceModel::Independent, 1.0).expect("valid");
        let name = format!("ac dirty closed vs quadrature {:?}", (l1.m(), l1.ms(), l2.m(), l2.ms()));
        out.push(
            match (
                ac_dirty_independent(&s, Method::ClosedForm, &opts),
                ac_dirty_independent(&s, Method::Quadrature, &opts),
            ) {
                (Ok(c), Ok(q)) => check(name, c.value, q.value, 1e-3 * q.value),
                (c, q) => failed(name, format!("{:?} {:?}", c.err(), q.err())),
            },
        );
    }
    out
}

fn independence_limits(_: u64) -> Vec<Check> {
    let opts = EvalOptions::default();
    let (l1, l2) = (link(2.0, 3.0, 10.0), link(3.0, 5.0, 5.0));
    let ind = MacScenario::new(Scenario::Clean, l1, l2, DependenceModel::Independent, 1.5).expect("valid");
    let cor = ind.with_dependence(DependenceModel::clayton(1e-4).expect("valid"));
    type Op = fn(&MacScenario, Method, &EvalOptions) -> Result<fmac_core::Estimate, fmac_core::metrics::MetricError>;
    let pairs: [(&str, Op, Op, Method, f64); 4] = [
        ("op clean", op_clean_independent, op_clean_correlated, Method::Quadrature, 1e-3),
        ("op dirty", op_dirty_independent, op_dirty_correlated, Method::ClosedForm, 1e-3),
        ("ac clean", ac_clean_independent, ac_clean_correlated, Method::Quadrature, 1e-2),
        ("ac dirty", ac_dirty_independent, ac_dirty_correlated, Method::Quadrature, 1e-2),
    ];
    pairs
        .iter()
        .map(|&(name, fi, fc, m, tol)| {
            let name = format!("independence limit {name}");
            match (fi(&ind, m, &opts), fc(&cor, m, &opts)) {
                (Ok(a), Ok(b)) => check(name, b.value, a.value, tol),
                (a, b) => failed(name, format!("{:?} {:?}", a.err(), b.err())),
            }
        })
        .collect()
}

fn correlation_spot_checks(seed: u64) -> Vec<Check> {
    // Rows (5,5), (2,5), (5,15) at θ = 40, 25, 40.
    [(1usize, 2usize), (4, 1), (10, 2)]
        .iter()
        .enumerate()
        .map(|(i, &(r, t))| {
            let row = &CORR_ROWS[r];
            let theta = CORR_THETAS[t];
            let s = McConfig::new(1_000_000, seed).expect("valid").for_point(i as u64).seed;
            let name = format!("rho m1={} ms1={} m2={} ms2={} theta={theta}", row.m1, row.ms1, row.m2, row.ms2);
            match correlation_coefficient(
                &link(row.m1, row.ms1, 1.0),
                &link(row.m2, row.ms2, 1.0),
                theta,
                1_000_000,
                s,
            ) {
                Ok(e) => check(name, e.value, row.rho[t], corr_tolerance(row)),
                Err(e) => failed(name, e),
            }
        })
        .collect()
}

const SUITE: [CheckFn; 6] = [
    meijer_identities,
    beta_round_trips,
    triple_agreement,
    capacity_closed_form,
    independence_limits,
    correlation_spot_checks,
];

pub fn run(seed: u64) -> ValidationReport {
    let groups: Vec<Vec<Check>> = SUITE.par_iter().map(|f| f(seed)).collect();
    let checks: Vec<Check> = groups.into_iter().flatten().collect();
    ValidationReport {
        schema_version: crate::output::SCHEMA_VERSION,
        seed,
        pass: checks.iter().all(|c| c.pass),
        checks,
    }
}
