//! Sweep, correlation and scatter commands.

use fmac_core::copula::DependenceModel;
use fmac_core::mcsim::scatter;
use fmac_core::metrics::{
    available_methods, average_capacity, capacity, correlation_coefficient, outage_probability, EvalOptions,
    Quantity, Status,
};
use fmac_core::{Estimate, FadingParams, MacScenario, McConfig, Method, Scenario};
use rayon::prelude::*;

use crate::args::{CorrArgs, DependenceArg, DependenceArgs, RunArgs, ScatterArgs, SweepArgs};
use crate::output::{Cell, Table};
use crate::reference::{CorrRow, CORR_ROWS};

/// Failure of a command before any numbers are produced.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecError(pub String);

impl<E: std::fmt::Display> From<E> for SpecError {
    fn from(e: E) -> Self {
        SpecError(e.to_string())
    }
}

/// Output table plus whether every row converged.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub table: Table,
    pub all_ok: bool,
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

fn dependence(d: &DependenceArgs) -> Result<DependenceModel, SpecError> {
    match (d.dependence, d.theta) {
        (DependenceArg::Independent, None) => Ok(DependenceModel::Independent),
        (DependenceArg::Independent, Some(_)) => Err(SpecError("--theta needs --dependence clayton".into())),
        (DependenceArg::Clayton, Some(t)) => Ok(DependenceModel::clayton(t)?),
        (DependenceArg::Clayton, None) => Err(SpecError("--dependence clayton needs --theta".into())),
    }
}

fn mc_config(run: &RunArgs) -> Result<McConfig, SpecError> {
    Ok(McConfig::with_batch(run.samples, run.seed, run.batch)?)
}

fn link(m: f64, ms: f64, snr_db: f64) -> Result<FadingParams, SpecError> {
    if !snr_db.is_finite() {
        return Err(SpecError(format!("SNR must be finite, got {snr_db} dB")));
    }
    Ok(FadingParams::new(m, ms, db_to_linear(snr_db))?)
}

/// OP or AC sweep over the mean SNR of link 1.
pub fn sweep(quantity: Quantity, a: &SweepArgs) -> Result<Report, SpecError> {
    let model = dependence(&a.dependence)?;
    let scenario: Scenario = a.scenario.into();
    if a.methods.is_empty() {
        return Err(SpecError("--methods is empty".into()));
    }
    let allowed = available_methods(quantity, scenario, model.is_independent());
    if let Some(m) = a.methods.iter().find(|m| !allowed.contains(m)) {
        let names: Vec<&str> = allowed.iter().map(Method::name).collect();
        return Err(SpecError(format!(
            "method '{m}' is not available here (available: {})",
            names.join(", ")
        )));
    }
    if quantity == Quantity::Op && a.normalize_awgn {
        return Err(SpecError("--normalize-awgn applies to ac only".into()));
    }
    if !(a.tol > 0.0 && a.tol < 1.0) {
        return Err(SpecError(format!("--tol must be in (0, 1), got {}", a.tol)));
    }
    let rate = match (quantity, a.rate) {
        (Quantity::Op, None) => return Err(SpecError("op requires --rate".into())),
        // Capacity does not depend on the threshold; any valid rate will do.
        (_, r) => r.unwrap_or(1.0),
    };
    let base = mc_config(&a.run)?;
    let points = a.snr.points();
    let mut scenarios = Vec::with_capacity(points.len());
    for &db in &points {
        let l1 = link(a.m1, a.ms1, db)?;
        let l2 = link(a.m2, a.ms2, a.link2.snr_db(db))?;
        scenarios.push(MacScenario::new(scenario, l1, l2, model, rate)?);
    }
    let tasks: Vec<(usize, Method)> = (0..points.len())
        .flat_map(|i| a.methods.iter().map(move |&m| (i, m)))
        .collect();
    let results: Vec<Result<Estimate, String>> = tasks
        .par_iter()
        .map(|&(i, method)| {
            let opts = EvalOptions {
                tol: a.tol,
                mc: base.for_point(i as u64),
                series_terms: a.series_terms,
            };
            let s = &scenarios[i];
            let r = match quantity {
                Quantity::Op => outage_probability(s, method, &opts),
                Quantity::Ac => average_capacity(s, method, &opts),
            };
            r.map_err(|e| e.to_string())
        })
        .collect();

    let mut cols = vec!["snr_db", "method", "value", "err", "status"];
    if a.normalize_awgn {
        cols.push("awgn_normalized");
    }
    let mut table = Table::new(cols);
    let mut all_ok = true;
    for (&(i, method), r) in tasks.iter().zip(results) {
        let s = &scenarios[i];
        let (value, err, status) = match r {
            Ok(e) => (e.value, e.err, e.status.name().to_string()),
            Err(msg) => (f64::NAN, f64::NAN, format!("error: {}", msg.replace(',', ";"))),
        };
        all_ok &= status == Status::Ok.name();
        let mut row = vec![
            Cell::Num(points[i]),
            Cell::Text(method.name().into()),
            Cell::Num(value),
            Cell::Num(err),
            Cell::Text(status),
        ];
        if a.normalize_awgn {
            row.push(Cell::Num(value / capacity(scenario, s.link1.mean_snr(), s.link2.mean_snr())));
        }
        table.push(row);
    }
    Ok(Report { table, all_ok })
}

/// Correlation coefficients over the default grid or one parameter row.
pub fn corr(a: &CorrArgs) -> Result<Report, SpecError> {
    let rows: Vec<(f64, f64, f64, f64)> = match (a.m1, a.ms1, a.m2, a.ms2) {
        (None, None, None, None) => CORR_ROWS.iter().map(|r: &CorrRow| (r.m1, r.ms1, r.m2, r.ms2)).collect(),
        (Some(m1), Some(ms1), Some(m2), Some(ms2)) => vec![(m1, ms1, m2, ms2)],
        _ => return Err(SpecError("give all of --m1 --ms1 --m2 --ms2 or none".into())),
    };
    if a.thetas.is_empty() {
        return Err(SpecError("--thetas is empty".into()));
    }
    for &t in &a.thetas {
        DependenceModel::clayton(t)?;
    }
    let base = mc_config(&a.run)?;
    if base.n_samples < 10_000 {
        return Err(SpecError(format!("need at least 10000 samples, got {}", base.n_samples)));
    }
    let mut tasks = Vec::new();
    for &(m1, ms1, m2, ms2) in &rows {
        let l1 = link(m1, ms1, 0.0)?;
        let l2 = link(m2, ms2, 0.0)?;
        for &t in &a.thetas {
            tasks.push((l1, l2, t));
        }
    }
    let results: Vec<Estimate> = tasks
        .par_iter()
        .enumerate()
        .map(|(i, (l1, l2, t))| {
            let seed = base.for_point(i as u64).seed;
            correlation_coefficient(l1, l2, *t, base.n_samples, seed).expect("validated above")
        })
        .collect();
    let mut table = Table::new(vec!["m1", "ms1", "m2", "ms2", "theta", "rho", "se", "n"]);
    for ((l1, l2, t), e) in tasks.iter().zip(&results) {
        table.push(vec![
            Cell::Num(l1.m()),
            Cell::Num(l1.ms()),
            Cell::Num(l2.m()),
            Cell::Num(l2.ms()),
            Cell::Num(*t),
            Cell::Num(e.value),
            Cell::Num(e.err),
            Cell::Int(base.n_samples),
        ]);
    }
    Ok(Report { table, all_ok: true })
}

/// Coupled SNR pairs per Clayton parameter; θ = 0 draws independent pairs.
pub fn scatter_pairs(a: &ScatterArgs) -> Result<Report, SpecError> {
    let l1 = link(a.m1, a.ms1, a.snr1_db)?;
    let l2 = link(a.m2, a.ms2, a.snr2_db)?;
    if a.thetas.is_empty() {
        return Err(SpecError("--thetas is empty".into()));
    }
    let models: Vec<DependenceModel> = a
        .thetas
        .iter()
        .map(|&t| {
            if t == 0.0 {
                Ok(DependenceModel::Independent)
            } else {
                DependenceModel::clayton(t)
            }
        })
        .collect::<Result<_, _>>()?;
    let base = McConfig::new(a.n.max(1) as u64, a.run.seed)?;
    let sets: Vec<Vec<(f64, f64)>> = models
        .par_iter()
        .enumerate()
        .map(|(i, m)| scatter(&l1, &l2, *m, a.n, base.for_point(i as u64).seed))
        .collect();
    let mut table = Table::new(vec!["theta", "gamma1", "gamma2"]);
    for (t, pairs) in a.thetas.iter().zip(&sets) {
        for &(g1, g2) in pairs {
            table.push(vec![Cell::Num(*t), Cell::Num(g1), Cell::Num(g2)]);
        }
    }
    Ok(Report { table, all_ok: true })
}
