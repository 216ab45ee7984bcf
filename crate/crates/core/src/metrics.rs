//! Outage probability and average capacity of the two-user MAC.
//!
//! Clean MAC: outage when `½log₂(1 + γ1 + γ2) ≤ R_t`. Doubly dirty MAC in the
//! strong-interference limit: outage when `½log₂(1 + min(γ1, γ2)) ≤ R_t`.
//! Both reduce to an SNR threshold `γ_t = 2^{2R_t} - 1`.
//!
//! Every metric offers several evaluation routes:
//!
//! | metric | closed | quadrature | series | mc |
//! |---|---|---|---|---|
//! | OP clean, independent | bivariate G | yes | | yes |
//! | OP dirty, independent | CDF composition | yes | | yes |
//! | OP clean, Clayton | | yes | | yes |
//! | OP dirty, Clayton | CDF composition | yes | | yes |
//! | AC clean, independent | | yes | yes | yes |
//! | AC dirty, independent | univariate + bivariate G | yes | | yes |
//! | AC clean, Clayton | | yes | | yes |
//! | AC dirty, Clayton | | yes | | yes |
//!
//! The outage "quadrature" route for the dirty MAC obtains each marginal CDF
//! by integrating the PDF, so it shares no code path with the closed route.

use std::cell::Cell;
use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::copula::DependenceModel;
use crate::fading::FadingParams;
use crate::mcsim::{estimate_ac, estimate_op, estimate_rho, McConfig};
use crate::meijer::forms::{ac_clean_series, ac_dirty_independent_closed, op_clean_independent_closed, SeriesError, TermError};
use crate::meijer::MeijerError;
use crate::quad::{QuadError, QuadResult, Quadrature};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    Clean,
    #[serde(rename = "dirty")]
    DoublyDirty,
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scenario::Clean => "clean",
            Scenario::DoublyDirty => "dirty",
        })
    }
}

impl FromStr for Scenario {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "clean" => Ok(Scenario::Clean),
            "dirty" | "doubly-dirty" => Ok(Scenario::DoublyDirty),
            _ => Err(format!("unknown scenario '{s}' (expected clean or dirty)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "closed")]
    ClosedForm,
    #[serde(rename = "quadrature")]
    Quadrature,
    #[serde(rename = "series")]
    Series,
    #[serde(rename = "mc")]
    MonteCarlo,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::ClosedForm, Method::Quadrature, Method::Series, Method::MonteCarlo];

    pub fn name(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed",
            Method::Quadrature => "quadrature",
            Method::Series => "series",
            Method::MonteCarlo => "mc",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method '{s}' (expected closed, quadrature, series or mc)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    NotConverged,
}

impl Status {
    pub fn name(&self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::NotConverged => "not_converged",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub err: f64,
    pub method: Method,
    pub status: Status,
}

impl Estimate {
    pub fn new(value: f64, err: f64, method: Method) -> Self {
        Self {
            value,
            err,
            method,
            status: Status::Ok,
        }
    }

    fn from_quad(r: &QuadResult, extra_err: f64, converged: bool) -> Self {
        Self {
            value: r.value,
            err: r.err_estimate + extra_err,
            method: Method::Quadrature,
            status: if r.converged && converged { Status::Ok } else { Status::NotConverged },
        }
    }

    fn probability(mut self) -> Self {
        self.value = self.value.clamp(0.0, 1.0);
        self
    }

    fn nonnegative(mut self) -> Self {
        self.value = self.value.max(0.0);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("method '{method}' is not available for {metric}")]
    Unavailable { metric: &'static str, method: Method },
    #[error("{metric} needs {expected} links")]
    Dependence { metric: &'static str, expected: &'static str },
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error(transparent)]
    Meijer(#[from] MeijerError),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Quad(#[from] QuadError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MacScenario {
    pub scenario: Scenario,
    pub link1: FadingParams,
    pub link2: FadingParams,
    pub dependence: DependenceModel,
    /// Target sum rate `R_t` in bits per channel use.
    pub rate_threshold: f64,
}

impl MacScenario {
    pub fn new(
        scenario: Scenario,
        link1: FadingParams,
        link2: FadingParams,
        dependence: DependenceModel,
        rate_threshold: f64,
    ) -> Result<Self, MetricError> {
        if !(rate_threshold.is_finite() && rate_threshold > 0.0) {
            return Err(MetricError::Invalid(format!("rate threshold must be positive, got {rate_threshold}")));
        }
        Ok(Self {
            scenario,
            link1,
            link2,
            dependence,
            rate_threshold,
        })
    }

    /// `γ_t = 2^{2R_t} - 1`.
    pub fn gamma_t(&self) -> f64 {
        gamma_threshold(self.rate_threshold)
    }

    pub fn with_dependence(&self, dependence: DependenceModel) -> Self {
        Self { dependence, ..*self }
    }

    pub fn with_scenario(&self, scenario: Scenario) -> Self {
        Self { scenario, ..*self }
    }
}

pub fn gamma_threshold(rate: f64) -> f64 {
    (2.0 * rate * LN_2).exp_m1()
}

/// SNR whose `½log₂(1 + ·)` bounds the sum rate.
pub fn effective_snr(scenario: Scenario, g1: f64, g2: f64) -> f64 {
    match scenario {
        Scenario::Clean => g1 + g2,
        Scenario::DoublyDirty => g1.min(g2),
    }
}

/// Instantaneous sum-rate bound in bits per channel use.
pub fn capacity(scenario: Scenario, g1: f64, g2: f64) -> f64 {
    half_log2_1p(effective_snr(scenario, g1, g2))
}

fn half_log2_1p(x: f64) -> f64 {
    0.5 * x.ln_1p() / LN_2
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    /// Relative tolerance for quadrature routes.
    pub tol: f64,
    pub mc: McConfig,
    /// Term cap for the series route.
    pub series_terms: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            mc: McConfig {
                n_samples: 1_000_000,
                seed: 1,
                batch: McConfig::DEFAULT_BATCH,
            },
            series_terms: 200,
        }
    }
}

impl EvalOptions {
    fn quad(&self) -> Quadrature {
        Quadrature::new(self.tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Op,
    Ac,
}

/// Methods implemented for a quantity, scenario and dependence kind.
pub fn available_methods(quantity: Quantity, scenario: Scenario, independent: bool) -> &'static [Method] {
    use Method::*;
    match (quantity, scenario, independent) {
        (Quantity::Op, _, true) => &[ClosedForm, Quadrature, MonteCarlo],
        (Quantity::Op, Scenario::Clean, false) => &[Quadrature, MonteCarlo],
        (Quantity::Op, Scenario::DoublyDirty, false) => &[ClosedForm, Quadrature, MonteCarlo],
        (Quantity::Ac, Scenario::Clean, true) => &[Quadrature, Series, MonteCarlo],
        (Quantity::Ac, Scenario::DoublyDirty, true) => &[ClosedForm, Quadrature, MonteCarlo],
        (Quantity::Ac, _, false) => &[Quadrature, MonteCarlo],
    }
}

fn require(s: &MacScenario, metric: &'static str, independent: bool) -> Result<(), MetricError> {
    if s.dependence.is_independent() != independent {
        return Err(MetricError::Dependence {
            metric,
            expected: if independent { "independent" } else { "Clayton-coupled" },
        });
    }
    Ok(())
}

fn unavailable(metric: &'static str, method: Method) -> MetricError {
    MetricError::Unavailable { metric, method }
}

/// Outage probability for the scenario's MAC variant and dependence.
pub fn outage_probability(s: &MacScenario, method: Method, opts: &EvalOptions) -> Result<Estimate, MetricError> {
    match (s.scenario, s.dependence.is_independent()) {
        (Scenario::Clean, true) => op_clean_independent(s, method, opts),
        (Scenario::DoublyDirty, true) => op_dirty_independent(s, method, opts),
        (Scenario::Clean, false) => op_clean_correlated(s, method, opts),
        (Scenario::DoublyDirty, false) => op_dirty_correlated(s, method, opts),
    }
}

/// Average capacity for the scenario's MAC variant and dependence.
pub fn average_capacity(s: &MacScenario, method: Method, opts: &EvalOptions) -> Result<Estimate, MetricError> {
    match (s.scenario, s.dependence.is_independent()) {
        (Scenario::Clean, true) => ac_clean_independent(s, method, opts),
        (Scenario::DoublyDirty, true) => ac_dirty_independent(s, method, opts),
        (Scenario::Clean, false) => ac_clean_correlated(s, method, opts),
        (Scenario::DoublyDirty, false) => ac_dirty_correlated(s, method, opts),
    }
}

/// `P(γ1 + γ2 ≤ γ_t)` for independent links.
pub fn op_clean_independent(s: &MacScenario, method: Method, opts: &EvalOptions) -> Result<Estimate, MetricError> {
    const NAME: &str = "clean-MAC outage (independent)";
    require(s, NAME, true)?;
    let sc = s.with_scenario(Scenario::Clean);
    let gt = s.gamma_t();
    let (p1, p2) = (s.link1, s.link2);
    let e = match method {
        Method::Quadrature => {
            // F1(γ_t - x) vanishes for x > γ_t.
            let pts = breaks(0.0, &marks(&[(&p2, false, gt), (&p1, true, gt)]), gt);
            let r = opts.quad().finite_with_breaks(|x| p1.cdf(gt - x) * p2.pdf(x), &pts)?;
            Estimate::from_quad(&r, 0.0, true)
        }
        Method::ClosedForm => {
            let (v, err) = op_clean_independent_closed(&p1, &p2, gt)?;
            Estimate::new(v, err, Method::ClosedForm)
        }
        Method::MonteCarlo => estimate_op(&sc, &opts.mc),
        Method::Series => return Err(unavailable(NAME, method)),
    };
    Ok(e.probability())
}

/// `P(min(γ1, γ2) ≤ γ_t)` for independent links.
pub fn op_dirty_independent(s: &MacScenario, method: Method, opts: &EvalOptions) -> Result<Estimate, MetricError> {
    const NAME: &str = "dirty-MAC outage (independent)";
    require(s, NAME, true)?;
    op_dirty(s, method, opts, NAME)
}

/// `F1 + F2 - C(F1, F2)` at `γ_t` for Clayton-coupled links.
pub fn op_dirty_correlated(s: &MacScenario, method: Method, opts: &EvalOptions) -> Result<Estimate, MetricError> {
    const NAME: &str = "dirty-MAC outage (Clayton)";
    require(s, NAME, false)?;
    op_dirty(s, method, opts, NAME)
}

fn op_dirty(s: &MacScenario, method: Method, opts: &EvalOptions, name: &'static str) -> Result<Estimate, MetricError> {
    let gt = s.gamma_t();
    let compose = |f1: f64, f2: f64| match s.dependence {
        DependenceModel::Independent => 1.0 - (1.0 - f1) * (1.0 - f2),
        model => f1 + f2 - model.cdf(f1, f2),
    };
    let e = match method {
        Method::ClosedForm => Estimate::new(compose(s.link1.cdf(gt), s.link2.cdf(gt)), 0.0, Method::ClosedForm),
        Method::Quadrature => {
            let q = opts.quad();
            let r1 = q.finite_with_breaks(|x| s.link1.pdf(x), &breaks(0.0, &marks(&[(&s.link1, false, gt)]), gt))?;
            let r2 = q.finite_with_breaks(|x| s.link2.pdf(x), &breaks(0.0, &marks(&[(&s.link2, false, gt)]), gt))?;
            let v = compose(r1.value.min(1.0), r2.value.min(1.0));
            // C has Lipschitz constant 1 in each argument.
            let r = QuadResult {
                value: v,
                err_estimate: 2.0 * (r1.err_estimate + r2.err_estimate),
                evaluations: r1.evaluations + r2.evaluations,
                converged: r1.converged && r2.converged,
            };
            Estimate::from_quad(&r, 0.0, true)
        }
        Method::MonteCarlo => estimate_op(&s.with_scenario(Scenario::DoublyDirty), &opts.mc),
        Method::Series => return Err(unavailable(name, method)),
    };
    Ok(e.probability())
}

/// `∫_0^{γ_t} ∂C/∂u1(F1(x), F2(γ_t - x)) f1(x) dx`, the copula form of
/// `P(γ1 + γ2 ≤ γ_t)` written in the SNR variable `x = F1⁻¹(u1)`.
pub fn op_clean_correlated(s: &MacScenario, method: Method, opts: &EvalOptions) -> Result<Estimate, MetricError> {
    const NAME: &str = "clean-MAC outage (Clayton)";
    require(s, NAME, false)?;
    let e = match method {
        Method::Quadrature => op_clean_copula_quadrature(s, opts)?,
        Method::MonteCarlo => estimate_op(&s.with_scenario(Scenario::Clean), &opts.mc),
        _ => return Err(unavailable(NAME, method)),
    };
    Ok(e.probability())
}

fn op_clean_copula_quadrature(s: &MacScenario, opts: &EvalOptions) -> Result<Estimate, MetricError> {
    let gt = s.gamma_t();
    let (p1, p2, model) = (s.link1, s.link2, s.dependence);
    let integrand = |x: f64| {
        let f = p1.pdf(x);
        if f == 0.0 {
            return 0.0;
        }
        model.partial_u1(p1.cdf(x), p2.cdf(gt - x)) * f
    };
    // The conditional CDF steps from 0 to 1 around F2(γ_t - x) = F1(x) when
    // dependence is strong; split there.
    let kink = bisect(|x| p1.cdf(x) - p2.cdf(gt - x), 0.0, gt);
    let mut inner = marks(&[(&p1, false, gt), (&p2, true, gt)]);
    inner.push(kink);
    let r = opts.quad().finite_with_breaks(integrand, &breaks(0.0, &inner, gt))?;
    Ok(Estimate::from_quad(&r, 0.0, true))
}

/// Root of an increasing `h` on `[lo, hi]` by bisection, or `None`.
fn bisect(h: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Option<f64> {
    if !(h(lo) < 0.0 && h(hi) > 0.0) {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Probability levels whose quantiles mark where a link's mass sits.
const MARK_LEVELS: [f64; 3] = [1e-4, 0.5, 1.0 - 1e-4];

/// Quantile marks of each link, reflected to `at - q` when flagged.
fn marks(links: &[(&FadingParams, bool, f64)]) -> Vec<Option<f64>> {
    links
        .iter()
        .flat_map(|&(p, reflect, at)| {
            MARK_LEVELS.map(|u| {
                let q = p.quantile(u);
                Some(if reflect { at - q } else { q })
            })
        })
        .collect()
}

fn tail_marks(links: &[&FadingParams]) -> Vec<Option<f64>> {
    links.iter().flat_map(|p| MARK_LEVELS.map(|u| Some(p.quantile(u)))).collect()
}

/// Sorted interior points of `(0, ∞)`.
fn open_breaks(pts: &[Option<f64>]) -> Vec<f64> {
    let mut b = breaks(0.0, pts, f64::INFINITY);
    b.pop();
    b.remove(0);
    b
}

fn breaks(lo: f64, inner: &[Option<f64>], hi: f64) -> Vec<f64> {
    let mut pts = vec![lo];
    let mut mids: Vec<f64> = inner.iter().flatten().copied().filter(|&x| x > lo && x < hi).collect();
    mids.sort_by(f64::total_cmp);
    mids.dedup();
    pts.extend(mids);
    pts.push(hi);
    decades(pts)
}

/// Inserts powers-of-ten steps between positive points more than a decade
/// apart, so power-law tails are not sampled too coarsely.
fn decades(pts: Vec<f64>) -> Vec<f64> {
    let mut out = Vec::with_capacity(pts.len());
    for w in pts.windows(2) {
        out.push(w[0]);
        let (a, b) = (w[0], w[1]);
        if a > 0.0 && b.is_finite() {
            let mut x = a * 10.0;
            while x < b / 3.0 {
                out.push(x);
                x *= 10.0;
            }
        }
    }
    out.extend(pts.last());
    out
}

/// Average of `½log₂(1 + γ1 + γ2)` for independent links.
pub fn ac_clean_independent(s: &MacScenario, method: Method, opts: &EvalOptions) -> Result<Estimate, MetricError> {
    const NAME: &str = "clean-MAC capacity (independent)";
    require(s, NAME, true)?;
    let e = match method {
        Method::Quadrature => ac_clean_quadrature(s, opts)?,
        Method::Series => {
            let (v, err) = ac_clean_series(&s.link1, &s.link2, opts.series_terms)?;
            Estimate::new(v, err, Method::Series)
        }
        Method::MonteCarlo => estimate_ac(&s.with_scenario(Scenario::Clean), &opts.mc),
        Method::ClosedForm => return Err(unavailable(NAME, method)),
    };
    Ok(e.nonnegative())
}

/// Average of `½log₂(1 + γ1 + γ2)` for Clayton-coupled links.
pub fn ac_clean_correlated(s: &MacScenario, method: Method, opts: &EvalOptions) -> Result<Estimate, MetricError> {
    const NAME: &str = "clean-MAC capacity (Clayton)";
    require(s, NAME, false)?;
    let e = match method {
        Method::Quadrature => ac_clean_quadrature(s, opts)?,
        Method::MonteCarlo => estimate_ac(&s.with_scenario(Scenario::Clean), &opts.mc),
        _ => return Err(unavailable(NAME, method)),
    };
    Ok(e.nonnegative())
}

/// `∫∫ ½log₂(1 + x + y) c(F1(x), F2(y)) f1(x) f2(y) dy dx`, inner integral
/// split where `F2(y) = F1(x)`, along which the Clayton density peaks.
fn ac_clean_quadrature(s: &MacScenario, opts: &EvalOptions) -> Result<Estimate, MetricError> {
    let (p1, p2, model) = (s.link1, s.link2, s.dependence);
    let inner_q = Quadrature::new(opts.tol * 0.1);
    let worst = Cell::new(0.0f64);
    let ok = Cell::new(true);
    let fail: Cell<Option<QuadError>> = Cell::new(None);
    let outer = |x: f64| -> f64 {
        let f1 = p1.pdf(x);
        if f1 == 0.0 || !f1.is_finite() {
            return 0.0;
        }
        let u1 = p1.cdf(x);
        let inner = |y: f64| {
            let f2 = p2.pdf(y);
            if f2 == 0.0 {
                return 0.0;
            }
            half_log2_1p(x + y) * model.density(u1, p2.cdf(y)) * f2
        };
        let mut pts = tail_marks(&[&p2]);
        if !model.is_independent() {
            pts.push(Some(p2.quantile(u1)));
        }
        let r = inner_q.semi_infinite_with_breaks(inner, 0.0, &open_breaks(&pts));
        match r {
            Ok(r) => {
                worst.set(worst.get().max(r.err_estimate * f1));
                ok.set(ok.get() && r.converged);
                f1 * r.value
            }
            Err(e) => {
                fail.set(Some(e));
                f64::NAN
            }
        }
    };
    let r = opts.quad().semi_infinite_with_breaks(outer, 0.0, &open_breaks(&tail_marks(&[&p1])));
    if let Some(e) = fail.take() {
        return Err(e.into());
    }
    let r = r?;
    Ok(Estimate::from_quad(&r, worst.get(), ok.get()))
}

/// Average of `½log₂(1 + min(γ1, γ2))` for independent links.
pub fn ac_dirty_independent(s: &MacScenario, method: Method, opts: &EvalOptions) -> Result<Estimate, MetricError> {
    const NAME: &str = "dirty-MAC capacity (independent)";
    require(s, NAME, true)?;
    let (p1, p2) = (s.link1, s.link2);
    let e = match method {
        Method::Quadrature => {
            let f = |g: f64| half_log2_1p(g) * (p1.pdf(g) * p2.sf(g) + p2.pdf(g) * p1.sf(g));
            let r = opts.quad().semi_infinite_with_breaks(f, 0.0, &open_breaks(&tail_marks(&[&p1, &p2])))?;
            Estimate::from_quad(&r, 0.0, true)
        }
        Method::ClosedForm => {
            let (v, err) = ac_dirty_independent_closed(&p1, &p2)?;
            Estimate::new(v, err, Method::ClosedForm)
        }
        Method::MonteCarlo => estimate_ac(&s.with_scenario(Scenario::DoublyDirty), &opts.mc),
        Method::Series => return Err(unavailable(NAME, method)),
    };
    Ok(e.nonnegative())
}

/// Average of `½log₂(1 + min(γ1, γ2))` for Clayton-coupled links.
///
/// Evaluated as `∫_0^∞ P(γ1 > x, γ2 > x) / (2 ln 2 (1 + x)) dx`, with the joint
/// survival `1 - F1 - F2 + C(F1, F2)`. This equals the unit-square integral
/// of `½log₂(1 + min(F1⁻¹(u1), F2⁻¹(u2))) c(u1, u2)` (see
/// [`ac_dirty_unit_square`]) after integrating by parts, and needs neither
/// quantiles nor the density.
pub fn ac_dirty_correlated(s: &MacScenario, method: Method, opts: &EvalOptions) -> Result<Estimate, MetricError> {
    const NAME: &str = "dirty-MAC capacity (Clayton)";
    require(s, NAME, false)?;
    let (p1, p2, model) = (s.link1, s.link2, s.dependence);
    let e = match method {
        Method::Quadrature => {
            let f = |x: f64| {
                let (f1, f2) = (p1.cdf(x), p2.cdf(x));
                let joint_sf = (1.0 - f1 - f2 + model.cdf(f1, f2)).max(0.0);
                0.5 * joint_sf / (LN_2 * (1.0 + x))
            };
            let r = opts.quad().semi_infinite_with_breaks(f, 0.0, &open_breaks(&tail_marks(&[&p1, &p2])))?;
            Estimate::from_quad(&r, 0.0, true)
        }
        Method::MonteCarlo => estimate_ac(&s.with_scenario(Scenario::DoublyDirty), &opts.mc),
        _ => return Err(unavailable(NAME, method)),
    };
    Ok(e.nonnegative())
}

/// `∫∫_{[0,1]²} ½log₂(1 + min(F1⁻¹(u1), F2⁻¹(u2))) c(u1, u2) du2 du1`, the
/// direct copula form of the doubly-dirty capacity. Slow; kept as a check.
pub fn ac_dirty_unit_square(s: &MacScenario, tol: f64) -> Result<QuadResult, QuadError> {
    let (p1, p2, model) = (s.link1, s.link2, s.dependence);
    let inner_q = Quadrature::new(tol * 0.1);
    let outer = |u1: f64| {
        let q1 = p1.quantile(u1);
        // Kink where F2⁻¹(u2) crosses q1, ridge of the density at u2 = u1.
        let kink = p2.cdf(q1);
        let pts = breaks(0.0, &[Some(kink), Some(u1)], 1.0);
        inner_q
            .finite_with_breaks(|u2| half_log2_1p(q1.min(p2.quantile(u2))) * model.density(u1, u2), &pts)
            .map(|r| r.value)
            .unwrap_or(f64::NAN)
    };
    Quadrature::new(tol).finite(outer, 0.0, 1.0)
}

/// Pearson correlation of Clayton-coupled SNRs by Monte Carlo.
pub fn correlation_coefficient(
    link1: &FadingParams,
    link2: &FadingParams,
    theta: f64,
    n_samples: u64,
    seed: u64,
) -> Result<Estimate, MetricError> {
    if n_samples < 10_000 {
        return Err(MetricError::Invalid(format!("need at least 10000 samples, got {n_samples}")));
    }
    let model = DependenceModel::clayton(theta).map_err(|e| MetricError::Invalid(e.to_string()))?;
    let cfg = McConfig::new(n_samples, seed).map_err(|e| MetricError::Invalid(e.to_string()))?;
    Ok(estimate_rho(link1, link2, model, &cfg))
}
