//! G-function representations of the F-fading quantities.
//!
//! With `B = 1/(Γ(m)Γ(m_s))` and `A = λB`:
//!
//! - CDF: `F(γ) = B G^{1,2}_{2,2}(λγ | 1-m_s, 1; m, 0)`
//! - PDF: `f(γ) = A G^{1,1}_{1,1}(λγ | -m_s; m-1)`
//! - Mellin transform: `∫ γ^{s-1} f(γ) dγ = A Γ(m-1+s) Γ(1+m_s-s) / λ^s`
//!
//! The clean-MAC outage closed form as printed has no separating contour
//! (the joint block needs `Re(s+t) < -1` while the variable blocks force
//! `Re(s+t) > -1`). [`op_clean_independent_printed`] builds it verbatim so
//! the failure is reproducible; [`op_clean_independent_closed`] evaluates
//! the form obtained by carrying the same Mellin–Parseval steps through with
//! the finite-range beta integral `∫_0^1 t^{-s}(1-t)^{-ζ} dt`:
//!
//! ```text
//! P = γ_t B1 A2 (1/(2πi))² ∫∫ Γ(m1+ζ)Γ(m1s-ζ)Γ(-ζ) Γ(m2-1+s)Γ(1+m2s-s)Γ(1-s)
//!     / Γ(2-ζ-s) (γ_t λ1)^{-ζ} (γ_t λ2)^{-s} dζ ds.
//! ```

use num_complex::Complex64;

use super::{bivariate_meijer_g, meijer_g, BivariateGSpec, GKernel, MeijerError, MeijerGSpec, MeijerValue};
use crate::fading::FadingParams;
use crate::specfun::{ln_gamma, log_gamma};

fn ln_b(p: &FadingParams) -> f64 {
    -ln_gamma(p.m()) - ln_gamma(p.ms())
}

/// `G^{1,2}_{2,2}(· | 1-m_s, 1; m, 0)`.
pub fn fisher_cdf_kernel(p: &FadingParams) -> GKernel {
    GKernel {
        m: 1,
        n: 2,
        a: vec![1.0 - p.ms(), 1.0],
        b: vec![p.m(), 0.0],
    }
}

/// `G^{1,2}_{2,2}(· | 1, 1; 1, 0)`, equal to `ln(1 + z)`.
pub fn log_kernel() -> GKernel {
    GKernel {
        m: 1,
        n: 2,
        a: vec![1.0, 1.0],
        b: vec![1.0, 0.0],
    }
}

/// The F CDF through its G-function form.
pub fn meijer_g_cdf_fisher(p: &FadingParams, gamma: f64) -> Result<f64, MeijerError> {
    if gamma <= 0.0 {
        return Ok(0.0);
    }
    if gamma.is_infinite() {
        return Ok(1.0);
    }
    let spec = MeijerGSpec {
        kernel: fisher_cdf_kernel(p),
        z: Complex64::new(p.lambda() * gamma, 0.0),
    };
    Ok(ln_b(p).exp() * meijer_g(&spec)?.value.re)
}

/// The F PDF through `G^{1,1}_{1,1}`.
pub fn meijer_g_pdf_fisher(p: &FadingParams, gamma: f64) -> Result<f64, MeijerError> {
    if gamma <= 0.0 {
        return Ok(if gamma == 0.0 { p.pdf(0.0) } else { 0.0 });
    }
    let spec = MeijerGSpec::real(1, 1, vec![-p.ms()], vec![p.m() - 1.0], p.lambda() * gamma)?;
    Ok((p.lambda().ln() + ln_b(p)).exp() * meijer_g(&spec)?.value.re)
}

/// `∫_0^∞ γ^{s-1} f(γ) dγ` for `1 - m < Re s < 1 + m_s`.
pub fn fisher_mellin(p: &FadingParams, s: Complex64) -> Result<Complex64, MeijerError> {
    let lg = |z: Complex64| log_gamma(z).map_err(|e| MeijerError::Spec(e.to_string()));
    let ln = p.lambda().ln() + ln_b(p) + lg(p.m() - 1.0 + s)? + lg(1.0 + p.ms() - s)? - s * p.lambda().ln();
    Ok(ln.exp())
}

/// The clean-MAC outage closed form with its parameter rows exactly as printed.
pub fn op_clean_independent_printed(
    p1: &FadingParams,
    p2: &FadingParams,
    gamma_t: f64,
) -> Result<(f64, BivariateGSpec), MeijerError> {
    let joint = GKernel::new(0, 1, vec![2.0], vec![])?;
    let first = GKernel::new(2, 1, vec![1.0 - p1.m(), 1.0], vec![0.0, p1.ms(), 1.0])?;
    let second = GKernel::new(1, 1, vec![2.0 - p2.m()], vec![1.0, 1.0 + p2.ms()])?;
    let prefactor = -gamma_t * ln_b(p1).exp() * (p2.lambda().ln() + ln_b(p2)).exp();
    let spec = BivariateGSpec::real(
        joint,
        first,
        second,
        -1.0 / (gamma_t * p2.lambda()),
        1.0 / (gamma_t * p1.lambda()),
    )?;
    Ok((prefactor, spec))
}

/// Prefactor and bivariate G for `P(γ1 + γ2 ≤ γ_t)`, independent links.
pub fn op_clean_independent_spec(
    p1: &FadingParams,
    p2: &FadingParams,
    gamma_t: f64,
) -> Result<(f64, BivariateGSpec), MeijerError> {
    let joint = GKernel::new(0, 0, vec![], vec![-1.0])?;
    let first = GKernel::new(1, 2, vec![1.0 - p1.ms(), 1.0], vec![p1.m()])?;
    let second = GKernel::new(1, 2, vec![-p2.ms(), 0.0], vec![p2.m() - 1.0])?;
    let prefactor = (gamma_t.ln() + ln_b(p1) + p2.lambda().ln() + ln_b(p2)).exp();
    let spec = BivariateGSpec::real(joint, first, second, gamma_t * p1.lambda(), gamma_t * p2.lambda())?;
    Ok((prefactor, spec))
}

/// Closed-form value and error estimate of the clean-MAC outage probability.
pub fn op_clean_independent_closed(
    p1: &FadingParams,
    p2: &FadingParams,
    gamma_t: f64,
) -> Result<(f64, f64), MeijerError> {
    if gamma_t <= 0.0 {
        return Ok((0.0, 0.0));
    }
    let (pre, spec) = op_clean_independent_spec(p1, p2, gamma_t)?;
    let v = bivariate_meijer_g(&spec)?;
    Ok((pre * v.value.re, pre * v.err))
}

/// Which of the four doubly-dirty capacity terms failed.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("term J{index}: {source}")]
pub struct TermError {
    pub index: usize,
    #[source]
    pub source: MeijerError,
}

/// `∫ ½log₂(1+γ) f_a(γ) dγ` as `B_a/(2 ln 2) G^{2,3}_{3,3}(1/λ_a | 1,1,1-m_a; 1,m_as,0)`.
fn single_link_term(pa: &FadingParams) -> Result<MeijerValue, MeijerError> {
    let spec = MeijerGSpec::real(
        2,
        3,
        vec![1.0, 1.0, 1.0 - pa.m()],
        vec![1.0, pa.ms(), 0.0],
        1.0 / pa.lambda(),
    )?;
    meijer_g(&spec)
}

/// `∫ ½log₂(1+γ) f_a(γ) F_b(γ) dγ` up to the factor `B_a B_b / (2 ln 2)`.
fn cross_term(pa: &FadingParams, pb: &FadingParams) -> Result<MeijerValue, MeijerError> {
    let joint = GKernel::new(1, 1, vec![1.0 - pa.m()], vec![pa.ms()])?;
    let spec = BivariateGSpec::real(
        joint,
        fisher_cdf_kernel(pb),
        log_kernel(),
        pb.lambda() / pa.lambda(),
        1.0 / pa.lambda(),
    )?;
    bivariate_meijer_g(&spec)
}

/// Doubly-dirty average capacity `J1 - J2 + J3 - J4` with an error estimate.
pub fn ac_dirty_independent_closed(p1: &FadingParams, p2: &FadingParams) -> Result<(f64, f64), TermError> {
    let half_ln2 = 0.5 / std::f64::consts::LN_2;
    let (b1, b2) = (ln_b(p1).exp(), ln_b(p2).exp());
    let wrap = |index: usize| move |source| TermError { index, source };
    let j1 = single_link_term(p1).map_err(wrap(1))?;
    let j2 = cross_term(p1, p2).map_err(wrap(2))?;
    let j3 = single_link_term(p2).map_err(wrap(3))?;
    let j4 = cross_term(p2, p1).map_err(wrap(4))?;
    let terms = [
        (b1 * half_ln2, j1, 1.0),
        (b1 * b2 * half_ln2, j2, -1.0),
        (b2 * half_ln2, j3, 1.0),
        (b1 * b2 * half_ln2, j4, -1.0),
    ];
    let value = terms.iter().map(|(c, j, sg)| sg * c * j.value.re).sum();
    let err = terms.iter().map(|(c, j, _)| c * j.err).sum();
    Ok((value, err))
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SeriesError {
    #[error("term k={k}: {source}")]
    Term {
        k: usize,
        #[source]
        source: MeijerError,
    },
    #[error("terms stopped decaying after k={k} (last ratio {ratio:.3})")]
    Diverging { k: usize, ratio: f64 },
    #[error("no convergence within {terms} terms")]
    Exhausted { terms: usize },
}

/// Clean-MAC average capacity from the power series in `λ2`:
///
/// ```text
/// A1 A2 / ln 2 Σ_k (-λ2)^{k+1}/k! · 1/(k+1)² · G^{2,3}_{3,3}(-λ1/λ2 | 0,-m1s,k-m2+1; m1-1,k+m2s,k)
/// ```
///
/// `[Γ(-(k+1))/Γ(-k)]²` is read as its limit `1/(k+1)²`. The contour of the
/// k-th G-function closes once `k ≥ m1 + m2 - 1`, which is reported as a
/// term error rather than papered over.
pub fn ac_clean_series(p1: &FadingParams, p2: &FadingParams, max_terms: usize) -> Result<(f64, f64), SeriesError> {
    let (l1, l2) = (p1.lambda(), p2.lambda());
    let pre = (l1.ln() + ln_b(p1) + l2.ln() + ln_b(p2)).exp() / std::f64::consts::LN_2;
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    for k in 0..max_terms {
        let kf = k as f64;
        let spec = MeijerGSpec::real(
            2,
            3,
            vec![0.0, -p1.ms(), kf - p2.m() + 1.0],
            vec![p1.m() - 1.0, kf + p2.ms(), kf],
            -l1 / l2,
        )
        .map_err(|source| SeriesError::Term { k, source })?;
        let g = meijer_g(&spec).map_err(|source| SeriesError::Term { k, source })?;
        let ln_coef = (kf + 1.0) * l2.ln() - ln_gamma(kf + 1.0) - 2.0 * (kf + 1.0).ln();
        let sign = if (k + 1) % 2 == 0 { 1.0 } else { -1.0 };
        let term = pre * sign * ln_coef.exp() * g.value.re;
        sum += term;
        if k >= 2 && term.abs() > last && term.abs() > 1e-12 * sum.abs() {
            return Err(SeriesError::Diverging {
                k,
                ratio: term.abs() / last,
            });
        }
        if term.abs() <= 1e-10 * sum.abs() {
            return Ok((sum, term.abs()));
        }
        last = term.abs();
    }
    Err(SeriesError::Exhausted { terms: max_terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate_semi_infinite;
    use crate::specfun::{beta_regularized, BetaRegularizedQuery};

    fn p(m: f64, ms: f64, g: f64) -> FadingParams {
        FadingParams::new(m, ms, g).unwrap()
    }

    #[test]
    fn cdf_examples() {
        let f = p(2.0, 3.0, 1.0);
        assert_eq!(meijer_g_cdf_fisher(&f, 0.0).unwrap(), 0.0);
        let want = beta_regularized(BetaRegularizedQuery::new(2.0, 3.0, 0.4).unwrap());
        assert!((meijer_g_cdf_fisher(&f, 1.0).unwrap() - want).abs() < 1e-9);
        let f = p(2.0, 3.0, 1.0);
        assert!((meijer_g_cdf_fisher(&f, 1e9).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn cdf_routes_agree() {
        for &(m, ms) in &[(0.7, 1.3), (1.0, 2.0), (2.0, 3.0), (5.0, 15.0), (2.5, 0.8), (7.0, 7.0)] {
            let f = p(m, ms, 3.0);
            for &g in &[1e-3, 0.1, 1.0, 3.0, 30.0, 1e3] {
                let a = meijer_g_cdf_fisher(&f, g).unwrap();
                let b = f.cdf(g);
                assert!((a - b).abs() < 1e-7, "{m} {ms} {g}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn pdf_routes_agree() {
        for &(m, ms) in &[(0.7, 1.3), (2.0, 3.0), (5.0, 15.0)] {
            let f = p(m, ms, 3.0);
            for &g in &[0.01, 1.0, 20.0] {
                let a = meijer_g_pdf_fisher(&f, g).unwrap();
                let b = f.pdf(g);
                assert!((a - b).abs() < 1e-9 * b, "{m} {ms} {g}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn mellin_transform_of_pdf() {
        for &(m, ms, gb) in &[(2.0, 3.0, 10.0), (1.5, 4.0, 1.0), (4.0, 2.5, 0.5)] {
            let f = p(m, ms, gb);
            for &s in &[0.5, 1.0, 1.7, 2.2] {
                if !(1.0 - m < s && s < 1.0 + ms) {
                    continue;
                }
                let num = integrate_semi_infinite(|g| g.powf(s - 1.0) * f.pdf(g), 0.0, 1e-11).unwrap();
                let want = fisher_mellin(&f, Complex64::new(s, 0.0)).unwrap().re;
                assert!((num.value - want).abs() < 1e-6 * want, "{m} {ms} {s}: {} vs {want}", num.value);
            }
        }
    }

    #[test]
    fn printed_outage_form_has_no_contour() {
        let f = p(2.0, 3.0, 10.0);
        let (_, spec) = op_clean_independent_printed(&f, &f, 31.0).unwrap();
        assert!(matches!(bivariate_meijer_g(&spec), Err(MeijerError::Contour(_))));
    }

    #[test]
    fn outage_closed_form_reference() {
        // Reference by 50-digit quadrature of ∫_0^{γt} F1(γt - x) f2(x) dx.
        let f = p(2.0, 3.0, 10.0);
        let (v, err) = op_clean_independent_closed(&f, &f, 31.0).unwrap();
        assert!((v - 0.672_571_049_505_295_6).abs() < 1e-8, "{v} ± {err}");
    }

    #[test]
    fn dirty_capacity_closed_form_reference() {
        let f = p(2.0, 3.0, 10.0);
        let (v, _) = ac_dirty_independent_closed(&f, &f).unwrap();
        assert!((v - 1.352_041_054_273_983_9).abs() < 1e-7, "{v}");
    }

    #[test]
    fn series_reports_closed_contour() {
        let f = p(2.0, 3.0, 10.0);
        match ac_clean_series(&f, &f, 200) {
            Err(SeriesError::Term { k, source: MeijerError::Contour(_) }) => assert_eq!(k, 3),
            other => panic!("{other:?}"),
        }
    }
}
