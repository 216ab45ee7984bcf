//! Bivariate Meijer G-function in three-block form:
//!
//! ```text
//! G(z1, z2) = (1/(2πi))² ∫∫ K0(s + t) K1(s) K2(t) z1^{-s} z2^{-t} ds dt,
//! ```
//!
//! each `K` a univariate kernel in the convention of the parent module. The
//! contours `Re s = c1`, `Re t = c2` are picked by a grid search for the
//! smallest real-axis integrand, subject to pole margins for all three
//! blocks, including the joint constraint on `c1 + c2`. The double integral is a tensor product of the
//! univariate panel rules; rows are evaluated in parallel and summed in row
//! order.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{
    g_from_log, nodes, panel_width, pick_abscissa, principal_ln, window, Compiled, GKernel, MeijerError, MeijerValue,
    T_MAX, T_START,
};

const REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct BivariateGSpec {
    /// Kernel in `s + t`.
    pub joint: GKernel,
    /// Kernel in `s`, paired with `z1`.
    pub first: GKernel,
    /// Kernel in `t`, paired with `z2`.
    pub second: GKernel,
    pub z1: Complex64,
    pub z2: Complex64,
}

impl BivariateGSpec {
    pub fn new(joint: GKernel, first: GKernel, second: GKernel, z1: Complex64, z2: Complex64) -> Result<Self, MeijerError> {
        for z in [z1, z2] {
            if !(z.norm() > 0.0 && z.norm().is_finite()) {
                return Err(MeijerError::Spec(format!("argument must be nonzero and finite, got {z}")));
            }
        }
        Ok(Self {
            joint,
            first,
            second,
            z1,
            z2,
        })
    }

    pub fn real(joint: GKernel, first: GKernel, second: GKernel, z1: f64, z2: f64) -> Result<Self, MeijerError> {
        Self::new(joint, first, second, Complex64::new(z1, 0.0), Complex64::new(z2, 0.0))
    }
}

pub fn bivariate_meijer_g(spec: &BivariateGSpec) -> Result<MeijerValue, MeijerError> {
    let l1 = principal_ln(spec.z1);
    let l2 = principal_ln(spec.z2);

    // With K2 ≡ 1 the t-integral is G0(z2) z2^{s}, leaving G0(z2) G1(z1/z2).
    // With K0 ≡ 1 as well the blocks decouple into G1(z1) alone.
    match (spec.joint.is_empty(), spec.first.is_empty(), spec.second.is_empty()) {
        (true, false, true) => return g_from_log(&spec.first, l1),
        (true, true, false) => return g_from_log(&spec.second, l2),
        (false, false, true) => return product(g_from_log(&spec.joint, l2)?, g_from_log(&spec.first, l1 - l2)?),
        (false, true, false) => return product(g_from_log(&spec.joint, l1)?, g_from_log(&spec.second, l2 - l1)?),
        (_, true, true) => return Err(MeijerError::Spec("both variable blocks are empty".into())),
        _ => {}
    }

    let k0 = spec.joint.compile();
    let k1 = spec.first.compile();
    let k2 = spec.second.compile();
    let (c1, c2) = pick_contours(&k0, &k1, &k2, l1.re, l2.re)?;

    let damp = k0.decay_rate().min(0.0);
    for (k, l, name) in [(&k1, l1, "first"), (&k2, l2, "second")] {
        if k.decay_rate() + damp <= l.im.abs() {
            return Err(MeijerError::Divergent(format!(
                "{name} variable: decay {:.4} against |arg z| = {:.4}",
                k.decay_rate() + damp,
                l.im.abs()
            )));
        }
    }

    let c0 = c1 + c2;
    let d0 = if k0.is_trivial() { f64::INFINITY } else { k0.pole_distance(c0) };
    let d1 = k1.pole_distance(c1).min(d0);
    let d2 = k2.pole_distance(c2).min(d0);
    let h1 = panel_width(l1.re.abs());
    let h2 = panel_width(l2.re.abs());
    // Real positive arguments make the integrand conjugate-symmetric under
    // (y1, y2) → (-y1, -y2), so only y1 > 0 is needed.
    let symmetric = spec.z1.im == 0.0 && spec.z1.re > 0.0 && spec.z2.im == 0.0 && spec.z2.re > 0.0;

    let axis = |k: &Compiled, c: f64, l: Complex64, t0: f64, t1: f64, h: f64, d: f64, both: bool| -> Vec<Node> {
        let mut out = Vec::new();
        for (y, w) in nodes(t0, t1, h, d) {
            let signs: &[f64] = if both { &[1.0, -1.0] } else { &[1.0] };
            for &sg in signs {
                let s = Complex64::new(c, sg * y);
                out.push(Node {
                    y: sg * y,
                    ln: k.ln_eval(s) - s * l + w.ln(),
                });
            }
        }
        out
    };

    let mut rows: Vec<Node> = Vec::new();
    let mut cols: Vec<Node> = Vec::new();
    let mut total = Complex64::new(0.0, 0.0);
    let mut abs_total = 0.0;
    let mut prev: Option<Complex64> = None;
    let mut history = Vec::new();
    let mut t_prev = 0.0;
    let mut t = T_START;
    loop {
        let new_rows = axis(&k1, c1, l1, t_prev, t, h1, d1, !symmetric);
        let new_cols = axis(&k2, c2, l2, t_prev, t, h2, d2, true);
        // New shell: (new rows × all cols) ∪ (old rows × new cols).
        let mut all_cols = cols.clone();
        all_cols.extend_from_slice(&new_cols);
        let (a, b) = block(&k0, c0, &new_rows, &all_cols);
        let (c, d) = block(&k0, c0, &rows, &new_cols);
        total += a + c;
        abs_total += b + d;
        rows.extend(new_rows);
        cols = all_cols;

        let scale = 1.0 / (4.0 * PI * PI);
        let value = if symmetric {
            Complex64::new(2.0 * total.re * scale, 0.0)
        } else {
            total * scale
        };
        let floor = 64.0 * f64::EPSILON * abs_total * scale * if symmetric { 2.0 } else { 1.0 };
        history.push(value.re);
        if let Some(p) = prev {
            let diff = (value - p).norm();
            if diff <= REL_TOL * value.norm() || diff <= floor {
                return Ok(MeijerValue {
                    value,
                    err: diff + floor,
                    truncation: t,
                });
            }
            if t >= T_MAX {
                return Err(MeijerError::Truncation {
                    values: history,
                    err: diff,
                });
            }
        }
        prev = Some(value);
        t_prev = t;
        t *= 2.0;
    }
}

#[derive(Debug, Clone, Copy)]
struct Node {
    y: f64,
    /// `ln K(s) - s ln z + ln w`.
    ln: Complex64,
}

fn block(k0: &Compiled, c0: f64, rows: &[Node], cols: &[Node]) -> (Complex64, f64) {
    if rows.is_empty() || cols.is_empty() {
        return (Complex64::new(0.0, 0.0), 0.0);
    }
    let partial: Vec<(Complex64, f64)> = rows
        .par_iter()
        .map(|r| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut abs = 0.0;
            for c in cols {
                let w = Complex64::new(c0, r.y + c.y);
                let v = (r.ln + c.ln + k0.ln_eval(w)).exp();
                acc += v;
                abs += v.norm();
            }
            (acc, abs)
        })
        .collect();
    partial
        .into_iter()
        .fold((Complex64::new(0.0, 0.0), 0.0), |(a, b), (v, n)| (a + v, b + n))
}

fn product(a: MeijerValue, b: MeijerValue) -> Result<MeijerValue, MeijerError> {
    Ok(MeijerValue {
        value: a.value * b.value,
        err: a.err * b.value.norm() + b.err * a.value.norm(),
        truncation: a.truncation.max(b.truncation),
    })
}

/// Abscissae `(c1, c2)` minimizing `|K0 K1 K2 z1^{-c1} z2^{-c2}|` on the real
/// axes, subject to the pole margins of all three blocks.
fn pick_contours(
    k0: &Compiled,
    k1: &Compiled,
    k2: &Compiled,
    l1: f64,
    l2: f64,
) -> Result<(f64, f64), MeijerError> {
    let (lo0, hi0) = k0.strip();
    let (lo1, hi1) = k1.strip();
    let (lo2, hi2) = k2.strip();
    for (lo, hi, name) in [(lo0, hi0, "joint"), (lo1, hi1, "first"), (lo2, hi2, "second")] {
        if !(lo < hi) {
            return Err(MeijerError::Contour(format!("{name} block: need {lo} < Re < {hi}")));
        }
    }
    if !(lo1 + lo2 < hi0 && hi1 + hi2 > lo0) {
        return Err(MeijerError::Contour(format!(
            "Re s in ({lo1}, {hi1}) and Re t in ({lo2}, {hi2}) cannot give Re(s+t) in ({lo0}, {hi0})"
        )));
    }
    let (a1, b1) = window(lo1, hi1);
    let (a2, b2) = window(lo2, hi2);
    let (a0, b0) = window(lo0, hi0);
    let re = |k: &Compiled, c: f64| k.ln_eval(Complex64::new(c, 0.0)).re;
    let steps = 120;
    let grid = |a: f64, b: f64| (0..=steps).map(move |i| a + (b - a) * i as f64 / steps as f64);
    let col: Vec<(f64, f64)> = grid(a2, b2).map(|c2| (c2, re(k2, c2) - c2 * l2)).collect();
    let mut best: Option<(f64, f64, f64)> = None;
    for c1 in grid(a1, b1) {
        let v1 = re(k1, c1) - c1 * l1;
        for &(c2, v2) in &col {
            let c0 = c1 + c2;
            if !(a0..=b0).contains(&c0) {
                continue;
            }
            let v = v1 + v2 + re(k0, c0);
            if v.is_finite() && best.is_none_or(|(bv, _, _)| v < bv) {
                best = Some((v, c1, c2));
            }
        }
    }
    if let Some((_, c1, c2)) = best {
        return Ok((c1, c2));
    }
    // Strips too narrow for the margins: fall back to the midpoint of the
    // feasible c2 range at the middle of the c1 strip.
    let c1 = pick_abscissa(lo1.max(lo0 - hi2), hi1.min(hi0 - lo2));
    let c2 = pick_abscissa(lo2.max(lo0 - c1), hi2.min(hi0 - c1));
    if lo1 < c1 && c1 < hi1 && lo2 < c2 && c2 < hi2 && lo0 < c1 + c2 && c1 + c2 < hi0 {
        Ok((c1, c2))
    } else {
        Err(MeijerError::Contour("no admissible abscissa pair".into()))
    }
}
