//! Log-gamma for real and complex arguments.
//!
//! Both routes share the Lanczos approximation with g = 7 and nine
//! coefficients (Godfrey). For `Re z < 1/2` the complex route shifts the
//! argument right with the recurrence `Γ(z) = Γ(z + n) / (z (z+1) … (z+n-1))`,
//! taking principal logarithms of each factor. Off the real axis this keeps
//! the result on the principal branch of `ln Γ` (branch cut along the
//! negative real axis), which is what `exp`-based kernels and branch-sensitive
//! callers both expect.

use num_complex::Complex64;

use super::SpecFunError;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

/// Principal-branch `ln Γ(z)`.
///
/// Fails only at the poles `z ∈ {0, -1, -2, …}`.
pub fn log_gamma(z: Complex64) -> Result<Complex64, SpecFunError> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.floor() {
        return Err(SpecFunError::Pole(z.re));
    }
    Ok(log_gamma_unchecked(z))
}

/// `ln Γ(z)` without the pole check. At a pole the result is non-finite.
pub(crate) fn log_gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re >= 0.5 {
        return lanczos(z);
    }
    let shift = (0.5 - z.re).ceil();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut w = z;
    for _ in 0..shift as usize {
        acc += w.ln();
        w += 1.0;
    }
    lanczos(w) - acc
}

fn lanczos(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut series = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (z + 0.5) * t.ln() - t + series.ln() + HALF_LN_TWO_PI
}

/// `ln |Γ(x)|` for real `x`. Returns `+∞` at the poles.
pub fn ln_gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return f64::INFINITY;
    }
    if x < 0.5 {
        // Reflection: Γ(x) Γ(1-x) = π / sin(πx).
        let s = (std::f64::consts::PI * x).sin().abs();
        return std::f64::consts::PI.ln() - s.ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut series = LANCZOS_COEF[0];
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (x + 0.5) * t.ln() - t + series.ln() + HALF_LN_TWO_PI
}

/// `Γ(x)` for real `x`.
pub fn gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return f64::NAN;
    }
    // Γ is negative on (-1,0), (-3,-2), …
    let sign = if x < 0.0 && (-x).ceil() as i64 % 2 == 1 {
        -1.0
    } else {
        1.0
    };
    sign * ln_gamma(x).exp()
}

/// `ln B(a, b)` for positive shapes.
pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}
