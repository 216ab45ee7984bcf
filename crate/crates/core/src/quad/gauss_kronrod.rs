//! Globally adaptive 7/15-point Gauss–Kronrod.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{KahanSum, QuadResult};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

fn rule<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Segment {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut resabs = kronrod.abs();
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kronrod * half;
    let resabs = resabs * half.abs();
    // The unscaled Kronrod-Gauss gap. QUADPACK's (200·e/resasc)^1.5 scaling
    // under-reports near algebraic endpoint singularities.
    let mut err = ((kronrod - gauss) * half).abs();
    let roundoff = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) && roundoff > err {
        err = roundoff;
    }
    if !value.is_finite() {
        err = f64::INFINITY;
    }
    Segment { lo, hi, value, err }
}

/// Integrates over the concatenation of `points` (sorted, at least two).
/// Breakpoints let callers place known kinks and spikes on segment edges.
pub(crate) fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    points: &[f64],
    tol: f64,
    max_segments: usize,
) -> QuadResult {
    let mut heap: BinaryHeap<Segment> = points
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| rule(f, w[0], w[1]))
        .collect();
    let mut evaluations = 15 * heap.len();
    loop {
        let (value, err) = totals(&heap);
        let target = tol.max(tol * value.abs());
        if err <= target {
            return QuadResult {
                value,
                err_estimate: err,
                evaluations,
                converged: true,
            };
        }
        if heap.len() >= max_segments {
            return QuadResult {
                value,
                err_estimate: err,
                evaluations,
                converged: false,
            };
        }
        let worst = heap.pop().expect("non-empty segment heap");
        let mid = 0.5 * (worst.lo + worst.hi);
        let too_narrow = (worst.hi - worst.lo).abs()
            <= 1e3 * f64::EPSILON * worst.lo.abs().max(worst.hi.abs()).max(f64::MIN_POSITIVE)
            || mid <= worst.lo
            || mid >= worst.hi;
        if too_narrow {
            heap.push(worst);
            let (value, err) = totals(&heap);
            return QuadResult {
                value,
                err_estimate: err,
                evaluations,
                converged: false,
            };
        }
        heap.push(rule(f, worst.lo, mid));
        heap.push(rule(f, mid, worst.hi));
        evaluations += 30;
    }
}

fn totals(heap: &BinaryHeap<Segment>) -> (f64, f64) {
    // Sum in interval order so the result does not depend on heap layout.
    let mut segs: Vec<&Segment> = heap.iter().collect();
    segs.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let mut value = KahanSum::default();
    let mut err = KahanSum::default();
    for s in segs {
        value.add(s.value);
        err.add(s.err);
    }
    (value.total(), err.total())
}
