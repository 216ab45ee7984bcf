//! Reference correlation coefficients of Clayton-coupled F-fading SNRs,
//! used as the default `corr` grid and by the validation suite.

/// One parameter row: link shapes and ρ at θ = 10, 25, 40.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrRow {
    pub m1: f64,
    pub ms1: f64,
    pub m2: f64,
    pub ms2: f64,
    pub rho: [f64; 3],
}

pub const CORR_THETAS: [f64; 3] = [10.0, 25.0, 40.0];

const fn same(m: f64, ms: f64, rho: [f64; 3]) -> CorrRow {
    CorrRow {
        m1: m,
        ms1: ms,
        m2: m,
        ms2: ms,
        rho,
    }
}

pub const CORR_ROWS: [CorrRow; 15] = [
    same(2.0, 2.0, [0.1300, 0.2293, 0.2812]),
    same(5.0, 5.0, [0.6982, 0.8149, 0.8574]),
    same(7.0, 7.0, [0.7696, 0.8732, 0.9084]),
    same(2.0, 3.0, [0.4791, 0.6107, 0.6581]),
    same(2.0, 5.0, [0.6796, 0.7995, 0.8493]),
    same(2.0, 20.0, [0.8108, 0.9092, 0.9383]),
    same(3.0, 3.0, [0.4380, 0.6184, 0.6637]),
    same(5.0, 3.0, [0.4396, 0.6285, 0.6665]),
    same(7.0, 3.0, [0.4884, 0.6358, 0.6822]),
    same(3.0, 5.0, [0.6916, 0.8151, 0.8568]),
    same(5.0, 15.0, [0.8316, 0.9205, 0.9467]),
    same(7.0, 30.0, [0.8664, 0.9410, 0.9624]),
    CorrRow {
        m1: 2.0,
        ms1: 3.0,
        m2: 3.0,
        ms2: 5.0,
        rho: [0.5780, 0.7045, 0.7471],
    },
    CorrRow {
        m1: 3.0,
        ms1: 5.0,
        m2: 5.0,
        ms2: 15.0,
        rho: [0.7528, 0.8513, 0.8847],
    },
    CorrRow {
        m1: 5.0,
        ms1: 15.0,
        m2: 7.0,
        ms2: 30.0,
        rho: [0.8473, 0.9277, 0.9526],
    },
];

/// Heavy-tailed rows (shadowing shape at most 2) get a looser tolerance.
pub fn corr_tolerance(row: &CorrRow) -> f64 {
    if row.ms1.min(row.ms2) <= 2.0 {
        0.03
    } else {
        0.015
    }
}
