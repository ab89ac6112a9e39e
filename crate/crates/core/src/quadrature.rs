//! Globally adaptive 7/15-point Gauss–Kronrod quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Result, UrnError};

// Kronrod abscissae on [0, 1]; odd indices are the Gauss nodes.
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
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Requested absolute tolerance for the closed-form integrals.
pub const REQUESTED_TOL: f64 = 1e-12;
pub const MAX_PANELS: usize = 10_000;
/// Split point between the plain panel `[EPS, 1]` and the `q = exp(-t)` tail.
pub const LOG_SPLIT: f64 = 1e-3;
/// Length of the `t` interval that replaces `(0, LOG_SPLIT]`; the dropped
/// remainder is below `sup|f| * exp(-66)`.
const TAIL_SPAN: f64 = 60.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
    pub panels: usize,
}

#[derive(Clone, Copy, Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut gauss = fc * WG[3];
    let mut kronrod = fc * WGK[7];
    let mut res_abs = kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let x = half * XGK[j];
        let (f1, f2) = (f(center - x), f(center + x));
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    if !value.is_finite() {
        error = f64::INFINITY;
    }
    Panel { a, b, value, error }
}

/// Integral of `f` over `[a, b]`, bisecting the panel with the largest error
/// estimate until the summed estimate is at most `tol` or `max_panels`
/// panels exist. Always returns the best estimate reached.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64, max_panels: usize) -> Integral {
    let mut heap = BinaryHeap::new();
    heap.push(kronrod15(&f, a, b));
    let mut error: f64 = heap.iter().map(|p| p.error).sum();
    while error > tol && heap.len() < max_panels.max(1) {
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval no longer splits in floating point
            heap.push(worst);
            break;
        }
        heap.push(kronrod15(&f, worst.a, mid));
        heap.push(kronrod15(&f, mid, worst.b));
        error = heap.iter().map(|p| p.error).sum();
    }
    Integral {
        value: heap.iter().map(|p| p.value).sum(),
        abs_error: error,
        panels: heap.len(),
    }
}

/// [`integrate`], failing if the final error estimate exceeds `guaranteed`.
pub fn integrate_checked<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    guaranteed: f64,
) -> Result<Integral> {
    check(integrate(f, a, b, REQUESTED_TOL, MAX_PANELS), guaranteed)
}

/// Integral over `[0, 1]` of an integrand built from powers of `q` and
/// `q log^j q`. The part on `(0, LOG_SPLIT]` is integrated in `t = -log q`,
/// where the integrand becomes `f(e^{-t}) e^{-t}` and is smooth.
pub fn integrate_log_endpoint<F: Fn(f64) -> f64>(f: F, guaranteed: f64) -> Result<Integral> {
    let t0 = -LOG_SPLIT.ln();
    let body = integrate(&f, LOG_SPLIT, 1.0, REQUESTED_TOL / 2.0, MAX_PANELS / 2);
    let tail = integrate(
        |t: f64| {
            let q = (-t).exp();
            f(q) * q
        },
        t0,
        t0 + TAIL_SPAN,
        REQUESTED_TOL / 2.0,
        MAX_PANELS / 2,
    );
    check(
        Integral {
            value: body.value + tail.value,
            abs_error: body.abs_error + tail.abs_error,
            panels: body.panels + tail.panels,
        },
        guaranteed,
    )
}

fn check(integral: Integral, guaranteed: f64) -> Result<Integral> {
    if integral.abs_error <= guaranteed && integral.value.is_finite() {
        Ok(integral)
    } else {
        Err(UrnError::QuadratureFailure {
            error: integral.abs_error,
            tolerance: guaranteed,
            panels: integral.panels,
        })
    }
}
