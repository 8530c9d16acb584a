//! Adaptive Gauss-Kronrod quadrature.
//!
//! 15-point Kronrod rule with bisection of the worst segment, GSL-style.
//! Semi-infinite upper limits are mapped onto (0, 1) with
//! `x = lo + t/(1-t)`; the rule never evaluates at segment endpoints, so
//! integrable endpoint singularities are handled by subdivision.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Tolerances and budget for one adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { rel_tol: 1e-10, abs_tol: 1e-14, max_subdivisions: 2000 }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(rel_tol > 0.0) {
            return Err(Error::InvalidInput(format!("rel_tol must be > 0, got {rel_tol}")));
        }
        if !(abs_tol >= 0.0) {
            return Err(Error::InvalidInput(format!("abs_tol must be >= 0, got {abs_tol}")));
        }
        if max_subdivisions < 1 {
            return Err(Error::InvalidInput("max_subdivisions must be >= 1".into()));
        }
        Ok(QuadratureSpec { rel_tol, abs_tol, max_subdivisions })
    }
}

// 15-point Gauss-Kronrod nodes and weights (positive half).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One Kronrod evaluation over [a, b]: (integral, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut res_gauss = 0.0;
    let mut res_kronrod = f_center * WGK[7];
    let mut res_abs = res_kronrod.abs();
    let mut fv = [0.0f64; 15];
    fv[7] = f_center;

    for j in 0..7 {
        let absc = half * XGK[j];
        let f1 = f(center - absc);
        let f2 = f(center + absc);
        fv[j] = f1;
        fv[14 - j] = f2;
        res_kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }

    let result = res_kronrod * half;
    res_abs *= half.abs();
    res_asc *= half.abs();

    let mut err = ((res_kronrod - res_gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (result, err)
}

struct Segment {
    a: f64,
    b: f64,
    result: f64,
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
        self.err.total_cmp(&other.err)
    }
}

/// Adaptive integral of `f` over (lo, hi); `hi` may be `f64::INFINITY`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<f64> {
    if lo.is_infinite() {
        return Err(Error::InvalidInput("lower limit must be finite".into()));
    }
    if hi == f64::INFINITY {
        // x = lo + t/(1-t), dx = dt/(1-t)^2
        let g = move |t: f64| {
            let om = 1.0 - t;
            f(lo + t / om) / (om * om)
        };
        return integrate_finite(&g, 0.0, 1.0, spec);
    }
    if !hi.is_finite() {
        return Err(Error::InvalidInput("upper limit must be finite or +inf".into()));
    }
    integrate_finite(&f, lo, hi, spec)
}

fn integrate_finite<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<f64> {
    if lo == hi {
        return Ok(0.0);
    }
    let (sign, a, b) = if lo < hi { (1.0, lo, hi) } else { (-1.0, hi, lo) };

    let (r0, e0) = gk15(f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, result: r0, err: e0 });
    let mut total = r0;
    let mut total_err = e0;

    for _ in 0..spec.max_subdivisions {
        if total_err <= spec.abs_tol.max(spec.rel_tol * total.abs()) {
            return Ok(sign * total);
        }
        let worst = heap.pop().expect("heap never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval at floating-point resolution; cannot split further.
            heap.push(worst);
            break;
        }
        let (rl, el) = gk15(f, worst.a, mid);
        let (rr, er) = gk15(f, mid, worst.b);
        total += rl + rr - worst.result;
        total_err += el + er - worst.err;
        heap.push(Segment { a: worst.a, b: mid, result: rl, err: el });
        heap.push(Segment { a: mid, b: worst.b, result: rr, err: er });
    }

    if total_err <= spec.abs_tol.max(spec.rel_tol * total.abs()) {
        Ok(sign * total)
    } else {
        Err(Error::QuadratureNonConvergence { estimate: sign * total, error_bound: total_err })
    }
}
