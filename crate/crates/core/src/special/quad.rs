use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use super::Precision;
use crate::error::{Error, Result};

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
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_PANELS: usize = 50_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadEstimate {
    pub value: Complex64,
    pub abs_err: f64,
    pub evaluations: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
    depth: usize,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
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
        self.err.total_cmp(&other.err)
    }
}

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        k += pair * WGK[j];
        if j % 2 == 1 {
            g += pair * WG[j / 2];
        }
    }
    let k = k * h;
    let g = g * h;
    let mut err = (k - g).norm();
    if !k.re.is_finite() || !k.im.is_finite() {
        err = f64::INFINITY;
    }
    (k, err)
}

/// Adaptive Gauss–Kronrod (7/15) integration of a complex integrand on [a, b].
///
/// Subdivides the interval with the largest error estimate until the summed error
/// is below `max(abs_tol, rel_tol·|I|)`. Intervals deeper than `max_depth`
/// bisections are frozen; if the frozen error alone exceeds the tolerance the
/// result is an accuracy error carrying the best estimate.
pub fn integrate<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_depth: usize,
) -> Result<QuadEstimate> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("integrate needs finite endpoints"));
    }
    if a == b {
        return Ok(QuadEstimate {
            value: Complex64::new(0.0, 0.0),
            abs_err: 0.0,
            evaluations: 0,
        });
    }
    let mut evals = 15;
    let (v, e) = gk15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Panel {
        a,
        b,
        value: v,
        err: e,
        depth: 0,
    });
    let mut total = v;
    let mut total_err = e;
    // Σ|panel value|, used for the rounding floor of the tolerance
    let mut mass = v.norm();
    let mut frozen_err = 0.0;
    let mut frozen_val = Complex64::new(0.0, 0.0);
    loop {
        let tol = abs_tol.max(rel_tol * total.norm()).max(64.0 * f64::EPSILON * mass);
        if total_err <= tol {
            break;
        }
        let Some(p) = heap.pop() else {
            return Err(Error::accuracy(
                "adaptive quadrature reached its depth limit",
                total,
                total_err,
            ));
        };
        if p.depth >= max_depth {
            if !p.err.is_finite() {
                return Err(Error::accuracy("integrand is not finite", total, f64::INFINITY));
            }
            frozen_err += p.err;
            frozen_val += p.value;
            if frozen_err > tol {
                return Err(Error::accuracy(
                    "adaptive quadrature reached its depth limit",
                    total,
                    total_err,
                ));
            }
            continue;
        }
        if heap.len() > MAX_PANELS {
            return Err(Error::accuracy(
                "adaptive quadrature exhausted its panel budget",
                total,
                total_err,
            ));
        }
        let m = 0.5 * (p.a + p.b);
        let (v1, e1) = gk15(&f, p.a, m);
        let (v2, e2) = gk15(&f, m, p.b);
        evals += 30;
        total += v1 + v2 - p.value;
        mass += v1.norm() + v2.norm() - p.value.norm();
        if total_err.is_finite() && p.err.is_finite() {
            total_err += e1 + e2 - p.err;
        } else {
            total_err = frozen_err + e1 + e2 + heap.iter().map(|q| q.err).sum::<f64>();
        }
        heap.push(Panel {
            a: p.a,
            b: m,
            value: v1,
            err: e1,
            depth: p.depth + 1,
        });
        heap.push(Panel {
            a: m,
            b: p.b,
            value: v2,
            err: e2,
            depth: p.depth + 1,
        });
    }
    // re-sum to shed accumulated update error
    let value = heap.iter().map(|p| p.value).sum::<Complex64>() + frozen_val;
    let abs_err = heap.iter().map(|p| p.err).sum::<f64>() + frozen_err;
    Ok(QuadEstimate {
        value,
        abs_err,
        evaluations: evals,
    })
}

/// ∫_a^∞ f(t) dt for integrands with algebraic decay, via t = a + u/(1−u).
pub fn integrate_semi_infinite<F: Fn(f64) -> Complex64>(f: F, a: f64, prec: &Precision) -> Result<QuadEstimate> {
    let g = |u: f64| {
        if u >= 1.0 {
            return Complex64::new(0.0, 0.0);
        }
        let one_minus = 1.0 - u;
        let t = a + u / one_minus;
        let v = f(t);
        if v == Complex64::new(0.0, 0.0) {
            return v;
        }
        v / (one_minus * one_minus)
    };
    integrate(
        g,
        0.0,
        1.0,
        prec.target_abs_tol,
        prec.target_rel_tol,
        prec.max_quad_depth,
    )
}

/// ∫_{t0}^∞ f(t) dt for integrands decaying at least exponentially in t.
///
/// The half-line is cut into panels of doubling width starting at `scale`. Panels
/// are added until two consecutive ones contribute less than a tenth of the
/// absolute tolerance; that point is the truncation height.
pub fn integrate_vertical<F: Fn(f64) -> Complex64>(
    f: F,
    t0: f64,
    scale: f64,
    prec: &Precision,
) -> Result<QuadEstimate> {
    if !(t0 >= 0.0) || !(scale > 0.0) {
        return Err(Error::domain("integrate_vertical needs t0 >= 0 and a positive scale"));
    }
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut evals = 0;
    let mut lo = t0;
    let mut width = scale;
    let mut quiet = 0;
    for panel in 0..200 {
        let hi = lo + width;
        let share = prec.target_abs_tol / 2f64.powi(panel.min(40) + 1);
        let q = integrate(&f, lo, hi, share, prec.target_rel_tol, prec.max_quad_depth).map_err(|e| match e {
            Error::Accuracy {
                estimate, error_bound, ..
            } => Error::accuracy(
                "vertical quadrature panel did not converge",
                total + estimate,
                err + error_bound,
            ),
            other => other,
        })?;
        total += q.value;
        err += q.abs_err;
        evals += q.evaluations;
        if q.value.norm() + q.abs_err < 0.1 * prec.target_abs_tol {
            quiet += 1;
            if quiet >= 2 {
                return Ok(QuadEstimate {
                    value: total,
                    abs_err: err + q.value.norm(),
                    evaluations: evals,
                });
            }
        } else {
            quiet = 0;
        }
        lo = hi;
        width *= 2.0;
    }
    Err(Error::accuracy(
        "vertical integrand does not decay",
        total,
        f64::INFINITY,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::incomplete_gamma_upper;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_exact() {
        let q = integrate(|x| Complex64::new(x * x * x, x), 0.0, 2.0, 1e-14, 1e-14, 30).unwrap();
        assert!((q.value - Complex64::new(4.0, 2.0)).norm() < 1e-14);
    }

    #[test]
    fn exponential_vertical() {
        let p = Precision::default().with_abs_tol(1e-12);
        let q = integrate_vertical(|t| Complex64::new((-2.0 * PI * t).exp(), 0.0), 0.0, 0.5, &p).unwrap();
        assert!((q.value.re - 1.0 / (2.0 * PI)).abs() < 1e-10);
        let z = integrate_vertical(|_| Complex64::new(0.0, 0.0), 0.0, 0.5, &p).unwrap();
        assert_eq!(z.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn vertical_matches_incomplete_gamma() {
        let p = Precision::default().with_abs_tol(1e-12);
        let q = integrate_vertical(|t| Complex64::new((-t).exp() * t.powf(2.5), 0.0), 1.0, 0.5, &p).unwrap();
        let want = incomplete_gamma_upper(3.5, 1.0).unwrap();
        assert!((q.value.re - want).abs() < 1e-10);
    }

    #[test]
    fn vertical_is_additive_over_splits() {
        let p = Precision::default().with_abs_tol(1e-12);
        let f = |t: f64| Complex64::new((-1.3 * t).exp() * (3.0 * t).cos(), (-t).exp() * t);
        let whole = integrate_vertical(f, 0.2, 0.5, &p).unwrap();
        let head = integrate(f, 0.2, 1.7, 1e-13, 1e-13, 30).unwrap();
        let tail = integrate_vertical(f, 1.7, 0.5, &p).unwrap();
        let gap = (whole.value - head.value - tail.value).norm();
        assert!(gap <= whole.abs_err + head.abs_err + tail.abs_err + 1e-15);
    }

    #[test]
    fn depth_limit_reports_estimate() {
        let r = integrate(|x| Complex64::new(1.0 / x.sqrt(), 0.0), 0.0, 1.0, 1e-15, 1e-15, 3);
        match r {
            Err(Error::Accuracy { estimate, .. }) => assert!(estimate.re > 0.0),
            other => panic!("expected accuracy error, got {other:?}"),
        }
    }

    #[test]
    fn semi_infinite_algebraic() {
        let p = Precision::default().with_abs_tol(1e-12).with_rel_tol(1e-12);
        let q = integrate_semi_infinite(|t| Complex64::new(1.0 / (1.0 + t * t), 0.0), 0.0, &p).unwrap();
        assert!((q.value.re - PI / 2.0).abs() < 1e-11);
    }
}
