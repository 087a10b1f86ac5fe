//! Special functions behind the parametric quantiles: the standard normal
//! CDF and its inverse, and the regularized incomplete gamma function and
//! its inverse in the first argument.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};

const EPS: f64 = f64::EPSILON;
const TINY: f64 = 1e-300;

/// Iteration cap shared by the root finders.
pub const MAX_ITERATIONS: usize = 200;

/// Complementary error function with relative accuracy close to machine
/// precision over the whole real line.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < 2.0 {
        1.0 - erf_series(x)
    } else {
        erfc_continued_fraction(x)
    }
}

pub fn erf(x: f64) -> f64 {
    if x.abs() < 2.0 {
        if x < 0.0 {
            -erf_series(-x)
        } else {
            erf_series(x)
        }
    } else {
        1.0 - erfc(x)
    }
}

// erf(x) = 2/sqrt(pi) exp(-x^2) sum_n 2^n x^(2n+1) / (2n+1)!!, all terms positive.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
        if term <= sum * EPS * 0.5 {
            break;
        }
    }
    2.0 / PI.sqrt() * (-x2).exp() * sum
}

// erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))),
// evaluated with the modified Lentz algorithm. Used for x >= 2.
fn erfc_continued_fraction(x: f64) -> f64 {
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for i in 1..2000 {
        let a = i as f64 * 0.5;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    (-x * x).exp() / PI.sqrt() / f
}

/// Standard normal cumulative distribution function.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / SQRT_2)
}

fn normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// Quantile function of the standard normal distribution.
///
/// A rational first guess is polished by Halley steps against [`normal_cdf`].
/// The upper half is obtained by reflection, so `inverse_normal_cdf(1 - p)`
/// is exactly `-inverse_normal_cdf(p)` whenever `1 - p` is representable.
pub fn inverse_normal_cdf(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    if p > 0.5 {
        Ok(-lower_normal_quantile(1.0 - p))
    } else {
        Ok(lower_normal_quantile(p))
    }
}

// Valid for 0 < p <= 1/2.
fn lower_normal_quantile(p: f64) -> f64 {
    if p == 0.5 {
        return 0.0;
    }
    let mut x = rational_normal_guess(p);
    for _ in 0..3 {
        let e = normal_cdf(x) - p;
        let u = e / normal_pdf(x);
        let step = u / (1.0 + 0.5 * x * u);
        x -= step;
        if step.abs() <= 1e-16 * x.abs().max(1.0) {
            break;
        }
    }
    x
}

// Piecewise rational approximation with relative error about 1e-9.
fn rational_normal_guess(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.38357751867269e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    }
}

/// Natural logarithm of the gamma function for positive arguments
/// (Lanczos approximation, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // reflection
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = COEF[0];
    let t = x + G + 0.5;
    for (i, c) in COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

// exp(-x + a ln x - ln Gamma(a)), the common prefactor of both tails.
fn gamma_prefactor(a: f64, x: f64) -> f64 {
    (-x + a * x.ln() - ln_gamma(a)).exp()
}

fn check_shape(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "alpha".into(),
            value: alpha,
            reason: "shape must be finite and positive",
        })
    }
}

/// Regularized lower incomplete gamma function P(alpha, x), i.e. the CDF of
/// the standard gamma distribution with shape `alpha`.
pub fn reg_lower_gamma(alpha: f64, x: f64) -> Result<f64> {
    check_shape(alpha)?;
    if x <= 0.0 {
        return Ok(0.0);
    }
    if x < alpha + 1.0 {
        lower_series(alpha, x)
    } else {
        Ok(1.0 - upper_continued_fraction(alpha, x)?)
    }
}

/// Regularized upper incomplete gamma function Q(alpha, x) = 1 - P(alpha, x),
/// computed directly so that the upper tail keeps its relative accuracy.
pub fn reg_upper_gamma(alpha: f64, x: f64) -> Result<f64> {
    check_shape(alpha)?;
    if x <= 0.0 {
        return Ok(1.0);
    }
    if x < alpha + 1.0 {
        Ok(1.0 - lower_series(alpha, x)?)
    } else {
        upper_continued_fraction(alpha, x)
    }
}

const SERIES_CAP: usize = 100_000;

fn lower_series(a: f64, x: f64) -> Result<f64> {
    let mut ap = a;
    let mut del = 1.0 / a;
    let mut sum = del;
    for _ in 0..SERIES_CAP {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * EPS {
            return Ok(sum * gamma_prefactor(a, x));
        }
    }
    Err(Error::NoConvergence {
        what: "incomplete gamma series",
        iterations: SERIES_CAP,
    })
}

fn upper_continued_fraction(a: f64, x: f64) -> Result<f64> {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..SERIES_CAP {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            return Ok(gamma_prefactor(a, x) * h);
        }
    }
    Err(Error::NoConvergence {
        what: "incomplete gamma continued fraction",
        iterations: SERIES_CAP,
    })
}

/// Inverse of the regularized lower incomplete gamma function in `x`: the
/// value `x` with `P(alpha, x) = p`.
///
/// The residual is taken on whichever tail is smaller, so quantiles close to
/// `p = 1` are resolved against `Q(alpha, x) = 1 - p`. Halley steps run inside
/// a shrinking bracket and fall back to bisection whenever a step leaves it.
pub fn inverse_reg_gamma(alpha: f64, p: f64) -> Result<f64> {
    check_shape(alpha)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    let upper = p > 0.5;
    let q = 1.0 - p;
    let residual = |x: f64| -> Result<f64> {
        if upper {
            Ok(q - reg_upper_gamma(alpha, x)?)
        } else {
            Ok(reg_lower_gamma(alpha, x)? - p)
        }
    };

    let gln = ln_gamma(alpha);
    let mut x = initial_gamma_guess(alpha, p, q, gln);
    let mut lo = 0.0_f64;
    let mut hi = f64::INFINITY;

    for _ in 0..MAX_ITERATIONS {
        let f = residual(x)?;
        if f == 0.0 {
            return Ok(x);
        }
        if f < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let density = (-x + (alpha - 1.0) * x.ln() - gln).exp();
        let mut next = f64::NAN;
        if density > 0.0 && density.is_finite() {
            let t = f / density;
            let u = t / (1.0 - 0.5 * (t * ((alpha - 1.0) / x - 1.0)).min(1.0));
            next = x - u;
        }
        if !(next > lo && next < hi) {
            next = if hi.is_finite() {
                0.5 * (lo + hi)
            } else {
                2.0 * x.max(1.0)
            };
        }
        let step = (next - x).abs();
        x = next;
        if step <= 4.0 * EPS * x || (hi - lo) <= 4.0 * EPS * x {
            return Ok(x);
        }
    }
    Err(Error::NoConvergence {
        what: "incomplete gamma inversion",
        iterations: MAX_ITERATIONS,
    })
}

fn initial_gamma_guess(a: f64, p: f64, q: f64, gln: f64) -> f64 {
    if a > 1.0 {
        // Wilson-Hilferty from a normal deviate
        let pp = p.min(q);
        let t = (-2.0 * pp.ln()).sqrt();
        let mut z = (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) - t;
        if p >= 0.5 {
            z = -z;
        }
        let x = a * (1.0 - 1.0 / (9.0 * a) + z / (3.0 * a.sqrt())).powi(3);
        x.max(1e-3 * a)
    } else {
        let t = 1.0 - a * (0.253 + a * 0.12);
        if p < t {
            // small-x behaviour P ~ x^a / Gamma(a + 1)
            (p * (gln + a.ln()).exp()).powf(1.0 / a).max(TINY)
        } else {
            1.0 - (q / (1.0 - t)).ln()
        }
    }
}
