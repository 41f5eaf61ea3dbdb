//! Special functions for the statistical machinery, generic over the scalar.
//!
//! Everything here is classical numerics: a Lanczos log-gamma, the
//! regularized incomplete gamma pair (series for small `x`, Lentz continued
//! fraction otherwise), and erf/erfc/normal CDF derived from it. At `f64`
//! the results are good to ~1e-12 relative over the ranges the test battery
//! exercises, which is far inside the 1e-5 agreement demanded of the
//! known-answer checks.

use crate::real::Real;

/// Lanczos coefficients (g = 7, n = 9), double-precision fit.
const LANCZOS: [f64; 9] = [
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

/// Natural log of the gamma function for `x > 0`.
pub fn ln_gamma<R: Real>(x: R) -> R {
    let half = R::from_f64c(0.5);
    if x < half {
        // reflection: Γ(x)Γ(1−x) = π / sin(πx)
        let pi = R::from_f64c(std::f64::consts::PI);
        return (pi / (pi * x).sin()).ln() - ln_gamma(R::one() - x);
    }
    let g = R::from_f64c(7.0);
    let z = x - R::one();
    let mut acc = R::from_f64c(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + R::from_f64c(c) / (z + R::from_count(i));
    }
    let t = z + g + half;
    let ln_sqrt_2pi = R::from_f64c(0.918_938_533_204_672_7);
    ln_sqrt_2pi + (z + half) * t.ln() - t + acc.ln()
}

/// Regularized lower incomplete gamma P(a, x), `a > 0`, `x >= 0`.
pub fn gamma_p<R: Real>(a: R, x: R) -> R {
    if x <= R::zero() {
        return R::zero();
    }
    if x < a + R::one() {
        gamma_p_series(a, x)
    } else {
        R::one() - gamma_q_cf(a, x)
    }
}

/// Regularized upper incomplete gamma Q(a, x) = 1 − P(a, x).
pub fn gamma_q<R: Real>(a: R, x: R) -> R {
    if x <= R::zero() {
        return R::one();
    }
    if x < a + R::one() {
        R::one() - gamma_p_series(a, x)
    } else {
        gamma_q_cf(a, x)
    }
}

fn prefactor<R: Real>(a: R, x: R) -> R {
    // x^a e^{-x} / Γ(a)
    (a * x.ln() - x - ln_gamma(a)).exp()
}

fn gamma_p_series<R: Real>(a: R, x: R) -> R {
    let eps = R::from_f64c(1e-16);
    let mut term = R::one() / a;
    let mut sum = term;
    let mut n = a;
    for _ in 0..500 {
        n = n + R::one();
        term = term * x / n;
        sum = sum + term;
        if term.abs() < sum.abs() * eps {
            break;
        }
    }
    sum * prefactor(a, x)
}

fn gamma_q_cf<R: Real>(a: R, x: R) -> R {
    // modified Lentz, continued fraction from Numerical Recipes §6.2
    let eps = R::from_f64c(1e-16);
    let tiny = R::from_f64c(1e-300).max(R::min_positive_value());
    let mut b = x + R::one() - a;
    let mut c = R::one() / tiny;
    let mut d = R::one() / b;
    let mut h = d;
    for i in 1..500 {
        let an = -R::from_count(i) * (R::from_count(i) - a);
        b = b + R::from_f64c(2.0);
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = R::one() / d;
        let delta = d * c;
        h = h * delta;
        if (delta - R::one()).abs() < eps {
            break;
        }
    }
    prefactor(a, x) * h
}

/// Complementary error function.
pub fn erfc<R: Real>(x: R) -> R {
    if x < R::zero() {
        R::from_f64c(2.0) - erfc(-x)
    } else {
        gamma_q(R::from_f64c(0.5), x * x)
    }
}

/// Error function.
pub fn erf<R: Real>(x: R) -> R {
    if x < R::zero() {
        -erf(-x)
    } else {
        gamma_p(R::from_f64c(0.5), x * x)
    }
}

/// Standard normal CDF Φ(z).
pub fn normal_cdf<R: Real>(z: R) -> R {
    let sqrt2 = R::from_f64c(std::f64::consts::SQRT_2);
    R::from_f64c(0.5) * erfc(-z / sqrt2)
}
