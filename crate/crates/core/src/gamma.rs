//! Gamma function for real and complex arguments (Lanczos, g = 7, with reflection).

use num_complex::Complex64;
use std::f64::consts::PI;

const G: f64 = 7.0;
const P: [f64; 9] = [
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

/// True when `x` is (numerically) a pole of Gamma.
pub fn is_pole(x: f64) -> bool {
    x <= 0.0 && (x - x.round()).abs() < 1e-12
}

pub fn gamma(x: f64) -> f64 {
    if is_pole(x) {
        return f64::NAN;
    }
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut a = P[0];
        for (i, c) in P.iter().enumerate().skip(1) {
            a += c / (x + i as f64);
        }
        let t = x + G + 0.5;
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
    }
}

/// `1 / Gamma(x)`, exactly zero at the poles.
pub fn rgamma(x: f64) -> f64 {
    if is_pole(x) {
        return 0.0;
    }
    if x < 0.5 {
        (PI * x).sin() * gamma(1.0 - x) / PI
    } else {
        1.0 / gamma(x)
    }
}

/// `(ln|Gamma(x)|, sign Gamma(x))`.
pub fn ln_gamma_signed(x: f64) -> (f64, f64) {
    if x < 0.5 {
        let s = (PI * x).sin();
        let (l, sg) = ln_gamma_signed(1.0 - x);
        (PI.ln() - s.abs().ln() - l, s.signum() * sg)
    } else {
        let x = x - 1.0;
        let mut a = P[0];
        for (i, c) in P.iter().enumerate().skip(1) {
            a += c / (x + i as f64);
        }
        let t = x + G + 0.5;
        (0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + a.ln(), 1.0)
    }
}

/// Complex log-gamma (any branch; callers exponentiate).
pub fn ln_gamma_complex(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let s = (z * PI).sin();
        Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma_complex(Complex64::new(1.0, 0.0) - z)
    } else {
        let z = z - 1.0;
        let mut a = Complex64::new(P[0], 0.0);
        for (i, c) in P.iter().enumerate().skip(1) {
            a += *c / (z + i as f64);
        }
        let t = z + G + 0.5;
        0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + a.ln()
    }
}

pub fn is_pole_complex(z: Complex64) -> bool {
    z.im.abs() < 1e-12 && is_pole(z.re)
}

/// `1 / Gamma(z)`, zero at the poles.
pub fn rgamma_complex(z: Complex64) -> Complex64 {
    if is_pole_complex(z) {
        return Complex64::new(0.0, 0.0);
    }
    (-ln_gamma_complex(z)).exp()
}

pub fn gamma_complex(z: Complex64) -> Complex64 {
    ln_gamma_complex(z).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_and_half_values() {
        let mut f = 1.0;
        for k in 1..15 {
            assert!((gamma(k as f64) - f).abs() / f < 1e-13, "{k}");
            f *= k as f64;
        }
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(-0.5) + 2.0 * PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn poles() {
        assert_eq!(rgamma(0.0), 0.0);
        assert_eq!(rgamma(-3.0), 0.0);
        assert!(gamma(-2.0).is_nan());
        assert_eq!(rgamma_complex(Complex64::new(-4.0, 0.0)), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn recurrence_and_reflection() {
        for &x in &[0.1, 0.7, 1.3, 2.9, -0.3, -1.7, -2.2, 6.25] {
            assert!((gamma(x + 1.0) - x * gamma(x)).abs() < 1e-12 * gamma(x + 1.0).abs().max(1.0));
            let (l, s) = ln_gamma_signed(x);
            assert!((s * l.exp() - gamma(x)).abs() < 1e-12 * gamma(x).abs().max(1.0));
        }
    }

    #[test]
    fn complex_matches_real_and_recurrence() {
        for &x in &[0.2, 1.5, 3.7, -0.4, -2.6] {
            let z = gamma_complex(Complex64::new(x, 0.0));
            assert!((z.re - gamma(x)).abs() < 1e-12 * gamma(x).abs().max(1.0) && z.im.abs() < 1e-12);
        }
        for &z in &[Complex64::new(0.3, 0.7), Complex64::new(-1.2, 2.5), Complex64::new(4.0, -3.0)] {
            let lhs = gamma_complex(z + 1.0);
            let rhs = z * gamma_complex(z);
            assert!((lhs - rhs).norm() < 1e-12 * lhs.norm());
        }
        // |Gamma(iy)|^2 = pi / (y sinh(pi y))
        let y = 1.3;
        let v = gamma_complex(Complex64::new(0.0, y)).norm_sqr();
        assert!((v - PI / (y * (PI * y).sinh())).abs() < 1e-13);
    }
}
