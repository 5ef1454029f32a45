//! Angles measured in full turns: `e(a) = exp(2 pi i a)`.

use num_complex::Complex64;
use std::f64::consts::TAU;

/// `exp(2 pi i a)`, reducing `a` first so large arguments keep full accuracy.
pub fn e(a: f64) -> Complex64 {
    let (s, c) = (TAU * (a - a.round())).sin_cos();
    Complex64::new(c, s)
}

pub fn polar(radius: f64, a: f64) -> Complex64 {
    e(a) * radius
}

/// Principal argument in turns, in (-1/2, 1/2].
pub fn arg(z: Complex64) -> f64 {
    let a = z.arg() / TAU;
    if a <= -0.5 {
        a + 1.0
    } else {
        a
    }
}

/// Representative of `a` modulo 1 in (-1/2, 1/2].
pub fn reduce(a: f64) -> f64 {
    let r = a - a.round();
    if r <= -0.5 {
        r + 1.0
    } else {
        r
    }
}

/// `|z|^a e(turns * a)` for a lifted point given by modulus and argument in turns.
pub fn lifted_pow(modulus: f64, turns: f64, a: f64) -> Complex64 {
    polar(modulus.powf(a), turns * a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        assert!((e(0.25) - Complex64::new(0.0, 1.0)).norm() < 1e-16);
        assert!((e(1e6 + 0.5) + Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert_eq!(reduce(0.5), 0.5);
        assert_eq!(reduce(-0.5), 0.5);
        assert!((reduce(1.3) - 0.3).abs() < 1e-15);
        assert!((arg(Complex64::new(-1.0, -0.0)) - 0.5).abs() < 1e-15);
    }
}
