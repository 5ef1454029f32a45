//! Double-double arithmetic (about 32 significant digits), just enough to
//! evaluate the trinomial and its derivative without cancellation loss.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl Dd {
    pub fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl Add for Dd {
    type Output = Dd;

    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;

    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;

    fn sub(self, o: Dd) -> Dd {
        self + -o
    }
}

impl Mul for Dd {
    type Output = Dd;

    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DdComplex {
    pub re: Dd,
    pub im: Dd,
}

impl DdComplex {
    pub fn from_c64(z: Complex64) -> Self {
        DdComplex { re: Dd::new(z.re), im: Dd::new(z.im) }
    }

    pub fn one() -> Self {
        DdComplex { re: Dd::new(1.0), im: Dd::default() }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn scale(self, k: f64) -> Self {
        self * DdComplex { re: Dd::new(k), im: Dd::default() }
    }

    pub fn powu(self, mut e: u32) -> Self {
        let mut base = self;
        let mut acc = DdComplex::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl Add for DdComplex {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        DdComplex { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for DdComplex {
    type Output = Self;

    fn sub(self, o: Self) -> Self {
        DdComplex { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Mul for DdComplex {
    type Output = Self;

    fn mul(self, o: Self) -> Self {
        DdComplex { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keeps_low_order_bits() {
        let a = Dd::new(1.0) + Dd::new(1e-20);
        assert_eq!((a - Dd::new(1.0)).to_f64(), 1e-20);
        // 3 fl(1/3) = 1 - 2^-54 exactly, invisible in plain f64
        let x = Dd::new(1.0 / 3.0) * Dd::new(3.0) - Dd::new(1.0);
        assert_eq!(x.to_f64(), -(2f64.powi(-54)));
        assert_eq!(1.0 / 3.0 * 3.0 - 1.0, 0.0);
        let z = DdComplex::from_c64(Complex64::new(1.0, 1e-9)).powu(3);
        let exact = Complex64::new(1.0 - 3e-18, 3e-9 - 1e-27);
        assert!(((z.re - Dd::new(1.0)).to_f64() - (-3e-18)).abs() < 1e-30);
        assert!((z.to_c64() - exact).norm() < 1e-15);
    }
}
