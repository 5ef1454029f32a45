//! Laurent polynomials in one variable with big-integer coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// `sum_i coeffs[i] t^{low + i}`, kept normalized: no zero coefficients at
/// either end, and the zero polynomial has no coefficients and `low = 0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Laurent {
    low: i64,
    coeffs: Vec<BigInt>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn one() -> Self {
        Laurent::monomial(1, 0)
    }

    pub fn monomial(c: i64, exponent: i64) -> Self {
        Laurent::from_parts(exponent, vec![BigInt::from(c)])
    }

    pub fn from_parts(low: i64, coeffs: Vec<BigInt>) -> Self {
        let mut l = Laurent { low, coeffs };
        l.normalize();
        l
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient (0 for the zero polynomial).
    pub fn low(&self) -> i64 {
        self.low
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, exponent: i64) -> BigInt {
        let i = exponent - self.low;
        if i < 0 || i as usize >= self.coeffs.len() {
            BigInt::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    /// Multiply every coefficient by an integer.
    pub fn scale(&self, k: &BigInt) -> Laurent {
        Laurent::from_parts(self.low, self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Divide every coefficient by `k`; `None` unless the division is exact.
    pub fn div_exact(&self, k: &BigInt) -> Option<Laurent> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (quo, rem) = c.div_rem(k);
            if !rem.is_zero() {
                return None;
            }
            out.push(quo);
        }
        Some(Laurent::from_parts(self.low, out))
    }

    /// Multiply by `t^shift`.
    pub fn shift(&self, shift: i64) -> Laurent {
        if self.is_zero() {
            return Laurent::zero();
        }
        Laurent { low: self.low + shift, coeffs: self.coeffs.clone() }
    }

    /// Evaluate at a floating-point value of the variable.
    pub fn eval_f64(&self, t: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs.iter().enumerate().map(|(i, c)| c.to_f64().unwrap_or(f64::NAN) * t.powi((self.low + i as i64) as i32)).sum()
    }
}

impl<'a> Add<&'a Laurent> for &'a Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let low = self.low.min(rhs.low);
        let high = (self.low + self.coeffs.len() as i64).max(rhs.low + rhs.coeffs.len() as i64);
        let mut c = vec![BigInt::zero(); (high - low) as usize];
        for (i, v) in self.coeffs.iter().enumerate() {
            c[(self.low - low) as usize + i] += v;
        }
        for (i, v) in rhs.coeffs.iter().enumerate() {
            c[(rhs.low - low) as usize + i] += v;
        }
        Laurent::from_parts(low, c)
    }
}

impl<'a> Sub<&'a Laurent> for &'a Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Laurent> for &'a Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        if self.is_zero() || rhs.is_zero() {
            return Laurent::zero();
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Laurent::from_parts(self.low + rhs.low, c)
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        Laurent { low: self.low, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Add for Laurent {
    type Output = Laurent;
    fn add(self, rhs: Laurent) -> Laurent {
        &self + &rhs
    }
}

impl Sub for Laurent {
    type Output = Laurent;
    fn sub(self, rhs: Laurent) -> Laurent {
        &self - &rhs
    }
}

impl Mul for Laurent {
    type Output = Laurent;
    fn mul(self, rhs: Laurent) -> Laurent {
        &self * &rhs
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let e = self.low + i as i64;
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match e {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if e == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(low: i64, c: &[i64]) -> Laurent {
        Laurent::from_parts(low, c.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn arithmetic() {
        let a = l(-1, &[1, 2]); // t^-1 + 2
        let b = l(0, &[-2, 0, 3]); // -2 + 3t^2
        assert_eq!(&a + &b, l(-1, &[1, 0, 0, 3]));
        assert_eq!(&a * &b, l(-1, &[-2, -4, 3, 6]));
        assert!((&a - &a).is_zero());
        assert_eq!(l(0, &[0, 0, 5, 0]), Laurent::monomial(5, 2));
        assert_eq!(l(0, &[0, 0]), Laurent::zero());
        assert_eq!(l(-2, &[4, 6]).div_exact(&BigInt::from(2)), Some(l(-2, &[2, 3])));
        assert_eq!(l(-2, &[4, 5]).div_exact(&BigInt::from(2)), None);
        assert!((a.eval_f64(2.0) - 2.5).abs() < 1e-15);
    }

    #[test]
    fn display() {
        assert_eq!(l(-1, &[1, -1, 0, 2]).to_string(), "2*t^2 - 1 + t^-1");
        assert_eq!(Laurent::zero().to_string(), "0");
        assert_eq!(Laurent::monomial(-1, 1).to_string(), "-t");
    }
}
