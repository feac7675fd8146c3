//! Dense polynomials with exact rational coefficients, used as the carrier
//! for target pattern counts as functions of the host size m.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// A polynomial in one variable, stored by ascending powers with no
/// trailing zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn constant(c: Rational) -> Self {
        Poly { coeffs: vec![c] }.normalized()
    }

    /// `c * m^degree`.
    pub fn monomial(c: Rational, degree: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); degree + 1];
        coeffs[degree] = c;
        Poly { coeffs }.normalized()
    }

    /// The identity polynomial `m`.
    pub fn variable() -> Self {
        Poly::monomial(Rational::one(), 1)
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        Poly { coeffs }.normalized()
    }

    fn normalized(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficients by ascending power (empty for zero).
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `m^i`, zero-padded beyond the degree.
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
        .normalized()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_integer(&self, x: i64) -> Rational {
        self.eval(&integer(x))
    }

    /// `m (m-1) ... (m-k+1) / k!`, i.e. the binomial coefficient C(m, k)
    /// as a polynomial in m.
    pub fn binomial(k: usize) -> Poly {
        let mut acc = Poly::constant(Rational::one());
        for j in 0..k {
            acc = &acc * &(Poly::variable() - Poly::constant(integer(j as i64)));
        }
        let mut kfact = Rational::one();
        for j in 1..=k {
            kfact *= integer(j as i64);
        }
        acc.scale(&kfact.recip())
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        Poly { coeffs }.normalized()
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect();
        Poly { coeffs }.normalized()
    }
}

impl Sub for Poly {
    type Output = Poly;

    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly { coeffs }.normalized()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let numer = abs.numer();
            let denom = abs.denom();
            let var = match i {
                0 => String::new(),
                1 => "m".to_string(),
                d => format!("m^{d}"),
            };
            match (i, numer.is_one(), denom.is_one()) {
                (0, _, true) => write!(f, "{numer}")?,
                (0, _, false) => write!(f, "{numer}/{denom}")?,
                (_, true, true) => write!(f, "{var}")?,
                (_, true, false) => write!(f, "{var}/{denom}")?,
                (_, false, true) => write!(f, "{numer}*{var}")?,
                (_, false, false) => write!(f, "{numer}*{var}/{denom}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_basics() {
        let m = Poly::variable();
        let p = &(&m * &m) - &m; // m^2 - m
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.eval_integer(5), integer(20));
        assert_eq!(p.eval(&rational(1, 2)), rational(-1, 4));
        let q = &p + &Poly::constant(integer(1));
        assert_eq!(q.eval_integer(0), integer(1));
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn binomial_polynomials() {
        assert_eq!(Poly::binomial(0), Poly::constant(integer(1)));
        assert_eq!(Poly::binomial(1), Poly::variable());
        for k in 0..=6usize {
            let poly = Poly::binomial(k);
            for m in 0..=12i64 {
                let direct = crate::pattern::binomial(m as usize, k);
                assert_eq!(poly.eval_integer(m), integer(direct as i64), "k={k} m={m}");
            }
        }
    }

    #[test]
    fn display_is_readable() {
        let p = Poly::from_coeffs(vec![
            integer(0),
            rational(-1, 144),
            rational(1, 2),
            integer(2),
        ]);
        assert_eq!(p.to_string(), "2*m^3 + m^2/2 - m/144");
        assert_eq!(Poly::zero().to_string(), "0");
    }
}
