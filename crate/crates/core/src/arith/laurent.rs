use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::Poly;
use super::qrational::QRational;

/// An element of `Z[q, q^-1]`, stored sparsely by exponent.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QLaurent {
    terms: BTreeMap<i64, BigInt>,
}

impl QLaurent {
    pub fn zero() -> Self {
        QLaurent::default()
    }

    pub fn one() -> Self {
        Self::monomial(BigInt::one(), 0)
    }

    pub fn monomial(c: BigInt, k: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        QLaurent { terms }
    }

    pub fn from_pairs(pairs: &[(i64, i64)]) -> Self {
        let mut out = QLaurent::zero();
        for &(k, c) in pairs {
            out.add_term(k, BigInt::from(c));
        }
        out
    }

    /// `q^shift * p(q)`.
    pub fn from_poly_shifted(p: &Poly, shift: i64) -> Self {
        let mut out = QLaurent::zero();
        for (k, c) in p.coeffs().iter().enumerate() {
            out.add_term(k as i64 + shift, c.clone());
        }
        out
    }

    fn add_term(&mut self, k: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn coeff(&self, k: i64) -> BigInt {
        self.terms.get(&k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// True when no negative power of `q` occurs.
    pub fn is_polynomial(&self) -> bool {
        self.min_exponent().is_none_or(|k| k >= 0)
    }

    /// Value at `q = 1`, the sum of the coefficients.
    pub fn at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn evaluate(&self, q0: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (&k, c) in &self.terms {
            acc += BigRational::from_integer(c.clone()) * num_traits::pow::Pow::pow(q0, k as i32);
        }
        acc
    }

    /// Splits off the lowest power: `self = q^shift * poly` with `poly(0) != 0`.
    pub fn to_shifted_poly(&self) -> (i64, Poly) {
        let Some(lo) = self.min_exponent() else {
            return (0, Poly::zero());
        };
        let hi = self.max_exponent().unwrap_or(lo);
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (&k, c) in &self.terms {
            coeffs[(k - lo) as usize] = c.clone();
        }
        (lo, Poly::from_coeffs(coeffs))
    }

    pub fn to_qrational(&self) -> QRational {
        let (shift, p) = self.to_shifted_poly();
        QRational::from_poly(p) * &QRational::q_pow(shift)
    }
}

impl Neg for QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        QLaurent {
            terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect(),
        }
    }
}

impl<'a> Add<&'a QLaurent> for &'a QLaurent {
    type Output = QLaurent;
    fn add(self, rhs: &QLaurent) -> QLaurent {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a QLaurent> for &'a QLaurent {
    type Output = QLaurent;
    fn sub(self, rhs: &QLaurent) -> QLaurent {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a QLaurent> for &'a QLaurent {
    type Output = QLaurent;
    fn mul(self, rhs: &QLaurent) -> QLaurent {
        let mut out = QLaurent::zero();
        for (&a, x) in &self.terms {
            for (&b, y) in &rhs.terms {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

impl fmt::Display for QLaurent {
    /// Descending exponents, e.g. `q^2 + 2*q + 1 - q^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (&k, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            match (k, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{abs}*q")?,
                (_, true) => write!(f, "q^{k}")?,
                (_, false) => write!(f, "{abs}*q^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QLaurent({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_display() {
        let a = QLaurent::from_pairs(&[(-1, -1), (0, 1)]);
        let b = QLaurent::from_pairs(&[(1, 1)]);
        assert_eq!((&a * &b).to_string(), "q - 1");
        assert_eq!((&a + &a).to_string(), "2 - 2*q^-1");
        assert!((&a - &a).is_zero());
        assert_eq!(a.at_one(), BigInt::zero());
    }

    #[test]
    fn shifted_poly_round_trip() {
        let a = QLaurent::from_pairs(&[(-2, 3), (1, -1)]);
        let (s, p) = a.to_shifted_poly();
        assert_eq!(s, -2);
        assert_eq!(QLaurent::from_poly_shifted(&p, s), a);
        assert_eq!(a.to_qrational().as_laurent().unwrap(), a);
    }
}
