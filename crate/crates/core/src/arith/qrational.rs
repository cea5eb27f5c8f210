use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::laurent::QLaurent;
use super::poly::Poly;
use crate::error::{Error, Result};
use crate::scalar::Field;

/// A rational function in `q` with integer-polynomial numerator and denominator.
///
/// Always kept canonical: numerator and denominator coprime in `Z[q]` (which
/// includes unit integer content across the pair) and the denominator has a
/// positive leading coefficient. Equality is therefore structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QRational {
    num: Poly,
    den: Poly,
}

impl QRational {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return QRational::zero();
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        Self::fix_sign(num, den)
    }

    fn fix_sign(num: Poly, den: Poly) -> Self {
        if den.leading().is_some_and(Signed::is_negative) {
            QRational { num: -num, den: -den }
        } else {
            QRational { num, den }
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        QRational { num: p, den: Poly::one() }
    }

    pub fn from_integer(n: BigInt) -> Self {
        Self::from_poly(Poly::constant(n))
    }

    /// The indeterminate `q`.
    pub fn q() -> Self {
        Self::q_pow(1)
    }

    /// `q^k` for any integer `k`.
    pub fn q_pow(k: i64) -> Self {
        let m = Poly::monomial(BigInt::one(), k.unsigned_abs() as usize);
        if k >= 0 {
            QRational { num: m, den: Poly::one() }
        } else {
            QRational { num: Poly::one(), den: m }
        }
    }

    /// `1 / (1 - q^-j)`, i.e. `q^j / (q^j - 1)`.
    pub fn inv_one_minus_q_inv(j: usize) -> Self {
        QRational {
            num: Poly::monomial(BigInt::one(), j),
            den: Poly::q_pow_minus_one(j),
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn checked_div(&self, rhs: &QRational) -> Result<QRational> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.clone() * &rhs.recip_unchecked())
    }

    fn recip_unchecked(&self) -> QRational {
        Self::fix_sign(self.den.clone(), self.num.clone())
    }

    /// Exact value at `q0`; fails when the reduced denominator vanishes there.
    pub fn evaluate(&self, q0: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(q0);
        if d.is_zero() {
            return Err(Error::PoleAt(q0.clone()));
        }
        Ok(self.num.eval(q0) / d)
    }

    /// The value at `q = 1`, if regular there.
    pub fn at_one(&self) -> Result<BigRational> {
        self.evaluate(&BigRational::one())
    }

    /// Succeeds exactly when `self` lies in `Z[q, q^-1]`.
    pub fn as_laurent(&self) -> Result<QLaurent> {
        let fail = |reason: String| Error::NotLaurentIntegral {
            value: self.to_string(),
            reason,
        };
        let nonzero: Vec<(usize, &BigInt)> = self
            .den
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        if nonzero.len() != 1 {
            return Err(fail(format!("denominator {} has a root q != 0", self.den)));
        }
        let (shift, c) = nonzero[0];
        if !c.is_one() {
            return Err(fail(format!("non-integer coefficient (denominator content {c})")));
        }
        Ok(QLaurent::from_poly_shifted(&self.num, -(shift as i64)))
    }

    /// Multiplicity of `q = 1` as a pole (positive) or zero (negative).
    pub fn pole_order_at_one(&self) -> i64 {
        fn mult(p: &Poly) -> i64 {
            let root = Poly::from_i64s(&[-1, 1]);
            let mut p = p.clone();
            let mut k = 0;
            while let Some(next) = p.div_exact(&root) {
                p = next;
                k += 1;
            }
            k
        }
        if self.is_zero() {
            return 0;
        }
        mult(&self.den) - mult(&self.num)
    }
}

impl fmt::Display for QRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &Poly| {
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}

impl fmt::Debug for QRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QRational({self})")
    }
}

impl Zero for QRational {
    fn zero() -> Self {
        QRational { num: Poly::zero(), den: Poly::one() }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for QRational {
    fn one() -> Self {
        QRational { num: Poly::one(), den: Poly::one() }
    }
}

fn add_impl(a: &QRational, b: &QRational, negate_b: bool) -> QRational {
    let bn = if negate_b { -b.num.clone() } else { b.num.clone() };
    if b.num.is_zero() {
        return a.clone();
    }
    if a.num.is_zero() {
        return QRational { num: bn, den: b.den.clone() };
    }
    if a.den == b.den {
        if a.den.is_one() {
            return QRational::from_poly(&a.num + &bn);
        }
        return QRational::normalized(&a.num + &bn, a.den.clone());
    }
    let g = a.den.gcd(&b.den);
    if g.is_one() {
        let num = &(&a.num * &b.den) + &(&bn * &a.den);
        let den = &a.den * &b.den;
        // coprime denominators leave nothing to cancel
        return QRational::fix_sign(num, den);
    }
    let ad = a.den.div_exact(&g).expect("gcd divides");
    let bd = b.den.div_exact(&g).expect("gcd divides");
    let num = &(&a.num * &bd) + &(&bn * &ad);
    let den = &ad * &b.den;
    QRational::normalized(num, den)
}

fn mul_impl(a: &QRational, b: &QRational) -> QRational {
    if a.num.is_zero() || b.num.is_zero() {
        return QRational::zero();
    }
    if a.den.is_one() && b.den.is_one() {
        return QRational::from_poly(&a.num * &b.num);
    }
    let g1 = a.num.gcd(&b.den);
    let g2 = b.num.gcd(&a.den);
    let an = a.num.div_exact(&g1).expect("gcd divides");
    let bd = b.den.div_exact(&g1).expect("gcd divides");
    let bn = b.num.div_exact(&g2).expect("gcd divides");
    let ad = a.den.div_exact(&g2).expect("gcd divides");
    QRational::fix_sign(&an * &bn, &ad * &bd)
}

impl Neg for QRational {
    type Output = QRational;
    fn neg(self) -> QRational {
        QRational { num: -self.num, den: self.den }
    }
}

impl Add for QRational {
    type Output = QRational;
    fn add(self, rhs: QRational) -> QRational {
        add_impl(&self, &rhs, false)
    }
}

impl Add<&QRational> for QRational {
    type Output = QRational;
    fn add(self, rhs: &QRational) -> QRational {
        add_impl(&self, rhs, false)
    }
}

impl<'a> Add<&'a QRational> for &'a QRational {
    type Output = QRational;
    fn add(self, rhs: &QRational) -> QRational {
        add_impl(self, rhs, false)
    }
}

impl Sub for QRational {
    type Output = QRational;
    fn sub(self, rhs: QRational) -> QRational {
        add_impl(&self, &rhs, true)
    }
}

impl Sub<&QRational> for QRational {
    type Output = QRational;
    fn sub(self, rhs: &QRational) -> QRational {
        add_impl(&self, rhs, true)
    }
}

impl<'a> Sub<&'a QRational> for &'a QRational {
    type Output = QRational;
    fn sub(self, rhs: &QRational) -> QRational {
        add_impl(self, rhs, true)
    }
}

impl Mul for QRational {
    type Output = QRational;
    fn mul(self, rhs: QRational) -> QRational {
        mul_impl(&self, &rhs)
    }
}

impl Mul<&QRational> for QRational {
    type Output = QRational;
    fn mul(self, rhs: &QRational) -> QRational {
        mul_impl(&self, rhs)
    }
}

impl<'a> Mul<&'a QRational> for &'a QRational {
    type Output = QRational;
    fn mul(self, rhs: &QRational) -> QRational {
        mul_impl(self, rhs)
    }
}

impl Div for QRational {
    type Output = QRational;
    /// Panics on division by zero; use [`QRational::checked_div`] otherwise.
    fn div(self, rhs: QRational) -> QRational {
        self.checked_div(&rhs).expect("division by zero rational function")
    }
}

impl Field for QRational {
    fn from_int(n: i64) -> Self {
        QRational::from_integer(BigInt::from(n))
    }

    fn pow_i(&self, k: i64) -> Self {
        let monomial = |p: &Poly| p.coeffs().iter().filter(|c| !c.is_zero()).count() <= 1;
        if monomial(&self.num) && monomial(&self.den) {
            let e = k.unsigned_abs() as usize;
            let (n, d) = (self.num.pow(e), self.den.pow(e));
            return if k >= 0 {
                QRational { num: n, den: d }
            } else {
                QRational::fix_sign(d, n)
            };
        }
        let mut base = if k < 0 { self.recip_unchecked() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = QRational::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }
}
