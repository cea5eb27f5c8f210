//! Exact scalars: integer polynomials, Laurent polynomials and rational
//! functions in `q`, together with q-binomial coefficients.

mod laurent;
mod poly;
mod qrational;

pub use laurent::QLaurent;
pub use num_rational::BigRational;
pub use poly::Poly;
pub use qrational::QRational;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};

/// `q^k - 1` as a rational function, for any integer `k`.
fn q_pow_minus_one(k: i64) -> QRational {
    QRational::q_pow(k) - &QRational::one()
}

/// Gaussian binomial `[M over N]` from the product formula
/// `prod_{j<N} (q^{M-j} - 1) / prod_{j=1..N} (q^j - 1)`.
///
/// Negative `M` is allowed and uses the same product.
pub fn qbinom(m: i64, n: i64) -> Result<QLaurent> {
    if n < 0 {
        return Err(Error::NegativeN(n));
    }
    let mut num = QRational::one();
    let mut den = QRational::one();
    for j in 0..n {
        num = num * &q_pow_minus_one(m - j);
        den = den * &q_pow_minus_one(j + 1);
    }
    let value = num.checked_div(&den)?;
    let laurent = value
        .as_laurent()
        .unwrap_or_else(|e| panic!("q-binomial [{m} over {n}] failed to reduce: {e}"));
    Ok(laurent)
}

/// Ordinary binomial coefficient `M(M-1)...(M-N+1)/N!`, valid for negative `M`.
pub fn binomial(m: i64, n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for j in 0..n as i64 {
        acc *= BigInt::from(m - j);
    }
    for j in 1..=n as i64 {
        acc /= BigInt::from(j);
    }
    acc
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn laurent(pairs: &[(i64, i64)]) -> QLaurent {
        QLaurent::from_pairs(pairs)
    }

    #[test]
    fn small_q_binomials() {
        assert_eq!(qbinom(7, 0).unwrap(), QLaurent::one());
        assert_eq!(qbinom(2, 1).unwrap(), laurent(&[(0, 1), (1, 1)]));
        assert_eq!(
            qbinom(4, 2).unwrap(),
            laurent(&[(0, 1), (1, 1), (2, 2), (3, 1), (4, 1)])
        );
        assert_eq!(qbinom(-1, 1).unwrap(), laurent(&[(-1, -1)]));
        assert_eq!(qbinom(1, 3).unwrap(), QLaurent::zero());
        assert_eq!(qbinom(3, -1), Err(Error::NegativeN(-1)));
    }

    #[test]
    fn symmetry_and_classical_limit() {
        for m in 0..=9i64 {
            for n in 0..=m {
                let a = qbinom(m, n).unwrap();
                assert_eq!(a, qbinom(m, m - n).unwrap());
                assert_eq!(a.at_one(), binomial(m, n as u32));
                assert!(a.has_nonnegative_coefficients());
            }
        }
    }

    #[test]
    fn negative_top_limit() {
        for m in -6..0i64 {
            for n in 0..=5u32 {
                assert_eq!(qbinom(m, n as i64).unwrap().at_one(), binomial(m, n));
            }
        }
        assert_eq!(binomial(-2, 3), BigInt::from(-4));
    }

    #[test]
    fn pascal_identity_grid() {
        for m in -5..=8i64 {
            for n in 1..=6i64 {
                let lhs = qbinom(m, n).unwrap();
                let shifted = &laurent(&[(n, 1)]) * &qbinom(m - 1, n).unwrap();
                let rhs = &shifted + &qbinom(m - 1, n - 1).unwrap();
                assert_eq!(lhs, rhs, "M={m} N={n}");
            }
        }
    }

    #[test]
    fn binomial_zero_cases() {
        assert!(binomial(2, 3).is_zero());
        assert_eq!(binomial(5, 0), BigInt::one());
    }
}
