//! Truncated series graded by dimension vectors, with the twisted product
//! `t^d * t^e = q^{-<e,d>} t^{d+e}`.
//!
//! A series carries its quiver (for the Euler form), a truncation bound `N`
//! on the total dimension of stored keys, and an optional twist parameter
//! `q`. Without a twist parameter the product is the commutative one, so the
//! same type covers the quantized ring over `Q(q)`, its specializations at a
//! number, and the commutative ring `Q[[x_i]]`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;

use crate::arith::QRational;
use crate::error::{Error, Result};
use crate::quiver::{DimVector, Functional, Quiver, Slope, Stability};
use crate::scalar::Field;

#[derive(Clone, PartialEq)]
pub struct Series<C> {
    quiver: Arc<Quiver>,
    order: u32,
    q: Option<C>,
    coeffs: BTreeMap<DimVector, C>,
}

impl<C: Field> Series<C> {
    /// The zero series; `q = None` gives the commutative product.
    pub fn zero(quiver: Arc<Quiver>, order: u32, q: Option<C>) -> Self {
        Series {
            quiver,
            order,
            q,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(quiver: Arc<Quiver>, order: u32, q: Option<C>) -> Self {
        let mut s = Self::zero(quiver, order, q);
        let z = s.quiver.zero_vector();
        s.set(z, C::one());
        s
    }

    /// `c * t^d`, or zero when `dim d` exceeds the order.
    pub fn monomial(quiver: Arc<Quiver>, order: u32, q: Option<C>, d: DimVector, c: C) -> Self {
        let mut s = Self::zero(quiver, order, q);
        s.set(d, c);
        s
    }

    /// A series of the same shape (quiver, order, twist) with no terms.
    pub fn empty_like(&self) -> Self {
        Self::zero(self.quiver.clone(), self.order, self.q.clone())
    }

    pub fn one_like(&self) -> Self {
        Self::one(self.quiver.clone(), self.order, self.q.clone())
    }

    pub fn monomial_like(&self, d: DimVector, c: C) -> Self {
        Self::monomial(self.quiver.clone(), self.order, self.q.clone(), d, c)
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn quiver_arc(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn twist_parameter(&self) -> Option<&C> {
        self.q.as_ref()
    }

    /// Stores `c` at `d`; zero coefficients and keys beyond the order are dropped.
    pub fn set(&mut self, d: DimVector, c: C) {
        if d.dim() > self.order || c.is_zero() {
            self.coeffs.remove(&d);
        } else {
            self.coeffs.insert(d, c);
        }
    }

    pub fn add_to(&mut self, d: DimVector, c: C) {
        if c.is_zero() || d.dim() > self.order {
            return;
        }
        match self.coeffs.get_mut(&d) {
            Some(slot) => {
                let sum = std::mem::replace(slot, C::zero()) + &c;
                if sum.is_zero() {
                    self.coeffs.remove(&d);
                } else {
                    *slot = sum;
                }
            }
            None => {
                self.coeffs.insert(d, c);
            }
        }
    }

    pub fn get(&self, d: &DimVector) -> Option<&C> {
        self.coeffs.get(d)
    }

    pub fn coeff(&self, d: &DimVector) -> C {
        self.coeffs.get(d).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&self.quiver.zero_vector())
    }

    /// Nonzero terms in increasing degree.
    pub fn terms(&self) -> impl Iterator<Item = (&DimVector, &C)> {
        self.coeffs.iter()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.constant_term().is_one()
    }

    /// Same quiver and truncation order.
    pub fn compatible(&self, other: &Self) -> Result<()> {
        let same_quiver = Arc::ptr_eq(&self.quiver, &other.quiver) || *self.quiver == *other.quiver;
        if !same_quiver || self.order != other.order || self.q != other.q {
            return Err(Error::IncompatibleSeries);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (d, c) in &other.coeffs {
            out.add_to(d.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (d, c) in &other.coeffs {
            out.add_to(d.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = self.empty_like();
        for (d, x) in &self.coeffs {
            out.set(d.clone(), x.clone() * c);
        }
        out
    }

    /// Restricts to keys with `dim <= order` (never raises the order).
    pub fn truncate(&self, order: u32) -> Self {
        let order = order.min(self.order);
        let mut out = Self::zero(self.quiver.clone(), order, self.q.clone());
        for (d, c) in &self.coeffs {
            out.set(d.clone(), c.clone());
        }
        out
    }

    /// The twist factor `q^k`, or 1 for the commutative product.
    fn q_power(&self, cache: &mut HashMap<i64, C>, k: i64) -> Option<C> {
        let q = self.q.as_ref()?;
        if k == 0 {
            return None;
        }
        Some(cache.entry(k).or_insert_with(|| q.pow_i(k)).clone())
    }

    /// Twisted product: the coefficient at `f` is `sum_{d+e=f} q^{-<e,d>} a_d b_e`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut cache = HashMap::new();
        let mut out = self.empty_like();
        for (d, a) in &self.coeffs {
            let room = self.order - d.dim();
            for (e, b) in &other.coeffs {
                if e.dim() > room {
                    break;
                }
                let mut c = a.clone() * b;
                if let Some(t) = self.q_power(&mut cache, -self.quiver.euler_form(e, d)) {
                    c = c * &t;
                }
                out.add_to(d + e, c);
            }
        }
        Ok(out)
    }

    /// Two-sided inverse of a series with constant term 1, solved degree by degree.
    pub fn invert(&self) -> Result<Self> {
        if !self.constant_term().is_one() {
            return Err(Error::NonUnitConstantTerm);
        }
        let mut cache = HashMap::new();
        let mut out = self.one_like();
        let higher: Vec<(&DimVector, &C)> = self.coeffs.iter().filter(|(d, _)| !d.is_zero()).collect();
        for f in DimVector::all_up_to(self.quiver.vertex_count(), self.order) {
            if f.is_zero() {
                continue;
            }
            let mut acc = C::zero();
            for &(d, a) in &higher {
                if d.dim() > f.dim() {
                    break;
                }
                let Some(e) = f.checked_sub(d) else { continue };
                let Some(b) = out.coeffs.get(&e) else { continue };
                let mut c = a.clone() * b;
                if let Some(t) = self.q_power(&mut cache, -self.quiver.euler_form(&e, d)) {
                    c = c * &t;
                }
                acc = acc + &c;
            }
            out.set(f, -acc);
        }
        Ok(out)
    }

    /// `k`-th power; negative powers go through [`Series::invert`].
    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.invert()? } else { self.clone() };
        let mut acc = self.one_like();
        let mut sq = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// `P(q^eta t)`: the coefficient at `d` gains a factor `q^{eta(d)}`.
    ///
    /// Without a twist parameter (`q = 1`) this is the identity.
    pub fn twist(&self, eta: &Functional) -> Self {
        let mut cache = HashMap::new();
        let mut out = self.empty_like();
        for (d, c) in &self.coeffs {
            let v = match self.q_power(&mut cache, eta.apply(d)) {
                Some(t) => c.clone() * &t,
                None => c.clone(),
            };
            out.set(d.clone(), v);
        }
        out
    }

    /// Keeps the constant term and the terms of slope exactly `mu`.
    pub fn restrict_slope(&self, theta: &Stability, mu: &Slope) -> Self {
        let mut out = self.empty_like();
        for (d, c) in &self.coeffs {
            if d.is_zero() || theta.slope(d).is_ok_and(|s| &s == mu) {
                out.set(d.clone(), c.clone());
            }
        }
        out
    }

    /// Ordered product over strictly decreasing slopes.
    ///
    /// Each factor must have constant term 1 and all other terms in the slope
    /// class of its key.
    pub fn descending_product(factors: &BTreeMap<Slope, Self>, theta: &Stability) -> Result<Option<Self>> {
        for (mu, factor) in factors {
            if !factor.constant_term().is_one() {
                return Err(Error::UnnormalizedFactor(mu.0.clone()));
            }
            for d in factor.coeffs.keys().filter(|d| !d.is_zero()) {
                let found = theta.slope(d)?;
                if &found != mu {
                    return Err(Error::MixedSlopeFactor {
                        key: mu.to_string(),
                        d: d.clone(),
                        found: found.to_string(),
                    });
                }
            }
        }
        let mut iter = factors.values().rev();
        let Some(first) = iter.next() else {
            return Ok(None);
        };
        let mut acc = first.clone();
        for factor in iter {
            acc = acc.mul(factor)?;
        }
        Ok(Some(acc))
    }

    /// Applies `f` to every coefficient, producing a series with twist `q`.
    pub fn try_map<D: Field>(
        &self,
        q: Option<D>,
        mut f: impl FnMut(&DimVector, &C) -> Result<D>,
    ) -> Result<Series<D>> {
        let mut out = Series::zero(self.quiver.clone(), self.order, q);
        for (d, c) in &self.coeffs {
            out.set(d.clone(), f(d, c)?);
        }
        Ok(out)
    }

    /// Keys where the two series differ, with both coefficients.
    pub fn differences(&self, other: &Self) -> Vec<(DimVector, C, C)> {
        let mut keys: Vec<&DimVector> = self.coeffs.keys().chain(other.coeffs.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .filter_map(|d| {
                let (a, b) = (self.coeff(d), other.coeff(d));
                (a != b).then(|| (d.clone(), a, b))
            })
            .collect()
    }
}

impl Series<QRational> {
    /// Zero of the quantized ring `Q(q)_q[[N^I]]`.
    pub fn skew_zero(quiver: Arc<Quiver>, order: u32) -> Self {
        Series::zero(quiver, order, Some(QRational::q()))
    }

    pub fn skew_one(quiver: Arc<Quiver>, order: u32) -> Self {
        Series::one(quiver, order, Some(QRational::q()))
    }

    /// Specialization at `q = 1` into the commutative ring.
    pub fn specialize_q1(&self) -> Result<Series<BigRational>> {
        self.try_map(None, |d, c| c.at_one().map_err(|_| Error::PoleAtOne(d.clone())))
    }

    /// Specialization at a numeric `q0`, keeping the twisted product.
    pub fn specialize(&self, q0: &BigRational) -> Result<Series<BigRational>> {
        self.try_map(Some(q0.clone()), |_, c| c.evaluate(q0))
    }
}

impl Series<BigRational> {
    /// Zero of the commutative ring `Q[[x_i]]`.
    pub fn comm_zero(quiver: Arc<Quiver>, order: u32) -> Self {
        Series::zero(quiver, order, None)
    }

    pub fn comm_one(quiver: Arc<Quiver>, order: u32) -> Self {
        Series::one(quiver, order, None)
    }
}

impl<C: Field + fmt::Display> fmt::Display for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0 + O({})", self.order + 1);
        }
        for (k, (d, c)) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if d.is_zero() {
                write!(f, "{c}")?;
            } else {
                write!(f, "[{c}]t^{d}")?;
            }
        }
        write!(f, " + O({})", self.order + 1)
    }
}

impl<C: Field> fmt::Debug for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Series")
            .field("order", &self.order)
            .field("q", &self.q)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use crate::arith::Poly;
    use crate::quiver::catalog::*;
    use crate::SkewSeries;

    fn dv(xs: &[u32]) -> DimVector {
        DimVector::new(xs.to_vec())
    }

    fn qr(n: &[i64], d: &[i64]) -> QRational {
        QRational::new(Poly::from_i64s(n), Poly::from_i64s(d)).unwrap()
    }

    fn t(q: &Arc<Quiver>, n: u32, d: &[u32]) -> SkewSeries {
        SkewSeries::skew_zero(q.clone(), n).monomial_like(dv(d), QRational::one())
    }

    #[test]
    fn twisted_product_on_k1() {
        let k1 = Arc::new(kronecker(1));
        let (ti, tj) = (t(&k1, 3, &[1, 0]), t(&k1, 3, &[0, 1]));
        assert_eq!(tj.mul(&ti).unwrap(), t(&k1, 3, &[1, 1]));
        let ij = ti.mul(&tj).unwrap();
        assert_eq!(ij.coeff(&dv(&[1, 1])), QRational::q());
        let one = SkewSeries::skew_one(k1.clone(), 3);
        assert_eq!(one.mul(&ij).unwrap(), ij);
    }

    #[test]
    fn commutation_relation() {
        let k2 = Arc::new(kronecker(2));
        for (d, e) in [([1, 0], [0, 1]), ([2, 1], [1, 1]), ([1, 2], [3, 0])] {
            let (td, te) = (t(&k2, 6, &d), t(&k2, 6, &e));
            let lhs = te.mul(&td).unwrap();
            let factor = QRational::q_pow(k2.skew_form(&dv(&e), &dv(&d)));
            let rhs = td.mul(&te).unwrap().scale(&factor);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn inverse_of_one_plus_monomial() {
        let q0 = Arc::new(single_vertex());
        let a = SkewSeries::skew_one(q0.clone(), 3).add(&t(&q0, 3, &[1])).unwrap();
        let inv = a.invert().unwrap();
        // 1 - t + q^{-1} t^2 - q^{-3} t^3, with <d,d> = 1 twisting each square
        assert_eq!(inv.coeff(&dv(&[1])), -QRational::one());
        assert_eq!(inv.coeff(&dv(&[2])), QRational::q_pow(-1));
        assert_eq!(inv.coeff(&dv(&[3])), -QRational::q_pow(-3));
        assert!(inv.mul(&a).unwrap().is_one());
        assert!(a.mul(&inv).unwrap().is_one());
        assert!(SkewSeries::skew_one(q0.clone(), 3).invert().unwrap().is_one());
        let bad = a.scale(&QRational::from_int(2));
        assert_eq!(bad.invert(), Err(Error::NonUnitConstantTerm));
    }

    #[test]
    fn twist_is_additive() {
        let k1 = Arc::new(kronecker(1));
        let mut a = SkewSeries::skew_one(k1.clone(), 3);
        a.set(dv(&[1, 1]), qr(&[1], &[-1, 1]));
        a.set(dv(&[0, 2]), qr(&[0, 3], &[1]));
        let eta = Functional::new(vec![2, -1]);
        let nu = Functional::new(vec![-1, 3]);
        assert_eq!(a.twist(&Functional::zero(2)), a);
        assert_eq!(a.twist(&eta).twist(&nu), a.twist(&(&eta + &nu)));
        let b = SkewSeries::skew_one(k1.clone(), 3).add(&t(&k1, 3, &[1, 1])).unwrap();
        assert_eq!(b.twist(&eta).coeff(&dv(&[1, 1])), QRational::q_pow(1));
    }

    #[test]
    fn incompatible_series_are_rejected() {
        let k1 = Arc::new(kronecker(1));
        let a = SkewSeries::skew_one(k1.clone(), 3);
        let b = SkewSeries::skew_one(k1.clone(), 4);
        assert_eq!(a.mul(&b), Err(Error::IncompatibleSeries));
        let c = SkewSeries::skew_one(Arc::new(kronecker(2)), 3);
        assert_eq!(a.add(&c), Err(Error::IncompatibleSeries));
    }

    #[test]
    fn restriction_to_slopes() {
        let k1 = Arc::new(kronecker(1));
        let theta = kronecker_stability();
        let mut a = SkewSeries::skew_one(k1.clone(), 4);
        for d in DimVector::all_up_to(2, 4).into_iter().filter(|d| !d.is_zero()) {
            a.set(d.clone(), QRational::from_int(d.dim() as i64 + 1));
        }
        let half = a.restrict_slope(&theta, &Slope::new(1, 2));
        let keys: Vec<&DimVector> = half.terms().map(|(d, _)| d).collect();
        assert_eq!(keys, vec![&dv(&[0, 0]), &dv(&[1, 1]), &dv(&[2, 2])]);
        assert!(half.restrict_slope(&theta, &Slope::new(1, 1)).is_one());
        // partition: the restrictions rebuild the series
        let mut rebuilt = a.one_like();
        for (mu, _) in crate::quiver::slope_classes(&k1, &theta, 4) {
            rebuilt = rebuilt.add(&a.restrict_slope(&theta, &mu).sub(&a.one_like()).unwrap()).unwrap();
        }
        assert_eq!(rebuilt, a);
    }

    #[test]
    fn descending_product_validation() {
        let k1 = Arc::new(kronecker(1));
        let theta = kronecker_stability();
        let one = SkewSeries::skew_one(k1.clone(), 3);
        let fj = one.add(&t(&k1, 3, &[0, 1])).unwrap();
        let fi = one.add(&t(&k1, 3, &[1, 0])).unwrap();
        let single = BTreeMap::from([(Slope::new(1, 1), fj.clone())]);
        assert_eq!(Series::descending_product(&single, &theta).unwrap(), Some(fj.clone()));
        let two = BTreeMap::from([(Slope::new(1, 1), fj.clone()), (Slope::new(0, 1), fi.clone())]);
        assert_eq!(Series::descending_product(&two, &theta).unwrap(), Some(fj.mul(&fi).unwrap()));
        let mixed = BTreeMap::from([(Slope::new(1, 1), fi.add(&t(&k1, 3, &[0, 1])).unwrap())]);
        assert!(matches!(Series::descending_product(&mixed, &theta), Err(Error::MixedSlopeFactor { .. })));
        let unnormalized = BTreeMap::from([(Slope::new(0, 1), t(&k1, 3, &[1, 0]))]);
        assert!(matches!(Series::descending_product(&unnormalized, &theta), Err(Error::UnnormalizedFactor(_))));
    }

    #[test]
    fn specialization_at_one() {
        let q0 = Arc::new(single_vertex());
        let mut a = SkewSeries::skew_one(q0.clone(), 2);
        a.set(dv(&[1]), qr(&[1, 1], &[1]));
        let s = a.specialize_q1().unwrap();
        assert_eq!(s.coeff(&dv(&[1])), BigRational::from_int(2));
        assert_eq!(s.twist_parameter(), None);
        a.set(dv(&[2]), qr(&[1], &[-1, 1]));
        assert_eq!(a.specialize_q1(), Err(Error::PoleAtOne(dv(&[2]))));
        assert!(SkewSeries::skew_one(q0, 2).specialize_q1().unwrap().is_one());
    }

    #[test]
    fn float_instantiation_agrees_with_exact_specialization() {
        let k2 = Arc::new(kronecker(2));
        let mut a = SkewSeries::skew_one(k2.clone(), 4);
        a.set(dv(&[1, 0]), qr(&[1], &[-1, 1]));
        a.set(dv(&[0, 1]), qr(&[0, 1], &[-1, 1]));
        a.set(dv(&[1, 1]), qr(&[2, 1], &[1]));
        let exact = a.mul(&a.invert().unwrap()).unwrap().mul(&a).unwrap().specialize(&BigRational::from_int(3)).unwrap();
        let af: Series<f64> = a
            .try_map(Some(3.0), |_, c| {
                let v = c.evaluate(&BigRational::from_int(3))?;
                Ok(v.numer().to_string().parse::<f64>().unwrap() / v.denom().to_string().parse::<f64>().unwrap())
            })
            .unwrap();
        let approx = af.mul(&af.invert().unwrap()).unwrap().mul(&af).unwrap();
        for (d, c) in exact.terms() {
            let want = c.numer().to_string().parse::<f64>().unwrap() / c.denom().to_string().parse::<f64>().unwrap();
            assert!((approx.coeff(d) - want).abs() < 1e-9 * want.abs().max(1.0));
        }
    }
}
