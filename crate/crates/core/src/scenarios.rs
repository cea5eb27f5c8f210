//! Worked families: Kronecker quivers with the factorization of `F_mu` into
//! `(1 + y^k)^{c(mu,k)}` and the exponents `d(a,b)`, and Dynkin quivers where
//! the slope factors are automorphisms of positive roots.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hn::{series_real_root, HnContext};
use crate::poisson::{phi, unit_power, vertex_composite, UnitAuto};
use crate::quiver::catalog::{kronecker, kronecker_stability, single_vertex};
use crate::quiver::{DimVector, Functional, Quiver, Slope, Stability};
use crate::report::Report;
use crate::wallcross::{qbinomial_series, vertex_family};
use crate::CommSeries;

/// A series in one variable `y`, stored over the one-vertex quiver.
pub type OneVariable = CommSeries;

fn y_series(order: u32) -> OneVariable {
    CommSeries::comm_one(Arc::new(single_vertex()), order)
}

fn y(k: u32) -> DimVector {
    DimVector::new(vec![k])
}

/// The restriction of `s` to the ray `N (a,b)`, as a series in `y = x^{(a,b)}`.
pub fn along_ray(s: &CommSeries, ray: &DimVector) -> OneVariable {
    let order = s.order() / ray.dim();
    let mut out = y_series(order);
    for k in 0..=order {
        out.set(y(k), s.coeff(&ray.scale(k)));
    }
    out
}

/// `(c, d)` with `a c + b d = 1` and `0 <= c < b`; `(1, 0)` when `b = 0`.
pub fn bezout(a: u32, b: u32) -> Result<(i64, i64)> {
    let (a, b) = (a as i64, b as i64);
    let g = a.extended_gcd(&b);
    if g.gcd != 1 {
        return Err(Error::Precondition(format!("({a},{b}) is not coprime")));
    }
    if b == 0 {
        return Ok((1, 0));
    }
    let c = g.x.rem_euclid(b);
    let d = (1 - a * c) / b;
    Ok((c, d))
}

/// `F_mu` on a Kronecker quiver with `Theta = j*`, for the class `N (a,b)`,
/// computed as `Q_mu^i(x)^c Q_mu^j(x)^d` at `q = 1`, in `y = x_i^a x_j^b`.
#[derive(Clone, Debug)]
pub struct FMu {
    pub a: u32,
    pub b: u32,
    pub bezout: (i64, i64),
    pub q_i: OneVariable,
    pub q_j: OneVariable,
    pub f: OneVariable,
}

fn vertex_series_q1(ctx: &HnContext, mu: &Slope, order: u32) -> Result<Vec<CommSeries>> {
    vertex_family(ctx, mu, order)?
        .iter()
        .map(|cs| cs.value().specialize_q1())
        .collect()
}

pub fn f_mu(m: usize, a: u32, b: u32, order: u32) -> Result<FMu> {
    let ctx = HnContext::new(Arc::new(kronecker(m)), kronecker_stability());
    f_mu_with(&ctx, a, b, order, bezout(a, b)?)
}

/// As [`f_mu`] with an explicit Bezout pair.
pub fn f_mu_with(ctx: &HnContext, a: u32, b: u32, order: u32, (c, d): (i64, i64)) -> Result<FMu> {
    if (a as i64) * c + (b as i64) * d != 1 {
        return Err(Error::Precondition(format!("{a}*{c} + {b}*{d} != 1")));
    }
    let ray = DimVector::new(vec![a, b]);
    let mu = ctx.slope(&ray)?;
    let qs = vertex_series_q1(ctx, &mu, order)?;
    let q_i = along_ray(&qs[0], &ray);
    let q_j = along_ray(&qs[1], &ray);
    let f = unit_power(&q_i, c)?.mul(&unit_power(&q_j, d)?)?;
    Ok(FMu {
        a,
        b,
        bezout: (c, d),
        q_i,
        q_j,
        f,
    })
}

impl FMu {
    /// `F^a = Q^i` and `F^b = Q^j`.
    pub fn powers_match(&self) -> Result<bool> {
        Ok(unit_power(&self.f, self.a as i64)? == self.q_i && unit_power(&self.f, self.b as i64)? == self.q_j)
    }
}

/// Exponents `c(k)` with `F = prod_{k <= N} (1 + y^k)^{c(k)}` modulo `y^{N+1}`.
pub fn infinite_product_exponents(f: &OneVariable) -> Result<BTreeMap<u32, BigInt>> {
    if !f.constant_term().is_one() {
        return Err(Error::NonUnitConstantTerm);
    }
    let order = f.order();
    let mut g = f.clone();
    let mut out = BTreeMap::new();
    for k in 1..=order {
        let c = g.coeff(&y(k));
        if !c.is_integer() {
            return Err(Error::NonIntegerExponent { k, value: c });
        }
        let c = c.to_integer();
        if !c.is_zero() {
            let exponent: i64 = (&c).try_into().map_err(|_| Error::Precondition(format!("exponent {c} too large")))?;
            g = g.mul(&unit_power(&one_plus_y_pow(order, k), -exponent)?)?;
        }
        out.insert(k, c);
    }
    Ok(out)
}

fn one_plus_y_pow(order: u32, k: u32) -> OneVariable {
    let mut s = y_series(order);
    s.set(y(k), BigRational::one());
    s
}

/// `prod_k (1 + y^k)^{c(k)}`.
pub fn expand_product(exponents: &BTreeMap<u32, BigInt>, order: u32) -> Result<OneVariable> {
    let mut acc = y_series(order);
    for (&k, c) in exponents {
        let e: i64 = c.try_into().map_err(|_| Error::Precondition(format!("exponent {c} too large")))?;
        acc = acc.mul(&unit_power(&one_plus_y_pow(order, k), e)?)?;
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DtRow {
    pub slope: Slope,
    pub c: BTreeMap<u32, BigInt>,
    /// `d(ka, kb) = c(k) / k`.
    pub d: BTreeMap<(u32, u32), BigRational>,
}

#[derive(Clone, Debug)]
pub struct DtTable {
    pub m: usize,
    pub order: u32,
    /// Keyed by the primitive vector `(a, b)` of each slope class.
    pub rows: BTreeMap<(u32, u32), DtRow>,
    pub report: Report,
}

impl DtTable {
    /// All `d(a,b)`, including zeros, keyed by `(a,b)`.
    pub fn exponents(&self) -> BTreeMap<(u32, u32), BigRational> {
        self.rows.values().flat_map(|r| r.d.clone()).collect()
    }

    pub fn nonzero_exponents(&self) -> BTreeMap<(u32, u32), BigRational> {
        self.exponents().into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }
}

/// `T_{a,b}^e: x_i -> x_i (1 + x^{(a,b)})^{-m b e}`, `x_j -> x_j (1 + x^{(a,b)})^{m a e}`.
pub fn kronecker_power(quiver: &Arc<Quiver>, ab: (u32, u32), e: &BigRational, order: u32) -> Result<UnitAuto<BigRational>> {
    let d = DimVector::new(vec![ab.0, ab.1]);
    let mut base = CommSeries::comm_one(quiver.clone(), order);
    base.set(d.clone(), BigRational::one());
    let exponent = |w: i64| -> Result<i64> {
        let v = e * BigRational::from_integer(BigInt::from(w));
        if !v.is_integer() {
            return Err(Error::Precondition(format!("T_{:?}^{e} has a fractional exponent", ab)));
        }
        (&v.to_integer()).try_into().map_err(|_| Error::Precondition("exponent too large".into()))
    };
    let ij = quiver.skew_form(&d, &quiver.unit(0));
    let jj = quiver.skew_form(&d, &quiver.unit(1));
    UnitAuto::from_multipliers(vec![unit_power(&base, exponent(ij)?)?, unit_power(&base, exponent(jj)?)?])
}

fn primitive_rays(order: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for total in 1..=order {
        for a in 0..=total {
            let b = total - a;
            if a.gcd(&b) == 1 {
                out.push((a, b));
            }
        }
    }
    out
}

/// The exponents `c(mu,k)` and `d(ka,kb)` for `K_m`, with `Theta = j*`, up to
/// total degree `order`, and the check that they rebuild every slope factor
/// and the full identity `T_i o T_j = prod T_{a,b}^{d(a,b)}`.
pub fn dt_table(m: usize, order: u32) -> Result<DtTable> {
    if m == 0 {
        return Err(Error::Precondition("Kronecker quiver needs m >= 1".into()));
    }
    let quiver = Arc::new(kronecker(m));
    let ctx = HnContext::new(quiver.clone(), kronecker_stability());
    let mut rows = BTreeMap::new();
    let mut report = Report::new(format!("kronecker m={m}"));
    for (a, b) in primitive_rays(order) {
        let fm = f_mu_with(&ctx, a, b, order, bezout(a, b)?)?;
        report.record(
            format!("F^a = Q^i and F^b = Q^j on ({a},{b})"),
            fm.powers_match()?,
            "power mismatch",
        );
        let c = infinite_product_exponents(&fm.f)?;
        let rebuilt = expand_product(&c, fm.f.order())?;
        report.record(format!("product of (1+y^k) rebuilds F on ({a},{b})"), rebuilt == fm.f, "mismatch");
        let mut d = BTreeMap::new();
        for (&k, ck) in &c {
            let value = BigRational::new(ck.clone(), BigInt::from(k));
            let g = (k * a).gcd(&(k * b));
            report.record(
                format!("d({},{}) in (1/{g})Z", k * a, k * b),
                (BigInt::from(g) % value.denom()).is_zero(),
                value.to_string(),
            );
            d.insert((k * a, k * b), value);
        }
        let slope = ctx.slope(&DimVector::new(vec![a, b]))?;
        rows.insert((a, b), DtRow { slope, c, d });
    }

    // rebuild each slope factor and the full composite from the exponents
    let mut by_slope: Vec<&DtRow> = rows.values().collect();
    by_slope.sort_by(|x, y| y.slope.cmp(&x.slope));
    let mut rhs = UnitAuto::identity(quiver.clone(), order);
    for row in by_slope {
        let mut t_mu = UnitAuto::identity(quiver.clone(), order);
        for (&ab, e) in &row.d {
            if !e.is_zero() {
                t_mu = t_mu.compose(&kronecker_power(&quiver, ab, e, order)?)?;
            }
        }
        let from_series = phi(&ctx.series_p_mu(&row.slope, order))?;
        report.record(
            format!("exponents rebuild T at slope {}", row.slope),
            t_mu == from_series,
            "multipliers differ",
        );
        rhs = rhs.compose(&t_mu)?;
    }
    let lhs = vertex_composite(&quiver, order)?;
    report.record("T_i o T_j equals the ordered product of T_{a,b}^{d(a,b)}", lhs == rhs, "multipliers differ");
    Ok(DtTable { m, order, rows, report })
}

/// Exponents `(e_i, e_j)` with `T_{1/2}: x_i -> x_i (1 - x_i x_j)^{e_i}`,
/// `x_j -> x_j (1 - x_i x_j)^{e_j}` on `K_m`, when the multipliers have that form.
pub fn half_slope_exponents(m: usize, order: u32) -> Result<(Option<i64>, Option<i64>)> {
    let ctx = HnContext::new(Arc::new(kronecker(m)), kronecker_stability());
    let t = phi(&ctx.series_p_mu(&Slope::new(1, 2), order))?;
    let d = DimVector::new(vec![1, 1]);
    Ok((
        crate::poisson::binomial_exponent(t.multiplier(0), &d),
        crate::poisson::binomial_exponent(t.multiplier(1), &d),
    ))
}

#[derive(Clone, Debug)]
pub struct DynkinFactorization {
    /// Roots in the order the factors are composed, with their slopes.
    pub factors: Vec<(Slope, DimVector)>,
    pub report: Report,
}

impl DynkinFactorization {
    pub fn root_multiset(&self) -> Vec<DimVector> {
        let mut roots: Vec<DimVector> = self.factors.iter().map(|(_, d)| d.clone()).collect();
        roots.sort();
        roots
    }
}

/// Checks that every slope factor of a Dynkin quiver is `T_alpha` for one
/// positive root, that the roots are exactly the positive roots, and that
/// `T_{i_1} o ... o T_{i_r}` is their ordered composite.
pub fn dynkin_factorization(quiver: &Arc<Quiver>, theta: &Stability, order: u32) -> Result<DynkinFactorization> {
    let roots = quiver.positive_roots()?;
    let ctx = HnContext::new(quiver.clone(), theta.clone());
    let mut report = Report::new("dynkin");
    let mut factors = Vec::new();
    let n = quiver.vertex_count();
    for (mu, p) in ctx.slope_series(order).into_iter().rev() {
        let in_class: Vec<&DimVector> = roots
            .iter()
            .filter(|r| r.dim() <= order && theta.slope(r).is_ok_and(|s| s == mu))
            .collect();
        if p.is_one() {
            continue;
        }
        if in_class.len() != 1 {
            let listed: Vec<String> = in_class.iter().map(|r| r.to_string()).collect();
            return Err(Error::NonGenericStability {
                slope: mu.0.clone(),
                detail: format!("contains {} positive roots [{}]", in_class.len(), listed.join(", ")),
            });
        }
        let alpha = in_class[0].clone();
        let expected = series_real_root(quiver, &alpha, order)?;
        if p != expected {
            return Err(Error::NonGenericStability {
                slope: mu.0.clone(),
                detail: format!("slope series differs from the root series of {alpha}"),
            });
        }
        for (i, cs) in vertex_family(&ctx, &mu, order)?.iter().enumerate() {
            let closed = qbinomial_series(quiver, &alpha, &Functional::coordinate(n, i), order);
            report.record(
                format!("Q^{} at slope {mu} is the q-binomial series of {alpha}", quiver.vertex_name(i)),
                cs.value() == &closed,
                "coefficients differ",
            );
        }
        report.record(
            format!("T at slope {mu} equals T_{alpha}"),
            phi(&p)? == UnitAuto::t_d(quiver.clone(), &alpha, order)?,
            "multipliers differ",
        );
        factors.push((mu, alpha));
    }
    let mut found: Vec<DimVector> = factors.iter().map(|(_, d)| d.clone()).collect();
    found.sort();
    let expected: Vec<DimVector> = roots.iter().filter(|r| r.dim() <= order).cloned().collect();
    report.record(
        "factors are the positive roots",
        found == expected,
        format!("{} factors for {} roots", found.len(), expected.len()),
    );
    let mut rhs = UnitAuto::identity(quiver.clone(), order);
    for (_, alpha) in &factors {
        rhs = rhs.compose(&UnitAuto::t_d(quiver.clone(), alpha, order)?)?;
    }
    report.record(
        "vertex composite equals the root composite",
        vertex_composite(quiver, order)? == rhs,
        "multipliers differ",
    );
    let order_line: Vec<String> = factors.iter().map(|(_, d)| format!("T{d}")).collect();
    report.note(format!("order: {}", order_line.join(" o ")));
    Ok(DynkinFactorization { factors, report })
}

/// Whether every positive root has its own slope under `theta`.
pub fn is_generic(quiver: &Quiver, theta: &Stability) -> Result<bool> {
    let roots = quiver.positive_roots()?;
    let mut slopes: Vec<Slope> = roots.iter().map(|r| theta.slope(r)).collect::<Result<_>>()?;
    slopes.sort();
    Ok(slopes.windows(2).all(|w| w[0] != w[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::catalog::*;

    fn q(k: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(k))
    }

    fn one_var(coeffs: &[i64]) -> OneVariable {
        let mut s = y_series(coeffs.len() as u32 - 1);
        for (k, &c) in coeffs.iter().enumerate() {
            s.set(y(k as u32), q(c));
        }
        s
    }

    #[test]
    fn bezout_pairs() {
        assert_eq!(bezout(1, 1).unwrap(), (0, 1));
        assert_eq!(bezout(1, 0).unwrap(), (1, 0));
        assert_eq!(bezout(0, 1).unwrap(), (0, 1));
        assert_eq!(bezout(3, 2).unwrap(), (1, -1));
        assert_eq!(bezout(2, 3).unwrap(), (2, -1));
        assert!(bezout(2, 2).is_err());
    }

    #[test]
    fn exponents_of_simple_series() {
        let c = infinite_product_exponents(&one_var(&[1, 1, 0, 0, 0])).unwrap();
        assert_eq!(c.values().filter(|v| !v.is_zero()).count(), 1);
        assert_eq!(c[&1], BigInt::from(1));
        let c = infinite_product_exponents(&one_var(&[1, 0, 0, 0])).unwrap();
        assert!(c.values().all(Zero::is_zero));
        let err = infinite_product_exponents(&{
            let mut s = one_var(&[1, 0, 0]);
            s.set(y(1), BigRational::new(1.into(), 2.into()));
            s
        });
        assert!(matches!(err, Err(Error::NonIntegerExponent { k: 1, .. })));
    }

    #[test]
    fn m1_half_slope() {
        let fm = f_mu(1, 1, 1, 6).unwrap();
        assert_eq!(fm.f, one_var(&[1, 1, 0, 0]));
        assert!(fm.powers_match().unwrap());
    }

    #[test]
    fn m2_half_slope() {
        let fm = f_mu(2, 1, 1, 8).unwrap();
        for k in 0..=4u32 {
            assert_eq!(fm.q_i.coeff(&y(k)), q(k as i64 + 1));
        }
        assert_eq!(fm.f, fm.q_i);
    }

    #[test]
    fn second_bezout_pair_agrees() {
        let ctx = HnContext::new(Arc::new(kronecker(3)), kronecker_stability());
        let first = f_mu_with(&ctx, 3, 2, 10, bezout(3, 2).unwrap()).unwrap();
        let (c, d) = first.bezout;
        let second = f_mu_with(&ctx, 3, 2, 10, (c + 2, d - 3)).unwrap();
        assert_eq!(first.f, second.f);
        assert!(first.powers_match().unwrap());
    }

    #[test]
    fn m1_table() {
        let t = dt_table(1, 6).unwrap();
        assert!(t.report.is_success(), "{}", t.report);
        let nz = t.nonzero_exponents();
        assert_eq!(nz.len(), 3);
        for key in [(1, 0), (0, 1), (1, 1)] {
            assert_eq!(nz[&key], q(1));
        }
    }

    #[test]
    fn m2_half_slope_automorphism() {
        assert_eq!(half_slope_exponents(2, 8).unwrap(), (Some(4), Some(-4)));
    }

    #[test]
    fn a2_factorization() {
        let k1 = Arc::new(kronecker(1));
        let f = dynkin_factorization(&k1, &kronecker_stability(), 6).unwrap();
        assert!(f.report.is_success(), "{}", f.report);
        let order: Vec<DimVector> = f.factors.iter().map(|(_, d)| d.clone()).collect();
        let dv = |v: &[u32]| DimVector::new(v.to_vec());
        assert_eq!(order, vec![dv(&[0, 1]), dv(&[1, 1]), dv(&[1, 0])]);
    }

    #[test]
    fn zero_stability_is_not_generic() {
        let a3 = Arc::new(a_linear(3));
        assert!(matches!(
            dynkin_factorization(&a3, &Stability::trivial(3), 6),
            Err(Error::NonGenericStability { .. })
        ));
        assert!(!is_generic(&a3, &Stability::trivial(3)).unwrap());
    }

    #[test]
    fn other_chamber_drops_a_root() {
        // (1,1) is unstable when the source has the larger weight
        let k1 = Arc::new(kronecker(1));
        let f = dynkin_factorization(&k1, &Stability::new(vec![4, 1]), 6).unwrap();
        assert_eq!(f.factors.len(), 2);
        assert!(!f.report.is_success());
    }
}
