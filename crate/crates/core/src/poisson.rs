//! The Poisson algebra `B = Q[[x_i]]` with `{x_i, x_j} = b_ij x_i x_j`, its
//! automorphisms of the form `x_i -> x_i u_i`, and the map `Phi` from
//! integral quantized series to such automorphisms.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::hn::{describe_diffs, HnContext};
use crate::quiver::{DimVector, Functional, Quiver, Slope};
use crate::report::Report;
use crate::scalar::Field;
use crate::series::Series;
use crate::wallcross::{certify_integral, conjugation_series, smooth_model_table};
use crate::{CommSeries, SkewSeries};

/// `{f, g}` extended from `{x^d, x^e} = {d,e} x^{d+e}`.
pub fn bracket<C: Field>(f: &Series<C>, g: &Series<C>) -> Result<Series<C>> {
    f.compatible(g)?;
    let quiver = f.quiver_arc().clone();
    let order = f.order();
    let mut out = Series::zero(quiver.clone(), order, None);
    for (d, a) in f.terms() {
        for (e, b) in g.terms() {
            if d.dim() + e.dim() > order {
                break;
            }
            let s = quiver.skew_form(d, e);
            if s != 0 {
                out.add_to(d + e, a.clone() * b * &C::from_int(s));
            }
        }
    }
    Ok(out)
}

/// `u^k` for a unit `u`; negative `k` inverts.
pub fn unit_power<C: Field>(u: &Series<C>, k: i64) -> Result<Series<C>> {
    if !u.constant_term().is_one() {
        return Err(Error::NonUnitConstantTerm);
    }
    u.pow(k)
}

/// An automorphism `x_i -> x_i u_i` of the truncated commutative ring.
#[derive(Clone, PartialEq)]
pub struct UnitAuto<C> {
    quiver: Arc<Quiver>,
    order: u32,
    multipliers: Vec<Series<C>>,
}

impl<C: Field> UnitAuto<C> {
    pub fn identity(quiver: Arc<Quiver>, order: u32) -> Self {
        let one = Series::one(quiver.clone(), order, None);
        let multipliers = vec![one; quiver.vertex_count()];
        UnitAuto {
            quiver,
            order,
            multipliers,
        }
    }

    /// Multipliers must be commutative units, one per vertex.
    pub fn from_multipliers(multipliers: Vec<Series<C>>) -> Result<Self> {
        let first = multipliers.first().ok_or(Error::IncompatibleSeries)?;
        let (quiver, order) = (first.quiver_arc().clone(), first.order());
        if multipliers.len() != quiver.vertex_count() {
            return Err(Error::IncompatibleSeries);
        }
        for u in &multipliers {
            first.compatible(u)?;
            if u.twist_parameter().is_some() {
                return Err(Error::IncompatibleSeries);
            }
            if !u.constant_term().is_one() {
                return Err(Error::NonUnitConstantTerm);
            }
        }
        Ok(UnitAuto {
            quiver,
            order,
            multipliers,
        })
    }

    /// `T_d: x_j -> x_j (1 + x^d)^{{d,j}}`.
    pub fn t_d(quiver: Arc<Quiver>, d: &DimVector, order: u32) -> Result<Self> {
        quiver.check_dim(d)?;
        if d.is_zero() {
            return Err(Error::ZeroDimVector);
        }
        let one = Series::one(quiver.clone(), order, None);
        let mut base = one.clone();
        base.add_to(d.clone(), C::one());
        let multipliers = (0..quiver.vertex_count())
            .map(|j| unit_power(&base, quiver.skew_form(d, &quiver.unit(j))))
            .collect::<Result<Vec<_>>>()?;
        Ok(UnitAuto {
            quiver,
            order,
            multipliers,
        })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn multipliers(&self) -> &[Series<C>] {
        &self.multipliers
    }

    pub fn multiplier(&self, j: usize) -> &Series<C> {
        &self.multipliers[j]
    }

    pub fn is_identity(&self) -> bool {
        self.multipliers.iter().all(Series::is_one)
    }

    fn check(&self, f: &Series<C>) -> Result<()> {
        if f.quiver() != &*self.quiver || f.order() != self.order || f.twist_parameter().is_some() {
            return Err(Error::IncompatibleSeries);
        }
        Ok(())
    }

    /// Substitutes `x_i -> x_i u_i` into `f`.
    pub fn apply(&self, f: &Series<C>) -> Result<Series<C>> {
        self.check(f)?;
        if self.is_identity() {
            return Ok(f.clone());
        }
        let mut images: HashMap<DimVector, Series<C>> = HashMap::new();
        let mut out = f.empty_like();
        for (d, c) in f.terms() {
            let image = self.monomial_image(d, &mut images)?;
            for (e, v) in image.terms() {
                out.add_to(e.clone(), c.clone() * v);
            }
        }
        Ok(out)
    }

    // x^d * prod_i u_i^{d_i}, built from the image of x^{d - e_i}
    fn monomial_image(&self, d: &DimVector, memo: &mut HashMap<DimVector, Series<C>>) -> Result<Series<C>> {
        if let Some(s) = memo.get(d) {
            return Ok(s.clone());
        }
        let image = match d.support().next() {
            None => Series::one(self.quiver.clone(), self.order, None),
            Some(i) => {
                let rest = d.checked_sub(&self.quiver.unit(i)).expect("in support");
                let prev = self.monomial_image(&rest, memo)?;
                let generator = self.generator_image(i);
                prev.mul(&generator)?
            }
        };
        memo.insert(d.clone(), image.clone());
        Ok(image)
    }

    /// `T(x_i) = x_i u_i`.
    pub fn generator_image(&self, i: usize) -> Series<C> {
        let unit = self.quiver.unit(i);
        let mut out = Series::zero(self.quiver.clone(), self.order, None);
        for (e, v) in self.multipliers[i].terms() {
            out.set(&unit + e, v.clone());
        }
        out
    }

    /// `self o other`: `other` acts first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.quiver != other.quiver || self.order != other.order {
            return Err(Error::IncompatibleSeries);
        }
        let multipliers = other
            .multipliers
            .iter()
            .zip(&self.multipliers)
            .map(|(ut, us)| self.apply(ut)?.mul(us))
            .collect::<Result<Vec<_>>>()?;
        Ok(UnitAuto {
            quiver: self.quiver.clone(),
            order: self.order,
            multipliers,
        })
    }

    /// Two-sided inverse, solved one degree per iteration from `V o T = id`.
    pub fn inverse(&self) -> Result<Self> {
        let mut v = Self::identity(self.quiver.clone(), self.order);
        for _ in 0..self.order {
            let multipliers = self
                .multipliers
                .iter()
                .map(|ut| v.apply(ut)?.invert())
                .collect::<Result<Vec<_>>>()?;
            v = UnitAuto {
                quiver: self.quiver.clone(),
                order: self.order,
                multipliers,
            };
        }
        Ok(v)
    }

    /// Vertex pairs `(i, j)` with `T{x_i, x_j} != {T x_i, T x_j}`.
    pub fn bracket_violations(&self) -> Result<Vec<(usize, usize)>> {
        let n = self.quiver.vertex_count();
        let mut bad = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let xi = Series::monomial(self.quiver.clone(), self.order, None, self.quiver.unit(i), C::one());
                let xj = Series::monomial(self.quiver.clone(), self.order, None, self.quiver.unit(j), C::one());
                let lhs = self.apply(&bracket(&xi, &xj)?)?;
                let rhs = bracket(&self.generator_image(i), &self.generator_image(j))?;
                if lhs != rhs {
                    bad.push((i, j));
                }
            }
        }
        Ok(bad)
    }
}

impl<C: Field + std::fmt::Display> std::fmt::Display for UnitAuto<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (j, u) in self.multipliers.iter().enumerate() {
            let name = self.quiver.vertex_name(j);
            writeln!(f, "x_{name} -> x_{name} * ({u})")?;
        }
        Ok(())
    }
}

impl<C: Field + std::fmt::Display> std::fmt::Debug for UnitAuto<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Display::fmt(self, f)
    }
}

fn certified_q1(base: &SkewSeries, eta: &Functional) -> Result<CommSeries> {
    let cs = certify_integral(conjugation_series(base, eta)?)?;
    let mut out = CommSeries::comm_zero(base.quiver_arc().clone(), base.order());
    for (d, l) in cs.certified() {
        out.set(d.clone(), BigRational::from_integer(l.at_one()));
    }
    Ok(out)
}

/// `Phi(P)`: `x_j -> x_j * Q^{{_,j}}(x)` at `q = 1`.
pub fn phi(base: &SkewSeries) -> Result<UnitAuto<BigRational>> {
    let quiver = base.quiver_arc().clone();
    let multipliers = (0..quiver.vertex_count())
        .map(|j| certified_q1(base, &quiver.skew_functional(&quiver.unit(j))))
        .collect::<Result<Vec<_>>>()?;
    UnitAuto::from_multipliers(multipliers)
}

/// `Phi(P)` through `prod_i Q^{i.}(x)^{b_ij}`.
pub fn phi_via_vertices(base: &SkewSeries) -> Result<UnitAuto<BigRational>> {
    let quiver = base.quiver_arc().clone();
    let n = quiver.vertex_count();
    let vertex_series = (0..n)
        .map(|i| certified_q1(base, &Functional::coordinate(n, i)))
        .collect::<Result<Vec<_>>>()?;
    let multipliers = (0..n)
        .map(|j| {
            let mut acc = CommSeries::comm_one(quiver.clone(), base.order());
            for (i, q) in vertex_series.iter().enumerate() {
                acc = acc.mul(&unit_power(q, quiver.b(i, j))?)?;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    UnitAuto::from_multipliers(multipliers)
}

/// `Q^eta(x) = prod_i Q^{i.}(x)^{eta(i)}` at `q = 1`, returned as both sides.
pub fn vertex_product_identity(base: &SkewSeries, eta: &Functional) -> Result<(CommSeries, CommSeries)> {
    let quiver = base.quiver_arc().clone();
    let n = quiver.vertex_count();
    let lhs = certified_q1(base, eta)?;
    let mut rhs = CommSeries::comm_one(quiver, base.order());
    for i in 0..n {
        let q = certified_q1(base, &Functional::coordinate(n, i))?;
        rhs = rhs.mul(&unit_power(&q, eta.weights()[i])?)?;
    }
    Ok((lhs, rhs))
}

/// `T_{i_1} o ... o T_{i_r}` over the stored vertex order.
pub fn vertex_composite(quiver: &Arc<Quiver>, order: u32) -> Result<UnitAuto<BigRational>> {
    let mut acc = UnitAuto::identity(quiver.clone(), order);
    for i in 0..quiver.vertex_count() {
        acc = acc.compose(&UnitAuto::t_d(quiver.clone(), &quiver.unit(i), order)?)?;
    }
    Ok(acc)
}

/// `T_mu = Phi(P_mu)` for every slope up to `order`, in decreasing slope order,
/// skipping slopes whose series is trivial.
pub fn slope_automorphisms(ctx: &HnContext, order: u32) -> Result<Vec<(Slope, UnitAuto<BigRational>)>> {
    let mut out = Vec::new();
    for (mu, p) in ctx.slope_series(order).into_iter().rev() {
        if p.is_one() {
            continue;
        }
        out.push((mu, phi(&p)?));
    }
    Ok(out)
}

/// Composes a slope-ordered list left to right.
pub fn ordered_composite(quiver: &Arc<Quiver>, order: u32, factors: &[(Slope, UnitAuto<BigRational>)]) -> Result<UnitAuto<BigRational>> {
    let mut acc = UnitAuto::identity(quiver.clone(), order);
    for (_, t) in factors {
        acc = acc.compose(t)?;
    }
    Ok(acc)
}

fn compare_autos(report: &mut Report, label: &str, a: &UnitAuto<BigRational>, b: &UnitAuto<BigRational>) {
    for (j, (u, v)) in a.multipliers.iter().zip(&b.multipliers).enumerate() {
        let diffs = u.differences(v);
        report.record(
            format!("{label}, multiplier at {}", a.quiver.vertex_name(j)),
            diffs.is_empty(),
            describe_diffs(&diffs),
        );
    }
}

/// Checks `T_{i_1} o ... o T_{i_r} = prod_{mu descending} T_mu` up to `order`,
/// with each `T_mu` also rebuilt from Euler characteristics of smooth models.
pub fn verify_main_theorem(ctx: &HnContext, order: u32) -> Result<Report> {
    let mut report = Report::new("wall-crossing");
    let quiver = ctx.quiver_arc().clone();
    let n = quiver.vertex_count();
    let lhs = vertex_composite(&quiver, order)?;
    let factors = slope_automorphisms(ctx, order)?;
    let rhs = ordered_composite(&quiver, order, &factors)?;
    compare_autos(&mut report, "vertex composite equals slope composite", &lhs, &rhs);
    report.note(format!("{} nontrivial slope factors up to order {order}", factors.len()));

    let framings: Vec<DimVector> = (0..n).map(|i| quiver.unit(i)).collect();
    for (mu, t) in &factors {
        let table = smooth_model_table(ctx, mu, &framings, order)?;
        let euler_series: Vec<CommSeries> = framings
            .iter()
            .map(|fr| {
                let mut s = CommSeries::comm_zero(quiver.clone(), order);
                for ((d, frame), row) in &table.rows {
                    if frame == fr {
                        s.set(d.clone(), BigRational::from_integer(row.euler.clone()));
                    }
                }
                s
            })
            .collect();
        let multipliers = (0..n)
            .map(|j| {
                let mut acc = CommSeries::comm_one(quiver.clone(), order);
                for (i, q) in euler_series.iter().enumerate() {
                    acc = acc.mul(&unit_power(q, quiver.b(i, j))?)?;
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        let from_euler = UnitAuto::from_multipliers(multipliers)?;
        compare_autos(&mut report, &format!("T at slope {mu} from Euler characteristics"), t, &from_euler);
    }
    Ok(report)
}

/// Bracket preservation for the vertex automorphisms, every slope factor and
/// both composites.
pub fn verify_poisson(ctx: &HnContext, order: u32) -> Result<Report> {
    let mut report = Report::new("poisson");
    let quiver = ctx.quiver_arc().clone();
    let mut autos: Vec<(String, UnitAuto<BigRational>)> = Vec::new();
    for i in 0..quiver.vertex_count() {
        autos.push((
            format!("T at vertex {}", quiver.vertex_name(i)),
            UnitAuto::t_d(quiver.clone(), &quiver.unit(i), order)?,
        ));
    }
    let factors = slope_automorphisms(ctx, order)?;
    for (mu, t) in &factors {
        autos.push((format!("T at slope {mu}"), t.clone()));
    }
    autos.push(("vertex composite".into(), vertex_composite(&quiver, order)?));
    autos.push(("slope composite".into(), ordered_composite(&quiver, order, &factors)?));
    for (label, t) in &autos {
        let bad = t.bracket_violations()?;
        let detail = bad
            .iter()
            .map(|&(i, j)| format!("({}, {})", quiver.vertex_name(i), quiver.vertex_name(j)))
            .collect::<Vec<_>>()
            .join(", ");
        report.record(format!("{label} preserves the bracket"), bad.is_empty(), detail);
    }
    Ok(report)
}

/// Integer exponent `k` such that `u = (1 - x^d)^k` up to the order, if any.
pub fn binomial_exponent(u: &CommSeries, d: &DimVector) -> Option<i64> {
    let k = -u.coeff(d);
    if !k.is_integer() {
        return None;
    }
    let k: i64 = k.to_integer().try_into().ok()?;
    let mut base = CommSeries::comm_one(u.quiver_arc().clone(), u.order());
    base.set(d.clone(), BigRational::from_integer(BigInt::from(-1)));
    (unit_power(&base, k).ok()? == *u).then_some(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hn::series_real_root;
    use crate::quiver::catalog::*;
    use crate::quiver::Stability;
    use crate::CommSeries;

    fn dv(xs: &[u32]) -> DimVector {
        DimVector::new(xs.to_vec())
    }

    fn x(q: &Arc<Quiver>, order: u32, d: &[u32]) -> CommSeries {
        CommSeries::monomial(q.clone(), order, None, dv(d), BigRational::from_integer(1.into()))
    }

    #[test]
    fn bracket_basics() {
        let k2 = Arc::new(kronecker(2));
        let xi = x(&k2, 4, &[1, 0]);
        let xj = x(&k2, 4, &[0, 1]);
        assert!(bracket(&xi, &xi).unwrap().is_zero());
        assert_eq!(bracket(&xi, &xj).unwrap(), x(&k2, 4, &[1, 1]).scale(&BigRational::from_integer(2.into())));
        let one = CommSeries::comm_one(k2.clone(), 4);
        assert!(bracket(&xi, &one).unwrap().is_zero());
    }

    #[test]
    fn unit_powers() {
        let q0 = Arc::new(single_vertex());
        let mut u = CommSeries::comm_one(q0.clone(), 5);
        u.set(dv(&[1]), BigRational::from_integer((-1).into()));
        let sq = unit_power(&u, -2).unwrap();
        for k in 0..=5u32 {
            assert_eq!(sq.coeff(&dv(&[k])), BigRational::from_integer((k + 1).into()));
        }
        assert!(unit_power(&u, 0).unwrap().is_one());
        assert_eq!(unit_power(&x(&q0, 5, &[1]), 2), Err(Error::NonUnitConstantTerm));
    }

    #[test]
    fn kronecker_t_d_exponents() {
        let k3 = Arc::new(kronecker(3));
        let t = UnitAuto::<BigRational>::t_d(k3.clone(), &dv(&[2, 1]), 9).unwrap();
        // x_i -> x_i (1 + x^d)^{-3}, x_j -> x_j (1 + x^d)^{6}
        let mut base = CommSeries::comm_one(k3.clone(), 9);
        base.set(dv(&[2, 1]), BigRational::from_integer(1.into()));
        assert_eq!(t.multiplier(0), &unit_power(&base, -3).unwrap());
        assert_eq!(t.multiplier(1), &unit_power(&base, 6).unwrap());
    }

    #[test]
    fn identity_and_inverse() {
        let k2 = Arc::new(kronecker(2));
        let t = UnitAuto::<BigRational>::t_d(k2.clone(), &dv(&[1, 1]), 6).unwrap();
        let id = UnitAuto::identity(k2.clone(), 6);
        assert_eq!(id.compose(&t).unwrap(), t);
        assert_eq!(t.compose(&id).unwrap(), t);
        let inv = t.inverse().unwrap();
        assert!(inv.compose(&t).unwrap().is_identity());
        assert!(t.compose(&inv).unwrap().is_identity());
    }

    #[test]
    fn phi_of_real_root_is_t_d() {
        for m in 1..=3 {
            let q = Arc::new(kronecker(m));
            for d in [dv(&[1, 0]), dv(&[0, 1])] {
                let p = series_real_root(&q, &d, 6).unwrap();
                assert_eq!(phi(&p).unwrap(), UnitAuto::t_d(q.clone(), &d, 6).unwrap());
                assert_eq!(phi_via_vertices(&p).unwrap(), UnitAuto::t_d(q.clone(), &d, 6).unwrap());
            }
        }
        let k1 = Arc::new(kronecker(1));
        let p = series_real_root(&k1, &dv(&[1, 1]), 6).unwrap();
        assert_eq!(phi(&p).unwrap(), UnitAuto::t_d(k1.clone(), &dv(&[1, 1]), 6).unwrap());
        assert!(phi(&SkewSeries::skew_one(k1, 6)).unwrap().is_identity());
    }

    #[test]
    fn phi_is_multiplicative() {
        let k2 = Arc::new(kronecker(2));
        let a = series_real_root(&k2, &dv(&[1, 0]), 5).unwrap();
        let b = series_real_root(&k2, &dv(&[0, 1]), 5).unwrap();
        let lhs = phi(&a.mul(&b).unwrap()).unwrap();
        let rhs = phi(&a).unwrap().compose(&phi(&b).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn kronecker_theorem() {
        for m in 1..=2 {
            let ctx = HnContext::new(Arc::new(kronecker(m)), kronecker_stability());
            let r = verify_main_theorem(&ctx, 5).unwrap();
            assert!(r.is_success(), "{r}");
            let r = verify_poisson(&ctx, 5).unwrap();
            assert!(r.is_success(), "{r}");
        }
    }

    #[test]
    fn single_vertex_theorem() {
        let ctx = HnContext::new(Arc::new(single_vertex()), Stability::trivial(1));
        assert!(verify_main_theorem(&ctx, 4).unwrap().is_success());
    }

    #[test]
    fn vertex_product_at_q1() {
        let ctx = HnContext::new(Arc::new(kronecker(2)), kronecker_stability());
        let p = ctx.series_p_mu(&Slope::new(1, 2), 6);
        let (lhs, rhs) = vertex_product_identity(&p, &Functional::new(vec![2, -1])).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn incompatible_compose() {
        let a = UnitAuto::<BigRational>::identity(Arc::new(kronecker(1)), 3);
        let b = UnitAuto::<BigRational>::identity(Arc::new(kronecker(1)), 4);
        assert_eq!(a.compose(&b), Err(Error::IncompatibleSeries));
    }
}
