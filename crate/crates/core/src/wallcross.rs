//! Conjugation series `Q^eta(t) = P(q^eta t) P(t)^-1`, their integrality
//! certificates, and the Poincare polynomials and Euler characteristics of
//! smooth models read off from them.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::arith::{qbinom, Poly, QLaurent, QRational};
use crate::error::{Error, Result};
use crate::hn::HnContext;
use crate::quiver::{slope_classes, DimVector, Functional, Quiver, Slope};
use crate::SkewSeries;

/// What the base series of a conjugation series is known to be.
#[derive(Clone, Debug, PartialEq)]
pub enum BaseKind {
    /// `P_mu(t)` for the stability of some context.
    SlopeSeries(Slope),
    /// `P_d(t)` for a real root `d`.
    RealRoot(DimVector),
    Other,
}

#[derive(Clone, Debug)]
pub struct ConjugationSeries {
    base: SkewSeries,
    kind: BaseKind,
    eta: Functional,
    value: SkewSeries,
    certified: BTreeMap<DimVector, QLaurent>,
}

/// `Q^eta(t) = P(q^eta t) * P(t)^-1`.
pub fn conjugation_series(base: &SkewSeries, eta: &Functional) -> Result<ConjugationSeries> {
    let inverse = base.invert()?;
    let value = base.twist(eta).mul(&inverse)?;
    Ok(ConjugationSeries {
        base: base.clone(),
        kind: BaseKind::Other,
        eta: eta.clone(),
        value,
        certified: BTreeMap::new(),
    })
}

impl ConjugationSeries {
    pub fn with_kind(mut self, kind: BaseKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn base(&self) -> &SkewSeries {
        &self.base
    }

    pub fn kind(&self) -> &BaseKind {
        &self.kind
    }

    pub fn eta(&self) -> &Functional {
        &self.eta
    }

    pub fn value(&self) -> &SkewSeries {
        &self.value
    }

    pub fn certified(&self) -> &BTreeMap<DimVector, QLaurent> {
        &self.certified
    }

    pub fn is_certified(&self) -> bool {
        !self.certified.is_empty() || self.value.is_zero()
    }

    /// The certificate at `d`; zero for keys outside the support.
    pub fn certified_coeff(&self, d: &DimVector) -> Option<QLaurent> {
        if !self.is_certified() {
            return None;
        }
        Some(self.certified.get(d).cloned().unwrap_or_else(QLaurent::zero))
    }

    /// Replaces a coefficient of the value, dropping any certificates.
    pub fn plant(&mut self, d: DimVector, c: QRational) {
        self.value.set(d, c);
        self.certified.clear();
    }
}

/// Certifies that every coefficient of `Q^eta` lies in `Z[q, q^-1]`.
///
/// For slope series bases with `eta = n.`, `n >= 0`, coefficients must also
/// be nonnegative.
pub fn certify_integral(mut cs: ConjugationSeries) -> Result<ConjugationSeries> {
    let positive = matches!(cs.kind, BaseKind::SlopeSeries(_)) && cs.eta.is_nonnegative();
    let mut certified = BTreeMap::new();
    for (d, c) in cs.value.terms() {
        let laurent = c.as_laurent().map_err(|e| Error::IntegralityFailure {
            d: d.clone(),
            coefficient: c.to_string(),
            reason: e.to_string(),
        })?;
        if positive && !laurent.has_nonnegative_coefficients() {
            return Err(Error::IntegralityFailure {
                d: d.clone(),
                coefficient: c.to_string(),
                reason: "negative coefficient in a Poincare polynomial".into(),
            });
        }
        certified.insert(d.clone(), laurent);
    }
    cs.certified = certified;
    Ok(cs)
}

/// Certified `Q_mu^eta` for the slope series `P_mu` of `ctx`.
pub fn slope_conjugation(ctx: &HnContext, mu: &Slope, eta: &Functional, order: u32) -> Result<ConjugationSeries> {
    let base = ctx.series_p_mu(mu, order);
    certify_integral(conjugation_series(&base, eta)?.with_kind(BaseKind::SlopeSeries(mu.clone())))
}

/// Certified `Q_mu^{i.}` for every vertex `i`, in vertex order.
pub fn vertex_family(ctx: &HnContext, mu: &Slope, order: u32) -> Result<Vec<ConjugationSeries>> {
    let n = ctx.quiver().vertex_count();
    let base = ctx.series_p_mu(mu, order);
    (0..n)
        .map(|i| {
            let cs = conjugation_series(&base, &Functional::coordinate(n, i))?;
            certify_integral(cs.with_kind(BaseKind::SlopeSeries(mu.clone())))
        })
        .collect()
}

/// `sum_n [eta(d) over n] t^{nd}`.
pub fn qbinomial_series(quiver: &Arc<Quiver>, d: &DimVector, eta: &Functional, order: u32) -> SkewSeries {
    let top = eta.apply(d);
    let mut s = SkewSeries::skew_one(quiver.clone(), order);
    if d.is_zero() {
        return s;
    }
    let mut n = 1u32;
    while n * d.dim() <= order {
        let c = qbinom(top, n as i64).expect("n >= 0");
        s.set(d.scale(n), c.to_qrational());
        n += 1;
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothModelRow {
    pub poincare: QLaurent,
    pub euler: BigInt,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SmoothModelTable {
    /// Keyed by `(d, n)`; `d` runs over the slope class and includes `0`.
    pub rows: BTreeMap<(DimVector, DimVector), SmoothModelRow>,
}

impl SmoothModelTable {
    pub fn get(&self, d: &DimVector, n: &DimVector) -> Option<&SmoothModelRow> {
        self.rows.get(&(d.clone(), n.clone()))
    }
}

/// Poincare polynomials and Euler characteristics of `M_{d,n}` for `d` in
/// the slope class of `mu`, read off from certified `Q_mu^{n.}`.
pub fn smooth_model_table(
    ctx: &HnContext,
    mu: &Slope,
    framings: &[DimVector],
    order: u32,
) -> Result<SmoothModelTable> {
    let quiver = ctx.quiver();
    let mut class: Vec<DimVector> = slope_classes(quiver, ctx.theta(), order)
        .into_iter()
        .find(|(s, _)| s == mu)
        .map(|(_, ds)| ds)
        .unwrap_or_default();
    class.insert(0, quiver.zero_vector());
    let base = ctx.series_p_mu(mu, order);
    let mut table = SmoothModelTable::default();
    for n in framings {
        quiver.check_dim(n)?;
        let cs = conjugation_series(&base, &Functional::from_dim(n))?.with_kind(BaseKind::SlopeSeries(mu.clone()));
        let cs = certify_integral(cs)?;
        for d in &class {
            let poincare = cs.certified_coeff(d).expect("certified");
            let euler = poincare.at_one();
            table.rows.insert((d.clone(), n.clone()), SmoothModelRow { poincare, euler });
        }
    }
    Ok(table)
}

/// `(q - 1) p_d(q)` for `d` coprime for the stability.
pub fn poincare_stable(ctx: &HnContext, d: &DimVector) -> Result<QLaurent> {
    let mu = ctx.slope(d)?;
    for e in d.sub_vectors() {
        if e.is_zero() || &e == d {
            continue;
        }
        if ctx.slope(&e)? == mu {
            return Err(Error::NotCoprime {
                d: d.clone(),
                witness: e,
            });
        }
    }
    let value = ctx.p_d_recursive(d)? * &QRational::from_poly(Poly::from_i64s(&[-1, 1]));
    let fail = |reason: String| Error::IntegralityFailure {
        d: d.clone(),
        coefficient: value.to_string(),
        reason,
    };
    let laurent = value.as_laurent().map_err(|e| fail(e.to_string()))?;
    if !laurent.has_nonnegative_coefficients() {
        return Err(fail("negative coefficient in a Poincare polynomial".into()));
    }
    Ok(laurent)
}

/// Whether `Q_mu^eta = Q_mu^nu` up to `order`, given that `eta` and `nu`
/// agree on the slope class of `mu`.
pub fn check_slope_invariance(
    ctx: &HnContext,
    mu: &Slope,
    eta: &Functional,
    nu: &Functional,
    order: u32,
) -> Result<bool> {
    let class = slope_classes(ctx.quiver(), ctx.theta(), order)
        .into_iter()
        .find(|(s, _)| s == mu)
        .map(|(_, ds)| ds)
        .unwrap_or_default();
    if let Some(d) = class.iter().find(|d| eta.apply(d) != nu.apply(d)) {
        return Err(Error::Precondition(format!(
            "functionals differ on {d} ({} vs {}) in the class of slope {mu}",
            eta.apply(d),
            nu.apply(d)
        )));
    }
    let base = ctx.series_p_mu(mu, order);
    let a = conjugation_series(&base, eta)?;
    let b = conjugation_series(&base, nu)?;
    Ok(a.value() == b.value())
}
