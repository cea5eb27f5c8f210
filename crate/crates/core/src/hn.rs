//! The Harder-Narasimhan recursion: the rational functions `e_d(q)` and
//! `p_d(q)`, their generating series, and the factorization
//! `P_{i_1} ... P_{i_r} = P = prod_{mu descending} P_mu`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::Zero;
use parking_lot::RwLock;

use crate::arith::{Poly, QRational};
use crate::error::{Error, Result};
use crate::quiver::{slope_classes, DimVector, Quiver, Slope, Stability};
use crate::report::Report;
use crate::SkewSeries;

/// `prod_i prod_{j=1..d_i} (1 - q^-j)^-1 = q^{sum d_i(d_i+1)/2} / prod (q^j - 1)`.
fn inverse_q_factorials(d: &DimVector) -> QRational {
    let mut den = Poly::one();
    let mut shift = 0i64;
    for &di in d.entries() {
        for j in 1..=di as usize {
            den = &den * &Poly::q_pow_minus_one(j);
        }
        shift += (di as i64) * (di as i64 + 1) / 2;
    }
    QRational::new(Poly::one(), den).expect("nonzero denominator") * &QRational::q_pow(shift)
}

/// Quiver, stability and the write-once caches for `p_d`.
///
/// Lookups may happen from several threads; a value is computed outside the
/// lock and inserted only if still absent, so every reader sees the same value.
pub struct HnContext {
    quiver: Arc<Quiver>,
    theta: Stability,
    p_memo: RwLock<HashMap<DimVector, QRational>>,
    tail_memo: RwLock<HashMap<(DimVector, Slope), QRational>>,
}

impl HnContext {
    pub fn new(quiver: Arc<Quiver>, theta: Stability) -> Self {
        assert_eq!(theta.weights().len(), quiver.vertex_count(), "stability length");
        HnContext {
            quiver,
            theta,
            p_memo: RwLock::new(HashMap::new()),
            tail_memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn quiver_arc(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn theta(&self) -> &Stability {
        &self.theta
    }

    pub fn slope(&self, d: &DimVector) -> Result<Slope> {
        self.theta.slope(d)
    }

    /// `e_d(q) = q^{-<d,d>} prod_i prod_{j=1..d_i} (1 - q^-j)^-1`.
    pub fn e_d(&self, d: &DimVector) -> QRational {
        inverse_q_factorials(d) * &QRational::q_pow(-self.quiver.tits_form(d))
    }

    /// `p_d(q)` from the defining recursion over slope-decreasing decompositions.
    pub fn p_d_recursive(&self, d: &DimVector) -> Result<QRational> {
        self.quiver.check_dim(d)?;
        if d.is_zero() {
            return Err(Error::ZeroDimVector);
        }
        Ok(self.p_cached(d))
    }

    fn p_cached(&self, d: &DimVector) -> QRational {
        if let Some(v) = self.p_memo.read().get(d) {
            return v.clone();
        }
        let value = if self.theta.is_constant_on_support(d) {
            self.e_d(d)
        } else {
            let mu_full = self.theta.slope(d).expect("nonzero");
            let mut correction = QRational::zero();
            for c in d.sub_vectors() {
                if c.is_zero() || &c == d {
                    continue;
                }
                let mu_c = self.theta.slope(&c).expect("nonzero");
                // the first part has the largest slope, so it must beat the whole
                if mu_c <= mu_full {
                    continue;
                }
                let rest = d.checked_sub(&c).expect("sub-vector");
                let tail = self.tail(&rest, &mu_c);
                if tail.is_zero() {
                    continue;
                }
                let twist = QRational::q_pow(-self.quiver.euler_form(&rest, &c));
                correction = correction + &(self.p_cached(&c) * &tail * &twist);
            }
            self.e_d(d) - &correction
        };
        self.p_memo.write().entry(d.clone()).or_insert(value).clone()
    }

    /// Sum over decompositions `r = r^1 + ... + r^s` (s >= 1) with
    /// `bound > mu(r^1) > ... > mu(r^s)` of `q^{-sum_{k<l} <r^l,r^k>} prod p_{r^k}`.
    fn tail(&self, r: &DimVector, bound: &Slope) -> QRational {
        let key = (r.clone(), bound.clone());
        if let Some(v) = self.tail_memo.read().get(&key) {
            return v.clone();
        }
        let mut acc = QRational::zero();
        for c in r.sub_vectors() {
            if c.is_zero() {
                continue;
            }
            let mu_c = self.theta.slope(&c).expect("nonzero");
            if &mu_c >= bound {
                continue;
            }
            let rest = r.checked_sub(&c).expect("sub-vector");
            let term = if rest.is_zero() {
                self.p_cached(&c)
            } else {
                let tail = self.tail(&rest, &mu_c);
                if tail.is_zero() {
                    continue;
                }
                let twist = QRational::q_pow(-self.quiver.euler_form(&rest, &c));
                self.p_cached(&c) * &tail * &twist
            };
            acc = acc + &term;
        }
        self.tail_memo.write().entry(key).or_insert(acc).clone()
    }

    /// `p_d(q)` from the resolved alternating sum over tuples whose proper
    /// partial sums all have slope larger than `mu(d)`.
    ///
    /// Shares nothing with [`HnContext::p_d_recursive`] except `e_d`.
    pub fn p_d_resolved(&self, d: &DimVector) -> Result<QRational> {
        self.quiver.check_dim(d)?;
        if d.is_zero() {
            return Err(Error::ZeroDimVector);
        }
        let mu = self.theta.slope(d)?;
        let mut memo = HashMap::new();
        Ok(self.resolved_from(d, d, &mu, &mut memo))
    }

    // Signed sum over all ways to finish the tuple when `remaining` is still
    // to be distributed; the prefix consumed so far is `d - remaining`.
    fn resolved_from(
        &self,
        d: &DimVector,
        remaining: &DimVector,
        mu: &Slope,
        memo: &mut HashMap<DimVector, QRational>,
    ) -> QRational {
        if let Some(v) = memo.get(remaining) {
            return v.clone();
        }
        let mut acc = self.e_d(remaining);
        for c in remaining.sub_vectors() {
            if c.is_zero() || &c == remaining {
                continue;
            }
            let after = remaining.checked_sub(&c).expect("sub-vector");
            let prefix = d.checked_sub(&after).expect("sub-vector");
            if self.theta.slope(&prefix).expect("nonzero") <= *mu {
                continue;
            }
            let inner = self.resolved_from(d, &after, mu, memo);
            if inner.is_zero() {
                continue;
            }
            let twist = QRational::q_pow(-self.quiver.euler_form(&after, &c));
            acc = acc - &(self.e_d(&c) * &inner * &twist);
        }
        memo.insert(remaining.clone(), acc.clone());
        acc
    }

    /// `P(t) = sum_d e_d(q) t^d` up to total dimension `order`.
    pub fn series_p(&self, order: u32) -> SkewSeries {
        let mut s = SkewSeries::skew_zero(self.quiver.clone(), order);
        for d in DimVector::all_up_to(self.quiver.vertex_count(), order) {
            let e = self.e_d(&d);
            s.set(d, e);
        }
        s
    }

    /// `P_mu(t) = 1 + sum_{mu(d) = mu} p_d(q) t^d` up to total dimension `order`.
    pub fn series_p_mu(&self, mu: &Slope, order: u32) -> SkewSeries {
        let mut s = SkewSeries::skew_one(self.quiver.clone(), order);
        for d in DimVector::all_up_to(self.quiver.vertex_count(), order) {
            if d.is_zero() || &self.theta.slope(&d).expect("nonzero") != mu {
                continue;
            }
            let p = self.p_cached(&d);
            s.set(d, p);
        }
        s
    }

    /// All `P_mu` with a nonempty slope class up to `order`, keyed by slope.
    pub fn slope_series(&self, order: u32) -> BTreeMap<Slope, SkewSeries> {
        slope_classes(&self.quiver, &self.theta, order)
            .into_iter()
            .map(|(mu, _)| {
                let s = self.series_p_mu(&mu, order);
                (mu, s)
            })
            .collect()
    }

    /// Checks both factorizations of `P(t)` exactly up to `order`.
    pub fn verify_hnsa(&self, order: u32) -> Report {
        let mut report = Report::new("hn-factorization");
        let target = self.series_p(order);

        let mut vertex_product = SkewSeries::skew_one(self.quiver.clone(), order);
        for i in 0..self.quiver.vertex_count() {
            let pi = series_real_root(&self.quiver, &self.quiver.unit(i), order).expect("simple roots are real");
            vertex_product = vertex_product.mul(&pi).expect("compatible");
        }
        let diffs = vertex_product.differences(&target);
        report.record(
            format!("vertex product equals P up to {order}"),
            diffs.is_empty(),
            describe_diffs(&diffs),
        );

        let factors = self.slope_series(order);
        let slope_product = SkewSeries::descending_product(&factors, &self.theta)
            .expect("slope series are normalized")
            .unwrap_or_else(|| SkewSeries::skew_one(self.quiver.clone(), order));
        let diffs = slope_product.differences(&target);
        report.record(
            format!("descending slope product equals P up to {order}"),
            diffs.is_empty(),
            describe_diffs(&diffs),
        );
        report
    }
}

/// `P_d(t) = sum_n q^{-n^2} / ((1 - q^-1)...(1 - q^-n)) t^{nd}` for a real root `d`.
pub fn series_real_root(quiver: &Arc<Quiver>, d: &DimVector, order: u32) -> Result<SkewSeries> {
    quiver.check_dim(d)?;
    if quiver.tits_form(d) != 1 {
        return Err(Error::NotRealRoot(d.clone()));
    }
    let mut s = SkewSeries::skew_one(quiver.clone(), order);
    let mut n = 1u32;
    while n * d.dim() <= order {
        let n_i = n as i64;
        let mut c = QRational::q_pow(-n_i * n_i);
        for j in 1..=n as usize {
            c = c * &QRational::inv_one_minus_q_inv(j);
        }
        s.set(d.scale(n), c);
        n += 1;
    }
    Ok(s)
}

pub(crate) fn describe_diffs<C: std::fmt::Display>(diffs: &[(DimVector, C, C)]) -> String {
    diffs
        .iter()
        .take(4)
        .map(|(d, a, b)| format!("at {d}: {a} vs {b}"))
        .collect::<Vec<_>>()
        .join("; ")
}
