//! Brute-force point counts over `F_2` and `F_3`: every representation of a
//! given dimension vector, its full lattice of subrepresentations, its
//! Harder-Narasimhan type and its framed morphisms.

mod field;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use parking_lot::RwLock;

pub use field::Space;

use crate::error::{Error, Result};
use crate::hn::HnContext;
use crate::quiver::{DimVector, Quiver, Slope, Stability};
use crate::report::Report;
use crate::wallcross::slope_conjugation;
use crate::Functional;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Representation points per dimension vector.
    pub reps: u128,
    /// Subspace tuples per representation.
    pub subspaces: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            reps: 1_000_000,
            subspaces: 10_000,
        }
    }
}

/// A representation over `F_p`: one `d_t x d_s` matrix per arrow `s -> t`,
/// row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FFRep {
    prime: u32,
    dims: DimVector,
    maps: Vec<Vec<u8>>,
}

impl FFRep {
    pub fn new(quiver: &Quiver, prime: u32, dims: DimVector, maps: Vec<Vec<u8>>) -> Result<Self> {
        quiver.check_dim(&dims)?;
        if maps.len() != quiver.arrows().len() {
            return Err(Error::Precondition(format!(
                "{} matrices for {} arrows",
                maps.len(),
                quiver.arrows().len()
            )));
        }
        for (&(s, t), m) in quiver.arrows().iter().zip(&maps) {
            let want = (dims.entries()[s] * dims.entries()[t]) as usize;
            if m.len() != want {
                return Err(Error::Precondition(format!("matrix has {} entries, expected {want}", m.len())));
            }
        }
        let maps = maps
            .into_iter()
            .map(|m| m.into_iter().map(|x| (x as u32 % prime) as u8).collect())
            .collect();
        Ok(FFRep { prime, dims, maps })
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn dims(&self) -> &DimVector {
        &self.dims
    }

    pub fn maps(&self) -> &[Vec<u8>] {
        &self.maps
    }
}

/// A subrepresentation: one subspace bitset per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subrep {
    pub spaces: Vec<u128>,
    pub dims: DimVector,
}

impl Subrep {
    pub fn contains(&self, other: &Subrep) -> bool {
        self.spaces.iter().zip(&other.spaces).all(|(a, b)| b & !a == 0)
    }

    pub fn intersect(&self, other: &Subrep) -> Vec<u128> {
        self.spaces.iter().zip(&other.spaces).map(|(a, b)| a & b).collect()
    }
}

#[derive(Clone, Debug)]
pub struct SubrepLattice {
    /// Sorted by total dimension; the first element is `0`, the last is `M`.
    pub elements: Vec<Subrep>,
}

impl SubrepLattice {
    pub fn zero(&self) -> &Subrep {
        &self.elements[0]
    }

    pub fn full(&self) -> &Subrep {
        self.elements.last().expect("nonempty")
    }

    pub fn position(&self, spaces: &[u128]) -> Option<usize> {
        self.elements.iter().position(|e| e.spaces == spaces)
    }
}

/// Point-counting context for one quiver over one prime field.
pub struct Oracle {
    quiver: Arc<Quiver>,
    prime: u32,
    budget: Budget,
    spaces: RwLock<HashMap<usize, Arc<Space>>>,
    semistable_counts: RwLock<HashMap<(Vec<i64>, DimVector), u128>>,
}

impl Oracle {
    pub fn new(quiver: Arc<Quiver>, prime: u32, budget: Budget) -> Result<Self> {
        if prime != 2 && prime != 3 {
            return Err(Error::UnsupportedField(prime));
        }
        Ok(Oracle {
            quiver,
            prime,
            budget,
            spaces: RwLock::new(HashMap::new()),
            semistable_counts: RwLock::new(HashMap::new()),
        })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    fn space(&self, n: u32) -> Result<Arc<Space>> {
        let n = n as usize;
        if let Some(s) = self.spaces.read().get(&n) {
            return Ok(s.clone());
        }
        let s = Arc::new(Space::new(self.prime, n)?);
        Ok(self.spaces.write().entry(n).or_insert(s).clone())
    }

    fn arrow_entries(&self, d: &DimVector) -> u32 {
        self.quiver
            .arrows()
            .iter()
            .map(|&(s, t)| d.entries()[s] * d.entries()[t])
            .sum()
    }

    /// `|R_d| = p^{sum_{a: s -> t} d_s d_t}`.
    pub fn rep_count(&self, d: &DimVector) -> u128 {
        (self.prime as u128).pow(self.arrow_entries(d))
    }

    /// `|G_d| = prod_i prod_{j < d_i} (p^{d_i} - p^j)`.
    pub fn g_order(&self, d: &DimVector) -> BigInt {
        let p = BigInt::from(self.prime);
        let mut acc = BigInt::one();
        for &di in d.entries() {
            for j in 0..di {
                acc *= p.pow(di) - p.pow(j);
            }
        }
        acc
    }

    /// Every point of `R_d`, each exactly once.
    pub fn enumerate_reps(&self, d: &DimVector) -> Result<impl Iterator<Item = FFRep> + '_> {
        self.quiver.check_dim(d)?;
        let required = self.rep_count(d);
        if required > self.budget.reps {
            return Err(Error::BudgetExceeded {
                required,
                budget: self.budget.reps,
            });
        }
        let sizes: Vec<usize> = self
            .quiver
            .arrows()
            .iter()
            .map(|&(s, t)| (d.entries()[s] * d.entries()[t]) as usize)
            .collect();
        let p = self.prime as u128;
        let d = d.clone();
        Ok((0..required).map(move |mut code| {
            let maps = sizes
                .iter()
                .map(|&len| {
                    (0..len)
                        .map(|_| {
                            let x = (code % p) as u8;
                            code /= p;
                            x
                        })
                        .collect()
                })
                .collect();
            FFRep {
                prime: self.prime,
                dims: d.clone(),
                maps,
            }
        }))
    }

    // image index of every source vector, per arrow
    fn image_tables(&self, m: &FFRep) -> Result<Vec<Vec<u32>>> {
        let d = m.dims.entries();
        let p = self.prime;
        self.quiver
            .arrows()
            .iter()
            .zip(&m.maps)
            .map(|(&(s, t), a)| {
                let src = self.space(d[s])?;
                let dst = self.space(d[t])?;
                let (ds, dt) = (d[s] as usize, d[t] as usize);
                Ok((0..src.size() as u32)
                    .map(|v| {
                        let x = src.digits(v);
                        let y: Vec<u32> = (0..dt)
                            .map(|r| (0..ds).map(|c| a[r * ds + c] as u32 * x[c]).sum::<u32>() % p)
                            .collect();
                        dst.index(&y)
                    })
                    .collect())
            })
            .collect()
    }

    /// All arrow-invariant tuples of subspaces.
    pub fn subrep_lattice(&self, m: &FFRep) -> Result<SubrepLattice> {
        let d = m.dims.entries();
        let spaces: Vec<Arc<Space>> = d.iter().map(|&n| self.space(n)).collect::<Result<_>>()?;
        let required: u128 = spaces.iter().map(|s| s.subspaces().len() as u128).product();
        if required > self.budget.subspaces {
            return Err(Error::BudgetExceeded {
                required,
                budget: self.budget.subspaces,
            });
        }
        let tables = self.image_tables(m)?;
        let arrows = self.quiver.arrows();
        let n = d.len();
        let mut elements = Vec::new();
        let mut choice = vec![0usize; n];
        loop {
            let tuple: Vec<u128> = (0..n).map(|i| spaces[i].subspaces()[choice[i]]).collect();
            let invariant = arrows.iter().zip(&tables).all(|(&(s, t), table)| {
                Space::members(tuple[s]).all(|v| tuple[t] >> table[v as usize] & 1 == 1)
            });
            if invariant {
                let dims = DimVector::new((0..n).map(|i| spaces[i].subspace_dim(tuple[i])).collect());
                elements.push(Subrep { spaces: tuple, dims });
            }
            // odometer over subspace choices
            let mut k = 0;
            loop {
                if k == n {
                    elements.sort_by_key(|a| a.dims.dim());
                    return Ok(SubrepLattice { elements });
                }
                choice[k] += 1;
                if choice[k] < spaces[k].subspaces().len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }

    pub fn is_semistable(&self, m: &FFRep, theta: &Stability) -> Result<bool> {
        let lattice = self.subrep_lattice(m)?;
        Ok(semistable_in(&lattice, theta))
    }

    /// `|R_d^sst|`, cached per stability and dimension vector.
    pub fn count_semistable(&self, theta: &Stability, d: &DimVector) -> Result<u128> {
        let key = (theta.weights().to_vec(), d.clone());
        if let Some(&c) = self.semistable_counts.read().get(&key) {
            return Ok(c);
        }
        let mut count = 0u128;
        for m in self.enumerate_reps(d)? {
            if self.is_semistable(&m, theta)? {
                count += 1;
            }
        }
        self.semistable_counts.write().insert(key, count);
        Ok(count)
    }

    /// Dimension vectors of the subquotients of the Harder-Narasimhan filtration.
    pub fn hn_type(&self, m: &FFRep, theta: &Stability) -> Result<Vec<DimVector>> {
        hn_type_in(&self.subrep_lattice(m)?, theta)
    }

    /// Morphisms `P^(n) -> M` whose image has `mu`-closure `M`, for `M`
    /// semistable of slope `mu`.
    pub fn count_hom0(&self, m: &FFRep, n: &DimVector, theta: &Stability) -> Result<u128> {
        let lattice = self.subrep_lattice(m)?;
        if !semistable_in(&lattice, theta) {
            return Err(Error::NotSemistable);
        }
        let full = lattice.full().clone();
        if full.dims.is_zero() {
            return Ok(1);
        }
        let mu = theta.slope(&full.dims)?;
        // proper subreps of slope mu (and 0) are the semistable ones of slope mu
        let proper: Vec<&Subrep> = lattice
            .elements
            .iter()
            .filter(|v| **v != full && (v.dims.is_zero() || theta.slope(&v.dims).is_ok_and(|s| s == mu)))
            .collect();
        let d = m.dims.entries();
        let mut slots: Vec<(usize, u128)> = Vec::new();
        for (i, &ni) in n.entries().iter().enumerate() {
            let size = self.space(d[i])?.size() as u128;
            for _ in 0..ni {
                slots.push((i, size));
            }
        }
        let total: u128 = slots.iter().map(|&(_, s)| s).product();
        if total > self.budget.reps {
            return Err(Error::BudgetExceeded {
                required: total,
                budget: self.budget.reps,
            });
        }
        let mut count = 0u128;
        for mut code in 0..total {
            let mut image: Vec<u128> = vec![1; d.len()];
            for &(i, size) in &slots {
                image[i] |= 1u128 << (code % size);
                code /= size;
            }
            // a subrep contains the generated subrep iff it contains the generators
            let trapped = proper
                .iter()
                .any(|v| v.spaces.iter().zip(&image).all(|(s, g)| g & !s == 0));
            if !trapped {
                count += 1;
            }
        }
        Ok(count)
    }

    /// Whether slope-`mu` subreps (with 0) of a semistable `M` are closed under intersection.
    pub fn closure_is_intersection_closed(&self, m: &FFRep, theta: &Stability) -> Result<bool> {
        let lattice = self.subrep_lattice(m)?;
        let full = lattice.full();
        if full.dims.is_zero() {
            return Ok(true);
        }
        let mu = theta.slope(&full.dims)?;
        let family: Vec<&Subrep> = lattice
            .elements
            .iter()
            .filter(|v| v.dims.is_zero() || theta.slope(&v.dims).is_ok_and(|s| s == mu))
            .collect();
        for a in &family {
            for b in &family {
                let meet = a.intersect(b);
                if !family.iter().any(|v| v.spaces == meet) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn semistable_in(lattice: &SubrepLattice, theta: &Stability) -> bool {
    let full = &lattice.full().dims;
    if full.is_zero() {
        return true;
    }
    let mu = theta.slope(full).expect("nonzero");
    lattice
        .elements
        .iter()
        .filter(|u| !u.dims.is_zero())
        .all(|u| theta.slope(&u.dims).expect("nonzero") <= mu)
}

fn hn_type_in(lattice: &SubrepLattice, theta: &Stability) -> Result<Vec<DimVector>> {
    let full = lattice.full();
    let mut current = lattice.zero().clone();
    let mut parts = Vec::new();
    while current != *full {
        let above: Vec<(&Subrep, Slope)> = lattice
            .elements
            .iter()
            .filter(|v| v.contains(&current) && **v != current)
            .map(|v| {
                let q = v.dims.checked_sub(&current.dims).expect("contains");
                (v, theta.slope(&q).expect("nonzero"))
            })
            .collect();
        let best = above.iter().map(|(_, s)| s).max().expect("full is above").clone();
        let top: Vec<&Subrep> = above.iter().filter(|(_, s)| *s == best).map(|(v, _)| *v).collect();
        let maximal = top
            .iter()
            .find(|v| top.iter().all(|w| v.contains(w)))
            .ok_or_else(|| Error::Precondition("maximal destabilizing subrepresentation is not unique".into()))?;
        parts.push(maximal.dims.checked_sub(&current.dims).expect("contains"));
        current = (*maximal).clone();
    }
    Ok(parts)
}

fn ratio(num: u128, den: &BigInt) -> BigRational {
    BigRational::new(BigInt::from(num), den.clone())
}

/// `q0^k` for any integer `k`.
fn q0_pow(p: u32, k: i64) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(p));
    if k >= 0 {
        num_traits::pow(base, k as usize)
    } else {
        num_traits::pow(base.recip(), (-k) as usize)
    }
}

/// Compares `|R_d|/|G_d|` with `e_d(q0)`, `|R_d^sst|/|G_d|` with `p_d(q0)`,
/// and every Harder-Narasimhan stratum with the product of semistable counts.
pub fn verify_pd_counts(ctx: &HnContext, oracle: &Oracle, d: &DimVector) -> Result<Report> {
    let p = oracle.prime();
    let q0 = BigRational::from_integer(BigInt::from(p));
    let mut report = Report::new(format!("counts over F_{p} at {d}"));
    let g = oracle.g_order(d);
    let total = oracle.rep_count(d);

    let e = ctx.e_d(d).evaluate(&q0)?;
    let lhs = ratio(total, &g);
    report.record("|R_d|/|G_d| = e_d(q0)", lhs == e, format!("{lhs} vs {e}"));

    let theta = ctx.theta();
    let mut strata: BTreeMap<Vec<DimVector>, u128> = BTreeMap::new();
    let mut semistable = 0u128;
    for m in oracle.enumerate_reps(d)? {
        let lattice = oracle.subrep_lattice(&m)?;
        let kind = hn_type_in(&lattice, theta)?;
        if kind.len() == 1 {
            semistable += 1;
        }
        *strata.entry(kind).or_default() += 1;
    }
    oracle
        .semistable_counts
        .write()
        .insert((theta.weights().to_vec(), d.clone()), semistable);
    if !d.is_zero() {
        let pd = ctx.p_d_recursive(d)?.evaluate(&q0)?;
        let lhs = ratio(semistable, &g);
        report.record("|R_d^sst|/|G_d| = p_d(q0)", lhs == pd, format!("{lhs} vs {pd}"));
    }

    let quiver = oracle.quiver();
    let mut predicted_total = BigRational::zero();
    for (kind, &count) in &strata {
        let mut predicted = BigRational::one();
        let mut exponent = 0i64;
        for (l, dl) in kind.iter().enumerate() {
            for dk in &kind[..l] {
                exponent -= quiver.euler_form(dl, dk);
            }
            predicted *= ratio(oracle.count_semistable(theta, dl)?, &oracle.g_order(dl));
        }
        predicted *= q0_pow(p, exponent);
        predicted_total += &predicted;
        let observed = ratio(count, &g);
        let label: Vec<String> = kind.iter().map(|x| x.to_string()).collect();
        report.record(
            format!("HN stratum [{}]", label.join(", ")),
            observed == predicted,
            format!("{observed} vs {predicted}"),
        );
    }
    report.record(
        "HN strata exhaust R_d",
        predicted_total == lhs,
        format!("{predicted_total} vs {lhs}"),
    );
    Ok(report)
}

/// Framed counts at `d` against the certified coefficient of `Q_mu^{n.}`, and
/// the per-degree form of `e_{mu,n} = h_{mu,n} e_mu`.
pub fn verify_framed_counts(
    ctx: &HnContext,
    oracle: &Oracle,
    mu: &Slope,
    d: &DimVector,
    n: &DimVector,
) -> Result<Report> {
    let p = oracle.prime();
    let q0 = BigRational::from_integer(BigInt::from(p));
    let theta = ctx.theta();
    let quiver = oracle.quiver();
    let mut report = Report::new(format!("framed counts over F_{p} at d={d}, n={n}"));
    if !d.is_zero() && &theta.slope(d)? != mu {
        return Err(Error::Precondition(format!("{d} does not have slope {mu}")));
    }
    let in_class = |e: &DimVector| e.is_zero() || theta.slope(e).is_ok_and(|s| &s == mu);

    // integral of f_{e,n}, for every e <= d in the class
    let mut framed: BTreeMap<DimVector, BigRational> = BTreeMap::new();
    let mut intersection_closed = true;
    for e in d.sub_vectors().into_iter().filter(|e| in_class(e)) {
        let mut sum = 0u128;
        for m in oracle.enumerate_reps(&e)? {
            if !oracle.is_semistable(&m, theta)? {
                continue;
            }
            intersection_closed &= oracle.closure_is_intersection_closed(&m, theta)?;
            sum += oracle.count_hom0(&m, n, theta)?;
        }
        framed.insert(e.clone(), ratio(sum, &oracle.g_order(&e)));
    }
    report.record(
        "slope-mu subrepresentations are closed under intersection",
        intersection_closed,
        "an intersection left the family",
    );

    let cs = slope_conjugation(ctx, mu, &Functional::from_dim(n), d.dim())?;
    let predicted = cs.certified_coeff(d).expect("certified").evaluate(&q0);
    let observed = framed[d].clone();
    report.record(
        "sum of |Hom^0|/|G_d| = Q^{n.} coefficient at q0",
        observed == predicted,
        format!("{observed} vs {predicted}"),
    );

    let sst = |e: &DimVector| -> Result<BigRational> {
        Ok(ratio(oracle.count_semistable(theta, e)?, &oracle.g_order(e)))
    };
    let n_fun = Functional::from_dim(n);
    let lhs = q0_pow(p, n_fun.apply(d)) * sst(d)?;
    let mut twisted = BigRational::zero();
    let mut untwisted = BigRational::zero();
    for (sub, f) in &framed {
        let quot = d.checked_sub(sub).expect("sub-vector");
        if !in_class(&quot) {
            continue;
        }
        let term = f * sst(&quot)?;
        twisted += q0_pow(p, -quiver.euler_form(&quot, sub)) * &term;
        untwisted += term;
    }
    report.record(
        "integral of 1_{d,n}^sst = sum q0^{-<d'',d'>} f_{d',n} 1_{d''}^sst",
        lhs == twisted,
        format!("{lhs} vs {twisted}"),
    );
    report.note(format!(
        "untwisted product gives {untwisted} against {lhs} ({})",
        if untwisted == lhs { "agrees" } else { "differs" }
    ));
    report.note(format!(
        "q0^(n.d) |R_d^sst|/|G_d| = {lhs}; Q^(n.) coefficient = {predicted} ({})",
        if lhs == predicted { "agrees" } else { "differs" }
    ));
    Ok(report)
}
