//! Acyclic quivers, dimension vectors, the Euler and skew forms, stabilities
//! and slopes.
//!
//! Vertices are stored in an admissible order: every arrow goes from a vertex
//! with a larger index to one with a smaller index. All vector-valued data
//! (dimension vectors, functionals) is indexed by this stored order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// A quiver without oriented cycles.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<(usize, usize)>,
}

/// Raw quiver input: vertex names, arrows by name, optional integer stability.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QuiverDescription {
    pub vertices: Vec<String>,
    pub arrows: Vec<(String, String)>,
    pub theta: Option<BTreeMap<String, i64>>,
}

impl QuiverDescription {
    pub fn new<S: Into<String>>(vertices: impl IntoIterator<Item = S>) -> Self {
        QuiverDescription {
            vertices: vertices.into_iter().map(Into::into).collect(),
            ..Default::default()
        }
    }

    pub fn arrow(mut self, source: &str, target: &str) -> Self {
        self.arrows.push((source.to_string(), target.to_string()));
        self
    }

    pub fn theta(mut self, weights: &[(&str, i64)]) -> Self {
        self.theta = Some(weights.iter().map(|(v, w)| (v.to_string(), *w)).collect());
        self
    }
}

/// Validates a description and orders its vertices admissibly.
///
/// Among vertices that could come next, the one listed first in the input wins,
/// so the result only depends on the description.
pub fn load_quiver(desc: &QuiverDescription) -> Result<Quiver> {
    let mut index = BTreeMap::new();
    for (k, v) in desc.vertices.iter().enumerate() {
        if index.insert(v.as_str(), k).is_some() {
            return Err(Error::DuplicateVertex(v.clone()));
        }
    }
    let lookup = |v: &String| index.get(v.as_str()).copied().ok_or_else(|| Error::UnknownVertex(v.clone()));
    let mut raw_arrows = Vec::with_capacity(desc.arrows.len());
    for (s, t) in &desc.arrows {
        raw_arrows.push((lookup(s)?, lookup(t)?));
    }

    let n = desc.vertices.len();
    let mut out_targets: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(s, t) in &raw_arrows {
        out_targets[s].push(t);
    }
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let next = (0..n).find(|&v| !placed[v] && out_targets[v].iter().all(|&t| placed[t]));
        match next {
            Some(v) => {
                placed[v] = true;
                order.push(v);
            }
            None => {
                return Err(Error::CyclicQuiver {
                    cycle: find_cycle(&out_targets, &placed)
                        .into_iter()
                        .map(|v| desc.vertices[v].clone())
                        .collect(),
                })
            }
        }
    }
    let mut position = vec![0; n];
    for (k, &v) in order.iter().enumerate() {
        position[v] = k;
    }
    Ok(Quiver {
        vertices: order.iter().map(|&v| desc.vertices[v].clone()).collect(),
        arrows: raw_arrows.iter().map(|&(s, t)| (position[s], position[t])).collect(),
    })
}

// Every unplaced vertex has an arrow into another unplaced vertex, so walking
// such arrows must revisit a vertex.
fn find_cycle(out_targets: &[Vec<usize>], placed: &[bool]) -> Vec<usize> {
    let Some(start) = (0..placed.len()).find(|&v| !placed[v]) else {
        return Vec::new();
    };
    let mut path = vec![start];
    let mut seen = BTreeMap::from([(start, 0usize)]);
    let mut v = start;
    loop {
        let Some(&next) = out_targets[v].iter().find(|&&t| !placed[t]) else {
            return path;
        };
        if let Some(&at) = seen.get(&next) {
            let mut cycle = path[at..].to_vec();
            cycle.push(next);
            return cycle;
        }
        seen.insert(next, path.len());
        path.push(next);
        v = next;
    }
}

impl Quiver {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_name(&self, i: usize) -> &str {
        &self.vertices[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    /// Arrows as `(source, target)` index pairs in the stored order.
    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn zero_vector(&self) -> DimVector {
        DimVector::zero(self.vertex_count())
    }

    pub fn unit(&self, i: usize) -> DimVector {
        DimVector::unit(self.vertex_count(), i)
    }

    /// Builds a dimension vector from `(vertex name, entry)` pairs.
    pub fn dim_vector(&self, entries: &[(&str, u32)]) -> Result<DimVector> {
        let mut d = self.zero_vector();
        for (name, k) in entries {
            let i = self.index_of(name).ok_or_else(|| Error::UnknownVertex(name.to_string()))?;
            d.0[i] = *k;
        }
        Ok(d)
    }

    pub fn check_dim(&self, d: &DimVector) -> Result<()> {
        if d.len() != self.vertex_count() {
            return Err(Error::DimensionMismatch {
                expected: self.vertex_count(),
                got: d.len(),
            });
        }
        Ok(())
    }

    /// `<d,e> = sum_i d_i e_i - sum_{a: i -> j} d_i e_j`.
    pub fn euler_form(&self, d: &DimVector, e: &DimVector) -> i64 {
        let diag: i64 = d.0.iter().zip(&e.0).map(|(&a, &b)| a as i64 * b as i64).sum();
        let arrows: i64 = self
            .arrows
            .iter()
            .map(|&(s, t)| d.0[s] as i64 * e.0[t] as i64)
            .sum();
        diag - arrows
    }

    /// `{d,e} = <d,e> - <e,d>`.
    pub fn skew_form(&self, d: &DimVector, e: &DimVector) -> i64 {
        self.euler_form(d, e) - self.euler_form(e, d)
    }

    /// `b_ij = {i, j}`.
    pub fn b(&self, i: usize, j: usize) -> i64 {
        self.skew_form(&self.unit(i), &self.unit(j))
    }

    /// The functional `e -> {e, d}`.
    pub fn skew_functional(&self, d: &DimVector) -> Functional {
        Functional::new((0..self.vertex_count()).map(|i| self.skew_form(&self.unit(i), d)).collect())
    }

    pub fn tits_form(&self, d: &DimVector) -> i64 {
        self.euler_form(d, d)
    }

    /// True when every arrow points from a higher to a lower stored index.
    pub fn is_admissibly_ordered(&self) -> bool {
        self.arrows.iter().all(|&(s, t)| s > t)
    }

    /// Arrows between distinct vertices counted in both directions.
    fn edge_count(&self, a: usize, b: usize) -> i64 {
        self.arrows
            .iter()
            .filter(|&&(s, t)| (s == a && t == b) || (s == b && t == a))
            .count() as i64
    }

    /// Positive definiteness of `d -> <d,d>` via leading principal minors.
    pub fn is_dynkin(&self) -> bool {
        let n = self.vertex_count();
        if self.arrows.iter().any(|&(s, t)| s == t) {
            return false;
        }
        let mut m: Vec<Vec<BigRational>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        let v = if a == b { 2 } else { -self.edge_count(a, b) };
                        BigRational::from_integer(BigInt::from(v))
                    })
                    .collect()
            })
            .collect();
        // Gaussian elimination: all pivots positive iff all minors positive
        for k in 0..n {
            let pivot = m[k][k].clone();
            if !pivot.is_positive() {
                return false;
            }
            for r in k + 1..n {
                let factor = &m[r][k] / &pivot;
                if factor.is_zero() {
                    continue;
                }
                let (top, bottom) = m.split_at_mut(r);
                for (x, y) in bottom[0][k..n].iter_mut().zip(&top[k][k..n]) {
                    *x -= &factor * y;
                }
            }
        }
        true
    }

    /// All `d != 0` in `N^I` with `<d,d> = 1`, for quivers of Dynkin type.
    ///
    /// Roots are grown from the simple roots by adding one simple root at a
    /// time; entries never exceed 6 for ADE types.
    pub fn positive_roots(&self) -> Result<Vec<DimVector>> {
        const ENTRY_BOUND: u32 = 6;
        let n = self.vertex_count();
        let dynkin = self.is_dynkin();
        let mut seen: HashSet<DimVector> = HashSet::new();
        let mut queue: VecDeque<DimVector> = (0..n).map(|i| self.unit(i)).collect();
        seen.extend(queue.iter().cloned());
        let mut witness = None;
        while let Some(root) = queue.pop_front() {
            for i in 0..n {
                let mut next = root.clone();
                next.0[i] += 1;
                if next.0[i] > ENTRY_BOUND || seen.contains(&next) {
                    continue;
                }
                let t = self.tits_form(&next);
                if t <= 0 && witness.is_none() {
                    witness = Some(next.clone());
                }
                if t == 1 {
                    seen.insert(next.clone());
                    queue.push_back(next);
                }
            }
            if !dynkin && witness.is_some() {
                break;
            }
        }
        if !dynkin {
            return Err(Error::NotDynkin {
                witness: witness.unwrap_or_else(|| self.zero_vector()),
            });
        }
        let mut roots: Vec<DimVector> = seen.into_iter().collect();
        roots.sort();
        Ok(roots)
    }
}

/// A dimension vector, indexed by the stored vertex order.
///
/// Ordered first by total dimension, then lexicographically, so maps keyed by
/// dimension vectors iterate degree by degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DimVector(Vec<u32>);

impl DimVector {
    pub fn new(entries: Vec<u32>) -> Self {
        DimVector(entries)
    }

    pub fn zero(n: usize) -> Self {
        DimVector(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        DimVector(v)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `dim d = sum_i d_i`.
    pub fn dim(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &x)| x > 0).map(|(i, _)| i)
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &DimVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn checked_sub(&self, other: &DimVector) -> Option<DimVector> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(DimVector)
    }

    pub fn scale(&self, k: u32) -> DimVector {
        DimVector(self.0.iter().map(|x| x * k).collect())
    }

    /// Largest `k` with `self = k * base`, if `self` is a multiple of `base != 0`.
    pub fn multiple_of(&self, base: &DimVector) -> Option<u32> {
        let i = base.support().next()?;
        let k = self.0[i] / base.0[i];
        (base.scale(k) == *self).then_some(k)
    }

    /// Every `e` with `0 <= e <= self` componentwise, in no particular order.
    pub fn sub_vectors(&self) -> Vec<DimVector> {
        let mut out = vec![Vec::with_capacity(self.len())];
        for &bound in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (bound as usize + 1));
            for prefix in &out {
                for x in 0..=bound {
                    let mut v = prefix.clone();
                    v.push(x);
                    next.push(v);
                }
            }
            out = next;
        }
        out.into_iter().map(DimVector).collect()
    }

    /// All dimension vectors on `n` vertices with `dim <= max_dim`.
    pub fn all_up_to(n: usize, max_dim: u32) -> Vec<DimVector> {
        fn rec(n: usize, budget: u32, prefix: &mut Vec<u32>, out: &mut Vec<DimVector>) {
            if prefix.len() == n {
                out.push(DimVector(prefix.clone()));
                return;
            }
            for x in 0..=budget {
                prefix.push(x);
                rec(n, budget - x, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, max_dim, &mut Vec::with_capacity(n), &mut out);
        out.sort();
        out
    }
}

impl Ord for DimVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dim().cmp(&other.dim()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for DimVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &DimVector {
    type Output = DimVector;
    fn add(self, rhs: &DimVector) -> DimVector {
        DimVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A linear functional on the dimension lattice, given by integer weights.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Functional(Vec<i64>);

impl Functional {
    pub fn new(weights: Vec<i64>) -> Self {
        Functional(weights)
    }

    pub fn zero(n: usize) -> Self {
        Functional(vec![0; n])
    }

    /// The coordinate functional `i*`, which is also `n.` for the unit vector `n = i`.
    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut w = vec![0; n];
        w[i] = 1;
        Functional(w)
    }

    /// `n.` for a dimension vector `n`.
    pub fn from_dim(n: &DimVector) -> Self {
        Functional(n.0.iter().map(|&x| x as i64).collect())
    }

    pub fn weights(&self) -> &[i64] {
        &self.0
    }

    pub fn apply(&self, d: &DimVector) -> i64 {
        self.0.iter().zip(&d.0).map(|(&w, &x)| w * x as i64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&w| w >= 0)
    }

    pub fn neg(&self) -> Functional {
        Functional(self.0.iter().map(|w| -w).collect())
    }

    pub fn scale(&self, k: i64) -> Functional {
        Functional(self.0.iter().map(|w| w * k).collect())
    }
}

impl Add for &Functional {
    type Output = Functional;
    fn add(self, rhs: &Functional) -> Functional {
        Functional(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

/// A stability: integer weights `Theta`, giving slopes `Theta(d) / dim d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Stability(Functional);

impl Stability {
    pub fn new(weights: Vec<i64>) -> Self {
        Stability(Functional(weights))
    }

    pub fn trivial(n: usize) -> Self {
        Stability(Functional::zero(n))
    }

    /// Reads the stability from a description, keyed by vertex name.
    ///
    /// Vertices missing from the map get weight 0.
    pub fn from_names(quiver: &Quiver, theta: &BTreeMap<String, i64>) -> Result<Self> {
        let mut w = vec![0; quiver.vertex_count()];
        for (name, &value) in theta {
            let i = quiver.index_of(name).ok_or_else(|| Error::UnknownVertex(name.clone()))?;
            w[i] = value;
        }
        Ok(Stability::new(w))
    }

    pub fn weights(&self) -> &[i64] {
        self.0.weights()
    }

    pub fn functional(&self) -> &Functional {
        &self.0
    }

    pub fn slope(&self, d: &DimVector) -> Result<Slope> {
        if d.is_zero() {
            return Err(Error::ZeroDimVector);
        }
        Ok(Slope(BigRational::new(self.0.apply(d).into(), d.dim().into())))
    }

    /// True when `Theta` takes one value on `supp(d)`.
    pub fn is_constant_on_support(&self, d: &DimVector) -> bool {
        let mut values = d.support().map(|i| self.weights()[i]);
        match values.next() {
            None => true,
            Some(first) => values.all(|w| w == first),
        }
    }

    /// The functional `Theta - mu * dim`, scaled to integer weights.
    pub fn centered(&self, mu: &Slope) -> Functional {
        let (p, q) = (mu.0.numer(), mu.0.denom());
        let q_i: i64 = q.try_into().expect("slope denominator fits in i64");
        let p_i: i64 = p.try_into().expect("slope numerator fits in i64");
        Functional(self.weights().iter().map(|&w| w * q_i - p_i).collect())
    }
}

/// An exact slope value.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slope(pub BigRational);

impl Slope {
    pub fn new(num: i64, den: i64) -> Self {
        Slope(BigRational::new(num.into(), den.into()))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Slope({})", self.0)
    }
}

/// Partitions `{d : 0 < dim d <= max_dim}` by slope, in strictly decreasing slope order.
pub fn slope_classes(quiver: &Quiver, theta: &Stability, max_dim: u32) -> Vec<(Slope, Vec<DimVector>)> {
    let mut classes: BTreeMap<Slope, Vec<DimVector>> = BTreeMap::new();
    for d in DimVector::all_up_to(quiver.vertex_count(), max_dim) {
        if d.is_zero() {
            continue;
        }
        let mu = theta.slope(&d).expect("nonzero vector");
        classes.entry(mu).or_default().push(d);
    }
    classes.into_iter().rev().collect()
}

/// Standard quivers used throughout the tests and the command line.
pub mod catalog {
    use super::*;

    /// One vertex, no arrows.
    pub fn single_vertex() -> Quiver {
        load_quiver(&QuiverDescription::new(["v"])).expect("valid quiver")
    }

    /// Vertices `i`, `j` with `m` arrows `j -> i`.
    pub fn kronecker(m: usize) -> Quiver {
        let mut desc = QuiverDescription::new(["i", "j"]);
        for _ in 0..m {
            desc = desc.arrow("j", "i");
        }
        load_quiver(&desc).expect("valid quiver")
    }

    /// `Theta = j*` on a Kronecker quiver.
    pub fn kronecker_stability() -> Stability {
        Stability::new(vec![0, 1])
    }

    /// Type `A_n` with vertices `1..n` and arrows `k -> k+1`.
    pub fn a_linear(n: usize) -> Quiver {
        let names: Vec<String> = (1..=n).map(|k| k.to_string()).collect();
        let mut desc = QuiverDescription::new(names.clone());
        for k in 0..n.saturating_sub(1) {
            desc = desc.arrow(&names[k], &names[k + 1]);
        }
        load_quiver(&desc).expect("valid quiver")
    }

    /// Type `A_n` with alternating orientation: odd vertices are sources.
    pub fn a_alternating(n: usize) -> Quiver {
        let names: Vec<String> = (1..=n).map(|k| k.to_string()).collect();
        let mut desc = QuiverDescription::new(names.clone());
        for k in 0..n.saturating_sub(1) {
            if k % 2 == 0 {
                desc = desc.arrow(&names[k], &names[k + 1]);
            } else {
                desc = desc.arrow(&names[k + 1], &names[k]);
            }
        }
        load_quiver(&desc).expect("valid quiver")
    }

    /// Type `D_n` (n >= 4): a path `1 -> ... -> n-2` with two legs `n-2 -> n-1`, `n-2 -> n`.
    pub fn d_linear(n: usize) -> Quiver {
        assert!(n >= 4, "D_n needs n >= 4");
        let names: Vec<String> = (1..=n).map(|k| k.to_string()).collect();
        let mut desc = QuiverDescription::new(names.clone());
        for k in 0..n - 3 {
            desc = desc.arrow(&names[k], &names[k + 1]);
        }
        desc = desc.arrow(&names[n - 3], &names[n - 2]).arrow(&names[n - 3], &names[n - 1]);
        load_quiver(&desc).expect("valid quiver")
    }

    /// Type `E_n` (n in 6..=8): path `1 -> ... -> n-1` with vertex `n` attached to vertex 3.
    pub fn e_linear(n: usize) -> Quiver {
        assert!((6..=8).contains(&n), "E_n needs 6 <= n <= 8");
        let names: Vec<String> = (1..=n).map(|k| k.to_string()).collect();
        let mut desc = QuiverDescription::new(names.clone());
        for k in 0..n - 2 {
            desc = desc.arrow(&names[k], &names[k + 1]);
        }
        desc = desc.arrow(&names[2], &names[n - 1]);
        load_quiver(&desc).expect("valid quiver")
    }
}
