//! Vectors and subspaces of `F_p^n` for tiny `p^n`.
//!
//! A vector is its base-`p` index `sum x_k p^k`; a subspace is the bitset of
//! the indices of its members.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};

/// The largest `p^n` a subspace bitset can hold.
pub const MAX_POINTS: u128 = 128;

#[derive(Clone, Debug)]
pub struct Space {
    p: u32,
    n: usize,
    size: usize,
    add: Vec<u32>,
    subspaces: Vec<u128>,
}

impl Space {
    pub fn new(p: u32, n: usize) -> Result<Self> {
        let size = (p as u128).pow(n as u32);
        if size > MAX_POINTS {
            return Err(Error::BudgetExceeded {
                required: size,
                budget: MAX_POINTS,
            });
        }
        let size = size as usize;
        let mut space = Space {
            p,
            n,
            size,
            add: Vec::with_capacity(size * size),
            subspaces: Vec::new(),
        };
        for u in 0..size as u32 {
            for v in 0..size as u32 {
                let (a, b) = (space.digits(u), space.digits(v));
                let sum: Vec<u32> = a.iter().zip(&b).map(|(x, y)| (x + y) % p).collect();
                space.add.push(space.index(&sum));
            }
        }
        space.subspaces = space.enumerate_subspaces();
        Ok(space)
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn digits(&self, v: u32) -> Vec<u32> {
        let mut v = v;
        (0..self.n)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    pub fn index(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    pub fn add(&self, u: u32, v: u32) -> u32 {
        self.add[u as usize * self.size + v as usize]
    }

    pub fn zero_subspace(&self) -> u128 {
        1
    }

    pub fn full(&self) -> u128 {
        if self.size == 128 {
            u128::MAX
        } else {
            (1u128 << self.size) - 1
        }
    }

    pub fn members(set: u128) -> impl Iterator<Item = u32> {
        (0..128u32).filter(move |&v| set >> v & 1 == 1)
    }

    /// Span of `set` and `v`.
    pub fn extend(&self, set: u128, v: u32) -> u128 {
        let mut out = set;
        let mut multiple = v;
        for _ in 1..self.p {
            for s in Self::members(set) {
                out |= 1u128 << self.add(s, multiple);
            }
            multiple = self.add(multiple, v);
        }
        out
    }

    /// `log_p` of the number of members.
    pub fn subspace_dim(&self, set: u128) -> u32 {
        let mut count = set.count_ones();
        let mut k = 0;
        while count > 1 {
            count /= self.p;
            k += 1;
        }
        k
    }

    pub fn subspaces(&self) -> &[u128] {
        &self.subspaces
    }

    fn enumerate_subspaces(&self) -> Vec<u128> {
        let mut seen = HashSet::new();
        let mut queue = VecDeque::from([self.zero_subspace()]);
        seen.insert(self.zero_subspace());
        while let Some(s) = queue.pop_front() {
            for v in 0..self.size as u32 {
                if s >> v & 1 == 1 {
                    continue;
                }
                let t = self.extend(s, v);
                if seen.insert(t) {
                    queue.push_back(t);
                }
            }
        }
        let mut out: Vec<u128> = seen.into_iter().collect();
        out.sort_by_key(|s| (s.count_ones(), *s));
        out
    }
}
