#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use quiver_dt::hn::HnContext;
use quiver_dt::quiver::catalog::{a_alternating, a_linear, kronecker, kronecker_stability, single_vertex};
use quiver_dt::{Quiver, Stability};

pub struct Case {
    pub name: String,
    pub ctx: HnContext,
}

fn named(quiver: &Quiver, weights: &[(&str, i64)]) -> Stability {
    let map: BTreeMap<String, i64> = weights.iter().map(|&(k, v)| (k.to_string(), v)).collect();
    Stability::from_names(quiver, &map).expect("all vertices weighted")
}

pub fn kronecker_case(m: usize) -> Case {
    Case {
        name: format!("K{m}"),
        ctx: HnContext::new(Arc::new(kronecker(m)), kronecker_stability()),
    }
}

pub fn single_vertex_case() -> Case {
    Case {
        name: "Q0".into(),
        ctx: HnContext::new(Arc::new(single_vertex()), Stability::trivial(1)),
    }
}

/// A3 in both orientations, each with two stabilities.
pub fn a3_cases() -> Vec<Case> {
    let mut out = Vec::new();
    for (orientation, quiver) in [("linear", a_linear(3)), ("alternating", a_alternating(3))] {
        for weights in [[("1", 0), ("2", 1), ("3", 3)], [("1", 5), ("2", 2), ("3", 0)]] {
            let theta = named(&quiver, &weights);
            let label: Vec<String> = weights.iter().map(|(_, w)| w.to_string()).collect();
            out.push(Case {
                name: format!("A3 {orientation} theta=({})", label.join(",")),
                ctx: HnContext::new(Arc::new(quiver.clone()), theta),
            });
        }
    }
    out
}

/// K1, K2, K3 with `Theta = j*` and the four A3 cases.
pub fn standard_cases() -> Vec<Case> {
    let mut out: Vec<Case> = (1..=3).map(kronecker_case).collect();
    out.extend(a3_cases());
    out
}
