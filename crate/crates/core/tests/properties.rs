use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use quiver_dt::arith::{binomial, Poly};
use quiver_dt::poisson::{bracket, unit_power, UnitAuto};
use quiver_dt::quiver::catalog::{a_alternating, kronecker};
use quiver_dt::{qbinom, CommSeries, DimVector, Field, Functional, QLaurent, QRational, Quiver, SkewSeries};

fn k2() -> Arc<Quiver> {
    Arc::new(kronecker(2))
}

fn qrational() -> impl Strategy<Value = QRational> {
    let den = prop_oneof![
        Just(vec![1i64]),
        Just(vec![-1, 1]),
        Just(vec![0, 1]),
        Just(vec![1, 1]),
        Just(vec![1, 0, -1]),
    ];
    (prop::collection::vec(-3i64..=3, 1..4), den)
        .prop_map(|(n, d)| QRational::new(Poly::from_i64s(&n), Poly::from_i64s(&d)).unwrap())
}

fn dim2(max: u32) -> impl Strategy<Value = DimVector> {
    (0..=max, 0..=max).prop_map(|(a, b)| DimVector::new(vec![a, b]))
}

fn series(order: u32, unit: bool) -> impl Strategy<Value = SkewSeries> {
    prop::collection::vec((dim2(order), qrational()), 0..5).prop_map(move |terms| {
        let mut s = SkewSeries::skew_one(k2(), order);
        for (d, c) in terms {
            if d.is_zero() {
                if !unit {
                    s.set(d, c);
                }
            } else {
                s.set(d, c);
            }
        }
        s
    })
}

fn functional() -> impl Strategy<Value = Functional> {
    (-3i64..=3, -3i64..=3).prop_map(|(a, b)| Functional::new(vec![a, b]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn product_is_associative(a in series(3, false), b in series(3, false), c in series(3, false)) {
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn twist_is_multiplicative(a in series(4, false), b in series(4, false), eta in functional()) {
        let lhs = a.mul(&b).unwrap().twist(&eta);
        let rhs = a.twist(&eta).mul(&b.twist(&eta)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverse_is_two_sided(a in series(4, true)) {
        let inv = a.invert().unwrap();
        prop_assert!(a.mul(&inv).unwrap().is_one());
        prop_assert!(inv.mul(&a).unwrap().is_one());
    }

    #[test]
    fn conjugation_cocycle(p in series(4, true), eta in functional(), nu in functional()) {
        let q = |e: &Functional| p.twist(e).mul(&p.invert().unwrap()).unwrap();
        let lhs = q(&(&eta + &nu));
        let rhs = q(&eta).twist(&nu).mul(&q(&nu)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn conjugation_inverse_twist(p in series(4, true), eta in functional()) {
        let q = |e: &Functional| p.twist(e).mul(&p.invert().unwrap()).unwrap();
        let lhs = q(&eta.neg());
        let rhs = q(&eta).twist(&eta.neg()).invert().unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn monomials_commute_up_to_skew_form(d in dim2(2), e in dim2(2)) {
        let quiver = k2();
        let one = QRational::from_integer(1.into());
        let td = SkewSeries::skew_zero(quiver.clone(), 4).monomial_like(d.clone(), one.clone());
        let te = SkewSeries::skew_zero(quiver.clone(), 4).monomial_like(e.clone(), one);
        let lhs = te.mul(&td).unwrap();
        let rhs = td.mul(&te).unwrap().scale(&QRational::q_pow(quiver.skew_form(&e, &d)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn euler_form_is_bilinear(a in prop::collection::vec(0u32..4, 3), b in prop::collection::vec(0u32..4, 3), c in prop::collection::vec(0u32..4, 3)) {
        let q = a_alternating(3);
        let (a, b, c) = (DimVector::new(a), DimVector::new(b), DimVector::new(c));
        prop_assert_eq!(q.euler_form(&(&a + &b), &c), q.euler_form(&a, &c) + q.euler_form(&b, &c));
        prop_assert_eq!(q.euler_form(&c, &(&a + &b)), q.euler_form(&c, &a) + q.euler_form(&c, &b));
        prop_assert_eq!(q.skew_form(&a, &b), -q.skew_form(&b, &a));
    }

    #[test]
    fn field_axioms(a in qrational(), b in qrational(), c in qrational()) {
        prop_assert_eq!((a.clone() + &b) * &c, a.clone() * &c + &(b.clone() * &c));
        if !b.is_zero() {
            prop_assert_eq!((a.clone() / b.clone()) * &b, a.clone());
        }
        prop_assert_eq!(a.clone() - &a, QRational::zero());
    }

    #[test]
    fn laurent_round_trip(pairs in prop::collection::vec((-4i64..=4, -5i64..=5), 0..6)) {
        let l = QLaurent::from_pairs(&pairs);
        prop_assert_eq!(l.to_qrational().as_laurent().unwrap(), l);
    }

    #[test]
    fn bracket_of_t_d_images(a in 0u32..3, b in 0u32..3) {
        prop_assume!(a + b > 0);
        let quiver = k2();
        let t = UnitAuto::<BigRational>::t_d(quiver, &DimVector::new(vec![a, b]), 5).unwrap();
        prop_assert!(t.bracket_violations().unwrap().is_empty());
        let inv = t.inverse().unwrap();
        prop_assert!(t.compose(&inv).unwrap().is_identity());
    }
}

#[test]
fn qbinomial_symmetry_and_euler_values() {
    for m in 0..=8i64 {
        for n in 0..=m {
            let a = qbinom(m, n).unwrap();
            assert_eq!(a, qbinom(m, m - n).unwrap());
            assert_eq!(a.at_one(), binomial(m, n as u32));
        }
    }
    for m in -5..0i64 {
        for n in 0..=5u32 {
            assert_eq!(qbinom(m, n as i64).unwrap().at_one(), binomial(m, n));
        }
    }
}

#[test]
fn bracket_is_antisymmetric() {
    let quiver = k2();
    let mut f = CommSeries::comm_one(quiver.clone(), 4);
    f.set(DimVector::new(vec![1, 0]), BigRational::from_int(2));
    f.set(DimVector::new(vec![1, 1]), BigRational::from_int(-1));
    let mut g = CommSeries::comm_one(quiver, 4);
    g.set(DimVector::new(vec![0, 1]), BigRational::from_int(3));
    let fg = bracket(&f, &g).unwrap();
    let gf = bracket(&g, &f).unwrap();
    assert_eq!(fg, gf.scale(&BigRational::from_int(-1)));
    assert!(bracket(&f, &f).unwrap().is_zero());
    assert_eq!(unit_power(&f, 0).unwrap(), CommSeries::comm_one(f.quiver_arc().clone(), 4));
}
