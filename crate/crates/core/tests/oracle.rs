mod common;

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use quiver_dt::ff_oracle::{verify_framed_counts, verify_pd_counts, Budget, FFRep, Oracle};
use quiver_dt::quiver::catalog::{kronecker, kronecker_stability, single_vertex};
use quiver_dt::{DimVector, Error, Slope, Stability};

use common::{a3_cases, kronecker_case, single_vertex_case};

fn dv(xs: &[u32]) -> DimVector {
    DimVector::new(xs.to_vec())
}

fn oracle(m: usize, p: u32) -> Oracle {
    Oracle::new(Arc::new(kronecker(m)), p, Budget::default()).unwrap()
}

#[test]
fn single_vertex_rank_two_over_f2() {
    let case = single_vertex_case();
    let o = Oracle::new(Arc::new(single_vertex()), 2, Budget::default()).unwrap();
    let d = dv(&[2]);
    assert_eq!(o.rep_count(&d), 1);
    assert_eq!(o.g_order(&d), BigInt::from(6));
    let e = case.ctx.e_d(&d).evaluate(&BigRational::from_integer(2.into())).unwrap();
    assert_eq!(e, BigRational::new(1.into(), 6.into()));
    assert!(verify_pd_counts(&case.ctx, &o, &d).unwrap().is_success());
}

#[test]
fn k2_two_one_semistable_count() {
    // Semistable iff the two arrow images of the 1-dimensional space span F_2^2.
    let o = oracle(2, 2);
    let theta = kronecker_stability();
    assert_eq!(o.count_semistable(&theta, &dv(&[2, 1])).unwrap(), 6);
    assert_eq!(o.rep_count(&dv(&[2, 1])), 16);
    let case = kronecker_case(2);
    assert!(verify_pd_counts(&case.ctx, &o, &dv(&[2, 1])).unwrap().is_success());
}

#[test]
fn k1_hn_types_are_unique() {
    let o = oracle(1, 3);
    let theta = kronecker_stability();
    let quiver = kronecker(1);
    let zero = FFRep::new(&quiver, 3, dv(&[1, 1]), vec![vec![0]]).unwrap();
    assert_eq!(o.hn_type(&zero, &theta).unwrap(), vec![dv(&[0, 1]), dv(&[1, 0])]);
    let iso = FFRep::new(&quiver, 3, dv(&[1, 1]), vec![vec![2]]).unwrap();
    assert_eq!(o.hn_type(&iso, &theta).unwrap(), vec![dv(&[1, 1])]);
    assert_eq!(o.count_semistable(&theta, &dv(&[1, 1])).unwrap(), 2);
}

#[test]
fn hom0_counts_surjections_for_one_vertex() {
    let quiver = single_vertex();
    let o = Oracle::new(Arc::new(quiver.clone()), 3, Budget::default()).unwrap();
    let theta = Stability::trivial(1);
    let m = FFRep::new(&quiver, 3, dv(&[1]), vec![]).unwrap();
    assert_eq!(o.count_hom0(&m, &dv(&[1]), &theta).unwrap(), 2);
    assert_eq!(o.count_hom0(&m, &dv(&[2]), &theta).unwrap(), 8);
}

#[test]
fn hom0_rejects_unstable() {
    let quiver = kronecker(1);
    let o = oracle(1, 2);
    let zero = FFRep::new(&quiver, 2, dv(&[1, 1]), vec![vec![0]]).unwrap();
    assert!(matches!(
        o.count_hom0(&zero, &dv(&[1, 0]), &kronecker_stability()),
        Err(Error::NotSemistable)
    ));
}

#[test]
fn a3_counts_over_f2() {
    for case in a3_cases() {
        let o = Oracle::new(case.ctx.quiver_arc().clone(), 2, Budget::default()).unwrap();
        for d in dv(&[1, 2, 1]).sub_vectors().into_iter().filter(|d| !d.is_zero()) {
            let r = verify_pd_counts(&case.ctx, &o, &d).unwrap();
            assert!(r.is_success(), "{}: {r}", case.name);
        }
    }
}

#[test]
fn framed_counts_on_k2() {
    let case = kronecker_case(2);
    let o = oracle(2, 3);
    let r = verify_framed_counts(&case.ctx, &o, &Slope::new(1, 2), &dv(&[1, 1]), &dv(&[1, 1])).unwrap();
    assert!(r.is_success(), "{r}");
}

#[test]
fn budget_is_enforced() {
    let tight = Budget { reps: 10, subspaces: 10 };
    let o = Oracle::new(Arc::new(kronecker(2)), 2, tight).unwrap();
    let case = kronecker_case(2);
    assert!(matches!(
        verify_pd_counts(&case.ctx, &o, &dv(&[2, 2])),
        Err(Error::BudgetExceeded { .. })
    ));
    assert!(matches!(
        Oracle::new(Arc::new(kronecker(2)), 4, Budget::default()),
        Err(Error::UnsupportedField(_))
    ));
}
