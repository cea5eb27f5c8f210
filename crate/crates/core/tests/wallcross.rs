mod common;

use quiver_dt::hn::series_real_root;
use quiver_dt::quiver::slope_classes;
use quiver_dt::wallcross::{
    certify_integral, check_slope_invariance, conjugation_series, poincare_stable, qbinomial_series,
    slope_conjugation, smooth_model_table,
};
use quiver_dt::{DimVector, Error, Functional, QLaurent, Slope};

use common::{kronecker_case, standard_cases};

fn dv(xs: &[u32]) -> DimVector {
    DimVector::new(xs.to_vec())
}

#[test]
fn negative_vertex_functionals_stay_integral() {
    for case in standard_cases() {
        let n = case.ctx.quiver().vertex_count();
        for (mu, _) in slope_classes(case.ctx.quiver(), case.ctx.theta(), 5) {
            for i in 0..n {
                let eta = Functional::coordinate(n, i).neg();
                let cs = slope_conjugation(&case.ctx, &mu, &eta, 5);
                assert!(cs.is_ok(), "{} slope {mu} vertex {i}: {:?}", case.name, cs.err());
            }
        }
    }
}

#[test]
fn products_of_slope_series_stay_integral() {
    let case = kronecker_case(2);
    let ctx = &case.ctx;
    let slopes: Vec<Slope> = ctx.slope_series(5).into_keys().collect();
    for a in &slopes {
        for b in &slopes {
            let prod = ctx.series_p_mu(a, 5).mul(&ctx.series_p_mu(b, 5)).unwrap();
            for eta in [Functional::new(vec![1, 0]), Functional::new(vec![-1, 2])] {
                let cs = conjugation_series(&prod, &eta).unwrap();
                assert!(certify_integral(cs).is_ok(), "{a} * {b}");
            }
        }
    }
}

#[test]
fn real_root_conjugation_is_a_qbinomial() {
    let case = kronecker_case(1);
    let quiver = case.ctx.quiver_arc();
    let root = dv(&[1, 1]);
    let eta = Functional::new(vec![2, 1]);
    let base = series_real_root(quiver, &root, 6).unwrap();
    let cs = conjugation_series(&base, &eta).unwrap();
    assert_eq!(cs.value(), &qbinomial_series(quiver, &root, &eta, 6));
    assert!(matches!(series_real_root(quiver, &dv(&[2, 2]), 6), Err(Error::NotRealRoot(_))));
}

#[test]
fn diagonal_slope_ignores_off_class_functionals() {
    let case = kronecker_case(2);
    let mu = Slope::new(1, 2);
    let eta = Functional::new(vec![1, 0]);
    let nu = Functional::new(vec![0, 1]);
    assert!(check_slope_invariance(&case.ctx, &mu, &eta, &nu, 6).unwrap());
    let off = Functional::new(vec![1, 1]);
    assert!(matches!(
        check_slope_invariance(&case.ctx, &mu, &eta, &off, 6),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn smooth_models_of_k3() {
    let case = kronecker_case(3);
    assert_eq!(
        poincare_stable(&case.ctx, &dv(&[1, 2])).unwrap(),
        QLaurent::from_pairs(&[(0, 1), (1, 1), (2, 1)])
    );
    let table = smooth_model_table(&case.ctx, &Slope::new(1, 2), &[dv(&[1, 0])], 4).unwrap();
    let row = table.get(&dv(&[1, 1]), &dv(&[1, 0])).unwrap();
    assert_eq!(row.poincare.at_one(), row.euler);
    assert!(matches!(poincare_stable(&case.ctx, &dv(&[2, 2])), Err(Error::NotCoprime { .. })));
}
