use num_complex::Complex64;
use tvk_core::expansion::one_two_index;
use tvk_core::oracle::{
    a_level2, apoly_at_one, apoly_on_path, expansion_at, lambda_curve_point, lambda_quadrature,
    OracleSettings, PathSpec,
};
use tvk_core::{expand_a, lambda_expansion, ttilde, Evaluator, Index, PrecisionPolicy};

fn i_pow(e: i64) -> Complex64 {
    Complex64::new(0.0, 1.0).powi(e.rem_euclid(4) as i32)
}

#[test]
fn agrees_with_series_at_one_up_to_weight_6() {
    let p = PrecisionPolicy::with_digits(20);
    let s = OracleSettings::default();
    for w in 2..=6 {
        for k in Index::all_of_weight(w).into_iter().filter(Index::is_admissible) {
            let o = apoly_at_one(&k, &s).unwrap();
            let t = ttilde(&k.dual().unwrap(), &p).unwrap().to_f64();
            let expect = i_pow(k.depth() as i64 - w as i64) * t;
            assert!((o.value - expect).norm() < 1e-10, "({k}): {} vs {expect}", o.value);
            assert!(o.error < 1e-10, "({k}): {:e}", o.error);
        }
    }
}

#[test]
fn path_independence() {
    for t in [0.5, 2.0, 5.0] {
        let end = lambda_curve_point(t);
        for k in ["2", "1,2", "2,1"] {
            let k: Index = k.parse().unwrap();
            let a = apoly_on_path(&k, PathSpec::LambdaCurve { t_end: t }).unwrap();
            let b = apoly_on_path(&k, PathSpec::Arc { theta_end: end.arg() }).unwrap();
            let c = apoly_on_path(&k, PathSpec::Segment { end }).unwrap();
            assert!((a.value - b.value).norm() < 1e-10, "({k}) t={t}");
            assert!((a.value - c.value).norm() < 1e-10, "({k}) t={t}");
        }
    }
}

#[test]
fn pointwise_expansion_matches_path() {
    let e = Evaluator::new(PrecisionPolicy::with_digits(20));
    let s = OracleSettings::default();
    let constant = |k: &Index| e.ttilde(k).unwrap().to_f64();
    for k in ["2", "3", "2,1", "1,2", "2,2", "1,1,2"] {
        let k: Index = k.parse().unwrap();
        let terms = expand_a(&k).unwrap();
        for t in [0.7, 1.5, 3.0] {
            let lhs = apoly_on_path(&k, PathSpec::LambdaCurve { t_end: t }).unwrap();
            let rhs = expansion_at(&terms, t, &constant, &s).unwrap();
            assert!((lhs.value - rhs.value).norm() < 1e-10, "({k}) t={t}: {} vs {}", lhs.value, rhs.value);
        }
    }
}

#[test]
fn level_two_limits() {
    let s = OracleSettings::default();
    assert_eq!(a_level2(&Index::empty(), 1.0, &s).unwrap().value, Complex64::new(1.0, 0.0));
    // A(2; i e^-t) → i T̃(2) as t → 0
    let v = a_level2(&Index::from_slice(&[2]), 1e-4, &s).unwrap();
    let g2 = 2.0 * 0.915_965_594_177_219;
    assert!((v.value - Complex64::new(0.0, g2)).norm() < 1e-3);
}

#[test]
fn quadrature_matches_expansion_up_to_weight_5() {
    let e = Evaluator::new(PrecisionPolicy::with_digits(20));
    let set = OracleSettings::default();
    let mut ks: Vec<Index> = (1..=5).flat_map(Index::all_of_weight).collect();
    ks.push(one_two_index(2, 1));
    for k in ks {
        let f = lambda_expansion(&k).unwrap();
        for s in [2u32, 3] {
            let q = lambda_quadrature(&k, s, &set).unwrap();
            let (re, im) = e.eval_combination(&f, Some(s as i64)).unwrap().to_f64_pair();
            let d = (q.value - Complex64::new(re, im)).norm();
            assert!(d < 1e-8, "λ({k}; {s}): {} vs {re}+{im}i", q.value);
        }
    }
}
