use proptest::prelude::*;
use tvk_core::expansion::shuffle_relation_at_one;
use tvk_core::numerics::dirichlet_beta;
use tvk_core::{ttilde, Evaluator, Index, PrecisionPolicy};

fn admissible(max_weight: u32) -> Vec<Index> {
    (2..=max_weight)
        .flat_map(Index::all_of_weight)
        .filter(Index::is_admissible)
        .collect()
}

#[test]
fn depth_one_matches_beta() {
    let p = PrecisionPolicy::with_digits(30);
    for k in 1..=12 {
        let t = ttilde(&Index::from_slice(&[k]), &p).unwrap();
        let b = dirichlet_beta(k, &p).unwrap().mul_pow2(1);
        let d = t.sub(&b);
        assert!(d.to_f64().abs() < 1e-30, "k={k}: {:e}", d.to_f64());
    }
}

#[test]
fn truncation_robustness_up_to_weight_8() {
    let p = PrecisionPolicy::with_digits(25);
    let q = PrecisionPolicy {
        max_outer_terms: 2 * p.max_outer_terms,
        acceleration_order: Some(120),
        ..p.clone()
    };
    for k in admissible(8) {
        let a = ttilde(&k, &p).unwrap();
        let b = ttilde(&k, &q).unwrap();
        let d = a.sub(&b).to_f64().abs();
        assert!(d <= a.error().max(b.error()) + 1e-25, "({k}): {d:e} vs {:e}", a.error());
    }
}

#[test]
fn more_digits_keep_earlier_digits() {
    let p = PrecisionPolicy::with_digits(20);
    let q = PrecisionPolicy::with_digits(30);
    for k in ["2", "1,2", "2,3", "1,1,3"] {
        let k: Index = k.parse().unwrap();
        let a = ttilde(&k, &p).unwrap();
        let b = ttilde(&k, &q).unwrap();
        assert!(a.sub(&b).to_f64().abs() < 1e-20, "({k})");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn shuffle_identities_vanish(a in 0usize..15, b in 0usize..15) {
        let ks = admissible(5);
        let (u, v) = (&ks[a % ks.len()], &ks[b % ks.len()]);
        let id = shuffle_relation_at_one(u, v).unwrap();
        let e = Evaluator::new(PrecisionPolicy::with_digits(25));
        let d = e.eval_combination(&id.difference(), None).unwrap();
        prop_assert!(d.abs_f64() < 1e-22 && d.error() < 1e-22, "({u}) ⧢ ({v}): {:e}", d.abs_f64());
    }
}
