use num_traits::Zero;
use proptest::prelude::*;
use tvk_core::combination::FormalCombination;
use tvk_core::expansion::{coefficient_mass, i_power_consistent};
use tvk_core::{expand_a, lambda_expansion, Index};

fn idx(s: &str) -> Index {
    s.parse().unwrap()
}

#[test]
fn i_power_invariant_up_to_weight_8() {
    let mut terms = 0;
    for w in 1..=8 {
        for k in Index::all_of_weight(w) {
            let t = expand_a(&k).unwrap();
            assert!(!t.is_empty(), "({k})");
            assert!(i_power_consistent(&k, &t), "({k})");
            assert!(!coefficient_mass(&t).is_zero());
            terms += t.len();
        }
    }
    // Regression bound on total expansion size.
    assert!(terms < 200_000, "{terms}");
}

#[test]
fn lambda_expansion_is_weight_graded() {
    for w in 1..=7 {
        for k in Index::all_of_weight(w) {
            let f = lambda_expansion(&k).unwrap();
            assert_eq!(f.weights(), vec![w as i64], "({k})");
        }
    }
}

#[test]
fn expansion_of_two() {
    let shown: Vec<String> = expand_a(&idx("2")).unwrap().iter().map(|t| t.to_string()).collect();
    assert_eq!(shown.len(), 3);
    assert!(shown.contains(&"1·𝒜({1}_1; (1+z)/(1-z))·A(1; z)".to_string()));
    assert!(shown.contains(&"1·A(2; z)".to_string()));
    assert!(shown.contains(&"-1·i^1·T̃(2)".to_string()));
}

#[test]
fn depth_one_lambda() {
    // λ(1; s) = s T̃(s+1)
    let f = lambda_expansion(&idx("1")).unwrap();
    assert_eq!(f, FormalCombination::parse("s T(s+1)").unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_round_trip(entries in prop::collection::vec(1u32..4, 1..4)) {
        let k = Index::new(entries).unwrap();
        let f = lambda_expansion(&k).unwrap();
        let j = f.to_json();
        prop_assert_eq!(FormalCombination::from_json(&j).unwrap(), f.clone());
        prop_assert_eq!(FormalCombination::parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn evaluation_commutes_with_shift(entries in prop::collection::vec(1u32..4, 1..4), s in 2i64..6, d in 0i64..3) {
        let f = lambda_expansion(&Index::new(entries).unwrap()).unwrap();
        prop_assert_eq!(f.shift_s(d).at(s).unwrap(), f.at(s + d).unwrap());
    }
}
