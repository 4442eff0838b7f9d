use proptest::prelude::*;
use tvk_core::{Index, IndexCombination, Word};

fn binom(n: u64, k: u64) -> i64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1)) as i64
}

fn upto(w: u32) -> impl Iterator<Item = Index> {
    (1..=w).flat_map(Index::all_of_weight)
}

fn index_strategy(max_weight: u32) -> impl Strategy<Value = Index> {
    (1..=max_weight).prop_flat_map(|w| {
        let all = Index::all_of_weight(w);
        (0..all.len()).prop_map(move |i| all[i].clone())
    })
}

#[test]
fn dual_is_an_involution_up_to_weight_10() {
    let mut n = 0;
    for k in upto(10).filter(Index::is_admissible) {
        let d = k.dual().unwrap();
        assert!(d.is_admissible(), "({k})† = ({d})");
        assert_eq!(d.dual().unwrap(), k);
        assert_eq!(d.weight(), k.weight());
        assert_eq!(k.depth() + d.depth(), k.weight() as usize);
        n += 1;
    }
    assert_eq!(n, (1..=9).map(|w| 1usize << (w - 1)).sum::<usize>());
}

#[test]
fn word_round_trip_up_to_weight_10() {
    for k in upto(10) {
        let w = k.to_word();
        assert_eq!(w.len(), k.weight() as usize);
        assert_eq!(Index::from_word(&w).unwrap(), k);
        assert_eq!(w.to_string().parse::<Word>().unwrap(), w);
        assert_eq!(k.to_string().parse::<Index>().unwrap(), k);
    }
}

#[test]
fn insertion_slots_up_to_weight_8() {
    for k in upto(8) {
        let mut c = k.b_insertion_product().unwrap();
        c.add_term(k.push(1), 1);
        assert_eq!(c.mass(), k.weight() as i64 + 1, "({k})");
        assert!(c.iter().all(|(x, _)| x.weight() == k.weight() + 1));
    }
}

proptest! {
    #[test]
    fn shuffle_mass(u in index_strategy(6), v in index_strategy(6)) {
        let s = IndexCombination::shuffle(&u, &v);
        let (a, b) = (u.weight() as u64, v.weight() as u64);
        prop_assert_eq!(s.mass(), binom(a + b, a));
        prop_assert!(s.iter().all(|(w, c)| c > 0 && w.weight() as u64 == a + b));
        prop_assert_eq!(s, IndexCombination::shuffle(&v, &u));
    }

    #[test]
    fn parse_display_round_trip(k in index_strategy(12)) {
        let text = k.to_string();
        prop_assert_eq!(text.parse::<Index>().unwrap(), k.clone());
        prop_assert_eq!(format!("({text})").parse::<Index>().unwrap(), k);
    }

    #[test]
    fn slices_partition(k in index_strategy(10), j in 0usize..6) {
        prop_assume!(j <= k.depth());
        let head = k.head(j).unwrap();
        let back = k.tail_rev(k.depth() - j).unwrap();
        prop_assert_eq!(head.concat(&back.reversed()), k);
    }
}
