//! Property tests over words, tail windows, graph serialization and Dehn reduction.

mod common;

use common::*;
use gsc::boundary::{tail_equivalent, TailWindow};
use gsc::input::{graph_from_value, graph_to_value};
use gsc::word::{Letter, Word};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn word(generators: u16, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..generators, any::<bool>()), 0..=max_len)
        .prop_map(|ls| Word(ls.into_iter().map(|(g, inv)| Letter::new(g, inv)).collect()))
}

proptest! {
    #[test]
    fn inverse_is_an_involution(w in word(2, 20)) {
        prop_assert_eq!(w.inverse().inverse(), w.clone());
        prop_assert!(w.concat(&w.inverse()).free_reduce().is_empty());
    }

    #[test]
    fn free_reduction_is_idempotent(w in word(2, 20)) {
        let r = w.free_reduce();
        prop_assert!(r.is_freely_reduced());
        prop_assert_eq!(r.free_reduce(), r.clone());
        prop_assert_eq!(w.inverse().free_reduce(), r.inverse());
    }

    #[test]
    fn tail_equivalence_is_reflexive_and_symmetric(
        u in word(2, 14), v in word(2, 14), cut in 0usize..6, overlap in 1usize..5,
    ) {
        let window = TailWindow::new(cut, overlap).unwrap();
        if u.len().min(v.len()) < overlap {
            prop_assert!(tail_equivalent(&u, &v, window).is_err());
        } else {
            prop_assert!(tail_equivalent(&u, &u, window).unwrap());
            prop_assert_eq!(tail_equivalent(&u, &v, window).unwrap(), tail_equivalent(&v, &u, window).unwrap());
        }
    }

    #[test]
    fn graph_serialization_round_trips(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Some(g) = random_folded_graph(&mut rng, 8) {
            let value = graph_to_value(&g);
            let back = graph_from_value(&value).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(graph_to_value(&back), value);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dehn_reduction_never_lengthens(w in word(2, 40), name in prop::sample::select(&["classical", "theta", "multi"][..])) {
        let group = load_corpus(name).group().unwrap();
        let reduced = group.dehn_reduce(&w);
        prop_assert!(reduced.len() <= w.free_reduce().len());
        prop_assert!(reduced.is_freely_reduced());
        prop_assert!(group.equal(&w, &reduced));
        prop_assert_eq!(group.dehn_reduce(&reduced), reduced);
    }
}
