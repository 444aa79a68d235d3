//! Powerword semantics against the satisfaction interpreter.

use proptest::prelude::*;
use rmc::automata::{Alphabet, Sym, SymSet, Word};
use rmc::bforms::{build_vb, letter, row, satisfies, PowerWord};

fn sigma(k: usize) -> Alphabet {
    Alphabet::new((0..k).map(|i| format!("s{i}"))).unwrap()
}

fn words_of(k: usize, len: usize) -> Vec<Word> {
    (0..k.pow(len as u32))
        .map(|mut i| {
            let mut w = vec![0; len];
            for slot in w.iter_mut().rev() {
                *slot = (i % k) as Sym;
                i /= k;
            }
            w
        })
        .collect()
}

/// Alphabet size, clause count and raw powerletters of one formula.
fn formula(max_b: usize) -> impl Strategy<Value = (usize, usize, Vec<u32>)> {
    (1usize..=4, 1usize..=max_b, 0usize..=4)
        .prop_flat_map(|(k, b, len)| (Just(k), Just(b), prop::collection::vec(0u32..(1 << (k * b)), len)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn union_of_one_clause_formulas((k, _, x) in formula(1), seed in prop::collection::vec(0u32..16, 4)) {
        let s = sigma(k);
        let y: Vec<u32> = seed[..x.len()].iter().map(|v| v & ((1 << k) - 1)).collect();
        let (phi, psi) = (PowerWord::new(&s, 1, x), PowerWord::new(&s, 1, y));
        let joined = phi.union(&psi);
        for w in words_of(k, phi.len()) {
            prop_assert_eq!(joined.satisfies(&w).unwrap(), phi.satisfies(&w).unwrap() || psi.satisfies(&w).unwrap());
        }
    }

    #[test]
    fn interpreter_agrees_with_satisfaction((k, b, letters) in formula(3)) {
        let s = sigma(k);
        let v = build_vb(&s, b).unwrap();
        let phi = PowerWord::new(&s, b, letters.clone());
        let rep: Vec<Sym> = letters;
        for w in words_of(k, phi.len()) {
            prop_assert_eq!(v.accepts(&w, &rep), satisfies(&w, &phi).unwrap());
        }
    }

    #[test]
    fn tautological_clause_changes_nothing((k, b, letters) in formula(2)) {
        let s = sigma(k);
        let phi = PowerWord::new(&s, b, letters);
        let full = vec![SymSet::full(k); phi.len()];
        let padded = phi.with_clause(&full);
        prop_assert_eq!(padded.b(), b + 1);
        for w in words_of(k, phi.len()) {
            prop_assert_eq!(padded.satisfies(&w).unwrap(), phi.satisfies(&w).unwrap());
        }
    }

    #[test]
    fn powerletter_rows_roundtrip(k in 1usize..=5, rows in prop::collection::vec(0u32..32, 1..=3)) {
        let rows: Vec<SymSet> = rows.into_iter().map(|r| SymSet(r & ((1 << k) - 1))).collect();
        let l = letter(&rows, k);
        prop_assert!(l < 1 << (k * rows.len()));
        for (i, r) in rows.iter().enumerate() {
            prop_assert_eq!(row(l, k, i), *r);
        }
    }
}
