use std::collections::{HashMap, VecDeque};

use crate::error::{Budget, Error, Result};

use super::alphabet::{Alphabet, Sym};
use super::bitset::BitSet;
use super::nfa::{Dfa, Nfa, State, Transducer, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

fn same_alphabet(a: &Alphabet, b: &Alphabet, what: &str) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch(format!("{what}: {a:?} vs {b:?}")))
    }
}

/// Subset construction over reachable subsets; the empty subset is the sink.
pub fn determinize(a: &Nfa, budget: usize) -> Result<Dfa> {
    let k = a.alphabet().len();
    let n = a.num_states();
    let mut budget = Budget::new(budget);
    let mut ids: HashMap<BitSet, State> = HashMap::new();
    let mut subsets: Vec<BitSet> = Vec::new();
    let mut intern = |s: BitSet, subsets: &mut Vec<BitSet>, budget: &mut Budget| -> Result<State> {
        if let Some(&id) = ids.get(&s) {
            return Ok(id);
        }
        budget.charge(1)?;
        let id = subsets.len() as State;
        ids.insert(s.clone(), id);
        subsets.push(s);
        Ok(id)
    };
    let start = intern(a.initial_set(), &mut subsets, &mut budget)?;
    let mut delta: Vec<State> = Vec::new();
    let mut moves: Vec<(Sym, State)> = Vec::new();
    let mut i = 0;
    while i < subsets.len() {
        moves.clear();
        for q in subsets[i].iter() {
            moves.extend_from_slice(a.out(q as State));
        }
        moves.sort_unstable();
        moves.dedup();
        let mut row = vec![State::MAX; k];
        let mut j = 0;
        while j < moves.len() {
            let sym = moves[j].0;
            let mut next = BitSet::new(n);
            while j < moves.len() && moves[j].0 == sym {
                next.insert(moves[j].1 as usize);
                j += 1;
            }
            row[sym as usize] = intern(next, &mut subsets, &mut budget)?;
        }
        if row.contains(&State::MAX) {
            let sink = intern(BitSet::new(n), &mut subsets, &mut budget)?;
            for r in row.iter_mut().filter(|r| **r == State::MAX) {
                *r = sink;
            }
        }
        delta.extend(row);
        i += 1;
    }
    let accepting = subsets
        .iter()
        .map(|s| s.iter().any(|q| a.is_accepting(q as State)))
        .collect();
    Ok(Dfa::from_table(a.alphabet(), start, delta, accepting))
}

pub fn complement(d: &Dfa) -> Dfa {
    let (delta, acc) = d.table();
    Dfa::from_table(
        d.alphabet(),
        d.start(),
        delta.to_vec(),
        acc.iter().map(|&x| !x).collect(),
    )
}

/// Product of two automata over reachable state pairs.
pub fn intersect(a: &Nfa, b: &Nfa) -> Result<Nfa> {
    same_alphabet(a.alphabet(), b.alphabet(), "intersect")?;
    let mut out = Nfa::new(a.alphabet());
    let mut ids: HashMap<(State, State), State> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut get = |p: State, q: State, out: &mut Nfa, queue: &mut VecDeque<(State, State)>| {
        *ids.entry((p, q)).or_insert_with(|| {
            let id = out.add_state();
            out.set_accepting(id, a.is_accepting(p) && b.is_accepting(q));
            queue.push_back((p, q));
            id
        })
    };
    for &p in a.initial() {
        for &q in b.initial() {
            let id = get(p, q, &mut out, &mut queue);
            out.set_initial(id);
        }
    }
    while let Some((p, q)) = queue.pop_front() {
        let src = get(p, q, &mut out, &mut queue);
        let (oa, ob) = (a.out(p), b.out(q));
        let (mut i, mut j) = (0, 0);
        while i < oa.len() && j < ob.len() {
            let (sa, sb) = (oa[i].0, ob[j].0);
            if sa < sb {
                i += 1;
            } else if sb < sa {
                j += 1;
            } else {
                let ie = i + oa[i..].partition_point(|x| x.0 == sa);
                let je = j + ob[j..].partition_point(|x| x.0 == sa);
                for &(_, p2) in &oa[i..ie] {
                    for &(_, q2) in &ob[j..je] {
                        let dst = get(p2, q2, &mut out, &mut queue);
                        out.add_transition(src, sa, dst);
                    }
                }
                i = ie;
                j = je;
            }
        }
    }
    if out.num_states() == 0 {
        return Ok(Nfa::empty(a.alphabet()));
    }
    Ok(out)
}

/// Disjoint union.
pub fn union(a: &Nfa, b: &Nfa) -> Result<Nfa> {
    same_alphabet(a.alphabet(), b.alphabet(), "union")?;
    let mut out = a.clone();
    let off = a.num_states() as State;
    for _ in 0..b.num_states() {
        out.add_state();
    }
    for q in 0..b.num_states() as State {
        out.set_accepting(q + off, b.is_accepting(q));
    }
    for &q in b.initial() {
        out.set_initial(q + off);
    }
    for (p, s, q) in b.transitions() {
        out.add_transition(p + off, s, q + off);
    }
    Ok(out)
}

/// Relational composition `R(t) ∘ R(u)` over reachable state pairs.
pub fn join(t: &Transducer, u: &Transducer) -> Result<Transducer> {
    same_alphabet(t.right(), u.left(), "join")?;
    let mut out = Transducer::new(t.left(), u.right());
    let mut ids: HashMap<(State, State), State> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut get = |p: State, q: State, out: &mut Transducer, queue: &mut VecDeque<(State, State)>| {
        *ids.entry((p, q)).or_insert_with(|| {
            let id = out.nfa_mut().add_state();
            out.nfa_mut()
                .set_accepting(id, t.nfa().is_accepting(p) && u.nfa().is_accepting(q));
            queue.push_back((p, q));
            id
        })
    };
    for &p in t.nfa().initial() {
        for &q in u.nfa().initial() {
            let id = get(p, q, &mut out, &mut queue);
            out.nfa_mut().set_initial(id);
        }
    }
    while let Some((p, q)) = queue.pop_front() {
        let src = get(p, q, &mut out, &mut queue);
        for &(s1, p2) in t.nfa().out(p) {
            let (a, g) = t.split(s1);
            for &(s2, q2) in u.out_left(q, g) {
                let (_, c) = u.split(s2);
                let dst = get(p2, q2, &mut out, &mut queue);
                out.add_transition(src, a, c, dst);
            }
        }
    }
    Ok(out)
}

/// The image `L(l) ∘ R(t)`.
pub fn post_image(l: &Nfa, t: &Transducer) -> Result<Nfa> {
    same_alphabet(l.alphabet(), t.left(), "post_image")?;
    let k = t.right().len() as Sym;
    let mut out = Nfa::new(t.right());
    let mut ids: HashMap<(State, State), State> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut get = |p: State, q: State, out: &mut Nfa, queue: &mut VecDeque<(State, State)>| {
        *ids.entry((p, q)).or_insert_with(|| {
            let id = out.add_state();
            out.set_accepting(id, l.is_accepting(p) && t.nfa().is_accepting(q));
            queue.push_back((p, q));
            id
        })
    };
    for &p in l.initial() {
        for &q in t.nfa().initial() {
            let id = get(p, q, &mut out, &mut queue);
            out.set_initial(id);
        }
    }
    while let Some((p, q)) = queue.pop_front() {
        let src = get(p, q, &mut out, &mut queue);
        for &(a, p2) in l.out(p) {
            for &(s, q2) in t.out_left(q, a) {
                let dst = get(p2, q2, &mut out, &mut queue);
                out.add_transition(src, s % k, dst);
            }
        }
    }
    if out.num_states() == 0 {
        return Ok(Nfa::empty(t.right()));
    }
    Ok(out)
}

/// The preimage `R(t) ∘ L(l)`, i.e. all `u` with some `⟨u,w⟩ ∈ R(t)` and `w ∈ L(l)`.
pub fn pre_image(t: &Transducer, l: &Nfa) -> Result<Nfa> {
    same_alphabet(t.right(), l.alphabet(), "pre_image")?;
    let mut out = Nfa::new(t.left());
    let mut ids: HashMap<(State, State), State> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut get = |p: State, q: State, out: &mut Nfa, queue: &mut VecDeque<(State, State)>| {
        *ids.entry((p, q)).or_insert_with(|| {
            let id = out.add_state();
            out.set_accepting(id, t.nfa().is_accepting(p) && l.is_accepting(q));
            queue.push_back((p, q));
            id
        })
    };
    for &p in t.nfa().initial() {
        for &q in l.initial() {
            let id = get(p, q, &mut out, &mut queue);
            out.set_initial(id);
        }
    }
    while let Some((p, q)) = queue.pop_front() {
        let src = get(p, q, &mut out, &mut queue);
        for &(s, p2) in t.nfa().out(p) {
            let (a, g) = t.split(s);
            for q2 in l.succ(q, g) {
                let dst = get(p2, q2, &mut out, &mut queue);
                out.add_transition(src, a, dst);
            }
        }
    }
    if out.num_states() == 0 {
        return Ok(Nfa::empty(t.left()));
    }
    Ok(out)
}

/// Keeps one component of every pair letter; the state space is unchanged.
pub fn project(t: &Transducer, side: Side) -> Nfa {
    let alphabet = match side {
        Side::Left => t.left(),
        Side::Right => t.right(),
    };
    let src = t.nfa();
    let mut out = Nfa::with_states(alphabet, src.num_states());
    for &q in src.initial() {
        out.set_initial(q);
    }
    for q in 0..src.num_states() as State {
        out.set_accepting(q, src.is_accepting(q));
    }
    for (p, s, q) in src.transitions() {
        let (a, b) = t.split(s);
        out.add_transition(p, if side == Side::Left { a } else { b }, q);
    }
    out
}

/// Swaps the components of every pair letter.
pub fn inverse(t: &Transducer) -> Transducer {
    let src = t.nfa();
    let mut out = Transducer::new(t.right(), t.left());
    for _ in 0..src.num_states() {
        out.nfa_mut().add_state();
    }
    for &q in src.initial() {
        out.nfa_mut().set_initial(q);
    }
    for q in 0..src.num_states() as State {
        out.nfa_mut().set_accepting(q, src.is_accepting(q));
    }
    for (p, s, q) in src.transitions() {
        let (a, b) = t.split(s);
        out.add_transition(p, b, a, q);
    }
    out
}

/// Shortest accepted word, ties broken lexicographically by symbol index.
///
/// The search runs layer by layer over groups of states that share the same
/// shortest word, so the first accepting state found carries the
/// lexicographically least shortest word.
pub fn is_empty_with_witness(a: &Nfa) -> Option<Word> {
    let n = a.num_states();
    let mut parent: Vec<Option<(State, Sym)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut group: Vec<State> = Vec::new();
    for &q in a.initial() {
        if !seen[q as usize] {
            seen[q as usize] = true;
            group.push(q);
        }
    }
    let rebuild = |mut q: State, parent: &[Option<(State, Sym)>]| {
        let mut w = Vec::new();
        while let Some((p, s)) = parent[q as usize] {
            w.push(s);
            q = p;
        }
        w.reverse();
        w
    };
    if group.iter().any(|&q| a.is_accepting(q)) {
        return Some(Vec::new());
    }
    let mut layer = vec![group];
    let mut moves: Vec<(Sym, State, State)> = Vec::new();
    while !layer.is_empty() {
        let mut next_layer = Vec::new();
        for group in &layer {
            moves.clear();
            for &p in group {
                moves.extend(a.out(p).iter().map(|&(s, q)| (s, p, q)));
            }
            moves.sort_by_key(|m| m.0);
            let mut i = 0;
            while i < moves.len() {
                let sym = moves[i].0;
                let mut fresh = Vec::new();
                while i < moves.len() && moves[i].0 == sym {
                    let (_, p, q) = moves[i];
                    if !seen[q as usize] {
                        seen[q as usize] = true;
                        parent[q as usize] = Some((p, sym));
                        fresh.push(q);
                    }
                    i += 1;
                }
                if let Some(&q) = fresh.iter().find(|&&q| a.is_accepting(q)) {
                    return Some(rebuild(q, &parent));
                }
                if !fresh.is_empty() {
                    next_layer.push(fresh);
                }
            }
        }
        layer = next_layer;
    }
    None
}

/// Language equality via the symmetric difference of the two determinized automata.
pub fn equivalent(a: &Nfa, b: &Nfa, budget: usize) -> Result<bool> {
    Ok(difference_witness(a, b, budget)?.is_none())
}

/// A shortest word accepted by exactly one of the two automata.
pub fn difference_witness(a: &Nfa, b: &Nfa, budget: usize) -> Result<Option<Word>> {
    same_alphabet(a.alphabet(), b.alphabet(), "equivalent")?;
    let da = determinize(a, budget)?;
    let db = determinize(b, budget)?;
    let mut seen: HashMap<(State, State), Option<(State, State, Sym)>> = HashMap::new();
    let mut queue = VecDeque::new();
    let start = (da.start(), db.start());
    seen.insert(start, None);
    queue.push_back(start);
    while let Some((p, q)) = queue.pop_front() {
        if da.is_accepting(p) != db.is_accepting(q) {
            let mut w = Vec::new();
            let mut cur = (p, q);
            while let Some(&Some((pp, pq, s))) = seen.get(&cur) {
                w.push(s);
                cur = (pp, pq);
            }
            w.reverse();
            return Ok(Some(w));
        }
        for s in a.alphabet().symbols() {
            let nxt = (da.next(p, s), db.next(q, s));
            if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(nxt) {
                e.insert(Some((p, q, s)));
                queue.push_back(nxt);
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    fn sigma() -> Alphabet {
        Alphabet::new(["t", "e", "f", "b"]).unwrap()
    }

    fn contains_factor(s: &Alphabet, factor: &str) -> Nfa {
        let f = s.parse_word(factor).unwrap();
        let mut a = Nfa::with_states(s, f.len() + 1);
        a.set_initial(0);
        a.set_accepting(f.len() as State, true);
        for x in s.symbols() {
            a.add_transition(0, x, 0);
            a.add_transition(f.len() as State, x, f.len() as State);
        }
        for (i, &x) in f.iter().enumerate() {
            a.add_transition(i as State, x, i as State + 1);
        }
        a
    }

    #[test]
    fn determinize_words_ending_in_a() {
        let s = Alphabet::new(["a", "b"]).unwrap();
        let mut n = Nfa::with_states(&s, 2);
        n.set_initial(0);
        n.set_accepting(1, true);
        n.add_transition(0, 0, 0);
        n.add_transition(0, 1, 0);
        n.add_transition(0, 0, 1);
        let d = determinize(&n, 100).unwrap();
        for len in 0..=4 {
            for w in all_words(2, len) {
                assert_eq!(d.accepts(&w), w.last() == Some(&0), "{w:?}");
            }
        }
    }

    #[test]
    fn determinize_respects_budget() {
        let s = Alphabet::new(["a", "b"]).unwrap();
        let n = Nfa::universal(&s);
        assert!(matches!(determinize(&n, 0), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn complement_of_tf_star() {
        let s = sigma();
        let mut n = Nfa::with_states(&s, 2);
        n.set_initial(0);
        n.set_accepting(0, true);
        n.add_transition(0, 0, 1);
        n.add_transition(1, 2, 0);
        let c = complement(&determinize(&n, 100).unwrap());
        assert!(!c.accepts(&s.parse_word("tf").unwrap()));
        assert!(c.accepts(&s.parse_word("ee").unwrap()));
    }

    #[test]
    fn intersect_factors() {
        let s = sigma();
        let both = intersect(&contains_factor(&s, "e"), &contains_factor(&s, "b")).unwrap();
        assert!(both.accepts(&s.parse_word("eb").unwrap()));
        assert!(both.accepts(&s.parse_word("be").unwrap()));
        assert!(!both.accepts(&s.parse_word("tt").unwrap()));
    }

    #[test]
    fn union_of_singletons() {
        let s = sigma();
        let tf = s.parse_word("tf").unwrap();
        let ee = s.parse_word("ee").unwrap();
        let u = union(&Nfa::word(&s, &tf), &Nfa::word(&s, &ee)).unwrap();
        for len in 0..=2 {
            for w in all_words(4, len) {
                assert_eq!(u.accepts(&w), w == tf || w == ee);
            }
        }
    }

    #[test]
    fn witness_for_factor() {
        let s = sigma();
        let w = is_empty_with_witness(&contains_factor(&s, "beb")).unwrap();
        assert_eq!(s.format_word(&w), "beb");
        assert_eq!(is_empty_with_witness(&Nfa::empty(&s)), None);
        assert_eq!(is_empty_with_witness(&Nfa::universal(&s)), Some(vec![]));
    }

    #[test]
    fn single_pair_relations_join() {
        let s = Alphabet::new(["a", "b", "c"]).unwrap();
        let single = |x: Sym, y: Sym| {
            let mut t = Transducer::new(&s, &s);
            t.nfa_mut().add_state();
            t.nfa_mut().add_state();
            t.nfa_mut().set_initial(0);
            t.nfa_mut().set_accepting(1, true);
            t.add_transition(0, x, y, 1);
            t
        };
        let j = join(&single(0, 1), &single(1, 2)).unwrap();
        assert!(j.accepts(&[0], &[2]));
        assert!(!j.accepts(&[0], &[1]));
        let inv = inverse(&single(0, 1));
        assert!(inv.accepts(&[1], &[0]));
        assert!(project(&single(0, 1), Side::Right).accepts(&[1]));
        assert!(!project(&single(0, 1), Side::Right).accepts(&[0]));
    }

    pub(crate) fn all_words(k: usize, len: usize) -> Vec<Word> {
        let mut out = vec![vec![]];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w| {
                    (0..k as Sym).map(move |a| {
                        let mut w2 = w.clone();
                        w2.push(a);
                        w2
                    })
                })
                .collect();
        }
        out
    }
}
