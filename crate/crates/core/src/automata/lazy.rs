//! Automata whose states are generated on demand.

use std::cell::RefCell;
use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Budget, Error, Result};

use super::alphabet::{Alphabet, Sym};
use super::nfa::{Dfa, Nfa, State, Word};

pub trait LazyNfa {
    type State: Clone + Eq + Hash + Ord;

    fn alphabet(&self) -> &Alphabet;
    fn initial(&self) -> Vec<Self::State>;
    fn is_accepting(&self, q: &Self::State) -> bool;
    /// Appends all outgoing moves of `q`; order is irrelevant.
    fn successors(&self, q: &Self::State, out: &mut Vec<(Sym, Self::State)>);

    /// Appends the successors of `q` on one letter.
    fn successors_on(&self, q: &Self::State, a: Sym, out: &mut Vec<Self::State>) {
        let mut all = Vec::new();
        self.successors(q, &mut all);
        out.extend(all.into_iter().filter(|m| m.0 == a).map(|m| m.1));
    }

    /// Drops states of a sorted, deduplicated subset whose language is
    /// covered by the rest. Subset constructions call this on every subset.
    fn reduce(&self, _set: &mut Vec<Self::State>) {}
}

impl LazyNfa for Nfa {
    type State = State;

    fn alphabet(&self) -> &Alphabet {
        Nfa::alphabet(self)
    }

    fn initial(&self) -> Vec<State> {
        Nfa::initial(self).to_vec()
    }

    fn is_accepting(&self, q: &State) -> bool {
        Nfa::is_accepting(self, *q)
    }

    fn successors(&self, q: &State, out: &mut Vec<(Sym, State)>) {
        out.extend_from_slice(self.out(*q));
    }

    fn successors_on(&self, q: &State, a: Sym, out: &mut Vec<State>) {
        out.extend(self.succ(*q, a));
    }
}

impl<L: LazyNfa> LazyNfa for &L {
    type State = L::State;

    fn alphabet(&self) -> &Alphabet {
        (*self).alphabet()
    }

    fn initial(&self) -> Vec<L::State> {
        (*self).initial()
    }

    fn is_accepting(&self, q: &L::State) -> bool {
        (*self).is_accepting(q)
    }

    fn successors(&self, q: &L::State, out: &mut Vec<(Sym, L::State)>) {
        (*self).successors(q, out)
    }

    fn successors_on(&self, q: &L::State, a: Sym, out: &mut Vec<L::State>) {
        (*self).successors_on(q, a, out)
    }

    fn reduce(&self, set: &mut Vec<L::State>) {
        (*self).reduce(set)
    }
}

/// The words of length at most `max` of a lazy automaton, tracked by depth.
///
/// Subset constructions over it stay exact on those lengths while never
/// exploring longer prefixes.
pub struct Bounded<L> {
    pub inner: L,
    pub max: usize,
}

impl<L: LazyNfa> LazyNfa for Bounded<L> {
    type State = (usize, L::State);

    fn alphabet(&self) -> &Alphabet {
        self.inner.alphabet()
    }

    fn initial(&self) -> Vec<Self::State> {
        self.inner.initial().into_iter().map(|q| (0, q)).collect()
    }

    fn is_accepting(&self, q: &Self::State) -> bool {
        self.inner.is_accepting(&q.1)
    }

    fn successors(&self, q: &Self::State, out: &mut Vec<(Sym, Self::State)>) {
        if q.0 < self.max {
            let mut buf = Vec::new();
            self.inner.successors(&q.1, &mut buf);
            out.extend(buf.into_iter().map(|(a, p)| (a, (q.0 + 1, p))));
        }
    }

    fn successors_on(&self, q: &Self::State, a: Sym, out: &mut Vec<Self::State>) {
        if q.0 < self.max {
            let mut buf = Vec::new();
            self.inner.successors_on(&q.1, a, &mut buf);
            out.extend(buf.into_iter().map(|p| (q.0 + 1, p)));
        }
    }

    /// Subsets built by a determinizer share one depth.
    fn reduce(&self, set: &mut Vec<Self::State>) {
        let Some(&(depth, _)) = set.first() else {
            return;
        };
        debug_assert!(set.iter().all(|q| q.0 == depth));
        let mut inner: Vec<L::State> = set.drain(..).map(|q| q.1).collect();
        self.inner.reduce(&mut inner);
        set.extend(inner.into_iter().map(|q| (depth, q)));
    }
}

/// Synchronous product of two lazy automata over the same alphabet.
pub struct Product<A, B> {
    pub left: A,
    pub right: B,
}

impl<A: LazyNfa, B: LazyNfa> LazyNfa for Product<A, B> {
    type State = (A::State, B::State);

    fn alphabet(&self) -> &Alphabet {
        self.left.alphabet()
    }

    fn initial(&self) -> Vec<Self::State> {
        let rs = self.right.initial();
        let mut out = Vec::new();
        for l in self.left.initial() {
            for r in &rs {
                out.push((l.clone(), r.clone()));
            }
        }
        out
    }

    fn is_accepting(&self, q: &Self::State) -> bool {
        self.left.is_accepting(&q.0) && self.right.is_accepting(&q.1)
    }

    fn successors(&self, q: &Self::State, out: &mut Vec<(Sym, Self::State)>) {
        let mut ls = Vec::new();
        self.left.successors(&q.0, &mut ls);
        if ls.is_empty() {
            return;
        }
        let mut rs = Vec::new();
        self.right.successors(&q.1, &mut rs);
        ls.sort_unstable_by_key(|m| m.0);
        rs.sort_unstable_by_key(|m| m.0);
        let (mut i, mut j) = (0, 0);
        while i < ls.len() && j < rs.len() {
            let (a, b) = (ls[i].0, rs[j].0);
            if a < b {
                i += 1;
            } else if b < a {
                j += 1;
            } else {
                let j_end = j + rs[j..].partition_point(|m| m.0 == a);
                while i < ls.len() && ls[i].0 == a {
                    for r in &rs[j..j_end] {
                        out.push((a, (ls[i].1.clone(), r.1.clone())));
                    }
                    i += 1;
                }
                j = j_end;
            }
        }
    }
}

/// Product driven by the left automaton's letters: the right automaton is only
/// asked for successors on those letters. Useful when the right alphabet is huge.
pub struct Guided<A, B> {
    pub left: A,
    pub right: B,
}

impl<A: LazyNfa, B: LazyNfa> LazyNfa for Guided<A, B> {
    type State = (A::State, B::State);

    fn alphabet(&self) -> &Alphabet {
        self.left.alphabet()
    }

    fn initial(&self) -> Vec<Self::State> {
        let rs = self.right.initial();
        let mut out = Vec::new();
        for l in self.left.initial() {
            for r in &rs {
                out.push((l.clone(), r.clone()));
            }
        }
        out
    }

    fn is_accepting(&self, q: &Self::State) -> bool {
        self.left.is_accepting(&q.0) && self.right.is_accepting(&q.1)
    }

    fn successors(&self, q: &Self::State, out: &mut Vec<(Sym, Self::State)>) {
        let mut ls = Vec::new();
        self.left.successors(&q.0, &mut ls);
        ls.sort_unstable_by_key(|m| m.0);
        let mut rs = Vec::new();
        let mut i = 0;
        while i < ls.len() {
            let a = ls[i].0;
            rs.clear();
            self.right.successors_on(&q.1, a, &mut rs);
            while i < ls.len() && ls[i].0 == a {
                for r in &rs {
                    out.push((a, (ls[i].1.clone(), r.clone())));
                }
                i += 1;
            }
        }
    }

    fn successors_on(&self, q: &Self::State, a: Sym, out: &mut Vec<Self::State>) {
        let mut ls = Vec::new();
        self.left.successors_on(&q.0, a, &mut ls);
        if ls.is_empty() {
            return;
        }
        let mut rs = Vec::new();
        self.right.successors_on(&q.1, a, &mut rs);
        for l in &ls {
            for r in &rs {
                out.push((l.clone(), r.clone()));
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Search {
    pub witness: Option<Word>,
    pub explored: usize,
}

/// Shortest accepted word with lexicographic tie-breaking, exploring at most `budget` states.
pub fn shortest_witness<L: LazyNfa>(a: &L, budget: usize) -> Result<Search> {
    let mut budget = Budget::new(budget);
    let mut index: HashMap<L::State, usize> = HashMap::new();
    let mut parent: Vec<Option<(usize, Sym)>> = Vec::new();
    let mut group = Vec::new();
    let mut inits = a.initial();
    inits.sort();
    inits.dedup();
    for q in inits {
        budget.charge(1)?;
        index.insert(q.clone(), parent.len());
        parent.push(None);
        group.push(q);
    }
    let rebuild = |mut i: usize, parent: &[Option<(usize, Sym)>]| {
        let mut w = Vec::new();
        while let Some((p, s)) = parent[i] {
            w.push(s);
            i = p;
        }
        w.reverse();
        w
    };
    if group.iter().any(|q| a.is_accepting(q)) {
        return Ok(Search {
            witness: Some(Vec::new()),
            explored: budget.used(),
        });
    }
    let mut layer = vec![group];
    let mut buf = Vec::new();
    let mut moves: Vec<(Sym, usize, L::State)> = Vec::new();
    while !layer.is_empty() {
        let mut next_layer = Vec::new();
        for group in &layer {
            moves.clear();
            for p in group {
                let pi = index[p];
                buf.clear();
                a.successors(p, &mut buf);
                moves.extend(buf.drain(..).map(|(s, q)| (s, pi, q)));
            }
            moves.sort_by_key(|m| m.0);
            let mut i = 0;
            while i < moves.len() {
                let sym = moves[i].0;
                let mut fresh = Vec::new();
                while i < moves.len() && moves[i].0 == sym {
                    let (_, pi, ref q) = moves[i];
                    if !index.contains_key(q) {
                        budget.charge(1)?;
                        let qi = parent.len();
                        index.insert(q.clone(), qi);
                        parent.push(Some((pi, sym)));
                        if a.is_accepting(q) {
                            return Ok(Search {
                                witness: Some(rebuild(qi, &parent)),
                                explored: budget.used(),
                            });
                        }
                        fresh.push(q.clone());
                    }
                    i += 1;
                }
                if !fresh.is_empty() {
                    next_layer.push(fresh);
                }
            }
        }
        layer = next_layer;
    }
    Ok(Search {
        witness: None,
        explored: budget.used(),
    })
}

/// Explores the reachable part of a lazy automaton into an explicit NFA.
pub fn materialize<L: LazyNfa>(a: &L, budget: usize) -> Result<Nfa> {
    let mut budget = Budget::new(budget);
    let mut index: HashMap<L::State, State> = HashMap::new();
    let mut states: Vec<L::State> = Vec::new();
    let mut out = Nfa::new(a.alphabet());
    let mut intern = |q: L::State, out: &mut Nfa, states: &mut Vec<L::State>, budget: &mut Budget| -> Result<State> {
        if let Some(&i) = index.get(&q) {
            return Ok(i);
        }
        budget.charge(1)?;
        let i = out.add_state();
        out.set_accepting(i, a.is_accepting(&q));
        index.insert(q.clone(), i);
        states.push(q);
        Ok(i)
    };
    for q in a.initial() {
        let i = intern(q, &mut out, &mut states, &mut budget)?;
        out.set_initial(i);
    }
    let mut buf = Vec::new();
    let mut i = 0;
    while i < states.len() {
        buf.clear();
        a.successors(&states[i], &mut buf);
        for (s, q) in buf.drain(..) {
            let j = intern(q, &mut out, &mut states, &mut budget)?;
            out.add_transition(i as State, s, j);
        }
        i += 1;
    }
    Ok(out)
}

/// On-the-fly subset construction over a lazy automaton.
pub struct Determinizer<L: LazyNfa> {
    nfa: L,
    ids: HashMap<Vec<L::State>, State>,
    sets: Vec<Vec<L::State>>,
    rows: Vec<Option<Box<[State]>>>,
    accepting: Vec<bool>,
    budget: Budget,
}

impl<L: LazyNfa> Determinizer<L> {
    pub fn new(nfa: L, budget: usize) -> Self {
        Determinizer {
            nfa,
            ids: HashMap::new(),
            sets: Vec::new(),
            rows: Vec::new(),
            accepting: Vec::new(),
            budget: Budget::new(budget),
        }
    }

    pub fn inner(&self) -> &L {
        &self.nfa
    }

    pub fn num_states(&self) -> usize {
        self.sets.len()
    }

    fn intern(&mut self, mut set: Vec<L::State>) -> Result<State> {
        set.sort();
        set.dedup();
        self.nfa.reduce(&mut set);
        if let Some(&id) = self.ids.get(&set) {
            return Ok(id);
        }
        self.budget.charge(1)?;
        let id = self.sets.len() as State;
        self.accepting.push(set.iter().any(|q| self.nfa.is_accepting(q)));
        self.ids.insert(set.clone(), id);
        self.sets.push(set);
        self.rows.push(None);
        Ok(id)
    }

    pub fn start(&mut self) -> Result<State> {
        let init = self.nfa.initial();
        self.intern(init)
    }

    pub fn is_accepting(&self, id: State) -> bool {
        self.accepting[id as usize]
    }

    /// The subset of lazy states behind a determinized state.
    pub fn subset(&self, id: State) -> &[L::State] {
        &self.sets[id as usize]
    }

    pub fn next(&mut self, id: State, a: Sym) -> Result<State> {
        if self.rows[id as usize].is_none() {
            self.expand(id)?;
        }
        Ok(self.rows[id as usize].as_ref().unwrap()[a as usize])
    }

    fn expand(&mut self, id: State) -> Result<()> {
        let k = self.nfa.alphabet().len();
        let mut moves = Vec::new();
        for q in &self.sets[id as usize] {
            self.nfa.successors(q, &mut moves);
        }
        moves.sort_unstable_by_key(|x| x.0);
        let mut buckets: Vec<Vec<L::State>> = vec![Vec::new(); k];
        for (s, q) in moves {
            buckets[s as usize].push(q);
        }
        let mut row = Vec::with_capacity(k);
        for b in buckets {
            row.push(self.intern(b)?);
        }
        self.rows[id as usize] = Some(row.into_boxed_slice());
        Ok(())
    }

    /// Explores all reachable subsets and returns the complete DFA.
    pub fn into_dfa(mut self) -> Result<Dfa> {
        let start = self.start()?;
        let k = self.nfa.alphabet().len();
        let mut i = 0;
        while i < self.sets.len() {
            if self.rows[i].is_none() {
                self.expand(i as State)?;
            }
            i += 1;
        }
        let mut delta = Vec::with_capacity(self.sets.len() * k);
        for row in &self.rows {
            delta.extend_from_slice(row.as_ref().unwrap());
        }
        Ok(Dfa::from_table(self.nfa.alphabet(), start, delta, self.accepting))
    }

    /// Lexicographically ordered accepted words of length `len`.
    pub fn words_of_length(&mut self, len: usize, limit: usize) -> Result<Vec<Word>> {
        let start = self.start()?;
        let mut live: HashMap<(State, usize), bool> = HashMap::new();
        let mut out = Vec::new();
        let mut word = Vec::with_capacity(len);
        self.collect(start, len, &mut live, &mut word, &mut out, limit)?;
        Ok(out)
    }

    fn collect(
        &mut self,
        id: State,
        rest: usize,
        live: &mut HashMap<(State, usize), bool>,
        word: &mut Word,
        out: &mut Vec<Word>,
        limit: usize,
    ) -> Result<bool> {
        if let Some(&false) = live.get(&(id, rest)) {
            return Ok(false);
        }
        let found = if rest == 0 {
            if self.is_accepting(id) {
                out.push(word.clone());
                if out.len() > limit {
                    return Err(crate::error::Error::BudgetExceeded {
                        limit,
                        explored: out.len(),
                    });
                }
                true
            } else {
                false
            }
        } else if self.sets[id as usize].is_empty() {
            false
        } else {
            let mut any = false;
            for a in 0..self.nfa.alphabet().len() as Sym {
                let nxt = self.next(id, a)?;
                word.push(a);
                any |= self.collect(nxt, rest - 1, live, word, out, limit)?;
                word.pop();
            }
            any
        };
        live.insert((id, rest), found);
        Ok(found)
    }
}

/// A determinizer usable behind shared references, as needed when it drives
/// the successor function of another lazy automaton.
///
/// The first error (normally an exhausted budget) is recorded and further
/// steps yield nothing; callers must consult [`SharedDeterminizer::check`].
pub struct SharedDeterminizer<L: LazyNfa> {
    det: RefCell<Determinizer<L>>,
    error: RefCell<Option<Error>>,
}

impl<L: LazyNfa> SharedDeterminizer<L> {
    pub fn new(nfa: L, budget: usize) -> Self {
        SharedDeterminizer {
            det: RefCell::new(Determinizer::new(nfa, budget)),
            error: RefCell::new(None),
        }
    }

    fn record<T>(&self, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.error.borrow_mut().get_or_insert(e);
                None
            }
        }
    }

    pub fn start(&self) -> Option<State> {
        if self.error.borrow().is_some() {
            return None;
        }
        let r = self.det.borrow_mut().start();
        self.record(r)
    }

    pub fn next(&self, id: State, a: Sym) -> Option<State> {
        if self.error.borrow().is_some() {
            return None;
        }
        let r = self.det.borrow_mut().next(id, a);
        self.record(r)
    }

    pub fn is_accepting(&self, id: State) -> bool {
        self.det.borrow().is_accepting(id)
    }

    pub fn is_dead(&self, id: State) -> bool {
        self.det.borrow().subset(id).is_empty()
    }

    pub fn num_states(&self) -> usize {
        self.det.borrow().num_states()
    }

    pub fn alphabet(&self) -> Alphabet {
        self.det.borrow().inner().alphabet().clone()
    }

    pub fn check(&self) -> Result<()> {
        match self.error.borrow().clone() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

/// Complement of a lazy automaton, determinized on the fly.
pub struct Complement<L: LazyNfa> {
    pub det: SharedDeterminizer<L>,
    alphabet: Alphabet,
}

impl<L: LazyNfa> Complement<L> {
    pub fn new(nfa: L, budget: usize) -> Self {
        let alphabet = nfa.alphabet().clone();
        Complement {
            det: SharedDeterminizer::new(nfa, budget),
            alphabet,
        }
    }
}

impl<L: LazyNfa> LazyNfa for Complement<L> {
    type State = State;

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn initial(&self) -> Vec<State> {
        self.det.start().into_iter().collect()
    }

    fn is_accepting(&self, q: &State) -> bool {
        !self.det.is_accepting(*q)
    }

    fn successors(&self, q: &State, out: &mut Vec<(Sym, State)>) {
        for a in self.alphabet.symbols() {
            match self.det.next(*q, a) {
                Some(p) => out.push((a, p)),
                None => return,
            }
        }
    }

    fn successors_on(&self, q: &State, a: Sym, out: &mut Vec<State>) {
        out.extend(self.det.next(*q, a));
    }
}

/// Accepted words of length `len`, via on-the-fly subset construction.
pub fn words_of_length<L: LazyNfa>(a: L, len: usize, budget: usize) -> Result<Vec<Word>> {
    Determinizer::new(a, budget).words_of_length(len, budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn ends_with_a() -> Nfa {
        let s = sigma();
        let mut n = Nfa::with_states(&s, 2);
        n.set_initial(0);
        n.set_accepting(1, true);
        n.add_transition(0, 0, 0);
        n.add_transition(0, 1, 0);
        n.add_transition(0, 0, 1);
        n
    }

    #[test]
    fn lazy_witness_matches_explicit() {
        let n = ends_with_a();
        let w = Nfa::word(&sigma(), &[1, 0]);
        let p = Product { left: &n, right: &w };
        assert_eq!(shortest_witness(&p, 100).unwrap().witness, Some(vec![1, 0]));
        assert_eq!(shortest_witness(&n, 100).unwrap().witness, Some(vec![0]));
    }

    #[test]
    fn lazy_words_of_length() {
        let n = ends_with_a();
        let ws = words_of_length(&n, 2, 100).unwrap();
        assert_eq!(ws, vec![vec![0, 0], vec![1, 0]]);
        assert_eq!(ws, n.words_of_length(2, 100).unwrap());
    }

    #[test]
    fn materialize_and_determinize_agree() {
        let n = ends_with_a();
        let m = materialize(&n, 100).unwrap();
        assert_eq!(m, n);
        let d = Determinizer::new(&n, 100).into_dfa().unwrap();
        for w in [vec![], vec![0], vec![1], vec![0, 1], vec![1, 0]] {
            assert_eq!(d.accepts(&w), n.accepts(&w));
        }
    }

    #[test]
    fn complement_flips_membership() {
        let a = ends_with_a();
        let c = Complement::new(&a, 100);
        let m = materialize(&c, 100).unwrap();
        c.det.check().unwrap();
        for w in crate::automata::ops::tests::all_words(2, 4) {
            assert_eq!(m.accepts(&w), !a.accepts(&w));
        }
        let tiny = Complement::new(&a, 1);
        assert!(materialize(&tiny, 100).is_ok());
        assert!(tiny.det.check().is_err());
    }

    #[test]
    fn budget_is_enforced() {
        assert!(shortest_witness(&ends_with_a(), 1).is_err());
        assert!(shortest_witness(&ends_with_a(), 2).is_ok());
    }
}
