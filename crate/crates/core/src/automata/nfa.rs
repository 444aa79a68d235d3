use crate::error::{Error, Result};

use super::alphabet::{Alphabet, Sym};
use super::bitset::BitSet;

pub type State = u32;
pub type Word = Vec<Sym>;

/// Nondeterministic automaton without ε-moves.
///
/// Outgoing transitions of each state are kept sorted by (symbol, target),
/// so the successors on one symbol form a contiguous slice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    alphabet: Alphabet,
    adj: Vec<Vec<(Sym, State)>>,
    initial: Vec<State>,
    accepting: Vec<bool>,
}

impl Nfa {
    pub fn new(alphabet: &Alphabet) -> Self {
        Nfa {
            alphabet: alphabet.clone(),
            adj: Vec::new(),
            initial: Vec::new(),
            accepting: Vec::new(),
        }
    }

    pub fn with_states(alphabet: &Alphabet, n: usize) -> Self {
        let mut a = Nfa::new(alphabet);
        for _ in 0..n {
            a.add_state();
        }
        a
    }

    /// Accepts every word.
    pub fn universal(alphabet: &Alphabet) -> Self {
        let mut a = Nfa::with_states(alphabet, 1);
        a.set_initial(0);
        a.set_accepting(0, true);
        for s in alphabet.symbols() {
            a.add_transition(0, s, 0);
        }
        a
    }

    /// Accepts nothing.
    pub fn empty(alphabet: &Alphabet) -> Self {
        let mut a = Nfa::with_states(alphabet, 1);
        a.set_initial(0);
        a
    }

    /// Accepts exactly the given word.
    pub fn word(alphabet: &Alphabet, w: &[Sym]) -> Self {
        let mut a = Nfa::with_states(alphabet, w.len() + 1);
        a.set_initial(0);
        a.set_accepting(w.len() as State, true);
        for (i, &s) in w.iter().enumerate() {
            a.add_transition(i as State, s, i as State + 1);
        }
        a
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.adj.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    pub fn add_state(&mut self) -> State {
        self.adj.push(Vec::new());
        self.accepting.push(false);
        (self.adj.len() - 1) as State
    }

    pub fn add_transition(&mut self, p: State, a: Sym, q: State) {
        debug_assert!((a as usize) < self.alphabet.len());
        debug_assert!((q as usize) < self.adj.len());
        let out = &mut self.adj[p as usize];
        match out.last() {
            Some(&last) if last < (a, q) => out.push((a, q)),
            None => out.push((a, q)),
            _ => {
                if let Err(pos) = out.binary_search(&(a, q)) {
                    out.insert(pos, (a, q));
                }
            }
        }
    }

    pub fn set_initial(&mut self, q: State) {
        if let Err(pos) = self.initial.binary_search(&q) {
            self.initial.insert(pos, q);
        }
    }

    pub fn set_accepting(&mut self, q: State, yes: bool) {
        self.accepting[q as usize] = yes;
    }

    pub fn initial(&self) -> &[State] {
        &self.initial
    }

    pub fn is_accepting(&self, q: State) -> bool {
        self.accepting[q as usize]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = State> + '_ {
        (0..self.adj.len() as State).filter(|&q| self.accepting[q as usize])
    }

    /// All outgoing transitions of `q`, sorted by symbol.
    pub fn out(&self, q: State) -> &[(Sym, State)] {
        &self.adj[q as usize]
    }

    /// Successors of `q` on symbol `a`.
    pub fn succ(&self, q: State, a: Sym) -> impl Iterator<Item = State> + '_ {
        self.out_range(q, a, a + 1).iter().map(|&(_, t)| t)
    }

    /// Transitions of `q` whose symbol lies in `lo..hi`.
    pub fn out_range(&self, q: State, lo: Sym, hi: Sym) -> &[(Sym, State)] {
        let out = &self.adj[q as usize];
        let start = out.partition_point(|&(s, _)| s < lo);
        let end = start + out[start..].partition_point(|&(s, _)| s < hi);
        &out[start..end]
    }

    pub fn transitions(&self) -> impl Iterator<Item = (State, Sym, State)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(p, out)| out.iter().map(move |&(a, q)| (p as State, a, q)))
    }

    pub fn initial_set(&self) -> BitSet {
        BitSet::from_iter(self.num_states(), self.initial.iter().map(|&q| q as usize))
    }

    pub fn step_set(&self, set: &BitSet, a: Sym) -> BitSet {
        let mut next = BitSet::new(self.num_states());
        for q in set.iter() {
            for t in self.succ(q as State, a) {
                next.insert(t as usize);
            }
        }
        next
    }

    pub fn accepts(&self, w: &[Sym]) -> bool {
        let mut cur = self.initial_set();
        for &a in w {
            cur = self.step_set(&cur, a);
            if cur.is_empty() {
                return false;
            }
        }
        let ok = cur.iter().any(|q| self.accepting[q]);
        ok
    }

    /// Restricts to states that are reachable and co-reachable. Keeps one state if nothing survives.
    pub fn trim(&self) -> Nfa {
        let n = self.num_states();
        let mut fwd = vec![false; n];
        let mut stack: Vec<State> = self.initial.clone();
        for &q in &stack {
            fwd[q as usize] = true;
        }
        while let Some(p) = stack.pop() {
            for &(_, q) in self.out(p) {
                if !fwd[q as usize] {
                    fwd[q as usize] = true;
                    stack.push(q);
                }
            }
        }
        let mut rev: Vec<Vec<State>> = vec![Vec::new(); n];
        for (p, _, q) in self.transitions() {
            rev[q as usize].push(p);
        }
        let mut bwd = vec![false; n];
        let mut stack: Vec<State> = self.accepting_states().collect();
        for &q in &stack {
            bwd[q as usize] = true;
        }
        while let Some(q) = stack.pop() {
            for &p in &rev[q as usize] {
                if !bwd[p as usize] {
                    bwd[p as usize] = true;
                    stack.push(p);
                }
            }
        }
        let keep: Vec<bool> = (0..n).map(|q| fwd[q] && bwd[q]).collect();
        if !keep.iter().any(|&k| k) {
            return Nfa::empty(&self.alphabet);
        }
        let mut map = vec![State::MAX; n];
        let mut out = Nfa::new(&self.alphabet);
        for q in 0..n {
            if keep[q] {
                map[q] = out.add_state();
                out.set_accepting(map[q], self.accepting[q]);
            }
        }
        for &q in &self.initial {
            if keep[q as usize] {
                out.set_initial(map[q as usize]);
            }
        }
        for (p, a, q) in self.transitions() {
            if keep[p as usize] && keep[q as usize] {
                out.add_transition(map[p as usize], a, map[q as usize]);
            }
        }
        out
    }

    /// Accepting-state reachability in exactly `k` more steps, for `k = 0..=len`.
    pub fn exact_coreach(&self, len: usize) -> Vec<BitSet> {
        let n = self.num_states();
        let mut layers = Vec::with_capacity(len + 1);
        layers.push(BitSet::from_iter(n, self.accepting_states().map(|q| q as usize)));
        for k in 1..=len {
            let prev = &layers[k - 1];
            let mut cur = BitSet::new(n);
            for q in 0..n {
                if self.out(q as State).iter().any(|&(_, t)| prev.contains(t as usize)) {
                    cur.insert(q);
                }
            }
            layers.push(cur);
        }
        layers
    }

    /// All accepted words of length `len`, in lexicographic order.
    pub fn words_of_length(&self, len: usize, limit: usize) -> Result<Vec<Word>> {
        let co = self.exact_coreach(len);
        let mut out = Vec::new();
        let mut word = Vec::with_capacity(len);
        let start = self.initial_set();
        self.collect_words(&start, len, &co, &mut word, &mut out, limit)?;
        Ok(out)
    }

    fn collect_words(
        &self,
        cur: &BitSet,
        rest: usize,
        co: &[BitSet],
        word: &mut Word,
        out: &mut Vec<Word>,
        limit: usize,
    ) -> Result<()> {
        if !cur.intersects(&co[rest]) {
            return Ok(());
        }
        if rest == 0 {
            out.push(word.clone());
            if out.len() > limit {
                return Err(Error::BudgetExceeded {
                    limit,
                    explored: out.len(),
                });
            }
            return Ok(());
        }
        for a in self.alphabet.symbols() {
            let next = self.step_set(cur, a);
            if next.intersects(&co[rest - 1]) {
                word.push(a);
                self.collect_words(&next, rest - 1, co, word, out, limit)?;
                word.pop();
            }
        }
        Ok(())
    }
}

/// Complete deterministic automaton with a dense transition table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    start: State,
    delta: Vec<State>,
    accepting: Vec<bool>,
}

impl Dfa {
    /// `delta[q * |Σ| + a]` is the successor of `q` on `a`.
    pub fn from_table(alphabet: &Alphabet, start: State, delta: Vec<State>, accepting: Vec<bool>) -> Self {
        let k = alphabet.len();
        assert_eq!(delta.len(), accepting.len() * k, "transition table is not complete");
        assert!((start as usize) < accepting.len());
        debug_assert!(delta.iter().all(|&q| (q as usize) < accepting.len()));
        Dfa {
            alphabet: alphabet.clone(),
            start,
            delta,
            accepting,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn start(&self) -> State {
        self.start
    }

    pub fn next(&self, q: State, a: Sym) -> State {
        self.delta[q as usize * self.alphabet.len() + a as usize]
    }

    pub fn is_accepting(&self, q: State) -> bool {
        self.accepting[q as usize]
    }

    pub fn accepts(&self, w: &[Sym]) -> bool {
        let q = w.iter().fold(self.start, |q, &a| self.next(q, a));
        self.accepting[q as usize]
    }

    pub(crate) fn table(&self) -> (&[State], &[bool]) {
        (&self.delta, &self.accepting)
    }

    pub fn to_nfa(&self) -> Nfa {
        let mut a = Nfa::with_states(&self.alphabet, self.num_states());
        a.set_initial(self.start);
        for q in 0..self.num_states() as State {
            a.set_accepting(q, self.accepting[q as usize]);
            for s in self.alphabet.symbols() {
                a.add_transition(q, s, self.next(q, s));
            }
        }
        a
    }
}

/// Length-preserving transducer: an automaton over a pair alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transducer {
    nfa: Nfa,
}

impl Transducer {
    pub fn new(left: &Alphabet, right: &Alphabet) -> Self {
        Transducer {
            nfa: Nfa::new(&Alphabet::pair(left, right)),
        }
    }

    pub fn from_nfa(nfa: Nfa) -> Result<Self> {
        if nfa.alphabet().as_pair().is_none() {
            return Err(Error::AlphabetMismatch("transducer needs a pair alphabet".into()));
        }
        Ok(Transducer { nfa })
    }

    /// The identity relation on Σ*.
    pub fn identity(sigma: &Alphabet) -> Self {
        let mut t = Transducer::new(sigma, sigma);
        let q = t.nfa.add_state();
        t.nfa.set_initial(q);
        t.nfa.set_accepting(q, true);
        for a in sigma.symbols() {
            t.add_transition(q, a, a, q);
        }
        t
    }

    pub fn left(&self) -> &Alphabet {
        self.nfa.alphabet().as_pair().unwrap().0
    }

    pub fn right(&self) -> &Alphabet {
        self.nfa.alphabet().as_pair().unwrap().1
    }

    pub fn pair(&self, a: Sym, b: Sym) -> Sym {
        a * self.right().len() as Sym + b
    }

    pub fn split(&self, p: Sym) -> (Sym, Sym) {
        let k = self.right().len() as Sym;
        (p / k, p % k)
    }

    pub fn nfa(&self) -> &Nfa {
        &self.nfa
    }

    pub fn nfa_mut(&mut self) -> &mut Nfa {
        &mut self.nfa
    }

    pub fn into_nfa(self) -> Nfa {
        self.nfa
    }

    pub fn add_transition(&mut self, p: State, a: Sym, b: Sym, q: State) {
        let s = self.pair(a, b);
        self.nfa.add_transition(p, s, q);
    }

    /// Transitions of `q` whose left component is `a`.
    pub fn out_left(&self, q: State, a: Sym) -> &[(Sym, State)] {
        let k = self.right().len() as Sym;
        self.nfa.out_range(q, a * k, (a + 1) * k)
    }

    pub fn accepts(&self, u: &[Sym], w: &[Sym]) -> bool {
        u.len() == w.len() && {
            let pw: Word = u.iter().zip(w).map(|(&a, &b)| self.pair(a, b)).collect();
            self.nfa.accepts(&pw)
        }
    }
}
