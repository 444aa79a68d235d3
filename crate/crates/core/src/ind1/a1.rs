//! The automaton `A_1` recognizing `Ind_1`.
//!
//! Reading `w`, it guesses the separator-transducer run producing the box of
//! `w` together with an initial configuration `u` that stays inside the box.
//! States are `(separator state, initial-automaton state)`; the
//! "clause already satisfied" bit is never stored since such runs are dead.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use crate::automata::lazy::{materialize, shortest_witness, words_of_length, Determinizer, Guided, LazyNfa};
use crate::automata::{minimize, Alphabet, Dfa, Nfa, State, Sym, SymSet, Transducer, Word};
use crate::error::{Budget, Error, Result};
use crate::model::Rts;
use crate::verdict::{Verdict, Witness};

use super::refine::refinements_within;
use super::tsep::{useful_states, TsepState};

type Columns = Rc<Vec<(Vec<State>, SymSet)>>;

pub struct A1 {
    step: Transducer,
    initial: Nfa,
    useful: Vec<bool>,
    columns: RefCell<HashMap<(Vec<State>, Sym), Columns>>,
    /// Shared by all column searches; once exhausted, states have no successors.
    search: RefCell<Budget>,
    error: RefCell<Option<Error>>,
}

impl A1 {
    pub fn new(r: &Rts) -> Self {
        Self::with_budget(r, usize::MAX)
    }

    /// `budget` bounds the total number of nodes visited while enumerating columns.
    pub fn with_budget(r: &Rts, budget: usize) -> Self {
        A1 {
            useful: useful_states(&r.step),
            step: r.step.clone(),
            initial: r.initial.clone(),
            columns: RefCell::new(HashMap::new()),
            search: RefCell::new(Budget::new(budget)),
            error: RefCell::new(None),
        }
    }

    /// The budget error hit while enumerating columns, if any.
    pub fn check(&self) -> Result<()> {
        match self.error.borrow().clone() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    fn columns(&self, alpha: &[State], c: Sym) -> Columns {
        let key = (alpha.to_vec(), c);
        if let Some(found) = self.columns.borrow().get(&key) {
            return found.clone();
        }
        if self.error.borrow().is_some() {
            return Rc::new(Vec::new());
        }
        let found = refinements_within(&self.step, c, alpha, &self.useful, &mut self.search.borrow_mut());
        let found = match found {
            Ok(v) => Rc::new(v),
            Err(e) => {
                *self.error.borrow_mut() = Some(e);
                return Rc::new(Vec::new());
            }
        };
        self.columns.borrow_mut().insert(key, found.clone());
        found
    }

    fn push(&self, q: &(TsepState, State), c: Sym, out: &mut Vec<(TsepState, State)>) {
        let moves = self.initial.out(q.1);
        if moves.is_empty() {
            return;
        }
        for (alpha, perm) in self.columns(&q.0.alpha, c).iter() {
            let mut next = None;
            for &(d, qi) in moves {
                // `u` must avoid the separator clause: its letter stays in the box.
                if perm.contains(d) {
                    let s = next.get_or_insert_with(|| q.0.advance(&self.step, alpha.clone(), *perm));
                    out.push((s.clone(), qi));
                }
            }
        }
    }
}

impl LazyNfa for A1 {
    type State = (TsepState, State);

    fn alphabet(&self) -> &Alphabet {
        self.initial.alphabet()
    }

    fn initial(&self) -> Vec<Self::State> {
        let mut out = Vec::new();
        for s in TsepState::initial(&self.step) {
            for &q in self.initial.initial() {
                out.push((s.clone(), q));
            }
        }
        out
    }

    fn is_accepting(&self, q: &Self::State) -> bool {
        q.0.is_accepting(&self.step) && self.initial.is_accepting(q.1)
    }

    fn successors(&self, q: &Self::State, out: &mut Vec<(Sym, Self::State)>) {
        let mut buf = Vec::new();
        for c in self.initial.alphabet().symbols() {
            buf.clear();
            self.push(q, c, &mut buf);
            out.extend(buf.drain(..).map(|s| (c, s)));
        }
    }

    fn successors_on(&self, q: &Self::State, c: Sym, out: &mut Vec<Self::State>) {
        self.push(q, c, out);
    }
}

pub fn build_a1_lazy(r: &Rts) -> A1 {
    A1::new(r)
}

/// Breadth-first search for a shortest configuration in `Ind_1 ∩ unsafe`.
pub fn check_safety_ind1(r: &Rts, unsafe_set: &Nfa, budget: usize) -> Result<Verdict> {
    if unsafe_set.alphabet() != &r.alphabet {
        return Err(Error::AlphabetMismatch("unsafe set".into()));
    }
    let a1 = A1::with_budget(r, column_budget(budget));
    let search = Guided {
        left: unsafe_set,
        right: &a1,
    };
    match a1.check().and(shortest_witness(&search, budget)) {
        Ok(s) => Ok(match s.witness {
            None => Verdict::safe(s.explored),
            Some(w) => Verdict::inconclusive(Witness::Config(w), s.explored),
        }),
        Err(e) => Verdict::from_error(e),
    }
}

/// Column searches may visit a fixed multiple of the state budget.
fn column_budget(budget: usize) -> usize {
    budget.saturating_mul(16)
}

pub fn ind1_min_dfa(r: &Rts, budget: usize) -> Result<Dfa> {
    let a1 = A1::with_budget(r, column_budget(budget));
    let dfa = Determinizer::new(&a1, budget).into_dfa();
    a1.check()?;
    Ok(minimize(&dfa?))
}

/// The reachable part of `A_1` as an explicit NFA.
pub fn a1_nfa(r: &Rts, budget: usize) -> Result<Nfa> {
    let a1 = A1::with_budget(r, column_budget(budget));
    let a = materialize(&a1, budget);
    a1.check()?;
    a
}

/// Words of `Ind_1` of length `len`, in lexicographic order.
pub fn ind1_words(r: &Rts, len: usize, budget: usize) -> Result<Vec<Word>> {
    let a1 = A1::with_budget(r, column_budget(budget));
    let words = words_of_length(&a1, len, budget);
    a1.check()?;
    words
}

/// Words of `Ind_1` for every length up to `max_len`, sharing one subset
/// construction across lengths.
pub fn ind1_word_slices(r: &Rts, max_len: usize, budget: usize) -> Result<Vec<Vec<Word>>> {
    let a1 = A1::with_budget(r, column_budget(budget));
    let mut det = Determinizer::new(&a1, budget);
    let mut out = Vec::new();
    for len in 0..=max_len {
        let words = det.words_of_length(len, budget);
        a1.check()?;
        out.push(words?);
    }
    Ok(out)
}
