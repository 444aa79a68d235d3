//! The polynomial construction for `Ind_1`.
//!
//! A configuration `w` lies outside `Ind_1` exactly when the union of all
//! inductive 1-sets excluding `w` (its separator) is an invariant. The
//! separator is the complement of a box of letters per position, obtained by
//! saturating `{w}` backwards along transitions. [`a1`] recognizes `Ind_1`
//! directly by guessing summaries of that saturation column by column.

pub mod a1;
pub mod boxes;
pub mod refine;
pub mod tsep;

use std::fmt;

use crate::automata::{BitSet, State, Sym, SymSet};
use crate::bforms::PowerWord;
use crate::error::{Budget, Error, Result};
use crate::model::{transitions_at_length, Rts};

pub use a1::{a1_nfa, build_a1_lazy, check_safety_ind1, ind1_min_dfa, ind1_word_slices, ind1_words, A1};
pub use boxes::{
    check_safety_ind1_boxes, ind1_boxes_lazy, ind1_boxes_min_dfa, ind1_boxes_words, BoxState, OutsideInd1,
};
pub use refine::{local_refinement, refinements_from, refinements_within, LocalRefinement};
pub use tsep::{tsep_boxes, tsep_step, useful_states, TsepState};

/// Letters allowed at each position; the separator is its complement.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeparatorBox {
    pub incl: Vec<SymSet>,
}

impl SeparatorBox {
    pub fn point(w: &[Sym]) -> Self {
        SeparatorBox {
            incl: w.iter().map(|&a| SymSet::singleton(a)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.incl.len()
    }

    pub fn is_empty(&self) -> bool {
        self.incl.is_empty()
    }

    pub fn contains(&self, u: &[Sym]) -> bool {
        u.len() == self.incl.len() && u.iter().zip(&self.incl).all(|(&a, s)| s.contains(a))
    }

    /// The separator as a 1-powerword: a configuration satisfies it iff it leaves the box.
    pub fn sepf(&self, r: &Rts) -> PowerWord {
        let n = r.alphabet.len();
        PowerWord::new(&r.alphabet, 1, self.incl.iter().map(|s| s.complement(n).0).collect())
    }

    /// Some word of the language of `a` fits in the box.
    pub fn meets(&self, a: &crate::automata::Nfa) -> bool {
        let mut cur = a.initial_set();
        for s in &self.incl {
            let mut next = BitSet::new(a.num_states());
            for q in cur.iter() {
                for &(x, p) in a.out(q as State) {
                    if s.contains(x) {
                        next.insert(p as usize);
                    }
                }
            }
            if next.is_empty() {
                return false;
            }
            cur = next;
        }
        let found = cur.iter().any(|q| a.is_accepting(q as State));
        found
    }
}

impl fmt::Debug for SeparatorBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.incl.iter().map(|s| format!("{:b}", s.0)).collect();
        write!(f, "Box[{}]", parts.join(" "))
    }
}

/// Saturation over the enumerated transitions of length `|w|`.
pub fn separator_box_enumerated(r: &Rts, w: &[Sym], budget: usize) -> Result<SeparatorBox> {
    let steps = transitions_at_length(r, w.len(), budget)?;
    let mut bx = SeparatorBox::point(w);
    loop {
        let mut changed = false;
        for (s, t) in &steps {
            if bx.contains(t) && !bx.contains(s) {
                for (set, &a) in bx.incl.iter_mut().zip(s) {
                    set.insert(a);
                }
                changed = true;
            }
        }
        if !changed {
            return Ok(bx);
        }
    }
}

/// Saturation computed symbolically on the positional product with the
/// transducer: each round adds the source letters of every transition whose
/// target stays inside the box, without enumerating transitions.
pub fn separator_box(r: &Rts, w: &[Sym], budget: usize) -> Result<SeparatorBox> {
    let t = r.step.nfa();
    let n = t.num_states();
    let len = w.len();
    let mut charge = Budget::new(budget);
    let mut bx = SeparatorBox::point(w);
    loop {
        charge.charge(n * (len + 1))?;
        // forward[j]: states after reading j pairs whose targets are inside the box.
        let mut forward = vec![t.initial_set()];
        for j in 0..len {
            let mut next = BitSet::new(n);
            for q in forward[j].iter() {
                for &(p, q2) in t.out(q as State) {
                    if bx.incl[j].contains(r.step.split(p).1) {
                        next.insert(q2 as usize);
                    }
                }
            }
            forward.push(next);
        }
        let mut backward = BitSet::from_iter(n, t.accepting_states().map(|q| q as usize));
        let mut added = vec![SymSet::EMPTY; len];
        for j in (0..len).rev() {
            let mut prev = BitSet::new(n);
            for q in 0..n {
                for &(p, q2) in t.out(q as State) {
                    let (a, b) = r.step.split(p);
                    if bx.incl[j].contains(b) && backward.contains(q2 as usize) {
                        prev.insert(q);
                        if forward[j].contains(q) {
                            added[j].insert(a);
                        }
                    }
                }
            }
            backward = prev;
        }
        // Only whole runs count: a run must also start in an initial state.
        if !t.initial().iter().any(|&q| backward.contains(q as usize)) {
            return Ok(bx);
        }
        let mut changed = false;
        for (set, extra) in bx.incl.iter_mut().zip(added) {
            let merged = set.union(extra);
            changed |= merged != *set;
            *set = merged;
        }
        if !changed {
            return Ok(bx);
        }
    }
}

/// `w ∈ Ind_1` iff the separator of `w` is not an invariant, i.e. some
/// initial configuration lies in the box.
pub fn in_ind1_at_length(r: &Rts, w: &[Sym], budget: usize) -> Result<bool> {
    if w.iter().any(|&a| a as usize >= r.alphabet.len()) {
        return Err(Error::validation("word", "symbol outside the alphabet"));
    }
    Ok(separator_box(r, w, budget)?.meets(&r.initial))
}
