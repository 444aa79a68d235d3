//! The transducer mapping a configuration to its separator.
//!
//! A state summarizes a separation table between two columns: the
//! first-appearance list of the rows' current transducer states, and the pair
//! `(Q, Q')` of states reachable by runs whose targets stay inside the box,
//! where `Q'` additionally requires some source letter outside the box.

use std::collections::BTreeSet;
use std::fmt;

use crate::automata::{BitSet, State, Sym, SymSet, Transducer};
use crate::error::{Budget, Result};
use crate::model::Rts;

use super::refine::{local_refinement, refinements_from};
use super::SeparatorBox;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TsepState {
    /// Distinct transducer states; padding to the transducer's size is implicit.
    pub alpha: Vec<State>,
    pub inside: BitSet,
    pub escaped: BitSet,
}

impl TsepState {
    /// All initial states: every ordering of every set of initial transducer states.
    pub fn initial(t: &Transducer) -> Vec<TsepState> {
        let init = t.nfa().initial().to_vec();
        let inside = t.nfa().initial_set();
        let escaped = BitSet::new(t.nfa().num_states());
        let mut out = Vec::new();
        let mut stack: Vec<Vec<State>> = vec![Vec::new()];
        while let Some(alpha) = stack.pop() {
            for &q in &init {
                if !alpha.contains(&q) {
                    let mut longer = alpha.clone();
                    longer.push(q);
                    stack.push(longer);
                }
            }
            out.push(TsepState {
                alpha,
                inside: inside.clone(),
                escaped: escaped.clone(),
            });
        }
        out.sort();
        out
    }

    pub fn is_accepting(&self, t: &Transducer) -> bool {
        self.alpha.iter().all(|&q| t.nfa().is_accepting(q))
            && !self.escaped.iter().any(|q| t.nfa().is_accepting(q as State))
    }

    /// The alpha list padded with `None` to `width` entries.
    pub fn padded(&self, width: usize) -> Vec<Option<State>> {
        let mut v: Vec<Option<State>> = self.alpha.iter().map(|&q| Some(q)).collect();
        v.resize(width.max(v.len()), None);
        v
    }

    /// Successor summary once a column with permissible letters `perm` is consumed.
    pub fn advance(&self, t: &Transducer, alpha: Vec<State>, perm: SymSet) -> TsepState {
        let n = t.nfa().num_states();
        let mut inside = BitSet::new(n);
        let mut escaped = BitSet::new(n);
        for q in self.inside.iter() {
            for &(p, q2) in t.nfa().out(q as State) {
                let (a, b) = t.split(p);
                if perm.contains(b) {
                    inside.insert(q2 as usize);
                    if !perm.contains(a) {
                        escaped.insert(q2 as usize);
                    }
                }
            }
        }
        for q in self.escaped.iter() {
            for &(p, q2) in t.nfa().out(q as State) {
                if perm.contains(t.split(p).1) {
                    escaped.insert(q2 as usize);
                }
            }
        }
        TsepState { alpha, inside, escaped }
    }
}

impl fmt::Debug for TsepState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tsep({:?}, {:?}, {:?})", self.alpha, self.inside, self.escaped)
    }
}

/// The output letter `X` of the transition `q --a/X--> q2`, if it exists.
pub fn tsep_step(t: &Transducer, q: &TsepState, a: Sym, q2: &TsepState) -> Option<SymSet> {
    let lr = local_refinement(t, a, &q.alpha, &q2.alpha)?;
    let perm = lr.permissible(a);
    let expected = q.advance(t, q2.alpha.clone(), perm);
    (expected == *q2).then(|| perm.complement(t.left().len()))
}

/// Transducer states from which an accepting state can be reached.
pub fn useful_states(t: &Transducer) -> Vec<bool> {
    let nfa = t.nfa();
    let n = nfa.num_states();
    let mut preds: Vec<Vec<State>> = vec![Vec::new(); n];
    for (p, _, q) in nfa.transitions() {
        preds[q as usize].push(p);
    }
    let mut useful: Vec<bool> = (0..n as State).map(|q| nfa.is_accepting(q)).collect();
    let mut stack: Vec<State> = (0..n as State).filter(|&q| useful[q as usize]).collect();
    while let Some(q) = stack.pop() {
        for &p in &preds[q as usize] {
            if !useful[p as usize] {
                useful[p as usize] = true;
                stack.push(p);
            }
        }
    }
    useful
}

/// Boxes output along accepting runs of the separator transducer on `w`.
/// There is exactly one, the box of [`super::separator_box`].
pub fn tsep_boxes(r: &Rts, w: &[Sym], budget: usize) -> Result<Vec<SeparatorBox>> {
    let t = &r.step;
    let useful = useful_states(t);
    let mut charge = Budget::new(budget);
    let mut layer: BTreeSet<(TsepState, Vec<SymSet>)> =
        TsepState::initial(t).into_iter().map(|q| (q, Vec::new())).collect();
    for &c in w {
        let mut next = BTreeSet::new();
        for (q, incl) in &layer {
            for (alpha, perm) in refinements_from(t, c, &q.alpha, &useful) {
                charge.charge(1)?;
                let q2 = q.advance(t, alpha, perm);
                let mut longer = incl.clone();
                longer.push(perm);
                next.insert((q2, longer));
            }
        }
        layer = next;
    }
    let boxes: BTreeSet<SeparatorBox> = layer
        .into_iter()
        .filter(|(q, _)| q.is_accepting(t))
        .map(|(_, incl)| SeparatorBox { incl })
        .collect();
    Ok(boxes.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::ops::tests::all_words;
    use crate::ind1::separator_box;
    use crate::model::{catalog, model};

    #[test]
    fn tsep_reproduces_separators() {
        let r = model("philosophers").unwrap().rts;
        let w = r.word("t b t b").unwrap();
        assert_eq!(
            tsep_boxes(&r, &w, 1 << 20).unwrap(),
            vec![separator_box(&r, &w, 1 << 20).unwrap()]
        );
        for m in catalog()
            .into_iter()
            .filter(|m| !crate::ind1::a1::tests::WIDE.contains(&m.name))
        {
            let k = m.rts.alphabet.len();
            for len in 0..=3 {
                for w in all_words(k, len) {
                    let expected = separator_box(&m.rts, &w, 1 << 20).unwrap();
                    assert_eq!(
                        tsep_boxes(&m.rts, &w, 1 << 20).unwrap(),
                        vec![expected],
                        "{} {:?}",
                        m.name,
                        w
                    );
                }
            }
        }
    }

    #[test]
    fn initial_state_has_a_successor_on_initial_letters() {
        let r = model("philosophers").unwrap().rts;
        let useful = useful_states(&r.step);
        let f = r.word("t").unwrap()[0];
        for q in TsepState::initial(&r.step) {
            assert!(!refinements_from(&r.step, f, &q.alpha, &useful).is_empty());
        }
    }

    #[test]
    fn step_is_checked_against_the_summary_rule() {
        let r = model("philosophers").unwrap().rts;
        let t = &r.step;
        let useful = useful_states(t);
        let c = r.word("t").unwrap()[0];
        let q = TsepState::initial(t).pop().unwrap();
        let (alpha, perm) = refinements_from(t, c, &q.alpha, &useful).remove(0);
        let good = q.advance(t, alpha, perm);
        let x = tsep_step(t, &q, c, &good).unwrap();
        assert_eq!(x, perm.complement(4));
        assert_eq!(tsep_step(t, &q, c, &good), Some(x));
        let mut bad = good.clone();
        bad.escaped = bad.inside.clone();
        if bad != good {
            assert_eq!(tsep_step(t, &q, c, &bad), None);
        }
    }
}
