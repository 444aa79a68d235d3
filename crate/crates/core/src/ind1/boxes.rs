//! `Ind_1` through its complement, by guessing the separator box directly.
//!
//! A configuration `w` lies outside `Ind_1` iff some box `P_1 × … × P_ℓ`
//! containing `w` has no transition entering it from outside and contains no
//! initial configuration: its complement is then an inductive 1-invariant
//! excluding `w`. [`OutsideInd1`] guesses one letter set per position and
//! tracks the three summaries that decide those two conditions. Unlike
//! [`super::A1`] it never guesses a separation table, so its state space is a
//! product of state sets of `T` and `I` rather than of their orderings.

use crate::automata::lazy::{shortest_witness, words_of_length, Complement, Determinizer, Guided, LazyNfa};
use crate::automata::{complement, minimize, Alphabet, BitSet, Dfa, Nfa, State, Sym, SymSet, Word};
use crate::error::{Error, Result};
use crate::model::Rts;
use crate::verdict::{Verdict, Witness};

use super::tsep::useful_states;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BoxState {
    /// `T`-states reached by runs whose targets stay in the box.
    pub inside: BitSet,
    /// Those runs that also used a source letter outside the box.
    pub entering: BitSet,
    /// `I`-states reached by initial configurations inside the box.
    pub initial: BitSet,
}

impl BoxState {
    fn weight(&self) -> usize {
        self.inside.len() + self.entering.len() + self.initial.len()
    }

    fn below(&self, other: &BoxState) -> bool {
        self.inside.is_subset(&other.inside)
            && self.entering.is_subset(&other.entering)
            && self.initial.is_subset(&other.initial)
    }
}

pub struct OutsideInd1 {
    rts: Rts,
    t_useful: Vec<bool>,
    i_useful: Vec<bool>,
    /// Letter sets per column letter, each containing that letter.
    choices: Vec<Vec<SymSet>>,
}

fn coreachable(a: &Nfa) -> Vec<bool> {
    let n = a.num_states();
    let mut preds: Vec<Vec<State>> = vec![Vec::new(); n];
    for (p, _, q) in a.transitions() {
        preds[q as usize].push(p);
    }
    let mut seen: Vec<bool> = (0..n as State).map(|q| a.is_accepting(q)).collect();
    let mut stack: Vec<State> = (0..n as State).filter(|&q| seen[q as usize]).collect();
    while let Some(q) = stack.pop() {
        for &p in &preds[q as usize] {
            if !seen[p as usize] {
                seen[p as usize] = true;
                stack.push(p);
            }
        }
    }
    seen
}

impl OutsideInd1 {
    pub fn new(r: &Rts) -> Self {
        let k = r.alphabet.len();
        let choices = (0..k as Sym)
            .map(|c| (0..1u32 << k).map(SymSet).filter(|s| s.contains(c)).collect())
            .collect();
        OutsideInd1 {
            t_useful: useful_states(&r.step),
            i_useful: coreachable(&r.initial),
            rts: r.clone(),
            choices,
        }
    }

    fn advance(&self, q: &BoxState, perm: SymSet) -> BoxState {
        let t = self.rts.step.nfa();
        let n = t.num_states();
        let mut inside = BitSet::new(n);
        let mut entering = BitSet::new(n);
        for p in q.inside.iter() {
            for &(ab, p2) in t.out(p as State) {
                let (a, b) = self.rts.step.split(ab);
                if perm.contains(b) && self.t_useful[p2 as usize] {
                    inside.insert(p2 as usize);
                    if !perm.contains(a) {
                        entering.insert(p2 as usize);
                    }
                }
            }
        }
        for p in q.entering.iter() {
            for &(ab, p2) in t.out(p as State) {
                if perm.contains(self.rts.step.split(ab).1) && self.t_useful[p2 as usize] {
                    entering.insert(p2 as usize);
                }
            }
        }
        let init = &self.rts.initial;
        let mut initial = BitSet::new(init.num_states());
        for p in q.initial.iter() {
            for &(d, p2) in init.out(p as State) {
                if perm.contains(d) && self.i_useful[p2 as usize] {
                    initial.insert(p2 as usize);
                }
            }
        }
        BoxState {
            inside,
            entering,
            initial,
        }
    }
}

impl LazyNfa for OutsideInd1 {
    type State = BoxState;

    fn alphabet(&self) -> &Alphabet {
        &self.rts.alphabet
    }

    fn initial(&self) -> Vec<BoxState> {
        let t = self.rts.step.nfa();
        let i = &self.rts.initial;
        vec![BoxState {
            inside: BitSet::from_iter(
                t.num_states(),
                t.initial().iter().map(|&q| q as usize).filter(|&q| self.t_useful[q]),
            ),
            entering: BitSet::new(t.num_states()),
            initial: BitSet::from_iter(
                i.num_states(),
                i.initial().iter().map(|&q| q as usize).filter(|&q| self.i_useful[q]),
            ),
        }]
    }

    fn is_accepting(&self, q: &BoxState) -> bool {
        !q.entering.iter().any(|p| self.rts.step.nfa().is_accepting(p as State))
            && !q.initial.iter().any(|p| self.rts.initial.is_accepting(p as State))
    }

    fn successors(&self, q: &BoxState, out: &mut Vec<(Sym, BoxState)>) {
        let mut buf = Vec::new();
        for c in self.rts.alphabet.symbols() {
            buf.clear();
            self.successors_on(q, c, &mut buf);
            out.extend(buf.drain(..).map(|s| (c, s)));
        }
    }

    fn successors_on(&self, q: &BoxState, c: Sym, out: &mut Vec<BoxState>) {
        let mut next: Vec<BoxState> = self.choices[c as usize]
            .iter()
            .map(|&perm| self.advance(q, perm))
            .collect();
        next.sort();
        next.dedup();
        self.reduce(&mut next);
        out.extend(next);
    }

    /// Keeps the componentwise-minimal states. Successors are monotone in
    /// every component and acceptance is downward closed, so a smaller state
    /// accepts everything a larger one does.
    fn reduce(&self, set: &mut Vec<BoxState>) {
        let mut kept: Vec<BoxState> = Vec::with_capacity(set.len());
        set.sort_by_key(BoxState::weight);
        for q in set.drain(..) {
            if !kept.iter().any(|k| k.below(&q)) {
                kept.push(q);
            }
        }
        kept.sort();
        *set = kept;
    }
}

/// `Ind_1` as the on-the-fly complement of [`OutsideInd1`].
pub fn ind1_boxes_lazy(r: &Rts, budget: usize) -> Complement<OutsideInd1> {
    Complement::new(OutsideInd1::new(r), budget)
}

pub fn check_safety_ind1_boxes(r: &Rts, unsafe_set: &Nfa, budget: usize) -> Result<Verdict> {
    if unsafe_set.alphabet() != &r.alphabet {
        return Err(Error::AlphabetMismatch("unsafe set".into()));
    }
    let ind1 = ind1_boxes_lazy(r, budget);
    let search = Guided {
        left: unsafe_set,
        right: &ind1,
    };
    let found = shortest_witness(&search, budget);
    let found = match ind1.det.check().and(found) {
        Ok(s) => s,
        Err(e) => return Verdict::from_error(e),
    };
    let verdict = match found.witness {
        None => Verdict::safe(found.explored),
        Some(w) => Verdict::inconclusive(Witness::Config(w), found.explored),
    };
    Ok(verdict.with_size("subsets", ind1.det.num_states()))
}

pub fn ind1_boxes_min_dfa(r: &Rts, budget: usize) -> Result<Dfa> {
    let dfa = Determinizer::new(OutsideInd1::new(r), budget).into_dfa()?;
    Ok(minimize(&complement(&dfa)))
}

/// Words of `Ind_1` of length `len`, in lexicographic order.
pub fn ind1_boxes_words(r: &Rts, len: usize, budget: usize) -> Result<Vec<Word>> {
    let ind1 = ind1_boxes_lazy(r, budget);
    let words = words_of_length(&ind1, len, budget);
    ind1.det.check()?;
    words
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::ops::tests::all_words;
    use crate::ind1::in_ind1_at_length;
    use crate::model::{catalog, model};
    use crate::verdict::Status;

    const BUDGET: usize = 1 << 22;

    #[test]
    fn agrees_with_separator_membership() {
        for m in catalog() {
            let k = m.rts.alphabet.len();
            for len in 0..=4 {
                let words = ind1_boxes_words(&m.rts, len, BUDGET).unwrap();
                let expected: Vec<Word> = all_words(k, len)
                    .into_iter()
                    .filter(|w| in_ind1_at_length(&m.rts, w, BUDGET).unwrap())
                    .collect();
                assert_eq!(words, expected, "{} at {len}", m.name);
            }
        }
    }

    #[test]
    fn safety_verdicts() {
        let r = model("philosophers").unwrap().rts;
        let v = check_safety_ind1_boxes(&r, r.unsafe_set("deadlock").unwrap(), BUDGET).unwrap();
        assert!(v.is_safe());
        let r = model("berkeley").unwrap().rts;
        let v = check_safety_ind1_boxes(&r, r.unsafe_set("two-exclusive").unwrap(), BUDGET).unwrap();
        assert_eq!(v.status, Status::Inconclusive);
        assert_eq!(v.witness, Some(Witness::Config(r.word("e e").unwrap())));
    }

    #[test]
    fn minimal_dfa_agrees_with_lazy_words() {
        let r = model("philosophers").unwrap().rts;
        let d = ind1_boxes_min_dfa(&r, BUDGET).unwrap();
        for len in 0..=5 {
            let words = ind1_boxes_words(&r, len, BUDGET).unwrap();
            let from_dfa: Vec<Word> = all_words(4, len).into_iter().filter(|w| d.accepts(w)).collect();
            assert_eq!(words, from_dfa);
        }
    }
}
