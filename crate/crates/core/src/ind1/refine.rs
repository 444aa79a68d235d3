//! Local separation refinements: one column of a separation table.
//!
//! A column for letter `c` is a sequence of transducer transitions
//! `(q, a/b, q')`, one per table row, where each target letter `b` is `c` or
//! the source letter of an earlier row. Columns are summarized by the lists of
//! incoming and outgoing states in order of first appearance.

use std::collections::HashSet;

use crate::automata::{State, Sym, SymSet, Transducer};
use crate::error::{Budget, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalRefinement {
    /// `(source, a, b, target)` in the order they were added.
    pub transitions: Vec<(State, Sym, Sym, State)>,
    pub in_list: Vec<State>,
    pub out_list: Vec<State>,
    /// Source letters of the transitions.
    pub sources: SymSet,
}

impl LocalRefinement {
    /// Letters allowed in the column: the column letter plus every source letter.
    pub fn permissible(&self, c: Sym) -> SymSet {
        self.sources.union(SymSet::singleton(c))
    }
}

fn edges(t: &Transducer) -> Vec<(State, Sym, Sym, State)> {
    t.nfa()
        .transitions()
        .map(|(p, s, q)| {
            let (a, b) = t.split(s);
            (p, a, b, q)
        })
        .collect()
}

/// Greedy construction of a column with exactly the given first-appearance
/// lists. Transitions are scanned in (source, pair letter, target) order.
pub fn local_refinement(t: &Transducer, c: Sym, in_list: &[State], out_list: &[State]) -> Option<LocalRefinement> {
    let all = edges(t);
    let mut used = vec![false; all.len()];
    let (mut ins, mut outs) = (0, 0);
    let mut perm = SymSet::singleton(c);
    let mut seq = Vec::new();
    loop {
        let seen_in = &in_list[..ins];
        let seen_out = &out_list[..outs];
        let inner = (0..all.len()).find(|&i| {
            let (p, _, b, q) = all[i];
            !used[i] && perm.contains(b) && seen_in.contains(&p) && seen_out.contains(&q)
        });
        let pick = inner.or_else(|| {
            (0..all.len()).find(|&i| {
                let (p, _, b, q) = all[i];
                !used[i]
                    && perm.contains(b)
                    && (seen_in.contains(&p) || in_list.get(ins) == Some(&p))
                    && (seen_out.contains(&q) || out_list.get(outs) == Some(&q))
            })
        });
        let Some(i) = pick else { break };
        let (p, a, _, q) = all[i];
        used[i] = true;
        if !in_list[..ins].contains(&p) {
            ins += 1;
        }
        if !out_list[..outs].contains(&q) {
            outs += 1;
        }
        perm.insert(a);
        seq.push(all[i]);
    }
    if ins != in_list.len() || outs != out_list.len() {
        return None;
    }
    let sources = seq.iter().fold(SymSet::EMPTY, |s, e| s.union(SymSet::singleton(e.1)));
    Some(LocalRefinement {
        transitions: seq,
        in_list: in_list.to_vec(),
        out_list: out_list.to_vec(),
        sources,
    })
}

/// Every out-list admitting a column for `c` with the given in-list, with the
/// permissible letters of that column, sorted by out-list.
///
/// `useful` marks target states from which an accepting state is reachable;
/// other targets can never complete a table row and are skipped.
pub fn refinements_from(t: &Transducer, c: Sym, in_list: &[State], useful: &[bool]) -> Vec<(Vec<State>, SymSet)> {
    refinements_within(t, c, in_list, useful, &mut Budget::new(usize::MAX)).expect("unbounded search")
}

/// [`refinements_from`], charging one unit per visited search node.
pub fn refinements_within(
    t: &Transducer,
    c: Sym,
    in_list: &[State],
    useful: &[bool],
    budget: &mut Budget,
) -> Result<Vec<(Vec<State>, SymSet)>> {
    let all: Vec<_> = edges(t)
        .into_iter()
        .filter(|e| useful[e.3 as usize] && in_list.contains(&e.0))
        .collect();
    let mut search = Search {
        all: &all,
        in_list,
        c,
        seen: HashSet::new(),
        out: Vec::new(),
        budget,
    };
    search.visit(0, &mut Vec::new())?;
    let mut out = search.out;
    out.sort();
    Ok(out)
}

struct Search<'a> {
    all: &'a [(State, Sym, Sym, State)],
    in_list: &'a [State],
    c: Sym,
    seen: HashSet<(usize, Vec<State>)>,
    out: Vec<(Vec<State>, SymSet)>,
    budget: &'a mut Budget,
}

impl Search<'_> {
    /// Permissible letters once every transition between used states is added.
    fn closure(&self, ins: usize, outs: &[State]) -> SymSet {
        let mut perm = SymSet::singleton(self.c);
        loop {
            let mut next = perm;
            for &(p, a, b, q) in self.all {
                if perm.contains(b) && self.in_list[..ins].contains(&p) && outs.contains(&q) {
                    next.insert(a);
                }
            }
            if next == perm {
                return perm;
            }
            perm = next;
        }
    }

    fn visit(&mut self, ins: usize, outs: &mut Vec<State>) -> Result<()> {
        if !self.seen.insert((ins, outs.clone())) {
            return Ok(());
        }
        self.budget.charge(1)?;
        let perm = self.closure(ins, outs);
        if ins == self.in_list.len() {
            self.out.push((outs.clone(), perm));
        }
        let next_in = self.in_list.get(ins).copied();
        let mut moves: Vec<(bool, Option<State>)> = Vec::new();
        for &(p, _, b, q) in self.all {
            if !perm.contains(b) {
                continue;
            }
            let new_in = Some(p) == next_in;
            if !new_in && !self.in_list[..ins].contains(&p) {
                continue;
            }
            let new_out = (!outs.contains(&q)).then_some(q);
            if new_in || new_out.is_some() {
                moves.push((new_in, new_out));
            }
        }
        moves.sort();
        moves.dedup();
        for (new_in, new_out) in moves {
            if let Some(q) = new_out {
                outs.push(q);
            }
            self.visit(ins + usize::from(new_in), outs)?;
            if new_out.is_some() {
                outs.pop();
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::model;

    fn useful(t: &Transducer) -> Vec<bool> {
        let n = t.nfa().num_states();
        let co = t.nfa().exact_coreach(n);
        (0..n).map(|q| co.iter().any(|l| l.contains(q))).collect()
    }

    #[test]
    fn empty_lists_give_the_empty_column() {
        let r = model("philosophers").unwrap().rts;
        for c in r.alphabet.symbols() {
            let lr = local_refinement(&r.step, c, &[], &[]).unwrap();
            assert!(lr.transitions.is_empty());
            assert_eq!(lr.permissible(c), SymSet::singleton(c));
        }
    }

    #[test]
    fn single_eating_transition() {
        let r = model("philosophers").unwrap().rts;
        let (t, e) = (r.word("t").unwrap()[0], r.word("e").unwrap()[0]);
        let (p, q) = r
            .step
            .nfa()
            .transitions()
            .map(|(p, s, q)| (p, r.step.split(s), q))
            .find(|&(_, ab, _)| ab == (t, e))
            .map(|(p, _, q)| (p, q))
            .unwrap();
        let lr = local_refinement(&r.step, e, &[p], &[q]).unwrap();
        assert!(lr.transitions.contains(&(p, t, e, q)));
        assert!(lr.sources.contains(t));
    }

    #[test]
    fn isolated_state_has_no_column() {
        let s = crate::automata::Alphabet::new(["a"]).unwrap();
        let mut t = Transducer::new(&s, &s);
        t.nfa_mut().add_state();
        t.nfa_mut().add_state();
        t.add_transition(0, 0, 0, 0);
        assert!(local_refinement(&t, 0, &[1], &[0]).is_none());
        assert!(local_refinement(&t, 0, &[0], &[0]).is_some());
    }

    #[test]
    fn enumeration_agrees_with_greedy() {
        for name in ["philosophers", "berkeley", "token-passing", "ladder2"] {
            let r = model(name).unwrap().rts;
            let t = &r.step;
            let u = useful(t);
            let n = t.nfa().num_states() as State;
            let mut lists: Vec<Vec<State>> = vec![vec![]];
            lists.extend((0..n).map(|q| vec![q]));
            lists.extend((0..n).flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| vec![p, q])));
            for c in r.alphabet.symbols() {
                // Berkeley's two-state in-lists admit too many out-lists to list.
                for inl in lists.iter().filter(|l| name != "berkeley" || l.len() < 2) {
                    let found = refinements_from(t, c, inl, &u);
                    for outl in &lists {
                        if outl.iter().any(|&q| !u[q as usize]) {
                            continue;
                        }
                        let greedy = local_refinement(t, c, inl, outl);
                        let listed = found.iter().find(|(o, _)| o == outl);
                        assert_eq!(greedy.is_some(), listed.is_some(), "{name} {c} {inl:?} {outl:?}");
                        if let (Some(g), Some((_, perm))) = (greedy, listed) {
                            assert_eq!(g.permissible(c), *perm);
                        }
                    }
                }
            }
        }
    }
}
