//! Interpreter-based over-approximations: inductive representations, potential
//! reachability, the `Ind_V` automaton, and certificate checking.
//!
//! Everything is built lazily. States of the composite automata are tuples of
//! component states, and subset constructions only visit reachable subsets.

use crate::automata::lazy::{
    materialize, shortest_witness, Bounded, Complement, Determinizer, Guided, LazyNfa, Product, SharedDeterminizer,
};
use crate::automata::text::{parse_items, write_nfa, Item};
use crate::automata::{complement, minimize, Alphabet, Dfa, Nfa, State, Sym, Transducer, Word};
use crate::bforms::PowerWord;
use crate::error::{Error, Result};
use crate::model::Rts;
use crate::verdict::{Condition, Verdict, Witness};

pub use crate::bforms::{build_vb, Interpretation};

fn check_alphabet(r: &Rts, a: &Nfa, what: &str) -> Result<()> {
    if a.alphabet() != &r.alphabet {
        return Err(Error::AlphabetMismatch(what.into()));
    }
    Ok(())
}

/// Representations `W` with some step `u ⇝ w` where `u ⊨ W` and `w ⊭ W`.
///
/// States are `(V-state on u, T-state, V-state on w)`.
#[derive(Clone)]
pub struct NonInductive {
    v: Interpretation,
    step: Transducer,
}

impl NonInductive {
    pub fn new(r: &Rts, v: &Interpretation) -> Self {
        NonInductive {
            v: v.clone(),
            step: r.step.clone(),
        }
    }

    fn push(&self, q: &(State, State, State), g: Sym, out: &mut Vec<(State, State, State)>) {
        let (src, t, dst) = *q;
        for &(p, t2) in self.step.nfa().out(t) {
            let (a, b) = self.step.split(p);
            let dst2 = self.v.next(dst, b, g);
            // A fully satisfied target can never witness non-inductiveness.
            if !self.v.is_accepting(dst2) {
                out.push((self.v.next(src, a, g), t2, dst2));
            }
        }
    }
}

impl LazyNfa for NonInductive {
    type State = (State, State, State);

    fn alphabet(&self) -> &Alphabet {
        self.v.gamma()
    }

    fn initial(&self) -> Vec<Self::State> {
        let s = self.v.initial();
        self.step.nfa().initial().iter().map(|&t| (s, t, s)).collect()
    }

    fn is_accepting(&self, q: &Self::State) -> bool {
        self.v.is_accepting(q.0) && self.step.nfa().is_accepting(q.1) && !self.v.is_accepting(q.2)
    }

    fn successors(&self, q: &Self::State, out: &mut Vec<(Sym, Self::State)>) {
        let mut buf = Vec::new();
        for g in self.v.gamma().symbols() {
            buf.clear();
            self.push(q, g, &mut buf);
            out.extend(buf.drain(..).map(|s| (g, s)));
        }
    }

    fn successors_on(&self, q: &Self::State, g: Sym, out: &mut Vec<Self::State>) {
        self.push(q, g, out);
    }

    fn reduce(&self, set: &mut Vec<Self::State>) {
        keep_maximal(set);
    }
}

/// Clause bits only ever get set, acceptance wants all of them on the left and
/// not all on the right. So `(src, x, dst)` accepts a subset of what
/// `(src', x, dst')` accepts whenever `src ⊆ src'` and `dst' ⊆ dst`, and a
/// subset construction only needs the maximal states.
fn keep_maximal(set: &mut Vec<(State, State, State)>) {
    let below = |q: &(State, State, State), p: &(State, State, State)| {
        q != p && q.1 == p.1 && q.0 & !p.0 == 0 && p.2 & !q.2 == 0
    };
    let all = std::mem::take(set);
    set.extend(all.iter().filter(|q| !all.iter().any(|p| below(q, p))).copied());
}

pub fn non_inductive_reps(r: &Rts, v: &Interpretation, budget: usize) -> Result<Nfa> {
    materialize(&NonInductive::new(r, v), budget)
}

pub fn inductive_reps_dfa(r: &Rts, v: &Interpretation, budget: usize) -> Result<Dfa> {
    let bad = Determinizer::new(NonInductive::new(r, v), budget).into_dfa()?;
    Ok(minimize(&complement(&bad)))
}

/// A DFA agreeing with [`inductive_reps_dfa`] on representations of length
/// at most `max`. Longer ones are all accepted.
pub fn inductive_reps_dfa_bounded(r: &Rts, v: &Interpretation, max: usize, budget: usize) -> Result<Dfa> {
    let bounded = Bounded {
        inner: NonInductive::new(r, v),
        max,
    };
    let bad = Determinizer::new(bounded, budget).into_dfa()?;
    Ok(minimize(&complement(&bad)))
}

/// Pairs `⟨u, w⟩` separated by some inductive representation: `u ⊨ W`, `w ⊭ W`.
///
/// States are `(V-state on u, Inductive-DFA state, V-state on w)`.
#[derive(Clone)]
pub struct NotPotReach {
    v: Interpretation,
    inductive: Dfa,
    live: Vec<bool>,
    pairs: Alphabet,
}

impl NotPotReach {
    pub fn new(v: &Interpretation, inductive: Dfa) -> Self {
        let live = coreachable(&inductive);
        NotPotReach {
            pairs: Alphabet::pair(v.sigma(), v.sigma()),
            v: v.clone(),
            inductive,
            live,
        }
    }

    fn push(&self, q: &(State, State, State), g: Sym, a: Sym, c: Sym, out: &mut Vec<(State, State, State)>) {
        let d = self.inductive.next(q.1, g);
        if !self.live[d as usize] {
            return;
        }
        let dst = self.v.next(q.2, c, g);
        if !self.v.is_accepting(dst) {
            out.push((self.v.next(q.0, a, g), d, dst));
        }
    }
}

fn coreachable(d: &Dfa) -> Vec<bool> {
    let n = d.num_states();
    let k = d.alphabet().len() as Sym;
    let mut preds: Vec<Vec<State>> = vec![Vec::new(); n];
    for q in 0..n as State {
        for g in 0..k {
            preds[d.next(q, g) as usize].push(q);
        }
    }
    let mut live: Vec<bool> = (0..n as State).map(|q| d.is_accepting(q)).collect();
    let mut stack: Vec<State> = (0..n as State).filter(|&q| live[q as usize]).collect();
    while let Some(q) = stack.pop() {
        for &p in &preds[q as usize] {
            if !live[p as usize] {
                live[p as usize] = true;
                stack.push(p);
            }
        }
    }
    live
}

impl LazyNfa for NotPotReach {
    type State = (State, State, State);

    fn alphabet(&self) -> &Alphabet {
        &self.pairs
    }

    fn initial(&self) -> Vec<Self::State> {
        let s = self.v.initial();
        vec![(s, self.inductive.start(), s)]
    }

    fn is_accepting(&self, q: &Self::State) -> bool {
        self.v.is_accepting(q.0) && self.inductive.is_accepting(q.1) && !self.v.is_accepting(q.2)
    }

    fn successors(&self, q: &Self::State, out: &mut Vec<(Sym, Self::State)>) {
        let n = self.v.sigma().len() as Sym;
        let mut buf = Vec::new();
        for a in 0..n {
            for c in 0..n {
                buf.clear();
                for g in self.v.gamma().symbols() {
                    self.push(q, g, a, c, &mut buf);
                }
                out.extend(buf.drain(..).map(|s| (a * n + c, s)));
            }
        }
    }

    fn successors_on(&self, q: &Self::State, p: Sym, out: &mut Vec<Self::State>) {
        let n = self.v.sigma().len() as Sym;
        for g in self.v.gamma().symbols() {
            self.push(q, g, p / n, p % n, out);
        }
    }

    fn reduce(&self, set: &mut Vec<Self::State>) {
        keep_maximal(set);
    }
}

pub fn not_potreach(r: &Rts, v: &Interpretation, budget: usize) -> Result<Transducer> {
    let pot = NotPotReach::new(v, inductive_reps_dfa(r, v, budget)?);
    Transducer::from_nfa(materialize(&pot, budget)?)
}

/// `Ind_V`: configurations `w` such that some initial `u` is not separated from `w`.
///
/// States are `(initial-automaton state, subset of NotPotReach states)`.
pub struct IndV {
    initial: Nfa,
    sigma: Alphabet,
    pot: SharedDeterminizer<NotPotReach>,
}

impl IndV {
    pub fn new(r: &Rts, v: &Interpretation, budget: usize) -> Result<Self> {
        Ok(Self::with_inductive(r, v, inductive_reps_dfa(r, v, budget)?, budget))
    }

    /// Exact on configurations of length at most `max` only.
    pub fn bounded(r: &Rts, v: &Interpretation, max: usize, budget: usize) -> Result<Self> {
        Ok(Self::with_inductive(
            r,
            v,
            inductive_reps_dfa_bounded(r, v, max, budget)?,
            budget,
        ))
    }

    fn with_inductive(r: &Rts, v: &Interpretation, inductive: Dfa, budget: usize) -> Self {
        IndV {
            initial: r.initial.clone(),
            sigma: r.alphabet.clone(),
            pot: SharedDeterminizer::new(NotPotReach::new(v, inductive), budget),
        }
    }

    /// Fails if an internal subset construction ran out of budget.
    pub fn check(&self) -> Result<()> {
        self.pot.check()
    }

    pub fn subsets(&self) -> usize {
        self.pot.num_states()
    }
}

impl LazyNfa for IndV {
    type State = (State, State);

    fn alphabet(&self) -> &Alphabet {
        &self.sigma
    }

    fn initial(&self) -> Vec<Self::State> {
        match self.pot.start() {
            Some(s) => self.initial.initial().iter().map(|&q| (q, s)).collect(),
            None => Vec::new(),
        }
    }

    fn is_accepting(&self, q: &Self::State) -> bool {
        self.initial.is_accepting(q.0) && !self.pot.is_accepting(q.1)
    }

    fn successors(&self, q: &Self::State, out: &mut Vec<(Sym, Self::State)>) {
        let n = self.sigma.len() as Sym;
        for &(a, q2) in self.initial.out(q.0) {
            for c in 0..n {
                match self.pot.next(q.1, a * n + c) {
                    Some(s) => out.push((c, (q2, s))),
                    None => return,
                }
            }
        }
    }

    fn successors_on(&self, q: &Self::State, c: Sym, out: &mut Vec<Self::State>) {
        let n = self.sigma.len() as Sym;
        for &(a, q2) in self.initial.out(q.0) {
            if let Some(s) = self.pot.next(q.1, a * n + c) {
                out.push((q2, s));
            }
        }
    }
}

pub fn ind_v_nfa(r: &Rts, v: &Interpretation, budget: usize) -> Result<Nfa> {
    let ind = IndV::new(r, v, budget)?;
    let a = materialize(&ind, budget);
    ind.check()?;
    a
}

/// The same pipeline with every subset construction cut off after `max`
/// letters: an NFA whose words of length at most `max` are exactly those of
/// `Ind_V`. This keeps large powerword alphabets tractable on short lengths.
pub fn ind_v_nfa_bounded(r: &Rts, v: &Interpretation, max: usize, budget: usize) -> Result<Nfa> {
    let ind = IndV::bounded(r, v, max, budget)?;
    let a = materialize(&Bounded { inner: &ind, max }, budget);
    ind.check()?;
    a
}

/// Words of `Ind_b` of length `len`, in lexicographic order.
pub fn ind_b_words(r: &Rts, b: usize, len: usize, budget: usize) -> Result<Vec<Word>> {
    let v = build_vb(&r.alphabet, b)?;
    let ind = IndV::bounded(r, &v, len, budget)?;
    let words = crate::automata::lazy::words_of_length(&ind, len, budget);
    ind.check()?;
    words
}

pub fn check_safety_indb(r: &Rts, unsafe_set: &Nfa, b: usize, budget: usize) -> Result<Verdict> {
    check_alphabet(r, unsafe_set, "unsafe set")?;
    let v = build_vb(&r.alphabet, b)?;
    let run = || -> Result<Verdict> {
        let ind = IndV::new(r, &v, budget)?;
        let search = shortest_witness(
            &Product {
                left: &ind,
                right: unsafe_set,
            },
            budget,
        );
        ind.check()?;
        let search = search?;
        let verdict = match search.witness {
            None => Verdict::safe(search.explored),
            Some(w) => Verdict::inconclusive(Witness::Config(w), search.explored),
        };
        Ok(verdict.with_size("potreach-subsets", ind.subsets()))
    };
    run().or_else(Verdict::from_error)
}

/// A regular language of `b`-powerwords claimed to be inductive invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub b: usize,
    pub cert: Nfa,
}

/// Reads a single `nfa` block over powerletters such as `{i,s}|{}`.
///
/// The clause count comes from `bound` or, failing that, from the first label.
pub fn parse_certificate(sigma: &Alphabet, text: &str, bound: Option<usize>) -> Result<Certificate> {
    let mut blocks = parse_items(text)?.into_iter().filter_map(|i| match i {
        Item::Block(b) => Some(b),
        Item::Alphabet { .. } => None,
    });
    let block = blocks
        .next()
        .ok_or_else(|| Error::validation("certificate", "no automaton block"))?;
    if let Some(extra) = blocks.next() {
        return Err(Error::validation(
            extra.name,
            "a certificate holds exactly one automaton",
        ));
    }
    let inferred = block.trans.first().map(|t| t.sym.matches('|').count() + 1);
    let b = match (bound, inferred) {
        (Some(b), Some(i)) if b != i => {
            return Err(Error::validation(
                block.name,
                format!("labels have {i} clauses but the bound is {b}"),
            ))
        }
        (Some(b), _) | (None, Some(b)) => b,
        (None, None) => 1,
    };
    if b == 0 || b * sigma.len() > 30 {
        return Err(Error::validation(
            block.name,
            format!("bound {b} is too large for this alphabet"),
        ));
    }
    let cert = block.to_nfa(&Alphabet::power(sigma, b))?;
    Ok(Certificate { b, cert })
}

pub fn print_certificate(c: &Certificate, name: &str) -> String {
    let mut out = String::new();
    write_nfa(&mut out, name, &c.cert);
    out
}

/// Pairs `⟨u, W⟩` with `u` initial, `W` in the certificate and `u ⊭ W`, over `Σ × Γ`.
struct Violations<'a> {
    initial: &'a Nfa,
    cert: &'a Nfa,
    v: Interpretation,
    pairs: Alphabet,
}

impl LazyNfa for Violations<'_> {
    type State = (State, State, State);

    fn alphabet(&self) -> &Alphabet {
        &self.pairs
    }

    fn initial(&self) -> Vec<Self::State> {
        let mut out = Vec::new();
        for &p in self.initial.initial() {
            for &c in self.cert.initial() {
                out.push((p, c, self.v.initial()));
            }
        }
        out
    }

    fn is_accepting(&self, q: &Self::State) -> bool {
        self.initial.is_accepting(q.0) && self.cert.is_accepting(q.1) && !self.v.is_accepting(q.2)
    }

    fn successors(&self, q: &Self::State, out: &mut Vec<(Sym, Self::State)>) {
        let k = self.v.gamma().len() as Sym;
        for &(a, p) in self.initial.out(q.0) {
            for &(g, c) in self.cert.out(q.1) {
                let s = self.v.next(q.2, a, g);
                if !self.v.is_accepting(s) {
                    out.push((a * k + g, (p, c, s)));
                }
            }
        }
    }
}

/// Configurations violating some formula of some certificate part.
///
/// States are `(part, certificate state, V-state)`.
struct Excluded<'a> {
    sigma: Alphabet,
    parts: Vec<(&'a Nfa, Interpretation)>,
}

impl LazyNfa for Excluded<'_> {
    type State = (usize, State, State);

    fn alphabet(&self) -> &Alphabet {
        &self.sigma
    }

    fn initial(&self) -> Vec<Self::State> {
        let mut out = Vec::new();
        for (i, (cert, v)) in self.parts.iter().enumerate() {
            for &c in Nfa::initial(cert) {
                out.push((i, c, v.initial()));
            }
        }
        out
    }

    fn is_accepting(&self, q: &Self::State) -> bool {
        let (cert, v) = &self.parts[q.0];
        Nfa::is_accepting(cert, q.1) && !v.is_accepting(q.2)
    }

    fn successors(&self, q: &Self::State, out: &mut Vec<(Sym, Self::State)>) {
        let (cert, v) = &self.parts[q.0];
        for &(g, c) in cert.out(q.1) {
            for a in self.sigma.symbols() {
                let s = v.next(q.2, a, g);
                if !v.is_accepting(s) {
                    out.push((a, (q.0, c, s)));
                }
            }
        }
    }

    fn successors_on(&self, q: &Self::State, a: Sym, out: &mut Vec<Self::State>) {
        let (cert, v) = &self.parts[q.0];
        for &(g, c) in cert.out(q.1) {
            let s = v.next(q.2, a, g);
            if !v.is_accepting(s) {
                out.push((q.0, c, s));
            }
        }
    }
}

pub fn check_certificate(r: &Rts, unsafe_set: &Nfa, c: &Certificate, budget: usize) -> Result<Verdict> {
    check_certificates(r, unsafe_set, std::slice::from_ref(c), budget)
}

/// Checks that the conjunction of all certificate parts is an inductive
/// invariant disjoint from the unsafe set. Conditions are checked in the order
/// (a), (b), (c) and the first failure is reported.
pub fn check_certificates(r: &Rts, unsafe_set: &Nfa, parts: &[Certificate], budget: usize) -> Result<Verdict> {
    check_alphabet(r, unsafe_set, "unsafe set")?;
    let mut interps = Vec::with_capacity(parts.len());
    for c in parts {
        let v = build_vb(&r.alphabet, c.b)?;
        if c.cert.alphabet() != v.gamma() {
            return Err(Error::AlphabetMismatch("certificate".into()));
        }
        interps.push(v);
    }
    let mut explored = 0;
    let fail = |cond: Condition, mut v: Verdict| {
        v.failed = Some(cond);
        Ok(v)
    };

    for (c, v) in parts.iter().zip(&interps) {
        let search = Guided {
            left: &c.cert,
            right: NonInductive::new(r, v),
        };
        match shortest_witness(&search, budget) {
            Ok(s) => {
                explored += s.explored;
                if let Some(w) = s.witness {
                    let phi = PowerWord::new(&r.alphabet, c.b, w);
                    return fail(
                        Condition::Inductive,
                        Verdict::inconclusive(Witness::Formula(phi), explored),
                    );
                }
            }
            Err(e) => return fail(Condition::Inductive, Verdict::from_error(e)?),
        }
    }

    for (c, v) in parts.iter().zip(&interps) {
        let search = Violations {
            initial: &r.initial,
            cert: &c.cert,
            v: v.clone(),
            pairs: Alphabet::pair(&r.alphabet, v.gamma()),
        };
        match shortest_witness(&search, budget) {
            Ok(s) => {
                explored += s.explored;
                if let Some(pw) = s.witness {
                    let k = v.gamma().len() as Sym;
                    let u: Word = pw.iter().map(|p| p / k).collect();
                    let phi = PowerWord::new(&r.alphabet, c.b, pw.iter().map(|p| p % k).collect());
                    return fail(
                        Condition::Invariant,
                        Verdict::inconclusive(Witness::Violation(u, phi), explored),
                    );
                }
            }
            Err(e) => return fail(Condition::Invariant, Verdict::from_error(e)?),
        }
    }

    let excluded = Complement::new(
        Excluded {
            sigma: r.alphabet.clone(),
            parts: parts.iter().map(|c| &c.cert).zip(interps.iter().cloned()).collect(),
        },
        budget,
    );
    let search = shortest_witness(
        &Guided {
            left: unsafe_set,
            right: &excluded,
        },
        budget,
    );
    let search = excluded.det.check().and(search);
    match search {
        Ok(s) => {
            explored += s.explored;
            match s.witness {
                Some(w) => fail(
                    Condition::Exclusion,
                    Verdict::inconclusive(Witness::Config(w), explored),
                ),
                None => Ok(Verdict::safe(explored)),
            }
        }
        Err(e) => fail(Condition::Exclusion, Verdict::from_error(e)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::lazy::words_of_length;
    use crate::bforms::inductive_powerwords_at_length;
    use crate::model::{model, reach_at_length};
    use crate::verdict::Status;

    const BUDGET: usize = 1 << 20;

    fn rts(name: &str) -> Rts {
        model(name).unwrap().rts
    }

    #[test]
    fn philosophers_non_inductive_examples() {
        let r = rts("philosophers");
        let v = build_vb(&r.alphabet, 1).unwrap();
        let bad = non_inductive_reps(&r, &v, BUDGET).unwrap();
        let t = PowerWord::parse(&r.alphabet, 1, "{t} {} {} {}").unwrap();
        let te = PowerWord::parse(&r.alphabet, 1, "{t,e} {} {} {}").unwrap();
        assert!(bad.accepts(t.letters()));
        assert!(!bad.accepts(te.letters()));
        let good = inductive_reps_dfa(&r, &v, BUDGET).unwrap();
        assert!(good.accepts(te.letters()) && !good.accepts(t.letters()));
    }

    #[test]
    fn empty_step_relation_makes_everything_inductive() {
        let s = Alphabet::new(["a", "b"]).unwrap();
        let r = Rts::new(&s, Nfa::universal(&s), Transducer::new(&s, &s)).unwrap();
        let v = build_vb(&s, 1).unwrap();
        assert!(crate::automata::is_empty_with_witness(&non_inductive_reps(&r, &v, BUDGET).unwrap()).is_none());
        let d = inductive_reps_dfa(&r, &v, BUDGET).unwrap();
        assert_eq!(d.num_states(), 1);
        assert!(d.is_accepting(d.start()));
    }

    #[test]
    fn inductive_dfa_matches_enumeration_on_ladder() {
        let r = rts("ladder1");
        let v = build_vb(&r.alphabet, 2).unwrap();
        let d = inductive_reps_dfa(&r, &v, BUDGET).unwrap();
        for len in 2..=3 {
            let ind = inductive_powerwords_at_length(&r, 2, len, BUDGET).unwrap();
            let all = words_of_length(d.to_nfa(), len, BUDGET).unwrap();
            let enumerated: Vec<Word> = ind.iter().map(|p| p.letters().to_vec()).collect();
            assert_eq!(all, enumerated);
        }
    }

    #[test]
    fn potreach_is_reflexive_and_contains_reach() {
        let r = rts("philosophers");
        let v = build_vb(&r.alphabet, 1).unwrap();
        let t = not_potreach(&r, &v, BUDGET).unwrap();
        let words = crate::automata::ops::tests::all_words(4, 4);
        for w in &words {
            assert!(!t.accepts(w, w));
        }
        let reach = reach_at_length(&r, 4, BUDGET).unwrap();
        for u in r.initial.words_of_length(4, BUDGET).unwrap() {
            for w in &reach {
                assert!(!t.accepts(&u, w));
            }
        }
    }

    #[test]
    fn ladder_ind2_is_zeros() {
        let r = rts("ladder1");
        let v = build_vb(&r.alphabet, 2).unwrap();
        let a = ind_v_nfa(&r, &v, BUDGET).unwrap();
        assert_eq!(a.words_of_length(2, 10).unwrap(), vec![vec![0, 0]]);
        assert_eq!(ind_b_words(&r, 1, 2, BUDGET).unwrap(), vec![vec![0, 0], vec![0, 1]]);
    }

    #[test]
    fn bounded_pipeline_agrees_up_to_its_bound() {
        for name in ["ladder1", "ladder2", "philosophers"] {
            let r = rts(name);
            let v = build_vb(&r.alphabet, 1).unwrap();
            let full = ind_v_nfa(&r, &v, BUDGET).unwrap();
            let cut = ind_v_nfa_bounded(&r, &v, 3, BUDGET).unwrap();
            for len in 0..=4 {
                let expected = if len <= 3 {
                    full.words_of_length(len, BUDGET).unwrap()
                } else {
                    Vec::new()
                };
                assert_eq!(cut.words_of_length(len, BUDGET).unwrap(), expected, "{name} at {len}");
            }
        }
    }

    #[test]
    fn safety_verdicts() {
        let r = rts("philosophers");
        let dead = r.unsafe_set("deadlock").unwrap();
        assert!(check_safety_indb(&r, dead, 1, BUDGET).unwrap().is_safe());

        let r = rts("berkeley");
        let v = check_safety_indb(&r, r.unsafe_set("two-exclusive").unwrap(), 1, BUDGET).unwrap();
        assert_eq!(v.status, Status::Inconclusive);
        assert_eq!(v.witness, Some(Witness::Config(r.word("e e").unwrap())));

        let r = rts("ladder1");
        let one = r.unsafe_set("one").unwrap();
        assert_eq!(
            check_safety_indb(&r, one, 1, BUDGET).unwrap().status,
            Status::Inconclusive
        );
        assert!(check_safety_indb(&r, one, 2, BUDGET).unwrap().is_safe());
        assert_eq!(check_safety_indb(&r, one, 2, 3).unwrap().status, Status::Budget);
    }

    #[test]
    fn certificate_rejects_non_inductive_singleton() {
        let r = rts("philosophers");
        let text = "nfa cert\nstates 5\nstart 0\naccept 4\n\
                    trans 0 {t} 1\ntrans 1 {} 2\ntrans 2 {} 3\ntrans 3 {} 4\nend\n";
        let c = parse_certificate(&r.alphabet, text, None).unwrap();
        assert_eq!(c.b, 1);
        let v = check_certificate(&r, r.unsafe_set("deadlock").unwrap(), &c, BUDGET).unwrap();
        assert_eq!(v.failed, Some(Condition::Inductive));
        let phi = PowerWord::parse(&r.alphabet, 1, "{t} {} {} {}").unwrap();
        assert_eq!(v.witness, Some(Witness::Formula(phi)));
        assert!(parse_certificate(&r.alphabet, text, Some(2)).is_err());
    }

    #[test]
    fn certificate_conditions_b_and_c() {
        let r = rts("ladder1");
        let one = r.unsafe_set("one").unwrap();
        // The single formula "0 at the first position" at every length ≥ 1.
        let first = "nfa cert\nstates 2\nstart 0\naccept 1\ntrans 0 {0} 1\ntrans 1 {} 1\nend\n";
        let c = parse_certificate(&r.alphabet, first, None).unwrap();
        let v = check_certificate(&r, one, &c, BUDGET).unwrap();
        assert_eq!(v.failed, Some(Condition::Exclusion));
        assert_eq!(v.witness, Some(Witness::Config(r.word("0 1").unwrap())));
        // The empty clause is vacuously inductive but no invariant.
        let falsum = "nfa cert\nstates 3\nstart 0\naccept 2\ntrans 0 {} 1\ntrans 1 {} 2\nend\n";
        let c = parse_certificate(&r.alphabet, falsum, None).unwrap();
        let v = check_certificate(&r, one, &c, BUDGET).unwrap();
        assert_eq!(v.failed, Some(Condition::Invariant));
        let phi = PowerWord::parse(&r.alphabet, 1, "{} {}").unwrap();
        assert_eq!(v.witness, Some(Witness::Violation(r.word("0 0").unwrap(), phi)));
    }
}
