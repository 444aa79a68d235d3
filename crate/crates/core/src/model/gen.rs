//! Parameterized system generators: the ladder family and the Turing machine encoding.

use std::collections::HashSet;

use crate::automata::{Alphabet, Nfa, State, Sym, Transducer};
use crate::error::{Error, Result};

use super::re::{cat, class, star, sym};
use super::Rts;

fn binary() -> Alphabet {
    Alphabet::new(["0", "1"]).unwrap()
}

fn zeros(s: &Alphabet) -> Nfa {
    star(sym(0)).to_nfa(s)
}

fn contains_one(s: &Alphabet) -> Nfa {
    cat([star(class([0, 1])), sym(1), star(class([0, 1]))]).to_nfa(s)
}

/// The ladder system whose reachable set needs `b + 1` clauses to be captured.
///
/// Transitions rewrite a length-`b` prefix holding exactly one `1` to all
/// zeros and leave an arbitrary suffix that may change freely.
pub fn ladder(b: usize) -> Rts {
    assert!(b >= 1);
    let s = binary();
    let mut t = Transducer::new(&s, &s);
    // State 2k + seen: k prefix letters read, `seen` whether the 1 was among them.
    let n = 2 * (b + 1);
    for _ in 0..n {
        t.nfa_mut().add_state();
    }
    let id = |k: usize, seen: usize| (2 * k + seen) as State;
    t.nfa_mut().set_initial(id(0, 0));
    t.nfa_mut().set_accepting(id(b, 1), true);
    for k in 0..b {
        t.add_transition(id(k, 0), 0, 0, id(k + 1, 0));
        t.add_transition(id(k, 0), 1, 0, id(k + 1, 1));
        t.add_transition(id(k, 1), 0, 0, id(k + 1, 1));
    }
    for x in 0..2 {
        for y in 0..2 {
            t.add_transition(id(b, 1), x, y, id(b, 1));
        }
    }
    let step = Transducer::from_nfa(t.nfa().trim()).unwrap();
    Rts::new(&s, zeros(&s), step)
        .unwrap()
        .with_unsafe("one", contains_one(&s))
}

/// Like the ladder family, but the free suffix is exactly one letter, so at
/// length `ℓ` the system behaves like `ladder(ℓ - 1)`.
pub fn ladder_unbounded() -> Rts {
    let s = binary();
    let mut t = Transducer::new(&s, &s);
    for _ in 0..3 {
        t.nfa_mut().add_state();
    }
    t.nfa_mut().set_initial(0);
    t.nfa_mut().set_accepting(2, true);
    t.add_transition(0, 0, 0, 0);
    t.add_transition(0, 1, 0, 1);
    t.add_transition(1, 0, 0, 1);
    for x in 0..2 {
        for y in 0..2 {
            t.add_transition(1, x, y, 2);
        }
    }
    Rts::new(&s, zeros(&s), t).unwrap().with_unsafe("one", contains_one(&s))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Move {
    Left,
    Right,
}

/// A deterministic machine confined to `cells` tape cells.
#[derive(Clone, Debug)]
pub struct TuringMachine {
    pub states: Vec<String>,
    /// Tape symbols; index 0 is the blank.
    pub tape: Vec<String>,
    pub initial: usize,
    pub accepting: usize,
    /// `delta[q * tape.len() + g] = (q', g', move)`.
    pub delta: Vec<(usize, usize, Move)>,
    pub cells: usize,
}

impl TuringMachine {
    /// Two states, one blank symbol: the first step moves right into the final state.
    pub fn demo() -> Self {
        TuringMachine {
            states: vec!["q0".into(), "qf".into()],
            tape: vec!["B".into()],
            initial: 0,
            accepting: 1,
            delta: vec![(1, 0, Move::Right), (1, 0, Move::Right)],
            cells: 2,
        }
    }

    fn step(&self, q: usize, g: usize) -> (usize, usize, Move) {
        self.delta[q * self.tape.len() + g]
    }

    /// Runs the machine until it repeats a configuration or stutters in the final state.
    pub fn run(&self) -> Result<Vec<(usize, usize, Vec<usize>)>> {
        let mut cfg = (self.initial, 0usize, vec![0usize; self.cells]);
        let mut seen = HashSet::new();
        let mut trace = Vec::new();
        while seen.insert(cfg.clone()) {
            trace.push(cfg.clone());
            let (q, head, ref tape) = cfg;
            if q == self.accepting {
                break;
            }
            let (q2, g2, mv) = self.step(q, tape[head]);
            let next = match mv {
                Move::Left if head > 0 => head - 1,
                Move::Right if head + 1 < self.cells => head + 1,
                _ => {
                    return Err(Error::validation(
                        "tm",
                        format!("head leaves the {}-cell tape", self.cells),
                    ))
                }
            };
            let mut tape = tape.clone();
            tape[head] = g2;
            cfg = (q2, next, tape);
        }
        Ok(trace)
    }
}

/// Letters of the encoding: separator, empty cell, tape symbols, then head letters `q:g`.
pub struct TmLetters {
    pub alphabet: Alphabet,
    pub sep: Sym,
    pub hole: Sym,
    tape: usize,
}

impl TmLetters {
    fn new(tm: &TuringMachine) -> Result<Self> {
        let mut names = vec![".".to_string(), "_".to_string()];
        names.extend(tm.tape.iter().cloned());
        for q in &tm.states {
            for g in &tm.tape {
                names.push(format!("{q}:{g}"));
            }
        }
        Ok(TmLetters {
            alphabet: Alphabet::new(names)?,
            sep: 0,
            hole: 1,
            tape: tm.tape.len(),
        })
    }

    pub fn plain(&self, g: usize) -> Sym {
        (2 + g) as Sym
    }

    pub fn head(&self, q: usize, g: usize) -> Sym {
        (2 + self.tape + q * self.tape + g) as Sym
    }

    /// `(state, tape symbol)` of a head letter.
    pub fn as_head(&self, s: Sym) -> Option<(usize, usize)> {
        let i = s as usize;
        (i >= 2 + self.tape).then(|| ((i - 2 - self.tape) / self.tape, (i - 2 - self.tape) % self.tape))
    }

    pub fn as_plain(&self, s: Sym) -> Option<usize> {
        let i = s as usize;
        (2..2 + self.tape).contains(&i).then(|| i - 2)
    }

    /// Encodes a machine configuration as one page.
    pub fn page(&self, q: usize, head: usize, tape: &[usize]) -> Vec<Sym> {
        tape.iter()
            .enumerate()
            .map(|(i, &g)| if i == head { self.head(q, g) } else { self.plain(g) })
            .collect()
    }
}

/// The letter written one page below the middle of `abc`; `None` where undefined.
fn next_letter(tm: &TuringMachine, l: &TmLetters, a: Sym, b: Sym, c: Sym) -> Option<Sym> {
    if b == l.sep || b == l.hole || a == l.hole || c == l.hole {
        return None;
    }
    let heads = [a, b, c].iter().filter(|&&x| l.as_head(x).is_some()).count();
    if heads > 1 {
        return None;
    }
    if let Some((q, g)) = l.as_head(b) {
        if q == tm.accepting {
            return Some(b);
        }
        let (_, g2, _) = tm.step(q, g);
        return Some(l.plain(g2));
    }
    let g = l.as_plain(b)?;
    if let Some((q, h)) = l.as_head(a) {
        let (q2, _, mv) = tm.step(q, h);
        if q != tm.accepting && mv == Move::Right {
            return Some(l.head(q2, g));
        }
    }
    if let Some((q, h)) = l.as_head(c) {
        let (q2, _, mv) = tm.step(q, h);
        if q != tm.accepting && mv == Move::Left {
            return Some(l.head(q2, g));
        }
    }
    Some(b)
}

/// The system that writes the run of `tm` page by page.
///
/// Configurations are `.α₀(._ⁿ)^m` with `n = tm.cells`; one step picks a
/// position `i`, reads the letters at `i-1, i, i+1` and replaces the `_`
/// at position `i+n+1` by the letter the machine's next configuration
/// carries there. Unsafe set `accept`: no `_` left and some final-state letter.
pub fn tm_rts(tm: &TuringMachine) -> Result<(Rts, TmLetters)> {
    if tm.cells == 0 || tm.tape.is_empty() || tm.delta.len() != tm.states.len() * tm.tape.len() {
        return Err(Error::validation("tm", "malformed machine description"));
    }
    tm.run()?;
    let l = TmLetters::new(tm)?;
    let s = l.alphabet.clone();
    let k = s.len() as Sym;
    let n = tm.cells;

    let mut init = Nfa::with_states(&s, n + 2);
    init.set_initial(0);
    init.add_transition(0, l.sep, 1);
    let first = l.page(tm.initial, 0, &vec![0; n]);
    for (i, &x) in first.iter().enumerate() {
        init.add_transition(1 + i as State, x, 2 + i as State);
    }
    let page_end = (n + 1) as State;
    init.set_accepting(page_end, true);
    // `._ⁿ` loops back to the end of the first page.
    let mut prev = page_end;
    for i in 0..=n {
        let q = if i == n { page_end } else { init.add_state() };
        init.add_transition(prev, if i == 0 { l.sep } else { l.hole }, q);
        prev = q;
    }

    let mut t = Transducer::new(&s, &s);
    let nfa = t.nfa_mut();
    let start = nfa.add_state();
    let done = nfa.add_state();
    nfa.set_initial(start);
    nfa.set_accepting(done, true);
    for x in 0..k {
        t.add_transition(start, x, x, start);
        t.add_transition(done, x, x, done);
    }
    // After reading `a`, then `a b`; after `c` only the written letter matters.
    let mut after_a = Vec::new();
    for a in 0..k {
        let q = t.nfa_mut().add_state();
        t.add_transition(start, a, a, q);
        after_a.push(q);
    }
    let mut counters: Vec<Option<Vec<State>>> = vec![None; k as usize];
    for a in 0..k {
        for b in 0..k {
            let mut qab = None;
            for c in 0..k {
                let Some(d) = next_letter(tm, &l, a, b, c) else {
                    continue;
                };
                let qab = *qab.get_or_insert_with(|| {
                    let q = t.nfa_mut().add_state();
                    t.add_transition(after_a[a as usize], b, b, q);
                    q
                });
                let chain = counters[d as usize].get_or_insert_with(|| {
                    // chain[j]: j letters after `c` read; the hole sits after n-1 of them.
                    let mut chain = Vec::new();
                    for _ in 0..n {
                        chain.push(t.nfa_mut().add_state());
                    }
                    for j in 0..n - 1 {
                        for x in 0..k {
                            t.add_transition(chain[j], x, x, chain[j + 1]);
                        }
                    }
                    t.add_transition(chain[n - 1], l.hole, d, done);
                    chain
                });
                let c0 = chain[0];
                t.add_transition(qab, c, c, c0);
            }
        }
    }
    let step = Transducer::from_nfa(t.nfa().trim())?;

    let heads: Vec<Sym> = (0..tm.tape.len()).map(|g| l.head(tm.accepting, g)).collect();
    let no_hole = class((0..k).filter(|&x| x != l.hole));
    let unsafe_accept = cat([star(no_hole.clone()), class(heads), star(no_hole)]).to_nfa(&s);
    let r = Rts::new(&s, init.trim(), step)?.with_unsafe("accept", unsafe_accept);
    Ok((r, l))
}
