//! b-formulas encoded as powerwords over `(2^Σ)^b`, their semantics, and the
//! satisfaction interpreter `V_b`.
//!
//! Row `i` of a powerword is the clause "some position `j` carries a letter of
//! `X_ij`". A letter of the power alphabet stores its rows as consecutive
//! `|Σ|`-bit groups.

use std::fmt;

use crate::automata::{Alphabet, State, Sym, SymSet, Transducer};
use crate::error::{Error, Result};
use crate::model::{transitions_at_length, Rts};

/// Row `i` of a powerletter.
pub fn row(letter: Sym, sigma_len: usize, i: usize) -> SymSet {
    SymSet((letter >> (i * sigma_len)) & SymSet::full(sigma_len).0)
}

/// The powerletter with the given rows.
pub fn letter(rows: &[SymSet], sigma_len: usize) -> Sym {
    rows.iter()
        .enumerate()
        .fold(0, |acc, (i, r)| acc | (r.0 << (i * sigma_len)))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PowerWord {
    sigma: Alphabet,
    b: usize,
    letters: Vec<Sym>,
}

impl PowerWord {
    pub fn new(sigma: &Alphabet, b: usize, letters: Vec<Sym>) -> Self {
        let gamma = Alphabet::power(sigma, b);
        assert!(
            letters.iter().all(|&l| (l as usize) < gamma.len()),
            "powerletter out of range"
        );
        PowerWord {
            sigma: sigma.clone(),
            b,
            letters,
        }
    }

    /// `clauses[i][j]` is the letter set of clause `i` at position `j`.
    pub fn from_clauses(sigma: &Alphabet, clauses: &[Vec<SymSet>]) -> Self {
        let b = clauses.len();
        let len = clauses.first().map_or(0, Vec::len);
        assert!(clauses.iter().all(|c| c.len() == len), "clauses of different lengths");
        let letters = (0..len)
            .map(|j| letter(&clauses.iter().map(|c| c[j]).collect::<Vec<_>>(), sigma.len()))
            .collect();
        PowerWord::new(sigma, b, letters)
    }

    /// Whitespace-separated powerletters such as `{t,e}|{} {}|{b}`.
    pub fn parse(sigma: &Alphabet, b: usize, text: &str) -> Result<Self> {
        let gamma = Alphabet::power(sigma, b);
        let letters = text
            .split_whitespace()
            .map(|t| {
                gamma
                    .index_of(t)
                    .ok_or_else(|| Error::validation("powerword", format!("bad powerletter `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PowerWord::new(sigma, b, letters))
    }

    pub fn sigma(&self) -> &Alphabet {
        &self.sigma
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Sym] {
        &self.letters
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::power(&self.sigma, self.b)
    }

    pub fn clause(&self, i: usize, j: usize) -> SymSet {
        row(self.letters[j], self.sigma.len(), i)
    }

    pub fn satisfies(&self, w: &[Sym]) -> Result<bool> {
        satisfies(w, self)
    }

    /// Componentwise union of two powerwords with one clause each.
    pub fn union(&self, other: &PowerWord) -> PowerWord {
        assert!(self.b == 1 && other.b == 1 && self.len() == other.len());
        let letters = self.letters.iter().zip(&other.letters).map(|(x, y)| x | y).collect();
        PowerWord::new(&self.sigma, 1, letters)
    }

    /// Appends a clause row.
    pub fn with_clause(&self, clause: &[SymSet]) -> PowerWord {
        assert_eq!(clause.len(), self.len());
        let n = self.sigma.len();
        let letters = self
            .letters
            .iter()
            .zip(clause)
            .map(|(&l, c)| l | (c.0 << (self.b * n)))
            .collect();
        PowerWord::new(&self.sigma, self.b + 1, letters)
    }
}

impl fmt::Display for PowerWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gamma = self.alphabet();
        let parts: Vec<String> = self.letters.iter().map(|&l| gamma.name(l)).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl fmt::Debug for PowerWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PowerWord({self})")
    }
}

/// Every clause row has a position whose letter of `w` is in the row's set.
pub fn satisfies(w: &[Sym], phi: &PowerWord) -> Result<bool> {
    if w.len() != phi.len() {
        return Err(Error::LengthMismatch {
            word: w.len(),
            formula: phi.len(),
        });
    }
    Ok((0..phi.b).all(|i| w.iter().enumerate().any(|(j, &a)| phi.clause(i, j).contains(a))))
}

/// A complete deterministic interpreter over `Σ × Γ` with states `0..num_states`.
///
/// Only the satisfaction interpreter is provided; its transition function is
/// computed on demand because `Γ` can have tens of thousands of letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interpretation {
    sigma: Alphabet,
    gamma: Alphabet,
    b: usize,
}

impl Interpretation {
    pub fn sigma(&self) -> &Alphabet {
        &self.sigma
    }

    pub fn gamma(&self) -> &Alphabet {
        &self.gamma
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn num_states(&self) -> usize {
        1 << self.b
    }

    pub fn initial(&self) -> State {
        0
    }

    pub fn is_accepting(&self, q: State) -> bool {
        q as usize == self.num_states() - 1
    }

    /// States are bitmasks of satisfied clauses; each step adds every clause the letter satisfies.
    pub fn next(&self, q: State, a: Sym, g: Sym) -> State {
        let n = self.sigma.len();
        let mut s = q;
        for i in 0..self.b {
            if row(g, n, i).contains(a) {
                s |= 1 << i;
            }
        }
        s
    }

    /// Clauses satisfied by letter `a`, as a bitmask, for every powerletter.
    pub fn hits(&self, a: Sym) -> impl Iterator<Item = (Sym, State)> + '_ {
        self.gamma.symbols().map(move |g| (g, self.next(0, a, g)))
    }

    /// Whether the representation `g`-word is satisfied by `u`.
    pub fn accepts(&self, u: &[Sym], rep: &[Sym]) -> bool {
        u.len() == rep.len()
            && self.is_accepting(u.iter().zip(rep).fold(self.initial(), |q, (&a, &g)| self.next(q, a, g)))
    }

    /// The interpreter as an explicit transducer; only sensible for small `Γ`.
    pub fn to_transducer(&self) -> Transducer {
        let mut t = Transducer::new(&self.sigma, &self.gamma);
        for _ in 0..self.num_states() {
            t.nfa_mut().add_state();
        }
        t.nfa_mut().set_initial(self.initial());
        t.nfa_mut().set_accepting(self.num_states() as State - 1, true);
        for q in 0..self.num_states() as State {
            for a in self.sigma.symbols() {
                for g in self.gamma.symbols() {
                    t.add_transition(q, a, g, self.next(q, a, g));
                }
            }
        }
        t
    }
}

pub fn build_vb(sigma: &Alphabet, b: usize) -> Result<Interpretation> {
    if b == 0 || b * sigma.len() > 30 {
        return Err(Error::BudgetExceeded {
            limit: 30,
            explored: b * sigma.len(),
        });
    }
    Ok(Interpretation {
        sigma: sigma.clone(),
        gamma: Alphabet::power(sigma, b),
        b,
    })
}

/// All inductive powerwords of length `len` with `b` clauses, in index order.
pub fn inductive_powerwords_at_length(r: &Rts, b: usize, len: usize, budget: usize) -> Result<Vec<PowerWord>> {
    let v = build_vb(&r.alphabet, b)?;
    let k = v.gamma().len();
    let total = (k as f64).powi(len as i32);
    if total > budget as f64 {
        return Err(Error::BudgetExceeded {
            limit: budget,
            explored: total.min(usize::MAX as f64) as usize,
        });
    }
    let steps = transitions_at_length(r, len, budget)?;
    let mut out = Vec::new();
    let mut rep = vec![0 as Sym; len];
    loop {
        let inductive = steps.iter().all(|(u, w)| !v.accepts(u, &rep) || v.accepts(w, &rep));
        if inductive {
            out.push(PowerWord::new(&r.alphabet, b, rep.clone()));
        }
        // Odometer increment, last position fastest.
        let mut j = len;
        loop {
            if j == 0 {
                return Ok(out);
            }
            j -= 1;
            rep[j] += 1;
            if (rep[j] as usize) < k {
                break;
            }
            rep[j] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::model;

    fn tefb() -> Alphabet {
        Alphabet::new(["t", "e", "f", "b"]).unwrap()
    }

    #[test]
    fn satisfaction_examples() {
        let s = tefb();
        let phi = PowerWord::parse(&s, 1, "{t} {}").unwrap();
        assert!(satisfies(&s.parse_word("tf").unwrap(), &phi).unwrap());
        assert!(!satisfies(&s.parse_word("ef").unwrap(), &phi).unwrap());
        let empty = PowerWord::parse(&s, 1, "{} {}").unwrap();
        assert!(!satisfies(&s.parse_word("tf").unwrap(), &empty).unwrap());
        assert!(matches!(satisfies(&[0], &phi), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn vb_state_counts_and_examples() {
        let s = tefb();
        let v1 = build_vb(&s, 1).unwrap();
        assert_eq!(v1.num_states(), 2);
        assert_eq!(build_vb(&s, 2).unwrap().num_states(), 4);
        let phi = PowerWord::parse(&s, 1, "{t} {}").unwrap();
        assert!(v1.accepts(&s.parse_word("tf").unwrap(), phi.letters()));
        assert!(!v1.accepts(&s.parse_word("ef").unwrap(), phi.letters()));
    }

    #[test]
    fn vb_transducer_matches_satisfies_exhaustively() {
        let s = Alphabet::new(["a", "b"]).unwrap();
        for b in 1..=2 {
            let v = build_vb(&s, b).unwrap();
            let t = v.to_transducer();
            let g = v.gamma().len() as Sym;
            for len in 0..=3usize {
                for wi in 0..2u32.pow(len as u32) {
                    let w: Vec<Sym> = (0..len).map(|j| (wi >> j) & 1).collect();
                    for pi in 0..g.pow(len as u32) {
                        let p: Vec<Sym> = (0..len).map(|j| (pi / g.pow(j as u32)) % g).collect();
                        let phi = PowerWord::new(&s, b, p.clone());
                        let expected = satisfies(&w, &phi).unwrap();
                        assert_eq!(t.accepts(&w, &p), expected);
                        assert_eq!(v.accepts(&w, &p), expected);
                    }
                }
            }
        }
    }

    #[test]
    fn philosophers_inductive_powerwords() {
        let r = model("philosophers").unwrap().rts;
        assert_eq!(inductive_powerwords_at_length(&r, 1, 2, 1 << 20).unwrap().len(), 256);
        let ind = inductive_powerwords_at_length(&r, 1, 4, 1 << 20).unwrap();
        let good = PowerWord::parse(&r.alphabet, 1, "{t,e} {} {} {}").unwrap();
        let bad = PowerWord::parse(&r.alphabet, 1, "{t} {} {} {}").unwrap();
        assert!(ind.contains(&good));
        assert!(!ind.contains(&bad));
    }

    #[test]
    fn ladder_three_clause_family_member() {
        let r = model("ladder1").unwrap().rts;
        let phi = PowerWord::parse(&r.alphabet, 2, "{0}|{0} {}|{0}").unwrap();
        assert!(inductive_powerwords_at_length(&r, 2, 2, 1 << 20)
            .unwrap()
            .contains(&phi));
    }

    #[test]
    fn tautological_row_changes_nothing() {
        let s = tefb();
        let phi = PowerWord::parse(&s, 1, "{t} {b}").unwrap();
        let padded = phi.with_clause(&[SymSet::full(4), SymSet::full(4)]);
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(phi.satisfies(&[x, y]).unwrap(), padded.satisfies(&[x, y]).unwrap());
            }
        }
    }
}
