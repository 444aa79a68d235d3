//! Brute-force ground truth at a fixed length.
//!
//! Everything here enumerates words, transitions and formulas explicitly and
//! shares no code with the automata pipelines beyond model construction.
//! Sets of words of length `ℓ` are bitmasks indexed by the base-`|Σ|` value of
//! the word, most significant position first, so index order is lexicographic.

use rayon::prelude::*;

use crate::automata::{Sym, SymSet, Word};
use crate::bforms::PowerWord;
use crate::error::{Budget, Error, Result};
use crate::ind1::SeparatorBox;
use crate::model::{reach_at_length, transitions_at_length, Rts};

/// Words of one length as a dense bitmask.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Mask(Vec<u64>);

impl Mask {
    fn empty(n: usize) -> Self {
        Mask(vec![0; n.div_ceil(64)])
    }

    fn full(n: usize) -> Self {
        let mut m = Mask(vec![u64::MAX; n.div_ceil(64)]);
        if !n.is_multiple_of(64) {
            *m.0.last_mut().unwrap() = (1u64 << (n % 64)) - 1;
        }
        m
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and_assign(&mut self, o: &Mask) {
        self.0.iter_mut().zip(&o.0).for_each(|(a, b)| *a &= b);
    }

    fn or_assign(&mut self, o: &Mask) {
        self.0.iter_mut().zip(&o.0).for_each(|(a, b)| *a |= b);
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                (rest != 0).then(|| {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    wi * 64 + b
                })
            })
        })
    }
}

/// The words of one length with their transitions, indexed.
struct Slice {
    k: usize,
    len: usize,
    size: usize,
    /// Successor set of every word.
    succ: Vec<Mask>,
    /// Words with at least one successor.
    movers: Vec<usize>,
    initial: Vec<usize>,
}

impl Slice {
    fn new(r: &Rts, len: usize, budget: usize) -> Result<Slice> {
        let k = r.alphabet.len();
        let size = k
            .checked_pow(len as u32)
            .filter(|&n| n <= budget)
            .ok_or(Error::BudgetExceeded {
                limit: budget,
                explored: usize::MAX,
            })?;
        let mut s = Slice {
            k,
            len,
            size,
            succ: vec![Mask::empty(size); size],
            movers: Vec::new(),
            initial: Vec::new(),
        };
        for (u, v) in transitions_at_length(r, len, budget)? {
            let (i, j) = (s.index(&u), s.index(&v));
            s.succ[i].set(j);
        }
        s.movers = (0..size).filter(|&i| s.succ[i].0.iter().any(|&w| w != 0)).collect();
        s.initial = (0..size).filter(|&i| r.initial.accepts(&s.word(i))).collect();
        Ok(s)
    }

    fn index(&self, w: &[Sym]) -> usize {
        w.iter().fold(0, |acc, &a| acc * self.k + a as usize)
    }

    fn word(&self, mut i: usize) -> Word {
        let mut w = vec![0; self.len];
        for slot in w.iter_mut().rev() {
            *slot = (i % self.k) as Sym;
            i /= self.k;
        }
        w
    }

    fn words(&self, m: &Mask) -> Vec<Word> {
        m.ones().map(|i| self.word(i)).collect()
    }

    /// Closed under successors; stops at the first violating transition.
    fn is_inductive(&self, m: &Mask) -> bool {
        self.movers
            .iter()
            .all(|&i| !m.get(i) || self.succ[i].0.iter().zip(&m.0).all(|(s, w)| s & !w == 0))
    }

    /// Words leaving the box `∏ incl[j]`: the language of a single clause.
    fn clause(&self, incl: &[SymSet]) -> Mask {
        let mut m = Mask::empty(self.size);
        for i in 0..self.size {
            let w = self.word(i);
            if !w.iter().zip(incl).all(|(&a, s)| s.contains(a)) {
                m.set(i);
            }
        }
        m
    }

    /// The distinct languages of single clauses: the tautology and the
    /// complement of every box with non-empty sides.
    fn clause_languages(&self, budget: &mut Budget) -> Result<Vec<Mask>> {
        let sides = (1u32 << self.k) - 1;
        let mut out = vec![Mask::full(self.size)];
        let mut incl = vec![SymSet(1); self.len];
        loop {
            budget.charge(1)?;
            out.push(self.clause(&incl));
            // odometer over non-empty sides, last position fastest
            let mut j = self.len;
            loop {
                if j == 0 {
                    return Ok(out);
                }
                j -= 1;
                if incl[j].0 < sides {
                    incl[j].0 += 1;
                    break;
                }
                incl[j] = SymSet(1);
            }
        }
    }
}

/// Everything the oracle knows about one length of one model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthSlice {
    pub model: String,
    pub len: usize,
    pub reach: Vec<Word>,
    /// `(b, number of distinct inductive b-sets of this length)`.
    pub inductive: Vec<(usize, usize)>,
    /// `(b, Ind_b ∩ Σ^ℓ)`.
    pub ind: Vec<(usize, Vec<Word>)>,
}

impl LengthSlice {
    pub fn compute(model: &str, r: &Rts, len: usize, bounds: &[usize], budget: usize) -> Result<Self> {
        let mut slice = LengthSlice {
            model: model.to_string(),
            len,
            reach: reach_at_length(r, len, budget)?,
            inductive: Vec::new(),
            ind: Vec::new(),
        };
        for &b in bounds {
            let found = ind_b_slice(r, b, len, budget)?;
            slice.inductive.push((b, found.inductive));
            slice.ind.push((b, found.words));
        }
        Ok(slice)
    }

    /// One row per word of the length: the word, reachability, then one
    /// membership bit per computed bound.
    pub fn rows(&self, r: &Rts) -> Vec<Vec<String>> {
        let k = r.alphabet.len();
        let mut header = vec!["word".to_string(), "reach".to_string()];
        header.extend(self.ind.iter().map(|(b, _)| format!("ind{b}")));
        let mut rows = vec![header];
        let all = Slice {
            k,
            len: self.len,
            size: k.pow(self.len as u32),
            succ: Vec::new(),
            movers: Vec::new(),
            initial: Vec::new(),
        };
        for i in 0..all.size {
            let w = all.word(i);
            let bit = |set: &[Word]| if set.binary_search(&w).is_ok() { "1" } else { "0" }.to_string();
            let mut row = vec![r.format(&w), bit(&self.reach)];
            row.extend(self.ind.iter().map(|(_, set)| bit(set)));
            rows.push(row);
        }
        rows
    }
}

struct IndSlice {
    words: Vec<Word>,
    inductive: usize,
}

fn ind_b_slice(r: &Rts, b: usize, len: usize, budget: usize) -> Result<IndSlice> {
    let s = Slice::new(r, len, budget)?;
    let mut charge = Budget::new(budget);
    let clauses = s.clause_languages(&mut charge)?;
    let m = clauses.len();
    // multisets of b clause languages: repeats and the tautology cover fewer clauses
    let combos = (0..b).try_fold(1usize, |acc, i| acc.checked_mul(m + i).map(|x| x / (i + 1)));
    match combos {
        Some(c) if b == 0 || c <= budget.saturating_sub(charge.used()) => {}
        _ => {
            return Err(Error::BudgetExceeded {
                limit: budget,
                explored: combos.unwrap_or(usize::MAX),
            })
        }
    }
    // acc[u]: intersection of the inductive sets containing initial word u
    let start = || (vec![Mask::full(s.size); s.initial.len()], 0usize);
    let absorb = |acc: &mut (Vec<Mask>, usize), set: &Mask| {
        if s.is_inductive(set) {
            acc.1 += 1;
            for (slot, &u) in acc.0.iter_mut().zip(&s.initial) {
                if set.get(u) {
                    slot.and_assign(set);
                }
            }
        }
    };
    let merge = |mut x: (Vec<Mask>, usize), y: (Vec<Mask>, usize)| {
        for (a, b) in x.0.iter_mut().zip(&y.0) {
            a.and_assign(b);
        }
        x.1 += y.1;
        x
    };
    let (acc, inductive) = if b == 0 {
        let mut acc = start();
        absorb(&mut acc, &Mask::full(s.size));
        acc
    } else {
        (0..m)
            .into_par_iter()
            .fold(start, |mut acc, first| {
                let mut idx = vec![first; b];
                let mut set = Mask::full(s.size);
                loop {
                    set.0.copy_from_slice(&clauses[idx[0]].0);
                    for &i in &idx[1..] {
                        set.and_assign(&clauses[i]);
                    }
                    absorb(&mut acc, &set);
                    // next non-decreasing tail with the first index fixed
                    let mut j = b;
                    loop {
                        j -= 1;
                        if j == 0 {
                            return acc;
                        }
                        if idx[j] + 1 < m {
                            idx[j] += 1;
                            let v = idx[j];
                            idx[j..].iter_mut().for_each(|x| *x = v);
                            break;
                        }
                    }
                }
            })
            .reduce(start, merge)
    };
    let mut union = Mask::empty(s.size);
    for slot in &acc {
        union.or_assign(slot);
    }
    Ok(IndSlice {
        words: s.words(&union),
        inductive,
    })
}

/// `Ind_b ∩ Σ^ℓ` straight from the definition: `w` is included iff some
/// initial `u` of length `ℓ` satisfies only inductive `b`-formulas that `w`
/// satisfies too. Formulas are compared by their languages, so each distinct
/// multiset of at most `b` clause languages is examined once. The budget
/// bounds the number of such multisets.
pub fn oracle_ind_b(r: &Rts, b: usize, len: usize, budget: usize) -> Result<Vec<Word>> {
    Ok(ind_b_slice(r, b, len, budget)?.words)
}

/// The separator of `w` from its definition: the union of every inductive
/// 1-powerword excluding `w`, returned as the complementary box.
pub fn oracle_sep(r: &Rts, w: &[Sym], budget: usize) -> Result<SeparatorBox> {
    let s = Slice::new(r, w.len(), budget)?;
    let k = s.k;
    if w.iter().any(|&a| a as usize >= k) {
        return Err(Error::validation("word", "symbol outside the alphabet"));
    }
    let mut charge = Budget::new(budget);
    // X_j ranges over subsets of Σ \ {w[j]}, encoded by skipping the bit of w[j]
    let spread = |bits: u32, skip: Sym| {
        let low = bits & ((1 << skip) - 1);
        SymSet(low | (bits >> skip) << (skip + 1))
    };
    let free = 1u32 << (k - 1);
    let mut counters = vec![0u32; w.len()];
    let mut union = vec![SymSet::EMPTY; w.len()];
    loop {
        charge.charge(1)?;
        let xs: Vec<SymSet> = counters.iter().zip(w).map(|(&c, &a)| spread(c, a)).collect();
        let incl: Vec<SymSet> = xs.iter().map(|x| x.complement(k)).collect();
        if s.is_inductive(&s.clause(&incl)) {
            for (u, x) in union.iter_mut().zip(&xs) {
                *u = u.union(*x);
            }
        }
        let mut j = w.len();
        loop {
            if j == 0 {
                return Ok(SeparatorBox {
                    incl: union.iter().map(|x| x.complement(k)).collect(),
                });
            }
            j -= 1;
            counters[j] += 1;
            if counters[j] < free {
                break;
            }
            counters[j] = 0;
        }
    }
}

/// One family of philosophers formulas checked at one length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyCheck {
    pub name: String,
    pub members: usize,
    /// Every member is inductive on its own.
    pub inductive: bool,
    /// For clause families: every member contains the language of some
    /// member of the three-clause family, so the conjunction never needs it.
    pub subsumed: Option<bool>,
}

impl FamilyCheck {
    fn ok(&self) -> bool {
        self.subsumed.unwrap_or(self.inductive)
    }
}

/// Outcome of checking the philosophers invariant families at one length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhilosophersReport {
    pub len: usize,
    pub families: Vec<FamilyCheck>,
    /// Words of the length satisfying every member of every family.
    pub satisfying: Vec<Word>,
    pub reach: Vec<Word>,
}

impl PhilosophersReport {
    /// Invariant families are inductive, clause families are subsumed by the
    /// three-clause family, and together they cut out exactly the reachable words.
    pub fn passed(&self) -> bool {
        self.families.iter().all(FamilyCheck::ok) && self.satisfying == self.reach
    }
}

/// Whether a family is an invariant family or a family of single clauses that
/// only hold as part of the three-clause formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyRole {
    Invariant,
    Clause,
}

/// The 1-formula families and the 3-formula family of the dining
/// philosophers at even length `len`, as powerwords.
///
/// `no-ef`, `no-fe` and `no-fe-wrap` are single clauses of the 3-formula.
/// They are not inductive by themselves: in the unreachable `ebeb`, the
/// philosopher at position 3 may release the fork shared with philosopher 1,
/// giving `eftf`.
pub fn philosophers_families(r: &Rts, len: usize) -> Result<Vec<(String, FamilyRole, Vec<PowerWord>)>> {
    let sym = |name: &str| {
        r.alphabet
            .index_of(name)
            .ok_or_else(|| Error::validation("model", format!("no letter `{name}`")))
    };
    let (t, e, f, bz) = (sym("t")?, sym("e")?, sym("f")?, sym("b")?);
    if !len.is_multiple_of(2) || len < 2 {
        return Err(Error::validation("length", "expected an even length of at least 2"));
    }
    // 1-based positions, wrapping around the round table
    let lit = |pairs: &[(Sym, usize)]| {
        let mut clause = vec![SymSet::EMPTY; len];
        for &(a, pos) in pairs {
            clause[(pos - 1) % len].insert(a);
        }
        clause
    };
    let one = |clauses: Vec<Vec<SymSet>>| -> Vec<PowerWord> {
        clauses
            .into_iter()
            .map(|c| PowerWord::from_clauses(&r.alphabet, &[c]))
            .collect()
    };
    let odd = (1..len).step_by(2);
    use FamilyRole::{Clause, Invariant};
    let mut out = Vec::new();
    let place = (1..=len)
        .map(|j| {
            if j % 2 == 1 {
                lit(&[(t, j), (e, j)])
            } else {
                lit(&[(f, j), (bz, j)])
            }
        })
        .collect();
    out.push(("place".to_string(), Invariant, one(place)));
    out.push((
        "no-ef".into(),
        Clause,
        one(odd.clone().map(|i| lit(&[(t, i), (bz, i + 1)])).collect()),
    ));
    let no_fe = (2..len).step_by(2).map(|i| lit(&[(bz, i), (t, i + 1)])).collect();
    out.push(("no-fe".into(), Clause, one(no_fe)));
    out.push(("no-fe-wrap".into(), Clause, one(vec![lit(&[(t, 1), (bz, len)])])));
    let no_tbt = odd
        .clone()
        .filter(|&i| i + 2 <= len)
        .map(|i| lit(&[(e, i), (f, i + 1), (e, i + 2)]))
        .collect();
    out.push(("no-tbt".into(), Invariant, one(no_tbt)));
    out.push((
        "no-tbt-wrap".into(),
        Invariant,
        one(vec![lit(&[(e, len - 1), (f, len), (e, 1)])]),
    ));
    // positions i, i+1, i+2 for odd i, the last instance wrapping to position 1
    let three = odd
        .map(|i| {
            let clauses = [
                lit(&[(t, i), (bz, i + 1)]),
                lit(&[(bz, i + 1), (t, i + 2)]),
                lit(&[(t, i), (f, i + 1), (t, i + 2)]),
            ];
            PowerWord::from_clauses(&r.alphabet, &clauses)
        })
        .collect();
    out.push(("three-clause".into(), Invariant, three));
    Ok(out)
}

/// Checks the philosophers families at `len` against the enumerated
/// transitions and reachable configurations of that length.
pub fn verify_philosophers_invariants(r: &Rts, len: usize, budget: usize) -> Result<PhilosophersReport> {
    if len > 8 {
        return Err(Error::validation("length", "supported up to 8"));
    }
    let families = philosophers_families(r, len)?;
    let s = Slice::new(r, len, budget)?;
    let language = |phi: &PowerWord| -> Result<Mask> {
        let mut set = Mask::empty(s.size);
        for i in 0..s.size {
            if phi.satisfies(&s.word(i))? {
                set.set(i);
            }
        }
        Ok(set)
    };
    let three: Vec<Mask> = families
        .iter()
        .filter(|f| f.2.first().is_some_and(|p| p.b() == 3))
        .flat_map(|f| f.2.iter().map(&language))
        .collect::<Result<_>>()?;
    let mut all = Mask::full(s.size);
    let mut report = PhilosophersReport {
        len,
        families: Vec::new(),
        satisfying: Vec::new(),
        reach: reach_at_length(r, len, budget)?,
    };
    for (name, role, members) in families {
        let mut inductive = true;
        let mut subsumed = true;
        for phi in &members {
            let set = language(phi)?;
            inductive &= s.is_inductive(&set);
            subsumed &= three.iter().any(|m| m.0.iter().zip(&set.0).all(|(a, b)| a & !b == 0));
            all.and_assign(&set);
        }
        report.families.push(FamilyCheck {
            name,
            members: members.len(),
            inductive,
            subsumed: (role == FamilyRole::Clause).then_some(subsumed),
        });
    }
    report.satisfying = s.words(&all);
    Ok(report)
}
