//! Regular transition systems: an alphabet, initial configurations and a
//! length-preserving step relation, plus named unsafe sets.

pub mod catalog;
pub mod gen;
pub mod re;

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write;

use crate::automata::text::{parse_items, write_nfa, write_transducer, BlockKind, Item};
use crate::automata::{Alphabet, Nfa, Transducer, Word};
use crate::error::{Error, Result};

pub use catalog::{catalog, model, Model};
pub use gen::{ladder, ladder_unbounded, tm_rts, Move, TuringMachine};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rts {
    pub alphabet: Alphabet,
    pub initial: Nfa,
    pub step: Transducer,
    /// Named unsafe sets, in declaration order.
    pub unsafe_sets: Vec<(String, Nfa)>,
}

impl Rts {
    pub fn new(alphabet: &Alphabet, initial: Nfa, step: Transducer) -> Result<Self> {
        if initial.alphabet() != alphabet {
            return Err(Error::AlphabetMismatch("initial automaton".into()));
        }
        if step.left() != alphabet || step.right() != alphabet {
            return Err(Error::AlphabetMismatch("step transducer".into()));
        }
        Ok(Rts {
            alphabet: alphabet.clone(),
            initial,
            step,
            unsafe_sets: Vec::new(),
        })
    }

    pub fn with_unsafe(mut self, name: &str, set: Nfa) -> Self {
        assert_eq!(set.alphabet(), &self.alphabet, "unsafe set over a different alphabet");
        self.unsafe_sets.push((name.to_string(), set));
        self
    }

    pub fn unsafe_set(&self, name: &str) -> Option<&Nfa> {
        self.unsafe_sets.iter().find(|(n, _)| n == name).map(|(_, a)| a)
    }

    pub fn word(&self, text: &str) -> Result<Word> {
        self.alphabet.parse_word(text)
    }

    pub fn format(&self, w: &[u32]) -> String {
        self.alphabet.format_word(w)
    }
}

pub fn parse_model(text: &str) -> Result<Rts> {
    let items = parse_items(text)?;
    let mut alphabet = None;
    let mut initial = None;
    let mut step = None;
    let mut unsafe_sets = Vec::new();
    for item in items {
        match item {
            Item::Alphabet { names, line } => {
                if alphabet.is_some() {
                    return Err(Error::parse(line, 1, "duplicate alphabet line"));
                }
                alphabet = Some(Alphabet::new(names)?);
            }
            Item::Block(block) => {
                let sigma = alphabet
                    .as_ref()
                    .ok_or_else(|| Error::parse(block.line, 1, "block before the alphabet line"))?;
                match (block.kind, block.name.as_str()) {
                    (BlockKind::Nfa, "init") if initial.is_none() => initial = Some(block.to_nfa(sigma)?),
                    (BlockKind::Transducer, "step") if step.is_none() => {
                        step = Some(block.to_transducer(sigma, sigma)?)
                    }
                    (BlockKind::Nfa, name) if name.starts_with("unsafe.") && name.len() > 7 => {
                        let short = &name[7..];
                        if unsafe_sets.iter().any(|(n, _): &(String, Nfa)| n == short) {
                            return Err(Error::validation(name, "duplicate unsafe set"));
                        }
                        unsafe_sets.push((short.to_string(), block.to_nfa(sigma)?));
                    }
                    (_, name) => return Err(Error::validation(name, "unexpected or duplicate block")),
                }
            }
        }
    }
    let alphabet = alphabet.ok_or_else(|| Error::validation("model", "missing alphabet line"))?;
    let initial = initial.ok_or_else(|| Error::validation("init", "missing initial automaton"))?;
    let step = step.ok_or_else(|| Error::validation("step", "missing step transducer"))?;
    let mut r = Rts::new(&alphabet, initial, step)?;
    r.unsafe_sets = unsafe_sets;
    Ok(r)
}

/// Prints a model; `header` lines are emitted as `#` comments.
pub fn print_model(r: &Rts, header: &str) -> String {
    let mut out = String::new();
    for line in header.lines() {
        if line.is_empty() {
            out.push_str("#\n");
        } else {
            let _ = writeln!(out, "# {line}");
        }
    }
    if !header.is_empty() {
        out.push('\n');
    }
    let names: Vec<String> = r.alphabet.symbols().map(|s| r.alphabet.name(s)).collect();
    let _ = writeln!(out, "alphabet {}\n", names.join(" "));
    write_nfa(&mut out, "init", &r.initial);
    out.push('\n');
    write_transducer(&mut out, "step", &r.step);
    for (name, set) in &r.unsafe_sets {
        out.push('\n');
        write_nfa(&mut out, &format!("unsafe.{name}"), set);
    }
    out
}

/// All transitions between configurations of length `len`, sorted.
pub fn transitions_at_length(r: &Rts, len: usize, budget: usize) -> Result<Vec<(Word, Word)>> {
    let words = r.step.nfa().words_of_length(len, budget)?;
    let mut out: Vec<(Word, Word)> = words
        .into_iter()
        .map(|pw| pw.iter().map(|&p| r.step.split(p)).unzip())
        .collect();
    out.sort();
    Ok(out)
}

/// Reachable configurations of length `len`, sorted.
pub fn reach_at_length(r: &Rts, len: usize, budget: usize) -> Result<Vec<Word>> {
    let mut succ: HashMap<Word, Vec<Word>> = HashMap::new();
    for (u, w) in transitions_at_length(r, len, budget)? {
        succ.entry(u).or_default().push(w);
    }
    let mut seen: HashSet<Word> = HashSet::new();
    let mut queue: VecDeque<Word> = VecDeque::new();
    for w in r.initial.words_of_length(len, budget)? {
        if seen.insert(w.clone()) {
            queue.push_back(w);
        }
    }
    while let Some(u) = queue.pop_front() {
        if let Some(next) = succ.get(&u) {
            for w in next {
                if seen.insert(w.clone()) {
                    if seen.len() > budget {
                        return Err(Error::BudgetExceeded {
                            limit: budget,
                            explored: seen.len(),
                        });
                    }
                    queue.push_back(w.clone());
                }
            }
        }
    }
    let mut out: Vec<Word> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}
