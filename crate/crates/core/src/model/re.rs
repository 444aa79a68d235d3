//! Regular-expression combinators compiled by the position (Glushkov) construction.
//!
//! These are used to build the catalog programmatically; there is no text syntax.

use crate::automata::{determinize, minimize, Alphabet, Nfa, State, Sym};

#[derive(Clone, Debug)]
pub enum Re {
    Eps,
    Class(Vec<Sym>),
    Cat(Vec<Re>),
    Alt(Vec<Re>),
    Star(Box<Re>),
}

pub fn class(symbols: impl IntoIterator<Item = Sym>) -> Re {
    let mut v: Vec<Sym> = symbols.into_iter().collect();
    v.sort_unstable();
    v.dedup();
    Re::Class(v)
}

pub fn sym(s: Sym) -> Re {
    Re::Class(vec![s])
}

pub fn cat(parts: impl IntoIterator<Item = Re>) -> Re {
    Re::Cat(parts.into_iter().collect())
}

pub fn alt(parts: impl IntoIterator<Item = Re>) -> Re {
    Re::Alt(parts.into_iter().collect())
}

pub fn star(r: Re) -> Re {
    Re::Star(Box::new(r))
}

pub fn plus(r: Re) -> Re {
    cat([r.clone(), star(r)])
}

pub fn power(r: Re, n: usize) -> Re {
    Re::Cat(vec![r; n])
}

struct Info {
    nullable: bool,
    first: Vec<usize>,
    last: Vec<usize>,
}

struct Glushkov {
    classes: Vec<Vec<Sym>>,
    follow: Vec<Vec<usize>>,
}

impl Glushkov {
    fn visit(&mut self, r: &Re) -> Info {
        match r {
            Re::Eps => Info {
                nullable: true,
                first: vec![],
                last: vec![],
            },
            Re::Class(c) => {
                let p = self.classes.len();
                self.classes.push(c.clone());
                self.follow.push(Vec::new());
                Info {
                    nullable: false,
                    first: vec![p],
                    last: vec![p],
                }
            }
            Re::Cat(parts) => {
                let mut acc = Info {
                    nullable: true,
                    first: vec![],
                    last: vec![],
                };
                for part in parts {
                    let info = self.visit(part);
                    for &l in &acc.last {
                        self.follow[l].extend_from_slice(&info.first);
                    }
                    if acc.nullable {
                        acc.first.extend_from_slice(&info.first);
                    }
                    if info.nullable {
                        acc.last.extend_from_slice(&info.last);
                    } else {
                        acc.last = info.last;
                    }
                    acc.nullable &= info.nullable;
                }
                acc
            }
            Re::Alt(parts) => {
                let mut acc = Info {
                    nullable: false,
                    first: vec![],
                    last: vec![],
                };
                for part in parts {
                    let info = self.visit(part);
                    acc.nullable |= info.nullable;
                    acc.first.extend(info.first);
                    acc.last.extend(info.last);
                }
                acc
            }
            Re::Star(inner) => {
                let info = self.visit(inner);
                for &l in &info.last {
                    self.follow[l].extend_from_slice(&info.first);
                }
                Info {
                    nullable: true,
                    first: info.first,
                    last: info.last,
                }
            }
        }
    }
}

impl Re {
    /// Position automaton: one state per symbol class occurrence plus an initial state.
    pub fn to_nfa(&self, alphabet: &Alphabet) -> Nfa {
        let mut g = Glushkov {
            classes: Vec::new(),
            follow: Vec::new(),
        };
        let info = g.visit(self);
        let mut a = Nfa::with_states(alphabet, g.classes.len() + 1);
        a.set_initial(0);
        a.set_accepting(0, info.nullable);
        for &p in &info.last {
            a.set_accepting(p as State + 1, true);
        }
        for &p in &info.first {
            for &s in &g.classes[p] {
                a.add_transition(0, s, p as State + 1);
            }
        }
        for (p, next) in g.follow.iter().enumerate() {
            for &q in next {
                for &s in &g.classes[q] {
                    a.add_transition(p as State + 1, s, q as State + 1);
                }
            }
        }
        a.trim()
    }
}

/// The smaller of the trimmed automaton and its trimmed minimal DFA (ties favour the DFA).
pub fn compact(a: &Nfa) -> Nfa {
    let trimmed = a.trim();
    match determinize(&trimmed, 1 << 16) {
        Ok(d) => {
            let m = minimize(&d).to_nfa().trim();
            if m.num_states() <= trimmed.num_states() {
                m
            } else {
                trimmed
            }
        }
        Err(_) => trimmed,
    }
}
