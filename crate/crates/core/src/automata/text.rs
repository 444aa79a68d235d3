//! Line-oriented automaton blocks:
//!
//! ```text
//! nfa init
//! states 2
//! start 0
//! accept 0
//! trans 0 t 1
//! trans 1 f 0
//! end
//! ```
//!
//! Transducer blocks use `transducer NAME` and pair symbols written `a/b`.

use std::fmt::Write;

use crate::error::{Error, Result};

use super::alphabet::Alphabet;
use super::nfa::{Nfa, State, Transducer};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockKind {
    Nfa,
    Transducer,
}

#[derive(Clone, Debug)]
pub struct RawTrans {
    pub src: State,
    pub sym: String,
    pub dst: State,
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug)]
pub struct RawBlock {
    pub kind: BlockKind,
    pub name: String,
    pub line: usize,
    pub states: usize,
    pub start: Vec<State>,
    pub accept: Vec<State>,
    pub trans: Vec<RawTrans>,
}

#[derive(Clone, Debug)]
pub enum Item {
    Alphabet { names: Vec<String>, line: usize },
    Block(RawBlock),
}

fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    let mut col = 0;
    for (i, c) in line.char_indices() {
        col += 1;
        if c.is_whitespace() {
            if let Some((s, sc)) = start.take() {
                out.push((sc, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some((i, col));
        }
    }
    if let Some((s, sc)) = start {
        out.push((sc, &line[s..]));
    }
    out
}

fn number(tok: (usize, &str), line: usize) -> Result<usize> {
    tok.1
        .parse()
        .map_err(|_| Error::parse(line, tok.0, format!("expected a number, found `{}`", tok.1)))
}

pub fn parse_items(text: &str) -> Result<Vec<Item>> {
    let mut items = Vec::new();
    let mut current: Option<RawBlock> = None;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        let Some(&(col, head)) = toks.first() else {
            continue;
        };
        match current.as_mut() {
            None => match head {
                "alphabet" => items.push(Item::Alphabet {
                    names: toks[1..].iter().map(|t| t.1.to_string()).collect(),
                    line,
                }),
                "nfa" | "transducer" => {
                    if toks.len() != 2 {
                        return Err(Error::parse(line, col, "expected `nfa NAME` or `transducer NAME`"));
                    }
                    current = Some(RawBlock {
                        kind: if head == "nfa" {
                            BlockKind::Nfa
                        } else {
                            BlockKind::Transducer
                        },
                        name: toks[1].1.to_string(),
                        line,
                        states: 0,
                        start: Vec::new(),
                        accept: Vec::new(),
                        trans: Vec::new(),
                    });
                }
                other => return Err(Error::parse(line, col, format!("unexpected `{other}`"))),
            },
            Some(block) => match head {
                "states" => {
                    if toks.len() != 2 {
                        return Err(Error::parse(line, col, "expected `states N`"));
                    }
                    block.states = number(toks[1], line)?;
                }
                "start" | "accept" => {
                    for &t in &toks[1..] {
                        let q = number(t, line)?;
                        if q >= block.states {
                            return Err(Error::parse(line, t.0, format!("state {q} out of range")));
                        }
                        if head == "start" {
                            block.start.push(q as State);
                        } else {
                            block.accept.push(q as State);
                        }
                    }
                }
                "trans" => {
                    if toks.len() != 4 {
                        return Err(Error::parse(line, col, "expected `trans SRC SYM DST`"));
                    }
                    let src = number(toks[1], line)?;
                    let dst = number(toks[3], line)?;
                    for (q, t) in [(src, toks[1]), (dst, toks[3])] {
                        if q >= block.states {
                            return Err(Error::parse(line, t.0, format!("state {q} out of range")));
                        }
                    }
                    block.trans.push(RawTrans {
                        src: src as State,
                        sym: toks[2].1.to_string(),
                        dst: dst as State,
                        line,
                        column: toks[2].0,
                    });
                }
                "end" => items.push(Item::Block(current.take().unwrap())),
                other => return Err(Error::parse(line, col, format!("unexpected `{other}` inside block"))),
            },
        }
    }
    if let Some(b) = current {
        return Err(Error::parse(
            last_line + 1,
            1,
            format!("block `{}` is missing `end`", b.name),
        ));
    }
    Ok(items)
}

impl RawBlock {
    fn skeleton(&self, alphabet: &Alphabet) -> Nfa {
        let mut a = Nfa::with_states(alphabet, self.states);
        for &q in &self.start {
            a.set_initial(q);
        }
        for &q in &self.accept {
            a.set_accepting(q, true);
        }
        a
    }

    pub fn to_nfa(&self, alphabet: &Alphabet) -> Result<Nfa> {
        if self.kind != BlockKind::Nfa {
            return Err(Error::validation(&self.name, "expected an nfa block"));
        }
        let mut a = self.skeleton(alphabet);
        for t in &self.trans {
            let s = alphabet.index_of(&t.sym).ok_or_else(|| {
                Error::validation(
                    &self.name,
                    format!("line {}, column {}: unknown symbol `{}`", t.line, t.column, t.sym),
                )
            })?;
            a.add_transition(t.src, s, t.dst);
        }
        Ok(a)
    }

    pub fn to_transducer(&self, left: &Alphabet, right: &Alphabet) -> Result<Transducer> {
        if self.kind != BlockKind::Transducer {
            return Err(Error::validation(&self.name, "expected a transducer block"));
        }
        let pair = Alphabet::pair(left, right);
        let mut a = self.skeleton(&pair);
        for t in &self.trans {
            let s = pair.index_of(&t.sym).ok_or_else(|| {
                Error::validation(
                    &self.name,
                    format!(
                        "line {}, column {}: `{}` is not a pair over the alphabet",
                        t.line, t.column, t.sym
                    ),
                )
            })?;
            a.add_transition(t.src, s, t.dst);
        }
        Transducer::from_nfa(a)
    }
}

fn write_block(out: &mut String, kind: &str, name: &str, a: &Nfa) {
    let _ = writeln!(out, "{kind} {name}");
    let _ = writeln!(out, "states {}", a.num_states());
    let starts: Vec<String> = a.initial().iter().map(|q| q.to_string()).collect();
    let _ = writeln!(out, "start {}", starts.join(" "));
    let acc: Vec<String> = a.accepting_states().map(|q| q.to_string()).collect();
    let _ = writeln!(out, "accept {}", acc.join(" "));
    for (p, s, q) in a.transitions() {
        let _ = writeln!(out, "trans {p} {} {q}", a.alphabet().name(s));
    }
    let _ = writeln!(out, "end");
}

pub fn write_nfa(out: &mut String, name: &str, a: &Nfa) {
    write_block(out, "nfa", name, a);
}

pub fn write_transducer(out: &mut String, name: &str, t: &Transducer) {
    write_block(out, "transducer", name, t.nfa());
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_nfa_block() {
        let s = Alphabet::new(["t", "f"]).unwrap();
        let text = "nfa init\nstates 2\nstart 0\naccept 0\ntrans 0 t 1\ntrans 1 f 0\nend\n";
        let items = parse_items(text).unwrap();
        let Item::Block(b) = &items[0] else { panic!() };
        let a = b.to_nfa(&s).unwrap();
        let mut out = String::new();
        write_nfa(&mut out, "init", &a);
        assert_eq!(out, text);
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_items("nfa x\nstates 1\ntrans 0 a 3\nend\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 3,
                column: 11,
                message: "state 3 out of range".into()
            }
        );
        assert!(matches!(parse_items("nfa x\nstates 1\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn unknown_pair_symbol_is_a_validation_error() {
        let s = Alphabet::new(["t", "f"]).unwrap();
        let items = parse_items("transducer step\nstates 2\ntrans 0 t/x 1\nend\n").unwrap();
        let Item::Block(b) = &items[0] else { panic!() };
        assert!(matches!(b.to_transducer(&s, &s), Err(Error::Validation { .. })));
    }
}
