//! Built-in benchmark systems.

use crate::automata::{complement, determinize, intersect, project, Alphabet, Nfa, Side, Sym, Transducer};

use super::gen::{ladder, ladder_unbounded, tm_rts, TuringMachine};
use super::re::{alt, cat, class, compact, plus, star, Re};
use super::Rts;

pub struct Model {
    pub name: &'static str,
    /// Encoding notes, printed as the header of the model file.
    pub description: &'static str,
    pub rts: Rts,
}

/// Regex helpers over Σ and Σ×Σ for one alphabet.
struct Letters {
    sigma: Alphabet,
    pairs: Alphabet,
}

impl Letters {
    fn new(names: &[&str]) -> Self {
        let sigma = Alphabet::new(names.iter().copied()).unwrap();
        let pairs = Alphabet::pair(&sigma, &sigma);
        Letters { sigma, pairs }
    }

    fn s(&self, name: &str) -> Sym {
        self.sigma
            .index_of(name)
            .unwrap_or_else(|| panic!("unknown letter {name}"))
    }

    fn one(&self, names: &str) -> Re {
        class(names.split_whitespace().map(|n| self.s(n)))
    }

    fn any(&self) -> Re {
        class(self.sigma.symbols())
    }

    /// A single pair letter `a/b`, or a choice of them separated by spaces.
    fn p(&self, pairs: &str) -> Re {
        let k = self.sigma.len() as Sym;
        class(pairs.split_whitespace().map(|ab| {
            let (a, b) = ab.split_once('/').unwrap();
            self.s(a) * k + self.s(b)
        }))
    }

    fn id(&self) -> Re {
        let k = self.sigma.len() as Sym;
        class((0..k).map(|a| a * k + a))
    }

    fn lang(&self, r: Re) -> Nfa {
        compact(&r.to_nfa(&self.sigma))
    }

    fn step(&self, r: Re) -> Transducer {
        Transducer::from_nfa(compact(&r.to_nfa(&self.pairs))).unwrap()
    }

    fn rts(&self, init: Re, step: Re) -> Rts {
        Rts::new(&self.sigma, self.lang(init), self.step(step)).unwrap()
    }
}

/// Configurations without a successor, restricted to `within`.
fn deadlocks(step: &Transducer, within: &Nfa) -> Nfa {
    let enabled = determinize(&project(step, Side::Left), 1 << 20).unwrap();
    let dead = complement(&enabled).to_nfa();
    compact(&intersect(&dead, within).unwrap())
}

fn philosophers() -> Model {
    let l = Letters::new(&["t", "e", "f", "b"]);
    let x = || star(l.id());
    let step = alt([
        cat([l.p("t/e"), l.p("f/b"), x(), l.p("f/b")]),
        cat([l.p("e/t"), l.p("b/f"), x(), l.p("b/f")]),
        cat([
            x(),
            alt([
                cat([l.p("f/b"), l.p("t/e"), l.p("f/b")]),
                cat([l.p("b/f"), l.p("e/t"), l.p("b/f")]),
            ]),
            x(),
        ]),
    ]);
    let r = l.rts(star(cat([l.one("t"), l.one("f")])), step);
    let tables = l.lang(cat([
        l.one("t e"),
        l.one("f b"),
        plus(cat([l.one("t e"), l.one("f b")])),
    ]));
    let dead = deadlocks(&r.step, &tables);
    Model {
        name: "philosophers",
        description: "\
Dining philosophers that grab both forks at once.
Odd positions are philosophers (t thinking, e eating), even positions are
forks (f free, b busy); fork i lies between philosophers i and i+1 and the
last fork is the left fork of philosopher 1.
deadlock: tables with at least two philosophers where no transition is enabled.",
        rts: r.with_unsafe("deadlock", dead),
    }
}

fn philosophers_lr() -> Model {
    let l = Letters::new(&["t", "h", "e", "f", "b"]);
    let x = || l.id();
    let xs = || star(x());
    let pairs = || star(cat([x(), x()]));
    let step = alt([
        // Philosopher 1 takes fork 1, then the last fork.
        cat([l.p("t/h"), l.p("f/b"), xs()]),
        cat([l.p("h/e"), pairs(), l.p("f/b")]),
        cat([l.p("e/t"), l.p("b/f"), x(), pairs(), l.p("b/f")]),
        // Every other philosopher takes its left fork, then its right fork.
        cat([x(), pairs(), l.p("f/b"), l.p("t/h"), xs()]),
        cat([plus(cat([x(), x()])), l.p("h/e"), l.p("f/b"), xs()]),
        cat([x(), pairs(), l.p("b/f"), l.p("e/t"), l.p("b/f"), xs()]),
    ]);
    let r = l.rts(star(cat([l.one("t"), l.one("f")])), step);
    let cell = || cat([l.one("t h e"), l.one("f b")]);
    let tables = l.lang(cat([cell(), plus(cell())]));
    let dead = deadlocks(&r.step, &tables);
    Model {
        name: "philosophers-lr",
        description: "\
Dining philosophers where philosopher 1 is right-handed and all others are
left-handed; forks are taken one at a time.
t thinking, h holding the first fork, e eating; forks are f free or b busy.
deadlock: tables with at least two philosophers where no transition is enabled.",
        rts: r.with_unsafe("deadlock", dead),
    }
}

fn philosophers_lr_tagged() -> Model {
    let l = Letters::new(&["t", "h", "e", "f", "l", "r"]);
    let x = || l.id();
    let xs = || star(x());
    let pairs = || star(cat([x(), x()]));
    let step = alt([
        cat([l.p("t/h"), l.p("f/l"), xs()]),
        cat([l.p("h/e"), pairs(), l.p("f/r")]),
        cat([l.p("e/t"), l.p("l/f"), x(), pairs(), l.p("r/f")]),
        cat([x(), pairs(), l.p("f/r"), l.p("t/h"), xs()]),
        cat([plus(cat([x(), x()])), l.p("h/e"), l.p("f/l"), xs()]),
        cat([x(), pairs(), l.p("r/f"), l.p("e/t"), l.p("l/f"), xs()]),
    ]);
    let r = l.rts(star(cat([l.one("t"), l.one("f")])), step);
    let cell = || cat([l.one("t h e"), l.one("f l r")]);
    let tables = l.lang(cat([cell(), plus(cell())]));
    let dead = deadlocks(&r.step, &tables);
    Model {
        name: "philosophers-lr-tagged",
        description: "\
The philosophers-lr system with busy forks tagged by their holder:
l when held by the philosopher on the fork's left (the one with the same
index), r when held by the philosopher on its right.
deadlock: tables with at least two philosophers where no transition is enabled.",
        rts: r.with_unsafe("deadlock", dead),
    }
}

fn berkeley() -> Model {
    let l = Letters::new(&["i", "u", "e", "s"]);
    let step = alt([
        cat([star(l.id()), l.p("u/u e/e s/s"), star(l.id())]),
        cat([star(l.p("i/i u/u e/s s/s")), l.p("i/u"), star(l.p("i/i u/u e/s s/s"))]),
        cat([star(l.p("i/i u/i e/i s/i")), l.p("i/e"), star(l.p("i/i u/i e/i s/i"))]),
        cat([
            star(l.p("i/i u/i e/e s/i")),
            l.p("u/e s/e"),
            star(l.p("i/i u/i e/e s/i")),
        ]),
        cat([star(l.id()), l.p("u/i e/i s/i"), star(l.id())]),
    ]);
    let r = l.rts(star(l.one("i")), step);
    let two_e = l.lang(cat([
        star(l.any()),
        l.one("e"),
        star(l.any()),
        l.one("e"),
        star(l.any()),
    ]));
    let dead = deadlocks(&r.step, &l.lang(plus(l.any())));
    Model {
        name: "berkeley",
        description: "\
Berkeley cache coherence: each cell is i invalid, u unowned, e exclusive or s shared.
two-exclusive: two cells in state e.
deadlock: non-empty configurations without a successor.",
        rts: r.with_unsafe("two-exclusive", two_e).with_unsafe("deadlock", dead),
    }
}

fn dragon() -> Model {
    // E and S are the modified counterparts of e and s.
    let l = Letters::new(&["i", "e", "s", "E", "S"]);
    let id = || star(l.id());
    let keep3 = || star(l.p("i/i e/e E/E"));
    let shared = || star(l.p("i/i e/e E/E s/s S/s"));
    let to_s = || star(l.p("i/i e/s E/s s/s S/s"));
    let step = alt([
        cat([id(), l.p("e/e s/s E/E S/S"), id()]),
        cat([star(l.p("i/i")), l.p("i/e"), star(l.p("i/i"))]),
        cat([
            star(l.p("i/i e/s s/s E/S S/S")),
            l.p("i/s"),
            star(l.p("i/i e/s s/s E/S S/S")),
        ]),
        cat([id(), l.p("E/E"), id()]),
        cat([id(), l.p("e/E"), id()]),
        cat([keep3(), l.p("S/E"), keep3()]),
        cat([keep3(), l.p("s/E"), keep3()]),
        cat([shared(), l.p("s/s S/s"), shared(), l.p("s/S S/S"), shared()]),
        cat([shared(), l.p("s/S S/S"), shared(), l.p("s/s S/s"), shared()]),
        cat([star(l.p("i/i")), l.p("i/E"), star(l.p("i/i"))]),
        cat([to_s(), l.p("i/S"), to_s(), l.p("E/s s/s S/s e/s"), to_s()]),
        cat([to_s(), l.p("E/s s/s S/s e/s"), to_s(), l.p("i/S"), to_s()]),
        cat([id(), l.p("e/i E/i S/i s/i"), id()]),
    ]);
    let r = l.rts(star(l.one("i")), step);
    let two = |x: &str| l.lang(cat([star(l.any()), l.one(x), star(l.any()), l.one(x), star(l.any())]));
    let dead = deadlocks(&r.step, &l.lang(plus(l.any())));
    Model {
        name: "dragon",
        description: "\
Dragon cache coherence: i invalid, e exclusive, s shared, E exclusive and
modified, S shared and modified.
two-exclusive: two cells in state e.  two-modified: two cells in state E.
deadlock: non-empty configurations without a successor.",
        rts: r
            .with_unsafe("two-exclusive", two("e"))
            .with_unsafe("two-modified", two("E"))
            .with_unsafe("deadlock", dead),
    }
}

fn token_passing() -> Model {
    let l = Letters::new(&["t", "n"]);
    let step = cat([star(l.id()), l.p("t/n"), l.p("n/t"), star(l.id())]);
    let r = l.rts(cat([l.one("t"), star(l.one("n"))]), step);
    let two = l.lang(cat([
        star(l.any()),
        l.one("t"),
        star(l.any()),
        l.one("t"),
        star(l.any()),
    ]));
    let none = l.lang(star(l.one("n")));
    Model {
        name: "token-passing",
        description: "\
A token passed rightwards along a line of processes.
Each cell is t (holds the token) or n; initially the first process holds it.
at-most-one-token: violated by two tokens.  at-least-one-token: violated by none.",
        rts: r
            .with_unsafe("at-most-one-token", two)
            .with_unsafe("at-least-one-token", none),
    }
}

fn herman_step(l: &Letters, ring: bool) -> Re {
    let line = alt([
        cat([star(l.id()), l.p("t/n"), l.p("n/t"), star(l.id())]),
        cat([star(l.id()), l.p("t/n"), l.p("t/t"), star(l.id())]),
    ]);
    if !ring {
        return line;
    }
    alt([
        line,
        cat([l.p("n/t"), star(l.id()), l.p("t/n")]),
        cat([l.p("t/t"), star(l.id()), l.p("t/n")]),
        l.p("t/t"),
    ])
}

fn herman(ring: bool) -> Model {
    let l = Letters::new(&["t", "n"]);
    let init = cat([star(l.any()), l.one("t"), star(l.any())]);
    let r = l.rts(init, herman_step(&l, ring));
    let none = l.lang(star(l.one("n")));
    let dead = deadlocks(&r.step, &l.lang(plus(l.any())));
    let (name, description) = if ring {
        (
            "herman-ring",
            "\
Herman's self-stabilization protocol on a ring, without randomization.
Each cell is t (holds a token) or n. A token moves to the next cell or merges
with a token there; the last cell passes to the first. A single process keeps its token.
deadlock: non-empty configurations without a successor.
at-least-one-token: violated by configurations without tokens.",
        )
    } else {
        (
            "herman-linear",
            "\
Herman's protocol on a line: tokens move right or merge; a token on the last
cell is stuck.
deadlock: non-empty configurations without a successor.
at-least-one-token: violated by configurations without tokens.",
        )
    };
    Model {
        name,
        description,
        rts: r.with_unsafe("deadlock", dead).with_unsafe("at-least-one-token", none),
    }
}

pub fn catalog() -> Vec<Model> {
    let tm = tm_rts(&TuringMachine::demo()).expect("demo machine").0;
    vec![
        philosophers(),
        philosophers_lr(),
        philosophers_lr_tagged(),
        berkeley(),
        dragon(),
        token_passing(),
        herman(false),
        herman(true),
        Model {
            name: "ladder1",
            description: "Ladder system with b = 1 over {0,1}; initial configurations 0*.\none: some cell is 1.",
            rts: ladder(1),
        },
        Model {
            name: "ladder2",
            description: "Ladder system with b = 2 over {0,1}; initial configurations 0*.\none: some cell is 1.",
            rts: ladder(2),
        },
        Model {
            name: "ladder-unbounded",
            description: "\
Ladder variant that behaves like the b = l-1 ladder at every length l.
one: some cell is 1.",
            rts: ladder_unbounded(),
        },
        Model {
            name: "tm-demo",
            description: "\
Page-by-page simulation of a two-state machine on two tape cells that moves
right into its final state. Letters: . separator, _ unwritten cell, B blank,
q:B head in state q over a blank.
accept: fully written configurations that contain the final state.",
            rts: tm,
        },
    ]
}

pub fn model(name: &str) -> Option<Model> {
    catalog().into_iter().find(|m| m.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{reach_at_length, transitions_at_length};

    fn get(name: &str) -> Rts {
        model(name).unwrap().rts
    }

    #[test]
    fn philosophers_shape() {
        let r = get("philosophers");
        assert_eq!(r.alphabet.len(), 4);
        let dead = r.unsafe_set("deadlock").unwrap();
        assert!(!dead.accepts(&r.word("ebtb").unwrap()));
        assert!(dead.accepts(&r.word("tbtb").unwrap()));
        assert!(transitions_at_length(&r, 2, 100).unwrap().is_empty());
        let t4 = transitions_at_length(&r, 4, 1000).unwrap();
        for (u, w) in [("tftf", "ebtb"), ("tftf", "tbeb"), ("ebtb", "tftf")] {
            assert!(t4.contains(&(r.word(u).unwrap(), r.word(w).unwrap())), "{u} -> {w}");
        }
        let reach: Vec<String> = reach_at_length(&r, 4, 1000)
            .unwrap()
            .iter()
            .map(|w| r.format(w))
            .collect();
        assert_eq!(reach, ["tftf", "tbeb", "ebtb"]);
    }

    #[test]
    fn coherence_protocols() {
        let b = get("berkeley");
        assert!(b.initial.accepts(&b.word("iii").unwrap()));
        assert!(!b.initial.accepts(&b.word("iu").unwrap()));
        assert_eq!(get("dragon").alphabet.len(), 5);
    }

    #[test]
    fn catalog_names_are_unique() {
        let names: Vec<&str> = catalog().iter().map(|m| m.name).collect();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len());
    }
}
