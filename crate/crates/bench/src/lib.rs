//! Fixtures shared by the benchmarks.

use rmc::automata::Nfa;
use rmc::model::{model, Rts};

/// A catalog model together with one of its unsafe sets.
pub fn case(name: &str, property: &str) -> (Rts, Nfa) {
    let r = model(name).expect("catalog model").rts;
    let set = r.unsafe_set(property).expect("declared unsafe set").clone();
    (r, set)
}
