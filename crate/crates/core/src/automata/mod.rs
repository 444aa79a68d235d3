//! Finite automata and length-preserving transducers.

mod alphabet;
mod bitset;
pub mod lazy;
mod minimize;
mod nfa;
pub(crate) mod ops;
pub mod text;

pub use alphabet::{Alphabet, Sym};
pub use bitset::{BitSet, SymSet};
pub use lazy::LazyNfa;
pub use minimize::minimize;
pub use nfa::{Dfa, Nfa, State, Transducer, Word};
pub use ops::{
    complement, determinize, difference_witness, equivalent, intersect, inverse, is_empty_with_witness, join,
    post_image, pre_image, project, union, Side,
};
