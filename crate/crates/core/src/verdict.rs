//! Outcomes of safety queries.

use std::fmt;

use crate::automata::{Alphabet, Word};
use crate::bforms::PowerWord;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    /// The over-approximation is disjoint from the unsafe set.
    Safe,
    /// The over-approximation meets the unsafe set; the witness need not be reachable.
    Inconclusive,
    /// A state budget ran out before a decision.
    Budget,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Safe => "SAFE",
            Status::Inconclusive => "INCONCLUSIVE",
            Status::Budget => "BUDGET",
        })
    }
}

/// The three conditions a certificate must meet, in checking order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Condition {
    /// Every formula of the certificate is inductive.
    Inductive,
    /// Every initial configuration satisfies every formula.
    Invariant,
    /// Every unsafe configuration violates some formula.
    Exclusion,
}

impl Condition {
    pub fn label(self) -> &'static str {
        match self {
            Condition::Inductive => "a",
            Condition::Invariant => "b",
            Condition::Exclusion => "c",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self {
            Condition::Inductive => "inductiveness",
            Condition::Invariant => "invariance",
            Condition::Exclusion => "exclusion",
        };
        write!(f, "({}) {what}", self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Config(Word),
    /// A certificate formula that is not inductive.
    Formula(PowerWord),
    /// An initial configuration violating a certificate formula.
    Violation(Word, PowerWord),
}

impl Witness {
    pub fn describe(&self, sigma: &Alphabet) -> String {
        match self {
            Witness::Config(w) => sigma.format_word(w),
            Witness::Formula(phi) => phi.to_string(),
            Witness::Violation(u, phi) => format!("{} violates {phi}", sigma.format_word(u)),
        }
    }

    pub fn config(&self) -> Option<&Word> {
        match self {
            Witness::Config(w) => Some(w),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub witness: Option<Witness>,
    /// Set for certificate checks that fail or run out of budget.
    pub failed: Option<Condition>,
    /// States visited by the final emptiness search.
    pub explored: usize,
    /// Named sizes of intermediate automata.
    pub sizes: Vec<(&'static str, usize)>,
}

impl Verdict {
    pub fn safe(explored: usize) -> Self {
        Verdict {
            status: Status::Safe,
            witness: None,
            failed: None,
            explored,
            sizes: Vec::new(),
        }
    }

    pub fn inconclusive(witness: Witness, explored: usize) -> Self {
        Verdict {
            status: Status::Inconclusive,
            witness: Some(witness),
            failed: None,
            explored,
            sizes: Vec::new(),
        }
    }

    /// Turns budget exhaustion into a verdict and passes other errors through.
    pub fn from_error(e: Error) -> Result<Self> {
        match e {
            Error::BudgetExceeded { explored, .. } => Ok(Verdict {
                status: Status::Budget,
                witness: None,
                failed: None,
                explored,
                sizes: Vec::new(),
            }),
            e => Err(e),
        }
    }

    pub fn is_safe(&self) -> bool {
        self.status == Status::Safe
    }

    pub fn with_size(mut self, name: &'static str, n: usize) -> Self {
        self.sizes.push((name, n));
        self
    }
}
