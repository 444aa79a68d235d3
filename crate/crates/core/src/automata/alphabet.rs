use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

use super::bitset::SymSet;

/// Dense symbol index.
pub type Sym = u32;

/// A finite alphabet with dense indices.
///
/// Pair and power alphabets are stored structurally so that large alphabets
/// such as `(2^Σ)^3` never materialize their symbol names.
#[derive(Clone)]
pub struct Alphabet(Arc<Kind>);

enum Kind {
    Named {
        names: Vec<String>,
        index: HashMap<String, Sym>,
    },
    Pair(Alphabet, Alphabet),
    Power {
        sigma: Alphabet,
        b: usize,
    },
}

const RESERVED: &[char] = &['/', '{', '}', ',', '|', '#'];

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || n.chars().any(|c| c.is_whitespace() || RESERVED.contains(&c)) {
                return Err(Error::validation("alphabet", format!("invalid symbol name `{n}`")));
            }
            if index.insert(n.clone(), i as Sym).is_some() {
                return Err(Error::validation("alphabet", format!("duplicate symbol `{n}`")));
            }
        }
        Ok(Alphabet(Arc::new(Kind::Named { names, index })))
    }

    pub fn pair(left: &Alphabet, right: &Alphabet) -> Self {
        Alphabet(Arc::new(Kind::Pair(left.clone(), right.clone())))
    }

    /// The powerletter alphabet `(2^Σ)^b`; needs `b·|Σ| ≤ 30`.
    pub fn power(sigma: &Alphabet, b: usize) -> Self {
        assert!(b >= 1 && b * sigma.len() <= 30, "power alphabet too large");
        Alphabet(Arc::new(Kind::Power {
            sigma: sigma.clone(),
            b,
        }))
    }

    pub fn len(&self) -> usize {
        match &*self.0 {
            Kind::Named { names, .. } => names.len(),
            Kind::Pair(l, r) => l.len() * r.len(),
            Kind::Power { sigma, b } => 1 << (b * sigma.len()),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn symbols(&self) -> impl Iterator<Item = Sym> {
        0..self.len() as Sym
    }

    pub fn as_pair(&self) -> Option<(&Alphabet, &Alphabet)> {
        match &*self.0 {
            Kind::Pair(l, r) => Some((l, r)),
            _ => None,
        }
    }

    pub fn as_power(&self) -> Option<(&Alphabet, usize)> {
        match &*self.0 {
            Kind::Power { sigma, b } => Some((sigma, *b)),
            _ => None,
        }
    }

    pub fn name(&self, s: Sym) -> String {
        match &*self.0 {
            Kind::Named { names, .. } => names[s as usize].clone(),
            Kind::Pair(l, r) => {
                let k = r.len() as Sym;
                format!("{}/{}", l.name(s / k), r.name(s % k))
            }
            Kind::Power { sigma, b } => {
                let n = sigma.len();
                (0..*b)
                    .map(|i| {
                        let row = SymSet((s >> (i * n)) & SymSet::full(n).0);
                        let items: Vec<String> = row.iter().map(|a| sigma.name(a)).collect();
                        format!("{{{}}}", items.join(","))
                    })
                    .collect::<Vec<_>>()
                    .join("|")
            }
        }
    }

    pub fn index_of(&self, name: &str) -> Option<Sym> {
        match &*self.0 {
            Kind::Named { index, .. } => index.get(name).copied(),
            Kind::Pair(l, r) => {
                let (a, b) = name.split_once('/')?;
                Some(l.index_of(a)? * r.len() as Sym + r.index_of(b)?)
            }
            Kind::Power { sigma, b } => {
                let rows: Vec<&str> = name.split('|').collect();
                if rows.len() != *b {
                    return None;
                }
                let mut idx = 0;
                for (i, row) in rows.iter().enumerate() {
                    let inner = row.strip_prefix('{')?.strip_suffix('}')?;
                    let mut set = SymSet::EMPTY;
                    for item in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                        set.insert(sigma.index_of(item)?);
                    }
                    idx |= set.0 << (i * sigma.len());
                }
                Some(idx)
            }
        }
    }

    /// True when every symbol name is a single character, so words print without separators.
    pub fn is_compact(&self) -> bool {
        match &*self.0 {
            Kind::Named { names, .. } => names.iter().all(|n| n.chars().count() == 1),
            _ => false,
        }
    }

    pub fn format_word(&self, w: &[Sym]) -> String {
        let parts: Vec<String> = w.iter().map(|&s| self.name(s)).collect();
        if self.is_compact() {
            parts.concat()
        } else {
            parts.join(" ")
        }
    }

    /// Inverse of [`Alphabet::format_word`]; whitespace-separated input is always accepted.
    pub fn parse_word(&self, text: &str) -> Result<Vec<Sym>> {
        let text = text.trim();
        let tokens: Vec<String> = if text.contains(char::is_whitespace) || !self.is_compact() {
            text.split_whitespace().map(String::from).collect()
        } else {
            text.chars().map(String::from).collect()
        };
        tokens
            .iter()
            .map(|t| {
                self.index_of(t)
                    .ok_or_else(|| Error::validation("word", format!("unknown symbol `{t}`")))
            })
            .collect()
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        match (&*self.0, &*other.0) {
            (Kind::Named { names: a, .. }, Kind::Named { names: b, .. }) => a == b,
            (Kind::Pair(a, b), Kind::Pair(c, d)) => a == c && b == d,
            (Kind::Power { sigma: a, b: x }, Kind::Power { sigma: c, b: y }) => x == y && a == c,
            _ => false,
        }
    }
}

impl Eq for Alphabet {}

impl std::hash::Hash for Alphabet {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        match &*self.0 {
            Kind::Named { names, .. } => names.hash(h),
            Kind::Pair(l, r) => {
                l.hash(h);
                r.hash(h);
            }
            Kind::Power { sigma, b } => {
                sigma.hash(h);
                b.hash(h);
            }
        }
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Kind::Named { names, .. } => write!(f, "Alphabet{names:?}"),
            Kind::Pair(l, r) => write!(f, "Pair({l:?}, {r:?})"),
            Kind::Power { sigma, b } => write!(f, "Power({sigma:?}, {b})"),
        }
    }
}
