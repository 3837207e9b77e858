use super::basis::binomial;
use crate::error::{Error, Result};
use std::fmt;

/// One tensor factor of a module word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factor {
    /// `𝔤^{1,0}`, basis `z_α`.
    T,
    /// `𝔤^{1,0*}`, basis `z^α`.
    TDual,
    /// `Λ^{k,0}`, basis `z^J` with `|J| = k`.
    Wedge(usize),
}

impl Factor {
    pub fn dim(&self, n: usize) -> usize {
        match self {
            Factor::T | Factor::TDual => n,
            Factor::Wedge(k) => binomial(n, *k),
        }
    }

    /// Form degree carried by the factor, used for Koszul signs.
    pub fn degree(&self) -> usize {
        match self {
            Factor::T | Factor::TDual => 0,
            Factor::Wedge(k) => *k,
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::T => write!(f, "T"),
            Factor::TDual => write!(f, "T^"),
            Factor::Wedge(k) => write!(f, "W{k}"),
        }
    }
}

/// Ordered tensor word of factors; the empty word is the trivial module.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct ModuleSpec {
    factors: Vec<Factor>,
}

impl ModuleSpec {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn new(factors: Vec<Factor>) -> Self {
        Self { factors }
    }

    pub fn tangent() -> Self {
        Self::new(vec![Factor::T])
    }

    pub fn cotangent() -> Self {
        Self::new(vec![Factor::TDual])
    }

    pub fn wedge(k: usize) -> Self {
        Self::new(vec![Factor::Wedge(k)])
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn dim(&self, n: usize) -> usize {
        self.factors.iter().map(|f| f.dim(n)).product()
    }

    /// Total Koszul degree of the word.
    pub fn degree(&self) -> usize {
        self.factors.iter().map(Factor::degree).sum()
    }

    /// Splits a flat module index into per-factor indices, first factor most significant.
    pub fn split_index(&self, n: usize, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.factors.len()];
        for (j, f) in self.factors.iter().enumerate().rev() {
            let d = f.dim(n);
            out[j] = idx % d;
            idx /= d;
        }
        out
    }

    pub fn join_index(&self, n: usize, parts: &[usize]) -> usize {
        let mut idx = 0;
        for (f, &p) in self.factors.iter().zip(parts) {
            idx = idx * f.dim(n) + p;
        }
        idx
    }

    /// Parses `expr := atom ("*" atom)*`, `atom := "1" | "T" | "T^" | "W" digits`.
    pub fn parse(text: &str) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty module expression".into()));
        }
        let mut factors = Vec::new();
        for atom in s.split('*') {
            match atom {
                "1" => {}
                "T" => factors.push(Factor::T),
                "T^" => factors.push(Factor::TDual),
                a if a.starts_with('W') && a.len() > 1 && a[1..].bytes().all(|b| b.is_ascii_digit()) => {
                    let k = a[1..]
                        .parse::<usize>()
                        .map_err(|e| Error::Parse(format!("module atom `{a}`: {e}")))?;
                    factors.push(Factor::Wedge(k));
                }
                a => return Err(Error::Parse(format!("unknown module atom `{a}`"))),
            }
        }
        Ok(Self { factors })
    }

    /// Checks that every wedge factor fits in dimension `n`.
    pub fn check(&self, n: usize) -> Result<()> {
        for f in &self.factors {
            if let Factor::Wedge(k) = f {
                if *k > n {
                    return Err(Error::BidegreeOutOfRange { p: *k, q: 0, n });
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for ModuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, x) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for ModuleSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}
