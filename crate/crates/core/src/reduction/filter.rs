use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// One coefficient of a family pattern such as `0,k,0,0` or `*,*,1,*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FilterTerm {
    Fixed(i64),
    /// `*`: ranges over `[0, e_max]` independently.
    Free,
    /// A name; every position with the same name takes the same value.
    Var(String),
}

/// A sub-family of the coefficient box `[0, e_max]^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyFilter {
    terms: Vec<FilterTerm>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Slot {
    Fixed(i64),
    Var(usize),
}

/// The filter with variables numbered by first occurrence.
#[derive(Debug, Clone)]
pub(crate) struct Compiled {
    pub slots: Vec<Slot>,
    pub weights: Vec<i64>,
}

impl FamilyFilter {
    pub fn new(terms: Vec<FilterTerm>) -> Self {
        FamilyFilter { terms }
    }

    /// Every coefficient free.
    pub fn full(n: usize) -> Self {
        FamilyFilter::new(vec![FilterTerm::Free; n])
    }

    pub fn terms(&self) -> &[FilterTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn compile(&self) -> Compiled {
        let mut names: HashMap<&str, usize> = HashMap::new();
        let mut weights = Vec::new();
        let slots = self
            .terms
            .iter()
            .map(|t| match t {
                FilterTerm::Fixed(v) => Slot::Fixed(*v),
                FilterTerm::Free => {
                    weights.push(1);
                    Slot::Var(weights.len() - 1)
                }
                FilterTerm::Var(name) => {
                    let id = *names.entry(name).or_insert_with(|| {
                        weights.push(0);
                        weights.len() - 1
                    });
                    weights[id] += 1;
                    Slot::Var(id)
                }
            })
            .collect();
        Compiled { slots, weights }
    }
}

impl fmt::Display for FamilyFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            match t {
                FilterTerm::Fixed(v) => write!(f, "{v}")?,
                FilterTerm::Free => f.write_str("*")?,
                FilterTerm::Var(n) => f.write_str(n)?,
            }
        }
        Ok(())
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl FromStr for FamilyFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let terms = s
            .split(',')
            .enumerate()
            .map(|(i, raw)| {
                let t = raw.trim();
                if t == "*" {
                    Ok(FilterTerm::Free)
                } else if let Ok(v) = t.parse::<i64>() {
                    Ok(FilterTerm::Fixed(v))
                } else if is_identifier(t) {
                    Ok(FilterTerm::Var(t.to_string()))
                } else {
                    Err(Error::Parse {
                        path: format!("filter term {}", i + 1),
                        message: format!(
                            "`{t}` is not an integer, `*` or a variable name"
                        ),
                    })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FamilyFilter::new(terms))
    }
}
