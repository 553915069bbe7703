use std::collections::HashMap;

use crate::error::AlphabetError;

/// Index of a symbol within its alphabet.
pub type Symbol = usize;

/// An ordered set of distinct, non-empty symbol names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<String>,
    index: HashMap<String, Symbol>,
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self, AlphabetError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut symbols = Vec::new();
        let mut index = HashMap::new();
        for name in names {
            let name = name.into();
            if name.is_empty() {
                return Err(AlphabetError::EmptySymbol);
            }
            if index.insert(name.clone(), symbols.len()).is_some() {
                return Err(AlphabetError::DuplicateSymbol(name));
            }
            symbols.push(name);
        }
        Ok(Alphabet { symbols, index })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Name of symbol `s`. Panics if `s` is out of range.
    pub fn name(&self, s: Symbol) -> &str {
        &self.symbols[s]
    }

    pub fn index_of(&self, name: &str) -> Option<Symbol> {
        self.index.get(name).copied()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    /// True when both alphabets hold the same names, regardless of order.
    pub fn same_set(&self, other: &Alphabet) -> bool {
        self.len() == other.len() && self.symbols.iter().all(|s| other.contains(s))
    }

    /// True when every symbol of `self` also occurs in `other`.
    pub fn is_subset_of(&self, other: &Alphabet) -> bool {
        self.symbols.iter().all(|s| other.contains(s))
    }

    /// `self` followed by the symbols of `other` that `self` lacks.
    pub fn union(&self, other: &Alphabet) -> Alphabet {
        let mut symbols = self.symbols.clone();
        let mut index = self.index.clone();
        for s in &other.symbols {
            if !index.contains_key(s) {
                index.insert(s.clone(), symbols.len());
                symbols.push(s.clone());
            }
        }
        Alphabet { symbols, index }
    }
}
