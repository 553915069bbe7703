use std::fmt;

use crate::alphabet::{Alphabet, Symbol};

/// A finite sequence of input symbols. The derived ordering is lexicographic
/// on symbol indices; use [`InputTrace::shortlex_key`] for length-first order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InputTrace(Vec<Symbol>);

impl InputTrace {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        InputTrace(symbols)
    }

    /// The empty trace ε.
    pub fn empty() -> Self {
        InputTrace(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.0
    }

    pub fn push(&mut self, x: Symbol) {
        self.0.push(x);
    }

    pub fn extended(&self, x: Symbol) -> InputTrace {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.extend_from_slice(&self.0);
        v.push(x);
        InputTrace(v)
    }

    pub fn concat(&self, suffix: &[Symbol]) -> InputTrace {
        let mut v = Vec::with_capacity(self.0.len() + suffix.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(suffix);
        InputTrace(v)
    }

    /// `self` is a (not necessarily proper) prefix of `other`.
    pub fn is_prefix_of(&self, other: &InputTrace) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn shortlex_key(&self) -> (usize, &[Symbol]) {
        (self.0.len(), &self.0)
    }

    /// Renders the trace with names joined by `.`; ε renders as the empty string.
    pub fn render(&self, alphabet: &Alphabet) -> String {
        join_names(&self.0, alphabet)
    }

    /// Inverse of [`InputTrace::render`]. Returns the offending name on failure.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<InputTrace, String> {
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Ok(InputTrace::empty());
        }
        text.split('.')
            .map(|name| alphabet.index_of(name).ok_or_else(|| name.to_string()))
            .collect::<Result<Vec<_>, _>>()
            .map(InputTrace)
    }
}

impl From<Vec<Symbol>> for InputTrace {
    fn from(v: Vec<Symbol>) -> Self {
        InputTrace(v)
    }
}

impl AsRef<[Symbol]> for InputTrace {
    fn as_ref(&self) -> &[Symbol] {
        &self.0
    }
}

impl fmt::Display for InputTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        f.write_str(&parts.join("."))
    }
}

/// An input trace together with the outputs it produced (equal lengths).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IoTrace {
    pub inputs: InputTrace,
    pub outputs: Vec<Symbol>,
}

impl IoTrace {
    pub fn new(inputs: InputTrace, outputs: Vec<Symbol>) -> Self {
        assert_eq!(inputs.len(), outputs.len(), "I/O trace lengths differ");
        IoTrace { inputs, outputs }
    }

    pub fn len(&self) -> usize {
        self.outputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outputs.is_empty()
    }

    /// `a.b/1.0` style rendering.
    pub fn render(&self, inputs: &Alphabet, outputs: &Alphabet) -> String {
        format!(
            "{}/{}",
            self.inputs.render(inputs),
            join_names(&self.outputs, outputs)
        )
    }
}

pub(crate) fn join_names(symbols: &[Symbol], alphabet: &Alphabet) -> String {
    let names: Vec<&str> = symbols.iter().map(|&s| alphabet.name(s)).collect();
    names.join(".")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_and_parse() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let t = InputTrace::new(vec![0, 1, 1]);
        assert_eq!(t.render(&ab), "a.b.b");
        assert_eq!(InputTrace::parse("a.b.b", &ab), Ok(t));
        assert_eq!(InputTrace::parse("", &ab), Ok(InputTrace::empty()));
        assert_eq!(InputTrace::parse("a.c", &ab), Err("c".to_string()));
    }

    #[test]
    fn prefix_relation() {
        let t = InputTrace::new(vec![0, 1]);
        assert!(InputTrace::empty().is_prefix_of(&t));
        assert!(t.is_prefix_of(&t));
        assert!(InputTrace::new(vec![0]).is_prefix_of(&t));
        assert!(!InputTrace::new(vec![1]).is_prefix_of(&t));
    }
}
