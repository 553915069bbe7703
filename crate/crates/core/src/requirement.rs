//! Elementary and composite requirements `R(q, x, Z)` on a reference model.
//!
//! Requirement file format, one elementary requirement per line:
//!
//! ```text
//! # comment
//! q0,a,{0|1}
//! q1,b,{0|2}
//! ```

use std::collections::HashSet;
use std::fmt;

use crate::alphabet::{Alphabet, Symbol};
use crate::error::RequirementError;
use crate::machine::{Dfsm, State};

/// A set of output symbols, kept sorted by index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OutputSet(Vec<Symbol>);

impl OutputSet {
    pub fn new(symbols: impl IntoIterator<Item = Symbol>) -> Self {
        let mut v: Vec<Symbol> = symbols.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        OutputSet(v)
    }

    /// All `n` outputs of an alphabet.
    pub fn full(n: usize) -> Self {
        OutputSet((0..n).collect())
    }

    pub fn singleton(y: Symbol) -> Self {
        OutputSet(vec![y])
    }

    #[inline]
    pub fn contains(&self, y: Symbol) -> bool {
        self.0.binary_search(&y).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Symbol] {
        &self.0
    }

    /// `{y1|y2}` with names in sorted order.
    pub fn render(&self, outputs: &Alphabet) -> String {
        let mut names: Vec<&str> = self.0.iter().map(|&y| outputs.name(y)).collect();
        names.sort_unstable();
        format!("{{{}}}", names.join("|"))
    }
}

/// `R(state, input, allowed)`: in `state`, `input` must yield an output in `allowed`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ElementaryRequirement {
    pub state: State,
    pub input: Symbol,
    pub allowed: OutputSet,
}

/// Ordered conjunction of elementary requirements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeRequirement {
    items: Vec<ElementaryRequirement>,
}

impl CompositeRequirement {
    pub fn new(items: Vec<ElementaryRequirement>) -> Self {
        CompositeRequirement { items }
    }

    pub fn items(&self) -> &[ElementaryRequirement] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// `R_eq`: every transition of `m` with its own output as the only allowed one.
    /// Holding it is the same as being language equivalent to `m`.
    pub fn language_equivalence(m: &Dfsm) -> Self {
        let items = (0..m.num_states())
            .flat_map(|q| {
                (0..m.num_inputs()).map(move |x| ElementaryRequirement {
                    state: q,
                    input: x,
                    allowed: OutputSet::singleton(m.output(q, x)),
                })
            })
            .collect();
        CompositeRequirement { items }
    }

    /// Dense `(state, input) -> item index` lookup for a machine of the given shape.
    pub fn index_table(&self, num_states: usize, num_inputs: usize) -> Vec<Option<usize>> {
        let mut table = vec![None; num_states * num_inputs];
        for (i, item) in self.items.iter().enumerate() {
            table[item.state * num_inputs + item.input].get_or_insert(i);
        }
        table
    }

    pub fn display<'a>(&'a self, m: &'a Dfsm) -> impl fmt::Display + 'a {
        RequirementDisplay { r: self, m }
    }
}

struct RequirementDisplay<'a> {
    r: &'a CompositeRequirement,
    m: &'a Dfsm,
}

impl fmt::Display for RequirementDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_requirement(self.r, self.m))
    }
}

/// Parses a requirement file against the reference model's names.
pub fn parse_requirement(text: &str, m: &Dfsm) -> Result<CompositeRequirement, RequirementError> {
    let mut items = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let syntax = |message: &str| RequirementError::Syntax {
            line,
            message: message.to_string(),
        };
        let mut parts = l.splitn(3, ',');
        let (Some(state), Some(input), Some(set)) = (parts.next(), parts.next(), parts.next())
        else {
            return Err(syntax("expected `<state>,<input>,{<out>|...}`"));
        };
        let set = set.trim();
        let inner = set
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| syntax("allowed outputs must be written as `{y1|y2|...}`"))?;
        let state_name = state.trim();
        let input_name = input.trim();
        let q = m
            .state_index(state_name)
            .ok_or_else(|| RequirementError::UnknownState(state_name.to_string()))?;
        let x = m
            .inputs()
            .index_of(input_name)
            .ok_or_else(|| RequirementError::UnknownInput(input_name.to_string()))?;
        let mut allowed = Vec::new();
        if !inner.trim().is_empty() {
            for name in inner.split('|').map(str::trim) {
                let y = m
                    .outputs()
                    .index_of(name)
                    .ok_or_else(|| RequirementError::UnknownOutput(name.to_string()))?;
                allowed.push(y);
            }
        }
        items.push(ElementaryRequirement {
            state: q,
            input: x,
            allowed: OutputSet::new(allowed),
        });
    }
    Ok(CompositeRequirement { items })
}

pub fn serialize_requirement(r: &CompositeRequirement, m: &Dfsm) -> String {
    let mut out = String::new();
    for item in &r.items {
        out.push_str(&format!(
            "{},{},{}\n",
            m.state_name(item.state),
            m.inputs().name(item.input),
            item.allowed.render(m.outputs())
        ));
    }
    out
}

/// Checks `Z ≠ Σ_O`, `ω(q, x) ∈ Z`, distinct (q, x) pairs and name ranges.
pub fn validate_requirement(m: &Dfsm, r: &CompositeRequirement) -> Result<(), RequirementError> {
    if r.items.is_empty() {
        return Err(RequirementError::Empty);
    }
    let mut seen = HashSet::new();
    for item in &r.items {
        if item.state >= m.num_states() {
            return Err(RequirementError::UnknownState(format!("#{}", item.state)));
        }
        if item.input >= m.num_inputs() {
            return Err(RequirementError::UnknownInput(format!("#{}", item.input)));
        }
        if let Some(y) = item.allowed.iter().find(|&y| y >= m.outputs().len()) {
            return Err(RequirementError::UnknownOutput(format!("#{y}")));
        }
        let state = m.state_name(item.state).to_string();
        let input = m.inputs().name(item.input).to_string();
        if item.allowed.is_empty() {
            return Err(RequirementError::EmptyAllowedSet { state, input });
        }
        if item.allowed.len() == m.outputs().len() {
            return Err(RequirementError::AllowedSetIsFullAlphabet { state, input });
        }
        let expected = m.output(item.state, item.input);
        if !item.allowed.contains(expected) {
            return Err(RequirementError::ExpectedOutputNotAllowed {
                state,
                input,
                expected: m.outputs().name(expected).to_string(),
            });
        }
        if !seen.insert((item.state, item.input)) {
            return Err(RequirementError::DuplicateStateInputPair { state, input });
        }
    }
    Ok(())
}

/// Recovers the requirement encoded by a pre-built abstraction file: same
/// states and transitions as `m`, outputs either `*` or `{y|...}`.
pub fn requirement_from_abstraction(
    m: &Dfsm,
    abstraction: &Dfsm,
) -> Result<CompositeRequirement, RequirementError> {
    let mismatch = |msg: String| RequirementError::AbstractionMismatch(msg);
    if abstraction.num_states() != m.num_states() {
        return Err(mismatch(format!(
            "{} states vs {}",
            abstraction.num_states(),
            m.num_states()
        )));
    }
    if !abstraction.inputs().same_set(m.inputs()) {
        return Err(mismatch("input alphabets differ".into()));
    }
    let mut items = Vec::new();
    for q in 0..m.num_states() {
        let name = m.state_name(q);
        let aq = abstraction
            .state_index(name)
            .ok_or_else(|| mismatch(format!("state `{name}` missing")))?;
        for x in 0..m.num_inputs() {
            let input = m.inputs().name(x);
            let ax = abstraction.inputs().index_of(input).expect("same input set");
            let target = abstraction.state_name(abstraction.next_state(aq, ax));
            if target != m.state_name(m.next_state(q, x)) {
                return Err(mismatch(format!(
                    "transition ({name},{input}) leads to `{target}`"
                )));
            }
            let class = abstraction.outputs().name(abstraction.output(aq, ax));
            if class == "*" {
                continue;
            }
            let inner = class
                .strip_prefix('{')
                .and_then(|s| s.strip_suffix('}'))
                .ok_or_else(|| mismatch(format!("output `{class}` is neither `*` nor a set")))?;
            let allowed = inner
                .split('|')
                .map(|y| {
                    m.outputs()
                        .index_of(y)
                        .ok_or_else(|| RequirementError::UnknownOutput(y.to_string()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            items.push(ElementaryRequirement {
                state: q,
                input: x,
                allowed: OutputSet::new(allowed),
            });
        }
    }
    Ok(CompositeRequirement { items })
}
