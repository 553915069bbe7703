//! Finite state machines with input/output alphabets.
//!
//! [`Fsm`] holds an arbitrary transition relation `h ⊆ Q × Σ_I × Σ_O × Q`.
//! [`Dfsm`] is the deterministic, completely specified special case stored as
//! two dense tables (`delta` for targets, `omega` for outputs) indexed by
//! `state * |Σ_I| + input`.

use std::collections::HashSet;
use std::sync::Arc;

use crate::alphabet::{Alphabet, Symbol};
use crate::error::{AlphabetMismatch, ModelError};
use crate::trace::{InputTrace, IoTrace};

/// Index of a state within its machine.
pub type State = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub source: State,
    pub input: Symbol,
    pub output: Symbol,
    pub target: State,
}

/// The three structural judgments on a transition relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Properties {
    /// At most one transition per (state, input).
    pub deterministic: bool,
    /// At least one transition per (state, input).
    pub completely_specified: bool,
    /// State, input and output determine the target.
    pub observable: bool,
}

/// A general (possibly nondeterministic) FSM.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fsm {
    states: Vec<String>,
    initial: State,
    inputs: Arc<Alphabet>,
    outputs: Arc<Alphabet>,
    transitions: Vec<Transition>,
}

fn check_state_names(states: &[String]) -> Result<(), ModelError> {
    if states.is_empty() {
        return Err(ModelError::NoStates);
    }
    let mut seen = HashSet::new();
    for s in states {
        if !seen.insert(s.as_str()) {
            return Err(ModelError::DuplicateState(s.clone()));
        }
    }
    Ok(())
}

impl Fsm {
    pub fn new(
        states: Vec<String>,
        initial: State,
        inputs: Arc<Alphabet>,
        outputs: Arc<Alphabet>,
        transitions: impl IntoIterator<Item = Transition>,
    ) -> Result<Self, ModelError> {
        check_state_names(&states)?;
        if initial >= states.len() {
            return Err(ModelError::StateOutOfRange(initial));
        }
        let mut transitions: Vec<Transition> = transitions.into_iter().collect();
        for t in &transitions {
            if t.source >= states.len() {
                return Err(ModelError::StateOutOfRange(t.source));
            }
            if t.target >= states.len() {
                return Err(ModelError::StateOutOfRange(t.target));
            }
            if t.input >= inputs.len() {
                return Err(ModelError::InputOutOfRange(t.input));
            }
            if t.output >= outputs.len() {
                return Err(ModelError::OutputOutOfRange(t.output));
            }
        }
        transitions.sort_unstable();
        transitions.dedup();
        Ok(Fsm {
            states,
            initial,
            inputs,
            outputs,
            transitions,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn initial(&self) -> State {
        self.initial
    }

    pub fn inputs(&self) -> &Alphabet {
        &self.inputs
    }

    pub fn outputs(&self) -> &Alphabet {
        &self.outputs
    }

    /// Transitions sorted by (source, input, output, target).
    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// Transitions leaving `q` under input `x`.
    pub fn transitions_from(&self, q: State, x: Symbol) -> &[Transition] {
        let lo = self
            .transitions
            .partition_point(|t| (t.source, t.input) < (q, x));
        let hi = self
            .transitions
            .partition_point(|t| (t.source, t.input) <= (q, x));
        &self.transitions[lo..hi]
    }

    pub fn properties(&self) -> Properties {
        check_properties(self)
    }

    /// Converts to a [`Dfsm`] if the relation is deterministic and complete.
    pub fn to_dfsm(&self) -> Result<Dfsm, ModelError> {
        let k = self.inputs.len();
        let mut delta = vec![usize::MAX; self.states.len() * k];
        let mut omega = vec![usize::MAX; self.states.len() * k];
        for t in &self.transitions {
            let cell = t.source * k + t.input;
            if delta[cell] != usize::MAX {
                return Err(ModelError::NotDeterministic {
                    state: self.states[t.source].clone(),
                    input: self.inputs.name(t.input).to_string(),
                });
            }
            delta[cell] = t.target;
            omega[cell] = t.output;
        }
        if let Some(cell) = delta.iter().position(|&d| d == usize::MAX) {
            return Err(ModelError::NotCompletelySpecified {
                state: self.states[cell / k].clone(),
                input: self.inputs.name(cell % k).to_string(),
            });
        }
        Dfsm::from_table(
            self.states.clone(),
            self.initial,
            self.inputs.clone(),
            self.outputs.clone(),
            delta,
            omega,
        )
    }
}

/// Deterministic / complete / observable judgments for an arbitrary FSM.
pub fn check_properties(m: &Fsm) -> Properties {
    let mut deterministic = true;
    let mut completely_specified = true;
    let mut observable = true;
    for q in 0..m.num_states() {
        for x in 0..m.inputs.len() {
            let ts = m.transitions_from(q, x);
            if ts.is_empty() {
                completely_specified = false;
            }
            if ts.len() > 1 {
                deterministic = false;
            }
            // sorted by output, so equal outputs are adjacent
            if ts.windows(2).any(|w| w[0].output == w[1].output) {
                observable = false;
            }
        }
    }
    Properties {
        deterministic,
        completely_specified,
        observable,
    }
}

/// A deterministic, completely specified FSM.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfsm {
    states: Vec<String>,
    initial: State,
    inputs: Arc<Alphabet>,
    outputs: Arc<Alphabet>,
    delta: Vec<State>,
    omega: Vec<Symbol>,
}

impl Dfsm {
    /// Builds a machine from dense tables indexed by `state * |Σ_I| + input`.
    pub fn from_table(
        states: Vec<String>,
        initial: State,
        inputs: Arc<Alphabet>,
        outputs: Arc<Alphabet>,
        delta: Vec<State>,
        omega: Vec<Symbol>,
    ) -> Result<Self, ModelError> {
        check_state_names(&states)?;
        let n = states.len();
        if initial >= n {
            return Err(ModelError::StateOutOfRange(initial));
        }
        let cells = n * inputs.len();
        for table in [&delta, &omega] {
            if table.len() != cells {
                return Err(ModelError::TableSize {
                    expected: cells,
                    found: table.len(),
                });
            }
        }
        if let Some(&bad) = delta.iter().find(|&&t| t >= n) {
            return Err(ModelError::StateOutOfRange(bad));
        }
        if let Some(&bad) = omega.iter().find(|&&y| y >= outputs.len()) {
            return Err(ModelError::OutputOutOfRange(bad));
        }
        Ok(Dfsm {
            states,
            initial,
            inputs,
            outputs,
            delta,
            omega,
        })
    }

    /// Same as [`Dfsm::from_table`] without range checks; callers guarantee validity.
    pub(crate) fn from_parts_unchecked(
        states: Vec<String>,
        initial: State,
        inputs: Arc<Alphabet>,
        outputs: Arc<Alphabet>,
        delta: Vec<State>,
        omega: Vec<Symbol>,
    ) -> Self {
        debug_assert_eq!(delta.len(), states.len() * inputs.len());
        Dfsm {
            states,
            initial,
            inputs,
            outputs,
            delta,
            omega,
        }
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn initial(&self) -> State {
        self.initial
    }

    pub fn state_name(&self, q: State) -> &str {
        &self.states[q]
    }

    pub fn state_index(&self, name: &str) -> Option<State> {
        self.states.iter().position(|s| s == name)
    }

    pub fn inputs(&self) -> &Alphabet {
        &self.inputs
    }

    pub fn outputs(&self) -> &Alphabet {
        &self.outputs
    }

    pub fn inputs_arc(&self) -> &Arc<Alphabet> {
        &self.inputs
    }

    pub fn outputs_arc(&self) -> &Arc<Alphabet> {
        &self.outputs
    }

    pub fn delta_table(&self) -> &[State] {
        &self.delta
    }

    pub fn omega_table(&self) -> &[Symbol] {
        &self.omega
    }

    #[inline]
    pub fn next_state(&self, q: State, x: Symbol) -> State {
        self.delta[q * self.inputs.len() + x]
    }

    #[inline]
    pub fn output(&self, q: State, x: Symbol) -> Symbol {
        self.omega[q * self.inputs.len() + x]
    }

    /// `q`-after-`trace`: the state reached from `q`.
    pub fn after(&self, q: State, trace: &[Symbol]) -> State {
        trace.iter().fold(q, |s, &x| self.next_state(s, x))
    }

    /// Output trace produced from `q`; empty for ε.
    pub fn omega_trace(&self, q: State, trace: &[Symbol]) -> Vec<Symbol> {
        let mut s = q;
        trace
            .iter()
            .map(|&x| {
                let y = self.output(s, x);
                s = self.next_state(s, x);
                y
            })
            .collect()
    }

    /// Output trace from the initial state.
    pub fn run(&self, trace: &[Symbol]) -> Vec<Symbol> {
        self.omega_trace(self.initial, trace)
    }

    pub fn io_trace(&self, trace: &InputTrace) -> IoTrace {
        IoTrace::new(trace.clone(), self.run(trace.symbols()))
    }

    /// Reachability flags from the initial state.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut stack = vec![self.initial];
        seen[self.initial] = true;
        while let Some(q) = stack.pop() {
            for x in 0..self.num_inputs() {
                let t = self.next_state(q, x);
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    pub fn to_fsm(&self) -> Fsm {
        let k = self.num_inputs();
        let transitions = (0..self.delta.len()).map(|cell| Transition {
            source: cell / k,
            input: cell % k,
            output: self.omega[cell],
            target: self.delta[cell],
        });
        Fsm::new(
            self.states.clone(),
            self.initial,
            self.inputs.clone(),
            self.outputs.clone(),
            transitions,
        )
        .expect("a valid DFSM yields a valid FSM")
    }

    /// Re-expresses this machine over other alphabets with the same inputs
    /// (as a set) and a superset of the outputs.
    pub fn reindexed(
        &self,
        inputs: &Arc<Alphabet>,
        outputs: &Arc<Alphabet>,
    ) -> Result<Dfsm, AlphabetMismatch> {
        if !self.inputs.same_set(inputs) {
            return Err(AlphabetMismatch(format!(
                "inputs {:?} vs {:?}",
                self.inputs.symbols(),
                inputs.symbols()
            )));
        }
        if !self.outputs.is_subset_of(outputs) {
            return Err(AlphabetMismatch(format!(
                "outputs {:?} not contained in {:?}",
                self.outputs.symbols(),
                outputs.symbols()
            )));
        }
        let k = inputs.len();
        let in_map: Vec<Symbol> = inputs
            .symbols()
            .iter()
            .map(|s| self.inputs.index_of(s).expect("same input set"))
            .collect();
        let out_map: Vec<Symbol> = self
            .outputs
            .symbols()
            .iter()
            .map(|s| outputs.index_of(s).expect("output subset"))
            .collect();
        let mut delta = Vec::with_capacity(self.delta.len());
        let mut omega = Vec::with_capacity(self.omega.len());
        for q in 0..self.num_states() {
            for &old_x in in_map.iter().take(k) {
                delta.push(self.next_state(q, old_x));
                omega.push(out_map[self.output(q, old_x)]);
            }
        }
        Ok(Dfsm::from_parts_unchecked(
            self.states.clone(),
            self.initial,
            inputs.clone(),
            outputs.clone(),
            delta,
            omega,
        ))
    }

    /// True when both machines index symbols identically.
    pub fn shares_alphabets(&self, other: &Dfsm) -> bool {
        (Arc::ptr_eq(&self.inputs, &other.inputs) || self.inputs == other.inputs)
            && (Arc::ptr_eq(&self.outputs, &other.outputs) || self.outputs == other.outputs)
    }
}

/// Brings `other` onto `reference`'s alphabets when needed. Inputs must agree
/// as sets; outputs of `other` outside the reference alphabet extend it.
/// Returns `(reference, other)` over common alphabets.
pub fn align<'a>(
    reference: &'a Dfsm,
    other: &'a Dfsm,
) -> Result<(std::borrow::Cow<'a, Dfsm>, std::borrow::Cow<'a, Dfsm>), AlphabetMismatch> {
    use std::borrow::Cow;
    if reference.shares_alphabets(other) {
        return Ok((Cow::Borrowed(reference), Cow::Borrowed(other)));
    }
    if !reference.inputs.same_set(&other.inputs) {
        return Err(AlphabetMismatch(format!(
            "inputs {:?} vs {:?}",
            reference.inputs.symbols(),
            other.inputs.symbols()
        )));
    }
    let outputs = if other.outputs.is_subset_of(&reference.outputs) {
        reference.outputs.clone()
    } else {
        Arc::new(reference.outputs.union(&other.outputs))
    };
    let left = if Arc::ptr_eq(&outputs, &reference.outputs) {
        Cow::Borrowed(reference)
    } else {
        Cow::Owned(reference.reindexed(&reference.inputs, &outputs)?)
    };
    let right = Cow::Owned(other.reindexed(&reference.inputs, &outputs)?);
    Ok((left, right))
}
