//! Requirement-driven abstractions of a reference model.
//!
//! * [`AbstractDfsm`] (M1): same states and transitions as the reference
//!   model; each requirement cell `(q_i, x_i)` outputs its allowed set `Z_i`,
//!   every other cell outputs the don't-care class `*`.
//! * [`ClassMap`] (M2): the prime machine of M1 together with the class `[q]`
//!   of every reference state.
//! * [`NondetAbstraction`] (M1′): the observable nondeterministic machine with
//!   one transition per concrete output of the M1 class.

use std::sync::Arc;

use crate::alphabet::{Alphabet, Symbol};
use crate::analysis::minimize;
use crate::error::RequirementError;
use crate::machine::{Dfsm, Fsm, State, Transition};
use crate::requirement::{validate_requirement, CompositeRequirement, OutputSet};

/// Name of the don't-care output class.
pub const DONT_CARE: &str = "*";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractDfsm {
    machine: Dfsm,
    classes: Vec<OutputSet>,
    concrete_outputs: Arc<Alphabet>,
}

impl AbstractDfsm {
    /// M1 as a plain DFSM over class names (`*`, `{y|...}`).
    pub fn machine(&self) -> &Dfsm {
        &self.machine
    }

    /// Concrete outputs denoted by class symbol `c`.
    pub fn class(&self, c: Symbol) -> &OutputSet {
        &self.classes[c]
    }

    pub fn classes(&self) -> &[OutputSet] {
        &self.classes
    }

    /// Concrete outputs allowed for `(q, x)`.
    pub fn allowed(&self, q: State, x: Symbol) -> &OutputSet {
        &self.classes[self.machine.output(q, x)]
    }

    pub fn is_dont_care(&self, q: State, x: Symbol) -> bool {
        self.machine.output(q, x) == 0
    }

    pub fn concrete_outputs(&self) -> &Alphabet {
        &self.concrete_outputs
    }
}

/// Builds M1 from a reference model and a (validated) requirement.
pub fn build_m1(m: &Dfsm, r: &CompositeRequirement) -> Result<AbstractDfsm, RequirementError> {
    validate_requirement(m, r)?;
    let full = OutputSet::full(m.outputs().len());
    let mut classes = vec![full];
    let mut names = vec![DONT_CARE.to_string()];
    let mut omega = vec![0; m.num_states() * m.num_inputs()];
    for item in r.items() {
        let c = match classes.iter().position(|z| *z == item.allowed) {
            Some(c) => c,
            None => {
                classes.push(item.allowed.clone());
                names.push(item.allowed.render(m.outputs()));
                classes.len() - 1
            }
        };
        omega[item.state * m.num_inputs() + item.input] = c;
    }
    let machine = Dfsm::from_parts_unchecked(
        m.states().to_vec(),
        m.initial(),
        m.inputs_arc().clone(),
        Arc::new(Alphabet::new(names).expect("class names are distinct")),
        m.delta_table().to_vec(),
        omega,
    );
    Ok(AbstractDfsm {
        machine,
        classes,
        concrete_outputs: m.outputs_arc().clone(),
    })
}

/// M2 and the class `[q]` of each reference state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassMap {
    prime: Dfsm,
    class_of: Vec<State>,
    carried: Vec<Vec<(Symbol, OutputSet)>>,
}

impl ClassMap {
    /// The prime machine of M1 (outputs are class names).
    pub fn prime(&self) -> &Dfsm {
        &self.prime
    }

    /// Number of abstract states `n′`.
    pub fn num_classes(&self) -> usize {
        self.prime.num_states()
    }

    /// `[q]` as a state of [`ClassMap::prime`].
    pub fn class(&self, q: State) -> State {
        self.class_of[q]
    }

    pub fn class_of(&self) -> &[State] {
        &self.class_of
    }

    /// Members of class `c`.
    pub fn members(&self, c: State) -> Vec<State> {
        (0..self.class_of.len())
            .filter(|&q| self.class_of[q] == c)
            .collect()
    }

    /// Requirement `(x_i, Z_i)` pairs carried by members of class `c`.
    pub fn carried(&self, c: State) -> &[(Symbol, OutputSet)] {
        &self.carried[c]
    }
}

/// M1 must have no unreachable states, which holds when M is prime.
pub fn build_m2(m1: &AbstractDfsm) -> ClassMap {
    let min = minimize(m1.machine());
    let class_of: Vec<State> = min
        .class_of
        .iter()
        .map(|c| c.expect("reference states are reachable"))
        .collect();
    let mut carried: Vec<Vec<(Symbol, OutputSet)>> = vec![Vec::new(); min.machine.num_states()];
    let machine = m1.machine();
    for q in 0..machine.num_states() {
        for x in 0..machine.num_inputs() {
            if m1.is_dont_care(q, x) {
                continue;
            }
            let entry = (x, m1.allowed(q, x).clone());
            let list = &mut carried[class_of[q]];
            if !list.contains(&entry) {
                list.push(entry);
            }
        }
    }
    ClassMap {
        prime: min.machine,
        class_of,
        carried,
    }
}

/// M1′: nondeterministic in outputs only; targets follow the reference model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NondetAbstraction {
    fsm: Fsm,
    allowed: Vec<OutputSet>,
    delta: Vec<State>,
    num_inputs: usize,
}

impl NondetAbstraction {
    pub fn from_m1(m1: &AbstractDfsm) -> Self {
        let machine = m1.machine();
        let k = machine.num_inputs();
        let mut allowed = Vec::with_capacity(machine.num_states() * k);
        let mut transitions = Vec::new();
        for q in 0..machine.num_states() {
            for x in 0..k {
                let set = m1.allowed(q, x).clone();
                let target = machine.next_state(q, x);
                transitions.extend(set.iter().map(|y| Transition {
                    source: q,
                    input: x,
                    output: y,
                    target,
                }));
                allowed.push(set);
            }
        }
        let fsm = Fsm::new(
            machine.states().to_vec(),
            machine.initial(),
            machine.inputs_arc().clone(),
            m1.concrete_outputs.clone(),
            transitions,
        )
        .expect("built from a valid machine");
        NondetAbstraction {
            fsm,
            allowed,
            delta: machine.delta_table().to_vec(),
            num_inputs: k,
        }
    }

    /// The transition relation `h1′` as a general FSM.
    pub fn fsm(&self) -> &Fsm {
        &self.fsm
    }

    pub fn initial(&self) -> State {
        self.fsm.initial()
    }

    pub fn num_states(&self) -> usize {
        self.fsm.num_states()
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    pub fn inputs(&self) -> &Alphabet {
        self.fsm.inputs()
    }

    pub fn outputs(&self) -> &Alphabet {
        self.fsm.outputs()
    }

    #[inline]
    pub fn allowed(&self, q: State, x: Symbol) -> &OutputSet {
        &self.allowed[q * self.num_inputs + x]
    }

    #[inline]
    pub fn target(&self, q: State, x: Symbol) -> State {
        self.delta[q * self.num_inputs + x]
    }

    /// Allowed output sets along `trace` from the initial state.
    pub fn allowed_along(&self, trace: &[Symbol]) -> Vec<&OutputSet> {
        let mut q = self.initial();
        trace
            .iter()
            .map(|&x| {
                let set = self.allowed(q, x);
                q = self.target(q, x);
                set
            })
            .collect()
    }

    /// One `q,x,y,q′` line per transition.
    pub fn render_transitions(&self) -> String {
        let f = &self.fsm;
        let mut out = String::new();
        for t in f.transitions() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                f.states()[t.source],
                f.inputs().name(t.input),
                f.outputs().name(t.output),
                f.states()[t.target]
            ));
        }
        out
    }
}

pub fn build_m1_prime(
    m: &Dfsm,
    r: &CompositeRequirement,
) -> Result<NondetAbstraction, RequirementError> {
    Ok(NondetAbstraction::from_m1(&build_m1(m, r)?))
}
