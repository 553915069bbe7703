//! Test suites, the prefix tree they are built on, and the suite file formats.

use std::fmt;

use sha2::{Digest, Sha256};

use crate::alphabet::{Alphabet, Symbol};
use crate::error::SuiteError;
use crate::format::serialize_fsm;
use crate::machine::Dfsm;
use crate::trace::{InputTrace, IoTrace};

const NONE: u32 = u32::MAX;

/// Prefix tree over input symbols. Node 0 is the root (ε).
#[derive(Debug, Clone)]
pub struct TraceTree {
    k: usize,
    children: Vec<u32>,
    terminal: Vec<bool>,
}

impl TraceTree {
    pub fn new(num_inputs: usize) -> Self {
        TraceTree {
            k: num_inputs,
            children: vec![NONE; num_inputs],
            terminal: vec![false],
        }
    }

    pub fn from_traces<'a>(num_inputs: usize, traces: impl IntoIterator<Item = &'a InputTrace>) -> Self {
        let mut t = TraceTree::new(num_inputs);
        for tr in traces {
            t.insert(tr.symbols());
        }
        t
    }

    pub fn num_inputs(&self) -> usize {
        self.k
    }

    /// Number of nodes including the root.
    pub fn num_nodes(&self) -> usize {
        self.terminal.len()
    }

    #[inline]
    pub fn child(&self, node: usize, x: Symbol) -> Option<usize> {
        let c = self.children[node * self.k + x];
        (c != NONE).then_some(c as usize)
    }

    /// Node reached by `trace`, if `trace` is a prefix of some inserted trace.
    pub fn find(&self, trace: &[Symbol]) -> Option<usize> {
        trace.iter().try_fold(0, |node, &x| self.child(node, x))
    }

    pub fn contains_prefix(&self, trace: &[Symbol]) -> bool {
        self.find(trace).is_some()
    }

    /// Length of the longest prefix of `trace` already present.
    pub fn existing_depth(&self, trace: &[Symbol]) -> usize {
        let mut node = 0;
        for (i, &x) in trace.iter().enumerate() {
            match self.child(node, x) {
                Some(c) => node = c,
                None => return i,
            }
        }
        trace.len()
    }

    /// Inserts `trace`; returns the number of nodes created.
    pub fn insert(&mut self, trace: &[Symbol]) -> usize {
        let mut node = 0;
        let mut created = 0;
        for &x in trace {
            node = match self.child(node, x) {
                Some(c) => c,
                None => {
                    let c = self.terminal.len();
                    self.children[node * self.k + x] = c as u32;
                    self.children.extend(std::iter::repeat_n(NONE, self.k));
                    self.terminal.push(false);
                    created += 1;
                    c
                }
            };
        }
        self.terminal[node] = true;
        created
    }

    fn is_leaf(&self, node: usize) -> bool {
        self.children[node * self.k..(node + 1) * self.k]
            .iter()
            .all(|&c| c == NONE)
    }

    /// Maximal inserted traces in lexicographic order: the prefix-pruned set.
    pub fn leaves(&self) -> Vec<InputTrace> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.collect_leaves(0, &mut path, &mut out);
        out
    }

    fn collect_leaves(&self, node: usize, path: &mut Vec<Symbol>, out: &mut Vec<InputTrace>) {
        if self.is_leaf(node) {
            if node != 0 || self.terminal[0] {
                out.push(InputTrace::new(path.clone()));
            }
            return;
        }
        for x in 0..self.k {
            if let Some(c) = self.child(node, x) {
                path.push(x);
                self.collect_leaves(c, path, out);
                path.pop();
            }
        }
    }
}

/// Removes every case that is a proper prefix of another; sorts and dedups.
pub fn prune(num_inputs: usize, cases: &[InputTrace]) -> Vec<InputTrace> {
    TraceTree::from_traces(num_inputs, cases).leaves()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Language equivalence, exact output comparison.
    Equivalence,
    /// Requirement-based exhaustive suite, exact output comparison.
    RequirementExhaustive,
    /// Requirement-based complete suite, output-set membership.
    RequirementComplete,
    /// Read from a file or assembled by hand.
    External,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Equivalence => "equiv",
            Method::RequirementExhaustive => "req-exh",
            Method::RequirementComplete => "req-cmp",
            Method::External => "external",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A prefix-free set of input traces plus provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestSuite {
    cases: Vec<InputTrace>,
    pub method: Method,
    /// Additional states `m − n` the suite is built for.
    pub extra_states: usize,
    /// Hex SHA-256 of the serialized reference model.
    pub model_digest: String,
}

impl TestSuite {
    /// Prunes and sorts `cases`.
    pub fn new(
        m: &Dfsm,
        cases: &[InputTrace],
        method: Method,
        extra_states: usize,
    ) -> TestSuite {
        TestSuite {
            cases: prune(m.num_inputs(), cases),
            method,
            extra_states,
            model_digest: model_digest(m),
        }
    }

    pub(crate) fn from_pruned(
        m: &Dfsm,
        cases: Vec<InputTrace>,
        method: Method,
        extra_states: usize,
    ) -> TestSuite {
        TestSuite {
            cases,
            method,
            extra_states,
            model_digest: model_digest(m),
        }
    }

    /// Cases taken verbatim (no pruning), e.g. read from a file.
    pub fn external(m: &Dfsm, cases: Vec<InputTrace>) -> TestSuite {
        TestSuite::from_pruned(m, cases, Method::External, 0)
    }

    pub fn cases(&self) -> &[InputTrace] {
        &self.cases
    }

    pub fn len(&self) -> usize {
        self.cases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cases.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.cases.iter().map(InputTrace::len).max().unwrap_or(0)
    }

    /// Total number of inputs over all cases.
    pub fn total_len(&self) -> usize {
        self.cases.iter().map(InputTrace::len).sum()
    }

    pub fn tree(&self, num_inputs: usize) -> TraceTree {
        TraceTree::from_traces(num_inputs, &self.cases)
    }

    /// Suite file: one case per line, names joined by `.`, lines sorted.
    /// The empty trace is written as `ε`.
    pub fn render(&self, inputs: &Alphabet) -> String {
        render_lines(self.cases.iter().map(|c| render_case(c, inputs)))
    }
}

fn render_case(c: &InputTrace, inputs: &Alphabet) -> String {
    if c.is_empty() {
        "ε".to_string()
    } else {
        c.render(inputs)
    }
}

fn render_lines(lines: impl Iterator<Item = String>) -> String {
    let mut lines: Vec<String> = lines.collect();
    lines.sort();
    let mut out = String::new();
    for l in lines {
        out.push_str(&l);
        out.push('\n');
    }
    out
}

pub fn model_digest(m: &Dfsm) -> String {
    hex::encode(Sha256::digest(serialize_fsm(m).as_bytes()))
}

/// Reads a suite file. Blank lines and lines starting with `#` are skipped.
pub fn parse_suite(text: &str, inputs: &Alphabet) -> Result<Vec<InputTrace>, SuiteError> {
    let mut cases = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let case = InputTrace::parse(line, inputs).map_err(|symbol| SuiteError::UnknownInput {
            line: i + 1,
            symbol,
        })?;
        cases.push(case);
    }
    Ok(cases)
}

/// `x̄ / ω_M(q̄, x̄)` for every case.
pub fn expected_results(m: &Dfsm, ts: &TestSuite) -> Vec<IoTrace> {
    ts.cases().iter().map(|c| m.io_trace(c)).collect()
}

/// Expected-results file: `<case>/<outputs>` per line, in suite file order.
pub fn render_expected(m: &Dfsm, ts: &TestSuite) -> String {
    render_lines(ts.cases().iter().map(|c| {
        let outs: Vec<&str> = m.run(c.symbols()).into_iter().map(|y| m.outputs().name(y)).collect();
        format!("{}/{}", render_case(c, m.inputs()), outs.join("."))
    }))
}
