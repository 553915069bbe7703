//! Running suites against an implementation model.
//!
//! `pass⇒`: the observed output trace equals the reference output trace.
//! `pass⇔`: every observed output lies in the set M1′ allows at that step.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::abstraction::NondetAbstraction;
use crate::alphabet::{Alphabet, Symbol};
use crate::error::AlphabetMismatch;
use crate::machine::{align, Dfsm};
use crate::requirement::OutputSet;
use crate::suite::{TestSuite, TraceTree};
use crate::trace::InputTrace;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expected {
    Outputs(Vec<Symbol>),
    Sets(Vec<OutputSet>),
}

impl Expected {
    fn accepts(&self, step: usize, y: Symbol) -> bool {
        match self {
            Expected::Outputs(ys) => ys[step] == y,
            Expected::Sets(zs) => zs[step].contains(y),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseResult {
    pub case: InputTrace,
    pub observed: Vec<Symbol>,
    pub expected: Expected,
    /// 0-based index of the first step whose output is not accepted.
    pub first_divergence: Option<usize>,
}

impl CaseResult {
    fn new(case: InputTrace, observed: Vec<Symbol>, expected: Expected) -> Self {
        let first_divergence = observed
            .iter()
            .enumerate()
            .position(|(i, &y)| !expected.accepts(i, y));
        CaseResult {
            case,
            observed,
            expected,
            first_divergence,
        }
    }

    pub fn passed(&self) -> bool {
        self.first_divergence.is_none()
    }
}

/// Per-case results; symbols index `inputs` and `outputs`.
#[derive(Debug, Clone)]
pub struct SuiteRun {
    pub inputs: Arc<Alphabet>,
    pub outputs: Arc<Alphabet>,
    pub results: Vec<CaseResult>,
}

impl SuiteRun {
    /// The suite verdict: every case passed.
    pub fn passed(&self) -> bool {
        self.results.iter().all(CaseResult::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.results.iter().filter(|r| !r.passed())
    }

    fn outs(&self, ys: &[Symbol]) -> String {
        ys.iter()
            .map(|&y| self.outputs.name(y))
            .collect::<Vec<_>>()
            .join(".")
    }

    /// One line per failing case, e.g.
    /// `FAIL a.a.a step 3: observed 1.0.1 expected 1.0.0`.
    pub fn render_failures(&self) -> String {
        let mut out = String::new();
        for r in self.failures() {
            let step = r.first_divergence.expect("failing case") + 1;
            let expected = match &r.expected {
                Expected::Outputs(ys) => self.outs(ys),
                Expected::Sets(zs) => zs
                    .iter()
                    .map(|z| z.render(&self.outputs))
                    .collect::<Vec<_>>()
                    .join(";"),
            };
            let _ = writeln!(
                out,
                "FAIL {} step {}: observed {} expected {}",
                r.case.render(&self.inputs),
                step,
                self.outs(&r.observed),
                expected
            );
        }
        out
    }
}

/// Runs every case under `pass⇒`.
pub fn run_suite_equiv(s: &Dfsm, m: &Dfsm, ts: &TestSuite) -> Result<SuiteRun, AlphabetMismatch> {
    let (m, s) = align(m, s)?;
    let results = ts
        .cases()
        .iter()
        .map(|c| {
            let expected = Expected::Outputs(m.run(c.symbols()));
            CaseResult::new(c.clone(), s.run(c.symbols()), expected)
        })
        .collect();
    Ok(SuiteRun {
        inputs: m.inputs_arc().clone(),
        outputs: m.outputs_arc().clone(),
        results,
    })
}

/// Runs every case under `pass⇔`.
pub fn run_suite_reduction(
    s: &Dfsm,
    m1p: &NondetAbstraction,
    ts: &TestSuite,
) -> Result<SuiteRun, AlphabetMismatch> {
    let inputs = Arc::new(m1p.inputs().clone());
    // the union keeps M1′'s outputs first, so its allowed sets stay valid
    let outputs = Arc::new(m1p.outputs().union(s.outputs()));
    let s = s.reindexed(&inputs, &outputs)?;
    let results = ts
        .cases()
        .iter()
        .map(|c| {
            let sets = m1p.allowed_along(c.symbols()).into_iter().cloned().collect();
            CaseResult::new(c.clone(), s.run(c.symbols()), Expected::Sets(sets))
        })
        .collect();
    Ok(SuiteRun {
        inputs,
        outputs,
        results,
    })
}

/// Suite verdicts without per-case bookkeeping, for experiments over many
/// implementations. Implementations must share the reference's alphabets.
#[derive(Debug, Clone)]
pub struct SuiteChecker {
    tree: TraceTree,
}

impl SuiteChecker {
    pub fn new(ts: &TestSuite, num_inputs: usize) -> Self {
        SuiteChecker {
            tree: ts.tree(num_inputs),
        }
    }

    /// `S pass⇒ TS` against `m`.
    pub fn passes_equiv(&self, s: &Dfsm, m: &Dfsm) -> bool {
        let mut stack = vec![(0usize, s.initial(), m.initial())];
        while let Some((node, a, q)) = stack.pop() {
            for x in 0..self.tree.num_inputs() {
                if let Some(c) = self.tree.child(node, x) {
                    if s.output(a, x) != m.output(q, x) {
                        return false;
                    }
                    stack.push((c, s.next_state(a, x), m.next_state(q, x)));
                }
            }
        }
        true
    }

    /// `S pass⇔ TS` against M1′.
    pub fn passes_reduction(&self, s: &Dfsm, m1p: &NondetAbstraction) -> bool {
        let mut stack = vec![(0usize, s.initial(), m1p.initial())];
        while let Some((node, a, q)) = stack.pop() {
            for x in 0..self.tree.num_inputs() {
                if let Some(c) = self.tree.child(node, x) {
                    if !m1p.allowed(q, x).contains(s.output(a, x)) {
                        return false;
                    }
                    stack.push((c, s.next_state(a, x), m1p.target(q, x)));
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abstraction::build_m1_prime;
    use crate::fixtures;

    fn suite(m: &Dfsm, cases: &[&str]) -> TestSuite {
        let cases = cases
            .iter()
            .map(|c| InputTrace::parse(c, m.inputs()).unwrap())
            .collect();
        TestSuite::external(m, cases)
    }

    #[test]
    fn s_passes_four_cases_and_fails_aaa() {
        let m = fixtures::machine_m();
        let s = fixtures::machine_s();
        let run = run_suite_equiv(&s, &m, &suite(&m, &["a.a.b", "a.b.b", "b.a.b", "b.b.a"])).unwrap();
        assert!(run.passed());
        let run = run_suite_equiv(&s, &m, &suite(&m, &["a.a.a"])).unwrap();
        assert!(!run.passed());
        assert_eq!(run.results[0].first_divergence, Some(2));
        assert_eq!(run.render_failures(), "FAIL a.a.a step 3: observed 1.0.1 expected 1.0.0\n");
    }

    #[test]
    fn s_prime_under_reduction_criterion() {
        let m = fixtures::machine_m();
        let r = fixtures::requirement_r(&m);
        let m1p = build_m1_prime(&m, &r).unwrap();
        let sp = fixtures::machine_s_prime();
        let four = suite(&m, &["a.a.b", "a.b.b", "b.a.b", "b.b.a"]);
        assert!(run_suite_reduction(&sp, &m1p, &four).unwrap().passed());
        let run = run_suite_reduction(&sp, &m1p, &suite(&m, &["b.a.a.b"])).unwrap();
        assert_eq!(run.results[0].first_divergence, Some(3));
        assert_eq!(
            run.render_failures(),
            "FAIL b.a.a.b step 4: observed 1.1.0.1 expected {0|1|2};{0|1|2};{0|1|2};{0|2}\n"
        );
    }

    #[test]
    fn checker_agrees_with_runner() {
        let m = fixtures::machine_m();
        let r = fixtures::requirement_r(&m);
        let m1p = build_m1_prime(&m, &r).unwrap();
        let ts = suite(&m, &["a.a.a", "a.b.b", "b.a.a.b", "b.b.a"]);
        let checker = SuiteChecker::new(&ts, 2);
        for s in [fixtures::machine_m(), fixtures::machine_s()] {
            assert_eq!(checker.passes_equiv(&s, &m), run_suite_equiv(&s, &m, &ts).unwrap().passed());
            assert_eq!(
                checker.passes_reduction(&s, &m1p),
                run_suite_reduction(&s, &m1p, &ts).unwrap().passed()
            );
        }
        assert!(checker.passes_equiv(&m, &m));
        assert!(checker.passes_reduction(&m, &m1p));
    }
}
