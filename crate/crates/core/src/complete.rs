//! Complete suites for output-set membership.
//!
//! The basic reduction suite `V.Σ^{0..m·n′−n′+1}` (with `V` a deterministic
//! state cover of M1′ and `n′` its number of language classes) is complete
//! for `L(S) ⊆ L(M1′)` over machines with at most `m` states. Keeping only
//! the prefixes that end in a requirement input at a requirement state gives
//! a suite that is complete for the requirement itself.

use crate::abstraction::{ClassMap, NondetAbstraction};
use crate::analysis::{cover_by, StateCover};
use crate::error::SuiteError;
use crate::exhaustive::for_each_word;
use crate::machine::Dfsm;
use crate::requirement::{CompositeRequirement, OutputSet};
use crate::suite::{Method, TestSuite, TraceTree};

/// Largest number of cases the basic reduction suite may have.
pub const CASE_LIMIT: u128 = 5_000_000;

#[derive(Debug, Clone)]
pub struct ReductionSuite {
    pub suite: TestSuite,
    /// States of M2.
    pub n_prime: usize,
    /// Bound on the number of implementation states.
    pub m: usize,
    /// Exponent `m·n′ − n′ + 1`.
    pub depth: usize,
    /// Deterministic state cover of M1′; targets are M2 states.
    pub cover: StateCover,
}

/// `V.Σ^{0..m·n′−n′+1}`, prefix-pruned.
pub fn reduction_suite(
    m1p: &NondetAbstraction,
    classes: &ClassMap,
    m: usize,
) -> Result<ReductionSuite, SuiteError> {
    let n_prime = classes.num_classes();
    if m < n_prime {
        return Err(SuiteError::BoundBelowClasses { m, classes: n_prime });
    }
    let depth = m * n_prime - n_prime + 1;
    let k = m1p.num_inputs();
    let estimate = (k as u128)
        .checked_pow(depth as u32)
        .map(|c| c.saturating_mul(n_prime as u128))
        .unwrap_or(u128::MAX);
    if estimate > CASE_LIMIT {
        return Err(SuiteError::TooLarge { estimate, limit: CASE_LIMIT });
    }
    let prime = classes.prime();
    let cover = cover_by(prime.num_states(), k, prime.initial(), |c, x| prime.next_state(c, x));
    let mut tree = TraceTree::new(k);
    for v in &cover.traces {
        for_each_word(k, depth, |w| {
            let mut t = v.symbols().to_vec();
            t.extend_from_slice(w);
            tree.insert(&t);
        });
    }
    let suite = TestSuite::from_pruned(prime, tree.leaves(), Method::RequirementComplete, m - n_prime);
    Ok(ReductionSuite {
        suite,
        n_prime,
        m,
        depth,
        cover,
    })
}

/// `pref(TS) ∩ Π̄`, prefix-pruned.
pub fn filter_requirement_suite(ts: &TestSuite, m: &Dfsm, r: &CompositeRequirement) -> TestSuite {
    let k = m.num_inputs();
    let table = r.index_table(m.num_states(), k);
    let tree = ts.tree(k);
    let mut kept = TraceTree::new(k);
    let mut stack = vec![(0usize, m.initial(), Vec::new())];
    while let Some((node, q, path)) = stack.pop() {
        for x in 0..k {
            let Some(child) = tree.child(node, x) else {
                continue;
            };
            let mut next = path.clone();
            next.push(x);
            if table[q * k + x].is_some() {
                kept.insert(&next);
            }
            stack.push((child, m.next_state(q, x), next));
        }
    }
    TestSuite::from_pruned(m, kept.leaves(), Method::RequirementComplete, ts.extra_states)
}

/// Allowed output sets of M1′ along each case.
pub fn expected_sets(m1p: &NondetAbstraction, ts: &TestSuite) -> Vec<Vec<OutputSet>> {
    ts.cases()
        .iter()
        .map(|c| m1p.allowed_along(c.symbols()).into_iter().cloned().collect())
        .collect()
}

/// Expected-sets file: `<case>/<set>;<set>;...` per line, sorted.
pub fn render_expected_sets(m1p: &NondetAbstraction, ts: &TestSuite) -> String {
    let mut lines: Vec<String> = ts
        .cases()
        .iter()
        .map(|c| {
            let sets: Vec<String> = m1p
                .allowed_along(c.symbols())
                .into_iter()
                .map(|z| z.render(m1p.outputs()))
                .collect();
            let case = if c.is_empty() {
                "ε".to_string()
            } else {
                c.render(m1p.inputs())
            };
            format!("{case}/{}", sets.join(";"))
        })
        .collect();
    lines.sort();
    lines.iter().map(|l| format!("{l}\n")).collect()
}

/// Convenience: reduction suite for `(M, R)` with bound `m`, then filtered.
pub fn complete_req_suite(
    m: &Dfsm,
    r: &CompositeRequirement,
    bound: usize,
) -> Result<(ReductionSuite, TestSuite), SuiteError> {
    crate::exhaustive::ensure_prime(m)?;
    let m1 = crate::abstraction::build_m1(m, r)?;
    let classes = crate::abstraction::build_m2(&m1);
    let m1p = NondetAbstraction::from_m1(&m1);
    let red = reduction_suite(&m1p, &classes, bound)?;
    let filtered = filter_requirement_suite(&red.suite, m, r);
    Ok((red, filtered))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abstraction::{build_m1, build_m2};
    use crate::fixtures;
    use crate::oracle::is_requirement_trace;
    use crate::trace::InputTrace;

    fn setting() -> (Dfsm, CompositeRequirement, NondetAbstraction, ClassMap) {
        let m = fixtures::machine_m();
        let r = fixtures::requirement_r(&m);
        let m1 = build_m1(&m, &r).unwrap();
        let cm = build_m2(&m1);
        (m.clone(), r, NondetAbstraction::from_m1(&m1), cm)
    }

    #[test]
    fn running_example_reduction_suite() {
        let (m, _, m1p, cm) = setting();
        let red = reduction_suite(&m1p, &cm, 3).unwrap();
        let v: Vec<String> = red.cover.traces.iter().map(|t| t.render(m.inputs())).collect();
        assert_eq!(v, ["", "b"]);
        assert_eq!(red.depth, 5);
        // a.Σ^4 survives at length 5; every b-case is extended to length 6
        assert_eq!(red.suite.len(), 16 + 32);
        assert!(red.suite.len() <= 2 * 32);
    }

    #[test]
    fn bound_below_classes() {
        let (_, _, m1p, cm) = setting();
        assert_eq!(
            reduction_suite(&m1p, &cm, 1).unwrap_err(),
            SuiteError::BoundBelowClasses { m: 1, classes: 2 }
        );
    }

    #[test]
    fn single_class_bound_one_gives_alphabet() {
        let m = fixtures::fsb_rts();
        let r = fixtures::fsb_r1(&m);
        let m1 = build_m1(&m, &r).unwrap();
        let cm = build_m2(&m1);
        let red = reduction_suite(&NondetAbstraction::from_m1(&m1), &cm, 1).unwrap();
        assert_eq!(red.depth, 1);
        assert_eq!(red.suite.len(), m.num_inputs());
    }

    #[test]
    fn filtered_cases_end_in_requirement_inputs() {
        let (m, r, m1p, cm) = setting();
        let red = reduction_suite(&m1p, &cm, 3).unwrap();
        let f = filter_requirement_suite(&red.suite, &m, &r);
        assert!(!f.is_empty());
        for c in f.cases() {
            assert!(is_requirement_trace(&m, &r, c));
            assert!(red.suite.tree(2).contains_prefix(c.symbols()));
        }
        // oracle: every requirement-trace prefix of the parent suite is a prefix of a kept case
        let kept = f.tree(2);
        for c in red.suite.cases() {
            for l in 1..=c.len() {
                let p = InputTrace::new(c.symbols()[..l].to_vec());
                if is_requirement_trace(&m, &r, &p) {
                    assert!(kept.contains_prefix(p.symbols()));
                }
            }
        }
    }

    #[test]
    fn no_requirement_prefix_gives_empty_suite() {
        let (m, r, _, _) = setting();
        // only `b` from q0: (q0, b) carries no requirement
        let ts = TestSuite::external(&m, vec![InputTrace::new(vec![1])]);
        assert!(filter_requirement_suite(&ts, &m, &r).is_empty());
    }

    #[test]
    fn expected_sets_file() {
        let (m, _, m1p, _) = setting();
        let ts = TestSuite::external(&m, vec![InputTrace::new(vec![1, 0, 0, 1])]);
        assert_eq!(render_expected_sets(&m1p, &ts), "b.a.a.b/{0|1|2};{0|1|2};{0|1|2};{0|2}\n");
    }
}
