//! Requirement satisfaction oracles.
//!
//! `S ⊨ R` is decided twice: once as language inclusion `L(S) ⊆ L(M1′)` over
//! the product of `S` with M1′, and once from the definition over the product
//! of `S` with `M`, looking up requirement cells directly. Both searches are
//! breadth-first with inputs in alphabet order, so a returned witness is the
//! shortlex-least shortest violating input trace.

use std::collections::VecDeque;

use crate::abstraction::{build_m1, NondetAbstraction};
use crate::alphabet::Symbol;
use crate::error::{OracleError, RequirementError};
use crate::machine::{align, Dfsm, State};
use crate::requirement::CompositeRequirement;
use crate::trace::{InputTrace, IoTrace};

/// Reusable oracle for one `(M, R)`. Implementations must share the
/// reference model's alphabets (see [`align`]).
#[derive(Debug, Clone)]
pub struct RequirementOracle {
    m: Dfsm,
    r: CompositeRequirement,
    m1p: NondetAbstraction,
    table: Vec<Option<usize>>,
}

impl RequirementOracle {
    pub fn new(m: &Dfsm, r: &CompositeRequirement) -> Result<Self, RequirementError> {
        let m1p = NondetAbstraction::from_m1(&build_m1(m, r)?);
        Ok(RequirementOracle {
            m: m.clone(),
            r: r.clone(),
            m1p,
            table: r.index_table(m.num_states(), m.num_inputs()),
        })
    }

    pub fn reference(&self) -> &Dfsm {
        &self.m
    }

    pub fn requirement(&self) -> &CompositeRequirement {
        &self.r
    }

    pub fn abstraction(&self) -> &NondetAbstraction {
        &self.m1p
    }

    /// Shortest `x̄` with `x̄/ω_S(x̄) ∉ L(M1′)`, by replaying `S` against the
    /// transition relation of M1′.
    pub fn via_reduction(&self, s: &Dfsm) -> Option<InputTrace> {
        debug_assert!(s.shares_alphabets(&self.m));
        let f = self.m1p.fsm();
        product_search(s, self.m1p.num_states(), self.m1p.initial(), |q, x, y| {
            let ts = f.transitions_from(q, x);
            ts.iter().find(|t| t.output == y).map(|t| t.target)
        })
    }

    /// Shortest `π.x_i` with `π ∈ Π(q_i)` on which `S` answers outside `Z_i`.
    pub fn via_definition(&self, s: &Dfsm) -> Option<InputTrace> {
        debug_assert!(s.shares_alphabets(&self.m));
        let m = &self.m;
        let k = m.num_inputs();
        product_search(s, m.num_states(), m.initial(), |q, x, y| {
            match self.table[q * k + x] {
                Some(i) if !self.r.items()[i].allowed.contains(y) => None,
                _ => Some(m.next_state(q, x)),
            }
        })
    }

    /// Runs both routes and insists they agree.
    pub fn check(&self, s: &Dfsm) -> Result<Option<InputTrace>, OracleError> {
        let reduction = self.via_reduction(s);
        let direct = self.via_definition(s);
        if reduction != direct {
            let show = |t: &Option<InputTrace>| match t {
                None => "satisfied".to_string(),
                Some(t) => format!("violated by `{}`", t.render(self.m.inputs())),
            };
            return Err(OracleError::RoutesDisagree {
                reduction: show(&reduction),
                direct: show(&direct),
            });
        }
        Ok(reduction)
    }
}

/// BFS over `S × reference`. `step(q, x, y)` returns the reference successor,
/// or `None` when `y` is not acceptable for `(q, x)`.
fn product_search(
    s: &Dfsm,
    num_ref: usize,
    ref_initial: State,
    step: impl Fn(State, Symbol, Symbol) -> Option<State>,
) -> Option<InputTrace> {
    let k = s.num_inputs();
    let idx = |a: State, q: State| a * num_ref + q;
    let mut parent: Vec<Option<(usize, Symbol)>> = vec![None; s.num_states() * num_ref];
    let mut seen = vec![false; s.num_states() * num_ref];
    let start = (s.initial(), ref_initial);
    seen[idx(start.0, start.1)] = true;
    let mut queue = VecDeque::from([start]);
    while let Some((a, q)) = queue.pop_front() {
        let here = idx(a, q);
        for x in 0..k {
            let Some(nq) = step(q, x, s.output(a, x)) else {
                let mut rev = vec![x];
                let mut node = here;
                while let Some((p, px)) = parent[node] {
                    rev.push(px);
                    node = p;
                }
                rev.reverse();
                return Some(InputTrace::new(rev));
            };
            let na = s.next_state(a, x);
            let ni = idx(na, nq);
            if !seen[ni] {
                seen[ni] = true;
                parent[ni] = Some((here, x));
                queue.push_back((na, nq));
            }
        }
    }
    None
}

fn prepared<'a>(
    s: &'a Dfsm,
    m: &'a Dfsm,
    r: &CompositeRequirement,
) -> Result<(RequirementOracle, std::borrow::Cow<'a, Dfsm>), OracleError> {
    // the union alphabet keeps m's symbols first, so r's indices stay valid
    let (m, s) = align(m, s)?;
    Ok((RequirementOracle::new(&m, r)?, s))
}

/// Re-expresses a witness found on the aligned machine as an I/O trace of `s`.
fn witness_of(s: &Dfsm, aligned: &Dfsm, t: InputTrace) -> IoTrace {
    let inputs: Vec<Symbol> = t
        .symbols()
        .iter()
        .map(|&x| {
            s.inputs()
                .index_of(aligned.inputs().name(x))
                .expect("same input set")
        })
        .collect();
    s.io_trace(&InputTrace::new(inputs))
}

/// `S ⊨ R` via `L(S) ⊆ L(M1′)`; `None` means satisfied.
pub fn satisfies_via_reduction(
    s: &Dfsm,
    m: &Dfsm,
    r: &CompositeRequirement,
) -> Result<Option<IoTrace>, OracleError> {
    let (oracle, aligned) = prepared(s, m, r)?;
    Ok(oracle
        .via_reduction(&aligned)
        .map(|t| witness_of(s, &aligned, t)))
}

/// `S ⊨ R` from the definition over `S × M`; `None` means satisfied.
pub fn satisfies_direct(
    s: &Dfsm,
    m: &Dfsm,
    r: &CompositeRequirement,
) -> Result<Option<IoTrace>, OracleError> {
    let (oracle, aligned) = prepared(s, m, r)?;
    Ok(oracle
        .via_definition(&aligned)
        .map(|t| witness_of(s, &aligned, t)))
}

/// Both routes, cross-checked. `None` means `S ⊨ R`; otherwise a shortest
/// I/O trace of `S` whose last step answers a requirement input outside its
/// allowed set. Input and output symbols are indices into `s`'s alphabets.
pub fn satisfies_oracle(
    s: &Dfsm,
    m: &Dfsm,
    r: &CompositeRequirement,
) -> Result<Option<IoTrace>, OracleError> {
    let (oracle, aligned) = prepared(s, m, r)?;
    Ok(oracle.check(&aligned)?.map(|t| witness_of(s, &aligned, t)))
}

/// `x̄ ∈ Π̄`: `x̄ = π.x_i` for some item `i` with `q̄-after-π = q_i`.
pub fn is_requirement_trace(m: &Dfsm, r: &CompositeRequirement, trace: &InputTrace) -> bool {
    let Some((&x, prefix)) = trace.symbols().split_last() else {
        return false;
    };
    let q = m.after(m.initial(), prefix);
    r.items().iter().any(|item| item.state == q && item.input == x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn parse(m: &Dfsm, text: &str) -> InputTrace {
        InputTrace::parse(text, m.inputs()).unwrap()
    }

    #[test]
    fn s_satisfies_r() {
        let m = fixtures::machine_m();
        let r = fixtures::requirement_r(&m);
        assert_eq!(satisfies_oracle(&fixtures::machine_s(), &m, &r).unwrap(), None);
        assert_eq!(satisfies_oracle(&m, &m, &r).unwrap(), None);
    }

    #[test]
    fn s_prime_violates_r_on_baab() {
        let m = fixtures::machine_m();
        let r = fixtures::requirement_r(&m);
        let sp = fixtures::machine_s_prime();
        let w = satisfies_oracle(&sp, &m, &r).unwrap().unwrap();
        assert_eq!(w.render(sp.inputs(), sp.outputs()), "b.a.a.b/1.1.0.1");
        assert_eq!(satisfies_via_reduction(&sp, &m, &r).unwrap(), Some(w.clone()));
        assert_eq!(satisfies_direct(&sp, &m, &r).unwrap(), Some(w));
    }

    #[test]
    fn r_eq_is_language_equivalence() {
        let m = fixtures::machine_m();
        let s = fixtures::machine_s();
        let req = CompositeRequirement::language_equivalence(&m);
        let w = satisfies_oracle(&s, &m, &req).unwrap().unwrap();
        assert_eq!(w.render(s.inputs(), s.outputs()), "a.a.a/1.0.1");
        assert_eq!(Some(w.inputs), language_equivalent_trace(&m, &s));
    }

    fn language_equivalent_trace(m: &Dfsm, s: &Dfsm) -> Option<InputTrace> {
        crate::analysis::language_equivalent(m, s).unwrap()
    }

    #[test]
    fn requirement_traces() {
        let m = fixtures::machine_m();
        let r = fixtures::requirement_r(&m);
        assert!(is_requirement_trace(&m, &r, &parse(&m, "b.a.a.b")));
        assert!(is_requirement_trace(&m, &r, &parse(&m, "a.a")));
        assert!(!is_requirement_trace(&m, &r, &InputTrace::empty()));
        assert!(!is_requirement_trace(&m, &r, &parse(&m, "b")));
    }

    #[test]
    fn foreign_outputs_are_fine_at_dont_care_cells() {
        let m = fixtures::machine_m();
        let r = fixtures::requirement_r(&m);
        // q0 under b is unconstrained
        let s = crate::format::parse_fsm(
            "state,a,b\ns0,s2/1,s1/7\ns1,s1/0,s0/0\ns2,s2/0,s1/2\n",
        )
        .unwrap();
        assert_eq!(satisfies_oracle(&s, &m, &r).unwrap(), None);
        let s = crate::format::parse_fsm(
            "state,a,b\ns0,s2/7,s1/2\ns1,s1/0,s0/0\ns2,s2/0,s1/2\n",
        )
        .unwrap();
        let w = satisfies_oracle(&s, &m, &r).unwrap().unwrap();
        assert_eq!(w.render(s.inputs(), s.outputs()), "a/7");
    }
}
