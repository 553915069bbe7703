//! Minimization, state covers, distinguishing traces and language equivalence.
//!
//! Every search explores inputs in alphabet order breadth-first, so returned
//! traces are the shortlex-least among the shortest candidates.

use std::collections::VecDeque;

use crate::alphabet::Symbol;
use crate::error::AlphabetMismatch;
use crate::machine::{align, Dfsm, State};
use crate::trace::InputTrace;

/// Language-equivalence classes of all states, numbered by first occurrence.
///
/// Partition refinement starting from the partition by output rows.
pub fn equivalence_classes(m: &Dfsm) -> Vec<usize> {
    let k = m.num_inputs();
    let n = m.num_states();
    let mut class = renumber((0..n).map(|q| m.omega_table()[q * k..(q + 1) * k].to_vec()));
    let mut count = class.iter().max().map_or(0, |c| c + 1);
    loop {
        let refined = renumber((0..n).map(|q| {
            let mut sig = Vec::with_capacity(k + 1);
            sig.push(class[q]);
            sig.extend((0..k).map(|x| class[m.next_state(q, x)]));
            sig
        }));
        let new_count = refined.iter().max().map_or(0, |c| c + 1);
        class = refined;
        if new_count == count {
            return class;
        }
        count = new_count;
    }
}

fn renumber(signatures: impl Iterator<Item = Vec<usize>>) -> Vec<usize> {
    let mut seen: std::collections::HashMap<Vec<usize>, usize> = Default::default();
    signatures
        .map(|sig| {
            let next = seen.len();
            *seen.entry(sig).or_insert(next)
        })
        .collect()
}

/// Result of [`minimize`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Minimized {
    pub machine: Dfsm,
    /// Class (state of `machine`) of each original state; `None` for states
    /// whose class has no reachable member.
    pub class_of: Vec<Option<State>>,
}

/// The prime machine: reachable part, equivalent states merged.
///
/// Result states are named after their smallest member and ordered by it.
pub fn minimize(m: &Dfsm) -> Minimized {
    let classes = equivalence_classes(m);
    let reachable = m.reachable();
    let num_classes = classes.iter().max().map_or(0, |c| c + 1);
    let mut representative: Vec<Option<State>> = vec![None; num_classes];
    for q in 0..m.num_states() {
        if reachable[q] && representative[classes[q]].is_none() {
            representative[classes[q]] = Some(q);
        }
    }
    let mut reps: Vec<State> = representative.iter().flatten().copied().collect();
    reps.sort_unstable();
    let mut new_index = vec![None; num_classes];
    for (i, &r) in reps.iter().enumerate() {
        new_index[classes[r]] = Some(i);
    }
    let k = m.num_inputs();
    let mut delta = Vec::with_capacity(reps.len() * k);
    let mut omega = Vec::with_capacity(reps.len() * k);
    for &r in &reps {
        for x in 0..k {
            delta.push(new_index[classes[m.next_state(r, x)]].expect("successor of reachable"));
            omega.push(m.output(r, x));
        }
    }
    let machine = Dfsm::from_parts_unchecked(
        reps.iter().map(|&r| m.state_name(r).to_string()).collect(),
        new_index[classes[m.initial()]].expect("initial is reachable"),
        m.inputs_arc().clone(),
        m.outputs_arc().clone(),
        delta,
        omega,
    );
    let class_of = classes.iter().map(|&c| new_index[c]).collect();
    Minimized { machine, class_of }
}

/// A set of input traces reaching every reachable state from the initial one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateCover {
    /// Traces in breadth-first discovery order; the first is ε.
    pub traces: Vec<InputTrace>,
    /// `targets[i]` is the state reached by `traces[i]`.
    pub targets: Vec<State>,
}

impl StateCover {
    pub fn len(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.traces.iter().map(InputTrace::len).max().unwrap_or(0)
    }

    /// The trace reaching `q`, if `q` is reachable.
    pub fn trace_to(&self, q: State) -> Option<&InputTrace> {
        self.targets.iter().position(|&t| t == q).map(|i| &self.traces[i])
    }
}

/// Breadth-first state cover with minimal-length traces.
pub fn state_cover(m: &Dfsm) -> StateCover {
    cover_by(m.num_states(), m.num_inputs(), m.initial(), |q, x| m.next_state(q, x))
}

pub(crate) fn cover_by(
    n: usize,
    k: usize,
    initial: State,
    next: impl Fn(State, Symbol) -> State,
) -> StateCover {
    let mut trace_of: Vec<Option<InputTrace>> = vec![None; n];
    trace_of[initial] = Some(InputTrace::empty());
    let mut traces = vec![InputTrace::empty()];
    let mut targets = vec![initial];
    let mut queue = VecDeque::from([initial]);
    while let Some(q) = queue.pop_front() {
        let base = trace_of[q].clone().expect("queued states have traces");
        for x in 0..k {
            let t = next(q, x);
            if trace_of[t].is_none() {
                let tr = base.extended(x);
                trace_of[t] = Some(tr.clone());
                traces.push(tr);
                targets.push(t);
                queue.push_back(t);
            }
        }
    }
    StateCover { traces, targets }
}

fn shortest_to_difference(
    k: usize,
    start: (State, State),
    num_right: usize,
    step: impl Fn(State, State, Symbol) -> (bool, State, State),
    num_left: usize,
) -> Option<InputTrace> {
    let idx = |a: State, b: State| a * num_right + b;
    let mut parent: Vec<Option<(usize, Symbol)>> = vec![None; num_left * num_right];
    let mut visited = vec![false; num_left * num_right];
    let start_idx = idx(start.0, start.1);
    visited[start_idx] = true;
    let mut queue = VecDeque::from([start]);
    let rebuild = |parent: &[Option<(usize, Symbol)>], mut node: usize, last: Symbol| {
        let mut rev = vec![last];
        while let Some((p, x)) = parent[node] {
            rev.push(x);
            node = p;
        }
        rev.reverse();
        InputTrace::new(rev)
    };
    while let Some((a, b)) = queue.pop_front() {
        let here = idx(a, b);
        for x in 0..k {
            let (differs, na, nb) = step(a, b, x);
            if differs {
                return Some(rebuild(&parent, here, x));
            }
            let ni = idx(na, nb);
            if !visited[ni] {
                visited[ni] = true;
                parent[ni] = Some((here, x));
                queue.push_back((na, nb));
            }
        }
    }
    None
}

/// A shortest trace on which `q` and `p` produce different outputs, or `None`
/// if the states are equivalent.
pub fn distinguishing_trace(m: &Dfsm, q: State, p: State) -> Option<InputTrace> {
    let n = m.num_states();
    shortest_to_difference(
        m.num_inputs(),
        (q, p),
        n,
        |a, b, x| {
            (
                m.output(a, x) != m.output(b, x),
                m.next_state(a, x),
                m.next_state(b, x),
            )
        },
        n,
    )
}

/// `None` if `L(a) = L(b)`, otherwise a shortest input trace on which the
/// machines' outputs differ.
pub fn language_equivalent(a: &Dfsm, b: &Dfsm) -> Result<Option<InputTrace>, AlphabetMismatch> {
    let (a, b) = align(a, b)?;
    Ok(shortest_to_difference(
        a.num_inputs(),
        (a.initial(), b.initial()),
        b.num_states(),
        |p, q, x| {
            (
                a.output(p, x) != b.output(q, x),
                a.next_state(p, x),
                b.next_state(q, x),
            )
        },
        a.num_states(),
    ))
}

/// Lengths of shortest distinguishing traces for all state pairs.
#[derive(Debug, Clone)]
pub(crate) struct SeparationTable {
    n: usize,
    dist: Vec<u32>,
    counts: Vec<u64>,
}

pub(crate) const INSEPARABLE: u32 = u32::MAX;

impl SeparationTable {
    pub(crate) fn new(m: &Dfsm) -> Self {
        let n = m.num_states();
        let k = m.num_inputs();
        let mut dist = vec![INSEPARABLE; n * n];
        for p in 0..n {
            for q in 0..n {
                if (0..k).any(|x| m.output(p, x) != m.output(q, x)) {
                    dist[p * n + q] = 1;
                }
            }
        }
        // level by level: a pair at distance d has a successor pair at d - 1
        let mut level = 1;
        loop {
            let fresh: Vec<usize> = (0..n * n)
                .filter(|&i| dist[i] == INSEPARABLE)
                .filter(|&i| {
                    let (p, q) = (i / n, i % n);
                    (0..k).any(|x| dist[m.next_state(p, x) * n + m.next_state(q, x)] == level)
                })
                .collect();
            if fresh.is_empty() {
                break;
            }
            level += 1;
            for i in fresh {
                dist[i] = level;
            }
        }
        let mut counts = vec![0u64; n * n];
        let mut order: Vec<usize> = (0..n * n).filter(|&i| dist[i] != INSEPARABLE).collect();
        order.sort_by_key(|&i| dist[i]);
        for i in order {
            let (p, q, d) = (i / n, i % n, dist[i]);
            counts[i] = (0..k)
                .map(|x| {
                    if d == 1 {
                        u64::from(m.output(p, x) != m.output(q, x))
                    } else if m.output(p, x) == m.output(q, x) {
                        let j = m.next_state(p, x) * n + m.next_state(q, x);
                        if dist[j] == d - 1 {
                            counts[j]
                        } else {
                            0
                        }
                    } else {
                        0
                    }
                })
                .fold(0u64, u64::saturating_add);
        }
        SeparationTable { n, dist, counts }
    }

    pub(crate) fn distance(&self, p: State, q: State) -> u32 {
        self.dist[p * self.n + q]
    }

    /// Number of distinct shortest distinguishing traces, saturating.
    pub(crate) fn count_shortest(&self, p: State, q: State) -> u64 {
        self.counts[p * self.n + q]
    }

    /// Up to `cap` shortest distinguishing traces in lexicographic order.
    #[cfg(test)]
    pub(crate) fn shortest(&self, m: &Dfsm, p: State, q: State, cap: usize) -> Vec<InputTrace> {
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        self.collect(m, p, q, cap, &mut prefix, &mut out);
        out
    }

    #[cfg(test)]
    fn collect(
        &self,
        m: &Dfsm,
        p: State,
        q: State,
        cap: usize,
        prefix: &mut Vec<Symbol>,
        out: &mut Vec<InputTrace>,
    ) {
        let d = self.distance(p, q);
        if d == INSEPARABLE {
            return;
        }
        for x in 0..m.num_inputs() {
            if out.len() >= cap {
                return;
            }
            if d == 1 {
                if m.output(p, x) != m.output(q, x) {
                    let mut t = prefix.clone();
                    t.push(x);
                    out.push(InputTrace::new(t));
                }
            } else if m.output(p, x) == m.output(q, x) {
                let (np, nq) = (m.next_state(p, x), m.next_state(q, x));
                if self.distance(np, nq) == d - 1 {
                    prefix.push(x);
                    self.collect(m, np, nq, cap, prefix, out);
                    prefix.pop();
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_fsm;

    const M: &str = "state,a,b\nq0,q2/1,q1/2\nq1,q1/0,q0/0\nq2,q2/0,q1/2\n";

    #[test]
    fn identical_rows_merge() {
        let m = parse_fsm("state,a\np,q/0\nq,p/0\n").unwrap();
        let min = minimize(&m);
        assert_eq!(min.machine.num_states(), 1);
        assert_eq!(min.class_of, vec![Some(0), Some(0)]);
    }

    #[test]
    fn unreachable_states_are_dropped() {
        let m = parse_fsm("state,a\np,p/0\nq,q/1\n").unwrap();
        let min = minimize(&m);
        assert_eq!(min.machine.num_states(), 1);
        assert_eq!(min.class_of, vec![Some(0), None]);
    }

    #[test]
    fn cover_of_running_example() {
        let m = parse_fsm(M).unwrap();
        let v = state_cover(&m);
        let ab = m.inputs();
        let rendered: Vec<String> = v.traces.iter().map(|t| t.render(ab)).collect();
        assert_eq!(rendered, ["", "a", "b"]);
        let names: Vec<&str> = v.targets.iter().map(|&q| m.state_name(q)).collect();
        assert_eq!(names, ["q0", "q2", "q1"]);
    }

    #[test]
    fn single_state_cover() {
        let m = parse_fsm("state,a\ns0,s0/0\n").unwrap();
        assert_eq!(state_cover(&m).traces, vec![InputTrace::empty()]);
    }

    #[test]
    fn distinguishing_q1_q2() {
        let m = parse_fsm(M).unwrap();
        let t = distinguishing_trace(&m, 1, 2).unwrap();
        assert_eq!(t.render(m.inputs()), "b");
        assert_eq!(m.outputs().name(m.output(1, 1)), "0");
        assert_eq!(m.outputs().name(m.output(2, 1)), "2");
        assert_eq!(distinguishing_trace(&m, 1, 1), None);
    }

    #[test]
    fn separation_table_matches_bfs() {
        let m = parse_fsm("state,a\ns0,s1/0\ns1,s2/0\ns2,s3/0\ns3,s0/1\n").unwrap();
        let table = SeparationTable::new(&m);
        for p in 0..4 {
            for q in 0..4 {
                let bfs = distinguishing_trace(&m, p, q).map(|t| t.len() as u32);
                assert_eq!(bfs.unwrap_or(INSEPARABLE), table.distance(p, q));
                if let Some(t) = distinguishing_trace(&m, p, q) {
                    let all = table.shortest(&m, p, q, usize::MAX);
                    assert_eq!(all.first(), Some(&t));
                    assert_eq!(all.len() as u64, table.count_shortest(p, q));
                }
            }
        }
    }
}
