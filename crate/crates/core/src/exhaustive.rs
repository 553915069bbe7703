//! Exhaustive suites for exact output comparison.
//!
//! With `V` a state cover of `M` and `T = V.Σ^{1..e+1}` (`e` extra states),
//! a suite `TS` is exhaustive for `R` when
//!
//! 1. `V.Σ^{0..e+1}` ⊆ pref(TS), and
//! 2. for every `(α, β)` in `A(M) ∪ B(M1) ∪ C(M1)` some `γ ∈ Δ_M(α, β)` has
//!    both `α.γ` and `β.γ` in pref(TS),
//!
//! where `A = V × V`, `B = V × T`, `C` = pairs of `T` with `α` a proper prefix
//! of `β`, and the filters keep pairs whose targets are distinguished by `M`
//! (for `A`) or by `M1` (for `B` and `C`). Using `M` itself in place of `M1`
//! gives a complete suite for language equivalence.
//!
//! Witness policy: pairs are handled in order of increasing number of
//! shortest distinguishing traces of their target states (then by trace id);
//! each pair takes the shortest `γ` that adds the fewest new tree nodes,
//! lexicographically least among equals. A pair already separated inside the
//! tree adds nothing.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::abstraction::{build_m1, build_m2, AbstractDfsm};
use crate::alphabet::Symbol;
use crate::analysis::{equivalence_classes, minimize, state_cover, SeparationTable, StateCover, INSEPARABLE};
use crate::error::SuiteError;
use crate::machine::{Dfsm, State};
use crate::requirement::CompositeRequirement;
use crate::suite::{Method, TestSuite, TraceTree};
use crate::trace::InputTrace;

/// Largest number of traces in `V.Σ^{0..e+1}` the generator accepts.
pub const TRACE_LIMIT: u128 = 20_000_000;

pub type PairId = (u32, u32);

/// The pair sets and the witness chosen for each filtered pair. Pairs refer
/// to trace ids; ids below `cover_len` are the state cover in order.
#[derive(Debug, Clone)]
pub struct PairSets {
    traces: Vec<InputTrace>,
    targets: Vec<State>,
    cover_len: usize,
    extension_ids: Vec<u32>,
    pub a: Vec<PairId>,
    pub b: Vec<PairId>,
    pub c: Vec<PairId>,
    /// `A(M)`
    pub a_filtered: Vec<PairId>,
    /// `B(M1)`
    pub b_filtered: Vec<PairId>,
    /// `C(M1)`
    pub c_filtered: Vec<PairId>,
    witness: HashMap<PairId, InputTrace>,
}

impl PairSets {
    pub fn trace(&self, id: u32) -> &InputTrace {
        &self.traces[id as usize]
    }

    /// `q̄-after-trace` in `M`.
    pub fn target(&self, id: u32) -> State {
        self.targets[id as usize]
    }

    pub fn cover_len(&self) -> usize {
        self.cover_len
    }

    /// Ids of `V.Σ^{1..e+1}`.
    pub fn extension_ids(&self) -> &[u32] {
        &self.extension_ids
    }

    /// The `γ` chosen for a filtered pair, in either orientation.
    pub fn witness(&self, pair: PairId) -> Option<&InputTrace> {
        self.witness.get(&(pair.0.min(pair.1), pair.0.max(pair.1)))
    }

    pub fn num_witnesses(&self) -> usize {
        self.witness.len()
    }
}

struct TraceTable {
    traces: Vec<InputTrace>,
    targets: Vec<State>,
    index: HashMap<Vec<Symbol>, u32>,
    cover_len: usize,
    extension_ids: Vec<u32>,
}

impl TraceTable {
    fn build(m: &Dfsm, v: &StateCover, extra: usize) -> Result<TraceTable, SuiteError> {
        let k = m.num_inputs();
        let per_cover: u128 = (1..=extra as u32 + 1)
            .map(|i| (k as u128).saturating_pow(i))
            .fold(1u128, u128::saturating_add);
        let estimate = per_cover.saturating_mul(v.len() as u128);
        if estimate > TRACE_LIMIT {
            return Err(SuiteError::TooLarge { estimate, limit: TRACE_LIMIT });
        }
        let mut table = TraceTable {
            traces: Vec::new(),
            targets: Vec::new(),
            index: HashMap::new(),
            cover_len: v.len(),
            extension_ids: Vec::new(),
        };
        for tr in &v.traces {
            table.intern(m, tr.symbols());
        }
        let mut in_ext = HashSet::new();
        for tr in &v.traces {
            for len in 1..=extra + 1 {
                for_each_word(k, len, |w| {
                    let full: Vec<Symbol> = tr.symbols().iter().chain(w).copied().collect();
                    let id = table.intern(m, &full);
                    if in_ext.insert(id) {
                        table.extension_ids.push(id);
                    }
                });
            }
        }
        Ok(table)
    }

    fn intern(&mut self, m: &Dfsm, t: &[Symbol]) -> u32 {
        if let Some(&id) = self.index.get(t) {
            return id;
        }
        let id = self.traces.len() as u32;
        self.index.insert(t.to_vec(), id);
        self.traces.push(InputTrace::new(t.to_vec()));
        self.targets.push(m.after(m.initial(), t));
        id
    }
}

/// Calls `f` on every word of length `len` in lexicographic order.
pub(crate) fn for_each_word(k: usize, len: usize, mut f: impl FnMut(&[Symbol])) {
    if k == 0 {
        return;
    }
    let mut w = vec![0; len];
    loop {
        f(&w);
        let mut i = len;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            w[i] += 1;
            if w[i] < k {
                break;
            }
            w[i] = 0;
        }
    }
}

/// Lexicographically least, cheapest shortest distinguishing extension.
struct WitnessSearch<'a> {
    m: &'a Dfsm,
    sep: &'a SeparationTable,
    tree: &'a TraceTree,
    alpha: &'a [Symbol],
    beta: &'a [Symbol],
    gamma: Vec<Symbol>,
    best: Option<(usize, Vec<Symbol>)>,
}

#[derive(Clone, Copy)]
struct Frontier {
    p: State,
    q: State,
    node_a: Option<usize>,
    node_b: Option<usize>,
    /// Depth of the longest prefix of `α.γ` (resp. `β.γ`) already in the tree.
    depth_a: usize,
    depth_b: usize,
    /// `α.γ` and `β.γ` agree on every position known for both.
    agree: bool,
    lcp: usize,
}

impl WitnessSearch<'_> {
    fn symbol_at(&self, side: &[Symbol], i: usize) -> Symbol {
        if i < side.len() {
            side[i]
        } else {
            self.gamma[i - side.len()]
        }
    }

    fn cost(&self, f: &Frontier, t: usize, at_leaf: bool) -> usize {
        let (la, lb) = (self.alpha.len(), self.beta.len());
        let new_a = la + t - f.depth_a;
        let new_b = if f.agree && !at_leaf {
            0
        } else {
            let lcp = if f.agree { la.min(lb) + t } else { f.lcp };
            (lb + t).saturating_sub(f.depth_b.max(lcp))
        };
        new_a + new_b
    }

    fn run(&mut self, f: Frontier) {
        let t = self.gamma.len();
        let d = self.sep.distance(f.p, f.q);
        let both_off = f.node_a.is_none() && f.node_b.is_none() && !f.agree;
        for x in 0..self.m.num_inputs() {
            let same = self.m.output(f.p, x) == self.m.output(f.q, x);
            let (np, nq) = (self.m.next_state(f.p, x), self.m.next_state(f.q, x));
            let leaf = d == 1 && !same;
            if !leaf && (d == 1 || !same || self.sep.distance(np, nq) != d - 1) {
                continue;
            }
            self.gamma.push(x);
            let mut g = f;
            g.p = np;
            g.q = nq;
            g.node_a = f.node_a.and_then(|n| self.tree.child(n, x));
            g.node_b = f.node_b.and_then(|n| self.tree.child(n, x));
            if g.node_a.is_some() {
                g.depth_a += 1;
            }
            if g.node_b.is_some() {
                g.depth_b += 1;
            }
            if f.agree {
                let i = self.alpha.len().min(self.beta.len()) + t;
                if self.symbol_at(self.alpha, i) != self.symbol_at(self.beta, i) {
                    g.agree = false;
                    g.lcp = i;
                }
            }
            let bound = self.cost(&g, t + 1, leaf);
            let promising = self.best.as_ref().is_none_or(|(c, _)| bound < *c);
            if promising {
                if leaf {
                    self.best = Some((bound, self.gamma.clone()));
                } else {
                    self.run(g);
                }
            }
            self.gamma.pop();
            // both sides left the tree: every completion costs the same
            if both_off {
                break;
            }
            if matches!(self.best, Some((0, _))) {
                break;
            }
        }
    }
}

fn lcp(a: &[Symbol], b: &[Symbol]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

fn choose_witness(
    m: &Dfsm,
    sep: &SeparationTable,
    tree: &TraceTree,
    alpha: &[Symbol],
    beta: &[Symbol],
) -> (usize, Vec<Symbol>) {
    let (p, q) = (m.after(m.initial(), alpha), m.after(m.initial(), beta));
    let common = lcp(alpha, beta);
    let agree = common == alpha.len().min(beta.len());
    let mut search = WitnessSearch {
        m,
        sep,
        tree,
        alpha,
        beta,
        gamma: Vec::new(),
        best: None,
    };
    search.run(Frontier {
        p,
        q,
        node_a: tree.find(alpha),
        node_b: tree.find(beta),
        depth_a: tree.existing_depth(alpha),
        depth_b: tree.existing_depth(beta),
        agree,
        lcp: common,
    });
    search.best.expect("distinguishable pairs have a witness")
}

/// Runs the generator; returns the pair sets and the tree of the suite.
fn generate(
    m: &Dfsm,
    bc_class: &[usize],
    v: &StateCover,
    extra: usize,
) -> Result<(PairSets, TraceTree), SuiteError> {
    let table = TraceTable::build(m, v, extra)?;
    let m_class = equivalence_classes(m);
    let cover: Vec<u32> = (0..table.cover_len as u32).collect();
    let ext = &table.extension_ids;
    let tgt = |id: u32| table.targets[id as usize];

    let a: Vec<PairId> = cover
        .iter()
        .flat_map(|&i| cover.iter().map(move |&j| (i, j)))
        .collect();
    let b: Vec<PairId> = cover
        .iter()
        .flat_map(|&i| ext.iter().map(move |&j| (i, j)))
        .collect();
    let mut c: Vec<PairId> = Vec::new();
    let in_ext: HashSet<u32> = ext.iter().copied().collect();
    for &j in ext {
        let beta = table.traces[j as usize].symbols();
        for l in 1..beta.len() {
            if let Some(&i) = table.index.get(&beta[..l]) {
                if in_ext.contains(&i) {
                    c.push((i, j));
                }
            }
        }
    }
    let split_by = |set: &[PairId], class: &[usize]| -> Vec<PairId> {
        set.iter()
            .copied()
            .filter(|&(i, j)| class[tgt(i)] != class[tgt(j)])
            .collect()
    };
    let a_filtered = split_by(&a, &m_class);
    let b_filtered = split_by(&b, bc_class);
    let c_filtered = split_by(&c, bc_class);

    let mut tree = TraceTree::new(m.num_inputs());
    for tr in &v.traces {
        for_each_word(m.num_inputs(), extra + 1, |w| {
            let full: Vec<Symbol> = tr.symbols().iter().chain(w).copied().collect();
            tree.insert(&full);
        });
    }

    let sep = SeparationTable::new(m);
    let mut pairs: Vec<PairId> = a_filtered
        .iter()
        .chain(&b_filtered)
        .chain(&c_filtered)
        .map(|&(i, j)| (i.min(j), i.max(j)))
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    pairs.sort_by_key(|&(i, j)| (sep.count_shortest(tgt(i), tgt(j)), i, j));

    let mut witness = HashMap::with_capacity(pairs.len());
    for (i, j) in pairs {
        let alpha = table.traces[i as usize].symbols();
        let beta = table.traces[j as usize].symbols();
        debug_assert_ne!(sep.distance(tgt(i), tgt(j)), INSEPARABLE);
        let (cost, gamma) = choose_witness(m, &sep, &tree, alpha, beta);
        if cost > 0 {
            let mut ag = alpha.to_vec();
            ag.extend_from_slice(&gamma);
            tree.insert(&ag);
            let mut bg = beta.to_vec();
            bg.extend_from_slice(&gamma);
            tree.insert(&bg);
        }
        witness.insert((i, j), InputTrace::new(gamma));
    }

    let sets = PairSets {
        traces: table.traces,
        targets: table.targets,
        cover_len: table.cover_len,
        extension_ids: table.extension_ids,
        a,
        b,
        c,
        a_filtered,
        b_filtered,
        c_filtered,
        witness,
    };
    Ok((sets, tree))
}

/// Generation assumes every state is reachable and no two are equivalent.
pub(crate) fn ensure_prime(m: &Dfsm) -> Result<(), SuiteError> {
    let prime = minimize(m).machine.num_states();
    if prime != m.num_states() {
        return Err(SuiteError::NotPrime {
            states: m.num_states(),
            prime,
        });
    }
    Ok(())
}

/// Pair sets for `(M, M1)` with witnesses chosen against a tree seeded with
/// `V.Σ^{0..e+1}`.
pub fn compute_pair_sets(
    m: &Dfsm,
    m1: &AbstractDfsm,
    v: &StateCover,
    extra_states: usize,
) -> Result<PairSets, SuiteError> {
    ensure_prime(m)?;
    let classes = build_m2(m1);
    Ok(generate(m, classes.class_of(), v, extra_states)?.0)
}

fn finish(
    m: &Dfsm,
    tree: TraceTree,
    method: Method,
    extra_states: usize,
    bc_class: &[usize],
) -> Result<TestSuite, SuiteError> {
    let ts = TestSuite::from_pruned(m, tree.leaves(), method, extra_states);
    verify_structure(m, bc_class, extra_states, &ts)?;
    Ok(ts)
}

/// Complete suite for language equivalence with up to `extra_states`
/// additional states in the implementation.
pub fn h_suite(m: &Dfsm, extra_states: usize) -> Result<TestSuite, SuiteError> {
    ensure_prime(m)?;
    let classes = equivalence_classes(m);
    let v = state_cover(m);
    let (_, tree) = generate(m, &classes, &v, extra_states)?;
    finish(m, tree, Method::Equivalence, extra_states, &classes)
}

/// Exhaustive suite for `R` under exact output comparison.
pub fn exhaustive_req_suite(
    m: &Dfsm,
    r: &CompositeRequirement,
    extra_states: usize,
) -> Result<TestSuite, SuiteError> {
    ensure_prime(m)?;
    let m1 = build_m1(m, r)?;
    let classes = build_m2(&m1);
    let v = state_cover(m);
    let (_, tree) = generate(m, classes.class_of(), &v, extra_states)?;
    // the verifier derives the M1 classes on its own
    let check_classes = equivalence_classes(m1.machine());
    finish(m, tree, Method::RequirementExhaustive, extra_states, &check_classes)
}

/// Checks both structural conditions on `ts` from scratch: the core set is
/// contained in pref(TS), and every filtered pair is separated inside
/// pref(TS) by some distinguishing extension. `class` gives the partition
/// that filters `B` and `C` (M1's classes, or M's for equivalence suites).
pub fn verify_structure(
    m: &Dfsm,
    class: &[usize],
    extra_states: usize,
    ts: &TestSuite,
) -> Result<(), SuiteError> {
    let k = m.num_inputs();
    let tree = ts.tree(k);
    let v = state_cover(m);
    let m_class = equivalence_classes(m);
    let render = |t: &[Symbol]| InputTrace::new(t.to_vec()).render(m.inputs());

    let mut ext: Vec<Vec<Symbol>> = Vec::new();
    for tr in &v.traces {
        if !tree.contains_prefix(tr.symbols()) {
            return Err(SuiteError::StructuralViolation(format!(
                "core trace `{}` missing",
                render(tr.symbols())
            )));
        }
        for len in 1..=extra_states + 1 {
            let mut missing = None;
            for_each_word(k, len, |w| {
                let mut full = tr.symbols().to_vec();
                full.extend_from_slice(w);
                if missing.is_none() && !tree.contains_prefix(&full) {
                    missing = Some(full.clone());
                }
                ext.push(full);
            });
            if let Some(t) = missing {
                return Err(SuiteError::StructuralViolation(format!(
                    "core trace `{}` missing",
                    render(&t)
                )));
            }
        }
    }
    let ext_set: HashSet<&[Symbol]> = ext.iter().map(Vec::as_slice).collect();

    let separated = |a: &[Symbol], b: &[Symbol]| -> bool {
        let (Some(na), Some(nb)) = (tree.find(a), tree.find(b)) else {
            return false;
        };
        let start = (na, nb, m.after(m.initial(), a), m.after(m.initial(), b));
        let mut seen = HashSet::from([(na, nb)]);
        let mut queue = VecDeque::from([start]);
        while let Some((na, nb, p, q)) = queue.pop_front() {
            for x in 0..k {
                let (Some(ca), Some(cb)) = (tree.child(na, x), tree.child(nb, x)) else {
                    continue;
                };
                if m.output(p, x) != m.output(q, x) {
                    return true;
                }
                if seen.insert((ca, cb)) {
                    queue.push_back((ca, cb, m.next_state(p, x), m.next_state(q, x)));
                }
            }
        }
        false
    };
    let check = |a: &[Symbol], b: &[Symbol], set: &str| -> Result<(), SuiteError> {
        if separated(a, b) {
            Ok(())
        } else {
            Err(SuiteError::StructuralViolation(format!(
                "{set} pair (`{}`, `{}`) is not separated",
                render(a),
                render(b)
            )))
        }
    };

    let after = |t: &[Symbol]| m.after(m.initial(), t);
    for (i, x) in v.traces.iter().enumerate() {
        for y in &v.traces[i + 1..] {
            if m_class[after(x.symbols())] != m_class[after(y.symbols())] {
                check(x.symbols(), y.symbols(), "A")?;
            }
        }
        for y in &ext {
            if class[after(x.symbols())] != class[after(y)] {
                check(x.symbols(), y, "B")?;
            }
        }
    }
    for y in &ext {
        for l in 1..y.len() {
            let x = &y[..l];
            if ext_set.contains(x) && class[after(x)] != class[after(y)] {
                check(x, y, "C")?;
            }
        }
    }
    Ok(())
}
