//! Fault-coverage experiments over enumerated or sampled implementations.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::abstraction::{build_m1, build_m2, NondetAbstraction};
use crate::alphabet::Alphabet;
use crate::complete::{filter_requirement_suite, reduction_suite};
use crate::error::{Error, SuiteError};
use crate::exhaustive::exhaustive_req_suite;
use crate::harness::SuiteChecker;
use crate::machine::Dfsm;
use crate::oracle::RequirementOracle;
use crate::requirement::CompositeRequirement;

/// Number of counterexample indices a report keeps.
pub const MAX_COUNTEREXAMPLES: usize = 10;

/// Indexable collection of candidate implementations.
pub trait MachineSource: Sync {
    fn len(&self) -> u64;
    fn get(&self, index: u64) -> Dfsm;
    fn seed(&self) -> u64 {
        0
    }
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Every complete DFSM with `states` states over the given alphabets,
/// initial state `s0`. Machine `i` reads `i` in base `states·|O|` with cell
/// `(q, x)` at position `q·|I| + x` from the most significant digit; a digit
/// `d` means target `d / |O|`, output `d % |O|`.
#[derive(Debug, Clone)]
pub struct MachineUniverse {
    names: Vec<String>,
    inputs: Arc<Alphabet>,
    outputs: Arc<Alphabet>,
    size: u64,
}

impl MachineUniverse {
    pub fn new(
        states: usize,
        inputs: Arc<Alphabet>,
        outputs: Arc<Alphabet>,
        cap: u64,
    ) -> Result<Self, SuiteError> {
        let base = (states * outputs.len()) as u128;
        let cells = (states * inputs.len()) as u32;
        let size = base.checked_pow(cells).unwrap_or(u128::MAX);
        if states == 0 || size > u128::from(cap) {
            return Err(SuiteError::UniverseTooLarge {
                size,
                cap: u128::from(cap),
            });
        }
        Ok(MachineUniverse {
            names: (0..states).map(|i| format!("s{i}")).collect(),
            inputs,
            outputs,
            size: size as u64,
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = Dfsm> + '_ {
        (0..self.size).map(|i| self.get(i))
    }
}

impl MachineSource for MachineUniverse {
    fn len(&self) -> u64 {
        self.size
    }

    fn get(&self, index: u64) -> Dfsm {
        assert!(index < self.size, "machine index out of range");
        let n = self.names.len();
        let o = self.outputs.len() as u64;
        let cells = n * self.inputs.len();
        let base = n as u64 * o;
        let mut delta = vec![0; cells];
        let mut omega = vec![0; cells];
        let mut rest = index;
        for c in (0..cells).rev() {
            let d = rest % base;
            rest /= base;
            delta[c] = (d / o) as usize;
            omega[c] = (d % o) as usize;
        }
        Dfsm::from_parts_unchecked(
            self.names.clone(),
            0,
            self.inputs.clone(),
            self.outputs.clone(),
            delta,
            omega,
        )
    }
}

/// Streams every machine of the universe in index order.
pub fn enumerate_machines(
    states: usize,
    inputs: Arc<Alphabet>,
    outputs: Arc<Alphabet>,
    cap: u64,
) -> Result<impl Iterator<Item = Dfsm>, SuiteError> {
    let u = MachineUniverse::new(states, inputs, outputs, cap)?;
    Ok((0..u.size).map(move |i| u.get(i)))
}

/// Mutants plus the seed that produced them.
#[derive(Debug, Clone)]
pub struct MutantSample {
    pub machines: Vec<Dfsm>,
    pub seed: u64,
}

impl MachineSource for MutantSample {
    fn len(&self) -> u64 {
        self.machines.len() as u64
    }

    fn get(&self, index: u64) -> Dfsm {
        self.machines[index as usize].clone()
    }

    fn seed(&self) -> u64 {
        self.seed
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Exhaustive suite, `pass⇒`.
    Exhaustive,
    /// Filtered basic reduction suite, `pass⇔`.
    Complete,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Exhaustive => "exhaustive",
            Strategy::Complete => "complete",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageReport {
    pub strategy: Strategy,
    pub universe: u64,
    pub examined: u64,
    pub pass_sat: u64,
    pub pass_viol: u64,
    pub fail_sat: u64,
    pub fail_viol: u64,
    /// Machines on which the two oracle routes disagreed.
    pub oracle_disagreements: u64,
    /// Lowest indices of machines that contradict the strategy's guarantee.
    pub counterexamples: Vec<u64>,
    pub seed: u64,
}

impl CoverageReport {
    /// Exhaustive: nothing passes while violating. Complete: additionally
    /// nothing fails while satisfying. Both: oracle routes agree.
    pub fn guarantee_holds(&self) -> bool {
        self.pass_viol == 0
            && self.oracle_disagreements == 0
            && (self.strategy == Strategy::Exhaustive || self.fail_sat == 0)
    }

    pub fn machine_line(&self) -> String {
        format!(
            "universe={} pass_sat={} pass_viol={} fail_sat={} fail_viol={} seed={}",
            self.universe, self.pass_sat, self.pass_viol, self.fail_sat, self.fail_viol, self.seed
        )
    }
}

impl fmt::Display for CoverageReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "strategy:              {}", self.strategy)?;
        writeln!(f, "machines examined:     {} of {}", self.examined, self.universe)?;
        writeln!(f, "pass and satisfies:    {}", self.pass_sat)?;
        writeln!(f, "pass but violates:     {}", self.pass_viol)?;
        writeln!(f, "fail but satisfies:    {}", self.fail_sat)?;
        writeln!(f, "fail and violates:     {}", self.fail_viol)?;
        writeln!(f, "oracle disagreements:  {}", self.oracle_disagreements)?;
        if !self.counterexamples.is_empty() {
            let ids: Vec<String> = self.counterexamples.iter().map(u64::to_string).collect();
            writeln!(f, "counterexamples:       {}", ids.join(" "))?;
        }
        writeln!(
            f,
            "guarantee:             {}",
            if self.guarantee_holds() { "holds" } else { "VIOLATED" }
        )?;
        writeln!(f, "{}", self.machine_line())
    }
}

#[derive(Default, Clone)]
struct Tally {
    examined: u64,
    counts: [u64; 4],
    disagreements: u64,
    counterexamples: Vec<u64>,
    outside: Option<usize>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.examined += other.examined;
        for i in 0..4 {
            self.counts[i] += other.counts[i];
        }
        self.disagreements += other.disagreements;
        self.outside = self.outside.or(other.outside);
        self.counterexamples.extend(other.counterexamples);
        self.counterexamples.sort_unstable();
        self.counterexamples.truncate(MAX_COUNTEREXAMPLES);
        self
    }
}

enum Checker {
    Exhaustive {
        checkers: Vec<SuiteChecker>,
    },
    Complete {
        checkers: Vec<SuiteChecker>,
        m1p: NondetAbstraction,
    },
}

/// Runs every machine of `source` through the oracle and the strategy's
/// suite. Machines with `n + e` states (`e ≤ extra`) are tested with the
/// suite built for `e` extra states; smaller machines use the `e = 0` suite.
pub fn coverage_experiment(
    m: &Dfsm,
    r: &CompositeRequirement,
    extra: usize,
    strategy: Strategy,
    source: &dyn MachineSource,
) -> Result<CoverageReport, Error> {
    let n = m.num_states();
    let oracle = RequirementOracle::new(m, r)?;
    let universe = source.len();
    let checker = {
        match strategy {
            Strategy::Exhaustive => Checker::Exhaustive {
                checkers: (0..=extra)
                    .map(|e| {
                        exhaustive_req_suite(m, r, e).map(|ts| SuiteChecker::new(&ts, m.num_inputs()))
                    })
                    .collect::<Result<_, _>>()?,
            },
            Strategy::Complete => {
                crate::exhaustive::ensure_prime(m)?;
                let m1 = build_m1(m, r)?;
                let classes = build_m2(&m1);
                let m1p = NondetAbstraction::from_m1(&m1);
                let checkers = (0..=extra)
                    .map(|e| {
                        let red = reduction_suite(&m1p, &classes, n + e)?;
                        let ts = filter_requirement_suite(&red.suite, m, r);
                        Ok::<_, SuiteError>(SuiteChecker::new(&ts, m.num_inputs()))
                    })
                    .collect::<Result<_, _>>()?;
                Checker::Complete { checkers, m1p }
            }
        }
    };

    let bound = n + extra;
    let aligned = |s: &Dfsm| -> Result<Dfsm, Error> {
        if s.shares_alphabets(m) {
            Ok(s.clone())
        } else {
            Ok(s.reindexed(m.inputs_arc(), m.outputs_arc())?)
        }
    };
    // reject foreign alphabets before the parallel pass
    if universe > 0 {
        aligned(&source.get(0))?;
    }

    let tally = (0..universe)
        .into_par_iter()
        .fold(Tally::default, |mut t, i| {
            let s = aligned(&source.get(i)).expect("alphabets checked");
            if s.num_states() > bound {
                t.outside.get_or_insert(s.num_states());
                return t;
            }
            let e = s.num_states().saturating_sub(n);
            let passed = match &checker {
                Checker::Exhaustive { checkers } => checkers[e].passes_equiv(&s, m),
                Checker::Complete { checkers, m1p } => checkers[e].passes_reduction(&s, m1p),
            };
            let reduction = oracle.via_reduction(&s);
            let direct = oracle.via_definition(&s);
            if reduction != direct {
                t.disagreements += 1;
            }
            let satisfied = reduction.is_none() && direct.is_none();
            let slot = match (passed, satisfied) {
                (true, true) => 0,
                (true, false) => 1,
                (false, true) => 2,
                (false, false) => 3,
            };
            t.counts[slot] += 1;
            t.examined += 1;
            let contradicts = slot == 1 || (slot == 2 && strategy == Strategy::Complete);
            if (contradicts || reduction != direct) && t.counterexamples.len() < MAX_COUNTEREXAMPLES {
                t.counterexamples.push(i);
            }
            t
        })
        .reduce(Tally::default, Tally::merge);
    if let Some(states) = tally.outside {
        return Err(SuiteError::OutsideFaultDomain { states, bound }.into());
    }

    Ok(CoverageReport {
        strategy,
        universe,
        examined: tally.examined,
        pass_sat: tally.counts[0],
        pass_viol: tally.counts[1],
        fail_sat: tally.counts[2],
        fail_viol: tally.counts[3],
        oracle_disagreements: tally.disagreements,
        counterexamples: tally.counterexamples,
        seed: source.seed(),
    })
}
