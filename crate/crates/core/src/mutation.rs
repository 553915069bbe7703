//! Seeded mutants of a reference model.
//!
//! Randomness comes from SplitMix64:
//!
//! ```text
//! state  = state + 0x9E3779B97F4A7C15
//! z      = state
//! z      = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z      = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! output = z ^ (z >> 31)
//! ```
//!
//! (wrapping arithmetic), and a draw below `n` is `(output * n) >> 64`.
//!
//! Each mutant applies 1 to 3 operations, each to a cell no earlier operation
//! touched:
//!
//! * output change: a cell gets a different output;
//! * target change: a cell gets a different target state;
//! * added state (at most once per mutant): a cell of a reachable state is
//!   redirected to a fresh state whose row copies the old target's row, and
//!   one cell of that row then gets a different output or target.
//!
//! Mutants therefore have at most `n + 1` states.

use std::collections::HashSet;

use crate::machine::{Dfsm, State};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish draw from `0..n`; `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        ((u128::from(self.next_u64()) * n as u128) >> 64) as usize
    }
}

struct Tables {
    states: Vec<String>,
    delta: Vec<State>,
    omega: Vec<usize>,
    k: usize,
    num_outputs: usize,
    touched: HashSet<usize>,
}

impl Tables {
    fn n(&self) -> usize {
        self.states.len()
    }

    fn fresh_cell(&mut self, rng: &mut SplitMix64, rows: &[State]) -> Option<usize> {
        let total = rows.len() * self.k;
        if self.touched.len() >= total {
            return None;
        }
        loop {
            let i = rng.below(total);
            let cell = rows[i / self.k] * self.k + i % self.k;
            if self.touched.insert(cell) {
                return Some(cell);
            }
        }
    }

    fn change_output(&mut self, rng: &mut SplitMix64, cell: usize) -> bool {
        if self.num_outputs < 2 {
            return false;
        }
        let shift = 1 + rng.below(self.num_outputs - 1);
        self.omega[cell] = (self.omega[cell] + shift) % self.num_outputs;
        true
    }

    fn change_target(&mut self, rng: &mut SplitMix64, cell: usize) -> bool {
        let n = self.n();
        if n < 2 {
            return false;
        }
        let shift = 1 + rng.below(n - 1);
        self.delta[cell] = (self.delta[cell] + shift) % n;
        true
    }

    fn change_cell(&mut self, rng: &mut SplitMix64, cell: usize, prefer_output: bool) -> bool {
        // the other kind is the fallback when the preferred one is impossible
        if prefer_output && self.change_output(rng, cell) {
            return true;
        }
        self.change_target(rng, cell) || (!prefer_output && self.change_output(rng, cell))
    }

    fn add_state(&mut self, rng: &mut SplitMix64, reachable: &[State]) -> bool {
        let Some(cell) = self.fresh_cell(rng, reachable) else {
            return false;
        };
        let old_target = self.delta[cell];
        let new = self.n();
        let mut name = format!("x{new}");
        while self.states.contains(&name) {
            name.push('\'');
        }
        self.states.push(name);
        for x in 0..self.k {
            self.delta.push(self.delta[old_target * self.k + x]);
            self.omega.push(self.omega[old_target * self.k + x]);
        }
        self.delta[cell] = new;
        let row_cell = new * self.k + rng.below(self.k);
        self.touched.insert(row_cell);
        let prefer_output = rng.below(2) == 0;
        self.change_cell(rng, row_cell, prefer_output);
        true
    }
}

/// `count` mutants of `m`, reproducible for a fixed `seed`.
pub fn mutate(m: &Dfsm, seed: u64, count: usize) -> Vec<Dfsm> {
    let mut rng = SplitMix64::new(seed);
    let reachable: Vec<State> = m
        .reachable()
        .iter()
        .enumerate()
        .filter_map(|(q, &r)| r.then_some(q))
        .collect();
    let all: Vec<State> = (0..m.num_states()).collect();
    (0..count)
        .map(|_| {
            let mut t = Tables {
                states: m.states().to_vec(),
                delta: m.delta_table().to_vec(),
                omega: m.omega_table().to_vec(),
                k: m.num_inputs(),
                num_outputs: m.outputs().len(),
                touched: HashSet::new(),
            };
            let ops = 1 + rng.below(3);
            let mut added = false;
            for _ in 0..ops {
                let kind = if added { rng.below(2) } else { rng.below(3) };
                match kind {
                    2 => added = t.add_state(&mut rng, &reachable),
                    _ => {
                        if let Some(cell) = t.fresh_cell(&mut rng, &all) {
                            t.change_cell(&mut rng, cell, kind == 0);
                        }
                    }
                }
            }
            Dfsm::from_parts_unchecked(
                t.states,
                m.initial(),
                m.inputs_arc().clone(),
                m.outputs_arc().clone(),
                t.delta,
                t.omega,
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::machine::check_properties;

    #[test]
    fn splitmix_reference_values() {
        // first outputs for seed 0 of the reference SplitMix64
        let mut r = SplitMix64::new(0);
        assert_eq!(r.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(r.next_u64(), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn zero_count_is_empty() {
        assert!(mutate(&fixtures::machine_m(), 1, 0).is_empty());
    }

    #[test]
    fn mutants_are_reproducible_and_in_domain() {
        let m = fixtures::fsb_rts();
        let a = mutate(&m, 1, 100);
        assert_eq!(a, mutate(&m, 1, 100));
        assert_ne!(a, mutate(&m, 2, 100));
        assert_eq!(a.len(), 100);
        for s in &a {
            assert!(s.num_states() <= m.num_states() + 1);
            let p = check_properties(&s.to_fsm());
            assert!(p.deterministic && p.completely_specified);
            assert_ne!(s, &m);
        }
        assert!(a.iter().any(|s| s.num_states() == m.num_states() + 1));
    }
}
