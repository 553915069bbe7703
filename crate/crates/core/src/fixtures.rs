//! Bundled example models and requirements.
//!
//! * `M.csv` is the 3-state running-example reference model, `S.csv` an
//!   implementation that is not equivalent to it but satisfies `R.req`, and
//!   `S_prime.csv` an implementation that violates `R(q1, b, {0|2})` while
//!   passing the 4-case exhaustive suite under the reduction criterion.
//! * `FSBRTSX.csv` is the 24-state fasten-seat-belt / return-to-seat sign
//!   controller; `R1.req` and `R2.req` are requirements on it.

use crate::format::parse_fsm;
use crate::machine::Dfsm;
use crate::requirement::{parse_requirement, CompositeRequirement};

pub const M_CSV: &str = include_str!("../fixtures/M.csv");
pub const S_CSV: &str = include_str!("../fixtures/S.csv");
pub const S_PRIME_CSV: &str = include_str!("../fixtures/S_prime.csv");
pub const R_REQ: &str = include_str!("../fixtures/R.req");
pub const FSB_RTS_CSV: &str = include_str!("../fixtures/FSBRTSX.csv");
pub const FSB_R1_REQ: &str = include_str!("../fixtures/R1.req");
pub const FSB_R2_REQ: &str = include_str!("../fixtures/R2.req");

pub fn machine_m() -> Dfsm {
    parse_fsm(M_CSV).expect("bundled fixture")
}

pub fn machine_s() -> Dfsm {
    parse_fsm(S_CSV).expect("bundled fixture")
}

pub fn machine_s_prime() -> Dfsm {
    parse_fsm(S_PRIME_CSV).expect("bundled fixture")
}

pub fn requirement_r(m: &Dfsm) -> CompositeRequirement {
    parse_requirement(R_REQ, m).expect("bundled fixture")
}

pub fn fsb_rts() -> Dfsm {
    parse_fsm(FSB_RTS_CSV).expect("bundled fixture")
}

pub fn fsb_r1(m: &Dfsm) -> CompositeRequirement {
    parse_requirement(FSB_R1_REQ, m).expect("bundled fixture")
}

pub fn fsb_r2(m: &Dfsm) -> CompositeRequirement {
    parse_requirement(FSB_R2_REQ, m).expect("bundled fixture")
}
