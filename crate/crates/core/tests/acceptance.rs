//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use fsmreq::abstraction::{build_m1, build_m1_prime, build_m2};
use fsmreq::complete::reduction_suite;
use fsmreq::experiment::{coverage_experiment, MachineSource, MachineUniverse, MutantSample, Strategy};
use fsmreq::harness::{run_suite_equiv, run_suite_reduction, SuiteChecker};
use fsmreq::*;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn within(x: usize, lo: usize, hi: usize) -> bool {
    (lo..=hi).contains(&x)
}

fn traces(m: &Dfsm, cases: &[&str]) -> Vec<InputTrace> {
    cases
        .iter()
        .map(|c| InputTrace::parse(c, m.inputs()).unwrap())
        .collect()
}

fn universe_for(m: &Dfsm) -> MachineUniverse {
    MachineUniverse::new(3, m.inputs_arc().clone(), m.outputs_arc().clone(), 1_000_000).unwrap()
}

fn fsb_structure() -> Outcome {
    let m = fixtures::fsb_rts();
    let minimal = minimize(&m).machine.num_states();
    let r1 = fixtures::fsb_r1(&m);
    let n2 = build_m2(&build_m1(&m, &r1).unwrap()).num_classes();
    let ok = m.num_states() == 24
        && m.num_inputs() == 9
        && m.outputs().len() == 3
        && minimal == 24
        && n2 == 1;
    outcome(
        ok,
        format!(
            "{} states, {} inputs, {} outputs; minimized {}; M2(R1) {} state(s)",
            m.num_states(),
            m.num_inputs(),
            m.outputs().len(),
            minimal,
            n2
        ),
    )
}

fn suite_size_bands() -> Outcome {
    let m = fixtures::fsb_rts();
    let r1 = fixtures::fsb_r1(&m);
    let r2 = fixtures::fsb_r2(&m);
    let h_band = [(259, 1036), (2035, 8138), (17663, 70650)];
    let r1_band = [(97, 386), (869, 3474), (7817, 31266)];
    let r2_band = [(169, 674), (1518, 6070), (13664, 54654)];
    let mut ok = true;
    let mut parts = Vec::new();
    for e in 0..3 {
        let t = Instant::now();
        let h = h_suite(&m, e).unwrap().len();
        let a = exhaustive_req_suite(&m, &r1, e).unwrap().len();
        let b = exhaustive_req_suite(&m, &r2, e).unwrap().len();
        let elapsed = t.elapsed();
        let budget = if e <= 1 { Duration::from_secs(60) } else { Duration::from_secs(900) };
        let row_ok = within(h, h_band[e].0, h_band[e].1)
            && within(a, r1_band[e].0, r1_band[e].1)
            && within(b, r2_band[e].0, r2_band[e].1)
            && a < b
            && b < h
            && elapsed < budget;
        ok &= row_ok;
        parts.push(format!("m-n={e}: H={h} R1={a} R2={b} ({elapsed:.1?})"));
    }
    outcome(ok, parts.join("; "))
}

fn running_example_suites() -> Outcome {
    let m = fixtures::machine_m();
    let s = fixtures::machine_s();
    let r = fixtures::requirement_r(&m);
    let exh = exhaustive_req_suite(&m, &r, 0).unwrap();
    let s_passes = run_suite_equiv(&s, &m, &exh).unwrap().passed();
    let h = h_suite(&m, 0).unwrap();
    let run = run_suite_equiv(&s, &m, &h).unwrap();
    let failures: Vec<String> = run
        .failures()
        .map(|f| {
            let outs = |ys: &[usize]| {
                ys.iter()
                    .map(|&y| run.outputs.name(y))
                    .collect::<Vec<_>>()
                    .join(".")
            };
            let expected = match &f.expected {
                harness::Expected::Outputs(ys) => outs(ys),
                harness::Expected::Sets(_) => unreachable!("equivalence run"),
            };
            format!("{}/{} expected {}", f.case.render(m.inputs()), outs(&f.observed), expected)
        })
        .collect();
    let ok = exh.len() <= 6 && s_passes && failures == ["a.a.a/1.0.1 expected 1.0.0"];
    outcome(
        ok,
        format!(
            "exhaustive suite {} cases, S passes: {s_passes}; equivalence suite {} cases, failures: {failures:?}",
            exh.len(),
            h.len()
        ),
    )
}

struct BruteForce {
    exhaustive: experiment::CoverageReport,
    complete: experiment::CoverageReport,
    exhaustive_time: Duration,
    complete_time: Duration,
}

fn brute_force() -> BruteForce {
    let m = fixtures::machine_m();
    let r = fixtures::requirement_r(&m);
    let u = universe_for(&m);
    let t = Instant::now();
    let exhaustive = coverage_experiment(&m, &r, 0, Strategy::Exhaustive, &u).unwrap();
    let exhaustive_time = t.elapsed();
    let t = Instant::now();
    let complete = coverage_experiment(&m, &r, 0, Strategy::Complete, &u).unwrap();
    let complete_time = t.elapsed();
    BruteForce {
        exhaustive,
        complete,
        exhaustive_time,
        complete_time,
    }
}

fn exhaustive_guarantee(b: &BruteForce) -> Outcome {
    let rep = &b.exhaustive;
    outcome(
        rep.universe == 531_441
            && rep.examined == rep.universe
            && rep.pass_viol == 0
            && b.exhaustive_time < Duration::from_secs(600),
        format!("{} ({:.1?})", rep.machine_line(), b.exhaustive_time),
    )
}

fn complete_guarantee(b: &BruteForce) -> Outcome {
    let rep = &b.complete;
    outcome(
        rep.examined == 531_441
            && rep.pass_viol == 0
            && rep.fail_sat == 0
            && b.complete_time < Duration::from_secs(900),
        format!("{} ({:.1?})", rep.machine_line(), b.complete_time),
    )
}

fn oracle_routes_agree(b: &BruteForce) -> Outcome {
    let d = b.exhaustive.oracle_disagreements + b.complete.oracle_disagreements;
    outcome(
        d == 0 && b.exhaustive.examined == 531_441,
        format!("{d} disagreements over {} machines (checked twice)", b.exhaustive.examined),
    )
}

fn r_eq_bridge() -> Outcome {
    let m = fixtures::machine_m();
    let req = CompositeRequirement::language_equivalence(&m);
    let ts = exhaustive_req_suite(&m, &req, 0).unwrap();
    let h = h_suite(&m, 0).unwrap();
    let checker = SuiteChecker::new(&ts, m.num_inputs());
    let u = universe_for(&m);
    let mut passing = 0u64;
    let mut disagreements = 0u64;
    for i in 0..u.len() {
        let s = u.get(i);
        let passes = checker.passes_equiv(&s, &m);
        let equivalent = language_equivalent(&m, &s).unwrap().is_none();
        passing += u64::from(passes);
        disagreements += u64::from(passes != equivalent);
    }
    outcome(
        disagreements == 0 && ts.cases() == h.cases(),
        format!("{passing} machines pass, {disagreements} disagreements; suite equals equivalence suite: {}", ts.cases() == h.cases()),
    )
}

fn negative_control() -> Outcome {
    let m = fixtures::machine_m();
    let r = fixtures::requirement_r(&m);
    let sp = fixtures::machine_s_prime();
    let m1p = build_m1_prime(&m, &r).unwrap();
    let four = TestSuite::external(&m, traces(&m, &["a.a.b", "a.b.b", "b.a.b", "b.b.a"]));
    let passes = run_suite_reduction(&sp, &m1p, &four).unwrap().passed();
    let witness = satisfies_oracle(&sp, &m, &r).unwrap();
    let shown = witness
        .as_ref()
        .map(|w| w.render(sp.inputs(), sp.outputs()))
        .unwrap_or_else(|| "none".into());
    outcome(
        passes && witness.map(|w| w.inputs.render(sp.inputs())) == Some("b.a.a.b".into()),
        format!("S' passes 4 cases under set membership: {passes}; oracle witness {shown}"),
    )
}

/// `V.Σ^d` pruned by pairwise prefix comparison.
fn pruned_extensions(cover: &[InputTrace], k: usize, d: usize) -> (usize, usize) {
    let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
    for v in cover {
        let mut words: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..d {
            words = words
                .into_iter()
                .flat_map(|w| (0..k).map(move |x| [w.clone(), vec![x]].concat()))
                .collect();
        }
        for w in words {
            all.insert([v.symbols().to_vec(), w].concat());
        }
    }
    let kept = all
        .iter()
        .filter(|t| !all.iter().any(|u| u.len() > t.len() && u.starts_with(t)))
        .count();
    (all.len(), kept)
}

fn bounds() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    let check = |m: &Dfsm, ts: &TestSuite, e: usize, label: &str, ok: &mut bool, notes: &mut Vec<String>| {
        let n = m.num_states();
        let size_bound = (n * n) as u128 * (m.num_inputs() as u128).pow(e as u32 + 1);
        let len_ok = ts.max_len() < n + (n + e);
        let size_ok = (ts.len() as u128) <= size_bound;
        *ok &= len_ok && size_ok;
        if !(len_ok && size_ok) {
            notes.push(format!("{label} e={e}: len {} size {}", ts.max_len(), ts.len()));
        }
    };
    let fsb = fixtures::fsb_rts();
    let (r1, r2) = (fixtures::fsb_r1(&fsb), fixtures::fsb_r2(&fsb));
    let m = fixtures::machine_m();
    let r = fixtures::requirement_r(&m);
    let mut generated = 0;
    for e in 0..3 {
        check(&fsb, &h_suite(&fsb, e).unwrap(), e, "H", &mut ok, &mut notes);
        check(&fsb, &exhaustive_req_suite(&fsb, &r1, e).unwrap(), e, "R1", &mut ok, &mut notes);
        check(&fsb, &exhaustive_req_suite(&fsb, &r2, e).unwrap(), e, "R2", &mut ok, &mut notes);
        check(&m, &h_suite(&m, e).unwrap(), e, "M/H", &mut ok, &mut notes);
        check(&m, &exhaustive_req_suite(&m, &r, e).unwrap(), e, "M/R", &mut ok, &mut notes);
        generated += 5;
    }
    let m1 = build_m1(&m, &r).unwrap();
    let classes = build_m2(&m1);
    let m1p = build_m1_prime(&m, &r).unwrap();
    let red = reduction_suite(&m1p, &classes, 3).unwrap();
    let (unpruned, expected) = pruned_extensions(&red.cover.traces, 2, red.depth);
    let formula = red.cover.len() * 2usize.pow(red.depth as u32);
    let red_ok = red.depth == 5
        && unpruned == formula
        && formula == 64
        && red.suite.len() == expected
        && red.suite.max_len() <= red.cover.max_len() + red.depth
        && red.suite.max_len() <= 3 * 3;
    ok &= red_ok;
    notes.push(format!(
        "{generated} exhaustive suites within n+m-1 and n^2*|I|^(m-n+1); reduction suite: |V.I^{}| = {unpruned} = |V|*|I|^{}, {} cases after prefix pruning (independent count {expected})",
        red.depth,
        red.depth,
        red.suite.len()
    ));
    outcome(ok, notes.join("; "))
}

fn mutant_experiment() -> Outcome {
    let m = fixtures::fsb_rts();
    let r1 = fixtures::fsb_r1(&m);
    let t = Instant::now();
    let sample = MutantSample {
        machines: mutate(&m, 1, 10_000),
        seed: 1,
    };
    let rep = coverage_experiment(&m, &r1, 1, Strategy::Exhaustive, &sample).unwrap();
    let elapsed = t.elapsed();
    outcome(
        rep.examined == 10_000 && rep.pass_viol == 0 && rep.oracle_disagreements == 0 && elapsed < Duration::from_secs(300),
        format!("{} ({elapsed:.1?})", rep.machine_line()),
    )
}

fn main() -> ExitCode {
    let mut all_ok = true;
    let mut report = |id: &str, name: &str, f: &dyn Fn() -> Outcome| {
        let t = Instant::now();
        let o = f();
        all_ok &= o.ok;
        println!(
            "[{}] {id}. {name}: {} [{:.1?}]",
            if o.ok { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed()
        );
    };
    report("1", "FSB/RTS structural facts", &fsb_structure);
    report("2", "suite sizes within factor-2 bands, R1 < R2 < H", &suite_size_bands);
    report("3", "running example: exhaustive vs equivalence suite", &running_example_suites);
    let bf = brute_force();
    report("4", "exhaustive guarantee over all 3-state machines", &|| exhaustive_guarantee(&bf));
    report("5", "complete guarantee over all 3-state machines", &|| complete_guarantee(&bf));
    report("6", "oracle routes agree", &|| oracle_routes_agree(&bf));
    report("7", "R_eq suite passes exactly the equivalent machines", &r_eq_bridge);
    report("8", "negative control S'", &negative_control);
    report("9", "length and size bounds", &bounds);
    report("10", "FSB/RTS sampled mutants, R1", &mutant_experiment);
    if all_ok {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: some criteria FAILED");
        ExitCode::FAILURE
    }
}
