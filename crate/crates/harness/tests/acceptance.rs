//! The acceptance gate: one test per criterion. Each prints a
//! `criterion N: PASS|FAIL` line with its elapsed time, then asserts both the
//! outcome and the runtime bound. Sample counts and depths are pinned here.

use std::time::{Duration, Instant};

use lts_refine::FloodMode;
use lts_refine_harness::equations::{check_operator_equations, EquationConfig, Operator, MODES};
use lts_refine_harness::theorems::{
    check_canonical_reductions, check_gadget_separation, check_identities, check_preorder_chain, check_respects,
    check_safety_characterisation, cond_pair_checks, refusal_pair_checks, SuiteReport,
};

const SEED: u64 = 0x00ac_ce97;

fn gate(criterion: u32, limit: Duration, run: impl FnOnce() -> (bool, String)) {
    let start = Instant::now();
    let (ok, details) = run();
    let elapsed = start.elapsed();
    let status = if ok && elapsed < limit { "PASS" } else { "FAIL" };
    println!("criterion {criterion}: {status} ({} ms, limit {} ms)", elapsed.as_millis(), limit.as_millis());
    println!("{details}");
    assert!(ok, "criterion {criterion} failed:\n{details}");
    assert!(elapsed < limit, "criterion {criterion} took {elapsed:?}, limit {limit:?}");
}

fn claims(list: Vec<(&'static str, bool, String)>) -> (bool, String) {
    let ok = list.iter().all(|(_, holds, _)| *holds);
    let text = list
        .iter()
        .map(|(name, holds, why)| if *holds { format!("{name}: ok") } else { format!("{name}: FAILED ({why})") })
        .collect::<Vec<_>>()
        .join("\n");
    (ok, text)
}

fn suite(r: SuiteReport) -> (bool, String) {
    (r.passed(), r.to_string())
}

#[test]
fn criterion_1_cond_pair_fixture() {
    gate(1, Duration::from_secs(1), || claims(cond_pair_checks()));
}

#[test]
fn criterion_2_refusal_pair_fixture() {
    gate(2, Duration::from_secs(1), || claims(refusal_pair_checks()));
}

#[test]
fn criterion_3_safety_is_reverse_trace_inclusion() {
    gate(3, Duration::from_secs(30), || {
        let r = check_safety_characterisation(500, 5, SEED);
        let decided = r.samples as u64 - r.undecided;
        (r.passed() && decided > 0 && r.count("refining") > 0 && r.count("refuted") > 0, r.to_string())
    });
}

#[test]
fn criterion_4_compositional_equations() {
    gate(4, Duration::from_secs(120), || {
        let mut ok = true;
        let mut text = String::new();
        for op in Operator::ALL {
            for mode in MODES {
                let r = check_operator_equations(op, mode, &EquationConfig::new(500, 4, SEED));
                ok &= r.passed() && r.checks > 0;
                let mode_name = match mode {
                    FloodMode::None => "none",
                    FloodMode::Bot => "bot",
                    FloodMode::D => "d",
                };
                text.push_str(&format!("[{} / {mode_name}]\n{r}", op.name()));
            }
        }
        (ok, text)
    });
}

#[test]
fn criterion_5_preorder_chain() {
    gate(5, Duration::from_secs(60), || {
        let r = check_preorder_chain(500, SEED);
        (r.passed() && r.count("lt-holds") > 0, r.to_string())
    });
}

#[test]
fn criterion_6_respect_suites() {
    gate(6, Duration::from_secs(120), || {
        let r = check_respects(200, 20, SEED);
        (r.passed() && r.count("spec-satisfied-by-refined") > 0, r.to_string())
    });
}

#[test]
fn criterion_7_gadget_soundness() {
    gate(7, Duration::from_secs(60), || {
        let r = check_gadget_separation(500, SEED);
        let exercised = r.count("divergence-separated") > 0 && r.count("failure-separated") > 0;
        (r.passed() && exercised, r.to_string())
    });
}

#[test]
fn criterion_8_canonical_reductions() {
    gate(8, Duration::from_secs(60), || suite(check_canonical_reductions(200, 4, SEED)));
}

#[test]
fn criterion_9_identity_cross_checks() {
    gate(9, Duration::from_secs(30), || suite(check_identities(500, 5, SEED)));
}
