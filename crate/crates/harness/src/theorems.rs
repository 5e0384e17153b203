//! Randomised checks of the characterisation theorems: preorder chain,
//! safety as reverse trace inclusion, property respect, witness soundness,
//! separation by distinguishing testers, canonical reductions, the
//! deadlock/divergence cross-check and the identities relating failures to
//! deadlocks and traces.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use lts_refine::{
    cond_history_state_operator, denote, dd_preorder, dd_traces_included, equivalent, fixtures, hide,
    history_state_operator, label, liveness_distinguishing_tester, refines, respects_check, satisfies, state_op,
    Alphabet, Error, Failure, FloodMode, FreshLabels, Lasso, Lts, PreorderKind, PropertyClass, PropertySpec, Verdict,
    Witness, Word, WordSet,
};

use crate::equations::infinite_rhs;
use crate::gen::{gen_lts_with, gen_pair, internal_choice, rng, sample_seed, with_silent_cycle, GenConfig};
use crate::oracle::{all_words, BruteSemantics, ConfigSystem, RunGraph};
use crate::pool::map_indexed;
use crate::reproducer::Reproducer;

#[derive(Clone, Debug)]
pub struct SuiteViolation {
    pub sample: u64,
    pub message: String,
    pub reproducer: Reproducer,
}

impl fmt::Display for SuiteViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "sample: {}", self.sample)?;
        writeln!(f, "violation: {}", self.message)?;
        write!(f, "{}", self.reproducer)
    }
}

/// Outcome of one suite. `counters` name the kinds of cases exercised, so a
/// suite that passes vacuously is visible in the report.
#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub name: &'static str,
    pub samples: usize,
    pub undecided: u64,
    pub counters: BTreeMap<&'static str, u64>,
    pub violations: Vec<SuiteViolation>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, key: &str) -> u64 {
        self.counters.get(key).copied().unwrap_or(0)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite: {}", self.name)?;
        writeln!(f, "samples: {}", self.samples)?;
        for (k, v) in &self.counters {
            writeln!(f, "{k}: {v}")?;
        }
        writeln!(f, "undecided: {}", self.undecided)?;
        writeln!(f, "violations: {}", self.violations.len())?;
        writeln!(f, "elapsed-ms: {}", self.elapsed.as_millis())?;
        for v in self.violations.iter().take(3) {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Per-sample contribution to a [`SuiteReport`].
#[derive(Default)]
struct Tally {
    undecided: u64,
    counters: BTreeMap<&'static str, u64>,
    violations: Vec<SuiteViolation>,
}

impl Tally {
    fn bump(&mut self, key: &'static str) {
        *self.counters.entry(key).or_default() += 1;
    }

    fn violation(&mut self, sample: u64, message: String, reproducer: Reproducer) {
        self.violations.push(SuiteViolation {
            sample,
            message,
            reproducer,
        });
    }

    /// Records `ok` under `key`, or a violation.
    fn expect(&mut self, key: &'static str, ok: bool, sample: u64, message: impl FnOnce() -> String, repro: impl FnOnce() -> Reproducer) {
        self.bump(key);
        if !ok {
            self.violation(sample, message(), repro());
        }
    }
}

fn run_suite(name: &'static str, samples: usize, per_sample: impl Fn(u64) -> Tally + Sync) -> SuiteReport {
    let start = Instant::now();
    let mut report = SuiteReport {
        name,
        samples,
        ..Default::default()
    };
    for t in map_indexed(samples, per_sample) {
        report.undecided += t.undecided;
        for (k, v) in t.counters {
            *report.counters.entry(k).or_default() += v;
        }
        report.violations.extend(t.violations);
    }
    report.elapsed = start.elapsed();
    report
}

fn check_repro(p: &Lts, q: &Lts, kind: PreorderKind) -> Reproducer {
    Reproducer::new(format!("ltsrefine check P Q --preorder {kind} --witness"))
        .process("P", p)
        .process("Q", q)
}

fn prop_repro(p: &Lts, spec: &PropertySpec) -> Reproducer {
    Reproducer::new("ltsrefine prop P phi.prop").process("P", p).property("phi", spec)
}

/// Pair configuration of the chain, witness and separation suites.
pub fn chain_config(seed: u64) -> GenConfig {
    GenConfig::new(5, 2, seed)
}

// ---------------------------------------------------------------- fixtures

/// The liveness-equivalent pair separated by conditional liveness, and the
/// pair separated by liveness although its traces agree.
pub fn check_fixtures() -> SuiteReport {
    run_suite("fixtures", 1, |_| {
        let mut t = Tally::default();
        for (key, ok, message) in cond_pair_checks().into_iter().chain(refusal_pair_checks()) {
            t.expect(key, ok, 0, || message, Reproducer::default);
        }
        t
    })
}

/// `(name, holds, explanation)` for each fixture claim on the first pair.
pub fn cond_pair_checks() -> Vec<(&'static str, bool, String)> {
    let (l, r) = (fixtures::cond_pair_left(), fixtures::cond_pair_right());
    let live = equivalent(&l, &r, PreorderKind::Liveness).expect("same alphabet");
    let cond = equivalent(&l, &r, PreorderKind::CondLiveness).expect("same alphabet");
    let spec = PropertySpec::canonical_cond_liveness(label("c"), label("g"));
    let replay = cond.witness().map(|w| match w {
        Witness::Failure(f) => {
            let bl = BruteSemantics::new(&l, FloodMode::D, f.trace.len());
            let br = BruteSemantics::new(&r, FloodMode::D, f.trace.len());
            // the forward direction fails, so the refining side has the failure
            !bl.has_failure(&f.trace, &f.refusal) && br.has_failure(&f.trace, &f.refusal)
        }
        _ => false,
    });
    vec![
        ("cond-pair-liveness-equivalent", live.holds(), format!("liveness: {:?}", live.witness())),
        ("cond-pair-cond-liveness-distinct", !cond.holds(), "conditional liveness equivalence holds".into()),
        ("cond-pair-witness-replays", replay == Some(true), format!("witness {:?} does not replay", cond.witness())),
        ("cond-pair-left-satisfies", satisfies(&l, &spec).expect("alphabet").holds, "left violates liveness_c(g)".into()),
        ("cond-pair-right-violates", !satisfies(&r, &spec).expect("alphabet").holds, "right satisfies liveness_c(g)".into()),
    ]
}

pub fn refusal_pair_checks() -> Vec<(&'static str, bool, String)> {
    let (l, r) = (fixtures::refusal_pair_left(), fixtures::refusal_pair_right());
    let live = equivalent(&l, &r, PreorderKind::Liveness).expect("same alphabet");
    let failure_witness = matches!(live.witness(), Some(Witness::Failure(_)));
    let depth = 6;
    let same_traces = l.enumerate_bounded(depth).ptr == r.enumerate_bounded(depth).ptr;
    vec![
        ("refusal-pair-liveness-distinct", !live.holds(), "liveness equivalence holds".into()),
        ("refusal-pair-failure-witness", failure_witness, format!("witness {:?}", live.witness())),
        ("refusal-pair-same-traces", same_traces, format!("traces differ within depth {depth}")),
    ]
}

// ------------------------------------------------------------------ safety

/// `refines(p, q, safety)` against reverse partial-trace inclusion within
/// `depth`. A refutation whose witness is longer than `depth` while the
/// bounded sets agree is undecided.
pub fn check_safety_characterisation(samples: usize, depth: usize, seed: u64) -> SuiteReport {
    let cfg = GenConfig::new(6, 3, seed);
    run_suite("safety-characterisation", samples, |i| {
        let mut t = Tally::default();
        let (p, q) = gen_pair(&cfg, i);
        let v = refines(&p, &q, PreorderKind::Safety).expect("same alphabet");
        let (tp, tq) = (p.enumerate_bounded(depth).ptr, q.enumerate_bounded(depth).ptr);
        let included = tq.is_subset(&tp);
        let witness_len = match &v.witness {
            Some(Witness::Trace(w)) => Some(w.len()),
            _ => None,
        };
        let repro = || check_repro(&p, &q, PreorderKind::Safety);
        match (v.holds, included) {
            (true, true) => t.bump("refining"),
            (false, false) => t.bump("refuted"),
            (true, false) => t.violation(i, "refinement holds but bounded trace inclusion fails".into(), repro()),
            (false, true) if witness_len.is_some_and(|n| n > depth) => t.undecided += 1,
            (false, true) => t.violation(i, format!("refuted by {:?} within the depth", v.witness), repro()),
        }
        t
    })
}

// ------------------------------------------------------------------- chain

fn verdicts(p: &Lts, q: &Lts) -> BTreeMap<PreorderKind, Verdict> {
    PreorderKind::ALL
        .into_iter()
        .map(|k| (k, refines(p, q, k).expect("same alphabet")))
        .collect()
}

/// `lt ⇒ cond-liveness ⇒ liveness` and `lt ⇒ safety` on each pair.
pub fn check_preorder_chain(samples: usize, seed: u64) -> SuiteReport {
    let cfg = chain_config(seed);
    run_suite("preorder-chain", samples, |i| {
        let mut t = Tally::default();
        let (p, q) = gen_pair(&cfg, i);
        let v = verdicts(&p, &q);
        let holds = |k: PreorderKind| v[&k].holds;
        for k in PreorderKind::ALL {
            if holds(k) {
                t.bump(match k {
                    PreorderKind::Safety => "safety-holds",
                    PreorderKind::Liveness => "liveness-holds",
                    PreorderKind::CondLiveness => "cond-liveness-holds",
                    PreorderKind::Lt => "lt-holds",
                });
            }
        }
        let links = [
            (PreorderKind::Lt, PreorderKind::CondLiveness),
            (PreorderKind::CondLiveness, PreorderKind::Liveness),
            (PreorderKind::Lt, PreorderKind::Safety),
        ];
        for (strong, weak) in links {
            if holds(strong) && !holds(weak) {
                t.violation(i, format!("{strong} holds but {weak} fails"), check_repro(&p, &q, weak));
            }
        }
        t
    })
}

// -------------------------------------------------------- witness replay

/// Whether `witness` is an observation of `q` and not of `p` under the
/// preorder's semantics, evaluated on the brute-force oracles.
pub fn witness_replays(p: &Lts, q: &Lts, kind: PreorderKind, witness: &Witness) -> bool {
    let mode = kind.flood_mode();
    let observed = |x: &Lts| -> bool {
        match witness {
            Witness::Trace(w) => BruteSemantics::new(x, FloodMode::None, w.len()).traces.contains(w),
            Witness::Divergence(w) => BruteSemantics::new(x, mode, w.len()).divergences.contains(w),
            Witness::Failure(f) => BruteSemantics::new(x, mode, f.trace.len()).has_failure(&f.trace, &f.refusal),
            Witness::Lasso(l) => {
                // the linear-time preorder compares raw infinite traces
                let infinite_mode = if kind == PreorderKind::Lt { FloodMode::None } else { mode };
                infinite_rhs(infinite_mode, &RunGraph::new(x).lasso_profile(l))
            }
        }
    };
    observed(q) && !observed(p)
}

/// Every refuted verdict carries a witness that replays on the oracles.
pub fn check_witness_soundness(samples: usize, seed: u64) -> SuiteReport {
    let cfg = chain_config(seed);
    run_suite("witness-soundness", samples, |i| {
        let mut t = Tally::default();
        let (p, q) = gen_pair(&cfg, i);
        for (kind, v) in verdicts(&p, &q) {
            if v.holds {
                continue;
            }
            let ok = v.witness.as_ref().is_some_and(|w| witness_replays(&p, &q, kind, w));
            t.expect(
                "replayed",
                ok,
                i,
                || format!("{kind} witness {:?} does not replay", v.witness),
                || check_repro(&p, &q, kind),
            );
        }
        t
    })
}

// -------------------------------------------------------------- gadgets

/// Lengths of the prefixes of `lasso` after which `p` can diverge. Finite
/// whenever `p` does not have the word as an infinite trace.
fn divergent_prefix_lengths(p: &Lts, lasso: &Lasso) -> Vec<usize> {
    let g = RunGraph::new(p);
    let (u, v) = (lasso.prefix.labels(), lasso.cycle.labels());
    let period = u.len() + v.len();
    let mut seen = BTreeSet::new();
    let mut set = g.close(BTreeSet::from([g.initial]));
    let mut out = Vec::new();
    let mut pos = 0;
    for n in 0.. {
        if set.is_empty() || !seen.insert((pos, set.clone())) {
            break;
        }
        if set.iter().any(|&s| g.divergent[s]) {
            out.push(n);
        }
        let a = if pos < u.len() { &u[pos] } else { &v[pos - u.len()] };
        set = g.after(&set, a);
        pos = if pos + 1 < period { pos + 1 } else { u.len() };
    }
    out
}

const FRESH_COND: &str = "c";
const FRESH_GOOD: &str = "g";

/// For each refuted liveness-family refinement, the distinguishing tester
/// and property separate the pair.
pub fn check_gadget_separation(samples: usize, seed: u64) -> SuiteReport {
    let cfg = chain_config(seed);
    let fresh = FreshLabels {
        cond: label(FRESH_COND),
        good: label(FRESH_GOOD),
    };
    run_suite("gadget-separation", samples, |i| {
        let mut t = Tally::default();
        let (p, q) = gen_pair(&cfg, i);
        for kind in [PreorderKind::Liveness, PreorderKind::CondLiveness, PreorderKind::Lt] {
            let v = refines(&p, &q, kind).expect("same alphabet");
            let Some(witness) = v.witness.clone() else { continue };
            let (key, witness) = match witness {
                Witness::Divergence(_) => ("divergence-separated", witness),
                Witness::Failure(_) => ("failure-separated", witness),
                Witness::Lasso(l) if kind == PreorderKind::Liveness => ("lasso-separated", Witness::Lasso(l)),
                Witness::Lasso(l) => {
                    let past = divergent_prefix_lengths(&p, &l).last().map_or(0, |n| n + 1);
                    ("lasso-separated", Witness::Lasso(l.unrolled(past)))
                }
                Witness::Trace(_) => continue,
            };
            let result = liveness_distinguishing_tester(kind, &witness, p.alphabet(), &fresh)
                .and_then(|gadget| Ok((gadget.separates(&p, &q)?, gadget)));
            match result {
                Ok((separated, gadget)) => t.expect(
                    key,
                    separated,
                    i,
                    || format!("{kind} witness {witness} is not separated"),
                    || {
                        let sync: Vec<&str> = gadget.sync.iter().map(|l| l.as_str()).collect();
                        let cmd = |side: &str| format!("ltsrefine prop '{side} |[ {} ]| T' phi.prop", sync.join(", "));
                        Reproducer::new(format!("{} ; {}", cmd("P"), cmd("Q")))
                            .process("P", &p)
                            .process("Q", &q)
                            .process("T", &gadget.tester)
                            .property("phi", &gadget.property)
                    },
                ),
                Err(e) => t.violation(i, format!("{kind} tester for {witness}: {e}"), check_repro(&p, &q, kind)),
            }
        }
        t
    })
}

// ------------------------------------------------------------ dd cross

/// Deadlock and divergence traces within `depth`.
fn dd_traces(p: &Lts, depth: usize) -> BTreeSet<Word> {
    let sem = p.enumerate_bounded(depth);
    sem.deadlocks.union(&sem.divergences).cloned().collect()
}

/// `p ⊑_cond-liveness q` implies that the deadlock and divergence traces of
/// `q` are among those of `p`; the deadlock/divergence preorder agrees with
/// its trace check in the same direction.
pub fn check_dd_cross(samples: usize, depth: usize, seed: u64) -> SuiteReport {
    let cfg = chain_config(seed);
    run_suite("dd-cross-check", samples, |i| {
        let mut t = Tally::default();
        let (p, q) = gen_pair(&cfg, i);
        if refines(&p, &q, PreorderKind::CondLiveness).expect("same alphabet").holds {
            let extra: Vec<Word> = dd_traces(&q, depth).difference(&dd_traces(&p, depth)).cloned().collect();
            t.expect(
                "cond-refining",
                extra.is_empty(),
                i,
                || format!("q has extra deadlock/divergence traces {extra:?}"),
                || check_repro(&p, &q, PreorderKind::CondLiveness),
            );
        }
        if dd_preorder(&p, &q).expect("same alphabet").holds {
            let extra = dd_traces_included(&p, &q).expect("same alphabet");
            t.expect(
                "dd-refining",
                extra.is_none(),
                i,
                || format!("dd preorder holds but p has the extra trace {extra:?}"),
                || check_repro(&q, &p, PreorderKind::CondLiveness),
            );
        }
        t
    })
}

// ------------------------------------------------------------- respects

/// A random set of one to three words of length at most `max_len`.
pub fn gen_word_set(alphabet: &Alphabet, max_len: usize, allow_empty_word: bool, r: &mut ChaCha8Rng) -> BTreeSet<Word> {
    let count = r.random_range(1..=3);
    let mut out = BTreeSet::new();
    while out.len() < count {
        let min_len = if allow_empty_word { 0 } else { 1 };
        let len = r.random_range(min_len..=max_len);
        let w = Word::new((0..len).map(|_| alphabet.label(r.random_range(0..alphabet.len())).clone()).collect());
        out.insert(w);
    }
    out
}

pub fn gen_spec(class: PropertyClass, alphabet: &Alphabet, r: &mut ChaCha8Rng) -> PropertySpec {
    let set = |r: &mut ChaCha8Rng| WordSet::Finite(gen_word_set(alphabet, 3, true, r));
    match class {
        PropertyClass::Safety => PropertySpec::Safety(set(r)),
        PropertyClass::Liveness => PropertySpec::Liveness(set(r)),
        PropertyClass::CondLiveness => PropertySpec::CondLiveness {
            condition: set(r),
            goal: set(r),
        },
    }
}

/// For each preorder, `pairs` refining pairs `(τ.q + τ.r, q)` and
/// `specs_per_pair` random finite properties of each class it respects.
pub fn check_respects(pairs: usize, specs_per_pair: usize, seed: u64) -> SuiteReport {
    let cfg = GenConfig::new(5, 2, seed);
    run_suite("respects", pairs, |i| {
        let mut t = Tally::default();
        let mut r = rng(sample_seed(seed, i));
        let mut q = gen_lts_with(&cfg, &mut r);
        if i.is_multiple_of(4) {
            q = with_silent_cycle(&q, &mut r);
        }
        let other = gen_lts_with(&cfg, &mut r);
        let p = internal_choice(&q, &other);
        for kind in PreorderKind::ALL {
            if !refines(&p, &q, kind).expect("same alphabet").holds {
                t.violation(i, format!("internal choice does not {kind}-refine its summand"), check_repro(&p, &q, kind));
                continue;
            }
            let classes = PropertyClass::respected_by(kind);
            let specs: Vec<PropertySpec> = (0..specs_per_pair)
                .map(|j| gen_spec(classes[j % classes.len()], p.alphabet(), &mut r))
                .collect();
            let report = respects_check(&[(p.clone(), q.clone())], kind, &specs).expect("same alphabet");
            *t.counters.entry("spec-checks").or_default() += report.checks as u64;
            for v in report.violations {
                let spec = &specs[v.spec];
                t.violation(
                    i,
                    format!("{kind}: p satisfies {spec:?} but q violates it by {:?}", v.violation),
                    prop_repro(&q, spec).process("P_refined", &p),
                );
            }
            for spec in &specs {
                if satisfies(&p, spec).expect("alphabet").holds {
                    t.bump("spec-satisfied-by-refined");
                }
            }
        }
        t
    })
}

// --------------------------------------------------- canonical reductions

/// Direct satisfaction against the history-state-operator reductions to the
/// canonical safety and conditional liveness properties.
pub fn check_canonical_reductions(samples: usize, horizon: usize, seed: u64) -> SuiteReport {
    let cfg = GenConfig::new(5, 2, seed);
    let (bad, cond, good, neutral) = (label("bad"), label("cond"), label("good"), label("n"));
    run_suite("canonical-reductions", samples, |i| {
        let mut t = Tally::default();
        let mut r = rng(sample_seed(seed, i));
        let mut p = gen_lts_with(&cfg, &mut r);
        if i.is_multiple_of(4) {
            p = with_silent_cycle(&p, &mut r);
        }
        let alphabet = p.alphabet().clone();

        let bad_words = gen_word_set(&alphabet, horizon, false, &mut r);
        let spec = PropertySpec::Safety(WordSet::Finite(bad_words.clone()));
        let direct = satisfies(&p, &spec).expect("alphabet").holds;
        let (m, start) = history_state_operator(&alphabet, &bad_words, &bad, &neutral, horizon).expect("within horizon");
        let reduced = hide(&state_op(&m, start, &p).expect("interface"), &BTreeSet::from([neutral.clone()])).expect("hide");
        let via = satisfies(&reduced, &PropertySpec::canonical_safety(bad.clone())).expect("alphabet").holds;
        t.expect(
            "safety-triples",
            direct == via,
            i,
            || format!("safety {bad_words:?}: direct {direct}, reduced {via}"),
            || prop_repro(&p, &spec),
        );

        let condition = gen_word_set(&alphabet, horizon, true, &mut r);
        let goal = gen_word_set(&alphabet, horizon, true, &mut r);
        let spec = PropertySpec::CondLiveness {
            condition: WordSet::Finite(condition.clone()),
            goal: WordSet::Finite(goal.clone()),
        };
        let direct = satisfies(&p, &spec).expect("alphabet").holds;
        let via = match cond_history_state_operator(&alphabet, &condition, &goal, (&cond, &good, &neutral), horizon) {
            Ok((m, start)) => {
                t.bump("cond-triples-reduced");
                let composed = state_op(&m, start, &p).expect("interface");
                satisfies(&composed, &PropertySpec::canonical_cond_liveness(cond.clone(), good.clone()))
                    .expect("alphabet")
                    .holds
            }
            Err(Error::TrivialProperty(_)) => {
                // ε in C ∖ G: the property is plain liveness of G
                t.bump("cond-triples-unconditional");
                satisfies(&p, &PropertySpec::Liveness(WordSet::Finite(goal.clone()))).expect("alphabet").holds
            }
            Err(e) => panic!("unexpected error: {e}"),
        };
        t.expect(
            "cond-triples",
            direct == via,
            i,
            || format!("conditional liveness C={condition:?} G={goal:?}: direct {direct}, reduced {via}"),
            || prop_repro(&p, &spec),
        );
        t
    })
}

// ------------------------------------------------------------ identities

/// `deadlocks = {σ | ⟨σ, Act⟩ ∈ failures}` and
/// `ptr = divergences ∪ {σ | ⟨σ, ∅⟩ ∈ failures}` on the engine's raw
/// semantics, and the engine's deadlocks, divergences and traces against
/// bounded enumeration.
pub fn check_identities(samples: usize, depth: usize, seed: u64) -> SuiteReport {
    let cfg = GenConfig::new(6, 3, seed);
    run_suite("identities", samples, |i| {
        let mut t = Tally::default();
        let mut r = rng(sample_seed(seed, i));
        let mut p = gen_lts_with(&cfg, &mut r);
        if i.is_multiple_of(4) {
            p = with_silent_cycle(&p, &mut r);
        }
        let d = denote(&p, FloodMode::None);
        let sem = p.enumerate_bounded(depth);
        let all: Vec<_> = p.alphabet().iter().cloned().collect();
        let repro = || Reproducer::new(format!("ltsrefine explore P --depth {depth}")).process("P", &p);
        for w in all_words(p.alphabet(), depth) {
            let deadlock = d.is_deadlock(&w).expect("alphabet");
            let refuses_all = d.query_failure(&Failure::new(w.clone(), all.iter().cloned())).expect("alphabet");
            let trace = d.is_trace(&w).expect("alphabet");
            let divergence = d.is_divergence(&w).expect("alphabet");
            let refuses_none = d.query_failure(&Failure::new(w.clone(), [])).expect("alphabet");
            t.expect("deadlock-identity", deadlock == refuses_all, i, || format!("deadlock identity at {w}"), repro);
            t.expect(
                "trace-identity",
                trace == (divergence || refuses_none),
                i,
                || format!("trace identity at {w}"),
                repro,
            );
            let agrees = deadlock == sem.deadlocks.contains(&w)
                && divergence == sem.divergences.contains(&w)
                && trace == sem.ptr.contains(&w);
            t.expect("enumeration-agreement", agrees, i, || format!("engine and enumeration differ at {w}"), repro);
        }
        t
    })
}

// ------------------------------------------------------------- combined

#[derive(Clone, Debug, Default)]
pub struct TheoremReport {
    pub suites: Vec<SuiteReport>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }
}

impl fmt::Display for TheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.suites {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Chain, witness soundness, separation, respect, dd cross-check and
/// fixtures over `samples` instances each.
pub fn check_theorem_suite(samples: usize) -> TheoremReport {
    let seed = 0x7e57;
    TheoremReport {
        suites: vec![
            check_fixtures(),
            check_preorder_chain(samples, seed),
            check_witness_soundness(samples, seed),
            check_gadget_separation(samples, seed),
            check_respects(samples, 20, seed),
            check_dd_cross(samples, 5, seed),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_hold() {
        let r = check_fixtures();
        assert!(r.passed(), "{r}");
        assert_eq!(r.counters.len(), 8);
    }

    #[test]
    fn small_theorem_suite() {
        let r = check_theorem_suite(40);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn small_reductions_and_identities() {
        for r in [check_canonical_reductions(30, 4, 3), check_identities(30, 4, 3), check_safety_characterisation(40, 5, 3)] {
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn a_wrong_witness_does_not_replay() {
        let (l, r) = (fixtures::cond_pair_left(), fixtures::cond_pair_right());
        let wrong = Witness::Failure(Failure::new(Word::empty(), [label("g")]));
        assert!(!witness_replays(&l, &r, PreorderKind::CondLiveness, &wrong));
    }
}
