//! Membership-level comparison of composed processes with the compositional
//! equations over their arguments.
//!
//! The left side is the engine: the operator builds the composed LTS and
//! `denote` gives its semantics. The right side evaluates the equations over
//! brute-force argument semantics, see [`crate::oracle`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::{Duration, Instant};

use rand::Rng;

use lts_refine::operators::{state_op_word, word_merge};
use lts_refine::{
    denote, hide, label, par, state_op, ActionLabel, Alphabet, DenotationAutomaton, Failure, FloodMode, InterfaceSpec,
    Lts, Word,
};

use crate::gen::{gen_interface, gen_label_set, gen_lts_with, rng, sample_seed, with_silent_cycle, GenConfig};
use crate::oracle::{
    all_lassos, all_subsets, all_words, upward_closure, BruteSemantics, ConfigSystem, InterfaceRuns, LassoProfile,
    ParallelRuns, RunGraph,
};
use crate::pool::map_indexed;
use crate::reproducer::Reproducer;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Operator {
    Par,
    Hide,
    StateOp,
}

impl Operator {
    pub const ALL: [Operator; 3] = [Operator::Par, Operator::Hide, Operator::StateOp];

    pub fn name(self) -> &'static str {
        match self {
            Operator::Par => "par",
            Operator::Hide => "hide",
            Operator::StateOp => "state-op",
        }
    }
}

pub const MODES: [FloodMode; 3] = [FloodMode::None, FloodMode::Bot, FloodMode::D];

/// One observation on which the composed process and the equations disagree.
#[derive(Clone, Debug)]
pub struct Discrepancy {
    pub operator: Operator,
    pub mode: FloodMode,
    pub sample: u64,
    /// `trace`, `divergence`, `failure` or `infinite`.
    pub component: &'static str,
    pub observation: String,
    pub composed_says: bool,
    pub equations_say: bool,
    pub reproducer: Reproducer,
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "operator: {}", self.operator.name())?;
        writeln!(f, "mode: {}", self.mode)?;
        writeln!(f, "sample: {}", self.sample)?;
        writeln!(f, "component: {}", self.component)?;
        writeln!(f, "observation: {}", self.observation)?;
        writeln!(f, "composed: {}", self.composed_says)?;
        writeln!(f, "equations: {}", self.equations_say)?;
        write!(f, "{}", self.reproducer)
    }
}

#[derive(Clone, Debug, Default)]
pub struct EquationReport {
    pub samples: usize,
    pub checks: u64,
    pub discrepancies: Vec<Discrepancy>,
    pub elapsed: Duration,
}

impl EquationReport {
    pub fn passed(&self) -> bool {
        self.discrepancies.is_empty()
    }

    fn absorb(&mut self, other: EquationReport) {
        self.samples += other.samples;
        self.checks += other.checks;
        self.discrepancies.extend(other.discrepancies);
        self.elapsed += other.elapsed;
    }
}

impl fmt::Display for EquationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "samples: {}", self.samples)?;
        writeln!(f, "checks: {}", self.checks)?;
        writeln!(f, "discrepancies: {}", self.discrepancies.len())?;
        writeln!(f, "elapsed-ms: {}", self.elapsed.as_millis())?;
        for d in self.discrepancies.iter().take(3) {
            writeln!(f, "{d}")?;
        }
        Ok(())
    }
}

/// Sampling bounds for the equation suites.
#[derive(Clone, Copy, Debug)]
pub struct EquationConfig {
    pub samples: usize,
    /// Longest finite word compared.
    pub depth: usize,
    /// Longest `|u| + |v|` of a lasso `u v^ω` compared.
    pub lasso_len: usize,
    pub seed: u64,
}

impl EquationConfig {
    pub fn new(samples: usize, depth: usize, seed: u64) -> Self {
        EquationConfig {
            samples,
            depth,
            lasso_len: depth,
            seed,
        }
    }
}

/// All operators under all flooding modes.
pub fn check_compositional_equations(samples: usize, depth: usize) -> EquationReport {
    let mut total = EquationReport::default();
    for op in Operator::ALL {
        for mode in MODES {
            total.absorb(check_operator_equations(op, mode, &EquationConfig::new(samples, depth, 0x5eed)));
        }
    }
    total
}

pub fn check_operator_equations(op: Operator, mode: FloodMode, cfg: &EquationConfig) -> EquationReport {
    let start = Instant::now();
    let mut report = EquationReport {
        samples: cfg.samples,
        ..Default::default()
    };
    let outcomes = map_indexed(cfg.samples, |i| {
        let instance = Instance::generate(op, cfg.seed, i);
        let mut cmp = Comparison {
            op,
            mode,
            sample: i,
            instance: &instance,
            checks: 0,
            found: None,
        };
        cmp.run(cfg);
        (cmp.checks, cmp.found)
    });
    for (checks, found) in outcomes {
        report.checks += checks;
        report.discrepancies.extend(found);
    }
    report.elapsed = start.elapsed();
    report
}

/// A sampled operator application.
#[derive(Clone, Debug)]
pub struct Instance {
    pub op: Operator,
    pub left: Lts,
    pub right: Option<Lts>,
    /// Synchronisation or concealment set.
    pub labels: BTreeSet<ActionLabel>,
    pub interface: Option<InterfaceSpec>,
}

impl Instance {
    pub fn generate(op: Operator, seed: u64, index: u64) -> Instance {
        let mut r = rng(sample_seed(seed ^ (op as u64 + 1).wrapping_mul(0x1000_0001), index));
        let cfg = match op {
            Operator::Par => GenConfig::new(4, 3, 0),
            Operator::Hide => GenConfig::new(6, 3, 0),
            Operator::StateOp => GenConfig::new(5, 2, 0),
        };
        let draw = |r: &mut rand_chacha::ChaCha8Rng, forced: bool| {
            let p = gen_lts_with(&cfg, r);
            if forced {
                with_silent_cycle(&p, r)
            } else {
                p
            }
        };
        let forced = index.is_multiple_of(4);
        let left = draw(&mut r, forced);
        match op {
            Operator::Par => {
                let forced_right = r.random_bool(0.25);
                let right = draw(&mut r, forced_right);
                let labels = gen_label_set(left.alphabet(), &mut r);
                Instance {
                    op,
                    left,
                    right: Some(right),
                    labels,
                    interface: None,
                }
            }
            Operator::Hide => {
                let labels = gen_label_set(left.alphabet(), &mut r);
                Instance {
                    op,
                    left,
                    right: None,
                    labels,
                    interface: None,
                }
            }
            Operator::StateOp => {
                let outputs = [label("a"), label("b"), label("x")];
                let m = gen_interface(left.alphabet(), &outputs, &mut r);
                Instance {
                    op,
                    left,
                    right: None,
                    labels: BTreeSet::new(),
                    interface: Some(m),
                }
            }
        }
    }

    pub fn composed(&self) -> Lts {
        match self.op {
            Operator::Par => par(&self.left, &self.labels, self.right.as_ref().expect("par has two operands")),
            Operator::Hide => hide(&self.left, &self.labels),
            Operator::StateOp => state_op(self.interface.as_ref().expect("state operator"), 0, &self.left),
        }
        .expect("generated instances are well-formed")
    }

    pub fn expression(&self) -> String {
        let list = |s: &BTreeSet<ActionLabel>| s.iter().map(ActionLabel::as_str).collect::<Vec<_>>().join(", ");
        match self.op {
            Operator::Par => format!("P |[ {} ]| Q", list(&self.labels)),
            Operator::Hide => format!("hide {{ {} }} in P", list(&self.labels)),
            Operator::StateOp => "state M @ s0 in P".into(),
        }
    }

    pub fn reproducer(&self, depth: usize) -> Reproducer {
        let mut r = Reproducer::new(format!("ltsrefine explore '{}' --depth {depth}", self.expression()))
            .process("P", &self.left);
        if let Some(q) = &self.right {
            r = r.process("Q", q);
        }
        if let Some(m) = &self.interface {
            r = r.interface("M", m);
        }
        r
    }
}

type FailureTest = Box<dyn Fn(&Word, &BTreeSet<ActionLabel>) -> bool>;

/// Right-hand sides over words of the composed alphabet.
struct FiniteRhs {
    traces: BTreeSet<Word>,
    divergences: BTreeSet<Word>,
    failure: FailureTest,
}

struct Comparison<'a> {
    op: Operator,
    mode: FloodMode,
    sample: u64,
    instance: &'a Instance,
    checks: u64,
    found: Option<Discrepancy>,
}

impl Comparison<'_> {
    fn run(&mut self, cfg: &EquationConfig) {
        let composed = self.instance.composed();
        let engine = denote(&composed, self.mode);
        let alphabet = composed.alphabet().clone();
        let rhs = self.finite_rhs(&alphabet, cfg.depth);
        self.compare_finite(&engine, &rhs, &alphabet, cfg);
        if self.found.is_none() {
            self.compare_infinite(&engine, &alphabet, cfg);
        }
    }

    fn record(&mut self, component: &'static str, observation: String, composed: bool, equations: bool, cfg: &EquationConfig) {
        self.checks += 1;
        if composed != equations && self.found.is_none() {
            self.found = Some(Discrepancy {
                operator: self.op,
                mode: self.mode,
                sample: self.sample,
                component,
                observation,
                composed_says: composed,
                equations_say: equations,
                reproducer: self.instance.reproducer(cfg.depth),
            });
        }
    }

    fn compare_finite(&mut self, engine: &DenotationAutomaton, rhs: &FiniteRhs, alphabet: &Alphabet, cfg: &EquationConfig) {
        let subsets = all_subsets(alphabet);
        // shortest words first, so the first discrepancy is a shortest one
        for w in all_words(alphabet, cfg.depth) {
            if self.found.is_some() {
                return;
            }
            if self.mode == FloodMode::None {
                let lhs = engine.is_trace(&w).expect("word over the alphabet");
                self.record("trace", format!("trace {w}"), lhs, rhs.traces.contains(&w), cfg);
                continue;
            }
            let lhs = engine.is_divergence(&w).expect("word over the alphabet");
            self.record("divergence", format!("divergence {w}"), lhs, rhs.divergences.contains(&w), cfg);
            for x in &subsets {
                let f = Failure::new(w.clone(), x.iter().cloned());
                let lhs = engine.query_failure(&f).expect("failure over the alphabet");
                self.record("failure", format!("failure {f}"), lhs, (rhs.failure)(&w, x), cfg);
            }
        }
    }

    fn compare_infinite(&mut self, engine: &DenotationAutomaton, alphabet: &Alphabet, cfg: &EquationConfig) {
        let acceptor = engine.infinite_language();
        let i = self.instance;
        let left = RunGraph::new(&i.left);
        for lasso in all_lassos(alphabet, cfg.lasso_len) {
            if self.found.is_some() {
                return;
            }
            let profile = match self.op {
                Operator::Par => {
                    let right = RunGraph::new(i.right.as_ref().expect("par"));
                    ParallelRuns {
                        left: &left,
                        right: &right,
                        sync: &i.labels,
                    }
                    .lasso_profile(&lasso)
                }
                Operator::Hide => RunGraph::with_hidden(&i.left, &i.labels).lasso_profile(&lasso),
                Operator::StateOp => InterfaceRuns {
                    runs: &left,
                    interface: i.interface.as_ref().expect("state operator"),
                    start: 0,
                }
                .lasso_profile(&lasso),
            };
            let rhs = infinite_rhs(self.mode, &profile);
            self.record("infinite", format!("infinite {lasso}"), acceptor.accepts_lasso(&lasso), rhs, cfg);
        }
    }

    fn finite_rhs(&self, alphabet: &Alphabet, depth: usize) -> FiniteRhs {
        match self.op {
            Operator::Par => par_rhs(self.instance, self.mode, alphabet, depth),
            Operator::Hide => hide_rhs(self.instance, self.mode, alphabet, depth),
            Operator::StateOp => state_op_rhs(self.instance, self.mode, alphabet, depth),
        }
    }
}

/// Infinite traces: raw runs, plus extensions of divergences under `Bot`,
/// plus words with infinitely many divergent prefixes under `D`.
pub(crate) fn infinite_rhs(mode: FloodMode, p: &LassoProfile) -> bool {
    match mode {
        FloodMode::None => p.infinite,
        FloodMode::Bot => p.infinite || p.divergent_prefix,
        FloodMode::D => p.infinite || p.cofinal_divergence,
    }
}

/// Pairs `(ν, ξ)` whose merges of length at most `depth` give each word.
fn merges<'a>(
    left: impl IntoIterator<Item = &'a Word>,
    right: impl IntoIterator<Item = &'a Word>,
    sync: &BTreeSet<ActionLabel>,
    depth: usize,
) -> BTreeMap<Word, Vec<(Word, Word)>> {
    let project = |w: &Word| -> Vec<ActionLabel> { w.iter().filter(|a| sync.contains(a)).cloned().collect() };
    let mut by_projection: BTreeMap<Vec<ActionLabel>, Vec<&Word>> = BTreeMap::new();
    for xi in right {
        by_projection.entry(project(xi)).or_default().push(xi);
    }
    let mut out: BTreeMap<Word, Vec<(Word, Word)>> = BTreeMap::new();
    for nu in left {
        let shared = project(nu);
        for &xi in by_projection.get(&shared).into_iter().flatten() {
            if nu.len() + xi.len() - shared.len() > depth {
                continue;
            }
            for w in word_merge(nu, sync, xi, depth) {
                out.entry(w).or_default().push((nu.clone(), xi.clone()));
            }
        }
    }
    out
}

fn par_rhs(i: &Instance, mode: FloodMode, alphabet: &Alphabet, depth: usize) -> FiniteRhs {
    let sync = i.labels.clone();
    let bp = BruteSemantics::new(&i.left, mode, depth);
    let bq = BruteSemantics::new(i.right.as_ref().expect("par"), mode, depth);
    let traces = merges(&bp.traces, &bq.traces, &sync, depth).into_keys().collect();
    let mut divergences: BTreeSet<Word> = merges(bp.failure_words(), &bq.divergences, &sync, depth).into_keys().collect();
    divergences.extend(merges(&bp.divergences, bq.failure_words(), &sync, depth).into_keys());
    if mode == FloodMode::Bot {
        divergences = upward_closure(&divergences, alphabet, depth);
    }
    let failure_pairs = merges(bp.failure_words(), bq.failure_words(), &sync, depth);
    let divs = divergences.clone();
    let failure = move |w: &Word, z: &BTreeSet<ActionLabel>| {
        if divs.contains(w) {
            return true;
        }
        let (shared, own): (BTreeSet<ActionLabel>, BTreeSet<ActionLabel>) = z.iter().cloned().partition(|a| sync.contains(a));
        failure_pairs.get(w).into_iter().flatten().any(|(nu, xi)| {
            bp.refusals[nu].iter().any(|x| {
                bq.refusals[xi].iter().any(|y| {
                    shared.iter().all(|a| x.contains(a) || y.contains(a)) && own.iter().all(|a| x.contains(a) && y.contains(a))
                })
            })
        })
    };
    FiniteRhs {
        traces,
        divergences,
        failure: Box::new(failure),
    }
}

fn hide_rhs(i: &Instance, mode: FloodMode, alphabet: &Alphabet, depth: usize) -> FiniteRhs {
    let g = RunGraph::with_hidden(&i.left, &i.labels);
    let mut traces = BTreeSet::new();
    let mut divergences = BTreeSet::new();
    let mut last_sets: BTreeMap<Word, BTreeSet<usize>> = BTreeMap::new();
    for w in all_words(alphabet, depth) {
        let sets = g.along(&w);
        let last = sets.last().expect("non-empty").clone();
        if !last.is_empty() {
            traces.insert(w.clone());
        }
        let divergent = |set: &BTreeSet<usize>| set.iter().any(|&s| g.divergent[s]);
        let div = match mode {
            FloodMode::Bot => sets.iter().any(divergent),
            _ => divergent(&last),
        };
        if div {
            divergences.insert(w.clone());
        }
        last_sets.insert(w, last);
    }
    let hidden = i.labels.clone();
    let divs = divergences.clone();
    let failure = move |w: &Word, z: &BTreeSet<ActionLabel>| {
        let refused: BTreeSet<ActionLabel> = z.union(&hidden).cloned().collect();
        divs.contains(w) || last_sets[w].iter().any(|&s| g.refuses(s, &refused))
    };
    FiniteRhs {
        traces,
        divergences,
        failure: Box::new(failure),
    }
}

fn state_op_rhs(i: &Instance, mode: FloodMode, alphabet: &Alphabet, depth: usize) -> FiniteRhs {
    let m = i.interface.clone().expect("state operator");
    let inputs = i.left.alphabet().clone();
    let bp = BruteSemantics::new(&i.left, mode, depth);
    let mut images: BTreeMap<Word, Vec<(Word, usize)>> = BTreeMap::new();
    for sigma in &bp.traces {
        let (out, end) = state_op_word(&m, 0, sigma);
        images.entry(out).or_default().push((sigma.clone(), end));
    }
    let traces = images.keys().cloned().collect();
    let mut divergences: BTreeSet<Word> = bp.divergences.iter().map(|s| state_op_word(&m, 0, s).0).collect();
    if mode == FloodMode::Bot {
        divergences = upward_closure(&divergences, alphabet, depth);
    }
    let divs = divergences.clone();
    let failure = move |w: &Word, x: &BTreeSet<ActionLabel>| {
        divs.contains(w)
            || images
                .get(w)
                .into_iter()
                .flatten()
                .any(|(sigma, end)| bp.has_failure(sigma, &m.preimage(*end, &inputs, x)))
    };
    FiniteRhs {
        traces,
        divergences,
        failure: Box::new(failure),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use lts_refine::word;

    #[test]
    fn full_synchronisation_of_identical_chains() {
        let chain = Lts::builder(3).visible(0, "a", 1).visible(1, "b", 2).build().unwrap();
        let instance = Instance {
            op: Operator::Par,
            left: chain.clone(),
            right: Some(chain.clone()),
            labels: BTreeSet::from([label("a"), label("b")]),
            interface: None,
        };
        for mode in MODES {
            let rhs = par_rhs(&instance, mode, chain.alphabet(), 3);
            assert_eq!(rhs.traces, chain.enumerate_bounded(3).ptr);
            assert!(rhs.divergences.is_empty());
            assert!((rhs.failure)(&word("a b"), &BTreeSet::from([label("a"), label("b")])));
            assert!(!(rhs.failure)(&word("a"), &BTreeSet::from([label("b")])));
        }
    }

    #[test]
    fn hiding_a_loop_creates_a_divergence() {
        let loop_ = Lts::builder(1).visible(0, "a", 0).alphabet(&["b"]).build().unwrap();
        let instance = Instance {
            op: Operator::Hide,
            left: loop_.clone(),
            right: None,
            labels: BTreeSet::from([label("a")]),
            interface: None,
        };
        let rhs = hide_rhs(&instance, FloodMode::D, loop_.alphabet(), 2);
        assert!(rhs.divergences.contains(&Word::empty()));
        let engine = denote(&instance.composed(), FloodMode::D);
        assert!(engine.is_divergence(&Word::empty()).unwrap());
    }

    #[test]
    fn small_sweeps_agree() {
        for op in Operator::ALL {
            for mode in MODES {
                let report = check_operator_equations(op, mode, &EquationConfig::new(25, 3, 11));
                assert!(report.passed(), "{}", report);
            }
        }
    }
}
