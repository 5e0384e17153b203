//! Brute-force semantics that never consult the engine's denotations.
//!
//! Finite observations come from `Lts::enumerate_bounded` plus the stable
//! states it reaches. Questions that quantify over unboundedly long or
//! infinite argument runs (concealment, ultimately periodic words) are
//! answered by searching the raw transition graphs directly.

use std::collections::{BTreeMap, BTreeSet};

use lts_refine::{Action, ActionLabel, Alphabet, FloodMode, Lasso, Lts, Word};

/// Adjacency of an LTS with a chosen set of visible labels treated as silent.
#[derive(Clone, Debug)]
pub struct RunGraph {
    pub initial: usize,
    /// Silent moves, including moves on the treated-as-silent labels.
    pub silent: Vec<Vec<usize>>,
    pub visible: Vec<Vec<(ActionLabel, usize)>>,
    /// The state has no outgoing τ edge in the original LTS.
    pub stable: Vec<bool>,
    /// Labels of all outgoing visible edges in the original LTS.
    pub initials: Vec<BTreeSet<ActionLabel>>,
    /// An infinite path of silent moves starts here.
    pub divergent: Vec<bool>,
    /// An infinite path of original τ moves starts here.
    pub tau_divergent: Vec<bool>,
}

impl RunGraph {
    pub fn new(p: &Lts) -> Self {
        Self::with_hidden(p, &BTreeSet::new())
    }

    pub fn with_hidden(p: &Lts, hidden: &BTreeSet<ActionLabel>) -> Self {
        let n = p.num_states();
        let mut silent = vec![Vec::new(); n];
        let mut tau = vec![Vec::new(); n];
        let mut visible = vec![Vec::new(); n];
        let mut stable = vec![true; n];
        let mut initials = vec![BTreeSet::new(); n];
        for t in p.transitions() {
            match t.action {
                Action::Silent => {
                    silent[t.source].push(t.target);
                    tau[t.source].push(t.target);
                    stable[t.source] = false;
                }
                Action::Visible(a) => {
                    initials[t.source].insert(a.clone());
                    if hidden.contains(&a) {
                        silent[t.source].push(t.target);
                    } else {
                        visible[t.source].push((a, t.target));
                    }
                }
            }
        }
        RunGraph {
            initial: p.initial(),
            divergent: pigeonhole(&silent),
            tau_divergent: pigeonhole(&tau),
            silent,
            visible,
            stable,
            initials,
        }
    }

    pub fn num_states(&self) -> usize {
        self.silent.len()
    }

    /// Stable and no outgoing edge labelled in `refused`.
    pub fn refuses(&self, s: usize, refused: &BTreeSet<ActionLabel>) -> bool {
        self.stable[s] && self.initials[s].is_disjoint(refused)
    }
}

/// A state diverges iff a silent path with as many steps as there are states
/// starts there.
fn pigeonhole(silent: &[Vec<usize>]) -> Vec<bool> {
    let n = silent.len();
    let mut can = vec![true; n];
    for _ in 0..n {
        can = (0..n).map(|s| silent[s].iter().any(|&t| can[t])).collect();
    }
    can
}

/// Configurations of a composed system explored without building it.
pub trait ConfigSystem {
    type Config: Clone + Ord;
    fn initial(&self) -> Self::Config;
    fn silent(&self, c: &Self::Config) -> Vec<Self::Config>;
    fn visible(&self, c: &Self::Config, a: &ActionLabel) -> Vec<Self::Config>;
    fn divergent(&self, c: &Self::Config) -> bool;

    fn close(&self, set: BTreeSet<Self::Config>) -> BTreeSet<Self::Config> {
        let mut out = set.clone();
        let mut stack: Vec<Self::Config> = set.into_iter().collect();
        while let Some(c) = stack.pop() {
            for d in self.silent(&c) {
                if out.insert(d.clone()) {
                    stack.push(d);
                }
            }
        }
        out
    }

    fn after(&self, set: &BTreeSet<Self::Config>, a: &ActionLabel) -> BTreeSet<Self::Config> {
        self.close(set.iter().flat_map(|c| self.visible(c, a)).collect())
    }

    /// Configuration sets after each prefix of `w`, from ε to `w`.
    fn along(&self, w: &Word) -> Vec<BTreeSet<Self::Config>> {
        let mut sets = vec![self.close(BTreeSet::from([self.initial()]))];
        for a in w.iter() {
            let next = self.after(sets.last().expect("non-empty"), a);
            sets.push(next);
        }
        sets
    }

    /// Exact behaviour along an ultimately periodic word. The configuration
    /// set after each prefix is determined by the set and the lasso position,
    /// so the sequence becomes periodic once a pair repeats.
    fn lasso_profile(&self, lasso: &Lasso) -> LassoProfile {
        let (u, v) = (&lasso.prefix, &lasso.cycle);
        let letter = |pos: usize| if pos < u.len() { &u.labels()[pos] } else { &v.labels()[pos - u.len()] };
        let next_pos = |pos: usize| if pos + 1 < u.len() + v.len() { pos + 1 } else { u.len() };
        let mut seen: BTreeMap<(usize, BTreeSet<Self::Config>), usize> = BTreeMap::new();
        let mut divergent_at: Vec<bool> = Vec::new();
        let mut set = self.close(BTreeSet::from([self.initial()]));
        let mut pos = 0;
        loop {
            if set.is_empty() {
                return LassoProfile {
                    infinite: false,
                    divergent_prefix: divergent_at.iter().any(|&d| d),
                    cofinal_divergence: false,
                };
            }
            if let Some(&first) = seen.get(&(pos, set.clone())) {
                return LassoProfile {
                    infinite: true,
                    divergent_prefix: divergent_at.iter().any(|&d| d),
                    cofinal_divergence: divergent_at[first..].iter().any(|&d| d),
                };
            }
            seen.insert((pos, set.clone()), divergent_at.len());
            divergent_at.push(set.iter().any(|c| self.divergent(c)));
            set = self.after(&set, letter(pos));
            pos = next_pos(pos);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LassoProfile {
    /// Every prefix can be performed (by König's lemma: an infinite run).
    pub infinite: bool,
    /// Some prefix reaches a divergent configuration.
    pub divergent_prefix: bool,
    /// Infinitely many prefixes reach a divergent configuration.
    pub cofinal_divergence: bool,
}

impl ConfigSystem for RunGraph {
    type Config = usize;

    fn initial(&self) -> usize {
        self.initial
    }

    fn silent(&self, &s: &usize) -> Vec<usize> {
        self.silent[s].clone()
    }

    fn visible(&self, &s: &usize, a: &ActionLabel) -> Vec<usize> {
        self.visible[s].iter().filter(|(l, _)| l == a).map(|&(_, t)| t).collect()
    }

    fn divergent(&self, &s: &usize) -> bool {
        self.divergent[s]
    }
}

/// Runs of `p` and `q` side by side, synchronising on `sync`.
pub struct ParallelRuns<'a> {
    pub left: &'a RunGraph,
    pub right: &'a RunGraph,
    pub sync: &'a BTreeSet<ActionLabel>,
}

impl ConfigSystem for ParallelRuns<'_> {
    type Config = (usize, usize);

    fn initial(&self) -> (usize, usize) {
        (self.left.initial, self.right.initial)
    }

    fn silent(&self, &(s, t): &(usize, usize)) -> Vec<(usize, usize)> {
        let l = self.left.silent[s].iter().map(|&s2| (s2, t));
        let r = self.right.silent[t].iter().map(|&t2| (s, t2));
        l.chain(r).collect()
    }

    fn visible(&self, &(s, t): &(usize, usize), a: &ActionLabel) -> Vec<(usize, usize)> {
        let ls = self.left.visible(&s, a);
        let rs = self.right.visible(&t, a);
        if self.sync.contains(a) {
            ls.iter().flat_map(|&s2| rs.iter().map(move |&t2| (s2, t2))).collect()
        } else {
            ls.into_iter().map(|s2| (s2, t)).chain(rs.into_iter().map(|t2| (s, t2))).collect()
        }
    }

    fn divergent(&self, &(s, t): &(usize, usize)) -> bool {
        self.left.divergent[s] || self.right.divergent[t]
    }
}

/// Runs of `p` paired with the internal state of a state operator.
pub struct InterfaceRuns<'a> {
    pub runs: &'a RunGraph,
    pub interface: &'a lts_refine::InterfaceSpec,
    pub start: usize,
}

impl ConfigSystem for InterfaceRuns<'_> {
    type Config = (usize, usize);

    fn initial(&self) -> (usize, usize) {
        (self.runs.initial, self.start)
    }

    fn silent(&self, &(s, m): &(usize, usize)) -> Vec<(usize, usize)> {
        self.runs.silent[s].iter().map(|&s2| (s2, m)).collect()
    }

    fn visible(&self, &(s, m): &(usize, usize), b: &ActionLabel) -> Vec<(usize, usize)> {
        self.runs.visible[s]
            .iter()
            .filter(|(a, _)| self.interface.action(m, a) == *b)
            .map(|(a, s2)| (*s2, self.interface.effect(m, a)))
            .collect()
    }

    fn divergent(&self, &(s, _): &(usize, usize)) -> bool {
        self.runs.divergent[s]
    }
}

/// Bounded failures/divergences/traces of one process under a flooding mode,
/// computed from `enumerate_bounded`.
#[derive(Clone, Debug)]
pub struct BruteSemantics {
    pub alphabet: Alphabet,
    pub depth: usize,
    pub traces: BTreeSet<Word>,
    pub divergences: BTreeSet<Word>,
    /// Maximal refusals after each word; words without a failure are absent.
    pub refusals: BTreeMap<Word, Vec<BTreeSet<ActionLabel>>>,
    /// States reached by each raw partial trace.
    pub reached: BTreeMap<Word, BTreeSet<usize>>,
}

impl BruteSemantics {
    pub fn new(p: &Lts, mode: FloodMode, depth: usize) -> Self {
        let sem = p.enumerate_bounded(depth);
        let g = RunGraph::new(p);
        let all: BTreeSet<ActionLabel> = p.alphabet().iter().cloned().collect();
        let mut refusals: BTreeMap<Word, Vec<BTreeSet<ActionLabel>>> = BTreeMap::new();
        for (w, states) in &sem.reached {
            let mut maximal: Vec<BTreeSet<ActionLabel>> = states
                .iter()
                .filter(|&&s| g.stable[s])
                .map(|&s| all.difference(&g.initials[s]).cloned().collect())
                .collect();
            maximal.sort();
            maximal.dedup();
            if !maximal.is_empty() {
                refusals.insert(w.clone(), maximal);
            }
        }
        let mut out = BruteSemantics {
            alphabet: p.alphabet().clone(),
            depth,
            traces: sem.ptr.clone(),
            divergences: sem.divergences.clone(),
            refusals,
            reached: sem.reached,
        };
        match mode {
            FloodMode::None => {}
            FloodMode::D => {
                for w in &sem.divergences {
                    out.refusals.insert(w.clone(), vec![all.clone()]);
                }
            }
            FloodMode::Bot => {
                let flooded: BTreeSet<Word> = all_words(p.alphabet(), depth)
                    .into_iter()
                    .filter(|w| w.prefixes().any(|pre| sem.divergences.contains(&pre)))
                    .collect();
                for w in &flooded {
                    out.refusals.insert(w.clone(), vec![all.clone()]);
                    out.traces.insert(w.clone());
                }
                out.divergences = flooded;
            }
        }
        out
    }

    pub fn has_failure(&self, w: &Word, refused: &BTreeSet<ActionLabel>) -> bool {
        self.refusals
            .get(w)
            .is_some_and(|xs| xs.iter().any(|x| refused.is_subset(x)))
    }

    /// Words with at least one failure.
    pub fn failure_words(&self) -> impl Iterator<Item = &Word> {
        self.refusals.keys()
    }
}

/// Every word over `alphabet` of length at most `depth`, shortest first.
pub fn all_words(alphabet: &Alphabet, depth: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..depth {
        layer = layer
            .iter()
            .flat_map(|w| alphabet.iter().map(move |a| w.extended(a.clone())))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Every subset of `alphabet`.
pub fn all_subsets(alphabet: &Alphabet) -> Vec<BTreeSet<ActionLabel>> {
    let k = alphabet.len();
    (0..1u32 << k)
        .map(|mask| {
            alphabet
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, l)| l.clone())
                .collect()
        })
        .collect()
}

/// Lassos `u v^ω` with `|u| + |v| <= max_len` and `v` non-empty.
pub fn all_lassos(alphabet: &Alphabet, max_len: usize) -> Vec<Lasso> {
    let words = all_words(alphabet, max_len);
    let mut out = Vec::new();
    for u in &words {
        for v in &words {
            if !v.is_empty() && u.len() + v.len() <= max_len {
                out.push(Lasso {
                    prefix: u.clone(),
                    cycle: v.clone(),
                });
            }
        }
    }
    out
}

/// Extensions of words in `base` within `depth`, over `alphabet`.
pub fn upward_closure(base: &BTreeSet<Word>, alphabet: &Alphabet, depth: usize) -> BTreeSet<Word> {
    all_words(alphabet, depth)
        .into_iter()
        .filter(|w| w.prefixes().any(|pre| base.contains(&pre)))
        .collect()
}

/// Whether the infinite word `lasso` lies in the infinite traces of `p`,
/// judged on the raw transition graph.
pub fn is_infinite_trace(p: &Lts, lasso: &Lasso) -> bool {
    RunGraph::new(p).lasso_profile(lasso).infinite
}
