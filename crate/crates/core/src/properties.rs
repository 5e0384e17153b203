//! Satisfaction of safety, liveness and conditional liveness properties, and
//! the may-reach possibility check.

use std::collections::BTreeSet;
use std::fmt;

use crate::automata::{Lasso, WordDfa};
use crate::denotation::{denote, FloodMode};
use crate::error::Result;
use crate::label::{ActionLabel, Alphabet, Word};
use crate::lts::Lts;
use crate::preorders::{refines, PreorderKind};
use crate::search::explore;

/// A set of finite words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WordSet {
    Finite(BTreeSet<Word>),
    /// Every word with at least one occurrence of the label.
    Containing(ActionLabel),
    Dfa(WordDfa),
}

impl WordSet {
    pub fn finite<I: IntoIterator<Item = Word>>(words: I) -> Self {
        WordSet::Finite(words.into_iter().collect())
    }

    /// Acceptor over `alphabet`. Words mentioning other labels are outside
    /// every language over `alphabet`, so they are dropped.
    pub fn to_dfa(&self, alphabet: &Alphabet) -> WordDfa {
        match self {
            WordSet::Finite(words) => WordDfa::from_words(alphabet, words),
            WordSet::Containing(l) => WordDfa::containing(alphabet, l),
            WordSet::Dfa(d) => d.retarget(alphabet),
        }
    }

    pub fn contains(&self, w: &Word) -> bool {
        match self {
            WordSet::Finite(words) => words.contains(w),
            WordSet::Containing(l) => w.contains_label(l),
            WordSet::Dfa(d) => d.accepts(w),
        }
    }

    /// Labels mentioned explicitly by the set.
    pub fn labels(&self) -> BTreeSet<ActionLabel> {
        match self {
            WordSet::Finite(words) => words.iter().flat_map(|w| w.iter().cloned()).collect(),
            WordSet::Containing(l) => BTreeSet::from([l.clone()]),
            WordSet::Dfa(d) => d.alphabet().iter().cloned().collect(),
        }
    }
}

/// A property of processes, judged on their partial or complete traces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PropertySpec {
    /// No partial trace lies in the set.
    Safety(WordSet),
    /// Every complete trace has a prefix in the set.
    Liveness(WordSet),
    /// Every complete trace with a prefix in `condition` has a prefix in `goal`.
    CondLiveness { condition: WordSet, goal: WordSet },
}

impl PropertySpec {
    /// The process never performs `bad`.
    pub fn canonical_safety(bad: ActionLabel) -> Self {
        PropertySpec::Safety(WordSet::Containing(bad))
    }

    /// Every complete trace contains `good`.
    pub fn canonical_liveness(good: ActionLabel) -> Self {
        PropertySpec::Liveness(WordSet::Containing(good))
    }

    /// Every complete trace containing `cond` also contains `good`.
    pub fn canonical_cond_liveness(cond: ActionLabel, good: ActionLabel) -> Self {
        PropertySpec::CondLiveness {
            condition: WordSet::Containing(cond),
            goal: WordSet::Containing(good),
        }
    }

    pub fn class(&self) -> PropertyClass {
        match self {
            PropertySpec::Safety(_) => PropertyClass::Safety,
            PropertySpec::Liveness(_) => PropertyClass::Liveness,
            PropertySpec::CondLiveness { .. } => PropertyClass::CondLiveness,
        }
    }

    pub fn labels(&self) -> BTreeSet<ActionLabel> {
        match self {
            PropertySpec::Safety(b) | PropertySpec::Liveness(b) => b.labels(),
            PropertySpec::CondLiveness { condition, goal } => {
                condition.labels().union(&goal.labels()).cloned().collect()
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PropertyClass {
    Safety,
    Liveness,
    CondLiveness,
}

impl PropertyClass {
    /// Classes whose properties the preorder is guaranteed to respect.
    pub fn respected_by(kind: PreorderKind) -> &'static [PropertyClass] {
        match kind {
            PreorderKind::Safety => &[PropertyClass::Safety],
            PreorderKind::Liveness => &[PropertyClass::Liveness],
            PreorderKind::CondLiveness => &[PropertyClass::Liveness, PropertyClass::CondLiveness],
            PreorderKind::Lt => &[PropertyClass::Safety, PropertyClass::Liveness, PropertyClass::CondLiveness],
        }
    }
}

/// A partial trace in `B`, a finite complete trace, or an infinite one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Trace(Word),
    Deadlock(Word),
    Divergence(Word),
    Infinite(Lasso),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Trace(w) => write!(f, "trace {w}"),
            Violation::Deadlock(w) => write!(f, "deadlock {w}"),
            Violation::Divergence(w) => write!(f, "divergence {w}"),
            Violation::Infinite(l) => write!(f, "infinite {l}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Satisfaction {
    pub holds: bool,
    pub violation: Option<Violation>,
}

impl Satisfaction {
    fn from(violation: Option<Violation>) -> Self {
        Satisfaction {
            holds: violation.is_none(),
            violation,
        }
    }

    pub fn report(&self) -> String {
        let mut out = format!("satisfied: {}\n", self.holds);
        if let Some(v) = &self.violation {
            out.push_str(&format!("violation: {v}\n"));
        }
        out
    }
}

pub fn satisfies(p: &Lts, spec: &PropertySpec) -> Result<Satisfaction> {
    let alphabet = p.alphabet();
    Ok(Satisfaction::from(match spec {
        PropertySpec::Safety(bad) => safety_violation(p, &bad.to_dfa(alphabet)),
        PropertySpec::Liveness(goal) => obligation_violation(p, None, &goal.to_dfa(alphabet)),
        PropertySpec::CondLiveness { condition, goal } => {
            obligation_violation(p, Some(&condition.to_dfa(alphabet)), &goal.to_dfa(alphabet))
        }
    }))
}

fn safety_violation(p: &Lts, bad: &WordDfa) -> Option<Violation> {
    let d = denote(p, FloodMode::None);
    let k = p.alphabet().len();
    let g = explore((d.initial(), bad.initial()), |&(s, b)| {
        (0..k)
            .filter_map(|l| Some((l, (d.step(s, l)?, bad.step(b, l)))))
            .collect::<Vec<_>>()
    });
    g.first_match(|_, &(_, b)| bad.is_accepting(b))
        .map(|i| Violation::Trace(p.alphabet().decode(&g.path_to(i))))
}

/// Prefix monitor: its current state, or `None` once it has accepted.
type Monitor = Option<usize>;

fn advance(dfa: &WordDfa, m: Monitor, label: usize) -> Monitor {
    m.map(|s| dfa.step(s, label)).filter(|&s| !dfa.is_accepting(s))
}

fn start(dfa: &WordDfa) -> Monitor {
    Some(dfa.initial()).filter(|&s| !dfa.is_accepting(s))
}

/// A complete trace that has a prefix in `condition` (every trace, when
/// `None`) and no prefix in `goal`.
fn obligation_violation(p: &Lts, condition: Option<&WordDfa>, goal: &WordDfa) -> Option<Violation> {
    let d = denote(p, FloodMode::None);
    let k = p.alphabet().len();
    let triggered = |c: Monitor| c.is_none();
    let init = (d.initial(), condition.and_then(start), start(goal));
    // Nodes whose goal monitor has accepted are never expanded: no extension
    // can violate the obligation.
    let g = explore(init, |&(s, c, gm)| {
        if gm.is_none() {
            return Vec::new();
        }
        (0..k)
            .filter_map(|l| {
                let s2 = d.step(s, l)?;
                let c2 = condition.and_then(|dfa| advance(dfa, c, l));
                Some((l, (s2, c2, advance(goal, gm, l))))
            })
            .collect()
    });
    let pending = |i: usize| {
        let (_, c, gm) = g.nodes[i];
        triggered(c) && gm.is_some()
    };
    let word = |i: usize| p.alphabet().decode(&g.path_to(i));
    if let Some(i) = (0..g.len()).find(|&i| pending(i) && (d.state(g.nodes[i].0).deadlock || d.state(g.nodes[i].0).divergent)) {
        let m = d.state(g.nodes[i].0);
        return Some(if m.deadlock {
            Violation::Deadlock(word(i))
        } else {
            Violation::Divergence(word(i))
        });
    }
    g.find_lasso(pending, pending).map(|(u, v)| {
        Violation::Infinite(Lasso {
            prefix: p.alphabet().decode(&u),
            cycle: p.alphabet().decode(&v),
        })
    })
}

/// Whether some partial trace contains `a`.
pub fn may_reach(p: &Lts, a: &ActionLabel) -> bool {
    let Some(l) = p.alphabet().index_of(a) else {
        return false;
    };
    let d = denote(p, FloodMode::None);
    (0..d.states().len()).any(|s| d.step(s, l).is_some())
}

/// A refining pair and a property that `p` satisfies but `q` does not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RespectViolation {
    pub pair: usize,
    pub spec: usize,
    pub violation: Option<Violation>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RespectReport {
    pub refining_pairs: usize,
    pub checks: usize,
    pub violations: Vec<RespectViolation>,
}

/// For every pair with `p ⊑ q` and every spec of a class the preorder
/// respects, asserts that `p ⊨ φ` implies `q ⊨ φ`.
pub fn respects_check(pairs: &[(Lts, Lts)], kind: PreorderKind, specs: &[PropertySpec]) -> Result<RespectReport> {
    let classes = PropertyClass::respected_by(kind);
    let relevant: Vec<(usize, &PropertySpec)> = specs
        .iter()
        .enumerate()
        .filter(|(_, s)| classes.contains(&s.class()))
        .collect();
    let mut report = RespectReport::default();
    for (i, (p, q)) in pairs.iter().enumerate() {
        if !refines(p, q, kind)?.holds {
            continue;
        }
        report.refining_pairs += 1;
        for &(j, spec) in &relevant {
            report.checks += 1;
            if satisfies(p, spec)?.holds {
                let on_q = satisfies(q, spec)?;
                if !on_q.holds {
                    report.violations.push(RespectViolation {
                        pair: i,
                        spec: j,
                        violation: on_q.violation,
                    });
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::label::{label, word};

    #[test]
    fn cond_pair_canonical_conditional_liveness() {
        let spec = PropertySpec::canonical_cond_liveness(label("c"), label("g"));
        assert!(satisfies(&cond_pair_left(), &spec).unwrap().holds);
        let r = satisfies(&cond_pair_right(), &spec).unwrap();
        assert_eq!(r.violation, Some(Violation::Deadlock(word("c"))));
    }

    #[test]
    fn trivial_properties_hold_everywhere() {
        for p in [cond_pair_left(), cond_pair_right(), refusal_pair_left(), refusal_pair_right()] {
            assert!(satisfies(&p, &PropertySpec::Safety(WordSet::finite([]))).unwrap().holds);
            let g = PropertySpec::Liveness(WordSet::finite([Word::empty()]));
            assert!(satisfies(&p, &g).unwrap().holds);
        }
    }

    #[test]
    fn safety_violation_is_the_shortest_bad_trace() {
        let spec = PropertySpec::canonical_safety(label("g"));
        assert_eq!(satisfies(&cond_pair_left(), &spec).unwrap().violation, Some(Violation::Trace(word("c g"))));
        assert!(satisfies(&cond_pair_right(), &spec).unwrap().holds);
    }

    #[test]
    fn divergence_and_infinite_violations() {
        let spec = PropertySpec::canonical_liveness(label("g"));
        let v = satisfies(&cond_pair_left(), &spec).unwrap().violation;
        assert_eq!(v, Some(Violation::Divergence(Word::empty())));
        let lp = Lts::builder(1).visible(0, "a", 0).alphabet(&["g"]).build().unwrap();
        let v = satisfies(&lp, &spec).unwrap().violation;
        assert!(matches!(v, Some(Violation::Infinite(_))));
        let lp_g = Lts::builder(2).visible(0, "g", 1).visible(1, "a", 1).build().unwrap();
        assert!(satisfies(&lp_g, &spec).unwrap().holds);
    }

    #[test]
    fn possibility() {
        assert!(may_reach(&cond_pair_left(), &label("g")));
        assert!(!may_reach(&cond_pair_right(), &label("g")));
        assert!(!may_reach(&Lts::builder(1).alphabet(&["a"]).build().unwrap(), &label("a")));
    }

    #[test]
    fn empty_condition_is_trivially_satisfied() {
        let spec = PropertySpec::CondLiveness {
            condition: WordSet::finite([]),
            goal: WordSet::finite([word("g")]),
        };
        assert!(satisfies(&cond_pair_right(), &spec).unwrap().holds);
    }

    #[test]
    fn respect_report_on_fixtures() {
        let pairs = vec![(cond_pair_left(), cond_pair_right()), (cond_pair_right(), cond_pair_left())];
        let specs = vec![PropertySpec::canonical_liveness(label("g"))];
        let r = respects_check(&pairs, PreorderKind::Liveness, &specs).unwrap();
        assert_eq!(r.refining_pairs, 2);
        assert!(r.violations.is_empty());
        assert_eq!(respects_check(&pairs, PreorderKind::Liveness, &[]).unwrap().checks, 0);
    }
}
