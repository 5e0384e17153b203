//! Decision procedures for the safety, liveness, conditional-liveness and
//! linear-time preorders, with counterexample witnesses.
//!
//! `p ⊑ q` holds when every observation of `q` is also an observation of `p`,
//! so a witness is always an observation of `q` that `p` lacks.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;

use crate::automata::Lasso;
use crate::denotation::{denote, DenotationAutomaton, Failure, FloodMode};
use crate::error::{Error, Result};
use crate::label::Word;
use crate::lts::Lts;
use crate::search::{explore, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PreorderKind {
    Safety,
    Liveness,
    CondLiveness,
    Lt,
}

impl PreorderKind {
    pub const ALL: [PreorderKind; 4] = [
        PreorderKind::Safety,
        PreorderKind::Liveness,
        PreorderKind::CondLiveness,
        PreorderKind::Lt,
    ];

    /// Flooding applied to both sides before comparison.
    pub fn flood_mode(self) -> FloodMode {
        match self {
            PreorderKind::Safety => FloodMode::None,
            PreorderKind::Liveness => FloodMode::Bot,
            PreorderKind::CondLiveness | PreorderKind::Lt => FloodMode::D,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PreorderKind::Safety => "safety",
            PreorderKind::Liveness => "liveness",
            PreorderKind::CondLiveness => "cond-liveness",
            PreorderKind::Lt => "lt",
        }
    }
}

impl fmt::Display for PreorderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PreorderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PreorderKind::ALL
            .into_iter()
            .find(|k| k.name() == s || (s == "cond_liveness" && *k == PreorderKind::CondLiveness))
            .ok_or_else(|| Error::parse(1, 1, format!("unknown preorder `{s}`")))
    }
}

/// Set of observations in which a refutation was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Component {
    Traces,
    Divergences,
    Failures,
    InfiniteTraces,
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Component::Traces => "traces",
            Component::Divergences => "divergences",
            Component::Failures => "failures",
            Component::InfiniteTraces => "infinite-traces",
        })
    }
}

/// Finite evidence that an inclusion fails.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Witness {
    Trace(Word),
    Divergence(Word),
    Failure(Failure),
    Lasso(Lasso),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Trace(w) => write!(f, "trace {w}"),
            Witness::Divergence(w) => write!(f, "divergence {w}"),
            Witness::Failure(x) => write!(f, "failure {x}"),
            Witness::Lasso(l) => write!(f, "lasso {l}"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CheckStats {
    pub left_states: usize,
    pub right_states: usize,
    pub product_states: usize,
    pub elapsed: Duration,
}

/// Outcome of one refinement check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub kind: PreorderKind,
    pub holds: bool,
    pub component: Option<Component>,
    pub witness: Option<Witness>,
    pub stats: CheckStats,
}

impl Verdict {
    /// `key: value` lines; `elapsed-us` is the only run-dependent field.
    pub fn report(&self) -> String {
        let mut lines = vec![
            format!("preorder: {}", self.kind),
            format!("holds: {}", self.holds),
        ];
        if let Some(c) = self.component {
            lines.push(format!("component: {c}"));
        }
        if let Some(w) = &self.witness {
            lines.push(format!("witness: {w}"));
        }
        lines.push(format!("left-states: {}", self.stats.left_states));
        lines.push(format!("right-states: {}", self.stats.right_states));
        lines.push(format!("product-states: {}", self.stats.product_states));
        lines.push(format!("elapsed-us: {}", self.stats.elapsed.as_micros()));
        lines.join("\n") + "\n"
    }
}

fn same_alphabet(p: &Lts, q: &Lts) -> Result<()> {
    if p.alphabet() == q.alphabet() {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch(format!("{} versus {}", p.alphabet(), q.alphabet())))
    }
}

/// Reachable pairs (state of the observed side, state of the observing side
/// or `None` once it has no matching trace).
fn product(observed: &DenotationAutomaton, observer: &DenotationAutomaton) -> Graph<(usize, Option<usize>)> {
    let k = observed.alphabet().len();
    explore((observed.initial(), Some(observer.initial())), |&(a, b)| {
        (0..k)
            .filter_map(|l| {
                let a2 = observed.step(a, l)?;
                Some((l, (a2, b.and_then(|b| observer.step(b, l)))))
            })
            .collect::<Vec<_>>()
    })
}

/// Decides `p ⊑ q` for the chosen preorder.
pub fn refines(p: &Lts, q: &Lts, kind: PreorderKind) -> Result<Verdict> {
    same_alphabet(p, q)?;
    let start = Instant::now();
    let mode = kind.flood_mode();
    let dp = denote(p, mode);
    let dq = denote(q, mode);
    let g = product(&dq, &dp);
    let word_to = |i: usize| dq.alphabet().decode(&g.path_to(i));
    let refuted = |component, witness| (Some(component), Some(witness));

    let (component, witness) = if kind == PreorderKind::Safety {
        match g.first_match(|_, &(_, b)| b.is_none()) {
            Some(i) => refuted(Component::Traces, Witness::Trace(word_to(i))),
            None => (None, None),
        }
    } else if let Some(i) = g.first_match(|_, &(a, b)| dq.state(a).divergent && !b.is_some_and(|b| dp.state(b).divergent)) {
        refuted(Component::Divergences, Witness::Divergence(word_to(i)))
    } else if let Some((i, x)) = (0..g.len()).find_map(|i| {
        let (a, b) = g.nodes[i];
        unmatched_refusal(&dq, a, b.map(|b| dp.state(b)))
            .map(|x| (i, x))
    }) {
        let refusal = dq.alphabet().decode_set(&x);
        refuted(Component::Failures, Witness::Failure(Failure::new(word_to(i), refusal)))
    } else {
        // Under every flooding mode the infinite traces are exactly the
        // infinite paths of the automaton (finite branching), which also
        // covers the extra words of mode d.
        match dq.infinite_language().counterexample_to_inclusion(&dp.infinite_language())? {
            Some(lasso) => refuted(Component::InfiniteTraces, Witness::Lasso(lasso)),
            None => (None, None),
        }
    };
    Ok(Verdict {
        kind,
        holds: witness.is_none(),
        component,
        witness,
        stats: CheckStats {
            left_states: dp.states().len(),
            right_states: dq.states().len(),
            product_states: g.len(),
            elapsed: start.elapsed(),
        },
    })
}

/// A maximal refusal of `observed` at `a` that the observing macro-state does
/// not have.
fn unmatched_refusal(
    observed: &DenotationAutomaton,
    a: usize,
    observer: Option<&crate::denotation::MacroState>,
) -> Option<FixedBitSet> {
    let m = observed.state(a);
    let refused_by_observer = |x: &FixedBitSet| observer.is_some_and(|o| o.refuses(x));
    if m.full_refusal {
        let all = observed.alphabet().full_set();
        return (!refused_by_observer(&all)).then_some(all);
    }
    m.refusals.iter().find(|x| !refused_by_observer(x)).cloned()
}

/// Both directions of a refinement check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equivalence {
    pub forward: Verdict,
    pub backward: Verdict,
}

impl Equivalence {
    pub fn holds(&self) -> bool {
        self.forward.holds && self.backward.holds
    }

    /// Witness of the first failing direction.
    pub fn witness(&self) -> Option<&Witness> {
        self.forward.witness.as_ref().or(self.backward.witness.as_ref())
    }
}

pub fn equivalent(p: &Lts, q: &Lts, kind: PreorderKind) -> Result<Equivalence> {
    Ok(Equivalence {
        forward: refines(p, q, kind)?,
        backward: refines(q, p, kind)?,
    })
}

/// `p ⊑_d/d q`, the deadlock/divergence-trace precongruence, which is the
/// converse of the conditional-liveness preorder.
pub fn dd_preorder(p: &Lts, q: &Lts) -> Result<Verdict> {
    refines(q, p, PreorderKind::CondLiveness)
}

/// A deadlock or divergence trace of `p` that is neither for `q`, if any.
/// `dd_preorder(p, q)` implies that none exists.
pub fn dd_traces_included(p: &Lts, q: &Lts) -> Result<Option<Word>> {
    same_alphabet(p, q)?;
    let dp = denote(p, FloodMode::None);
    let dq = denote(q, FloodMode::None);
    let g = product(&dp, &dq);
    let dd = |m: &crate::denotation::MacroState| m.deadlock || m.divergent;
    Ok(g
        .first_match(|_, &(a, b)| dd(dp.state(a)) && !b.is_some_and(|b| dd(dq.state(b))))
        .map(|i| dp.alphabet().decode(&g.path_to(i))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::label::{label, word};

    #[test]
    fn cond_pair_is_liveness_equivalent() {
        let e = equivalent(&cond_pair_left(), &cond_pair_right(), PreorderKind::Liveness).unwrap();
        assert!(e.holds(), "{:?}", e.witness());
    }

    #[test]
    fn cond_pair_is_separated_by_conditional_liveness() {
        let v = refines(&cond_pair_left(), &cond_pair_right(), PreorderKind::CondLiveness).unwrap();
        assert!(!v.holds);
        assert_eq!(v.component, Some(Component::Failures));
        assert_eq!(
            v.witness,
            Some(Witness::Failure(Failure::new(word("c"), [label("c"), label("g")])))
        );
        let back = refines(&cond_pair_right(), &cond_pair_left(), PreorderKind::CondLiveness).unwrap();
        assert_eq!(
            back.witness,
            Some(Witness::Failure(Failure::new(word("c g"), [label("c"), label("g")])))
        );
    }

    #[test]
    fn refusal_pair_pair_is_liveness_inequivalent() {
        let v = refines(&refusal_pair_left(), &refusal_pair_right(), PreorderKind::Liveness).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness, Some(Witness::Failure(Failure::new(word("a"), [label("a")]))));
        assert!(refines(&refusal_pair_right(), &refusal_pair_left(), PreorderKind::Liveness).unwrap().holds);
    }

    #[test]
    fn reflexive_on_fixtures() {
        for p in [cond_pair_left(), cond_pair_right(), refusal_pair_left(), refusal_pair_right()] {
            for kind in PreorderKind::ALL {
                assert!(refines(&p, &p, kind).unwrap().holds);
            }
        }
    }

    #[test]
    fn safety_reports_shortest_missing_trace() {
        let v = refines(&cond_pair_right(), &cond_pair_left(), PreorderKind::Safety).unwrap();
        assert_eq!(v.witness, Some(Witness::Trace(word("c g"))));
        assert!(refines(&cond_pair_left(), &cond_pair_right(), PreorderKind::Safety).unwrap().holds);
    }

    #[test]
    fn dd_corollary_on_cond_pair() {
        let (l, r) = (cond_pair_left(), cond_pair_right());
        assert_eq!(
            dd_preorder(&r, &l).unwrap().holds,
            refines(&l, &r, PreorderKind::CondLiveness).unwrap().holds
        );
        // R1 deadlocks after c, L1 only after c g
        assert_eq!(dd_traces_included(&r, &l).unwrap(), Some(word("c")));
        assert_eq!(dd_traces_included(&l, &r).unwrap(), Some(word("c g")));
        assert_eq!(dd_traces_included(&l, &l).unwrap(), None);
    }

    #[test]
    fn divergence_witness_under_lt() {
        let spin = Lts::builder(1).silent(0, 0).alphabet(&["a"]).build().unwrap();
        let stop = Lts::builder(1).alphabet(&["a"]).build().unwrap();
        let v = refines(&stop, &spin, PreorderKind::Lt).unwrap();
        assert_eq!(v.witness, Some(Witness::Divergence(Word::empty())));
        assert!(v.report().contains("component: divergences"));
    }

    #[test]
    fn mismatched_alphabets_are_rejected() {
        assert!(refines(&cond_pair_left(), &refusal_pair_left(), PreorderKind::Safety).is_err());
    }

    #[test]
    fn preorder_names_round_trip() {
        for k in PreorderKind::ALL {
            assert_eq!(k.name().parse::<PreorderKind>().unwrap(), k);
        }
        assert!("bogus".parse::<PreorderKind>().is_err());
    }
}
