//! Testers, contexts and history-recording state operators that turn failed
//! inclusions into property violations.

use std::collections::{BTreeMap, BTreeSet};

use crate::automata::Lasso;
use crate::error::{Error, Result};
use crate::label::{Action, ActionLabel, Alphabet, Word};
use crate::lts::{Lts, Transition};
use crate::operators::{hide, par, InterfaceSpec, RuleKey, RuleOutput};
use crate::preorders::{PreorderKind, Witness};
use crate::properties::{satisfies, PropertySpec, WordSet};

/// Words a deterministic tester must have as its complete traces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TesterSpec {
    words: BTreeSet<Word>,
}

impl TesterSpec {
    pub fn new(words: impl IntoIterator<Item = Word>) -> Result<Self> {
        let words: BTreeSet<Word> = words.into_iter().collect();
        if words.is_empty() {
            return Err(Error::InvalidTester("no complete traces given".into()));
        }
        for w in &words {
            if let Some(longer) = words.iter().find(|v| v.len() > w.len() && w.is_prefix_of(v)) {
                return Err(Error::InvalidTester(format!(
                    "`{w}` must be complete but is a proper prefix of `{longer}`"
                )));
            }
        }
        Ok(TesterSpec { words })
    }

    pub fn words(&self) -> &BTreeSet<Word> {
        &self.words
    }

    pub fn labels(&self) -> Alphabet {
        Alphabet::new(self.words.iter().flat_map(|w| w.iter().cloned()))
    }
}

/// The prefix tree of the words; leaves deadlock. Declared over the labels
/// the words use.
pub fn deterministic_tester(spec: &TesterSpec) -> Lts {
    let alphabet = spec.labels();
    let mut children: Vec<BTreeMap<ActionLabel, usize>> = vec![BTreeMap::new()];
    for w in &spec.words {
        let mut s = 0;
        for a in w.iter() {
            let next = children.len();
            s = *children[s].entry(a.clone()).or_insert(next);
            if s == next {
                children.push(BTreeMap::new());
            }
        }
    }
    let transitions: Vec<Transition> = children
        .iter()
        .enumerate()
        .flat_map(|(s, out)| {
            out.iter().map(move |(a, &t)| Transition {
                source: s,
                action: Action::Visible(a.clone()),
                target: t,
            })
        })
        .collect();
    Lts::new(children.len(), 0, alphabet, transitions).expect("trie is well-formed")
}

fn ensure_fresh(alphabet: &Alphabet, labels: &[&ActionLabel]) -> Result<()> {
    for (i, l) in labels.iter().enumerate() {
        if alphabet.contains(l) || labels[..i].contains(l) {
            return Err(Error::FreshLabelClash((*l).clone()));
        }
    }
    Ok(())
}

/// Interface of a state operator that records the history up to `horizon`
/// actions. Internal state names are `h<index>`, plus `overflow` for longer
/// histories; `h0` is the empty history.
struct History {
    words: Vec<Word>,
    index: BTreeMap<Word, usize>,
}

impl History {
    fn new(alphabet: &Alphabet, horizon: usize) -> Self {
        let mut words = vec![Word::empty()];
        let mut frontier = 0;
        for _ in 0..horizon {
            let end = words.len();
            for i in frontier..end {
                for a in alphabet {
                    let w = words[i].extended(a.clone());
                    words.push(w);
                }
            }
            frontier = end;
        }
        let index = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        History { words, index }
    }

    fn overflow(&self) -> usize {
        self.words.len()
    }

    /// Interface emitting `emit(σa)` for every recorded history σ; histories
    /// past the horizon emit `neutral`.
    fn interface(&self, alphabet: &Alphabet, neutral: &ActionLabel, emit: impl Fn(&Word) -> ActionLabel) -> InterfaceSpec {
        let mut names: Vec<String> = (0..self.words.len()).map(|i| format!("h{i}")).collect();
        names.push("overflow".into());
        let mut m = InterfaceSpec::new(names).expect("distinct names");
        let overflow = self.overflow();
        for (i, w) in self.words.iter().enumerate() {
            for a in alphabet {
                let next = w.extended(a.clone());
                let effect = self.index.get(&next).copied().unwrap_or(overflow);
                let out = RuleOutput {
                    action: Some(emit(&next)),
                    effect: Some(effect),
                };
                m.add_rule(
                    RuleKey {
                        state: Some(i),
                        label: Some(a.clone()),
                    },
                    out,
                )
                .expect("one rule per pair");
            }
        }
        m.add_rule(
            RuleKey {
                state: Some(overflow),
                label: None,
            },
            RuleOutput {
                action: Some(neutral.clone()),
                effect: None,
            },
        )
        .expect("one rule per pair");
        m
    }
}

fn check_horizon<'a>(words: impl IntoIterator<Item = &'a Word>, horizon: usize) -> Result<()> {
    match words.into_iter().find(|w| w.len() > horizon) {
        Some(w) => Err(Error::HorizonExceeded {
            length: w.len(),
            horizon,
        }),
        None => Ok(()),
    }
}

/// State operator that emits `bad` exactly when the history extended by the
/// current action lies in `bad_words`, and `neutral` otherwise. Returns the
/// interface and its initial internal state.
pub fn history_state_operator(
    alphabet: &Alphabet,
    bad_words: &BTreeSet<Word>,
    bad: &ActionLabel,
    neutral: &ActionLabel,
    horizon: usize,
) -> Result<(InterfaceSpec, usize)> {
    ensure_fresh(alphabet, &[bad, neutral])?;
    check_horizon(bad_words, horizon)?;
    if bad_words.contains(&Word::empty()) {
        return Err(Error::TrivialProperty("the empty word is bad, so every process violates it".into()));
    }
    let h = History::new(alphabet, horizon);
    let m = h.interface(alphabet, neutral, |w| {
        if bad_words.contains(w) {
            bad.clone()
        } else {
            neutral.clone()
        }
    });
    Ok((m, 0))
}

/// State operator reducing `liveness_C(G)` to the canonical conditional
/// liveness property on `cond` and `good`. `C` is first replaced by `C ∖ G`.
pub fn cond_history_state_operator(
    alphabet: &Alphabet,
    condition: &BTreeSet<Word>,
    goal: &BTreeSet<Word>,
    labels: (&ActionLabel, &ActionLabel, &ActionLabel),
    horizon: usize,
) -> Result<(InterfaceSpec, usize)> {
    let (cond, good, neutral) = labels;
    ensure_fresh(alphabet, &[cond, good, neutral])?;
    check_horizon(condition.iter().chain(goal), horizon)?;
    let empty_goal = goal.contains(&Word::empty());
    let condition: BTreeSet<Word> = if empty_goal {
        // every complete trace has the empty prefix in G
        BTreeSet::new()
    } else {
        condition.difference(goal).cloned().collect()
    };
    if condition.contains(&Word::empty()) {
        return Err(Error::TrivialProperty(
            "the empty word satisfies the condition but cannot be marked by an action".into(),
        ));
    }
    let h = History::new(alphabet, horizon);
    let m = h.interface(alphabet, neutral, |w| {
        if condition.contains(w) {
            cond.clone()
        } else if !empty_goal && goal.contains(w) {
            good.clone()
        } else {
            neutral.clone()
        }
    });
    Ok((m, 0))
}

fn chain(w: &Word) -> Lts {
    deterministic_tester(&TesterSpec::new([w.clone()]).expect("single word"))
}

/// The context `(hide(I, ·) ||_∅ r_σ) ||_A r_σa` with `I = A ∖ {a}`.
#[derive(Clone, Debug)]
pub struct SafetyContext {
    pub alphabet: Alphabet,
    pub hidden: BTreeSet<ActionLabel>,
    /// Deterministic tester whose only complete trace is σ.
    pub r_sigma: Lts,
    /// Deterministic tester whose only complete trace is σa.
    pub r_sigma_a: Lts,
}

pub fn safety_reduction_context(alphabet: &Alphabet, sigma: &Word, a: &ActionLabel) -> Result<SafetyContext> {
    let sigma_a = sigma.extended(a.clone());
    alphabet.encode(&sigma_a)?;
    Ok(SafetyContext {
        alphabet: alphabet.clone(),
        hidden: alphabet.iter().filter(|l| *l != a).cloned().collect(),
        r_sigma: chain(sigma).with_alphabet(alphabet)?,
        r_sigma_a: chain(&sigma_a).with_alphabet(alphabet)?,
    })
}

impl SafetyContext {
    /// The context filled with `p`. Its traces are prefixes of σa, and σa is
    /// among them iff `p` can perform `a`.
    pub fn apply(&self, p: &Lts) -> Result<Lts> {
        let p = p.with_alphabet(&self.alphabet)?;
        let left = par(&hide(&p, &self.hidden)?, &BTreeSet::new(), &self.r_sigma)?;
        let all: BTreeSet<ActionLabel> = self.alphabet.iter().cloned().collect();
        par(&left, &all, &self.r_sigma_a)
    }
}

/// The two actions the processes under test never perform.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreshLabels {
    pub cond: ActionLabel,
    pub good: ActionLabel,
}

/// A tester, the synchronisation set it is composed with, and the property
/// that separates the compositions.
#[derive(Clone, Debug)]
pub struct Gadget {
    pub tester: Lts,
    pub sync: BTreeSet<ActionLabel>,
    pub property: PropertySpec,
}

impl Gadget {
    /// `p ||_sync tester`, over the tester's alphabet.
    pub fn apply(&self, p: &Lts) -> Result<Lts> {
        let p = p.with_alphabet(self.tester.alphabet())?;
        par(&p, &self.sync, &self.tester)
    }

    /// The refined process satisfies the property in context and the
    /// refining one does not.
    pub fn separates(&self, refined: &Lts, refining: &Lts) -> Result<bool> {
        Ok(satisfies(&self.apply(refined)?, &self.property)?.holds
            && !satisfies(&self.apply(refining)?, &self.property)?.holds)
    }
}

/// Builds the distinguishing tester for a refutation of `p ⊑ q` found by
/// [`crate::preorders::refines`] with a divergence, failure or lasso witness.
///
/// `alphabet` is the processes' alphabet; the fresh labels must lie outside
/// it. For a lasso under the conditional preorders the condition action is
/// inserted after the lasso's prefix, which must extend past every divergence
/// of `p` along the word; see [`Lasso::unrolled`].
pub fn liveness_distinguishing_tester(
    kind: PreorderKind,
    witness: &Witness,
    alphabet: &Alphabet,
    fresh: &FreshLabels,
) -> Result<Gadget> {
    let FreshLabels { cond: c, good: g } = fresh;
    ensure_fresh(alphabet, &[c, g])?;
    let full = alphabet.union(&Alphabet::new([c.clone(), g.clone()]));
    let all_but = |skip: &[&ActionLabel]| -> BTreeSet<ActionLabel> {
        full.iter().filter(|l| !skip.contains(l)).cloned().collect()
    };
    let trie = |words: BTreeSet<Word>| -> Result<Lts> { deterministic_tester(&TesterSpec::new(words)?).with_alphabet(&full) };
    let proper_prefixes = |sigma: &Word| -> Vec<Word> { sigma.prefixes().take(sigma.len()).collect() };

    let (tester, sync, property) = match (kind, witness) {
        (PreorderKind::Liveness, Witness::Divergence(sigma)) => (
            trie(sigma.prefixes().map(|r| r.extended(g.clone())).collect())?,
            all_but(&[g]),
            PropertySpec::canonical_liveness(g.clone()),
        ),
        (PreorderKind::Liveness, Witness::Failure(f)) => {
            // With nothing refused, `c` stands in: every process refuses it.
            let refusal = if f.refusal.is_empty() { BTreeSet::from([c.clone()]) } else { f.refusal.clone() };
            let words: BTreeSet<Word> = proper_prefixes(&f.trace)
                .into_iter()
                .map(|r| r.extended(g.clone()))
                .chain(refusal.iter().map(|a| f.trace.extended(a.clone())))
                .collect();
            (
                trie(words.clone())?,
                all_but(&[g]),
                PropertySpec::Liveness(WordSet::Finite(words)),
            )
        }
        (PreorderKind::Liveness, Witness::Lasso(l)) => (
            lasso_tester(l, None, g, &full)?,
            all_but(&[g]),
            PropertySpec::canonical_liveness(g.clone()),
        ),
        (PreorderKind::CondLiveness | PreorderKind::Lt, Witness::Divergence(sigma)) => (
            trie(BTreeSet::from([sigma.extended(c.clone()).extended(g.clone())]))?,
            all_but(&[c, g]),
            PropertySpec::canonical_cond_liveness(c.clone(), g.clone()),
        ),
        (PreorderKind::CondLiveness | PreorderKind::Lt, Witness::Failure(f)) => {
            let refusal = if f.refusal.is_empty() { BTreeSet::from([g.clone()]) } else { f.refusal.clone() };
            let after_c = f.trace.extended(c.clone());
            let words: BTreeSet<Word> = refusal.iter().map(|a| after_c.extended(a.clone())).collect();
            (
                trie(words.clone())?,
                all_but(&[c]),
                PropertySpec::CondLiveness {
                    condition: WordSet::Containing(c.clone()),
                    goal: WordSet::Finite(words),
                },
            )
        }
        (PreorderKind::CondLiveness | PreorderKind::Lt, Witness::Lasso(l)) => (
            lasso_tester(l, Some(c), g, &full)?,
            all_but(&[c, g]),
            PropertySpec::canonical_cond_liveness(c.clone(), g.clone()),
        ),
        (kind, w) => {
            return Err(Error::UnsupportedWitness(format!("no {kind} tester for witness `{w}`")));
        }
    };
    Ok(Gadget {
        tester,
        sync,
        property,
    })
}

/// Deterministic tester that follows `lasso` forever, offering `good` at
/// every position. With `cond`, it first follows the lasso's prefix without
/// exits, then performs `cond`, and only then starts offering `good`.
pub fn lasso_tester(lasso: &Lasso, cond: Option<&ActionLabel>, good: &ActionLabel, alphabet: &Alphabet) -> Result<Lts> {
    if lasso.cycle.is_empty() {
        return Err(Error::UnsupportedWitness("lasso with an empty cycle".into()));
    }
    let mut edges: Vec<(usize, ActionLabel, usize)> = Vec::new();
    // state 0 is the start, state 1 the deadlock after `good`
    let mut count = 2;
    let mut at = 0;
    let mut step = |edges: &mut Vec<_>, at: usize, a: &ActionLabel, target: Option<usize>| {
        let t = target.unwrap_or_else(|| {
            count += 1;
            count - 1
        });
        edges.push((at, a.clone(), t));
        t
    };
    let mut offering: Vec<usize> = Vec::new();
    let tail: &[ActionLabel] = match cond {
        Some(c) => {
            for a in lasso.prefix.iter() {
                at = step(&mut edges, at, a, None);
            }
            at = step(&mut edges, at, c, None);
            &[]
        }
        None => lasso.prefix.labels(),
    };
    for a in tail {
        offering.push(at);
        at = step(&mut edges, at, a, None);
    }
    let cycle_start = at;
    let v = lasso.cycle.labels();
    for (i, a) in v.iter().enumerate() {
        offering.push(at);
        let target = (i + 1 == v.len()).then_some(cycle_start);
        at = step(&mut edges, at, a, target);
    }
    for s in offering {
        edges.push((s, good.clone(), 1));
    }
    let transitions = edges.into_iter().map(|(source, a, target)| Transition {
        source,
        action: Action::Visible(a),
        target,
    });
    let lts = Lts::new(count, 0, alphabet.clone(), transitions)?;
    Ok(lts.restrict_reachable())
}
