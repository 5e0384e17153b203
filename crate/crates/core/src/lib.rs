//! Refinement checking for finite labelled transition systems.

pub mod automata;
pub mod constructions;
pub mod denotation;
pub mod error;
pub mod fixtures;
pub mod formats;
pub mod label;
pub mod lts;
pub mod operators;
pub mod preorders;
pub mod properties;
mod search;

pub use automata::{Lasso, OmegaAcceptance, OmegaDfa, WordDfa};
pub use denotation::{denote, DenotationAutomaton, Failure, FloodMode, MacroState};
pub use error::{Error, Result};
pub use label::{label, word, Action, ActionLabel, Alphabet, Word, SILENT_TOKEN};
pub use lts::{BoundedSemantics, Lts, LtsBuilder, StateClass, StateId, Transition};
pub use operators::{hide, par, rename, state_op, InterfaceSpec, RenamingMap, RuleKey, RuleOutput};
pub use preorders::{dd_preorder, dd_traces_included, equivalent, refines, CheckStats, Component, Equivalence, PreorderKind, Verdict, Witness};
pub use properties::{may_reach, respects_check, satisfies, PropertyClass, PropertySpec, RespectReport, Satisfaction, Violation, WordSet};
pub use constructions::{cond_history_state_operator, deterministic_tester, history_state_operator, lasso_tester, liveness_distinguishing_tester, safety_reduction_context, FreshLabels, Gadget, SafetyContext, TesterSpec};
