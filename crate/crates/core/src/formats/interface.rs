//! Interface specifications of state operators.
//!
//! ```text
//! states: s0 s1
//! s0, a -> a1, s1
//! s1, a -> a2, *
//! ```
//!
//! A rule `s, a -> b, t` sets the emitted label and the next internal state.
//! On the left `*` matches any state or label; on the right it keeps the
//! incoming label or the current state. Unmatched pairs keep both.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::label::ActionLabel;
use crate::operators::{InterfaceSpec, RuleKey, RuleOutput};

use super::{label_at, significant_lines, Line};

pub fn parse_interface(text: &str) -> Result<InterfaceSpec> {
    let mut lines = significant_lines(text);
    let first = lines
        .next()
        .ok_or_else(|| Error::parse(1, 1, "empty interface: expected `states: ...`"))?;
    let names = first
        .text
        .strip_prefix("states:")
        .ok_or_else(|| Error::parse(first.number, first.column, "expected `states:` first"))?;
    let names: Vec<String> = names.split_whitespace().map(str::to_string).collect();
    let mut m = InterfaceSpec::new(names).map_err(|e| Error::parse(first.number, first.column, e.to_string()))?;
    for line in lines {
        let (key, out) = parse_rule(&m, &line)?;
        m.add_rule(key, out)
            .map_err(|e| Error::parse(line.number, line.column, e.to_string()))?;
    }
    Ok(m)
}

fn parse_rule<'a>(m: &InterfaceSpec, line: &Line<'a>) -> Result<(RuleKey, RuleOutput)> {
    let t = line.text;
    let col = |s: &str| line.column + (s.as_ptr() as usize - t.as_ptr() as usize);
    let err = |s: &str, msg: String| Error::parse(line.number, col(s), msg);
    let (lhs, rhs) = t
        .split_once("->")
        .ok_or_else(|| err(t, "expected `state, label -> label, state`".into()))?;
    let pair = |side: &'a str| -> Result<(&'a str, &'a str)> {
        let (a, b) = side
            .split_once(',')
            .ok_or_else(|| err(side.trim(), "expected two comma-separated fields".into()))?;
        Ok((a.trim(), b.trim()))
    };
    let (state, label) = pair(lhs)?;
    let (action, effect) = pair(rhs)?;
    let state_ref = |name: &str| -> Result<Option<usize>> {
        if name == "*" {
            return Ok(None);
        }
        m.state_index(name).map(Some).map_err(|e| err(name, e.to_string()))
    };
    let label_ref = |name: &str| -> Result<Option<ActionLabel>> {
        if name == "*" {
            return Ok(None);
        }
        label_at(name, line.number, col(name)).map(Some)
    };
    Ok((
        RuleKey {
            state: state_ref(state)?,
            label: label_ref(label)?,
        },
        RuleOutput {
            action: label_ref(action)?,
            effect: state_ref(effect)?,
        },
    ))
}

pub fn write_interface(m: &InterfaceSpec) -> String {
    let mut out = format!("states: {}\n", m.states().join(" "));
    for (key, rule) in m.rules() {
        let state = key.state.map_or("*", |s| m.state_name(s));
        let label = key.label.as_ref().map_or("*", ActionLabel::as_str);
        let action = rule.action.as_ref().map_or("*", ActionLabel::as_str);
        let effect = rule.effect.map_or("*", |s| m.state_name(s));
        let _ = writeln!(out, "{state}, {label} -> {action}, {effect}");
    }
    out
}
