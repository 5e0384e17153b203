//! Process expressions over named LTSs, interfaces and renamings.
//!
//! ```text
//! expr ::= NAME
//!        | "(" expr ")"
//!        | expr "|[" labels "]|" expr
//!        | "hide" "{" labels "}" "in" expr
//!        | "state" NAME "@" STATE "in" expr
//!        | "rename" NAME "in" expr
//! ```
//!
//! Parallel composition is left-associative and binds tighter than the
//! prefix forms, whose body extends as far right as possible. Labels in a
//! list are separated by blanks or commas. Both operands of a parallel
//! composition are lifted to the union of their alphabets first.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::label::ActionLabel;
use crate::lts::Lts;
use crate::operators::{hide, par, rename, state_op, InterfaceSpec, RenamingMap};

use super::{label_at, lex, Token, TokenKind};

/// Source position of a token, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl Position {
    fn error(self, msg: impl Into<String>) -> Error {
        Error::parse(self.line, self.column, msg)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProcessExpr {
    Name {
        name: String,
        at: Position,
    },
    Par {
        left: Box<ProcessExpr>,
        sync: Vec<(ActionLabel, Position)>,
        right: Box<ProcessExpr>,
    },
    Hide {
        hidden: Vec<(ActionLabel, Position)>,
        body: Box<ProcessExpr>,
    },
    State {
        interface: String,
        interface_at: Position,
        start: String,
        start_at: Position,
        body: Box<ProcessExpr>,
    },
    Rename {
        renaming: String,
        at: Position,
        body: Box<ProcessExpr>,
    },
}

impl ProcessExpr {
    /// Names of referenced processes, in order of first occurrence.
    pub fn process_names(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_names(&mut out);
        let mut seen = BTreeSet::new();
        out.retain(|n| seen.insert(*n));
        out
    }

    fn collect_names<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            ProcessExpr::Name { name, .. } => out.push(name),
            ProcessExpr::Par { left, right, .. } => {
                left.collect_names(out);
                right.collect_names(out);
            }
            ProcessExpr::Hide { body, .. } | ProcessExpr::State { body, .. } | ProcessExpr::Rename { body, .. } => {
                body.collect_names(out)
            }
        }
    }
}

fn write_labels(f: &mut fmt::Formatter<'_>, labels: &[(ActionLabel, Position)]) -> fmt::Result {
    for (i, (l, _)) in labels.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{l}")?;
    }
    Ok(())
}

/// Fully parenthesised form; parses back to an equal tree up to positions.
impl fmt::Display for ProcessExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProcessExpr::Name { name, .. } => f.write_str(name),
            ProcessExpr::Par { left, sync, right } => {
                write!(f, "({left} |[ ")?;
                write_labels(f, sync)?;
                write!(f, " ]| {right})")
            }
            ProcessExpr::Hide { hidden, body } => {
                f.write_str("(hide { ")?;
                write_labels(f, hidden)?;
                write!(f, " }} in {body})")
            }
            ProcessExpr::State { interface, start, body, .. } => write!(f, "(state {interface} @ {start} in {body})"),
            ProcessExpr::Rename { renaming, body, .. } => write!(f, "(rename {renaming} in {body})"),
        }
    }
}

const KEYWORDS: [&str; 4] = ["hide", "in", "state", "rename"];

struct Parser {
    tokens: Vec<Token>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at)
    }

    fn here(&self) -> Position {
        match self.peek().or(self.tokens.last()) {
            Some(t) => Position {
                line: t.line,
                column: t.column,
            },
            None => Position { line: 1, column: 1 },
        }
    }

    fn at_symbol(&self, sym: &str) -> bool {
        matches!(self.peek(), Some(Token { kind: TokenKind::Symbol(s), .. }) if *s == sym)
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Token { kind: TokenKind::Word(w), .. }) if w == kw)
    }

    fn expect_symbol(&mut self, sym: &str) -> Result<()> {
        if self.at_symbol(sym) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.here().error(format!("expected `{sym}`")))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<()> {
        if self.at_keyword(kw) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.here().error(format!("expected `{kw}`")))
        }
    }

    fn name(&mut self) -> Result<(String, Position)> {
        let at = self.here();
        match self.peek() {
            Some(Token { kind: TokenKind::Word(w), .. }) if !KEYWORDS.contains(&w.as_str()) => {
                let w = w.clone();
                self.at += 1;
                Ok((w, at))
            }
            _ => Err(at.error("expected a name")),
        }
    }

    /// Labels up to the closing symbol, which is consumed.
    fn labels(&mut self, close: &str) -> Result<Vec<(ActionLabel, Position)>> {
        let mut out = Vec::new();
        loop {
            let at = self.here();
            match self.peek().map(|t| t.kind.clone()) {
                Some(TokenKind::Symbol(s)) if s == close => {
                    self.at += 1;
                    return Ok(out);
                }
                Some(TokenKind::Symbol(",")) => self.at += 1,
                Some(TokenKind::Word(w)) => {
                    out.push((label_at(&w, at.line, at.column)?, at));
                    self.at += 1;
                }
                _ => return Err(at.error(format!("expected a label or `{close}`"))),
            }
        }
    }

    fn expr(&mut self) -> Result<ProcessExpr> {
        let mut left = self.unary()?;
        while self.at_symbol("|[") {
            self.at += 1;
            let sync = self.labels("]|")?;
            let right = self.unary()?;
            left = ProcessExpr::Par {
                left: Box::new(left),
                sync,
                right: Box::new(right),
            };
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<ProcessExpr> {
        if self.at_symbol("(") {
            self.at += 1;
            let e = self.expr()?;
            self.expect_symbol(")")?;
            return Ok(e);
        }
        if self.at_keyword("hide") {
            self.at += 1;
            self.expect_symbol("{")?;
            let hidden = self.labels("}")?;
            self.expect_keyword("in")?;
            let body = Box::new(self.expr()?);
            return Ok(ProcessExpr::Hide { hidden, body });
        }
        if self.at_keyword("state") {
            self.at += 1;
            let (interface, interface_at) = self.name()?;
            self.expect_symbol("@")?;
            let (start, start_at) = self.name()?;
            self.expect_keyword("in")?;
            let body = Box::new(self.expr()?);
            return Ok(ProcessExpr::State {
                interface,
                interface_at,
                start,
                start_at,
                body,
            });
        }
        if self.at_keyword("rename") {
            self.at += 1;
            let (renaming, at) = self.name()?;
            self.expect_keyword("in")?;
            let body = Box::new(self.expr()?);
            return Ok(ProcessExpr::Rename { renaming, at, body });
        }
        let (name, at) = self.name()?;
        Ok(ProcessExpr::Name { name, at })
    }
}

pub fn parse_expr(text: &str) -> Result<ProcessExpr> {
    let mut p = Parser {
        tokens: lex(text, &["|[", "]|", "(", ")", "{", "}", ",", "@"], false),
        at: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.here().error("unexpected text after the expression"));
    }
    Ok(e)
}

/// Resolves names used in expressions. `Ok(None)` means the name is unknown.
pub trait Environment {
    fn process(&self, name: &str) -> Result<Option<Lts>>;
    fn interface(&self, name: &str) -> Result<Option<InterfaceSpec>>;
    fn renaming(&self, name: &str) -> Result<Option<Vec<(ActionLabel, ActionLabel)>>>;
}

/// An in-memory environment.
#[derive(Clone, Debug, Default)]
pub struct MapEnvironment {
    pub processes: BTreeMap<String, Lts>,
    pub interfaces: BTreeMap<String, InterfaceSpec>,
    pub renamings: BTreeMap<String, Vec<(ActionLabel, ActionLabel)>>,
}

impl MapEnvironment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_process(mut self, name: &str, p: Lts) -> Self {
        self.processes.insert(name.to_string(), p);
        self
    }

    pub fn with_interface(mut self, name: &str, m: InterfaceSpec) -> Self {
        self.interfaces.insert(name.to_string(), m);
        self
    }

    pub fn with_renaming(mut self, name: &str, pairs: Vec<(ActionLabel, ActionLabel)>) -> Self {
        self.renamings.insert(name.to_string(), pairs);
        self
    }
}

impl Environment for MapEnvironment {
    fn process(&self, name: &str) -> Result<Option<Lts>> {
        Ok(self.processes.get(name).cloned())
    }

    fn interface(&self, name: &str) -> Result<Option<InterfaceSpec>> {
        Ok(self.interfaces.get(name).cloned())
    }

    fn renaming(&self, name: &str) -> Result<Option<Vec<(ActionLabel, ActionLabel)>>> {
        Ok(self.renamings.get(name).cloned())
    }
}

fn check_labels(labels: &[(ActionLabel, Position)], p: &Lts) -> Result<BTreeSet<ActionLabel>> {
    for (l, at) in labels {
        if !p.alphabet().contains(l) {
            return Err(at.error(format!("label `{l}` is not in the operand's alphabet")));
        }
    }
    Ok(labels.iter().map(|(l, _)| l.clone()).collect())
}

pub fn eval_expr(e: &ProcessExpr, env: &dyn Environment) -> Result<Lts> {
    match e {
        ProcessExpr::Name { name, at } => env
            .process(name)?
            .ok_or_else(|| at.error(format!("unknown process `{name}`"))),
        ProcessExpr::Par { left, sync, right } => {
            let p = eval_expr(left, env)?;
            let q = eval_expr(right, env)?;
            let union = p.alphabet().union(q.alphabet());
            let (p, q) = (p.with_alphabet(&union)?, q.with_alphabet(&union)?);
            let sync = check_labels(sync, &p)?;
            par(&p, &sync, &q)
        }
        ProcessExpr::Hide { hidden, body } => {
            let p = eval_expr(body, env)?;
            let hidden = check_labels(hidden, &p)?;
            hide(&p, &hidden)
        }
        ProcessExpr::State {
            interface,
            interface_at,
            start,
            start_at,
            body,
        } => {
            let m = env
                .interface(interface)?
                .ok_or_else(|| interface_at.error(format!("unknown interface `{interface}`")))?;
            let s = m.state_index(start).map_err(|e| start_at.error(e.to_string()))?;
            let p = eval_expr(body, env)?;
            state_op(&m, s, &p)
        }
        ProcessExpr::Rename { renaming, at, body } => {
            let pairs = env
                .renaming(renaming)?
                .ok_or_else(|| at.error(format!("unknown renaming `{renaming}`")))?;
            let p = eval_expr(body, env)?;
            let r = RenamingMap::new(p.alphabet(), &pairs).map_err(|e| at.error(e.to_string()))?;
            rename(&r, &p)
        }
    }
}
