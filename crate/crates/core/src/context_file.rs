//! Plain-text ring contexts.
//!
//! ```text
//! # comment
//! n = 5
//! rel_a = -1
//! rel_b = -1/3
//! degree_s = 18
//! gen_names = L H
//! let K = -2*L - H
//! ```
//!
//! The five fields are required and appear in this order in canonical output.
//! `let` lines are evaluated in order, each seeing the generators and every
//! earlier binding.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use thiserror::Error;

use crate::chow::{ChowError, RingCtx};
use crate::exact::{fmt_rat, parse_rat};
use crate::expr::{evaluate, generator_bindings, parse_str, Bindings, Expr, ExprError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContextError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing field {0}")]
    Missing(&'static str),
    #[error("line {line}: {source}")]
    Expr { line: usize, source: ExprError },
    #[error("let {name}: {source}")]
    Binding { name: String, source: ExprError },
    #[error(transparent)]
    Ring(#[from] ChowError),
}

const FIELDS: [&str; 5] = ["n", "rel_a", "rel_b", "degree_s", "gen_names"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextFile {
    pub ctx: Arc<RingCtx>,
    /// `let` bindings in file order.
    pub lets: Vec<(String, Expr)>,
}

impl ContextFile {
    pub fn new(ctx: Arc<RingCtx>) -> Self {
        Self { ctx, lets: Vec::new() }
    }

    pub fn load(path: &Path) -> Result<Self, ContextError> {
        let text = std::fs::read_to_string(path).map_err(|e| ContextError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ContextError> {
        let mut n = None;
        let mut rel_a = None;
        let mut rel_b = None;
        let mut degree_s = None;
        let mut names: Option<(String, String)> = None;
        let mut lets = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let s = raw.trim();
            if s.is_empty() || s.starts_with('#') {
                continue;
            }
            let syntax = |message: String| ContextError::Syntax { line, message };
            let (key, value) = s
                .split_once('=')
                .ok_or_else(|| syntax("expected `name = value`".into()))?;
            let (key, value) = (key.trim(), value.trim());
            if let Some(name) = key.strip_prefix("let ") {
                let name = name.trim();
                if !is_identifier(name) {
                    return Err(syntax(format!("bad binding name {name:?}")));
                }
                let e = parse_str(value).map_err(|source| ContextError::Expr { line, source })?;
                lets.push((name.to_string(), e));
                continue;
            }
            let rat = |v: &str| parse_rat(v).map_err(|e| syntax(format!("{key}: {e}")));
            match key {
                "n" => n = Some(value.parse::<u32>().map_err(|e| syntax(format!("n: {e}")))?),
                "rel_a" => rel_a = Some(rat(value)?),
                "rel_b" => rel_b = Some(rat(value)?),
                "degree_s" => degree_s = Some(rat(value)?),
                "gen_names" => {
                    let parts: Vec<&str> = value.split_whitespace().collect();
                    match parts.as_slice() {
                        [a, b] if is_identifier(a) && is_identifier(b) && a != b => {
                            names = Some((a.to_string(), b.to_string()))
                        }
                        _ => return Err(syntax("gen_names needs two distinct identifiers".into())),
                    }
                }
                other => return Err(syntax(format!("unknown field {other:?}"))),
            }
        }
        let n = n.ok_or(ContextError::Missing(FIELDS[0]))?;
        let rel_a = rel_a.ok_or(ContextError::Missing(FIELDS[1]))?;
        let rel_b = rel_b.ok_or(ContextError::Missing(FIELDS[2]))?;
        let degree_s = degree_s.ok_or(ContextError::Missing(FIELDS[3]))?;
        let (a, b) = names.ok_or(ContextError::Missing(FIELDS[4]))?;
        let ctx = RingCtx::new(n, (&a, &b), rel_a, rel_b, degree_s)?;
        let file = Self { ctx, lets };
        file.bindings()?;
        Ok(file)
    }

    /// Generators plus every `let` binding, evaluated in order.
    pub fn bindings(&self) -> Result<Bindings, ContextError> {
        let mut b = generator_bindings(&self.ctx);
        for (name, e) in &self.lets {
            let v = evaluate(e, &self.ctx, &b).map_err(|source| ContextError::Binding {
                name: name.clone(),
                source,
            })?;
            b.insert(name.clone(), v.value);
        }
        Ok(b)
    }

    /// Canonical text: fields in fixed order, then `let` lines.
    pub fn to_text(&self) -> String {
        let c = &self.ctx;
        let (a, b) = c.gen_names();
        let mut out = String::new();
        let _ = writeln!(out, "n = {}", c.n());
        let _ = writeln!(out, "rel_a = {}", fmt_rat(c.rel_a()));
        let _ = writeln!(out, "rel_b = {}", fmt_rat(c.rel_b()));
        let _ = writeln!(out, "degree_s = {}", fmt_rat(c.degree_s()));
        let _ = writeln!(out, "gen_names = {a} {b}");
        for (name, e) in &self.lets {
            let _ = writeln!(out, "let {name} = {e}");
        }
        out
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '\'')
}
