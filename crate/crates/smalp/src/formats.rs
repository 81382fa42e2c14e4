//! Text formats next to `.smalp` programs.
//!
//! Cases, one per line:
//!
//! ```text
//! popularity(sun) -> 0.60.
//! p(X) -> 0.54 ; {X/a}.
//! ```
//!
//! Domains, one declaration per statement:
//!
//! ```text
//! #s in {luka, prod, godel}.
//! #v in {0.3, 0.5, 0.7}.
//! ```
//!
//! `%` starts a comment in both.

use smalp_core::syntax::parse_substitution;
use smalp_core::{parse_goal, TestCase, TruthValue};

use crate::error::FormatError;

fn strip_comment(line: &str) -> &str {
    line.split_once('%').map_or(line, |(code, _)| code)
}

pub fn parse_cases(text: &str) -> Result<Vec<TestCase>, FormatError> {
    let mut cases = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let line = line
            .strip_suffix('.')
            .ok_or_else(|| FormatError::new(n, "missing final `.`"))?;
        let (goal, rest) = line
            .split_once("->")
            .ok_or_else(|| FormatError::new(n, "expected `goal -> value`"))?;
        let (value, subst) = match rest.split_once(';') {
            Some((v, s)) => (v, Some(s)),
            None => (rest, None),
        };
        let goal = parse_goal(goal).map_err(|e| FormatError::new(n, format!("goal: {e}")))?;
        let value = value.trim();
        let expected = value
            .parse::<f64>()
            .ok()
            .and_then(TruthValue::new)
            .ok_or_else(|| FormatError::new(n, format!("`{value}` is not a truth value in [0,1]")))?;
        let expected_subst = subst
            .map(|s| {
                parse_substitution(s.trim()).map_err(|e| FormatError::new(n, format!("substitution: {e}")))
            })
            .transpose()?;
        cases.push(TestCase {
            goal,
            expected,
            expected_subst,
        });
    }
    Ok(cases)
}

/// A `#name in {item, ...}` declaration.
pub type Declaration = (String, Vec<String>);

/// Parses domain declarations. The final `.` of a statement is optional
/// when `text` holds a single declaration (as passed to `--domain`).
pub fn parse_domains(text: &str) -> Result<Vec<Declaration>, FormatError> {
    let cleaned: String = text.lines().map(strip_comment).collect::<Vec<_>>().join("\n");
    let mut decls = Vec::new();
    let mut rest = cleaned.as_str();
    let line_of = |rest: &str| cleaned[..cleaned.len() - rest.len()].matches('\n').count() + 1;
    loop {
        rest = rest.trim_start();
        if rest.is_empty() {
            break;
        }
        let here = line_of(rest);
        let body = rest
            .strip_prefix('#')
            .ok_or_else(|| FormatError::new(here, "expected `#name in {...}`"))?;
        let name_len = body
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(body.len());
        let name = &body[..name_len];
        if name.is_empty() {
            return Err(FormatError::new(here, "missing symbol name after `#`"));
        }
        let body = body[name_len..].trim_start();
        let body = body
            .strip_prefix("in")
            .ok_or_else(|| FormatError::new(here, format!("expected `in` after `#{name}`")))?;
        let body = body
            .trim_start()
            .strip_prefix('{')
            .ok_or_else(|| FormatError::new(here, "expected `{`"))?;
        let (items, after) = body
            .split_once('}')
            .ok_or_else(|| FormatError::new(here, "unclosed `{`"))?;
        let items: Vec<String> = items
            .split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect();
        if items.is_empty() {
            return Err(FormatError::new(here, format!("empty domain for `{name}`")));
        }
        decls.push((name.to_string(), items));
        let after = after.trim_start();
        rest = match after.strip_prefix('.') {
            Some(r) => r,
            None if after.is_empty() && decls.len() == 1 => after,
            None => return Err(FormatError::new(line_of(after), "missing final `.`")),
        };
    }
    Ok(decls)
}
