// Copyright 2026 The courtmine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Rule facts: `rule(Id, [a=v,...], [a=v,...], Sup, Conf).`, one per line.
//!
//! Attribute names are lower-cased on export so they read as Prolog atoms.
//! Values that are neither plain lower-case atoms nor integers are written
//! as quoted atoms (`service='B'`).

use crate::error::{Error, Result};
use crate::fraction::Fraction;
use crate::itemset::{Item, Itemset};
use crate::rule::{AssociationRule, Support};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NumberFormat {
    /// Exact decimals; values without a terminating expansion fall back
    /// to `J/T`.
    #[default]
    Decimal,
    /// Always `J/T` with the stored counts.
    Rational,
}

fn plain_atom(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn plain_integer(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) && (s == "0" || !s.starts_with('0'))
}

fn atom(s: &str) -> String {
    if plain_atom(s) || plain_integer(s) {
        return s.to_string();
    }
    let mut out = String::from("'");
    for c in s.chars() {
        match c {
            '\'' => out.push_str("\\'"),
            '\\' => out.push_str("\\\\"),
            c => out.push(c),
        }
    }
    out.push('\'');
    out
}

fn list(set: &Itemset) -> String {
    let items: Vec<String> = set
        .iter()
        .map(|i| format!("{}={}", atom(&i.attribute().to_lowercase()), atom(i.value())))
        .collect();
    format!("[{}]", items.join(","))
}

fn number(f: &Fraction, format: NumberFormat) -> String {
    match format {
        NumberFormat::Decimal => f.to_string(),
        NumberFormat::Rational => f.to_ratio_string(),
    }
}

pub fn export_rule_fact(rule: &AssociationRule, format: NumberFormat) -> String {
    let sup = match rule.support {
        Support::Ratio(f) => number(&f, format),
        Support::Count(c) => format!("count({c})"),
    };
    format!(
        "rule({}, {}, {}, {}, {}).",
        rule.id,
        list(&rule.antecedent),
        list(&rule.consequent),
        sup,
        number(&rule.confidence, format)
    )
}

pub fn export_rule_facts(rules: &[AssociationRule], format: NumberFormat) -> String {
    rules
        .iter()
        .map(|r| export_rule_fact(r, format) + "\n")
        .collect()
}

/// Splits at top-level commas, skipping over brackets, parens and quotes.
fn split_top(s: &str) -> Option<Vec<&str>> {
    let mut parts = Vec::new();
    let (mut depth, mut start, mut quoted, mut escaped) = (0i32, 0usize, false, false);
    for (i, c) in s.char_indices() {
        if quoted {
            match c {
                _ if escaped => escaped = false,
                '\\' => escaped = true,
                '\'' => quoted = false,
                _ => {}
            }
            continue;
        }
        match c {
            '\'' => quoted = true,
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return None;
        }
    }
    if quoted || depth != 0 {
        return None;
    }
    parts.push(s[start..].trim());
    Some(parts)
}

fn unatom(s: &str) -> Option<String> {
    let Some(inner) = s.strip_prefix('\'') else {
        return Some(s.to_string());
    };
    let inner = inner.strip_suffix('\'')?;
    let mut out = String::new();
    let mut chars = inner.chars();
    while let Some(c) = chars.next() {
        match c {
            '\\' => out.push(chars.next()?),
            c => out.push(c),
        }
    }
    Some(out)
}

fn parse_list(s: &str) -> std::result::Result<Itemset, String> {
    let inner = s
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| format!("expected a bracketed list, got {s:?}"))?;
    if inner.trim().is_empty() {
        return Ok(Itemset::new());
    }
    let mut items = Vec::new();
    for part in split_top(inner).ok_or("unbalanced list")? {
        let (a, v) = split_top_eq(part).ok_or_else(|| format!("expected attr=value, got {part:?}"))?;
        let a = unatom(a).ok_or_else(|| format!("bad atom {a:?}"))?;
        let v = unatom(v).ok_or_else(|| format!("bad atom {v:?}"))?;
        items.push(Item::new(a, v).map_err(|e| e.to_string())?);
    }
    Itemset::from_items(items).map_err(|e| e.to_string())
}

/// Splits `attr=value` at the first `=` outside quotes.
fn split_top_eq(s: &str) -> Option<(&str, &str)> {
    let mut quoted = false;
    let mut escaped = false;
    for (i, c) in s.char_indices() {
        if quoted {
            match c {
                _ if escaped => escaped = false,
                '\\' => escaped = true,
                '\'' => quoted = false,
                _ => {}
            }
        } else if c == '\'' {
            quoted = true;
        } else if c == '=' {
            return Some((s[..i].trim(), s[i + 1..].trim()));
        }
    }
    None
}

fn parse_fact(s: &str) -> std::result::Result<AssociationRule, String> {
    let body = s
        .strip_suffix('.')
        .ok_or("fact must end with a period")?
        .trim_end();
    let args = body
        .strip_prefix("rule(")
        .and_then(|b| b.strip_suffix(')'))
        .ok_or("expected rule(...)")?;
    let parts = split_top(args).ok_or("unbalanced brackets or quotes")?;
    let [id, ante, cons, sup, conf] = parts.as_slice() else {
        return Err(format!("expected 5 arguments, found {}", parts.len()));
    };
    let id: u32 = id.parse().map_err(|_| format!("bad rule id {id:?}"))?;
    let support = match sup.strip_prefix("count(").and_then(|s| s.strip_suffix(')')) {
        Some(c) => Support::Count(c.trim().parse().map_err(|_| format!("bad count {sup:?}"))?),
        None => Support::Ratio(sup.parse().map_err(|_| format!("bad support {sup:?}"))?),
    };
    let confidence: Fraction = conf.parse().map_err(|_| format!("bad confidence {conf:?}"))?;
    AssociationRule::new(id, parse_list(ante)?, parse_list(cons)?, support, confidence)
        .map_err(|e| e.to_string())
}

/// Inverse of [`export_rule_facts`]. Blank lines and `%` comments are
/// skipped. Facts whose support exceeds their confidence are accepted;
/// check [`AssociationRule::measures_consistent`] to flag them.
pub fn parse_rule_facts(text: &str) -> Result<Vec<AssociationRule>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let rule = parse_fact(line).map_err(|message| Error::Facts {
            line: i + 1,
            message,
        })?;
        out.push(rule);
    }
    Ok(out)
}
