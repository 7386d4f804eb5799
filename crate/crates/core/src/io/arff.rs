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

//! Nominal-only ARFF reading and writing.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::tennis::table::{Column, Table, MISSING};

fn needs_quotes(s: &str) -> bool {
    s.is_empty()
        || s == MISSING
        || s.chars().any(|c| {
            matches!(c, ' ' | '\t' | '\n' | '\r' | ',' | '{' | '}' | '\'' | '"' | '%' | '\\')
        })
}

/// Quotes a value if ARFF would otherwise misread it.
pub fn quote(s: &str) -> Result<String> {
    if s.chars().any(|c| c.is_control() && !matches!(c, '\n' | '\r' | '\t')) {
        return Err(Error::Arff {
            line: 0,
            message: format!("value {s:?} contains a control character"),
        });
    }
    if !needs_quotes(s) {
        return Ok(s.to_string());
    }
    let mut out = String::with_capacity(s.len() + 2);
    out.push('\'');
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\'' => out.push_str("\\'"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('\'');
    Ok(out)
}

/// Writes `table` as an ARFF document with one nominal attribute per column.
pub fn write_arff(table: &Table, relation: &str) -> Result<String> {
    if table.columns.is_empty() {
        return Err(Error::Arff {
            line: 0,
            message: "table has no columns".into(),
        });
    }
    let mut out = String::new();
    writeln!(out, "@relation {}\n", quote(relation)?).unwrap();
    for col in &table.columns {
        let domain = col
            .domain
            .iter()
            .map(|v| quote(v))
            .collect::<Result<Vec<_>>>()?;
        writeln!(out, "@attribute {} {{{}}}", quote(&col.name)?, domain.join(",")).unwrap();
    }
    out.push_str("\n@data\n");
    for row in &table.rows {
        let cells = row
            .iter()
            .map(|v| if v == MISSING { Ok(MISSING.to_string()) } else { quote(v) })
            .collect::<Result<Vec<_>>>()?;
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

#[derive(Debug)]
struct Token {
    text: String,
    quoted: bool,
}

/// Splits a comma-separated list, honouring single and double quotes.
fn split_values(s: &str, line: usize) -> Result<Vec<Token>> {
    let err = |m: &str| Error::Arff {
        line,
        message: m.to_string(),
    };
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    loop {
        while chars.peek().is_some_and(|c| c.is_whitespace()) {
            chars.next();
        }
        let mut text = String::new();
        let mut quoted = false;
        match chars.peek().copied() {
            Some(q @ ('\'' | '"')) => {
                quoted = true;
                chars.next();
                loop {
                    match chars.next() {
                        Some('\\') => match chars.next() {
                            Some('n') => text.push('\n'),
                            Some('r') => text.push('\r'),
                            Some('t') => text.push('\t'),
                            Some(c) => text.push(c),
                            None => return Err(err("dangling escape")),
                        },
                        Some(c) if c == q => break,
                        Some(c) => text.push(c),
                        None => return Err(err("unterminated quote")),
                    }
                }
                while chars.peek().is_some_and(|c| c.is_whitespace()) {
                    chars.next();
                }
            }
            _ => {
                while let Some(&c) = chars.peek() {
                    if c == ',' {
                        break;
                    }
                    text.push(c);
                    chars.next();
                }
                text = text.trim().to_string();
            }
        }
        match chars.next() {
            Some(',') => out.push(Token { text, quoted }),
            None => {
                if !(text.is_empty() && !quoted && out.is_empty()) {
                    out.push(Token { text, quoted });
                }
                return Ok(out);
            }
            Some(c) => return Err(err(&format!("unexpected {c:?} after quoted value"))),
        }
    }
}

/// Splits the first whitespace-delimited (possibly quoted) word off `s`.
fn take_word(s: &str, line: usize) -> Result<(String, &str)> {
    let s = s.trim_start();
    if let Some(q @ ('\'' | '"')) = s.chars().next() {
        let end = s[1..]
            .find(q)
            .ok_or_else(|| Error::Arff {
                line,
                message: "unterminated quoted name".into(),
            })?
            + 1;
        let tok = split_values(&s[..=end], line)?;
        return Ok((tok.into_iter().next().map(|t| t.text).unwrap_or_default(), &s[end + 1..]));
    }
    let end = s.find(char::is_whitespace).unwrap_or(s.len());
    Ok((s[..end].to_string(), &s[end..]))
}

/// Reads a nominal ARFF document into its relation name and table.
pub fn read_arff(text: &str) -> Result<(String, Table)> {
    let mut relation = None;
    let mut columns: Vec<Column> = Vec::new();
    let mut rows = Vec::new();
    let mut in_data = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |m: String| Error::Arff { line, message: m };
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        if in_data {
            if trimmed.starts_with('{') {
                return Err(err("sparse data rows are not supported".into()));
            }
            let values = split_values(trimmed, line)?;
            if values.len() != columns.len() {
                return Err(err(format!(
                    "row has {} values, expected {}",
                    values.len(),
                    columns.len()
                )));
            }
            let mut row = Vec::with_capacity(values.len());
            for (v, col) in values.into_iter().zip(&columns) {
                if !v.quoted && v.text == MISSING {
                    row.push(MISSING.to_string());
                } else if col.domain.contains(&v.text) {
                    row.push(v.text);
                } else {
                    return Err(err(format!(
                        "value {:?} not declared for attribute {:?}",
                        v.text, col.name
                    )));
                }
            }
            rows.push(row);
            continue;
        }
        let lower = trimmed.to_ascii_lowercase();
        if lower.starts_with("@relation") {
            let (name, _) = take_word(&trimmed["@relation".len()..], line)?;
            relation = Some(name);
        } else if lower.starts_with("@attribute") {
            let (name, rest) = take_word(&trimmed["@attribute".len()..], line)?;
            let spec = rest.trim();
            let inner = spec
                .strip_prefix('{')
                .and_then(|s| s.strip_suffix('}'))
                .ok_or_else(|| {
                    err(format!(
                        "attribute {name:?} has unsupported type {spec:?}; only nominal attributes are supported"
                    ))
                })?;
            let domain: Vec<String> = split_values(inner, line)?.into_iter().map(|t| t.text).collect();
            columns.push(Column { name, domain });
        } else if lower.starts_with("@data") {
            in_data = true;
        } else {
            return Err(err(format!("unexpected header line {trimmed:?}")));
        }
    }
    let relation = relation.ok_or(Error::Arff {
        line: 1,
        message: "missing @relation".into(),
    })?;
    if !in_data {
        return Err(Error::Arff {
            line: text.lines().count(),
            message: "missing @data section".into(),
        });
    }
    Ok((relation, Table { columns, rows }))
}
