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

use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Location inside a text document, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl Position {
    /// Resolves a byte offset into a line/column pair.
    pub fn from_offset(text: &str, offset: usize) -> Self {
        let offset = offset.min(text.len());
        let before = &text.as_bytes()[..offset];
        let line = before.iter().filter(|&&b| b == b'\n').count() + 1;
        let line_start = before.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1);
        let column = String::from_utf8_lossy(&before[line_start..]).chars().count() + 1;
        Position { line, column }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid token {token:?}: {reason}")]
    InvalidToken { token: String, reason: &'static str },

    #[error("itemset assigns attribute {attribute:?} twice ({first} and {second})")]
    ConflictingAttribute {
        attribute: String,
        first: String,
        second: String,
    },

    #[error("attribute {0:?} is not part of the transaction schema")]
    UnknownAttribute(String),

    #[error("value {value:?} is not in the domain of attribute {attribute:?}")]
    UnknownValue { attribute: String, value: String },

    #[error("transaction database is empty")]
    EmptyDatabase,

    #[error("confidence is undefined: antecedent {0} never occurs")]
    UndefinedConfidence(String),

    #[error("invalid rule: {0}")]
    InvalidRule(String),

    #[error("invalid fraction {0:?}")]
    InvalidFraction(String),

    #[error("invalid mining parameters: {0}")]
    InvalidParams(String),

    #[error("invalid tessellation: {0}")]
    InvalidTessellation(String),

    #[error("coordinate is not finite: ({x}, {y})")]
    NonFiniteCoordinate { x: f64, y: f64 },

    #[error("malformed XML at {position}: {message}")]
    Xml { position: Position, message: String },

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("unknown attribute selection {0:?}")]
    UnknownColumn(String),

    #[error("ARFF error at line {line}: {message}")]
    Arff { line: usize, message: String },

    #[error("Weka output error at line {line}: {message}")]
    WekaOutput { line: usize, message: String },

    #[error("rule fact error at line {line}: {message}")]
    Facts { line: usize, message: String },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
