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

//! The temporal hit-pair table and its conversion to transactions.

use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;

use crate::db::TransactionDb;
use crate::error::{Error, Result};
use crate::itemset::{Item, Itemset};
use crate::tennis::tessellation::Tessellation;
use crate::tennis::xml::{Hit, Match, Point};

/// Marker for a missing nominal value.
pub const MISSING: &str = "?";

/// Per-hit features after tessellation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HitFeatures {
    pub id: u32,
    pub hand: String,
    pub kind: String,
    pub ix: u32,
    pub iy: u32,
}

/// One row per pair of consecutive hits `(i, i+1)` within a point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HitPairRow {
    /// Pair ordinal within the point, starting at 1.
    pub hit: u32,
    pub first: HitFeatures,
    pub second: HitFeatures,
    pub set: String,
    pub game: String,
    pub point: String,
    pub top: String,
    pub service: String,
    pub score_a: String,
    pub score_b: String,
    pub winner: String,
    pub error: String,
}

/// Every column a hit-pair row can produce, in display order.
pub const COLUMNS: &[&str] = &[
    "hit", "id_1", "id_2", "hand_1", "hand_2", "type_1", "type_2", "Ix_1", "Iy_1", "Ix_2",
    "Iy_2", "set", "game", "point", "top", "service", "score_A", "score_B", "winner", "error",
];

impl HitPairRow {
    /// Value of a column from [`COLUMNS`].
    pub fn value(&self, column: &str) -> Option<String> {
        let v = match column {
            "hit" => self.hit.to_string(),
            "id_1" => self.first.id.to_string(),
            "id_2" => self.second.id.to_string(),
            "hand_1" => self.first.hand.clone(),
            "hand_2" => self.second.hand.clone(),
            "type_1" => self.first.kind.clone(),
            "type_2" => self.second.kind.clone(),
            "Ix_1" => self.first.ix.to_string(),
            "Iy_1" => self.first.iy.to_string(),
            "Ix_2" => self.second.ix.to_string(),
            "Iy_2" => self.second.iy.to_string(),
            "set" => self.set.clone(),
            "game" => self.game.clone(),
            "point" => self.point.clone(),
            "top" => self.top.clone(),
            "service" => self.service.clone(),
            "score_A" => self.score_a.clone(),
            "score_B" => self.score_b.clone(),
            "winner" => self.winner.clone(),
            "error" => self.error.clone(),
            _ => return None,
        };
        Some(v)
    }
}

/// Ordered list of columns to keep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeSelection {
    columns: Vec<String>,
}

impl Default for AttributeSelection {
    fn default() -> Self {
        AttributeSelection::new([
            "hit", "id_1", "id_2", "hand_1", "hand_2", "type_1", "type_2", "Ix_1", "Iy_1",
            "Ix_2", "Iy_2", "service", "winner", "error",
        ])
        .expect("default selection is valid")
    }
}

impl AttributeSelection {
    /// Rejects unknown columns and repeats. Raw coordinates and times are
    /// not columns at all; they only reach the table as `Ix`/`Iy`.
    pub fn new<I, S>(columns: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut out: Vec<String> = Vec::new();
        for c in columns {
            let c = c.as_ref().trim();
            if !COLUMNS.contains(&c) || out.iter().any(|o| o == c) {
                return Err(Error::UnknownColumn(c.to_string()));
            }
            out.push(c.to_string());
        }
        if out.is_empty() {
            return Err(Error::UnknownColumn(String::new()));
        }
        Ok(AttributeSelection { columns: out })
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }
}

impl FromStr for AttributeSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AttributeSelection::new(s.split(',').filter(|c| !c.trim().is_empty()))
    }
}

impl fmt::Display for AttributeSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.columns.join(","))
    }
}

/// A nominal table: named columns with observed domains, rows of values.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Table {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub name: String,
    /// Distinct non-missing values in first-seen order.
    pub domain: Vec<String>,
}

impl Table {
    /// Builds a table, collecting each column's domain from the rows.
    pub fn from_rows(names: Vec<String>, rows: Vec<Vec<String>>) -> Self {
        let mut columns: Vec<Column> = names
            .into_iter()
            .map(|name| Column {
                name,
                domain: Vec::new(),
            })
            .collect();
        for row in &rows {
            for (col, v) in columns.iter_mut().zip(row) {
                if v != MISSING && !col.domain.contains(v) {
                    col.domain.push(v.clone());
                }
            }
        }
        Table { columns, rows }
    }

    pub fn column_names(&self) -> Vec<&str> {
        self.columns.iter().map(|c| c.name.as_str()).collect()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// CSV with a header row.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.column_names())?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output of UTF-8 input"))
    }
}

fn features(hit: &Hit, t: &Tessellation) -> Result<HitFeatures> {
    let (ix, iy) = t.cell(hit.x, hit.y)?;
    Ok(HitFeatures {
        id: hit.id,
        hand: hit.hand.to_string(),
        kind: hit.kind.clone(),
        ix,
        iy,
    })
}

fn or_missing(v: &Option<String>) -> String {
    v.clone().unwrap_or_else(|| MISSING.to_string())
}

fn point_pairs(
    set: &Option<String>,
    game: &Option<String>,
    point: &Point,
    t: &Tessellation,
    out: &mut Vec<HitPairRow>,
) -> Result<()> {
    for (i, pair) in point.hits.windows(2).enumerate() {
        out.push(HitPairRow {
            hit: i as u32 + 1,
            first: features(&pair[0], t)?,
            second: features(&pair[1], t)?,
            set: or_missing(set),
            game: or_missing(game),
            point: or_missing(&point.id),
            top: or_missing(&point.top),
            service: or_missing(&point.service),
            score_a: or_missing(&point.score_a),
            score_b: or_missing(&point.score_b),
            winner: or_missing(&point.winner),
            error: or_missing(&point.error),
        });
    }
    Ok(())
}

/// Rows for every consecutive hit pair, in document order. A point with
/// `k` hits contributes `max(k - 1, 0)` rows.
pub fn build_hit_pairs(m: &Match, t: &Tessellation) -> Result<Vec<HitPairRow>> {
    t.validate()?;
    let mut rows = Vec::new();
    for set in &m.sets {
        for game in &set.games {
            for point in &game.points {
                point_pairs(&set.id, &game.id, point, t, &mut rows)?;
            }
        }
    }
    Ok(rows)
}

/// Projects hit-pair rows onto the selected columns.
pub fn project(rows: &[HitPairRow], sel: &AttributeSelection) -> Table {
    let names = sel.columns().to_vec();
    let data = rows
        .iter()
        .map(|r| {
            names
                .iter()
                .map(|c| r.value(c).expect("selection only holds known columns"))
                .collect()
        })
        .collect();
    Table::from_rows(names, data)
}

/// One transaction per row, one `column=value` item per cell. Missing cells
/// keep the explicit `?` value. The schema follows the table's columns and
/// domains.
pub fn table_to_transactions(table: &Table) -> Result<TransactionDb> {
    let mut schema: IndexMap<String, Vec<String>> = IndexMap::new();
    for (i, col) in table.columns.iter().enumerate() {
        let mut domain = col.domain.clone();
        if table.rows.iter().any(|r| r.get(i).is_some_and(|v| v == MISSING)) {
            domain.push(MISSING.to_string());
        }
        schema.insert(col.name.clone(), domain);
    }
    let mut transactions = Vec::with_capacity(table.rows.len());
    for row in &table.rows {
        let items = table
            .columns
            .iter()
            .zip(row)
            .map(|(c, v)| Item::new(c.name.clone(), v.clone()))
            .collect::<Result<Vec<_>>>()?;
        transactions.push(Itemset::from_items(items)?);
    }
    TransactionDb::with_schema(schema, transactions)
}
