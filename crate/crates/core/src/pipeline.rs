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

//! The batch process: input → table → transactions → mine → prune → report.
//!
//! The entry stage depends on the input: match XML starts at the top, an
//! ARFF table skips XML handling, and Weka output or a rule-fact file go
//! straight to pruning. Every run writes its intermediate artifacts so each
//! stage can be inspected.

use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use crate::apriori::{mine, MiningParams, MiningReport, MiningWarning};
use crate::db::TransactionDb;
use crate::error::Error;
use crate::fraction::Fraction;
use crate::io::{arff, facts, weka, NumberFormat};
use crate::pruning::{maximal_nonredundant, PruneMode, PruneReport};
use crate::rule::AssociationRule;
use crate::tennis::{self, AttributeSelection, Table, Tessellation};

/// Parameter rows of the standard experiment: required rules and minimum
/// confidence.
pub const EXPERIMENT_GRID: [(usize, (u64, u64)); 8] = [
    (5000, (1, 2)),
    (7500, (1, 2)),
    (10000, (1, 2)),
    (10000, (1, 1)),
    (12500, (1, 2)),
    (12500, (1, 1)),
    (15000, (1, 2)),
    (15000, (3, 4)),
];

pub fn experiment_grid() -> Vec<(usize, Fraction)> {
    EXPERIMENT_GRID
        .iter()
        .map(|&(n, (a, b))| (n, Fraction::new(a, b).expect("non-zero")))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    MatchXml,
    Arff,
    WekaOutput,
    RuleFacts,
}

impl InputKind {
    /// Guesses the kind from the file extension, then from the content.
    pub fn detect(path: &Path, content: &[u8]) -> Option<InputKind> {
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase);
        match ext.as_deref() {
            Some("xml") => return Some(InputKind::MatchXml),
            Some("arff") => return Some(InputKind::Arff),
            Some("pl") | Some("facts") => return Some(InputKind::RuleFacts),
            _ => {}
        }
        let head = String::from_utf8_lossy(&content[..content.len().min(4096)]);
        let trimmed = head.trim_start();
        if trimmed.starts_with("<?xml") || trimmed.starts_with("<match") {
            Some(InputKind::MatchXml)
        } else if String::from_utf8_lossy(content).contains("Best rules found:") {
            Some(InputKind::WekaOutput)
        } else if trimmed.to_ascii_lowercase().starts_with("@relation") || trimmed.starts_with('%') {
            Some(InputKind::Arff)
        } else if trimmed.starts_with("rule(") {
            Some(InputKind::RuleFacts)
        } else {
            None
        }
    }
}

impl fmt::Display for InputKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InputKind::MatchXml => "match-xml",
            InputKind::Arff => "arff",
            InputKind::WekaOutput => "weka-output",
            InputKind::RuleFacts => "rule-facts",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Text,
    Csv,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: PathBuf,
    /// Overrides detection when set.
    pub input_kind: Option<InputKind>,
    pub tessellation: Tessellation,
    pub selection: AttributeSelection,
    pub params: MiningParams,
    pub prune_mode: PruneMode,
    pub out_dir: PathBuf,
    pub format: ReportFormat,
    /// Instance count for Weka output, which does not print it.
    pub instances: Option<u64>,
    pub number_format: NumberFormat,
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>, out_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            input: input.into(),
            input_kind: None,
            tessellation: Tessellation::default(),
            selection: AttributeSelection::default(),
            params: MiningParams::default(),
            prune_mode: PruneMode::default(),
            out_dir: out_dir.into(),
            format: ReportFormat::default(),
            instances: None,
            number_format: NumberFormat::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Read,
    Parse,
    Tessellate,
    Transactions,
    Mine,
    Prune,
    Write,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Read => "read",
            Stage::Parse => "parse",
            Stage::Tessellate => "tessellate",
            Stage::Transactions => "transactions",
            Stage::Mine => "mine",
            Stage::Prune => "prune",
            Stage::Write => "write",
        })
    }
}

#[derive(Debug, Error)]
#[error("{stage} stage failed: {source}")]
pub struct PipelineError {
    pub stage: Stage,
    #[source]
    pub source: Error,
}

trait AtStage<T> {
    fn at(self, stage: Stage) -> Result<T, PipelineError>;
}

impl<T, E: Into<Error>> AtStage<T> for Result<T, E> {
    fn at(self, stage: Stage) -> Result<T, PipelineError> {
        self.map_err(|e| PipelineError {
            stage,
            source: e.into(),
        })
    }
}

/// One row of the experiment summary.
#[derive(Debug, Clone, PartialEq)]
pub struct CountsRow {
    pub required_rules: usize,
    pub min_confidence: Fraction,
    pub maximal_nonredundant: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationReport {
    pub input_kind: InputKind,
    pub params: MiningParams,
    pub prune_mode: PruneMode,
    /// `None` when the input already holds rules.
    pub transactions: Option<usize>,
    pub mining: Option<MiningReport>,
    /// Every rule that entered pruning.
    pub rules: Vec<AssociationRule>,
    pub prune: PruneReport,
    pub warnings: Vec<String>,
    pub counts: CountsRow,
}

/// Input loaded and brought up to the stage where parameters matter.
#[derive(Debug, Clone)]
pub enum Prepared {
    Table {
        kind: InputKind,
        table: Table,
    },
    Rules {
        kind: InputKind,
        rules: Vec<AssociationRule>,
        min_confidence: Option<Fraction>,
    },
}

/// Reads and parses the input named by `cfg`; for XML also tessellates and
/// builds the hit-pair table.
pub fn prepare(cfg: &RunConfig) -> Result<Prepared, PipelineError> {
    let bytes = fs::read(&cfg.input).at(Stage::Read)?;
    let kind = match cfg.input_kind {
        Some(k) => k,
        None => InputKind::detect(&cfg.input, &bytes)
            .ok_or_else(|| Error::InvalidParams(format!("cannot tell what kind of input {} is", cfg.input.display())))
            .at(Stage::Read)?,
    };
    prepare_bytes(kind, &bytes, cfg)
}

pub fn prepare_bytes(kind: InputKind, bytes: &[u8], cfg: &RunConfig) -> Result<Prepared, PipelineError> {
    let text = || String::from_utf8(bytes.to_vec()).map_err(|e| Error::InvalidParams(e.to_string())).at(Stage::Read);
    match kind {
        InputKind::MatchXml => {
            let m = tennis::parse_match_bytes(bytes).at(Stage::Parse)?;
            let rows = tennis::build_hit_pairs(&m, &cfg.tessellation).at(Stage::Tessellate)?;
            Ok(Prepared::Table {
                kind,
                table: tennis::project(&rows, &cfg.selection),
            })
        }
        InputKind::Arff => {
            let (_, table) = arff::read_arff(&text()?).at(Stage::Parse)?;
            Ok(Prepared::Table { kind, table })
        }
        InputKind::WekaOutput => {
            let parsed = weka::parse_weka_rules(&text()?).at(Stage::Parse)?;
            Ok(Prepared::Rules {
                kind,
                rules: parsed.to_rules(cfg.instances).at(Stage::Parse)?,
                min_confidence: parsed.min_metric,
            })
        }
        InputKind::RuleFacts => Ok(Prepared::Rules {
            kind,
            rules: facts::parse_rule_facts(&text()?).at(Stage::Parse)?,
            min_confidence: None,
        }),
    }
}

impl Prepared {
    pub fn kind(&self) -> InputKind {
        match self {
            Prepared::Table { kind, .. } | Prepared::Rules { kind, .. } => *kind,
        }
    }

    pub fn table(&self) -> Option<&Table> {
        match self {
            Prepared::Table { table, .. } => Some(table),
            Prepared::Rules { .. } => None,
        }
    }

    /// Mines (when the input is a table) and prunes. No files are touched.
    pub fn evaluate(&self, params: &MiningParams, mode: PruneMode) -> Result<IterationReport, PipelineError> {
        let mut warnings = Vec::new();
        let (transactions, mining, rules, counts_req, counts_conf) = match self {
            Prepared::Table { table, .. } => {
                params.validate().at(Stage::Mine)?;
                let db: TransactionDb = tennis::table_to_transactions(table).at(Stage::Transactions)?;
                if db.is_empty() {
                    warnings.push("table is empty; mining skipped".to_string());
                    (Some(0), None, Vec::new(), params.required_rules, params.min_confidence)
                } else {
                    let report = mine(&db, params).at(Stage::Mine)?;
                    match report.warning {
                        Some(MiningWarning::NoRules) => warnings.push(format!(
                            "no rule reached confidence {} down to minimum support {}",
                            params.min_confidence, report.final_min_support
                        )),
                        Some(MiningWarning::TargetNotReached { found }) => warnings.push(format!(
                            "only {found} of {} required rules found at the support lower bound",
                            params.required_rules
                        )),
                        None => {}
                    }
                    let rules = report.rules.clone();
                    (Some(db.len()), Some(report), rules, params.required_rules, params.min_confidence)
                }
            }
            Prepared::Rules {
                rules,
                min_confidence,
                ..
            } => (
                None,
                None,
                rules.clone(),
                rules.len(),
                min_confidence.unwrap_or(params.min_confidence),
            ),
        };
        for r in rules.iter().filter(|r| !r.measures_consistent()) {
            warnings.push(format!("rule {} has support above its confidence", r.id));
        }
        let prune = maximal_nonredundant(&rules, mode);
        if prune.kept.is_empty() {
            warnings.push("no maximal non-redundant rules; repeat with different parameters".to_string());
        }
        let counts = CountsRow {
            required_rules: counts_req,
            min_confidence: counts_conf,
            maximal_nonredundant: prune.kept.len(),
        };
        Ok(IterationReport {
            input_kind: self.kind(),
            params: params.clone(),
            prune_mode: mode,
            transactions,
            mining,
            rules,
            prune,
            warnings,
            counts,
        })
    }
}

/// Full iteration: prepare, evaluate, write artifacts into `cfg.out_dir`.
pub fn run_iteration(cfg: &RunConfig) -> Result<IterationReport, PipelineError> {
    let prepared = prepare(cfg)?;
    let report = prepared.evaluate(&cfg.params, cfg.prune_mode)?;
    write_table_artifacts(&prepared, &cfg.out_dir).at(Stage::Write)?;
    write_report_artifacts(&report, &cfg.out_dir, cfg.format, cfg.number_format).at(Stage::Write)?;
    Ok(report)
}

#[derive(Debug)]
pub struct SweepCell {
    pub required_rules: usize,
    pub min_confidence: Fraction,
    pub outcome: Result<IterationReport, PipelineError>,
}

/// Runs every `(required_rules, min_confidence)` cell over one prepared
/// table. Cells fail independently; results follow grid order.
pub fn sweep(cfg: &RunConfig, grid: &[(usize, Fraction)]) -> Result<Vec<SweepCell>, PipelineError> {
    if grid.is_empty() {
        return Err(Error::InvalidParams("sweep grid is empty".into())).at(Stage::Mine);
    }
    let prepared = prepare(cfg)?;
    write_table_artifacts(&prepared, &cfg.out_dir).at(Stage::Write)?;
    let cells: Vec<SweepCell> = grid
        .par_iter()
        .enumerate()
        .map(|(i, &(n, conf))| {
            let params = MiningParams {
                required_rules: n,
                min_confidence: conf,
                ..cfg.params.clone()
            };
            let outcome = prepared.evaluate(&params, cfg.prune_mode).and_then(|report| {
                let dir = cfg.out_dir.join(format!("cell_{:02}", i + 1));
                write_report_artifacts(&report, &dir, cfg.format, cfg.number_format).at(Stage::Write)?;
                Ok(report)
            });
            SweepCell {
                required_rules: n,
                min_confidence: conf,
                outcome,
            }
        })
        .collect();
    let summary = match cfg.format {
        ReportFormat::Text => ("sweep.txt", render_sweep_text(&cells)),
        ReportFormat::Csv => ("sweep.csv", render_sweep_csv(&cells)),
    };
    fs::write(cfg.out_dir.join(summary.0), summary.1).at(Stage::Write)?;
    Ok(cells)
}

/// `table.csv` and `weka_input.arff` for table inputs.
pub fn write_table_artifacts(prepared: &Prepared, dir: &Path) -> Result<(), Error> {
    fs::create_dir_all(dir)?;
    if let Some(table) = prepared.table() {
        fs::write(dir.join("table.csv"), table.to_csv()?)?;
        if !table.columns.is_empty() {
            fs::write(dir.join("weka_input.arff"), arff::write_arff(table, "weka_input")?)?;
        }
    }
    Ok(())
}

/// Full and pruned rule facts plus the report itself.
pub fn write_report_artifacts(
    report: &IterationReport,
    dir: &Path,
    format: ReportFormat,
    numbers: NumberFormat,
) -> Result<(), Error> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("rules_full.pl"), facts::export_rule_facts(&report.rules, numbers))?;
    fs::write(dir.join("rules_pruned.pl"), facts::export_rule_facts(&report.prune.kept, numbers))?;
    match format {
        ReportFormat::Text => fs::write(dir.join("report.txt"), render_text(report))?,
        ReportFormat::Csv => fs::write(dir.join("report.csv"), render_csv(report))?,
    }
    Ok(())
}

pub const COUNTS_HEADER: &str = "Required Rules | Minimum Confidence | Maximal Non-Redundant Rules";

pub fn render_text(r: &IterationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "input: {}", r.input_kind);
    if let Some(n) = r.transactions {
        let _ = writeln!(out, "transactions: {n}");
    }
    if let Some(m) = &r.mining {
        let p = &r.params;
        let _ = writeln!(
            out,
            "apriori: -N {} -C {} delta {} support bounds [{}, {}]",
            p.required_rules, p.min_confidence, p.support_delta, p.support_lower_bound, p.support_upper_bound
        );
        let _ = writeln!(
            out,
            "Minimum support: {} ({} instances)",
            m.final_min_support, m.min_support_instances
        );
        let _ = writeln!(out, "Number of cycles performed: {}", m.cycles_performed);
        for (k, n) in &m.large_itemset_counts {
            let _ = writeln!(out, "Size of set of large itemsets L({k}): {n}");
        }
    }
    let p = &r.prune;
    let _ = writeln!(out, "prune mode: {}", r.prune_mode);
    let _ = writeln!(
        out,
        "rules in: {}, kept: {}, redundant: {}, subsumed: {}, duplicate: {}",
        r.rules.len(),
        p.kept.len(),
        p.removed_redundant.len(),
        p.removed_subsumed.len(),
        p.removed_duplicate.len()
    );
    for w in &r.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    let _ = writeln!(out, "\n{COUNTS_HEADER}");
    let _ = writeln!(
        out,
        "{} | {} | {}",
        r.counts.required_rules, r.counts.min_confidence, r.counts.maximal_nonredundant
    );
    let _ = writeln!(out, "\nMaximal non-redundant rules:");
    for rule in &p.kept {
        let _ = writeln!(out, "{rule}");
    }
    if !p.removed_redundant.is_empty() || !p.removed_subsumed.is_empty() {
        let _ = writeln!(out, "\nRemoved (rule <- witness):");
        for (id, w) in &p.removed_redundant {
            let _ = writeln!(out, "{id} redundant <- {w}");
        }
        for (id, w) in &p.removed_subsumed {
            let _ = writeln!(out, "{id} subsumed <- {w}");
        }
    }
    out
}

pub fn render_csv(r: &IterationReport) -> String {
    format!(
        "required_rules,min_confidence,rules_in,maximal_nonredundant,redundant,subsumed,duplicate\n{},{},{},{},{},{},{}\n",
        r.counts.required_rules,
        r.counts.min_confidence,
        r.rules.len(),
        r.counts.maximal_nonredundant,
        r.prune.removed_redundant.len(),
        r.prune.removed_subsumed.len(),
        r.prune.removed_duplicate.len()
    )
}

pub fn render_sweep_text(cells: &[SweepCell]) -> String {
    let mut out = format!("{COUNTS_HEADER}\n");
    for c in cells {
        let result = match &c.outcome {
            Ok(r) => r.counts.maximal_nonredundant.to_string(),
            Err(e) => format!("error: {e}"),
        };
        let _ = writeln!(out, "{} | {} | {}", c.required_rules, c.min_confidence, result);
    }
    out
}

pub fn render_sweep_csv(cells: &[SweepCell]) -> String {
    let mut out = String::from("required_rules,min_confidence,maximal_nonredundant,error\n");
    for c in cells {
        let (count, err) = match &c.outcome {
            Ok(r) => (r.counts.maximal_nonredundant.to_string(), String::new()),
            Err(e) => (String::new(), e.to_string().replace(',', ";")),
        };
        let _ = writeln!(out, "{},{},{},{}", c.required_rules, c.min_confidence, count, err);
    }
    out
}
