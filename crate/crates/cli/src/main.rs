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

//! `courtmine`: batch rule mining over tennis match data.
//!
//! `run` performs one iteration and writes every intermediate artifact;
//! `sweep` repeats the mining and pruning stages over a parameter grid.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use courtmine::io::NumberFormat;
use courtmine::pipeline::{self, experiment_grid, render_sweep_text, render_text, InputKind, ReportFormat, RunConfig};
use courtmine::tennis::{AttributeSelection, Tessellation};
use courtmine::{Fraction, MiningParams, PruneMode};

#[derive(Parser)]
#[command(name = "courtmine", version, about = "Association rule mining over tessellated tennis hit data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one iteration and print its report
    Run(Common),
    /// Run the mining and pruning stages once per grid cell
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Cells as N:C pairs, e.g. 5000:0.5,10000:1. Defaults to the standard experiment grid.
        #[arg(long, value_delimiter = ',', value_parser = parse_cell)]
        cells: Vec<(usize, Fraction)>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Xml,
    Arff,
    Weka,
    Facts,
}

impl From<Kind> for InputKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Xml => InputKind::MatchXml,
            Kind::Arff => InputKind::Arff,
            Kind::Weka => InputKind::WekaOutput,
            Kind::Facts => InputKind::RuleFacts,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Args)]
struct Common {
    /// Match XML, ARFF table, Weka Apriori output or rule-fact file
    input: PathBuf,
    /// Input kind; guessed from the extension and content when omitted
    #[arg(long, value_enum)]
    kind: Option<Kind>,
    /// Number of rules to find
    #[arg(short = 'N', long = "num-rules", default_value_t = 10)]
    num_rules: usize,
    /// Minimum confidence
    #[arg(short = 'C', long = "min-confidence", default_value = "0.9")]
    min_confidence: Fraction,
    /// Step by which minimum support is lowered each cycle
    #[arg(long, default_value = "0.05")]
    delta: Fraction,
    #[arg(long = "upper-bound", default_value = "1")]
    upper_bound: Fraction,
    #[arg(long = "lower-bound", default_value = "0.1")]
    lower_bound: Fraction,
    /// Inner grid cells across and along the court
    #[arg(long, default_value = "4x6", value_parser = parse_grid)]
    grid: (u32, u32),
    /// Court width and length in meters
    #[arg(long, default_value = "8.23x23.77", value_parser = parse_court)]
    court: (f64, f64),
    #[arg(long = "prune-mode", default_value = "inclusive")]
    prune_mode: PruneMode,
    /// Comma-separated table columns
    #[arg(long)]
    select: Option<AttributeSelection>,
    /// Output directory
    #[arg(long, env = "COURTMINE_OUT", default_value = "courtmine-out")]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Total instance count for Weka output input
    #[arg(long)]
    instances: Option<u64>,
    /// Write measures in rule facts as J/T
    #[arg(long)]
    rational: bool,
    /// Mine with an external Weka jar instead of the bundled miner
    #[cfg(feature = "weka-jar")]
    #[arg(long = "weka-jar")]
    weka_jar: Option<PathBuf>,
}

fn split_x(s: &str) -> Result<(&str, &str), String> {
    s.split_once(['x', 'X']).ok_or_else(|| format!("expected AxB, got {s:?}"))
}

fn parse_grid(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = split_x(s)?;
    let n = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("{t:?}: {e}"));
    Ok((n(a)?, n(b)?))
}

fn parse_court(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = split_x(s)?;
    let n = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    Ok((n(a)?, n(b)?))
}

fn parse_cell(s: &str) -> Result<(usize, Fraction), String> {
    let (n, c) = s.split_once(':').ok_or_else(|| format!("expected N:C, got {s:?}"))?;
    let n = n.trim().parse().map_err(|e| format!("{n:?}: {e}"))?;
    let c = c.trim().parse().map_err(|e: courtmine::Error| e.to_string())?;
    Ok((n, c))
}

impl Common {
    fn config(&self) -> Result<RunConfig> {
        let (w, l) = self.court;
        let mut cfg = RunConfig::new(&self.input, &self.out);
        cfg.input_kind = self.kind.map(Into::into);
        cfg.tessellation = Tessellation::new(self.grid.0, self.grid.1, w, l)?;
        if let Some(sel) = &self.select {
            cfg.selection = sel.clone();
        }
        cfg.params = MiningParams {
            required_rules: self.num_rules,
            min_confidence: self.min_confidence,
            support_delta: self.delta,
            support_upper_bound: self.upper_bound,
            support_lower_bound: self.lower_bound,
            ..MiningParams::default()
        };
        cfg.params.validate()?;
        cfg.prune_mode = self.prune_mode;
        cfg.format = match self.format {
            Format::Text => ReportFormat::Text,
            Format::Csv => ReportFormat::Csv,
        };
        cfg.instances = self.instances;
        cfg.number_format = if self.rational {
            NumberFormat::Rational
        } else {
            NumberFormat::Decimal
        };
        Ok(cfg)
    }
}

#[cfg(feature = "weka-jar")]
fn run_with_weka(cfg: &RunConfig, jar: &std::path::Path) -> Result<pipeline::IterationReport> {
    let prepared = pipeline::prepare(cfg)?;
    let Some(table) = prepared.table() else {
        anyhow::bail!("--weka-jar needs a match XML or ARFF input");
    };
    pipeline::write_table_artifacts(&prepared, &cfg.out_dir)?;
    let arff = cfg.out_dir.join("weka_input.arff");
    let output = std::process::Command::new("java")
        .arg("-cp")
        .arg(jar)
        .arg("weka.associations.Apriori")
        .args(["-N", &cfg.params.required_rules.to_string()])
        .args(["-C", &cfg.params.min_confidence.to_f64().to_string()])
        .arg("-t")
        .arg(&arff)
        .output()
        .context("running java")?;
    if !output.status.success() {
        anyhow::bail!("weka exited with {}: {}", output.status, String::from_utf8_lossy(&output.stderr));
    }
    std::fs::write(cfg.out_dir.join("weka_output.txt"), &output.stdout)?;
    let mut weka_cfg = cfg.clone();
    weka_cfg.instances = Some(table.len() as u64);
    let rules = pipeline::prepare_bytes(InputKind::WekaOutput, &output.stdout, &weka_cfg)?;
    let report = rules.evaluate(&cfg.params, cfg.prune_mode)?;
    pipeline::write_report_artifacts(&report, &cfg.out_dir, cfg.format, cfg.number_format)?;
    Ok(report)
}

fn run(common: &Common) -> Result<()> {
    let cfg = common.config()?;
    #[cfg(feature = "weka-jar")]
    let report = match &common.weka_jar {
        Some(jar) => run_with_weka(&cfg, jar)?,
        None => pipeline::run_iteration(&cfg)?,
    };
    #[cfg(not(feature = "weka-jar"))]
    let report = pipeline::run_iteration(&cfg)?;
    print!("{}", render_text(&report));
    Ok(())
}

fn sweep(common: &Common, cells: &[(usize, Fraction)]) -> Result<()> {
    let cfg = common.config()?;
    let grid = if cells.is_empty() { experiment_grid() } else { cells.to_vec() };
    let results = pipeline::sweep(&cfg, &grid).with_context(|| format!("sweep over {}", cfg.input.display()))?;
    print!("{}", render_sweep_text(&results));
    for (i, cell) in results.iter().enumerate() {
        if let Err(e) = &cell.outcome {
            eprintln!("cell {}: {e}", i + 1);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(common) => run(common),
        Command::Sweep { common, cells } => sweep(common, cells),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
