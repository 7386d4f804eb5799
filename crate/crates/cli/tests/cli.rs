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

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use courtmine::io::{export_rule_facts, NumberFormat};
use courtmine::pipeline::{self, experiment_grid, RunConfig};
use courtmine::tennis::{build_hit_pairs, parse_match_xml, project, table_to_transactions, AttributeSelection, Tessellation};
use courtmine::{maximal_nonredundant, mine, Fraction, MiningParams, PruneMode};

const WEKA_SAMPLE: &str = include_str!("../../core/tests/fixtures/weka_sample.txt");

const SMALL_MATCH: &str = r#"<?xml version="1.0" encoding="UTF-8"?>
<match>
  <set id="1">
    <game id="1" service="A">
      <point id="1" service="A" winner="A" error="0">
        <hit id="1" hand="forehand" type="serve" x="1.0" y="-12.0"/>
        <hit id="2" hand="backhand" type="ground" x="-3.0" y="6.0"/>
        <hit id="3" hand="forehand" type="volley" x="2.0" y="-3.0"/>
      </point>
      <point id="2" service="A" winner="B" error="1">
        <hit id="1" hand="forehand" type="serve" x="1.2" y="-12.0"/>
        <hit id="2" hand="backhand" type="ground" x="-3.1" y="6.5"/>
      </point>
      <point id="3" service="A" winner="A" error="0">
        <hit id="1" hand="forehand" type="serve" x="0.9" y="-12.0"/>
        <hit id="2" hand="backhand" type="ground" x="-2.9" y="7.0"/>
        <hit id="3" hand="backhand" type="lob" x="3.0" y="-9.0"/>
      </point>
    </game>
  </set>
</match>
"#;

fn courtmine(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_courtmine"))
        .args(args)
        .env_remove("COURTMINE_OUT")
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_file())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    out.sort();
    out
}

#[test]
fn weka_input_goes_straight_to_pruning() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "weka_output.txt", WEKA_SAMPLE);
    let out = dir.path().join("out");
    let res = courtmine(&["run", &input, "--out", out.to_str().unwrap()]);
    assert!(res.status.success());
    let stdout = String::from_utf8(res.stdout).unwrap();
    assert!(stdout.contains("rules in: 2, kept: 1"), "{stdout}");
    assert!(stdout.contains("2 redundant <- 1"));
    assert!(!out.join("weka_input.arff").exists());
    assert_eq!(
        fs::read_to_string(out.join("rules_pruned.pl")).unwrap(),
        "rule(1, [hand_1=forehand,service='B'], [type_2=ground], count(1077), 1).\n"
    );
}

#[test]
fn instance_count_turns_weka_counts_into_ratios() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "weka_output.txt", WEKA_SAMPLE);
    let out = dir.path().join("out");
    let res = courtmine(&["run", &input, "--instances", "2000", "--rational", "--out", out.to_str().unwrap()]);
    assert!(res.status.success());
    let facts = fs::read_to_string(out.join("rules_full.pl")).unwrap();
    assert!(facts.contains("1077/2000, 1077/1077"), "{facts}");
}

#[test]
fn single_hit_point_gives_empty_table() {
    let dir = tempfile::tempdir().unwrap();
    let xml = r#"<match><set id="1"><game id="1"><point id="1">
        <hit id="1" hand="forehand" type="serve" x="0" y="-12"/>
        </point></game></set></match>"#;
    let input = write(dir.path(), "one.xml", xml);
    let out = dir.path().join("out");
    let res = courtmine(&["run", &input, "--out", out.to_str().unwrap()]);
    assert!(res.status.success());
    let report = fs::read_to_string(out.join("report.txt")).unwrap();
    assert!(report.contains("transactions: 0"));
    assert!(report.contains("table is empty; mining skipped"));
    assert_eq!(fs::read_to_string(out.join("rules_pruned.pl")).unwrap(), "");
    let arff = fs::read_to_string(out.join("weka_input.arff")).unwrap();
    assert!(arff.ends_with("@data\n"));
}

#[test]
fn runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "m.xml", SMALL_MATCH);
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let res = courtmine(&["run", &input, "-N", "5", "-C", "0.8", "--out", out.to_str().unwrap()]);
        assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    }
    let names: Vec<String> = files(&a).into_iter().map(|f| f.0).collect();
    assert_eq!(names, ["report.txt", "rules_full.pl", "rules_pruned.pl", "table.csv", "weka_input.arff"]);
    assert_eq!(files(&a), files(&b));
}

#[test]
fn library_stages_match_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "m.xml", SMALL_MATCH);
    let out = dir.path().join("out");
    let res = courtmine(&["run", &input, "-N", "5", "-C", "0.8", "--out", out.to_str().unwrap()]);
    assert!(res.status.success());

    let m = parse_match_xml(SMALL_MATCH).unwrap();
    let rows = build_hit_pairs(&m, &Tessellation::default()).unwrap();
    let table = project(&rows, &AttributeSelection::default());
    assert_eq!(fs::read_to_string(out.join("table.csv")).unwrap(), table.to_csv().unwrap());
    let db = table_to_transactions(&table).unwrap();
    let params = MiningParams {
        required_rules: 5,
        min_confidence: Fraction::new(8, 10).unwrap(),
        ..MiningParams::default()
    };
    let mined = mine(&db, &params).unwrap();
    let pruned = maximal_nonredundant(&mined.rules, PruneMode::Inclusive);
    assert_eq!(
        fs::read_to_string(out.join("rules_full.pl")).unwrap(),
        export_rule_facts(&mined.rules, NumberFormat::Decimal)
    );
    assert_eq!(
        fs::read_to_string(out.join("rules_pruned.pl")).unwrap(),
        export_rule_facts(&pruned.kept, NumberFormat::Decimal)
    );
}

#[test]
fn stage_errors_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "bad.xml", "<match><set><game><point><hit id=\"1\"/></point></game></set></match>");
    let res = courtmine(&["run", &input, "--out", dir.path().join("o").to_str().unwrap()]);
    assert!(!res.status.success());
    let stderr = String::from_utf8(res.stderr).unwrap();
    assert!(stderr.contains("parse stage failed"), "{stderr}");

    let missing = dir.path().join("nope.xml");
    let res = courtmine(&["run", missing.to_str().unwrap()]);
    assert!(String::from_utf8(res.stderr).unwrap().contains("read stage failed"));

    let res = courtmine(&["run", &input, "--select", "x"]);
    assert!(!res.status.success());
    let res = courtmine(&["run", &input, "--grid", "0x3"]);
    assert!(!res.status.success());
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "weka_output.txt", WEKA_SAMPLE);
    let out = dir.path().join("from-env");
    let res = Command::new(env!("CARGO_BIN_EXE_courtmine"))
        .args(["run", &input, "--format", "csv"])
        .env("COURTMINE_OUT", &out)
        .output()
        .unwrap();
    assert!(res.status.success());
    assert_eq!(
        fs::read_to_string(out.join("report.csv")).unwrap(),
        "required_rules,min_confidence,rules_in,maximal_nonredundant,redundant,subsumed,duplicate\n2,0.5,2,1,1,0,0\n"
    );
}

#[test]
fn sweep_cells_follow_grid_order_and_match_single_runs() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "m.xml", SMALL_MATCH);
    let out = dir.path().join("sweep");
    let res = courtmine(&["sweep", &input, "--cells", "5:0.8,3:1,5:0.8", "--out", out.to_str().unwrap()]);
    assert!(res.status.success());
    let summary = fs::read_to_string(out.join("sweep.txt")).unwrap();
    let lines: Vec<&str> = summary.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("5 | 0.8 | ") && lines[2].starts_with("3 | 1 | "));
    assert_eq!(lines[1], lines[3]);
    assert_eq!(files(&out.join("cell_01")), files(&out.join("cell_03")));

    let single = dir.path().join("single");
    let res = courtmine(&["run", &input, "-N", "5", "-C", "0.8", "--out", single.to_str().unwrap()]);
    assert!(res.status.success());
    for name in ["report.txt", "rules_full.pl", "rules_pruned.pl"] {
        assert_eq!(fs::read(single.join(name)).unwrap(), fs::read(out.join("cell_01").join(name)).unwrap(), "{name}");
    }
}

#[test]
fn sweep_counts_never_exceed_required_rules() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "m.xml", SMALL_MATCH);
    let mut cfg = RunConfig::new(&input, dir.path().join("out"));
    cfg.selection = "hand_1,type_1,type_2,Ix_2,winner".parse().unwrap();
    cfg.prune_mode = PruneMode::Strict;
    let grid: Vec<(usize, Fraction)> = (1..=6)
        .flat_map(|n| (1..=10).map(move |c| (n, Fraction::new(c, 10).unwrap())))
        .chain(experiment_grid())
        .collect();
    let cells = pipeline::sweep(&cfg, &grid).unwrap();
    assert_eq!(cells.len(), grid.len());
    for (cell, (n, c)) in cells.iter().zip(&grid) {
        assert_eq!((cell.required_rules, cell.min_confidence), (*n, *c));
        let report = cell.outcome.as_ref().unwrap();
        assert!(report.counts.maximal_nonredundant <= *n);
    }
}

#[test]
fn sweep_records_failing_cells() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "m.xml", SMALL_MATCH);
    let cfg = RunConfig::new(&input, dir.path().join("out"));
    let grid = [(5, Fraction::new(1, 2).unwrap()), (0, Fraction::ONE), (5, Fraction::ONE)];
    let cells = pipeline::sweep(&cfg, &grid).unwrap();
    assert!(cells[0].outcome.is_ok() && cells[2].outcome.is_ok());
    assert!(cells[1].outcome.is_err());
    let summary = fs::read_to_string(dir.path().join("out/sweep.txt")).unwrap();
    assert!(summary.lines().nth(2).unwrap().contains("error: mine stage failed"));
    assert!(pipeline::sweep(&cfg, &[]).is_err());
}
