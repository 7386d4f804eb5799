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

//! Parser for the text printed by Weka's Apriori associator.
//!
//! ```text
//! Minimum support: 0.15 (409 instances)
//! Minimum metric <confidence>: 0.5
//! Number of cycles performed: 17
//! Size of set of large itemsets L(1): 40
//!
//! Best rules found:
//!  1. service=B hand_1=forehand 1077 ==> type_2=ground 1077    <conf:(1)> lift:(1.2) ...
//! ```
//!
//! Rules may be wrapped over several lines; continuation lines are joined
//! onto the numbered line they follow.

use std::sync::OnceLock;

use regex::Regex;

use crate::error::{Error, Result};
use crate::fraction::Fraction;
use crate::itemset::Itemset;
use crate::rule::{AssociationRule, Support};

#[derive(Debug, Clone, PartialEq)]
pub struct WekaRule {
    /// The number Weka printed before the rule.
    pub rank: u32,
    pub antecedent: Itemset,
    pub consequent: Itemset,
    pub antecedent_count: u64,
    pub joint_count: u64,
    pub printed_confidence: Fraction,
    /// Line the rule starts on.
    pub line: usize,
}

impl WekaRule {
    /// `joint / antecedent`.
    pub fn confidence(&self) -> Fraction {
        Fraction::new(self.joint_count, self.antecedent_count).expect("validated non-zero")
    }

    /// Distance between the printed and the count-derived confidence.
    pub fn confidence_deviation(&self) -> f64 {
        (self.printed_confidence.to_f64() - self.confidence().to_f64()).abs()
    }

    /// Whether the printed confidence is within half a unit of its second
    /// decimal of `joint / antecedent`, compared exactly.
    pub fn confidence_consistent(&self) -> bool {
        let (p, q) = (
            self.printed_confidence.numerator() as u128,
            self.printed_confidence.denominator() as u128,
        );
        let (j, a) = (self.joint_count as u128, self.antecedent_count as u128);
        (p * a).abs_diff(j * q) * 200 <= q * a
    }

    /// The rule with exact count-based confidence. Support is `joint / total`
    /// when the instance count is known and the bare joint count otherwise.
    pub fn to_rule(&self, total: Option<u64>) -> Result<AssociationRule> {
        let support = match total {
            Some(n) => Support::Ratio(Fraction::new(self.joint_count, n).ok_or(Error::EmptyDatabase)?),
            None => Support::Count(self.joint_count),
        };
        AssociationRule::new(
            self.rank,
            self.antecedent.clone(),
            self.consequent.clone(),
            support,
            self.confidence(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParsedWekaOutput {
    pub min_support: Option<Fraction>,
    pub min_support_instances: Option<u64>,
    pub min_metric: Option<Fraction>,
    pub cycles: Option<u32>,
    /// `(k, number of large k-itemsets)`.
    pub large_itemset_sizes: Vec<(usize, usize)>,
    pub rules: Vec<WekaRule>,
}

impl ParsedWekaOutput {
    pub fn to_rules(&self, total: Option<u64>) -> Result<Vec<AssociationRule>> {
        self.rules.iter().map(|r| r.to_rule(total)).collect()
    }
}

fn re(cell: &'static OnceLock<Regex>, pattern: &str) -> &'static Regex {
    cell.get_or_init(|| Regex::new(pattern).expect("valid regex"))
}

static MIN_SUPPORT: OnceLock<Regex> = OnceLock::new();
static MIN_METRIC: OnceLock<Regex> = OnceLock::new();
static CYCLES: OnceLock<Regex> = OnceLock::new();
static LARGE: OnceLock<Regex> = OnceLock::new();
static RULE_START: OnceLock<Regex> = OnceLock::new();
static RULE: OnceLock<Regex> = OnceLock::new();

fn fraction(text: &str, line: usize) -> Result<Fraction> {
    text.parse().map_err(|_| Error::WekaOutput {
        line,
        message: format!("bad number {text:?}"),
    })
}

fn header(out: &mut ParsedWekaOutput, line: &str, n: usize) -> Result<()> {
    if let Some(c) = re(&MIN_SUPPORT, r"^\s*Minimum support:\s*([0-9.]+)(?:\s*\((\d+) instances\))?").captures(line) {
        out.min_support = Some(fraction(&c[1], n)?);
        out.min_support_instances = c.get(2).and_then(|m| m.as_str().parse().ok());
    } else if let Some(c) = re(&MIN_METRIC, r"^\s*Minimum metric\s*<[^>]*>:\s*([0-9.]+)").captures(line) {
        out.min_metric = Some(fraction(&c[1], n)?);
    } else if let Some(c) = re(&CYCLES, r"^\s*Number of cycles performed:\s*(\d+)").captures(line) {
        out.cycles = c[1].parse().ok();
    } else if let Some(c) = re(&LARGE, r"^\s*Size of set of large itemsets L\((\d+)\):\s*(\d+)").captures(line) {
        let k = c[1].parse().unwrap_or(0);
        let count = c[2].parse().unwrap_or(0);
        out.large_itemset_sizes.push((k, count));
    }
    Ok(())
}

fn parse_rule(text: &str, line: usize) -> Result<WekaRule> {
    let err = |m: String| Error::WekaOutput { line, message: m };
    let c = re(
        &RULE,
        r"^\s*(\d+)\.\s+(.*?)\s+(\d+)\s+==>\s+(.*?)\s+(\d+)\s+<?conf:\(([0-9.]+)\)>?(?:\s.*)?$",
    )
    .captures(text)
    .ok_or_else(|| err(format!("malformed rule {:?}", text.trim())))?;
    let side = |s: &str| Itemset::parse_list(s).map_err(|e| err(e.to_string()));
    let antecedent_count: u64 = c[3].parse().map_err(|_| err("bad antecedent count".into()))?;
    let joint_count: u64 = c[5].parse().map_err(|_| err("bad joint count".into()))?;
    if antecedent_count == 0 || joint_count > antecedent_count {
        return Err(err(format!(
            "counts {joint_count}/{antecedent_count} are inconsistent"
        )));
    }
    Ok(WekaRule {
        rank: c[1].parse().map_err(|_| err("bad rule number".into()))?,
        antecedent: side(&c[2])?,
        consequent: side(&c[4])?,
        antecedent_count,
        joint_count,
        printed_confidence: fraction(&c[6], line)?,
        line,
    })
}

/// Parses an Apriori run's output. The `Best rules found:` section is
/// required; header fields are picked up wherever they appear before it.
pub fn parse_weka_rules(text: &str) -> Result<ParsedWekaOutput> {
    let mut out = ParsedWekaOutput::default();
    let lines: Vec<&str> = text.lines().collect();
    let start = lines
        .iter()
        .position(|l| l.trim_start().starts_with("Best rules found:"))
        .ok_or(Error::WekaOutput {
            line: lines.len(),
            message: "no \"Best rules found:\" section".into(),
        })?;
    for (i, line) in lines[..start].iter().enumerate() {
        header(&mut out, line, i + 1)?;
    }

    let starts = re(&RULE_START, r"^\s*\d+\.\s");
    let mut pending: Option<(usize, String)> = None;
    for (i, line) in lines.iter().enumerate().skip(start + 1) {
        if line.trim().is_empty() || line.trim() == "..." {
            continue;
        }
        if starts.is_match(line) {
            if let Some((n, text)) = pending.take() {
                out.rules.push(parse_rule(&text, n)?);
            }
            pending = Some((i + 1, line.to_string()));
        } else if let Some((_, text)) = pending.as_mut() {
            text.push(' ');
            text.push_str(line.trim());
        } else {
            return Err(Error::WekaOutput {
                line: i + 1,
                message: format!("unexpected line {:?}", line.trim()),
            });
        }
    }
    if let Some((n, text)) = pending {
        out.rules.push(parse_rule(&text, n)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const SAMPLE: &str = "Apriori
=======
Minimum support: 0.15 (409 instances)
Minimum metric <confidence>: 0.5
Number of cycles performed: 17
Generated sets of large itemsets:
Size of set of large itemsets L(1): 40 ...
Size of set of large itemsets L(9): 1

Best rules found:
1. service=B hand_1=forehand 1077 ==>
      type_2=ground 1077 conf:(1)
2. service=B hand_1=forehand type_1=ground 1072 ==>
      type_2=ground 1072 conf:(1)  ...
";

    #[test]
    fn sample_header() {
        let p = parse_weka_rules(SAMPLE).unwrap();
        assert_eq!(p.min_support, Some(Fraction::new(15, 100).unwrap()));
        assert_eq!(p.min_support_instances, Some(409));
        assert_eq!(p.min_metric, Some(Fraction::new(1, 2).unwrap()));
        assert_eq!(p.cycles, Some(17));
        assert_eq!(p.large_itemset_sizes, [(1, 40), (9, 1)]);
    }

    #[test]
    fn sample_rules() {
        let p = parse_weka_rules(SAMPLE).unwrap();
        assert_eq!(p.rules.len(), 2);
        let r = &p.rules[0];
        assert_eq!(r.antecedent, Itemset::parse_list("service=B hand_1=forehand").unwrap());
        assert_eq!(r.consequent, Itemset::parse_list("type_2=ground").unwrap());
        assert_eq!((r.antecedent_count, r.joint_count), (1077, 1077));
        assert!(r.printed_confidence.is_one());
        assert_eq!(r.line, 11);
        assert_eq!(p.rules[1].antecedent.len(), 3);
        assert_eq!(p.rules[1].joint_count, 1072);
    }

    #[test]
    fn modern_annotations_are_ignored() {
        let text = "Best rules found:\n\n 1. a=1 b=2 40 ==> c=3 36    <conf:(0.9)> lift:(1.5) lev:(0.05) [12] conv:(3.2)\n";
        let p = parse_weka_rules(text).unwrap();
        assert_eq!(p.rules[0].joint_count, 36);
        assert!(p.rules[0].confidence_deviation() <= 0.005);
        assert!(p.rules[0].confidence_consistent());
    }

    #[test]
    fn consistency_is_exact_at_the_rounding_edge() {
        // 5/8 = 0.625 printed as 0.62 is off by exactly 0.005.
        let text = "Best rules found:\n 1. a=1 8 ==> b=1 5    <conf:(0.62)>\n 2. a=1 8 ==> c=1 5    <conf:(0.61)>\n";
        let p = parse_weka_rules(text).unwrap();
        assert!(p.rules[0].confidence_consistent());
        assert!(!p.rules[1].confidence_consistent());
    }

    #[test]
    fn empty_section() {
        let p = parse_weka_rules("Apriori\n\nBest rules found:\n\n").unwrap();
        assert!(p.rules.is_empty());
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_weka_rules("Apriori\n"),
            Err(Error::WekaOutput { .. })
        ));
        let bad = "Best rules found:\n1. a=1 10 ==> b=1 conf:(1)\n";
        match parse_weka_rules(bad).unwrap_err() {
            Error::WekaOutput { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other}"),
        }
        let over = "Best rules found:\n1. a=1 10 ==> b=1 11 conf:(1)\n";
        assert!(parse_weka_rules(over).is_err());
    }

    #[test]
    fn support_with_and_without_total() {
        let p = parse_weka_rules(SAMPLE).unwrap();
        let rules = p.to_rules(None).unwrap();
        assert_eq!(rules[0].support, Support::Count(1077));
        let rules = p.to_rules(Some(2700)).unwrap();
        assert_eq!(rules[1].support, Support::Ratio(Fraction::new(1072, 2700).unwrap()));
        assert_eq!(rules[1].id, 2);
    }
}
