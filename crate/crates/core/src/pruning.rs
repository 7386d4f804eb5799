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

//! Redundancy, subsumption, and the maximal non-redundant rule set.
//!
//! `r1 = L1 ⇒ R1` is *redundant* when another rule `r2` with confidence 1
//! has `L2 ⊆ L1` and `R1 ⊆ R2`. `r1` *subsumes* `r2` when `L1 ⊆ L2`,
//! `R2 ⊆ R1` and `r1` dominates `r2` in both support and confidence. A rule
//! is *maximal* when no other rule subsumes it.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::Error;
use crate::itemset::{Item, Itemset};
use crate::rule::AssociationRule;

/// How support and confidence dominance is compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PruneMode {
    /// `≥` on support and confidence.
    #[default]
    Inclusive,
    /// `>` on both.
    Strict,
}

impl fmt::Display for PruneMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PruneMode::Inclusive => "inclusive",
            PruneMode::Strict => "strict",
        })
    }
}

impl FromStr for PruneMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "inclusive" => Ok(PruneMode::Inclusive),
            "strict" => Ok(PruneMode::Strict),
            _ => Err(Error::InvalidParams(format!("unknown prune mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PruneReport {
    pub mode: PruneMode,
    pub kept: Vec<AssociationRule>,
    /// `(rule id, witness id)`.
    pub removed_redundant: Vec<(u32, u32)>,
    pub removed_subsumed: Vec<(u32, u32)>,
    /// Rules with the same sides as a lower-numbered rule, `(id, kept id)`.
    pub removed_duplicate: Vec<(u32, u32)>,
}

impl PruneReport {
    pub fn removed_count(&self) -> usize {
        self.removed_redundant.len() + self.removed_subsumed.len() + self.removed_duplicate.len()
    }
}

/// The lowest-id rule witnessing that `r1` is redundant within `rules`.
pub fn is_redundant(r1: &AssociationRule, rules: &[AssociationRule]) -> Option<u32> {
    rules
        .iter()
        .filter(|r2| {
            r2.id != r1.id
                && r2.confidence.is_one()
                && r2.antecedent.is_subset(&r1.antecedent)
                && r1.consequent.is_subset(&r2.consequent)
        })
        .map(|r2| r2.id)
        .min()
}

fn dominates(ord: Option<Ordering>, mode: PruneMode) -> bool {
    match (ord, mode) {
        (Some(o), PruneMode::Inclusive) => o != Ordering::Less,
        (Some(o), PruneMode::Strict) => o == Ordering::Greater,
        (None, _) => false,
    }
}

/// Whether `r1 ⊵ r2`. Rules with identical sides never subsume each other.
pub fn subsumes(r1: &AssociationRule, r2: &AssociationRule, mode: PruneMode) -> bool {
    !r1.same_sides(r2)
        && r1.antecedent.is_subset(&r2.antecedent)
        && r2.consequent.is_subset(&r1.consequent)
        && dominates(r1.support.compare(&r2.support), mode)
        && dominates(Some(r1.confidence.cmp(&r2.confidence)), mode)
}

/// Rule sides as bitsets over a shared item vocabulary.
struct Indexed {
    ante: Vec<u64>,
    cons: Vec<u64>,
    ante_len: usize,
    cons_len: usize,
}

fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn index(rules: &[AssociationRule]) -> Vec<Indexed> {
    let mut vocab: HashMap<&Item, usize> = HashMap::new();
    for r in rules {
        for item in r.antecedent.iter().chain(r.consequent.iter()) {
            let next = vocab.len();
            vocab.entry(item).or_insert(next);
        }
    }
    let words = vocab.len().div_ceil(64).max(1);
    let bits = |s: &Itemset| {
        let mut out = vec![0u64; words];
        for item in s {
            let i = vocab[item];
            out[i / 64] |= 1 << (i % 64);
        }
        out
    };
    rules
        .iter()
        .map(|r| Indexed {
            ante: bits(&r.antecedent),
            cons: bits(&r.consequent),
            ante_len: r.antecedent.len(),
            cons_len: r.consequent.len(),
        })
        .collect()
}

/// Collapses rules with identical sides onto the lowest id.
fn dedup(rules: &[AssociationRule]) -> (Vec<AssociationRule>, Vec<(u32, u32)>) {
    let mut first: BTreeMap<(&Itemset, &Itemset), &AssociationRule> = BTreeMap::new();
    for r in rules {
        first
            .entry((&r.antecedent, &r.consequent))
            .and_modify(|kept| {
                if r.id < kept.id {
                    *kept = r;
                }
            })
            .or_insert(r);
    }
    let mut unique = Vec::new();
    let mut dropped = Vec::new();
    for r in rules {
        let kept = first[&(&r.antecedent, &r.consequent)];
        if std::ptr::eq(kept, r) {
            unique.push(r.clone());
        } else {
            dropped.push((r.id, kept.id));
        }
    }
    (unique, dropped)
}

enum Verdict {
    Keep,
    Redundant(u32),
    Subsumed(u32),
}

/// Keeps every rule that is neither redundant nor subsumed by another input
/// rule. Removed rules still count as witnesses for the others.
pub fn maximal_nonredundant(rules: &[AssociationRule], mode: PruneMode) -> PruneReport {
    let (rules, removed_duplicate) = dedup(rules);
    let idx = index(&rules);
    let certain: Vec<usize> = (0..rules.len()).filter(|&i| rules[i].confidence.is_one()).collect();

    let verdicts: Vec<Verdict> = (0..rules.len())
        .into_par_iter()
        .map(|i| {
            let r1 = &rules[i];
            let x1 = &idx[i];
            let redundant = certain
                .iter()
                .filter(|&&j| {
                    j != i
                        && rules[j].id != r1.id
                        && idx[j].ante_len <= x1.ante_len
                        && x1.cons_len <= idx[j].cons_len
                        && subset(&idx[j].ante, &x1.ante)
                        && subset(&x1.cons, &idx[j].cons)
                })
                .map(|&j| rules[j].id)
                .min();
            if let Some(w) = redundant {
                return Verdict::Redundant(w);
            }
            let subsumer = (0..rules.len())
                .filter(|&j| {
                    j != i
                        && idx[j].ante_len <= x1.ante_len
                        && x1.cons_len <= idx[j].cons_len
                        && subset(&idx[j].ante, &x1.ante)
                        && subset(&x1.cons, &idx[j].cons)
                        && subsumes(&rules[j], r1, mode)
                })
                .map(|j| rules[j].id)
                .min();
            match subsumer {
                Some(w) => Verdict::Subsumed(w),
                None => Verdict::Keep,
            }
        })
        .collect();

    let mut report = PruneReport {
        mode,
        kept: Vec::new(),
        removed_redundant: Vec::new(),
        removed_subsumed: Vec::new(),
        removed_duplicate,
    };
    for (rule, verdict) in rules.into_iter().zip(verdicts) {
        match verdict {
            Verdict::Keep => report.kept.push(rule),
            Verdict::Redundant(w) => report.removed_redundant.push((rule.id, w)),
            Verdict::Subsumed(w) => report.removed_subsumed.push((rule.id, w)),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fraction::Fraction;
    use crate::rule::Support;

    fn rule(id: u32, l: &str, r: &str, sup: (u64, u64), conf: (u64, u64)) -> AssociationRule {
        AssociationRule::new(
            id,
            Itemset::parse_list(l).unwrap(),
            Itemset::parse_list(r).unwrap(),
            Support::Ratio(Fraction::new(sup.0, sup.1).unwrap()),
            Fraction::new(conf.0, conf.1).unwrap(),
        )
        .unwrap()
    }

    fn weka(id: u32, l: &str, r: &str, joint: u64, ante: u64) -> AssociationRule {
        AssociationRule::new(
            id,
            Itemset::parse_list(l).unwrap(),
            Itemset::parse_list(r).unwrap(),
            Support::Count(joint),
            Fraction::new(joint, ante).unwrap(),
        )
        .unwrap()
    }

    fn sample_pair() -> Vec<AssociationRule> {
        vec![
            weka(1, "service=B hand_1=forehand", "type_2=ground", 1077, 1077),
            weka(2, "service=B hand_1=forehand type_1=ground", "type_2=ground", 1072, 1072),
        ]
    }

    #[test]
    fn sample_redundancy() {
        let rules = sample_pair();
        assert_eq!(is_redundant(&rules[1], &rules), Some(1));
        assert_eq!(is_redundant(&rules[0], &rules), None);
        assert_eq!(is_redundant(&rules[0], &rules[..1]), None);
    }

    #[test]
    fn sample_subsumption_by_mode() {
        let rules = sample_pair();
        assert!(subsumes(&rules[0], &rules[1], PruneMode::Inclusive));
        assert!(!subsumes(&rules[0], &rules[1], PruneMode::Strict));
        assert!(!subsumes(&rules[1], &rules[0], PruneMode::Inclusive));
        assert!(!subsumes(&rules[0], &rules[0], PruneMode::Inclusive));
    }

    #[test]
    fn sample_prune() {
        let report = maximal_nonredundant(&sample_pair(), PruneMode::Inclusive);
        assert_eq!(report.kept.iter().map(|r| r.id).collect::<Vec<_>>(), [1]);
        assert_eq!(report.removed_redundant, [(2, 1)]);
        assert!(report.removed_subsumed.is_empty());
    }

    #[test]
    fn four_condition_example() {
        let r1 = rule(1, "a=1", "b=1 c=1", (5, 10), (9, 10));
        let r2 = rule(2, "a=1 d=1", "b=1", (3, 10), (8, 10));
        for mode in [PruneMode::Inclusive, PruneMode::Strict] {
            assert!(subsumes(&r1, &r2, mode));
            assert!(!subsumes(&r2, &r1, mode));
        }
    }

    #[test]
    fn duplicate_sides_collapse_to_lowest_id() {
        let a = rule(7, "a=1", "b=1", (1, 2), (1, 1));
        let b = rule(3, "a=1", "b=1", (1, 2), (1, 1));
        assert_eq!(is_redundant(&a, &[a.clone(), b.clone()]), Some(3));
        assert_eq!(is_redundant(&b, &[a.clone(), b.clone()]), Some(7));
        let report = maximal_nonredundant(&[a, b], PruneMode::Inclusive);
        assert_eq!(report.kept.len(), 1);
        assert_eq!(report.kept[0].id, 3);
        assert_eq!(report.removed_duplicate, [(7, 3)]);
    }

    #[test]
    fn unrelated_rules_all_kept() {
        let rules = vec![
            rule(1, "a=1", "b=1", (1, 2), (3, 4)),
            rule(2, "c=1", "d=1", (1, 3), (1, 1)),
            rule(3, "e=1", "a=1", (1, 4), (1, 2)),
        ];
        let report = maximal_nonredundant(&rules, PruneMode::Inclusive);
        assert_eq!(report.kept, rules);
    }

    #[test]
    fn chain_keeps_only_top() {
        // r1 ⊵ r2 ⊵ r3, none with confidence 1
        let r1 = rule(1, "a=1", "b=1 c=1 d=1", (6, 10), (9, 10));
        let r2 = rule(2, "a=1 e=1", "b=1 c=1", (5, 10), (8, 10));
        let r3 = rule(3, "a=1 e=1 f=1", "b=1", (4, 10), (7, 10));
        assert!(subsumes(&r1, &r2, PruneMode::Inclusive));
        assert!(subsumes(&r2, &r3, PruneMode::Inclusive));
        let report = maximal_nonredundant(&[r3, r2, r1], PruneMode::Inclusive);
        assert_eq!(report.kept.iter().map(|r| r.id).collect::<Vec<_>>(), [1]);
        assert_eq!(report.removed_subsumed, [(3, 1), (2, 1)]);
    }

    #[test]
    fn near_one_confidence_is_not_a_witness() {
        let r2 = rule(2, "a=1", "b=1 c=1", (1, 2), (9999, 10000));
        let r1 = rule(1, "a=1 d=1", "b=1", (1, 4), (1, 2));
        assert_eq!(is_redundant(&r1, &[r1.clone(), r2]), None);
    }

    #[test]
    fn mixed_support_kinds_never_dominate() {
        let r1 = weka(1, "a=1", "b=1 c=1", 10, 10);
        let r2 = rule(2, "a=1 d=1", "b=1", (1, 4), (1, 2));
        assert!(!subsumes(&r1, &r2, PruneMode::Inclusive));
    }

    #[test]
    fn prune_mode_parsing() {
        assert_eq!("strict".parse::<PruneMode>().unwrap(), PruneMode::Strict);
        assert_eq!("Inclusive".parse::<PruneMode>().unwrap(), PruneMode::Inclusive);
        assert!("loose".parse::<PruneMode>().is_err());
    }
}
