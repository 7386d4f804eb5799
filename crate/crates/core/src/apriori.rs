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

//! Level-wise frequent itemset mining, rule generation, and the Weka-style
//! scheduler that lowers minimum support until enough rules are found.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};

use rayon::prelude::*;

use crate::db::TransactionDb;
use crate::error::{Error, Result};
use crate::fraction::Fraction;
use crate::itemset::{Item, Itemset};
use crate::rule::{AssociationRule, Support};

#[derive(Debug, Clone, PartialEq)]
pub struct MiningParams {
    /// Weka `-N`.
    pub required_rules: usize,
    /// Weka `-C`.
    pub min_confidence: Fraction,
    pub support_delta: Fraction,
    pub support_upper_bound: Fraction,
    pub support_lower_bound: Fraction,
    pub max_cycles: u32,
}

impl Default for MiningParams {
    fn default() -> Self {
        MiningParams {
            required_rules: 10,
            min_confidence: frac(9, 10),
            support_delta: frac(5, 100),
            support_upper_bound: Fraction::ONE,
            support_lower_bound: frac(1, 10),
            max_cycles: 1000,
        }
    }
}

fn frac(n: u64, d: u64) -> Fraction {
    Fraction::new(n, d).expect("non-zero denominator")
}

impl MiningParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParams(m.to_string()));
        if self.required_rules == 0 {
            return bad("required rules must be positive");
        }
        if self.min_confidence.is_zero() || self.min_confidence > Fraction::ONE {
            return bad("minimum confidence must be in (0, 1]");
        }
        if self.support_delta.is_zero() || self.support_delta >= Fraction::ONE {
            return bad("support delta must be in (0, 1)");
        }
        if self.support_lower_bound.is_zero()
            || self.support_lower_bound > self.support_upper_bound
            || self.support_upper_bound > Fraction::ONE
        {
            return bad("support bounds must satisfy 0 < lower <= upper <= 1");
        }
        if self.max_cycles == 0 {
            return bad("max cycles must be positive");
        }
        Ok(())
    }

    /// Minimum support used in scheduler cycle `k` (1-based):
    /// `upper - k * delta`, or `None` once that drops below the lower bound.
    pub fn min_support_at(&self, cycle: u32) -> Option<Fraction> {
        let ub = self.support_upper_bound.reduced();
        let delta = self.support_delta.reduced();
        let den = ub.denominator() as u128 * delta.denominator() as u128;
        let minuend = ub.numerator() as u128 * delta.denominator() as u128;
        let step = cycle as u128 * delta.numerator() as u128 * ub.denominator() as u128;
        let num = minuend.checked_sub(step)?;
        if num == 0 {
            return None;
        }
        let g = num_integer::gcd(num, den);
        let value = Fraction::new(
            u64::try_from(num / g).ok()?,
            u64::try_from(den / g).ok()?,
        )?;
        (value >= self.support_lower_bound).then_some(value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequentItemset {
    pub itemset: Itemset,
    pub count: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MiningWarning {
    /// No rule reached the minimum confidence at any support level tried.
    NoRules,
    /// Support hit the lower bound (or the cycle cap) before the required
    /// number of rules was found.
    TargetNotReached { found: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MiningReport {
    pub final_min_support: Fraction,
    /// Instance count the final support threshold translates to.
    pub min_support_instances: u64,
    pub cycles_performed: u32,
    /// `(k, number of frequent k-itemsets)` for the final cycle.
    pub large_itemset_counts: Vec<(usize, usize)>,
    pub rules: Vec<AssociationRule>,
    pub warning: Option<MiningWarning>,
}

type Bitmap = Vec<u64>;

fn and_count(a: &[u64], b: &[u64]) -> (Bitmap, u64) {
    let mut count = 0u64;
    let out: Bitmap = a
        .iter()
        .zip(b)
        .map(|(x, y)| {
            let w = x & y;
            count += w.count_ones() as u64;
            w
        })
        .collect();
    (out, count)
}

/// Vertical (item → transaction bitmap) view of a database.
struct Vertical {
    items: Vec<Item>,
    tids: Vec<Bitmap>,
    n: u64,
}

/// A frequent itemset in item-id form; ids follow canonical item order.
struct IdSet {
    ids: Vec<u32>,
    tids: Bitmap,
    count: u64,
}

impl Vertical {
    fn build(db: &TransactionDb) -> Self {
        let items: Vec<Item> = db
            .transactions()
            .iter()
            .flat_map(|t| t.iter().cloned())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let index: HashMap<&Item, usize> = items.iter().enumerate().map(|(i, it)| (it, i)).collect();
        let words = db.len().div_ceil(64);
        let mut tids = vec![vec![0u64; words]; items.len()];
        for (row, t) in db.transactions().iter().enumerate() {
            for item in t {
                tids[index[item]][row / 64] |= 1 << (row % 64);
            }
        }
        Vertical {
            items,
            tids,
            n: db.len() as u64,
        }
    }

    /// All frequent itemsets, one vector per size, stopping at the first
    /// empty level.
    fn levels(&self, threshold: u64) -> Vec<Vec<IdSet>> {
        let first: Vec<IdSet> = self
            .tids
            .iter()
            .enumerate()
            .filter_map(|(i, bm)| {
                let count = bm.iter().map(|w| w.count_ones() as u64).sum::<u64>();
                (count >= threshold).then(|| IdSet {
                    ids: vec![i as u32],
                    tids: bm.clone(),
                    count,
                })
            })
            .collect();
        let mut levels = Vec::new();
        let mut current = first;
        while !current.is_empty() {
            let next = self.next_level(&current, threshold);
            levels.push(current);
            current = next;
        }
        levels
    }

    /// Prefix join of sorted k-itemsets, pruned by the (k)-subset check.
    fn next_level(&self, level: &[IdSet], threshold: u64) -> Vec<IdSet> {
        let known: HashSet<&[u32]> = level.iter().map(|s| s.ids.as_slice()).collect();
        let k = level[0].ids.len();
        (0..level.len())
            .into_par_iter()
            .flat_map_iter(|i| {
                let a = &level[i];
                let prefix = &a.ids[..k - 1];
                let mut out = Vec::new();
                for b in level[i + 1..].iter().take_while(|b| &b.ids[..k - 1] == prefix) {
                    let last_a = a.ids[k - 1] as usize;
                    let last_b = b.ids[k - 1] as usize;
                    if self.items[last_a].attribute() == self.items[last_b].attribute() {
                        continue;
                    }
                    let mut ids = a.ids.clone();
                    ids.push(b.ids[k - 1]);
                    if k >= 2 && !all_subsets_known(&ids, &known) {
                        continue;
                    }
                    let (tids, count) = and_count(&a.tids, &b.tids);
                    if count >= threshold {
                        out.push(IdSet { ids, tids, count });
                    }
                }
                out
            })
            .collect()
    }

    fn itemset(&self, ids: &[u32]) -> Itemset {
        Itemset::from_items(ids.iter().map(|&i| self.items[i as usize].clone()))
            .expect("frequent itemsets never repeat an attribute")
    }
}

/// Every k-subset obtained by dropping one of the first k-1 elements must be
/// frequent (the two dropping the last elements are the join parents).
fn all_subsets_known(ids: &[u32], known: &HashSet<&[u32]>) -> bool {
    let mut buf = Vec::with_capacity(ids.len() - 1);
    (0..ids.len() - 2).all(|skip| {
        buf.clear();
        buf.extend(ids.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v));
        known.contains(buf.as_slice())
    })
}

fn check_support(min_support: Fraction) -> Result<()> {
    if min_support.is_zero() || min_support > Fraction::ONE {
        return Err(Error::InvalidParams("minimum support must be in (0, 1]".into()));
    }
    Ok(())
}

/// Every itemset whose count reaches `ceil(min_support * |db|)`, ordered by
/// size and then canonically.
pub fn frequent_itemsets(db: &TransactionDb, min_support: Fraction) -> Result<Vec<FrequentItemset>> {
    if db.is_empty() {
        return Err(Error::EmptyDatabase);
    }
    check_support(min_support)?;
    let vertical = Vertical::build(db);
    let threshold = min_support.ceil_of(vertical.n);
    Ok(vertical
        .levels(threshold)
        .iter()
        .flatten()
        .map(|s| FrequentItemset {
            itemset: vertical.itemset(&s.ids),
            count: s.count,
        })
        .collect())
}

/// `(k, count)` pairs for a list of frequent itemsets.
pub fn level_sizes(frequents: &[FrequentItemset]) -> Vec<(usize, usize)> {
    let mut sizes: Vec<(usize, usize)> = Vec::new();
    for f in frequents {
        match sizes.iter_mut().find(|(k, _)| *k == f.itemset.len()) {
            Some((_, c)) => *c += 1,
            None => sizes.push((f.itemset.len(), 1)),
        }
    }
    sizes.sort();
    sizes
}

struct Candidate {
    antecedent: Itemset,
    consequent: Itemset,
    joint: u64,
    ante: u64,
}

/// Weka orders by confidence; ties go to the higher joint count and then
/// to canonical antecedent/consequent text.
fn rank(a: &Candidate, b: &Candidate) -> Ordering {
    let conf_a = Fraction::new(a.joint, a.ante).expect("ante > 0");
    let conf_b = Fraction::new(b.joint, b.ante).expect("ante > 0");
    conf_b
        .cmp(&conf_a)
        .then(b.joint.cmp(&a.joint))
        .then_with(|| a.antecedent.to_string().cmp(&b.antecedent.to_string()))
        .then_with(|| a.consequent.to_string().cmp(&b.consequent.to_string()))
}

fn finish(mut candidates: Vec<Candidate>, n: u64) -> Vec<AssociationRule> {
    candidates.sort_by(rank);
    candidates
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            AssociationRule::new(
                i as u32 + 1,
                c.antecedent,
                c.consequent,
                Support::Ratio(Fraction::new(c.joint, n).expect("n > 0")),
                Fraction::new(c.joint, c.ante).expect("ante > 0"),
            )
            .expect("generated rules satisfy the rule invariants")
        })
        .collect()
}

/// Splits each frequent itemset of size ≥ 2 into every `L ⇒ R` bipartition
/// and keeps those reaching `min_confidence`. Output is ranked by confidence
/// and numbered from 1.
pub fn generate_rules(
    frequents: &[FrequentItemset],
    db: &TransactionDb,
    min_confidence: Fraction,
) -> Result<Vec<AssociationRule>> {
    if db.is_empty() {
        return Err(Error::EmptyDatabase);
    }
    let counts: HashMap<&Itemset, u64> = frequents.iter().map(|f| (&f.itemset, f.count)).collect();
    let mut candidates = Vec::new();
    for f in frequents.iter().filter(|f| f.itemset.len() >= 2) {
        let items: Vec<&Item> = f.itemset.iter().collect();
        let m = items.len();
        for mask in 1u64..(1u64 << m) - 1 {
            let antecedent = Itemset::from_items(
                (0..m).filter(|i| mask >> i & 1 == 1).map(|i| items[i].clone()),
            )?;
            let ante = match counts.get(&antecedent) {
                Some(&c) => c,
                None => db.support_count(&antecedent)?,
            };
            if ante == 0 || Fraction::new(f.count, ante).expect("ante > 0") < min_confidence {
                continue;
            }
            let consequent = f.itemset.difference(&antecedent);
            candidates.push(Candidate {
                antecedent,
                consequent,
                joint: f.count,
                ante,
            });
        }
    }
    Ok(finish(candidates, db.len() as u64))
}

fn rules_from_levels(
    vertical: &Vertical,
    levels: &[Vec<IdSet>],
    min_confidence: Fraction,
) -> Vec<AssociationRule> {
    let counts: HashMap<&[u32], u64> = levels
        .iter()
        .flatten()
        .map(|s| (s.ids.as_slice(), s.count))
        .collect();
    let candidates: Vec<Candidate> = levels
        .iter()
        .skip(1)
        .flatten()
        .collect::<Vec<_>>()
        .par_iter()
        .flat_map_iter(|s| {
            let m = s.ids.len();
            let mut out = Vec::new();
            let mut left = Vec::with_capacity(m);
            for mask in 1u64..(1u64 << m) - 1 {
                left.clear();
                left.extend((0..m).filter(|i| mask >> i & 1 == 1).map(|i| s.ids[i]));
                // Subsets of a frequent itemset are frequent.
                let ante = counts[left.as_slice()];
                if Fraction::new(s.count, ante).expect("ante > 0") < min_confidence {
                    continue;
                }
                let right: Vec<u32> = (0..m).filter(|i| mask >> i & 1 == 0).map(|i| s.ids[i]).collect();
                out.push(Candidate {
                    antecedent: vertical.itemset(&left),
                    consequent: vertical.itemset(&right),
                    joint: s.count,
                    ante,
                });
            }
            out
        })
        .collect();
    finish(candidates, vertical.n)
}

/// Runs the support-lowering scheduler: cycle `k` mines at
/// `upper - k * delta` and the first cycle producing `required_rules` rules
/// ends the run. Rules are truncated to `required_rules`.
pub fn mine(db: &TransactionDb, params: &MiningParams) -> Result<MiningReport> {
    params.validate()?;
    if db.is_empty() {
        return Err(Error::EmptyDatabase);
    }
    let vertical = Vertical::build(db);
    let mut report = MiningReport {
        final_min_support: params.support_upper_bound,
        min_support_instances: params.support_upper_bound.ceil_of(vertical.n),
        cycles_performed: 0,
        large_itemset_counts: Vec::new(),
        rules: Vec::new(),
        warning: None,
    };
    for cycle in 1..=params.max_cycles {
        let Some(min_support) = params.min_support_at(cycle) else {
            break;
        };
        let threshold = min_support.ceil_of(vertical.n);
        let levels = vertical.levels(threshold);
        let rules = rules_from_levels(&vertical, &levels, params.min_confidence);
        report.final_min_support = min_support;
        report.min_support_instances = threshold;
        report.cycles_performed = cycle;
        report.large_itemset_counts = levels
            .iter()
            .enumerate()
            .map(|(k, l)| (k + 1, l.len()))
            .collect();
        report.rules = rules;
        if report.rules.len() >= params.required_rules {
            break;
        }
    }
    report.warning = match report.rules.len() {
        0 => Some(MiningWarning::NoRules),
        found if found < params.required_rules => Some(MiningWarning::TargetNotReached { found }),
        _ => None,
    };
    report.rules.truncate(params.required_rules);
    Ok(report)
}
