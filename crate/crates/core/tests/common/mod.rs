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

//! Brute-force reference implementations and data generators shared by the
//! integration tests. Nothing here calls into the code under test except to
//! build values.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use courtmine::tennis::xml::{Game, Hand, Hit, MatchSet, Point};
use courtmine::tennis::{Match, Tessellation};
use courtmine::{AssociationRule, Fraction, Item, Itemset, Support, TransactionDb};
use rand::rngs::StdRng;
use rand::Rng;

pub const SAMPLE_MATCH: &str = r#"<?xml version="1.0" encoding="ISO-8859-1"?>
<match>
  <set id="1">
    <game id="1" service="A">
      <point id="1" top="B" service="A" winner="A" error="0">
        <hit id="1" hand="forehand" type="ground" time="00:00:42" x="0.17" y="-12.07"/>
        <hit id="2" hand="backhand" type="ground" time="00:00:44" x="-0.49" y="5.89"/>
        <hit id="3" hand="backhand" type="ground" time="00:00:46" x="-3.92" y="-3.42"/>
        <hit id="4" hand="forehand" type="ground" time="00:00:48" x="3.56" y="2.06"/>
      </point>
    </game>
  </set>
</match>
"#;

pub const WEKA_SAMPLE: &str = include_str!("../fixtures/weka_sample.txt");
pub const WEKA_ANNOTATED: &str = include_str!("../fixtures/weka_annotated.txt");

pub fn frac(n: u64, d: u64) -> Fraction {
    Fraction::new(n, d).unwrap()
}

/// `a * d >= c * b` for `a/b >= c/d`.
pub fn ge(a: u64, b: u64, c: u64, d: u64) -> bool {
    a as u128 * d as u128 >= c as u128 * b as u128
}

/// Random transactions over `attrs` attributes with `values` values each.
/// Every attribute is present in a transaction with probability `p`.
pub fn random_db(rng: &mut StdRng, attrs: usize, values: usize, n: usize, p: f64) -> TransactionDb {
    let rows = (0..n)
        .map(|_| {
            let mut items = Vec::new();
            for a in 0..attrs {
                if rng.gen_bool(p) {
                    items.push(Item::new(format!("a{a}"), rng.gen_range(0..values).to_string()).unwrap());
                }
            }
            Itemset::from_items(items).unwrap()
        })
        .collect();
    TransactionDb::new(rows)
}

pub fn count(db: &TransactionDb, set: &Itemset) -> u64 {
    db.transactions().iter().filter(|t| set.is_subset(t)).count() as u64
}

/// Every itemset over the observed items whose count reaches
/// `ceil(ms * n)`, found by enumerating all subsets.
pub fn brute_frequent(db: &TransactionDb, ms: Fraction) -> BTreeMap<Itemset, u64> {
    let items: Vec<Item> = db
        .transactions()
        .iter()
        .flat_map(|t| t.iter().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    assert!(items.len() <= 16, "too many items for enumeration");
    let n = db.len() as u128;
    let r = ms.reduced();
    let threshold = ((r.numerator() as u128 * n).div_ceil(r.denominator() as u128)) as u64;
    let mut out = BTreeMap::new();
    for mask in 1u32..(1 << items.len()) {
        let chosen = (0..items.len()).filter(|i| mask >> i & 1 == 1).map(|i| items[i].clone());
        let Ok(set) = Itemset::from_items(chosen) else {
            continue;
        };
        if set.len() != mask.count_ones() as usize {
            continue;
        }
        let c = count(db, &set);
        if c >= threshold {
            out.insert(set, c);
        }
    }
    out
}

/// `(L, R, joint count, antecedent count)` for every rule over the frequent
/// itemsets whose confidence reaches `min_conf`.
pub fn brute_rules(
    db: &TransactionDb,
    frequent: &BTreeMap<Itemset, u64>,
    min_conf: Fraction,
) -> BTreeSet<(Itemset, Itemset, u64, u64)> {
    let mut out = BTreeSet::new();
    for (set, &joint) in frequent {
        let items: Vec<Item> = set.iter().cloned().collect();
        if items.len() < 2 {
            continue;
        }
        for mask in 1u32..(1 << items.len()) - 1 {
            let (l, r): (Vec<_>, Vec<_>) = (0..items.len()).partition(|i| mask >> i & 1 == 1);
            let l = Itemset::from_items(l.into_iter().map(|i| items[i].clone())).unwrap();
            let r = Itemset::from_items(r.into_iter().map(|i| items[i].clone())).unwrap();
            let lc = count(db, &l);
            if ge(joint, lc, min_conf.numerator(), min_conf.denominator()) {
                out.insert((l, r, joint, lc));
            }
        }
    }
    out
}

fn sup(r: &AssociationRule) -> Fraction {
    match r.support {
        Support::Ratio(f) => f,
        Support::Count(_) => panic!("oracle expects ratio support"),
    }
}

/// Direct reading of the redundancy definition.
pub fn naive_redundant(r1: &AssociationRule, set: &[AssociationRule]) -> bool {
    set.iter().any(|r2| {
        !(r2.antecedent == r1.antecedent && r2.consequent == r1.consequent)
            && r2.confidence.is_one()
            && r2.antecedent.is_subset(&r1.antecedent)
            && r1.consequent.is_subset(&r2.consequent)
    })
}

/// Some other rule `r2` with `r2 ⊵ r1`.
pub fn naive_subsumed(r1: &AssociationRule, set: &[AssociationRule], strict: bool) -> bool {
    set.iter().any(|r2| {
        let dominates = if strict {
            sup(r2) > sup(r1) && r2.confidence > r1.confidence
        } else {
            sup(r2) >= sup(r1) && r2.confidence >= r1.confidence
        };
        !(r2.antecedent == r1.antecedent && r2.consequent == r1.consequent)
            && r2.antecedent.is_subset(&r1.antecedent)
            && r1.consequent.is_subset(&r2.consequent)
            && dominates
    })
}

/// Ids the pruning definition keeps: first of each `(L, R)` group, then
/// neither redundant nor subsumed within the deduplicated set.
pub fn naive_kept(rules: &[AssociationRule], strict: bool) -> Vec<u32> {
    let mut seen = BTreeMap::new();
    for r in rules {
        let e = seen.entry((r.antecedent.clone(), r.consequent.clone())).or_insert(r.clone());
        if r.id < e.id {
            *e = r.clone();
        }
    }
    let dedup: Vec<AssociationRule> = rules
        .iter()
        .filter(|r| seen[&(r.antecedent.clone(), r.consequent.clone())].id == r.id)
        .cloned()
        .collect();
    dedup
        .iter()
        .filter(|r| !naive_redundant(r, &dedup) && !naive_subsumed(r, &dedup, strict))
        .map(|r| r.id)
        .collect()
}

/// Random rules over `attrs` attributes with 3 values each. Confidences
/// come from a small set so ties and exact ones are common.
pub fn random_rules(rng: &mut StdRng, n: usize, attrs: usize) -> Vec<AssociationRule> {
    const CONFS: [(u64, u64); 5] = [(1, 2), (3, 4), (9, 10), (1, 1), (1, 1)];
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let mut l = Vec::new();
        let mut r = Vec::new();
        for a in 0..attrs {
            match rng.gen_range(0..6) {
                0 => l.push(Item::new(format!("a{a}"), rng.gen_range(0..3).to_string()).unwrap()),
                1 => r.push(Item::new(format!("a{a}"), rng.gen_range(0..3).to_string()).unwrap()),
                _ => {}
            }
        }
        if l.is_empty() || r.is_empty() {
            continue;
        }
        let (cn, cd) = CONFS[rng.gen_range(0..CONFS.len())];
        let conf = frac(cn, cd);
        let s = rng.gen_range(1..=4u64);
        let support = frac(s * cn, 4 * cd);
        let id = out.len() as u32 + 1;
        out.push(
            AssociationRule::new(
                id,
                Itemset::from_items(l).unwrap(),
                Itemset::from_items(r).unwrap(),
                Support::Ratio(support),
                conf,
            )
            .unwrap(),
        );
    }
    out
}

/// Linear scan over the cell boundaries: band 1 below the court,
/// inner cell `i` on `[b(i-1), b(i))` (the last one closed), band `n + 2`
/// above.
pub fn scan_index(v: f64, bounds: &[f64]) -> u32 {
    let n = bounds.len() - 1;
    if v < bounds[0] {
        return 1;
    }
    for i in 0..n {
        let last = i + 1 == n;
        if v >= bounds[i] && (v < bounds[i + 1] || (last && v <= bounds[i + 1])) {
            return i as u32 + 2;
        }
    }
    n as u32 + 2
}

pub fn scan_cell(t: &Tessellation, x: f64, y: f64) -> (u32, u32) {
    (scan_index(x, &t.x_boundaries()), scan_index(y, &t.y_boundaries()))
}

/// Sample coordinates for one axis: a uniform sweep from beyond one court
/// line to beyond the other plus every boundary and its float neighbours.
pub fn axis_samples(bounds: &[f64], half: f64, sweep: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..sweep)
        .map(|i| -half - 1.0 + (2.0 * half + 2.0) * i as f64 / (sweep - 1) as f64)
        .collect();
    for &b in bounds {
        v.extend([b, b.next_up(), b.next_down()]);
    }
    v.extend([0.0, -0.0]);
    v
}

fn hit(rng: &mut StdRng, id: u32, kind: &str, x: f64) -> Hit {
    Hit {
        id,
        hand: if rng.gen_bool(0.5) { Hand::Forehand } else { Hand::Backhand },
        kind: kind.to_string(),
        time: Some(format!("00:{:02}:{:02}", id / 60, id % 60)),
        x,
        y: rng.gen_range(-13.0..13.0),
        extra_attributes: Vec::new(),
    }
}

/// A match whose points have the given hit counts, spread over games of
/// up to four points.
pub fn match_with_points(rng: &mut StdRng, sizes: &[usize]) -> Match {
    let mut games = Vec::new();
    for (g, chunk) in sizes.chunks(4).enumerate() {
        let points = chunk
            .iter()
            .enumerate()
            .map(|(p, &k)| Point {
                id: Some((p + 1).to_string()),
                service: Some(if g % 2 == 0 { "A" } else { "B" }.to_string()),
                winner: Some(if rng.gen_bool(0.5) { "A" } else { "B" }.to_string()),
                error: Some(rng.gen_range(0..3).to_string()),
                hits: (1..=k as u32)
                    .map(|i| {
                        let kind = ["ground", "volley", "lob"][rng.gen_range(0..3)];
                        let x = rng.gen_range(-5.0..5.0);
                        hit(rng, i, kind, x)
                    })
                    .collect(),
                ..Point::default()
            })
            .collect();
        games.push(Game {
            id: Some((g + 1).to_string()),
            points,
            ..Game::default()
        });
    }
    Match {
        sets: vec![MatchSet {
            id: Some("1".into()),
            games,
            ..MatchSet::default()
        }],
        ..Match::default()
    }
}
