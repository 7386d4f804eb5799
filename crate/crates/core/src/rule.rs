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

//! Association rules `L ⇒ R`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::fraction::Fraction;
use crate::itemset::Itemset;

/// Rule support.
///
/// Mined rules know the database size and carry `joint / total`. Rules read
/// from Weka output without an instance count only know the joint count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Support {
    Ratio(Fraction),
    Count(u64),
}

impl Support {
    /// Support values of one kind are comparable; mixed kinds are not.
    pub fn compare(&self, other: &Support) -> Option<Ordering> {
        match (self, other) {
            (Support::Ratio(a), Support::Ratio(b)) => Some(a.cmp(b)),
            (Support::Count(a), Support::Count(b)) => Some(a.cmp(b)),
            _ => None,
        }
    }

    pub fn as_fraction(&self) -> Option<Fraction> {
        match self {
            Support::Ratio(f) => Some(*f),
            Support::Count(_) => None,
        }
    }

    pub fn to_f64(&self) -> Option<f64> {
        self.as_fraction().map(|f| f.to_f64())
    }
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Support::Ratio(r) => write!(f, "{r}"),
            Support::Count(c) => write!(f, "count({c})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssociationRule {
    pub id: u32,
    pub antecedent: Itemset,
    pub consequent: Itemset,
    pub support: Support,
    pub confidence: Fraction,
}

impl AssociationRule {
    /// Checks the structural invariants: positive id, non-empty disjoint
    /// sides, and a confidence no greater than one.
    pub fn new(
        id: u32,
        antecedent: Itemset,
        consequent: Itemset,
        support: Support,
        confidence: Fraction,
    ) -> Result<Self> {
        if id == 0 {
            return Err(Error::InvalidRule("rule ids start at 1".into()));
        }
        if antecedent.is_empty() || consequent.is_empty() {
            return Err(Error::InvalidRule(format!(
                "rule {id} has an empty side"
            )));
        }
        if !antecedent.is_disjoint(&consequent) {
            return Err(Error::InvalidRule(format!(
                "rule {id}: antecedent and consequent overlap"
            )));
        }
        // One attribute on both sides with different values could never be
        // satisfied by a single transaction.
        antecedent.union(&consequent).map_err(|e| {
            Error::InvalidRule(format!("rule {id}: {e}"))
        })?;
        if confidence > Fraction::ONE {
            return Err(Error::InvalidRule(format!(
                "rule {id}: confidence {confidence} exceeds 1"
            )));
        }
        if let Support::Ratio(s) = support {
            if s > Fraction::ONE {
                return Err(Error::InvalidRule(format!(
                    "rule {id}: support {s} exceeds 1"
                )));
            }
        }
        Ok(AssociationRule {
            id,
            antecedent,
            consequent,
            support,
            confidence,
        })
    }

    /// `L ∪ R`.
    pub fn body(&self) -> Itemset {
        self.antecedent
            .union(&self.consequent)
            .expect("validated rule sides never conflict")
    }

    /// `support ≤ confidence`, which holds for any rule measured on one
    /// database. Count-only support cannot be checked and passes.
    pub fn measures_consistent(&self) -> bool {
        match self.support {
            Support::Ratio(s) => s <= self.confidence,
            Support::Count(_) => true,
        }
    }

    pub fn same_sides(&self, other: &AssociationRule) -> bool {
        self.antecedent == other.antecedent && self.consequent == other.consequent
    }
}

impl fmt::Display for AssociationRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: [{}] => [{}] Sup:{} Conf:{}",
            self.id, self.antecedent, self.consequent, self.support, self.confidence
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(text: &str) -> Itemset {
        Itemset::parse_list(text).unwrap()
    }

    #[test]
    fn invariants() {
        let one = Fraction::ONE;
        let sup = Support::Count(3);
        assert!(AssociationRule::new(1, set("a=1"), set("b=1"), sup, one).is_ok());
        assert!(AssociationRule::new(0, set("a=1"), set("b=1"), sup, one).is_err());
        assert!(AssociationRule::new(1, Itemset::new(), set("b=1"), sup, one).is_err());
        assert!(AssociationRule::new(1, set("a=1"), Itemset::new(), sup, one).is_err());
        assert!(AssociationRule::new(1, set("a=1"), set("a=1"), sup, one).is_err());
        assert!(AssociationRule::new(1, set("a=1"), set("a=2"), sup, one).is_err());
        let over = Fraction::new(3, 2).unwrap();
        assert!(AssociationRule::new(1, set("a=1"), set("b=1"), sup, over).is_err());
    }

    #[test]
    fn support_comparison() {
        let half = Support::Ratio(Fraction::new(1, 2).unwrap());
        let third = Support::Ratio(Fraction::new(1, 3).unwrap());
        assert_eq!(half.compare(&third), Some(Ordering::Greater));
        assert_eq!(Support::Count(4).compare(&Support::Count(4)), Some(Ordering::Equal));
        assert_eq!(half.compare(&Support::Count(4)), None);
    }

    #[test]
    fn consistency_flag() {
        let r = AssociationRule::new(
            1,
            set("a=1"),
            set("b=1"),
            Support::Ratio(Fraction::new(9, 10).unwrap()),
            Fraction::new(1, 2).unwrap(),
        )
        .unwrap();
        assert!(!r.measures_consistent());
    }
}
