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

//! Items (`attribute=value` atoms) and itemsets.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A nominal `attribute=value` atom.
///
/// Ordering is lexicographic by attribute, then value; this is the
/// canonical order used for all rule text.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Item {
    attribute: String,
    value: String,
}

pub(crate) fn check_token(token: &str) -> Result<()> {
    let reason = if token.is_empty() {
        "empty"
    } else if token.chars().any(char::is_whitespace) {
        "contains whitespace"
    } else if token.contains('=') {
        "contains '='"
    } else if token.contains(',') {
        "contains ','"
    } else {
        return Ok(());
    };
    Err(Error::InvalidToken {
        token: token.to_string(),
        reason,
    })
}

impl Item {
    pub fn new(attribute: impl Into<String>, value: impl Into<String>) -> Result<Self> {
        let attribute = attribute.into();
        let value = value.into();
        check_token(&attribute)?;
        check_token(&value)?;
        Ok(Item { attribute, value })
    }

    pub fn attribute(&self) -> &str {
        &self.attribute
    }

    pub fn value(&self) -> &str {
        &self.value
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.attribute, self.value)
    }
}

impl FromStr for Item {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (attr, value) = s.split_once('=').ok_or_else(|| Error::InvalidToken {
            token: s.to_string(),
            reason: "expected attribute=value",
        })?;
        Item::new(attr, value)
    }
}

/// A set of items assigning each attribute at most once.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Itemset {
    items: BTreeSet<Item>,
}

impl Itemset {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds an itemset, collapsing repeated items. Two different values
    /// for one attribute are rejected.
    pub fn from_items<I: IntoIterator<Item = Item>>(items: I) -> Result<Self> {
        let mut set = Itemset::new();
        for item in items {
            set.insert(item)?;
        }
        Ok(set)
    }

    /// Parses `a=1 b=2` / `a=1,b=2` style lists.
    pub fn parse_list(text: &str) -> Result<Self> {
        Itemset::from_items(
            text.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(str::parse)
                .collect::<Result<Vec<Item>>>()?,
        )
    }

    /// Returns `true` if the item was new.
    pub fn insert(&mut self, item: Item) -> Result<bool> {
        if let Some(existing) = self.get(&item.attribute) {
            if existing == item.value {
                return Ok(false);
            }
            return Err(Error::ConflictingAttribute {
                attribute: item.attribute.clone(),
                first: existing.to_string(),
                second: item.value,
            });
        }
        Ok(self.items.insert(item))
    }

    /// The value assigned to `attribute`, if any.
    pub fn get(&self, attribute: &str) -> Option<&str> {
        self.items
            .iter()
            .find(|i| i.attribute == attribute)
            .map(|i| i.value.as_str())
    }

    pub fn contains(&self, item: &Item) -> bool {
        self.items.contains(item)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &Item> + DoubleEndedIterator + '_ {
        self.items.iter()
    }

    pub fn is_subset(&self, other: &Itemset) -> bool {
        self.items.is_subset(&other.items)
    }

    pub fn is_disjoint(&self, other: &Itemset) -> bool {
        self.items.is_disjoint(&other.items)
    }

    pub fn union(&self, other: &Itemset) -> Result<Itemset> {
        let mut out = self.clone();
        for item in other.iter() {
            out.insert(item.clone())?;
        }
        Ok(out)
    }

    /// Items of `self` not in `other`.
    pub fn difference(&self, other: &Itemset) -> Itemset {
        Itemset {
            items: self.items.difference(&other.items).cloned().collect(),
        }
    }

    /// Canonical space-separated text, e.g. `hand_1=forehand service=B`.
    pub fn to_canonical_string(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Itemset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, item) in self.items.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{item}")?;
        }
        Ok(())
    }
}

impl<'a> IntoIterator for &'a Itemset {
    type Item = &'a Item;
    type IntoIter = std::collections::btree_set::Iter<'a, Item>;

    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(text: &str) -> Itemset {
        Itemset::parse_list(text).unwrap()
    }

    #[test]
    fn token_rules() {
        assert!(Item::new("hand_1", "forehand").is_ok());
        assert!(Item::new("", "x").is_err());
        assert!(Item::new("a b", "x").is_err());
        assert!(Item::new("a", "x=y").is_err());
        assert!(Item::new("a", "x,y").is_err());
        assert!("novalue".parse::<Item>().is_err());
    }

    #[test]
    fn canonical_order_ignores_insertion_order() {
        let a = set("type_2=ground service=B hand_1=forehand");
        let b = set("hand_1=forehand,type_2=ground,service=B");
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "hand_1=forehand service=B type_2=ground");
    }

    #[test]
    fn one_value_per_attribute() {
        let err = Itemset::parse_list("a=1 a=2").unwrap_err();
        assert!(matches!(err, Error::ConflictingAttribute { .. }));
        assert_eq!(set("a=1 a=1").len(), 1);
    }

    #[test]
    fn set_algebra() {
        let ab = set("a=1 b=1");
        let abc = set("a=1 b=1 c=1");
        assert!(ab.is_subset(&abc));
        assert!(!abc.is_subset(&ab));
        assert!(Itemset::new().is_subset(&ab));
        assert_eq!(abc.difference(&ab), set("c=1"));
        assert!(ab.is_disjoint(&set("c=1")));
        assert!(ab.union(&set("a=2")).is_err());
    }
}
