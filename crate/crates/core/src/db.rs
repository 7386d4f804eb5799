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

//! Transaction databases and the support/confidence measures.

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::fraction::Fraction;
use crate::itemset::{Item, Itemset};
use crate::rule::AssociationRule;

/// Attribute name → ordered nominal domain.
pub type Schema = IndexMap<String, Vec<String>>;

/// An immutable list of transactions plus the schema they are drawn from.
///
/// Duplicate transactions are legal and counted with multiplicity.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TransactionDb {
    transactions: Vec<Itemset>,
    schema: Schema,
}

impl TransactionDb {
    /// Builds a database whose schema is collected from the transactions,
    /// attributes and values in first-seen order.
    pub fn new(transactions: Vec<Itemset>) -> Self {
        let mut schema = Schema::new();
        for t in &transactions {
            for item in t {
                let domain = schema.entry(item.attribute().to_string()).or_default();
                if !domain.iter().any(|v| v == item.value()) {
                    domain.push(item.value().to_string());
                }
            }
        }
        TransactionDb {
            transactions,
            schema,
        }
    }

    /// Builds a database against an explicit schema, rejecting transactions
    /// that use undeclared attributes or values.
    pub fn with_schema(schema: Schema, transactions: Vec<Itemset>) -> Result<Self> {
        for t in &transactions {
            for item in t {
                check_item(&schema, item)?;
            }
        }
        Ok(TransactionDb {
            transactions,
            schema,
        })
    }

    pub fn transactions(&self) -> &[Itemset] {
        &self.transactions
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    /// Number of transactions containing every item of `itemset`.
    pub fn support_count(&self, itemset: &Itemset) -> Result<u64> {
        for item in itemset {
            if !self.schema.contains_key(item.attribute()) {
                return Err(Error::UnknownAttribute(item.attribute().to_string()));
            }
        }
        Ok(self
            .transactions
            .iter()
            .filter(|t| itemset.is_subset(t))
            .count() as u64)
    }

    /// `count(L ∪ R) / |db|`.
    pub fn rule_support(&self, rule: &AssociationRule) -> Result<Fraction> {
        if self.is_empty() {
            return Err(Error::EmptyDatabase);
        }
        let joint = self.support_count(&rule.body())?;
        Ok(Fraction::new(joint, self.len() as u64).expect("non-empty db"))
    }

    /// `count(L ∪ R) / count(L)`; an antecedent that never occurs is an error.
    pub fn rule_confidence(&self, rule: &AssociationRule) -> Result<Fraction> {
        let ante = self.support_count(&rule.antecedent)?;
        let joint = self.support_count(&rule.body())?;
        Fraction::new(joint, ante)
            .ok_or_else(|| Error::UndefinedConfidence(rule.antecedent.to_string()))
    }
}

fn check_item(schema: &Schema, item: &Item) -> Result<()> {
    let domain = schema
        .get(item.attribute())
        .ok_or_else(|| Error::UnknownAttribute(item.attribute().to_string()))?;
    if !domain.iter().any(|v| v == item.value()) {
        return Err(Error::UnknownValue {
            attribute: item.attribute().to_string(),
            value: item.value().to_string(),
        });
    }
    Ok(())
}
