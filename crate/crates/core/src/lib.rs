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

//! Association rule mining over tessellated tennis hit data.
//!
//! The crate covers the whole batch process: match XML is turned into a
//! temporal hit-pair table, mined with a Weka-compatible Apriori, and the
//! resulting rules are pruned to the maximal non-redundant set.

pub mod apriori;
pub mod db;
pub mod error;
pub mod fraction;
pub mod io;
pub mod itemset;
pub mod pipeline;
pub mod pruning;
pub mod rule;
pub mod tennis;

pub use apriori::{
    frequent_itemsets, generate_rules, mine, FrequentItemset, MiningParams, MiningReport, MiningWarning,
};
pub use db::TransactionDb;
pub use error::{Error, Result};
pub use fraction::Fraction;
pub use itemset::{Item, Itemset};
pub use pruning::{is_redundant, maximal_nonredundant, subsumes, PruneMode, PruneReport};
pub use rule::{AssociationRule, Support};
pub use pipeline::{run_iteration, sweep, InputKind, IterationReport, PipelineError, ReportFormat, RunConfig};
