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

//! Text formats at the pipeline boundary.

pub mod arff;
pub mod facts;
pub mod weka;

pub use arff::{read_arff, write_arff};
pub use facts::{export_rule_facts, parse_rule_facts, NumberFormat};
pub use weka::{parse_weka_rules, ParsedWekaOutput, WekaRule};
