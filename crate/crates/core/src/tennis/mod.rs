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

//! Tennis match ingestion: XML parsing, court tessellation and the
//! temporal hit-pair table.

pub mod table;
pub mod tessellation;
pub mod xml;

pub use table::{
    build_hit_pairs, project, table_to_transactions, AttributeSelection, Column, HitFeatures,
    HitPairRow, Table, MISSING,
};
pub use tessellation::Tessellation;
pub use xml::{parse_match_bytes, parse_match_xml, write_match_xml, Hand, Hit, Match};
