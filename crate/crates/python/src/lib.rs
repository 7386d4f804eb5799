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

//! Python bindings. Fractions cross the boundary as strings (`"0.9"`,
//! `"409/2727"`); items as `attribute=value` strings.

use courtmine::io::{self, NumberFormat};
use courtmine::tennis::{self, AttributeSelection, Tessellation};
use courtmine::{AssociationRule, Fraction, Item, Itemset, MiningParams, PruneMode, Support, TransactionDb};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fraction(s: &str) -> PyResult<Fraction> {
    s.parse().map_err(value_err)
}

fn items(set: &Itemset) -> Vec<String> {
    set.iter().map(Item::to_string).collect()
}

#[pyclass(name = "Rule", frozen, skip_from_py_object, module = "courtmine_py")]
#[derive(Clone)]
pub struct Rule(AssociationRule);

#[pymethods]
impl Rule {
    #[new]
    #[pyo3(signature = (id, antecedent, consequent, support, confidence))]
    fn new(id: u32, antecedent: Vec<String>, consequent: Vec<String>, support: &str, confidence: &str) -> PyResult<Self> {
        let side = |v: Vec<String>| -> PyResult<Itemset> {
            let parsed = v.iter().map(|s| s.parse::<Item>()).collect::<Result<Vec<_>, _>>().map_err(value_err)?;
            Itemset::from_items(parsed).map_err(value_err)
        };
        let support = match support.strip_prefix("count(").and_then(|s| s.strip_suffix(')')) {
            Some(c) => Support::Count(c.parse().map_err(value_err)?),
            None => Support::Ratio(fraction(support)?),
        };
        AssociationRule::new(id, side(antecedent)?, side(consequent)?, support, fraction(confidence)?)
            .map(Rule)
            .map_err(value_err)
    }

    #[getter]
    fn id(&self) -> u32 {
        self.0.id
    }

    #[getter]
    fn antecedent(&self) -> Vec<String> {
        items(&self.0.antecedent)
    }

    #[getter]
    fn consequent(&self) -> Vec<String> {
        items(&self.0.consequent)
    }

    /// Exact support, or `count(n)` when only an instance count is known.
    #[getter]
    fn support(&self) -> String {
        self.0.support.to_string()
    }

    #[getter]
    fn confidence(&self) -> String {
        self.0.confidence.to_string()
    }

    #[getter]
    fn support_float(&self) -> Option<f64> {
        self.0.support.to_f64()
    }

    #[getter]
    fn confidence_float(&self) -> f64 {
        self.0.confidence.to_f64()
    }

    fn __repr__(&self) -> String {
        format!("<Rule {}>", self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __eq__(&self, other: PyRef<'_, Rule>) -> bool {
        self.0 == other.0
    }
}

fn unwrap_rules(rules: &[PyRef<'_, Rule>]) -> Vec<AssociationRule> {
    rules.iter().map(|r| r.0.clone()).collect()
}

fn wrap_rules(rules: Vec<AssociationRule>) -> Vec<Rule> {
    rules.into_iter().map(Rule).collect()
}

#[pyclass(name = "MiningReport", frozen, get_all, module = "courtmine_py")]
pub struct PyMiningReport {
    final_min_support: String,
    min_support_instances: u64,
    cycles_performed: u32,
    large_itemset_counts: Vec<(usize, usize)>,
    rules: Vec<Rule>,
    warning: Option<String>,
}

#[pyclass(name = "PruneReport", frozen, get_all, module = "courtmine_py")]
pub struct PyPruneReport {
    mode: String,
    kept: Vec<Rule>,
    removed_redundant: Vec<(u32, u32)>,
    removed_subsumed: Vec<(u32, u32)>,
    removed_duplicate: Vec<(u32, u32)>,
}

/// Runs the support-lowering Apriori over transactions given as lists of
/// `attribute=value` strings.
#[pyfunction]
#[pyo3(signature = (transactions, required_rules=10, min_confidence="0.9", delta="0.05", upper_bound="1", lower_bound="0.1"))]
fn mine(
    py: Python<'_>,
    transactions: Vec<Vec<String>>,
    required_rules: usize,
    min_confidence: &str,
    delta: &str,
    upper_bound: &str,
    lower_bound: &str,
) -> PyResult<PyMiningReport> {
    let rows = transactions
        .iter()
        .map(|t| Itemset::parse_list(&t.join(" ")))
        .collect::<Result<Vec<_>, _>>()
        .map_err(value_err)?;
    let params = MiningParams {
        required_rules,
        min_confidence: fraction(min_confidence)?,
        support_delta: fraction(delta)?,
        support_upper_bound: fraction(upper_bound)?,
        support_lower_bound: fraction(lower_bound)?,
        ..MiningParams::default()
    };
    let db = TransactionDb::new(rows);
    let report = py.detach(|| courtmine::mine(&db, &params)).map_err(value_err)?;
    Ok(PyMiningReport {
        final_min_support: report.final_min_support.to_string(),
        min_support_instances: report.min_support_instances,
        cycles_performed: report.cycles_performed,
        large_itemset_counts: report.large_itemset_counts,
        rules: wrap_rules(report.rules),
        warning: report.warning.map(|w| format!("{w:?}")),
    })
}

/// Maximal non-redundant subset; `mode` is `inclusive` or `strict`.
#[pyfunction]
#[pyo3(signature = (rules, mode="inclusive"))]
fn prune(rules: Vec<PyRef<'_, Rule>>, mode: &str) -> PyResult<PyPruneReport> {
    let mode: PruneMode = mode.parse().map_err(value_err)?;
    let report = courtmine::maximal_nonredundant(&unwrap_rules(&rules), mode);
    Ok(PyPruneReport {
        mode: report.mode.to_string(),
        kept: wrap_rules(report.kept),
        removed_redundant: report.removed_redundant,
        removed_subsumed: report.removed_subsumed,
        removed_duplicate: report.removed_duplicate,
    })
}

/// Rules from Weka Apriori output. With `instances` the printed counts are
/// turned into support ratios.
#[pyfunction]
#[pyo3(signature = (text, instances=None))]
fn parse_weka_rules(text: &str, instances: Option<u64>) -> PyResult<Vec<Rule>> {
    let parsed = io::parse_weka_rules(text).map_err(value_err)?;
    parsed.to_rules(instances).map(wrap_rules).map_err(value_err)
}

#[pyfunction]
#[pyo3(signature = (rules, rational=false))]
fn export_rule_facts(rules: Vec<PyRef<'_, Rule>>, rational: bool) -> String {
    let format = if rational { NumberFormat::Rational } else { NumberFormat::Decimal };
    io::export_rule_facts(&unwrap_rules(&rules), format)
}

#[pyfunction]
fn parse_rule_facts(text: &str) -> PyResult<Vec<Rule>> {
    io::parse_rule_facts(text).map(wrap_rules).map_err(value_err)
}

fn court(grid: (u32, u32), size: (f64, f64)) -> PyResult<Tessellation> {
    Tessellation::new(grid.0, grid.1, size.0, size.1).map_err(value_err)
}

/// `(ix, iy)` of the cell containing `(x, y)`.
#[pyfunction]
#[pyo3(signature = (x, y, grid=(4, 6), size=(8.23, 23.77)))]
fn cell(x: f64, y: f64, grid: (u32, u32), size: (f64, f64)) -> PyResult<(u32, u32)> {
    court(grid, size)?.cell(x, y).map_err(value_err)
}

/// Hit-pair table of a match XML document as `(column names, rows)`.
#[pyfunction]
#[pyo3(signature = (xml, columns=None, grid=(4, 6), size=(8.23, 23.77)))]
fn hit_pair_table(
    xml: &str,
    columns: Option<Vec<String>>,
    grid: (u32, u32),
    size: (f64, f64),
) -> PyResult<(Vec<String>, Vec<Vec<String>>)> {
    let m = tennis::parse_match_xml(xml).map_err(value_err)?;
    let rows = tennis::build_hit_pairs(&m, &court(grid, size)?).map_err(value_err)?;
    let sel = match columns {
        Some(c) => AttributeSelection::new(c).map_err(value_err)?,
        None => AttributeSelection::default(),
    };
    let table = tennis::project(&rows, &sel);
    let names = table.columns.into_iter().map(|c| c.name).collect();
    Ok((names, table.rows))
}

#[pymodule]
fn courtmine_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Rule>()?;
    m.add_class::<PyMiningReport>()?;
    m.add_class::<PyPruneReport>()?;
    m.add_function(wrap_pyfunction!(mine, m)?)?;
    m.add_function(wrap_pyfunction!(prune, m)?)?;
    m.add_function(wrap_pyfunction!(parse_weka_rules, m)?)?;
    m.add_function(wrap_pyfunction!(export_rule_facts, m)?)?;
    m.add_function(wrap_pyfunction!(parse_rule_facts, m)?)?;
    m.add_function(wrap_pyfunction!(cell, m)?)?;
    m.add_function(wrap_pyfunction!(hit_pair_table, m)?)?;
    Ok(())
}
