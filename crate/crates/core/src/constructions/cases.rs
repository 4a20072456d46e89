//! Semantic checks of the case tables: every row's witness must strongly
//! resolve every pair the row's condition selects, and belong to the
//! construction. Checking uses distances, never the printed paths.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::pattern::{Condition, Env, LinearExpr, VertexPattern};
use super::{lemma_set, Family};
use crate::error::{Error, Result};
use crate::graph::{all_pairs_distances, GpParams, Graph};
use crate::resolution::strongly_resolves;

const CASE_TABLES_JSON: &str = include_str!("../../data/case_tables.json");

#[derive(Deserialize)]
struct RawFile {
    tables: Vec<RawTable>,
}

#[derive(Deserialize)]
struct RawTable {
    family: Family,
    cases: Vec<RawCase>,
}

#[derive(Deserialize)]
struct RawCase {
    case: String,
    pair: [String; 2],
    domain: RawDomain,
    rows: Vec<RawRow>,
}

#[derive(Deserialize)]
struct RawDomain {
    i: [String; 2],
    j: [String; 2],
    #[serde(rename = "where")]
    filters: Vec<String>,
}

#[derive(Deserialize)]
struct RawRow {
    id: String,
    witnesses: Vec<String>,
    condition: Vec<String>,
}

/// One table row: when every condition holds, every witness resolves the
/// pair and at least one witness lies in the construction.
#[derive(Debug, Clone)]
pub struct CaseRow {
    pub id: String,
    pub witnesses: Vec<VertexPattern>,
    pub condition: Vec<Condition>,
}

/// The pairs a case ranges over: `i` in an inclusive range (k, n only),
/// then `j` in an inclusive range that may depend on `i`, then filters.
#[derive(Debug, Clone)]
pub struct Case {
    pub id: String,
    pub pair: [VertexPattern; 2],
    i_range: [LinearExpr; 2],
    j_range: [LinearExpr; 2],
    filters: Vec<Condition>,
    pub rows: Vec<CaseRow>,
}

#[derive(Debug, Clone)]
pub struct CaseTable {
    pub family: Family,
    pub cases: Vec<Case>,
}

fn parse_all<T: std::str::FromStr<Err = Error>>(items: &[String]) -> Result<Vec<T>> {
    items.iter().map(|s| s.parse()).collect()
}

fn parse_tables(text: &str) -> Result<Vec<CaseTable>> {
    let raw: RawFile = serde_json::from_str(text)?;
    raw.tables
        .into_iter()
        .map(|t| {
            let cases = t
                .cases
                .into_iter()
                .map(|c| {
                    let i_range: [LinearExpr; 2] = [c.domain.i[0].parse()?, c.domain.i[1].parse()?];
                    let j_range: [LinearExpr; 2] = [c.domain.j[0].parse()?, c.domain.j[1].parse()?];
                    if i_range.iter().any(|e| e.uses_i() || e.uses_j()) || j_range.iter().any(LinearExpr::uses_j) {
                        return Err(Error::Pattern {
                            text: format!("case {}", c.case),
                            message: "range bounds may only refer to earlier variables".into(),
                        });
                    }
                    let rows = c
                        .rows
                        .into_iter()
                        .map(|r| {
                            Ok(CaseRow {
                                id: r.id,
                                witnesses: parse_all(&r.witnesses)?,
                                condition: parse_all(&r.condition)?,
                            })
                        })
                        .collect::<Result<_>>()?;
                    Ok(Case {
                        id: c.case,
                        pair: [c.pair[0].parse()?, c.pair[1].parse()?],
                        i_range,
                        j_range,
                        filters: parse_all(&c.domain.filters)?,
                        rows,
                    })
                })
                .collect::<Result<_>>()?;
            Ok(CaseTable { family: t.family, cases })
        })
        .collect()
}

pub fn case_tables() -> &'static [CaseTable] {
    static TABLES: OnceLock<Vec<CaseTable>> = OnceLock::new();
    TABLES.get_or_init(|| parse_tables(CASE_TABLES_JSON).expect("bundled case tables are well formed"))
}

pub fn case_table(family: Family) -> &'static CaseTable {
    case_tables()
        .iter()
        .find(|t| t.family == family)
        .expect("every family has a case table")
}

impl Case {
    /// Every `(i, j)` of the domain, in increasing `i` then `j`.
    fn instances(&self, k: i64, n: i64) -> Vec<Env> {
        let base = Env { i: 0, j: 0, k, n };
        let mut out = Vec::new();
        for i in self.i_range[0].eval(&base)..=self.i_range[1].eval(&base) {
            let with_i = Env { i, ..base };
            for j in self.j_range[0].eval(&with_i)..=self.j_range[1].eval(&with_i) {
                let env = Env { j, ..with_i };
                if self.filters.iter().all(|c| c.holds(&env)) {
                    out.push(env);
                }
            }
        }
        out
    }
}

/// A concrete instantiation, with vertex labels for reporting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Instance {
    pub k: i64,
    pub i: i64,
    pub j: i64,
    pub pair: [String; 2],
    pub witnesses: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowReport {
    pub case: String,
    pub row: String,
    pub instances: usize,
    pub failures: usize,
    pub first_failure: Option<Instance>,
}

/// Domain instances no row of the case selects.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseCoverage {
    pub case: String,
    pub instances: usize,
    pub uncovered: usize,
    pub first_uncovered: Option<Instance>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseReport {
    pub family: Family,
    pub k: usize,
    pub rows: Vec<RowReport>,
    pub coverage: Vec<CaseCoverage>,
}

impl CaseReport {
    pub fn failures(&self) -> usize {
        self.rows.iter().map(|r| r.failures).sum()
    }

    pub fn uncovered(&self) -> usize {
        self.coverage.iter().map(|c| c.uncovered).sum()
    }

    pub fn is_clean(&self) -> bool {
        self.failures() == 0 && self.uncovered() == 0
    }

    pub fn row(&self, id: &str) -> Option<&RowReport> {
        self.rows.iter().find(|r| r.row == id)
    }
}

impl fmt::Display for CaseReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "case table {} at k={}", self.family, self.k)?;
        for r in &self.rows {
            write!(f, "  row {:<3} instances {:>5}  failures {}", r.row, r.instances, r.failures)?;
            if let Some(x) = &r.first_failure {
                write!(f, "  first: i={} j={} pair ({}, {}) by {}", x.i, x.j, x.pair[0], x.pair[1], x.witnesses.join("+"))?;
            }
            writeln!(f)?;
        }
        for c in &self.coverage {
            writeln!(f, "  case {:<2} instances {:>5}  uncovered {}", c.case, c.instances, c.uncovered)?;
        }
        Ok(())
    }
}

/// Checks every row of the family's case table at parameter `k`.
pub fn check_case_rows(family: Family, k: usize) -> Result<CaseReport> {
    check_table(case_table(family), k)
}

fn check_table(table: &CaseTable, k: usize) -> Result<CaseReport> {
    let family = table.family;
    let construction = lemma_set(family, k)?;
    let params: GpParams = construction.params;
    let dm = all_pairs_distances(&Graph::generalized_petersen(params))?;
    let (ki, ni) = (k as i64, params.n as i64);
    let label = |v: usize| params.label_of(v).to_string();

    let mut rows = Vec::new();
    let mut coverage = Vec::new();
    for case in &table.cases {
        let instances = case.instances(ki, ni);
        let mut reports: Vec<RowReport> = case
            .rows
            .iter()
            .map(|r| RowReport { case: case.id.clone(), row: r.id.clone(), instances: 0, failures: 0, first_failure: None })
            .collect();
        let mut cov = CaseCoverage { case: case.id.clone(), instances: instances.len(), uncovered: 0, first_uncovered: None };

        for env in &instances {
            let a = case.pair[0].vertex(&params, env);
            let b = case.pair[1].vertex(&params, env);
            let describe = |witnesses: &[usize]| Instance {
                k: ki,
                i: env.i,
                j: env.j,
                pair: [label(a), label(b)],
                witnesses: witnesses.iter().map(|&w| label(w)).collect(),
            };
            let mut selected = false;
            for (row, report) in case.rows.iter().zip(reports.iter_mut()) {
                if !row.condition.iter().all(|c| c.holds(env)) {
                    continue;
                }
                selected = true;
                report.instances += 1;
                let witnesses: Vec<usize> = row.witnesses.iter().map(|w| w.vertex(&params, env)).collect();
                let all_resolve = witnesses.iter().all(|&w| strongly_resolves(&dm, w, a, b));
                let one_inside = witnesses.iter().any(|&w| construction.vertices.contains(w));
                if !(all_resolve && one_inside && a != b) {
                    report.failures += 1;
                    if report.first_failure.is_none() {
                        report.first_failure = Some(describe(&witnesses));
                    }
                }
            }
            if !selected {
                cov.uncovered += 1;
                if cov.first_uncovered.is_none() {
                    cov.first_uncovered = Some(describe(&[]));
                }
            }
        }
        rows.extend(reports);
        coverage.push(cov);
    }
    Ok(CaseReport { family, k, rows, coverage })
}
