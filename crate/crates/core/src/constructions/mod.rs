//! Explicit strong resolving sets of GP(n,2): the three infinite families,
//! the small-n basis catalog, and semantic checks of the case tables that
//! justify the families.

mod cases;
pub mod pattern;

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GpParams, Graph, Label};
use crate::vertex_set::VertexSet;

pub use cases::{check_case_rows, CaseCoverage, CaseReport, Instance, RowReport};

/// Residue class of n modulo 4 that a construction targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// n = 4k + 2
    #[serde(rename = "4k+2")]
    FourKPlus2,
    /// n = 4k
    #[serde(rename = "4k")]
    FourK,
    /// n = 4k + 1
    #[serde(rename = "4k+1")]
    FourKPlus1,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::FourKPlus2, Family::FourK, Family::FourKPlus1];

    pub fn order(self, k: usize) -> usize {
        match self {
            Family::FourKPlus2 => 4 * k + 2,
            Family::FourK => 4 * k,
            Family::FourKPlus1 => 4 * k + 1,
        }
    }

    pub fn claimed_size(self, k: usize) -> usize {
        match self {
            Family::FourKPlus2 => 4 * k + 2,
            Family::FourK => 5 * k,
            Family::FourKPlus1 => 5 * k + 5,
        }
    }

    /// Smallest k for which the construction is asserted to resolve.
    pub fn min_k(self) -> usize {
        3
    }

    pub fn params(self, k: usize) -> Result<GpParams> {
        GpParams::new(self.order(k), 2)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::FourKPlus2 => "4k+2",
            Family::FourK => "4k",
            Family::FourKPlus1 => "4k+1",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "4k+2" | "4k2" => Ok(Family::FourKPlus2),
            "4k" => Ok(Family::FourK),
            "4k+1" | "4k1" => Ok(Family::FourKPlus1),
            other => Err(Error::BadLabel(format!("unknown family `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaSet {
    pub family: Family,
    pub k: usize,
    pub params: GpParams,
    pub vertices: VertexSet,
    pub claimed_size: usize,
    /// `k` is below the range the construction is stated for.
    pub below_range: bool,
}

/// The family's resolving set for parameter `k`, indices taken modulo n.
pub fn lemma_set(family: Family, k: usize) -> Result<LemmaSet> {
    if k < 1 {
        return Err(Error::LemmaParam(k));
    }
    let params = family.params(k)?;
    let ki = k as i64;
    let mut vertices = VertexSet::new(2 * params.n);
    let mut add = |v: usize| {
        vertices.insert(v);
    };
    match family {
        Family::FourKPlus2 => {
            for i in 0..=2 * ki {
                add(params.u(2 * i));
                add(params.v(i));
            }
        }
        Family::FourK => {
            (0..2 * ki).for_each(|i| add(params.u(i)));
            (0..ki).for_each(|i| add(params.u(2 * ki + 2 * i + 1)));
            (0..2 * ki).for_each(|i| add(params.v(2 * i + 1)));
        }
        Family::FourKPlus1 => {
            (0..ki).for_each(|i| add(params.u(2 * i + 1)));
            (0..=2 * ki).for_each(|i| add(params.u(2 * ki + i)));
            (0..=2 * ki + 3).for_each(|i| add(params.v(i)));
        }
    }
    Ok(LemmaSet {
        family,
        k,
        params,
        vertices,
        claimed_size: family.claimed_size(k),
        below_range: k < family.min_k(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub n: usize,
    /// Published strong metric dimension.
    pub sdim: usize,
    /// Published basis, verbatim.
    pub basis: VertexSet,
}

impl CatalogEntry {
    /// The published set's size differs from the published dimension.
    pub fn has_discrepancy(&self) -> bool {
        self.basis.len() != self.sdim
    }

    pub fn params(&self) -> GpParams {
        GpParams::new(self.n, 2).expect("catalog n is valid")
    }
}

#[derive(Deserialize)]
struct CatalogFile {
    entries: Vec<RawCatalogEntry>,
}

#[derive(Deserialize)]
struct RawCatalogEntry {
    n: usize,
    sdim: usize,
    basis: Vec<String>,
}

const CATALOG_JSON: &str = include_str!("../../data/catalog.json");

fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>> {
    let file: CatalogFile = serde_json::from_str(text)?;
    file.entries
        .into_iter()
        .map(|raw| {
            let params = GpParams::new(raw.n, 2)?;
            let mut basis = VertexSet::new(2 * raw.n);
            for token in &raw.basis {
                let label: Label = token.parse()?;
                let v = params
                    .vertex_of(label)
                    .ok_or_else(|| Error::BadLabel(token.clone()))?;
                basis.insert(v);
            }
            Ok(CatalogEntry { n: raw.n, sdim: raw.sdim, basis })
        })
        .collect()
}

/// All catalog rows, sorted by n.
pub fn catalog() -> &'static [CatalogEntry] {
    static CATALOG: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CATALOG.get_or_init(|| parse_catalog(CATALOG_JSON).expect("bundled catalog is well formed"))
}

pub fn catalog_entry(n: usize) -> Result<CatalogEntry> {
    catalog()
        .iter()
        .find(|e| e.n == n)
        .cloned()
        .ok_or(Error::NotInCatalog(n))
}

/// Labels of a GP vertex set, in id order (all `u`s then all `v`s).
pub fn labels(params: &GpParams, set: &VertexSet) -> Vec<String> {
    set.iter().map(|v| params.label_of(v).to_string()).collect()
}

/// Parses a `--set` style specification against `g`: either a comma list of
/// `u<i>`/`v<i>` labels and raw ids, or `lemma:<family>` for GP(n,2) graphs
/// whose n fits the family.
pub fn parse_set_spec(g: &Graph, spec: &str) -> Result<VertexSet> {
    if let Some(name) = spec.trim().strip_prefix("lemma:") {
        let family: Family = name.parse()?;
        let params = g
            .gp_params()
            .filter(|p| p.k == 2)
            .ok_or_else(|| Error::BadLabel(format!("{spec} needs a GP(n,2) graph")))?;
        let k = (1..=params.n)
            .find(|&k| family.order(k) == params.n)
            .ok_or_else(|| Error::BadLabel(format!("{spec} does not apply to n={}", params.n)))?;
        return Ok(lemma_set(family, k)?.vertices);
    }
    let mut set = VertexSet::new(g.n_vertices());
    for token in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        set.insert(g.parse_vertex(token)?);
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::all_pairs_distances;
    use crate::resolution::{build_constraints, mmd_pairs, redundant_member, verify_resolving_set};

    fn verify_on_gp(params: GpParams, set: &VertexSet) -> bool {
        let dm = all_pairs_distances(&Graph::generalized_petersen(params)).unwrap();
        verify_resolving_set(&build_constraints(&dm), set).is_ok()
    }

    #[test]
    fn four_k_plus_2_k3() {
        let s = lemma_set(Family::FourKPlus2, 3).unwrap();
        assert_eq!(s.params.n, 14);
        assert_eq!(s.vertices.len(), 14);
        assert_eq!(labels(&s.params, &s.vertices).join(","), "u0,u2,u4,u6,u8,u10,u12,v0,v1,v2,v3,v4,v5,v6");
        assert!(!s.below_range);
        assert!(verify_on_gp(s.params, &s.vertices));
    }

    #[test]
    fn four_k_k3_has_15_vertices() {
        let s = lemma_set(Family::FourK, 3).unwrap();
        assert_eq!(s.vertices.len(), 15);
        assert_eq!(s.claimed_size, 15);
        assert!(verify_on_gp(s.params, &s.vertices));
    }

    #[test]
    fn four_k_plus_1_k3_resolves_but_is_not_minimal() {
        let s = lemma_set(Family::FourKPlus1, 3).unwrap();
        assert_eq!(s.params.n, 13);
        assert_eq!(s.vertices.len(), 20);
        let dm = all_pairs_distances(&Graph::generalized_petersen(s.params)).unwrap();
        let cs = build_constraints(&dm);
        assert!(verify_resolving_set(&cs, &s.vertices).is_ok());
        // catalog says 17 for n = 13
        assert!(redundant_member(&cs, &s.vertices).is_some());
    }

    #[test]
    fn lemma_set_parameter_errors() {
        assert!(matches!(lemma_set(Family::FourK, 0), Err(Error::LemmaParam(0))));
        // GP(4,2) does not exist
        assert!(matches!(lemma_set(Family::FourK, 1), Err(Error::InvalidParams { .. })));
        let small = lemma_set(Family::FourKPlus2, 1).unwrap();
        assert!(small.below_range);
        // v indices wrap for tiny k
        assert_eq!(lemma_set(Family::FourKPlus1, 1).unwrap().vertices.len(), 9);
    }

    #[test]
    fn catalog_rows() {
        let rows: Vec<(usize, usize, usize)> = catalog().iter().map(|e| (e.n, e.sdim, e.basis.len())).collect();
        assert_eq!(
            rows,
            vec![
                (5, 8, 8), (7, 9, 10), (8, 8, 8), (9, 13, 13), (11, 12, 12), (12, 13, 13),
                (13, 17, 17), (15, 20, 20), (16, 19, 19), (17, 24, 24), (19, 24, 24),
            ]
        );
        let e5 = catalog_entry(5).unwrap();
        assert_eq!(labels(&e5.params(), &e5.basis).join(","), "u0,u1,u2,u3,v0,v1,v2,v3");
        let e8 = catalog_entry(8).unwrap();
        assert_eq!(labels(&e8.params(), &e8.basis).join(","), "u4,u5,u6,u7,v1,v3,v5,v7");
        assert!(catalog_entry(7).unwrap().has_discrepancy());
        assert!(!e8.has_discrepancy());
        assert!(matches!(catalog_entry(10), Err(Error::NotInCatalog(10))));
    }

    #[test]
    fn catalog_bases_resolve_and_are_minimal_and_touch_mmd_pairs() {
        for e in catalog() {
            let g = Graph::generalized_petersen(e.params());
            let dm = all_pairs_distances(&g).unwrap();
            let cs = build_constraints(&dm);
            assert!(verify_resolving_set(&cs, &e.basis).is_ok(), "n={}", e.n);
            assert_eq!(mmd_pairs(&g, &dm).first_untouched(&e.basis), None, "n={}", e.n);
            // irredundant everywhere; at n=7 it is still larger than the optimum
            assert_eq!(redundant_member(&cs, &e.basis), None, "n={}", e.n);
            assert_eq!(e.has_discrepancy(), e.n == 7);
        }
    }

    #[test]
    fn set_specs() {
        let g = Graph::generalized_petersen(GpParams::new(14, 2).unwrap());
        let s = parse_set_spec(&g, "lemma:4k2").unwrap();
        assert_eq!(s, lemma_set(Family::FourKPlus2, 3).unwrap().vertices);
        assert!(parse_set_spec(&g, "lemma:4k").is_err());
        assert_eq!(parse_set_spec(&g, "u0, v3,5").unwrap().to_vec(), vec![0, 5, 17]);
        assert!(parse_set_spec(&g, "u14").is_err());
        assert!(parse_set_spec(&g, "x1").is_err());
        let g12 = Graph::generalized_petersen(GpParams::new(12, 2).unwrap());
        assert_eq!(parse_set_spec(&g12, "lemma:4k").unwrap().len(), 15);
    }
}
