//! Strong resolution, the pair-covering constraint system, and the
//! mutually-maximally-distant / diametral pair enumerations.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::graph::{DistanceMatrix, Graph};
use crate::vertex_set::VertexSet;

/// `w` strongly resolves `{u, v}` when one of `u`, `v` lies on a shortest
/// path from `w` to the other.
#[inline]
pub fn strongly_resolves(dm: &DistanceMatrix, w: usize, u: usize, v: usize) -> bool {
    let (wu, wv, uv) = (dm.get(w, u), dm.get(w, v), dm.get(u, v));
    wu == wv + uv || wv == wu + uv
}

/// One covering row: the pair `{u, v}` (with `u < v`) and every vertex that
/// strongly resolves it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairConstraint {
    pub u: usize,
    pub v: usize,
    pub resolvers: VertexSet,
}

/// Rows for every unordered pair, in lexicographic `(u, v)` order.
#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    n_vertices: usize,
    constraints: Vec<PairConstraint>,
}

impl ConstraintSystem {
    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn constraints(&self) -> &[PairConstraint] {
        &self.constraints
    }

    pub fn rows(&self) -> impl Iterator<Item = &VertexSet> {
        self.constraints.iter().map(|c| &c.resolvers)
    }

    /// LP-format text (minimize the vertex count subject to one `>= 1` row
    /// per pair, all variables binary) for cross-checking with an external
    /// solver.
    pub fn to_lp(&self) -> String {
        const TERMS_PER_LINE: usize = 16;
        let mut out = String::from("\\ strong metric dimension set-cover model\nMinimize\n obj:");
        for i in 0..self.n_vertices {
            if i > 0 && i % TERMS_PER_LINE == 0 {
                out.push_str("\n    ");
            }
            let _ = write!(out, "{} y{i}", if i == 0 { "" } else { " +" });
        }
        out.push_str("\nSubject To\n");
        for c in &self.constraints {
            let _ = write!(out, " r{}_{}:", c.u, c.v);
            for (pos, w) in c.resolvers.iter().enumerate() {
                if pos > 0 && pos % TERMS_PER_LINE == 0 {
                    out.push_str("\n    ");
                }
                let _ = write!(out, "{} y{w}", if pos == 0 { "" } else { " +" });
            }
            out.push_str(" >= 1\n");
        }
        out.push_str("Binary\n");
        for i in 0..self.n_vertices {
            let _ = writeln!(out, " y{i}");
        }
        out.push_str("End\n");
        out
    }
}

pub fn build_constraints(dm: &DistanceMatrix) -> ConstraintSystem {
    let n = dm.n_vertices();
    let constraints: Vec<PairConstraint> = (0..n)
        .into_par_iter()
        .flat_map_iter(|u| {
            (u + 1..n).map(move |v| {
                let resolvers = VertexSet::from_iter_with_capacity(
                    n,
                    (0..n).filter(|&w| strongly_resolves(dm, w, u, v)),
                );
                PairConstraint { u, v, resolvers }
            })
        })
        .collect();
    ConstraintSystem { n_vertices: n, constraints }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    /// Lexicographically first pair no member of the set resolves.
    Unresolved { u: usize, v: usize },
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok)
    }
}

pub fn verify_resolving_set(cs: &ConstraintSystem, s: &VertexSet) -> Verdict {
    cs.constraints
        .iter()
        .find(|c| !c.resolvers.intersects(s))
        .map_or(Verdict::Ok, |c| Verdict::Unresolved { u: c.u, v: c.v })
}

/// First member of `s` whose removal leaves a strong resolving set, if any.
/// `None` for a resolving `s` means it is inclusion-minimal.
pub fn redundant_member(cs: &ConstraintSystem, s: &VertexSet) -> Option<usize> {
    s.iter().find(|&x| {
        let mut smaller = s.clone();
        smaller.remove(x);
        verify_resolving_set(cs, &smaller).is_ok()
    })
}

/// Unordered vertex pairs `(u, v)` with `u < v`, sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MmdPairList {
    pub pairs: Vec<(usize, usize)>,
}

impl MmdPairList {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.pairs.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    /// First listed pair with neither endpoint in `s`.
    pub fn first_untouched(&self, s: &VertexSet) -> Option<(usize, usize)> {
        self.pairs
            .iter()
            .copied()
            .find(|&(a, b)| !s.contains(a) && !s.contains(b))
    }
}

/// `u` is maximally distant from `v` when no neighbour of `u` is farther
/// from `v` than `u` itself.
fn maximally_distant_from(g: &Graph, dm: &DistanceMatrix, u: usize, v: usize) -> bool {
    let d = dm.get(u, v);
    g.neighbors(u).iter().all(|&w| dm.get(w, v) <= d)
}

pub fn mmd_pairs(g: &Graph, dm: &DistanceMatrix) -> MmdPairList {
    let n = g.n_vertices();
    let pairs = (0..n)
        .into_par_iter()
        .flat_map_iter(|u| {
            (u + 1..n)
                .filter(move |&v| maximally_distant_from(g, dm, u, v) && maximally_distant_from(g, dm, v, u))
                .map(move |v| (u, v))
        })
        .collect();
    MmdPairList { pairs }
}

pub fn diametral_pairs(dm: &DistanceMatrix) -> Vec<(usize, usize)> {
    let n = dm.n_vertices();
    let diam = dm.diameter();
    (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| dm.get(u, v) == diam)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{all_pairs_distances, GpParams};
    use proptest::prelude::*;

    fn gp(n: usize, k: usize) -> (Graph, GpParams, DistanceMatrix) {
        let p = GpParams::new(n, k).unwrap();
        let g = Graph::generalized_petersen(p);
        let dm = all_pairs_distances(&g).unwrap();
        (g, p, dm)
    }

    // Oracle: shortest-path membership restated directly. `x` lies on some
    // shortest a-b path iff d(a,x) + d(x,b) = d(a,b).
    fn on_shortest_path(dm: &DistanceMatrix, a: usize, x: usize, b: usize) -> bool {
        dm.get(a, x) + dm.get(x, b) == dm.get(a, b)
    }

    fn resolves_by_definition(dm: &DistanceMatrix, w: usize, u: usize, v: usize) -> bool {
        on_shortest_path(dm, v, u, w) || on_shortest_path(dm, u, v, w)
    }

    #[test]
    fn petersen_example_pair() {
        let (_, p, dm) = gp(5, 2);
        assert!(strongly_resolves(&dm, p.u(0), p.u(4), p.v(4)));
        // d(u2,u4) = 2, d(u2,v4) = 2, d(u4,v4) = 1: neither lies between.
        assert!(!strongly_resolves(&dm, p.u(2), p.u(4), p.v(4)));
    }

    #[test]
    fn endpoint_always_resolves() {
        let (_, _, dm) = gp(9, 2);
        for u in 0..18 {
            for v in 0..18 {
                assert!(strongly_resolves(&dm, u, u, v));
                assert!(strongly_resolves(&dm, v, u, v));
            }
        }
    }

    #[test]
    fn path_middle_vertex_does_not_resolve_ends() {
        // b sits between a and c, but neither a nor c lies on a shortest
        // path from b to the other, so only the endpoints resolve {a, c}.
        let dm = all_pairs_distances(&Graph::path(3)).unwrap();
        let cs = build_constraints(&dm);
        let row = cs.constraints().iter().find(|c| (c.u, c.v) == (0, 2)).unwrap();
        assert_eq!(row.resolvers.to_vec(), vec![0, 2]);
        let row = cs.constraints().iter().find(|c| (c.u, c.v) == (0, 1)).unwrap();
        assert_eq!(row.resolvers.to_vec(), vec![0, 1, 2]);
    }

    #[test]
    fn constraint_rows_cover_every_pair() {
        let (_, _, dm) = gp(5, 2);
        let cs = build_constraints(&dm);
        assert_eq!(cs.constraints().len(), 45);
        assert!(cs.constraints().iter().all(|c| c.u < c.v && !c.resolvers.is_empty()));
    }

    #[test]
    fn gp_6_2_rows_match_double_loop_oracle() {
        let (_, _, dm) = gp(6, 2);
        let cs = build_constraints(&dm);
        let mut expected = Vec::new();
        for u in 0..12 {
            for v in u + 1..12 {
                let row: Vec<usize> = (0..12).filter(|&w| resolves_by_definition(&dm, w, u, v)).collect();
                expected.push((u, v, row));
            }
        }
        let got: Vec<_> = cs.constraints().iter().map(|c| (c.u, c.v, c.resolvers.to_vec())).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn petersen_verification() {
        let (g, p, dm) = gp(5, 2);
        let cs = build_constraints(&dm);
        let example: Vec<usize> = (0..4).flat_map(|i| [p.u(i), p.v(i)]).collect();
        let s = VertexSet::from_iter_with_capacity(10, example);
        assert_eq!(verify_resolving_set(&cs, &s), Verdict::Ok);
        assert_eq!(verify_resolving_set(&cs, &VertexSet::full(10)), Verdict::Ok);

        let mut seven = s.clone();
        seven.remove(p.v(3));
        // u4 = 4, v3 = 8, v4 = 9 are outside; (u4, v3) has resolvers only
        // among the pair itself, found by enumeration.
        assert_eq!(verify_resolving_set(&cs, &seven), Verdict::Unresolved { u: 4, v: 8 });
        assert!(g.n_vertices() == 10);
    }

    #[test]
    fn every_seven_subset_of_petersen_fails() {
        let (_, _, dm) = gp(5, 2);
        let cs = build_constraints(&dm);
        for mask in 0u32..1 << 10 {
            if mask.count_ones() == 7 {
                let s = VertexSet::from_iter_with_capacity(10, (0..10).filter(|b| mask >> b & 1 == 1));
                assert!(!verify_resolving_set(&cs, &s).is_ok());
            }
        }
    }

    #[test]
    fn redundant_member_detects_non_minimal_sets() {
        let (_, _, dm) = gp(5, 2);
        let cs = build_constraints(&dm);
        let full = VertexSet::full(10);
        assert_eq!(redundant_member(&cs, &full), Some(0));
        let basis = VertexSet::from_iter_with_capacity(10, [0, 1, 2, 3, 5, 6, 7, 8]);
        assert_eq!(redundant_member(&cs, &basis), None);
    }

    #[test]
    fn lemma_pattern_pairs_are_mmd_in_gp_40_2() {
        let (g, p, dm) = gp(40, 2);
        let mmd = mmd_pairs(&g, &dm);
        assert!(mmd.contains(p.u(0), p.u(5)));
        for i in 0..20i64 {
            for l in 3..=18i64 {
                assert!(mmd.contains(p.u(2 * i), p.u(2 * i + 2 * l - 1)));
            }
        }
    }

    #[test]
    fn complete_graph_all_pairs_mmd_and_diametral() {
        let g = Graph::complete(5);
        let dm = all_pairs_distances(&g).unwrap();
        assert_eq!(mmd_pairs(&g, &dm).len(), 10);
        let k4 = all_pairs_distances(&Graph::complete(4)).unwrap();
        assert_eq!(diametral_pairs(&k4).len(), 6);
    }

    #[test]
    fn gp_8_2_mmd_matches_neighbour_loop_oracle() {
        let (g, _, dm) = gp(8, 2);
        let mut expected = Vec::new();
        for u in 0..16 {
            for v in u + 1..16 {
                let duv = dm.get(u, v);
                let mut ok = true;
                for &w in g.neighbors(u) {
                    if dm.get(w, v) > duv {
                        ok = false;
                    }
                }
                for &w in g.neighbors(v) {
                    if dm.get(u, w) > duv {
                        ok = false;
                    }
                }
                if ok {
                    expected.push((u, v));
                }
            }
        }
        assert_eq!(mmd_pairs(&g, &dm).pairs, expected);
        assert_eq!(expected.len(), 12);
    }

    #[test]
    fn gp_14_2_diametral_pairs_include_antipodes() {
        let (_, p, dm) = gp(14, 2);
        let dp = diametral_pairs(&dm);
        for i in 0..14i64 {
            for (a, b) in [(p.u(i), p.u(i + 7)), (p.v(i), p.v(i + 7))] {
                assert!(dp.contains(&(a.min(b), a.max(b))));
            }
        }
    }

    #[test]
    fn gp_20_2_diametral_matches_scan() {
        let (_, _, dm) = gp(20, 2);
        let mut best = 0;
        let mut scan = Vec::new();
        for u in 0..40 {
            for v in u + 1..40 {
                let d = dm.get(u, v);
                if d > best {
                    best = d;
                    scan.clear();
                }
                if d == best {
                    scan.push((u, v));
                }
            }
        }
        assert_eq!(diametral_pairs(&dm), scan);
    }

    #[test]
    fn lp_export_shape() {
        let dm = all_pairs_distances(&Graph::path(3)).unwrap();
        let lp = build_constraints(&dm).to_lp();
        assert!(lp.contains("Minimize\n obj: y0 + y1 + y2\n"));
        assert!(lp.contains(" r0_1: y0 + y1 + y2 >= 1\n"));
        assert!(lp.contains(" r0_2: y0 + y2 >= 1\n"));
        assert!(lp.ends_with("Binary\n y0\n y1\n y2\nEnd\n"));
    }

    proptest! {
        #[test]
        fn resolution_is_symmetric_and_diametral_pairs_are_mmd(n in 5usize..30, k_seed in 0usize..100, w in 0usize..60, u in 0usize..60, v in 0usize..60) {
            let k = 1 + k_seed % ((n - 1) / 2);
            let (g, _, dm) = gp(n, k);
            let (w, u, v) = (w % (2 * n), u % (2 * n), v % (2 * n));
            prop_assert_eq!(strongly_resolves(&dm, w, u, v), strongly_resolves(&dm, w, v, u));
            prop_assert_eq!(strongly_resolves(&dm, w, u, v), resolves_by_definition(&dm, w, u, v));
            let mmd = mmd_pairs(&g, &dm);
            for (a, b) in diametral_pairs(&dm) {
                prop_assert!(mmd.contains(a, b));
            }
            for &(a, b) in &mmd.pairs {
                prop_assert!(g.neighbors(a).iter().all(|&x| dm.get(x, b) <= dm.get(a, b)));
            }
        }
    }
}
