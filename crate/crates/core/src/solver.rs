//! Exact minimum set cover over strong-resolution rows, plus the cheap bounds
//! (diametral and MMD vertex covers, greedy cover) that sandwich it.
//!
//! The search is a depth-first branch-and-bound:
//!
//! * rows that are supersets of another row are dropped up front,
//! * the remaining rows are split into column-connected components that are
//!   solved independently,
//! * each node propagates rows with a single available column, bounds the
//!   residual with a disjoint clique/row packing, then branches on the column
//!   hitting the most uncovered rows (include first, then exclude).
//!
//! Ties are always broken by the smallest vertex id and the incumbent is only
//! replaced by strictly smaller covers, so the returned basis is a pure
//! function of the input.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::graph::{DistanceMatrix, Graph};
use crate::resolution::{diametral_pairs, mmd_pairs, ConstraintSystem, MmdPairList};
use crate::vertex_set::VertexSet;

pub const DEFAULT_BUDGET: Duration = Duration::from_secs(600);

const DEADLINE_CHECK_INTERVAL: u64 = 256;

#[derive(Debug, Clone)]
pub struct SolveResult {
    /// `Some` only when the search finished and `basis` is proven optimal.
    pub optimum: Option<usize>,
    /// Best cover found; optimal when `proven`.
    pub basis: VertexSet,
    /// Proven lower bound; equals the optimum when `proven`.
    pub lower_bound: usize,
    pub lower_bound_at_root: usize,
    pub nodes_explored: u64,
    pub wall_time: Duration,
    pub proven: bool,
}

impl SolveResult {
    pub fn upper_bound(&self) -> usize {
        self.basis.len()
    }
}

/// A lower bound on the strong metric dimension from a necessary-pair cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LowerBound {
    pub value: usize,
    /// The value is the exact minimum vertex cover of the pair graph.
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub diametral_lb: usize,
    pub mmd_cover_lb: usize,
    pub mmd_exact: bool,
    pub greedy_ub: usize,
    pub construction_ub: Option<usize>,
}

/// Minimum strong resolving set of the graph behind `cs`.
pub fn solve_exact(cs: &ConstraintSystem, budget: Duration) -> SolveResult {
    solve_cover(cs.n_vertices(), cs.rows().cloned().collect(), budget)
}

/// Minimum vertex cover of the diametral-pair graph.
pub fn lower_bound_diametral(dp: &[(usize, usize)], n_vertices: usize, budget: Duration) -> LowerBound {
    pair_cover_bound(dp, n_vertices, budget)
}

/// Minimum vertex cover of the MMD-pair graph.
pub fn lower_bound_mmd(mmd: &MmdPairList, n_vertices: usize, budget: Duration) -> LowerBound {
    pair_cover_bound(&mmd.pairs, n_vertices, budget)
}

fn pair_cover_bound(pairs: &[(usize, usize)], n: usize, budget: Duration) -> LowerBound {
    let rows = pairs
        .iter()
        .map(|&(a, b)| VertexSet::from_iter_with_capacity(n, [a, b]))
        .collect();
    let r = solve_cover(n, rows, budget);
    LowerBound { value: r.lower_bound, exact: r.proven }
}

/// Repeatedly takes the vertex covering the most uncovered rows (smallest id
/// on ties) until every row is covered.
pub fn greedy_cover(cs: &ConstraintSystem) -> VertexSet {
    let rows: Vec<VertexSet> = cs.rows().cloned().collect();
    greedy(cs.n_vertices(), &rows)
}

fn greedy(n: usize, rows: &[VertexSet]) -> VertexSet {
    let mut chosen = VertexSet::new(n);
    let mut uncovered: Vec<&VertexSet> = rows.iter().filter(|r| !r.is_empty()).collect();
    let mut count = vec![0usize; n];
    while !uncovered.is_empty() {
        count.iter_mut().for_each(|c| *c = 0);
        for row in &uncovered {
            for w in row.iter() {
                count[w] += 1;
            }
        }
        let best = (0..n).max_by_key(|&w| (count[w], std::cmp::Reverse(w))).unwrap();
        chosen.insert(best);
        uncovered.retain(|r| !r.contains(best));
    }
    chosen
}

/// All three bounds for a connected graph.
pub fn bound_report(g: &Graph, dm: &DistanceMatrix, cs: &ConstraintSystem, budget: Duration) -> BoundReport {
    let n = g.n_vertices();
    let diametral = lower_bound_diametral(&diametral_pairs(dm), n, budget);
    let mmd = lower_bound_mmd(&mmd_pairs(g, dm), n, budget);
    // the diametral-pair graph is a subgraph of the MMD-pair graph
    let mmd_value = if mmd.exact { mmd.value } else { mmd.value.max(diametral.value) };
    BoundReport {
        diametral_lb: diametral.value,
        mmd_cover_lb: mmd_value,
        mmd_exact: mmd.exact,
        greedy_ub: greedy_cover(cs).len(),
        construction_ub: None,
    }
}

/// Drops duplicate rows and every row that contains another row.
pub fn reduce_rows(rows: Vec<VertexSet>) -> Vec<VertexSet> {
    let mut rows = rows;
    rows.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.to_vec().cmp(&b.to_vec())));
    rows.dedup();
    let mut kept: Vec<VertexSet> = Vec::with_capacity(rows.len());
    for row in rows {
        if !kept.iter().any(|k| k.is_subset(&row)) {
            kept.push(row);
        }
    }
    kept
}

/// Exact minimum cover of `rows` by columns `0..n`. Empty rows are ignored.
pub fn solve_cover(n: usize, rows: Vec<VertexSet>, budget: Duration) -> SolveResult {
    let start = Instant::now();
    let deadline = start.checked_add(budget);
    let rows = reduce_rows(rows.into_iter().filter(|r| !r.is_empty()).collect());

    let outcomes: Vec<ComponentOutcome> = components(n, &rows)
        .into_par_iter()
        .map(|(columns, comp_rows)| Component::new(columns, comp_rows).solve(deadline))
        .collect();

    let mut basis = VertexSet::new(n);
    let (mut lower, mut root, mut nodes, mut proven) = (0, 0, 0, true);
    for o in &outcomes {
        basis.union_with(&o.best);
        lower += o.lower;
        root += o.root_lower;
        nodes += o.nodes;
        proven &= o.proven;
    }
    let lower = if proven { basis.len() } else { lower };
    SolveResult {
        optimum: proven.then(|| basis.len()),
        lower_bound: lower,
        lower_bound_at_root: root.min(lower),
        basis,
        nodes_explored: nodes,
        wall_time: start.elapsed(),
        proven,
    }
}

/// Groups rows into components linked by shared columns. Each component is
/// returned as its sorted global column ids and its rows. Components are
/// ordered by smallest column.
fn components(n: usize, rows: &[VertexSet]) -> Vec<(Vec<usize>, Vec<VertexSet>)> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for row in rows {
        let mut it = row.iter();
        let first = it.next().expect("rows are nonempty");
        for w in it {
            let (a, b) = (find(&mut parent, first), find(&mut parent, w));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut by_root: std::collections::BTreeMap<usize, (Vec<usize>, Vec<VertexSet>)> = Default::default();
    for row in rows {
        let r = find(&mut parent, row.first().unwrap());
        by_root.entry(r).or_default().1.push(row.clone());
    }
    for (root, (columns, comp_rows)) in by_root.iter_mut() {
        let mut cols = VertexSet::new(n);
        comp_rows.iter().for_each(|r| cols.union_with(r));
        *columns = cols.to_vec();
        debug_assert_eq!(columns[0], *root);
    }
    by_root.into_values().collect()
}

struct ComponentOutcome {
    best: VertexSet,
    lower: usize,
    root_lower: usize,
    nodes: u64,
    proven: bool,
}

/// One independent sub-instance with columns renumbered to `0..m`.
struct Component {
    n_global: usize,
    columns: Vec<usize>,
    rows: Vec<VertexSet>,
    /// For each local column, the set of row ids containing it.
    column_rows: Vec<VertexSet>,
}

#[derive(Clone)]
struct Node {
    chosen: VertexSet,
    available: VertexSet,
    uncovered: VertexSet,
}

struct Search {
    best: VertexSet,
    nodes: u64,
    deadline: Option<Instant>,
    timed_out: bool,
}

impl Component {
    fn new(columns: Vec<usize>, global_rows: Vec<VertexSet>) -> Self {
        let m = columns.len();
        let local_of = |g: usize| columns.binary_search(&g).expect("column belongs to component");
        let rows: Vec<VertexSet> = global_rows
            .iter()
            .map(|r| VertexSet::from_iter_with_capacity(m, r.iter().map(local_of)))
            .collect();
        let mut column_rows = vec![VertexSet::new(rows.len()); m];
        for (ri, row) in rows.iter().enumerate() {
            for c in row.iter() {
                column_rows[c].insert(ri);
            }
        }
        let n_global = global_rows.first().map_or(0, VertexSet::capacity);
        Self { n_global, columns, rows, column_rows }
    }

    fn m(&self) -> usize {
        self.columns.len()
    }

    fn to_global(&self, local: &VertexSet) -> VertexSet {
        VertexSet::from_iter_with_capacity(self.n_global, local.iter().map(|c| self.columns[c]))
    }

    fn solve(&self, deadline: Option<Instant>) -> ComponentOutcome {
        let mut root = Node {
            chosen: VertexSet::new(self.m()),
            available: VertexSet::full(self.m()),
            uncovered: VertexSet::full(self.rows.len()),
        };
        let incumbent = self.greedy_incumbent();
        let feasible = self.propagate(&mut root);
        debug_assert!(feasible, "every row has a column");
        let root_lower = root.chosen.len() + self.lower_bound(&root);
        let mut search = Search { best: incumbent, nodes: 0, deadline, timed_out: false };
        self.branch(root, &mut search);
        let proven = !search.timed_out;
        let lower = if proven { search.best.len() } else { root_lower };
        ComponentOutcome {
            best: self.to_global(&search.best),
            lower,
            root_lower: root_lower.min(search.best.len()),
            nodes: search.nodes,
            proven,
        }
    }

    fn greedy_incumbent(&self) -> VertexSet {
        let mut cover = greedy(self.m(), &self.rows);
        // drop members that became redundant, largest id first
        for c in cover.to_vec().into_iter().rev() {
            cover.remove(c);
            if !self.rows.iter().all(|r| r.intersects(&cover)) {
                cover.insert(c);
            }
        }
        cover
    }

    fn take(&self, node: &mut Node, c: usize) {
        node.chosen.insert(c);
        node.available.remove(c);
        node.uncovered.difference_with(&self.column_rows[c]);
    }

    /// Forces columns of rows with a single available column. Returns
    /// `false` when some uncovered row has no available column left.
    fn propagate(&self, node: &mut Node) -> bool {
        loop {
            let mut forced = None;
            for r in node.uncovered.iter() {
                match self.rows[r].intersection_len(&node.available) {
                    0 => return false,
                    1 => {
                        forced = self.rows[r].first_common(&node.available);
                        break;
                    }
                    _ => {}
                }
            }
            match forced {
                Some(c) => self.take(node, c),
                None => return true,
            }
        }
    }

    /// Packing bound on the residual instance. Uncovered rows with exactly
    /// two available columns are edges of a graph whose vertices are packed
    /// greedily into cliques; a clique on `s` columns needs `s - 1` of them.
    /// Larger rows disjoint from every nontrivial clique and from each other
    /// need one column each.
    fn lower_bound(&self, node: &Node) -> usize {
        let m = self.m();
        let mut adj = vec![VertexSet::new(m); m];
        let mut wide: Vec<(usize, VertexSet)> = Vec::new();
        for r in node.uncovered.iter() {
            let mut avail = self.rows[r].clone();
            avail.intersect_with(&node.available);
            let len = avail.len();
            if len == 2 {
                let a = avail.first().unwrap();
                let b = avail.iter().nth(1).unwrap();
                adj[a].insert(b);
                adj[b].insert(a);
            } else {
                wide.push((len, avail));
            }
        }

        let mut order: Vec<usize> = (0..m).filter(|&c| !adj[c].is_empty()).collect();
        order.sort_by_key(|&c| (std::cmp::Reverse(adj[c].len()), c));
        let mut cliques: Vec<VertexSet> = Vec::new();
        for &c in &order {
            match cliques.iter_mut().find(|q| q.is_subset(&adj[c])) {
                Some(q) => {
                    q.insert(c);
                }
                None => cliques.push(VertexSet::from_iter_with_capacity(m, [c])),
            }
        }
        let mut used = VertexSet::new(m);
        let mut bound = 0;
        for q in cliques.iter().filter(|q| q.len() >= 2) {
            bound += q.len() - 1;
            used.union_with(q);
        }

        wide.sort_by_key(|(len, _)| *len);
        for (_, avail) in wide {
            if !avail.intersects(&used) {
                bound += 1;
                used.union_with(&avail);
            }
        }
        bound
    }

    fn branch(&self, mut node: Node, search: &mut Search) {
        search.nodes += 1;
        if search.nodes.is_multiple_of(DEADLINE_CHECK_INTERVAL) {
            if let Some(deadline) = search.deadline {
                if Instant::now() >= deadline {
                    search.timed_out = true;
                }
            }
        }
        if search.timed_out {
            return;
        }
        if !self.propagate(&mut node) {
            return;
        }
        if node.chosen.len() >= search.best.len() {
            return;
        }
        if node.uncovered.is_empty() {
            search.best = node.chosen;
            return;
        }
        if node.chosen.len() + self.lower_bound(&node) >= search.best.len() {
            return;
        }

        let column = node
            .available
            .iter()
            .max_by_key(|&c| (self.column_rows[c].intersection_len(&node.uncovered), std::cmp::Reverse(c)))
            .expect("an uncovered row has available columns");

        let mut with = node.clone();
        self.take(&mut with, column);
        self.branch(with, search);

        node.available.remove(column);
        self.branch(node, search);
    }
}
