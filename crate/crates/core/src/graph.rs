//! Graph construction, the generalized Petersen family, and BFS distances.
//!
//! Vertices are dense ids `0..n`. A generalized Petersen graph GP(n,k) numbers
//! its outer-cycle vertex `u_i` as `i` and its inner vertex `v_i` as `n + i`.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Parameters of GP(n,k): `n >= 3` and `1 <= k < n/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct GpParams {
    pub n: usize,
    pub k: usize,
}

impl GpParams {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParams { n, k, reason: "n must be at least 3" });
        }
        if k < 1 || 2 * k >= n {
            return Err(Error::InvalidParams { n, k, reason: "k must satisfy 1 <= k < n/2" });
        }
        Ok(Self { n, k })
    }

    /// Vertex id of `u_i`, index taken modulo n.
    pub fn u(&self, i: i64) -> usize {
        i.rem_euclid(self.n as i64) as usize
    }

    /// Vertex id of `v_i`, index taken modulo n.
    pub fn v(&self, i: i64) -> usize {
        self.n + i.rem_euclid(self.n as i64) as usize
    }

    pub fn label_of(&self, vertex: usize) -> Label {
        if vertex < self.n {
            Label::U(vertex)
        } else {
            Label::V(vertex - self.n)
        }
    }

    pub fn vertex_of(&self, label: Label) -> Option<usize> {
        match label {
            Label::U(i) if i < self.n => Some(i),
            Label::V(i) if i < self.n => Some(self.n + i),
            _ => None,
        }
    }
}

impl fmt::Display for GpParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GP({},{})", self.n, self.k)
    }
}

/// Outer (`u`) or inner (`v`) vertex of a generalized Petersen graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    U(usize),
    V(usize),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::U(i) => write!(f, "u{i}"),
            Label::V(i) => write!(f, "v{i}"),
        }
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::BadLabel(s.to_string());
        let (head, tail) = s.split_at(s.chars().next().map_or(0, char::len_utf8));
        let index: usize = tail.parse().map_err(|_| bad())?;
        match head {
            "u" | "U" => Ok(Label::U(index)),
            "v" | "V" => Ok(Label::V(index)),
            _ => Err(bad()),
        }
    }
}

/// Immutable simple undirected graph in adjacency-list form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    n_edges: usize,
    gp: Option<GpParams>,
}

impl Graph {
    /// Builds a graph from an edge list. Self-loops, duplicate edges and
    /// out-of-range endpoints are rejected; connectivity is not checked here.
    pub fn from_edges<I>(n_vertices: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adjacency = vec![Vec::new(); n_vertices];
        let mut n_edges = 0;
        for (a, b) in edges {
            if a >= n_vertices || b >= n_vertices {
                return Err(Error::InvalidEdge(a, b, "endpoint out of range"));
            }
            if a == b {
                return Err(Error::InvalidEdge(a, b, "self-loop"));
            }
            if adjacency[a].contains(&b) {
                return Err(Error::InvalidEdge(a, b, "duplicate edge"));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
            n_edges += 1;
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Self { adjacency, n_edges, gp: None })
    }

    /// The generalized Petersen graph GP(n,k).
    pub fn generalized_petersen(params: GpParams) -> Self {
        let n = params.n as i64;
        let k = params.k as i64;
        let edges = (0..n).flat_map(|i| {
            [
                (params.u(i), params.u(i + 1)),
                (params.u(i), params.v(i)),
                (params.v(i), params.v(i + k)),
            ]
        });
        let mut g = Self::from_edges(2 * params.n, edges)
            .expect("valid GP parameters always give a simple graph");
        g.gp = Some(params);
        g
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
        Self::from_edges(n, edges).expect("complete graph is simple")
    }

    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("path is simple")
    }

    pub fn n_vertices(&self) -> usize {
        self.adjacency.len()
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency
            .get(a)
            .is_some_and(|list| list.binary_search(&b).is_ok())
    }

    /// Edges as `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(a, list)| list.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
    }

    pub fn gp_params(&self) -> Option<GpParams> {
        self.gp
    }

    pub fn label(&self, v: usize) -> Option<Label> {
        self.gp.map(|p| p.label_of(v))
    }

    /// `u3`/`v7` for GP graphs, the decimal id otherwise.
    pub fn vertex_name(&self, v: usize) -> String {
        match self.label(v) {
            Some(label) => label.to_string(),
            None => v.to_string(),
        }
    }

    /// Resolves a `u<i>`/`v<i>` label or a raw decimal id.
    pub fn parse_vertex(&self, token: &str) -> Result<usize> {
        let token = token.trim();
        let vertex = if let Ok(id) = token.parse::<usize>() {
            id
        } else {
            let label: Label = token.parse()?;
            let params = self.gp.ok_or_else(|| Error::BadLabel(token.to_string()))?;
            params
                .vertex_of(label)
                .ok_or_else(|| Error::BadLabel(token.to_string()))?
        };
        if vertex >= self.n_vertices() {
            return Err(Error::VertexOutOfRange { vertex, n: self.n_vertices() });
        }
        Ok(vertex)
    }

    pub fn is_connected(&self) -> bool {
        if self.n_vertices() == 0 {
            return true;
        }
        bfs(self, 0).iter().all(|&d| d != UNREACHED)
    }

    /// Serializes to the `p`/`e` edge-list format. GP graphs get a
    /// `c gp n=<n> k=<k>` header so labels survive a round trip.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        if let Some(p) = self.gp {
            out.push_str(&format!("c gp n={} k={}\n", p.n, p.k));
        }
        out.push_str(&format!("p {} {}\n", self.n_vertices(), self.n_edges));
        for (a, b) in self.edges() {
            out.push_str(&format!("e {a} {b}\n"));
        }
        out
    }

    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut gp_header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            let err = |message: &str| Error::Parse { line: line_no, message: message.to_string() };
            let mut fields = line.split_whitespace();
            match fields.next() {
                None => continue,
                Some("c") => {
                    if fields.next() == Some("gp") {
                        gp_header = Some(parse_gp_comment(fields).ok_or_else(|| err("malformed gp comment"))?);
                    }
                }
                Some("p") => {
                    if header.is_some() {
                        return Err(err("duplicate p line"));
                    }
                    let n = parse_field(fields.next()).ok_or_else(|| err("bad vertex count"))?;
                    let m = parse_field(fields.next()).ok_or_else(|| err("bad edge count"))?;
                    header = Some((n, m));
                }
                Some("e") => {
                    if header.is_none() {
                        return Err(err("edge before p line"));
                    }
                    let a = parse_field(fields.next()).ok_or_else(|| err("bad endpoint"))?;
                    let b = parse_field(fields.next()).ok_or_else(|| err("bad endpoint"))?;
                    edges.push((a, b));
                }
                Some(other) => return Err(err(&format!("unknown line type `{other}`"))),
            }
        }
        let (n, m) = header.ok_or(Error::Parse { line: 0, message: "missing p line".into() })?;
        if edges.len() != m {
            return Err(Error::Parse {
                line: 0,
                message: format!("p line declares {m} edges, found {}", edges.len()),
            });
        }
        let mut g = Self::from_edges(n, edges)?;
        if let Some((gn, gk)) = gp_header {
            let params = GpParams::new(gn, gk)?;
            let expected = Self::generalized_petersen(params);
            if expected.adjacency != g.adjacency {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("edges do not match the declared {params}"),
                });
            }
            g.gp = Some(params);
        }
        Ok(g)
    }
}

fn parse_field(field: Option<&str>) -> Option<usize> {
    field?.parse().ok()
}

fn parse_gp_comment<'a>(fields: impl Iterator<Item = &'a str>) -> Option<(usize, usize)> {
    let (mut n, mut k) = (None, None);
    for field in fields {
        if let Some(v) = field.strip_prefix("n=") {
            n = v.parse().ok();
        } else if let Some(v) = field.strip_prefix("k=") {
            k = v.parse().ok();
        }
    }
    Some((n?, k?))
}

const UNREACHED: u16 = u16::MAX;

fn bfs(g: &Graph, source: usize) -> Vec<u16> {
    let mut dist = vec![UNREACHED; g.n_vertices()];
    let mut queue = VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(x) = queue.pop_front() {
        let next = dist[x] + 1;
        for &y in g.neighbors(x) {
            if dist[y] == UNREACHED {
                dist[y] = next;
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Dense all-pairs hop distances, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<u16>,
}

impl DistanceMatrix {
    pub fn n_vertices(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> usize {
        self.d[a * self.n + b] as usize
    }

    pub fn row(&self, a: usize) -> &[u16] {
        &self.d[a * self.n..(a + 1) * self.n]
    }

    pub fn diameter(&self) -> usize {
        self.d.iter().copied().max().unwrap_or(0) as usize
    }
}

/// BFS from every vertex. Rows are computed in parallel; the result does not
/// depend on the thread count.
pub fn all_pairs_distances(g: &Graph) -> Result<DistanceMatrix> {
    let n = g.n_vertices();
    if n > UNREACHED as usize {
        // distances would not fit the 16-bit cells
        return Err(Error::VertexOutOfRange { vertex: n, n: UNREACHED as usize });
    }
    let rows: Vec<Vec<u16>> = (0..n).into_par_iter().map(|s| bfs(g, s)).collect();
    if rows.first().is_some_and(|r| r.contains(&UNREACHED)) {
        return Err(Error::Disconnected);
    }
    Ok(DistanceMatrix { n, d: rows.concat() })
}

pub fn diameter(dm: &DistanceMatrix) -> usize {
    dm.diameter()
}
