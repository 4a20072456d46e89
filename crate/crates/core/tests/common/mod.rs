//! Definition-level oracles shared by the integration tests. Nothing here
//! calls the library's distance, resolution or solver code.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use sdim::Graph;

pub const INF: usize = usize::MAX / 4;

pub fn floyd_warshall(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n_vertices();
    let mut d = vec![vec![INF; n]; n];
    for (a, row) in d.iter_mut().enumerate() {
        row[a] = 0;
    }
    for (a, b) in g.edges() {
        d[a][b] = 1;
        d[b][a] = 1;
    }
    for m in 0..n {
        for a in 0..n {
            for b in 0..n {
                if d[a][m] + d[m][b] < d[a][b] {
                    d[a][b] = d[a][m] + d[m][b];
                }
            }
        }
    }
    d
}

/// `on_path[v][w]` lists every vertex on some shortest v-w path, found by
/// enumerating the paths themselves.
pub fn vertices_on_shortest_paths(g: &Graph, d: &[Vec<usize>]) -> Vec<Vec<Vec<bool>>> {
    let n = g.n_vertices();
    let mut on_path = vec![vec![vec![false; n]; n]; n];
    for v in 0..n {
        for w in 0..n {
            let mut path = vec![v];
            let mut hit = vec![false; n];
            walk(g, d, d[v][w], w, &mut path, &mut hit);
            on_path[v][w] = hit;
        }
    }
    on_path
}

fn walk(g: &Graph, d: &[Vec<usize>], target_len: usize, w: usize, path: &mut Vec<usize>, hit: &mut [bool]) {
    let last = *path.last().unwrap();
    if path.len() - 1 == target_len {
        if last == w {
            path.iter().for_each(|&x| hit[x] = true);
        }
        return;
    }
    let left = target_len - path.len();
    for &x in g.neighbors(last) {
        // prune extensions that cannot reach w in time
        if !path.contains(&x) && d[x][w] <= left {
            path.push(x);
            walk(g, d, target_len, w, path, hit);
            path.pop();
        }
    }
}

/// w resolves {u, v}: u is on a shortest v-w path or v on a shortest u-w path.
pub fn resolves_by_paths(on_path: &[Vec<Vec<bool>>], w: usize, u: usize, v: usize) -> bool {
    on_path[v][w][u] || on_path[u][w][v]
}

/// No neighbour of u is farther from v, and no neighbour of v farther from u.
pub fn is_mmd_by_definition(g: &Graph, d: &[Vec<usize>], u: usize, v: usize) -> bool {
    g.neighbors(u).iter().all(|&x| d[x][v] <= d[u][v]) && g.neighbors(v).iter().all(|&y| d[u][y] <= d[u][v])
}

/// Smallest strong resolving set size by trying subsets in order of size.
pub fn exhaustive_sdim(n: usize, resolves: impl Fn(usize, usize, usize) -> bool) -> usize {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    // bitmask of resolvers per pair
    let masks: Vec<u32> = pairs
        .iter()
        .map(|&(u, v)| (0..n).filter(|&w| resolves(w, u, v)).fold(0u32, |m, w| m | 1 << w))
        .collect();
    let mut by_size: Vec<u32> = (0..1u32 << n).collect();
    by_size.sort_by_key(|s| s.count_ones());
    let best = by_size
        .into_iter()
        .find(|&s| masks.iter().all(|&m| m & s != 0))
        .expect("the full vertex set resolves");
    best.count_ones() as usize
}

pub fn is_resolving_by_paths(on_path: &[Vec<Vec<bool>>], n: usize, set: &[usize]) -> bool {
    (0..n).all(|u| (u + 1..n).all(|v| set.iter().any(|&w| resolves_by_paths(on_path, w, u, v))))
}

/// Random connected graph: a random spanning tree plus random extra edges.
pub fn random_connected_graph(rng: &mut ChaCha8Rng, max_vertices: usize) -> Graph {
    let n = rng.gen_range(2..=max_vertices);
    let density: f64 = rng.gen_range(0.0..0.6);
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    for a in 0..n {
        for b in a + 1..n {
            if !edges.contains(&(a, b)) && rng.gen_bool(density) {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(n, edges).expect("simple graph")
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
