//! Instance generators: hardness constructions, named graphs and random families.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cycles::CycleSet;
use crate::graph::{dual, is_biconnected, Cycle, FacePartition, Multigraph, VertexId};
use crate::planarity::planar_embed;
use crate::prelude::*;
use crate::spqr::{NodeKind, SpqrTree};
use crate::{Error, Result};

/// A graph with a cycle set and a description of where it came from.
#[derive(Clone, Debug)]
pub struct Instance {
    pub graph: Multigraph,
    pub cycles: CycleSet,
    pub name: String,
    pub source: String,
    /// Known optimum, when the construction determines it.
    pub optimum: Option<usize>,
    pub seed: Option<u64>,
}

fn graph(n: usize, edges: &[(usize, usize)]) -> Multigraph {
    Multigraph::new(n, edges).expect("valid edge list")
}

pub fn k4() -> Multigraph {
    graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
}

pub fn cycle_graph(n: usize) -> Multigraph {
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    graph(n, &edges)
}

/// Two poles 0 and 1 joined by `k` paths with `len` edges each.
pub fn theta(k: usize, len: usize) -> Multigraph {
    let mut edges = Vec::new();
    let mut next = 2;
    for _ in 0..k {
        let mut prev = 0;
        for _ in 0..len - 1 {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        edges.push((prev, 1));
    }
    graph(next, &edges)
}

pub fn cube() -> Multigraph {
    let mut edges = Vec::new();
    for v in 0..8usize {
        for b in 0..3 {
            let w = v ^ (1 << b);
            if v < w {
                edges.push((v, w));
            }
        }
    }
    graph(8, &edges)
}

pub fn octahedron() -> Multigraph {
    let mut edges = Vec::new();
    for v in 0..6usize {
        for w in v + 1..6 {
            if w != v + 3 {
                edges.push((v, w));
            }
        }
    }
    graph(6, &edges)
}

pub fn complete_bipartite(a: usize, b: usize) -> Multigraph {
    let mut edges = Vec::new();
    for i in 0..a {
        for j in 0..b {
            edges.push((i, a + j));
        }
    }
    graph(a + b, &edges)
}

pub fn petersen() -> Multigraph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    graph(10, &edges)
}

/// Two K4's, each with one subdivided edge, joined by an edge between the
/// subdivision vertices: cubic, 10 vertices, with a bridge.
pub fn bridged_double_k4() -> Multigraph {
    let mut edges = Vec::new();
    for base in [0, 5] {
        // K4 on base..base+4 with edge (base, base+1) subdivided by base+4
        for (a, b) in [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 4), (4, 1)] {
            edges.push((base + a, base + b));
        }
    }
    edges.push((4, 9));
    graph(10, &edges)
}

/// Looks up a graph by name: `K4`, `C5` or `C_5`, `theta_3_2`, `cube`,
/// `octahedron`, `K23`, `K33`, `petersen`, `bridged_double_k4`.
pub fn named(name: &str) -> Result<Multigraph> {
    let unknown = || Error::UnknownName(name.to_string());
    let num = |s: &str| s.parse::<usize>().map_err(|_| unknown());
    match name {
        "K4" => Ok(k4()),
        "cube" => Ok(cube()),
        "octahedron" => Ok(octahedron()),
        "K23" => Ok(complete_bipartite(2, 3)),
        "K33" => Ok(complete_bipartite(3, 3)),
        "petersen" => Ok(petersen()),
        "bridged_double_k4" => Ok(bridged_double_k4()),
        _ => {
            if let Some(rest) = name.strip_prefix("theta_") {
                let (k, l) = rest.split_once('_').ok_or_else(unknown)?;
                let (k, l) = (num(k)?, num(l)?);
                if k < 2 || l < 1 || (l == 1 && k > 1) {
                    return Err(unknown());
                }
                return Ok(theta(k, l));
            }
            if let Some(rest) = name.strip_prefix('C') {
                let n = num(rest.trim_start_matches('_'))?;
                if n < 3 {
                    return Err(unknown());
                }
                return Ok(cycle_graph(n));
            }
            Err(unknown())
        }
    }
}

fn check_cubic(h: &Multigraph) -> Result<()> {
    if (0..h.vertex_count()).all(|v| h.degree(v) == 3) {
        Ok(())
    } else {
        Err(Error::NotCubic)
    }
}

/// True iff the graph stays connected after removing any two vertices.
pub fn is_triconnected(g: &Multigraph) -> bool {
    g.vertex_count() >= 4
        && is_biconnected(g)
        && (0..g.vertex_count()).all(|v| g.articulation_points_without(Some(v)).is_empty())
}

/// Independent-set reduction: the dual of `h` with a degree-2 vertex on
/// every dual edge; the cycles are the facial triangles of the dual.
pub fn from_mis(h: &Multigraph) -> Result<Instance> {
    check_cubic(h)?;
    let emb = planar_embed(h)?;
    if !is_triconnected(h) {
        return Err(Error::Not3Connected);
    }
    let d = dual(h, &emb)?;
    let base = d.graph.vertex_count();
    let mut edges: Vec<(VertexId, VertexId)> = d.graph.edges().to_vec();
    for (i, &(a, b)) in d.graph.edges().iter().enumerate() {
        edges.push((a, base + i));
        edges.push((base + i, b));
    }
    let g = Multigraph::new(base + d.graph.edge_count(), &edges)?;
    // one triangle of the dual per vertex of h, through the dual edges at that vertex
    let cycles: Vec<Cycle> = (0..h.vertex_count())
        .map(|v| {
            let es: Vec<usize> = h.darts_at(v).iter().map(|d| d.edge()).collect();
            Cycle::from_edges(&g, &es)
        })
        .collect::<Result<_>>()?;
    let cycles = CycleSet::from_cycles(cycles)?;
    debug_assert!(cycles.max_heavy_degree() <= 3);
    Ok(Instance {
        graph: g,
        cycles,
        name: "from_mis".to_string(),
        source: format!("cubic graph, {} vertices", h.vertex_count()),
        optimum: (h.vertex_count() <= crate::mis::EXACT_LIMIT).then(|| crate::mis::exact_mis(h).len()),
        seed: None,
    })
}

/// Hamiltonian-circuit reduction: one K_{2,3} gadget per vertex of `h`,
/// joined at two shared vertices; one cycle per edge of `h`.
pub fn from_hamiltonian(h: &Multigraph) -> Result<Instance> {
    check_cubic(h)?;
    let n = h.vertex_count();
    let (s, t) = (0, 1);
    let u = |a: usize, i: usize| 2 + 4 * a + i;
    let v = |a: usize| 2 + 4 * a + 3;
    let mut edges = Vec::new();
    for a in 0..n {
        for i in 0..3 {
            edges.push((s, u(a, i)));
            edges.push((u(a, i), v(a)));
        }
        edges.push((v(a), t));
    }
    let g = Multigraph::new(2 + 4 * n, &edges)?;
    // port of edge e at vertex a: its position in a's adjacency list
    let port = |a: usize, e: usize| h.darts_at(a).iter().position(|d| d.edge() == e).expect("incident");
    let seqs: Vec<Vec<usize>> = (0..h.edge_count())
        .map(|e| {
            let (a, b) = h.endpoints(e);
            vec![s, u(a, port(a, e)), v(a), t, v(b), u(b, port(b, e))]
        })
        .collect();
    let cycles = CycleSet::validate(&g, &seqs)?;
    debug_assert!(cycles.max_pairwise_shared() <= 3);
    Ok(Instance {
        graph: g,
        cycles,
        name: "from_hamiltonian".to_string(),
        source: format!("cubic graph, {} vertices", n),
        optimum: None,
        seed: None,
    })
}

/// Largest number of consecutive pairs that are edges of `h`, over all
/// circular orders of its vertices.
pub fn circular_order_opt(h: &Multigraph) -> usize {
    let n = h.vertex_count();
    if n < 3 {
        return h.edge_count().min(n);
    }
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|a| (0..n).map(|b| h.find_edge(a, b).is_some()).collect())
        .collect();
    // vertex 0 fixed first; depth-first over the rest with a simple bound
    let mut order = vec![0usize];
    let mut used = vec![false; n];
    used[0] = true;
    let mut best = 0;
    fn go(adj: &[Vec<bool>], order: &mut Vec<usize>, used: &mut [bool], score: usize, best: &mut usize) {
        let n = adj.len();
        if order.len() == n {
            let close = usize::from(adj[order[n - 1]][order[0]]);
            *best = (*best).max(score + close);
            return;
        }
        if score + (n - order.len()) < *best {
            return;
        }
        let last = *order.last().expect("nonempty");
        for w in 1..n {
            if !used[w] {
                used[w] = true;
                order.push(w);
                go(adj, order, used, score + usize::from(adj[last][w]), best);
                order.pop();
                used[w] = false;
            }
        }
    }
    go(&adj, &mut order, &mut used, 0, &mut best);
    best
}

/// Random graph families.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// Random series and parallel compositions starting from a triangle.
    SeriesParallel,
    /// Wheel grown by inserting vertices into faces.
    Triconnected,
    /// Triconnected core with series-parallel and rigid edge replacements.
    Mixed,
}

impl Family {
    pub fn parse(s: &str) -> Result<Family> {
        match s {
            "series_parallel" | "sp" => Ok(Family::SeriesParallel),
            "triconnected" | "tri" => Ok(Family::Triconnected),
            "mixed" => Ok(Family::Mixed),
            _ => Err(Error::UnknownName(s.to_string())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::SeriesParallel => "series_parallel",
            Family::Triconnected => "triconnected",
            Family::Mixed => "mixed",
        }
    }
}

/// How the cycle set of a random instance is chosen.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CyclePolicy {
    /// All faces of one random embedding.
    FacesOfRandomEmbedding,
    /// Faces of a few random embeddings plus random cycles.
    RandomSimpleCycles,
    /// Random cycles kept while each shares two or more vertices with at most two others.
    ConditionThm5,
    /// Random cycles kept while any two share at most two vertices.
    ConditionThm6,
    /// Random cycles kept while each shares two or more vertices with at most `r` others.
    ConditionFpt(usize),
}

impl CyclePolicy {
    pub fn parse(s: &str) -> Result<CyclePolicy> {
        match s {
            "faces_of_random_embedding" | "faces" => Ok(CyclePolicy::FacesOfRandomEmbedding),
            "random_simple_cycles" | "random" => Ok(CyclePolicy::RandomSimpleCycles),
            "condition_thm5" => Ok(CyclePolicy::ConditionThm5),
            "condition_thm6" => Ok(CyclePolicy::ConditionThm6),
            _ => match s.strip_prefix("condition_fpt") {
                Some(r) => r
                    .trim_start_matches('_')
                    .parse()
                    .map(CyclePolicy::ConditionFpt)
                    .map_err(|_| Error::UnknownName(s.to_string())),
                None => Err(Error::UnknownName(s.to_string())),
            },
        }
    }

    pub fn name(self) -> String {
        match self {
            CyclePolicy::FacesOfRandomEmbedding => "faces_of_random_embedding".to_string(),
            CyclePolicy::RandomSimpleCycles => "random_simple_cycles".to_string(),
            CyclePolicy::ConditionThm5 => "condition_thm5".to_string(),
            CyclePolicy::ConditionThm6 => "condition_thm6".to_string(),
            CyclePolicy::ConditionFpt(r) => format!("condition_fpt_{r}"),
        }
    }
}

fn has_edge(edges: &[(usize, usize)], a: usize, b: usize) -> bool {
    edges.iter().any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a))
}

/// Grows a simple series-parallel edge list on `n` ≥ 3 vertices.
fn grow_series_parallel(rng: &mut ChaCha8Rng, mut edges: Vec<(usize, usize)>, mut n: usize, target: usize) -> (Vec<(usize, usize)>, usize) {
    while n < target {
        let i = rng.gen_range(0..edges.len());
        let (a, b) = edges[i];
        match rng.gen_range(0..3) {
            0 => {
                edges[i] = (a, n);
                edges.push((n, b));
                n += 1;
            }
            1 => {
                edges.push((a, n));
                edges.push((n, b));
                n += 1;
            }
            _ => {
                // close a degree-2 path a - w - c with a chord
                let w = b;
                let nb: Vec<usize> = edges
                    .iter()
                    .filter_map(|&(x, y)| if x == w { Some(y) } else if y == w { Some(x) } else { None })
                    .collect();
                if nb.len() == 2 && nb[0] != nb[1] && !has_edge(&edges, nb[0], nb[1]) {
                    edges.push((nb[0], nb[1]));
                }
            }
        }
    }
    (edges, n)
}

fn grow_triconnected(rng: &mut ChaCha8Rng, target: usize) -> (Vec<(usize, usize)>, usize) {
    let rim = 3 + rng.gen_range(0..2usize).min(target.saturating_sub(4));
    let mut edges = Vec::new();
    for i in 0..rim {
        edges.push((0, 1 + i));
        edges.push((1 + i, 1 + (i + 1) % rim));
    }
    let mut n = rim + 1;
    while n < target {
        let g = graph(n, &edges);
        let emb = planar_embed(&g).expect("planar by construction");
        let faces = FacePartition::compute(&g, &emb).expect("valid embedding").faces;
        let f = &faces[rng.gen_range(0..faces.len())];
        let mut verts = f.vertices(&g);
        verts.shuffle(rng);
        let k = rng.gen_range(3..=verts.len());
        for &w in &verts[..k] {
            edges.push((n, w));
        }
        n += 1;
    }
    (edges, n)
}

/// Replaces edge `i` by K4 minus that edge, with two new vertices.
fn rigid_replace(edges: &mut Vec<(usize, usize)>, n: &mut usize, i: usize) {
    let (a, b) = edges[i];
    let (x, y) = (*n, *n + 1);
    *n += 2;
    edges[i] = (a, x);
    edges.extend([(a, y), (x, y), (x, b), (y, b)]);
}

fn build_graph(family: Family, n: usize, rng: &mut ChaCha8Rng) -> Multigraph {
    let n = n.max(4);
    let (edges, count) = match family {
        Family::SeriesParallel => grow_series_parallel(rng, vec![(0, 1), (1, 2), (2, 0)], 3, n),
        Family::Triconnected => grow_triconnected(rng, n),
        Family::Mixed => {
            let core = 4 + rng.gen_range(0..2usize);
            let (mut edges, mut count) = grow_triconnected(rng, core.min(n));
            while count + 2 <= n {
                let i = rng.gen_range(0..edges.len());
                if rng.gen_bool(0.3) {
                    rigid_replace(&mut edges, &mut count, i);
                } else {
                    let step = count + 1;
                    let (e2, c2) = grow_series_parallel(rng, edges, count, step);
                    edges = e2;
                    count = c2;
                }
            }
            (edges, count)
        }
    };
    let g = graph(count, &edges);
    debug_assert!(is_biconnected(&g));
    g
}

/// Faces of a uniformly random choice of P-orders and R-flips.
fn random_faces(g: &Multigraph, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let tree = SpqrTree::build(g).expect("biconnected planar").root_at(0);
    let mut choice = tree.default_choice();
    for x in 0..tree.node_count() {
        match tree.kind(x) {
            NodeKind::P => choice.orders[x].shuffle(rng),
            NodeKind::R => choice.flips[x] = rng.gen_bool(0.5),
            _ => {}
        }
    }
    let emb = tree.compose_embedding(&choice);
    FacePartition::compute(g, &emb)
        .expect("composed embeddings are planar")
        .faces
        .iter()
        .map(|f| f.edges())
        .collect()
}

/// A random cycle through a random edge, found by randomized search.
fn random_cycle(g: &Multigraph, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let e = rng.gen_range(0..g.edge_count());
    let (a, b) = g.endpoints(e);
    // randomized DFS from b to a avoiding e
    let mut parent = vec![usize::MAX; g.vertex_count()];
    let mut seen = vec![false; g.vertex_count()];
    let mut stack = vec![b];
    seen[b] = true;
    while let Some(x) = stack.pop() {
        if x == a {
            break;
        }
        let mut darts = g.darts_at(x).to_vec();
        darts.shuffle(rng);
        for d in darts {
            if d.edge() == e {
                continue;
            }
            let y = g.head(d);
            if !seen[y] {
                seen[y] = true;
                parent[y] = d.edge();
                stack.push(y);
            }
        }
    }
    let mut es = vec![e];
    let mut x = a;
    while x != b {
        let pe = parent[x];
        es.push(pe);
        let (p, q) = g.endpoints(pe);
        x = if p == x { q } else { p };
    }
    es.sort_unstable();
    es
}

fn candidate_cycles(g: &Multigraph, rng: &mut ChaCha8Rng, extra: usize) -> Vec<Vec<usize>> {
    let mut set = BTreeSet::new();
    for _ in 0..3 {
        set.extend(random_faces(g, rng));
    }
    for _ in 0..extra {
        set.insert(random_cycle(g, rng));
    }
    let mut v: Vec<Vec<usize>> = set.into_iter().collect();
    v.shuffle(rng);
    v
}

fn shared_vertices(g: &Multigraph, a: &[usize], b: &[usize]) -> usize {
    let vs = |es: &[usize]| -> BTreeSet<usize> {
        es.iter().flat_map(|&e| {
            let (x, y) = g.endpoints(e);
            [x, y]
        })
        .collect()
    };
    vs(a).intersection(&vs(b)).count()
}

/// Keeps candidates greedily while each kept cycle has at most `r` heavy neighbors.
fn filter_heavy(g: &Multigraph, cands: Vec<Vec<usize>>, r: usize) -> Vec<Vec<usize>> {
    let mut kept: Vec<Vec<usize>> = Vec::new();
    let mut deg: Vec<usize> = Vec::new();
    for c in cands {
        let heavy: Vec<usize> = (0..kept.len())
            .filter(|&i| shared_vertices(g, &kept[i], &c) >= 2)
            .collect();
        if heavy.len() <= r && heavy.iter().all(|&i| deg[i] < r) {
            for &i in &heavy {
                deg[i] += 1;
            }
            deg.push(heavy.len());
            kept.push(c);
        }
    }
    kept
}

fn filter_pairwise(g: &Multigraph, cands: Vec<Vec<usize>>, limit: usize) -> Vec<Vec<usize>> {
    let mut kept: Vec<Vec<usize>> = Vec::new();
    for c in cands {
        if kept.iter().all(|k| shared_vertices(g, k, &c) <= limit) {
            kept.push(c);
        }
    }
    kept
}

/// A seeded random instance.
pub fn random_instance(family: Family, n: usize, policy: CyclePolicy, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = build_graph(family, n, &mut rng);
    let mut sets = match policy {
        CyclePolicy::FacesOfRandomEmbedding => random_faces(&g, &mut rng),
        CyclePolicy::RandomSimpleCycles => candidate_cycles(&g, &mut rng, 4),
        CyclePolicy::ConditionThm5 => filter_heavy(&g, candidate_cycles(&g, &mut rng, 4), 2),
        CyclePolicy::ConditionFpt(r) => filter_heavy(&g, candidate_cycles(&g, &mut rng, 4), r),
        CyclePolicy::ConditionThm6 => filter_pairwise(&g, candidate_cycles(&g, &mut rng, 4), 2),
    };
    sets.sort();
    sets.dedup();
    let cycles = sets
        .iter()
        .map(|es| Cycle::from_edges(&g, es))
        .collect::<Result<Vec<_>>>()
        .and_then(CycleSet::from_cycles)
        .expect("generated cycles are simple and distinct");
    let optimum = (policy == CyclePolicy::FacesOfRandomEmbedding).then_some(cycles.len());
    Instance {
        graph: g,
        cycles,
        name: format!("{}_{}", family.name(), policy.name()),
        source: format!("n={n}"),
        optimum,
        seed: Some(seed),
    }
}
