//! Maximum independent sets: exact branch and bound for small graphs and a
//! greedy local-search fallback.

use crate::graph::{Multigraph, VertexId};
use crate::prelude::*;

/// Largest graph solved exactly by [`mis_planar`].
pub const EXACT_LIMIT: usize = 64;

/// An independent set and whether it is known to be maximum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MisResult {
    pub set: Vec<VertexId>,
    pub exact: bool,
}

fn masks(g: &Multigraph) -> Vec<u64> {
    let mut adj = vec![0u64; g.vertex_count()];
    for &(a, b) in g.edges() {
        if a != b {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
    }
    adj
}

fn branch(adj: &[u64], cand: u64, cur: u64, best: &mut u64) {
    if cand == 0 {
        if cur.count_ones() > best.count_ones() {
            *best = cur;
        }
        return;
    }
    if cur.count_ones() + cand.count_ones() <= best.count_ones() {
        return;
    }
    // vertices of degree at most one in the candidate set can be taken
    let mut bits = cand;
    let mut pick = None;
    let mut top = (0, 0);
    while bits != 0 {
        let v = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let d = (adj[v] & cand).count_ones();
        if d <= 1 {
            pick = Some(v);
            break;
        }
        if d > top.0 {
            top = (d, v);
        }
    }
    if let Some(v) = pick {
        branch(adj, cand & !(adj[v] | 1 << v), cur | 1 << v, best);
        return;
    }
    let v = top.1;
    branch(adj, cand & !(adj[v] | 1 << v), cur | 1 << v, best);
    branch(adj, cand & !(1 << v), cur, best);
}

/// A maximum independent set; at most [`EXACT_LIMIT`] vertices.
pub fn exact_mis(g: &Multigraph) -> Vec<VertexId> {
    assert!(g.vertex_count() <= EXACT_LIMIT, "exact_mis handles at most 64 vertices");
    let adj = masks(g);
    let all = if g.vertex_count() == 64 {
        u64::MAX
    } else {
        (1u64 << g.vertex_count()) - 1
    };
    let mut best = 0u64;
    branch(&adj, all, 0, &mut best);
    (0..g.vertex_count()).filter(|&v| best >> v & 1 == 1).collect()
}

/// Min-degree greedy followed by (1,2)-swaps until no improvement.
pub fn greedy_mis(g: &Multigraph) -> Vec<VertexId> {
    let n = g.vertex_count();
    let nbrs: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).filter(|&w| w != v).collect()).collect();
    let mut alive = vec![true; n];
    let mut inset = vec![false; n];
    loop {
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| nbrs[v].iter().filter(|&&w| alive[w]).count());
        let Some(v) = v else { break };
        inset[v] = true;
        alive[v] = false;
        for &w in &nbrs[v] {
            alive[w] = false;
        }
    }
    // replace one member by two non-members whose only member neighbor it is
    let mut improved = true;
    while improved {
        improved = false;
        for x in 0..n {
            if !inset[x] {
                continue;
            }
            let free: Vec<usize> = (0..n)
                .filter(|&w| !inset[w] && w != x && nbrs[w].iter().all(|&u| !inset[u] || u == x))
                .collect();
            let pair = free.iter().enumerate().find_map(|(i, &a)| {
                free[i + 1..].iter().find(|&&b| !nbrs[a].contains(&b)).map(|&b| (a, b))
            });
            if let Some((a, b)) = pair {
                inset[x] = false;
                inset[a] = true;
                inset[b] = true;
                improved = true;
            }
        }
    }
    (0..n).filter(|&v| inset[v]).collect()
}

/// Independent set of a planar graph: exact up to [`EXACT_LIMIT`]
/// vertices, greedy above. `eps` is the accepted slack of an approximate
/// answer and does not change the exact path.
pub fn mis_planar(g: &Multigraph, eps: f64) -> MisResult {
    let _ = eps;
    if g.vertex_count() <= EXACT_LIMIT {
        MisResult {
            set: exact_mis(g),
            exact: true,
        }
    } else {
        MisResult {
            set: greedy_mis(g),
            exact: false,
        }
    }
}

/// True iff no two vertices of `set` are adjacent.
pub fn is_independent(g: &Multigraph, set: &[VertexId]) -> bool {
    g.edges()
        .iter()
        .all(|&(a, b)| !(set.contains(&a) && set.contains(&b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    #[test]
    fn examples() {
        assert_eq!(mis_planar(&gen::cycle_graph(5), 0.5).set.len(), 2);
        let oct = gen::octahedron();
        let s = mis_planar(&oct, 0.5).set;
        assert_eq!(s.len(), 2);
        assert!(is_independent(&oct, &s));
        let empty = Multigraph::new(7, &[]).unwrap();
        assert_eq!(mis_planar(&empty, 0.5).set.len(), 7);
        assert_eq!(exact_mis(&gen::cube()).len(), 4);
        assert_eq!(exact_mis(&gen::k4()).len(), 1);
    }

    #[test]
    fn greedy_is_independent() {
        for g in [gen::cube(), gen::petersen(), gen::octahedron(), gen::theta(4, 3)] {
            let s = greedy_mis(&g);
            assert!(is_independent(&g, &s));
            assert!(s.len() * 2 >= exact_mis(&g).len());
        }
    }
}
