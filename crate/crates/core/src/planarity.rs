//! Planarity testing with rotation-system output.
//!
//! Each block is embedded by path addition (Demoucron, Malgrange and
//! Pertuiset); block rotations are then concatenated at cut vertices.

use crate::graph::{Dart, FacePartition, Multigraph, RotationEmbedding, VertexId};
use crate::prelude::*;
use crate::{Error, Result};

/// Returns a planar rotation system of a connected graph, or `NotPlanar`.
pub fn planar_embed(g: &Multigraph) -> Result<RotationEmbedding> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut rotation: Vec<Vec<Dart>> = vec![Vec::new(); g.vertex_count()];
    for block in g.blocks() {
        // local copy of the block
        let mut local_of = BTreeMap::new();
        let mut global = Vec::new();
        let mut local_edges = Vec::with_capacity(block.len());
        for &e in &block {
            let (u, v) = g.endpoints(e);
            let mut id = |w: VertexId| {
                *local_of.entry(w).or_insert_with(|| {
                    global.push(w);
                    global.len() - 1
                })
            };
            let (a, b) = (id(u), id(v));
            local_edges.push((a, b));
        }
        let local = Multigraph::new(global.len(), &local_edges)?;
        let rot = embed_block(&local)?;
        for (lv, darts) in rot.into_iter().enumerate() {
            let v = global[lv];
            rotation[v].extend(darts.into_iter().map(|d| {
                let e = block[d.edge()];
                Dart::new(e, d.is_forward())
            }));
        }
    }
    let emb = RotationEmbedding::new(rotation);
    FacePartition::compute(g, &emb)?;
    Ok(emb)
}

/// True iff `g` is planar. Disconnected graphs are tested block by block.
pub fn is_planar(g: &Multigraph) -> bool {
    g.blocks().iter().all(|block| {
        let mut map = BTreeMap::new();
        let mut edges = Vec::new();
        for &e in block {
            let (u, v) = g.endpoints(e);
            let next = map.len();
            let a = *map.entry(u).or_insert(next);
            let next = map.len();
            let b = *map.entry(v).or_insert(next);
            edges.push((a, b));
        }
        match Multigraph::new(map.len(), &edges) {
            Ok(local) => embed_block(&local).is_ok(),
            Err(_) => false,
        }
    })
}

/// Path-addition embedding of a biconnected multigraph (or a single edge).
fn embed_block(g: &Multigraph) -> Result<Vec<Vec<Dart>>> {
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut rot: Vec<Vec<Dart>> = vec![Vec::new(); n];
    if m == 1 {
        rot[0].push(Dart::new(0, true));
        rot[1].push(Dart::new(0, false));
        return Ok(rot);
    }
    let mut in_h = vec![false; n];
    let mut edge_in_h = vec![false; m];

    // initial cycle through edge 0
    let (s, t) = g.endpoints(0);
    let path = bfs_path(g, t, |w| w == s, |e, _| e != 0).ok_or(Error::NotBiconnected)?;
    let mut cycle_darts = vec![Dart::new(0, true)];
    cycle_darts.extend(path);
    for (i, &d) in cycle_darts.iter().enumerate() {
        let prev = cycle_darts[(i + cycle_darts.len() - 1) % cycle_darts.len()];
        let v = g.tail(d);
        rot[v] = vec![d, prev.rev()];
        in_h[v] = true;
        edge_in_h[d.edge()] = true;
    }
    let mut embedded_edges = cycle_darts.len();

    while embedded_edges < m {
        let faces = trace_partial(g, &rot, &edge_in_h);
        let face_vertex_sets: Vec<Vec<VertexId>> = faces
            .iter()
            .map(|f| {
                let mut vs: Vec<VertexId> = f.iter().map(|&d| g.tail(d)).collect();
                vs.sort_unstable();
                vs
            })
            .collect();
        let fragments = fragments(g, &in_h, &edge_in_h);
        let mut chosen: Option<(usize, usize)> = None;
        for (fi, frag) in fragments.iter().enumerate() {
            let admissible: Vec<usize> = (0..faces.len())
                .filter(|&f| {
                    frag.attachments
                        .iter()
                        .all(|a| face_vertex_sets[f].binary_search(a).is_ok())
                })
                .collect();
            match admissible.len() {
                0 => return Err(Error::NotPlanar),
                1 => {
                    chosen = Some((fi, admissible[0]));
                    break;
                }
                _ => {
                    if chosen.is_none() {
                        chosen = Some((fi, admissible[0]));
                    }
                }
            }
        }
        let (fi, face) = chosen.expect("an unembedded edge implies a fragment");
        let path = fragment_path(g, &fragments[fi], &in_h, &edge_in_h);
        insert_path(g, &mut rot, &faces[face], &path);
        for &d in &path {
            edge_in_h[d.edge()] = true;
            in_h[g.tail(d)] = true;
            in_h[g.head(d)] = true;
        }
        embedded_edges += path.len();
    }
    Ok(rot)
}

/// Breadth-first dart path from `start` to the first vertex satisfying
/// `goal`, using edges accepted by `usable(edge, head)`.
fn bfs_path(
    g: &Multigraph,
    start: VertexId,
    goal: impl Fn(VertexId) -> bool,
    usable: impl Fn(usize, VertexId) -> bool,
) -> Option<Vec<Dart>> {
    let n = g.vertex_count();
    let mut via: Vec<Option<Dart>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    seen[start] = true;
    queue.push_back(start);
    while let Some(v) = queue.pop_front() {
        for &d in g.darts_at(v) {
            let w = g.head(d);
            if seen[w] || !usable(d.edge(), w) {
                continue;
            }
            seen[w] = true;
            via[w] = Some(d);
            if goal(w) {
                let mut path = Vec::new();
                let mut x = w;
                while let Some(d) = via[x] {
                    path.push(d);
                    x = g.tail(d);
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(w);
        }
    }
    None
}

fn trace_partial(g: &Multigraph, rot: &[Vec<Dart>], edge_in_h: &[bool]) -> Vec<Vec<Dart>> {
    let dart_count = 2 * g.edge_count();
    let mut succ = vec![Dart::from_index(usize::MAX); dart_count];
    for r in rot {
        for (i, &d) in r.iter().enumerate() {
            succ[d.index()] = r[(i + 1) % r.len()];
        }
    }
    let mut done = vec![false; dart_count];
    let mut faces = Vec::new();
    for idx in 0..dart_count {
        let d0 = Dart::from_index(idx);
        if !edge_in_h[d0.edge()] || done[idx] {
            continue;
        }
        let mut face = Vec::new();
        let mut d = d0;
        while !done[d.index()] {
            done[d.index()] = true;
            face.push(d);
            d = succ[d.rev().index()];
        }
        faces.push(face);
    }
    faces
}

struct Fragment {
    /// Vertices of the fragment not in H (empty for a chord edge).
    inner: Vec<VertexId>,
    /// Chord edge when `inner` is empty.
    chord: Option<usize>,
    /// Sorted attachment vertices in H.
    attachments: Vec<VertexId>,
}

fn fragments(g: &Multigraph, in_h: &[bool], edge_in_h: &[bool]) -> Vec<Fragment> {
    let mut out = Vec::new();
    for e in 0..g.edge_count() {
        let (u, v) = g.endpoints(e);
        if !edge_in_h[e] && in_h[u] && in_h[v] {
            let mut attachments = vec![u, v];
            attachments.sort_unstable();
            out.push(Fragment {
                inner: Vec::new(),
                chord: Some(e),
                attachments,
            });
        }
    }
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    for s in 0..n {
        if in_h[s] || seen[s] {
            continue;
        }
        let mut inner = vec![s];
        let mut attachments = BTreeSet::new();
        seen[s] = true;
        let mut i = 0;
        while i < inner.len() {
            let v = inner[i];
            i += 1;
            for w in g.neighbors(v) {
                if in_h[w] {
                    attachments.insert(w);
                } else if !seen[w] {
                    seen[w] = true;
                    inner.push(w);
                }
            }
        }
        out.push(Fragment {
            inner,
            chord: None,
            attachments: attachments.into_iter().collect(),
        });
    }
    out
}

/// A dart path through the fragment joining two distinct attachments.
fn fragment_path(g: &Multigraph, frag: &Fragment, in_h: &[bool], edge_in_h: &[bool]) -> Vec<Dart> {
    if let Some(e) = frag.chord {
        return vec![Dart::new(e, true)];
    }
    let a = frag.attachments[0];
    let mut inner_set = BTreeSet::new();
    inner_set.extend(frag.inner.iter().copied());
    let entry = g
        .darts_at(a)
        .iter()
        .copied()
        .find(|&d| !edge_in_h[d.edge()] && inner_set.contains(&g.head(d)))
        .expect("attachment has an edge into the fragment");
    let c = g.head(entry);
    let tail = bfs_path(
        g,
        c,
        |w| in_h[w] && w != a,
        |_, w| inner_set.contains(&w) || (in_h[w] && w != a),
    )
    .expect("a fragment of a biconnected graph has two attachments");
    let mut path = vec![entry];
    path.extend(tail);
    path
}

/// Embeds a path between two vertices of `face` into that face.
fn insert_path(g: &Multigraph, rot: &mut [Vec<Dart>], face: &[Dart], path: &[Dart]) {
    let a = g.tail(path[0]);
    let last = *path.last().expect("nonempty path");
    let b = g.head(last);
    let corner = |x: VertexId| {
        *face
            .iter()
            .find(|&&d| g.head(d) == x)
            .expect("attachment lies on the face")
    };
    let (in_a, in_b) = (corner(a), corner(b));
    insert_after(&mut rot[a], in_a.rev(), path[0]);
    insert_after(&mut rot[b], in_b.rev(), last.rev());
    for w in path.windows(2) {
        let v = g.head(w[0]);
        rot[v] = vec![w[1], w[0].rev()];
    }
}

fn insert_after(r: &mut Vec<Dart>, anchor: Dart, new: Dart) {
    let pos = r.iter().position(|&d| d == anchor).expect("anchor in rotation");
    r.insert(pos + 1, new);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::trace_faces;

    fn complete(n: usize) -> Multigraph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Multigraph::new(n, &edges).unwrap()
    }

    fn k_bip(a: usize, b: usize) -> Multigraph {
        let mut edges = Vec::new();
        for u in 0..a {
            for v in 0..b {
                edges.push((u, a + v));
            }
        }
        Multigraph::new(a + b, &edges).unwrap()
    }

    #[test]
    fn examples() {
        let k4 = complete(4);
        assert_eq!(trace_faces(&k4, &planar_embed(&k4).unwrap()).unwrap().len(), 4);
        assert_eq!(planar_embed(&complete(5)), Err(Error::NotPlanar));
        let k23 = k_bip(2, 3);
        assert_eq!(trace_faces(&k23, &planar_embed(&k23).unwrap()).unwrap().len(), 3);
        assert_eq!(planar_embed(&k_bip(3, 3)), Err(Error::NotPlanar));
    }

    #[test]
    fn disconnected_is_an_error() {
        let g = Multigraph::new(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(planar_embed(&g), Err(Error::Disconnected));
        assert!(is_planar(&g));
    }

    #[test]
    fn multigraphs_and_cut_vertices() {
        let dipole = Multigraph::new(2, &[(0, 1), (0, 1), (0, 1)]).unwrap();
        assert_eq!(trace_faces(&dipole, &planar_embed(&dipole).unwrap()).unwrap().len(), 3);
        let bowtie =
            Multigraph::new(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        assert_eq!(trace_faces(&bowtie, &planar_embed(&bowtie).unwrap()).unwrap().len(), 3);
        let tree = Multigraph::new(4, &[(0, 1), (1, 2), (1, 3)]).unwrap();
        assert_eq!(trace_faces(&tree, &planar_embed(&tree).unwrap()).unwrap().len(), 1);
    }

    #[test]
    fn petersen_is_not_planar_and_grids_are() {
        let outer = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)];
        let inner = [(5, 7), (7, 9), (9, 6), (6, 8), (8, 5)];
        let spokes = [(0, 5), (1, 6), (2, 7), (3, 8), (4, 9)];
        let edges: Vec<_> = outer.iter().chain(&inner).chain(&spokes).copied().collect();
        let p = Multigraph::new(10, &edges).unwrap();
        assert_eq!(planar_embed(&p), Err(Error::NotPlanar));

        let w = 6;
        let mut edges = Vec::new();
        for r in 0..w {
            for c in 0..w {
                let v = r * w + c;
                if c + 1 < w {
                    edges.push((v, v + 1));
                }
                if r + 1 < w {
                    edges.push((v, v + w));
                }
                if r + 1 < w && c + 1 < w {
                    edges.push((v, v + w + 1));
                }
            }
        }
        let grid = Multigraph::new(w * w, &edges).unwrap();
        let f = trace_faces(&grid, &planar_embed(&grid).unwrap()).unwrap();
        assert_eq!(f.len(), edges.len() - w * w + 2);
    }
}
