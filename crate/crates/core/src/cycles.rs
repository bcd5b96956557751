//! Cycle sets, projections into skeletons, interface sets, and the test
//! whether all cycles of a set can bound faces at once.

use crate::graph::{Cycle, Dart, EdgeId, Multigraph, RotationEmbedding, VertexId};
use crate::planarity::planar_embed;
use crate::prelude::*;
use crate::spqr::{NodeId, RootedTree};
use crate::{Error, Result};

pub type CycleId = usize;

/// Validated cycles of a graph with cached pairwise intersections.
#[derive(Clone, Debug)]
pub struct CycleSet {
    cycles: Vec<Cycle>,
    shared_vertices: Vec<Vec<usize>>,
}

impl CycleSet {
    /// Validates cyclic vertex sequences against `g`.
    pub fn validate(g: &Multigraph, sequences: &[Vec<VertexId>]) -> Result<CycleSet> {
        let cycles = sequences
            .iter()
            .map(|s| Cycle::from_vertices(g, s))
            .collect::<Result<Vec<_>>>()?;
        Self::from_cycles(cycles)
    }

    pub fn from_cycles(cycles: Vec<Cycle>) -> Result<CycleSet> {
        let mut by_edges: BTreeMap<&[EdgeId], usize> = BTreeMap::new();
        for (i, c) in cycles.iter().enumerate() {
            if let Some(&first) = by_edges.get(c.edge_set()) {
                return Err(Error::DuplicateCycle { first, second: i });
            }
            by_edges.insert(c.edge_set(), i);
        }
        let sorted: Vec<Vec<VertexId>> = cycles
            .iter()
            .map(|c| {
                let mut v = c.vertices().to_vec();
                v.sort_unstable();
                v
            })
            .collect();
        let k = cycles.len();
        let mut shared_vertices = vec![vec![0; k]; k];
        for i in 0..k {
            for j in i + 1..k {
                let s = count_common(&sorted[i], &sorted[j]);
                shared_vertices[i][j] = s;
                shared_vertices[j][i] = s;
            }
        }
        Ok(CycleSet {
            cycles,
            shared_vertices,
        })
    }

    pub fn empty() -> CycleSet {
        CycleSet {
            cycles: Vec::new(),
            shared_vertices: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn get(&self, id: CycleId) -> &Cycle {
        &self.cycles[id]
    }

    pub fn shared_vertex_count(&self, a: CycleId, b: CycleId) -> usize {
        self.shared_vertices[a][b]
    }

    /// Edges common to two cycles, sorted.
    pub fn shared_edges(&self, a: CycleId, b: CycleId) -> Vec<EdgeId> {
        let (x, y) = (self.cycles[a].edge_set(), self.cycles[b].edge_set());
        x.iter().copied().filter(|e| y.binary_search(e).is_ok()).collect()
    }

    /// Largest number of vertices shared by two distinct cycles.
    pub fn max_pairwise_shared(&self) -> usize {
        self.shared_vertices
            .iter()
            .flat_map(|row| row.iter().copied())
            .max()
            .unwrap_or(0)
    }

    /// Cycles sharing at least two vertices with `id`.
    pub fn heavy_neighbors(&self, id: CycleId) -> Vec<CycleId> {
        (0..self.len())
            .filter(|&j| j != id && self.shared_vertices[id][j] >= 2)
            .collect()
    }

    /// Largest number of other cycles any cycle shares two or more vertices with.
    pub fn max_heavy_degree(&self) -> usize {
        (0..self.len())
            .map(|i| self.heavy_neighbors(i).len())
            .max()
            .unwrap_or(0)
    }

    /// Cycles whose edge set bounds a face of `emb`, ascending.
    pub fn facial_ids(&self, g: &Multigraph, emb: &RotationEmbedding) -> Result<Vec<CycleId>> {
        let faces = crate::graph::FacePartition::compute(g, emb)?.edge_sets();
        Ok((0..self.len())
            .filter(|&i| faces.contains(self.cycles[i].edge_set()))
            .collect())
    }
}

fn count_common(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// A cycle's projection into one skeleton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    pub cycle: CycleId,
    pub node: NodeId,
    /// Skeleton edge indices, ascending; at least two.
    pub edges: Vec<usize>,
    /// True iff the projection uses the parent edge.
    pub interface: bool,
}

/// Projection of cycle `c` into `node`, or `None` when it is not relevant.
pub fn project(tree: &RootedTree, cycles: &CycleSet, c: CycleId, node: NodeId) -> Option<Projection> {
    let positions = leaf_positions(tree, cycles.get(c));
    project_positions(tree, &positions, c, node)
}

fn leaf_positions(tree: &RootedTree, cycle: &Cycle) -> Vec<usize> {
    let mut p: Vec<usize> = cycle.edges().iter().map(|&e| tree.leaf_pos(e)).collect();
    p.sort_unstable();
    p
}

fn any_in(sorted: &[usize], (lo, hi): (usize, usize)) -> bool {
    let i = sorted.partition_point(|&x| x < lo);
    i < sorted.len() && sorted[i] < hi
}

fn project_positions(tree: &RootedTree, positions: &[usize], c: CycleId, node: NodeId) -> Option<Projection> {
    let own = tree.span(node);
    if !any_in(positions, own) {
        return None;
    }
    let outside = !positions.is_empty() && (positions[0] < own.0 || positions[positions.len() - 1] >= own.1);
    let mut edges = Vec::new();
    let mut interface = false;
    let sk = tree.node(node);
    for i in 0..sk.links.len() {
        let used = if tree.parent_edge(node) == Some(i) {
            interface = outside;
            outside
        } else if let Some(child) = tree.child_at(node, i) {
            any_in(positions, tree.span(child))
        } else {
            // real edge of a Q-node
            let e = tree.real_edge(node).expect("Q-node");
            positions.binary_search(&tree.leaf_pos(e)).is_ok()
        };
        if used {
            edges.push(i);
        }
    }
    if edges.len() < 2 {
        return None;
    }
    Some(Projection {
        cycle: c,
        node,
        edges,
        interface,
    })
}

/// Relevant and interface cycles of every node of a rooted tree.
#[derive(Clone, Debug)]
pub struct Projections {
    /// Per node, the projections of its relevant cycles ordered by cycle id.
    per_node: Vec<Vec<Projection>>,
}

impl Projections {
    pub fn compute(tree: &RootedTree, cycles: &CycleSet) -> Projections {
        let mut per_node = vec![Vec::new(); tree.node_count()];
        for c in 0..cycles.len() {
            let positions = leaf_positions(tree, cycles.get(c));
            for node in 0..tree.node_count() {
                if let Some(p) = project_positions(tree, &positions, c, node) {
                    per_node[node].push(p);
                }
            }
        }
        Projections { per_node }
    }

    /// Projections of 𝓡(µ).
    pub fn of(&self, node: NodeId) -> &[Projection] {
        &self.per_node[node]
    }

    pub fn get(&self, node: NodeId, c: CycleId) -> Option<&Projection> {
        self.per_node[node].iter().find(|p| p.cycle == c)
    }

    /// 𝓡(µ), ascending.
    pub fn relevant(&self, node: NodeId) -> Vec<CycleId> {
        self.per_node[node].iter().map(|p| p.cycle).collect()
    }

    /// 𝓘(µ), ascending.
    pub fn interface(&self, node: NodeId) -> Vec<CycleId> {
        self.per_node[node]
            .iter()
            .filter(|p| p.interface)
            .map(|p| p.cycle)
            .collect()
    }

    pub fn is_interface(&self, node: NodeId, c: CycleId) -> bool {
        self.get(node, c).is_some_and(|p| p.interface)
    }
}

/// All subsets of `interface` with at most two members, ∅ first.
pub fn interface_choices(interface: &[CycleId]) -> Vec<Vec<CycleId>> {
    let mut out = vec![Vec::new()];
    for (i, &a) in interface.iter().enumerate() {
        out.push(vec![a]);
        for &b in &interface[i + 1..] {
            out.push(vec![a, b]);
        }
    }
    out
}

/// Decides whether all cycles of `subset` can bound faces simultaneously.
/// On success returns an embedding of `g` in which they all do.
pub fn check_all_facial(g: &Multigraph, cycles: &CycleSet, subset: &[CycleId]) -> Result<Option<RotationEmbedding>> {
    let n = g.vertex_count();
    let m = g.edge_count();
    let apex_base = n;
    let mut next = n + subset.len();
    let mut on_edge: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (k, &c) in subset.iter().enumerate() {
        for &e in cycles.get(c).edge_set() {
            on_edge[e].push(k);
        }
    }
    let mut edges = Vec::new();
    // gadget edge leaving each original endpoint, per original edge
    let mut first_segment = vec![0usize; m];
    let mut last_segment = vec![0usize; m];
    for e in 0..m {
        let (u, v) = g.endpoints(e);
        let mut prev = u;
        first_segment[e] = edges.len();
        for &k in &on_edge[e] {
            let s = next;
            next += 1;
            edges.push((prev, s));
            edges.push((s, apex_base + k));
            prev = s;
        }
        last_segment[e] = edges.len();
        edges.push((prev, v));
    }
    let gadget = Multigraph::new(next, &edges)?;
    let emb = match planar_embed(&gadget) {
        Ok(emb) => emb,
        Err(Error::NotPlanar) => return Ok(None),
        Err(e) => return Err(e),
    };
    let mut back: BTreeMap<usize, EdgeId> = BTreeMap::new();
    for e in 0..m {
        back.insert(first_segment[e], e);
        back.insert(last_segment[e], e);
    }
    let rotation = (0..n)
        .map(|v| {
            emb.rotation_at(v)
                .iter()
                .map(|d| {
                    let e = back[&d.edge()];
                    g.dart_from(e, v)
                })
                .collect::<Vec<Dart>>()
        })
        .collect();
    let witness = RotationEmbedding::new(rotation);
    let facial = cycles.facial_ids(g, &witness)?;
    if subset.iter().any(|c| facial.binary_search(c).is_err()) {
        return Err(Error::PreconditionViolated(
            "gadget embedding does not make every cycle facial".to_string(),
        ));
    }
    Ok(Some(witness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spqr::{NodeKind, SpqrTree};

    fn k4() -> Multigraph {
        Multigraph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn k23() -> Multigraph {
        Multigraph::new(5, &[(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1)]).unwrap()
    }

    fn k23_pairs(g: &Multigraph) -> CycleSet {
        CycleSet::validate(g, &[vec![0, 2, 1, 3], vec![0, 2, 1, 4], vec![0, 3, 1, 4]]).unwrap()
    }

    #[test]
    fn validation() {
        let g = k4();
        let tris = vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]];
        let cs = CycleSet::validate(&g, &tris).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                if a != b {
                    assert_eq!(cs.shared_vertex_count(a, b), 2);
                }
            }
        }
        let path = Multigraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(matches!(CycleSet::validate(&path, &[vec![0, 1, 2]]), Err(Error::NotACycle(_))));
        assert_eq!(
            CycleSet::validate(&g, &[vec![0, 1, 2], vec![2, 1, 0]]).unwrap_err(),
            Error::DuplicateCycle { first: 0, second: 1 }
        );
    }

    #[test]
    fn projections_on_k23() {
        let g = k23();
        let cs = k23_pairs(&g);
        let t = SpqrTree::build(&g).unwrap().root_at(0);
        let proj = Projections::compute(&t, &cs);
        let p = t.children(t.phi()).iter().copied().find(|&c| t.kind(c) == NodeKind::P).unwrap();
        assert_eq!(proj.relevant(p), vec![0, 1, 2]);
        assert_eq!(proj.interface(p), vec![0, 1]);
        let third = proj.get(p, 2).unwrap();
        assert_eq!(third.edges.len(), 2);
        assert!(!third.interface);
        // the S-child for path 3 (edges 4, 5) does not see cycle 0
        let s3 = t
            .children(p)
            .iter()
            .copied()
            .find(|&c| t.pertinent_edges(c) == vec![4, 5])
            .unwrap();
        assert!(project(&t, &cs, 0, s3).is_none());
        assert!(project(&t, &cs, 1, s3).is_some());
    }

    #[test]
    fn projections_on_c5() {
        let g = Multigraph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let cs = CycleSet::validate(&g, &[vec![0, 1, 2, 3, 4]]).unwrap();
        let t = SpqrTree::build(&g).unwrap().root_at(0);
        let proj = Projections::compute(&t, &cs);
        let phi = t.phi();
        assert_eq!(proj.relevant(phi), vec![0]);
        assert_eq!(proj.interface(phi), vec![0]);
        assert_eq!(proj.get(phi, 0).unwrap().edges.len(), 5);
    }

    #[test]
    fn choice_families() {
        assert_eq!(interface_choices(&[]).len(), 1);
        assert_eq!(interface_choices(&[4, 7]).len(), 4);
        assert_eq!(interface_choices(&[1, 2, 3]).len(), 7);
    }

    #[test]
    fn all_facial_gadget() {
        let g = k4();
        let tris = vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]];
        let cs = CycleSet::validate(&g, &tris).unwrap();
        assert!(check_all_facial(&g, &cs, &[0]).unwrap().is_some());
        let w = check_all_facial(&g, &cs, &[0, 1, 2, 3]).unwrap().unwrap();
        assert_eq!(cs.facial_ids(&g, &w).unwrap(), vec![0, 1, 2, 3]);
        assert!(check_all_facial(&g, &cs, &[]).unwrap().is_some());

        // on the theta graph the three pair cycles are the faces
        let g = k23();
        let cs = k23_pairs(&g);
        assert!(check_all_facial(&g, &cs, &[0, 1, 2]).unwrap().is_some());

        // the cube has a unique embedding, whose faces are its six 4-cycles
        let cube = Multigraph::new(
            8,
            &[(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4), (0, 4), (1, 5), (2, 6), (3, 7)],
        )
        .unwrap();
        let cs = CycleSet::validate(&cube, &[vec![0, 1, 5, 4], vec![0, 1, 2, 3], vec![0, 4, 7, 3]]).unwrap();
        assert!(check_all_facial(&cube, &cs, &[0, 1, 2]).unwrap().is_some());
        let cs = CycleSet::validate(&cube, &[vec![0, 1, 2, 6, 7, 4], vec![0, 1, 2, 3]]).unwrap();
        assert!(check_all_facial(&cube, &cs, &[0]).unwrap().is_none());
    }
}
