//! Undirected multigraphs, darts, rotation systems and faces.
//!
//! An edge `e = (u, v)` yields two darts: the forward dart `u -> v` with
//! index `2e` and the backward dart `v -> u` with index `2e + 1`. A rotation
//! system lists, for every vertex, the cyclic order of the darts leaving it.
//! Faces are traced with `next(d) = successor of reverse(d)` around `head(d)`.

use crate::prelude::*;
use crate::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dart(usize);

impl Dart {
    #[inline]
    pub fn new(edge: EdgeId, forward: bool) -> Dart {
        Dart(2 * edge + usize::from(!forward))
    }

    #[inline]
    pub fn from_index(index: usize) -> Dart {
        Dart(index)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0
    }

    #[inline]
    pub fn edge(self) -> EdgeId {
        self.0 >> 1
    }

    #[inline]
    pub fn is_forward(self) -> bool {
        self.0 & 1 == 0
    }

    #[inline]
    pub fn rev(self) -> Dart {
        Dart(self.0 ^ 1)
    }
}

/// Undirected multigraph with dense, stable edge identifiers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    incidence: Vec<Vec<Dart>>,
}

impl Multigraph {
    /// Builds a graph on `n` vertices. Edge `i` of the result is `edges[i]`.
    pub fn new(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Multigraph> {
        let mut incidence = vec![Vec::new(); n];
        for (e, &(u, v)) in edges.iter().enumerate() {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop { edge: e, vertex: u });
            }
            incidence[u].push(Dart::new(e, true));
            incidence[v].push(Dart::new(e, false));
        }
        Ok(Multigraph {
            n,
            edges: edges.to_vec(),
            incidence,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    pub fn tail(&self, d: Dart) -> VertexId {
        let (u, v) = self.edges[d.edge()];
        if d.is_forward() {
            u
        } else {
            v
        }
    }

    pub fn head(&self, d: Dart) -> VertexId {
        self.tail(d.rev())
    }

    /// Darts leaving `v`, in edge-id order.
    pub fn darts_at(&self, v: VertexId) -> &[Dart] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incidence[v].len()
    }

    pub fn dart_from(&self, e: EdgeId, tail: VertexId) -> Dart {
        Dart::new(e, self.edges[e].0 == tail)
    }

    /// Lowest-id edge joining `u` and `v`.
    pub fn find_edge(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.incidence
            .get(u)?
            .iter()
            .filter(|d| self.head(**d) == v)
            .map(|d| d.edge())
            .min()
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.incidence[v].iter().map(move |&d| self.head(d))
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// Number of connected components, counting isolated vertices.
    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.n];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            stack.push(s);
            while let Some(v) = stack.pop() {
                for w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    /// Cut vertices, via lowpoints over edge ids (parallel edges are not bridges).
    pub fn articulation_points(&self) -> Vec<VertexId> {
        self.articulation_points_without(None)
    }

    pub(crate) fn articulation_points_without(&self, removed: Option<VertexId>) -> Vec<VertexId> {
        let n = self.n;
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut is_cut = vec![false; n];
        let mut timer = 0;
        // (vertex, edge used to enter, next incidence index)
        let mut stack: Vec<(VertexId, Option<EdgeId>, usize)> = Vec::new();
        for root in 0..n {
            if Some(root) == removed || disc[root] != usize::MAX {
                continue;
            }
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            let mut root_children = 0;
            stack.push((root, None, 0));
            while let Some(&mut (v, via, ref mut idx)) = stack.last_mut() {
                if *idx < self.incidence[v].len() {
                    let d = self.incidence[v][*idx];
                    *idx += 1;
                    if Some(d.edge()) == via {
                        continue;
                    }
                    let w = self.head(d);
                    if Some(w) == removed {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        if v == root {
                            root_children += 1;
                        }
                        stack.push((w, Some(d.edge()), 0));
                    } else {
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(parent, _, _)) = stack.last() {
                        low[parent] = low[parent].min(low[v]);
                        if parent != root && low[v] >= disc[parent] {
                            is_cut[parent] = true;
                        }
                    }
                }
            }
            if root_children > 1 {
                is_cut[root] = true;
            }
        }
        (0..n).filter(|&v| is_cut[v]).collect()
    }

    /// Edge sets of the biconnected components (blocks). Bridges form
    /// single-edge blocks; parallel edges stay together.
    pub fn blocks(&self) -> Vec<Vec<EdgeId>> {
        let n = self.n;
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut timer = 0;
        let mut edge_stack: Vec<EdgeId> = Vec::new();
        let mut blocks = Vec::new();
        let mut seen_edge = vec![false; self.edges.len()];
        let mut stack: Vec<(VertexId, Option<EdgeId>, usize)> = Vec::new();
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            stack.push((root, None, 0));
            while let Some(&mut (v, via, ref mut idx)) = stack.last_mut() {
                if *idx < self.incidence[v].len() {
                    let d = self.incidence[v][*idx];
                    *idx += 1;
                    let e = d.edge();
                    if Some(e) == via || seen_edge[e] {
                        continue;
                    }
                    seen_edge[e] = true;
                    edge_stack.push(e);
                    let w = self.head(d);
                    if disc[w] == usize::MAX {
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        stack.push((w, Some(e), 0));
                    } else {
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(parent, _, _)) = stack.last() {
                        low[parent] = low[parent].min(low[v]);
                        if low[v] >= disc[parent] {
                            let entry = via.expect("non-root vertex has an entry edge");
                            let mut block = Vec::new();
                            while let Some(e) = edge_stack.pop() {
                                block.push(e);
                                if e == entry {
                                    break;
                                }
                            }
                            block.sort_unstable();
                            blocks.push(block);
                        }
                    }
                }
            }
        }
        blocks
    }
}

/// Connected, at least three vertices, and no cut vertex.
pub fn is_biconnected(g: &Multigraph) -> bool {
    g.vertex_count() >= 3 && g.is_connected() && g.articulation_points().is_empty()
}

/// Cyclic order of outgoing darts per vertex, plus an optional outer face
/// given by one of its darts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationEmbedding {
    rotation: Vec<Vec<Dart>>,
    outer: Option<Dart>,
}

impl RotationEmbedding {
    pub fn new(rotation: Vec<Vec<Dart>>) -> RotationEmbedding {
        RotationEmbedding {
            rotation,
            outer: None,
        }
    }

    pub fn with_outer(mut self, dart: Dart) -> RotationEmbedding {
        self.outer = Some(dart);
        self
    }

    pub fn rotation(&self) -> &[Vec<Dart>] {
        &self.rotation
    }

    pub fn rotation_at(&self, v: VertexId) -> &[Dart] {
        &self.rotation[v]
    }

    /// A dart on the designated outer face.
    pub fn outer_dart(&self) -> Option<Dart> {
        self.outer
    }

    /// Reverses every cyclic order. Faces keep their edge sets.
    pub fn mirrored(&self) -> RotationEmbedding {
        RotationEmbedding {
            rotation: self
                .rotation
                .iter()
                .map(|r| r.iter().rev().copied().collect())
                .collect(),
            outer: self.outer.map(Dart::rev),
        }
    }

    /// Equal up to the starting point of each cyclic order.
    pub fn same_rotation(&self, other: &RotationEmbedding) -> bool {
        self.rotation.len() == other.rotation.len()
            && self.rotation.iter().zip(&other.rotation).all(|(a, b)| {
                a.len() == b.len()
                    && (a.is_empty()
                        || b.iter().position(|&d| d == a[0]).is_some_and(|s| {
                            (0..a.len()).all(|i| a[i] == b[(s + i) % b.len()])
                        }))
            })
    }

    /// Checks that every dart of `g` occurs exactly once, at its tail.
    pub fn validate(&self, g: &Multigraph) -> Result<()> {
        if self.rotation.len() != g.vertex_count() {
            return Err(Error::NonPlanarRotation(format!(
                "rotation lists {} vertices, graph has {}",
                self.rotation.len(),
                g.vertex_count()
            )));
        }
        let mut seen = vec![false; 2 * g.edge_count()];
        for (v, rot) in self.rotation.iter().enumerate() {
            for &d in rot {
                if d.index() >= seen.len() || g.tail(d) != v {
                    return Err(Error::NonPlanarRotation(format!(
                        "dart {} is not incident to vertex {v}",
                        d.index()
                    )));
                }
                if core::mem::replace(&mut seen[d.index()], true) {
                    return Err(Error::NonPlanarRotation(format!(
                        "dart {} listed twice",
                        d.index()
                    )));
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::NonPlanarRotation(format!("dart {i} missing")));
        }
        Ok(())
    }

    /// `succ[d]` is the dart following `d` around its tail.
    pub(crate) fn successors(&self, dart_count: usize) -> Vec<Dart> {
        let mut succ = vec![Dart(usize::MAX); dart_count];
        for rot in &self.rotation {
            for (i, &d) in rot.iter().enumerate() {
                succ[d.index()] = rot[(i + 1) % rot.len()];
            }
        }
        succ
    }
}

/// A closed dart walk bounding a face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    darts: Vec<Dart>,
}

impl Face {
    pub fn darts(&self) -> &[Dart] {
        &self.darts
    }

    /// Sorted edge ids on the boundary (an edge walked twice appears twice).
    pub fn edges(&self) -> Vec<EdgeId> {
        let mut es: Vec<EdgeId> = self.darts.iter().map(|d| d.edge()).collect();
        es.sort_unstable();
        es
    }

    pub fn vertices(&self, g: &Multigraph) -> Vec<VertexId> {
        self.darts.iter().map(|&d| g.tail(d)).collect()
    }

    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }
}

/// Faces of an embedding together with the face index of every dart.
#[derive(Clone, Debug)]
pub struct FacePartition {
    pub faces: Vec<Face>,
    pub face_of_dart: Vec<usize>,
}

impl FacePartition {
    pub fn compute(g: &Multigraph, emb: &RotationEmbedding) -> Result<FacePartition> {
        emb.validate(g)?;
        let part = Self::trace_unchecked(g, emb);
        part.check_euler(g)?;
        Ok(part)
    }

    pub(crate) fn trace_unchecked(g: &Multigraph, emb: &RotationEmbedding) -> FacePartition {
        let dart_count = 2 * g.edge_count();
        let succ = emb.successors(dart_count);
        let mut face_of_dart = vec![usize::MAX; dart_count];
        let mut faces = Vec::new();
        for start in 0..dart_count {
            if face_of_dart[start] != usize::MAX {
                continue;
            }
            let id = faces.len();
            let mut darts = Vec::new();
            let mut d = Dart(start);
            while face_of_dart[d.index()] == usize::MAX {
                face_of_dart[d.index()] = id;
                darts.push(d);
                d = succ[d.rev().index()];
            }
            faces.push(Face { darts });
        }
        FacePartition {
            faces,
            face_of_dart,
        }
    }

    fn check_euler(&self, g: &Multigraph) -> Result<()> {
        let active = (0..g.vertex_count()).filter(|&v| g.degree(v) > 0).count();
        let isolated = g.vertex_count() - active;
        let components = g.component_count() - isolated;
        let lhs = active as i64 - g.edge_count() as i64 + self.faces.len() as i64;
        if lhs != 2 * components as i64 {
            return Err(Error::NonPlanarRotation(format!(
                "Euler check failed: n - m + f = {lhs}, expected {}",
                2 * components
            )));
        }
        Ok(())
    }

    pub(crate) fn from_parts(faces: Vec<Vec<Dart>>, face_of_dart: Vec<usize>) -> FacePartition {
        FacePartition {
            faces: faces.into_iter().map(|darts| Face { darts }).collect(),
            face_of_dart,
        }
    }

    pub fn face_of(&self, d: Dart) -> usize {
        self.face_of_dart[d.index()]
    }

    /// Sorted edge sets of all faces.
    pub fn edge_sets(&self) -> BTreeSet<Vec<EdgeId>> {
        self.faces.iter().map(Face::edges).collect()
    }
}

/// Traces all faces; fails with `NonPlanarRotation` when the rotation is
/// malformed or has positive genus.
pub fn trace_faces(g: &Multigraph, emb: &RotationEmbedding) -> Result<Vec<Face>> {
    Ok(FacePartition::compute(g, emb)?.faces)
}

/// A simple cycle of a host graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
    sorted_edges: Vec<EdgeId>,
}

impl Cycle {
    /// Builds a cycle from its cyclic vertex sequence. Consecutive vertices
    /// joined by parallel edges use the lowest edge id.
    pub fn from_vertices(g: &Multigraph, vertices: &[VertexId]) -> Result<Cycle> {
        if vertices.len() < 3 {
            return Err(Error::NotACycle(format!(
                "a cycle needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for &v in vertices {
            if v >= g.vertex_count() {
                return Err(Error::NotACycle(format!("vertex {v} out of range")));
            }
            if !seen.insert(v) {
                return Err(Error::NotACycle(format!("vertex {v} repeated")));
            }
        }
        let k = vertices.len();
        let mut edges = Vec::with_capacity(k);
        for i in 0..k {
            let (u, v) = (vertices[i], vertices[(i + 1) % k]);
            let e = g
                .find_edge(u, v)
                .ok_or_else(|| Error::NotACycle(format!("no edge between {u} and {v}")))?;
            edges.push(e);
        }
        Ok(Self::assemble(vertices.to_vec(), edges))
    }

    /// Builds a cycle from an edge set forming one simple closed walk
    /// (length-2 cycles through parallel edges are accepted here).
    pub fn from_edges(g: &Multigraph, edge_set: &[EdgeId]) -> Result<Cycle> {
        if edge_set.len() < 2 {
            return Err(Error::NotACycle("fewer than two edges".to_string()));
        }
        let mut at: BTreeMap<VertexId, Vec<EdgeId>> = BTreeMap::new();
        for &e in edge_set {
            if e >= g.edge_count() {
                return Err(Error::NotACycle(format!("edge {e} out of range")));
            }
            let (u, v) = g.endpoints(e);
            at.entry(u).or_default().push(e);
            at.entry(v).or_default().push(e);
        }
        if at.values().any(|es| es.len() != 2) {
            return Err(Error::NotACycle("some vertex does not have degree 2".to_string()));
        }
        let start = g.endpoints(edge_set[0]).0;
        let mut vertices = vec![start];
        let mut edges = Vec::new();
        let (mut v, mut via) = (start, None);
        loop {
            let e = if via == Some(at[&v][0]) { at[&v][1] } else { at[&v][0] };
            edges.push(e);
            let (a, b) = g.endpoints(e);
            v = if a == v { b } else { a };
            via = Some(e);
            if v == start {
                break;
            }
            vertices.push(v);
        }
        if edges.len() != edge_set.len() {
            return Err(Error::NotACycle("edge set is not connected".to_string()));
        }
        Ok(Self::assemble(vertices, edges))
    }

    fn assemble(vertices: Vec<VertexId>, edges: Vec<EdgeId>) -> Cycle {
        let mut sorted_edges = edges.clone();
        sorted_edges.sort_unstable();
        Cycle {
            vertices,
            edges,
            sorted_edges,
        }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// Edges in walk order; `edges()[i]` joins `vertices()[i]` and the next vertex.
    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn edge_set(&self) -> &[EdgeId] {
        &self.sorted_edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.sorted_edges.binary_search(&e).is_ok()
    }

    /// Checks that the cycle is still a cycle of `g`.
    pub fn check_in(&self, g: &Multigraph) -> Result<()> {
        let k = self.vertices.len();
        for (i, &e) in self.edges.iter().enumerate() {
            if e >= g.edge_count() {
                return Err(Error::InvalidCycle(format!("edge {e} out of range")));
            }
            let (a, b) = g.endpoints(e);
            let (u, v) = (self.vertices[i], self.vertices[(i + 1) % k]);
            if !((a == u && b == v) || (a == v && b == u)) {
                return Err(Error::InvalidCycle(format!("edge {e} does not join {u} and {v}")));
            }
        }
        Ok(())
    }
}

/// True iff some face of `emb` has exactly the edge set of `cycle`.
pub fn is_facial(g: &Multigraph, emb: &RotationEmbedding, cycle: &Cycle) -> Result<bool> {
    cycle.check_in(g)?;
    let part = FacePartition::compute(g, emb)?;
    Ok(part.faces.iter().any(|f| f.edges() == cycle.edge_set()))
}

/// Faces-as-vertices dual of a planar embedding.
#[derive(Clone, Debug)]
pub struct Dual {
    /// Dual edge `e` crosses primal edge `e`.
    pub graph: Multigraph,
    pub faces: Vec<Face>,
    pub face_of_dart: Vec<usize>,
}

/// Dual graph: one vertex per face, one edge per primal edge joining the
/// faces on its two sides. Bridges would give self-loops and are rejected.
pub fn dual(g: &Multigraph, emb: &RotationEmbedding) -> Result<Dual> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let part = FacePartition::compute(g, emb)?;
    let edges: Vec<(VertexId, VertexId)> = (0..g.edge_count())
        .map(|e| {
            (
                part.face_of(Dart::new(e, true)),
                part.face_of(Dart::new(e, false)),
            )
        })
        .collect();
    let graph = Multigraph::new(part.faces.len(), &edges)?;
    Ok(Dual {
        graph,
        faces: part.faces,
        face_of_dart: part.face_of_dart,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn k4() -> Multigraph {
        Multigraph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    // Planar rotation of K4: vertex 3 in the middle of triangle 0-1-2.
    pub(crate) fn k4_rotation(g: &Multigraph) -> RotationEmbedding {
        let order = [[1, 3, 2], [2, 3, 0], [0, 3, 1], [0, 1, 2]];
        let rot = order
            .iter()
            .enumerate()
            .map(|(v, ws)| {
                ws.iter()
                    .map(|&w| g.dart_from(g.find_edge(v, w).unwrap(), v))
                    .collect()
            })
            .collect();
        RotationEmbedding::new(rot)
    }

    #[test]
    fn build_graph_examples() {
        let tri = Multigraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(tri.edge_count(), 3);
        let dipole = Multigraph::new(2, &[(0, 1), (0, 1), (0, 1)]).unwrap();
        assert_eq!(dipole.edge_count(), 3);
        assert_eq!(
            Multigraph::new(2, &[(0, 0)]),
            Err(Error::SelfLoop { edge: 0, vertex: 0 })
        );
        assert!(matches!(
            Multigraph::new(2, &[(0, 2)]),
            Err(Error::VertexOutOfRange { vertex: 2, n: 2 })
        ));
    }

    #[test]
    fn dart_involution() {
        for i in 0..10 {
            let d = Dart::from_index(i);
            assert_eq!(d.rev().rev(), d);
        }
        let g = k4();
        for e in 0..g.edge_count() {
            let d = Dart::new(e, true);
            assert_eq!(g.head(d), g.tail(d.rev()));
        }
    }

    #[test]
    fn faces_of_triangle_and_k4() {
        let tri = Multigraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let rot = (0..3).map(|v| tri.darts_at(v).to_vec()).collect();
        let faces = trace_faces(&tri, &RotationEmbedding::new(rot)).unwrap();
        assert_eq!(faces.len(), 2);

        let g = k4();
        let faces = trace_faces(&g, &k4_rotation(&g)).unwrap();
        assert_eq!(faces.len(), 4);
        assert!(faces.iter().all(|f| f.len() == 3));
    }

    #[test]
    fn k5_rotations_are_never_planar() {
        let mut edges = Vec::new();
        for u in 0..5 {
            for v in u + 1..5 {
                edges.push((u, v));
            }
        }
        let g = Multigraph::new(5, &edges).unwrap();
        // every vertex has 4 darts: try all 6^5 rotations
        let perms: Vec<Vec<usize>> = vec![
            vec![0, 1, 2, 3],
            vec![0, 1, 3, 2],
            vec![0, 2, 1, 3],
            vec![0, 2, 3, 1],
            vec![0, 3, 1, 2],
            vec![0, 3, 2, 1],
        ];
        let mut idx = [0usize; 5];
        loop {
            let rot = (0..5)
                .map(|v| perms[idx[v]].iter().map(|&i| g.darts_at(v)[i]).collect())
                .collect();
            assert!(matches!(
                trace_faces(&g, &RotationEmbedding::new(rot)),
                Err(Error::NonPlanarRotation(_))
            ));
            let mut k = 0;
            while k < 5 {
                idx[k] += 1;
                if idx[k] < 6 {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == 5 {
                break;
            }
        }
    }

    #[test]
    fn facial_tests_on_k4_and_c5() {
        let g = k4();
        let emb = k4_rotation(&g);
        for tri in [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]] {
            let c = Cycle::from_vertices(&g, &tri).unwrap();
            assert!(is_facial(&g, &emb, &c).unwrap());
        }
        let quad = Cycle::from_vertices(&g, &[0, 1, 2, 3]).unwrap();
        assert!(!is_facial(&g, &emb, &quad).unwrap());

        let c5 = Multigraph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let rot = (0..5).map(|v| c5.darts_at(v).to_vec()).collect();
        let c = Cycle::from_vertices(&c5, &[0, 1, 2, 3, 4]).unwrap();
        assert!(is_facial(&c5, &RotationEmbedding::new(rot), &c).unwrap());
    }

    #[test]
    fn invalid_cycle_is_rejected() {
        let g = k4();
        let c = Cycle::from_vertices(&g, &[0, 1, 2]).unwrap();
        let small = Multigraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(matches!(c.check_in(&small), Err(Error::InvalidCycle(_))));
        assert!(matches!(
            Cycle::from_vertices(&small, &[0, 1, 2]),
            Err(Error::NotACycle(_))
        ));
    }

    #[test]
    fn cycle_from_edges_accepts_two_cycles() {
        let g = Multigraph::new(2, &[(0, 1), (0, 1), (0, 1)]).unwrap();
        let c = Cycle::from_edges(&g, &[0, 2]).unwrap();
        assert_eq!(c.edge_set(), &[0, 2]);
        assert!(Cycle::from_edges(&g, &[0, 1, 2]).is_err());
    }

    #[test]
    fn duals() {
        let g = k4();
        let d = dual(&g, &k4_rotation(&g)).unwrap();
        assert_eq!(d.graph.vertex_count(), 4);
        assert_eq!(d.graph.edge_count(), 6);
        assert!((0..4).all(|v| d.graph.degree(v) == 3));
        let mut pairs: Vec<_> = d
            .graph
            .edges()
            .iter()
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .collect();
        pairs.sort();
        pairs.dedup();
        assert_eq!(pairs.len(), 6, "dual of K4 is simple, hence K4");

        let tri = Multigraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let rot = (0..3).map(|v| tri.darts_at(v).to_vec()).collect();
        let d = dual(&tri, &RotationEmbedding::new(rot)).unwrap();
        assert_eq!(d.graph.vertex_count(), 2);
        assert_eq!(d.graph.edge_count(), 3);
    }

    #[test]
    fn biconnectivity() {
        assert!(is_biconnected(&k4()));
        let path = Multigraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(!is_biconnected(&path));
        let bowtie =
            Multigraph::new(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        assert!(!is_biconnected(&bowtie));
        assert_eq!(bowtie.articulation_points(), vec![2]);
        assert_eq!(bowtie.blocks().len(), 2);
        let dipole = Multigraph::new(2, &[(0, 1), (0, 1), (0, 1)]).unwrap();
        assert!(!is_biconnected(&dipole));
        assert_eq!(dipole.blocks().len(), 1);
    }
}
