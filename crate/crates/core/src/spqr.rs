//! SPQR-trees: construction by recursive split-pair decomposition, rooting,
//! pertinent graphs, and composition of skeleton embeddings.
//!
//! Every real edge gets its own Q-node, so all skeleton edges of S-, P- and
//! R-nodes are virtual and point at a neighboring tree node. A Q-node's
//! skeleton holds two parallel edges: index 0 is virtual, index 1 is real.

use crate::graph::{is_biconnected, Dart, EdgeId, FacePartition, Multigraph, RotationEmbedding, VertexId};
use crate::planarity::planar_embed;
use crate::prelude::*;
use crate::{Error, Result};

pub type NodeId = usize;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeKind {
    S,
    P,
    R,
    Q,
}

/// What a skeleton edge stands for.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Link {
    /// The real edge of a Q-node.
    Real(EdgeId),
    /// A virtual edge; `twin` is the matching edge index in `node`'s skeleton.
    Virtual { node: NodeId, twin: usize },
}

#[derive(Clone, Debug)]
pub struct Node {
    pub kind: NodeKind,
    /// Skeleton vertex `i` is graph vertex `vertices[i]`.
    pub vertices: Vec<VertexId>,
    pub skeleton: Multigraph,
    pub links: Vec<Link>,
    /// Fixed reference rotation of an R-skeleton.
    reference: Option<RotationEmbedding>,
}

impl Node {
    pub fn local(&self, v: VertexId) -> Option<usize> {
        self.vertices.iter().position(|&w| w == v)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    /// Graph endpoints of skeleton edge `i`.
    pub fn edge_ends(&self, i: usize) -> (VertexId, VertexId) {
        let (a, b) = self.skeleton.endpoints(i);
        (self.vertices[a], self.vertices[b])
    }

    pub fn edge_count(&self) -> usize {
        self.links.len()
    }
}

/// Unrooted canonical SPQR-tree.
#[derive(Clone, Debug)]
pub struct SpqrTree {
    graph: Multigraph,
    nodes: Vec<Node>,
    q_of_edge: Vec<NodeId>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Label {
    Real(EdgeId),
    Virt(usize),
}

#[derive(Copy, Clone, Debug)]
struct Rec {
    u: VertexId,
    v: VertexId,
    label: Label,
}

enum Step {
    Final(NodeKind),
    Split(Vec<Rec>, Vec<Rec>),
}

impl SpqrTree {
    /// Builds the canonical SPQR-tree of a biconnected planar graph.
    pub fn build(g: &Multigraph) -> Result<SpqrTree> {
        if !is_biconnected(g) {
            return Err(Error::NotBiconnected);
        }
        let mut next_virtual = 0usize;
        let mut work: Vec<Vec<Rec>> = vec![g
            .edges()
            .iter()
            .enumerate()
            .map(|(e, &(u, v))| Rec {
                u,
                v,
                label: Label::Real(e),
            })
            .collect()];
        let mut finished: Vec<(NodeKind, Vec<Rec>)> = Vec::new();
        while let Some(comp) = work.pop() {
            match split_step(&comp, &mut next_virtual) {
                Step::Final(kind) => finished.push((kind, comp)),
                Step::Split(a, b) => {
                    work.push(a);
                    work.push(b);
                }
            }
        }

        // merge adjacent bonds and adjacent polygons
        let mut sides: Vec<Vec<usize>> = vec![Vec::new(); next_virtual];
        for (i, (_, recs)) in finished.iter().enumerate() {
            for r in recs {
                if let Label::Virt(k) = r.label {
                    sides[k].push(i);
                }
            }
        }
        let mut uf = UnionFind::new(finished.len());
        let mut merged_virtual = vec![false; next_virtual];
        for k in 0..next_virtual {
            let (a, b) = (sides[k][0], sides[k][1]);
            let (ka, kb) = (finished[a].0, finished[b].0);
            if ka == kb && matches!(ka, NodeKind::S | NodeKind::P) {
                uf.union(a, b);
                merged_virtual[k] = true;
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..finished.len() {
            groups.entry(uf.find(i)).or_default().push(i);
        }

        let mut nodes: Vec<Node> = Vec::new();
        let mut q_of_edge = vec![usize::MAX; g.edge_count()];
        // (node, skeleton index) of each side of each virtual edge
        let mut virt_sides: Vec<Vec<(NodeId, usize)>> = vec![Vec::new(); next_virtual];
        let mut real_at: Vec<(NodeId, usize)> = vec![(usize::MAX, 0); g.edge_count()];
        for members in groups.values() {
            let kind = finished[members[0]].0;
            let mut recs: Vec<Rec> = members
                .iter()
                .flat_map(|&i| finished[i].1.iter().copied())
                .filter(|r| !matches!(r.label, Label::Virt(k) if merged_virtual[k]))
                .collect();
            if kind == NodeKind::S {
                recs = cycle_order(recs);
            }
            let mut vertices: Vec<VertexId> = recs.iter().flat_map(|r| [r.u, r.v]).collect();
            vertices.sort_unstable();
            vertices.dedup();
            let local = |w: VertexId| vertices.binary_search(&w).expect("vertex of component");
            let skel_edges: Vec<(usize, usize)> = recs.iter().map(|r| (local(r.u), local(r.v))).collect();
            let skeleton = Multigraph::new(vertices.len(), &skel_edges)?;
            let id = nodes.len();
            for (i, r) in recs.iter().enumerate() {
                match r.label {
                    Label::Virt(k) => virt_sides[k].push((id, i)),
                    Label::Real(e) => real_at[e] = (id, i),
                }
            }
            let reference = if kind == NodeKind::R {
                Some(planar_embed(&skeleton)?)
            } else {
                None
            };
            nodes.push(Node {
                kind,
                vertices,
                skeleton,
                links: vec![Link::Real(usize::MAX); recs.len()],
                reference,
            });
        }
        for pair in &virt_sides {
            if pair.is_empty() {
                continue;
            }
            let ((a, i), (b, j)) = (pair[0], pair[1]);
            nodes[a].links[i] = Link::Virtual { node: b, twin: j };
            nodes[b].links[j] = Link::Virtual { node: a, twin: i };
        }
        for (e, &(owner, i)) in real_at.iter().enumerate() {
            let (u, v) = g.endpoints(e);
            let (lo, hi) = (u.min(v), u.max(v));
            let q = nodes.len();
            let skeleton = Multigraph::new(2, &[(0, 1), (0, 1)])?;
            nodes.push(Node {
                kind: NodeKind::Q,
                vertices: vec![lo, hi],
                skeleton,
                links: vec![Link::Virtual { node: owner, twin: i }, Link::Real(e)],
                reference: None,
            });
            nodes[owner].links[i] = Link::Virtual { node: q, twin: 0 };
            q_of_edge[e] = q;
        }
        Ok(SpqrTree {
            graph: g.clone(),
            nodes,
            q_of_edge,
        })
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn q_node(&self, e: EdgeId) -> NodeId {
        self.q_of_edge[e]
    }

    /// Number of nodes of each kind, in the order S, P, R, Q.
    pub fn kind_counts(&self) -> [usize; 4] {
        let mut c = [0; 4];
        for n in &self.nodes {
            c[n.kind as usize] += 1;
        }
        c
    }

    /// Roots the tree at the Q-node of edge `e`.
    pub fn root_at(self, e: EdgeId) -> RootedTree {
        RootedTree::new(self, e)
    }
}

fn split_step(comp: &[Rec], next_virtual: &mut usize) -> Step {
    // bonds
    let key = |r: &Rec| (r.u.min(r.v), r.u.max(r.v));
    let mut groups: BTreeMap<(VertexId, VertexId), usize> = BTreeMap::new();
    for r in comp {
        *groups.entry(key(r)).or_default() += 1;
    }
    if groups.len() == 1 {
        return Step::Final(NodeKind::P);
    }
    if let Some((&pair, _)) = groups.iter().find(|(_, &c)| c >= 2) {
        let k = *next_virtual;
        *next_virtual += 1;
        let virt = Rec {
            u: pair.0,
            v: pair.1,
            label: Label::Virt(k),
        };
        let (mut bond, mut rest): (Vec<Rec>, Vec<Rec>) = comp.iter().partition(|r| key(r) == pair);
        bond.push(virt);
        rest.push(virt);
        return Step::Split(bond, rest);
    }

    let mut vertices: Vec<VertexId> = comp.iter().flat_map(|r| [r.u, r.v]).collect();
    vertices.sort_unstable();
    vertices.dedup();
    let local = |w: VertexId| vertices.binary_search(&w).expect("component vertex");
    let edges: Vec<(usize, usize)> = comp.iter().map(|r| (local(r.u), local(r.v))).collect();
    let h = Multigraph::new(vertices.len(), &edges).expect("component edges are valid");
    if (0..h.vertex_count()).all(|v| h.degree(v) == 2) {
        return Step::Final(NodeKind::S);
    }

    for a in 0..h.vertex_count() {
        let cuts = h.articulation_points_without(Some(a));
        let Some(&b) = cuts.first() else { continue };
        // first component of h - {a, b}
        let mut side = vec![false; h.vertex_count()];
        let start = (0..h.vertex_count()).find(|&x| x != a && x != b).expect("at least three vertices");
        side[start] = true;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for y in h.neighbors(x) {
                if y != a && y != b && !side[y] {
                    side[y] = true;
                    stack.push(y);
                }
            }
        }
        let k = *next_virtual;
        *next_virtual += 1;
        let virt = Rec {
            u: vertices[a],
            v: vertices[b],
            label: Label::Virt(k),
        };
        let mut one = Vec::new();
        let mut rest = Vec::new();
        for (r, &(x, y)) in comp.iter().zip(&edges) {
            if side[x] || side[y] {
                one.push(*r);
            } else {
                rest.push(*r);
            }
        }
        one.push(virt);
        rest.push(virt);
        return Step::Split(one, rest);
    }
    Step::Final(NodeKind::R)
}

/// Orders the edges of a polygon along the cycle.
fn cycle_order(recs: Vec<Rec>) -> Vec<Rec> {
    let mut used = vec![false; recs.len()];
    let mut out = Vec::with_capacity(recs.len());
    used[0] = true;
    out.push(recs[0]);
    let mut at = recs[0].v;
    while out.len() < recs.len() {
        let i = (0..recs.len())
            .find(|&i| !used[i] && (recs[i].u == at || recs[i].v == at))
            .expect("polygon edges form a cycle");
        used[i] = true;
        at = if recs[i].u == at { recs[i].v } else { recs[i].u };
        out.push(recs[i]);
    }
    out
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Per P-node a linear order of the non-parent skeleton edges (the parent
/// edge is implicitly first), per R-node a flip bit. Indexed by node id.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EmbeddingChoice {
    pub orders: Vec<Vec<usize>>,
    pub flips: Vec<bool>,
}

impl EmbeddingChoice {
    /// Reverses all P-orders and toggles all flips: the mirror embedding.
    pub fn mirrored(&self, tree: &RootedTree) -> EmbeddingChoice {
        let mut c = self.clone();
        for id in 0..tree.tree.nodes.len() {
            match tree.kind(id) {
                NodeKind::P => c.orders[id].reverse(),
                NodeKind::R => c.flips[id] = !c.flips[id],
                _ => {}
            }
        }
        c
    }
}

/// An SPQR-tree rooted at a Q-node.
#[derive(Clone, Debug)]
pub struct RootedTree {
    tree: SpqrTree,
    root_edge: EdgeId,
    root: NodeId,
    parent: Vec<Option<NodeId>>,
    parent_edge: Vec<Option<usize>>,
    children: Vec<Vec<NodeId>>,
    /// Per skeleton edge, the child node it leads to.
    child_at: Vec<Vec<Option<NodeId>>>,
    /// Nodes in preorder from the root.
    preorder: Vec<NodeId>,
    /// Real edges in leaf order; subtree of µ covers `leaf_order[span[µ].0..span[µ].1]`.
    leaf_order: Vec<EdgeId>,
    leaf_pos: Vec<usize>,
    span: Vec<(usize, usize)>,
    depth: Vec<usize>,
    /// Highest node below the root containing each vertex.
    top_node: Vec<NodeId>,
}

impl RootedTree {
    fn new(tree: SpqrTree, root_edge: EdgeId) -> RootedTree {
        let count = tree.nodes.len();
        let root = tree.q_of_edge[root_edge];
        let mut parent = vec![None; count];
        let mut parent_edge = vec![None; count];
        let mut children = vec![Vec::new(); count];
        let mut child_at: Vec<Vec<Option<NodeId>>> =
            tree.nodes.iter().map(|n| vec![None; n.links.len()]).collect();
        let mut preorder = Vec::with_capacity(count);
        let mut depth = vec![0; count];
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            preorder.push(x);
            let node = &tree.nodes[x];
            let mut kids = Vec::new();
            for (i, link) in node.links.iter().enumerate() {
                if let Link::Virtual { node: y, twin } = *link {
                    if Some(i) == parent_edge[x] {
                        continue;
                    }
                    parent[y] = Some(x);
                    parent_edge[y] = Some(twin);
                    depth[y] = depth[x] + 1;
                    child_at[x][i] = Some(y);
                    kids.push(y);
                }
            }
            for &y in kids.iter().rev() {
                stack.push(y);
            }
            children[x] = kids;
        }

        // leaf order by preorder
        let mut leaf_order = Vec::new();
        let mut leaf_pos = vec![0; tree.graph.edge_count()];
        let mut span = vec![(0, 0); count];
        fn visit(
            x: NodeId,
            tree: &SpqrTree,
            children: &[Vec<NodeId>],
            leaf_order: &mut Vec<EdgeId>,
            leaf_pos: &mut [usize],
            span: &mut [(usize, usize)],
        ) {
            let lo = leaf_order.len();
            if tree.nodes[x].kind == NodeKind::Q {
                if let Link::Real(e) = tree.nodes[x].links[1] {
                    leaf_pos[e] = leaf_order.len();
                    leaf_order.push(e);
                }
            }
            for &y in &children[x] {
                visit(y, tree, children, leaf_order, leaf_pos, span);
            }
            span[x] = (lo, leaf_order.len());
        }
        visit(root, &tree, &children, &mut leaf_order, &mut leaf_pos, &mut span);

        let mut top_node = vec![usize::MAX; tree.graph.vertex_count()];
        for &x in &preorder {
            if x == root {
                continue;
            }
            for &v in &tree.nodes[x].vertices {
                if top_node[v] == usize::MAX {
                    top_node[v] = x;
                }
            }
        }
        RootedTree {
            tree,
            root_edge,
            root,
            parent,
            parent_edge,
            children,
            child_at,
            preorder,
            leaf_order,
            leaf_pos,
            span,
            depth,
            top_node,
        }
    }

    pub fn tree(&self) -> &SpqrTree {
        &self.tree
    }

    pub fn graph(&self) -> &Multigraph {
        &self.tree.graph
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.tree.nodes[id]
    }

    pub fn node_count(&self) -> usize {
        self.tree.nodes.len()
    }

    pub fn kind(&self, id: NodeId) -> NodeKind {
        self.tree.nodes[id].kind
    }

    pub fn root_edge(&self) -> EdgeId {
        self.root_edge
    }

    /// The root Q-node.
    pub fn root(&self) -> NodeId {
        self.root
    }

    /// The unique child of the root Q-node.
    pub fn phi(&self) -> NodeId {
        self.children[self.root][0]
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.parent[id]
    }

    /// Skeleton index of the parent edge.
    pub fn parent_edge(&self, id: NodeId) -> Option<usize> {
        self.parent_edge[id]
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.children[id]
    }

    /// Child node behind skeleton edge `i` of `id` (None for the parent edge
    /// and for the real edge of a Q-node).
    pub fn child_at(&self, id: NodeId, i: usize) -> Option<NodeId> {
        self.child_at[id][i]
    }

    /// Skeleton index in `parent(child)` of the edge leading to `child`.
    pub fn edge_to_child(&self, child: NodeId) -> usize {
        match self.node(child).links[self.parent_edge[child].expect("non-root node")] {
            Link::Virtual { twin, .. } => twin,
            Link::Real(_) => unreachable!("parent edges are virtual"),
        }
    }

    pub fn depth(&self, id: NodeId) -> usize {
        self.depth[id]
    }

    /// Nodes ordered root first; reversing gives a bottom-up order.
    pub fn preorder(&self) -> &[NodeId] {
        &self.preorder
    }

    /// Poles of a node: the endpoints of its parent edge (the root edge for ρ).
    pub fn poles(&self, id: NodeId) -> (VertexId, VertexId) {
        match self.parent_edge[id] {
            Some(i) => self.node(id).edge_ends(i),
            None => self.graph().endpoints(self.root_edge),
        }
    }

    pub fn is_q_leaf(&self, id: NodeId) -> bool {
        id != self.root && self.kind(id) == NodeKind::Q
    }

    /// Real edge of a Q-node.
    pub fn real_edge(&self, id: NodeId) -> Option<EdgeId> {
        match self.node(id).links.get(1) {
            Some(&Link::Real(e)) if self.kind(id) == NodeKind::Q => Some(e),
            _ => None,
        }
    }

    /// True iff real edge `e` lies in the pertinent graph of `id`.
    pub fn in_subtree(&self, id: NodeId, e: EdgeId) -> bool {
        let (lo, hi) = self.span[id];
        let p = self.leaf_pos[e];
        lo <= p && p < hi
    }

    /// Position of `e` in the leaf order used by `span`.
    pub fn leaf_pos(&self, e: EdgeId) -> usize {
        self.leaf_pos[e]
    }

    pub fn span(&self, id: NodeId) -> (usize, usize) {
        self.span[id]
    }

    /// Real edges of the pertinent graph of `id`, sorted.
    pub fn pertinent_edges(&self, id: NodeId) -> Vec<EdgeId> {
        let (lo, hi) = self.span[id];
        let mut es = self.leaf_order[lo..hi].to_vec();
        es.sort_unstable();
        es
    }

    /// The pertinent graph of `id` on local vertex ids.
    pub fn pertinent(&self, id: NodeId) -> Subgraph {
        Subgraph::induced_by_edges(self.graph(), &self.pertinent_edges(id), self.poles(id))
    }

    /// The expansion graph of skeleton edge `i` of `id`.
    pub fn expansion(&self, id: NodeId, i: usize) -> Result<Subgraph> {
        if self.parent_edge[id] == Some(i) {
            return Err(Error::ParentEdgeNotExpandable);
        }
        match self.child_at[id][i] {
            Some(child) => Ok(self.pertinent(child)),
            None => {
                let e = match self.node(id).links[i] {
                    Link::Real(e) => e,
                    Link::Virtual { .. } => unreachable!("virtual non-parent edges have children"),
                };
                Ok(Subgraph::induced_by_edges(self.graph(), &[e], self.graph().endpoints(e)))
            }
        }
    }

    /// Choice with ascending P-orders and no flips.
    pub fn default_choice(&self) -> EmbeddingChoice {
        let mut orders = vec![Vec::new(); self.node_count()];
        for id in 0..self.node_count() {
            if self.kind(id) == NodeKind::P {
                orders[id] = self.free_edges(id);
            }
        }
        EmbeddingChoice {
            orders,
            flips: vec![false; self.node_count()],
        }
    }

    /// Non-parent skeleton edges of `id`, ascending.
    pub fn free_edges(&self, id: NodeId) -> Vec<usize> {
        (0..self.node(id).links.len())
            .filter(|&i| Some(i) != self.parent_edge[id])
            .collect()
    }

    /// P-nodes and R-nodes in preorder.
    pub fn choice_points(&self) -> Vec<NodeId> {
        self.preorder
            .iter()
            .copied()
            .filter(|&x| matches!(self.kind(x), NodeKind::P | NodeKind::R))
            .collect()
    }

    /// Skeleton rotation of `id` under `choice` (darts of the skeleton graph).
    pub fn skeleton_rotation(&self, id: NodeId, choice: &EmbeddingChoice) -> RotationEmbedding {
        let node = self.node(id);
        match node.kind {
            NodeKind::P => {
                let p = self.parent_edge[id].expect("P-nodes are never the root");
                self.p_rotation(id, p, &choice.orders[id])
            }
            NodeKind::R => {
                let r = node.reference.as_ref().expect("R-node reference embedding");
                if choice.flips[id] {
                    r.mirrored()
                } else {
                    r.clone()
                }
            }
            NodeKind::S | NodeKind::Q => {
                RotationEmbedding::new((0..node.vertices.len()).map(|v| node.skeleton.darts_at(v).to_vec()).collect())
            }
        }
    }

    /// P-skeleton rotation with `first` followed by `order` at local vertex 0.
    pub fn p_rotation(&self, id: NodeId, first: usize, order: &[usize]) -> RotationEmbedding {
        let node = self.node(id);
        let sk = &node.skeleton;
        let mut at_x = Vec::with_capacity(order.len() + 1);
        let mut at_y = Vec::with_capacity(order.len() + 1);
        let x = 0;
        at_x.push(sk.dart_from(first, x));
        at_y.push(sk.dart_from(first, 1 - x));
        for &c in order {
            at_x.push(sk.dart_from(c, x));
        }
        for &c in order.iter().rev() {
            at_y.push(sk.dart_from(c, 1 - x));
        }
        RotationEmbedding::new(vec![at_x, at_y])
    }

    /// Rotation of the reference embedding of an R-node.
    pub fn r_reference(&self, id: NodeId) -> Option<&RotationEmbedding> {
        self.node(id).reference.as_ref()
    }

    /// Composes an embedding of G with the root edge on the outer face.
    pub fn compose_embedding(&self, choice: &EmbeddingChoice) -> RotationEmbedding {
        let sub = self.compose_subtree(self.phi(), choice);
        let g = self.graph();
        let e = self.root_edge;
        let synthetic = g.edge_count();
        let rotation = sub
            .rotation
            .rotation()
            .iter()
            .enumerate()
            .map(|(v, r)| {
                r.iter()
                    .map(|&d| if d.edge() == synthetic { g.dart_from(e, v) } else { d })
                    .collect()
            })
            .collect();
        RotationEmbedding::new(rotation).with_outer(Dart::new(e, true))
    }

    /// Embedding of pert(`id`) plus a synthetic parent edge between the poles.
    ///
    /// The synthetic edge gets id `m` (the graph's edge count) and joins
    /// `poles(id).0` to `poles(id).1`; vertex ids are those of G.
    pub fn compose_subtree(&self, id: NodeId, choice: &EmbeddingChoice) -> Composed {
        let g = self.graph();
        let (pu, pv) = self.poles(id);
        let mut edges: Vec<(VertexId, VertexId)> = g.edges().to_vec();
        edges.push((pu, pv));
        let synthetic = g.edge_count();
        let mut rots: BTreeMap<NodeId, RotationEmbedding> = BTreeMap::new();
        let mut rotation = vec![Vec::new(); g.vertex_count()];
        let mut cover = BTreeSet::new();
        for e in self.pertinent_edges(id) {
            let (a, b) = g.endpoints(e);
            cover.insert(a);
            cover.insert(b);
        }
        for &v in &cover {
            let mut out = Vec::new();
            if v == pu || v == pv {
                let p = self.parent_edge[id].expect("composed subtrees are below the root");
                self.expand(id, v, Some(p), choice, &mut rots, &mut out);
                out.push(Dart::new(synthetic, v == pu));
            } else {
                self.expand(self.top_node[v], v, None, choice, &mut rots, &mut out);
            }
            rotation[v] = out;
        }
        let full = Multigraph::new(g.vertex_count(), &edges).expect("edges of G plus one pole edge");
        // keep only pertinent edges in the graph used for face tracing
        let keep: BTreeSet<EdgeId> = self.pertinent_edges(id).into_iter().chain([synthetic]).collect();
        Composed {
            graph: full,
            keep,
            rotation: RotationEmbedding::new(rotation),
            synthetic,
        }
    }

    fn expand(
        &self,
        id: NodeId,
        v: VertexId,
        after: Option<usize>,
        choice: &EmbeddingChoice,
        rots: &mut BTreeMap<NodeId, RotationEmbedding>,
        out: &mut Vec<Dart>,
    ) {
        let node = self.node(id);
        if node.kind == NodeKind::Q && id != self.root {
            let e = self.real_edge(id).expect("Q-node real edge");
            out.push(self.graph().dart_from(e, v));
            return;
        }
        let lv = node.local(v).expect("vertex in skeleton");
        let rot: Vec<Dart> = rots
            .entry(id)
            .or_insert_with(|| self.skeleton_rotation(id, choice))
            .rotation_at(lv)
            .to_vec();
        let start = match after {
            Some(p) => rot.iter().position(|d| d.edge() == p).expect("parent edge at pole") + 1,
            None => 0,
        };
        for k in 0..rot.len() {
            let d = rot[(start + k) % rot.len()];
            let i = d.edge();
            if Some(i) == after {
                continue;
            }
            match self.child_at[id][i] {
                Some(child) => {
                    let twin = self.parent_edge[child].expect("child has a parent edge");
                    self.expand(child, v, Some(twin), choice, rots, out);
                }
                None => match node.links[i] {
                    Link::Real(e) => out.push(self.graph().dart_from(e, v)),
                    Link::Virtual { .. } => unreachable!("non-parent virtual edge without child"),
                },
            }
        }
    }
}

/// An embedding of a pertinent graph plus its synthetic pole edge.
#[derive(Clone, Debug)]
pub struct Composed {
    /// G's edges plus the synthetic edge; only `keep` carry darts.
    graph: Multigraph,
    keep: BTreeSet<EdgeId>,
    pub rotation: RotationEmbedding,
    pub synthetic: EdgeId,
}

impl Composed {
    /// Faces over the kept edges, with the face index of every kept dart.
    pub fn faces(&self) -> Result<FacePartition> {
        let (sub, map) = self.restricted();
        let part = FacePartition::compute(&sub.0, &sub.1)?;
        // translate darts back to graph ids
        let faces = part
            .faces
            .iter()
            .map(|f| {
                f.darts()
                    .iter()
                    .map(|d| Dart::new(map[d.edge()], d.is_forward()))
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>();
        let mut face_of_dart = vec![usize::MAX; 2 * self.graph.edge_count()];
        for (i, f) in faces.iter().enumerate() {
            for d in f {
                face_of_dart[d.index()] = i;
            }
        }
        Ok(FacePartition::from_parts(faces, face_of_dart))
    }

    fn restricted(&self) -> ((Multigraph, RotationEmbedding), Vec<EdgeId>) {
        let map: Vec<EdgeId> = self.keep.iter().copied().collect();
        let local: BTreeMap<EdgeId, usize> = map.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let edges: Vec<(VertexId, VertexId)> = map.iter().map(|&e| self.graph.endpoints(e)).collect();
        let sub = Multigraph::new(self.graph.vertex_count(), &edges).expect("subset of valid edges");
        let rotation = self
            .rotation
            .rotation()
            .iter()
            .map(|r| r.iter().map(|d| Dart::new(local[&d.edge()], d.is_forward())).collect())
            .collect();
        ((sub, RotationEmbedding::new(rotation)), map)
    }
}

/// A subgraph of G re-indexed onto local vertices.
#[derive(Clone, Debug)]
pub struct Subgraph {
    pub graph: Multigraph,
    /// Local vertex `i` is graph vertex `vertex_map[i]`.
    pub vertex_map: Vec<VertexId>,
    /// Local edge `i` is graph edge `edge_map[i]`.
    pub edge_map: Vec<EdgeId>,
    /// Poles as graph vertices.
    pub poles: (VertexId, VertexId),
}

impl Subgraph {
    fn induced_by_edges(g: &Multigraph, edges: &[EdgeId], poles: (VertexId, VertexId)) -> Subgraph {
        let mut vertex_map: Vec<VertexId> = edges.iter().flat_map(|&e| {
            let (a, b) = g.endpoints(e);
            [a, b]
        }).collect();
        vertex_map.sort_unstable();
        vertex_map.dedup();
        let local = |w: VertexId| vertex_map.binary_search(&w).expect("endpoint");
        let local_edges: Vec<(usize, usize)> = edges
            .iter()
            .map(|&e| {
                let (a, b) = g.endpoints(e);
                (local(a), local(b))
            })
            .collect();
        Subgraph {
            graph: Multigraph::new(vertex_map.len(), &local_edges).expect("valid subgraph"),
            vertex_map,
            edge_map: edges.to_vec(),
            poles,
        }
    }
}
