//! Exact dynamic programs over the rooted SPQR-tree.
//!
//! For a node µ and a set I of at most two interface cycles, `T[µ, I]` is the
//! largest number of cycles inside pert(µ) that bound faces, over embeddings
//! of pert(µ) plus its parent edge in which the members of I bound the faces
//! on the two sides of the parent edge. The optimum is the maximum over
//! `I ⊆ 𝓘(φ)` of `|I| + T[φ, I]` for the child φ of the root.

use crate::cycles::{interface_choices, CycleId, CycleSet, Projections};
use crate::graph::{FacePartition, Multigraph};
use crate::prelude::*;
use crate::reconstruct::reconstruct;
use crate::spqr::{NodeId, NodeKind, RootedTree, SpqrTree};
use crate::table::{restrict, Entry, Guarantee, ISet, Method, Row, Score, Solution};
use crate::{Error, Result};

/// A graph with its rooted SPQR-tree and the projections of a cycle set.
#[derive(Clone, Debug)]
pub struct Decomposed {
    pub tree: RootedTree,
    pub cycles: CycleSet,
    pub proj: Projections,
}

impl Decomposed {
    /// Decomposes `g` and roots the tree at edge 0.
    pub fn new(g: &Multigraph, cycles: &CycleSet) -> Result<Decomposed> {
        Self::rooted_at(g, cycles, 0)
    }

    pub fn rooted_at(g: &Multigraph, cycles: &CycleSet, root_edge: usize) -> Result<Decomposed> {
        for c in cycles.cycles() {
            c.check_in(g)?;
        }
        let tree = SpqrTree::build(g)?.root_at(root_edge);
        let proj = Projections::compute(&tree, cycles);
        Ok(Decomposed {
            tree,
            cycles: cycles.clone(),
            proj,
        })
    }

    pub fn has_r_node(&self) -> bool {
        (0..self.tree.node_count()).any(|x| self.tree.kind(x) == NodeKind::R)
    }

    /// 𝓘(µ), ascending.
    pub fn interface(&self, node: NodeId) -> Vec<CycleId> {
        self.proj.interface(node)
    }
}

/// How P-nodes are processed.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub(crate) enum PRule {
    /// Enumerate internal cycle subsets; error above `limit` relevant cycles.
    Enumerate { limit: usize },
    /// Greedy selection for pairwise at most two shared vertices.
    Greedy,
}

/// Fills the exact table bottom-up.
pub(crate) fn exact_rows(d: &Decomposed, rule: PRule) -> Result<Vec<Row>> {
    let t = &d.tree;
    let mut rows = vec![Row::new(); t.node_count()];
    for &x in t.preorder().iter().rev() {
        if x == t.root() {
            continue;
        }
        rows[x] = match t.kind(x) {
            NodeKind::Q => dp_q(d, x),
            NodeKind::S => dp_s(d, x, &rows),
            NodeKind::P => match rule {
                PRule::Enumerate { limit } => dp_p(d, x, &rows, limit)?,
                PRule::Greedy => dp_p_greedy(d, x, &rows)?,
            },
            NodeKind::R => dp_r(d, x, &rows)?,
        };
    }
    Ok(rows)
}

/// Leaf row: every I with |I| ≤ 2 is realized with value 0.
pub fn dp_q(d: &Decomposed, x: NodeId) -> Row {
    let mut row = Row::new();
    for i in interface_choices(&d.interface(x)) {
        row.insert(i.clone(), Entry::plain(Score::ZERO, i));
    }
    row
}

/// Sum of the children's entries.
pub fn dp_s(d: &Decomposed, x: NodeId, rows: &[Row]) -> Row {
    let mut row = Row::new();
    let children = d.tree.children(x);
    let ifaces: Vec<Vec<CycleId>> = children.iter().map(|&c| d.interface(c)).collect();
    for i in interface_choices(&d.interface(x)) {
        let value = children
            .iter()
            .zip(&ifaces)
            .map(|(&c, f)| rows[c].value(&restrict(&i, f)))
            .sum();
        row.insert(i.clone(), Entry::plain(value, i));
    }
    row
}

/// Circular order of a P-skeleton in which each pair of `pairs` is adjacent.
///
/// Vertices of the auxiliary graph are the skeleton edges `0..k`. Returns the
/// non-parent edges in order after `parent`, or `None` if no such circular
/// order exists.
pub fn p_layout(k: usize, parent: usize, pairs: &[(usize, usize)]) -> Option<Vec<usize>> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); k];
    for &(a, b) in pairs {
        if a == b || adj[a].contains(&b) {
            return None;
        }
        adj[a].push(b);
        adj[b].push(a);
        if adj[a].len() > 2 || adj[b].len() > 2 {
            return None;
        }
    }
    let mut seen = vec![false; k];
    let mut sequence = Vec::with_capacity(k);
    let mut placed = vec![false; k];
    // a component that is a cycle is only allowed if it spans everything
    for s in 0..k {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut i = 0;
        while i < comp.len() {
            for &w in &adj[comp[i]] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
            i += 1;
        }
        let degree_sum: usize = comp.iter().map(|&v| adj[v].len()).sum();
        let is_cycle = degree_sum == 2 * comp.len();
        if is_cycle && comp.len() < k {
            return None;
        }
        let start = if is_cycle {
            parent
        } else {
            *comp
                .iter()
                .filter(|&&v| adj[v].len() < 2)
                .min()
                .expect("a path has an endpoint")
        };
        let mut cur = start;
        loop {
            sequence.push(cur);
            placed[cur] = true;
            match adj[cur].iter().copied().filter(|&w| !placed[w]).min() {
                Some(w) => cur = w,
                None => break,
            }
        }
    }
    let pos = sequence.iter().position(|&v| v == parent).expect("parent in sequence");
    Some((1..k).map(|j| sequence[(pos + j) % k]).collect())
}

/// Child nodes behind the non-parent skeleton edges of a P- or R-node.
pub(crate) fn child_edges(t: &RootedTree, x: NodeId) -> Vec<(usize, NodeId)> {
    t.free_edges(x)
        .into_iter()
        .map(|i| (i, t.child_at(x, i).expect("virtual edge below a node")))
        .collect()
}

/// Value of realizing `chosen` (the interface set plus internal cycles) at a
/// P-node: children entries plus the number of internal cycles.
pub(crate) fn p_value(d: &Decomposed, children: &[(usize, NodeId)], rows: &[Row], chosen: &[CycleId], internal: usize) -> Score {
    let mut total = Score::Val(internal as u32);
    for &(_, c) in children {
        total = total + rows[c].value(&restrict(chosen, &d.interface(c)));
    }
    total
}

pub(crate) fn projection_pair(d: &Decomposed, x: NodeId, c: CycleId) -> (usize, usize) {
    let p = d.proj.get(x, c).expect("relevant cycle");
    (p.edges[0], p.edges[1])
}

/// P-node rule: maximize over all internal subsets.
pub(crate) fn dp_p(d: &Decomposed, x: NodeId, rows: &[Row], limit: usize) -> Result<Row> {
    let t = &d.tree;
    let parent = t.parent_edge(x).expect("P-node below the root");
    let k = t.node(x).edge_count();
    let children = child_edges(t, x);
    let relevant = d.proj.relevant(x);
    if relevant.len() > limit {
        return Err(Error::PreconditionViolated(format!(
            "P-node has {} relevant cycles, more than {limit}",
            relevant.len()
        )));
    }
    let interface = d.interface(x);
    let internal: Vec<CycleId> = relevant
        .iter()
        .copied()
        .filter(|c| interface.binary_search(c).is_err())
        .collect();
    let pairs_of: BTreeMap<CycleId, (usize, usize)> =
        relevant.iter().map(|&c| (c, projection_pair(d, x, c))).collect();
    let mut row = Row::new();
    for i in interface_choices(&interface) {
        let mut best = Entry::infeasible();
        let mut best_set: Option<Vec<CycleId>> = None;
        for mask in 0u64..(1u64 << internal.len()) {
            let s: Vec<CycleId> = (0..internal.len())
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| internal[b])
                .collect();
            let pairs: Vec<(usize, usize)> = i.iter().chain(&s).map(|c| pairs_of[c]).collect();
            let Some(order) = p_layout(k, parent, &pairs) else { continue };
            let mut chosen: Vec<CycleId> = i.iter().chain(&s).copied().collect();
            chosen.sort_unstable();
            let value = p_value(d, &children, rows, &chosen, s.len());
            if !value.is_finite() {
                continue;
            }
            let better = value > best.value
                || (value == best.value && best_set.as_ref().is_some_and(|b| s < *b));
            if better {
                best = Entry {
                    value,
                    chosen,
                    order,
                    flip: false,
                };
                best_set = Some(s);
            }
        }
        row.insert(i, best);
    }
    Ok(row)
}

/// P-node rule for series-parallel graphs whose cycles pairwise share at most
/// two vertices: every non-Q child carries at most one relevant cycle, so
/// cycles can be chosen independently by gain, at most two per Q-child.
pub(crate) fn dp_p_greedy(d: &Decomposed, x: NodeId, rows: &[Row]) -> Result<Row> {
    let t = &d.tree;
    let parent = t.parent_edge(x).expect("P-node below the root");
    let k = t.node(x).edge_count();
    let children = child_edges(t, x);
    let child_of: BTreeMap<usize, NodeId> = children.iter().copied().collect();
    let relevant = d.proj.relevant(x);
    let interface = d.interface(x);
    let pairs_of: BTreeMap<CycleId, (usize, usize)> =
        relevant.iter().map(|&c| (c, projection_pair(d, x, c))).collect();

    let mut users: BTreeMap<usize, Vec<CycleId>> = BTreeMap::new();
    for (&c, &(a, b)) in &pairs_of {
        for e in [a, b] {
            if e != parent {
                users.entry(e).or_default().push(c);
            }
        }
    }
    for (&e, cs) in &users {
        if t.kind(child_of[&e]) != NodeKind::Q && cs.len() > 1 {
            return Err(Error::PreconditionViolated(format!(
                "cycles {} and {} share a non-edge child of a P-node",
                cs[0], cs[1]
            )));
        }
    }

    let internal: Vec<CycleId> = relevant
        .iter()
        .copied()
        .filter(|c| interface.binary_search(c).is_err())
        .collect();
    let mut row = Row::new();
    for i in interface_choices(&interface) {
        let base_pairs: Vec<(usize, usize)> = i.iter().map(|c| pairs_of[c]).collect();
        if p_layout(k, parent, &base_pairs).is_none() {
            row.insert(i, Entry::infeasible());
            continue;
        }
        // gain of each internal cycle on its non-Q children
        let mut at_q: BTreeMap<usize, Vec<(u32, CycleId)>> = BTreeMap::new();
        let mut s = Vec::new();
        for &c in &internal {
            let (a, b) = pairs_of[&c];
            let mut gain = Score::Val(1);
            let mut loss = 0u32;
            let mut q_edge = None;
            for e in [a, b] {
                let child = child_of[&e];
                if t.kind(child) == NodeKind::Q {
                    q_edge = Some(e);
                    continue;
                }
                let with = rows[child].value(&[c]);
                let without = rows[child].value(&[]);
                match (with, without) {
                    (Score::Val(w), Score::Val(wo)) => {
                        gain = gain + w;
                        loss += wo;
                    }
                    _ => gain = Score::NegInf,
                }
            }
            let net = match gain {
                Score::Val(g) if g > loss => g - loss,
                _ => continue,
            };
            match q_edge {
                Some(q) => at_q.entry(q).or_default().push((net, c)),
                None => s.push(c),
            }
        }
        for (q, mut cand) in at_q {
            let used = base_pairs.iter().filter(|&&(a, b)| a == q || b == q).count();
            cand.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
            s.extend(cand.into_iter().take(2usize.saturating_sub(used)).map(|(_, c)| c));
        }
        s.sort_unstable();
        let pairs: Vec<(usize, usize)> = i.iter().chain(&s).map(|c| pairs_of[c]).collect();
        let order = p_layout(k, parent, &pairs).ok_or_else(|| {
            Error::PreconditionViolated("greedy P-node selection has no circular order".to_string())
        })?;
        let mut chosen: Vec<CycleId> = i.iter().chain(&s).copied().collect();
        chosen.sort_unstable();
        let value = p_value(d, &children, rows, &chosen, s.len());
        row.insert(
            i,
            Entry {
                value,
                chosen,
                order,
                flip: false,
            },
        );
    }
    Ok(row)
}

/// Faces of an R-skeleton and the cycles projecting onto them.
pub(crate) struct RFaces {
    /// Sorted skeleton edge set per face.
    pub edge_sets: Vec<Vec<usize>>,
    /// Faces on the two sides of the parent edge.
    pub parent_faces: (usize, usize),
    /// Face onto which each relevant cycle projects, if any.
    pub face_of_cycle: BTreeMap<CycleId, usize>,
    /// Internal candidates per face, ascending.
    pub candidates: Vec<Vec<CycleId>>,
    /// Per non-parent skeleton edge: (edge, child, face on one side, face on the other).
    pub sides: Vec<(usize, NodeId, usize, usize)>,
}

impl RFaces {
    pub fn new(d: &Decomposed, x: NodeId) -> RFaces {
        let t = &d.tree;
        let node = t.node(x);
        let rot = t.r_reference(x).expect("R-node reference");
        let faces = FacePartition::compute(&node.skeleton, rot).expect("reference embedding is planar");
        let edge_sets: Vec<Vec<usize>> = faces.faces.iter().map(|f| f.edges()).collect();
        let p = t.parent_edge(x).expect("R-node below the root");
        let fwd = crate::graph::Dart::new(p, true);
        let parent_faces = (faces.face_of(fwd), faces.face_of(fwd.rev()));
        let mut face_of_cycle = BTreeMap::new();
        let mut candidates = vec![Vec::new(); edge_sets.len()];
        for pr in d.proj.of(x) {
            if let Some(f) = edge_sets.iter().position(|s| *s == pr.edges) {
                face_of_cycle.insert(pr.cycle, f);
                if !pr.interface {
                    candidates[f].push(pr.cycle);
                }
            }
        }
        let sides = t
            .free_edges(x)
            .into_iter()
            .map(|i| {
                let dart = crate::graph::Dart::new(i, true);
                (
                    i,
                    t.child_at(x, i).expect("child"),
                    faces.face_of(dart),
                    faces.face_of(dart.rev()),
                )
            })
            .collect();
        RFaces {
            edge_sets,
            parent_faces,
            face_of_cycle,
            candidates,
            sides,
        }
    }

    /// Places the members of I on the parent faces; `None` if impossible.
    pub fn place_interface(&self, i: &[CycleId]) -> Option<BTreeMap<usize, CycleId>> {
        let mut fixed = BTreeMap::new();
        for &c in i {
            let f = *self.face_of_cycle.get(&c)?;
            if f != self.parent_faces.0 && f != self.parent_faces.1 {
                return None;
            }
            if fixed.insert(f, c).is_some() {
                return None;
            }
        }
        Some(fixed)
    }
}

/// R-node rule: a path/cycle dynamic program over faces with candidates.
pub(crate) fn dp_r(d: &Decomposed, x: NodeId, rows: &[Row]) -> Result<Row> {
    let rf = RFaces::new(d, x);
    let face_count = rf.edge_sets.len();
    let (fa, fb) = rf.parent_faces;
    let variable: Vec<bool> = (0..face_count)
        .map(|f| f != fa && f != fb && !rf.candidates[f].is_empty())
        .collect();
    // neighbors among variable faces
    let mut nbrs: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); face_count];
    for &(_, _, f, g) in &rf.sides {
        if f != g && variable[f] && variable[g] {
            nbrs[f].insert(g);
            nbrs[g].insert(f);
        }
    }
    if let Some(f) = (0..face_count).find(|&f| nbrs[f].len() > 2) {
        return Err(Error::PreconditionViolated(format!(
            "skeleton face {f} of an R-node neighbors {} faces with candidates",
            nbrs[f].len()
        )));
    }
    let components = face_components(&variable, &nbrs);

    let mut row = Row::new();
    for i in interface_choices(&d.interface(x)) {
        let Some(fixed) = rf.place_interface(&i) else {
            row.insert(i, Entry::infeasible());
            continue;
        };
        let problem = FaceProblem {
            rf: &rf,
            rows,
            d,
            fixed: &fixed,
            variable: &variable,
        };
        let mut states = vec![0usize; face_count];
        let mut total = problem.constant();
        for comp in &components {
            let (v, assignment) = problem.solve_component(comp);
            total = total + v;
            for (&f, &s) in comp.faces.iter().zip(&assignment) {
                states[f] = s;
            }
        }
        let mut chosen: Vec<CycleId> = i.clone();
        for f in 0..face_count {
            if variable[f] && states[f] > 0 {
                chosen.push(rf.candidates[f][states[f] - 1]);
            }
        }
        chosen.sort_unstable();
        if total.is_finite() {
            debug_assert_eq!(total, problem.evaluate(&states), "component values add up");
        }
        let entry = if total.is_finite() {
            Entry {
                value: total,
                chosen,
                order: Vec::new(),
                flip: false,
            }
        } else {
            Entry::infeasible()
        };
        row.insert(i, entry);
    }
    Ok(row)
}

/// A connected set of variable faces, listed along its path or cycle.
pub(crate) struct FaceComponent {
    pub faces: Vec<usize>,
    pub is_cycle: bool,
}

fn face_components(variable: &[bool], nbrs: &[BTreeSet<usize>]) -> Vec<FaceComponent> {
    let n = variable.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if !variable[s] || seen[s] {
            continue;
        }
        // collect the component, then walk it from an endpoint
        let mut comp = vec![s];
        seen[s] = true;
        let mut k = 0;
        while k < comp.len() {
            for &w in &nbrs[comp[k]] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
            k += 1;
        }
        let is_cycle = comp.len() >= 3 && comp.iter().all(|&f| nbrs[f].len() == 2);
        let start = if is_cycle {
            *comp.iter().min().expect("nonempty")
        } else {
            *comp
                .iter()
                .filter(|&&f| nbrs[f].len() <= 1)
                .min()
                .expect("a path has an endpoint")
        };
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while order.len() < comp.len() {
            let next = *nbrs[cur]
                .iter()
                .find(|&&w| w != prev && !order.contains(&w))
                .expect("path continues");
            order.push(next);
            prev = cur;
            cur = next;
        }
        out.push(FaceComponent {
            faces: order,
            is_cycle,
        });
    }
    out
}

struct FaceProblem<'a> {
    rf: &'a RFaces,
    rows: &'a [Row],
    d: &'a Decomposed,
    fixed: &'a BTreeMap<usize, CycleId>,
    variable: &'a [bool],
}

impl FaceProblem<'_> {
    fn cycle_at(&self, f: usize, state: usize) -> Option<CycleId> {
        if let Some(&c) = self.fixed.get(&f) {
            return Some(c);
        }
        if self.variable[f] && state > 0 {
            return Some(self.rf.candidates[f][state - 1]);
        }
        None
    }

    fn term(&self, child: NodeId, a: Option<CycleId>, b: Option<CycleId>) -> Score {
        let mut x: Vec<CycleId> = a.into_iter().chain(b).collect();
        x.sort_unstable();
        self.rows[child].value(&restrict(&x, &self.d.interface(child)))
    }

    /// Terms whose faces are all fixed or candidate-free.
    fn constant(&self) -> Score {
        self.rf
            .sides
            .iter()
            .filter(|&&(_, _, f, g)| !self.variable[f] && !self.variable[g])
            .map(|&(_, c, f, g)| self.term(c, self.cycle_at(f, 0), self.cycle_at(g, 0)))
            .sum()
    }

    /// Objective for a full assignment of states.
    fn evaluate(&self, states: &[usize]) -> Score {
        let mut total: Score = self
            .rf
            .sides
            .iter()
            .map(|&(_, c, f, g)| self.term(c, self.cycle_at(f, states[f]), self.cycle_at(g, states[g])))
            .sum();
        for f in 0..states.len() {
            if self.variable[f] && states[f] > 0 {
                total = total + 1;
            }
        }
        total
    }

    /// Unary part of face `f` in state `s`: terms with no other variable face.
    fn unary(&self, f: usize, s: usize) -> Score {
        let mut total = Score::Val(u32::from(s > 0));
        for &(_, c, a, b) in &self.rf.sides {
            let other = if a == f {
                b
            } else if b == f {
                a
            } else {
                continue;
            };
            if other == f {
                total = total + self.term(c, self.cycle_at(f, s), self.cycle_at(f, s));
            } else if !self.variable[other] {
                total = total + self.term(c, self.cycle_at(f, s), self.cycle_at(other, 0));
            }
        }
        total
    }

    /// Terms between two distinct variable faces.
    fn pairwise(&self, f: usize, s: usize, g: usize, t: usize) -> Score {
        self.rf
            .sides
            .iter()
            .filter(|&&(_, _, a, b)| (a == f && b == g) || (a == g && b == f))
            .map(|&(_, c, _, _)| self.term(c, self.cycle_at(f, s), self.cycle_at(g, t)))
            .sum()
    }

    fn states(&self, f: usize) -> usize {
        self.rf.candidates[f].len() + 1
    }

    fn solve_component(&self, comp: &FaceComponent) -> (Score, Vec<usize>) {
        let faces = &comp.faces;
        if !comp.is_cycle {
            return self.solve_path(faces, None);
        }
        let mut best = (Score::NegInf, vec![0; faces.len()]);
        for s0 in 0..self.states(faces[0]) {
            let (v, a) = self.solve_path(faces, Some(s0));
            if v > best.0 {
                best = (v, a);
            }
        }
        best
    }

    /// Path DP; with `first` set, the first face is pinned and the closing
    /// term between the last and the first face is added.
    fn solve_path(&self, faces: &[usize], first: Option<usize>) -> (Score, Vec<usize>) {
        let h = faces.len();
        let mut best: Vec<Vec<Score>> = Vec::with_capacity(h);
        let mut back: Vec<Vec<usize>> = Vec::with_capacity(h);
        let f0 = faces[0];
        best.push(
            (0..self.states(f0))
                .map(|s| match first {
                    Some(p) if p != s => Score::NegInf,
                    _ => self.unary(f0, s),
                })
                .collect(),
        );
        back.push(vec![0; self.states(f0)]);
        for j in 1..h {
            let (f, g) = (faces[j - 1], faces[j]);
            let mut cur = vec![Score::NegInf; self.states(g)];
            let mut arg = vec![0; self.states(g)];
            for t in 0..self.states(g) {
                let u = self.unary(g, t);
                for s in 0..self.states(f) {
                    let v = best[j - 1][s] + self.pairwise(f, s, g, t) + u;
                    if v > cur[t] {
                        cur[t] = v;
                        arg[t] = s;
                    }
                }
            }
            best.push(cur);
            back.push(arg);
        }
        let last = faces[h - 1];
        let mut end = (Score::NegInf, 0);
        for t in 0..self.states(last) {
            let mut v = best[h - 1][t];
            if let Some(s0) = first {
                if h > 1 {
                    v = v + self.pairwise(last, t, f0, s0);
                }
            }
            if v > end.0 {
                end = (v, t);
            }
        }
        let mut assignment = vec![0; h];
        let mut s = end.1;
        for j in (0..h).rev() {
            assignment[j] = s;
            s = back[j][s];
        }
        (end.0, assignment)
    }
}

/// Largest `|I| + T[φ, I]` and its interface set.
pub(crate) fn best_root(d: &Decomposed, rows: &[Row]) -> (Score, ISet) {
    let phi = d.tree.phi();
    let mut best = (Score::NegInf, Vec::new());
    for i in interface_choices(&d.interface(phi)) {
        let v = rows[phi].value(&i) + i.len() as u32;
        if v > best.0 {
            best = (v, i);
        }
    }
    best
}

/// Rebuilds and verifies the embedding of an optimal table entry.
pub(crate) fn certify(d: &Decomposed, rows: &[Row], method: Method, guarantee: Guarantee, expect_exact: bool) -> Result<Solution> {
    let (value, i) = best_root(d, rows);
    let value = value.value().expect("the empty interface set is always realizable") as usize;
    let choice = reconstruct(d, rows, &i)?;
    let embedding = d.tree.compose_embedding(&choice);
    let realized = d.cycles.facial_ids(d.tree.graph(), &embedding)?;
    if realized.len() < value || (expect_exact && realized.len() != value) {
        return Err(Error::PreconditionViolated(format!(
            "certificate realizes {} cycles, table claims {value}",
            realized.len()
        )));
    }
    Ok(Solution {
        count: realized.len(),
        embedding,
        realized,
        method,
        guarantee,
    })
}

fn check_heavy(cycles: &CycleSet, r: usize) -> Result<()> {
    let deg = cycles.max_heavy_degree();
    if deg > r {
        return Err(Error::PreconditionViolated(format!(
            "a cycle shares two or more vertices with {deg} others, more than {r}"
        )));
    }
    Ok(())
}

/// Checks that |𝓘(µ)| ≤ 3 at every node.
fn check_interface_bound(d: &Decomposed) -> Result<()> {
    for x in 0..d.tree.node_count() {
        let k = d.interface(x).len();
        if k > 3 {
            return Err(Error::PreconditionViolated(format!("node {x} has {k} interface cycles")));
        }
    }
    Ok(())
}

/// Exact optimum when every cycle shares two or more vertices with at most
/// two other cycles.
pub fn solve_exact(g: &Multigraph, cycles: &CycleSet) -> Result<Solution> {
    check_heavy(cycles, 2)?;
    let d = Decomposed::new(g, cycles)?;
    check_interface_bound(&d)?;
    let rows = exact_rows(&d, PRule::Enumerate { limit: 3 })?;
    certify(&d, &rows, Method::Exact, Guarantee::Optimal, true)
}

/// Exact optimum on series-parallel graphs when every cycle shares two or
/// more vertices with at most `r` others.
pub fn solve_sp_fpt(g: &Multigraph, cycles: &CycleSet, r: usize) -> Result<Solution> {
    let d = Decomposed::new(g, cycles)?;
    if d.has_r_node() {
        return Err(Error::HasRNode);
    }
    check_heavy(cycles, r)?;
    let rows = exact_rows(&d, PRule::Enumerate { limit: r + 1 })?;
    certify(&d, &rows, Method::SpFpt, Guarantee::Optimal, true)
}

/// Exact optimum on series-parallel graphs whose cycles pairwise share at
/// most two vertices.
pub fn solve_sp_two_shared(g: &Multigraph, cycles: &CycleSet) -> Result<Solution> {
    let shared = cycles.max_pairwise_shared();
    if shared > 2 {
        return Err(Error::PreconditionViolated(format!("two cycles share {shared} vertices")));
    }
    let d = Decomposed::new(g, cycles)?;
    if d.has_r_node() {
        return Err(Error::PreconditionViolated("graph is not series-parallel".to_string()));
    }
    let rows = exact_rows(&d, PRule::Greedy)?;
    certify(&d, &rows, Method::SpTwoShared, Guarantee::Optimal, true)
}

/// The full exact table for `d` under the hypothesis of [`solve_exact`].
pub fn exact_table(d: &Decomposed) -> Result<Vec<Row>> {
    check_heavy(&d.cycles, 2)?;
    exact_rows(d, PRule::Enumerate { limit: 3 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k23() -> Multigraph {
        Multigraph::new(5, &[(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1)]).unwrap()
    }

    fn theta(k: usize, len: usize) -> (Multigraph, Vec<Vec<usize>>) {
        // poles 0 and 1; path i has len-1 inner vertices
        let mut edges = Vec::new();
        let mut paths = Vec::new();
        let mut next = 2;
        for _ in 0..k {
            let mut path = vec![0];
            let mut prev = 0;
            for _ in 0..len - 1 {
                edges.push((prev, next));
                path.push(next);
                prev = next;
                next += 1;
            }
            edges.push((prev, 1));
            paths.push(path);
        }
        let g = Multigraph::new(next, &edges).unwrap();
        let mut cycles = Vec::new();
        for a in 0..k {
            for b in a + 1..k {
                let mut c = paths[a].clone();
                c.push(1);
                c.extend(paths[b].iter().skip(1).rev());
                cycles.push(c);
            }
        }
        (g, cycles)
    }

    #[test]
    fn layout_rules() {
        // 4 skeleton edges, parent 0
        assert!(p_layout(4, 0, &[]).is_some());
        assert_eq!(p_layout(4, 0, &[(1, 2), (2, 3)]).map(|o| o.len()), Some(3));
        assert!(p_layout(4, 0, &[(1, 2), (1, 3), (1, 0)]).is_none());
        assert!(p_layout(4, 0, &[(1, 2), (2, 3), (3, 1)]).is_none());
        let o = p_layout(4, 0, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(o, vec![1, 2, 3]);
        assert!(p_layout(3, 0, &[(1, 2), (1, 2)]).is_none());
        let o = p_layout(5, 2, &[(2, 0), (2, 4)]).unwrap();
        let pos = |v| o.iter().position(|&x| x == v).unwrap();
        assert!(pos(0) == 0 || pos(0) == 3);
        assert!(pos(4) == 0 || pos(4) == 3);
    }

    #[test]
    fn small_instances() {
        let c5 = Multigraph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let cs = CycleSet::validate(&c5, &[vec![0, 1, 2, 3, 4]]).unwrap();
        assert_eq!(solve_exact(&c5, &cs).unwrap().count, 1);

        let k4 = Multigraph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let tris = vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]];
        let cs = CycleSet::validate(&k4, &tris).unwrap();
        // every triangle shares two vertices with three others
        assert!(matches!(solve_exact(&k4, &cs), Err(Error::PreconditionViolated(_))));
        let cs = CycleSet::validate(&k4, &tris[..3]).unwrap();
        assert_eq!(solve_exact(&k4, &cs).unwrap().count, 3);

        let g = k23();
        let cs = CycleSet::validate(&g, &[vec![0, 2, 1, 3], vec![0, 2, 1, 4], vec![0, 3, 1, 4]]).unwrap();
        assert_eq!(solve_exact(&g, &cs).unwrap().count, 3);
        assert_eq!(solve_sp_fpt(&g, &cs, 2).unwrap().count, 3);
        // pair-cycles of a theta share a whole path
        assert!(matches!(solve_sp_two_shared(&g, &cs), Err(Error::PreconditionViolated(_))));
        assert_eq!(solve_sp_fpt(&k4, &CycleSet::empty(), 3).unwrap_err(), Error::HasRNode);
    }

    #[test]
    fn theta_four_paths() {
        let (g, cycles) = theta(4, 2);
        let cs = CycleSet::validate(&g, &cycles).unwrap();
        assert_eq!(cs.len(), 6);
        assert_eq!(solve_sp_fpt(&g, &cs, 5).unwrap().count, 4);
        assert!(matches!(solve_sp_fpt(&g, &cs, 4), Err(Error::PreconditionViolated(_))));
        assert_eq!(solve_exact(&g, &cs).unwrap_err(), solve_sp_fpt(&g, &cs, 2).unwrap_err());
    }

    #[test]
    fn k23_p_node_row() {
        let g = k23();
        let cs = CycleSet::validate(&g, &[vec![0, 2, 1, 3], vec![0, 2, 1, 4], vec![0, 3, 1, 4]]).unwrap();
        let d = Decomposed::new(&g, &cs).unwrap();
        let rows = exact_rows(&d, PRule::Enumerate { limit: 3 }).unwrap();
        let p = (0..d.tree.node_count()).find(|&x| d.tree.kind(x) == NodeKind::P).unwrap();
        assert_eq!(rows[p].value(&[0, 1]), Score::Val(1));
        assert_eq!(rows[p].value(&[]), Score::Val(1));
        assert_eq!(rows[p].value(&[0, 1, 2]), Score::NegInf);
    }

    #[test]
    fn shared_real_edge_caps_at_two() {
        // real edge 0-1 plus three 2-paths; cycles through the edge and one path each
        let g = Multigraph::new(5, &[(0, 1), (0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1)]).unwrap();
        let cs = CycleSet::validate(&g, &[vec![0, 2, 1], vec![0, 3, 1], vec![0, 4, 1]]).unwrap();
        assert_eq!(solve_sp_two_shared(&g, &cs).unwrap().count, 2);
        assert_eq!(solve_exact(&g, &cs).unwrap().count, 2);
        let cs = CycleSet::validate(&g, &[vec![0, 2, 1, 3], vec![0, 2, 1, 4]]).unwrap();
        assert!(solve_sp_two_shared(&g, &cs).is_err());
        assert_eq!(solve_sp_fpt(&g, &cs, 1).unwrap().count, 2);
    }

    #[test]
    fn sharing_three_vertices_is_rejected() {
        let g = Multigraph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let cs = CycleSet::validate(&g, &[vec![0, 1, 2], vec![0, 1, 2, 3]]).unwrap();
        assert!(matches!(solve_sp_two_shared(&g, &cs), Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn empty_cycle_set() {
        let (g, _) = theta(3, 3);
        assert_eq!(solve_exact(&g, &CycleSet::empty()).unwrap().count, 0);
    }
}
