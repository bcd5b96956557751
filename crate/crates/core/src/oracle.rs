//! Exhaustive search over all embeddings, used as ground truth.

use crate::cycles::{CycleId, CycleSet, Projections};
use crate::graph::{FacePartition, Multigraph, RotationEmbedding};
use crate::prelude::*;
use crate::spqr::{EmbeddingChoice, NodeId, NodeKind, RootedTree, SpqrTree};
use crate::table::{Guarantee, Method, Score, Solution};
use crate::{Error, Result};

/// Default limit on the number of embeddings an oracle call may visit.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Advances `v` to the next permutation in lexicographic order; false after the last.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        v.reverse();
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Enumerates embedding choices of a rooted tree in lexicographic order.
///
/// Over the whole tree, mirror images are skipped: only choices whose first
/// nontrivial choice point is in canonical orientation are produced.
pub struct ChoiceIterator<'a> {
    tree: &'a RootedTree,
    points: Vec<NodeId>,
    current: Option<EmbeddingChoice>,
    quotient: bool,
}

impl<'a> ChoiceIterator<'a> {
    /// All embeddings of G with the root edge on the outer face, one per mirror pair.
    pub fn new(tree: &'a RootedTree) -> ChoiceIterator<'a> {
        ChoiceIterator {
            tree,
            points: tree.choice_points(),
            current: Some(tree.default_choice()),
            quotient: true,
        }
    }

    /// All choices inside the subtree of `node`, mirror images included.
    pub fn subtree(tree: &'a RootedTree, node: NodeId) -> ChoiceIterator<'a> {
        let points = tree
            .choice_points()
            .into_iter()
            .filter(|&x| is_descendant(tree, x, node))
            .collect();
        ChoiceIterator {
            tree,
            points,
            current: Some(tree.default_choice()),
            quotient: false,
        }
    }

    fn canonical(&self, c: &EmbeddingChoice) -> bool {
        if !self.quotient {
            return true;
        }
        match self.points.first() {
            None => true,
            Some(&x) => match self.tree.kind(x) {
                NodeKind::P => {
                    let o = &c.orders[x];
                    o[0] < o[o.len() - 1]
                }
                _ => !c.flips[x],
            },
        }
    }

    fn advance(&mut self) {
        let Some(c) = self.current.as_mut() else { return };
        for &x in self.points.iter().rev() {
            let carried = match self.tree.kind(x) {
                NodeKind::P => !next_permutation(&mut c.orders[x]),
                _ => {
                    c.flips[x] = !c.flips[x];
                    !c.flips[x]
                }
            };
            if !carried {
                return;
            }
        }
        self.current = None;
    }
}

impl Iterator for ChoiceIterator<'_> {
    type Item = EmbeddingChoice;

    fn next(&mut self) -> Option<EmbeddingChoice> {
        loop {
            let c = self.current.clone()?;
            self.advance();
            if self.canonical(&c) {
                return Some(c);
            }
        }
    }
}

fn is_descendant(tree: &RootedTree, mut x: NodeId, ancestor: NodeId) -> bool {
    loop {
        if x == ancestor {
            return true;
        }
        match tree.parent(x) {
            Some(p) => x = p,
            None => return false,
        }
    }
}

fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

/// Number of choices at the given choice points, before mirror quotienting.
fn raw_count(tree: &RootedTree, points: &[NodeId]) -> Result<u128> {
    let mut total: u128 = 1;
    for &x in points {
        let f = match tree.kind(x) {
            NodeKind::P => factorial(tree.children(x).len()),
            _ => 2,
        };
        total = total.checked_mul(f).filter(|&t| t < 1 << 64).ok_or(Error::Overflow)?;
    }
    Ok(total)
}

fn to_u63(v: u128) -> Result<u64> {
    if v >= 1 << 63 {
        Err(Error::Overflow)
    } else {
        Ok(v as u64)
    }
}

/// Embeddings of the tree's graph up to mirror image.
pub fn count_tree_embeddings(tree: &RootedTree) -> Result<u64> {
    let points = tree.choice_points();
    let raw = raw_count(tree, &points)?;
    to_u63(if points.is_empty() { raw } else { raw / 2 })
}

/// Number of combinatorial embeddings of a biconnected planar graph, mirror
/// images identified. `Overflow` stands for "at least 2^63".
pub fn count_embeddings(g: &Multigraph) -> Result<u64> {
    count_tree_embeddings(&SpqrTree::build(g)?.root_at(0))
}

/// Choices of the subtree of `node`, mirror images included.
pub fn count_subtree_choices(tree: &RootedTree, node: NodeId) -> Result<u64> {
    let points: Vec<NodeId> = tree
        .choice_points()
        .into_iter()
        .filter(|&x| is_descendant(tree, x, node))
        .collect();
    to_u63(raw_count(tree, &points)?)
}

fn check_budget(count: u64, budget: u64) -> Result<()> {
    if count > budget {
        Err(Error::BudgetExceeded(budget))
    } else {
        Ok(())
    }
}

/// Facial cycle ids of an embedding; also checks Euler's formula.
fn facial(g: &Multigraph, cycles: &CycleSet, emb: &RotationEmbedding) -> Result<Vec<CycleId>> {
    let faces = FacePartition::compute(g, emb)?;
    let sets = faces.edge_sets();
    Ok((0..cycles.len())
        .filter(|&c| sets.contains(cycles.get(c).edge_set()))
        .collect())
}

/// Calls `f` on every embedding of G up to mirror image, in lexicographic
/// order of choices; stops early when `f` returns false.
pub fn for_each_embedding<F>(g: &Multigraph, budget: u64, mut f: F) -> Result<()>
where
    F: FnMut(&RootedTree, &EmbeddingChoice, &RotationEmbedding) -> Result<bool>,
{
    let tree = SpqrTree::build(g)?.root_at(0);
    check_budget(count_tree_embeddings(&tree)?, budget)?;
    for choice in ChoiceIterator::new(&tree) {
        let emb = tree.compose_embedding(&choice);
        if !f(&tree, &choice, &emb)? {
            break;
        }
    }
    Ok(())
}

/// Called on every embedding the search evaluates, with its facial cycles.
pub type Observer<'a> = &'a mut dyn FnMut(&RootedTree, &RotationEmbedding, &[CycleId]);

enum Goal<'a> {
    Max,
    AllOf(&'a [CycleId]),
}

/// Depth-first search over choice points. A cycle is discarded as soon as
/// two of its skeleton edges at a P-node are placed apart; leaves are
/// evaluated by tracing faces.
struct Search<'a, 'o> {
    tree: &'a RootedTree,
    cycles: &'a CycleSet,
    points: Vec<NodeId>,
    choice: EmbeddingChoice,
    /// Per P-node: (cycle, edge, other edge) for both orientations.
    pairs: BTreeMap<NodeId, Vec<(CycleId, usize, usize)>>,
    dead: Vec<u32>,
    alive: usize,
    visited: u64,
    budget: u64,
    goal: Goal<'a>,
    best: Option<(Vec<CycleId>, RotationEmbedding)>,
    observer: Option<Observer<'o>>,
    done: bool,
}

impl<'a, 'o> Search<'a, 'o> {
    fn new(tree: &'a RootedTree, cycles: &'a CycleSet, budget: u64, goal: Goal<'a>) -> Search<'a, 'o> {
        let proj = Projections::compute(tree, cycles);
        let mut dead = vec![0u32; cycles.len()];
        let mut pairs: BTreeMap<NodeId, Vec<(CycleId, usize, usize)>> = BTreeMap::new();
        for x in 0..tree.node_count() {
            let kind = tree.kind(x);
            let faces = match kind {
                NodeKind::R => {
                    let node = tree.node(x);
                    let rot = tree.r_reference(x).expect("R-node reference");
                    Some(FacePartition::compute(&node.skeleton, rot).expect("planar skeleton").edge_sets())
                }
                _ => None,
            };
            for p in proj.of(x) {
                match kind {
                    NodeKind::P if p.edges.len() != 2 => dead[p.cycle] += 1,
                    NodeKind::P => {
                        let (a, b) = (p.edges[0], p.edges[1]);
                        let list = pairs.entry(x).or_default();
                        list.push((p.cycle, a, b));
                        list.push((p.cycle, b, a));
                    }
                    NodeKind::R if !faces.as_ref().expect("faces").contains(&p.edges) => dead[p.cycle] += 1,
                    _ => {}
                }
            }
        }
        let alive = dead.iter().filter(|&&d| d == 0).count();
        Search {
            tree,
            cycles,
            points: tree.choice_points(),
            choice: tree.default_choice(),
            pairs,
            dead,
            alive,
            visited: 0,
            budget,
            goal,
            best: None,
            observer: None,
            done: false,
        }
    }

    fn prune(&self) -> bool {
        match self.goal {
            Goal::Max => self.best.as_ref().is_some_and(|(b, _)| self.alive <= b.len()),
            Goal::AllOf(s) => s.iter().any(|&c| self.dead[c] > 0),
        }
    }

    fn kill(&mut self, c: CycleId) {
        if self.dead[c] == 0 {
            self.alive -= 1;
        }
        self.dead[c] += 1;
    }

    fn revive(&mut self, c: CycleId) {
        self.dead[c] -= 1;
        if self.dead[c] == 0 {
            self.alive += 1;
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        Ok(())
    }

    fn leaf(&mut self) -> Result<()> {
        let emb = self.tree.compose_embedding(&self.choice);
        let ids = facial(self.tree.graph(), self.cycles, &emb)?;
        if let Some(obs) = self.observer.as_mut() {
            obs(self.tree, &emb, &ids);
        }
        match self.goal {
            Goal::Max => {
                if self.best.as_ref().is_none_or(|(b, _)| ids.len() > b.len()) {
                    self.done = ids.len() == self.cycles.len();
                    self.best = Some((ids, emb));
                }
            }
            Goal::AllOf(s) => {
                if s.iter().all(|c| ids.binary_search(c).is_ok()) {
                    self.best = Some((ids, emb));
                    self.done = true;
                }
            }
        }
        Ok(())
    }

    fn point(&mut self, idx: usize) -> Result<()> {
        self.tick()?;
        if self.done || self.prune() {
            return Ok(());
        }
        let Some(&x) = self.points.get(idx) else {
            return self.leaf();
        };
        match self.tree.kind(x) {
            NodeKind::P => {
                let mut free = self.tree.free_edges(x);
                let mut placed = Vec::with_capacity(free.len());
                self.place(idx, x, &mut free, &mut placed)
            }
            _ => {
                for flip in [false, true] {
                    if flip && idx == 0 {
                        break;
                    }
                    self.choice.flips[x] = flip;
                    self.point(idx + 1)?;
                    if self.done {
                        break;
                    }
                }
                self.choice.flips[x] = false;
                Ok(())
            }
        }
    }

    fn place(&mut self, idx: usize, x: NodeId, free: &mut Vec<usize>, placed: &mut Vec<usize>) -> Result<()> {
        if free.is_empty() {
            if idx == 0 && placed[0] > placed[placed.len() - 1] {
                return Ok(());
            }
            self.choice.orders[x] = placed.clone();
            return self.point(idx + 1);
        }
        let k = placed.len() + free.len();
        let parent = self.tree.parent_edge(x).expect("P-node below the root");
        for slot in 0..free.len() {
            let c = free.remove(slot);
            let pos = placed.len() + 1;
            placed.push(c);
            // cycles whose other edge is already fixed and not next to c
            let killed: Vec<CycleId> = self
                .pairs
                .get(&x)
                .map(|list| {
                    list.iter()
                        .filter(|&&(_, e, _)| e == c)
                        .filter(|&&(_, _, o)| {
                            if o == parent {
                                pos != 1 && pos != k
                            } else {
                                placed[..placed.len() - 1]
                                    .iter()
                                    .position(|&q| q == o)
                                    .is_some_and(|q| q + 2 != pos)
                            }
                        })
                        .map(|&(cy, _, _)| cy)
                        .collect()
                })
                .unwrap_or_default();
            for &cy in &killed {
                self.kill(cy);
            }
            let r = if self.prune() {
                self.tick()
            } else {
                self.place(idx, x, free, placed)
            };
            for &cy in &killed {
                self.revive(cy);
            }
            placed.pop();
            free.insert(slot, c);
            r?;
            if self.done {
                break;
            }
        }
        Ok(())
    }
}

/// Maximum number of facial cycles over all embeddings.
pub fn brute_opt(g: &Multigraph, cycles: &CycleSet) -> Result<Solution> {
    brute_opt_with_budget(g, cycles, DEFAULT_BUDGET)
}

/// [`brute_opt`] with a limit on visited search nodes.
pub fn brute_opt_with_budget(g: &Multigraph, cycles: &CycleSet, budget: u64) -> Result<Solution> {
    brute_opt_observed(g, cycles, budget, None)
}

/// [`brute_opt_with_budget`] calling `observer` on every evaluated embedding.
pub fn brute_opt_observed(g: &Multigraph, cycles: &CycleSet, budget: u64, observer: Option<Observer<'_>>) -> Result<Solution> {
    for c in cycles.cycles() {
        c.check_in(g)?;
    }
    let tree = SpqrTree::build(g)?.root_at(0);
    let mut s = Search::new(&tree, cycles, budget, Goal::Max);
    s.observer = observer;
    s.point(0)?;
    let (realized, embedding) = s.best.expect("at least one embedding");
    Ok(Solution {
        count: realized.len(),
        embedding,
        realized,
        method: Method::Oracle,
        guarantee: Guarantee::Optimal,
    })
}

/// Some embedding in which every cycle of `subset` is facial, if any.
pub fn brute_feasible(g: &Multigraph, cycles: &CycleSet, subset: &[CycleId], budget: u64) -> Result<Option<RotationEmbedding>> {
    brute_feasible_observed(g, cycles, subset, budget, None)
}

/// [`brute_feasible`] calling `observer` on every evaluated embedding.
pub fn brute_feasible_observed(
    g: &Multigraph,
    cycles: &CycleSet,
    subset: &[CycleId],
    budget: u64,
    observer: Option<Observer<'_>>,
) -> Result<Option<RotationEmbedding>> {
    let tree = SpqrTree::build(g)?.root_at(0);
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    let mut s = Search::new(&tree, cycles, budget, Goal::AllOf(&sorted));
    s.observer = observer;
    s.point(0)?;
    Ok(s.best.map(|(_, e)| e))
}

/// Plain enumeration without pruning; for cross-checking the search.
pub fn enumerate_opt(g: &Multigraph, cycles: &CycleSet, budget: u64) -> Result<usize> {
    let mut best = 0;
    for_each_embedding(g, budget, |_, _, emb| {
        best = best.max(facial(g, cycles, emb)?.len());
        Ok(true)
    })?;
    Ok(best)
}

/// T[µ, I] by enumeration of the embeddings of pert(µ) plus its parent edge.
pub fn brute_table(tree: &RootedTree, cycles: &CycleSet, node: NodeId, i: &[CycleId], budget: u64) -> Result<Score> {
    if i.len() > 2 {
        return Ok(Score::NegInf);
    }
    check_budget(count_subtree_choices(tree, node)?, budget)?;
    let inside: BTreeSet<usize> = tree.pertinent_edges(node).into_iter().collect();
    let restricted: Vec<Vec<usize>> = i
        .iter()
        .map(|&c| {
            cycles
                .get(c)
                .edge_set()
                .iter()
                .copied()
                .filter(|e| inside.contains(e))
                .collect()
        })
        .collect();
    let mut best = Score::NegInf;
    for choice in ChoiceIterator::subtree(tree, node) {
        let comp = tree.compose_subtree(node, &choice);
        let faces = comp.faces()?;
        let syn = comp.synthetic;
        let side = |forward: bool| -> Vec<usize> {
            let f = faces.face_of(crate::graph::Dart::new(syn, forward));
            faces.faces[f].edges().into_iter().filter(|&e| e != syn).collect()
        };
        let (a, b) = (side(true), side(false));
        let ok = match restricted.len() {
            0 => true,
            1 => restricted[0] == a || restricted[0] == b,
            _ => (restricted[0] == a && restricted[1] == b) || (restricted[0] == b && restricted[1] == a),
        };
        if !ok {
            continue;
        }
        let sets: BTreeSet<Vec<usize>> = faces
            .faces
            .iter()
            .map(|f| f.edges())
            .filter(|s| !s.contains(&syn))
            .collect();
        let count = (0..cycles.len())
            .filter(|&c| sets.contains(cycles.get(c).edge_set()))
            .count();
        best = best.max(Score::Val(count as u32));
    }
    Ok(best)
}

/// Nodes at which more than two interface cycles are facial in `emb`.
pub fn interface_overflow(tree: &RootedTree, proj: &Projections, facial: &[CycleId]) -> Vec<NodeId> {
    (0..tree.node_count())
        .filter(|&x| x != tree.root())
        .filter(|&x| {
            proj.interface(x)
                .iter()
                .filter(|c| facial.binary_search(c).is_ok())
                .count()
                > 2
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> Multigraph {
        Multigraph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn k23() -> Multigraph {
        Multigraph::new(5, &[(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1)]).unwrap()
    }

    #[test]
    fn permutations() {
        let mut v = vec![0, 1, 2];
        let mut n = 1;
        while next_permutation(&mut v) {
            n += 1;
        }
        assert_eq!(n, 6);
        assert_eq!(v, vec![0, 1, 2]);
    }

    #[test]
    fn counts() {
        let c5 = Multigraph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert_eq!(count_embeddings(&c5).unwrap(), 1);
        assert_eq!(count_embeddings(&k4()).unwrap(), 1);
        assert_eq!(count_embeddings(&k23()).unwrap(), 1);
        let theta4 = Multigraph::new(6, &[(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1), (0, 5), (5, 1)]).unwrap();
        assert_eq!(count_embeddings(&theta4).unwrap(), 3);
        for g in [c5, k4(), k23(), theta4] {
            let tree = SpqrTree::build(&g).unwrap().root_at(0);
            assert_eq!(ChoiceIterator::new(&tree).count() as u64, count_tree_embeddings(&tree).unwrap());
        }
    }

    #[test]
    fn distinct_face_structures() {
        let theta4 = Multigraph::new(6, &[(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1), (0, 5), (5, 1)]).unwrap();
        let tree = SpqrTree::build(&theta4).unwrap().root_at(0);
        let mut seen = BTreeSet::new();
        for c in ChoiceIterator::new(&tree) {
            let emb = tree.compose_embedding(&c);
            seen.insert(FacePartition::compute(&theta4, &emb).unwrap().edge_sets());
        }
        assert_eq!(seen.len(), 3);
    }

    #[test]
    fn optima() {
        let g = k4();
        let tris = vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]];
        let cs = CycleSet::validate(&g, &tris).unwrap();
        assert_eq!(brute_opt(&g, &cs).unwrap().count, 4);
        assert!(brute_feasible(&g, &cs, &[0, 1, 2, 3], 100).unwrap().is_some());
        assert!(brute_feasible(&g, &cs, &[], 100).unwrap().is_some());
        let g = k23();
        let cs = CycleSet::validate(&g, &[vec![0, 2, 1, 3], vec![0, 2, 1, 4], vec![0, 3, 1, 4]]).unwrap();
        assert_eq!(brute_opt(&g, &cs).unwrap().count, 3);
    }

    #[test]
    fn budget_guard() {
        let theta4 = Multigraph::new(6, &[(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1), (0, 5), (5, 1)]).unwrap();
        let seqs = [vec![0, 2, 1, 3], vec![0, 2, 1, 4], vec![0, 2, 1, 5], vec![0, 3, 1, 4], vec![0, 3, 1, 5], vec![0, 4, 1, 5]];
        let cs = CycleSet::validate(&theta4, &seqs).unwrap();
        assert_eq!(brute_opt_with_budget(&theta4, &cs, 100).unwrap().count, 4);
        assert_eq!(brute_opt_with_budget(&theta4, &cs, 2).unwrap_err(), Error::BudgetExceeded(2));
        assert!(brute_opt_with_budget(&theta4, &cs, 100).is_ok());
        assert_eq!(enumerate_opt(&theta4, &cs, 2).unwrap_err(), Error::BudgetExceeded(2));
    }

    #[test]
    fn search_matches_enumeration() {
        use crate::gen::{random_instance, CyclePolicy, Family};
        for seed in 0..40 {
            let family = [Family::SeriesParallel, Family::Mixed][seed as usize % 2];
            let inst = random_instance(family, 9 + (seed as usize % 5), CyclePolicy::RandomSimpleCycles, seed);
            let plain = enumerate_opt(&inst.graph, &inst.cycles, 1_000_000).unwrap();
            let sol = brute_opt(&inst.graph, &inst.cycles).unwrap();
            assert_eq!(sol.count, plain, "seed {seed}");
            assert_eq!(inst.cycles.facial_ids(&inst.graph, &sol.embedding).unwrap(), sol.realized);
            let feasible = brute_feasible(&inst.graph, &inst.cycles, &sol.realized, 1_000_000).unwrap();
            assert!(feasible.is_some());
        }
    }

    #[test]
    fn table_entries() {
        let g = k23();
        let cs = CycleSet::validate(&g, &[vec![0, 2, 1, 3], vec![0, 2, 1, 4], vec![0, 3, 1, 4]]).unwrap();
        let tree = SpqrTree::build(&g).unwrap().root_at(0);
        let p = (0..tree.node_count()).find(|&x| tree.kind(x) == NodeKind::P).unwrap();
        let q = (0..tree.node_count()).find(|&x| tree.is_q_leaf(x)).unwrap();
        assert_eq!(brute_table(&tree, &cs, q, &[], 100).unwrap(), Score::ZERO);
        assert_eq!(brute_table(&tree, &cs, p, &[0, 1], 100).unwrap(), Score::Val(1));
        assert_eq!(brute_table(&tree, &cs, p, &[0, 1, 2], 100).unwrap(), Score::NegInf);
    }
}
