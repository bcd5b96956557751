//! Approximate tables: maximum matchings at P-nodes and independent sets of
//! skeleton faces at R-nodes.

use crate::cycles::{interface_choices, CycleId, CycleSet};
use crate::exact::{child_edges, dp_q, dp_s, p_layout, p_value, projection_pair, Decomposed, RFaces};
use crate::graph::Multigraph;
use crate::matching::max_matching;
use crate::mis::mis_planar;
use crate::prelude::*;
use crate::spqr::{NodeId, NodeKind};
use crate::table::{restrict, Entry, Guarantee, Method, Row, Solution};
use crate::{Error, Result};

/// Default slack for the independent-set step.
pub const DEFAULT_EPS: f64 = 0.5;

fn with(set: &[CycleId], c: CycleId) -> Vec<CycleId> {
    let mut v = set.to_vec();
    if !v.contains(&c) {
        v.push(c);
        v.sort_unstable();
    }
    v
}

/// True iff adding `c` to the child's interface set keeps its value.
fn zero_cost(d: &Decomposed, rows: &[Row], child: NodeId, i: &[CycleId], c: CycleId) -> bool {
    let base = restrict(i, &d.interface(child));
    let v = rows[child].value(&base);
    v.is_finite() && rows[child].value(&with(&base, c)) == v
}

/// P-node: realize a maximum matching of zero-cost cycles between children.
pub fn apx_p(d: &Decomposed, x: NodeId, rows: &[Row]) -> Result<Row> {
    let t = &d.tree;
    let parent = t.parent_edge(x).expect("P-node below the root");
    let k = t.node(x).edge_count();
    let children = child_edges(t, x);
    let slot: BTreeMap<usize, usize> = children.iter().enumerate().map(|(s, &(e, _))| (e, s)).collect();
    let interface = d.interface(x);
    let relevant = d.proj.relevant(x);
    let internal: Vec<CycleId> = relevant
        .iter()
        .copied()
        .filter(|c| interface.binary_search(c).is_err())
        .collect();
    let mut row = Row::new();
    for i in interface_choices(&interface) {
        let base_pairs: Vec<(usize, usize)> = i.iter().map(|&c| projection_pair(d, x, c)).collect();
        if p_layout(k, parent, &base_pairs).is_none() {
            row.insert(i, Entry::infeasible());
            continue;
        }
        // children used by the members of I
        let i_children: BTreeSet<usize> = base_pairs
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .filter(|&e| e != parent)
            .collect();
        let mut h_edges: Vec<(usize, usize)> = Vec::new();
        let mut h_cycle: Vec<CycleId> = Vec::new();
        for &c in &internal {
            let (a, b) = projection_pair(d, x, c);
            if i.len() == 2 && children.len() > 2 && i_children.contains(&a) && i_children.contains(&b) {
                continue;
            }
            let (sa, sb) = (slot[&a], slot[&b]);
            if h_edges.contains(&(sa, sb)) {
                continue;
            }
            if zero_cost(d, rows, children[sa].1, &i, c) && zero_cost(d, rows, children[sb].1, &i, c) {
                h_edges.push((sa, sb));
                h_cycle.push(c);
            }
        }
        let m = max_matching(children.len(), &h_edges);
        let realized: Vec<CycleId> = m.iter().map(|&j| h_cycle[j]).collect();
        let mut chosen: Vec<CycleId> = i.iter().chain(&realized).copied().collect();
        chosen.sort_unstable();
        let pairs: Vec<(usize, usize)> = chosen.iter().map(|&c| projection_pair(d, x, c)).collect();
        let order = p_layout(k, parent, &pairs)
            .ok_or_else(|| Error::PreconditionViolated("matching at a P-node has no circular order".to_string()))?;
        let value = p_value(d, &children, rows, &chosen, realized.len());
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

/// R-node: realize an independent set of faces with zero-cost candidates.
/// Returns the row and whether every independent set was exact.
pub fn apx_r(d: &Decomposed, x: NodeId, rows: &[Row], eps: f64) -> (Row, bool) {
    let rf = RFaces::new(d, x);
    let (fa, fb) = rf.parent_faces;
    let mut exact = true;
    let mut row = Row::new();
    for i in interface_choices(&d.interface(x)) {
        let Some(_) = rf.place_interface(&i) else {
            row.insert(i, Entry::infeasible());
            continue;
        };
        let mut vertex_of = BTreeMap::new();
        let mut cand = Vec::new();
        for f in 0..rf.edge_sets.len() {
            if f == fa || f == fb {
                continue;
            }
            let ok = rf.candidates[f].iter().copied().find(|&c| {
                rf.sides
                    .iter()
                    .filter(|&&(_, _, f1, f2)| f1 == f || f2 == f)
                    .all(|&(_, child, _, _)| zero_cost(d, rows, child, &i, c))
            });
            if let Some(c) = ok {
                vertex_of.insert(f, cand.len());
                cand.push(c);
            }
        }
        let h_edges: Vec<(usize, usize)> = rf
            .sides
            .iter()
            .filter_map(|&(_, _, f1, f2)| Some((*vertex_of.get(&f1)?, *vertex_of.get(&f2)?)))
            .filter(|&(a, b)| a != b)
            .collect();
        let h = Multigraph::new(cand.len(), &h_edges).expect("faces index a valid graph");
        let mis = mis_planar(&h, eps);
        exact &= mis.exact;
        let mut chosen: Vec<CycleId> = i.iter().copied().chain(mis.set.iter().map(|&v| cand[v])).collect();
        chosen.sort_unstable();
        let mut value = crate::table::Score::Val(mis.set.len() as u32);
        for &(_, child, _, _) in &rf.sides {
            value = value + rows[child].value(&restrict(&chosen, &d.interface(child)));
        }
        row.insert(
            i,
            Entry {
                value,
                chosen,
                order: Vec::new(),
                flip: false,
            },
        );
    }
    (row, exact)
}

/// Approximate table bottom-up; the flag is false if some independent set
/// was computed heuristically.
pub fn approx_rows(d: &Decomposed, eps: f64) -> Result<(Vec<Row>, bool)> {
    let t = &d.tree;
    let mut rows = vec![Row::new(); t.node_count()];
    let mut exact = true;
    for &x in t.preorder().iter().rev() {
        if x == t.root() {
            continue;
        }
        rows[x] = match t.kind(x) {
            NodeKind::Q => dp_q(d, x),
            NodeKind::S => dp_s(d, x, &rows),
            NodeKind::P => apx_p(d, x, &rows)?,
            NodeKind::R => {
                let (row, ok) = apx_r(d, x, &rows, eps);
                exact &= ok;
                row
            }
        };
    }
    Ok((rows, exact))
}

/// Approximation with factor 2 on series-parallel graphs and 4+ε otherwise.
pub fn approximate(g: &Multigraph, cycles: &CycleSet, eps: f64) -> Result<Solution> {
    let d = Decomposed::new(g, cycles)?;
    let (rows, exact) = approx_rows(&d, eps)?;
    let guarantee = if !exact {
        Guarantee::Heuristic
    } else if d.has_r_node() {
        Guarantee::Factor(4.0 + eps)
    } else {
        Guarantee::Factor(2.0)
    };
    crate::exact::certify(&d, &rows, Method::Approx, guarantee, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::exact_table;
    use crate::gen;
    use crate::table::Score;

    fn pair_cycles(k: usize, len: usize) -> (Multigraph, CycleSet) {
        let g = gen::theta(k, len);
        // rebuild the paths: path i starts with edge i*len
        let mut seqs = Vec::new();
        let path = |i: usize| -> Vec<usize> {
            let mut p = vec![0];
            for j in 0..len - 1 {
                p.push(2 + i * (len - 1) + j);
            }
            p
        };
        for a in 0..k {
            for b in a + 1..k {
                let mut c = path(a);
                c.push(1);
                c.extend(path(b).iter().skip(1).rev());
                seqs.push(c);
            }
        }
        let cs = CycleSet::validate(&g, &seqs).unwrap();
        (g, cs)
    }

    #[test]
    fn theta_pairs() {
        let (g, cs) = pair_cycles(3, 2);
        let s = approximate(&g, &cs, DEFAULT_EPS).unwrap();
        assert!(s.count == 2 || s.count == 3);
        assert_eq!(s.guarantee, Guarantee::Factor(2.0));
        for k in 3..=6 {
            let (g, cs) = pair_cycles(k, 2);
            let s = approximate(&g, &cs, DEFAULT_EPS).unwrap();
            assert!(2 * s.count >= k, "k={k} got {}", s.count);
        }
    }

    #[test]
    fn mis_instance() {
        let inst = gen::from_mis(&gen::k4()).unwrap();
        let s = approximate(&inst.graph, &inst.cycles, DEFAULT_EPS).unwrap();
        assert_eq!(s.count, 1);
        assert_eq!(s.guarantee, Guarantee::Factor(4.5));
        let g = gen::k4();
        assert_eq!(approximate(&g, &CycleSet::empty(), DEFAULT_EPS).unwrap().count, 0);
    }

    #[test]
    fn sandwich_on_k23() {
        let (g, cs) = pair_cycles(3, 2);
        let d = Decomposed::new(&g, &cs).unwrap();
        let exact = exact_table(&d).unwrap();
        let (apx, _) = approx_rows(&d, DEFAULT_EPS).unwrap();
        for x in 0..d.tree.node_count() {
            for (i, e) in exact[x].iter() {
                let a = apx[x].value(i);
                assert!(a <= e.value);
                if let (Score::Val(t), Score::Val(v)) = (e.value, a) {
                    assert!(2 * v >= t);
                } else {
                    assert_eq!(a, e.value);
                }
            }
        }
    }
}
