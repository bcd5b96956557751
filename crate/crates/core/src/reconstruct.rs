//! Top-down reconstruction of an embedding choice from table entries.

use crate::cycles::CycleId;
use crate::exact::Decomposed;
use crate::graph::FacePartition;
use crate::prelude::*;
use crate::spqr::{EmbeddingChoice, NodeKind};
use crate::table::Row;
use crate::{Error, Result};

fn internal(msg: String) -> Error {
    Error::PreconditionViolated(format!("reconstruction failed: {msg}"))
}

/// Builds an embedding choice realizing the entries selected from `rows`,
/// starting with `root_set` around the root edge.
pub(crate) fn reconstruct(d: &Decomposed, rows: &[Row], root_set: &[CycleId]) -> Result<EmbeddingChoice> {
    let t = &d.tree;
    let mut choice = t.default_choice();
    let mut stack = vec![(t.phi(), root_set.first().copied(), root_set.get(1).copied())];
    while let Some((x, ra, rb)) = stack.pop() {
        if t.kind(x) == NodeKind::Q {
            continue;
        }
        let mut key: Vec<CycleId> = ra.into_iter().chain(rb).collect();
        key.sort_unstable();
        let entry = rows[x]
            .entry(&key)
            .filter(|e| e.value.is_finite())
            .ok_or_else(|| internal(format!("node {x} cannot realize {key:?}")))?;
        let node = t.node(x);
        let kind = node.kind;
        let sk = &node.skeleton;
        let p = t.parent_edge(x).expect("non-root node");
        let (u, _) = t.poles(x);
        let up = sk.dart_from(p, node.local(u).expect("pole in skeleton"));
        match kind {
            NodeKind::P => choice.orders[x] = entry.order.clone(),
            NodeKind::R => choice.flips[x] = entry.flip,
            _ => {}
        }
        let mut mirrored = false;
        let faces = loop {
            let rot = t.skeleton_rotation(x, &choice);
            let faces = FacePartition::compute(sk, &rot)?;
            let (fa, fb) = (faces.face_of(up), faces.face_of(up.rev()));
            let mut at_face: BTreeMap<usize, CycleId> = BTreeMap::new();
            if kind == NodeKind::S {
                at_face.extend(ra.map(|c| (fa, c)));
                at_face.extend(rb.map(|c| (fb, c)));
            } else {
                for &c in &entry.chosen {
                    let edges = &d.proj.get(x, c).expect("chosen cycles are relevant").edges;
                    let f = faces
                        .faces
                        .iter()
                        .position(|f| f.edges() == *edges)
                        .ok_or_else(|| internal(format!("cycle {c} has no face at node {x}")))?;
                    at_face.insert(f, c);
                }
            }
            if at_face.get(&fa).copied() == ra && at_face.get(&fb).copied() == rb {
                break (faces, at_face);
            }
            if mirrored || kind == NodeKind::S {
                return Err(internal(format!("node {x} places {key:?} on the wrong sides")));
            }
            mirrored = true;
            match kind {
                NodeKind::P => choice.orders[x].reverse(),
                _ => choice.flips[x] = !choice.flips[x],
            }
        };
        let (faces, at_face) = faces;
        for i in t.free_edges(x) {
            let Some(c) = t.child_at(x, i) else { continue };
            let (_, vc) = t.poles(c);
            let down = sk.dart_from(i, node.local(vc).expect("pole in skeleton"));
            let pick = |f: usize| at_face.get(&f).copied().filter(|&cy| d.proj.is_interface(c, cy));
            stack.push((c, pick(faces.face_of(down)), pick(faces.face_of(down.rev()))));
        }
    }
    Ok(choice)
}
