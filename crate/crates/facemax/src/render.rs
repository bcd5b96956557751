//! DOT and SVG renders of an embedding.
//!
//! Positions come from a barycentric layout with the outer face on a circle,
//! which is a straight-line planar drawing for 3-connected graphs and only
//! an approximation otherwise.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use facemax_core::graph::FacePartition;
use facemax_core::{Multigraph, RotationEmbedding, VertexId};

use crate::run::CliError;

const SIZE: f64 = 480.0;
const RADIUS: f64 = 200.0;
const SWEEPS: usize = 2000;

/// Vertex positions in `[0, SIZE]^2`.
pub fn layout(g: &Multigraph, emb: &RotationEmbedding) -> Result<Vec<(f64, f64)>, CliError> {
    let part = FacePartition::compute(g, emb)?;
    let n = g.vertex_count();
    let centre = SIZE / 2.0;
    let mut pos = vec![(centre, centre); n];
    let mut fixed = vec![false; n];
    let outer = match emb.outer_dart() {
        Some(d) => part.face_of(d),
        None => (0..part.faces.len()).max_by_key(|&f| part.faces[f].len()).unwrap_or(0),
    };
    let mut ring: Vec<VertexId> = Vec::new();
    if let Some(face) = part.faces.get(outer) {
        for v in face.vertices(g) {
            if !ring.contains(&v) {
                ring.push(v);
            }
        }
    }
    for (i, &v) in ring.iter().enumerate() {
        let a = TAU * i as f64 / ring.len() as f64;
        pos[v] = (centre + RADIUS * a.cos(), centre - RADIUS * a.sin());
        fixed[v] = true;
    }
    let nbrs: Vec<Vec<VertexId>> = (0..n).map(|v| g.neighbors(v).collect()).collect();
    for _ in 0..SWEEPS {
        let mut moved: f64 = 0.0;
        for v in 0..n {
            if fixed[v] || nbrs[v].is_empty() {
                continue;
            }
            let k = nbrs[v].len() as f64;
            let x = nbrs[v].iter().map(|&w| pos[w].0).sum::<f64>() / k;
            let y = nbrs[v].iter().map(|&w| pos[w].1).sum::<f64>() / k;
            moved = moved.max((x - pos[v].0).abs() + (y - pos[v].1).abs());
            pos[v] = (x, y);
        }
        if moved < 1e-9 {
            break;
        }
    }
    Ok(pos)
}

/// Graphviz source with pinned positions; parallel edges are curved.
pub fn dot(g: &Multigraph, emb: &RotationEmbedding) -> Result<String, CliError> {
    let pos = layout(g, emb)?;
    let mut s = String::new();
    let _ = writeln!(s, "graph embedding {{");
    let _ = writeln!(s, "  layout=neato; splines=curved; node [shape=circle];");
    for v in 0..g.vertex_count() {
        let rot: Vec<String> = emb.rotation_at(v).iter().map(|d| d.edge().to_string()).collect();
        let (x, y) = pos[v];
        let _ = writeln!(
            s,
            "  {v} [pos=\"{:.2},{:.2}!\", rotation=\"{}\"];",
            x / 72.0,
            (SIZE - y) / 72.0,
            rot.join(" ")
        );
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let _ = writeln!(s, "  {u} -- {v} [label=\"e{e}\"];");
    }
    let _ = writeln!(s, "}}");
    Ok(s)
}

/// SVG with one translucent polygon per bounded face.
pub fn svg(g: &Multigraph, emb: &RotationEmbedding) -> Result<String, CliError> {
    let part = FacePartition::compute(g, emb)?;
    let pos = layout(g, emb)?;
    let outer = match emb.outer_dart() {
        Some(d) => part.face_of(d),
        None => (0..part.faces.len()).max_by_key(|&f| part.faces[f].len()).unwrap_or(0),
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">"
    );
    for (f, face) in part.faces.iter().enumerate() {
        if f == outer {
            continue;
        }
        let points: Vec<String> = face
            .vertices(g)
            .iter()
            .map(|&v| format!("{:.2},{:.2}", pos[v].0, pos[v].1))
            .collect();
        let hue = (f * 67) % 360;
        let _ = writeln!(
            s,
            "  <polygon class=\"face\" points=\"{}\" fill=\"hsl({hue},60%,70%)\" fill-opacity=\"0.35\"/>",
            points.join(" ")
        );
    }
    for &(u, v) in g.edges() {
        let _ = writeln!(
            s,
            "  <line class=\"edge\" x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
            pos[u].0, pos[u].1, pos[v].0, pos[v].1
        );
    }
    for (v, &(x, y)) in pos.iter().enumerate() {
        let _ = writeln!(s, "  <circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"9\" fill=\"white\" stroke=\"black\"/>");
        let _ = writeln!(
            s,
            "  <text x=\"{x:.2}\" y=\"{:.2}\" font-size=\"10\" text-anchor=\"middle\">{v}</text>",
            y + 3.5
        );
    }
    let _ = writeln!(s, "</svg>");
    Ok(s)
}
