//! Line-oriented text formats for instances and embeddings.
//!
//! Both formats are versioned by their first non-comment line. `#` starts a
//! comment; blank lines are ignored. Every other line is a keyword followed
//! by whitespace-separated fields. Vertex, edge and cycle ids are 0-based;
//! edge ids follow the order of `edge` lines and cycle ids the order of
//! `cycle` lines.

use std::fmt::Write as _;

use facemax_core::gen::Instance;
use facemax_core::graph::{Cycle, FacePartition};
use facemax_core::{CycleId, CycleSet, EdgeId, Multigraph, RotationEmbedding, Solution, VertexId};

pub const INSTANCE_HEADER: &str = "facemax-instance 1";
pub const EMBEDDING_HEADER: &str = "facemax-embedding 1";

/// A syntax or validation error with its location (1-based line and field).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, field {field}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub field: usize,
    pub message: String,
}

fn err(line: usize, field: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        field,
        message: message.into(),
    }
}

struct Line<'a> {
    number: usize,
    keyword: &'a str,
    rest: &'a str,
    fields: Vec<&'a str>,
}

impl Line<'_> {
    fn number<T: std::str::FromStr>(&self, i: usize, what: &str) -> Result<T, ParseError> {
        let raw = self
            .fields
            .get(i)
            .ok_or_else(|| err(self.number, i + 2, format!("missing {what}")))?;
        raw.parse()
            .map_err(|_| err(self.number, i + 2, format!("expected {what}, got `{raw}`")))
    }

    fn numbers<T: std::str::FromStr>(&self, what: &str) -> Result<Vec<T>, ParseError> {
        (0..self.fields.len()).map(|i| self.number(i, what)).collect()
    }

    fn exact_arity(&self, k: usize) -> Result<(), ParseError> {
        if self.fields.len() > k {
            return Err(err(self.number, k + 2, "unexpected extra field"));
        }
        Ok(())
    }
}

/// Splits into content lines and checks the header.
fn lines<'a>(text: &'a str, header: &str) -> Result<Vec<Line<'a>>, ParseError> {
    let mut out = Vec::new();
    let mut seen_header = false;
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if !seen_header {
            if content.split_whitespace().collect::<Vec<_>>() != header.split_whitespace().collect::<Vec<_>>() {
                return Err(err(i + 1, 1, format!("expected header `{header}`, got `{content}`")));
            }
            seen_header = true;
            continue;
        }
        let (keyword, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
        out.push(Line {
            number: i + 1,
            keyword,
            rest: rest.trim(),
            fields: rest.split_whitespace().collect(),
        });
    }
    if !seen_header {
        return Err(err(1, 1, format!("missing header `{header}`")));
    }
    Ok(out)
}

fn set_once<T>(slot: &mut Option<T>, value: T, line: &Line) -> Result<(), ParseError> {
    if slot.is_some() {
        return Err(err(line.number, 1, format!("duplicate `{}` line", line.keyword)));
    }
    *slot = Some(value);
    Ok(())
}

enum CycleSpec {
    Vertices(Vec<VertexId>),
    Edges(Vec<EdgeId>),
}

/// Parses an instance file into a validated instance.
pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut name = None;
    let mut source = None;
    let mut optimum = None;
    let mut seed = None;
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    let mut edge_lines = Vec::new();
    let mut cycles = Vec::new();
    for line in lines(text, INSTANCE_HEADER)? {
        match line.keyword {
            "name" => set_once(&mut name, line.rest.to_string(), &line)?,
            "source" => set_once(&mut source, line.rest.to_string(), &line)?,
            "optimum" => {
                line.exact_arity(1)?;
                set_once(&mut optimum, line.number(0, "optimum")?, &line)?
            }
            "seed" => {
                line.exact_arity(1)?;
                set_once(&mut seed, line.number(0, "seed")?, &line)?
            }
            "vertices" => {
                line.exact_arity(1)?;
                if !edges.is_empty() || !cycles.is_empty() {
                    return Err(err(line.number, 1, "`vertices` must precede edges and cycles"));
                }
                set_once(&mut n, line.number(0, "vertex count")?, &line)?
            }
            "edge" => {
                line.exact_arity(2)?;
                let count = n.ok_or_else(|| err(line.number, 1, "`edge` before `vertices`"))?;
                let (u, v): (usize, usize) = (line.number(0, "vertex id")?, line.number(1, "vertex id")?);
                for (i, x) in [u, v].into_iter().enumerate() {
                    if x >= count {
                        return Err(err(line.number, i + 2, format!("vertex {x} out of range (n = {count})")));
                    }
                }
                if u == v {
                    return Err(err(line.number, 2, format!("self-loop at vertex {u}")));
                }
                edges.push((u, v));
                edge_lines.push(line.number);
            }
            "cycle" => {
                n.ok_or_else(|| err(line.number, 1, "`cycle` before `vertices`"))?;
                cycles.push((line.number, CycleSpec::Vertices(line.numbers("vertex id")?)));
            }
            "cycle-edges" => {
                n.ok_or_else(|| err(line.number, 1, "`cycle-edges` before `vertices`"))?;
                cycles.push((line.number, CycleSpec::Edges(line.numbers("edge id")?)));
            }
            other => return Err(err(line.number, 1, format!("unknown keyword `{other}`"))),
        }
    }
    let n = n.ok_or_else(|| err(1, 1, "missing `vertices` line"))?;
    let graph = Multigraph::new(n, &edges).map_err(|e| err(edge_lines.first().copied().unwrap_or(1), 1, e.to_string()))?;
    let mut built = Vec::with_capacity(cycles.len());
    for (number, spec) in &cycles {
        let cycle = match spec {
            CycleSpec::Vertices(vs) => Cycle::from_vertices(&graph, vs),
            CycleSpec::Edges(es) => match es.iter().find(|&&e| e >= graph.edge_count()) {
                Some(e) => return Err(err(*number, 2, format!("edge {e} out of range (m = {})", graph.edge_count()))),
                None => Cycle::from_edges(&graph, es),
            },
        };
        built.push(cycle.map_err(|e| err(*number, 2, e.to_string()))?);
    }
    let cycles_set = CycleSet::from_cycles(built).map_err(|e| match e {
        facemax_core::Error::DuplicateCycle { second, .. } => err(cycles[second].0, 2, e.to_string()),
        other => err(1, 1, other.to_string()),
    })?;
    Ok(Instance {
        graph,
        cycles: cycles_set,
        name: name.unwrap_or_default(),
        source: source.unwrap_or_default(),
        optimum,
        seed,
    })
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

/// Serializes an instance. Cycles whose vertex sequence would pick a
/// different parallel edge are written by edge ids.
pub fn write_instance(inst: &Instance) -> String {
    let g = &inst.graph;
    let mut s = String::new();
    let _ = writeln!(s, "{INSTANCE_HEADER}");
    if !inst.name.is_empty() {
        let _ = writeln!(s, "name {}", inst.name);
    }
    if !inst.source.is_empty() {
        let _ = writeln!(s, "source {}", inst.source);
    }
    if let Some(o) = inst.optimum {
        let _ = writeln!(s, "optimum {o}");
    }
    if let Some(seed) = inst.seed {
        let _ = writeln!(s, "seed {seed}");
    }
    let _ = writeln!(s, "vertices {}", g.vertex_count());
    for &(u, v) in g.edges() {
        let _ = writeln!(s, "edge {u} {v}");
    }
    for c in inst.cycles.cycles() {
        let by_vertices = Cycle::from_vertices(g, c.vertices()).map(|d| d.edge_set() == c.edge_set());
        if by_vertices == Ok(true) {
            let _ = writeln!(s, "cycle {}", join(c.vertices()));
        } else {
            let _ = writeln!(s, "cycle-edges {}", join(c.edges()));
        }
    }
    s
}

/// Solver metadata carried by an embedding file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Metadata {
    pub mode: String,
    pub method: String,
    pub provenance: String,
    pub factor: String,
    pub runtime_ms: u64,
}

/// An embedding with the cycles it claims to realize.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EmbeddingFile {
    /// Clockwise edge ids around each vertex.
    pub rotation: Vec<Vec<EdgeId>>,
    /// Edge ids along the outer face walk.
    pub outer: Vec<EdgeId>,
    pub count: usize,
    /// Realized cycle ids, ascending.
    pub realized: Vec<CycleId>,
    pub meta: Metadata,
}

impl EmbeddingFile {
    pub fn new(g: &Multigraph, emb: &RotationEmbedding, realized: Vec<CycleId>, meta: Metadata) -> EmbeddingFile {
        let rotation = emb
            .rotation()
            .iter()
            .map(|r| r.iter().map(|d| d.edge()).collect())
            .collect();
        let outer = FacePartition::compute(g, emb)
            .ok()
            .and_then(|part| {
                let f = match emb.outer_dart() {
                    Some(d) => part.face_of(d),
                    // longest face, first on ties
                    None => (0..part.faces.len())
                        .rev()
                        .max_by_key(|&f| part.faces[f].len())
                        .unwrap_or(0),
                };
                part.faces.get(f).map(|face| face.darts().iter().map(|d| d.edge()).collect())
            })
            .unwrap_or_default();
        EmbeddingFile {
            rotation,
            outer,
            count: realized.len(),
            realized,
            meta,
        }
    }

    pub fn from_solution(g: &Multigraph, sol: &Solution, mode: &str, runtime_ms: u64) -> EmbeddingFile {
        let meta = Metadata {
            mode: mode.to_string(),
            method: sol.method.name().to_string(),
            provenance: sol.method.provenance().to_string(),
            factor: sol.guarantee.to_string(),
            runtime_ms,
        };
        Self::new(g, &sol.embedding, sol.realized.clone(), meta)
    }

    /// The rotation system over `g`'s darts; the outer face is set when the
    /// `outer` walk matches a face.
    pub fn embedding(&self, g: &Multigraph) -> Result<RotationEmbedding, String> {
        if self.rotation.len() != g.vertex_count() {
            return Err(format!(
                "rotation lists {} vertices, instance has {}",
                self.rotation.len(),
                g.vertex_count()
            ));
        }
        let mut rotation = Vec::with_capacity(self.rotation.len());
        for (v, edges) in self.rotation.iter().enumerate() {
            let mut darts = Vec::with_capacity(edges.len());
            for &e in edges {
                if e >= g.edge_count() {
                    return Err(format!("edge {e} at vertex {v} out of range (m = {})", g.edge_count()));
                }
                let (a, b) = g.endpoints(e);
                if a != v && b != v {
                    return Err(format!("edge {e} listed at vertex {v} is not incident to it"));
                }
                darts.push(g.dart_from(e, v));
            }
            rotation.push(darts);
        }
        let emb = RotationEmbedding::new(rotation);
        let part = FacePartition::compute(g, &emb).map_err(|e| e.to_string())?;
        let mut want = self.outer.clone();
        want.sort_unstable();
        match part.faces.iter().find(|f| f.edges() == want) {
            Some(f) if !f.is_empty() => Ok(emb.with_outer(f.darts()[0])),
            _ if self.outer.is_empty() && g.edge_count() == 0 => Ok(emb),
            _ => Err(format!("outer walk [{}] is not a face", join(&self.outer))),
        }
    }

    /// The graph implied by the rotation: every edge id must occur at
    /// exactly two distinct vertices.
    pub fn graph(&self) -> Result<Multigraph, String> {
        let mut ends: Vec<Vec<VertexId>> = Vec::new();
        for (v, edges) in self.rotation.iter().enumerate() {
            for &e in edges {
                if e >= ends.len() {
                    ends.resize(e + 1, Vec::new());
                }
                ends[e].push(v);
            }
        }
        let mut edges = Vec::with_capacity(ends.len());
        for (e, vs) in ends.iter().enumerate() {
            match vs.as_slice() {
                [a, b] if a != b => edges.push((*a, *b)),
                _ => return Err(format!("edge {e} occurs at vertices [{}], expected two", join(vs))),
            }
        }
        Multigraph::new(self.rotation.len(), &edges).map_err(|e| e.to_string())
    }

    /// Recomputes the realized cycles and compares them with the claim.
    /// On mismatch returns one line per discrepancy.
    pub fn check(&self, g: &Multigraph, cycles: &CycleSet) -> Result<Vec<CycleId>, Vec<String>> {
        let emb = self.embedding(g).map_err(|e| vec![e])?;
        let actual = cycles.facial_ids(g, &emb).map_err(|e| vec![e.to_string()])?;
        let mut diff = Vec::new();
        if let Some(&c) = self.realized.iter().find(|&&c| c >= cycles.len()) {
            diff.push(format!("claimed cycle {c} does not exist ({} cycles)", cycles.len()));
        }
        let missing: Vec<_> = self.realized.iter().filter(|c| !actual.contains(c)).copied().collect();
        let extra: Vec<_> = actual.iter().filter(|c| !self.realized.contains(c)).copied().collect();
        if !missing.is_empty() {
            diff.push(format!("claimed but not facial: {}", join(&missing)));
        }
        if !extra.is_empty() {
            diff.push(format!("facial but not claimed: {}", join(&extra)));
        }
        if self.count != self.realized.len() || self.count != actual.len() {
            diff.push(format!(
                "count {} disagrees: {} ids claimed, {} facial",
                self.count,
                self.realized.len(),
                actual.len()
            ));
        }
        if diff.is_empty() {
            Ok(actual)
        } else {
            Err(diff)
        }
    }

    pub fn write(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{EMBEDDING_HEADER}");
        let m = &self.meta;
        for (key, value) in [("mode", &m.mode), ("method", &m.method), ("provenance", &m.provenance), ("factor", &m.factor)] {
            if !value.is_empty() {
                let _ = writeln!(s, "{key} {value}");
            }
        }
        let _ = writeln!(s, "runtime-ms {}", m.runtime_ms);
        let _ = writeln!(s, "vertices {}", self.rotation.len());
        for (v, r) in self.rotation.iter().enumerate() {
            let _ = writeln!(s, "rotation {v} {}", join(r));
        }
        let _ = writeln!(s, "outer {}", join(&self.outer));
        let _ = writeln!(s, "count {}", self.count);
        let _ = writeln!(s, "realized {}", join(&self.realized));
        s.lines().map(|l| format!("{}\n", l.trim_end())).collect()
    }

    pub fn parse(text: &str) -> Result<EmbeddingFile, ParseError> {
        let mut out = EmbeddingFile::default();
        let mut n: Option<usize> = None;
        let mut listed: Vec<bool> = Vec::new();
        let (mut count, mut outer, mut realized, mut runtime) = (None, None, None, None);
        let (mut mode, mut method, mut provenance, mut factor) = (None, None, None, None);
        for line in lines(text, EMBEDDING_HEADER)? {
            match line.keyword {
                "mode" => set_once(&mut mode, line.rest.to_string(), &line)?,
                "method" => set_once(&mut method, line.rest.to_string(), &line)?,
                "provenance" => set_once(&mut provenance, line.rest.to_string(), &line)?,
                "factor" => set_once(&mut factor, line.rest.to_string(), &line)?,
                "runtime-ms" => {
                    line.exact_arity(1)?;
                    set_once(&mut runtime, line.number(0, "milliseconds")?, &line)?
                }
                "vertices" => {
                    line.exact_arity(1)?;
                    let k: usize = line.number(0, "vertex count")?;
                    set_once(&mut n, k, &line)?;
                    out.rotation = vec![Vec::new(); k];
                    listed = vec![false; k];
                }
                "rotation" => {
                    let k = n.ok_or_else(|| err(line.number, 1, "`rotation` before `vertices`"))?;
                    let v: usize = line.number(0, "vertex id")?;
                    if v >= k {
                        return Err(err(line.number, 2, format!("vertex {v} out of range (n = {k})")));
                    }
                    if std::mem::replace(&mut listed[v], true) {
                        return Err(err(line.number, 2, format!("rotation of vertex {v} given twice")));
                    }
                    out.rotation[v] = (1..line.fields.len())
                        .map(|i| line.number(i, "edge id"))
                        .collect::<Result<_, _>>()?;
                }
                "outer" => set_once(&mut outer, line.numbers("edge id")?, &line)?,
                "count" => {
                    line.exact_arity(1)?;
                    set_once(&mut count, line.number(0, "count")?, &line)?
                }
                "realized" => set_once(&mut realized, line.numbers("cycle id")?, &line)?,
                other => return Err(err(line.number, 1, format!("unknown keyword `{other}`"))),
            }
        }
        if n.is_none() {
            return Err(err(1, 1, "missing `vertices` line"));
        }
        if let Some(v) = listed.iter().position(|l| !l) {
            return Err(err(1, 1, format!("missing rotation of vertex {v}")));
        }
        out.outer = outer.unwrap_or_default();
        out.realized = realized.unwrap_or_default();
        out.count = count.ok_or_else(|| err(1, 1, "missing `count` line"))?;
        out.meta = Metadata {
            mode: mode.unwrap_or_default(),
            method: method.unwrap_or_default(),
            provenance: provenance.unwrap_or_default(),
            factor: factor.unwrap_or_default(),
            runtime_ms: runtime.unwrap_or(0),
        };
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use facemax_core::gen;

    #[test]
    fn instance_round_trip() {
        let inst = gen::from_mis(&gen::k4()).unwrap();
        let text = write_instance(&inst);
        let back = parse_instance(&text).unwrap();
        assert_eq!(back.graph, inst.graph);
        assert_eq!(back.cycles.cycles(), inst.cycles.cycles());
        assert_eq!(back.optimum, inst.optimum);
        assert_eq!(write_instance(&back), text);
    }

    #[test]
    fn parse_errors_have_locations() {
        let e = parse_instance("facemax-instance 1\nvertices 3\nedge 0 x\n").unwrap_err();
        assert_eq!((e.line, e.field), (3, 3));
        let e = parse_instance("facemax-instance 1\nvertices 3\nedge 0 1\nedge 1 2\nedge 2 0\ncycle 0 1\n").unwrap_err();
        assert_eq!(e.line, 6);
        let e = parse_instance("nonsense\n").unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_instance("# c\n\nfacemax-instance 1\nvertices 2\nedge 0 5\n").unwrap_err();
        assert_eq!((e.line, e.field), (5, 3));
    }

    #[test]
    fn embedding_round_trip() {
        let g = gen::k4();
        let emb = facemax_core::planar_embed(&g).unwrap();
        let f = EmbeddingFile::new(&g, &emb, vec![], Metadata::default());
        let back = EmbeddingFile::parse(&f.write()).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.graph().unwrap().edge_count(), 6);
        assert!(back.embedding(&g).is_ok());
    }
}
