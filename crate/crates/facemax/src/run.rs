//! Command implementations. Each returns the process exit code.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use facemax_core::gen::{self, CyclePolicy, Family, Instance};
use facemax_core::exact::Decomposed;
use facemax_core::graph::Cycle;
use facemax_core::spqr::NodeKind;
use facemax_core::oracle::{brute_opt_with_budget, DEFAULT_BUDGET};
use facemax_core::{
    approximate, check_all_facial, planar_embed, solve_exact, solve_sp_fpt, solve_sp_two_shared, CycleSet, Error,
    Multigraph, Solution,
};

use crate::format::{parse_instance, write_instance, EmbeddingFile, Metadata, ParseError};
use crate::render;

/// Most relevant cycles at a P-node for which `auto` runs subset
/// enumeration there.
pub const AUTO_FPT_LIMIT: usize = 20;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Precondition(String),
    #[error("{0}")]
    Budget(String),
    #[error("verification failed:\n{0}")]
    Mismatch(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Usage(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Budget(_) => 4,
            CliError::Mismatch(_) => 5,
            CliError::Io(_) | CliError::Internal(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        match e {
            Error::BudgetExceeded(_) | Error::Overflow => CliError::Budget(e.to_string()),
            Error::PreconditionViolated(_)
            | Error::HasRNode
            | Error::NotPlanar
            | Error::NotBiconnected
            | Error::Disconnected
            | Error::NotCubic
            | Error::Not3Connected => CliError::Precondition(e.to_string()),
            Error::UnknownName(_) => CliError::Usage(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Auto,
    Exact,
    SpFpt,
    SpTwoShared,
    Approx,
    Oracle,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Auto => "auto",
            Mode::Exact => "exact",
            Mode::SpFpt => "sp-fpt",
            Mode::SpTwoShared => "sp-two-shared",
            Mode::Approx => "approx",
            Mode::Oracle => "oracle",
        }
    }

    pub const ALL: [Mode; 6] = [Mode::Auto, Mode::Exact, Mode::SpFpt, Mode::SpTwoShared, Mode::Approx, Mode::Oracle];
}

#[derive(Copy, Clone, Debug)]
pub struct SolveOptions {
    pub mode: Mode,
    pub epsilon: f64,
    pub budget: u64,
    /// Heavy-neighbor bound for `sp-fpt`; defaults to the instance's.
    pub r: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> SolveOptions {
        SolveOptions {
            mode: Mode::Auto,
            epsilon: facemax_core::approx::DEFAULT_EPS,
            budget: DEFAULT_BUDGET,
            r: None,
        }
    }
}

/// Largest number of relevant cycles at a P-node; `None` with an R-node.
fn p_node_load(g: &Multigraph, cycles: &CycleSet) -> Result<Option<usize>, Error> {
    let d = Decomposed::new(g, cycles)?;
    if d.has_r_node() {
        return Ok(None);
    }
    let t = &d.tree;
    Ok(Some(
        (0..t.node_count())
            .filter(|&x| t.kind(x) == NodeKind::P)
            .map(|x| d.proj.relevant(x).len())
            .max()
            .unwrap_or(0),
    ))
}

fn skippable(e: &Error) -> bool {
    matches!(e, Error::PreconditionViolated(_) | Error::HasRNode)
}

/// Runs the requested solver. `auto` tries the exact methods in order of
/// their hypotheses and falls back to the approximation.
pub fn solve(g: &Multigraph, cycles: &CycleSet, opts: &SolveOptions) -> Result<Solution, CliError> {
    let r = opts.r.unwrap_or_else(|| cycles.max_heavy_degree());
    let out = match opts.mode {
        Mode::Exact => solve_exact(g, cycles),
        Mode::SpFpt => solve_sp_fpt(g, cycles, r),
        Mode::SpTwoShared => solve_sp_two_shared(g, cycles),
        Mode::Approx => approximate(g, cycles, opts.epsilon),
        Mode::Oracle => brute_opt_with_budget(g, cycles, opts.budget),
        Mode::Auto => {
            let mut attempt = solve_sp_two_shared(g, cycles);
            if matches!(&attempt, Err(e) if skippable(e)) && p_node_load(g, cycles)?.is_some_and(|k| k <= AUTO_FPT_LIMIT) {
                attempt = solve_sp_fpt(g, cycles, r);
            }
            if matches!(&attempt, Err(e) if skippable(e)) {
                attempt = solve_exact(g, cycles);
            }
            if matches!(&attempt, Err(e) if skippable(e)) {
                attempt = approximate(g, cycles, opts.epsilon);
            }
            attempt
        }
    };
    Ok(out?)
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn load_instance(path: &Path) -> Result<Instance, CliError> {
    parse_instance(&read(path)?).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_embedding(path: &Path) -> Result<EmbeddingFile, CliError> {
    EmbeddingFile::parse(&read(path)?).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}

/// Writes to `path`, or to stdout when it is absent or `-`.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))
        }
        _ => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

pub fn cmd_solve(input: &Path, opts: &SolveOptions, output: Option<&Path>) -> Result<i32, CliError> {
    let inst = load_instance(input)?;
    let start = Instant::now();
    let sol = solve(&inst.graph, &inst.cycles, opts)?;
    let ms = start.elapsed().as_millis() as u64;
    println!("count: {}", sol.count);
    println!("cycles: {}", inst.cycles.len());
    println!("factor: {}", sol.guarantee);
    println!("provenance: {}", sol.method.provenance());
    println!("method: {}", sol.method.name());
    println!("runtime-ms: {ms}");
    if let Some(path) = output {
        let file = EmbeddingFile::from_solution(&inst.graph, &sol, opts.mode.name(), ms);
        emit(Some(path), &file.write())?;
    }
    Ok(0)
}

pub fn cmd_verify(instance: &Path, embedding: &Path) -> Result<i32, CliError> {
    let inst = load_instance(instance)?;
    let file = load_embedding(embedding)?;
    match file.check(&inst.graph, &inst.cycles) {
        Ok(ids) => {
            println!("ok: {} of {} cycles facial, claim matches", ids.len(), inst.cycles.len());
            Ok(0)
        }
        Err(diff) => Err(CliError::Mismatch(
            diff.iter().map(|d| format!("  - {d}")).collect::<Vec<_>>().join("\n"),
        )),
    }
}

pub fn cmd_feasible(input: &Path, output: Option<&Path>) -> Result<i32, CliError> {
    let inst = load_instance(input)?;
    let all: Vec<usize> = (0..inst.cycles.len()).collect();
    match check_all_facial(&inst.graph, &inst.cycles, &all)? {
        Some(witness) => {
            println!("feasible: yes ({} cycles)", all.len());
            if let Some(path) = output {
                let meta = Metadata {
                    mode: "feasible".to_string(),
                    ..Metadata::default()
                };
                emit(Some(path), &EmbeddingFile::new(&inst.graph, &witness, all, meta).write())?;
            }
            Ok(0)
        }
        None => {
            println!("feasible: no");
            Ok(1)
        }
    }
}

/// What `gen` builds.
#[derive(Clone, Debug, clap::Subcommand)]
pub enum GenSpec {
    /// Reduction from independent set on a cubic 3-connected planar graph.
    Mis { graph: String },
    /// Reduction from Hamiltonian cycle on a cubic planar graph.
    Hamiltonian { graph: String },
    /// k internally disjoint paths of `len` edges with every pair as a cycle.
    Theta {
        k: usize,
        #[arg(long, default_value_t = 2)]
        len: usize,
    },
    /// A named graph with the faces of one planar embedding as cycles.
    Faces { graph: String },
    /// Seeded random instance.
    Random {
        /// series_parallel, triconnected or mixed
        family: String,
        #[arg(long, default_value_t = 10)]
        n: usize,
        /// faces_of_random_embedding, random_simple_cycles, condition_thm5,
        /// condition_thm6 or condition_fpt_<r>
        #[arg(long, default_value = "condition_thm5")]
        policy: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

pub fn theta_pairs(k: usize, len: usize) -> Result<Instance, CliError> {
    if k < 2 || len < 2 {
        return Err(CliError::Usage("theta needs k >= 2 paths of length >= 2".into()));
    }
    let graph = gen::theta(k, len);
    let path = |i: usize| -> Vec<usize> { (0..len - 1).map(|j| 2 + i * (len - 1) + j).collect() };
    let mut seqs = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            let mut c = vec![0];
            c.extend(path(a));
            c.push(1);
            c.extend(path(b).into_iter().rev());
            seqs.push(c);
        }
    }
    let cycles = CycleSet::validate(&graph, &seqs)?;
    Ok(Instance {
        graph,
        cycles,
        name: format!("theta_{k}_{len}"),
        source: "all pairs of theta paths".to_string(),
        optimum: None,
        seed: None,
    })
}

fn faces_instance(name: &str) -> Result<Instance, CliError> {
    let graph = gen::named(name)?;
    let emb = planar_embed(&graph)?;
    let faces = facemax_core::graph::trace_faces(&graph, &emb)?;
    // a cycle graph has two faces with one edge set
    let mut sets: Vec<Vec<usize>> = faces.iter().map(|f| f.edges()).collect();
    sets.dedup();
    let cycles = sets
        .iter()
        .map(|s| Cycle::from_edges(&graph, s))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Instance {
        graph,
        optimum: Some(cycles.len()),
        cycles: CycleSet::from_cycles(cycles)?,
        name: format!("{name}_faces"),
        source: "faces of one planar embedding".to_string(),
        seed: None,
    })
}

pub fn generate(spec: &GenSpec) -> Result<Instance, CliError> {
    match spec {
        GenSpec::Mis { graph } => Ok(gen::from_mis(&gen::named(graph)?)?),
        GenSpec::Hamiltonian { graph } => Ok(gen::from_hamiltonian(&gen::named(graph)?)?),
        GenSpec::Theta { k, len } => theta_pairs(*k, *len),
        GenSpec::Faces { graph } => faces_instance(graph),
        GenSpec::Random { family, n, policy, seed } => {
            let family = Family::parse(family).map_err(|e| CliError::Usage(e.to_string()))?;
            let policy = CyclePolicy::parse(policy).map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(gen::random_instance(family, *n, policy, *seed))
        }
    }
}

pub fn cmd_gen(spec: &GenSpec, output: Option<&Path>) -> Result<i32, CliError> {
    emit(output, &write_instance(&generate(spec)?))?;
    Ok(0)
}

/// Instance files (`*.inst`) of a corpus directory, sorted by name.
pub fn corpus(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "inst"))
        .collect();
    files.sort();
    Ok(files)
}

pub fn cmd_bench(dir: &Path, modes: &[Mode], opts: &SolveOptions, output: Option<&Path>) -> Result<i32, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header = ["instance", "n", "m", "cycles", "mode", "method", "value", "oracle", "ratio", "ms", "status"];
    w.write_record(header).map_err(|e| CliError::Io(e.to_string()))?;
    for path in corpus(dir)? {
        let inst = load_instance(&path)?;
        let oracle = brute_opt_with_budget(&inst.graph, &inst.cycles, opts.budget).ok().map(|s| s.count);
        let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        for &mode in modes {
            let start = Instant::now();
            let result = solve(&inst.graph, &inst.cycles, &SolveOptions { mode, ..*opts });
            let ms = start.elapsed().as_secs_f64() * 1e3;
            let (method, value, status) = match &result {
                Ok(s) => (s.method.name().to_string(), s.count.to_string(), "ok".to_string()),
                Err(e) => (String::new(), String::new(), format!("exit {}", e.exit_code())),
            };
            let ratio = match (&result, oracle) {
                (Ok(s), Some(0)) if s.count == 0 => "1".to_string(),
                (Ok(s), Some(o)) if o > 0 => format!("{:.4}", s.count as f64 / o as f64),
                _ => String::new(),
            };
            let row = [
                name.clone(),
                inst.graph.vertex_count().to_string(),
                inst.graph.edge_count().to_string(),
                inst.cycles.len().to_string(),
                mode.name().to_string(),
                method,
                value,
                oracle.map(|o| o.to_string()).unwrap_or_default(),
                ratio,
                format!("{ms:.3}"),
                status,
            ];
            w.write_record(&row).map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    emit(output, &String::from_utf8_lossy(&bytes))?;
    Ok(0)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Dot,
    Svg,
    Csv,
}

pub fn cmd_render(embedding: &Path, format: Format, output: Option<&Path>) -> Result<i32, CliError> {
    let file = load_embedding(embedding)?;
    let g = file.graph().map_err(CliError::Mismatch)?;
    let emb = file.embedding(&g).map_err(CliError::Mismatch)?;
    let text = match format {
        Format::Dot => render::dot(&g, &emb)?,
        Format::Svg => render::svg(&g, &emb)?,
        other => return Err(CliError::Usage(format!("render supports dot and svg, not {other:?}"))),
    };
    emit(output, &text)?;
    Ok(0)
}
