//! Acceptance suite: one PASS/FAIL line per criterion.

use std::cell::RefCell;
use std::time::Instant;

use facemax_core::approx::{approx_rows, DEFAULT_EPS};
use facemax_core::cycles::{interface_choices, Projections};
use facemax_core::exact::{exact_table, Decomposed};
use facemax_core::gen::{self, random_instance, CyclePolicy, Family, Instance};
use facemax_core::graph::FacePartition;
use facemax_core::matching::max_matching;
use facemax_core::mis::{is_independent, mis_planar};
use facemax_core::oracle::{brute_feasible_observed, brute_opt_observed, brute_table};
use facemax_core::table::Score;
use facemax_core::{
    approximate, check_all_facial, solve_exact, solve_sp_fpt, solve_sp_two_shared, CycleSet, Error, Multigraph,
    RootedTree, RotationEmbedding, Solution,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORACLE_BUDGET: u64 = 1_000_000;

/// Embeddings seen by the oracle, with Observation 2 and Euler violations.
#[derive(Default)]
struct Audit {
    embeddings: u64,
    interface_violations: u64,
    euler_violations: u64,
}

thread_local! {
    static AUDIT: RefCell<Audit> = RefCell::new(Audit::default());
}

fn audited_opt(inst: &Instance) -> Result<Solution, Error> {
    let mut proj: Option<Projections> = None;
    let g = &inst.graph;
    let mut obs = |tree: &RootedTree, emb: &RotationEmbedding, facial: &[usize]| {
        let p = proj.get_or_insert_with(|| Projections::compute(tree, &inst.cycles));
        let faces = FacePartition::compute(g, emb).map(|f| f.faces.len()).unwrap_or(0);
        AUDIT.with(|a| {
            let mut a = a.borrow_mut();
            a.embeddings += 1;
            if faces + g.vertex_count() != g.edge_count() + 2 {
                a.euler_violations += 1;
            }
            for x in 0..tree.node_count() {
                if x == tree.root() {
                    continue;
                }
                let k = p.interface(x).iter().filter(|c| facial.binary_search(c).is_ok()).count();
                if k > 2 {
                    a.interface_violations += 1;
                }
            }
        });
    };
    brute_opt_observed(g, &inst.cycles, ORACLE_BUDGET, Some(&mut obs))
}

fn verifies(inst: &Instance, s: &Solution) -> bool {
    FacePartition::compute(&inst.graph, &s.embedding).is_ok()
        && inst.cycles.facial_ids(&inst.graph, &s.embedding).ok().as_ref() == Some(&s.realized)
        && s.count == s.realized.len()
}

struct Report {
    all_passed: bool,
}

impl Report {
    fn line(&mut self, id: usize, name: &str, pass: bool, detail: String, start: Instant) {
        self.all_passed &= pass;
        println!(
            "criterion {id:>2} [{}] {name}: {detail} ({:.1}s)",
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
}

/// Seeded instances whose oracle optimum fits the budget, with their optima.
fn corpus(count: usize, seed0: u64, mut make: impl FnMut(u64) -> Instance) -> (Vec<(Instance, usize)>, usize) {
    let mut out = Vec::new();
    let mut skipped = 0;
    let mut seed = seed0;
    while out.len() < count {
        let inst = make(seed);
        seed += 1;
        match audited_opt(&inst) {
            Ok(s) => out.push((inst, s.count)),
            Err(Error::BudgetExceeded(_)) => skipped += 1,
            Err(e) => panic!("oracle failed on seed {}: {e}", seed - 1),
        }
    }
    (out, skipped)
}

fn sp_thm6(seed: u64) -> Instance {
    random_instance(Family::SeriesParallel, 6 + (seed % 25) as usize, CyclePolicy::ConditionThm6, seed)
}

fn sp_fpt(seed: u64) -> Instance {
    let r = 1 + (seed % 3) as usize;
    random_instance(Family::SeriesParallel, 6 + (seed % 19) as usize, CyclePolicy::ConditionFpt(r), seed)
}

fn general_thm5(seed: u64) -> Instance {
    let family = if seed.is_multiple_of(4) { Family::Triconnected } else { Family::Mixed };
    random_instance(family, 6 + (seed % 15) as usize, CyclePolicy::ConditionThm5, seed)
}

fn fpt_r(inst: &Instance) -> usize {
    inst.cycles.max_heavy_degree()
}

fn brute_matching(n: usize, edges: &[(usize, usize)]) -> usize {
    fn go(v: usize, n: usize, adj: &[Vec<usize>], used: &mut [bool]) -> usize {
        if v == n {
            return 0;
        }
        if used[v] {
            return go(v + 1, n, adj, used);
        }
        used[v] = true;
        let mut best = go(v + 1, n, adj, used);
        for &w in &adj[v] {
            if !used[w] {
                used[w] = true;
                best = best.max(1 + go(v + 1, n, adj, used));
                used[w] = false;
            }
        }
        used[v] = false;
        best
    }
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    go(0, n, &adj, &mut vec![false; n])
}

fn brute_mis(g: &Multigraph) -> usize {
    fn go(v: usize, g: &Multigraph, taken: &mut Vec<bool>) -> usize {
        if v == g.vertex_count() {
            return 0;
        }
        let skip = go(v + 1, g, taken);
        if g.neighbors(v).any(|w| taken[w]) {
            return skip;
        }
        taken[v] = true;
        let take = 1 + go(v + 1, g, taken);
        taken[v] = false;
        skip.max(take)
    }
    go(0, g, &mut vec![false; g.vertex_count()])
}

fn theta_pairs(k: usize) -> Instance {
    let g = gen::theta(k, 2);
    let mut seqs = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            seqs.push(vec![0, 2 + a, 1, 2 + b]);
        }
    }
    let cycles = CycleSet::validate(&g, &seqs).expect("pair cycles");
    Instance {
        graph: g,
        cycles,
        name: format!("theta_{k}_pairs"),
        source: String::new(),
        optimum: None,
        seed: None,
    }
}

fn main() {
    let mut report = Report { all_passed: true };

    // 1
    let t = Instant::now();
    let (c1, skipped1) = corpus(200, 1_000, sp_thm6);
    let mut bad = Vec::new();
    for (inst, opt) in &c1 {
        match solve_sp_two_shared(&inst.graph, &inst.cycles) {
            Ok(s) if s.count == *opt && verifies(inst, &s) => {}
            other => bad.push(format!("seed {:?}: {:?} vs {opt}", inst.seed, other.map(|s| s.count))),
        }
    }
    report.line(
        1,
        "two-shared solver equals oracle",
        bad.is_empty(),
        format!("{} instances, {} over budget skipped, mismatches {:?}", c1.len(), skipped1, bad),
        t,
    );

    // 2
    let t = Instant::now();
    let (c2, skipped2) = corpus(100, 2_000, sp_fpt);
    let mut bad = Vec::new();
    for (inst, opt) in &c2 {
        match solve_sp_fpt(&inst.graph, &inst.cycles, fpt_r(inst)) {
            Ok(s) if s.count == *opt && verifies(inst, &s) => {}
            other => bad.push(format!("seed {:?}: {:?} vs {opt}", inst.seed, other.map(|s| s.count))),
        }
    }
    report.line(
        2,
        "sp-fpt solver equals oracle",
        bad.is_empty(),
        format!("{} instances, {} over budget skipped, mismatches {:?}", c2.len(), skipped2, bad),
        t,
    );

    // 3
    let t = Instant::now();
    let (c3, skipped3) = corpus(100, 3_000, general_thm5);
    let mut bad = Vec::new();
    let mut with_r = 0;
    for (inst, opt) in &c3 {
        if Decomposed::new(&inst.graph, &inst.cycles).unwrap().has_r_node() {
            with_r += 1;
        }
        match solve_exact(&inst.graph, &inst.cycles) {
            Ok(s) if s.count == *opt && verifies(inst, &s) => {}
            other => bad.push(format!("seed {:?}: {:?} vs {opt}", inst.seed, other.map(|s| s.count))),
        }
    }
    report.line(
        3,
        "exact solver equals oracle",
        bad.is_empty(),
        format!(
            "{} instances ({} with R-nodes), {} over budget skipped, mismatches {:?}",
            c3.len(),
            with_r,
            skipped3,
            bad
        ),
        t,
    );

    // 4
    let t = Instant::now();
    let mut entries = 0;
    let mut neg = 0;
    let mut bad = Vec::new();
    for (inst, _) in c3.iter().take(25) {
        let d = Decomposed::new(&inst.graph, &inst.cycles).unwrap();
        let rows = exact_table(&d).unwrap();
        for x in 0..d.tree.node_count() {
            if x == d.tree.root() {
                continue;
            }
            for i in interface_choices(&d.interface(x)) {
                let brute = brute_table(&d.tree, &inst.cycles, x, &i, ORACLE_BUDGET).unwrap();
                entries += 1;
                if brute == Score::NegInf {
                    neg += 1;
                }
                if rows[x].value(&i) != brute {
                    bad.push(format!("seed {:?} node {x} I={i:?}: {} vs {brute}", inst.seed, rows[x].value(&i)));
                }
            }
        }
    }
    report.line(
        4,
        "per-node table audit",
        bad.is_empty(),
        format!("{entries} entries ({neg} infeasible), mismatches {:?}", bad),
        t,
    );

    // 5
    let t = Instant::now();
    let mut cases: Vec<(Instance, usize)> = c1.clone();
    for k in 3..=8 {
        let inst = theta_pairs(k);
        let opt = audited_opt(&inst).unwrap().count;
        cases.push((inst, opt));
    }
    let mut bad = Vec::new();
    for (inst, opt) in &cases {
        let s = approximate(&inst.graph, &inst.cycles, DEFAULT_EPS).unwrap();
        if !(2 * s.count >= *opt && s.count <= *opt && verifies(inst, &s)) {
            bad.push(format!("{} seed {:?}: {} vs opt {opt}", inst.name, inst.seed, s.count));
        }
    }
    report.line(
        5,
        "2-approximation bound",
        bad.is_empty(),
        format!("{} instances, violations {:?}", cases.len(), bad),
        t,
    );

    // 6
    let t = Instant::now();
    let mut bad = Vec::new();
    let mut sandwich = 0;
    for (inst, opt) in &c3 {
        let eps = 0.5;
        let s = approximate(&inst.graph, &inst.cycles, eps).unwrap();
        if !((4.0 + eps) * s.count as f64 >= *opt as f64 && s.count <= *opt && verifies(inst, &s)) {
            bad.push(format!("seed {:?}: {} vs opt {opt}", inst.seed, s.count));
        }
        // entrywise sandwich against the exact table
        let d = Decomposed::new(&inst.graph, &inst.cycles).unwrap();
        let exact = exact_table(&d).unwrap();
        let (apx, _) = approx_rows(&d, eps).unwrap();
        for x in 0..d.tree.node_count() {
            for (i, e) in exact[x].iter() {
                sandwich += 1;
                let a = apx[x].value(i);
                let ok = match (e.value, a) {
                    (Score::Val(tv), Score::Val(av)) => av <= tv && (4.0 + eps) * av as f64 >= tv as f64,
                    (Score::NegInf, Score::NegInf) => true,
                    _ => false,
                };
                if !ok {
                    bad.push(format!("seed {:?} node {x} I={i:?}: apx {a} exact {}", inst.seed, e.value));
                }
            }
        }
    }
    report.line(
        6,
        "(4+eps)-approximation bound",
        bad.is_empty(),
        format!("{} instances, {sandwich} table entries sandwiched, violations {:?}", c3.len(), bad),
        t,
    );

    // 7
    let t = Instant::now();
    let mut lines = Vec::new();
    let mut ok7 = true;
    let mut fixture = |label: &str, inst: Instance, expect: Option<usize>, upper: Option<usize>| {
        let brute = audited_opt(&inst);
        let apx = approximate(&inst.graph, &inst.cycles, DEFAULT_EPS).unwrap();
        let factor = if Decomposed::new(&inst.graph, &inst.cycles).unwrap().has_r_node() { 4.5 } else { 2.0 };
        match brute {
            Ok(s) => {
                let pass = expect.is_none_or(|e| s.count == e)
                    && upper.is_none_or(|u| s.count <= u)
                    && verifies(&inst, &s)
                    && apx.count <= s.count
                    && factor * apx.count as f64 >= s.count as f64;
                ok7 &= pass;
                lines.push(format!("{label}: opt {} apx {}", s.count, apx.count));
            }
            Err(e) => {
                ok7 = false;
                lines.push(format!("{label}: oracle {e}"));
            }
        }
    };
    let h = gen::k4();
    fixture("from_mis(K4)", gen::from_mis(&h).unwrap(), Some(brute_mis(&h)), None);
    let h = gen::cube();
    fixture("from_mis(cube)", gen::from_mis(&h).unwrap(), Some(brute_mis(&h)), None);
    fixture("from_hamiltonian(K4)", gen::from_hamiltonian(&gen::k4()).unwrap(), Some(4), None);
    let k33 = gen::complete_bipartite(3, 3);
    fixture("from_hamiltonian(K33)", gen::from_hamiltonian(&k33).unwrap(), Some(6), None);
    let b = gen::bridged_double_k4();
    let circular = gen::circular_order_opt(&b);
    fixture("from_hamiltonian(bridged)", gen::from_hamiltonian(&b).unwrap(), Some(circular), Some(9));
    lines.push(format!("circular-order optimum of the bridged graph {circular}"));
    report.line(7, "hardness fixtures", ok7, lines.join("; "), t);

    // 8
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut pairs = 0;
    let mut trues = 0;
    let mut bad = Vec::new();
    let mut seed = 8_000;
    while pairs < 300 {
        let family = [Family::SeriesParallel, Family::Mixed, Family::Triconnected][seed as usize % 3];
        let inst = random_instance(family, 5 + (seed % 12) as usize, CyclePolicy::RandomSimpleCycles, seed);
        seed += 1;
        let mut ids: Vec<usize> = (0..inst.cycles.len()).collect();
        ids.shuffle(&mut rng);
        let take = rng.gen_range(0..=ids.len().min(6));
        let mut subset = ids[..take].to_vec();
        subset.sort_unstable();
        let mut obs = |tree: &RootedTree, emb: &RotationEmbedding, _: &[usize]| {
            let g = tree.graph();
            let faces = FacePartition::compute(g, emb).map(|f| f.faces.len()).unwrap_or(0);
            AUDIT.with(|a| {
                let mut a = a.borrow_mut();
                a.embeddings += 1;
                if faces + g.vertex_count() != g.edge_count() + 2 {
                    a.euler_violations += 1;
                }
            });
        };
        let brute = match brute_feasible_observed(&inst.graph, &inst.cycles, &subset, ORACLE_BUDGET, Some(&mut obs)) {
            Ok(b) => b,
            Err(Error::BudgetExceeded(_)) => continue,
            Err(e) => panic!("{e}"),
        };
        pairs += 1;
        let gadget = check_all_facial(&inst.graph, &inst.cycles, &subset).unwrap();
        let witness_ok = |w: &Option<RotationEmbedding>| {
            w.as_ref().is_none_or(|e| {
                let f = inst.cycles.facial_ids(&inst.graph, e).unwrap();
                subset.iter().all(|c| f.binary_search(c).is_ok())
            })
        };
        if brute.is_some() {
            trues += 1;
        }
        if brute.is_some() != gadget.is_some() || !witness_ok(&brute) || !witness_ok(&gadget) {
            bad.push(format!("seed {} subset {subset:?}", seed - 1));
        }
    }
    report.line(
        8,
        "feasibility test equals enumeration",
        bad.is_empty(),
        format!("{pairs} pairs ({trues} feasible), mismatches {:?}", bad),
        t,
    );

    // 9
    let t = Instant::now();
    let mut obs1 = 0;
    for (inst, _) in &c3 {
        let d = Decomposed::new(&inst.graph, &inst.cycles).unwrap();
        for x in 0..d.tree.node_count() {
            if d.interface(x).len() > 3 {
                obs1 += 1;
            }
        }
    }
    let audit = AUDIT.with(|a| std::mem::take(&mut *a.borrow_mut()));
    report.line(
        9,
        "structural invariants",
        obs1 == 0 && audit.interface_violations == 0 && audit.euler_violations == 0 && audit.embeddings > 0,
        format!(
            "interface bound violations {obs1}; {} embeddings audited, {} with more than two facial interface cycles, {} Euler failures",
            audit.embeddings, audit.interface_violations, audit.euler_violations
        ),
        t,
    );

    // 10
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut bad_m = 0;
    for _ in 0..500 {
        let n = rng.gen_range(1..=12);
        let p = rng.gen_range(0.1..0.6);
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if rng.gen_bool(p) {
                    edges.push((a, b));
                }
            }
        }
        let m = max_matching(n, &edges);
        let mut used = vec![false; n];
        let valid = m.iter().all(|&i| {
            let (a, b) = edges[i];
            let fresh = !used[a] && !used[b];
            used[a] = true;
            used[b] = true;
            fresh
        });
        if !valid || m.len() != brute_matching(n, &edges) {
            bad_m += 1;
        }
    }
    let mut bad_i = 0;
    for s in 0..200u64 {
        let family = [Family::SeriesParallel, Family::Mixed, Family::Triconnected][s as usize % 3];
        let base = random_instance(family, 4 + (s % 17) as usize, CyclePolicy::FacesOfRandomEmbedding, 10_000 + s).graph;
        let keep: Vec<(usize, usize)> = base.edges().iter().copied().filter(|_| rng.gen_bool(0.8)).collect();
        let g = Multigraph::new(base.vertex_count(), &keep).unwrap();
        let r = mis_planar(&g, DEFAULT_EPS);
        if !r.exact || !is_independent(&g, &r.set) || r.set.len() != brute_mis(&g) {
            bad_i += 1;
        }
    }
    report.line(
        10,
        "matching and independent-set subroutines",
        bad_m == 0 && bad_i == 0,
        format!("500 matchings ({bad_m} wrong), 200 planar independent sets ({bad_i} wrong)"),
        t,
    );

    if !report.all_passed {
        std::process::exit(1);
    }
}
