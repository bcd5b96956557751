use facemax::format::{parse_instance, write_instance, EmbeddingFile};
use facemax::run::{solve, Mode, SolveOptions};
use facemax_core::gen::{random_instance, CyclePolicy, Family};
use proptest::prelude::*;

fn family(i: u8) -> Family {
    [Family::SeriesParallel, Family::Triconnected, Family::Mixed][i as usize % 3]
}

fn policy(i: u8) -> CyclePolicy {
    [
        CyclePolicy::FacesOfRandomEmbedding,
        CyclePolicy::RandomSimpleCycles,
        CyclePolicy::ConditionThm5,
        CyclePolicy::ConditionThm6,
    ][i as usize % 4]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn instance_round_trip(f in 0u8..3, p in 0u8..4, n in 5usize..14, seed in 0u64..10_000) {
        let inst = random_instance(family(f), n, policy(p), seed);
        let text = write_instance(&inst);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back.graph, &inst.graph);
        prop_assert_eq!(back.cycles.cycles(), inst.cycles.cycles());
        prop_assert_eq!(back.seed, inst.seed);
        prop_assert_eq!(write_instance(&back), text);
    }

    #[test]
    fn embedding_round_trip_and_check(f in 0u8..3, n in 5usize..12, seed in 0u64..10_000) {
        let inst = random_instance(family(f), n, CyclePolicy::RandomSimpleCycles, seed);
        let opts = SolveOptions { mode: Mode::Approx, ..SolveOptions::default() };
        let sol = solve(&inst.graph, &inst.cycles, &opts).unwrap();
        let file = EmbeddingFile::from_solution(&inst.graph, &sol, "approx", 7);
        let back = EmbeddingFile::parse(&file.write()).unwrap();
        prop_assert_eq!(&back, &file);
        prop_assert_eq!(back.graph().unwrap().edge_count(), inst.graph.edge_count());
        prop_assert_eq!(back.check(&inst.graph, &inst.cycles).unwrap(), sol.realized);
    }
}

#[test]
fn comments_and_blank_lines() {
    let text = "# leading comment\n\nfacemax-instance 1 # header\nname tri\nvertices 3\nedge 0 1\nedge 1 2\n\nedge 2 0 # last\ncycle 0 1 2\n";
    let inst = parse_instance(text).unwrap();
    assert_eq!(inst.name, "tri");
    assert_eq!(inst.cycles.len(), 1);
}

#[test]
fn duplicate_cycle_located() {
    let text = "facemax-instance 1\nvertices 3\nedge 0 1\nedge 1 2\nedge 2 0\ncycle 0 1 2\ncycle 2 1 0\n";
    let e = parse_instance(text).unwrap_err();
    assert_eq!(e.line, 7);
}

#[test]
fn embedding_parse_errors() {
    assert!(EmbeddingFile::parse("facemax-embedding 1\nvertices 2\nrotation 0\ncount 0\n").is_err());
    assert!(EmbeddingFile::parse("facemax-embedding 1\nvertices 1\nrotation 0\nrotation 0\ncount 0\n").is_err());
    let e = EmbeddingFile::parse("facemax-embedding 1\nvertices 1\nrotation 3\ncount 0\n").unwrap_err();
    assert_eq!((e.line, e.field), (3, 2));
}
