//! Fixtures shared by the criterion benchmarks.

use gpsynth_core::bench::{benchmark, generate, generate_sizes, DEFAULT_SEED, FLATTEN_PROGRAM};
use gpsynth_core::pddl::parse_program;
use gpsynth_core::search::SearchConfig;
use gpsynth_core::{GpProblem, PlanningProgram};

/// Training problem of a benchmark at its default sizes.
pub fn problem(name: &str) -> GpProblem {
    generate(benchmark(name).expect("known benchmark"), DEFAULT_SEED)
        .and_then(|g| g.problem())
        .expect("generated problem loads")
}

/// Search configuration of a benchmark at its default parameters.
pub fn config(name: &str) -> SearchConfig {
    let spec = benchmark(name).expect("known benchmark");
    SearchConfig::new(spec.mode, spec.v, spec.evaluators.to_vec())
}

/// Ontable towers of the given heights with the tower-flattening program.
pub fn flatten_fixture(heights: &[usize]) -> (GpProblem, PlanningProgram) {
    let spec = benchmark("ontable").expect("known benchmark");
    let problem = generate_sizes(spec, heights, &[], DEFAULT_SEED)
        .and_then(|g| g.problem())
        .expect("generated problem loads");
    let program = parse_program(FLATTEN_PROGRAM, &problem.domain, spec.pointers, spec.lines).expect("program parses");
    (problem, program)
}

#[cfg(test)]
mod tests {
    use super::*;
    use gpsynth_core::vm::{all_solved, validate};
    use gpsynth_core::RunOptions;

    #[test]
    fn fixtures_load() {
        let (p, prog) = flatten_fixture(&[3, 8]);
        assert!(all_solved(&validate(&prog, &p, None, &RunOptions::default())));
        assert!(config("tsum").v <= problem("tsum").lines);
    }
}
