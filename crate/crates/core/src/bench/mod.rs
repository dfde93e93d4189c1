//! Benchmark domains, instance generators, suites and run reports.

pub mod domains;
pub mod generators;
pub mod report;

pub use generators::{
    benchmark, generate, generate_sizes, seed_from_env, BenchmarkSpec, DomainKind, GeneratedBenchmark,
    GeneratedFile, BENCHMARKS, DEFAULT_SEED, REFERENCE_PROGRAMS,
};
pub use report::{
    parse_suite, read_suite, report_row, run_manifest_with, run_suite, run_suite_with, ReportRow, RowOverrides,
    RunReport, SuiteEntry, Verdict,
};

/// Tower-flattening program for the ontable domain.
pub const FLATTEN_PROGRAM: &str = "\
0. unstack(z1,z2)
1. putdown(z1)
2. inc(z2)
3. goto(0, y_z=false)
4. clear(z2)
5. inc(z1)
6. goto(0, y_z=false)
7. clear(z1)
8. inc(z3)
9. goto(0, y_z=false)
10. end
";
