//! Text formats: STRIPS-fragment PDDL, numeric instance files, GP-problem
//! manifests and planning-program listings.

pub mod manifest;
pub mod program_text;
pub mod sexpr;
pub mod strips;

pub use manifest::{
    load_domain, load_gp_problem, load_instance, load_validation, parse_numeric_instance,
    print_numeric_instance, read_text, DomainSource, GpManifest,
};
pub use program_text::{parse_program, parse_program_raw, resolve_line, RawLine};
pub use strips::{parse_domain, parse_instance, print_domain, print_instance};
