//! Instance files, reports, drawings and the planarity experiment.

pub mod experiment;
pub mod instance;
pub mod report;
pub mod svg;

pub use experiment::{assumption2_experiment, mirrored_triangles_template, Assumption2Stats, TrialOutcome};
pub use instance::{generate_random_instance, parse_instance, read_instance, serialize_instance, write_atomic, Instance};
pub use report::{to_json, OracleJson, SolveJson, WmstJson};
pub use svg::{render_trace, render_tree, RenderSpec};
