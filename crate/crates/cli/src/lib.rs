//! Problem-spec ingestion, task orchestration and report emission.

pub mod run;
pub mod spec;

pub use run::{canonical_task, render_json, render_text, run, spec_digest, RunOptions, RunReport, TaskOutput, TaskReport, TASKS};
pub use spec::{load_spec, parse_spec, to_json, ProblemSpec, SpecError, SpecErrors};
