//! Level sweeps, the per-level residue-degree statistics, their cache, and
//! the fits, question checks and plot files built from it.

mod cache;
mod compute;
mod plot;
mod questions;
mod record;
mod stats;
mod sweep;

pub use cache::{Cache, CacheWriter, SkippedLine};
pub use compute::{compute_level, compute_level_with, compute_levels, lower_weight_contributions};
pub use plot::{emit_plot, read_fit_alpha, PlotFiles};
pub use questions::{evaluate_question, Constants, LevelVerdict, QuestionId, QuestionOptions, QuestionReport};
pub use record::{LevelRecord, RecordKey, SCHEMA_VERSION, TOOL_VERSION};
pub use stats::{fit_origin_line, fit_records, format_decimal, spearman, FitResult, Stat};
pub use sweep::{sweep, SweepConfig, SweepReport};
