//! Benchmark grid runner and result emitters.

mod grid;
mod report;

pub use grid::{
    cell_seed, preprocess_for, run_grid, CsvSource, DatasetSource, GridSpec, MnistSource, RunRecord, SynthSource,
    PAPER_FEATURES, PAPER_LAYERS, WDBC_RANKED_FEATURES,
};
pub use report::{emit_results, parse_json, render, render_csv, render_json, render_markdown, OutputFormat};
