//! Portable outputs: CSV tables, PGM heatmaps and the JSON run report.

mod csv;
mod pgm;
mod report;

pub use self::csv::{
    format_estimates_csv, format_grid_csv, format_matrix_csv, format_pairs_csv, format_scan_csv,
    format_summary_csv, format_taps_csv, format_vectors_csv, read_grid_csv, write_csv, write_grid_csv,
    GridTable,
};
pub use pgm::{write_heatmap_pgm, HeatmapImage};
pub use report::{
    write_report_json, ConditionLabels, EmbeddingRecord, FilterRecord, HeatmapRecord, InputRecord,
    PreprocessingRecord, Report, ReportBuilder, RunRecord, StatRecord, ToolInfo, REPORT_SCHEMA,
};
