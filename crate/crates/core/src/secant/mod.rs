//! Dimensions and defects of secant varieties of structured varieties.

pub mod engine;
pub mod tables;
pub mod variety;

pub use engine::{
    defect_scan, fat_point_hf, generic_fat_point_hf, reports_to_csv, secant_dim, secant_dim_with,
    tangent_span_basis, FatPointScheme, Method, SecantConfig, SecantDimReport,
};
pub use tables::{ah_oracle, generic_rank, generic_rank_oracle, known_defect_table, GenericRankReport, KnownDefect, Source};
pub use variety::VarietySpec;
