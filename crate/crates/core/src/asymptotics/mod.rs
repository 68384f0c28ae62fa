//! Families of mm-spaces and their large-`n` behaviour.

pub mod family;
pub mod limit;
pub mod report;
pub mod trend;

pub use family::{generate_family, generate_member, FamilySpec, Generator};
pub use limit::{
    limit_formula_check, n_levy_limit_consistency, LimitConfig, LimitReport, LimitRow, LimitTarget,
    NLevyConsistency,
};
pub use report::{
    analyze_family, report_from, DetectorConfig, FamilyConfig, FamilyReport, Verdict, CSV_HEADER,
};
pub use trend::{
    canonical_tuple_family, canonical_tuples, dissipation_trend, dissipation_trend_for, levy_trend,
    n_levy_classify, phase_transition_detect, Delta, DissipationVerdict, FamilyData, LevyVerdict,
    Member, NLevyVerdict, PhaseRun, PhaseVerdict, Series,
};
