pub mod complexity;
pub mod correlation;
pub mod identity;
pub mod poly2;

pub use complexity::{
    family_linear_complexity, lc_bound_check, linear_complexity_cyclic, CyclicComplexity, LcBound,
    LinearComplexityReport,
};
pub use correlation::{
    autocorrelation, corr_bound, crosscorrelation, family_correlation, AnalysisMode, CorrelationReport,
};
pub use identity::{counting_identity_check, CountingReport};
pub use poly2::Poly2;
