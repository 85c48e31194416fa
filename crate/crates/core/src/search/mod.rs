//! Parameters of the large-value theorem and W-guided scans for extremes of S₁.

mod params;
mod scan;

pub use params::{
    derive_params, derive_params_log, feasibility_threshold, ConditionFlags, Feasibility,
    SearchParams,
};
pub use scan::{scan, ExtremeValueCertificate, MethodTrace, ScanRequest, ScanResult, StripCheck};
