//! Report schemas. Field order is the serialization order; none of the
//! reports carry timestamps, so identical configurations produce
//! byte-identical files.

use serde::Serialize;

use quadword::{BoundCheck, StageBoundRow};

use crate::config::RunConfig;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize)]
pub struct ComplexityReport {
    pub config: RunConfig,
    pub version: &'static str,
    pub n_trust: usize,
    pub rows: Vec<ComplexityRow>,
}

#[derive(Serialize)]
pub struct ComplexityRow {
    pub n: usize,
    pub p_n: u64,
    pub trusted: u8,
}

#[derive(Serialize)]
pub struct GrowthFile {
    pub config: RunConfig,
    pub version: &'static str,
    pub dims: Vec<(usize, u64)>,
    pub gk_estimate: Option<f64>,
    pub gc_estimate: Option<f64>,
    pub c_lower: f64,
    pub c_upper: f64,
    pub window: (usize, usize),
    pub n_trust: usize,
    pub bound_checks: Vec<BoundCheck>,
    pub bounds_all_pass: bool,
}

#[derive(Serialize)]
pub struct HilbertReport {
    pub config: RunConfig,
    pub version: &'static str,
    pub counts: Vec<HilbertRow>,
}

#[derive(Serialize)]
pub struct HilbertRow {
    pub n: usize,
    pub count: String,
}

#[derive(Serialize)]
pub struct TraceReport {
    pub config: RunConfig,
    pub version: &'static str,
    #[serde(flatten)]
    pub trace: quadword::TraceFile,
    pub stage_bounds: Vec<StageBoundRow>,
}

#[derive(Serialize)]
pub struct PrimesReport {
    pub config: RunConfig,
    pub version: &'static str,
    pub candidates: Vec<CandidateRow>,
}

#[derive(Serialize)]
pub struct CandidateRow {
    pub word: String,
    pub d: usize,
    pub pi_degree: usize,
    pub verified_power: u64,
}

#[derive(Serialize)]
pub struct QuotientReport {
    pub config: RunConfig,
    pub version: &'static str,
    pub period: String,
    pub d: usize,
    pub pi_degree: usize,
    pub identities: QuotientIdentities,
    pub words_checked: usize,
    pub all_pass: bool,
}

#[derive(Serialize)]
pub struct QuotientIdentities {
    pub central: IdentityRow,
    pub orthogonal: IdentityRow,
    pub squares: IdentityRow,
}

#[derive(Serialize)]
pub struct IdentityRow {
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Serialize)]
pub struct DegreesReport {
    pub config: RunConfig,
    pub version: &'static str,
    pub rows: Vec<DegreeRowOut>,
    pub envelope_increases: usize,
}

#[derive(Serialize)]
pub struct DegreeRowOut {
    pub j: usize,
    pub anchor_len: usize,
    pub d_j: usize,
    pub pi_degree: usize,
    pub envelope: usize,
}

#[derive(Serialize)]
pub struct VerifyAllReport {
    pub config: RunConfig,
    pub version: &'static str,
    pub checks: Vec<Check>,
    pub all_pass: bool,
}

#[derive(Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}
