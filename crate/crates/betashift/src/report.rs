use serde::{Deserialize, Serialize};

/// How trustworthy a reported count is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Exact,
    LowerBound,
    UpperBound,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Exact => "exact",
            Status::LowerBound => "lower_bound",
            Status::UpperBound => "upper_bound",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Formula,
    Oracle,
}

/// Parameters that produced a count; only the relevant ones are populated.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aperiodicity_assumed: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stabilized: Option<bool>,
}

/// A counted quantity (followers, predecessors, extenders, complexity) with
/// its status and the parameters it was computed under.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub n: usize,
    pub value: u64,
    pub status: Status,
    pub provenance: Provenance,
    #[serde(default)]
    pub params: ReportParams,
}

impl CountReport {
    pub fn csv_row(&self) -> String {
        format!("{},{},{}", self.n, self.value, self.status.as_str())
    }
}
