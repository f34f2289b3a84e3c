use std::io::Write;

use serde::Serialize;
use serde_json::Value;
use unravel::bounds::BoundReport;
use unravel::entropy::ConjugateOrders;

use crate::CliError;

/// Rows with `slack` below this make the process exit with status 1.
pub const SLACK_TOL: f64 = -1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Parameters {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub mu: Option<f64>,
    pub d: Option<usize>,
    pub factor_kind: Option<String>,
}

impl Parameters {
    pub fn orders(orders: &ConjugateOrders, d: usize) -> Self {
        Self {
            alpha: Some(orders.alpha()),
            beta: Some(orders.beta()),
            mu: Some(orders.mu()),
            d: Some(d),
            factor_kind: None,
        }
    }

    pub fn alpha(alpha: f64, d: usize) -> Self {
        Self {
            alpha: Some(alpha),
            d: Some(d),
            ..Self::default()
        }
    }
}

/// One checked inequality `lhs ≥ rhs`, `slack = lhs − rhs`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub check_name: String,
    pub trial: Option<usize>,
    pub parameters: Parameters,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub factor: Option<f64>,
    pub limit_extrapolated: bool,
    pub seed: Option<u64>,
    pub wall_time_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
}

impl ReportRow {
    pub fn new(check_name: &str, parameters: Parameters, lhs: f64, rhs: f64) -> Self {
        Self {
            check_name: check_name.to_string(),
            trial: None,
            parameters,
            lhs,
            rhs,
            slack: lhs - rhs,
            factor: None,
            limit_extrapolated: false,
            seed: None,
            wall_time_ms: None,
            details: None,
        }
    }

    pub fn from_bound(check_name: &str, r: &BoundReport, d: usize) -> Self {
        let mut parameters = Parameters::orders(&r.orders, d);
        parameters.factor_kind = Some(r.factor_kind.to_string());
        Self {
            factor: Some(r.factor),
            limit_extrapolated: r.limit_extrapolated,
            slack: r.slack,
            ..Self::new(check_name, parameters, r.lhs, r.rhs)
        }
    }

    pub fn trial(mut self, trial: usize, seed: u64) -> Self {
        self.trial = Some(trial);
        self.seed = Some(seed);
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn details(mut self, details: Value) -> Self {
        self.details = Some(details);
        self
    }

    pub fn violated(&self) -> bool {
        !(self.slack >= SLACK_TOL)
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    check_name: &'a str,
    trial: Option<usize>,
    alpha: Option<f64>,
    beta: Option<f64>,
    mu: Option<f64>,
    d: Option<usize>,
    factor_kind: Option<&'a str>,
    lhs: f64,
    rhs: f64,
    slack: f64,
    factor: Option<f64>,
    limit_extrapolated: bool,
    seed: Option<u64>,
    wall_time_ms: Option<f64>,
}

impl<'a> From<&'a ReportRow> for CsvRow<'a> {
    fn from(r: &'a ReportRow) -> Self {
        Self {
            check_name: &r.check_name,
            trial: r.trial,
            alpha: r.parameters.alpha,
            beta: r.parameters.beta,
            mu: r.parameters.mu,
            d: r.parameters.d,
            factor_kind: r.parameters.factor_kind.as_deref(),
            lhs: r.lhs,
            rhs: r.rhs,
            slack: r.slack,
            factor: r.factor,
            limit_extrapolated: r.limit_extrapolated,
            seed: r.seed,
            wall_time_ms: r.wall_time_ms,
        }
    }
}

/// JSON lines or CSV with a header; `details` appear only in JSON.
pub fn write_rows(rows: &[ReportRow], format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    match format {
        Format::Json => {
            for row in rows {
                serde_json::to_writer(&mut *out, row).map_err(CliError::output)?;
                writeln!(out).map_err(CliError::output)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            for row in rows {
                w.serialize(CsvRow::from(row)).map_err(CliError::output)?;
            }
            w.flush().map_err(CliError::output)?;
        }
    }
    Ok(())
}
