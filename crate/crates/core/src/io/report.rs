//! Run reports: a JSON summary and a CSV sample series.
//!
//! The CSV series (one row per used sample) backs the per-sample cost and
//! energy plots; the JSON summary carries per-producer consumption,
//! efficiency and mean cost, which is enough for cost-vs-consumption and
//! efficiency-vs-cost scatter plots. Numbers are written in shortest
//! round-trip form so every aggregate can be recomputed from the series.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::dea::{self, Dataset, EfficiencyResult};
use crate::error::Result;
use crate::exec::Execution;
use crate::io::reference::ReferenceData;
use crate::stochastic::{self, CostSample, EnergyDistribution, OUTAGE_STD_FRACTION};

pub const SAMPLES_HEADER: &str = "producer_id,sample_index,e0_mwh,beta,ic_rial_per_kwh";

/// Relative band around the published expected cost.
pub const COST_BAND: f64 = 0.20;

/// Half a unit in the last published decimal of a standard deviation.
pub const STD_ROUNDING: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(format!("unknown format `{other}` (expected json or csv)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputDigest {
    pub role: String,
    pub source: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn new(role: &str, source: &str, contents: &str) -> Self {
        let digest = Sha256::digest(contents.as_bytes());
        let mut hex = String::with_capacity(64);
        for b in digest {
            let _ = write!(hex, "{b:02x}");
        }
        InputDigest {
            role: role.to_string(),
            source: source.to_string(),
            sha256: hex,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunMetadata {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub samples: usize,
    pub inputs: Vec<InputDigest>,
    /// File holding the per-sample series, when written alongside.
    pub sample_series: Option<String>,
}

impl RunMetadata {
    pub fn new(seed: u64, samples: usize, inputs: Vec<InputDigest>) -> Self {
        RunMetadata {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            samples,
            inputs,
            sample_series: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProducerReport {
    pub id: String,
    pub electricity_mwh: f64,
    pub sales_value: f64,
    pub efficiency_index: f64,
    pub z: f64,
    pub distribution: EnergyDistribution,
    pub mean_ic: Option<f64>,
    pub std_ic: Option<f64>,
    pub mean_point_ic: Option<f64>,
    pub n_requested: usize,
    pub n_used: usize,
    #[serde(skip)]
    pub samples: Vec<CostSample>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub metadata: RunMetadata,
    pub producers: Vec<ProducerReport>,
    pub notes: Vec<String>,
}

/// Efficiency, Monte Carlo estimate and mean-point cost for every producer
/// that has a distribution, in dataset order.
pub fn cost_study(
    dataset: &Dataset,
    distributions: &[EnergyDistribution],
    n: usize,
    seed: u64,
    execution: Execution,
) -> Result<Vec<ProducerReport>> {
    let mut out = Vec::new();
    for (k, p) in dataset.producers().iter().enumerate() {
        let Some(dist) = distributions.iter().find(|d| d.producer_id == p.id) else {
            continue;
        };
        let eff = dea::efficiency(dataset, k).map_err(|e| e.for_producer(&p.id))?;
        let est = stochastic::monte_carlo_estimate_with(dataset, k, dist, n, seed, execution)
            .map_err(|e| e.for_producer(&p.id))?;
        let mean_point_ic = stochastic::point_cost(dataset, k, eff.z, dist.mean_mwh)
            .map_err(|e| e.for_producer(&p.id))?
            .1;
        out.push(ProducerReport {
            id: p.id.clone(),
            electricity_mwh: p.electricity_mwh,
            sales_value: p.sales_value,
            efficiency_index: eff.efficiency_index,
            z: eff.z,
            distribution: dist.clone(),
            mean_ic: est.mean_ic,
            std_ic: est.std_ic,
            mean_point_ic,
            n_requested: est.n_requested,
            n_used: est.n_used,
            samples: est.samples,
        });
    }
    Ok(out)
}

/// Distributions whose spread disagrees with a quarter of `mean - base`.
pub fn distribution_notes(distributions: &[EnergyDistribution]) -> Vec<String> {
    distributions
        .iter()
        .filter_map(|d| {
            let implied = OUTAGE_STD_FRACTION * (d.mean_mwh - d.base_mwh);
            ((implied - d.std_mwh).abs() > STD_ROUNDING + 1e-9).then(|| {
                format!(
                    "{}: tabulated std {} MWh differs from a quarter of the unserved energy ({} MWh); tabulated value used",
                    d.producer_id, d.std_mwh, implied
                )
            })
        })
        .collect()
}

/// Compares estimated costs with the published ones: the ±20% band and the
/// lowest/highest ordering.
pub fn cost_notes(producers: &[ProducerReport], reference: &ReferenceData) -> Vec<String> {
    let mut notes = Vec::new();
    for p in producers {
        let Some(expected) = reference.expected_cost(&p.id) else {
            continue;
        };
        match p.mean_ic {
            Some(m) if ((m - expected) / expected).abs() <= COST_BAND => {}
            Some(m) => notes.push(format!(
                "{}: mean cost {m:.3} Rial/kWh is outside ±20% of the published {expected} Rial/kWh",
                p.id
            )),
            None => notes.push(format!("{}: no usable samples; published cost {expected} Rial/kWh", p.id)),
        }
    }
    let ranked: Vec<(&str, f64)> = producers
        .iter()
        .filter(|p| reference.expected_cost(&p.id).is_some())
        .filter_map(|p| p.mean_ic.map(|m| (p.id.as_str(), m)))
        .collect();
    if ranked.len() == reference.expected_costs.len() {
        let lowest = ranked.iter().min_by(|a, b| a.1.total_cmp(&b.1)).map(|x| x.0);
        let highest = ranked.iter().max_by(|a, b| a.1.total_cmp(&b.1)).map(|x| x.0);
        let exp_low = reference
            .expected_costs
            .iter()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|x| x.0.as_str());
        let exp_high = reference
            .expected_costs
            .iter()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map(|x| x.0.as_str());
        if lowest != exp_low {
            notes.push(format!(
                "lowest mean cost is {} but the published lowest is {}",
                lowest.unwrap_or("-"),
                exp_low.unwrap_or("-")
            ));
        }
        if highest != exp_high {
            notes.push(format!(
                "highest mean cost is {} but the published highest is {}",
                highest.unwrap_or("-"),
                exp_high.unwrap_or("-")
            ));
        }
    }
    notes
}

/// Efficiency indices more than `tolerance` from the published values.
pub fn efficiency_notes(results: &[EfficiencyResult], reference: &ReferenceData, tolerance: f64) -> Vec<String> {
    results
        .iter()
        .filter_map(|r| {
            let expected = reference.expected_efficiency(&r.producer_id)?;
            let diff = r.efficiency_index - expected;
            (diff.abs() > tolerance).then(|| {
                format!(
                    "{}: efficiency {:.6} differs from the published {expected} by {diff:+.2e}",
                    r.producer_id, r.efficiency_index
                )
            })
        })
        .collect()
}

fn samples_csv(producers: &[ProducerReport]) -> String {
    let mut out = String::from(SAMPLES_HEADER);
    out.push('\n');
    for p in producers {
        for s in &p.samples {
            let _ = writeln!(out, "{},{},{},{},{}", p.id, s.index, s.e0_mwh, s.beta, s.ic_rial_per_kwh);
        }
    }
    out
}

pub fn write_report(report: &Report, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        ReportFormat::Csv => samples_csv(&report.producers),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EfficiencyReport {
    pub metadata: RunMetadata,
    pub results: Vec<EfficiencyResult>,
    pub notes: Vec<String>,
}

pub fn write_efficiency(report: &EfficiencyReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        ReportFormat::Csv => {
            let mut out = String::from("producer_id,efficiency_index,z\n");
            for r in &report.results {
                let _ = writeln!(out, "{},{},{}", r.producer_id, r.efficiency_index, r.z);
            }
            out
        }
    }
}
