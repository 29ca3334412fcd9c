//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a computation fails, 2 for usage or
//! input errors. Machine output goes to `--out` (or stdout), diagnostics
//! and notes to stderr.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::dea::{self, Dataset};
use crate::error::Error;
use crate::exec::Execution;
use crate::inverse;
use crate::io::parse::{parse_distributions, parse_outages, parse_producers};
use crate::io::reference::{self, ReferenceData};
use crate::io::report::{
    self, cost_notes, distribution_notes, efficiency_notes, write_efficiency, write_report, EfficiencyReport,
    InputDigest, Report, ReportFormat, RunMetadata,
};
use crate::stochastic::{self, average_power, energy_distribution, EnergyDistribution};

/// Tolerance used when comparing efficiencies with the published indices.
pub const EFFICIENCY_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Parser)]
#[command(name = "dea-outage", version, about = "DEA-based power interruption cost estimation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Output-oriented CCR efficiency of every producer.
    Efficiency(Sources),
    /// Monte Carlo interruption cost for every producer with a distribution.
    EstimateCost {
        #[command(flatten)]
        sources: Sources,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Sales estimate for one producer at a given electricity level.
    WhatIf {
        #[command(flatten)]
        sources: Sources,
        #[arg(long)]
        producer: String,
        /// New electricity consumption, MWh.
        #[arg(long = "e-new")]
        e_new: f64,
    },
}

#[derive(Debug, Args)]
pub struct Sources {
    /// Producers CSV.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// Distributions CSV (producer_id,mean_mwh,std_mwh).
    #[arg(long, conflicts_with = "outages")]
    pub distributions: Option<PathBuf>,
    /// Outage records CSV; distributions are built from them.
    #[arg(long)]
    pub outages: Option<PathBuf>,
    /// Use the embedded reference data for any source not given explicitly.
    #[arg(long)]
    pub builtin: bool,
    /// Annual working hours used to derive average demand for outages without one.
    #[arg(long, default_value_t = 8760.0)]
    pub work_hours: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    pub format: ReportFormat,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Compute(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::InvalidDataset(_) | Error::InvalidProducer { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Compute(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `std::env::args` and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            code
        }
    }
}

pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Efficiency(sources) => cmd_efficiency(&sources),
        Command::EstimateCost { sources, samples, seed } => cmd_estimate_cost(&sources, samples as usize, seed),
        Command::WhatIf {
            sources,
            producer,
            e_new,
        } => cmd_what_if(&sources, &producer, e_new),
    };
    match result {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Compute(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

struct Loaded {
    dataset: Dataset,
    builtin_dataset: bool,
    digests: Vec<InputDigest>,
}

fn load_dataset(sources: &Sources) -> CliResult<Loaded> {
    let (text, source, builtin) = match (&sources.dataset, sources.builtin) {
        (Some(path), _) => (read(path)?, path.display().to_string(), false),
        (None, true) => (reference::PRODUCERS_CSV.to_string(), "builtin".to_string(), true),
        (None, false) => return Err(CliError::Usage("no dataset: pass --dataset <file> or --builtin".into())),
    };
    let dataset = parse_producers(&text).map_err(|e| CliError::Usage(format!("{source}: {e}")))?;
    Ok(Loaded {
        dataset,
        builtin_dataset: builtin,
        digests: vec![InputDigest::new("dataset", &source, &text)],
    })
}

enum DistributionSource {
    Builtin,
    File,
    Outages,
}

fn load_distributions(
    sources: &Sources,
    loaded: &mut Loaded,
) -> CliResult<(Vec<EnergyDistribution>, DistributionSource)> {
    if let Some(path) = &sources.distributions {
        let text = read(path)?;
        let source = path.display().to_string();
        let d = parse_distributions(&text, &loaded.dataset).map_err(|e| CliError::Usage(format!("{source}: {e}")))?;
        loaded.digests.push(InputDigest::new("distributions", &source, &text));
        return Ok((d, DistributionSource::File));
    }
    if let Some(path) = &sources.outages {
        let text = read(path)?;
        let source = path.display().to_string();
        let records = parse_outages(&text).map_err(|e| CliError::Usage(format!("{source}: {e}")))?;
        if let Some(r) = records.iter().find(|r| loaded.dataset.index_of(&r.producer_id).is_none()) {
            return Err(CliError::Usage(format!("{source}: unknown producer id {}", r.producer_id)));
        }
        let mut out = Vec::new();
        for p in loaded.dataset.producers() {
            let own: Vec<_> = records.iter().filter(|r| r.producer_id == p.id).cloned().collect();
            if own.is_empty() {
                continue;
            }
            let demand = average_power(p.electricity_mwh, sources.work_hours)?;
            out.push(energy_distribution(&p.id, p.electricity_mwh, &own, demand)?);
        }
        loaded.digests.push(InputDigest::new("outages", &source, &text));
        return Ok((out, DistributionSource::Outages));
    }
    if sources.builtin {
        let d = parse_distributions(reference::DISTRIBUTIONS_CSV, &loaded.dataset)
            .map_err(|e| CliError::Usage(format!("builtin distributions: {e}")))?;
        loaded
            .digests
            .push(InputDigest::new("distributions", "builtin", reference::DISTRIBUTIONS_CSV));
        return Ok((d, DistributionSource::Builtin));
    }
    Err(CliError::Usage(
        "no distributions: pass --distributions <file>, --outages <file> or --builtin".into(),
    ))
}

fn emit(sources: &Sources, text: &str) -> CliResult<()> {
    match &sources.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_notes(notes: &[String]) {
    for n in notes {
        eprintln!("note: {n}");
    }
}

fn cmd_efficiency(sources: &Sources) -> CliResult<()> {
    let loaded = load_dataset(sources)?;
    let results = dea::efficiency_all(&loaded.dataset)?;
    let notes = if loaded.builtin_dataset {
        efficiency_notes(&results, &ReferenceData::load(), EFFICIENCY_TOLERANCE)
    } else {
        Vec::new()
    };
    print_notes(&notes);
    let report = EfficiencyReport {
        metadata: RunMetadata::new(0, 0, loaded.digests),
        results,
        notes,
    };
    emit(sources, &write_efficiency(&report, sources.format))
}

/// Sibling path for the sample series of a JSON report: `x.json` → `x.samples.csv`.
pub fn samples_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.samples.csv"))
}

fn cmd_estimate_cost(sources: &Sources, samples: usize, seed: u64) -> CliResult<()> {
    let mut loaded = load_dataset(sources)?;
    let (distributions, kind) = load_distributions(sources, &mut loaded)?;
    let producers = report::cost_study(&loaded.dataset, &distributions, samples, seed, Execution::default())?;

    let mut notes = Vec::new();
    if let DistributionSource::Builtin = kind {
        notes.extend(distribution_notes(&distributions));
        if loaded.builtin_dataset {
            notes.extend(cost_notes(&producers, &ReferenceData::load()));
        }
    }
    if matches!(kind, DistributionSource::File | DistributionSource::Outages) {
        notes.extend(
            producers
                .iter()
                .filter(|p| p.n_used < p.n_requested)
                .map(|p| format!("{}: {} of {} samples skipped", p.id, p.n_requested - p.n_used, p.n_requested)),
        );
    }
    print_notes(&notes);

    let mut metadata = RunMetadata::new(seed, samples, loaded.digests);
    let series = match (sources.format, &sources.out) {
        (ReportFormat::Json, Some(out)) => Some(samples_path(out)),
        _ => None,
    };
    metadata.sample_series = series
        .as_ref()
        .and_then(|p| p.file_name())
        .map(|n| n.to_string_lossy().into_owned());
    let report = Report {
        metadata,
        producers,
        notes,
    };
    emit(sources, &write_report(&report, sources.format))?;
    if let Some(path) = series {
        fs::write(&path, write_report(&report, ReportFormat::Csv))
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct WhatIf {
    producer_id: String,
    z0: f64,
    efficiency_index: f64,
    e_new_mwh: f64,
    labor_hours: f64,
    raw_materials: f64,
    beta: f64,
    /// Number, or "n/a" when the electricity increase is zero.
    ic_rial_per_kwh: serde_json::Value,
}

fn cmd_what_if(sources: &Sources, producer: &str, e_new: f64) -> CliResult<()> {
    let loaded = load_dataset(sources)?;
    let ds = &loaded.dataset;
    let index = ds
        .index_of(producer)
        .ok_or_else(|| CliError::Usage(format!("unknown producer {producer}")))?;
    let p = &ds.producers()[index];
    let inputs = inverse::perturbed_inputs(p, e_new).map_err(|e| CliError::Usage(e.to_string()))?;
    let eff = dea::efficiency(ds, index)?;
    let est = inverse::estimate_output(ds, index, &inputs, eff.z)?;
    let result = WhatIf {
        producer_id: p.id.clone(),
        z0: eff.z,
        efficiency_index: eff.efficiency_index,
        e_new_mwh: e_new,
        labor_hours: inputs.labor_hours,
        raw_materials: inputs.raw_materials,
        beta: est.beta,
        ic_rial_per_kwh: match stochastic::interruption_cost(est.beta, p.sales_value, e_new, p.electricity_mwh) {
            Some(v) => serde_json::json!(v),
            None => serde_json::json!("n/a"),
        },
    };
    let text = match sources.format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(&result).expect("serializes");
            s.push('\n');
            s
        }
        ReportFormat::Csv => {
            let ic = match &result.ic_rial_per_kwh {
                serde_json::Value::String(s) => s.clone(),
                v => v.to_string(),
            };
            format!(
                "producer_id,z0,efficiency_index,e_new_mwh,labor_hours,raw_materials,beta,ic_rial_per_kwh\n{},{},{},{},{},{},{},{}\n",
                result.producer_id,
                result.z0,
                result.efficiency_index,
                result.e_new_mwh,
                result.labor_hours,
                result.raw_materials,
                result.beta,
                ic
            )
        }
    };
    if result.ic_rial_per_kwh.is_string() {
        eprintln!("note: interruption cost is n/a when the electricity increase is zero");
    }
    emit(sources, &text)
}
