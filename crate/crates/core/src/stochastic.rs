//! Uninterrupted-energy distributions and Monte Carlo interruption cost.

use serde::Serialize;

use crate::dea::{self, Dataset};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::inverse::{estimate_output, perturbed_inputs};
use crate::rng::{sample_rng, sample_seeds, standard_normal};

/// Ratio of the standard deviation to the total unserved energy.
pub const OUTAGE_STD_FRACTION: f64 = 0.25;

/// 10^10 Rial per MWh expressed in Rial per kWh.
pub const RIAL_E10_PER_MWH_TO_RIAL_PER_KWH: f64 = 1e7;

/// Draws rejected below the base before giving up.
pub const MAX_REJECTIONS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutageRecord {
    pub producer_id: String,
    pub duration_h: f64,
    pub demand_mw: Option<f64>,
}

impl OutageRecord {
    pub fn new(producer_id: impl Into<String>, duration_h: f64, demand_mw: Option<f64>) -> Result<Self> {
        if !duration_h.is_finite() || duration_h <= 0.0 {
            return Err(Error::Domain(format!("outage duration {duration_h} h must be positive")));
        }
        if let Some(d) = demand_mw {
            if !d.is_finite() || d <= 0.0 {
                return Err(Error::Domain(format!("outage demand {d} MW must be positive")));
            }
        }
        Ok(OutageRecord {
            producer_id: producer_id.into(),
            duration_h,
            demand_mw,
        })
    }
}

/// Normal distribution of uninterrupted consumption, truncated below at `base_mwh`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyDistribution {
    pub producer_id: String,
    pub mean_mwh: f64,
    pub std_mwh: f64,
    pub base_mwh: f64,
}

impl EnergyDistribution {
    pub fn new(producer_id: impl Into<String>, mean_mwh: f64, std_mwh: f64, base_mwh: f64) -> Result<Self> {
        let producer_id = producer_id.into();
        if ![mean_mwh, std_mwh, base_mwh].iter().all(|v| v.is_finite()) {
            return Err(Error::Domain(format!("{producer_id}: non-finite distribution parameter")));
        }
        if std_mwh < 0.0 {
            return Err(Error::Domain(format!("{producer_id}: negative standard deviation {std_mwh}")));
        }
        if mean_mwh < base_mwh {
            return Err(Error::Domain(format!(
                "{producer_id}: mean {mean_mwh} MWh is below the interrupted consumption {base_mwh} MWh"
            )));
        }
        Ok(EnergyDistribution {
            producer_id,
            mean_mwh,
            std_mwh,
            base_mwh,
        })
    }
}

pub fn average_power(e_total_mwh: f64, work_hours: f64) -> Result<f64> {
    if !work_hours.is_finite() || work_hours <= 0.0 {
        return Err(Error::Domain(format!("work hours {work_hours} must be positive")));
    }
    Ok(e_total_mwh / work_hours)
}

/// Mean is `E_t + Σ h·D`, standard deviation a quarter of the sum.
/// Records without a demand use `default_demand_mw`.
pub fn energy_distribution(
    producer_id: &str,
    e_total_mwh: f64,
    outages: &[OutageRecord],
    default_demand_mw: f64,
) -> Result<EnergyDistribution> {
    if !default_demand_mw.is_finite() || default_demand_mw <= 0.0 {
        return Err(Error::Domain(format!("default demand {default_demand_mw} MW must be positive")));
    }
    let mut unserved = 0.0;
    for o in outages {
        if o.producer_id != producer_id {
            return Err(Error::Domain(format!(
                "outage for {} passed with producer {producer_id}",
                o.producer_id
            )));
        }
        unserved += o.duration_h * o.demand_mw.unwrap_or(default_demand_mw);
    }
    EnergyDistribution::new(
        producer_id,
        e_total_mwh + unserved,
        OUTAGE_STD_FRACTION * unserved,
        e_total_mwh,
    )
}

/// One draw at or above `base_mwh`; redraws until accepted.
pub fn sample_energy<R: rand_core::RngCore + ?Sized>(dist: &EnergyDistribution, rng: &mut R) -> Result<f64> {
    if dist.std_mwh == 0.0 {
        if dist.mean_mwh < dist.base_mwh {
            return Err(Error::Domain(format!("{}: degenerate distribution below base", dist.producer_id)));
        }
        return Ok(dist.mean_mwh);
    }
    for _ in 0..MAX_REJECTIONS {
        let e = dist.mean_mwh + dist.std_mwh * standard_normal(rng);
        if e >= dist.base_mwh {
            return Ok(e);
        }
    }
    Err(Error::Domain(format!(
        "{}: no draw at or above base after {MAX_REJECTIONS} attempts",
        dist.producer_id
    )))
}

/// Denominator guard below which a sample's cost is undefined.
pub fn energy_guard(e_base_mwh: f64) -> f64 {
    1e-9 * e_base_mwh.abs().max(1.0)
}

/// Rial/kWh, or `None` when the energy increase is below the guard.
pub fn interruption_cost(beta: f64, sv_base: f64, e0_mwh: f64, e_base_mwh: f64) -> Option<f64> {
    let de = e0_mwh - e_base_mwh;
    if de.is_nan() || de <= energy_guard(e_base_mwh) {
        return None;
    }
    Some((beta - sv_base) / de * RIAL_E10_PER_MWH_TO_RIAL_PER_KWH)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostSample {
    pub index: usize,
    pub e0_mwh: f64,
    pub beta: f64,
    pub ic_rial_per_kwh: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterruptionCostEstimate {
    pub producer_id: String,
    pub samples: Vec<CostSample>,
    /// `None` when every sample was skipped.
    pub mean_ic: Option<f64>,
    /// Sample standard deviation (`n - 1`); zero for a single used sample.
    pub std_ic: Option<f64>,
    pub seed: u64,
    pub n_requested: usize,
    pub n_used: usize,
}

/// Mean and sample standard deviation in index order.
pub fn mean_std(values: &[f64]) -> (Option<f64>, Option<f64>) {
    if values.is_empty() {
        return (None, None);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = if values.len() < 2 {
        0.0
    } else {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    };
    (Some(mean), Some(std))
}

/// Cost evaluated at a single electricity level.
pub fn point_cost(dataset: &Dataset, index: usize, z0: f64, e0_mwh: f64) -> Result<(f64, Option<f64>)> {
    let producer = dataset.get(index)?;
    let inputs = perturbed_inputs(producer, e0_mwh)?;
    let beta = estimate_output(dataset, index, &inputs, z0)?.beta;
    let ic = interruption_cost(beta, producer.sales_value, e0_mwh, producer.electricity_mwh);
    Ok((beta, ic))
}

/// Cost at `e0 = mean_mwh`, the deterministic counterpart of the Monte Carlo mean.
pub fn mean_point_cost(dataset: &Dataset, index: usize, dist: &EnergyDistribution) -> Result<Option<f64>> {
    let z0 = dea::efficiency(dataset, index)?.z;
    Ok(point_cost(dataset, index, z0, dist.mean_mwh)?.1)
}

pub fn monte_carlo_estimate(
    dataset: &Dataset,
    index: usize,
    dist: &EnergyDistribution,
    n: usize,
    seed: u64,
) -> Result<InterruptionCostEstimate> {
    monte_carlo_estimate_with(dataset, index, dist, n, seed, Execution::default())
}

pub fn monte_carlo_estimate_with(
    dataset: &Dataset,
    index: usize,
    dist: &EnergyDistribution,
    n: usize,
    seed: u64,
    execution: Execution,
) -> Result<InterruptionCostEstimate> {
    let producer = dataset.get(index)?;
    if n == 0 {
        return Err(Error::Domain("sample count must be at least 1".into()));
    }
    if dist.base_mwh != producer.electricity_mwh {
        return Err(Error::Domain(format!(
            "distribution base {} MWh does not match {} consumption {} MWh",
            dist.base_mwh, producer.id, producer.electricity_mwh
        )));
    }
    let z0 = dea::efficiency(dataset, index)?.z;
    let seeds = sample_seeds(seed, n);

    let evaluated = exec::try_map_indexed(execution, n, |i| {
        let run = || -> Result<Option<CostSample>> {
            let mut rng = sample_rng(seeds[i]);
            let e0 = sample_energy(dist, &mut rng)?;
            let (beta, ic) = point_cost(dataset, index, z0, e0)?;
            Ok(ic.map(|ic| CostSample {
                index: i,
                e0_mwh: e0,
                beta,
                ic_rial_per_kwh: ic,
            }))
        };
        run().map_err(|e| Error::Sample {
            index: i,
            source: Box::new(e),
        })
    })?;

    let samples: Vec<CostSample> = evaluated.into_iter().flatten().collect();
    let ics: Vec<f64> = samples.iter().map(|s| s.ic_rial_per_kwh).collect();
    let (mean_ic, std_ic) = mean_std(&ics);
    Ok(InterruptionCostEstimate {
        producer_id: producer.id.clone(),
        n_used: samples.len(),
        samples,
        mean_ic,
        std_ic,
        seed,
        n_requested: n,
    })
}
