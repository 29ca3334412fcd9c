//! Producers, datasets and output-oriented CCR efficiency.
//!
//! For producer `o` the CCR program is, over `(z, λ_1..λ_n)`:
//!
//! ```text
//! maximize z
//!   Σ λ_i E_i ≤ E_o,  Σ λ_i R_i ≤ R_o,  Σ λ_i L_i ≤ L_o
//!   Σ λ_i SV_i − z SV_o ≥ 0
//!   z ≥ 1,  λ ≥ 0
//! ```
//!
//! The efficiency index is `1 / z`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::lp::{self, LinearProgram, LpSolution, Relation};

/// One decision-making unit: three inputs and a single output.
///
/// Units follow the reference dataset: electricity in MWh, raw materials and
/// sales in 10^10 Rial, labor in 10^6 hours.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Producer {
    pub id: String,
    pub electricity_mwh: f64,
    pub raw_materials: f64,
    pub labor_hours: f64,
    pub sales_value: f64,
}

impl Producer {
    pub fn new(
        id: impl Into<String>,
        electricity_mwh: f64,
        raw_materials: f64,
        labor_hours: f64,
        sales_value: f64,
    ) -> Result<Self> {
        let p = Producer {
            id: id.into(),
            electricity_mwh,
            raw_materials,
            labor_hours,
            sales_value,
        };
        p.validate()?;
        Ok(p)
    }

    /// Inputs in model order: electricity, raw materials, labor.
    pub fn inputs(&self) -> [f64; 3] {
        [self.electricity_mwh, self.raw_materials, self.labor_hours]
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |reason: &str| {
            Err(Error::InvalidProducer {
                id: self.id.clone(),
                reason: reason.to_string(),
            })
        };
        if self.id.trim().is_empty() {
            return fail("empty id");
        }
        let inputs = self.inputs();
        if inputs.iter().chain([&self.sales_value]).any(|v| !v.is_finite()) {
            return fail("non-finite value");
        }
        if self.sales_value.is_nan() || self.sales_value <= 0.0 {
            return fail("sales value must be positive");
        }
        if inputs.iter().any(|&v| v < 0.0) {
            return fail("inputs must be non-negative");
        }
        if inputs.iter().all(|&v| v == 0.0) {
            return fail("at least one input must be positive");
        }
        Ok(())
    }
}

/// Ordered, id-unique set of producers. `λ_i` aligns with this order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dataset {
    producers: Vec<Producer>,
}

impl Dataset {
    pub fn new(producers: Vec<Producer>) -> Result<Self> {
        if producers.is_empty() {
            return Err(Error::InvalidDataset("no producers".into()));
        }
        let mut seen = HashSet::new();
        for p in &producers {
            p.validate()?;
            if !seen.insert(p.id.as_str()) {
                return Err(Error::InvalidDataset(format!("duplicate producer id {}", p.id)));
            }
        }
        Ok(Dataset { producers })
    }

    pub fn producers(&self) -> &[Producer] {
        &self.producers
    }

    pub fn len(&self) -> usize {
        self.producers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.producers.is_empty()
    }

    pub fn get(&self, index: usize) -> Result<&Producer> {
        self.producers.get(index).ok_or(Error::IndexOutOfRange {
            index,
            len: self.producers.len(),
        })
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.producers.iter().position(|p| p.id == id)
    }

    /// Copy of the dataset with one input column multiplied by `factor`
    /// (0 = electricity, 1 = raw materials, 2 = labor).
    pub fn with_scaled_input(&self, input: usize, factor: f64) -> Result<Self> {
        let producers = self
            .producers
            .iter()
            .map(|p| {
                let mut q = p.clone();
                match input {
                    0 => q.electricity_mwh *= factor,
                    1 => q.raw_materials *= factor,
                    2 => q.labor_hours *= factor,
                    _ => return Err(Error::Domain(format!("no input column {input}"))),
                }
                Ok(q)
            })
            .collect::<Result<Vec<_>>>()?;
        Dataset::new(producers)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EfficiencyResult {
    pub producer_id: String,
    /// Optimal output expansion factor, `z ≥ 1`.
    pub z: f64,
    /// `1 / z`.
    pub efficiency_index: f64,
    /// Virtual-producer weights. Informational only: alternative optima exist.
    pub lambda: Vec<f64>,
}

/// Builds the CCR program for producer `index`. Variable 0 is `z`, variables
/// `1..=n` are the `λ` weights.
pub fn build_ccr_lp(dataset: &Dataset, index: usize) -> Result<LinearProgram> {
    let target = dataset.get(index)?;
    let n = dataset.len();
    let mut objective = vec![0.0; n + 1];
    objective[0] = 1.0;
    let mut lp = LinearProgram::maximize(objective);

    let x0 = target.inputs();
    for (k, &bound) in x0.iter().enumerate() {
        let mut row = Vec::with_capacity(n + 1);
        row.push(0.0);
        row.extend(dataset.producers().iter().map(|p| p.inputs()[k]));
        lp.add_constraint(row, Relation::Le, bound);
    }

    let mut row = Vec::with_capacity(n + 1);
    row.push(-target.sales_value);
    row.extend(dataset.producers().iter().map(|p| p.sales_value));
    lp.add_constraint(row, Relation::Ge, 0.0);

    lp.set_lower_bound(0, 1.0);
    Ok(lp)
}

pub fn efficiency(dataset: &Dataset, index: usize) -> Result<EfficiencyResult> {
    let lp = build_ccr_lp(dataset, index)?;
    let producer_id = dataset.get(index)?.id.clone();
    match lp::solve(&lp)? {
        LpSolution::Optimal(opt) => {
            let z = opt.objective_value.max(1.0);
            let lambda = opt.variables[1..].iter().map(|v| v.max(0.0)).collect();
            Ok(EfficiencyResult {
                producer_id,
                z,
                efficiency_index: 1.0 / z,
                lambda,
            })
        }
        other => Err(Error::Internal {
            producer: producer_id,
            status: other.status(),
            lp: Box::new(lp),
        }),
    }
}

pub fn efficiency_all(dataset: &Dataset) -> Result<Vec<EfficiencyResult>> {
    efficiency_all_with(dataset, Execution::default())
}

pub fn efficiency_all_with(dataset: &Dataset, execution: Execution) -> Result<Vec<EfficiencyResult>> {
    exec::try_map_indexed(execution, dataset.len(), |k| {
        efficiency(dataset, k).map_err(|e| e.for_producer(&dataset.producers()[k].id))
    })
}
