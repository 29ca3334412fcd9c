//! Single-output inverse DEA: the largest sales value a producer can claim
//! for increased inputs while keeping its CCR efficiency `1 / z0`.
//!
//! Over `(SV, λ_1..λ_n)`:
//!
//! ```text
//! maximize SV
//!   Σ λ_i E_i ≤ E',  Σ λ_i L_i ≤ L',  Σ λ_i R_i ≤ R'
//!   Σ λ_i SV_i − z0 SV ≥ 0
//!   SV ≥ SV_o,  λ ≥ 0
//! ```

use serde::Serialize;

use crate::dea::{self, Dataset, Producer};
use crate::error::{Error, Result};
use crate::lp::{self, LinearProgram, LpSolution, Relation};

/// Increased inputs `x0 + Δx`, `Δx ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerturbedInputs {
    pub electricity_mwh: f64,
    pub labor_hours: f64,
    pub raw_materials: f64,
}

impl PerturbedInputs {
    /// Inputs identical to the producer's own.
    pub fn base(producer: &Producer) -> Self {
        PerturbedInputs {
            electricity_mwh: producer.electricity_mwh,
            labor_hours: producer.labor_hours,
            raw_materials: producer.raw_materials,
        }
    }

    pub fn check_against(&self, producer: &Producer) -> Result<()> {
        let pairs = [
            ("electricity", self.electricity_mwh, producer.electricity_mwh),
            ("labor", self.labor_hours, producer.labor_hours),
            ("raw materials", self.raw_materials, producer.raw_materials),
        ];
        for (name, new, base) in pairs {
            if !new.is_finite() || new < base {
                return Err(Error::Domain(format!(
                    "{name} input {new} is below the base value {base} of {}",
                    producer.id
                )));
            }
        }
        Ok(())
    }
}

/// Electricity raised to `e_new`, labor scaled proportionally, raw materials held.
pub fn perturbed_inputs(producer: &Producer, e_new: f64) -> Result<PerturbedInputs> {
    if !e_new.is_finite() || e_new < producer.electricity_mwh {
        return Err(Error::Domain(format!(
            "new electricity {e_new} MWh is below the base {} MWh of {}",
            producer.electricity_mwh, producer.id
        )));
    }
    let labor_hours = if e_new == producer.electricity_mwh {
        producer.labor_hours
    } else {
        producer.labor_hours * (e_new / producer.electricity_mwh)
    };
    Ok(PerturbedInputs {
        electricity_mwh: e_new,
        labor_hours,
        raw_materials: producer.raw_materials,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputEstimate {
    /// New sales value, 10^10 Rial.
    pub beta: f64,
    pub lambda: Vec<f64>,
}

/// Variable 0 is the new sales value, `1..=n` the weights.
pub fn build_inverse_lp(dataset: &Dataset, index: usize, inputs: &PerturbedInputs, z0: f64) -> Result<LinearProgram> {
    let target = dataset.get(index)?;
    let n = dataset.len();
    let mut objective = vec![0.0; n + 1];
    objective[0] = 1.0;
    let mut lp = LinearProgram::maximize(objective);

    let column = |f: fn(&Producer) -> f64| {
        let mut row = Vec::with_capacity(n + 1);
        row.push(0.0);
        row.extend(dataset.producers().iter().map(f));
        row
    };
    lp.add_constraint(column(|p| p.electricity_mwh), Relation::Le, inputs.electricity_mwh)
        .add_constraint(column(|p| p.labor_hours), Relation::Le, inputs.labor_hours)
        .add_constraint(column(|p| p.raw_materials), Relation::Le, inputs.raw_materials);
    let mut output = column(|p| p.sales_value);
    output[0] = -z0;
    lp.add_constraint(output, Relation::Ge, 0.0);
    lp.set_lower_bound(0, target.sales_value);
    Ok(lp)
}

/// `z0` must be the CCR optimum of the same producer on the same dataset.
pub fn estimate_output(dataset: &Dataset, index: usize, inputs: &PerturbedInputs, z0: f64) -> Result<OutputEstimate> {
    let target = dataset.get(index)?;
    if !z0.is_finite() || z0 < 1.0 {
        return Err(Error::Domain(format!("z0 = {z0} must be a finite value ≥ 1")));
    }
    inputs.check_against(target)?;
    let lp = build_inverse_lp(dataset, index, inputs, z0)?;
    match lp::solve(&lp)? {
        LpSolution::Optimal(opt) => Ok(OutputEstimate {
            beta: opt.objective_value.max(target.sales_value),
            lambda: opt.variables[1..].iter().map(|v| v.max(0.0)).collect(),
        }),
        LpSolution::Unbounded => Err(Error::UnboundedEstimate {
            producer: target.id.clone(),
        }),
        LpSolution::Infeasible => Err(Error::Internal {
            producer: target.id.clone(),
            status: lp::LpStatus::Infeasible,
            lp: Box::new(lp),
        }),
    }
}

/// `(e, beta)` for each electricity level, with labor scaled and raw materials held.
pub fn value_curve(dataset: &Dataset, index: usize, e_values: &[f64]) -> Result<Vec<(f64, f64)>> {
    let producer = dataset.get(index)?;
    let z0 = dea::efficiency(dataset, index)?.z;
    e_values
        .iter()
        .map(|&e| {
            let inputs = perturbed_inputs(producer, e)?;
            Ok((e, estimate_output(dataset, index, &inputs, z0)?.beta))
        })
        .collect()
}
