//! Embedded reference dataset: eight vehicle manufacturers, their published
//! efficiency indices, uninterrupted-energy distributions and expected
//! interruption costs.

use crate::dea::Dataset;
use crate::io::parse::{parse_distributions, parse_producers};
use crate::stochastic::EnergyDistribution;

pub const PRODUCERS_CSV: &str = include_str!("../../data/producers.csv");
pub const DISTRIBUTIONS_CSV: &str = include_str!("../../data/distributions.csv");

pub const IDS: [&str; 8] = ["P1", "P2", "P3", "P4", "P5", "P6", "P7", "P8"];

pub const EXPECTED_EFFICIENCY: [f64; 8] = [1.0, 0.83914, 1.0, 1.0, 0.86901, 0.89154, 1.0, 1.0];

/// Rial/kWh.
pub const EXPECTED_COST: [f64; 8] = [
    6704.818, 13378.31, 9603.08, 13576.77, 13854.55, 11702.0, 16446.59, 15645.68,
];

#[derive(Debug, Clone)]
pub struct ReferenceData {
    pub dataset: Dataset,
    pub distributions: Vec<EnergyDistribution>,
    pub expected_costs: Vec<(String, f64)>,
    pub expected_efficiencies: Vec<(String, f64)>,
}

impl ReferenceData {
    pub fn load() -> Self {
        let dataset = parse_producers(PRODUCERS_CSV).expect("embedded producers file is valid");
        let distributions =
            parse_distributions(DISTRIBUTIONS_CSV, &dataset).expect("embedded distributions file is valid");
        let pair = |v: &[f64; 8]| IDS.iter().zip(v).map(|(id, x)| (id.to_string(), *x)).collect();
        ReferenceData {
            dataset,
            distributions,
            expected_costs: pair(&EXPECTED_COST),
            expected_efficiencies: pair(&EXPECTED_EFFICIENCY),
        }
    }

    pub fn expected_cost(&self, id: &str) -> Option<f64> {
        self.expected_costs.iter().find(|(k, _)| k == id).map(|(_, v)| *v)
    }

    pub fn expected_efficiency(&self, id: &str) -> Option<f64> {
        self.expected_efficiencies.iter().find(|(k, _)| k == id).map(|(_, v)| *v)
    }
}
