mod common;

use common::{enumerate, rel_close};
use dea_outage::dea::efficiency;
use dea_outage::inverse::{build_inverse_lp, estimate_output, perturbed_inputs, value_curve, PerturbedInputs};
use dea_outage::io::ReferenceData;
use dea_outage::lp::LpStatus;

/// New sales value of P6 at 162403 MWh from an independent solver (HiGHS), frozen.
const HIGHS_P6_BETA: f64 = 969.2905258280325;

#[test]
fn identity_on_reference_producers() {
    let r = ReferenceData::load();
    for (k, p) in r.dataset.producers().iter().enumerate() {
        let z0 = efficiency(&r.dataset, k).unwrap().z;
        let est = estimate_output(&r.dataset, k, &PerturbedInputs::base(p), z0).unwrap();
        assert!(rel_close(est.beta, p.sales_value, 1e-6), "{}: {}", p.id, est.beta);
    }
}

#[test]
fn p6_labor_scaling() {
    let r = ReferenceData::load();
    let x = perturbed_inputs(&r.dataset.producers()[5], 162403.0).unwrap();
    assert!((x.labor_hours - 104.95667376924646).abs() < 1e-10);
    assert_eq!(x.raw_materials, 602.0);
}

#[test]
fn p6_at_table_mean() {
    let r = ReferenceData::load();
    let p = &r.dataset.producers()[5];
    let z0 = efficiency(&r.dataset, 5).unwrap().z;
    let x = perturbed_inputs(p, 162403.0).unwrap();
    let est = estimate_output(&r.dataset, 5, &x, z0).unwrap();
    assert!(rel_close(est.beta, HIGHS_P6_BETA, 1e-8), "{}", est.beta);

    let lp = build_inverse_lp(&r.dataset, 5, &x, z0).unwrap();
    let (status, value) = enumerate(&lp);
    assert_eq!(status, LpStatus::Optimal);
    assert!(rel_close(est.beta, value.unwrap(), 1e-8));

    // Marginal value per kWh near the published figure for P6.
    let ic = (est.beta - p.sales_value) / 490.0 * 1e7;
    assert!((ic - 11702.0).abs() / 11702.0 < 0.01, "{ic}");
}

#[test]
fn doubling_beats_one_and_a_half() {
    let r = ReferenceData::load();
    for (k, p) in r.dataset.producers().iter().enumerate() {
        let z0 = efficiency(&r.dataset, k).unwrap().z;
        let at = |f: f64| {
            let x = perturbed_inputs(p, f * p.electricity_mwh).unwrap();
            estimate_output(&r.dataset, k, &x, z0).unwrap().beta
        };
        let (b15, b20) = (at(1.5), at(2.0));
        assert!(b20 >= p.sales_value && b20 >= b15 - 1e-9 * b15, "{}", p.id);
    }
}

#[test]
fn value_curve_identity_point() {
    let r = ReferenceData::load();
    for (k, p) in r.dataset.producers().iter().enumerate() {
        let c = value_curve(&r.dataset, k, &[p.electricity_mwh]).unwrap();
        assert_eq!(c[0].0, p.electricity_mwh);
        assert!(rel_close(c[0].1, p.sales_value, 1e-9));
    }
}

#[test]
fn monotone_and_concave_in_scale() {
    let r = ReferenceData::load();
    for (k, p) in r.dataset.producers().iter().enumerate() {
        let es: Vec<f64> = (0..=10).map(|i| p.electricity_mwh * (1.0 + 0.1 * i as f64)).collect();
        let c = value_curve(&r.dataset, k, &es).unwrap();
        for w in c.windows(2) {
            assert!(w[1].1 >= w[0].1 - 1e-8 * w[0].1.abs(), "{}", p.id);
        }
        for (a, b) in [(0usize, 10usize), (0, 4), (4, 10), (2, 8)] {
            let mid = (a + b) / 2;
            let lhs = c[mid].1;
            let rhs = 0.5 * (c[a].1 + c[b].1);
            assert!(lhs >= rhs - 1e-8 * c[a].1.abs(), "{}: midpoint {lhs} < chord {rhs}", p.id);
        }
    }
}

#[test]
fn monotone_in_each_input() {
    let r = ReferenceData::load();
    for (k, p) in r.dataset.producers().iter().enumerate() {
        let z0 = efficiency(&r.dataset, k).unwrap().z;
        let base = PerturbedInputs::base(p);
        let beta = |x: PerturbedInputs| estimate_output(&r.dataset, k, &x, z0).unwrap().beta;
        let b0 = beta(base);
        let mut bumps = [base; 3];
        bumps[0].electricity_mwh *= 1.3;
        bumps[1].labor_hours *= 1.3;
        bumps[2].raw_materials *= 1.3;
        for x in bumps {
            assert!(beta(x) >= b0 - 1e-9 * b0);
        }
    }
}
