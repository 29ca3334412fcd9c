mod common;

use common::{enumerate, random_lp, rel_close};
use dea_outage::lp::{solve, LinearProgram, LpSolution, LpStatus, Relation};
use proptest::prelude::*;

/// Dual feasibility and strong duality for an optimal result.
fn check_certificate(lp: &LinearProgram, sol: &LpSolution) {
    let opt = sol.optimum().expect("optimal");
    assert!(lp.max_violation(&opt.variables) <= 1e-8, "primal infeasible");
    let obj: f64 = lp.objective.iter().zip(&opt.variables).map(|(c, x)| c * x).sum();
    assert!(rel_close(obj, opt.objective_value, 1e-8));

    let scale = |i: usize| lp.constraints[i].coefficients.iter().fold(1.0f64, |m, a| m.max(a.abs()));
    for (i, (c, y)) in lp.constraints.iter().zip(&opt.duals).enumerate() {
        let tol = 1e-8 * scale(i).max(y.abs());
        match c.relation {
            Relation::Le => assert!(*y >= -tol, "row {i}: dual {y} on <= row"),
            Relation::Ge => assert!(*y <= tol, "row {i}: dual {y} on >= row"),
            Relation::Eq => {}
        }
    }
    let mut dual_obj: f64 = lp.constraints.iter().zip(&opt.duals).map(|(c, y)| c.rhs * y).sum();
    for j in 0..lp.num_variables() {
        let d = lp.objective[j]
            - lp.constraints
                .iter()
                .zip(&opt.duals)
                .map(|(c, y)| c.coefficients[j] * y)
                .sum::<f64>();
        let tol = 1e-7 * (1.0 + lp.objective[j].abs());
        if lp.lower_bounds[j].is_finite() {
            assert!(d <= tol, "variable {j}: improving reduced cost {d}");
            dual_obj += d * lp.lower_bounds[j];
        } else {
            assert!(d.abs() <= tol, "free variable {j}: reduced cost {d}");
        }
    }
    assert!(
        rel_close(dual_obj, opt.objective_value, 1e-7),
        "duality gap: primal {} dual {dual_obj}",
        opt.objective_value
    );
}

#[test]
fn matches_vertex_enumeration_on_seeded_programs() {
    let mut counts = [0usize; 3];
    for seed in 0..400u64 {
        let lp = random_lp(seed);
        let sol = solve(&lp).unwrap();
        let (status, value) = enumerate(&lp);
        assert_eq!(sol.status(), status, "seed {seed}: {lp:?}");
        if let Some(v) = value {
            let got = sol.objective_value().unwrap();
            assert!(rel_close(got, v, 1e-8), "seed {seed}: simplex {got} vs enumeration {v}");
            check_certificate(&lp, &sol);
        }
        counts[status as usize] += 1;
    }
    // The generator must exercise every outcome.
    assert!(counts.iter().all(|&c| c > 0), "{counts:?}");
    assert!(counts[LpStatus::Optimal as usize] >= 200, "{counts:?}");
}

#[test]
fn solve_is_deterministic() {
    for seed in 0..50 {
        let lp = random_lp(seed);
        assert_eq!(solve(&lp).unwrap(), solve(&lp).unwrap());
    }
}

fn arb_lp() -> impl Strategy<Value = LinearProgram> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(n, m)| {
        (
            prop::collection::vec(-5i32..=5, n),
            prop::collection::vec((prop::collection::vec(-5i32..=5, n), 0u8..3, -10i32..=20), m),
            prop::collection::vec(1i32..=4, n),
            5i32..=30,
        )
            .prop_map(move |(c, rows, cap, cap_rhs)| {
                let mut lp = LinearProgram::maximize(c.into_iter().map(f64::from).collect());
                lp.add_constraint(cap.into_iter().map(f64::from).collect(), Relation::Le, cap_rhs as f64);
                for (a, r, b) in rows {
                    let rel = [Relation::Le, Relation::Ge, Relation::Eq][r as usize];
                    lp.add_constraint(a.into_iter().map(f64::from).collect(), rel, b as f64);
                }
                lp
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn agrees_with_enumeration(lp in arb_lp()) {
        let sol = solve(&lp).unwrap();
        let (status, value) = enumerate(&lp);
        prop_assert_eq!(sol.status(), status);
        if let Some(v) = value {
            prop_assert!(rel_close(sol.objective_value().unwrap(), v, 1e-8));
            check_certificate(&lp, &sol);
        }
    }

    #[test]
    fn row_scaling_preserves_status(lp in arb_lp(), row in 0usize..7, exp in -3.0f64..3.0) {
        let row = row % lp.constraints.len();
        let factor = 10f64.powf(exp);
        let mut scaled = lp.clone();
        scaled.constraints[row].coefficients.iter_mut().for_each(|a| *a *= factor);
        scaled.constraints[row].rhs *= factor;
        let a = solve(&lp).unwrap();
        let b = solve(&scaled).unwrap();
        prop_assert_eq!(a.status(), b.status());
        if let (Some(x), Some(y)) = (a.objective_value(), b.objective_value()) {
            prop_assert!(rel_close(x, y, 1e-8), "{} vs {}", x, y);
        }
    }
}
