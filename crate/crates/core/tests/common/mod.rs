#![allow(dead_code)]

use dea_outage::lp::{LinearProgram, LpStatus, Relation};
use dea_outage::rng::{sample_rng, uniform};
use rand_core::RngCore;

/// Brute-force LP oracle: enumerate every basic point (intersection of `n`
/// tight constraints or bounds), keep the feasible ones, take the best.
/// Requires finite lower bounds so a nonempty region has a vertex.
/// Unboundedness is detected by adding a bounding box at two sizes and
/// checking whether the optimum moves.
pub fn enumerate(lp: &LinearProgram) -> (LpStatus, Option<f64>) {
    assert!(lp.lower_bounds.iter().all(|l| l.is_finite()));
    let small = enumerate_boxed(lp, 1e6);
    let Some(v_small) = small else {
        return (LpStatus::Infeasible, None);
    };
    let v_big = enumerate_boxed(lp, 1e7).expect("a larger box stays feasible");
    if (v_big - v_small).abs() > 1e-6 * (1.0 + v_small.abs()) {
        (LpStatus::Unbounded, None)
    } else {
        (LpStatus::Optimal, Some(v_small))
    }
}

fn enumerate_boxed(lp: &LinearProgram, bound: f64) -> Option<f64> {
    let n = lp.num_variables();
    // Every constraint as (a, rel, b), bounds included as x_j >= l_j.
    let mut all: Vec<(Vec<f64>, Relation, f64)> = lp
        .constraints
        .iter()
        .map(|c| (c.coefficients.clone(), c.relation, c.rhs))
        .collect();
    for j in 0..n {
        let mut a = vec![0.0; n];
        a[j] = 1.0;
        all.push((a, Relation::Ge, lp.lower_bounds[j]));
    }
    let shift: f64 = lp.lower_bounds.iter().sum();
    all.push((vec![1.0; n], Relation::Le, bound + shift));

    let mut best: Option<f64> = None;
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let a: Vec<Vec<f64>> = idx.iter().map(|&i| all[i].0.clone()).collect();
        let b: Vec<f64> = idx.iter().map(|&i| all[i].2).collect();
        if let Some(x) = gauss_solve(a, b) {
            if feasible(&all, &x) {
                let v: f64 = lp.objective.iter().zip(&x).map(|(c, x)| c * x).sum();
                best = Some(best.map_or(v, |b: f64| b.max(v)));
            }
        }
        if !next_combination(&mut idx, all.len()) {
            break;
        }
    }
    best
}

fn feasible(all: &[(Vec<f64>, Relation, f64)], x: &[f64]) -> bool {
    all.iter().all(|(a, rel, b)| {
        let lhs: f64 = a.iter().zip(x).map(|(a, x)| a * x).sum();
        let tol = 1e-9 * (1.0 + b.abs() + lhs.abs());
        match rel {
            Relation::Le => lhs <= b + tol,
            Relation::Ge => lhs >= b - tol,
            Relation::Eq => (lhs - b).abs() <= tol,
        }
    })
}

fn next_combination(idx: &mut [usize], total: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < total - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Gaussian elimination with partial pivoting; `None` when singular.
fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[p][col].abs() < 1e-9 {
            return None;
        }
        a.swap(col, p);
        b.swap(col, p);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            let (top, bottom) = a.split_at_mut(r);
            for (dst, src) in bottom[0][col..n].iter_mut().zip(&top[col][col..n]) {
                *dst -= f * src;
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

fn small_int<R: RngCore>(rng: &mut R, lo: i64, hi: i64) -> f64 {
    let span = (hi - lo + 1) as f64;
    (lo + (uniform(rng) * span).floor() as i64) as f64
}

/// Random program with at most 6 variables and 6 constraints. About four in
/// five carry a positive capacity row, so most are bounded.
pub fn random_lp(seed: u64) -> LinearProgram {
    let mut rng = sample_rng(seed);
    let n = 1 + (uniform(&mut rng) * 6.0) as usize;
    let m = 1 + (uniform(&mut rng) * 6.0) as usize;
    let objective = (0..n).map(|_| small_int(&mut rng, -5, 5)).collect();
    let mut lp = LinearProgram::maximize(objective);
    let capped = uniform(&mut rng) < 0.8;
    for i in 0..m {
        if capped && i == 0 {
            let coeffs = (0..n).map(|_| small_int(&mut rng, 1, 4)).collect();
            lp.add_constraint(coeffs, Relation::Le, small_int(&mut rng, 5, 30));
            continue;
        }
        let coeffs = (0..n).map(|_| small_int(&mut rng, -5, 5)).collect();
        let r = uniform(&mut rng);
        let rel = if r < 0.6 {
            Relation::Le
        } else if r < 0.9 {
            Relation::Ge
        } else {
            Relation::Eq
        };
        lp.add_constraint(coeffs, rel, small_int(&mut rng, -10, 20));
    }
    for j in 0..n {
        if uniform(&mut rng) < 0.2 {
            lp.set_lower_bound(j, small_int(&mut rng, -3, 2));
        }
    }
    lp
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}
