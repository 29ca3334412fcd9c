//! Dense two-phase simplex solver.
//!
//! Programs are stated in natural form: maximize `c·x` subject to rows
//! `a·x (<=|>=|=) b` and per-variable lower bounds (`0` by default, possibly
//! `-inf` for free variables). Internally every row is scaled to unit
//! infinity norm and sign-normalized to a non-negative right-hand side,
//! bounds are shifted away, and free variables are split.
//!
//! Pricing is Dantzig (largest reduced cost) until the objective stalls for
//! `2 * (rows + columns)` consecutive pivots, after which Bland's rule is
//! used for the remainder of the phase.

use thiserror::Error;

/// Smallest magnitude accepted as a pivot element.
pub const PIVOT_TOLERANCE: f64 = 1e-10;
/// Feasibility and optimality tolerance on the scaled tableau.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-8;

const MAX_ITERATIONS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coefficients: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

/// A maximization problem over `objective.len()` variables.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub lower_bounds: Vec<f64>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("constraint {row} has {found} coefficients, expected {expected}")]
    DimensionMismatch {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("lower bound vector has {found} entries, expected {expected}")]
    BoundsMismatch { expected: usize, found: usize },
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("simplex did not terminate within {0} iterations")]
    IterationLimit(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    pub objective_value: f64,
    pub variables: Vec<f64>,
    /// One multiplier per constraint, in the sign convention of a
    /// maximization: `>= 0` on `<=` rows, `<= 0` on `>=` rows, free on `=`.
    pub duals: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpSolution {
    Optimal(Optimum),
    Infeasible,
    Unbounded,
}

impl LpSolution {
    pub fn status(&self) -> LpStatus {
        match self {
            LpSolution::Optimal(_) => LpStatus::Optimal,
            LpSolution::Infeasible => LpStatus::Infeasible,
            LpSolution::Unbounded => LpStatus::Unbounded,
        }
    }

    pub fn optimum(&self) -> Option<&Optimum> {
        match self {
            LpSolution::Optimal(opt) => Some(opt),
            _ => None,
        }
    }

    pub fn objective_value(&self) -> Option<f64> {
        self.optimum().map(|o| o.objective_value)
    }

    pub fn variables(&self) -> Option<&[f64]> {
        self.optimum().map(|o| o.variables.as_slice())
    }
}

impl LinearProgram {
    /// New program maximizing `objective`, all variables bounded below by zero.
    pub fn maximize(objective: Vec<f64>) -> Self {
        let n = objective.len();
        LinearProgram {
            objective,
            constraints: Vec::new(),
            lower_bounds: vec![0.0; n],
        }
    }

    pub fn num_variables(&self) -> usize {
        self.objective.len()
    }

    pub fn add_constraint(&mut self, coefficients: Vec<f64>, relation: Relation, rhs: f64) -> &mut Self {
        self.constraints.push(Constraint {
            coefficients,
            relation,
            rhs,
        });
        self
    }

    pub fn set_lower_bound(&mut self, var: usize, bound: f64) -> &mut Self {
        self.lower_bounds[var] = bound;
        self
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let n = self.num_variables();
        if self.lower_bounds.len() != n {
            return Err(LpError::BoundsMismatch {
                expected: n,
                found: self.lower_bounds.len(),
            });
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(LpError::NonFinite("objective".into()));
        }
        if self.lower_bounds.iter().any(|&l| l.is_nan() || l == f64::INFINITY) {
            return Err(LpError::NonFinite("lower bounds".into()));
        }
        for (row, c) in self.constraints.iter().enumerate() {
            if c.coefficients.len() != n {
                return Err(LpError::DimensionMismatch {
                    row,
                    expected: n,
                    found: c.coefficients.len(),
                });
            }
            if !c.rhs.is_finite() || c.coefficients.iter().any(|a| !a.is_finite()) {
                return Err(LpError::NonFinite(format!("constraint {row}")));
            }
        }
        Ok(())
    }

    /// Largest violation of any row or bound at `x`, measured on rows
    /// scaled to unit infinity norm.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst = 0.0_f64;
        for c in &self.constraints {
            let scale = c.coefficients.iter().fold(0.0_f64, |m, a| m.max(a.abs()));
            let scale = if scale > 0.0 { scale } else { 1.0 };
            let lhs: f64 = c.coefficients.iter().zip(x).map(|(a, v)| a * v).sum();
            let gap = (lhs - c.rhs) / scale;
            let v = match c.relation {
                Relation::Le => gap.max(0.0),
                Relation::Ge => (-gap).max(0.0),
                Relation::Eq => gap.abs(),
            };
            worst = worst.max(v);
        }
        for (v, l) in x.iter().zip(&self.lower_bounds) {
            worst = worst.max(l - v);
        }
        worst
    }
}

/// How an original variable maps onto tableau columns.
#[derive(Debug, Clone, Copy)]
enum VarMap {
    Shifted { col: usize, lower: f64 },
    Split { pos: usize, neg: usize },
}

/// One row after scaling and sign normalization.
struct StdRow {
    coeffs: Vec<f64>,
    relation: Relation,
    rhs: f64,
    /// Original row index and the factor mapping original to scaled row.
    origin: usize,
    factor: f64,
}

struct Tableau {
    rows: usize,
    cols: usize,
    /// Row-major `rows x (cols + 1)`; the last entry of each row is the rhs.
    a: Vec<f64>,
    basis: Vec<usize>,
    /// Reduced costs `c_j - c_B B^-1 a_j`.
    reduced: Vec<f64>,
    value: f64,
    eligible: Vec<bool>,
}

enum PhaseOutcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * (self.cols + 1) + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.a[i * (self.cols + 1) + self.cols]
    }

    fn set_objective(&mut self, costs: &[f64]) {
        self.reduced.copy_from_slice(costs);
        self.value = 0.0;
        for i in 0..self.rows {
            let cb = costs[self.basis[i]];
            if cb == 0.0 {
                continue;
            }
            for j in 0..self.cols {
                self.reduced[j] -= cb * self.at(i, j);
            }
            self.value += cb * self.rhs(i);
        }
    }

    fn pivot(&mut self, p: usize, q: usize) {
        let w = self.cols + 1;
        let piv = self.a[p * w + q];
        for j in 0..w {
            self.a[p * w + j] /= piv;
        }
        self.a[p * w + q] = 1.0;
        let (before, rest) = self.a.split_at_mut(p * w);
        let (prow, after) = rest.split_at_mut(w);
        for row in before.chunks_mut(w).chain(after.chunks_mut(w)) {
            let f = row[q];
            if f != 0.0 {
                for (x, y) in row.iter_mut().zip(prow.iter()) {
                    *x -= f * y;
                }
                row[q] = 0.0;
            }
        }
        let f = self.reduced[q];
        if f != 0.0 {
            for (r, y) in self.reduced.iter_mut().zip(prow.iter()) {
                *r -= f * y;
            }
            self.reduced[q] = 0.0;
            self.value += f * prow[self.cols];
        }
        self.basis[p] = q;
    }

    fn entering(&self, bland: bool) -> Option<usize> {
        let candidates = (0..self.cols).filter(|&j| self.eligible[j] && self.reduced[j] > FEASIBILITY_TOLERANCE);
        if bland {
            candidates.min()
        } else {
            candidates.fold(None, |best: Option<usize>, j| match best {
                Some(b) if self.reduced[b] >= self.reduced[j] => Some(b),
                _ => Some(j),
            })
        }
    }

    fn leaving(&self, q: usize, bland: bool) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for i in 0..self.rows {
            let aiq = self.at(i, q);
            if aiq <= PIVOT_TOLERANCE {
                continue;
            }
            let ratio = self.rhs(i).max(0.0) / aiq;
            best = match best {
                None => Some((i, ratio)),
                Some((b, r)) => {
                    let tie = (ratio - r).abs() <= 1e-12 * (1.0 + r.abs());
                    let better = if tie {
                        if bland {
                            self.basis[i] < self.basis[b]
                        } else {
                            aiq > self.at(b, q)
                        }
                    } else {
                        ratio < r
                    };
                    if better {
                        Some((i, ratio))
                    } else {
                        Some((b, r))
                    }
                }
            };
        }
        best.map(|(i, _)| i)
    }

    fn run(&mut self, iterations: &mut usize) -> Result<PhaseOutcome, LpError> {
        let stall_limit = 2 * (self.rows + self.cols);
        let mut stalled = 0usize;
        let mut bland = false;
        loop {
            let Some(q) = self.entering(bland) else {
                return Ok(PhaseOutcome::Optimal);
            };
            let Some(p) = self.leaving(q, bland) else {
                return Ok(PhaseOutcome::Unbounded);
            };
            *iterations += 1;
            if *iterations > MAX_ITERATIONS {
                return Err(LpError::IterationLimit(MAX_ITERATIONS));
            }
            let before = self.value;
            self.pivot(p, q);
            if self.value > before + FEASIBILITY_TOLERANCE * (1.0 + before.abs()) * 1e-4 {
                stalled = 0;
            } else {
                stalled += 1;
                if stalled >= stall_limit {
                    bland = true;
                }
            }
        }
    }
}

/// Solves `lp`. Deterministic for a given input.
pub fn solve(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    lp.validate()?;
    let n = lp.num_variables();

    let mut maps = Vec::with_capacity(n);
    let mut ncols = 0usize;
    for &l in &lp.lower_bounds {
        if l == f64::NEG_INFINITY {
            maps.push(VarMap::Split { pos: ncols, neg: ncols + 1 });
            ncols += 2;
        } else {
            maps.push(VarMap::Shifted { col: ncols, lower: l });
            ncols += 1;
        }
    }
    let structural = ncols;

    let mut costs = vec![0.0; structural];
    let mut shift = 0.0;
    for (j, m) in maps.iter().enumerate() {
        match *m {
            VarMap::Shifted { col, lower } => {
                costs[col] = lp.objective[j];
                shift += lp.objective[j] * lower;
            }
            VarMap::Split { pos, neg } => {
                costs[pos] = lp.objective[j];
                costs[neg] = -lp.objective[j];
            }
        }
    }

    let mut rows = Vec::with_capacity(lp.constraints.len());
    for (origin, c) in lp.constraints.iter().enumerate() {
        let mut coeffs = vec![0.0; structural];
        let mut rhs = c.rhs;
        for (j, m) in maps.iter().enumerate() {
            let a = c.coefficients[j];
            match *m {
                VarMap::Shifted { col, lower } => {
                    coeffs[col] = a;
                    rhs -= a * lower;
                }
                VarMap::Split { pos, neg } => {
                    coeffs[pos] = a;
                    coeffs[neg] = -a;
                }
            }
        }
        let norm = coeffs.iter().fold(0.0_f64, |m, a| m.max(a.abs()));
        if norm == 0.0 {
            let ok = match c.relation {
                Relation::Le => rhs >= -FEASIBILITY_TOLERANCE,
                Relation::Ge => rhs <= FEASIBILITY_TOLERANCE,
                Relation::Eq => rhs.abs() <= FEASIBILITY_TOLERANCE,
            };
            if !ok {
                return Ok(LpSolution::Infeasible);
            }
            continue;
        }
        let mut factor = 1.0 / norm;
        let mut relation = c.relation;
        if rhs < 0.0 {
            factor = -factor;
            relation = match relation {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
        coeffs.iter_mut().for_each(|a| *a *= factor);
        rows.push(StdRow {
            coeffs,
            relation,
            rhs: rhs * factor,
            origin,
            factor,
        });
    }

    // Column layout: structural | slack/surplus | artificial.
    let m = rows.len();
    let n_slack = rows.iter().filter(|r| r.relation != Relation::Eq).count();
    let n_art = rows.iter().filter(|r| r.relation != Relation::Le).count();
    let cols = structural + n_slack + n_art;
    let w = cols + 1;
    let mut a = vec![0.0; m * w];
    let mut basis = vec![0; m];
    let mut unit_col = vec![0; m];
    let mut next_slack = structural;
    let mut next_art = structural + n_slack;
    for (i, r) in rows.iter().enumerate() {
        a[i * w..i * w + structural].copy_from_slice(&r.coeffs);
        a[i * w + cols] = r.rhs;
        match r.relation {
            Relation::Le => {
                a[i * w + next_slack] = 1.0;
                basis[i] = next_slack;
                unit_col[i] = next_slack;
                next_slack += 1;
            }
            Relation::Ge => {
                a[i * w + next_slack] = -1.0;
                next_slack += 1;
                a[i * w + next_art] = 1.0;
                basis[i] = next_art;
                unit_col[i] = next_art;
                next_art += 1;
            }
            Relation::Eq => {
                a[i * w + next_art] = 1.0;
                basis[i] = next_art;
                unit_col[i] = next_art;
                next_art += 1;
            }
        }
    }
    let first_art = structural + n_slack;

    let mut t = Tableau {
        rows: m,
        cols,
        a,
        basis,
        reduced: vec![0.0; cols],
        value: 0.0,
        eligible: vec![true; cols],
    };
    let mut iterations = 0usize;

    if n_art > 0 {
        let mut phase1 = vec![0.0; cols];
        phase1[first_art..].iter_mut().for_each(|c| *c = -1.0);
        t.set_objective(&phase1);
        t.run(&mut iterations)?;
        let scale = rows.iter().fold(1.0_f64, |s, r| s.max(r.rhs.abs()));
        if t.value < -FEASIBILITY_TOLERANCE * scale {
            return Ok(LpSolution::Infeasible);
        }
        // Drive zero-level artificials out of the basis where possible.
        for i in 0..m {
            if t.basis[i] < first_art {
                continue;
            }
            let q = (0..first_art)
                .filter(|&j| t.at(i, j).abs() > PIVOT_TOLERANCE)
                .max_by(|&x, &y| t.at(i, x).abs().total_cmp(&t.at(i, y).abs()));
            if let Some(q) = q {
                t.pivot(i, q);
            }
        }
        t.eligible[first_art..].iter_mut().for_each(|e| *e = false);
    }

    let mut phase2 = vec![0.0; cols];
    phase2[..structural].copy_from_slice(&costs);
    t.set_objective(&phase2);
    if let PhaseOutcome::Unbounded = t.run(&mut iterations)? {
        return Ok(LpSolution::Unbounded);
    }

    let mut values = vec![0.0; cols];
    for i in 0..m {
        values[t.basis[i]] = t.rhs(i).max(0.0);
    }
    let variables: Vec<f64> = maps
        .iter()
        .map(|m| match *m {
            VarMap::Shifted { col, lower } => lower + values[col],
            VarMap::Split { pos, neg } => values[pos] - values[neg],
        })
        .collect();
    let mut duals = vec![0.0; lp.constraints.len()];
    for (i, r) in rows.iter().enumerate() {
        duals[r.origin] = -t.reduced[unit_col[i]] * r.factor;
    }
    let objective_value: f64 = lp.objective.iter().zip(&variables).map(|(c, x)| c * x).sum();
    debug_assert!((objective_value - (t.value + shift)).abs() <= 1e-6 * (1.0 + objective_value.abs()));

    Ok(LpSolution::Optimal(Optimum {
        objective_value,
        variables,
        duals,
    }))
}
