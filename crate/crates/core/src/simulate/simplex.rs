//! Dense bounded-variable primal simplex. Dantzig pricing, switching to
//! Bland's rule while degenerate pivots stall.
//!
//! Solves `min cᵀx` subject to rows `aᵀx ≤ b` or `aᵀx = b` and box bounds
//! `0 ≤ x ≤ u` (`u` may be infinite). Phase one drives artificial variables
//! out; phase two optimizes the objective. Upper bounds are handled by bound
//! flips rather than explicit rows.

use crate::error::{Error, Result};

/// Feasibility and optimality tolerance.
pub const TOL: f64 = 1e-9;

/// Pivot budget; exceeding it is reported as cycling.
pub const PIVOT_LIMIT: usize = 1_000_000;

/// Consecutive degenerate pivots before pricing falls back to Bland's rule.
pub const STALL_LIMIT: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpRow {
    pub coeffs: Vec<f64>,
    pub sense: Sense,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub rows: Vec<LpRow>,
    pub upper: Vec<f64>,
}

impl LpProblem {
    /// `min ⟨c, x⟩` over the unit box with no further rows.
    pub fn unit_box(objective: Vec<f64>) -> Self {
        let n = objective.len();
        Self {
            objective,
            rows: Vec::new(),
            upper: vec![1.0; n],
        }
    }

    pub fn add_le(&mut self, coeffs: Vec<f64>, rhs: f64) {
        self.rows.push(LpRow {
            coeffs,
            sense: Sense::Le,
            rhs,
        });
    }

    pub fn add_eq(&mut self, coeffs: Vec<f64>, rhs: f64) {
        self.rows.push(LpRow {
            coeffs,
            sense: Sense::Eq,
            rhs,
        });
    }

    fn validate(&self) -> Result<()> {
        let n = self.objective.len();
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        if self.upper.len() != n {
            return bad("upper bound length mismatch");
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return bad("non-finite objective");
        }
        if self.upper.iter().any(|u| u.is_nan() || *u < 0.0) {
            return bad("upper bounds must be nonnegative");
        }
        for r in &self.rows {
            if r.coeffs.len() != n || r.coeffs.iter().any(|c| !c.is_finite()) || !r.rhs.is_finite() {
                return bad("malformed constraint row");
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub pivots: usize,
}

struct Tableau {
    t: Vec<Vec<f64>>,
    beta: Vec<f64>,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    at_upper: Vec<bool>,
    upper: Vec<f64>,
    pivots: usize,
}

impl Tableau {
    fn value(&self, j: usize) -> f64 {
        if self.at_upper[j] {
            self.upper[j]
        } else {
            0.0
        }
    }

    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut d = cost.to_vec();
        for (r, row) in self.t.iter().enumerate() {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                for (dj, a) in d.iter_mut().zip(row) {
                    *dj -= cb * a;
                }
            }
        }
        d
    }

    fn pivot(&mut self, r: usize, j: usize, d: &mut [f64]) {
        let p = self.t[r][j];
        for a in self.t[r].iter_mut() {
            *a /= p;
        }
        let prow = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[j];
            if f != 0.0 {
                for (a, b) in row.iter_mut().zip(&prow) {
                    *a -= f * b;
                }
                row[j] = 0.0;
            }
        }
        let f = d[j];
        if f != 0.0 {
            for (a, b) in d.iter_mut().zip(&prow) {
                *a -= f * b;
            }
            d[j] = 0.0;
        }
        let leaving = self.basis[r];
        self.is_basic[leaving] = false;
        self.is_basic[j] = true;
        self.at_upper[j] = false;
        self.basis[r] = j;
    }

    fn optimize(&mut self, cost: &[f64]) -> Result<()> {
        let mut d = self.reduced_costs(cost);
        let ncols = cost.len();
        let mut stall = 0usize;
        loop {
            self.pivots += 1;
            if self.pivots > PIVOT_LIMIT {
                return Err(Error::Cycling(PIVOT_LIMIT));
            }
            let eligible = |j: usize| {
                !self.is_basic[j]
                    && ((!self.at_upper[j] && d[j] < -TOL && self.upper[j] > 0.0)
                        || (self.at_upper[j] && d[j] > TOL))
            };
            let entering = if stall > STALL_LIMIT {
                (0..ncols).find(|&j| eligible(j))
            } else {
                (0..ncols)
                    .filter(|&j| eligible(j))
                    .fold(None, |acc: Option<usize>, j| match acc {
                        Some(k) if d[k].abs() >= d[j].abs() => Some(k),
                        _ => Some(j),
                    })
            };
            let Some(j) = entering else {
                return Ok(());
            };
            let dir = if self.at_upper[j] { -1.0 } else { 1.0 };
            let mut best: Option<(f64, usize)> = None;
            for (r, row) in self.t.iter().enumerate() {
                let alpha = row[j] * dir;
                let b = self.basis[r];
                let ratio = if alpha > TOL {
                    self.beta[r].max(0.0) / alpha
                } else if alpha < -TOL && self.upper[b].is_finite() {
                    (self.upper[b] - self.beta[r]).max(0.0) / -alpha
                } else {
                    continue;
                };
                let better = match best {
                    None => true,
                    Some((br, bi)) => ratio < br - 1e-12 || (ratio <= br + 1e-12 && b < self.basis[bi]),
                };
                if better {
                    best = Some((ratio, r));
                }
            }
            let flip = self.upper[j];
            let step = best.map_or(flip, |(st, _)| st.min(flip));
            if step > TOL {
                stall = 0;
            } else {
                stall += 1;
            }
            match best {
                Some((step, r)) if step < flip => {
                    let entering_value = self.value(j) + dir * step;
                    for (i, row) in self.t.iter().enumerate() {
                        self.beta[i] -= row[j] * dir * step;
                    }
                    let to_upper = self.t[r][j] * dir < 0.0;
                    let leaving = self.basis[r];
                    self.pivot(r, j, &mut d);
                    self.beta[r] = entering_value;
                    self.at_upper[leaving] = to_upper;
                }
                _ if flip.is_finite() => {
                    for (i, row) in self.t.iter().enumerate() {
                        self.beta[i] -= row[j] * dir * flip;
                    }
                    self.at_upper[j] = !self.at_upper[j];
                }
                _ => return Err(Error::Unbounded),
            }
        }
    }
}

/// Optimal basic feasible solution of `p`.
pub fn simplex_solve(p: &LpProblem) -> Result<LpSolution> {
    p.validate()?;
    let n = p.objective.len();
    let m = p.rows.len();
    let n_slack = p.rows.iter().filter(|r| r.sense == Sense::Le).count();
    let needs_art: Vec<bool> = p
        .rows
        .iter()
        .map(|r| r.sense == Sense::Eq || r.rhs < 0.0)
        .collect();
    let n_art = needs_art.iter().filter(|&&a| a).count();
    let ncols = n + n_slack + n_art;

    let mut t = vec![vec![0.0; ncols]; m];
    let mut beta = vec![0.0; m];
    let mut basis = vec![0; m];
    let mut upper = p.upper.clone();
    upper.resize(ncols, f64::INFINITY);
    let (mut next_slack, mut next_art) = (n, n + n_slack);
    for (r, row) in p.rows.iter().enumerate() {
        let sign = if row.rhs < 0.0 { -1.0 } else { 1.0 };
        for (dst, &a) in t[r].iter_mut().zip(&row.coeffs) {
            *dst = sign * a;
        }
        beta[r] = sign * row.rhs;
        if row.sense == Sense::Le {
            t[r][next_slack] = sign;
            basis[r] = next_slack;
            next_slack += 1;
        }
        if needs_art[r] {
            t[r][next_art] = 1.0;
            basis[r] = next_art;
            next_art += 1;
        }
    }
    let mut is_basic = vec![false; ncols];
    for &b in &basis {
        is_basic[b] = true;
    }
    let mut tab = Tableau {
        t,
        beta,
        basis,
        is_basic,
        at_upper: vec![false; ncols],
        upper,
        pivots: 0,
    };

    let art = n + n_slack..ncols;
    if n_art > 0 {
        let mut cost = vec![0.0; ncols];
        cost[art.clone()].iter_mut().for_each(|c| *c = 1.0);
        tab.optimize(&cost)?;
        let infeas: f64 = (0..m).filter(|&r| art.contains(&tab.basis[r])).map(|r| tab.beta[r]).sum();
        let scale = 1.0 + p.rows.iter().map(|r| r.rhs.abs()).fold(0.0, f64::max);
        if infeas > 1e-7 * scale {
            return Err(Error::Infeasible);
        }
        for j in art.clone() {
            tab.upper[j] = 0.0;
        }
        // Drive zero-level artificials out of the basis where possible.
        let mut dummy = vec![0.0; ncols];
        for r in 0..m {
            if !art.contains(&tab.basis[r]) {
                continue;
            }
            if let Some(j) = (0..n + n_slack).find(|&j| !tab.is_basic[j] && tab.t[r][j].abs() > TOL) {
                let v = tab.value(j);
                tab.pivot(r, j, &mut dummy);
                tab.beta[r] = v;
            }
        }
    }

    let mut cost = vec![0.0; ncols];
    cost[..n].copy_from_slice(&p.objective);
    tab.optimize(&cost)?;

    let mut x: Vec<f64> = (0..n).map(|j| tab.value(j)).collect();
    for (r, &b) in tab.basis.iter().enumerate() {
        if b < n {
            x[b] = tab.beta[r];
        }
    }
    for (v, &u) in x.iter_mut().zip(&p.upper) {
        *v = v.clamp(0.0, u);
    }
    let objective = x.iter().zip(&p.objective).map(|(a, b)| a * b).sum();
    Ok(LpSolution {
        x,
        objective,
        pivots: tab.pivots,
    })
}
