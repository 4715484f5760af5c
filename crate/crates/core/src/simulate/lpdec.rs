//! LP decoding over the fundamental polytope with adaptive forbidden-set cuts.

use super::simplex::{simplex_solve, LpProblem};
use crate::error::{Error, Result};
use crate::gf2codes::BinaryMatrix;

/// Cuts whose violation is below this are not added.
const CUT_TOL: f64 = 1e-9;

/// A forbidden-set inequality of one check:
/// `Σ_{i∈S} ω_i − Σ_{i∈N(j)\S} ω_i ≤ |S| − 1` with `|S|` odd.
#[derive(Clone, Debug, PartialEq)]
pub struct ForbiddenSet {
    pub odd: Vec<usize>,
    pub rest: Vec<usize>,
    /// `Σ_{S}(1 − ω_i) + Σ_{N\S} ω_i` at the separated point; below 1 means violated.
    pub value: f64,
}

impl ForbiddenSet {
    pub fn coeffs(&self, n: usize) -> Vec<f64> {
        let mut a = vec![0.0; n];
        for &i in &self.odd {
            a[i] = 1.0;
        }
        for &i in &self.rest {
            a[i] = -1.0;
        }
        a
    }

    pub fn rhs(&self) -> f64 {
        self.odd.len() as f64 - 1.0
    }
}

/// Most violated forbidden-set inequality of the check `h_row` at `w`, if any.
///
/// The minimizing odd set takes every coordinate above 1/2; when that count is
/// even, the coordinate closest to 1/2 is toggled.
pub fn separate_cut(h_row: &[u8], w: &[f64]) -> Option<ForbiddenSet> {
    let support: Vec<usize> = (0..h_row.len()).filter(|&i| h_row[i] == 1).collect();
    if support.is_empty() {
        return None;
    }
    let mut in_s: Vec<bool> = support.iter().map(|&i| w[i] > 0.5).collect();
    if in_s.iter().filter(|&&b| b).count() % 2 == 0 {
        let k = (0..support.len())
            .min_by(|&a, &b| (w[support[a]] - 0.5).abs().total_cmp(&(w[support[b]] - 0.5).abs()))
            .expect("nonempty");
        in_s[k] = !in_s[k];
    }
    let value: f64 = support
        .iter()
        .zip(&in_s)
        .map(|(&i, &s)| if s { 1.0 - w[i] } else { w[i] })
        .sum();
    if value >= 1.0 - CUT_TOL {
        return None;
    }
    let (odd, rest): (Vec<(usize, bool)>, Vec<(usize, bool)>) =
        support.into_iter().zip(in_s).partition(|&(_, s)| s);
    Some(ForbiddenSet {
        odd: odd.into_iter().map(|p| p.0).collect(),
        rest: rest.into_iter().map(|p| p.0).collect(),
        value,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpDecodeResult {
    pub x: Vec<f64>,
    pub objective: f64,
    pub cuts: usize,
    pub rounds: usize,
}

/// `argmin ⟨ω, y⟩` over the fundamental polytope of `h`.
pub fn lp_decode(h: &BinaryMatrix, y: &[f64]) -> Result<LpDecodeResult> {
    let n = h.cols();
    let mut lp = LpProblem::unit_box(y.to_vec());
    let max_rounds = 100 + 10 * h.rows() * n;
    for round in 1..=max_rounds {
        let sol = simplex_solve(&lp)?;
        let cuts: Vec<ForbiddenSet> = (0..h.rows()).filter_map(|j| separate_cut(h.row(j), &sol.x)).collect();
        if cuts.is_empty() {
            return Ok(LpDecodeResult {
                x: sol.x,
                objective: sol.objective,
                cuts: lp.rows.len(),
                rounds: round,
            });
        }
        for c in cuts {
            lp.add_le(c.coeffs(n), c.rhs());
        }
    }
    Err(Error::Cycling(max_rounds))
}
