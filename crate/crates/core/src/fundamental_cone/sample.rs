//! Randomized generator discovery: random linear objectives over the slice
//! `{ω ∈ K : Σ ω = n}` land on vertices, which are scaled extreme rays.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{GeneratorSet, InequalitySystem, Source};
use crate::error::{Error, Result};
use crate::exact;
use crate::pseudogeometry::Ray;
use crate::simulate::{simplex_solve, standard_normals, LpProblem};

/// A constraint counts as tight at a slice vertex below this slack.
const TIGHT_TOL: f64 = 1e-7;

/// Recovers the exact extreme ray through a floating-point vertex `w` of the
/// slice from the constraints tight at `w`. Returns `None` when those
/// constraints do not pin down a single ray inside the cone.
pub fn exact_ray_from_point(sys: &InequalitySystem, w: &[f64]) -> Result<Option<Ray>> {
    let scale = w.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let tight: Vec<Vec<i64>> = sys
        .constraints
        .iter()
        .filter(|c| c.eval_f64(w).abs() <= TIGHT_TOL * scale)
        .map(|c| c.coeffs.clone())
        .collect();
    let Some(mut v) = exact::null_vector(&tight, sys.dim)? else {
        return Ok(None);
    };
    if v.iter().sum::<i128>() < 0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    if v.iter().any(|&x| x < 0) {
        return Ok(None);
    }
    let ray = Ray::from_i128(&v)?;
    Ok(sys.contains(&ray).then_some(ray))
}

fn slice_problem(sys: &InequalitySystem, objective: Vec<f64>) -> LpProblem {
    let n = sys.dim;
    let mut lp = LpProblem {
        objective,
        rows: Vec::new(),
        upper: vec![n as f64; n],
    };
    for c in sys.check_constraints() {
        lp.add_le(c.coeffs.iter().map(|&a| -(a as f64)).collect(), 0.0);
    }
    lp.add_eq(vec![1.0; n], n as f64);
    lp
}

/// Runs `trials` random-objective LPs over the slice and returns the distinct
/// extreme rays found, in order of first discovery. Trial `t` draws its
/// objective from ChaCha stream `t` of `seed`, so the output does not depend
/// on the thread count.
pub fn sample_rays(sys: &InequalitySystem, trials: usize, seed: u64) -> Result<GeneratorSet> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let n = sys.dim;
    if n == 0 {
        return Err(Error::InvalidParameter("empty inequality system".into()));
    }
    let found: Vec<Option<Ray>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t);
            let sol = simplex_solve(&slice_problem(sys, standard_normals(&mut rng, n)))?;
            exact_ray_from_point(sys, &sol.x)
        })
        .collect::<Result<_>>()?;
    Ok(GeneratorSet::new(found.into_iter().flatten().collect(), Source::Sampled, ""))
}
