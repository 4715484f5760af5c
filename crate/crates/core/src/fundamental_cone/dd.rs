//! Double description with exact integer rays.

use num_integer::Integer;

use super::{GeneratorSet, InequalitySystem, Source};
use crate::error::{Error, Result};
use crate::exact;
use crate::pseudogeometry::Ray;

/// Largest dimension accepted by [`enumerate_rays`].
pub const MAX_ENUMERATION_DIM: usize = 16;

struct DdRay {
    v: Vec<i128>,
    /// Indices (into the insertion order) of constraints tight at this ray.
    zeros: Vec<usize>,
}

fn dot(a: &[i64], v: &[i128]) -> Result<i128> {
    a.iter().zip(v).try_fold(0i128, |acc, (&c, &x)| {
        (c as i128)
            .checked_mul(x)
            .and_then(|p| acc.checked_add(p))
            .ok_or(Error::Overflow)
    })
}

fn sorted_intersection(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// All extreme rays of `{ω : a·ω ≥ 0 for every constraint}`, exactly.
///
/// The system must contain `ω ≥ 0` (every [`InequalitySystem`] built by
/// this crate does), which makes the cone pointed and seeds the iteration
/// with the unit vectors. Remaining constraints are inserted in order of
/// increasing nonzero count; two rays are combined only when the
/// constraints tight at both have rank `n - 2`.
pub fn enumerate_rays(sys: &InequalitySystem, max_rays: usize) -> Result<GeneratorSet> {
    let n = sys.dim;
    if n > MAX_ENUMERATION_DIM {
        return Err(Error::DimensionGuard {
            n,
            max: MAX_ENUMERATION_DIM,
        });
    }
    if n == 0 {
        return Ok(GeneratorSet::new(vec![], Source::Enumerated, ""));
    }
    let is_unit = |c: &[i64]| c.iter().filter(|&&x| x != 0).count() == 1 && c.iter().all(|&x| x >= 0);
    for i in 0..n {
        if !sys.constraints.iter().any(|c| is_unit(&c.coeffs) && c.coeffs[i] > 0) {
            return Err(Error::InvalidParameter(format!("system lacks the constraint w_{i} >= 0")));
        }
    }
    let mut order: Vec<Vec<i64>> = Vec::with_capacity(sys.constraints.len());
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        order.push(e);
    }
    let mut rest: Vec<&Vec<i64>> = sys
        .constraints
        .iter()
        .map(|c| &c.coeffs)
        .filter(|c| !is_unit(c))
        .collect();
    rest.sort_by_key(|c| c.iter().filter(|&&x| x != 0).count());
    order.extend(rest.into_iter().cloned());

    let mut rays: Vec<DdRay> = (0..n)
        .map(|i| {
            let mut v = vec![0i128; n];
            v[i] = 1;
            DdRay {
                v,
                zeros: (0..n).filter(|&k| k != i).collect(),
            }
        })
        .collect();

    for t in n..order.len() {
        let a = &order[t];
        let vals: Vec<i128> = rays.iter().map(|r| dot(a, &r.v)).collect::<Result<_>>()?;
        if vals.iter().all(|&s| s >= 0) {
            for (r, &s) in rays.iter_mut().zip(&vals) {
                if s == 0 {
                    r.zeros.push(t);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] < 0).collect();
        let mut next: Vec<DdRay> = Vec::new();
        for p in &pos {
            for q in &neg {
                let common = sorted_intersection(&rays[*p].zeros, &rays[*q].zeros);
                if common.len() + 2 < n {
                    continue;
                }
                let rows: Vec<Vec<i64>> = common.iter().map(|&k| order[k].clone()).collect();
                if exact::rank(&rows, n)? + 2 != n {
                    continue;
                }
                let (sp, sq) = (vals[*p], -vals[*q]);
                let mut v = Vec::with_capacity(n);
                for (x, y) in rays[*p].v.iter().zip(&rays[*q].v) {
                    let c = sp
                        .checked_mul(*y)
                        .and_then(|u| sq.checked_mul(*x).and_then(|w| u.checked_add(w)))
                        .ok_or(Error::Overflow)?;
                    v.push(c);
                }
                let g = v.iter().fold(0i128, |g, x| g.gcd(x));
                v.iter_mut().for_each(|x| *x /= g);
                let mut zeros = common;
                zeros.push(t);
                next.push(DdRay { v, zeros });
            }
        }
        for (r, s) in rays.into_iter().zip(vals) {
            if s > 0 {
                next.push(r);
            } else if s == 0 {
                let mut r = r;
                r.zeros.push(t);
                next.push(r);
            }
        }
        if next.len() > max_rays {
            return Err(Error::RayBudget { max: max_rays });
        }
        rays = next;
    }

    let mut out = rays.iter().map(|r| Ray::from_i128(&r.v)).collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| {
        a.pseudo_weight()
            .total_cmp(&b.pseudo_weight())
            .then_with(|| b.coords().cmp(a.coords()))
    });
    Ok(GeneratorSet::new(out, Source::Enumerated, ""))
}
