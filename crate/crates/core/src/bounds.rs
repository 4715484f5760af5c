//! Union bounds on the LP decoding frame-error probability.
//!
//! With `r_ω = γ sqrt(w_p(ω))` the distance from the transmitted signal to the
//! decision boundary of generator `ω`, the pairwise error is `Q(r_ω/σ)`. The
//! first-order bound sums these terms. The improved bound subtracts a lower
//! bound on pairwise intersections along the heaviest spanning tree of the
//! generator graph.

use std::f64::consts::{PI, SQRT_2};
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fundamental_cone::GeneratorSet;
use crate::pseudogeometry::{angle_from_cos, boundary_distance, ChannelParams};
use crate::spanning::{prim_mst_with, Tree};

/// Gaussian upper tail `Q(x) = P(N(0,1) > x)`.
pub fn q_func(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

pub fn pairwise_error(ray: &crate::pseudogeometry::Ray, ch: &ChannelParams) -> f64 {
    q_func(boundary_distance(ray, ch) / ch.sigma())
}

pub fn lp_union_bound(set: &GeneratorSet, ch: &ChannelParams) -> Result<f64> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(set.rays().iter().map(|r| pairwise_error(r, ch)).sum())
}

/// Two boundary distances, the angle between the generators (degrees) and
/// the noise standard deviation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairGeometry {
    pub r_i: f64,
    pub r_j: f64,
    pub theta: f64,
    pub sigma: f64,
}

impl PairGeometry {
    pub fn new(r_i: f64, r_j: f64, theta: f64, sigma: f64) -> Result<Self> {
        if !(r_i > 0.0 && r_j > 0.0 && r_i.is_finite() && r_j.is_finite()) {
            return Err(Error::InvalidParameter(format!("radii must be positive, got {r_i}, {r_j}")));
        }
        if !(0.0..=90.0).contains(&theta) {
            return Err(Error::InvalidParameter(format!("angle must be in [0, 90], got {theta}")));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma}")));
        }
        Ok(Self { r_i, r_j, theta, sigma })
    }

    pub fn q_i(&self) -> f64 {
        q_func(self.r_i / self.sigma)
    }

    pub fn q_j(&self) -> f64 {
        q_func(self.r_j / self.sigma)
    }

    /// `(θ/2π) exp(−max(r_i, r_j)² / 2σ²)` with θ in radians.
    fn wedge(&self) -> f64 {
        let r = self.r_i.max(self.r_j);
        self.theta.to_radians() / (2.0 * PI) * (-(r * r) / (2.0 * self.sigma * self.sigma)).exp()
    }
}

/// Strip-sum approximation of `P(E_i ∪ E_j)` for two half-plane events with
/// boundaries at distances `r_i`, `r_j` and normals `θ` apart.
///
/// In coordinates where `E_j = {ξ₁ ≥ r_j}`, the boundary of `E_i` is the line
/// `ξ₂ = b − a ξ₁` with `a = tan(90° − θ)` and `b = r_i / sin θ`. The result is
/// `Q(r_i/σ) + Σ_k Q(−(b − a ξ_k)/σ) [Q(ξ_k/σ) − Q(ξ_{k+1}/σ)]` over strips
/// `ξ_k = r_j + k·dxi` up to `xi_max`.
pub fn tripletwise_numeric(g: &PairGeometry, xi_max: f64, dxi: f64) -> Result<f64> {
    if !(dxi > 0.0 && dxi.is_finite()) {
        return Err(Error::InvalidParameter(format!("strip width must be positive, got {dxi}")));
    }
    if !(xi_max >= g.r_j) || !xi_max.is_finite() {
        return Err(Error::InvalidParameter(format!("xi_max {xi_max} is below r_j = {}", g.r_j)));
    }
    if g.theta <= 0.0 {
        return Err(Error::InvalidParameter("angle must be positive".into()));
    }
    let th = g.theta.to_radians();
    let a = if g.theta == 90.0 { 0.0 } else { (PI / 2.0 - th).tan() };
    let b = g.r_i / th.sin();
    let s = g.sigma;
    let strips = ((xi_max - g.r_j) / dxi).ceil() as usize;
    let tail: f64 = (0..strips)
        .into_par_iter()
        .with_min_len(4096)
        .map(|k| {
            let x0 = g.r_j + k as f64 * dxi;
            let x1 = (x0 + dxi).min(xi_max);
            q_func(-(b - a * x0) / s) * (q_func(x0 / s) - q_func(x1 / s))
        })
        .sum();
    Ok(g.q_i() + tail)
}

/// Default strip width as a multiple of σ.
pub const DEFAULT_DXI_SIGMAS: f64 = 1e-5;
/// Default truncation distance beyond `r_j`, in multiples of σ.
pub const DEFAULT_XI_SPAN_SIGMAS: f64 = 12.0;

pub fn tripletwise_numeric_default(g: &PairGeometry) -> Result<f64> {
    tripletwise_numeric(
        g,
        g.r_j + DEFAULT_XI_SPAN_SIGMAS * g.sigma,
        DEFAULT_DXI_SIGMAS * g.sigma,
    )
}

/// Upper bound on `P(E_i ∪ E_j)`:
/// `min{Q(min r/σ) + (θ/2π) e^{−max r²/2σ²}, Q_i + Q_j − Q_i Q_j}`.
///
/// Evaluated as `Q_i + Q_j − intersection_lower(g)`, which is the same
/// expression term by term.
pub fn tripletwise_upper(g: &PairGeometry) -> f64 {
    g.q_i() + g.q_j() - intersection_lower(g)
}

/// Lower bound on `P(E_i ∩ E_j)`:
/// `max{Q(max r/σ) − (θ/2π) e^{−max r²/2σ²}, Q_i Q_j}`.
pub fn intersection_lower(g: &PairGeometry) -> f64 {
    let (qi, qj) = (g.q_i(), g.q_j());
    let first = q_func(g.r_i.max(g.r_j) / g.sigma) - g.wedge();
    first.max(qi * qj)
}

/// Improved bound from boundary distances and a pairwise angle function
/// (degrees, called with `i < j`). Returns the bound and the maximum-weight
/// spanning tree, whose `total_cost` is the subtracted intersection mass.
pub fn ilp_from_geometry(radii: &[f64], sigma: f64, angle: impl Fn(usize, usize) -> f64) -> Result<(f64, Tree)> {
    if radii.is_empty() {
        return Err(Error::EmptySet);
    }
    let q: Vec<f64> = radii.iter().map(|r| q_func(r / sigma)).collect();
    let lp: f64 = q.iter().sum();
    let weight = |i: usize, j: usize| {
        let g = PairGeometry {
            r_i: radii[i],
            r_j: radii[j],
            theta: angle(i, j),
            sigma,
        };
        intersection_lower(&g)
    };
    let mut tree = prim_mst_with(radii.len(), |i, j| -weight(i, j));
    let mut w: Vec<f64> = tree.edges.iter().map(|&(i, j)| weight(i, j)).collect();
    w.sort_by(f64::total_cmp);
    tree.total_cost = w.iter().sum();
    Ok((lp - tree.total_cost, tree))
}

/// Unit vectors of the rays, for fast repeated angle evaluation.
fn unit_vectors(set: &GeneratorSet) -> Vec<Vec<f64>> {
    set.rays().iter().map(|r| r.unit()).collect()
}

fn cos_angle(u: &[f64], v: &[f64]) -> f64 {
    angle_from_cos(u.iter().zip(v).map(|(a, b)| a * b).sum())
}

/// Improved LP union bound and its optimizing tree. A single generator gives
/// the plain union bound and an empty tree.
pub fn ilp_union_bound(set: &GeneratorSet, ch: &ChannelParams) -> Result<(f64, Tree)> {
    let radii: Vec<f64> = set.rays().iter().map(|r| boundary_distance(r, ch)).collect();
    let units = unit_vectors(set);
    ilp_from_geometry(&radii, ch.sigma(), |i, j| cos_angle(&units[i], &units[j]))
}

/// The improved bound evaluated on an arbitrary spanning tree.
pub fn ilp_bound_for_tree(set: &GeneratorSet, ch: &ChannelParams, tree: &Tree) -> Result<f64> {
    if !tree.is_spanning_tree(set.len()) && !(set.len() == 1 && tree.edges.is_empty()) {
        return Err(Error::InvalidParameter("not a spanning tree of the set".into()));
    }
    let rays = set.rays();
    let sigma = ch.sigma();
    let lp = lp_union_bound(set, ch)?;
    let sub: f64 = tree
        .edges
        .iter()
        .map(|&(i, j)| {
            intersection_lower(&PairGeometry {
                r_i: boundary_distance(&rays[i], ch),
                r_j: boundary_distance(&rays[j], ch),
                theta: crate::pseudogeometry::angle_deg(&rays[i], &rays[j]),
                sigma,
            })
        })
        .sum();
    Ok(lp - sub)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundPoint {
    pub snr_db: f64,
    pub lp_ub: f64,
    pub ilp_ub: f64,
    /// Intersection mass subtracted along the tree.
    pub tree_cost: f64,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundCurve {
    pub points: Vec<BoundPoint>,
    pub source: String,
}

impl BoundCurve {
    /// CSV with header `snr_db,lp_ub,ilp_ub,tree_cost,seconds`. Timings are
    /// written as 0 unless `timing` is set, so output is reproducible.
    pub fn to_csv(&self, timing: bool) -> String {
        let mut out = String::from("snr_db,lp_ub,ilp_ub,tree_cost,seconds\n");
        for p in &self.points {
            let secs = if timing { p.seconds } else { 0.0 };
            out += &format!("{},{:e},{:e},{:e},{}\n", p.snr_db, p.lp_ub, p.ilp_ub, p.tree_cost, secs);
        }
        out
    }
}

/// Both bounds over an SNR grid; the tree is re-optimized at each point.
pub fn bound_curve(set: &GeneratorSet, snr_grid: &[f64], rate: f64) -> Result<BoundCurve> {
    if snr_grid.is_empty() {
        return Err(Error::InvalidParameter("empty SNR grid".into()));
    }
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let units = unit_vectors(set);
    let wps = set.pseudo_weights();
    let points = snr_grid
        .iter()
        .map(|&snr| {
            let start = Instant::now();
            let ch = ChannelParams::new(snr, rate)?;
            let radii: Vec<f64> = wps.iter().map(|w| ch.gamma() * w.sqrt()).collect();
            let lp_ub: f64 = radii.iter().map(|r| q_func(r / ch.sigma())).sum();
            let (ilp_ub, tree) = ilp_from_geometry(&radii, ch.sigma(), |i, j| cos_angle(&units[i], &units[j]))?;
            Ok(BoundPoint {
                snr_db: snr,
                lp_ub,
                ilp_ub,
                tree_cost: tree.total_cost,
                seconds: start.elapsed().as_secs_f64(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundCurve {
        points,
        source: format!("{} ({} rays)", set.source, set.len()),
    })
}

/// SNR (dB) at which a nonincreasing function of SNR crosses `target`,
/// by bisection on `[lo, hi]`.
pub fn snr_at_fer(f: impl Fn(f64) -> Result<f64>, target: f64, lo: f64, hi: f64) -> Result<f64> {
    let (mut lo, mut hi) = (lo, hi);
    if !(f(lo)? >= target && f(hi)? <= target) {
        return Err(Error::InvalidParameter(format!("target {target} not bracketed by [{lo}, {hi}] dB")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fundamental_cone::Source;
    use crate::pseudogeometry::Ray;
    use proptest::prelude::*;

    fn set(rays: &[&[i64]]) -> GeneratorSet {
        GeneratorSet::new(rays.iter().map(|r| Ray::from_ints(r).unwrap()).collect(), Source::Imported, "t")
    }

    fn simpson_q(x: f64) -> f64 {
        // ∫_x^{x+40} φ by composite Simpson.
        let n = 200_000;
        let h = 40.0 / n as f64;
        let phi = |t: f64| (-t * t / 2.0).exp() / (2.0 * PI).sqrt();
        let mut s = phi(x) + phi(x + 40.0);
        for k in 1..n {
            s += phi(x + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn q_values() {
        assert_eq!(q_func(0.0), 0.5);
        assert!((q_func(1.0) - 0.158_655_3).abs() < 1e-7);
        for x in [0.3, 1.0, 2.5, 4.0] {
            assert!((q_func(x) - simpson_q(x)).abs() < 1e-10);
        }
    }

    #[test]
    fn pairwise_values() {
        let ch = ChannelParams::new(0.0, 0.5).unwrap();
        let r = Ray::from_ints(&[1, 1, 1, 1, 0]).unwrap();
        assert!((pairwise_error(&r, &ch) - q_func(2.0)).abs() < 1e-15);
        assert!((q_func(2.0) - 0.022_750_1).abs() < 1e-7);
        let noisy = ChannelParams::new(-200.0, 0.5).unwrap();
        assert!((pairwise_error(&r, &noisy) - 0.5).abs() < 1e-9);
        let heavy = Ray::from_ints(&[1; 8]).unwrap();
        assert!(pairwise_error(&heavy, &ch) < pairwise_error(&r, &ch));
    }

    #[test]
    fn union_bound_sums() {
        let ch = ChannelParams::new(1.0, 0.5).unwrap();
        let s = set(&[&[1, 1, 0, 0], &[0, 0, 1, 1]]);
        let q = pairwise_error(&s.rays()[0], &ch);
        assert_eq!(lp_union_bound(&s, &ch).unwrap(), 2.0 * q);
        let empty = GeneratorSet::new(vec![], Source::Imported, "t");
        assert_eq!(lp_union_bound(&empty, &ch), Err(Error::EmptySet));
    }

    #[test]
    fn numeric_limits() {
        let sigma = 0.6;
        let r = 1.2;
        let g = PairGeometry::new(r, r, 90.0, sigma).unwrap();
        let q = q_func(r / sigma);
        let v = tripletwise_numeric_default(&g).unwrap();
        assert!((v - (2.0 * q - q * q)).abs() < 1e-4);
        let g = PairGeometry::new(r, r, 0.01, sigma).unwrap();
        assert!((tripletwise_numeric_default(&g).unwrap() - q).abs() < 1e-3);
        assert!(tripletwise_numeric(&g, r - 1.0, 1e-3).is_err());
        assert!(tripletwise_numeric(&g, r + 1.0, 0.0).is_err());
    }

    #[test]
    fn theorem_bounds_at_extremes() {
        let g = PairGeometry::new(1.0, 1.5, 0.0, 0.5).unwrap();
        assert_eq!(tripletwise_upper(&g), g.q_i());
        assert_eq!(intersection_lower(&g), g.q_j());
        let g = PairGeometry::new(1.0, 1.0, 90.0, 0.5).unwrap();
        let q = g.q_i();
        assert_eq!(tripletwise_upper(&g), 2.0 * q - q * q);
        assert_eq!(intersection_lower(&g), q * q);
    }

    #[test]
    fn ilp_degenerate_pairs() {
        let sigma = 0.7;
        let (v, t) = ilp_from_geometry(&[1.0, 1.3], sigma, |_, _| 0.0).unwrap();
        assert!((v - q_func(1.0 / sigma)).abs() < 1e-12);
        assert_eq!(t.edges, vec![(0, 1)]);
        let (v, _) = ilp_from_geometry(&[1.1, 1.1], sigma, |_, _| 90.0).unwrap();
        let q = q_func(1.1 / sigma);
        assert!((v - (2.0 * q - q * q)).abs() < 1e-12);
    }

    #[test]
    fn ilp_on_sets() {
        let ch = ChannelParams::new(2.0, 0.5).unwrap();
        let one = set(&[&[1, 1, 1]]);
        let (v, t) = ilp_union_bound(&one, &ch).unwrap();
        assert_eq!(v, lp_union_bound(&one, &ch).unwrap());
        assert!(t.edges.is_empty());
        let s = set(&[&[1, 1, 1, 0, 0, 0], &[0, 1, 1, 1, 0, 0], &[1, 1, 0, 1, 1, 0], &[2, 1, 1, 1, 1, 0]]);
        let (v, t) = ilp_union_bound(&s, &ch).unwrap();
        let lp = lp_union_bound(&s, &ch).unwrap();
        assert!(v < lp);
        assert!(t.is_spanning_tree(4));
        let max_q = s.rays().iter().map(|r| pairwise_error(r, &ch)).fold(0.0, f64::max);
        assert!(v >= max_q);
        assert!((ilp_bound_for_tree(&s, &ch, &t).unwrap() - v).abs() < 1e-15);
    }

    #[test]
    fn curves() {
        let s = set(&[&[1, 1, 1, 0, 0], &[0, 1, 1, 1, 0], &[0, 0, 1, 1, 1]]);
        let grid: Vec<f64> = (2..=16).map(|k| k as f64 * 0.5).collect();
        let c = bound_curve(&s, &grid, 0.4).unwrap();
        assert_eq!(c.points.len(), 15);
        for w in c.points.windows(2) {
            assert!(w[1].lp_ub <= w[0].lp_ub && w[1].ilp_ub <= w[0].ilp_ub);
        }
        assert!(c.points.iter().all(|p| p.ilp_ub < p.lp_ub && p.ilp_ub > 0.0));
        let csv = c.to_csv(false);
        assert!(csv.starts_with("snr_db,lp_ub,ilp_ub,tree_cost,seconds\n"));
        assert!(csv.lines().skip(1).all(|l| l.ends_with(",0")));
        let single = bound_curve(&set(&[&[1, 1]]), &grid, 0.5).unwrap();
        assert!(single.points.iter().all(|p| p.lp_ub == p.ilp_ub));
        assert!(bound_curve(&s, &[], 0.5).is_err());
    }

    #[test]
    fn bisection() {
        let f = |snr: f64| Ok(q_func(10f64.powf(snr / 20.0)));
        let s = snr_at_fer(f, q_func(2.0), -10.0, 20.0).unwrap();
        assert!((s - 20.0 * 2f64.log10()).abs() < 1e-9);
        assert!(snr_at_fer(f, 0.9, -10.0, 20.0).is_err());
    }

    proptest! {
        #[test]
        fn complementarity(ri in 0.05f64..5.0, rj in 0.05f64..5.0, th in 0.0f64..=90.0, s in 0.4f64..3.0) {
            let g = PairGeometry::new(ri, rj, th, s).unwrap();
            let (qi, qj) = (g.q_i(), g.q_j());
            let lhs = tripletwise_upper(&g) + intersection_lower(&g);
            prop_assert!((lhs - (qi + qj)).abs() <= 1e-15 * (qi + qj));
            let low = intersection_lower(&g);
            prop_assert!(low > 0.0 && low <= qi.min(qj) * (1.0 + 1e-15));
            prop_assert!(tripletwise_upper(&g) <= qi + qj);
        }

        #[test]
        fn scale_invariance(k in 2i64..6, snr in -2.0f64..8.0) {
            let ch = ChannelParams::new(snr, 0.5).unwrap();
            let a = set(&[&[1, 1, 1, 0], &[0, 1, 2, 1]]);
            let b = set(&[&[k, k, k, 0], &[0, 1, 2, 1]]);
            prop_assert_eq!(lp_union_bound(&a, &ch).unwrap(), lp_union_bound(&b, &ch).unwrap());
            prop_assert_eq!(ilp_union_bound(&a, &ch).unwrap().0, ilp_union_bound(&b, &ch).unwrap().0);
        }
    }
}
