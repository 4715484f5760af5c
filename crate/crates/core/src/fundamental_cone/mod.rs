//! The fundamental cone K(H): its inequality description, exact and sampled
//! generator sets, subgroup selection and pseudo-weight histograms.

mod dd;
mod io;
mod sample;

pub use dd::{enumerate_rays, MAX_ENUMERATION_DIM};
pub use io::{header_row, parse_generators, read_generators, render_generators, write_generators};
pub use sample::{exact_ray_from_point, sample_rays};

use std::collections::HashSet;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gf2codes::BinaryMatrix;
use crate::pseudogeometry::Ray;

/// Homogeneous constraint `coeffs · ω ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inequality {
    pub coeffs: Vec<i64>,
    /// Parity check this constraint came from; `None` for `ω_i ≥ 0`.
    pub check: Option<usize>,
}

impl Inequality {
    pub fn nonzeros(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c != 0).count()
    }

    pub fn eval_f64(&self, w: &[f64]) -> f64 {
        self.coeffs.iter().zip(w).map(|(&c, &x)| c as f64 * x).sum()
    }
}

/// Inequality description of the fundamental cone: `ω ≥ 0` plus, for every
/// check `j` and every `i ∈ N(j)`, `ω_i ≤ Σ_{i' ∈ N(j) \ i} ω_{i'}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InequalitySystem {
    pub dim: usize,
    pub constraints: Vec<Inequality>,
}

impl InequalitySystem {
    /// Only the nonnegativity constraints (the orthant).
    pub fn orthant(dim: usize) -> Self {
        let constraints = (0..dim)
            .map(|i| {
                let mut coeffs = vec![0; dim];
                coeffs[i] = 1;
                Inequality { coeffs, check: None }
            })
            .collect();
        Self { dim, constraints }
    }

    /// Exact membership test for a rational ray.
    pub fn contains(&self, ray: &Ray) -> bool {
        self.constraints.iter().all(|c| {
            let s = c
                .coeffs
                .iter()
                .zip(ray.coords())
                .fold(num_rational::Rational64::zero(), |acc, (&a, &x)| acc + x * a);
            s >= num_rational::Rational64::zero()
        })
    }

    pub fn contains_f64(&self, w: &[f64], tol: f64) -> bool {
        self.constraints.iter().all(|c| c.eval_f64(w) >= -tol)
    }

    pub fn check_constraints(&self) -> impl Iterator<Item = &Inequality> {
        self.constraints.iter().filter(|c| c.check.is_some())
    }
}

pub fn cone_inequalities(h: &BinaryMatrix) -> Result<InequalitySystem> {
    let mut sys = InequalitySystem::orthant(h.cols());
    for j in 0..h.rows() {
        let support = h.row_support(j);
        if support.is_empty() {
            return Err(Error::ZeroRow(j));
        }
        for &i in &support {
            let mut coeffs = vec![0; h.cols()];
            for &k in &support {
                coeffs[k] = 1;
            }
            coeffs[i] = -1;
            sys.constraints.push(Inequality { coeffs, check: Some(j) });
        }
    }
    Ok(sys)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Enumerated,
    Sampled,
    Imported,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Enumerated => "enumerated",
            Source::Sampled => "sampled",
            Source::Imported => "imported",
        })
    }
}

/// An ordered collection of distinct rays.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    rays: Vec<Ray>,
    pub source: Source,
    pub matrix_id: String,
}

impl GeneratorSet {
    /// Builds a set, dropping later duplicates while keeping first-seen order.
    pub fn new(rays: Vec<Ray>, source: Source, matrix_id: impl Into<String>) -> Self {
        let mut seen = HashSet::new();
        let rays = rays.into_iter().filter(|r| seen.insert(r.clone())).collect();
        Self {
            rays,
            source,
            matrix_id: matrix_id.into(),
        }
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.rays.first().map(Ray::dim)
    }

    pub fn pseudo_weights(&self) -> Vec<f64> {
        self.rays.iter().map(Ray::pseudo_weight).collect()
    }

    pub fn min_pseudo_weight(&self) -> Option<f64> {
        self.rays.iter().map(Ray::pseudo_weight).min_by(f64::total_cmp)
    }

    pub fn contains(&self, ray: &Ray) -> bool {
        self.rays.contains(ray)
    }

    /// Returns a copy with `extra` appended (duplicates dropped).
    pub fn with(&self, extra: impl IntoIterator<Item = Ray>) -> Self {
        let mut rays = self.rays.clone();
        rays.extend(extra);
        Self::new(rays, self.source, self.matrix_id.clone())
    }
}

/// Pseudo-weight comparisons absorb this much floating-point error.
const WP_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Criterion {
    WpAtMost(f64),
    KSmallest(usize),
}

/// Subset ordered by pseudo-weight; equal weights keep input order.
pub fn select_subgroup(set: &GeneratorSet, criterion: Criterion) -> GeneratorSet {
    let mut idx: Vec<(f64, usize)> = set
        .rays
        .iter()
        .enumerate()
        .map(|(i, r)| (r.pseudo_weight(), i))
        .collect();
    idx.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let take: Vec<usize> = match criterion {
        Criterion::WpAtMost(t) => idx.iter().take_while(|(w, _)| *w <= t + WP_TOL).map(|p| p.1).collect(),
        Criterion::KSmallest(k) => idx.iter().take(k).map(|p| p.1).collect(),
    };
    GeneratorSet {
        rays: take.into_iter().map(|i| set.rays[i].clone()).collect(),
        source: set.source,
        matrix_id: set.matrix_id.clone(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightHistogram {
    /// `counts.len() + 1` ascending edges.
    pub bin_edges: Vec<f64>,
    pub counts: Vec<usize>,
}

impl WeightHistogram {
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_lo,bin_hi,count\n");
        for (i, c) in self.counts.iter().enumerate() {
            out += &format!("{},{},{}\n", self.bin_edges[i], self.bin_edges[i + 1], c);
        }
        out
    }
}

/// Histogram of pseudo-weights over contiguous bins `[k w, (k+1) w)` from the
/// lowest to the highest occupied bin.
pub fn weight_histogram(set: &GeneratorSet, bin_width: f64) -> Result<WeightHistogram> {
    if !(bin_width > 0.0 && bin_width.is_finite()) {
        return Err(Error::InvalidParameter(format!("bin width must be positive, got {bin_width}")));
    }
    if set.is_empty() {
        return Ok(WeightHistogram {
            bin_edges: Vec::new(),
            counts: Vec::new(),
        });
    }
    let bins: Vec<i64> = set
        .rays
        .iter()
        .map(|r| (r.pseudo_weight() / bin_width + WP_TOL).floor() as i64)
        .collect();
    let lo = *bins.iter().min().unwrap();
    let hi = *bins.iter().max().unwrap();
    let mut counts = vec![0; (hi - lo + 1) as usize];
    for b in bins {
        counts[(b - lo) as usize] += 1;
    }
    let bin_edges = (lo..=hi + 1).map(|k| k as f64 * bin_width).collect();
    Ok(WeightHistogram { bin_edges, counts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2codes::{enumerate_codewords, hamming74, parse_dense};

    #[test]
    fn single_check_system() {
        let h = parse_dense("111").unwrap();
        let sys = cone_inequalities(&h).unwrap();
        assert_eq!(sys.constraints.len(), 6);
        let checks: Vec<_> = sys.check_constraints().map(|c| c.coeffs.clone()).collect();
        assert_eq!(checks, vec![vec![-1, 1, 1], vec![1, -1, 1], vec![1, 1, -1]]);
    }

    #[test]
    fn codewords_are_in_cone() {
        let h = hamming74();
        let sys = cone_inequalities(&h).unwrap();
        assert_eq!(sys.constraints.len(), 7 + 12);
        for cw in enumerate_codewords(&h, 8).unwrap().iter().skip(1) {
            assert!(sys.contains(&Ray::from_codeword(&cw.bits).unwrap()));
        }
        let golay = crate::gf2codes::builtin("golay24_HGpp").unwrap();
        let sys = cone_inequalities(&golay).unwrap();
        assert!(sys.contains(&Ray::from_ints(&[1; 24]).unwrap()));
        assert!(!sys.contains(&Ray::from_ints(&[1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]).unwrap()));
    }

    #[test]
    fn zero_row_rejected() {
        let h = parse_dense("110\n000").unwrap();
        assert_eq!(cone_inequalities(&h), Err(Error::ZeroRow(1)));
    }

    fn set(rays: &[&[i64]]) -> GeneratorSet {
        GeneratorSet::new(rays.iter().map(|r| Ray::from_ints(r).unwrap()).collect(), Source::Imported, "t")
    }

    #[test]
    fn dedup_up_to_scale() {
        let s = set(&[&[1, 1, 0], &[2, 2, 0], &[0, 1, 1]]);
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn subgroups() {
        let s = set(&[&[1, 1, 1, 1], &[1, 1, 0, 0], &[2, 1, 1, 0], &[0, 0, 1, 1]]);
        let k1 = select_subgroup(&s, Criterion::KSmallest(1));
        assert_eq!(k1.rays()[0], Ray::from_ints(&[1, 1, 0, 0]).unwrap());
        let low = select_subgroup(&s, Criterion::WpAtMost(2.0));
        assert_eq!(low.len(), 2);
        assert_eq!(low.rays()[1], Ray::from_ints(&[0, 0, 1, 1]).unwrap());
        assert!(select_subgroup(&s, Criterion::WpAtMost(0.5)).is_empty());
    }

    #[test]
    fn histograms() {
        let rays: Vec<Ray> = (0..7)
            .map(|i| {
                let mut v = vec![0; 9];
                for k in 0..3 {
                    v[i + k] = 1;
                }
                Ray::from_ints(&v).unwrap()
            })
            .collect();
        let s = GeneratorSet::new(rays, Source::Imported, "t");
        let h = weight_histogram(&s, 1.0).unwrap();
        assert_eq!(h.bin_edges, vec![3.0, 4.0]);
        assert_eq!(h.counts, vec![7]);
        let empty = GeneratorSet::new(vec![], Source::Imported, "t");
        assert_eq!(weight_histogram(&empty, 1.0).unwrap().total(), 0);
        assert!(weight_histogram(&s, 0.0).is_err());
        assert_eq!(weight_histogram(&s, 0.5).unwrap().to_csv(), "bin_lo,bin_hi,count\n3,3.5,7\n");
    }
}
