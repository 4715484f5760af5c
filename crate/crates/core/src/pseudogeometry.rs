//! Pseudo-weights, the BPSK signal-space embedding, virtual points and
//! angles between cone generators.

use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Cosines within this distance of 1 are treated as exactly colinear.
pub const COLINEAR_TOL: f64 = 1e-12;

/// A nonnegative, nonzero vector up to positive scaling.
///
/// Stored in canonical scale: the smallest nonzero coordinate equals 1.
/// The exact rational coordinates are kept next to a cached `f64` view.
#[derive(Clone)]
pub struct Ray {
    coords: Vec<Rational64>,
    values: Vec<f64>,
    l1: f64,
    l2sq: f64,
}

impl Ray {
    /// Canonicalizes `coords`. Fails on negative entries or the zero vector.
    pub fn new(coords: Vec<Rational64>) -> Result<Self> {
        if let Some(i) = coords.iter().position(|c| c.is_negative()) {
            return Err(Error::InvalidParameter(format!("negative ray coordinate at {i}")));
        }
        let min = coords
            .iter()
            .filter(|c| !c.is_zero())
            .min()
            .copied()
            .ok_or_else(|| Error::InvalidParameter("zero vector is not a ray".into()))?;
        let coords: Vec<Rational64> = coords.into_iter().map(|c| c / min).collect();
        let values: Vec<f64> = coords.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
        let l1 = values.iter().sum();
        let l2sq = values.iter().map(|v| v * v).sum();
        Ok(Self {
            coords,
            values,
            l1,
            l2sq,
        })
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| Rational64::from_integer(c)).collect())
    }

    /// Builds a ray from an exact integer vector (e.g. a primitive ray from
    /// double description). Fails on overflow of the 64-bit rationals.
    pub fn from_i128(coords: &[i128]) -> Result<Self> {
        let g = coords.iter().fold(0i128, |g, &c| g.gcd(&c));
        if g == 0 {
            return Err(Error::InvalidParameter("zero vector is not a ray".into()));
        }
        let ints = coords
            .iter()
            .map(|&c| i64::try_from(c / g).map(Rational64::from_integer).map_err(|_| Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ints)
    }

    pub fn from_codeword(bits: &[u8]) -> Result<Self> {
        Self::from_ints(&bits.iter().map(|&b| b as i64).collect::<Vec<_>>())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational64] {
        &self.coords
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn l1(&self) -> f64 {
        self.l1
    }

    pub fn l2sq(&self) -> f64 {
        self.l2sq
    }

    pub fn is_binary(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero() || *c == Rational64::from_integer(1))
    }

    pub fn support_size(&self) -> usize {
        self.coords.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn pseudo_weight(&self) -> f64 {
        pseudo_weight(self)
    }

    /// Unit-norm copy of the real view.
    pub fn unit(&self) -> Vec<f64> {
        let norm = self.l2sq.sqrt();
        self.values.iter().map(|v| v / norm).collect()
    }
}

impl PartialEq for Ray {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}

impl Eq for Ray {}

impl std::hash::Hash for Ray {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl fmt::Debug for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ray({})", self)
    }
}

impl fmt::Display for Ray {
    /// Comma-separated coordinates, integers without denominator.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if c.is_integer() {
                write!(f, "{}", c.numer())?;
            } else {
                write!(f, "{}/{}", c.numer(), c.denom())?;
            }
        }
        Ok(())
    }
}

/// AWGN channel parameters with the bit energy fixed at `eb`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelParams {
    pub snr_db: f64,
    pub rate: f64,
    pub eb: f64,
}

impl ChannelParams {
    pub fn new(snr_db: f64, rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::InvalidParameter(format!("rate must be in (0, 1], got {rate}")));
        }
        if !snr_db.is_finite() {
            return Err(Error::InvalidParameter("snr must be finite".into()));
        }
        Ok(Self {
            snr_db,
            rate,
            eb: 1.0,
        })
    }

    /// BPSK amplitude `sqrt(R Eb)`.
    pub fn gamma(&self) -> f64 {
        (self.rate * self.eb).sqrt()
    }

    pub fn n0(&self) -> f64 {
        self.eb * 10f64.powf(-self.snr_db / 10.0)
    }

    pub fn sigma(&self) -> f64 {
        (self.n0() / 2.0).sqrt()
    }

    /// Factor mapping received samples to LLRs, `4 sqrt(R Eb) / N0`.
    pub fn llr_scale(&self) -> f64 {
        4.0 * self.gamma() / self.n0()
    }
}

/// `‖ω‖₁² / ‖ω‖₂²` of a nonnegative real vector (0 for the zero vector).
pub fn pseudo_weight_of(w: &[f64]) -> f64 {
    let l1: f64 = w.iter().sum();
    let l2sq: f64 = w.iter().map(|v| v * v).sum();
    if l2sq == 0.0 {
        0.0
    } else {
        l1 * l1 / l2sq
    }
}

pub fn pseudo_weight(ray: &Ray) -> f64 {
    ray.l1 * ray.l1 / ray.l2sq
}

/// `(‖ω‖₁ / ‖ω‖₂²) ω`, the point whose BPSK image is mirrored to the
/// transmitted all-zeros signal across the decision hyperplane of `ω`.
pub fn virtual_point(ray: &Ray) -> Vec<f64> {
    let s = ray.l1 / ray.l2sq;
    ray.values.iter().map(|v| s * v).collect()
}

/// BPSK image `γ(1 − 2x)` of a (possibly fractional) point.
pub fn bpsk(x: &[f64], ch: &ChannelParams) -> Vec<f64> {
    let g = ch.gamma();
    x.iter().map(|v| g * (1.0 - 2.0 * v)).collect()
}

/// Distance from the transmitted signal to the decision boundary of `ω`,
/// `γ sqrt(w_p(ω))`.
pub fn boundary_distance(ray: &Ray, ch: &ChannelParams) -> f64 {
    ch.gamma() * ray.pseudo_weight().sqrt()
}

/// Angle between two nonnegative vectors in degrees, within [0, 90].
pub fn angle_between(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    angle_from_cos(dot / (na * nb))
}

/// `acos` in degrees with the cosine clamped to [0, 1] and snapped to 1
/// within [`COLINEAR_TOL`].
pub fn angle_from_cos(cos: f64) -> f64 {
    let c = cos.clamp(0.0, 1.0);
    if c >= 1.0 - COLINEAR_TOL {
        0.0
    } else {
        c.acos().to_degrees()
    }
}

pub fn angle_deg(a: &Ray, b: &Ray) -> f64 {
    angle_between(&a.values, &b.values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ray(v: &[i64]) -> Ray {
        Ray::from_ints(v).unwrap()
    }

    #[test]
    fn canonical_scale() {
        let r = Ray::new(vec![Rational64::new(1, 2), Rational64::from_integer(1), Rational64::zero()]).unwrap();
        assert_eq!(r.to_string(), "1,2,0");
        assert_eq!(ray(&[0, 3, 6]), ray(&[0, 1, 2]));
        assert!(Ray::from_ints(&[0, 0]).is_err());
        assert!(Ray::from_ints(&[1, -1]).is_err());
    }

    #[test]
    fn pseudo_weight_examples() {
        assert_eq!(ray(&[1, 1, 1, 0, 0, 0]).pseudo_weight(), 3.0);
        assert_eq!(ray(&[2, 1, 1, 1, 1, 0, 0]).pseudo_weight(), 4.5);
        assert_eq!(pseudo_weight_of(&[6.0, 3.0, 3.0, 3.0, 3.0]), 4.5);
        assert_eq!(pseudo_weight_of(&[0.0, 0.0]), 0.0);
    }

    #[test]
    fn virtual_points() {
        assert_eq!(virtual_point(&ray(&[1, 0, 1])), vec![1.0, 0.0, 1.0]);
        assert_eq!(virtual_point(&ray(&[2, 0, 0])), vec![1.0, 0.0, 0.0]);
        let v = virtual_point(&ray(&[2, 1, 1]));
        for (a, b) in v.iter().zip([4.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn boundary_distance_examples() {
        let ch = ChannelParams::new(0.0, 0.5).unwrap();
        let w = ray(&[1, 1, 1, 1, 0, 0]);
        let r = boundary_distance(&w, &ch);
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
        assert!((r / ch.sigma() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn boundary_distance_two_ways() {
        let ch = ChannelParams::new(3.0, 0.6).unwrap();
        for v in [[2i64, 1, 1, 0, 3, 1], [1, 1, 1, 0, 0, 0], [5, 2, 3, 3, 1, 4]] {
            let w = ray(&v);
            let x0 = bpsk(&vec![0.0; 6], &ch);
            let virt = bpsk(&virtual_point(&w), &ch);
            let d: f64 = virt.iter().zip(&x0).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            assert!((d / 2.0 - boundary_distance(&w, &ch)).abs() < 1e-12);
        }
    }

    #[test]
    fn angle_examples() {
        assert!((angle_deg(&ray(&[1, 1, 0]), &ray(&[0, 1, 1])) - 60.0).abs() < 1e-12);
        assert_eq!(angle_between(&[1.0, 2.0, 0.5], &[3.0, 6.0, 1.5]), 0.0);
        assert_eq!(angle_deg(&ray(&[1, 0]), &ray(&[0, 1])), 90.0);
    }

    #[test]
    fn binary_angle_formula_exhaustive() {
        for a in 1u32..256 {
            for b in (a..256).step_by(7) {
                let va: Vec<f64> = (0..8).map(|i| (a >> i & 1) as f64).collect();
                let vb: Vec<f64> = (0..8).map(|i| (b >> i & 1) as f64).collect();
                let (w1, w2, t) = (a.count_ones() as f64, b.count_ones() as f64, (a & b).count_ones() as f64);
                let expected = angle_from_cos(t / (w1 * w2).sqrt());
                assert!((angle_between(&va, &vb) - expected).abs() < 1e-9, "{a} {b}");
            }
        }
    }

    fn arb_vec(n: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.0f64..10.0, n).prop_filter("nonzero", |v| v.iter().any(|&x| x > 1e-3))
    }

    proptest! {
        #[test]
        fn pseudo_weight_at_most_n(v in arb_vec(9)) {
            let wp = pseudo_weight_of(&v);
            prop_assert!(wp >= 1.0 - 1e-12 && wp <= 9.0 + 1e-12);
        }

        #[test]
        fn pseudo_weight_scale_invariant(v in arb_vec(6), c in 0.01f64..100.0) {
            let s: Vec<f64> = v.iter().map(|x| x * c).collect();
            prop_assert!((pseudo_weight_of(&v) - pseudo_weight_of(&s)).abs() < 1e-10);
        }

        #[test]
        fn angle_is_metric(a in arb_vec(5), b in arb_vec(5), c in arb_vec(5)) {
            let ab = angle_between(&a, &b);
            prop_assert_eq!(ab, angle_between(&b, &a));
            prop_assert_eq!(angle_between(&a, &a), 0.0);
            prop_assert!((0.0..=90.0).contains(&ab));
            prop_assert!(angle_between(&a, &c) <= ab + angle_between(&b, &c) + 1e-4);
        }
    }

    #[test]
    fn equal_coordinates_reach_n() {
        assert_eq!(ray(&[3, 3, 3, 3]).pseudo_weight(), 4.0);
    }
}
