use std::collections::HashSet;

use pseudocone::exact;
use pseudocone::fundamental_cone::{
    cone_inequalities, enumerate_rays, sample_rays, select_subgroup, weight_histogram, Criterion, InequalitySystem,
};
use pseudocone::gf2codes::{enumerate_codewords, hamming74, parse_dense, BinaryMatrix};
use pseudocone::pseudogeometry::Ray;
use rand::{seq::SliceRandom, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Extreme rays by brute force: every (n-1)-subset of constraints with a
/// one-dimensional null space whose generator (up to sign) lies in the cone.
fn oracle_rays(sys: &InequalitySystem) -> HashSet<Ray> {
    let n = sys.dim;
    let m = sys.constraints.len();
    let mut out = HashSet::new();
    let mut idx: Vec<usize> = (0..n - 1).collect();
    loop {
        let rows: Vec<Vec<i64>> = idx.iter().map(|&k| sys.constraints[k].coeffs.clone()).collect();
        if let Some(v) = exact::null_vector(&rows, n).unwrap() {
            for sign in [1i128, -1] {
                let w: Vec<i128> = v.iter().map(|x| x * sign).collect();
                if w.iter().all(|&x| x >= 0) {
                    let r = Ray::from_i128(&w).unwrap();
                    if sys.contains(&r) {
                        out.insert(r);
                    }
                }
            }
        }
        // Next combination in lexicographic order.
        let k = n - 1;
        let Some(p) = (0..k).rev().find(|&p| idx[p] != p + m - k) else {
            break;
        };
        idx[p] += 1;
        for q in p + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
    out
}

fn random_h(rng: &mut ChaCha8Rng, m: usize, n: usize) -> BinaryMatrix {
    loop {
        let rows: Vec<Vec<u8>> = (0..m).map(|_| (0..n).map(|_| rng.gen_range(0..2)).collect()).collect();
        if rows.iter().all(|r| r.iter().filter(|&&b| b == 1).count() >= 2) {
            return BinaryMatrix::from_rows(&rows).unwrap();
        }
    }
}

fn as_set(rays: &[Ray]) -> HashSet<Ray> {
    rays.iter().cloned().collect()
}

#[test]
fn enumeration_matches_brute_force_oracle() {
    for text in ["111", "1111", "11111", "1101100\n1011010\n0111001"] {
        let sys = cone_inequalities(&parse_dense(text).unwrap()).unwrap();
        let dd = enumerate_rays(&sys, 100_000).unwrap();
        assert_eq!(as_set(dd.rays()), oracle_rays(&sys), "{text}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..20 {
        let n = rng.gen_range(3..=6);
        let m = rng.gen_range(1..=3);
        let sys = cone_inequalities(&random_h(&mut rng, m, n)).unwrap();
        let dd = enumerate_rays(&sys, 100_000).unwrap();
        assert_eq!(as_set(dd.rays()), oracle_rays(&sys));
    }
}

#[test]
fn single_check_has_no_unit_rays() {
    let sys = cone_inequalities(&parse_dense("111").unwrap()).unwrap();
    let s = enumerate_rays(&sys, 100).unwrap();
    assert!(s.rays().iter().all(|r| r.support_size() >= 2));
}

#[test]
fn hamming_rays_contain_minimum_codewords() {
    let h = hamming74();
    let sys = cone_inequalities(&h).unwrap();
    let rays = enumerate_rays(&sys, 100_000).unwrap();
    let w3: Vec<Ray> = enumerate_codewords(&h, 8)
        .unwrap()
        .into_iter()
        .filter(|c| c.hamming_weight == 3)
        .map(|c| Ray::from_codeword(&c.bits).unwrap())
        .collect();
    assert_eq!(w3.len(), 7);
    assert!(w3.iter().all(|r| rays.contains(r)));
    assert!(rays.min_pseudo_weight().unwrap() <= 3.0 + 1e-12);
    let low = select_subgroup(&rays, Criterion::WpAtMost(3.0));
    assert!(w3.iter().all(|r| low.contains(r)));
    assert_eq!(weight_histogram(&rays, 0.25).unwrap().total(), rays.len());
    for r in rays.rays() {
        assert!(sys.contains(r));
        assert!(sys.contains_f64(r.values(), 1e-9));
    }
}

#[test]
fn pseudo_weight_never_exceeds_minimum_distance() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..15 {
        let n = rng.gen_range(5..=9);
        let m = rng.gen_range(2..=4);
        let h = random_h(&mut rng, m, n);
        let d = enumerate_codewords(&h, 16)
            .unwrap()
            .iter()
            .filter(|c| c.hamming_weight > 0)
            .map(|c| c.hamming_weight)
            .min();
        let rays = enumerate_rays(&cone_inequalities(&h).unwrap(), 1_000_000).unwrap();
        if let Some(d) = d {
            assert!(rays.min_pseudo_weight().unwrap() <= d as f64 + 1e-12);
        }
    }
}

#[test]
fn enumeration_is_permutation_equivariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..10 {
        let n = rng.gen_range(4..=8);
        let h = random_h(&mut rng, 3, n);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let rows: Vec<Vec<u8>> = (0..h.rows()).map(|i| perm.iter().map(|&p| h.get(i, p)).collect()).collect();
        let hp = BinaryMatrix::from_rows(&rows).unwrap();
        let a = enumerate_rays(&cone_inequalities(&h).unwrap(), 1_000_000).unwrap();
        let b = enumerate_rays(&cone_inequalities(&hp).unwrap(), 1_000_000).unwrap();
        let moved: HashSet<Ray> = a
            .rays()
            .iter()
            .map(|r| Ray::new(perm.iter().map(|&p| r.coords()[p]).collect()).unwrap())
            .collect();
        assert_eq!(moved, as_set(b.rays()));
    }
}

#[test]
fn sampling_recovers_hamming_rays() {
    let sys = cone_inequalities(&hamming74()).unwrap();
    let all = enumerate_rays(&sys, 100_000).unwrap();
    let sampled = sample_rays(&sys, 10_000, 1).unwrap();
    assert!(sampled.rays().iter().all(|r| all.contains(r)));
    assert_eq!(sampled.len(), all.len());
}

#[test]
fn sampling_stays_inside_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for seed in 0..8 {
        let h = random_h(&mut rng, 3, 7);
        let sys = cone_inequalities(&h).unwrap();
        let all = enumerate_rays(&sys, 1_000_000).unwrap();
        let s = sample_rays(&sys, 300, seed).unwrap();
        assert!(s.rays().iter().all(|r| all.contains(r)));
    }
    let orth = sample_rays(&InequalitySystem::orthant(3), 20, 5).unwrap();
    assert!(orth.rays().iter().all(|r| r.support_size() == 1));
}
