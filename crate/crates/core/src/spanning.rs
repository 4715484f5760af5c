//! Angle graphs over generator sets and their minimum spanning trees.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fundamental_cone::{GeneratorSet, WeightHistogram};
use crate::pseudogeometry::angle_deg;

/// Largest node count accepted by [`brute_force_mst`].
pub const BRUTE_FORCE_MAX: usize = 7;

/// Symmetric cost matrix of a complete graph.
#[derive(Clone, Debug, PartialEq)]
pub struct CostMatrix {
    size: usize,
    costs: Vec<f64>,
}

impl CostMatrix {
    /// Builds a matrix from a full square array. The input must be symmetric
    /// with finite entries; the diagonal is forced to zero.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        let mut costs = vec![0.0; m * m];
        for (i, r) in rows.iter().enumerate() {
            if r.len() != m {
                return Err(Error::InvalidParameter("cost matrix must be square".into()));
            }
            for (j, &c) in r.iter().enumerate() {
                if !c.is_finite() || c != rows[j][i] {
                    return Err(Error::InvalidParameter(format!("bad cost at ({i},{j})")));
                }
                if i != j {
                    costs[i * m + j] = c;
                }
            }
        }
        Ok(Self { size: m, costs })
    }

    /// Builds a matrix from a symmetric cost function on `i < j`.
    pub fn from_fn(size: usize, f: impl Fn(usize, usize) -> f64 + Sync) -> Self {
        let rows: Vec<Vec<f64>> = (0..size)
            .into_par_iter()
            .map(|i| (0..size).map(|j| if i < j { f(i, j) } else { 0.0 }).collect())
            .collect();
        let mut costs = vec![0.0; size * size];
        for i in 0..size {
            for j in i + 1..size {
                costs[i * size + j] = rows[i][j];
                costs[j * size + i] = rows[i][j];
            }
        }
        Self { size, costs }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.costs[i * self.size + j]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Tree {
    /// Edges `(i, j)` with `i < j`, in the order they were added.
    pub edges: Vec<(usize, usize)>,
    pub total_cost: f64,
}

impl Tree {
    /// Whether the edges form a spanning tree on `m` nodes.
    pub fn is_spanning_tree(&self, m: usize) -> bool {
        if m == 0 || self.edges.len() + 1 != m {
            return false;
        }
        let mut parent: Vec<usize> = (0..m).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(a, b) in &self.edges {
            if a >= m || b >= m {
                return false;
            }
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    }

    /// Total cost of these edges under `costs`.
    pub fn cost_under(&self, costs: &CostMatrix) -> f64 {
        self.edges.iter().map(|&(i, j)| costs.get(i, j)).sum()
    }

    /// Edge CSV with header `edge_i,edge_j,angle_deg`.
    pub fn to_csv(&self, costs: &CostMatrix) -> String {
        let mut out = String::from("edge_i,edge_j,angle_deg\n");
        for &(i, j) in &self.edges {
            out += &format!("{},{},{}\n", i, j, costs.get(i, j));
        }
        out
    }
}

/// Complete graph on the rays of `set` with angle (degrees) edge costs.
pub fn build_angle_graph(set: &GeneratorSet) -> Result<CostMatrix> {
    if set.len() < 2 {
        return Err(Error::TooFewVectors { need: 2, got: set.len() });
    }
    let rays = set.rays();
    Ok(CostMatrix::from_fn(rays.len(), |i, j| angle_deg(&rays[i], &rays[j])))
}

/// Sum of edge costs in ascending order, so trees with the same cost
/// multiset get bit-identical totals.
fn canonical_total(mut costs: Vec<f64>) -> f64 {
    costs.sort_by(f64::total_cmp);
    costs.iter().sum()
}

/// Dense Prim over a complete graph whose cost is given by `cost(i, j)`
/// (called with `i < j`). Ties go to the smallest candidate node index.
pub fn prim_mst_with(m: usize, cost: impl Fn(usize, usize) -> f64) -> Tree {
    if m < 2 {
        return Tree {
            edges: Vec::new(),
            total_cost: 0.0,
        };
    }
    let c = |a: usize, b: usize| if a < b { cost(a, b) } else { cost(b, a) };
    let mut in_tree = vec![false; m];
    let mut best: Vec<f64> = (0..m).map(|v| if v == 0 { 0.0 } else { c(0, v) }).collect();
    let mut link = vec![0usize; m];
    in_tree[0] = true;
    let mut edges = Vec::with_capacity(m - 1);
    let mut picked = Vec::with_capacity(m - 1);
    for _ in 1..m {
        let mut pick = usize::MAX;
        for v in 0..m {
            if !in_tree[v] && (pick == usize::MAX || best[v] < best[pick]) {
                pick = v;
            }
        }
        in_tree[pick] = true;
        let u = link[pick];
        edges.push((u.min(pick), u.max(pick)));
        picked.push(best[pick]);
        for v in 0..m {
            if !in_tree[v] {
                let w = c(pick, v);
                if w < best[v] {
                    best[v] = w;
                    link[v] = pick;
                }
            }
        }
    }
    Tree {
        edges,
        total_cost: canonical_total(picked),
    }
}

pub fn prim_mst(costs: &CostMatrix) -> Tree {
    prim_mst_with(costs.size, |i, j| costs.get(i, j))
}

/// Exhaustive minimum over all `m^(m-2)` labeled trees via Prüfer sequences.
pub fn brute_force_mst(costs: &CostMatrix) -> Result<Tree> {
    let m = costs.size;
    if m > BRUTE_FORCE_MAX {
        return Err(Error::TooManyNodes {
            max: BRUTE_FORCE_MAX,
            got: m,
        });
    }
    if m < 2 {
        return Err(Error::TooFewVectors { need: 2, got: m });
    }
    let mut best: Option<Tree> = None;
    let count = m.pow((m - 2) as u32);
    for code in 0..count {
        let mut seq = Vec::with_capacity(m - 2);
        let mut x = code;
        for _ in 0..m - 2 {
            seq.push(x % m);
            x /= m;
        }
        let edges = prufer_decode(&seq, m);
        let total_cost = canonical_total(edges.iter().map(|&(i, j)| costs.get(i, j)).collect());
        if best.as_ref().map_or(true, |b| total_cost < b.total_cost) {
            best = Some(Tree { edges, total_cost });
        }
    }
    Ok(best.expect("at least one tree"))
}

/// Edges of the labeled tree encoded by a Prüfer sequence on `m` nodes.
pub fn prufer_decode(seq: &[usize], m: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; m];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(m - 1);
    for &s in seq {
        let leaf = (0..m).find(|&v| degree[v] == 1).expect("a leaf exists");
        edges.push((leaf.min(s), leaf.max(s)));
        degree[leaf] = 0;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..m).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

#[derive(Clone, Debug, PartialEq)]
pub struct AngleDistribution {
    pub tree: Tree,
    /// MST edge angles in degrees, in tree edge order.
    pub angles: Vec<f64>,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
}

impl AngleDistribution {
    pub fn histogram(&self, bin_width: f64) -> Result<WeightHistogram> {
        if !(bin_width > 0.0 && bin_width.is_finite()) {
            return Err(Error::InvalidParameter(format!("bin width must be positive, got {bin_width}")));
        }
        let bins: Vec<i64> = self.angles.iter().map(|a| (a / bin_width + 1e-9).floor() as i64).collect();
        let (Some(&lo), Some(&hi)) = (bins.iter().min(), bins.iter().max()) else {
            return Ok(WeightHistogram {
                bin_edges: Vec::new(),
                counts: Vec::new(),
            });
        };
        let mut counts = vec![0; (hi - lo + 1) as usize];
        for b in bins {
            counts[(b - lo) as usize] += 1;
        }
        let bin_edges = (lo..=hi + 1).map(|k| k as f64 * bin_width).collect();
        Ok(WeightHistogram { bin_edges, counts })
    }
}

/// Statistics of the edge angles on the MST of the angle graph.
pub fn mst_angle_distribution(set: &GeneratorSet) -> Result<AngleDistribution> {
    let g = build_angle_graph(set)?;
    let tree = prim_mst(&g);
    let angles: Vec<f64> = tree.edges.iter().map(|&(i, j)| g.get(i, j)).collect();
    let k = angles.len() as f64;
    let mean = angles.iter().sum::<f64>() / k;
    let std = (angles.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / k).sqrt();
    Ok(AngleDistribution { tree, angles, mean, std })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fundamental_cone::Source;
    use crate::pseudogeometry::Ray;
    use proptest::prelude::*;
    use rand::{seq::SliceRandom, Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn set(rays: &[&[i64]]) -> GeneratorSet {
        GeneratorSet::new(rays.iter().map(|r| Ray::from_ints(r).unwrap()).collect(), Source::Imported, "t")
    }

    fn random_costs(rng: &mut ChaCha8Rng, m: usize) -> CostMatrix {
        let vals: Vec<f64> = (0..m * m).map(|_| rng.gen_range(0..20) as f64).collect();
        CostMatrix::from_fn(m, |i, j| vals[i * m + j])
    }

    #[test]
    fn angle_graphs() {
        let g = build_angle_graph(&set(&[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(g.get(0, 1), 90.0);
        let g = build_angle_graph(&set(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]])).unwrap();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            assert!((g.get(i, j) - 60.0).abs() < 1e-9);
            assert_eq!(g.get(i, j), g.get(j, i));
        }
        assert_eq!(
            build_angle_graph(&set(&[&[1, 0]])).unwrap_err(),
            Error::TooFewVectors { need: 2, got: 1 }
        );
    }

    #[test]
    fn small_trees() {
        let tri = CostMatrix::from_rows(&[vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 3.0], vec![2.0, 3.0, 0.0]]).unwrap();
        assert_eq!(prim_mst(&tri).total_cost, 3.0);
        assert_eq!(brute_force_mst(&tri).unwrap().total_cost, 3.0);
        let flat = CostMatrix::from_fn(6, |_, _| 2.5);
        let t = prim_mst(&flat);
        assert_eq!(t.total_cost, 12.5);
        assert_eq!(t.edges, vec![(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]);
        let two = CostMatrix::from_fn(2, |_, _| 7.0);
        assert_eq!(brute_force_mst(&two).unwrap().edges, vec![(0, 1)]);
        assert!(matches!(brute_force_mst(&CostMatrix::from_fn(8, |_, _| 1.0)), Err(Error::TooManyNodes { .. })));
        assert!(CostMatrix::from_rows(&[vec![0.0, 1.0], vec![2.0, 0.0]]).is_err());
    }

    #[test]
    fn prufer_enumerates_all_trees() {
        let m = 5;
        let mut seen = std::collections::HashSet::new();
        for code in 0..m * m * m {
            let seq = vec![code % m, code / m % m, code / (m * m)];
            let mut e = prufer_decode(&seq, m);
            let t = Tree {
                edges: e.clone(),
                total_cost: 0.0,
            };
            assert!(t.is_spanning_tree(m));
            e.sort();
            seen.insert(e);
        }
        assert_eq!(seen.len(), 125);
    }

    #[test]
    fn prim_matches_cayley_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let g = random_costs(&mut rng, 6);
            let p = prim_mst(&g);
            assert!(p.is_spanning_tree(6));
            assert_eq!(p.total_cost, brute_force_mst(&g).unwrap().total_cost);
        }
    }

    #[test]
    fn prim_beats_random_trees() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let m = 12;
        let vals: Vec<f64> = (0..m * m).map(|_| rng.gen::<f64>()).collect();
        let g = CostMatrix::from_fn(m, |i, j| vals[i * m + j]);
        let best = prim_mst(&g).total_cost;
        for _ in 0..1000 {
            let seq: Vec<usize> = (0..m - 2).map(|_| rng.gen_range(0..m)).collect();
            let t = Tree {
                edges: prufer_decode(&seq, m),
                total_cost: 0.0,
            };
            assert!(best <= t.cost_under(&g) + 1e-12);
        }
    }

    #[test]
    fn angle_distributions() {
        let d = mst_angle_distribution(&set(&[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!((d.mean, d.std), (90.0, 0.0));
        let a = Ray::from_ints(&[1, 2, 0]).unwrap();
        let b = Ray::new(a.coords().iter().map(|c| c * 2).collect()).unwrap();
        let s = GeneratorSet::new(vec![a.clone(), b], Source::Imported, "t");
        assert_eq!(s.len(), 1);
        let s = GeneratorSet::new(vec![a, Ray::from_ints(&[1, 2, 1]).unwrap()], Source::Imported, "t");
        let d = mst_angle_distribution(&s).unwrap();
        assert!(d.mean > 0.0);
        assert_eq!(d.histogram(90.0).unwrap().total(), 1);
        let g = build_angle_graph(&s).unwrap();
        assert_eq!(d.tree.to_csv(&g).lines().next(), Some("edge_i,edge_j,angle_deg"));
    }

    proptest! {
        #[test]
        fn relabeling_keeps_total(seed in 0u64..1000, m in 2usize..9) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let vals: Vec<f64> = (0..m * m).map(|_| rng.gen::<f64>()).collect();
            let g = CostMatrix::from_fn(m, |i, j| vals[i * m + j]);
            let mut perm: Vec<usize> = (0..m).collect();
            perm.shuffle(&mut rng);
            let h = CostMatrix::from_fn(m, |i, j| g.get(perm[i], perm[j]));
            let (a, b) = (prim_mst(&g), prim_mst(&h));
            prop_assert!(a.is_spanning_tree(m) && b.is_spanning_tree(m));
            prop_assert!((a.total_cost - b.total_cost).abs() < 1e-12);
        }
    }
}
