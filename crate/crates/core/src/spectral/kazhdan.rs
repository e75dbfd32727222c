//! Numeric spectral-gap certificates from representation theory.
//!
//! For a small group given by generating permutations, this module
//! enumerates the group, builds its regular representation, splits it into
//! minimal real-invariant blocks, and computes for every nontrivial block
//!
//!   min over unit v of  max over generators s of  ‖ρ(s)v − v‖.
//!
//! The minimum of these over all blocks lower-bounds how well a generating
//! set spreads mass, and converts to an edge-expansion lower bound K²/4.
//!
//! Block splitting uses a random symmetric element T = Σ_h c_h L_h of the
//! commutant (left multiplications commute with the right-translation
//! representation; c_h = c_{h⁻¹} makes T symmetric). Eigenspaces of a
//! generic such T are exactly the minimal real-invariant subspaces, so a
//! dense eigendecomposition of T yields the blocks; each block is validated
//! for invariance and the split is reseeded if a degeneracy merges blocks.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::perm::Permutation;
use crate::rng::{chacha, stream};
use crate::SCHEMA_VERSION;

/// Enumeration cap: the regular representation is |G|-dimensional.
pub const KAZHDAN_GROUP_CAP: usize = 60;
/// Reseed attempts for the commutant splitter before giving up.
const SPLIT_ATTEMPTS: usize = 8;
/// Eigenvalues of T closer than this (relative) are one block.
const CLUSTER_TOL: f64 = 1e-7;
/// Invariance defect allowed per block, scaled by √dim.
const INVARIANCE_TOL: f64 = 1e-7;
/// Random restarts of the sphere optimization per block.
const STARTS_PER_BLOCK: usize = 20;
/// Subgradient phase schedule: constant-step phases, geometrically shrinking.
const PHASE_STEPS: [f64; 9] = [0.1, 0.03, 0.01, 3e-3, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5];
const ITERS_PER_PHASE: usize = 250;
/// Two starts agreeing this closely mark a block minimum as converged.
const CONVERGE_MATCH_TOL: f64 = 1e-4;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IrrepBlock {
    /// Real dimension of the invariant block.
    pub dim: usize,
    /// min over unit v of max over generators of ‖ρ(s)v − v‖.
    pub minimum: f64,
    /// Whether at least two restarts agreed on the minimum.
    pub converged: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KazhdanReport {
    pub schema_version: u32,
    pub group_order: usize,
    pub generator_count: usize,
    /// Nontrivial blocks, in splitter eigenvalue order.
    pub blocks: Vec<IrrepBlock>,
    /// Minimum over the nontrivial blocks.
    pub kazhdan: f64,
    /// Index into `blocks` of the minimizing block.
    pub argmin_block: usize,
    pub seed: u64,
}

impl KazhdanReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Converts the representation constant to an edge-expansion lower bound.
pub fn kazhdan_to_expansion(k: f64) -> Result<f64> {
    if !(k > 0.0 && k <= 2.0 + 1e-6) {
        return Err(LabError::Invalid(format!(
            "constant {k} outside the valid range (0, 2]"
        )));
    }
    Ok(k * k / 4.0)
}

/// Enumerates ⟨gens⟩ breadth-first; deterministic element order.
fn enumerate_group(gens: &[Permutation]) -> Result<Vec<Permutation>> {
    if gens.is_empty() {
        return Err(LabError::Invalid("need at least one generator".into()));
    }
    let degree = gens[0].degree();
    if gens.iter().any(|g| g.degree() != degree) {
        return Err(LabError::Invalid("generators must share one degree".into()));
    }
    let identity = Permutation::identity(degree);
    let mut elements = vec![identity.clone()];
    let mut seen: HashMap<Permutation, usize> = HashMap::new();
    seen.insert(identity, 0);
    let mut frontier = 0;
    while frontier < elements.len() {
        let current = elements[frontier].clone();
        frontier += 1;
        for g in gens {
            let next = current.compose(g)?;
            if !seen.contains_key(&next) {
                if elements.len() >= KAZHDAN_GROUP_CAP {
                    return Err(LabError::Budget(format!(
                        "group exceeds the order cap of {KAZHDAN_GROUP_CAP}"
                    )));
                }
                seen.insert(next.clone(), elements.len());
                elements.push(next);
            }
        }
    }
    Ok(elements)
}

/// Index permutation of right translation: i ↦ index(g_i · s).
fn translation_map(elements: &[Permutation], index: &HashMap<Permutation, usize>, s: &Permutation) -> Vec<usize> {
    elements
        .iter()
        .map(|g| index[&g.compose(s).expect("degrees validated")])
        .collect()
}

/// Applies a translation map to the columns of Q: (P·q)[map[i]] = q[i].
fn permute_rows(map: &[usize], q: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(q.nrows(), q.ncols());
    for i in 0..q.nrows() {
        for j in 0..q.ncols() {
            out[(map[i], j)] = q[(i, j)];
        }
    }
    out
}

struct Block {
    basis: DMatrix<f64>, // n × dim, orthonormal columns
}

/// Splits R^G into minimal invariant blocks; returns the nontrivial ones.
fn split_blocks(
    elements: &[Permutation],
    index: &HashMap<Permutation, usize>,
    gen_maps: &[Vec<usize>],
    seed: u64,
) -> Result<Vec<Block>> {
    let n = elements.len();
    let inv_index: Vec<usize> = elements.iter().map(|g| index[&g.inverse()]).collect();
    let left_maps: Vec<Vec<usize>> = elements
        .iter()
        .map(|h| {
            elements
                .iter()
                .map(|g| index[&h.compose(g).expect("degrees validated")])
                .collect()
        })
        .collect();
    let mut rng = chacha(seed, stream::KAZHDAN_SPLITTER);

    'attempt: for _ in 0..SPLIT_ATTEMPTS {
        let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let coef: Vec<f64> = (0..n).map(|h| 0.5 * (raw[h] + raw[inv_index[h]])).collect();
        let mut t = DMatrix::<f64>::zeros(n, n);
        for (h, map) in left_maps.iter().enumerate() {
            for i in 0..n {
                t[(map[i], i)] += coef[h];
            }
        }
        let eigen = SymmetricEigen::new(t);
        let scale = eigen.eigenvalues.iter().fold(1.0f64, |a, &b| a.max(b.abs()));
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eigen.eigenvalues[a].partial_cmp(&eigen.eigenvalues[b]).unwrap());

        // Cluster consecutive eigenvalues into blocks.
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for &i in &order {
            match clusters.last_mut() {
                Some(cluster)
                    if (eigen.eigenvalues[i] - eigen.eigenvalues[*cluster.last().unwrap()])
                        .abs()
                        <= CLUSTER_TOL * scale =>
                {
                    cluster.push(i)
                }
                _ => clusters.push(vec![i]),
            }
        }

        let ones = DVector::from_element(n, 1.0 / (n as f64).sqrt());
        let mut blocks = Vec::new();
        let mut trivial_found = false;
        for cluster in &clusters {
            let dim = cluster.len();
            let mut basis = DMatrix::zeros(n, dim);
            for (j, &col) in cluster.iter().enumerate() {
                basis.set_column(j, &eigen.eigenvectors.column(col));
            }
            let overlap = (basis.transpose() * &ones).norm();
            if overlap > 0.5 {
                // Constants live here; they must be alone in their block.
                if dim != 1 || overlap < 1.0 - 1e-9 {
                    continue 'attempt;
                }
                trivial_found = true;
                continue;
            }
            // Validate invariance under every generator.
            for map in gen_maps {
                let moved = permute_rows(map, &basis);
                let inside = &basis * (basis.transpose() * &moved);
                if (&moved - inside).norm() > INVARIANCE_TOL * (dim as f64).sqrt() {
                    continue 'attempt;
                }
            }
            blocks.push(Block { basis });
        }
        if !trivial_found {
            continue 'attempt;
        }
        if blocks.iter().map(|b| b.basis.ncols()).sum::<usize>() != n - 1 {
            continue 'attempt;
        }
        return Ok(blocks);
    }
    Err(LabError::NonConvergence(format!(
        "block splitting failed after {SPLIT_ATTEMPTS} splitter reseedings"
    )))
}

/// min over unit v of max_s ‖rho_s·v − v‖ by multi-start projected
/// subgradient descent on the sphere.
fn minimize_block(rhos: &[DMatrix<f64>], rng: &mut ChaCha8Rng) -> (f64, bool) {
    let d = rhos[0].nrows();
    let diffs: Vec<DMatrix<f64>> =
        rhos.iter().map(|r| r - DMatrix::<f64>::identity(d, d)).collect();
    if d == 1 {
        let value = diffs.iter().map(|a| a[(0, 0)].abs()).fold(0.0, f64::max);
        return (value, true);
    }
    let objective = |v: &DVector<f64>| -> (f64, usize) {
        let mut best = (f64::MIN, 0);
        for (s, a) in diffs.iter().enumerate() {
            let norm = (a * v).norm();
            if norm > best.0 {
                best = (norm, s);
            }
        }
        best
    };
    let random_unit = |rng: &mut ChaCha8Rng| -> DVector<f64> {
        loop {
            let v = DVector::from_fn(d, |_, _| rng.gen_range(-1.0..1.0));
            let nm = v.norm();
            if nm > 1e-3 {
                return v / nm;
            }
        }
    };
    let mut start_results = Vec::with_capacity(STARTS_PER_BLOCK);
    for _ in 0..STARTS_PER_BLOCK {
        let mut v = random_unit(rng);
        let (mut best_f, _) = objective(&v);
        let mut best_v = v.clone();
        for &step in &PHASE_STEPS {
            v = best_v.clone();
            for _ in 0..ITERS_PER_PHASE {
                let (f, active) = objective(&v);
                if f < best_f {
                    best_f = f;
                    best_v = v.clone();
                }
                if f < 1e-12 {
                    break;
                }
                // Subgradient of max_s ‖A_s v‖ at the active generator,
                // projected onto the tangent space of the sphere.
                let a = &diffs[active];
                let grad = a.transpose() * (a * &v) / f;
                let tangent = &grad - &v * grad.dot(&v);
                v -= step * tangent;
                let nm = v.norm();
                if nm < 1e-12 {
                    break;
                }
                v /= nm;
            }
        }
        start_results.push(best_f);
    }
    let best = start_results.iter().copied().fold(f64::MAX, f64::min);
    let matching = start_results
        .iter()
        .filter(|&&f| f - best <= CONVERGE_MATCH_TOL)
        .count();
    (best, matching >= 2)
}

/// Full pipeline: enumerate ⟨gens⟩, split the regular representation, and
/// minimize the displacement on every nontrivial block.
pub fn kazhdan_numeric(gens: &[Permutation], seed: u64) -> Result<KazhdanReport> {
    let elements = enumerate_group(gens)?;
    let n = elements.len();
    if n < 2 {
        return Err(LabError::Invalid(
            "the generators generate the trivial group".into(),
        ));
    }
    let index: HashMap<Permutation, usize> = elements
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, g)| (g, i))
        .collect();
    let gen_maps: Vec<Vec<usize>> =
        gens.iter().map(|s| translation_map(&elements, &index, s)).collect();
    let blocks = split_blocks(&elements, &index, &gen_maps, seed)?;

    let mut rng = chacha(seed, stream::KAZHDAN_STARTS);
    let mut reports = Vec::with_capacity(blocks.len());
    for block in &blocks {
        let d = block.basis.ncols();
        let rhos: Vec<DMatrix<f64>> = gen_maps
            .iter()
            .map(|map| block.basis.transpose() * permute_rows(map, &block.basis))
            .collect();
        let (minimum, converged) = minimize_block(&rhos, &mut rng);
        reports.push(IrrepBlock { dim: d, minimum, converged });
    }
    let argmin_block = (0..reports.len())
        .min_by(|&a, &b| reports[a].minimum.partial_cmp(&reports[b].minimum).unwrap())
        .unwrap();
    let kazhdan = reports[argmin_block].minimum;
    Ok(KazhdanReport {
        schema_version: SCHEMA_VERSION,
        group_order: n,
        generator_count: gens.len(),
        blocks: reports,
        kazhdan,
        argmin_block,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shift(n: usize, k: usize) -> Permutation {
        Permutation::from_images((0..n).map(|x| ((x + k) % n) as u32).collect()).unwrap()
    }

    #[test]
    fn order_two_group_attains_the_maximum() {
        let report = kazhdan_numeric(&[shift(2, 1)], 0).unwrap();
        assert_eq!(report.group_order, 2);
        assert_eq!(report.blocks.len(), 1);
        assert_eq!(report.blocks[0].dim, 1);
        assert!((report.kazhdan - 2.0).abs() < 1e-9, "K = {}", report.kazhdan);
    }

    #[test]
    fn order_three_group_gives_sqrt_three() {
        // The nontrivial characters pair into one 2-dimensional rotation
        // block; a rotation by 2π/3 displaces every unit vector by √3.
        let report = kazhdan_numeric(&[shift(3, 1), shift(3, 2)], 1).unwrap();
        assert_eq!(report.group_order, 3);
        assert_eq!(report.blocks.len(), 1);
        assert_eq!(report.blocks[0].dim, 2);
        assert!((report.kazhdan - 3f64.sqrt()).abs() < 1e-6, "K = {}", report.kazhdan);
        assert!(report.blocks[0].converged);
    }

    #[test]
    fn order_four_cycle_gives_sqrt_two() {
        // Blocks: the −1 character (displacement 2) and a π/2 rotation
        // block (displacement √2 everywhere); the minimum is √2.
        let report = kazhdan_numeric(&[shift(4, 1), shift(4, 3)], 2).unwrap();
        assert_eq!(report.group_order, 4);
        let dims: Vec<usize> = report.blocks.iter().map(|b| b.dim).collect();
        assert_eq!(dims.iter().sum::<usize>(), 3);
        assert!((report.kazhdan - 2f64.sqrt()).abs() < 1e-6, "K = {}", report.kazhdan);
    }

    #[test]
    fn klein_four_group_with_two_generators() {
        let a = Permutation::from_cycles(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        let b = Permutation::from_cycles(4, &[vec![0, 2], vec![1, 3]]).unwrap();
        let report = kazhdan_numeric(&[a, b], 3).unwrap();
        assert_eq!(report.group_order, 4);
        assert_eq!(report.blocks.len(), 3);
        for block in &report.blocks {
            assert_eq!(block.dim, 1);
            assert!((block.minimum - 2.0).abs() < 1e-9);
        }
        assert!((report.kazhdan - 2.0).abs() < 1e-9);
    }

    #[test]
    fn symmetric_group_three_matches_a_grid_search_oracle() {
        let swap = Permutation::from_cycles(3, &[vec![0, 1]]).unwrap();
        let rot = Permutation::from_cycles(3, &[vec![0, 1, 2]]).unwrap();
        let report = kazhdan_numeric(&[swap.clone(), rot.clone()], 4).unwrap();
        assert_eq!(report.group_order, 6);
        // Blocks: sign (dim 1, displacement 2) and the standard
        // representation twice (dim 2 each). Σ dim = 5.
        assert_eq!(report.blocks.iter().map(|b| b.dim).sum::<usize>(), 5);

        // Independent oracle: the standard representation realized on the
        // sum-zero plane of R³, minimized by brute-force grid search.
        let u = nalgebra::Matrix3x2::new(
            1.0 / 2f64.sqrt(),
            1.0 / 6f64.sqrt(),
            -1.0 / 2f64.sqrt(),
            1.0 / 6f64.sqrt(),
            0.0,
            -2.0 / 6f64.sqrt(),
        );
        let perm_matrix = |p: &Permutation| {
            let mut m = nalgebra::Matrix3::<f64>::zeros();
            for i in 0..3 {
                m[(p.apply(i), i)] = 1.0;
            }
            m
        };
        let mats: Vec<nalgebra::Matrix2<f64>> = [&swap, &rot]
            .iter()
            .map(|p| u.transpose() * perm_matrix(p) * u)
            .collect();
        let mut grid_min = f64::MAX;
        let steps = 2_000_000usize;
        for k in 0..steps {
            let t = 2.0 * std::f64::consts::PI * k as f64 / steps as f64;
            let v = nalgebra::Vector2::new(t.cos(), t.sin());
            let f = mats.iter().map(|m| (m * v - v).norm()).fold(f64::MIN, f64::max);
            grid_min = grid_min.min(f);
        }
        assert!(
            (report.kazhdan - grid_min).abs() < 1e-3,
            "numeric {} vs grid {}",
            report.kazhdan,
            grid_min
        );
        // Closed form: the 3-cycle rotates by 2π/3, displacing every unit
        // vector by √3, and a reflection axis kills the swap term.
        assert!((report.kazhdan - 3f64.sqrt()).abs() < 1e-4);
    }

    #[test]
    fn reports_are_deterministic_for_a_fixed_seed() {
        let gens = [shift(5, 1), shift(5, 2)];
        let a = kazhdan_numeric(&gens, 9).unwrap().to_json().unwrap();
        let b = kazhdan_numeric(&gens, 9).unwrap().to_json().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn group_order_cap_is_enforced() {
        assert!(matches!(
            kazhdan_numeric(&[shift(61, 1)], 0),
            Err(LabError::Budget(_))
        ));
    }

    #[test]
    fn expansion_conversion_checks_its_domain() {
        assert!((kazhdan_to_expansion(2.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((kazhdan_to_expansion(1.0).unwrap() - 0.25).abs() < 1e-15);
        assert!(kazhdan_to_expansion(0.0).is_err());
        assert!(kazhdan_to_expansion(2.5).is_err());
    }
}
