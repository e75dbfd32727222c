//! Random-generator baselines: how well does a *typical* generating set of
//! the same size expand, on the same group or on a reference group?
//!
//! Each trial draws uniform random elements from a stabilizer-chain
//! certificate, builds the corresponding graph, and measures λ₂. The
//! summary statistics (median/min/max gap) give the yardstick a structured
//! construction has to beat.

use num::BigUint;
use serde::{Deserialize, Serialize};

use super::eigen::second_eigenvalue;
use super::{cayley_graph, ActionGraph, EigenMethod, GraphKind};
use crate::bsgs::Bsgs;
use crate::error::{LabError, Result};
use crate::perm::Permutation;
use crate::rng::{chacha, stream};
use crate::SCHEMA_VERSION;

/// Trials on graphs at most this large use the dense eigensolver.
const BASELINE_DENSE_CUTOFF: usize = 300;
/// Iterative tolerance for larger trials.
const BASELINE_ITER_TOL: f64 = 1e-9;
/// Cayley-mode element enumeration cap.
pub const BASELINE_ELEMENT_CAP: usize = 5000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselineMode {
    /// Graph on all group elements (Cayley graph).
    CayleyElements,
    /// Graph on the points the group permutes.
    SchreierPoints,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BaselineReport {
    pub schema_version: u32,
    pub mode: BaselineMode,
    pub group_order: String,
    pub vertex_count: usize,
    pub set_size: usize,
    pub trials: usize,
    /// λ₂ per trial, in trial order.
    pub lambda2s: Vec<f64>,
    /// 1 − λ₂ per trial.
    pub gaps: Vec<f64>,
    pub median_gap: f64,
    pub min_gap: f64,
    pub max_gap: f64,
    pub seed: u64,
}

impl BaselineReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Draws `set_size` uniform non-identity elements (with repetition).
fn draw_set(bsgs: &Bsgs, set_size: usize, trial_seed: u64, seed: u64) -> Vec<Permutation> {
    let mut rng = chacha(seed, stream::BASELINE_TRIAL + trial_seed);
    let identity = Permutation::identity(bsgs.degree());
    let mut out = Vec::with_capacity(set_size);
    while out.len() < set_size {
        let g = bsgs.random_element(&mut rng);
        if g != identity {
            out.push(g);
        }
    }
    out
}

fn trial_graph(bsgs: &Bsgs, gens: &[Permutation], mode: BaselineMode) -> Result<ActionGraph> {
    let labels: Vec<String> = (0..gens.len()).map(|i| format!("r{i}")).collect();
    match mode {
        BaselineMode::SchreierPoints => {
            ActionGraph::from_maps(GraphKind::SchreierPoints, gens, &labels)
        }
        BaselineMode::CayleyElements => {
            let elements = bsgs.elements(BASELINE_ELEMENT_CAP)?;
            cayley_graph(&elements, gens, &labels)
        }
    }
}

/// Runs `trials` independent random-set trials and summarizes the gaps.
///
/// When `set_size` is at least |G| − 1 in Cayley mode, random sets are
/// replaced by every non-identity element exactly once (the complete
/// graph), the natural "maximal generating set" reference point.
pub fn random_cayley_baseline(
    bsgs: &Bsgs,
    set_size: usize,
    trials: usize,
    mode: BaselineMode,
    seed: u64,
) -> Result<BaselineReport> {
    if set_size == 0 || trials == 0 {
        return Err(LabError::Invalid("need set_size ≥ 1 and trials ≥ 1".into()));
    }
    let exhaustive = mode == BaselineMode::CayleyElements
        && BigUint::from(set_size + 1) >= *bsgs.order();
    let mut lambda2s = Vec::with_capacity(trials);
    let mut vertex_count = 0;
    for t in 0..trials {
        let gens = if exhaustive {
            let mut all = bsgs.elements(BASELINE_ELEMENT_CAP)?;
            all.retain(|g| !g.is_identity());
            all
        } else {
            draw_set(bsgs, set_size, t as u64, seed)
        };
        let graph = trial_graph(bsgs, &gens, mode)?;
        vertex_count = graph.n();
        let method = if graph.n() <= BASELINE_DENSE_CUTOFF {
            EigenMethod::Dense
        } else {
            EigenMethod::Lanczos
        };
        let report = second_eigenvalue(&graph, method, BASELINE_ITER_TOL, seed)?;
        lambda2s.push(report.lambda2);
    }
    let gaps: Vec<f64> = lambda2s.iter().map(|l| 1.0 - l).collect();
    let mut sorted = gaps.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(BaselineReport {
        schema_version: SCHEMA_VERSION,
        mode,
        group_order: bsgs.order().to_string(),
        vertex_count,
        set_size,
        trials,
        lambda2s,
        gaps,
        median_gap: median(&sorted),
        min_gap: sorted[0],
        max_gap: *sorted.last().unwrap(),
        seed,
    })
}

/// Stabilizer-chain certificate for the cyclic shift group on n points.
pub fn cyclic_group(n: usize) -> Result<Bsgs> {
    let shift = Permutation::from_images((0..n).map(|x| ((x + 1) % n) as u32).collect())?;
    Bsgs::build_with_target(&[shift], 0, Some(BigUint::from(n)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_set_gives_the_complete_graph_eigenvalue() {
        let group = cyclic_group(12).unwrap();
        let report =
            random_cayley_baseline(&group, 20, 2, BaselineMode::CayleyElements, 0).unwrap();
        assert_eq!(report.vertex_count, 12);
        for l in &report.lambda2s {
            assert!((l - (-1.0 / 11.0)).abs() < 1e-9, "λ₂ = {l}");
        }
    }

    #[test]
    fn large_cyclic_group_with_two_generators_expands_poorly() {
        let group = cyclic_group(500).unwrap();
        let report =
            random_cayley_baseline(&group, 2, 3, BaselineMode::CayleyElements, 7).unwrap();
        assert_eq!(report.vertex_count, 500);
        assert_eq!(report.gaps.len(), 3);
        assert!(report.median_gap < 0.05, "median gap {}", report.median_gap);
    }

    #[test]
    fn schreier_and_cayley_modes_agree_for_a_regular_action() {
        // The shift action of Z/n on n points *is* the regular action, so
        // both modes build isomorphic graphs.
        let group = cyclic_group(60).unwrap();
        let a = random_cayley_baseline(&group, 3, 2, BaselineMode::CayleyElements, 11).unwrap();
        let b = random_cayley_baseline(&group, 3, 2, BaselineMode::SchreierPoints, 11).unwrap();
        for (x, y) in a.lambda2s.iter().zip(&b.lambda2s) {
            assert!((x - y).abs() < 1e-8, "{x} vs {y}");
        }
    }

    #[test]
    fn reports_are_deterministic_and_reject_empty_runs() {
        let group = cyclic_group(30).unwrap();
        let a = random_cayley_baseline(&group, 2, 4, BaselineMode::SchreierPoints, 5)
            .unwrap()
            .to_json()
            .unwrap();
        let b = random_cayley_baseline(&group, 2, 4, BaselineMode::SchreierPoints, 5)
            .unwrap()
            .to_json()
            .unwrap();
        assert_eq!(a, b);
        assert!(random_cayley_baseline(&group, 0, 4, BaselineMode::SchreierPoints, 5).is_err());
        assert!(random_cayley_baseline(&group, 2, 0, BaselineMode::SchreierPoints, 5).is_err());
    }
}
