//! Exact edge expansion by exhaustive subset search, and the spectral
//! two-sided estimate that brackets it.
//!
//! The expansion constant is
//!   ε = min over subsets A with 0 < |A| ≤ n/2 of |∂A| / |A|,
//! where |∂A| counts pairs (generator s, vertex u ∈ A) with s(u) ∉ A over
//! the inverse-closed generator multiset. Exhaustive search is exponential
//! in the vertex count, so it is capped.

use super::{ActionGraph, ExpansionReport, SpectralReport};
use crate::error::{LabError, Result};
use crate::SCHEMA_VERSION;

/// Exhaustive search is 2^n; past this the subset loop is refused.
pub const BRUTE_FORCE_VERTEX_CAP: usize = 22;

/// Counts boundary pairs (s, u) with u ∈ A, s(u) ∉ A for a bitmask A.
fn boundary_size(g: &ActionGraph, mask: u32) -> u64 {
    let mut count = 0u64;
    for map in g.maps() {
        for u in 0..g.n() {
            if mask >> u & 1 == 1 && mask >> map[u] & 1 == 0 {
                count += 1;
            }
        }
    }
    count
}

/// Exact expansion constant with a witness subset, by enumerating every
/// nonempty subset of at most half the vertices.
pub fn brute_force_expansion(g: &ActionGraph) -> Result<ExpansionReport> {
    let n = g.n();
    if n < 2 {
        return Err(LabError::Invalid("need at least two vertices".into()));
    }
    if n > BRUTE_FORCE_VERTEX_CAP {
        return Err(LabError::Budget(format!(
            "{n} vertices exceed the exhaustive-search cap of {BRUTE_FORCE_VERTEX_CAP}"
        )));
    }
    let half = n / 2;
    let mut best_num = u64::MAX;
    let mut best_den = 1u64;
    let mut best_mask = 0u32;
    for mask in 1u32..(1u32 << n) {
        let size = mask.count_ones() as u64;
        if size as usize > half {
            continue;
        }
        let boundary = boundary_size(g, mask);
        // Compare boundary/size < best_num/best_den without floats.
        if boundary * best_den < best_num * size {
            best_num = boundary;
            best_den = size;
            best_mask = mask;
        }
    }
    let witness: Vec<usize> = (0..n).filter(|&u| best_mask >> u & 1 == 1).collect();
    // Re-verify the witness independently of the search loop.
    let recheck = boundary_size(g, best_mask);
    if recheck != best_num || witness.len() as u64 != best_den {
        return Err(LabError::Certification(
            "expansion witness failed re-verification".into(),
        ));
    }
    Ok(ExpansionReport {
        schema_version: SCHEMA_VERSION,
        vertex_count: n,
        generator_count: g.m(),
        exact: Some((best_num, best_den)),
        exact_value: Some(best_num as f64 / best_den as f64),
        witness: Some(witness),
        lower: None,
        upper: None,
    })
}

/// Spectral bracket for the expansion constant from a λ₂ measurement:
///   m(1 − λ₂)/2 ≤ ε ≤ m·sqrt(2(1 − λ₂)),
/// where m is the generator count of the inverse-closed multiset. These are
/// the standard conductance bounds (1 − λ₂)/2 ≤ φ ≤ sqrt(2(1 − λ₂)) scaled
/// by ε = m·φ at the minimizing subset.
pub fn cheeger_interval(report: &SpectralReport) -> Result<(f64, f64)> {
    let lambda2 = report.lambda2;
    if !(-1.0 - 1e-9..=1.0 + 1e-9).contains(&lambda2) {
        return Err(LabError::Invalid(format!(
            "λ₂ = {lambda2} is outside [-1, 1]"
        )));
    }
    let m = report.generator_count as f64;
    let gap = (1.0 - lambda2).max(0.0);
    Ok((m * gap / 2.0, m * (2.0 * gap).sqrt()))
}

/// Convenience: measure λ₂ densely and return the bracket as a report.
pub fn spectral_expansion_bounds(
    g: &ActionGraph,
    spectral: &SpectralReport,
) -> Result<ExpansionReport> {
    let (lower, upper) = cheeger_interval(spectral)?;
    Ok(ExpansionReport {
        schema_version: SCHEMA_VERSION,
        vertex_count: g.n(),
        generator_count: g.m(),
        exact: None,
        exact_value: None,
        witness: None,
        lower: Some(lower),
        upper: Some(upper),
    })
}

#[cfg(test)]
mod tests {
    use super::super::test_graphs::*;
    use super::super::EigenMethod;
    use super::*;

    #[test]
    fn complete_graph_expansion_is_two() {
        // K₄ as a Cayley graph of Z/4 with all three nonzero shifts:
        // any 2-subset has 4 outgoing boundary pairs, any 1-subset has 3.
        let g = complete(4);
        let report = brute_force_expansion(&g).unwrap();
        assert_eq!(report.exact, Some((4, 2)));
        assert!((report.exact_value.unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn cycle_expansion_is_one_half_with_contiguous_witness() {
        let g = cycle(8);
        let report = brute_force_expansion(&g).unwrap();
        assert_eq!(report.exact, Some((2, 4)));
        let witness = report.witness.unwrap();
        assert_eq!(witness.len(), 4);
        // The minimizer is a contiguous arc: exactly 2 boundary pairs.
        let mask: u32 = witness.iter().map(|&u| 1u32 << u).sum();
        assert_eq!(boundary_size(&g, mask), 2);
    }

    #[test]
    fn disconnected_graph_has_zero_expansion() {
        use crate::perm::Permutation;
        use crate::spectral::{ActionGraph, GraphKind};
        let two_swaps = Permutation::from_cycles(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        let g = ActionGraph::from_maps(GraphKind::SchreierPoints, &[two_swaps], &["s".into()])
            .unwrap();
        let report = brute_force_expansion(&g).unwrap();
        assert_eq!(report.exact, Some((0, 2)));
        let w = report.witness.unwrap();
        assert!(w == vec![0, 1] || w == vec![2, 3]);
    }

    #[test]
    fn cap_is_enforced() {
        let g = cycle(23);
        assert!(matches!(brute_force_expansion(&g), Err(LabError::Budget(_))));
    }

    #[test]
    fn cheeger_interval_brackets_the_exact_value() {
        for g in [cycle(8), complete(4), petersen(), cycle(12)] {
            let spectral =
                super::super::eigen::second_eigenvalue(&g, EigenMethod::Dense, 1e-12, 0).unwrap();
            let (lower, upper) = cheeger_interval(&spectral).unwrap();
            let exact = brute_force_expansion(&g).unwrap().exact_value.unwrap();
            assert!(
                lower <= exact + 1e-9 && exact <= upper + 1e-9,
                "n = {}: ε = {exact} outside [{lower}, {upper}]",
                g.n()
            );
        }
    }

    #[test]
    fn complete_graph_lower_bound_is_tight() {
        // K₄: λ₂ = −1/3, m = 3, so the lower bound is 3·(4/3)/2 = 2 = ε.
        let g = complete(4);
        let spectral =
            super::super::eigen::second_eigenvalue(&g, EigenMethod::Dense, 1e-12, 0).unwrap();
        let (lower, _) = cheeger_interval(&spectral).unwrap();
        assert!((lower - 2.0).abs() < 1e-9);
    }
}
