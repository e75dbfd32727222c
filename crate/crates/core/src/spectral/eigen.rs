//! Eigenvalue measurements of the Markov operator.
//!
//! Three routes: a dense symmetric eigendecomposition (exact to machine
//! precision, capped by `DENSE_VERTEX_CAP`), power iteration on the
//! half-shifted operator with the constant eigenvector deflated, and
//! Lanczos with full reorthogonalization. The iterative routes report the
//! residual ‖Δv − θv‖ actually achieved.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;

use super::{ActionGraph, EigenMethod, SpectralReport, DENSE_VERTEX_CAP};
use crate::error::{LabError, Result};
use crate::rng::{chacha, stream};
use crate::SCHEMA_VERSION;

/// Iteration cap for the power method.
const POWER_MAX_ITERS: usize = 400_000;
/// Lanczos basis growth schedule: blocks of this many steps.
const LANCZOS_BLOCK: usize = 40;
/// Lanczos basis cap.
const LANCZOS_MAX_STEPS: usize = 400;
/// How many top eigenvalues a report carries.
const REPORT_TOP: usize = 8;

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Removes the component along the all-ones vector.
fn deflate_constants(v: &mut [f64]) {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    for x in v.iter_mut() {
        *x -= mean;
    }
}

fn seeded_probe(n: usize, seed: u64, index: u64) -> Vec<f64> {
    let mut rng = chacha(seed, stream::SPECTRAL_PROBES + index);
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    deflate_constants(&mut v);
    let nm = norm(&v);
    for x in &mut v {
        *x /= nm;
    }
    v
}

/// Second eigenvalue (by signed value) of the Markov operator.
pub fn second_eigenvalue(
    g: &ActionGraph,
    method: EigenMethod,
    tol: f64,
    seed: u64,
) -> Result<SpectralReport> {
    if g.n() < 2 {
        return Err(LabError::Invalid("need at least two vertices".into()));
    }
    match method {
        EigenMethod::Dense => dense_report(g, tol, seed),
        EigenMethod::PowerDeflation => power_report(g, tol, seed),
        EigenMethod::Lanczos => lanczos_report(g, tol, seed),
    }
}

/// All eigenvalues of the Markov operator, descending. Exact dense route.
pub fn dense_spectrum(g: &ActionGraph) -> Result<Vec<f64>> {
    let n = g.n();
    if n > DENSE_VERTEX_CAP {
        return Err(LabError::Budget(format!(
            "{n} vertices exceed the dense cap of {DENSE_VERTEX_CAP}"
        )));
    }
    let w = 1.0 / g.m() as f64;
    let mut mat = DMatrix::<f64>::zeros(n, n);
    for map in g.maps() {
        for u in 0..n {
            mat[(u, map[u] as usize)] += w;
        }
    }
    let eigen = SymmetricEigen::new(mat);
    let mut vals: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(vals)
}

fn dense_report(g: &ActionGraph, tol: f64, seed: u64) -> Result<SpectralReport> {
    let vals = dense_spectrum(g)?;
    let lambda2 = vals[1];
    let max_abs_tail = vals[1].abs().max(vals.last().unwrap().abs());
    Ok(SpectralReport {
        schema_version: SCHEMA_VERSION,
        method: EigenMethod::Dense,
        vertex_count: g.n(),
        generator_count: g.m(),
        top_eigenvalues: vals.iter().copied().take(REPORT_TOP).collect(),
        lambda2,
        gap: 1.0 - lambda2,
        max_abs_tail,
        residual: 0.0,
        iterations: 0,
        tol,
        seed,
    })
}

/// Power iteration on (Δ + I)/2 restricted to the complement of the
/// constants. The shift makes the signed-largest eigenvalue of Δ the
/// dominant one, so the iteration converges to λ₂ rather than to the most
/// negative eigenvalue.
fn power_report(g: &ActionGraph, tol: f64, seed: u64) -> Result<SpectralReport> {
    let n = g.n();
    let mut v = seeded_probe(n, seed, 0);
    let mut av = vec![0.0; n];
    let mut theta = 0.0;
    let mut residual = f64::MAX;
    let mut iters = 0;
    while iters < POWER_MAX_ITERS {
        iters += 1;
        g.apply_markov(&v, &mut av);
        deflate_constants(&mut av);
        theta = dot(&v, &av);
        // residual² = ‖Δv − θv‖² = ‖Δv‖² − θ² for unit v.
        residual = (dot(&av, &av) - theta * theta).max(0.0).sqrt();
        if residual <= tol {
            break;
        }
        // Next iterate of (Δ+I)/2 on the deflated space.
        let mut nrm2 = 0.0;
        for (x, y) in av.iter_mut().zip(&v) {
            *x = 0.5 * (*x + y);
            nrm2 += *x * *x;
        }
        let nm = nrm2.sqrt();
        if nm < 1e-300 {
            // The deflated space is annihilated: λ₂ of a complete-type
            // spectrum; restart from a fresh probe.
            v = seeded_probe(n, seed, iters as u64);
            continue;
        }
        for (x, y) in v.iter_mut().zip(&av) {
            *x = y / nm;
        }
    }
    if residual > tol {
        return Err(LabError::NonConvergence(format!(
            "power iteration reached {POWER_MAX_ITERS} iterations with residual {residual:.3e} \
             (requested {tol:.3e})"
        )));
    }
    Ok(SpectralReport {
        schema_version: SCHEMA_VERSION,
        method: EigenMethod::PowerDeflation,
        vertex_count: n,
        generator_count: g.m(),
        top_eigenvalues: vec![1.0, theta],
        lambda2: theta,
        gap: 1.0 - theta,
        max_abs_tail: theta.abs(),
        residual,
        iterations: iters,
        tol,
        seed,
    })
}

/// Lanczos on Δ with the constants deflated and full reorthogonalization,
/// growing the basis until the top Ritz pair meets the tolerance.
fn lanczos_report(g: &ActionGraph, tol: f64, seed: u64) -> Result<SpectralReport> {
    let n = g.n();
    let max_steps = LANCZOS_MAX_STEPS.min(n.saturating_sub(1)).max(1);
    let mut basis: Vec<Vec<f64>> = vec![seeded_probe(n, seed, 0)];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    let mut best: Option<(f64, f64, Vec<f64>)> = None; // (θ, residual, ritz values)

    while alphas.len() < max_steps {
        let target = (alphas.len() + LANCZOS_BLOCK).min(max_steps);
        while alphas.len() < target {
            let q = basis.last().unwrap();
            g.apply_markov(q, &mut w);
            deflate_constants(&mut w);
            let alpha = dot(&w, q);
            alphas.push(alpha);
            for (x, qi) in w.iter_mut().zip(q) {
                *x -= alpha * qi;
            }
            if basis.len() > 1 {
                let beta_prev = betas[basis.len() - 2];
                let qprev = &basis[basis.len() - 2];
                for (x, qi) in w.iter_mut().zip(qprev) {
                    *x -= beta_prev * qi;
                }
            }
            // Full reorthogonalization for numerical stability.
            for q in &basis {
                let c = dot(&w, q);
                for (x, qi) in w.iter_mut().zip(q) {
                    *x -= c * qi;
                }
            }
            let beta = norm(&w);
            betas.push(beta);
            if beta < 1e-14 {
                break; // invariant subspace exhausted
            }
            basis.push(w.iter().map(|x| x / beta).collect());
        }

        let k = alphas.len();
        let mut t = DMatrix::<f64>::zeros(k, k);
        for i in 0..k {
            t[(i, i)] = alphas[i];
            if i + 1 < k {
                t[(i, i + 1)] = betas[i];
                t[(i + 1, i)] = betas[i];
            }
        }
        let eig = SymmetricEigen::new(t);
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
        let top = order[0];
        let theta = eig.eigenvalues[top];
        let beta_k = *betas.last().unwrap();
        let residual = (beta_k * eig.eigenvectors[(k - 1, top)]).abs();
        let ritz: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        best = Some((theta, residual, ritz));
        if residual <= tol || beta_k < 1e-14 || alphas.len() >= max_steps {
            break;
        }
    }

    let (theta, residual, ritz) = best.unwrap();
    if residual > tol {
        return Err(LabError::NonConvergence(format!(
            "Lanczos reached {} steps with residual {residual:.3e} (requested {tol:.3e})",
            alphas.len()
        )));
    }
    let min_ritz = ritz.last().copied().unwrap_or(theta);
    let mut top_eigenvalues = vec![1.0];
    top_eigenvalues.extend(ritz.iter().copied().take(REPORT_TOP - 1));
    Ok(SpectralReport {
        schema_version: SCHEMA_VERSION,
        method: EigenMethod::Lanczos,
        vertex_count: n,
        generator_count: g.m(),
        top_eigenvalues,
        lambda2: theta,
        gap: 1.0 - theta,
        max_abs_tail: theta.abs().max(min_ritz.abs()),
        residual,
        iterations: alphas.len(),
        tol,
        seed,
    })
}

// ---------------------------------------------------------------------------
// Operator-power probing
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct ProbeData {
    /// ‖Δ^t v‖ / ‖v‖ for t = 1..=power.
    pub ratios: Vec<f64>,
    /// max over t of ‖Δ^t v − v‖ − t·‖Δv − v‖ (must be ≤ the tolerance).
    pub telescope_excess: f64,
}

#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct PowerProbeReport {
    pub schema_version: u32,
    pub power: usize,
    pub probes: Vec<ProbeData>,
    /// Largest final ratio over all probes.
    pub max_final_ratio: f64,
    pub seed: u64,
}

/// Applies Δ repeatedly to random mean-zero unit probes, recording the norm
/// decay and checking the telescoping bound ‖Δ^t v − v‖ ≤ t·‖Δv − v‖
/// (valid because ‖Δ‖ ≤ 1).
pub fn delta_power_probe(
    g: &ActionGraph,
    power: usize,
    probes: usize,
    seed: u64,
) -> Result<PowerProbeReport> {
    if power < 1 || probes < 1 {
        return Err(LabError::Invalid("need power ≥ 1 and at least one probe".into()));
    }
    let n = g.n();
    let mut out = Vec::with_capacity(probes);
    let mut max_final_ratio = 0.0f64;
    for p in 0..probes {
        let v0 = seeded_probe(n, seed, p as u64);
        let mut v = v0.clone();
        let mut next = vec![0.0; n];
        let mut ratios = Vec::with_capacity(power);
        let mut step1_dist = 0.0;
        let mut excess = f64::MIN;
        for t in 1..=power {
            g.apply_markov(&v, &mut next);
            std::mem::swap(&mut v, &mut next);
            ratios.push(norm(&v));
            let dist: f64 = v
                .iter()
                .zip(&v0)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            if t == 1 {
                step1_dist = dist;
            }
            excess = excess.max(dist - t as f64 * step1_dist);
        }
        max_final_ratio = max_final_ratio.max(*ratios.last().unwrap());
        out.push(ProbeData { ratios, telescope_excess: excess });
    }
    Ok(PowerProbeReport {
        schema_version: SCHEMA_VERSION,
        power,
        probes: out,
        max_final_ratio,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::super::test_graphs::*;
    use super::*;

    #[test]
    fn complete_graph_second_eigenvalue_is_closed_form() {
        let g = complete(4);
        let report = second_eigenvalue(&g, EigenMethod::Dense, 1e-12, 0).unwrap();
        assert!((report.lambda2 - (-1.0 / 3.0)).abs() < 1e-12, "λ₂ = {}", report.lambda2);
        assert!((report.top_eigenvalues[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cycle_second_eigenvalue_is_cosine() {
        let g = cycle(8);
        let expected = (2.0 * std::f64::consts::PI / 8.0).cos();
        for method in [EigenMethod::Dense, EigenMethod::PowerDeflation, EigenMethod::Lanczos] {
            let report = second_eigenvalue(&g, method, 1e-11, 7).unwrap();
            assert!(
                (report.lambda2 - expected).abs() < 1e-9,
                "{method:?}: λ₂ = {} vs {expected}",
                report.lambda2
            );
            assert!(report.residual <= report.tol);
        }
    }

    #[test]
    fn petersen_second_eigenvalue_is_one_third() {
        let g = petersen();
        let report = second_eigenvalue(&g, EigenMethod::Dense, 1e-12, 0).unwrap();
        assert!((report.lambda2 - 1.0 / 3.0).abs() < 1e-12, "λ₂ = {}", report.lambda2);
        // Full spectrum of the Markov operator: 1, 1/3 (×5), −2/3 (×4).
        let vals = dense_spectrum(&g).unwrap();
        assert!((vals[5] - 1.0 / 3.0).abs() < 1e-12);
        assert!((vals[6] + 2.0 / 3.0).abs() < 1e-12);
        assert!((report.max_abs_tail - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn iterative_routes_agree_with_dense() {
        for g in [cycle(12), petersen(), complete(6)] {
            let dense = second_eigenvalue(&g, EigenMethod::Dense, 1e-12, 0).unwrap();
            for method in [EigenMethod::PowerDeflation, EigenMethod::Lanczos] {
                let it = second_eigenvalue(&g, method, 1e-10, 3).unwrap();
                assert!(
                    (dense.lambda2 - it.lambda2).abs() <= 10.0 * it.tol,
                    "{method:?} on n={}: {} vs {}",
                    g.n(),
                    it.lambda2,
                    dense.lambda2
                );
            }
        }
    }

    #[test]
    fn adding_shift_generators_to_a_cycle_improves_the_gap() {
        use crate::perm::Permutation;
        use crate::spectral::{ActionGraph, GraphKind};
        let n = 16;
        let shift = |k: usize| {
            Permutation::from_images((0..n).map(|x| ((x + k) % n) as u32).collect()).unwrap()
        };
        let narrow = ActionGraph::from_maps(
            GraphKind::SchreierPoints,
            &[shift(1)],
            &["+1".into()],
        )
        .unwrap();
        let wide = ActionGraph::from_maps(
            GraphKind::SchreierPoints,
            &[shift(1), shift(3), shift(7)],
            &["+1".into(), "+3".into(), "+7".into()],
        )
        .unwrap();
        let g1 = second_eigenvalue(&narrow, EigenMethod::Dense, 1e-12, 0).unwrap().gap;
        let g2 = second_eigenvalue(&wide, EigenMethod::Dense, 1e-12, 0).unwrap().gap;
        assert!(g2 >= g1 - 1e-12, "gap fell from {g1} to {g2}");
    }

    #[test]
    fn probe_ratios_follow_the_second_eigenvalue_on_eigenvectors() {
        // On the cycle, start from an exact λ₂ eigenvector: cos(2πu/n).
        let n = 8;
        let g = cycle(n);
        let lambda2 = (2.0 * std::f64::consts::PI / n as f64).cos();
        let v: Vec<f64> = (0..n)
            .map(|u| (2.0 * std::f64::consts::PI * u as f64 / n as f64).cos())
            .collect();
        let nm = norm(&v);
        let mut v: Vec<f64> = v.iter().map(|x| x / nm).collect();
        let mut next = vec![0.0; n];
        for t in 1..=8 {
            g.apply_markov(&v, &mut next);
            std::mem::swap(&mut v, &mut next);
            assert!(
                (norm(&v) - lambda2.powi(t)).abs() < 1e-12,
                "t = {t}: ‖Δ^t v‖ = {} vs λ₂^t = {}",
                norm(&v),
                lambda2.powi(t)
            );
        }
    }

    #[test]
    fn telescoping_holds_for_random_probes() {
        for g in [cycle(10), petersen(), complete(5)] {
            let report = delta_power_probe(&g, 8, 6, 2).unwrap();
            for probe in &report.probes {
                assert!(probe.telescope_excess <= 1e-12, "excess {}", probe.telescope_excess);
                assert_eq!(probe.ratios.len(), 8);
            }
        }
    }

    #[test]
    fn disconnected_graph_reports_lambda2_one() {
        use crate::perm::Permutation;
        use crate::spectral::{ActionGraph, GraphKind};
        let two_swaps = Permutation::from_cycles(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        let g = ActionGraph::from_maps(GraphKind::SchreierPoints, &[two_swaps], &["s".into()])
            .unwrap();
        let report = second_eigenvalue(&g, EigenMethod::Dense, 1e-12, 0).unwrap();
        assert!((report.lambda2 - 1.0).abs() < 1e-12);
    }
}
