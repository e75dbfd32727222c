//! Timing harness for the eigen solvers on the 49-point cube family and
//! its 2352-vertex pair graph. Run with `cargo run --example spectral_bench`.

use std::time::Instant;

use expanderlab::algebra::action::{EnumKind, GenStyle};
use expanderlab::construction::{
    build_cube_family, power_generating_set, power_generating_set_projections_only, CubeIndex,
    LocalAction,
};
use expanderlab::spectral::eigen::{delta_power_probe, second_eigenvalue};
use expanderlab::spectral::{build_action_graph, EigenMethod, GraphKind};

fn main() -> expanderlab::Result<()> {
    let t0 = Instant::now();
    let local = LocalAction::new(2, 1, 3, GenStyle::Involution, EnumKind::ProjectivePlane)?;
    let cube = CubeIndex::new(7, 2, 100_000)?;
    let power = power_generating_set(&local, 7, 1)?;
    let family = build_cube_family(&cube, &local, &power)?;
    println!(
        "family: degree {} with {} elements  [{:.2?}]",
        family.degree(),
        family.elements().len(),
        t0.elapsed()
    );

    let t = Instant::now();
    let points = build_action_graph(&family, GraphKind::SchreierPoints, None, 10_000)?;
    println!(
        "point graph: {} vertices, {} maps  [{:.2?}]",
        points.n(),
        points.m(),
        t.elapsed()
    );
    for method in [EigenMethod::Dense, EigenMethod::PowerDeflation, EigenMethod::Lanczos] {
        let t = Instant::now();
        let rep = second_eigenvalue(&points, method, 1e-10, 7)?;
        println!(
            "  {:?}: λ₂ = {:.12} gap = {:.6} iters = {} [{:.2?}]",
            method,
            rep.lambda2,
            rep.gap,
            rep.iterations,
            t.elapsed()
        );
    }

    let t = Instant::now();
    let pairs = build_action_graph(&family, GraphKind::SchreierTuples, Some(2), 10_000)?;
    println!(
        "pair graph: {} vertices, {} maps  [{:.2?}]",
        pairs.n(),
        pairs.m(),
        t.elapsed()
    );
    for method in [EigenMethod::Dense, EigenMethod::Lanczos] {
        let t = Instant::now();
        let rep = second_eigenvalue(&pairs, method, 1e-10, 7)?;
        println!(
            "  {:?}: λ₂ = {:.12} gap = {:.6} iters = {} [{:.2?}]",
            method,
            rep.lambda2,
            rep.gap,
            rep.iterations,
            t.elapsed()
        );
    }

    let t = Instant::now();
    let probe = delta_power_probe(&pairs, 8, 20, 3)?;
    println!(
        "probe: max final ratio {:.3e}  [{:.2?}]",
        probe.max_final_ratio,
        t.elapsed()
    );

    let t = Instant::now();
    let local63 = LocalAction::new(2, 2, 3, GenStyle::Involution, EnumKind::NonzeroVectors)?;
    let cube63 = CubeIndex::new(63, 2, 100_000)?;
    let power63 = power_generating_set_projections_only(&local63, 63, 1)?;
    let family63 = build_cube_family(&cube63, &local63, &power63)?;
    println!(
        "K=63 family: degree {} with {} elements  [{:.2?}]",
        family63.degree(),
        family63.elements().len(),
        t.elapsed()
    );
    let t = Instant::now();
    let big = build_action_graph(&family63, GraphKind::SchreierPoints, None, 10_000)?;
    let rep = second_eigenvalue(&big, EigenMethod::Lanczos, 1e-10, 7)?;
    println!(
        "  Lanczos: λ₂ = {:.12} gap = {:.6} iters = {} [{:.2?}]",
        rep.lambda2,
        rep.gap,
        rep.iterations,
        t.elapsed()
    );
    Ok(())
}
