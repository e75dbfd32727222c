//! Random walks with generating families.
//!
//! Three diagnostics live here, all driven by the same inverse-closed
//! multiset the spectral module builds its Markov operator from:
//!
//! * **random words** — products of uniform picks, the pseudo-random
//!   permutation generator;
//! * **exact mixing curves** — iterating the point-action Markov operator on
//!   a delta start and tracking total-variation distance to uniform, with
//!   the eigenvalue prediction overlaid;
//! * **cycle statistics** — fixed-point and cycle counts of sampled words
//!   against the uniform references (mean 1 fixed point, harmonic-number
//!   cycle count);
//! * **tuple routing** — a greedy probe of how freely the union of the axis
//!   abelian groups moves ordered tuples around the cube.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construction::{abelian_axis_element, CubeIndex, LocalAction};
use crate::construction::GeneratingFamily;
use crate::error::{LabError, Result};
use crate::perm::Permutation;
use crate::rng::{chacha, stream};
use crate::spectral::eigen::dense_spectrum;
use crate::spectral::{build_action_graph, inverse_closure, GraphKind, DENSE_VERTEX_CAP};
use crate::SCHEMA_VERSION;

/// Routing gives up on a tuple coordinate after this many fix-up rounds;
/// each round costs at most two moves, so a routed point never consumes
/// more than `2·(2d+2)` moves.
fn max_rounds_per_point(d: usize) -> usize {
    2 * d + 2
}

/// Parameter bag for walk experiments. The family itself is loaded from the
/// referenced artifact by the caller.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkConfig {
    /// Path (or label) of the family artifact the walk runs against.
    pub family: String,
    /// Word length.
    pub length: usize,
    pub seed: u64,
    pub samples: usize,
}

impl WalkConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(LabError::Invalid("at least one sample is required".into()));
        }
        Ok(())
    }
}

/// One point of an exact mixing curve.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MixingStep {
    pub t: usize,
    /// Total-variation distance between the step-t distribution and uniform.
    pub tv: f64,
    /// The eigenvalue envelope λ̂₂ᵗ·√N.
    pub prediction: f64,
}

/// Cycle statistics of sampled (or exhaustively enumerated) words.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CycleStats {
    /// Number of words the statistics aggregate.
    pub samples: usize,
    pub word_length: usize,
    /// True when every word of the given length was enumerated once, making
    /// the means exact rather than sampled.
    pub exhaustive: bool,
    pub fixed_point_mean: f64,
    pub fixed_point_variance: f64,
    pub fixed_point_stderr: f64,
    pub cycle_count_mean: f64,
    pub cycle_count_stderr: f64,
    /// Uniform-permutation reference: one fixed point on average.
    pub reference_fixed_point_mean: f64,
    /// Uniform-permutation reference: the harmonic number H_n.
    pub reference_cycle_count_mean: f64,
}

/// Mixing diagnostics: the exact total-variation curve and/or word
/// statistics, depending on which operation produced the report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MixingReport {
    pub schema_version: u32,
    /// Vertex count of the walked graph (= permuted points).
    pub vertices: usize,
    /// max |λ_i| over i ≥ 2 of the Markov operator, the decay rate of the
    /// prediction envelope.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lambda_hat: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub curve: Option<Vec<MixingStep>>,
    /// First step whose total variation drops below 1/100, if any did
    /// within the computed horizon.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub first_tv_below_hundredth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stats: Option<CycleStats>,
}

impl MixingReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<MixingReport> {
        Ok(serde_json::from_str(text)?)
    }

    /// The curve as `t,tv,prediction` CSV for plotting.
    pub fn tv_curve_csv(&self) -> Result<String> {
        let curve = self
            .curve
            .as_ref()
            .ok_or_else(|| LabError::Invalid("this report carries no mixing curve".into()))?;
        let mut out = String::from("t,tv,prediction\n");
        for step in curve {
            out.push_str(&format!("{},{:.17e},{:.17e}\n", step.t, step.tv, step.prediction));
        }
        Ok(out)
    }
}

/// One routing move: rotate a single fiber of one axis by a power of the
/// fiber cycle — an element of that axis's abelian group with exactly one
/// nonzero exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisMove {
    pub axis: usize,
    pub fiber: usize,
    pub exponent: u64,
}

/// Result of the almost-transitivity probe: how often a greedy router moves
/// one ordered tuple to another within a move budget.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TransitivityProbe {
    pub schema_version: u32,
    /// Tuple size.
    pub r: usize,
    /// Move budget.
    pub t: usize,
    /// Number of (source, target) pairs examined.
    pub pairs: usize,
    /// True when every ordered pair of r-tuples was examined.
    pub exhaustive: bool,
    pub seed: u64,
    pub successes: usize,
    /// Success fraction at the full budget.
    pub kappa: f64,
    /// Success fraction at every intermediate budget 0..=t. The router's
    /// move sequence does not depend on the budget, so this is monotone.
    pub kappa_curve: Vec<f64>,
}

impl TransitivityProbe {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<TransitivityProbe> {
        Ok(serde_json::from_str(text)?)
    }
}

// ---------------------------------------------------------------------------
// Random words
// ---------------------------------------------------------------------------

fn closed_elements(family: &GeneratingFamily) -> Result<Vec<Permutation>> {
    if family.is_empty() {
        return Err(LabError::Invalid("cannot walk with an empty family".into()));
    }
    let labels: Vec<String> = family.labels().iter().map(|l| l.source.clone()).collect();
    let (closed, _) = inverse_closure(family.elements(), &labels);
    Ok(closed)
}

/// Product of `len` uniform picks from an inverse-closed multiset, composed
/// in pick order (the first pick applies first).
fn word_from_rng(closed: &[Permutation], degree: usize, len: usize, rng: &mut ChaCha8Rng) -> Permutation {
    let mut cur: Vec<u32> = (0..degree as u32).collect();
    let mut next = vec![0u32; degree];
    for _ in 0..len {
        let pick = closed[rng.gen_range(0..closed.len())].images();
        for x in 0..degree {
            next[x] = pick[cur[x] as usize];
        }
        std::mem::swap(&mut cur, &mut next);
    }
    Permutation::from_images(cur).expect("products of permutations are permutations")
}

/// A pseudo-random permutation: the product of `len` uniform i.i.d. picks
/// from the inverse closure of the family. Deterministic per seed.
pub fn random_word(family: &GeneratingFamily, len: usize, seed: u64) -> Result<Permutation> {
    let mut rng = chacha(seed, stream::WALK_WORD);
    random_word_continuing(family, len, &mut rng)
}

/// Like [`random_word`] but drawing from a caller-held stream. This is the
/// word-splitting rule: drawing `a` picks and then `b` picks from one stream
/// composes (first word applied first) to the word of `a + b` picks drawn
/// from a fresh copy of the same stream.
pub fn random_word_continuing(
    family: &GeneratingFamily,
    len: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Permutation> {
    let closed = closed_elements(family)?;
    Ok(word_from_rng(&closed, family.degree(), len, rng))
}

// ---------------------------------------------------------------------------
// Exact mixing
// ---------------------------------------------------------------------------

/// Iterates the point-action Markov operator exactly from a delta start and
/// records the total-variation distance to uniform after 0..=steps steps,
/// with the eigenvalue envelope λ̂₂ᵗ·√N alongside.
///
/// The walk distribution and the operator coincide because the generator
/// multiset is inverse-closed (the transition matrix is symmetric), so the
/// curve is monotone and sits under the envelope; both facts are asserted.
pub fn point_mixing_exact(family: &GeneratingFamily, steps: usize) -> Result<MixingReport> {
    let graph = build_action_graph(family, GraphKind::SchreierPoints, None, DENSE_VERTEX_CAP)?;
    let n = graph.n();
    let spectrum = dense_spectrum(&graph)?;
    let lambda_hat = if n > 1 {
        spectrum[1].abs().max(spectrum[n - 1].abs())
    } else {
        0.0
    };

    let uniform = 1.0 / n as f64;
    let sqrt_n = (n as f64).sqrt();
    let mut dist = vec![0.0; n];
    dist[0] = 1.0;
    let mut curve = Vec::with_capacity(steps + 1);
    let mut first_below = None;
    let mut prev_tv = f64::INFINITY;
    for t in 0..=steps {
        let tv = 0.5 * dist.iter().map(|p| (p - uniform).abs()).sum::<f64>();
        let prediction = lambda_hat.powi(t as i32) * sqrt_n;
        assert!(
            tv <= prev_tv + 1e-12,
            "total variation increased at step {t}: {prev_tv} -> {tv}"
        );
        assert!(
            tv <= prediction + 1e-9,
            "total variation {tv} above the eigenvalue envelope {prediction} at step {t}"
        );
        if first_below.is_none() && tv < 0.01 {
            first_below = Some(t);
        }
        curve.push(MixingStep { t, tv, prediction });
        prev_tv = tv;
        if t < steps {
            dist = graph.markov(&dist);
        }
    }

    Ok(MixingReport {
        schema_version: SCHEMA_VERSION,
        vertices: n,
        lambda_hat: Some(lambda_hat),
        curve: Some(curve),
        first_tv_below_hundredth: first_below,
        stats: None,
    })
}

// ---------------------------------------------------------------------------
// Cycle statistics
// ---------------------------------------------------------------------------

fn harmonic(n: usize) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}

fn mean_and_stderr(values: &[f64]) -> (f64, f64, f64) {
    let count = values.len() as f64;
    let mean = values.iter().sum::<f64>() / count;
    let variance = if values.len() > 1 {
        values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (count - 1.0)
    } else {
        0.0
    };
    (mean, variance, (variance / count).sqrt())
}

/// Fixed-point and cycle-count statistics of length-`length` words.
///
/// When the total number of words (closure size to the power `length`) is
/// within the sample budget, every word is enumerated exactly once and the
/// statistics are exact; otherwise `samples` words are drawn, one rng
/// sub-stream per word. Uniform-permutation references (mean 1 fixed
/// point, H_n cycles) are reported alongside, not asserted.
pub fn cycle_statistics(
    family: &GeneratingFamily,
    length: usize,
    samples: usize,
    seed: u64,
) -> Result<MixingReport> {
    if samples == 0 {
        return Err(LabError::Invalid("at least one sample is required".into()));
    }
    let closed = closed_elements(family)?;
    let n = family.degree();

    let total_words = u32::try_from(length)
        .ok()
        .and_then(|l| closed.len().checked_pow(l))
        .filter(|&total| total <= samples);
    let measure = |word: &Permutation| {
        let fixed = (n - word.support()) as f64;
        let cycles = word.cycle_type().parts().len() as f64;
        (fixed, cycles)
    };

    let (pairs, exhaustive): (Vec<(f64, f64)>, bool) = match total_words {
        Some(total) => {
            // Odometer over all words in pick order.
            let mut digits = vec![0usize; length];
            let mut out = Vec::with_capacity(total);
            loop {
                let mut word = Permutation::identity(n);
                for &d in &digits {
                    word = word.compose(&closed[d]).expect("equal degrees");
                }
                out.push(measure(&word));
                let mut pos = 0;
                loop {
                    if pos == length {
                        break;
                    }
                    digits[pos] += 1;
                    if digits[pos] < closed.len() {
                        break;
                    }
                    digits[pos] = 0;
                    pos += 1;
                }
                if pos == length {
                    break;
                }
            }
            (out, true)
        }
        None => {
            let out = (0..samples)
                .into_par_iter()
                .map(|i| {
                    let mut rng = chacha(seed, stream::WALK_WORD + i as u64);
                    measure(&word_from_rng(&closed, n, length, &mut rng))
                })
                .collect();
            (out, false)
        }
    };

    let fixed: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let cycles: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let (fixed_mean, fixed_var, fixed_se) = mean_and_stderr(&fixed);
    let (cycle_mean, _, cycle_se) = mean_and_stderr(&cycles);

    Ok(MixingReport {
        schema_version: SCHEMA_VERSION,
        vertices: n,
        lambda_hat: None,
        curve: None,
        first_tv_below_hundredth: None,
        stats: Some(CycleStats {
            samples: pairs.len(),
            word_length: length,
            exhaustive,
            fixed_point_mean: fixed_mean,
            fixed_point_variance: fixed_var,
            fixed_point_stderr: fixed_se,
            cycle_count_mean: cycle_mean,
            cycle_count_stderr: cycle_se,
            reference_fixed_point_mean: 1.0,
            reference_cycle_count_mean: harmonic(n),
        }),
    })
}

// ---------------------------------------------------------------------------
// Tuple routing
// ---------------------------------------------------------------------------

/// Greedy tuple router over the union of the axis abelian groups.
///
/// Tuple positions are routed right to left; a routed point is never moved
/// again. Each fix rotates the fiber of the current point along the first
/// mismatched axis to the target coordinate, unless that fiber holds an
/// already-routed point — then a depth-1 detour first moves the point along
/// another axis into a fiber free of routed points (preferring the target
/// coordinate as the detour value). The move sequence depends only on the
/// pair, never on the budget, so success at budget t implies success at
/// every larger budget.
struct Router<'a> {
    cube: &'a CubeIndex,
    d: usize,
    k: usize,
    /// position[v] of each point value in the fiber cycle.
    cycle_pos: Vec<usize>,
    /// i-th point of the fiber cycle, starting from 0.
    cycle_order: Vec<u64>,
}

impl<'a> Router<'a> {
    fn new(cube: &'a CubeIndex, local: &LocalAction) -> Result<Router<'a>> {
        if local.k_points() as u64 != cube.k_side() {
            return Err(LabError::Invalid(format!(
                "local action on {} points does not match cube side {}",
                local.k_points(),
                cube.k_side()
            )));
        }
        let sigma = local.cycle_permutation()?;
        let k = cube.k_side() as usize;
        let mut cycle_order = Vec::with_capacity(k);
        let mut cycle_pos = vec![0usize; k];
        let mut cur = 0usize;
        for i in 0..k {
            cycle_order.push(cur as u64);
            cycle_pos[cur] = i;
            cur = sigma.apply(cur);
        }
        if cur != 0 || cycle_order.iter().collect::<std::collections::HashSet<_>>().len() != k {
            return Err(LabError::Certification(
                "the fiber element is not a single full cycle".into(),
            ));
        }
        Ok(Router { cube, d: cube.d(), k, cycle_pos, cycle_order })
    }

    /// Exponent rotating coordinate value `from` to `to`.
    fn exponent(&self, from: u64, to: u64) -> u64 {
        let a = self.cycle_pos[from as usize];
        let b = self.cycle_pos[to as usize];
        ((b + self.k - a) % self.k) as u64
    }

    /// Fiber index of a point along `axis`: its non-axis coordinates read
    /// little-endian, matching the abelian-element exponent layout.
    fn fiber(&self, coords: &[u64], axis: usize) -> usize {
        let mut c = 0usize;
        let mut mult = 1usize;
        for (j, &x) in coords.iter().enumerate() {
            if j == axis {
                continue;
            }
            c += x as usize * mult;
            mult *= self.k;
        }
        c
    }

    fn same_fiber(a: &[u64], b: &[u64], axis: usize) -> bool {
        a.iter().zip(b).enumerate().all(|(j, (x, y))| j == axis || x == y)
    }

    /// Applies a fiber rotation to every tracked point lying in the fiber.
    fn apply(&self, state: &mut [Vec<u64>], mv: AxisMove, anchor: &[u64]) {
        for point in state.iter_mut() {
            if Self::same_fiber(point, anchor, mv.axis) {
                let pos = self.cycle_pos[point[mv.axis] as usize];
                point[mv.axis] = self.cycle_order[(pos + mv.exponent as usize) % self.k];
            }
        }
    }

    /// Routes position j of `state` to `target`, never disturbing positions
    /// above j. Returns the moves used, or None when the greedy policy gets
    /// stuck.
    fn route_point(
        &self,
        state: &mut [Vec<u64>],
        target: &[Vec<u64>],
        j: usize,
        moves: &mut Vec<AxisMove>,
    ) -> bool {
        let mut rounds = 0;
        while state[j] != target[j] {
            rounds += 1;
            if rounds > max_rounds_per_point(self.d) {
                return false;
            }
            let axis = (0..self.d)
                .find(|&a| state[j][a] != target[j][a])
                .expect("tuples differ");
            let blocked = |coords: &[u64], a: usize| {
                state[j + 1..].iter().any(|p| Self::same_fiber(p, coords, a))
            };
            if !blocked(&state[j], axis) {
                let mv = AxisMove {
                    axis,
                    fiber: self.fiber(&state[j], axis),
                    exponent: self.exponent(state[j][axis], target[j][axis]),
                };
                let anchor = state[j].clone();
                self.apply(state, mv, &anchor);
                moves.push(mv);
                continue;
            }
            // Depth-1 detour: step along another axis into a clear fiber,
            // then make the blocked move.
            let mut made_detour = false;
            'detour: for b in 0..self.d {
                if b == axis || blocked(&state[j], b) {
                    continue;
                }
                let cur_b = state[j][b];
                let preferred = target[j][b];
                let candidates =
                    std::iter::once(preferred).chain((0..self.k as u64).filter(|&v| v != preferred));
                for v in candidates {
                    if v == cur_b {
                        continue;
                    }
                    let mut hypothetical = state[j].clone();
                    hypothetical[b] = v;
                    if blocked(&hypothetical, axis) {
                        continue;
                    }
                    let side = AxisMove {
                        axis: b,
                        fiber: self.fiber(&state[j], b),
                        exponent: self.exponent(cur_b, v),
                    };
                    let anchor = state[j].clone();
                    self.apply(state, side, &anchor);
                    moves.push(side);
                    let mv = AxisMove {
                        axis,
                        fiber: self.fiber(&state[j], axis),
                        exponent: self.exponent(state[j][axis], target[j][axis]),
                    };
                    let anchor = state[j].clone();
                    self.apply(state, mv, &anchor);
                    moves.push(mv);
                    made_detour = true;
                    break 'detour;
                }
            }
            if !made_detour {
                return false;
            }
        }
        true
    }

    fn route(&self, source: &[usize], target: &[usize]) -> Result<Option<Vec<AxisMove>>> {
        let mut state = Vec::with_capacity(source.len());
        let mut goal = Vec::with_capacity(target.len());
        for (&s, &t) in source.iter().zip(target) {
            state.push(self.cube.tuple(s)?);
            goal.push(self.cube.tuple(t)?);
        }
        let mut moves = Vec::new();
        for j in (0..state.len()).rev() {
            if !self.route_point(&mut state, &goal, j, &mut moves) {
                return Ok(None);
            }
        }
        Ok(Some(moves))
    }
}

/// Routes one ordered tuple of distinct points to another using single-fiber
/// abelian moves, or reports that the greedy router cannot. The returned
/// moves replay faithfully through the corresponding abelian elements.
pub fn route_tuples(
    cube: &CubeIndex,
    local: &LocalAction,
    source: &[usize],
    target: &[usize],
) -> Result<Option<Vec<AxisMove>>> {
    if source.len() != target.len() {
        return Err(LabError::Invalid("source and target tuple sizes differ".into()));
    }
    validate_tuple(cube, source)?;
    validate_tuple(cube, target)?;
    Router::new(cube, local)?.route(source, target)
}

fn validate_tuple(cube: &CubeIndex, tuple: &[usize]) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for &p in tuple {
        if p >= cube.n() {
            return Err(LabError::Invalid(format!("point {p} outside the cube of {}", cube.n())));
        }
        if !seen.insert(p) {
            return Err(LabError::Invalid("tuple points must be distinct".into()));
        }
    }
    Ok(())
}

/// Number of ordered r-tuples of distinct points, if it fits.
fn tuple_count(n: usize, r: usize) -> Option<u128> {
    let mut total: u128 = 1;
    for i in 0..r {
        total = total.checked_mul((n - i) as u128)?;
    }
    Some(total)
}

/// Measures how often the greedy router connects ordered r-tuples within a
/// move budget of t abelian moves.
///
/// When the square of the tuple count fits the pair budget, every ordered
/// pair of tuples is examined; otherwise `pairs` source/target pairs are
/// drawn uniformly, one rng sub-stream per pair. The report carries the
/// curve of success fractions at every budget 0..=t.
pub fn transitivity_probe(
    cube: &CubeIndex,
    local: &LocalAction,
    r: usize,
    t: usize,
    pairs: usize,
    seed: u64,
) -> Result<TransitivityProbe> {
    if r == 0 || r > cube.n() {
        return Err(LabError::Invalid(format!(
            "tuple size {r} must be between 1 and the point count {}",
            cube.n()
        )));
    }
    if t == 0 || pairs == 0 {
        return Err(LabError::Invalid("the move budget and pair count must be positive".into()));
    }
    let router = Router::new(cube, local)?;
    let n = cube.n();

    let exhaustive = tuple_count(n, r)
        .and_then(|c| c.checked_mul(c))
        .is_some_and(|total| total <= pairs as u128);

    // Moves needed for each pair; None when the router failed outright.
    let costs: Vec<Option<usize>> = if exhaustive {
        let tuples = enumerate_tuples(n, r);
        let flat: Vec<(usize, usize)> = (0..tuples.len())
            .flat_map(|a| (0..tuples.len()).map(move |b| (a, b)))
            .collect();
        flat.par_iter()
            .map(|&(a, b)| {
                router
                    .route(&tuples[a], &tuples[b])
                    .expect("enumerated tuples are valid")
                    .map(|moves| moves.len())
            })
            .collect()
    } else {
        (0..pairs)
            .into_par_iter()
            .map(|p| {
                let mut rng = chacha(seed, stream::PROBE_PAIR + p as u64);
                let source = sample_tuple(n, r, &mut rng);
                let target = sample_tuple(n, r, &mut rng);
                router
                    .route(&source, &target)
                    .expect("sampled tuples are valid")
                    .map(|moves| moves.len())
            })
            .collect()
    };

    let total = costs.len();
    let mut kappa_curve = Vec::with_capacity(t + 1);
    for budget in 0..=t {
        let ok = costs.iter().filter(|c| c.is_some_and(|m| m <= budget)).count();
        kappa_curve.push(ok as f64 / total as f64);
    }
    let successes = costs.iter().filter(|c| c.is_some_and(|m| m <= t)).count();

    Ok(TransitivityProbe {
        schema_version: SCHEMA_VERSION,
        r,
        t,
        pairs: total,
        exhaustive,
        seed,
        successes,
        kappa: successes as f64 / total as f64,
        kappa_curve,
    })
}

fn enumerate_tuples(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for p in 0..n {
            if !cur.contains(&p) {
                cur.push(p);
                rec(n, r, cur, out);
                cur.pop();
            }
        }
    }
    rec(n, r, &mut cur, &mut out);
    out
}

/// Uniform ordered r-tuple of distinct points via a partial shuffle.
fn sample_tuple(n: usize, r: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..r {
        let j = rng.gen_range(i..n);
        pool.swap(i, j);
    }
    pool.truncate(r);
    pool
}

/// Applies a routing move as the corresponding abelian group element.
pub fn move_to_permutation(
    cube: &CubeIndex,
    local: &LocalAction,
    mv: AxisMove,
) -> Result<Permutation> {
    let fibers = cube.n() / cube.k_side() as usize;
    let mut exponents = vec![0u64; fibers];
    let slot = exponents
        .get_mut(mv.fiber)
        .ok_or_else(|| LabError::Invalid(format!("fiber {} out of range", mv.fiber)))?;
    *slot = mv.exponent;
    abelian_axis_element(cube, local, mv.axis, &exponents)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{EnumKind, GenStyle};
    use crate::construction::{
        build_cube_family, power_generating_set, FamilyKind, FamilyLabel,
    };

    fn shift_family(n: usize) -> GeneratingFamily {
        let images: Vec<u32> = (0..n as u32).map(|x| (x + 1) % n as u32).collect();
        let shift = Permutation::from_images(images).unwrap();
        GeneratingFamily::new(
            FamilyKind::SymPadded,
            n,
            vec![shift],
            vec![FamilyLabel { axis: None, source: "shift".into(), window: None }],
            None,
        )
        .unwrap()
    }

    fn whole_sym3_family() -> GeneratingFamily {
        let mut elements = Vec::new();
        let mut labels = Vec::new();
        for (i, images) in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
            .iter()
            .enumerate()
        {
            elements.push(Permutation::from_images(images.iter().map(|&x| x as u32).collect()).unwrap());
            labels.push(FamilyLabel { axis: None, source: format!("g{i}"), window: None });
        }
        GeneratingFamily::new(FamilyKind::SymPadded, 3, elements, labels, None).unwrap()
    }

    fn seven_cube() -> (CubeIndex, LocalAction, GeneratingFamily) {
        let local =
            LocalAction::new(2, 1, 3, GenStyle::Involution, EnumKind::ProjectivePlane).unwrap();
        let cube = CubeIndex::new(7, 2, 100_000).unwrap();
        let power = power_generating_set(&local, 7, 1).unwrap();
        let family = build_cube_family(&cube, &local, &power).unwrap();
        (cube, local, family)
    }

    #[test]
    fn zero_length_words_are_the_identity() {
        let family = shift_family(8);
        assert!(random_word(&family, 0, 3).unwrap().is_identity());
    }

    #[test]
    fn single_picks_come_from_the_inverse_closure() {
        let family = shift_family(8);
        let closed = closed_elements(&family).unwrap();
        assert_eq!(closed.len(), 2, "shift plus its inverse");
        for seed in 0..20 {
            let w = random_word(&family, 1, seed).unwrap();
            assert!(closed.contains(&w));
        }
    }

    #[test]
    fn words_are_deterministic_per_seed() {
        let (_, _, family) = seven_cube();
        let a = random_word(&family, 50, 11).unwrap();
        let b = random_word(&family, 50, 11).unwrap();
        let c = random_word(&family, 50, 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn splitting_a_word_composes_left_to_right() {
        let (_, _, family) = seven_cube();
        for (l1, l2) in [(0, 5), (3, 4), (7, 0), (13, 9)] {
            let whole = random_word(&family, l1 + l2, 21).unwrap();
            let mut rng = chacha(21, stream::WALK_WORD);
            let a = random_word_continuing(&family, l1, &mut rng).unwrap();
            let b = random_word_continuing(&family, l2, &mut rng).unwrap();
            assert_eq!(whole, a.compose(&b).unwrap());
        }
    }

    #[test]
    fn delta_start_total_variation_is_one_minus_reciprocal() {
        let report = point_mixing_exact(&shift_family(8), 0).unwrap();
        let curve = report.curve.unwrap();
        assert!((curve[0].tv - (1.0 - 1.0 / 8.0)).abs() < 1e-15);
    }

    #[test]
    fn cycle_walk_matches_the_fourier_closed_form() {
        // Independent oracle: on the 8-cycle with the shift pair, the step-t
        // distribution from a delta start is the discrete Fourier expansion
        // π_t(u) = (1/8) Σ_k cos(πk/4)^t cos(πku/4).
        let report = point_mixing_exact(&shift_family(8), 40).unwrap();
        let curve = report.curve.unwrap();
        for step in &curve {
            let mut tv = 0.0;
            for u in 0..8 {
                let mut p = 0.0;
                for k in 0..8 {
                    let angle = std::f64::consts::PI * k as f64 / 4.0;
                    p += angle.cos().powi(step.t as i32)
                        * (std::f64::consts::PI * (k * u) as f64 / 4.0).cos();
                }
                tv += (p / 8.0 - 1.0 / 8.0).abs();
            }
            tv *= 0.5;
            assert!(
                (tv - step.tv).abs() < 1e-10,
                "step {}: closed form {tv} vs iterated {}",
                step.t,
                step.tv
            );
        }
        // The parity obstruction keeps this walk from mixing.
        assert_eq!(report.first_tv_below_hundredth, None);
        assert!((report.lambda_hat.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constructed_family_mixes_at_the_spectral_rate() {
        let (_, _, family) = seven_cube();
        let report = point_mixing_exact(&family, 150).unwrap();
        let lambda_hat = report.lambda_hat.unwrap();
        assert!(lambda_hat < 1.0);
        // The signed second eigenvalue drives the decay; here it is also the
        // largest modulus.
        let first = report.first_tv_below_hundredth.expect("mixes within horizon") as f64;
        let n = report.vertices as f64;
        let predicted = (100.0 * n.sqrt()).ln() / (-lambda_hat.ln());
        assert!(
            first <= 2.0 * predicted && first >= predicted / 2.0,
            "first step below 1/100 was {first}, spectral prediction {predicted}"
        );
    }

    #[test]
    fn whole_group_average_fixed_points_is_exactly_one() {
        let report = cycle_statistics(&whole_sym3_family(), 1, 10, 0).unwrap();
        let stats = report.stats.unwrap();
        assert!(stats.exhaustive);
        assert_eq!(stats.samples, 6);
        assert_eq!(stats.fixed_point_mean, 1.0);
    }

    #[test]
    fn empty_words_fix_every_point() {
        let (_, _, family) = seven_cube();
        let report = cycle_statistics(&family, 0, 5, 0).unwrap();
        let stats = report.stats.unwrap();
        assert!(stats.exhaustive);
        assert_eq!(stats.samples, 1);
        assert_eq!(stats.fixed_point_mean, 49.0);
        assert_eq!(stats.cycle_count_mean, 49.0);
    }

    #[test]
    fn long_words_have_near_uniform_cycle_statistics() {
        let (_, _, family) = seven_cube();
        let report = cycle_statistics(&family, 300, 400, 7).unwrap();
        let stats = report.stats.unwrap();
        assert!(!stats.exhaustive);
        assert_eq!(stats.samples, 400);
        assert!(
            (stats.fixed_point_mean - 1.0).abs() < 0.4,
            "fixed-point mean {}",
            stats.fixed_point_mean
        );
        let expected_h = harmonic(49);
        assert!((stats.reference_cycle_count_mean - expected_h).abs() < 1e-12);
        assert!((stats.cycle_count_mean - expected_h).abs() < 1.0);
        // Reruns are bit-identical.
        let again = cycle_statistics(&family, 300, 400, 7).unwrap();
        assert_eq!(again.stats.unwrap().fixed_point_mean, stats.fixed_point_mean);
    }

    #[test]
    fn single_points_route_within_two_moves() {
        let (cube, local, _) = seven_cube();
        let probe = transitivity_probe(&cube, &local, 1, 2, 49 * 49, 0).unwrap();
        assert!(probe.exhaustive);
        assert_eq!(probe.pairs, 49 * 49);
        assert_eq!(probe.kappa, 1.0);
        // Budget 0 succeeds exactly on the diagonal pairs.
        assert!((probe.kappa_curve[0] - 49.0 / (49.0 * 49.0)).abs() < 1e-15);
    }

    #[test]
    fn success_fraction_is_monotone_in_the_budget() {
        let (cube, local, _) = seven_cube();
        let probe = transitivity_probe(&cube, &local, 2, 12, 500, 3).unwrap();
        assert!(!probe.exhaustive);
        for w in probe.kappa_curve.windows(2) {
            assert!(w[0] <= w[1]);
        }
        assert_eq!(probe.kappa, *probe.kappa_curve.last().unwrap());
        let again = transitivity_probe(&cube, &local, 2, 12, 500, 3).unwrap();
        assert_eq!(again.kappa_curve, probe.kappa_curve);
        // Two axis moves per coordinate is generous at this scale.
        assert!(probe.kappa > 0.8, "kappa {}", probe.kappa);
    }

    #[test]
    fn recorded_moves_replay_as_abelian_elements() {
        let (cube, local, _) = seven_cube();
        for seed in 0..6 {
            let mut rng = chacha(seed, stream::PROBE_PAIR);
            let source = sample_tuple(49, 3, &mut rng);
            let target = sample_tuple(49, 3, &mut rng);
            let Some(moves) = route_tuples(&cube, &local, &source, &target).unwrap() else {
                continue;
            };
            let mut tuple = source.clone();
            for mv in moves {
                let perm = move_to_permutation(&cube, &local, mv).unwrap();
                tuple = perm.act_on_tuple(&tuple).unwrap();
            }
            assert_eq!(tuple, target);
        }
    }

    #[test]
    fn identical_tuples_need_no_moves() {
        let (cube, local, _) = seven_cube();
        let moves = route_tuples(&cube, &local, &[5, 17, 40], &[5, 17, 40]).unwrap();
        assert_eq!(moves.unwrap().len(), 0);
    }

    #[test]
    fn reports_round_trip_and_export() {
        let report = point_mixing_exact(&shift_family(8), 5).unwrap();
        let back = MixingReport::from_json(&report.to_json().unwrap()).unwrap();
        assert_eq!(back.curve.as_ref().unwrap().len(), 6);
        let csv = report.tv_curve_csv().unwrap();
        assert_eq!(csv.lines().count(), 7);
        assert!(csv.starts_with("t,tv,prediction"));

        let (cube, local, _) = seven_cube();
        let probe = transitivity_probe(&cube, &local, 1, 2, 10, 0).unwrap();
        let back = TransitivityProbe::from_json(&probe.to_json().unwrap()).unwrap();
        assert_eq!(back.kappa, probe.kappa);
    }

    #[test]
    fn invalid_walk_parameters_are_rejected() {
        let (cube, local, family) = seven_cube();
        assert!(cycle_statistics(&family, 1, 0, 0).is_err());
        assert!(transitivity_probe(&cube, &local, 0, 2, 10, 0).is_err());
        assert!(transitivity_probe(&cube, &local, 1, 0, 10, 0).is_err());
        assert!(route_tuples(&cube, &local, &[1, 1], &[2, 3]).is_err());
        assert!(route_tuples(&cube, &local, &[1], &[2, 3]).is_err());
        let bad = WalkConfig { family: "f".into(), length: 5, seed: 0, samples: 0 };
        assert!(bad.validate().is_err());
    }
}
