//! Base and strong generating sets via deterministic Schreier–Sims.
//!
//! The chain is built by the classical textbook procedure: keep one level
//! per base point, each with the full orbit of its base point and an
//! explicit transversal, and drain a queue of Schreier generators per level,
//! sifting each one through the deeper levels. Whenever a sift leaves a
//! nontrivial residue, the residue joins the strong generators of every
//! level it is known to stabilize, down to the level where it got stuck.
//! When all queues are empty, Schreier's lemma guarantees each level's
//! orbit is the full orbit under the stabilizer of the previous base
//! points, so the group order is exactly the product of orbit sizes.
//!
//! When a target order is supplied, a seeded random-sift phase runs first:
//! pseudo-random products of the generators are sifted and each residue is
//! added at the level where it sticks. The orbit-size product of any such
//! chain never exceeds the group order (transversal products are pairwise
//! distinct group elements), so reaching the target certifies the chain is
//! complete without draining a single Schreier queue — usually far cheaper
//! on long chains. When the target is not reached the chain is rebuilt by
//! the full deterministic procedure, so the computed order is exact either
//! way, and it never depends on the seed: the seed only shuffles insertion
//! order and drives the random phase, whose outcome is checked, not
//! trusted.

use std::collections::VecDeque;

use num::bigint::BigUint;
use num::One;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{LabError, Result};
use crate::perm::{compose_into, invert_into, Permutation};
use crate::rng::{chacha, stream};

pub struct Bsgs {
    degree: usize,
    generators: Vec<Permutation>,
    levels: Vec<Level>,
    order: BigUint,
    early_stopped: bool,
}

struct Level {
    point: usize,
    gens: Vec<Permutation>,
    /// Orbit of `point` under `gens`, in discovery order; `orbit[0] == point`.
    orbit: Vec<usize>,
    /// `transversal[p]`, for `p` in the orbit, maps `point` to `p`.
    transversal: Vec<Option<Permutation>>,
}

/// Mutable chain state while the queues drain.
struct Builder {
    degree: usize,
    levels: Vec<BuildLevel>,
    scratch_a: Vec<u32>,
    scratch_b: Vec<u32>,
    /// Running sum of log2(orbit length) over all levels; cheap trigger for
    /// the exact target comparison.
    log2_product: f64,
    target: Option<TargetOrder>,
    target_hit: bool,
}

struct TargetOrder {
    order: BigUint,
    log2: f64,
    /// Set once the product provably exceeds the target; the early-stop
    /// check is then abandoned and the build runs to full verification.
    overshot: bool,
}

fn log2_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 52 {
        let v: u64 = n.try_into().ok().map(|v: u64| v).unwrap_or(1);
        return (v as f64).log2();
    }
    // Top 52 bits as mantissa, rest as exponent.
    let shifted: BigUint = n >> (bits - 52);
    let mant: u64 = (&shifted).try_into().unwrap_or(1u64);
    (mant as f64).log2() + (bits - 52) as f64
}

struct BuildLevel {
    point: usize,
    gens: Vec<Permutation>,
    orbit: Vec<usize>,
    transversal: Vec<Option<Permutation>>,
    /// Inverses of the transversal entries, kept so sifting is a single
    /// composition per level instead of invert-then-compose.
    transversal_inv: Vec<Option<Permutation>>,
    /// Outstanding Schreier-generator checks, as (orbit position, gen index).
    queue: VecDeque<(usize, usize)>,
}

impl BuildLevel {
    fn new(degree: usize, point: usize) -> Self {
        let mut transversal = vec![None; degree];
        transversal[point] = Some(Permutation::identity(degree));
        let mut transversal_inv = vec![None; degree];
        transversal_inv[point] = Some(Permutation::identity(degree));
        BuildLevel {
            point,
            gens: Vec::new(),
            orbit: vec![point],
            transversal,
            transversal_inv,
            queue: VecDeque::new(),
        }
    }
}

impl Builder {
    fn new(degree: usize, target: Option<BigUint>) -> Self {
        Builder {
            degree,
            levels: Vec::new(),
            scratch_a: vec![0; degree],
            scratch_b: vec![0; degree],
            log2_product: 0.0,
            target: target.map(|order| TargetOrder {
                log2: log2_biguint(&order),
                order,
                overshot: false,
            }),
            target_hit: false,
        }
    }

    fn exact_product(&self) -> BigUint {
        let mut order = BigUint::one();
        for lev in &self.levels {
            order *= BigUint::from(lev.orbit.len());
        }
        order
    }

    /// Transversal products are pairwise distinct group elements, so the
    /// orbit-size product never exceeds the group order. If it reaches the
    /// target exactly, every orbit must already be the full orbit of the
    /// corresponding stabilizer, i.e. the chain is complete; the remaining
    /// Schreier checks can be skipped.
    fn maybe_hit_target(&mut self) {
        let Some(t) = &mut self.target else { return };
        if self.target_hit || t.overshot || self.log2_product < t.log2 - 1e-9 {
            return;
        }
        let product = {
            let mut order = BigUint::one();
            for lev in &self.levels {
                order *= BigUint::from(lev.orbit.len());
            }
            order
        };
        match product.cmp(&t.order) {
            std::cmp::Ordering::Equal => self.target_hit = true,
            std::cmp::Ordering::Greater => t.overshot = true,
            std::cmp::Ordering::Less => {}
        }
    }

    /// Sifts `g` through levels `from..`, returning the residue and the
    /// level where it stuck (`levels.len()` if it passed every level while
    /// remaining nontrivial), or `None` if it reduced to the identity.
    fn sift_from(&mut self, from: usize, g: &Permutation) -> Option<(Permutation, usize)> {
        let mut cur: Vec<u32> = g.images().to_vec();
        if is_identity_images(&cur) {
            return None;
        }
        for k in from..self.levels.len() {
            let lev = &self.levels[k];
            let delta = cur[lev.point] as usize;
            match &lev.transversal_inv[delta] {
                None => return Some((Permutation::from_images_unchecked(cur), k)),
                Some(u_inv) => {
                    compose_into(&cur, u_inv.images(), &mut self.scratch_b);
                    std::mem::swap(&mut cur, &mut self.scratch_b);
                    if is_identity_images(&cur) {
                        return None;
                    }
                }
            }
        }
        let len = self.levels.len();
        Some((Permutation::from_images_unchecked(cur), len))
    }

    /// Registers a residue discovered at level `lo - 1` (or an input
    /// generator, `lo == 0`) that got stuck at level `j`: it fixes the base
    /// points of levels `lo..j`, so it belongs to the strong generators of
    /// every level in `lo..=j`.
    fn add_residue_range(&mut self, lo: usize, j: usize, h: Permutation) {
        for k in (lo..=j).rev() {
            if self.target_hit {
                return;
            }
            self.add_gen_at_level(k, h.clone());
        }
    }

    /// Inserts `h` (known to fix the base points of levels `0..k`) as a
    /// strong generator at level `k`, creating the level if needed, then
    /// re-closes the orbit and enqueues the new Schreier checks.
    fn add_gen_at_level(&mut self, k: usize, h: Permutation) {
        debug_assert!(k <= self.levels.len());
        if k == self.levels.len() {
            let point = h.min_moved_point().expect("nontrivial residue");
            self.levels.push(BuildLevel::new(self.degree, point));
        }
        let lev = &mut self.levels[k];
        if lev.gens.contains(&h) {
            return;
        }
        lev.gens.push(h);
        let gi = lev.gens.len() - 1;
        for pos in 0..lev.orbit.len() {
            lev.queue.push_back((pos, gi));
        }
        self.close_orbit(k, gi);
    }

    /// Extends the orbit/transversal of level `k` after generator `gi_new`
    /// was appended. Pre-existing points only need the new generator (they
    /// were closed under the others); discovered points get the full set,
    /// and Schreier checks against every generator.
    fn close_orbit(&mut self, k: usize, gi_new: usize) {
        let lev = &mut self.levels[k];
        let before = lev.orbit.len();
        let mut pos = 0;
        while pos < lev.orbit.len() {
            let p = lev.orbit[pos];
            let gen_range = if pos < before { gi_new..gi_new + 1 } else { 0..lev.gens.len() };
            for gi in gen_range {
                let t = lev.gens[gi].apply(p);
                if lev.transversal[t].is_none() {
                    let rep = lev.transversal[p]
                        .as_ref()
                        .expect("orbit point has transversal")
                        .compose(&lev.gens[gi])
                        .expect("same degree");
                    lev.transversal_inv[t] = Some(rep.inverse());
                    lev.transversal[t] = Some(rep);
                    lev.orbit.push(t);
                    let newpos = lev.orbit.len() - 1;
                    for gi2 in 0..lev.gens.len() {
                        lev.queue.push_back((newpos, gi2));
                    }
                }
            }
            pos += 1;
        }
        let after = lev.orbit.len();
        if after != before {
            self.log2_product += (after as f64).log2() - (before as f64).log2();
            self.maybe_hit_target();
        }
    }

    /// Drains Schreier queues shallowest-first until every level is verified
    /// (or the target order is reached, which certifies completeness).
    ///
    /// Processing level `l` only ever creates work at levels deeper than
    /// `l`, so a monotone cursor visits every check exactly once. Shallow
    /// checks run while the deeper chain is still sparse: their sifts stop
    /// early and yield productive residues, instead of walking a fully
    /// verified chain to the identity.
    fn run(&mut self) {
        let mut l = 0;
        while l < self.levels.len() {
            if self.target_hit {
                break;
            }
            let Some((pos, gi)) = self.levels[l].queue.pop_front() else {
                l += 1;
                continue;
            };
            let lev = &self.levels[l];
            let p = lev.orbit[pos];
            let s = &lev.gens[gi];
            let t = s.apply(p);
            let u_p = lev.transversal[p].as_ref().expect("orbit point");
            // z = u_p followed by s; the Schreier generator is z * u_t^{-1}.
            compose_into(u_p.images(), s.images(), &mut self.scratch_a);
            let u_t = lev.transversal[t].as_ref().expect("orbit closed");
            if self.scratch_a == *u_t.images() {
                continue; // Schreier generator is trivially the identity
            }
            let u_t_inv = lev.transversal_inv[t].as_ref().expect("orbit closed");
            let mut schreier = vec![0u32; self.degree];
            compose_into(&self.scratch_a, u_t_inv.images(), &mut schreier);
            let schreier = Permutation::from_images_unchecked(schreier);
            if let Some((residue, j)) = self.sift_from(l + 1, &schreier) {
                self.add_residue_range(l + 1, j, residue);
            }
        }
    }

    /// Sifts seeded pseudo-random products of `gens` (product replacement
    /// with a running accumulator), adding each residue at the level where
    /// it sticks, until the orbit-size product reaches the target order or
    /// the phase stalls. Every added generator fixes the base points of the
    /// levels above it, so the product stays a lower bound witness for the
    /// group order; hitting the target exactly certifies completeness.
    /// Returns whether the target was certified.
    fn random_sift_phase(&mut self, gens: &[&Permutation], rng: &mut impl Rng) -> bool {
        const POOL: usize = 12;
        if gens.is_empty() || self.target.is_none() {
            return self.target_hit;
        }
        let mut pool: Vec<Permutation> = Vec::with_capacity(POOL);
        while pool.len() < POOL {
            pool.push(gens[pool.len() % gens.len()].clone());
        }
        let mut acc = pool[0].clone();
        let mut scratch = vec![0u32; self.degree];
        // A missing strong generator is found with probability ≥ 1/2 per
        // random element, so a long run without orbit growth means the
        // product has converged to the true order (which is then below the
        // target) and the deterministic fallback should take over.
        let stall_cap = 256 + 2 * self.degree;
        let mut stalled = 0;
        while !self.target_hit && stalled < stall_cap {
            let a = rng.gen_range(0..pool.len());
            let mut b = rng.gen_range(0..pool.len() - 1);
            if b >= a {
                b += 1;
            }
            compose_into(pool[a].images(), pool[b].images(), &mut scratch);
            pool[a] = Permutation::from_images_unchecked(scratch.clone());
            compose_into(acc.images(), pool[a].images(), &mut scratch);
            acc = Permutation::from_images_unchecked(scratch.clone());
            let before = self.log2_product;
            if let Some((residue, j)) = self.sift_from(0, &acc) {
                self.add_gen_at_level(j, residue);
            }
            if self.log2_product > before {
                stalled = 0;
            } else {
                stalled += 1;
            }
        }
        self.target_hit
    }
}

fn is_identity_images(images: &[u32]) -> bool {
    images.iter().enumerate().all(|(i, &img)| i as u32 == img)
}


pub fn factorial(n: usize) -> BigUint {
    let mut acc = BigUint::one();
    for k in 2..=n {
        acc *= BigUint::from(k);
    }
    acc
}

impl Bsgs {
    /// Builds a stabilizer chain for the group generated by `gens`.
    ///
    /// Deterministic for a fixed `(gens, seed)`; the order is independent
    /// of the seed entirely.
    pub fn build(gens: &[Permutation], seed: u64) -> Result<Bsgs> {
        Bsgs::build_with_target(gens, seed, None)
    }

    /// Like [`Bsgs::build`], but stops early once the orbit-size product
    /// equals `target` — see [`Builder::maybe_hit_target`] for why that is
    /// sound. If the generated group turns out larger or smaller than the
    /// target, the build silently runs to full verification instead; check
    /// [`Bsgs::order`] afterwards.
    pub fn build_with_target(
        gens: &[Permutation],
        seed: u64,
        target: Option<BigUint>,
    ) -> Result<Bsgs> {
        if gens.is_empty() {
            return Err(LabError::Invalid("empty generator list".into()));
        }
        let degree = gens[0].degree();
        for g in gens {
            if g.degree() != degree {
                return Err(LabError::Invalid(format!(
                    "mixed degrees in generator list: {} vs {degree}",
                    g.degree()
                )));
            }
        }
        let mut shuffled: Vec<&Permutation> = gens.iter().filter(|g| !g.is_identity()).collect();
        shuffled.shuffle(&mut chacha(seed, stream::BSGS_SHUFFLE));

        let mut builder = Builder::new(degree, target.clone());
        if target.is_some() {
            // Fast path: seed the chain with the generators themselves,
            // then sift random products towards the target.
            for g in &shuffled {
                if builder.target_hit {
                    break;
                }
                if let Some((residue, j)) = builder.sift_from(0, g) {
                    builder.add_gen_at_level(j, residue);
                }
            }
            builder.random_sift_phase(&shuffled, &mut chacha(seed, stream::BSGS_SIFT));
            if !builder.target_hit {
                // The target was not certified (wrong target or an unlucky
                // stall): rebuild with full deterministic verification.
                builder = Builder::new(degree, target);
            }
        }
        if !builder.target_hit {
            for g in &shuffled {
                if builder.target_hit {
                    break;
                }
                if let Some((residue, j)) = builder.sift_from(0, g) {
                    builder.add_residue_range(0, j, residue);
                    builder.run();
                }
            }
        }

        let order = builder.exact_product();
        let early_stopped = builder.target_hit;
        let levels = builder
            .levels
            .into_iter()
            .map(|l| Level {
                point: l.point,
                gens: l.gens,
                orbit: l.orbit,
                transversal: l.transversal,
            })
            .collect();
        Ok(Bsgs {
            degree,
            generators: gens.to_vec(),
            levels,
            order,
            early_stopped,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn strong_generator_count(&self) -> usize {
        self.levels.iter().map(|l| l.gens.len()).sum()
    }

    /// True if the build was cut short by an exact target-order match.
    pub fn early_stopped(&self) -> bool {
        self.early_stopped
    }

    pub fn strong_generators(&self) -> impl Iterator<Item = &Permutation> + '_ {
        self.levels.iter().flat_map(|l| l.gens.iter())
    }

    /// Membership test by sifting.
    pub fn contains(&self, g: &Permutation) -> Result<bool> {
        if g.degree() != self.degree {
            return Err(LabError::Invalid(format!(
                "degree mismatch in membership test: {} vs {}",
                g.degree(),
                self.degree
            )));
        }
        let mut cur: Vec<u32> = g.images().to_vec();
        let mut scratch_a = vec![0u32; self.degree];
        let mut scratch_b = vec![0u32; self.degree];
        for lev in &self.levels {
            let delta = cur[lev.point] as usize;
            match &lev.transversal[delta] {
                None => return Ok(false),
                Some(u) => {
                    invert_into(u.images(), &mut scratch_a);
                    compose_into(&cur, &scratch_a, &mut scratch_b);
                    std::mem::swap(&mut cur, &mut scratch_b);
                }
            }
        }
        Ok(is_identity_images(&cur))
    }

    /// Exactly uniform over the group: one independent transversal pick per
    /// level, multiplied deepest-first.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Permutation {
        let mut acc = Permutation::identity(self.degree);
        for lev in self.levels.iter().rev() {
            let delta = lev.orbit[rng.gen_range(0..lev.orbit.len())];
            let u = lev.transversal[delta].as_ref().expect("orbit point");
            acc = acc.compose(u).expect("same degree");
        }
        acc
    }

    /// Enumerates all elements (transversal products, deterministic order).
    /// Refused if the order exceeds `cap`.
    pub fn elements(&self, cap: usize) -> Result<Vec<Permutation>> {
        if self.order > BigUint::from(cap) {
            return Err(LabError::Budget(format!(
                "group order {} exceeds enumeration cap {cap}",
                self.order
            )));
        }
        let mut acc = vec![Permutation::identity(self.degree)];
        for lev in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(acc.len() * lev.orbit.len());
            for h in &acc {
                for &delta in &lev.orbit {
                    let u = lev.transversal[delta].as_ref().expect("orbit point");
                    next.push(h.compose(u).expect("same degree"));
                }
            }
            acc = next;
        }
        Ok(acc)
    }

    pub fn is_alternating(&self) -> bool {
        let half = factorial(self.degree) / BigUint::from(2u32);
        self.order == half
    }

    pub fn is_symmetric(&self) -> bool {
        self.order == factorial(self.degree)
    }

    /// JSON snapshot: degree, base, order, input generators (cycle form).
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "schema_version": crate::SCHEMA_VERSION,
            "degree": self.degree,
            "base": self.base(),
            "order": self.order.to_string(),
            "strong_generator_count": self.strong_generator_count(),
            "generators": self.generators.iter().map(|g| g.cycle_string()).collect::<Vec<_>>(),
        })
    }

    /// Rebuilds from a snapshot and cross-checks the recorded order.
    pub fn from_json(doc: &serde_json::Value) -> Result<Bsgs> {
        let degree = doc["degree"]
            .as_u64()
            .ok_or_else(|| LabError::Invalid("missing degree in chain snapshot".into()))?
            as usize;
        let gens_json = doc["generators"]
            .as_array()
            .ok_or_else(|| LabError::Invalid("missing generators in chain snapshot".into()))?;
        let mut gens = Vec::with_capacity(gens_json.len());
        for g in gens_json {
            let s = g
                .as_str()
                .ok_or_else(|| LabError::Invalid("non-string generator in snapshot".into()))?;
            gens.push(Permutation::parse_cycles(s, degree)?);
        }
        let rebuilt = Bsgs::build(&gens, 0)?;
        if let Some(order_str) = doc["order"].as_str() {
            let recorded: BigUint = order_str
                .parse()
                .map_err(|_| LabError::Invalid(format!("bad order string {order_str:?}")))?;
            if recorded != rebuilt.order {
                return Err(LabError::Certification(format!(
                    "snapshot records order {recorded} but generators produce {}",
                    rebuilt.order
                )));
            }
        }
        Ok(rebuilt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn cyc(degree: usize, cycles: &[&[usize]]) -> Permutation {
        let owned: Vec<Vec<usize>> = cycles.iter().map(|c| c.to_vec()).collect();
        Permutation::from_cycles(degree, &owned).unwrap()
    }

    /// Independent oracle: closure enumeration by breadth-first products.
    fn closure_order(gens: &[Permutation]) -> usize {
        let id = Permutation::identity(gens[0].degree());
        let mut seen: HashSet<Permutation> = HashSet::new();
        seen.insert(id.clone());
        let mut queue = vec![id];
        while let Some(g) = queue.pop() {
            for s in gens {
                let h = g.compose(s).unwrap();
                if seen.insert(h.clone()) {
                    queue.push(h);
                }
            }
        }
        seen.len()
    }

    #[test]
    fn single_three_cycle() {
        let b = Bsgs::build(&[cyc(3, &[&[0, 1, 2]])], 0).unwrap();
        assert_eq!(b.order(), &BigUint::from(3u32));
        assert!(b.is_alternating());
        assert!(!b.is_symmetric());
    }

    #[test]
    fn symmetric_group_six_matches_exhaustive_closure() {
        let gens = vec![cyc(6, &[&[0, 1]]), cyc(6, &[&[0, 1, 2, 3, 4, 5]])];
        let b = Bsgs::build(&gens, 0).unwrap();
        assert_eq!(b.order(), &BigUint::from(720u32));
        assert_eq!(closure_order(&gens), 720);
        assert!(b.is_symmetric());
    }

    #[test]
    fn alternating_four_membership() {
        let gens = vec![cyc(4, &[&[0, 1, 2]]), cyc(4, &[&[1, 2, 3]])];
        let b = Bsgs::build(&gens, 0).unwrap();
        assert_eq!(b.order(), &BigUint::from(12u32));
        assert_eq!(closure_order(&gens), 12);
        assert!(b.contains(&cyc(4, &[&[0, 1], &[2, 3]])).unwrap());
        // Odd permutations are excluded.
        assert!(!b.contains(&cyc(4, &[&[0, 1]])).unwrap());
        assert!(b.contains(&Permutation::identity(4)).unwrap());
    }

    #[test]
    fn strong_generators_sift_to_identity() {
        let gens = vec![cyc(5, &[&[0, 1, 2, 3, 4]]), cyc(5, &[&[0, 1, 2]])];
        let b = Bsgs::build(&gens, 3).unwrap();
        assert_eq!(b.order(), &BigUint::from(60u32));
        for g in b.strong_generators() {
            assert!(b.contains(g).unwrap());
        }
    }

    #[test]
    fn order_is_seed_independent() {
        let gens = vec![cyc(6, &[&[0, 1]]), cyc(6, &[&[0, 1, 2, 3, 4, 5]])];
        let orders: HashSet<BigUint> = (0..6u64)
            .map(|s| Bsgs::build(&gens, s).unwrap().order().clone())
            .collect();
        assert_eq!(orders.len(), 1);
    }

    #[test]
    fn trivial_group_from_identity_generators() {
        let b = Bsgs::build(&[Permutation::identity(5)], 0).unwrap();
        assert_eq!(b.order(), &BigUint::one());
        let mut rng = chacha(1, stream::RANDOM_ELEMENT);
        assert!(b.random_element(&mut rng).is_identity());
    }

    #[test]
    fn random_element_uniform_on_cyclic_three() {
        let b = Bsgs::build(&[cyc(3, &[&[0, 1, 2]])], 0).unwrap();
        let mut rng = chacha(42, stream::RANDOM_ELEMENT);
        let mut counts = std::collections::HashMap::new();
        let draws = 30_000;
        for _ in 0..draws {
            *counts.entry(b.random_element(&mut rng)).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 3);
        // Each cell is Binomial(30000, 1/3): sd ~ 81.6, so +-245 is 3 sigma.
        for &c in counts.values() {
            assert!((c as i64 - 10_000).abs() <= 245, "count {c} too far from uniform");
        }
    }

    #[test]
    fn random_element_covers_alternating_four() {
        let b = Bsgs::build(&[cyc(4, &[&[0, 1, 2]]), cyc(4, &[&[1, 2, 3]])], 0).unwrap();
        let mut rng = chacha(7, stream::RANDOM_ELEMENT);
        let mut seen = HashSet::new();
        for _ in 0..1000 {
            seen.insert(b.random_element(&mut rng));
        }
        assert_eq!(seen.len(), 12, "1000 draws should cover all of a 12-element group");
    }

    #[test]
    fn elements_enumeration_matches_order_and_is_deduplicated() {
        let b = Bsgs::build(&[cyc(4, &[&[0, 1, 2]]), cyc(4, &[&[1, 2, 3]])], 0).unwrap();
        let elems = b.elements(100).unwrap();
        assert_eq!(elems.len(), 12);
        let set: HashSet<_> = elems.iter().cloned().collect();
        assert_eq!(set.len(), 12);
        assert!(b.elements(5).is_err());
    }

    #[test]
    fn json_round_trip_validates_order() {
        let gens = vec![cyc(5, &[&[0, 1, 2, 3, 4]]), cyc(5, &[&[0, 1, 2]])];
        let b = Bsgs::build(&gens, 0).unwrap();
        let doc = b.to_json();
        let rebuilt = Bsgs::from_json(&doc).unwrap();
        assert_eq!(rebuilt.order(), b.order());
        // Tampered order is rejected.
        let mut bad = doc.clone();
        bad["order"] = serde_json::json!("61");
        assert!(Bsgs::from_json(&bad).is_err());
    }

    #[test]
    fn mixed_degree_generators_rejected() {
        let gens = vec![Permutation::identity(3), Permutation::identity(4)];
        assert!(Bsgs::build(&gens, 0).is_err());
    }

    #[test]
    fn target_order_early_stop_leaves_valid_chain() {
        let gens = vec![cyc(4, &[&[0, 1, 2]]), cyc(4, &[&[1, 2, 3]])];
        let b = Bsgs::build_with_target(&gens, 0, Some(BigUint::from(12u32))).unwrap();
        assert!(b.early_stopped());
        assert_eq!(b.order(), &BigUint::from(12u32));
        // The chain is provably complete, so membership and enumeration
        // still work exactly.
        assert!(!b.contains(&cyc(4, &[&[0, 1]])).unwrap());
        assert!(b.contains(&cyc(4, &[&[0, 1], &[2, 3]])).unwrap());
        let set: HashSet<_> = b.elements(100).unwrap().into_iter().collect();
        assert_eq!(set.len(), 12);
    }

    #[test]
    fn wrong_targets_fall_back_to_full_verification() {
        let gens = vec![cyc(4, &[&[0, 1, 2]]), cyc(4, &[&[1, 2, 3]])];
        // Too small: the product overshoots and the full build runs.
        let b = Bsgs::build_with_target(&gens, 0, Some(BigUint::from(6u32))).unwrap();
        assert!(!b.early_stopped());
        assert_eq!(b.order(), &BigUint::from(12u32));
        // Too large: never reached.
        let b = Bsgs::build_with_target(&gens, 0, Some(BigUint::from(24u32))).unwrap();
        assert!(!b.early_stopped());
        assert_eq!(b.order(), &BigUint::from(12u32));
    }

    #[test]
    fn alternating_certification_with_target_at_degree_49() {
        let n = 49;
        let c3 = cyc(n, &[&[0, 1, 2]]);
        let full: Vec<usize> = (0..n).collect();
        let cy = Permutation::from_cycles(n, &[full]).unwrap();
        let target = factorial(n) / BigUint::from(2u32);
        let b = Bsgs::build_with_target(&[c3, cy], 0, Some(target.clone())).unwrap();
        assert!(b.early_stopped());
        assert_eq!(b.order(), &target);
        assert!(b.is_alternating());
    }
}
