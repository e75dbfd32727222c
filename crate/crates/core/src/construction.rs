//! Generating-family construction.
//!
//! Builds the permutation families this crate analyzes: a `K^d` cube of
//! points acted on along axes by copies of a small matrix group, power-group
//! generating sets certified to generate the full direct product, unions of
//! commuting cycle-power elements, window-padded families on arbitrary
//! degrees, and the symmetric-group variant obtained by adjoining one odd
//! involution.

use std::collections::HashSet;

use num::{integer::gcd, BigUint, One};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    base_generating_set, k_cycle_element, perm_from_matrix, sl_order, EnumKind, FieldSpec,
    GenStyle, Matrix, PointEnumeration,
};
use crate::bsgs::{factorial, Bsgs};
use crate::error::{LabError, Result};
use crate::perm::Permutation;
use crate::rng::{chacha, stream};
use crate::SCHEMA_VERSION;

/// Largest family degree the builders will materialize.
pub const DEFAULT_MAX_CUBE_POINTS: usize = 100_000;
/// Degrees up to this get a full chain certificate inside the builders.
pub const CERTIFY_DEGREE_CAP: usize = 60;
/// Group sizes up to this may be enumerated for the pairwise-linkage check.
const LINKAGE_ENUM_CAP: usize = 500_000;
/// Product-of-copies chain certificates run up to this many copies.
const PRODUCT_CHAIN_COPY_CAP: usize = 20;
/// Seeds tried before giving up on a certifiable power generating set.
const POWER_SET_ATTEMPTS: u64 = 5;
/// Hard cap on the size of a power generating set.
pub const POWER_SET_MAX_ELEMENTS: usize = 40;
/// Minimum overlap between consecutive padding windows.
pub const WINDOW_MIN_OVERLAP: usize = 5;

// ---------------------------------------------------------------------------
// Cube indexing
// ---------------------------------------------------------------------------

/// Bijection between `{0 .. K^d − 1}` and d-tuples over a K-letter alphabet.
///
/// Coordinate 0 is the least significant digit: for K = 7, d = 2 the tuple
/// (3, 5) has index 5·7 + 3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeIndex {
    k_side: u64,
    d: usize,
    n: usize,
}

impl CubeIndex {
    pub fn new(k_side: u64, d: usize, max_points: usize) -> Result<CubeIndex> {
        if k_side < 2 {
            return Err(LabError::Invalid(format!("cube side {k_side} must be at least 2")));
        }
        if d < 1 {
            return Err(LabError::Invalid("cube dimension must be at least 1".into()));
        }
        let mut n: usize = 1;
        for _ in 0..d {
            n = n
                .checked_mul(k_side as usize)
                .filter(|&n| n <= max_points)
                .ok_or_else(|| {
                    LabError::Budget(format!(
                        "cube with {k_side}^{d} points exceeds the budget of {max_points}"
                    ))
                })?;
        }
        Ok(CubeIndex { k_side, d, n })
    }

    pub fn k_side(&self) -> u64 {
        self.k_side
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Total number of points, K^d.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn index(&self, tuple: &[u64]) -> Result<usize> {
        if tuple.len() != self.d {
            return Err(LabError::Invalid(format!(
                "tuple has {} coordinates, cube has {}",
                tuple.len(),
                self.d
            )));
        }
        let mut idx: usize = 0;
        for (i, &c) in tuple.iter().enumerate().rev() {
            if c >= self.k_side {
                return Err(LabError::Invalid(format!(
                    "coordinate {i} is {c}, out of range 0..{}",
                    self.k_side
                )));
            }
            idx = idx * self.k_side as usize + c as usize;
        }
        Ok(idx)
    }

    pub fn tuple(&self, mut idx: usize) -> Result<Vec<u64>> {
        if idx >= self.n {
            return Err(LabError::Invalid(format!("index {idx} out of range 0..{}", self.n)));
        }
        let mut out = Vec::with_capacity(self.d);
        for _ in 0..self.d {
            out.push((idx % self.k_side as usize) as u64);
            idx /= self.k_side as usize;
        }
        Ok(out)
    }
}

/// Number of axis fibers: K^{d−1}, checked against the point budget.
fn copy_count(k_side: u64, d: usize, max_points: usize) -> Result<usize> {
    let mut m: usize = 1;
    for _ in 0..d - 1 {
        m = m
            .checked_mul(k_side as usize)
            .filter(|&m| m <= max_points)
            .ok_or_else(|| LabError::Budget("fiber count exceeds the point budget".into()))?;
    }
    Ok(m)
}

/// The c-th (d−1)-tuple of non-axis coordinates, little-endian like `CubeIndex`.
fn copy_tuple(k_side: u64, d: usize, mut c: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(d - 1);
    for _ in 0..d - 1 {
        out.push((c % k_side as usize) as u64);
        c /= k_side as usize;
    }
    out
}

// ---------------------------------------------------------------------------
// Local action: the matrix group acting on one fiber
// ---------------------------------------------------------------------------

/// A certified matrix group together with the point enumeration through
/// which it permutes one fiber of the cube.
#[derive(Clone, Debug)]
pub struct LocalAction {
    field: FieldSpec,
    m_mat: usize,
    style: GenStyle,
    enumeration: PointEnumeration,
    generators: Vec<Matrix>,
    order: BigUint,
}

impl LocalAction {
    /// Builds SL_{m_mat} over GF(p^m) with a certified generating set and
    /// the chosen point enumeration. For the projective enumeration the
    /// recorded order is the order of the acting image (scalars act
    /// trivially there).
    pub fn new(p: u32, m: usize, m_mat: usize, style: GenStyle, kind: EnumKind) -> Result<LocalAction> {
        let field = FieldSpec::new(p, m)?;
        let generators = base_generating_set(&field, m_mat, style)?;
        let enumeration = match kind {
            EnumKind::NonzeroVectors => PointEnumeration::nonzero_vectors(&field, m_mat)?,
            EnumKind::ProjectivePlane => {
                if m_mat != 3 {
                    return Err(LabError::Invalid(
                        "the projective-plane action is defined for 3×3 matrices".into(),
                    ));
                }
                PointEnumeration::projective_plane(&field)?
            }
        };
        let mut order = sl_order(field.q(), m_mat);
        if kind == EnumKind::ProjectivePlane {
            // Scalar matrices λI with λ^3 = 1 act trivially on lines.
            let scalars = gcd(3, field.q() - 1);
            order /= BigUint::from(scalars);
        }
        Ok(LocalAction { field, m_mat, style, enumeration, generators, order })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn m_mat(&self) -> usize {
        self.m_mat
    }

    pub fn style(&self) -> GenStyle {
        self.style
    }

    pub fn enumeration(&self) -> &PointEnumeration {
        &self.enumeration
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    /// Order of the group as it acts on the enumeration.
    pub fn order(&self) -> &BigUint {
        &self.order
    }

    /// Number of points one copy acts on.
    pub fn k_points(&self) -> usize {
        self.enumeration.k()
    }

    pub fn kind(&self) -> EnumKind {
        self.enumeration.kind()
    }

    /// The single K-cycle on this action as a permutation.
    pub fn cycle_permutation(&self) -> Result<Permutation> {
        let ext = match self.kind() {
            EnumKind::NonzeroVectors => FieldSpec::new(self.field.p(), self.field.m() * self.m_mat)?,
            EnumKind::ProjectivePlane => FieldSpec::new(self.field.p(), 3)?,
        };
        let m = k_cycle_element(&ext, &self.enumeration)?;
        perm_from_matrix(&m, &self.enumeration)
    }

    fn perm(&self, m: &Matrix) -> Result<Permutation> {
        perm_from_matrix(m, &self.enumeration)
    }
}

// ---------------------------------------------------------------------------
// Axis embedding
// ---------------------------------------------------------------------------

/// Embeds a degree-K permutation into the cube along `axis`, acting on the
/// single fiber whose non-axis coordinates equal `copy` and fixing every
/// other point.
pub fn embed_axis(
    local: &Permutation,
    copy: &[u64],
    axis: usize,
    cube: &CubeIndex,
) -> Result<Permutation> {
    if axis >= cube.d() {
        return Err(LabError::Invalid(format!("axis {axis} out of range 0..{}", cube.d())));
    }
    if copy.len() != cube.d() - 1 {
        return Err(LabError::Invalid(format!(
            "copy tuple has {} coordinates, expected {}",
            copy.len(),
            cube.d() - 1
        )));
    }
    if local.degree() as u64 != cube.k_side() {
        return Err(LabError::Invalid(format!(
            "local degree {} does not match cube side {}",
            local.degree(),
            cube.k_side()
        )));
    }
    let mut images: Vec<u32> = (0..cube.n() as u32).collect();
    write_fiber_images(local, copy, axis, cube, &mut images)?;
    Permutation::from_images(images)
}

/// Applies `local` on the fiber (`copy`, `axis`) inside a global image table.
fn write_fiber_images(
    local: &Permutation,
    copy: &[u64],
    axis: usize,
    cube: &CubeIndex,
    images: &mut [u32],
) -> Result<()> {
    let mut coords = Vec::with_capacity(cube.d());
    coords.extend_from_slice(&copy[..axis]);
    coords.push(0);
    coords.extend_from_slice(&copy[axis..]);
    for z in 0..local.degree() {
        coords[axis] = z as u64;
        let src = cube.index(&coords)?;
        coords[axis] = local.apply(z) as u64;
        let dst = cube.index(&coords)?;
        coords[axis] = z as u64;
        images[src] = dst as u32;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Power generating set
// ---------------------------------------------------------------------------

/// A generating set of the direct product H^M, stored as M-tuples of
/// matrices: each base generator placed diagonally with per-copy
/// automorphism twists, plus two separator elements whose per-copy entries
/// are independently drawn words (these break the coordinate linkages a
/// plain twisted diagonal always has).
#[derive(Clone, Debug)]
pub struct PowerGenSet {
    m_copies: usize,
    elements: Vec<Vec<Matrix>>,
    labels: Vec<String>,
    certified_order: Option<BigUint>,
    seed_used: u64,
}

impl PowerGenSet {
    pub fn m_copies(&self) -> usize {
        self.m_copies
    }

    pub fn elements(&self) -> &[Vec<Matrix>] {
        &self.elements
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// |H|^M when `power_generating_set` proved it; `None` when only the
    /// coordinate projections were certified
    /// ([`power_generating_set_projections_only`]).
    pub fn certified_order(&self) -> Option<&BigUint> {
        self.certified_order.as_ref()
    }

    pub fn seed_used(&self) -> u64 {
        self.seed_used
    }
}

/// One copy's twist: h ↦ g · τ^e(h) · g⁻¹ with τ the inverse-transpose map.
struct Twist {
    g: Matrix,
    g_inv: Matrix,
    transpose_inverse: bool,
}

impl Twist {
    fn apply(&self, f: &FieldSpec, h: &Matrix) -> Result<Matrix> {
        let core = if self.transpose_inverse {
            h.inverse(f)
                .ok_or_else(|| LabError::Invalid("twist applied to a singular matrix".into()))?
                .transpose()
        } else {
            h.clone()
        };
        Ok(self.g.mul(f, &core).mul(f, &self.g_inv))
    }
}

fn seeded_word(f: &FieldSpec, gens: &[Matrix], rng: &mut impl Rng, len: usize) -> Matrix {
    let dim = gens.first().map_or(1, Matrix::dim);
    let mut w = Matrix::identity(f, dim);
    for _ in 0..len {
        w = w.mul(f, &gens[rng.gen_range(0..gens.len())]);
    }
    w
}

/// Builds and certifies a generating set of H^M from a certified local
/// action. Certification: every coordinate projection rebuilds H; the
/// pairwise linkage check (below) runs whenever the automorphism group is
/// enumerable from inner maps and the inverse-transpose; and for M ≤ 20 a
/// full chain on the disjoint product action must reach |H|^M. Failing
/// attempts are reseeded deterministically before giving up.
pub fn power_generating_set(local: &LocalAction, m_copies: usize, seed: u64) -> Result<PowerGenSet> {
    if m_copies < 1 {
        return Err(LabError::Invalid("need at least one copy".into()));
    }
    let f = &local.field;
    let gens = &local.generators;
    if m_copies == 1 {
        return Ok(PowerGenSet {
            m_copies: 1,
            elements: gens.iter().map(|g| vec![g.clone()]).collect(),
            labels: (0..gens.len()).map(|i| format!("base:{i}")).collect(),
            certified_order: Some(local.order.clone()),
            seed_used: seed,
        });
    }
    if gens.len() + 2 > POWER_SET_MAX_ELEMENTS {
        return Err(LabError::Invalid(format!(
            "{} base generators plus separators exceed the cap of {POWER_SET_MAX_ELEMENTS}",
            gens.len()
        )));
    }

    // The linkage check enumerates Aut(H) as inner maps optionally composed
    // with inverse-transpose. That list is complete for simple SL_m over a
    // prime field with trivial center and m ≥ 3 (no diagonal or field
    // automorphisms survive), which is when we rely on it.
    let linkage_complete = local.field.m() == 1
        && local.m_mat >= 3
        && gcd(local.m_mat as u64, local.field.q() - 1) == 1;
    let all_h = if linkage_complete {
        match enumerate_group(f, gens, LINKAGE_ENUM_CAP) {
            Ok(h) => Some(h),
            Err(LabError::Budget(_)) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    if all_h.is_none() && m_copies > PRODUCT_CHAIN_COPY_CAP {
        return Err(LabError::Certification(format!(
            "no certificate available for {m_copies} copies: the product chain is limited to \
             {PRODUCT_CHAIN_COPY_CAP} copies and the linkage check needs a simple group over a \
             prime field (dimension ≥ 3, trivial center) of enumerable size"
        )));
    }

    let mut last_failure = String::new();
    for attempt in 0..POWER_SET_ATTEMPTS {
        let attempt_seed = seed.wrapping_add(attempt);
        let (elements, labels) = draw_power_tuples(local, m_copies, attempt_seed)?;
        match certify_power_tuples(local, m_copies, &elements, all_h.as_deref()) {
            Ok(order) => {
                return Ok(PowerGenSet {
                    m_copies,
                    elements,
                    labels,
                    certified_order: Some(order),
                    seed_used: attempt_seed,
                })
            }
            Err(LabError::Certification(msg)) => last_failure = msg,
            Err(e) => return Err(e),
        }
    }
    Err(LabError::Certification(format!(
        "no certifiable power generating set after {POWER_SET_ATTEMPTS} seeds; last failure: \
         {last_failure}"
    )))
}

/// Like [`power_generating_set`], but only certifies that every coordinate
/// projection generates H; fullness of the product is *not* certified and
/// `certified_order` comes back `None`. This is the route for local groups
/// outside the reach of both full certificates (e.g. a non-prime field,
/// where the automorphism list is incomplete, combined with too many copies
/// for the product chain); the sets it returns are construction material
/// whose quality is then judged spectrally, not by a group-order proof.
pub fn power_generating_set_projections_only(
    local: &LocalAction,
    m_copies: usize,
    seed: u64,
) -> Result<PowerGenSet> {
    if m_copies < 1 {
        return Err(LabError::Invalid("need at least one copy".into()));
    }
    if m_copies == 1 {
        return power_generating_set(local, 1, seed);
    }
    if local.generators.len() + 2 > POWER_SET_MAX_ELEMENTS {
        return Err(LabError::Invalid(format!(
            "{} base generators plus separators exceed the cap of {POWER_SET_MAX_ELEMENTS}",
            local.generators.len()
        )));
    }
    let (elements, labels) = draw_power_tuples(local, m_copies, seed)?;
    for copy in 0..m_copies {
        certify_projection(local, &elements, copy)?;
    }
    Ok(PowerGenSet {
        m_copies,
        elements,
        labels,
        certified_order: None,
        seed_used: seed,
    })
}

fn draw_power_tuples(
    local: &LocalAction,
    m_copies: usize,
    seed: u64,
) -> Result<(Vec<Vec<Matrix>>, Vec<String>)> {
    let f = &local.field;
    let gens = &local.generators;
    let mut rng = chacha(seed, stream::POWER_GEN_TWISTS);
    let mut twists = Vec::with_capacity(m_copies);
    for _ in 0..m_copies {
        let transpose_inverse = rng.gen_bool(0.5);
        let len = rng.gen_range(0..=3);
        let g = seeded_word(f, gens, &mut rng, len);
        let g_inv = g
            .inverse(f)
            .ok_or_else(|| LabError::Invalid("twist word is singular".into()))?;
        twists.push(Twist { g, g_inv, transpose_inverse });
    }

    let mut elements = Vec::new();
    let mut labels = Vec::new();
    for (i, s) in gens.iter().enumerate() {
        let tuple: Result<Vec<Matrix>> = twists.iter().map(|t| t.apply(f, s)).collect();
        elements.push(tuple?);
        labels.push(format!("diag:{i}"));
    }

    let mut sep_rng = chacha(seed, stream::POWER_GEN_SEPARATORS);
    for si in 0..2 {
        loop {
            let entries: Vec<Matrix> = (0..m_copies)
                .map(|_| {
                    let len = sep_rng.gen_range(2..=5);
                    seeded_word(f, gens, &mut sep_rng, len)
                })
                .collect();
            if entries.iter().any(|m| !m.is_identity(f)) {
                elements.push(entries);
                labels.push(format!("sep:{si}"));
                break;
            }
        }
    }
    Ok((elements, labels))
}

/// BFS closure of the generators; errors with `Budget` past `cap`.
fn enumerate_group(f: &FieldSpec, gens: &[Matrix], cap: usize) -> Result<Vec<Matrix>> {
    let dim = gens
        .first()
        .ok_or_else(|| LabError::Invalid("cannot enumerate from an empty set".into()))?
        .dim();
    let mut seen = HashSet::new();
    let mut queue = vec![Matrix::identity(f, dim)];
    seen.insert(queue[0].clone());
    while let Some(m) = queue.pop() {
        for g in gens {
            let next = m.mul(f, g);
            if seen.len() >= cap && !seen.contains(&next) {
                return Err(LabError::Budget(format!("group exceeds enumeration cap {cap}")));
            }
            if seen.insert(next.clone()) {
                queue.push(next);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// True when some automorphism h ↦ g·τ^e(h)·g⁻¹ maps every i-th entry to
/// the matching j-th entry — i.e. coordinates i and j cannot be separated.
fn coordinates_linked(
    f: &FieldSpec,
    all_h: &[Matrix],
    elements: &[Vec<Matrix>],
    i: usize,
    j: usize,
) -> Result<bool> {
    for transpose_inverse in [false, true] {
        let lhs: Result<Vec<Matrix>> = elements
            .iter()
            .map(|t| {
                if transpose_inverse {
                    Ok(t[i]
                        .inverse(f)
                        .ok_or_else(|| {
                            LabError::Invalid("linkage check hit a singular matrix".into())
                        })?
                        .transpose())
                } else {
                    Ok(t[i].clone())
                }
            })
            .collect();
        let lhs = lhs?;
        // g·a·g⁻¹ = b for every pair ⟺ g·a = b·g for every pair.
        'outer: for g in all_h {
            for (a, t) in lhs.iter().zip(elements) {
                if g.mul(f, a) != t[j].mul(f, g) {
                    continue 'outer;
                }
            }
            return Ok(true);
        }
    }
    Ok(false)
}

/// Checks that the projection of the tuples to one copy generates the full
/// local group, via a chain on the local points.
fn certify_projection(local: &LocalAction, elements: &[Vec<Matrix>], c: usize) -> Result<()> {
    let perms: Result<Vec<Permutation>> = elements.iter().map(|t| local.perm(&t[c])).collect();
    let chain = Bsgs::build_with_target(&perms?, 0, Some(local.order.clone()))?;
    if chain.order() != &local.order {
        return Err(LabError::Certification(format!(
            "projection to copy {c} generates order {} instead of {}",
            chain.order(),
            local.order
        )));
    }
    Ok(())
}

fn certify_power_tuples(
    local: &LocalAction,
    m_copies: usize,
    elements: &[Vec<Matrix>],
    all_h: Option<&[Matrix]>,
) -> Result<BigUint> {
    let f = &local.field;
    // Every coordinate projection must rebuild the whole local group.
    for c in 0..m_copies {
        certify_projection(local, elements, c)?;
    }

    if let Some(all_h) = all_h {
        for i in 0..m_copies {
            for j in i + 1..m_copies {
                if coordinates_linked(f, all_h, elements, i, j)? {
                    return Err(LabError::Certification(format!(
                        "coordinates {i} and {j} are linked by an automorphism"
                    )));
                }
            }
        }
    }

    let target = pow_biguint(&local.order, m_copies);
    if m_copies <= PRODUCT_CHAIN_COPY_CAP {
        let k = local.k_points();
        let perms: Result<Vec<Permutation>> = elements
            .iter()
            .map(|t| {
                let mut images = Vec::with_capacity(m_copies * k);
                for (c, m) in t.iter().enumerate() {
                    let p = local.perm(m)?;
                    images.extend(p.images().iter().map(|&x| x + (c * k) as u32));
                }
                Permutation::from_images(images)
            })
            .collect();
        let chain = Bsgs::build_with_target(&perms?, 0, Some(target.clone()))?;
        if chain.order() != &target {
            return Err(LabError::Certification(format!(
                "product action chain reports order {} instead of {target}",
                chain.order()
            )));
        }
    }
    Ok(target)
}

fn pow_biguint(b: &BigUint, e: usize) -> BigUint {
    let mut out = BigUint::one();
    for _ in 0..e {
        out *= b;
    }
    out
}

// ---------------------------------------------------------------------------
// Generating families
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// Union over axes of the embedded power-set images on the cube.
    CubeUnion,
    /// Shifted copies of a base family on overlapping windows.
    Padded,
    /// A padded/cube family plus one odd involution (generates Sym).
    SymPadded,
    /// Commuting cycle-power elements along one axis.
    AbelianAxis,
    /// Sampled cycle-power elements across all axes.
    AbelianUnion,
}

impl FamilyKind {
    /// Families whose elements must all be even permutations.
    pub fn requires_even(self) -> bool {
        !matches!(self, FamilyKind::SymPadded)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyLabel {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub axis: Option<usize>,
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub window: Option<usize>,
}

/// Construction parameters carried in family files so analysis commands can
/// recreate the algebraic context.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub k_side: u64,
    pub d: usize,
    pub p: u32,
    pub m: usize,
    pub m_mat: usize,
    pub modulus: Vec<u32>,
    pub enumeration: String,
    pub style: String,
}

impl FamilyParams {
    fn from_parts(cube: &CubeIndex, local: &LocalAction) -> FamilyParams {
        FamilyParams {
            k_side: cube.k_side(),
            d: cube.d(),
            p: local.field.p(),
            m: local.field.m(),
            m_mat: local.m_mat,
            modulus: local.field.modulus().to_vec(),
            enumeration: match local.kind() {
                EnumKind::NonzeroVectors => "nonzero_vectors".into(),
                EnumKind::ProjectivePlane => "projective_plane".into(),
            },
            style: match local.style {
                GenStyle::Elementary => "elementary".into(),
                GenStyle::Involution => "involution".into(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratingFamily {
    kind: FamilyKind,
    degree: usize,
    elements: Vec<Permutation>,
    labels: Vec<FamilyLabel>,
    params: Option<FamilyParams>,
}

#[derive(Serialize, Deserialize)]
struct FamilyFile {
    schema_version: u32,
    kind: FamilyKind,
    degree: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    params: Option<FamilyParams>,
    elements: Vec<String>,
    labels: Vec<FamilyLabel>,
}

impl GeneratingFamily {
    pub fn new(
        kind: FamilyKind,
        degree: usize,
        elements: Vec<Permutation>,
        labels: Vec<FamilyLabel>,
        params: Option<FamilyParams>,
    ) -> Result<GeneratingFamily> {
        if elements.len() != labels.len() {
            return Err(LabError::Invalid(format!(
                "{} elements but {} labels",
                elements.len(),
                labels.len()
            )));
        }
        for (e, l) in elements.iter().zip(&labels) {
            if e.degree() != degree {
                return Err(LabError::Invalid(format!(
                    "element '{}' has degree {}, family has {degree}",
                    l.source,
                    e.degree()
                )));
            }
            if kind.requires_even() && !e.parity().is_even() {
                return Err(LabError::Certification(format!(
                    "element '{}' is odd; every element of this family kind must be even",
                    l.source
                )));
            }
        }
        Ok(GeneratingFamily { kind, degree, elements, labels, params })
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn labels(&self) -> &[FamilyLabel] {
        &self.labels
    }

    pub fn params(&self) -> Option<&FamilyParams> {
        self.params.as_ref()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn to_json(&self) -> Result<String> {
        let file = FamilyFile {
            schema_version: SCHEMA_VERSION,
            kind: self.kind,
            degree: self.degree,
            params: self.params.clone(),
            elements: self.elements.iter().map(Permutation::cycle_string).collect(),
            labels: self.labels.clone(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(text: &str) -> Result<GeneratingFamily> {
        // A malformed document is invalid input, same as a malformed config.
        let file: FamilyFile = serde_json::from_str(text)
            .map_err(|e| LabError::Invalid(format!("family file error: {e}")))?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(LabError::Invalid(format!(
                "family file schema version {} (this build reads {SCHEMA_VERSION})",
                file.schema_version
            )));
        }
        let elements: Result<Vec<Permutation>> = file
            .elements
            .iter()
            .map(|s| Permutation::parse_cycles(s, file.degree))
            .collect();
        GeneratingFamily::new(file.kind, file.degree, elements?, file.labels, file.params)
    }
}

// ---------------------------------------------------------------------------
// Cube-union family
// ---------------------------------------------------------------------------

/// The union over all axes of the axis embeddings of the power set: each
/// power-set tuple acts with its c-th component on the c-th fiber.
pub fn build_cube_family(
    cube: &CubeIndex,
    local: &LocalAction,
    power: &PowerGenSet,
) -> Result<GeneratingFamily> {
    if local.k_points() as u64 != cube.k_side() {
        return Err(LabError::Invalid(format!(
            "local action on {} points does not match cube side {}",
            local.k_points(),
            cube.k_side()
        )));
    }
    let m = copy_count(cube.k_side(), cube.d(), usize::MAX)?;
    if power.m_copies() != m {
        return Err(LabError::Invalid(format!(
            "power set has {} copies, the cube needs K^(d−1) = {m}",
            power.m_copies()
        )));
    }

    let mut elements = Vec::new();
    let mut labels = Vec::new();
    let mut seen = HashSet::new();
    for axis in 0..cube.d() {
        for (tuple, label) in power.elements().iter().zip(power.labels()) {
            let mut images: Vec<u32> = (0..cube.n() as u32).collect();
            for (c, mat) in tuple.iter().enumerate() {
                let localp = local.perm(mat)?;
                if localp.is_identity() {
                    continue;
                }
                let copy = copy_tuple(cube.k_side(), cube.d(), c);
                write_fiber_images(&localp, &copy, axis, cube, &mut images)?;
            }
            let perm = Permutation::from_images(images)?;
            if seen.insert(perm.clone()) {
                elements.push(perm);
                labels.push(FamilyLabel { axis: Some(axis), source: label.clone(), window: None });
            }
        }
    }
    GeneratingFamily::new(
        FamilyKind::CubeUnion,
        cube.n(),
        elements,
        labels,
        Some(FamilyParams::from_parts(cube, local)),
    )
}

// ---------------------------------------------------------------------------
// Abelian families
// ---------------------------------------------------------------------------

/// The element of the axis-`axis` abelian group with the given cycle power
/// on each fiber: copies of the K-cycle raised to `exponents[c]` acting on
/// disjoint fibers (so any two outputs for one axis commute).
pub fn abelian_axis_element(
    cube: &CubeIndex,
    local: &LocalAction,
    axis: usize,
    exponents: &[u64],
) -> Result<Permutation> {
    let m = copy_count(cube.k_side(), cube.d(), usize::MAX)?;
    if exponents.len() != m {
        return Err(LabError::Invalid(format!(
            "{} exponents for {m} fibers",
            exponents.len()
        )));
    }
    if axis >= cube.d() {
        return Err(LabError::Invalid(format!("axis {axis} out of range 0..{}", cube.d())));
    }
    let cycle = local.cycle_permutation()?;
    let k = cube.k_side();
    let mut images: Vec<u32> = (0..cube.n() as u32).collect();
    for (c, &e) in exponents.iter().enumerate() {
        let e = (e % k) as usize;
        if e == 0 {
            continue;
        }
        let localp = cycle.pow(e);
        let copy = copy_tuple(k, cube.d(), c);
        write_fiber_images(&localp, &copy, axis, cube, &mut images)?;
    }
    Permutation::from_images(images)
}

/// A family of elements for one axis from explicit exponent rows.
pub fn abelian_axis_family(
    cube: &CubeIndex,
    local: &LocalAction,
    axis: usize,
    exponent_rows: &[Vec<u64>],
) -> Result<GeneratingFamily> {
    let mut elements = Vec::new();
    let mut labels = Vec::new();
    for (i, row) in exponent_rows.iter().enumerate() {
        elements.push(abelian_axis_element(cube, local, axis, row)?);
        labels.push(FamilyLabel { axis: Some(axis), source: format!("exponents:{i}"), window: None });
    }
    GeneratingFamily::new(
        FamilyKind::AbelianAxis,
        cube.n(),
        elements,
        labels,
        Some(FamilyParams::from_parts(cube, local)),
    )
}

/// Samples elements of the union over axes of the abelian groups: each draw
/// picks an axis and uniform cycle powers for every fiber.
pub fn sample_abelian_union(
    cube: &CubeIndex,
    local: &LocalAction,
    count: usize,
    seed: u64,
) -> Result<GeneratingFamily> {
    let m = copy_count(cube.k_side(), cube.d(), usize::MAX)?;
    let mut rng = chacha(seed, stream::C_SAMPLE);
    let mut elements = Vec::new();
    let mut labels = Vec::new();
    for i in 0..count {
        let axis = rng.gen_range(0..cube.d());
        let exps: Vec<u64> = (0..m).map(|_| rng.gen_range(0..cube.k_side())).collect();
        elements.push(abelian_axis_element(cube, local, axis, &exps)?);
        labels.push(FamilyLabel { axis: Some(axis), source: format!("sample:{i}"), window: None });
    }
    GeneratingFamily::new(
        FamilyKind::AbelianUnion,
        cube.n(),
        elements,
        labels,
        Some(FamilyParams::from_parts(cube, local)),
    )
}

// ---------------------------------------------------------------------------
// Padding to arbitrary degree
// ---------------------------------------------------------------------------

/// Start offsets of the padding windows: fixed stride ⌈n_s/2⌉ (capped so
/// consecutive windows overlap in at least `WINDOW_MIN_OVERLAP` points),
/// with the final window right-aligned to end exactly at n.
pub fn window_offsets(n: usize, n_s: usize) -> Result<Vec<usize>> {
    if n_s < WINDOW_MIN_OVERLAP + 2 {
        return Err(LabError::Invalid(format!("base degree {n_s} is too small to pad")));
    }
    if n < n_s {
        return Err(LabError::Invalid(format!(
            "target degree {n} is smaller than the base degree {n_s}"
        )));
    }
    let stride = (n_s.div_ceil(2)).min(n_s - WINDOW_MIN_OVERLAP);
    let mut offsets = vec![0];
    while offsets.last().unwrap() + n_s < n {
        let next = offsets.last().unwrap() + stride;
        if next + n_s >= n {
            offsets.push(n - n_s);
        } else {
            offsets.push(next);
        }
    }
    Ok(offsets)
}

/// Pads a family of degree n_s up to degree n: the union of copies of the
/// base family shifted onto overlapping windows. For degrees up to
/// `CERTIFY_DEGREE_CAP` the result is certified to generate the alternating
/// group before being returned.
pub fn pad_to_all_n(n: usize, base: &GeneratingFamily) -> Result<GeneratingFamily> {
    if !base.kind().requires_even() {
        return Err(LabError::Invalid(
            "padding applies to even families; adjoin the odd involution afterwards".into(),
        ));
    }
    let n_s = base.degree();
    let offsets = window_offsets(n, n_s)?;
    if n_s >= 2 * WINDOW_MIN_OVERLAP {
        debug_assert!(offsets.len() <= (2 * n).div_ceil(n_s));
    }

    let mut elements = Vec::new();
    let mut labels = Vec::new();
    let mut seen = HashSet::new();
    for (w, &t) in offsets.iter().enumerate() {
        for (e, l) in base.elements().iter().zip(base.labels()) {
            let shifted = e.embed_window(t, n)?;
            if seen.insert(shifted.clone()) {
                elements.push(shifted);
                labels.push(FamilyLabel { axis: l.axis, source: l.source.clone(), window: Some(w) });
            }
        }
    }
    let family = GeneratingFamily::new(
        FamilyKind::Padded,
        n,
        elements,
        labels,
        base.params().cloned(),
    )?;
    if n <= CERTIFY_DEGREE_CAP {
        certify_alternating(&family, 0)?;
    }
    Ok(family)
}

// ---------------------------------------------------------------------------
// Symmetric variant
// ---------------------------------------------------------------------------

/// Adjoins one odd involution (default: the transposition of points 0 and 1)
/// to an alternating-group family, yielding a family that generates the full
/// symmetric group. Certified by chains up to `CERTIFY_DEGREE_CAP`.
pub fn sym_variant(base: &GeneratingFamily, odd: Option<Permutation>) -> Result<GeneratingFamily> {
    if !base.kind().requires_even() {
        return Err(LabError::Invalid("the family already contains an odd element".into()));
    }
    let n = base.degree();
    let odd = match odd {
        Some(p) => p,
        None => Permutation::from_cycles(n, &[vec![0, 1]])?,
    };
    if odd.degree() != n {
        return Err(LabError::Invalid(format!(
            "odd element degree {} does not match family degree {n}",
            odd.degree()
        )));
    }
    if odd.parity().is_even() {
        return Err(LabError::Invalid("the adjoined element must be odd".into()));
    }
    if !odd.compose(&odd)?.is_identity() {
        return Err(LabError::Invalid("the adjoined element must be an involution".into()));
    }

    if n <= CERTIFY_DEGREE_CAP {
        certify_alternating(base, 0)?;
    }
    let mut elements = base.elements().to_vec();
    let mut labels = base.labels().to_vec();
    elements.push(odd);
    labels.push(FamilyLabel { axis: None, source: "odd-involution".into(), window: None });
    let family =
        GeneratingFamily::new(FamilyKind::SymPadded, n, elements, labels, base.params().cloned())?;
    if n <= CERTIFY_DEGREE_CAP {
        let chain = certify_transitive_chain(&family, 0, factorial(n))?;
        if !chain.is_symmetric() {
            return Err(LabError::Certification(format!(
                "expected the full symmetric group, found order {}",
                chain.order()
            )));
        }
    }
    Ok(family)
}

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

fn orbit_of_zero(elements: &[Permutation], degree: usize) -> usize {
    let mut seen = vec![false; degree];
    seen[0] = true;
    let mut stack = vec![0usize];
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for e in elements {
            let y = e.apply(x);
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count
}

fn certify_transitive_chain(
    family: &GeneratingFamily,
    seed: u64,
    target: BigUint,
) -> Result<Bsgs> {
    let n = family.degree();
    let orbit = orbit_of_zero(family.elements(), n);
    if orbit != n {
        return Err(LabError::Certification(format!(
            "family is not transitive: the orbit of point 0 has size {orbit} of {n}"
        )));
    }
    Bsgs::build_with_target(family.elements(), seed, Some(target))
}

/// Certifies that the family generates the alternating group of its degree:
/// a transitivity check first, then a chain whose order must be n!/2.
pub fn certify_alternating(family: &GeneratingFamily, seed: u64) -> Result<Bsgs> {
    let n = family.degree();
    let target = factorial(n) / BigUint::from(2u32);
    let chain = certify_transitive_chain(family, seed, target)?;
    if !chain.is_alternating() {
        return Err(LabError::Certification(format!(
            "expected the alternating group of degree {n}, found order {}",
            chain.order()
        )));
    }
    Ok(chain)
}

/// Certifies that the family generates the symmetric group of its degree.
pub fn certify_symmetric(family: &GeneratingFamily, seed: u64) -> Result<Bsgs> {
    let n = family.degree();
    let chain = certify_transitive_chain(family, seed, factorial(n))?;
    if !chain.is_symmetric() {
        return Err(LabError::Certification(format!(
            "expected the symmetric group of degree {n}, found order {}",
            chain.order()
        )));
    }
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sl3_f2() -> LocalAction {
        LocalAction::new(2, 1, 3, GenStyle::Elementary, EnumKind::NonzeroVectors).unwrap()
    }

    #[test]
    fn cube_index_rule_and_round_trip() {
        let cube = CubeIndex::new(7, 2, DEFAULT_MAX_CUBE_POINTS).unwrap();
        assert_eq!(cube.n(), 49);
        assert_eq!(cube.index(&[3, 5]).unwrap(), 5 * 7 + 3);
        for idx in 0..cube.n() {
            assert_eq!(cube.index(&cube.tuple(idx).unwrap()).unwrap(), idx);
        }
        assert_eq!(CubeIndex::new(7, 3, DEFAULT_MAX_CUBE_POINTS).unwrap().n(), 343);
    }

    #[test]
    fn cube_budget_is_enforced() {
        assert!(matches!(
            CubeIndex::new(100, 3, DEFAULT_MAX_CUBE_POINTS),
            Err(LabError::Budget(_))
        ));
    }

    #[test]
    fn embedding_identity_gives_identity() {
        let cube = CubeIndex::new(7, 2, DEFAULT_MAX_CUBE_POINTS).unwrap();
        let id = Permutation::identity(7);
        let g = embed_axis(&id, &[4], 0, &cube).unwrap();
        assert!(g.is_identity());
    }

    #[test]
    fn embedded_cycle_moves_exactly_one_fiber() {
        let cube = CubeIndex::new(7, 2, DEFAULT_MAX_CUBE_POINTS).unwrap();
        let seven_cycle = Permutation::from_cycles(7, &[vec![0, 1, 2, 3, 4, 5, 6]]).unwrap();
        let g = embed_axis(&seven_cycle, &[3], 0, &cube).unwrap();
        assert_eq!(g.support(), 7);
        for p in g.moved_points() {
            let t = cube.tuple(p).unwrap();
            assert_eq!(t[1], 3, "moved point off the labeled fiber");
            let image = cube.tuple(g.apply(p)).unwrap();
            assert_eq!(image[0], seven_cycle.apply(t[0] as usize) as u64);
        }
    }

    #[test]
    fn crossing_axes_commute_exactly_when_fibers_are_disjoint() {
        let cube = CubeIndex::new(7, 2, DEFAULT_MAX_CUBE_POINTS).unwrap();
        let c = Permutation::from_cycles(7, &[vec![0, 1, 2]]).unwrap();
        let a = embed_axis(&c, &[0], 0, &cube).unwrap();
        let b_crossing = embed_axis(&c, &[1], 1, &cube).unwrap();
        let b_disjoint = embed_axis(&c, &[4], 1, &cube).unwrap();
        assert_ne!(
            a.compose(&b_crossing).unwrap(),
            b_crossing.compose(&a).unwrap(),
            "fiber of axis 1 at coordinate 1 crosses the axis-0 fiber"
        );
        assert_eq!(a.compose(&b_disjoint).unwrap(), b_disjoint.compose(&a).unwrap());
    }

    #[test]
    fn power_set_single_copy_is_the_base_set() {
        let local = sl3_f2();
        let p = power_generating_set(&local, 1, 11).unwrap();
        assert_eq!(p.m_copies(), 1);
        assert_eq!(p.elements().len(), local.generators().len());
        for (t, g) in p.elements().iter().zip(local.generators()) {
            assert_eq!(&t[0], g);
        }
        assert_eq!(p.certified_order(), Some(&BigUint::from(168u32)));
    }

    #[test]
    fn power_set_two_copies_certifies_full_product() {
        let local = sl3_f2();
        let p = power_generating_set(&local, 2, 11).unwrap();
        assert_eq!(p.certified_order(), Some(&BigUint::from(168u32 * 168)));
        assert_eq!(p.elements().len(), 6);
    }

    #[test]
    fn power_set_five_copies_certifies_full_product() {
        let local = sl3_f2();
        let p = power_generating_set(&local, 5, 11).unwrap();
        assert_eq!(p.certified_order(), Some(&pow_biguint(&BigUint::from(168u32), 5)));
        assert!(p.elements().len() <= POWER_SET_MAX_ELEMENTS);
    }

    #[test]
    fn projections_only_power_set_serves_non_prime_fields() {
        // SL₃(F₄) has a nontrivial center and a field automorphism, so
        // neither full certificate applies; the projections-only route
        // still validates every coordinate and reports no certified order.
        let local =
            LocalAction::new(2, 2, 3, GenStyle::Involution, EnumKind::NonzeroVectors).unwrap();
        assert_eq!(local.k_points(), 63);
        let p = power_generating_set_projections_only(&local, 3, 5).unwrap();
        assert_eq!(p.certified_order(), None);
        assert_eq!(p.m_copies(), 3);
        assert!(p.elements().len() <= POWER_SET_MAX_ELEMENTS);
        // The fully-certified route refuses this local action at scale.
        assert!(matches!(
            power_generating_set(&local, 63, 5),
            Err(LabError::Certification(_))
        ));
    }

    #[test]
    fn cube_family_certifies_alternating_49() {
        let local = sl3_f2();
        let cube = CubeIndex::new(7, 2, DEFAULT_MAX_CUBE_POINTS).unwrap();
        let power = power_generating_set(&local, 7, 11).unwrap();
        let family = build_cube_family(&cube, &local, &power).unwrap();
        assert!(family.len() <= 2 * power.elements().len());
        for e in family.elements() {
            assert!(e.parity().is_even());
        }
        let chain = certify_alternating(&family, 0).unwrap();
        assert_eq!(chain.order(), &(factorial(49) / BigUint::from(2u32)));
    }

    #[test]
    fn cube_family_restricts_to_its_source_on_each_fiber() {
        let local = sl3_f2();
        let cube = CubeIndex::new(7, 2, DEFAULT_MAX_CUBE_POINTS).unwrap();
        let power = power_generating_set(&local, 7, 11).unwrap();
        let family = build_cube_family(&cube, &local, &power).unwrap();
        for (g, label) in family.elements().iter().zip(family.labels()) {
            let axis = label.axis.unwrap();
            let t_idx = power
                .labels()
                .iter()
                .position(|l| l == &label.source)
                .expect("label names a power-set element");
            let tuple = &power.elements()[t_idx];
            for c in 0..power.m_copies() {
                let expected = perm_from_matrix(&tuple[c], local.enumeration()).unwrap();
                let copy = copy_tuple(7, 2, c);
                let mut coords = copy.clone();
                coords.insert(axis, 0);
                for z in 0..7u64 {
                    coords[axis] = z;
                    let src = cube.index(&coords).unwrap();
                    let dst = cube.tuple(g.apply(src)).unwrap();
                    assert_eq!(dst[axis], expected.apply(z as usize) as u64);
                }
            }
        }
    }

    #[test]
    fn abelian_elements_commute_along_an_axis() {
        let local = sl3_f2();
        let cube = CubeIndex::new(7, 2, DEFAULT_MAX_CUBE_POINTS).unwrap();
        let zero = abelian_axis_element(&cube, &local, 0, &[0; 7]).unwrap();
        assert!(zero.is_identity());

        let a = abelian_axis_element(&cube, &local, 0, &[1, 4, 2, 0, 6, 3, 5]).unwrap();
        let b = abelian_axis_element(&cube, &local, 0, &[5, 0, 1, 3, 2, 2, 4]).unwrap();
        assert_eq!(a.compose(&b).unwrap(), b.compose(&a).unwrap());
        // Exponents add fiberwise.
        let sum = abelian_axis_element(&cube, &local, 0, &[6, 4, 3, 3, 1, 5, 2]).unwrap();
        assert_eq!(a.compose(&b).unwrap(), sum);

        let ones = abelian_axis_element(&cube, &local, 1, &[1; 7]).unwrap();
        assert_eq!(ones.support(), 49);
    }

    #[test]
    fn abelian_samples_are_even_and_reproducible() {
        let local = sl3_f2();
        let cube = CubeIndex::new(7, 2, DEFAULT_MAX_CUBE_POINTS).unwrap();
        let s1 = sample_abelian_union(&cube, &local, 8, 5).unwrap();
        let s2 = sample_abelian_union(&cube, &local, 8, 5).unwrap();
        assert_eq!(s1.elements(), s2.elements());
        assert_eq!(s1.kind(), FamilyKind::AbelianUnion);
        for e in s1.elements() {
            assert!(e.parity().is_even());
        }
    }

    #[test]
    fn window_offsets_match_the_fixed_rule() {
        assert_eq!(window_offsets(49, 49).unwrap(), vec![0]);
        assert_eq!(window_offsets(60, 49).unwrap(), vec![0, 11]);
        assert_eq!(window_offsets(90, 49).unwrap(), vec![0, 25, 41]);
        assert!(window_offsets(48, 49).is_err());
    }

    #[test]
    fn padding_to_sixty_certifies_alternating() {
        let local = sl3_f2();
        let cube = CubeIndex::new(7, 2, DEFAULT_MAX_CUBE_POINTS).unwrap();
        let power = power_generating_set(&local, 7, 11).unwrap();
        let base = build_cube_family(&cube, &local, &power).unwrap();

        let same = pad_to_all_n(49, &base).unwrap();
        assert_eq!(same.elements(), base.elements());

        let padded = pad_to_all_n(60, &base).unwrap();
        assert_eq!(padded.kind(), FamilyKind::Padded);
        let windows: HashSet<usize> = padded.labels().iter().map(|l| l.window.unwrap()).collect();
        assert_eq!(windows.len(), 2);
        let chain = certify_alternating(&padded, 0).unwrap();
        assert_eq!(chain.order(), &(factorial(60) / BigUint::from(2u32)));
    }

    #[test]
    fn sym_variant_gains_exactly_the_odd_coset() {
        let local = sl3_f2();
        let cube = CubeIndex::new(7, 2, DEFAULT_MAX_CUBE_POINTS).unwrap();
        let power = power_generating_set(&local, 7, 11).unwrap();
        let base = build_cube_family(&cube, &local, &power).unwrap();

        let sym = sym_variant(&base, None).unwrap();
        assert_eq!(sym.kind(), FamilyKind::SymPadded);
        assert_eq!(sym.len(), base.len() + 1);
        let added = sym.elements().last().unwrap();
        assert!(!added.parity().is_even());
        let chain = certify_symmetric(&sym, 0).unwrap();
        assert_eq!(chain.order(), &factorial(49));

        // Dropping the adjoined element recovers the even family.
        let recovered = GeneratingFamily::new(
            FamilyKind::CubeUnion,
            49,
            sym.elements()[..sym.len() - 1].to_vec(),
            sym.labels()[..sym.len() - 1].to_vec(),
            None,
        )
        .unwrap();
        let chain = certify_alternating(&recovered, 0).unwrap();
        assert_eq!(chain.order(), &(factorial(49) / BigUint::from(2u32)));
    }

    #[test]
    fn family_files_round_trip() {
        let local = sl3_f2();
        let cube = CubeIndex::new(7, 2, DEFAULT_MAX_CUBE_POINTS).unwrap();
        let power = power_generating_set(&local, 7, 11).unwrap();
        let family = build_cube_family(&cube, &local, &power).unwrap();
        let json = family.to_json().unwrap();
        let back = GeneratingFamily::from_json(&json).unwrap();
        assert_eq!(back, family);
        // Serialization is deterministic.
        assert_eq!(json, back.to_json().unwrap());
    }

    #[test]
    fn odd_kind_rejects_even_guard_violations() {
        let odd = Permutation::from_cycles(4, &[vec![0, 1]]).unwrap();
        let label = FamilyLabel { axis: None, source: "g".into(), window: None };
        assert!(matches!(
            GeneratingFamily::new(FamilyKind::CubeUnion, 4, vec![odd], vec![label], None),
            Err(LabError::Certification(_))
        ));
    }

    proptest! {
        #[test]
        fn cube_round_trip_random(k in 2u64..9, d in 1usize..4, salt in 0usize..1000) {
            let cube = CubeIndex::new(k, d, DEFAULT_MAX_CUBE_POINTS).unwrap();
            let idx = salt % cube.n();
            prop_assert_eq!(cube.index(&cube.tuple(idx).unwrap()).unwrap(), idx);
        }

        #[test]
        fn windows_cover_and_overlap(n_s in 10usize..60, extra in 0usize..200) {
            let n = n_s + extra;
            let offsets = window_offsets(n, n_s).unwrap();
            prop_assert_eq!(offsets[0], 0);
            prop_assert_eq!(offsets.last().unwrap() + n_s, n.max(n_s));
            for w in offsets.windows(2) {
                prop_assert!(w[1] > w[0]);
                // Consecutive windows share at least the minimum overlap.
                prop_assert!(w[0] + n_s >= w[1] + WINDOW_MIN_OVERLAP);
            }
            prop_assert!(offsets.len() <= (2 * n).div_ceil(n_s));
        }
    }
}
