//! Permutation actions of matrix groups: point enumerations, the
//! matrix-to-permutation homomorphism, determinant-one full-cycle elements,
//! and certified generating sets for SL_m(F_q).

use std::collections::HashMap;

use num::bigint::BigUint;
use num::One;

use crate::algebra::field::{FieldElem, FieldSpec};
use crate::algebra::matrix::Matrix;
use crate::bsgs::Bsgs;
use crate::error::{LabError, Result};
use crate::perm::Permutation;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumKind {
    /// All q^m − 1 nonzero row vectors of F_q^m.
    NonzeroVectors,
    /// The q² + q + 1 points of the projective plane over F_q (m = 3),
    /// represented by vectors normalized to leading coefficient 1.
    ProjectivePlane,
}

/// A fixed bijection between action points and vector representatives.
///
/// Nonzero vectors are ordered lexicographically with coordinate 0 most
/// significant (so the first point is (0,…,0,1)); projective points by the
/// same order on their normalized representatives.
#[derive(Clone, Debug)]
pub struct PointEnumeration {
    kind: EnumKind,
    base: FieldSpec,
    m_mat: usize,
    reps: Vec<Vec<FieldElem>>,
    index: HashMap<Vec<FieldElem>, usize>,
}

impl PointEnumeration {
    pub fn nonzero_vectors(base: &FieldSpec, m_mat: usize) -> Result<PointEnumeration> {
        if m_mat < 2 {
            return Err(LabError::Invalid("matrix dimension must be at least 2".into()));
        }
        let q = base.q();
        let count = q.pow(m_mat as u32);
        if count > 1 << 22 {
            return Err(LabError::Budget(format!(
                "enumeration of {count} vectors exceeds the desk-scale point budget"
            )));
        }
        let mut reps = Vec::with_capacity(count as usize - 1);
        for v in 1..count {
            // Big-endian digits: coordinate 0 is most significant.
            let mut tuple = vec![base.zero(); m_mat];
            let mut rest = v;
            for slot in (0..m_mat).rev() {
                tuple[slot] = base.from_int(rest % q);
                rest /= q;
            }
            reps.push(tuple);
        }
        Ok(Self::with_reps(EnumKind::NonzeroVectors, base.clone(), m_mat, reps))
    }

    pub fn projective_plane(base: &FieldSpec) -> Result<PointEnumeration> {
        let q = base.q();
        if q > 1 << 11 {
            return Err(LabError::Budget(format!(
                "projective plane over a field of size {q} exceeds the desk-scale point budget"
            )));
        }
        let mut reps = Vec::with_capacity((q * q + q + 1) as usize);
        reps.push(vec![base.zero(), base.zero(), base.one()]);
        for c in 0..q {
            reps.push(vec![base.zero(), base.one(), base.from_int(c)]);
        }
        for c in 0..q {
            for c2 in 0..q {
                reps.push(vec![base.one(), base.from_int(c), base.from_int(c2)]);
            }
        }
        Ok(Self::with_reps(EnumKind::ProjectivePlane, base.clone(), 3, reps))
    }

    fn with_reps(
        kind: EnumKind,
        base: FieldSpec,
        m_mat: usize,
        reps: Vec<Vec<FieldElem>>,
    ) -> PointEnumeration {
        let index = reps.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        PointEnumeration { kind, base, m_mat, reps, index }
    }

    pub fn kind(&self) -> EnumKind {
        self.kind
    }

    pub fn base(&self) -> &FieldSpec {
        &self.base
    }

    pub fn m_mat(&self) -> usize {
        self.m_mat
    }

    /// Number of points K.
    pub fn k(&self) -> usize {
        self.reps.len()
    }

    pub fn rep(&self, i: usize) -> &[FieldElem] {
        &self.reps[i]
    }

    /// Scales a projective vector so its first nonzero coordinate is 1;
    /// identity on the nonzero-vectors kind.
    fn normalize(&self, mut v: Vec<FieldElem>) -> Result<Vec<FieldElem>> {
        if self.kind == EnumKind::ProjectivePlane {
            let lead = v.iter().find(|c| !c.is_zero()).cloned().ok_or_else(|| {
                LabError::Invalid("zero vector has no projective representative".into())
            })?;
            let scale = self.base.inv(&lead)?;
            for c in &mut v {
                *c = self.base.mul(c, &scale);
            }
        }
        Ok(v)
    }

    pub fn index_of(&self, v: &[FieldElem]) -> Result<usize> {
        let norm = self.normalize(v.to_vec())?;
        self.index
            .get(&norm)
            .copied()
            .ok_or_else(|| LabError::Invalid("vector is not an enumeration point".into()))
    }
}

/// The permutation induced by v ↦ v·M on the enumeration points. This is a
/// homomorphism under left-to-right composition: the image of M·N is the
/// image of M followed by the image of N.
pub fn perm_from_matrix(m: &Matrix, e: &PointEnumeration) -> Result<Permutation> {
    if m.dim() != e.m_mat() {
        return Err(LabError::Invalid(format!(
            "matrix dimension {} does not match enumeration dimension {}",
            m.dim(),
            e.m_mat()
        )));
    }
    let mut images = Vec::with_capacity(e.k());
    for i in 0..e.k() {
        let w = m.apply_row(&e.base, e.rep(i));
        images.push(e.index_of(&w).map_err(|_| {
            LabError::Invalid("matrix does not permute the enumeration points (singular?)".into())
        })?);
    }
    Permutation::from_images_usize(&images)
}

/// Order of SL_m(F_q): q^{m(m−1)/2} · Π_{i=2..m} (q^i − 1).
pub fn sl_order(q: u64, m: usize) -> BigUint {
    let q = BigUint::from(q);
    let mut order = q.pow((m * (m - 1) / 2) as u32);
    for i in 2..=m {
        order *= q.pow(i as u32) - BigUint::one();
    }
    order
}

/// A determinant-one matrix acting as a single K-cycle on the enumeration.
///
/// For nonzero vectors this is multiplication by x in the extension field
/// GF(2^m) — the companion matrix of the (primitive) modulus. It exists
/// only over GF(2): for larger base fields the determinant equals the field
/// norm of the multiplier, which is never 1 for a generator.
///
/// For the projective plane over F_p it is multiplication by γ^{p−1} with γ
/// primitive in GF(p³): the norm (= determinant) becomes 1 while the
/// projective order stays p² + p + 1 — unless p ≡ 1 (mod 3), where a cube
/// of the projective cycle drops to a scalar and no such element exists.
///
/// The cycle structure is verified by computing the orbit, not assumed.
pub fn k_cycle_element(ext: &FieldSpec, e: &PointEnumeration) -> Result<Matrix> {
    let base = e.base();
    if ext.p() != base.p() {
        return Err(LabError::Invalid("extension/base characteristic mismatch".into()));
    }
    let multiplier = match e.kind() {
        EnumKind::NonzeroVectors => {
            if base.q() != 2 {
                return Err(LabError::Invalid(
                    "a determinant-one K-cycle on nonzero vectors exists only over GF(2): \
                     the determinant is the norm of the multiplier"
                        .into(),
                ));
            }
            if ext.m() != e.m_mat() {
                return Err(LabError::Invalid(format!(
                    "extension degree {} must equal the matrix dimension {}",
                    ext.m(),
                    e.m_mat()
                )));
            }
            let x = ext.x();
            let order = ext.multiplicative_order(&x)?;
            if order != ext.q() - 1 {
                return Err(LabError::Invalid(format!(
                    "x has order {order} < {}; the modulus is not primitive",
                    ext.q() - 1
                )));
            }
            x
        }
        EnumKind::ProjectivePlane => {
            let p = base.p();
            if base.m() != 1 {
                return Err(LabError::Invalid(
                    "projective K-cycles are supported over prime fields only".into(),
                ));
            }
            if ext.m() != 3 {
                return Err(LabError::Invalid("projective plane needs a cubic extension".into()));
            }
            if p % 3 == 1 {
                return Err(LabError::Invalid(format!(
                    "no determinant-one matrix acts as a full (p²+p+1)-cycle on the projective \
                     plane when p ≡ 1 (mod 3); p = {p}"
                )));
            }
            let gamma = ext.primitive_element()?;
            ext.pow(&gamma, (p - 1) as u64)
        }
    };

    // Row i = coordinates of x^i · multiplier in the basis {1, x, x², …}.
    let m_mat = e.m_mat();
    let mut rows = Vec::with_capacity(m_mat);
    let mut basis_elem = ext.one();
    for _ in 0..m_mat {
        let image = ext.mul(&basis_elem, &multiplier);
        let row: Vec<FieldElem> =
            image.coeffs().iter().map(|&c| base.from_int(c as u64)).collect();
        rows.push(row);
        basis_elem = ext.mul(&basis_elem, &ext.x());
    }
    let m = Matrix::from_rows(base, rows)?;

    if m.det(base) != base.one() {
        return Err(LabError::Certification("cycle matrix determinant is not 1".into()));
    }
    let perm = perm_from_matrix(&m, e)?;
    let k = e.k();
    if perm.cycle_type().parts() != [k] {
        return Err(LabError::Certification(format!(
            "cycle matrix does not act as a single {k}-cycle (got {})",
            perm.cycle_type()
        )));
    }
    Ok(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenStyle {
    /// Elementary transvections I + α·E_{i,i±1}.
    Elementary,
    /// Order-2 generators only. In characteristic 2 the transvections
    /// already are involutions; in odd characteristic, signed basis swaps
    /// plus sheared involutions (m ≥ 3 only).
    Involution,
}

/// A small generating set of SL_{m_mat}(F_q), certified by building the
/// chain of its permutation action on nonzero vectors (a faithful action)
/// and comparing the order against the closed-form group order.
pub fn base_generating_set(
    base: &FieldSpec,
    m_mat: usize,
    style: GenStyle,
) -> Result<Vec<Matrix>> {
    if m_mat < 2 {
        return Err(LabError::Invalid("SL needs dimension at least 2".into()));
    }
    let odd = base.p() != 2;
    let mut gens = Vec::new();
    match (style, odd) {
        (GenStyle::Elementary, _) | (GenStyle::Involution, false) => {
            // α ranges over a spanning set of the base field so the
            // generated root subgroups are full: the primitive element for
            // prime fields (its integer multiples span), every basis power
            // for extension fields.
            let alphas: Vec<FieldElem> = if base.m() == 1 {
                vec![if base.q() == 2 { base.one() } else { base.primitive_element()? }]
            } else {
                (0..base.m()).map(|j| base.pow(&base.x(), j as u64)).collect()
            };
            for i in 0..m_mat - 1 {
                for alpha in &alphas {
                    gens.push(Matrix::transvection(base, m_mat, i, i + 1, alpha));
                    gens.push(Matrix::transvection(base, m_mat, i + 1, i, alpha));
                }
            }
        }
        (GenStyle::Involution, true) => {
            if m_mat < 3 {
                return Err(LabError::Invalid(
                    "the only involution in SL₂ over odd characteristic is −I, \
                     which generates nothing"
                        .into(),
                ));
            }
            let minus_one = base.neg(&base.one());
            // Signed adjacent swaps: exchange eᵢ ↔ eᵢ₊₁ and negate one
            // other axis to restore determinant 1.
            for i in 0..m_mat - 1 {
                let mut m = Matrix::identity(base, m_mat);
                m.set(i, i, base.zero());
                m.set(i + 1, i + 1, base.zero());
                m.set(i, i + 1, base.one());
                m.set(i + 1, i, base.one());
                let z = (i + 2) % m_mat;
                m.set(z, z, minus_one.clone());
                gens.push(m);
            }
            // Sheared involutions diag(−1, 1, −1, 1, …) with β in the
            // corner; they bring in elements outside the signed-permutation
            // subgroup. β ranges over the basis powers xᵗ so the shears
            // span the field over its prime subfield (β = 1 for prime
            // fields — a scaled β such as −1 can land the whole set inside
            // a proper monomial-type subgroup, so plain basis powers it is).
            for t in 0..base.m() {
                let mut b = Matrix::identity(base, m_mat);
                b.set(0, 0, minus_one.clone());
                b.set(2, 2, minus_one.clone());
                b.set(0, 1, base.pow(&base.x(), t as u64));
                gens.push(b);
            }
        }
    }

    if style == GenStyle::Involution {
        for g in &gens {
            if !g.mul(base, g).is_identity(base) {
                return Err(LabError::Certification(
                    "involution-style generator does not square to the identity".into(),
                ));
            }
        }
    }

    // Generation certificate on the faithful nonzero-vectors action.
    let e = PointEnumeration::nonzero_vectors(base, m_mat)?;
    let perms: Result<Vec<Permutation>> = gens.iter().map(|g| perm_from_matrix(g, &e)).collect();
    let target = sl_order(base.q(), m_mat);
    let chain = Bsgs::build_with_target(&perms?, 0, Some(target.clone()))?;
    if chain.order() != &target {
        return Err(LabError::Certification(format!(
            "generating set certificate failed: got order {}, expected {target}",
            chain.order()
        )));
    }
    Ok(gens)
}
