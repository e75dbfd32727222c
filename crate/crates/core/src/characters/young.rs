//! Explicit orthogonal irreducible representations of Sym(n), built on
//! standard Young tableaux, as a floating-point oracle against the exact
//! border-strip characters.
//!
//! For each adjacent transposition s_i = (i, i+1) the matrix in the
//! tableau basis is block-diagonal: a tableau with i, i+1 in one row is
//! fixed, in one column is negated, and otherwise pairs with the tableau
//! obtained by swapping i and i+1 through the symmetric 2×2 block
//! [[1/d, √(1−1/d²)], [√(1−1/d²), −1/d]] where d is the axial distance.
//! These matrices satisfy the Coxeter relations, so mapping a permutation
//! through any adjacent-transposition word gives a well-defined orthogonal
//! representation.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num::ToPrimitive;

use super::{normalized_character, ClassSpec, Partition};
use crate::error::{LabError, Result};
use crate::perm::Permutation;

/// The oracle enumerates all of Sym(n) for class averages.
pub const YOUNG_N_CAP: usize = 8;

/// A tableau stored as the cell of each value: `cells[v]` is the (row,
/// column) of value v+1.
type Tableau = Vec<(usize, usize)>;

/// An explicit orthogonal representation of Sym(n) for one shape.
pub struct YoungRep {
    n: usize,
    dim: usize,
    /// Matrix of each adjacent transposition (i, i+1), indexed by i.
    adjacent: Vec<DMatrix<f64>>,
}

fn enumerate_tableaux(shape: &[usize]) -> Vec<Tableau> {
    let n: usize = shape.iter().sum();
    let mut out = Vec::new();
    let mut filled = vec![0usize; shape.len()];
    let mut cells: Tableau = Vec::with_capacity(n);
    fn rec(
        shape: &[usize],
        filled: &mut Vec<usize>,
        cells: &mut Tableau,
        remaining: usize,
        out: &mut Vec<Tableau>,
    ) {
        if remaining == 0 {
            out.push(cells.clone());
            return;
        }
        for r in 0..shape.len() {
            if filled[r] < shape[r] && (r == 0 || filled[r] < filled[r - 1]) {
                cells.push((r, filled[r]));
                filled[r] += 1;
                rec(shape, filled, cells, remaining - 1, out);
                filled[r] -= 1;
                cells.pop();
            }
        }
    }
    rec(shape, &mut filled, &mut cells, n, &mut out);
    out
}

impl YoungRep {
    pub fn build(lambda: &Partition) -> Result<YoungRep> {
        let n = lambda.n();
        if n < 1 || n > YOUNG_N_CAP {
            return Err(LabError::Budget(format!(
                "explicit representations are built for 1 ≤ n ≤ {YOUNG_N_CAP}, got {n}"
            )));
        }
        let tableaux = enumerate_tableaux(lambda.parts());
        let dim = tableaux.len();
        let index: HashMap<&Tableau, usize> =
            tableaux.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut adjacent = Vec::with_capacity(n.saturating_sub(1));
        for i in 0..n.saturating_sub(1) {
            // s_i swaps values i+1 and i+2 (1-based), i.e. cells[i], cells[i+1].
            let mut m = DMatrix::<f64>::zeros(dim, dim);
            for (a, t) in tableaux.iter().enumerate() {
                let (r1, c1) = t[i];
                let (r2, c2) = t[i + 1];
                if r1 == r2 {
                    m[(a, a)] = 1.0;
                } else if c1 == c2 {
                    m[(a, a)] = -1.0;
                } else {
                    let d = (c2 as f64 - r2 as f64) - (c1 as f64 - r1 as f64);
                    let mut swapped = t.clone();
                    swapped.swap(i, i + 1);
                    let b = index[&swapped];
                    if a < b {
                        let inv = 1.0 / d;
                        let off = (1.0 - inv * inv).sqrt();
                        m[(a, a)] = inv;
                        m[(b, b)] = -inv;
                        m[(a, b)] = off;
                        m[(b, a)] = off;
                    }
                }
            }
            adjacent.push(m);
        }
        Ok(YoungRep { n, dim, adjacent })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Writes p as an adjacent-transposition word w with
    /// p = s_{w[0]} ∘ s_{w[1]} ∘ … in apply-left-first order.
    fn adjacent_word(&self, p: &Permutation) -> Vec<usize> {
        let mut arr: Vec<u32> = p.images().to_vec();
        let mut word = Vec::new();
        // Swapping positions j, j+1 of the one-line array is composing
        // s_j on the apply-first side; undoing them in encounter order
        // rebuilds p as an apply-left-first word.
        loop {
            let mut swapped = false;
            for j in 0..arr.len().saturating_sub(1) {
                if arr[j] > arr[j + 1] {
                    arr.swap(j, j + 1);
                    word.push(j);
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        word
    }

    /// The representing matrix of p.
    pub fn matrix(&self, p: &Permutation) -> Result<DMatrix<f64>> {
        if p.degree() != self.n {
            return Err(LabError::Invalid(format!(
                "degree {} permutation in a Sym({}) representation",
                p.degree(),
                self.n
            )));
        }
        let mut m = DMatrix::<f64>::identity(self.dim, self.dim);
        for &j in &self.adjacent_word(p) {
            m *= &self.adjacent[j];
        }
        Ok(m)
    }

    /// Trace of the representing matrix (an approximate character value).
    pub fn trace(&self, p: &Permutation) -> Result<f64> {
        Ok(self.matrix(p)?.trace())
    }
}

/// A canonical representative of the class: cycles laid out consecutively.
pub fn class_representative(class: &ClassSpec) -> Result<Permutation> {
    let n = class.n();
    let mut images: Vec<u32> = (0..n as u32).collect();
    let mut start = 0usize;
    for &len in class.cycle_type.parts() {
        for k in 0..len {
            images[start + k] = (start + (k + 1) % len) as u32;
        }
        start += len;
    }
    Permutation::from_images(images)
}

fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut images: Vec<u32> = (0..n as u32).collect();
    fn heap(k: usize, images: &mut Vec<u32>, out: &mut Vec<Permutation>) {
        if k <= 1 {
            out.push(Permutation::from_images(images.clone()).unwrap());
            return;
        }
        for i in 0..k {
            heap(k - 1, images, out);
            if k % 2 == 0 {
                images.swap(i, k - 1);
            } else {
                images.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut images, &mut out);
    out
}

/// Spectral norm of (1/|B|) Σ_{g∈B} ρ(g) − χ̄_λ(B)·I: the class average of
/// an irreducible representation is the normalized character times the
/// identity, so the residual is numerical noise only.
pub fn averaging_scalar_check(lambda: &Partition, class: &ClassSpec) -> Result<f64> {
    if lambda.n() != class.n() {
        return Err(LabError::Invalid("partition and class sizes differ".into()));
    }
    let rep = YoungRep::build(lambda)?;
    let n = lambda.n();
    let mut sum = DMatrix::<f64>::zeros(rep.dim(), rep.dim());
    let mut count = 0u64;
    for p in all_permutations(n) {
        if p.cycle_type().parts() == class.cycle_type.parts() {
            sum += rep.matrix(&p)?;
            count += 1;
        }
    }
    if num::BigUint::from(count) != class.size {
        return Err(LabError::Certification(format!(
            "enumerated {count} class elements, expected {}",
            class.size
        )));
    }
    sum /= count as f64;
    let scalar = normalized_character(lambda, class)?
        .to_f64()
        .ok_or_else(|| LabError::Invalid("normalized character out of float range".into()))?;
    for i in 0..rep.dim() {
        sum[(i, i)] -= scalar;
    }
    Ok(sum.svd(false, false).singular_values.max())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{character, classes, partitions};
    use num::ToPrimitive;

    #[test]
    fn tableau_counts_match_hook_dimensions() {
        for n in 1..=7 {
            for lambda in partitions(n).unwrap() {
                let rep = YoungRep::build(&lambda).unwrap();
                assert_eq!(
                    rep.dim(),
                    lambda.dimension().to_usize().unwrap(),
                    "λ = {lambda}"
                );
            }
        }
    }

    #[test]
    fn transposition_matrices_are_orthogonal_involutions_and_braid() {
        let lambda = Partition::parse("3+2+1").unwrap();
        let rep = YoungRep::build(&lambda).unwrap();
        let id = DMatrix::<f64>::identity(rep.dim(), rep.dim());
        for m in &rep.adjacent {
            assert!((m * m - &id).norm() < 1e-12, "not an involution");
            assert!((m * m.transpose() - &id).norm() < 1e-12, "not orthogonal");
        }
        for i in 0..rep.adjacent.len() - 1 {
            let a = &rep.adjacent[i];
            let b = &rep.adjacent[i + 1];
            assert!((a * b * a - b * a * b).norm() < 1e-12, "braid fails at {i}");
        }
        for i in 0..rep.adjacent.len() {
            for j in i + 2..rep.adjacent.len() {
                let a = &rep.adjacent[i];
                let b = &rep.adjacent[j];
                assert!((a * b - b * a).norm() < 1e-12, "distant generators must commute");
            }
        }
    }

    #[test]
    fn representation_is_a_homomorphism() {
        use rand::Rng;
        let lambda = Partition::parse("3+2").unwrap();
        let rep = YoungRep::build(&lambda).unwrap();
        let mut rng = crate::rng::chacha(11, 0);
        let perms = all_permutations(5);
        for _ in 0..40 {
            let g = &perms[rng.gen_range(0..perms.len())];
            let h = &perms[rng.gen_range(0..perms.len())];
            let lhs = rep.matrix(&g.compose(h).unwrap()).unwrap();
            let rhs = rep.matrix(g).unwrap() * rep.matrix(h).unwrap();
            assert!((lhs - rhs).norm() < 1e-10);
        }
    }

    #[test]
    fn traces_match_exact_characters_for_small_degrees() {
        for n in 2..=6 {
            for lambda in partitions(n).unwrap() {
                let rep = YoungRep::build(&lambda).unwrap();
                for class in classes(n).unwrap() {
                    let g = class_representative(&class).unwrap();
                    let trace = rep.trace(&g).unwrap();
                    let exact = character(&lambda, &class).unwrap().value;
                    let rounded = trace.round();
                    assert!(
                        (trace - rounded).abs() < 1e-9,
                        "non-integral trace {trace} at λ = {lambda}, class {}",
                        class.cycle_type
                    );
                    assert_eq!(
                        num::BigInt::from(rounded as i64),
                        exact,
                        "λ = {lambda}, class {}",
                        class.cycle_type
                    );
                }
            }
        }
    }

    #[test]
    fn class_representative_has_the_requested_type() {
        let class = ClassSpec::from_cycle_type(Partition::parse("3+2+1+1").unwrap());
        let g = class_representative(&class).unwrap();
        assert_eq!(g.cycle_type().parts(), class.cycle_type.parts());
    }

    #[test]
    fn identity_class_average_is_exact() {
        let lambda = Partition::parse("2+2").unwrap();
        let id = ClassSpec::from_cycle_type(Partition::new(vec![1; 4]).unwrap());
        assert_eq!(averaging_scalar_check(&lambda, &id).unwrap(), 0.0);
    }

    #[test]
    fn class_averages_are_scalar_for_two_two() {
        let lambda = Partition::parse("2+2").unwrap();
        let class = ClassSpec::from_cycle_type(Partition::parse("2+2").unwrap());
        let residual = averaging_scalar_check(&lambda, &class).unwrap();
        assert!(residual <= 1e-10, "residual {residual}");
    }

    #[test]
    fn class_averages_are_scalar_across_all_classes_of_five() {
        let lambda = Partition::parse("3+2").unwrap();
        for class in classes(5).unwrap() {
            let residual = averaging_scalar_check(&lambda, &class).unwrap();
            assert!(residual <= 1e-10, "residual {residual} at class {}", class.cycle_type);
        }
    }
}
