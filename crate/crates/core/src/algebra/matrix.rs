//! Square matrices over a finite field, with exact determinant and inverse.
//!
//! Vectors are rows and act on the right (v ↦ v·M), matching the
//! left-to-right composition convention for permutations: the permutation
//! of M followed by the permutation of N is the permutation of M·N.

use std::fmt::Write as _;

use crate::algebra::field::{FieldElem, FieldSpec};
use crate::error::{LabError, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix {
    dim: usize,
    /// Row-major entries, length dim².
    entries: Vec<FieldElem>,
}

impl Matrix {
    pub fn identity(f: &FieldSpec, dim: usize) -> Matrix {
        let mut entries = vec![f.zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = f.one();
        }
        Matrix { dim, entries }
    }

    pub fn from_rows(f: &FieldSpec, rows: Vec<Vec<FieldElem>>) -> Result<Matrix> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(LabError::Invalid("matrix rows must form a square".into()));
        }
        let _ = f;
        Ok(Matrix { dim, entries: rows.into_iter().flatten().collect() })
    }

    /// I + α·E_{ij} (an elementary transvection when i ≠ j).
    pub fn transvection(f: &FieldSpec, dim: usize, i: usize, j: usize, alpha: &FieldElem) -> Matrix {
        assert!(i != j && i < dim && j < dim, "transvection indices out of range");
        let mut m = Matrix::identity(f, dim);
        m.entries[i * dim + j] = alpha.clone();
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn at(&self, i: usize, j: usize) -> &FieldElem {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn mul(&self, f: &FieldSpec, other: &Matrix) -> Matrix {
        assert_eq!(self.dim, other.dim, "matrix dimension mismatch");
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = f.zero();
                for k in 0..n {
                    acc = f.add(&acc, &f.mul(self.at(i, k), other.at(k, j)));
                }
                entries.push(acc);
            }
        }
        Matrix { dim: n, entries }
    }

    /// Row vector times matrix: (v·M)_j = Σ_k v_k M_{kj}.
    pub fn apply_row(&self, f: &FieldSpec, v: &[FieldElem]) -> Vec<FieldElem> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|j| {
                let mut acc = f.zero();
                for (k, vk) in v.iter().enumerate() {
                    acc = f.add(&acc, &f.mul(vk, self.at(k, j)));
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                entries.push(self.at(i, j).clone());
            }
        }
        Matrix { dim: n, entries }
    }

    /// Exact determinant by fraction-free-style Gaussian elimination over
    /// the field (row swaps flip the sign).
    pub fn det(&self, f: &FieldSpec) -> FieldElem {
        let n = self.dim;
        let mut a = self.entries.clone();
        let mut det = f.one();
        for col in 0..n {
            let pivot_row = (col..n).find(|&r| !a[r * n + col].is_zero());
            let Some(pr) = pivot_row else {
                return f.zero();
            };
            if pr != col {
                for j in 0..n {
                    a.swap(pr * n + j, col * n + j);
                }
                det = f.neg(&det);
            }
            let pivot = a[col * n + col].clone();
            det = f.mul(&det, &pivot);
            let pivot_inv = f.inv(&pivot).expect("nonzero pivot");
            for r in col + 1..n {
                let factor = f.mul(&a[r * n + col], &pivot_inv);
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let sub = f.mul(&factor, &a[col * n + j]);
                    a[r * n + j] = f.sub(&a[r * n + j], &sub);
                }
            }
        }
        det
    }

    /// Gauss–Jordan inverse; `None` for singular matrices.
    pub fn inverse(&self, f: &FieldSpec) -> Option<Matrix> {
        let n = self.dim;
        let mut a = self.entries.clone();
        let mut b = Matrix::identity(f, n).entries;
        for col in 0..n {
            let pr = (col..n).find(|&r| !a[r * n + col].is_zero())?;
            if pr != col {
                for j in 0..n {
                    a.swap(pr * n + j, col * n + j);
                    b.swap(pr * n + j, col * n + j);
                }
            }
            let pivot_inv = f.inv(&a[col * n + col]).expect("nonzero pivot");
            for j in 0..n {
                a[col * n + j] = f.mul(&a[col * n + j], &pivot_inv);
                b[col * n + j] = f.mul(&b[col * n + j], &pivot_inv);
            }
            for r in 0..n {
                if r == col || a[r * n + col].is_zero() {
                    continue;
                }
                let factor = a[r * n + col].clone();
                for j in 0..n {
                    let sa = f.mul(&factor, &a[col * n + j]);
                    a[r * n + j] = f.sub(&a[r * n + j], &sa);
                    let sb = f.mul(&factor, &b[col * n + j]);
                    b[r * n + j] = f.sub(&b[r * n + j], &sb);
                }
            }
        }
        Some(Matrix { dim: n, entries: b })
    }

    pub fn is_identity(&self, f: &FieldSpec) -> bool {
        self == &Matrix::identity(f, self.dim)
    }

    /// Text form: one row per line, entries as little-endian digit strings
    /// separated by single spaces.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                if j > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "{}", self.at(i, j).digit_string());
            }
            if i + 1 < self.dim {
                out.push('\n');
            }
        }
        out
    }

    pub fn parse_text(f: &FieldSpec, s: &str) -> Result<Matrix> {
        let mut rows = Vec::new();
        for line in s.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row: Result<Vec<FieldElem>> =
                line.split_whitespace().map(|tok| f.parse_elem(tok)).collect();
            rows.push(row?);
        }
        Matrix::from_rows(f, rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_of_identity_and_transvection_is_one() {
        let f = FieldSpec::new(2, 3).unwrap();
        let id = Matrix::identity(&f, 3);
        assert_eq!(id.det(&f), f.one());
        let t = Matrix::transvection(&f, 3, 0, 1, &f.x());
        assert_eq!(t.det(&f), f.one());
    }

    #[test]
    fn det_matches_two_by_two_formula_exhaustively() {
        let f = FieldSpec::new(3, 1).unwrap();
        let elems: Vec<_> = f.elements().collect();
        for a in &elems {
            for b in &elems {
                for c in &elems {
                    for d in &elems {
                        let m = Matrix::from_rows(
                            &f,
                            vec![vec![a.clone(), b.clone()], vec![c.clone(), d.clone()]],
                        )
                        .unwrap();
                        let formula = f.sub(&f.mul(a, d), &f.mul(b, c));
                        assert_eq!(m.det(&f), formula);
                    }
                }
            }
        }
    }

    #[test]
    fn det_is_multiplicative() {
        let f = FieldSpec::new(2, 2).unwrap();
        let a = Matrix::from_rows(
            &f,
            vec![
                vec![f.from_int(2), f.from_int(1)],
                vec![f.from_int(3), f.from_int(2)],
            ],
        )
        .unwrap();
        let b = Matrix::from_rows(
            &f,
            vec![
                vec![f.from_int(1), f.from_int(3)],
                vec![f.from_int(2), f.from_int(2)],
            ],
        )
        .unwrap();
        let lhs = a.mul(&f, &b).det(&f);
        let rhs = f.mul(&a.det(&f), &b.det(&f));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverse_round_trips_and_rejects_singular() {
        let f = FieldSpec::new(5, 1).unwrap();
        let m = Matrix::from_rows(
            &f,
            vec![
                vec![f.from_int(1), f.from_int(2), f.from_int(0)],
                vec![f.from_int(0), f.from_int(1), f.from_int(3)],
                vec![f.from_int(4), f.from_int(0), f.from_int(2)],
            ],
        )
        .unwrap();
        let inv = m.inverse(&f).unwrap();
        assert!(m.mul(&f, &inv).is_identity(&f));
        assert!(inv.mul(&f, &m).is_identity(&f));

        let singular = Matrix::from_rows(
            &f,
            vec![
                vec![f.from_int(1), f.from_int(2)],
                vec![f.from_int(2), f.from_int(4)],
            ],
        )
        .unwrap();
        assert_eq!(singular.det(&f), f.zero());
        assert!(singular.inverse(&f).is_none());
    }

    #[test]
    fn row_action_matches_matrix_product() {
        // (v·M)·N = v·(M·N) exhaustively for a couple of GF(2) matrices.
        let f = FieldSpec::new(2, 1).unwrap();
        let m = Matrix::from_rows(
            &f,
            vec![
                vec![f.from_int(0), f.from_int(1)],
                vec![f.from_int(1), f.from_int(1)],
            ],
        )
        .unwrap();
        let n = Matrix::from_rows(
            &f,
            vec![
                vec![f.from_int(1), f.from_int(1)],
                vec![f.from_int(1), f.from_int(0)],
            ],
        )
        .unwrap();
        let mn = m.mul(&f, &n);
        for enc in 0..4u64 {
            let v = vec![f.from_int(enc & 1), f.from_int(enc >> 1)];
            let step = n.apply_row(&f, &m.apply_row(&f, &v));
            let direct = mn.apply_row(&f, &v);
            assert_eq!(step, direct);
        }
    }

    #[test]
    fn text_round_trip() {
        let f = FieldSpec::new(2, 3).unwrap();
        let t = Matrix::transvection(&f, 2, 1, 0, &f.from_coeffs(vec![0, 1, 1]).unwrap());
        let text = t.to_text();
        assert_eq!(text, "100 000\n011 100");
        let parsed = Matrix::parse_text(&f, &text).unwrap();
        assert_eq!(parsed, t);
        assert!(Matrix::parse_text(&f, "100 000").is_err()); // not square
    }
}
