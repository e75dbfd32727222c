//! Exact character theory of the symmetric group: partitions, dimensions by
//! hook lengths, exact character values by border-strip recursion, the
//! normalized-character decay scan, and an explicit-representation oracle
//! for cross-validation.
//!
//! All character arithmetic is exact (big integers/rationals); floating
//! point appears only in the explicit-representation oracle and in the
//! decay-scan fit.

pub mod mn;
pub mod scan;
pub mod young;

use std::fmt;

use num::{BigInt, BigRational, BigUint, One};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bsgs::factorial;
use crate::error::{LabError, Result};

/// Partition enumeration cap (the list grows sub-exponentially but the
/// downstream tables do not).
pub const PARTITIONS_N_CAP: usize = 40;
/// Full-table computations are capped here; entries stay exact throughout.
pub const TABLE_N_CAP: usize = 16;

// ---------------------------------------------------------------------------
// Partitions
// ---------------------------------------------------------------------------

/// A partition of n: weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Partition> {
        if parts.iter().any(|&p| p == 0) {
            return Err(LabError::Invalid("partition parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(LabError::Invalid(
                "partition parts must be weakly decreasing".into(),
            ));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// The integer being partitioned.
    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Largest part; 0 for the empty partition.
    pub fn first(&self) -> usize {
        self.parts.first().copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Conjugate (transposed diagram) partition.
    pub fn conjugate(&self) -> Partition {
        let rows = self.parts.len();
        let cols = self.first();
        let mut parts = Vec::with_capacity(cols);
        for c in 0..cols {
            parts.push((0..rows).take_while(|&r| self.parts[r] > c).count());
        }
        Partition { parts }
    }

    /// Hook length of the cell (r, c), 0-indexed.
    fn hook(&self, conj: &Partition, r: usize, c: usize) -> usize {
        (self.parts[r] - c) + (conj.parts[c] - r) - 1
    }

    /// Number of standard Young tableaux, by the hook length formula.
    pub fn dimension(&self) -> BigUint {
        let conj = self.conjugate();
        let mut denom = BigUint::one();
        for r in 0..self.parts.len() {
            for c in 0..self.parts[r] {
                denom *= BigUint::from(self.hook(&conj, r, c));
            }
        }
        factorial(self.n()) / denom
    }

    /// Multiplicity of each part value, as (value, count) pairs.
    fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((v, c)) if *v == p => *c += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Parses the "3+2+1" form.
    pub fn parse(text: &str) -> Result<Partition> {
        let parts: Result<Vec<usize>> = text
            .split('+')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|e| LabError::Invalid(format!("bad partition part {t:?}: {e}")))
            })
            .collect();
        Partition::new(parts?)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        let text: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", text.join("+"))
    }
}

/// All partitions of n in lexicographically descending order ([n] first,
/// the all-ones partition last).
pub fn partitions(n: usize) -> Result<Vec<Partition>> {
    if n < 1 || n > PARTITIONS_N_CAP {
        return Err(LabError::Invalid(format!(
            "partition enumeration is supported for 1 ≤ n ≤ {PARTITIONS_N_CAP}, got {n}"
        )));
    }
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    fn rec(remaining: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition { parts: prefix.clone() });
            return;
        }
        for p in (1..=remaining.min(max_part)).rev() {
            prefix.push(p);
            rec(remaining - p, p, prefix, out);
            prefix.pop();
        }
    }
    rec(n, n, &mut prefix, &mut out);
    Ok(out)
}

// ---------------------------------------------------------------------------
// Conjugacy classes
// ---------------------------------------------------------------------------

/// A conjugacy class of Sym(n): its cycle type, exact size, and support
/// (number of non-fixed points).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSpec {
    pub cycle_type: Partition,
    pub size: BigUint,
    pub support: usize,
}

impl ClassSpec {
    pub fn from_cycle_type(cycle_type: Partition) -> ClassSpec {
        let n = cycle_type.n();
        // |class| = n! / z, z = ∏ value^count · count!.
        let mut z = BigUint::one();
        for (value, count) in cycle_type.multiplicities() {
            z *= num::pow::pow(BigUint::from(value), count);
            z *= factorial(count);
        }
        let size = factorial(n) / &z;
        let support = n - cycle_type.parts.iter().filter(|&&p| p == 1).count();
        ClassSpec { cycle_type, size, support }
    }

    pub fn n(&self) -> usize {
        self.cycle_type.n()
    }

    pub fn is_identity(&self) -> bool {
        self.support == 0
    }

    /// z_μ = n!/|class|, the centralizer order (always an exact integer).
    pub fn centralizer_order(&self) -> BigUint {
        factorial(self.n()) / &self.size
    }
}

/// All conjugacy classes of Sym(n), ordered like [`partitions`].
pub fn classes(n: usize) -> Result<Vec<ClassSpec>> {
    Ok(partitions(n)?.into_iter().map(ClassSpec::from_cycle_type).collect())
}

// ---------------------------------------------------------------------------
// Character values
// ---------------------------------------------------------------------------

/// An exact character value χ_λ(B).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterValue {
    pub value: BigInt,
    pub partition: Partition,
    pub class: ClassSpec,
}

/// Exact χ_λ on the class with the given cycle type.
pub fn character(lambda: &Partition, class: &ClassSpec) -> Result<CharacterValue> {
    if lambda.n() != class.n() {
        return Err(LabError::Invalid(format!(
            "partition of {} evaluated on a class of Sym({})",
            lambda.n(),
            class.n()
        )));
    }
    let value = mn::character_value(lambda, &class.cycle_type);
    Ok(CharacterValue { value, partition: lambda.clone(), class: class.clone() })
}

/// χ_λ(B) / dim λ as an exact rational (lies in [−1, 1]).
pub fn normalized_character(lambda: &Partition, class: &ClassSpec) -> Result<BigRational> {
    let chi = character(lambda, class)?;
    let dim = BigInt::from(lambda.dimension());
    Ok(BigRational::new(chi.value, dim))
}

// ---------------------------------------------------------------------------
// Full tables
// ---------------------------------------------------------------------------

/// The full exact character table of Sym(n): rows are partitions, columns
/// are classes, both in the [`partitions`] order.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    n: usize,
    partitions: Vec<Partition>,
    classes: Vec<ClassSpec>,
    /// values[row][col] = χ_{partitions[row]}(classes[col]).
    values: Vec<Vec<BigInt>>,
}

impl CharacterTable {
    /// Computes the table; rows are filled in parallel, each row with its
    /// own write-once memo (results are pure values).
    pub fn build(n: usize) -> Result<CharacterTable> {
        if n > TABLE_N_CAP {
            return Err(LabError::Budget(format!(
                "character tables are computed for n ≤ {TABLE_N_CAP}, got {n}"
            )));
        }
        let partitions = partitions(n)?;
        let classes = classes(n)?;
        let values: Vec<Vec<BigInt>> = partitions
            .par_iter()
            .map(|lambda| {
                classes
                    .iter()
                    .map(|b| mn::character_value(lambda, &b.cycle_type))
                    .collect()
            })
            .collect();
        Ok(CharacterTable { n, partitions, classes, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn classes(&self) -> &[ClassSpec] {
        &self.classes
    }

    pub fn value(&self, row: usize, col: usize) -> &BigInt {
        &self.values[row][col]
    }

    /// CSV export: header row of cycle types, then one row per partition
    /// with exact integer entries.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("partition");
        for b in &self.classes {
            out.push(',');
            out.push_str(&b.cycle_type.to_string());
        }
        out.push('\n');
        for (row, lambda) in self.partitions.iter().enumerate() {
            out.push_str(&lambda.to_string());
            for col in 0..self.classes.len() {
                out.push(',');
                out.push_str(&self.values[row][col].to_string());
            }
            out.push('\n');
        }
        out
    }
}
