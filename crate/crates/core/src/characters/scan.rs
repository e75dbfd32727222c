//! Exhaustive normalized-character decay scans.
//!
//! For every partition below the first-row cap and every class above the
//! support floor, the scan checks |χ̄_λ(B)| ≤ base^(c·supp B) with
//! base = max(λ₁/n, λ′₁/n, q), and fits the extremal constants that make
//! the whole table pass. The cap is applied to λ₁ *and* to the conjugate
//! first row λ′₁: conjugate partitions have equal |χ̄| (they differ by the
//! sign character), so a one-sided cap would leave pairs on which no decay
//! at all holds; the two-sided cap is also what picking the larger-first-row
//! representative of each conjugate pair gives.

use num::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{CharacterTable, Partition};
use crate::error::{LabError, Result};
use crate::SCHEMA_VERSION;

/// Scan tables are full character tables; this keeps them tractable.
pub const SCAN_N_CAP: usize = 14;

/// Default first-row cap: n − ⌈n^{1/4}⌉ (the shape of the cutoff the
/// construction needs, scaled to desk-size n).
pub fn default_lambda1_cap(n: usize) -> usize {
    n - (n as f64).powf(0.25).ceil() as usize
}

/// Default class-support floor: n/2.
pub fn default_support_floor(n: usize) -> usize {
    n / 2
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanViolation {
    pub partition: String,
    pub class: String,
    pub abs_normalized_character: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanReport {
    pub schema_version: u32,
    pub n: usize,
    /// Floor constant of the decay base.
    pub q: f64,
    /// The multiplier the pass/fail check was run with (bound base^(c·supp)).
    pub c_checked: f64,
    pub lambda1_cap: usize,
    pub support_floor: usize,
    /// (partition, class) pairs inside the caps.
    pub pairs_in_scope: usize,
    pub violations: Vec<ScanViolation>,
    pub passes: bool,
    /// Minimal c for which every in-scope pair satisfies
    /// |χ̄| ≤ base^(supp/c): the fit the support-floor monotonicity is
    /// about (raising the floor can only shrink it). `None` when some
    /// in-scope pair has |χ̄| = 1, which no decay constant satisfies.
    pub fitted_c: Option<f64>,
    /// Largest multiplier for which every in-scope pair satisfies
    /// |χ̄| ≤ base^(c·supp); the reciprocal of `fitted_c`.
    pub fitted_coefficient: Option<f64>,
    /// The pair where the fit is tight.
    pub binding_partition: Option<String>,
    pub binding_class: Option<String>,
}

impl ScanReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<ScanReport> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Runs the decay scan on the exact character table of Sym(n).
pub fn roichman_bound_scan(
    n: usize,
    c: f64,
    q: f64,
    lambda1_cap: usize,
    support_floor: usize,
) -> Result<ScanReport> {
    if n < 2 || n > SCAN_N_CAP {
        return Err(LabError::Invalid(format!(
            "scans run for 2 ≤ n ≤ {SCAN_N_CAP}, got {n}"
        )));
    }
    if !(c > 0.0) {
        return Err(LabError::Invalid("the exponent multiplier c must be positive".into()));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(LabError::Invalid(format!("q must lie strictly in (0, 1), got {q}")));
    }
    let table = CharacterTable::build(n)?;
    let in_scope: Vec<(usize, &Partition)> = table
        .partitions()
        .iter()
        .enumerate()
        .filter(|(_, l)| l.first() <= lambda1_cap && l.conjugate().first() <= lambda1_cap)
        .collect();

    let mut pairs_in_scope = 0;
    let mut violations = Vec::new();
    // Per-pair extremal multipliers: the fit keeps the smallest.
    let mut coefficient: Option<f64> = None;
    let mut unit_pair_in_scope = false;
    let mut binding: Option<(String, String)> = None;

    for (row, lambda) in &in_scope {
        let dim = lambda.dimension().to_f64().ok_or_else(|| {
            LabError::Invalid("dimension exceeds the float range".into())
        })?;
        let base = (lambda.first() as f64 / n as f64)
            .max(lambda.conjugate().first() as f64 / n as f64)
            .max(q);
        for (col, class) in table.classes().iter().enumerate() {
            if class.support < support_floor {
                continue;
            }
            pairs_in_scope += 1;
            let chi = table.value(*row, col).to_f64().ok_or_else(|| {
                LabError::Invalid("character value exceeds the float range".into())
            })?;
            let abs_norm = (chi / dim).abs();
            let s = class.support as f64;
            let bound = base.powf(c * s);
            if abs_norm > bound * (1.0 + 1e-12) {
                violations.push(ScanViolation {
                    partition: lambda.to_string(),
                    class: class.cycle_type.to_string(),
                    abs_normalized_character: abs_norm,
                    bound,
                });
            }
            if abs_norm == 0.0 || class.support == 0 {
                continue;
            }
            if abs_norm >= 1.0 {
                unit_pair_in_scope = true;
                continue;
            }
            // Largest multiplier this pair tolerates: c* with
            // base^(c*·s) = |χ̄|, i.e. c* = ln|χ̄| / (s·ln base).
            let pair_cap = abs_norm.ln() / (s * base.ln());
            if coefficient.is_none_or(|best| pair_cap < best) {
                coefficient = Some(pair_cap);
                binding = Some((lambda.to_string(), class.cycle_type.to_string()));
            }
        }
    }

    let (fitted_c, fitted_coefficient) = if unit_pair_in_scope {
        (None, None)
    } else {
        (coefficient.map(|c| 1.0 / c), coefficient)
    };
    Ok(ScanReport {
        schema_version: SCHEMA_VERSION,
        n,
        q,
        c_checked: c,
        lambda1_cap,
        support_floor,
        pairs_in_scope,
        passes: violations.is_empty(),
        violations,
        fitted_c,
        fitted_coefficient,
        binding_partition: binding.as_ref().map(|b| b.0.clone()),
        binding_class: binding.map(|b| b.1),
    })
}
