//! Exact character values by the border-strip (ribbon) recursion.
//!
//! χ_λ on a class is expanded by peeling one cycle length at a time:
//! removing a length-t cycle contributes, for every t-ribbon of the
//! diagram, (−1)^height times the character of the reduced shape on the
//! remaining cycles. Ribbons are enumerated through beta-numbers (shifted
//! first-column hook coordinates), where removing a t-ribbon is exactly
//! replacing a beta-number b by b − t when b − t is free.
//!
//! Each evaluation carries its own write-once memo keyed by (shape, number
//! of cycles still to remove); evaluations are pure and callers may run
//! them in parallel.

use std::collections::HashMap;

use num::{BigInt, One, Zero};

use super::Partition;

/// Beta-numbers of a shape with k rows: strictly decreasing, bᵢ = λᵢ + (k−1−i).
fn beta_numbers(parts: &[usize]) -> Vec<usize> {
    let k = parts.len();
    parts.iter().enumerate().map(|(i, &p)| p + (k - 1 - i)).collect()
}

/// Inverse of [`beta_numbers`]: sorted-descending betas back to a partition.
fn shape_from_betas(betas: &mut Vec<usize>) -> Vec<usize> {
    betas.sort_unstable_by(|a, b| b.cmp(a));
    let k = betas.len();
    let mut parts: Vec<usize> = betas
        .iter()
        .enumerate()
        .map(|(i, &b)| b - (k - 1 - i))
        .collect();
    while parts.last() == Some(&0) {
        parts.pop();
    }
    parts
}

fn recurse(
    parts: &[usize],
    cycles: &[usize],
    memo: &mut HashMap<(Vec<usize>, usize), BigInt>,
) -> BigInt {
    if cycles.is_empty() {
        // The shape has shrunk to nothing exactly when all cycles are used.
        debug_assert!(parts.is_empty());
        return BigInt::one();
    }
    let key = (parts.to_vec(), cycles.len());
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let t = cycles[0];
    let rest = &cycles[1..];
    let betas = beta_numbers(parts);
    let mut total = BigInt::zero();
    for (i, &b) in betas.iter().enumerate() {
        if b < t || betas.contains(&(b - t)) {
            continue;
        }
        // Height of the ribbon = number of betas strictly between b−t and b.
        let height = betas.iter().filter(|&&x| b - t < x && x < b).count();
        let mut next = betas.clone();
        next[i] = b - t;
        let sub = shape_from_betas(&mut next);
        let term = recurse(&sub, rest, memo);
        if height % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    memo.insert(key, total.clone());
    total
}

/// Exact χ_λ on the class with the given cycle type (fixed points included
/// as length-1 parts). Both arguments must partition the same n.
pub fn character_value(lambda: &Partition, cycle_type: &Partition) -> BigInt {
    debug_assert_eq!(lambda.n(), cycle_type.n());
    let mut memo = HashMap::new();
    recurse(lambda.parts(), cycle_type.parts(), &mut memo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{classes, partitions, ClassSpec};
    use num::BigUint;

    #[test]
    fn beta_round_trip() {
        for lambda in partitions(9).unwrap() {
            let mut b = beta_numbers(lambda.parts());
            assert!(b.windows(2).all(|w| w[0] > w[1]));
            assert_eq!(shape_from_betas(&mut b), lambda.parts());
        }
    }

    #[test]
    fn sign_character_is_the_parity() {
        // χ_{[1ⁿ]} on a class is the sign of its permutations:
        // (−1)^{n − #cycles}.
        for n in 2..=7 {
            let sign = Partition::new(vec![1; n]).unwrap();
            for class in classes(n).unwrap() {
                let parity = (n - class.cycle_type.len()) % 2;
                let expected = if parity == 0 { BigInt::one() } else { -BigInt::one() };
                assert_eq!(
                    character_value(&sign, &class.cycle_type),
                    expected,
                    "class {}",
                    class.cycle_type
                );
            }
        }
    }

    #[test]
    fn trivial_character_is_constant_one() {
        for n in 1..=7 {
            let triv = Partition::new(vec![n]).unwrap();
            for class in classes(n).unwrap() {
                assert_eq!(character_value(&triv, &class.cycle_type), BigInt::one());
            }
        }
    }

    #[test]
    fn standard_character_counts_fixed_points_minus_one() {
        for n in 3..=8 {
            let std_rep = Partition::new(vec![n - 1, 1]).unwrap();
            for class in classes(n).unwrap() {
                let fixed = (class.n() - class.support) as i64;
                assert_eq!(
                    character_value(&std_rep, &class.cycle_type),
                    BigInt::from(fixed - 1),
                    "class {}",
                    class.cycle_type
                );
            }
        }
    }

    #[test]
    fn hook_characters_on_full_cycles_alternate() {
        // On an n-cycle, χ_λ = (−1)^k for the hook λ = [n−k, 1^k] and 0
        // for every non-hook shape.
        for n in 4..=9 {
            let cycle = ClassSpec::from_cycle_type(Partition::new(vec![n]).unwrap());
            for lambda in partitions(n).unwrap() {
                let value = character_value(&lambda, &cycle.cycle_type);
                let is_hook = lambda.parts()[1..].iter().all(|&p| p == 1);
                if is_hook {
                    let k = lambda.len() - 1;
                    let expected = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                    assert_eq!(value, expected, "hook {lambda}");
                } else {
                    assert_eq!(value, BigInt::zero(), "non-hook {lambda}");
                }
            }
        }
    }

    #[test]
    fn conjugating_the_partition_multiplies_by_the_sign() {
        for n in 2..=7 {
            for lambda in partitions(n).unwrap() {
                let conj = lambda.conjugate();
                for class in classes(n).unwrap() {
                    let parity = (n - class.cycle_type.len()) % 2;
                    let a = character_value(&lambda, &class.cycle_type);
                    let b = character_value(&conj, &class.cycle_type);
                    let expected = if parity == 0 { b.clone() } else { -b.clone() };
                    assert_eq!(a, expected, "λ = {lambda}, class {}", class.cycle_type);
                }
            }
        }
    }

    #[test]
    fn identity_column_reproduces_hook_length_dimensions() {
        for n in 1..=10 {
            let id = Partition::new(vec![1; n]).unwrap();
            for lambda in partitions(n).unwrap() {
                let chi = character_value(&lambda, &id);
                assert_eq!(
                    BigUint::try_from(chi).unwrap(),
                    lambda.dimension(),
                    "λ = {lambda}"
                );
            }
        }
    }
}
