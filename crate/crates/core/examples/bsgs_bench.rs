//! Timing smoke test for chain construction at cube-family scale.

use expanderlab::bsgs::{factorial, Bsgs};
use expanderlab::perm::Permutation;
use num::BigUint;

fn main() {
    for n in [49usize, 343] {
        let c3 = Permutation::from_cycles(n, &[vec![0usize, 1, 2]]).unwrap();
        let full: Vec<usize> = (0..n).collect();
        let cyc = Permutation::from_cycles(n, &[full]).unwrap();
        let target = factorial(n) / BigUint::from(2u32);

        let start = std::time::Instant::now();
        let b = Bsgs::build_with_target(&[c3, cyc], 0, Some(target)).unwrap();
        println!(
            "degree {n}: order has {} digits, {} strong gens, base length {}, early_stop={}, {:?}",
            b.order().to_string().len(),
            b.strong_generator_count(),
            b.base().len(),
            b.early_stopped(),
            start.elapsed()
        );
        assert!(b.is_alternating());
    }
}
