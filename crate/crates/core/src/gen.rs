//! Seeded random set-splitting instances.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::types::{check_n, SplitInstance, SubsetMask};

fn binomial(n: u32, k: u32) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Family members are drawn uniformly among the nonempty subsets of size at
/// most `max_set_size`. The same arguments always give the same instance.
pub fn generate_split_instance(
    n: u32,
    sets: usize,
    max_set_size: u32,
    seed: u64,
) -> Result<SplitInstance> {
    check_n(n)?;
    if max_set_size == 0 || max_set_size > n {
        return Err(Error::param(
            "max_set_size",
            format!("must lie in [1, {n}], got {max_set_size}"),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let by_size: Vec<u128> = (1..=max_set_size).map(|k| binomial(n, k)).collect();
    let total: u128 = by_size.iter().sum();
    let family = (0..sets)
        .map(|_| {
            let mut pick = rng.random_range(0..total);
            let mut size = 1;
            for &count in &by_size {
                if pick < count {
                    break;
                }
                pick -= count;
                size += 1;
            }
            let bits = index::sample(&mut rng, n as usize, size as usize)
                .iter()
                .fold(0u64, |acc, i| acc | 1 << i);
            SubsetMask(bits)
        })
        .collect();
    SplitInstance::new(n, family)
}
