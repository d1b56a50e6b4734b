//! Brute-force oracles shared by the integration suites. They work on raw
//! `u64` masks and never call into the device, simulator or moment code.

#![allow(dead_code)]

use std::collections::BTreeMap;

pub fn full(n: u32) -> u64 {
    (1u64 << n) - 1
}

/// True when neither `a1` nor its complement holds any member entirely.
pub fn is_split(n: u32, a1: u64, family: &[u64]) -> bool {
    let a2 = full(n) & !a1;
    family.iter().all(|&f| a1 & f != f && a2 & f != f)
}

pub fn split_solutions(n: u32, family: &[u64]) -> Vec<u64> {
    (0..=full(n)).filter(|&m| is_split(n, m, family)).collect()
}

pub fn blocked(n: u32, family: &[u64]) -> Vec<u64> {
    (0..=full(n)).filter(|&m| !is_split(n, m, family)).collect()
}

/// subset sum -> (number of subsets, smallest mask), by summing each mask.
pub fn subset_sums(values: &[u64]) -> BTreeMap<u64, (u64, u64)> {
    let mut out = BTreeMap::new();
    for m in 0..1u64 << values.len() {
        let mut sum = 0;
        for (i, v) in values.iter().enumerate() {
            if m >> i & 1 == 1 {
                sum += v;
            }
        }
        let entry = out.entry(sum).or_insert((0, m));
        entry.0 += 1;
    }
    out
}

pub fn mask_sum(values: &[u64], mask: u64) -> u64 {
    values
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, v)| v)
        .sum()
}
