//! Decision procedures.
//!
//! [`solve_optical`] runs the device pipeline: build the power-of-two device,
//! simulate every arrival, and classify each arrival moment against the
//! blocked set. [`solve_oracle`] and [`subset_sum_oracle`] are plain
//! enumerations over masks that never touch devices, timelines or moment
//! sets; they exist to check the pipeline.

use std::fmt;

use crate::device::{build_set_splitting_device, build_subset_sum_device};
use crate::error::{Error, Result};
use crate::moments::{blocked_moments_full, choose_watch, decode_moment};
use crate::sim::{detect_subset_sum, SimConfig, Simulator};
use crate::types::{full_bits, Partition, SplitInstance, SubsetMask, SubsetSumInstance};

pub const DEFAULT_ORACLE_CAP: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decision {
    Solvable,
    Unsolvable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Optical,
    Oracle,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Optical => "optical",
            Method::Oracle => "oracle",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SplitAnswer {
    pub decision: Decision,
    /// Present iff solvable.
    pub partition: Option<Partition>,
    /// The moment encoding `partition.a1`.
    pub solution_moment: Option<u64>,
    pub method: Method,
}

impl SplitAnswer {
    fn solvable(a1: SubsetMask, n: u32, method: Method) -> Result<Self> {
        Ok(SplitAnswer {
            decision: Decision::Solvable,
            partition: Some(Partition::from_first(a1, n)?),
            solution_moment: Some(a1.bits()),
            method,
        })
    }

    fn unsolvable(method: Method) -> Self {
        SplitAnswer {
            decision: Decision::Unsolvable,
            partition: None,
            solution_moment: None,
            method,
        }
    }

    pub fn is_solvable(&self) -> bool {
        self.decision == Decision::Solvable
    }
}

impl fmt::Display for SplitAnswer {
    /// `SPLIT A1={1} A2={2,3,4} moment=1` or `NO-SPLIT`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.partition, self.solution_moment) {
            (Some(p), Some(k)) => write!(f, "SPLIT A1={} A2={} moment={}", p.a1, p.a2, k),
            _ => f.write_str("NO-SPLIT"),
        }
    }
}

pub fn solve_optical(inst: &SplitInstance) -> Result<SplitAnswer> {
    solve_optical_with(inst, &SimConfig::default())
}

/// Smallest arrival moment whose decoded split is valid, or unsolvable.
pub fn solve_optical_with(inst: &SplitInstance, config: &SimConfig) -> Result<SplitAnswer> {
    let sim = Simulator::new(*config);
    let device = build_set_splitting_device(inst.n())?;
    if device.n() > config.cap {
        return Err(Error::TooLarge {
            n: device.n(),
            cap: config.cap,
        });
    }
    let watch = choose_watch(&blocked_moments_full(inst)?)?;
    if watch.no_solution() {
        return Ok(SplitAnswer::unsolvable(Method::Optical));
    }
    let first = sim.sweep(
        &device,
        |timeline| {
            timeline
                .events()
                .iter()
                .find(|e| watch.is_solution(e.moment.core))
                .map(|e| {
                    debug_assert_eq!(e.witness.bits(), e.moment.core);
                    e.moment.core
                })
        },
        |a, b| match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        },
    )?;
    match first {
        Some(k) => SplitAnswer::solvable(decode_moment(k, inst.n())?, inst.n(), Method::Optical),
        None => Ok(SplitAnswer::unsolvable(Method::Optical)),
    }
}

fn oracle_check(inst: &SplitInstance, cap: u32) -> Result<()> {
    if inst.n() > cap {
        return Err(Error::TooLarge { n: inst.n(), cap });
    }
    Ok(())
}

fn splits(mask: u64, family: &[SubsetMask]) -> bool {
    family.iter().all(|f| {
        let inside = mask & f.bits();
        inside != f.bits() && inside != 0
    })
}

pub fn solve_oracle(inst: &SplitInstance) -> Result<SplitAnswer> {
    solve_oracle_with_cap(inst, DEFAULT_ORACLE_CAP)
}

/// First valid split in ascending mask order by direct enumeration.
pub fn solve_oracle_with_cap(inst: &SplitInstance, cap: u32) -> Result<SplitAnswer> {
    oracle_check(inst, cap)?;
    match (0..=full_bits(inst.n())).find(|&m| splits(m, inst.family())) {
        Some(m) => SplitAnswer::solvable(SubsetMask(m), inst.n(), Method::Oracle),
        None => Ok(SplitAnswer::unsolvable(Method::Oracle)),
    }
}

/// Every valid `A_1`, ascending.
pub fn oracle_solution_masks(inst: &SplitInstance) -> Result<Vec<SubsetMask>> {
    oracle_check(inst, DEFAULT_ORACLE_CAP)?;
    Ok((0..=full_bits(inst.n()))
        .filter(|&m| splits(m, inst.family()))
        .map(SubsetMask)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsetSumAnswer {
    pub found: bool,
    /// Smallest mask whose values sum to the target.
    pub witness: Option<SubsetMask>,
}

impl fmt::Display for SubsetSumAnswer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.witness {
            Some(w) => write!(f, "SUBSET {w}"),
            None => f.write_str("NO-SUBSET"),
        }
    }
}

pub fn solve_subset_sum(inst: &SubsetSumInstance) -> Result<SubsetSumAnswer> {
    solve_subset_sum_with(inst, &SimConfig::default())
}

/// Device pipeline: watch the destination at moment `B + n·ε`.
pub fn solve_subset_sum_with(
    inst: &SubsetSumInstance,
    config: &SimConfig,
) -> Result<SubsetSumAnswer> {
    let device = build_subset_sum_device(inst);
    let witness = Simulator::new(*config).sweep(
        &device,
        |timeline| detect_subset_sum(timeline, inst.target()).witness,
        |a, b| match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        },
    )?;
    Ok(SubsetSumAnswer {
        found: witness.is_some(),
        witness,
    })
}

/// Direct enumeration of all subsets.
pub fn subset_sum_oracle(inst: &SubsetSumInstance) -> Result<SubsetSumAnswer> {
    if inst.n() > DEFAULT_ORACLE_CAP {
        return Err(Error::TooLarge {
            n: inst.n(),
            cap: DEFAULT_ORACLE_CAP,
        });
    }
    let witness = (0..=full_bits(inst.n()))
        .map(SubsetMask)
        .find(|&m| inst.subset_sum(m) == inst.target());
    Ok(SubsetSumAnswer {
        found: witness.is_some(),
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worked() -> SplitInstance {
        SplitInstance::new(4, vec![SubsetMask(0b0011), SubsetMask(0b0101)]).unwrap()
    }

    #[test]
    fn optical_worked_instance() {
        let ans = solve_optical(&worked()).unwrap();
        assert_eq!(ans.decision, Decision::Solvable);
        assert_eq!(ans.solution_moment, Some(1));
        let p = ans.partition.unwrap();
        assert_eq!(p.a1, SubsetMask::from_elements([1]));
        assert_eq!(p.a2, SubsetMask::from_elements([2, 3, 4]));
        assert_eq!(ans.to_string(), "SPLIT A1={1} A2={2,3,4} moment=1");
    }

    #[test]
    fn singleton_is_unsolvable() {
        let inst = SplitInstance::new(3, vec![SubsetMask(0b001)]).unwrap();
        let ans = solve_optical(&inst).unwrap();
        assert_eq!(ans.decision, Decision::Unsolvable);
        assert_eq!(ans.to_string(), "NO-SPLIT");
        assert_eq!(solve_oracle(&inst).unwrap().decision, Decision::Unsolvable);
    }

    #[test]
    fn empty_family_splits_at_zero() {
        let inst = SplitInstance::new(4, vec![]).unwrap();
        let ans = solve_optical(&inst).unwrap();
        assert_eq!(ans.solution_moment, Some(0));
        assert_eq!(ans.partition.unwrap().a1, SubsetMask::EMPTY);
    }

    #[test]
    fn oracle_examples() {
        let ans = solve_oracle(&worked()).unwrap();
        assert_eq!(ans.solution_moment, Some(1));
        assert_eq!(ans.method, Method::Oracle);
        assert_eq!(
            oracle_solution_masks(&worked()).unwrap(),
            vec![SubsetMask(1), SubsetMask(6), SubsetMask(9), SubsetMask(14)]
        );
        let pair = SplitInstance::new(2, vec![SubsetMask(0b11)]).unwrap();
        let ans = solve_oracle(&pair).unwrap();
        assert_eq!(ans.solution_moment, Some(1));
        assert_eq!(ans.partition.unwrap().a2, SubsetMask(0b10));
    }

    #[test]
    fn caps_are_enforced() {
        let big = SplitInstance::new(25, vec![]).unwrap();
        assert_eq!(
            solve_oracle(&big).unwrap_err(),
            Error::TooLarge { n: 25, cap: 24 }
        );
        let cfg = SimConfig::default().with_cap(8);
        let mid = SplitInstance::new(9, vec![]).unwrap();
        assert_eq!(
            solve_optical_with(&mid, &cfg).unwrap_err(),
            Error::TooLarge { n: 9, cap: 8 }
        );
    }

    #[test]
    fn subset_sum_examples() {
        let yes = solve_subset_sum(&SubsetSumInstance::new(vec![1, 2], 3).unwrap()).unwrap();
        assert_eq!(yes.witness, Some(SubsetMask(0b11)));
        let no = solve_subset_sum(&SubsetSumInstance::new(vec![1, 2], 4).unwrap()).unwrap();
        assert!(!no.found);
        let even = solve_subset_sum(&SubsetSumInstance::new(vec![2, 4], 5).unwrap()).unwrap();
        assert!(!even.found);
        let single = solve_subset_sum(&SubsetSumInstance::new(vec![7], 7).unwrap()).unwrap();
        assert_eq!(single.witness, Some(SubsetMask(0b1)));
        assert_eq!(single.to_string(), "SUBSET {1}");

        let dup = SubsetSumInstance::new(vec![5, 5, 10], 15).unwrap();
        assert_eq!(
            solve_subset_sum(&dup).unwrap(),
            subset_sum_oracle(&dup).unwrap()
        );
    }

    #[test]
    fn sweep_blocks_do_not_change_answers() {
        let inst = SplitInstance::new(
            12,
            vec![
                SubsetMask(0b1100_0000_0001),
                SubsetMask(0b0000_0011_0000),
                SubsetMask(0b1010_1010_1010),
            ],
        )
        .unwrap();
        let reference = solve_optical(&inst).unwrap();
        for bits in [1, 3, 7, 12] {
            let cfg = SimConfig {
                block_bits: bits,
                ..SimConfig::default()
            };
            assert_eq!(solve_optical_with(&inst, &cfg).unwrap(), reference);
        }
        assert_eq!(
            solve_oracle(&inst).unwrap().solution_moment,
            reference.solution_moment
        );
    }
}
