//! Exhaustive light-propagation simulation.
//!
//! A pulse enters node 0 with intensity 1. At every node a splitter sends
//! half of each beam down the take arc and half down the skip arc, and beams
//! that reach the next node at the same moment superpose. Propagating layer
//! by layer keeps each node's beam list sorted by moment, so coalescing is a
//! linear merge and the whole device costs `O(2^n)`.
//!
//! Work is split into aligned mask blocks: a block fixes the choices of the
//! high layers and propagates the low layers from scratch. Any mask range
//! decomposes into such blocks, which is what [`Simulator::simulate_range`]
//! and [`Simulator::sweep`] build on.

use std::fmt;
use std::ops::Range;

use log::warn;
use rayon::prelude::*;

use crate::device::{ArcPair, DelayDevice, DeviceKind};
use crate::error::{Error, Result};
use crate::intensity::DyadicIntensity;
use crate::types::{ExactMoment, SubsetMask};

pub const DEFAULT_SIMULATION_CAP: u32 = 28;
/// Set-splitting devices above this size get their timeline generated from
/// the power-of-two structure instead of by propagation.
pub const DEFAULT_ANALYTIC_ABOVE: u32 = 24;
pub const DEFAULT_BLOCK_BITS: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub cap: u32,
    pub analytic_above: u32,
    pub block_bits: u32,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            cap: DEFAULT_SIMULATION_CAP,
            analytic_above: DEFAULT_ANALYTIC_ABOVE,
            block_bits: DEFAULT_BLOCK_BITS,
        }
    }
}

impl SimConfig {
    pub fn with_cap(mut self, cap: u32) -> Self {
        if cap > DEFAULT_SIMULATION_CAP {
            warn!("simulation cap raised to {cap}; enumerating 2^{cap} paths may take a long time");
        }
        self.cap = cap;
        self
    }
}

/// One coalesced arrival at the destination node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ArrivalEvent {
    pub moment: ExactMoment,
    pub intensity: DyadicIntensity,
    /// Number of source-to-destination paths arriving at this moment.
    pub paths: u64,
    /// Smallest take-mask among those paths.
    pub witness: SubsetMask,
}

/// Arrivals sorted by strictly increasing core moment.
///
/// A timeline built from a mask range rather than the whole device is
/// partial: its intensities are still shares of the full source pulse, so
/// they sum to less than one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArrivalTimeline {
    n: u32,
    events: Vec<ArrivalEvent>,
}

impl ArrivalTimeline {
    /// Wraps hand-built events; moments must strictly increase.
    pub fn from_events(n: u32, events: Vec<ArrivalEvent>) -> Result<Self> {
        if events
            .windows(2)
            .any(|w| w[0].moment.core >= w[1].moment.core)
        {
            return Err(Error::param(
                "events",
                "moments must be strictly increasing",
            ));
        }
        Ok(ArrivalTimeline { n, events })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn events(&self) -> &[ArrivalEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn total_intensity(&self) -> DyadicIntensity {
        self.events.iter().map(|e| e.intensity).sum()
    }

    pub fn total_paths(&self) -> u64 {
        self.events.iter().map(|e| e.paths).sum()
    }

    pub fn event_at(&self, core: u64) -> Option<&ArrivalEvent> {
        self.events
            .binary_search_by_key(&core, |e| e.moment.core)
            .ok()
            .map(|i| &self.events[i])
    }

    /// Superposes two timelines of the same device. Exact, commutative and
    /// associative, so partial results can be merged in any order.
    pub fn merge(&self, other: &ArrivalTimeline) -> Result<ArrivalTimeline> {
        if self.n != other.n {
            return Err(Error::param(
                "timeline",
                format!("cannot merge timelines of sizes {} and {}", self.n, other.n),
            ));
        }
        let mut events = Vec::with_capacity(self.events.len() + other.events.len());
        let (mut a, mut b) = (
            self.events.iter().peekable(),
            other.events.iter().peekable(),
        );
        loop {
            let next = match (a.peek(), b.peek()) {
                (Some(x), Some(y)) if x.moment.core == y.moment.core => {
                    let (x, y) = (a.next().unwrap(), b.next().unwrap());
                    ArrivalEvent {
                        moment: x.moment,
                        intensity: x.intensity + y.intensity,
                        paths: x.paths + y.paths,
                        witness: x.witness.min(y.witness),
                    }
                }
                (Some(x), Some(y)) if x.moment.core < y.moment.core => *a.next().unwrap(),
                (Some(_), Some(_)) => *b.next().unwrap(),
                (Some(_), None) => *a.next().unwrap(),
                (None, Some(_)) => *b.next().unwrap(),
                (None, None) => break,
            };
            events.push(next);
        }
        Ok(ArrivalTimeline { n: self.n, events })
    }

    fn from_beams(n: u32, beams: &[Beam]) -> Self {
        ArrivalTimeline {
            n,
            events: beams
                .iter()
                .map(|b| ArrivalEvent {
                    moment: ExactMoment::new(b.core, n),
                    intensity: DyadicIntensity::from_paths(b.paths, n),
                    paths: b.paths,
                    witness: SubsetMask(b.witness),
                })
                .collect(),
        }
    }
}

impl fmt::Display for ArrivalTimeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "moment\tintensity\tpaths\twitness")?;
        for e in &self.events {
            writeln!(
                f,
                "{}\t{}\t{}\t{}",
                e.moment, e.intensity, e.paths, e.witness
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Beam {
    core: u64,
    paths: u64,
    witness: u64,
}

/// Masks `start .. start + 2^bits`; `start` is a multiple of `2^bits`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Block {
    start: u64,
    bits: u32,
}

fn decompose(range: Range<u64>, max_bits: u32) -> Vec<Block> {
    let mut blocks = Vec::new();
    let mut lo = range.start;
    while lo < range.end {
        let align = if lo == 0 { 63 } else { lo.trailing_zeros() };
        let fit = 63 - (range.end - lo).leading_zeros();
        let bits = align.min(fit).min(max_bits);
        blocks.push(Block { start: lo, bits });
        lo += 1 << bits;
    }
    blocks
}

/// Merges the skip and take continuations of `beams` into `out`.
fn split_layer(beams: &[Beam], layer: ArcPair, bit: u64, out: &mut Vec<Beam>) {
    out.clear();
    out.reserve(beams.len() * 2);
    let skip = beams.iter().map(|b| Beam {
        core: b.core + layer.skip_delay,
        ..*b
    });
    let take = beams.iter().map(|b| Beam {
        core: b.core + layer.take_delay,
        witness: b.witness | bit,
        ..*b
    });
    let (mut skip, mut take) = (skip.peekable(), take.peekable());
    loop {
        let next = match (skip.peek(), take.peek()) {
            (Some(s), Some(t)) if s.core == t.core => {
                let (s, t) = (skip.next().unwrap(), take.next().unwrap());
                Beam {
                    core: s.core,
                    paths: s.paths + t.paths,
                    witness: s.witness.min(t.witness),
                }
            }
            (Some(s), Some(t)) if s.core < t.core => skip.next().unwrap(),
            (Some(_), Some(_)) => take.next().unwrap(),
            (Some(_), None) => skip.next().unwrap(),
            (None, Some(_)) => take.next().unwrap(),
            (None, None) => break,
        };
        out.push(next);
    }
}

#[derive(Default)]
struct Buffers {
    beams: Vec<Beam>,
    scratch: Vec<Beam>,
}

fn propagate_block(device: &DelayDevice, block: Block, analytic: bool, buf: &mut Buffers) {
    let layers = device.layers();
    buf.beams.clear();
    if analytic {
        // take delays 2^i make core == mask, one path each
        buf.beams.extend((0..1u64 << block.bits).map(|j| Beam {
            core: block.start + j,
            paths: 1,
            witness: block.start + j,
        }));
        return;
    }
    let offset: u64 = layers
        .iter()
        .enumerate()
        .skip(block.bits as usize)
        .map(|(i, l)| {
            if block.start >> i & 1 == 1 {
                l.take_delay
            } else {
                l.skip_delay
            }
        })
        .sum();
    buf.beams.push(Beam {
        core: offset,
        paths: 1,
        witness: block.start,
    });
    for (i, &layer) in layers.iter().enumerate().take(block.bits as usize) {
        split_layer(&buf.beams, layer, 1 << i, &mut buf.scratch);
        std::mem::swap(&mut buf.beams, &mut buf.scratch);
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Simulator {
    config: SimConfig,
}

impl Simulator {
    pub fn new(config: SimConfig) -> Self {
        Simulator { config }
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    fn check(&self, device: &DelayDevice) -> Result<()> {
        if device.n() > self.config.cap {
            return Err(Error::TooLarge {
                n: device.n(),
                cap: self.config.cap,
            });
        }
        Ok(())
    }

    fn analytic(&self, device: &DelayDevice) -> bool {
        device.kind() == DeviceKind::SetSplitting && device.n() > self.config.analytic_above
    }

    fn blocks(&self, device: &DelayDevice, range: Range<u64>) -> Result<Vec<Block>> {
        self.check(device)?;
        let paths = 1u64 << device.n();
        if range.start > range.end || range.end > paths {
            return Err(Error::param(
                "range",
                format!(
                    "{}..{} not within the 2^{} paths",
                    range.start,
                    range.end,
                    device.n()
                ),
            ));
        }
        Ok(decompose(range, self.config.block_bits.max(1)))
    }

    /// Full arrival timeline of the device.
    pub fn simulate(&self, device: &DelayDevice) -> Result<ArrivalTimeline> {
        self.check(device)?;
        self.simulate_range(device, 0..1u64 << device.n())
    }

    /// Partial timeline of the paths whose take-masks lie in `range`.
    pub fn simulate_range(
        &self,
        device: &DelayDevice,
        range: Range<u64>,
    ) -> Result<ArrivalTimeline> {
        let blocks = self.blocks(device, range)?;
        let n = device.n();
        let analytic = self.analytic(device);
        if let [block] = blocks[..] {
            let mut buf = Buffers::default();
            propagate_block(device, block, analytic, &mut buf);
            return Ok(ArrivalTimeline::from_beams(n, &buf.beams));
        }
        let merged = blocks
            .into_par_iter()
            .map_init(Buffers::default, |buf, block| {
                propagate_block(device, block, analytic, buf);
                ArrivalTimeline::from_beams(n, &buf.beams)
            })
            .reduce(
                || ArrivalTimeline {
                    n,
                    events: Vec::new(),
                },
                |a, b| a.merge(&b).expect("same device"),
            );
        Ok(merged)
    }

    /// Visits the device block by block without holding the whole timeline,
    /// folding each partial timeline through `map` and combining with
    /// `reduce`. Moments that straddle blocks show up in each of them.
    pub fn sweep<T, M, R>(&self, device: &DelayDevice, map: M, reduce: R) -> Result<T>
    where
        T: Send,
        M: Fn(&ArrivalTimeline) -> T + Sync + Send,
        R: Fn(T, T) -> T + Sync + Send,
    {
        let blocks = self.blocks(device, 0..1u64 << device.n())?;
        let n = device.n();
        let analytic = self.analytic(device);
        if let [block] = blocks[..] {
            let mut buf = Buffers::default();
            propagate_block(device, block, analytic, &mut buf);
            return Ok(map(&ArrivalTimeline::from_beams(n, &buf.beams)));
        }
        let out = blocks
            .into_par_iter()
            .map_init(Buffers::default, |buf, block| {
                propagate_block(device, block, analytic, buf);
                map(&ArrivalTimeline::from_beams(n, &buf.beams))
            })
            .reduce_with(reduce)
            .expect("a device has at least one path");
        Ok(out)
    }
}

pub fn simulate(device: &DelayDevice) -> Result<ArrivalTimeline> {
    Simulator::default().simulate(device)
}

/// Outcome of watching a subset-sum device at moment `B + n·ε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Detection {
    pub found: bool,
    pub witness: Option<SubsetMask>,
    pub moment: ExactMoment,
}

pub fn detect_subset_sum(timeline: &ArrivalTimeline, target: u64) -> Detection {
    let witness = timeline.event_at(target).map(|e| e.witness);
    Detection {
        found: witness.is_some(),
        witness,
        moment: ExactMoment::new(target, timeline.n()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::{build_set_splitting_device, build_subset_sum_device};
    use crate::types::SubsetSumInstance;

    fn cores(t: &ArrivalTimeline) -> Vec<(u64, u64)> {
        t.events()
            .iter()
            .map(|e| (e.moment.core, e.paths))
            .collect()
    }

    #[test]
    fn decompose_covers_range_with_aligned_blocks() {
        assert_eq!(decompose(0..16, 16), vec![Block { start: 0, bits: 4 }]);
        assert_eq!(
            decompose(3..11, 16),
            vec![
                Block { start: 3, bits: 0 },
                Block { start: 4, bits: 2 },
                Block { start: 8, bits: 1 },
                Block { start: 10, bits: 0 },
            ]
        );
        assert_eq!(decompose(0..8, 2).len(), 2);
        assert!(decompose(5..5, 4).is_empty());
    }

    #[test]
    fn set_splitting_two_layers() {
        let t = simulate(&build_set_splitting_device(2).unwrap()).unwrap();
        assert_eq!(cores(&t), vec![(0, 1), (1, 1), (2, 1), (3, 1)]);
        for e in t.events() {
            assert_eq!(e.intensity, DyadicIntensity::new(1, 2));
            assert_eq!(e.moment.hops, 2);
            assert_eq!(e.witness.bits(), e.moment.core);
        }
        assert_eq!(t.total_intensity(), DyadicIntensity::ONE);
    }

    #[test]
    fn subset_sum_coalesces_equal_moments() {
        let inst = SubsetSumInstance::new(vec![1, 2], 3).unwrap();
        let t = simulate(&build_subset_sum_device(&inst)).unwrap();
        assert_eq!(cores(&t), vec![(0, 1), (1, 1), (2, 1), (3, 1)]);

        let inst = SubsetSumInstance::new(vec![5, 5, 10], 15).unwrap();
        let t = simulate(&build_subset_sum_device(&inst)).unwrap();
        assert_eq!(cores(&t), vec![(0, 1), (5, 2), (10, 2), (15, 2), (20, 1)]);
        let five = t.event_at(5).unwrap();
        assert_eq!(five.intensity, DyadicIntensity::new(2, 3));
        assert_eq!(five.witness, SubsetMask(0b001));
        assert_eq!(t.event_at(15).unwrap().witness, SubsetMask(0b101));
        assert_eq!(t.total_intensity(), DyadicIntensity::ONE);
    }

    #[test]
    fn detection_at_target() {
        let inst = SubsetSumInstance::new(vec![1, 2], 3).unwrap();
        let t = simulate(&build_subset_sum_device(&inst)).unwrap();
        let d = detect_subset_sum(&t, 3);
        assert!(d.found);
        assert_eq!(d.witness, Some(SubsetMask(0b11)));
        assert_eq!(d.moment, ExactMoment::new(3, 2));
        assert!(!detect_subset_sum(&t, 4).found);

        let inst = SubsetSumInstance::new(vec![7], 3).unwrap();
        let t = simulate(&build_subset_sum_device(&inst)).unwrap();
        assert_eq!(detect_subset_sum(&t, 3).witness, None);
    }

    #[test]
    fn cap_is_enforced() {
        let sim = Simulator::new(SimConfig::default().with_cap(10));
        let err = sim
            .simulate(&build_set_splitting_device(11).unwrap())
            .unwrap_err();
        assert_eq!(err, Error::TooLarge { n: 11, cap: 10 });
        assert_eq!(
            err.to_string(),
            "instance too large to enumerate: n = 11 exceeds cap 10"
        );
        assert!(sim
            .sweep(
                &build_set_splitting_device(11).unwrap(),
                |t| t.len(),
                |a, b| a + b
            )
            .is_err());
    }

    #[test]
    fn analytic_matches_propagation() {
        let dev = build_set_splitting_device(12).unwrap();
        let propagated = Simulator::new(SimConfig {
            block_bits: 5,
            ..SimConfig::default()
        })
        .simulate(&dev)
        .unwrap();
        let analytic = Simulator::new(SimConfig {
            analytic_above: 4,
            block_bits: 5,
            ..SimConfig::default()
        })
        .simulate(&dev)
        .unwrap();
        assert_eq!(propagated, analytic);
    }

    #[test]
    fn small_blocks_match_single_block() {
        let inst = SubsetSumInstance::new(vec![3, 1, 4, 1, 5, 9, 2, 6, 5, 3], 20).unwrap();
        let dev = build_subset_sum_device(&inst);
        let whole = simulate(&dev).unwrap();
        for bits in 1..=10 {
            let sim = Simulator::new(SimConfig {
                block_bits: bits,
                ..SimConfig::default()
            });
            assert_eq!(sim.simulate(&dev).unwrap(), whole, "block_bits = {bits}");
            let paths = sim.sweep(&dev, |t| t.total_paths(), |a, b| a + b).unwrap();
            assert_eq!(paths, 1024);
        }
    }

    #[test]
    fn range_outside_device_is_rejected() {
        let dev = build_set_splitting_device(3).unwrap();
        assert!(Simulator::default().simulate_range(&dev, 0..9).is_err());
        assert!(Simulator::default().simulate_range(&dev, 0..8).is_ok());
        let empty = Simulator::default().simulate_range(&dev, 4..4).unwrap();
        assert!(empty.is_empty());
    }
}
