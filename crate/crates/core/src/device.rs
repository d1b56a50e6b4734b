//! Delay devices in layered normal form.
//!
//! Both devices are a chain of `n + 1` nodes. Between node `i` and `i + 1`
//! sit two parallel cables: a "take" arc that delays the beam by the layer's
//! base delay and a "skip" arc of base delay zero. Every arc also carries the
//! uniform ε pad, which is not stored here (see [`ExactMoment`]).
//!
//! [`ExactMoment`]: crate::types::ExactMoment

use std::fmt;

use crate::error::{Error, Result};
use crate::types::{check_n, SubsetMask, SubsetSumInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeviceKind {
    SubsetSum,
    SetSplitting,
}

impl fmt::Display for DeviceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeviceKind::SubsetSum => "subset-sum",
            DeviceKind::SetSplitting => "set-splitting",
        })
    }
}

/// The two parallel arcs of one layer, in base delay units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ArcPair {
    pub take_delay: u64,
    pub skip_delay: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DelayDevice {
    kind: DeviceKind,
    layers: Vec<ArcPair>,
    target: Option<u64>,
}

/// Layer `i` (1-based) takes `2^(i-1)`, so a path's core delay is its take-mask.
pub fn build_set_splitting_device(n: u32) -> Result<DelayDevice> {
    check_n(n)?;
    Ok(DelayDevice {
        kind: DeviceKind::SetSplitting,
        layers: (0..n)
            .map(|i| ArcPair {
                take_delay: 1 << i,
                skip_delay: 0,
            })
            .collect(),
        target: None,
    })
}

pub fn build_subset_sum_device(inst: &SubsetSumInstance) -> DelayDevice {
    DelayDevice {
        kind: DeviceKind::SubsetSum,
        layers: inst
            .values()
            .iter()
            .map(|&a| ArcPair {
                take_delay: a,
                skip_delay: 0,
            })
            .collect(),
        target: Some(inst.target()),
    }
}

impl DelayDevice {
    pub fn kind(&self) -> DeviceKind {
        self.kind
    }

    /// Number of layers (elements); the device has `n + 1` nodes.
    pub fn n(&self) -> u32 {
        self.layers.len() as u32
    }

    pub fn layers(&self) -> &[ArcPair] {
        &self.layers
    }

    pub fn target(&self) -> Option<u64> {
        self.target
    }

    pub fn take_delays(&self) -> Vec<u64> {
        self.layers.iter().map(|l| l.take_delay).collect()
    }

    /// Core delay of the path that takes exactly the layers in `mask`.
    pub fn core_delay(&self, mask: SubsetMask) -> Result<u64> {
        if !mask.fits(self.n()) {
            return Err(Error::MaskOutOfRange {
                mask: mask.bits(),
                n: self.n(),
            });
        }
        Ok(self
            .layers
            .iter()
            .enumerate()
            .map(|(i, l)| {
                if mask.bits() >> i & 1 == 1 {
                    l.take_delay
                } else {
                    l.skip_delay
                }
            })
            .sum())
    }

    /// Human-readable arc table.
    pub fn dump(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for DelayDevice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "device {} n={} nodes={}",
            self.kind,
            self.n(),
            self.n() + 1
        )?;
        if let Some(b) = self.target {
            write!(f, " target={b} detect_at={b}+{}ε", self.n())?;
        }
        writeln!(f)?;
        writeln!(f, "layer\tfrom\tto\ttake\tskip")?;
        for (i, l) in self.layers.iter().enumerate() {
            writeln!(
                f,
                "{}\t{}\t{}\t{}+ε\t{}+ε",
                i + 1,
                i,
                i + 1,
                l.take_delay,
                l.skip_delay
            )?;
        }
        Ok(())
    }
}
