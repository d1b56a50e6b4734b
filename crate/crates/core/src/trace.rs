//! Oscilloscope-style sampling of an arrival timeline.
//!
//! Each arrival becomes a rectangular pulse of width `rise_time` and height
//! equal to its intensity; overlapping pulses add. Samples sit on the grid
//! `j * rise_time / samples_per_rise`, so every pulse covers exactly
//! `samples_per_rise` consecutive samples.

use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::sim::ArrivalTimeline;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceParams {
    /// Seconds per base delay unit.
    pub unit_delay: f64,
    /// Seconds of the ε pad on each arc.
    pub epsilon: f64,
    pub rise_time: f64,
    pub samples_per_rise: u32,
}

impl TraceParams {
    fn validate(&self) -> Result<()> {
        let positive = |name, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::param(
                    name,
                    format!("must be positive and finite, got {v}"),
                ))
            }
        };
        positive("unit_delay", self.unit_delay)?;
        positive("rise_time", self.rise_time)?;
        if !(self.epsilon.is_finite() && self.epsilon >= 0.0) {
            return Err(Error::param(
                "epsilon",
                format!("must be nonnegative and finite, got {}", self.epsilon),
            ));
        }
        if self.samples_per_rise == 0 {
            return Err(Error::param("samples_per_rise", "must be at least 1"));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        self.rise_time / self.samples_per_rise as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    step: f64,
    samples: Vec<f64>,
}

impl Trace {
    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn time(&self, j: usize) -> f64 {
        j as f64 * self.step
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.samples
            .iter()
            .enumerate()
            .map(|(j, &v)| (self.time(j), v))
    }

    pub fn peak(&self) -> f64 {
        self.samples.iter().copied().fold(0.0, f64::max)
    }

    /// Writes `time_s,intensity` rows in plain decimal notation.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "time_s,intensity")?;
        for (t, v) in self.iter() {
            writeln!(out, "{t},{v}")?;
        }
        out.flush()
    }
}

// Grid positions within this many samples of an integer snap to it.
const GRID_SNAP: f64 = 1e-9;

fn first_sample_at_or_after(position: f64) -> usize {
    (position - GRID_SNAP).ceil().max(0.0) as usize
}

pub fn synthesize_trace(timeline: &ArrivalTimeline, params: &TraceParams) -> Result<Trace> {
    params.validate()?;
    let step = params.step();
    let width = params.samples_per_rise as usize;
    let last_arrival = timeline
        .events()
        .last()
        .map(|e| e.moment.seconds(params.unit_delay, params.epsilon))
        .unwrap_or(0.0);
    let end = last_arrival + 2.0 * params.rise_time;
    let count = ((end / step) + GRID_SNAP).floor() as usize + 1;

    // difference array: +h at pulse start, -h one past its end
    let mut delta = vec![0.0f64; count + width + 1];
    for e in timeline.events() {
        let t = e.moment.seconds(params.unit_delay, params.epsilon);
        let start = first_sample_at_or_after(t / step);
        let h = e.intensity.to_f64();
        delta[start] += h;
        delta[start + width] -= h;
    }
    let mut level = 0.0;
    let samples = delta[..count]
        .iter()
        .map(|d| {
            level += d;
            level
        })
        .collect::<Vec<_>>();
    // scrub rounding residue left after every pulse has ended
    let samples = samples
        .into_iter()
        .map(|v| if v.abs() < 1e-15 { 0.0 } else { v })
        .collect();
    Ok(Trace { step, samples })
}
