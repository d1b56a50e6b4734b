//! Physical envelope of the power-of-two device.
//!
//! The oscilloscope rise time is the smallest resolvable gap between two
//! arrival moments, so the shortest cable must delay light by one rise time.
//! Every other take arc is a power-of-two multiple of it. Powers of two are
//! kept as integers until the final multiplication so size thresholds are
//! not shifted by rounding.

use std::fmt;

use crate::error::{Error, Result};
use crate::types::check_n;

pub const DEFAULT_RISE_TIME: f64 = 1e-12;
pub const DEFAULT_LIGHT_SPEED: f64 = 3e8;

// Published figures for the default parameters. Some do not follow from the
// closed forms; they are reported next to the computed values, not used.
pub const STATED_MIN_CABLE_M: f64 = 0.0003;
pub const STATED_MAX_N_ONE_SECOND: f64 = 39.0;
pub const STATED_LONGEST_CABLE_M: f64 = 8e8;
pub const STATED_MAX_N_300_KM: f64 = 26.0;
pub const STATED_SOLVE_TIME_26_S: f64 = 1e-6;

/// Relative gap beyond which a computed value is flagged against a stated one.
pub const DISCREPANCY_TOLERANCE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub rise_time: f64,
    pub light_speed: f64,
    /// Length of the ε pad added to every arc.
    pub epsilon_length: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        PhysicalParams::new(DEFAULT_RISE_TIME, DEFAULT_LIGHT_SPEED).expect("defaults are positive")
    }
}

fn positive(name: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::param(
            name,
            format!("must be positive and finite, got {v}"),
        ))
    }
}

fn pow2(k: u32) -> f64 {
    debug_assert!(k <= 1023);
    f64::from_bits(((1023 + k) as u64) << 52)
}

impl PhysicalParams {
    /// ε pad defaults to one minimum cable length.
    pub fn new(rise_time: f64, light_speed: f64) -> Result<Self> {
        let rise_time = positive("rise_time", rise_time)?;
        let light_speed = positive("light_speed", light_speed)?;
        Ok(PhysicalParams {
            rise_time,
            light_speed,
            epsilon_length: rise_time * light_speed,
        })
    }

    pub fn with_epsilon_length(mut self, epsilon_length: f64) -> Result<Self> {
        self.epsilon_length = positive("epsilon_length", epsilon_length)?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        positive("rise_time", self.rise_time)?;
        positive("light_speed", self.light_speed)?;
        positive("epsilon_length", self.epsilon_length)?;
        Ok(())
    }
}

/// Length of cable that delays light by one rise time.
pub fn min_cable_length(p: &PhysicalParams) -> Result<f64> {
    p.validate()?;
    Ok(p.rise_time * p.light_speed)
}

/// Largest `n` with `2^n * rise_time <= total_time`; 0 when not even one
/// doubling fits.
pub fn max_n_for_total_time(total_time: f64, p: &PhysicalParams) -> Result<u32> {
    p.validate()?;
    let total_time = positive("total_time", total_time)?;
    let mut n = 0;
    while n < 1022 && pow2(n + 1) * p.rise_time <= total_time {
        n += 1;
    }
    Ok(n)
}

/// Largest `n` whose longest take arc, `2^(n-1)` minimum cables, fits in `max_cable`.
pub fn max_n_for_cable(max_cable: f64, p: &PhysicalParams) -> Result<u32> {
    let min = min_cable_length(p)?;
    let max_cable = positive("max_cable", max_cable)?;
    if max_cable < min {
        return Err(Error::param(
            "max_cable",
            format!("{max_cable} m is shorter than one minimum cable ({min} m)"),
        ));
    }
    let mut n = 1;
    while n < 1023 && pow2(n) * min <= max_cable {
        n += 1;
    }
    Ok(n)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityReport {
    pub n: u32,
    pub min_cable_m: f64,
    pub longest_cable_m: f64,
    /// All take arcs plus the ε pad on each of the `2n` arcs.
    pub total_cable_m: f64,
    pub solve_time_s: f64,
    /// Source power needed relative to a single undivided detection, `2^n`.
    pub relative_power: u64,
    /// `n * 2^n`: `n` arcs of length up to `2^(n-1)`.
    pub build_cost_units: u128,
}

pub fn report(n: u32, p: &PhysicalParams) -> Result<FeasibilityReport> {
    check_n(n)?;
    let min = min_cable_length(p)?;
    let paths = 1u64 << n;
    Ok(FeasibilityReport {
        n,
        min_cable_m: min,
        longest_cable_m: pow2(n - 1) * min,
        total_cable_m: (paths - 1) as f64 * min + (2 * n) as f64 * p.epsilon_length,
        solve_time_s: pow2(n) * p.rise_time,
        relative_power: paths,
        build_cost_units: n as u128 * paths as u128,
    })
}

impl fmt::Display for FeasibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n: {}", self.n)?;
        writeln!(f, "min_cable_m: {:e}", self.min_cable_m)?;
        writeln!(f, "longest_cable_m: {:e}", self.longest_cable_m)?;
        writeln!(f, "total_cable_m: {:e}", self.total_cable_m)?;
        writeln!(f, "solve_time_s: {:e}", self.solve_time_s)?;
        writeln!(f, "relative_power: {}", self.relative_power)?;
        writeln!(f, "build_cost_units: {}", self.build_cost_units)
    }
}

/// A computed quantity next to the figure published for it.
#[derive(Debug, Clone, PartialEq)]
pub struct PublishedFigure {
    pub label: &'static str,
    pub computed: f64,
    pub stated: f64,
    pub discrepancy: bool,
}

impl PublishedFigure {
    fn new(label: &'static str, computed: f64, stated: f64) -> Self {
        let gap = ((computed - stated) / stated).abs();
        PublishedFigure {
            label,
            computed,
            stated,
            discrepancy: gap > DISCREPANCY_TOLERANCE,
        }
    }
}

impl fmt::Display for PublishedFigure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: computed {:e}, published states {:e}{}",
            self.label,
            self.computed,
            self.stated,
            if self.discrepancy {
                " [DISCREPANCY]"
            } else {
                ""
            }
        )
    }
}

/// Recomputes each published instance-size figure under `p`.
pub fn published_figures(p: &PhysicalParams) -> Result<Vec<PublishedFigure>> {
    let n_one_second = max_n_for_total_time(1.0, p)?;
    let longest = if n_one_second >= 1 {
        report(n_one_second.min(63), p)?.longest_cable_m
    } else {
        0.0
    };
    Ok(vec![
        PublishedFigure::new("min_cable_m", min_cable_length(p)?, STATED_MIN_CABLE_M),
        PublishedFigure::new(
            "max_n_for_1_s",
            n_one_second as f64,
            STATED_MAX_N_ONE_SECOND,
        ),
        PublishedFigure::new(
            "longest_cable_m_at_max_n_for_1_s",
            longest,
            STATED_LONGEST_CABLE_M,
        ),
        PublishedFigure::new(
            "max_n_for_300_km_cable",
            max_n_for_cable(3e5, p)? as f64,
            STATED_MAX_N_300_KM,
        ),
        PublishedFigure::new(
            "solve_time_s_at_n_26",
            report(26, p)?.solve_time_s,
            STATED_SOLVE_TIME_26_S,
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(rise: f64, speed: f64) -> PhysicalParams {
        PhysicalParams::new(rise, speed).unwrap()
    }

    #[test]
    fn min_cable_examples() {
        assert_eq!(min_cable_length(&PhysicalParams::default()), Ok(3e-4));
        assert!((min_cable_length(&params(1e-9, 3e8)).unwrap() - 0.3).abs() < 1e-15);
        assert_eq!(min_cable_length(&params(2e-12, 1.5e8)), Ok(3e-4));
    }

    #[test]
    fn min_cable_scales_linearly() {
        let base = min_cable_length(&PhysicalParams::default()).unwrap();
        for k in 0..20 {
            let c = pow2(k);
            let scaled =
                min_cable_length(&params(DEFAULT_RISE_TIME * c, DEFAULT_LIGHT_SPEED)).unwrap();
            assert_eq!(scaled, base * c);
        }
    }

    #[test]
    fn total_time_examples() {
        let p = PhysicalParams::default();
        assert_eq!(max_n_for_total_time(1.0, &p), Ok(39));
        assert_eq!(max_n_for_total_time(1e-12, &p), Ok(0));
        assert_eq!(max_n_for_total_time(1e-6, &p), Ok(19));
        assert_eq!(max_n_for_total_time(1e-13, &p), Ok(0));
        assert!(max_n_for_total_time(0.0, &p).is_err());
        for k in 1..=63 {
            assert_eq!(max_n_for_total_time(pow2(k) * p.rise_time, &p), Ok(k));
        }
    }

    #[test]
    fn cable_examples() {
        let p = PhysicalParams::default();
        assert_eq!(max_n_for_cable(3e5, &p), Ok(30));
        assert_eq!(max_n_for_cable(3e-4, &p), Ok(1));
        assert_eq!(max_n_for_cable(6e-4, &p), Ok(2));
        assert!(max_n_for_cable(2e-4, &p).is_err());
        let min = min_cable_length(&p).unwrap();
        for k in 1..=63 {
            assert_eq!(max_n_for_cable(pow2(k - 1) * min, &p), Ok(k));
        }
    }

    #[test]
    fn report_closed_forms() {
        let p = PhysicalParams::default();
        let r = report(1, &p).unwrap();
        assert_eq!(r.longest_cable_m, 3e-4);
        assert_eq!(r.solve_time_s, 2e-12);
        assert_eq!(r.relative_power, 2);
        assert_eq!(r.build_cost_units, 2);
        assert_eq!(r.total_cable_m, 3e-4 + 2.0 * 3e-4);

        let r = report(39, &p).unwrap();
        assert!((r.longest_cable_m / 8.25e7 - 1.0).abs() < 0.005);
        let r = report(26, &p).unwrap();
        assert!((r.solve_time_s / 6.7e-5 - 1.0).abs() < 0.005);

        let r = report(63, &p).unwrap();
        assert_eq!(r.relative_power, 1 << 63);
        assert_eq!(r.build_cost_units, 63 * (1u128 << 63));
        assert!(report(0, &p).is_err() && report(64, &p).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(PhysicalParams::new(0.0, 3e8).is_err());
        assert!(PhysicalParams::new(1e-12, -1.0).is_err());
        assert!(PhysicalParams::default().with_epsilon_length(0.0).is_err());
        assert_eq!(PhysicalParams::default().epsilon_length, 3e-4);
    }

    #[test]
    fn published_figures_flag_mismatches() {
        let figs = published_figures(&PhysicalParams::default()).unwrap();
        let flags: Vec<(&str, bool)> = figs.iter().map(|f| (f.label, f.discrepancy)).collect();
        assert_eq!(
            flags,
            vec![
                ("min_cable_m", false),
                ("max_n_for_1_s", false),
                ("longest_cable_m_at_max_n_for_1_s", true),
                ("max_n_for_300_km_cable", true),
                ("solve_time_s_at_n_26", true),
            ]
        );
        assert!(figs[2].to_string().ends_with("[DISCREPANCY]"));
    }
}
