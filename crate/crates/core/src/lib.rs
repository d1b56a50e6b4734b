//! Exact simulation of time-delay optical devices for subset sum and set
//! splitting.
//!
//! The set-splitting device is a chain of `n` layers whose take arcs delay a
//! beam by `1, 2, 4, ..., 2^(n-1)` units. A pulse split at every node reaches
//! the destination once per subset, at the moment equal to the subset's
//! bitmask. Deciding an instance reduces to asking whether any arrival
//! moment lies outside the blocked set.
//!
//! ```
//! use delaysplit::{parse_split_instance, solve_optical, blocked_moments_literal};
//!
//! let inst = parse_split_instance("n 4\nf 1 2\nf 1 3\n").unwrap();
//! assert_eq!(blocked_moments_literal(&inst).unwrap().to_string(), "3,5,7,11,13,15");
//! assert_eq!(solve_optical(&inst).unwrap().to_string(), "SPLIT A1={1} A2={2,3,4} moment=1");
//! ```

pub mod device;
pub mod error;
pub mod feasibility;
pub mod format;
pub mod gen;
pub mod intensity;
pub mod moments;
pub mod sim;
pub mod solver;
pub mod trace;
pub mod types;

pub use device::{
    build_set_splitting_device, build_subset_sum_device, ArcPair, DelayDevice, DeviceKind,
};
pub use error::{Error, Result};
pub use feasibility::{
    max_n_for_cable, max_n_for_total_time, min_cable_length, published_figures, report,
    FeasibilityReport, PhysicalParams, PublishedFigure,
};
pub use format::{
    parse_instance, parse_split_instance, parse_subset_sum_instance, Instance, ParseError,
};
pub use gen::generate_split_instance;
pub use intensity::DyadicIntensity;
pub use moments::{
    blocked_moments_full, blocked_moments_literal, choose_watch, decode_moment, encode_moment,
    is_solution_moment, superset_moments, MomentSet, Polarity, WatchStrategy,
};
pub use sim::{
    detect_subset_sum, simulate, ArrivalEvent, ArrivalTimeline, Detection, SimConfig, Simulator,
};
pub use solver::{
    oracle_solution_masks, solve_optical, solve_optical_with, solve_oracle, solve_oracle_with_cap,
    solve_subset_sum, solve_subset_sum_with, subset_sum_oracle, Decision, Method, SplitAnswer,
    SubsetSumAnswer,
};
pub use trace::{synthesize_trace, Trace, TraceParams};
pub use types::{
    complement, ExactMoment, Partition, SplitInstance, SubsetMask, SubsetSumInstance, MAX_N,
};
