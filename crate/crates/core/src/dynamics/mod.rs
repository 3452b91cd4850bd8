//! Integration, limit cycles, Hausdorff comparison, timescale segments,
//! surrogate-to-original mapping and ε-sweeps.

pub mod cycle;
pub mod hausdorff;
pub mod integrate;
pub mod mapping;
pub mod segments;
pub mod sweep;

pub use cycle::{
    find_limit_cycle, next_return, return_map_contraction, Contraction, CycleOptions, Direction, LimitCycle, Section,
};
pub use hausdorff::{hausdorff_distance, rectangle};
pub use integrate::{drive, integrate, Control, Method, Tolerances, Trajectory};
pub use mapping::{map_cycle_xz_to_xy, map_xz_to_xy};
pub use segments::{fit_exponents, linear_fit, segment_speeds, SegmentConfig, SegmentTable};
pub use sweep::{model_cycle, singular_rectangle, surrogate_cycle, sweep_surrogate, SweepRow};
