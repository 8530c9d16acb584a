//! Adaptive-rate control: the L → rate → SNR-threshold lookup table,
//! control range, instantaneous-rate policy, outage probability and
//! ergodic capacity.

pub mod capacity;
pub mod lut;
pub mod outage;

pub use capacity::{
    capacity_heatmap, ergodic_capacity, ergodic_capacity_mc, instantaneous_rate, HeatmapCell,
};
pub use lut::{
    build_ccdm_lut, build_lut, ControlRange, LutBuildSpec, LutMode, LutRow, NetRateCurve, RateLut,
    LUT_CSV_HEADER,
};
pub use outage::{outage_probability, required_control_range};
