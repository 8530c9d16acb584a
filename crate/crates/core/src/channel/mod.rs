//! Statistical FSO channel: deterministic loss, Gamma-Gamma turbulence,
//! pointing-error fading, the composite gain law, and gain sampling.

pub mod composite;
pub mod params;
pub mod pointing;
pub mod turbulence;

pub use composite::LinkStatistics;
pub use params::{atmospheric_loss, ChannelParams};
pub use pointing::{pointing_model, PointingModel};
pub use turbulence::{gg_params, TurbulenceModel};
