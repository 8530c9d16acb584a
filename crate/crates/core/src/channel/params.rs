//! Physical link parameters.

use crate::error::{Error, Result};

/// All physical parameters of the FSO link.
///
/// Noise is never carried in absolute units: every SNR in the crate is
/// expressed relative to the SNR achieved at the ideal gain
/// `h_ideal = A0 * h_l`, which the control layer anchors to a configured
/// or LUT-derived operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelParams {
    /// Carrier wavelength in meters.
    pub wavelength_m: f64,
    /// Link range in meters.
    pub link_range_m: f64,
    /// Receiver aperture radius in meters.
    pub aperture_radius_m: f64,
    /// Beam radius at the receiver in meters.
    pub beam_radius_m: f64,
    /// Rytov variance (turbulence strength).
    pub rytov_var: f64,
    /// Pointing-jitter standard deviation in meters.
    pub jitter_std_m: f64,
    /// Clear-air attenuation in dB/km.
    pub atten_db_per_km: f64,
    /// O/E conversion efficiency.
    pub oe_efficiency: f64,
    /// Transmit power (normalized).
    pub tx_power_w: f64,
    /// Detector exponent: 1 for heterodyne, 2 for direct detection.
    pub detector_tau: u8,
    /// Fixed path-loss override; `None` computes Beer-Lambert from
    /// `atten_db_per_km`.
    pub hl_override: Option<f64>,
    /// Direct override of the collected-power fraction A0.
    pub a0_override: Option<f64>,
    /// Direct override of the equivalent beam radius in meters.
    pub wzeq_override: Option<f64>,
}

impl Default for ChannelParams {
    /// The reference 3 km / 1550 nm link configuration.
    fn default() -> Self {
        ChannelParams {
            wavelength_m: 1550e-9,
            link_range_m: 3000.0,
            aperture_radius_m: 0.05,
            beam_radius_m: 2.1,
            rytov_var: 0.5,
            jitter_std_m: 0.3,
            atten_db_per_km: 0.2,
            oe_efficiency: 1.0,
            tx_power_w: 1.0,
            detector_tau: 1,
            hl_override: None,
            a0_override: None,
            wzeq_override: None,
        }
    }
}

impl ChannelParams {
    pub fn validate(&self) -> Result<()> {
        let positives = [
            ("wavelength_m", self.wavelength_m),
            ("link_range_m", self.link_range_m),
            ("aperture_radius_m", self.aperture_radius_m),
            ("beam_radius_m", self.beam_radius_m),
            ("rytov_var", self.rytov_var),
            ("jitter_std_m", self.jitter_std_m),
            ("oe_efficiency", self.oe_efficiency),
            ("tx_power_w", self.tx_power_w),
        ];
        for (name, v) in positives {
            if !(v > 0.0) {
                return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
            }
        }
        if self.atten_db_per_km < 0.0 {
            return Err(Error::InvalidInput("atten_db_per_km must be >= 0".into()));
        }
        if self.rytov_var > 10.0 {
            return Err(Error::InvalidInput(format!(
                "rytov_var {} outside supported range (0, 10]",
                self.rytov_var
            )));
        }
        if !matches!(self.detector_tau, 1 | 2) {
            return Err(Error::InvalidInput(format!(
                "detector_tau must be 1 (heterodyne) or 2 (direct), got {}",
                self.detector_tau
            )));
        }
        if let Some(hl) = self.hl_override {
            if !(hl > 0.0 && hl <= 1.0) {
                return Err(Error::InvalidInput(format!("hl_override must be in (0,1], got {hl}")));
            }
        }
        if let Some(a0) = self.a0_override {
            if !(a0 > 0.0 && a0 <= 1.0) {
                return Err(Error::InvalidInput(format!("a0_override must be in (0,1], got {a0}")));
            }
        }
        if let Some(w) = self.wzeq_override {
            if !(w > 0.0) {
                return Err(Error::InvalidInput(format!("wzeq_override must be positive, got {w}")));
            }
        }
        Ok(())
    }

    /// Optical wave number k = 2π/λ.
    pub fn wave_number(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.wavelength_m
    }
}

/// Beer-Lambert path loss: h_l = exp(-σ z) with σ from dB/km.
pub fn atmospheric_loss(atten_db_per_km: f64, range_m: f64) -> f64 {
    let sigma_per_m = std::f64::consts::LN_10 / 10.0 * atten_db_per_km / 1000.0;
    (-sigma_per_m * range_m).exp()
}
