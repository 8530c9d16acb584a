//! Instantaneous rate policy and ergodic capacity.

use rayon::prelude::*;

use super::lut::NetRateCurve;
use super::outage::outage_probability;
use crate::channel::{ChannelParams, LinkStatistics};
use crate::error::{Error, Result};
use crate::numerics::{integrate, QuadratureSpec, RngSeed};

/// Instantaneous net rate at composite gain `h` (bits per 4D symbol):
/// the maximum rate when the gain beats the ideal point, the rate
/// envelope at the instantaneous SNR inside the control range, zero in
/// outage.
pub fn instantaneous_rate(
    curve: &NetRateCurve,
    stats: &LinkStatistics,
    h: f64,
    control_range_db: f64,
    ideal_snr_db: f64,
) -> f64 {
    let h_ideal = stats.h_ideal();
    if h > h_ideal {
        return curve.max_rate();
    }
    if h < stats.gain_at_attenuation_db(control_range_db) {
        return 0.0;
    }
    let snr = stats
        .instantaneous_snr_db(h, ideal_snr_db)
        .expect("h > 0 inside the control range");
    curve.eval(snr)
}

/// Fading-averaged net rate:
/// C_erg = ∫_{h0}^{h_ideal} R(SNR(h)) f_h(h) dh + R_max P(h > h_ideal).
pub fn ergodic_capacity(
    stats: &LinkStatistics,
    curve: &NetRateCurve,
    control_range_db: f64,
    ideal_snr_db: f64,
) -> Result<f64> {
    if !(control_range_db >= 0.0) {
        return Err(Error::InvalidInput("control range must be >= 0 dB".into()));
    }
    let h_ideal = stats.h_ideal();
    let h0 = stats.gain_at_attenuation_db(control_range_db);
    // The outer integrand nests the composite-pdf quadrature; keep its
    // tolerances looser than the inner ones.
    let spec = QuadratureSpec::new(1e-7, 1e-10, 2000)?;
    let middle = integrate(
        |h| {
            if h <= h0 || h >= h_ideal {
                return 0.0;
            }
            let snr = stats.instantaneous_snr_db(h, ideal_snr_db).unwrap_or(f64::NEG_INFINITY);
            curve.eval(snr) * stats.composite_pdf(h).unwrap_or(0.0)
        },
        h0,
        h_ideal,
        &spec,
    )?;
    let top = curve.max_rate() * (1.0 - stats.composite_cdf(h_ideal)?);
    Ok(middle + top)
}

/// Monte-Carlo route to the same quantity: the sample mean of
/// [`instantaneous_rate`] over drawn gains. Returns (mean, std error).
pub fn ergodic_capacity_mc(
    stats: &LinkStatistics,
    curve: &NetRateCurve,
    control_range_db: f64,
    ideal_snr_db: f64,
    seed: RngSeed,
    samples: usize,
) -> (f64, f64) {
    let gains = stats.sample_gains(seed, samples);
    let mut sum = 0.0;
    let mut sum2 = 0.0;
    for h in gains {
        let r = instantaneous_rate(curve, stats, h, control_range_db, ideal_snr_db);
        sum += r;
        sum2 += r * r;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum2 / n - mean * mean).max(0.0);
    (mean, (var / n).sqrt())
}

/// One cell of the (σ_R², σ_s) capacity heatmap.
#[derive(Debug, Clone, Copy)]
pub struct HeatmapCell {
    pub rytov_var: f64,
    pub jitter_std_m: f64,
    pub p_out: f64,
    /// `None` marks outage (p_out above the reliability target).
    pub c_erg: Option<f64>,
}

/// Ergodic capacity across a turbulence × jitter grid at a fixed control
/// range; cells whose outage probability misses the reliability target
/// carry no capacity value.
pub fn capacity_heatmap(
    base: &ChannelParams,
    rytov_grid: &[f64],
    jitter_grid: &[f64],
    curve: &NetRateCurve,
    control_range_db: f64,
    ideal_snr_db: f64,
    reliability_target: f64,
) -> Result<Vec<HeatmapCell>> {
    if rytov_grid.is_empty() || jitter_grid.is_empty() {
        return Err(Error::InvalidInput("heatmap grids must be nonempty".into()));
    }
    let cells: Vec<(f64, f64)> = jitter_grid
        .iter()
        .flat_map(|&s| rytov_grid.iter().map(move |&r| (r, s)))
        .collect();
    cells
        .into_par_iter()
        .map(|(rytov_var, jitter_std_m)| {
            let params = ChannelParams { rytov_var, jitter_std_m, ..base.clone() };
            let stats = LinkStatistics::new(params)?;
            let p_out = outage_probability(&stats, control_range_db)?;
            let c_erg = if p_out > reliability_target {
                None
            } else {
                Some(ergodic_capacity(&stats, curve, control_range_db, ideal_snr_db)?)
            };
            Ok(HeatmapCell { rytov_var, jitter_std_m, p_out, c_erg })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::lut::{LutMode, LutRow, RateLut};
    use approx::assert_relative_eq;

    fn toy_curve() -> (RateLut, NetRateCurve) {
        let rows = vec![
            LutRow {
                mode: LutMode::QpskFloor,
                dm_rate: 0.0,
                rate_loss: 0.0,
                net_rate: 10.0 / 3.0,
                snr_threshold_db: 3.9,
            },
            LutRow {
                mode: LutMode::Ess { levels: 60 },
                dm_rate: 1.17,
                rate_loss: 0.025,
                net_rate: 6.67,
                snr_threshold_db: 9.8,
            },
            LutRow {
                mode: LutMode::UniformCap,
                dm_rate: 2.0,
                rate_loss: 0.0,
                net_rate: 10.0,
                snr_threshold_db: 16.1,
            },
        ];
        let lut = RateLut::from_rows(rows, 6, 5.0 / 6.0).unwrap();
        let curve = lut.net_rate_curve();
        (lut, curve)
    }

    fn stats(rytov: f64, jitter: f64) -> LinkStatistics {
        let params = ChannelParams {
            rytov_var: rytov,
            jitter_std_m: jitter,
            hl_override: Some(0.73),
            ..Default::default()
        };
        LinkStatistics::new(params).unwrap()
    }

    #[test]
    fn rate_branches() {
        let (_, curve) = toy_curve();
        let s = stats(0.5, 0.3);
        let ideal = curve.thr_max_db();
        let h_ideal = s.h_ideal();
        // Gain above ideal: capped at the max rate.
        assert_relative_eq!(
            instantaneous_rate(&curve, &s, 2.0 * h_ideal, 12.2, ideal),
            10.0,
            epsilon = 1e-12
        );
        // Gain below the control range: outage, zero rate.
        let h0 = s.gain_at_attenuation_db(12.2);
        assert_eq!(instantaneous_rate(&curve, &s, 0.99 * h0, 12.2, ideal), 0.0);
        // Boundary continuity at h_ideal: the envelope meets the cap.
        let at_seam = instantaneous_rate(&curve, &s, h_ideal, 12.2, ideal);
        assert_relative_eq!(at_seam, 10.0, epsilon = 0.05);
    }

    #[test]
    fn quadrature_matches_monte_carlo() {
        let (_, curve) = toy_curve();
        let s = stats(0.5, 0.3);
        let ideal = curve.thr_max_db();
        let c = ergodic_capacity(&s, &curve, 12.2, ideal).unwrap();
        let (mc, se) = ergodic_capacity_mc(&s, &curve, 12.2, ideal, RngSeed(17), 400_000);
        assert!(
            (c - mc).abs() <= 3.0 * se + 1e-3,
            "quadrature {c} vs MC {mc} ± {se}"
        );
    }

    #[test]
    fn capacity_decreases_with_impairments() {
        let (_, curve) = toy_curve();
        let ideal = curve.thr_max_db();
        let c1 = ergodic_capacity(&stats(0.1, 0.3), &curve, 12.2, ideal).unwrap();
        let c2 = ergodic_capacity(&stats(0.5, 0.3), &curve, 12.2, ideal).unwrap();
        let c3 = ergodic_capacity(&stats(0.5, 0.5), &curve, 12.2, ideal).unwrap();
        assert!(c1 > c2, "turbulence should cost capacity: {c1} vs {c2}");
        assert!(c2 > c3, "jitter should cost capacity: {c2} vs {c3}");
        assert!(c1 <= curve.max_rate() + 1e-9);
    }

    #[test]
    fn heatmap_marks_outage() {
        let (_, curve) = toy_curve();
        let ideal = curve.thr_max_db();
        let base = ChannelParams { hl_override: Some(0.73), ..Default::default() };
        let cells = capacity_heatmap(
            &base,
            &[0.07, 1.55],
            &[0.01, 0.6],
            &curve,
            12.2,
            ideal,
            1e-5,
        )
        .unwrap();
        assert_eq!(cells.len(), 4);
        // Benign corner carries capacity, the harsh corner is outage.
        let benign = cells
            .iter()
            .find(|c| c.rytov_var == 0.07 && c.jitter_std_m == 0.01)
            .unwrap();
        assert!(benign.c_erg.is_some());
        let harsh = cells
            .iter()
            .find(|c| c.rytov_var == 1.55 && c.jitter_std_m == 0.6)
            .unwrap();
        assert!(harsh.c_erg.is_none());
        assert!(capacity_heatmap(&base, &[], &[0.1], &curve, 12.2, ideal, 1e-5).is_err());
    }
}
