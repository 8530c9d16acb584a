//! Outage probability under a finite control range.
//!
//! With control range γ_R the adaptive scheme absorbs instantaneous
//! attenuation up to γ_R by rate reduction; the link is in outage when
//! the attenuation relative to the ideal gain exceeds it:
//! P_out = P(h < h0), h0 = h_ideal · 10^{-γ_R/(10 τ)}.

use crate::channel::LinkStatistics;
use crate::error::{Error, Result};
use crate::numerics::find_root_monotone;

pub fn outage_probability(stats: &LinkStatistics, control_range_db: f64) -> Result<f64> {
    if !(control_range_db >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "control range must be >= 0 dB, got {control_range_db}"
        )));
    }
    let h0 = stats.gain_at_attenuation_db(control_range_db);
    stats.composite_cdf(h0)
}

/// Smallest control range achieving `target` outage probability, or
/// `None` if even `max_db` is not enough. Returns 0.0 when the link is
/// already reliable with no range at all.
pub fn required_control_range(
    stats: &LinkStatistics,
    target: f64,
    max_db: f64,
) -> Result<Option<f64>> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::InvalidInput(format!("target must be in (0,1), got {target}")));
    }
    if outage_probability(stats, max_db)? > target {
        return Ok(None);
    }
    if outage_probability(stats, 0.0)? <= target {
        return Ok(Some(0.0));
    }
    // log10 P_out is decreasing in γ_R; root-find the crossing.
    let f = |g: f64| {
        let p = outage_probability(stats, g).unwrap_or(1.0);
        target.log10() - p.max(1e-300).log10()
    };
    let g = find_root_monotone(f, 0.0, max_db, 1e-3)?;
    Ok(Some(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ChannelParams;

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
    fn zero_range_has_substantial_outage() {
        let s = stats(0.5, 0.3);
        let p = outage_probability(&s, 0.0).unwrap();
        // P(h < A0 h_l) is most of the mass: E[h_p] < A0 and h_a spreads.
        assert!(p > 0.3, "p = {p}");
        assert!(p < 1.0);
    }

    #[test]
    fn monotone_in_control_range() {
        let s = stats(0.5, 0.3);
        let mut last = 1.0;
        for g in [0.0, 2.0, 5.0, 8.0, 12.0] {
            let p = outage_probability(&s, g).unwrap();
            assert!(p <= last + 1e-12);
            last = p;
        }
    }

    #[test]
    fn monotone_in_jitter_and_turbulence() {
        let g = 8.0;
        let p_base = outage_probability(&stats(0.5, 0.3), g).unwrap();
        let p_more_jitter = outage_probability(&stats(0.5, 0.5), g).unwrap();
        let p_more_turb = outage_probability(&stats(0.9, 0.3), g).unwrap();
        assert!(p_more_jitter > p_base);
        assert!(p_more_turb > p_base);
    }

    #[test]
    fn required_range_brackets_target() {
        let s = stats(0.5, 0.3);
        let g = required_control_range(&s, 1e-5, 30.0).unwrap().unwrap();
        let p_at = outage_probability(&s, g).unwrap();
        let p_below = outage_probability(&s, g - 0.05).unwrap();
        assert!(p_at <= 1.05e-5, "p_at = {p_at}");
        assert!(p_below > 0.95e-5, "p_below = {p_below}");
    }

    #[test]
    fn impossible_target_is_none() {
        let s = stats(1.55, 0.6);
        assert_eq!(required_control_range(&s, 1e-12, 5.0).unwrap(), None);
    }

    #[test]
    fn rejects_negative_range() {
        let s = stats(0.5, 0.3);
        assert!(outage_probability(&s, -1.0).is_err());
    }
}
