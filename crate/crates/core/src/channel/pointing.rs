//! Pointing-error (misalignment) fading for a Gaussian beam and a
//! circular aperture.

use crate::error::{Error, Result};
use crate::numerics::erf;

/// Collected-power model under radial beam jitter: the gain is
/// `h_p = A0 exp(-2 r² / w_zeq²)` with Rayleigh-distributed offset `r`,
/// giving the density f(h_p) = (γ²/A0^{γ²}) h_p^{γ²-1} on (0, A0].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointingModel {
    /// Fraction of power collected at perfect alignment.
    pub a0: f64,
    /// Equivalent beam radius at the receiver, meters.
    pub w_zeq_m: f64,
    /// γ = w_zeq / (2 σ_s).
    pub gamma_ratio: f64,
}

/// Build the model from aperture radius, received beam radius and jitter
/// standard deviation. `a0_override`/`wzeq_override` replace the derived
/// constants when the caller wants to inject a different aperture model.
pub fn pointing_model(
    aperture_radius_m: f64,
    beam_radius_m: f64,
    jitter_std_m: f64,
    a0_override: Option<f64>,
    wzeq_override: Option<f64>,
) -> Result<PointingModel> {
    if !(aperture_radius_m > 0.0 && beam_radius_m > 0.0 && jitter_std_m > 0.0) {
        return Err(Error::InvalidInput(
            "aperture radius, beam radius and jitter must be positive".into(),
        ));
    }
    let v = (std::f64::consts::PI / 2.0).sqrt() * aperture_radius_m / beam_radius_m;
    let a0 = a0_override.unwrap_or_else(|| {
        let e = erf(v);
        e * e
    });
    let w_zeq_m = wzeq_override.unwrap_or_else(|| {
        let w2 = beam_radius_m * beam_radius_m * std::f64::consts::PI.sqrt() * erf(v)
            / (2.0 * v * (-v * v).exp());
        w2.sqrt()
    });
    Ok(PointingModel { a0, w_zeq_m, gamma_ratio: w_zeq_m / (2.0 * jitter_std_m) })
}

impl PointingModel {
    /// Density of h_p on (0, A0].
    pub fn pdf(&self, h_p: f64) -> f64 {
        if h_p <= 0.0 || h_p > self.a0 {
            return 0.0;
        }
        let g2 = self.gamma_ratio * self.gamma_ratio;
        // (γ²/A0) (h_p/A0)^{γ²-1}, stable for huge γ².
        g2 / self.a0 * ((g2 - 1.0) * (h_p / self.a0).ln()).exp()
    }

    /// P(h_p <= w) = (w/A0)^{γ²} on (0, A0].
    pub fn cdf(&self, h_p: f64) -> f64 {
        if h_p <= 0.0 {
            0.0
        } else if h_p >= self.a0 {
            1.0
        } else {
            let g2 = self.gamma_ratio * self.gamma_ratio;
            (g2 * (h_p / self.a0).ln()).exp()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate, QuadratureSpec};
    use approx::assert_relative_eq;

    #[test]
    fn table_geometry_constants() {
        // a = 0.05 m, w_z = 2.1 m (mpmath reference values).
        let m = pointing_model(0.05, 2.1, 0.3, None, None).unwrap();
        assert_relative_eq!(m.a0, 0.00113311405579094867, max_relative = 1e-12);
        assert_relative_eq!(m.w_zeq_m, 2.10062346140796786, max_relative = 1e-12);
        assert_relative_eq!(m.gamma_ratio, m.w_zeq_m / 0.6, epsilon = 1e-15);
    }

    #[test]
    fn small_aperture_limit() {
        // A0 -> 2 a²/w_z² as a/w_z -> 0.
        let (a, wz) = (1e-6, 2.1);
        let m = pointing_model(a, wz, 0.3, None, None).unwrap();
        let limit = 2.0 * a * a / (wz * wz);
        assert_relative_eq!(m.a0 / limit, 1.0, epsilon = 1e-9);
        // w_zeq -> w_z in the same limit.
        assert_relative_eq!(m.w_zeq_m, wz, epsilon = 1e-9);
    }

    #[test]
    fn pdf_normalizes_for_wide_gamma_range() {
        let spec = QuadratureSpec::default();
        for sigma in [0.01, 0.3, 0.6] {
            let m = pointing_model(0.05, 2.1, sigma, None, None).unwrap();
            let total = integrate(|w| m.pdf(w), 0.0, m.a0, &spec).unwrap();
            assert_relative_eq!(total, 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn overrides_take_effect() {
        let m = pointing_model(0.05, 2.1, 0.3, Some(0.9), Some(1.5)).unwrap();
        assert_eq!(m.a0, 0.9);
        assert_eq!(m.w_zeq_m, 1.5);
        assert_relative_eq!(m.gamma_ratio, 2.5, epsilon = 1e-15);
    }
}
