//! Rate/SNR lookup table for adaptive shaping control.
//!
//! One row per shaping parameter value, each carrying the net 4D rate
//! and the post-FEC SNR threshold obtained by inverting the scheme's GMI
//! curve. Rows below the QPSK-equivalent net rate are not kept: the
//! system switches to 4D-QPSK instead of shaping deeper. A distinguished
//! floor row (4D-QPSK) and cap row (uniform M-QAM, the no-shaping limit)
//! close the table at both ends.

use rayon::prelude::*;

use crate::dm::{analyze, build_trellis, AmplitudeAlphabet, CcdmCodebook};
use crate::error::{Error, Result};
use crate::modem::{snr_threshold, McSpec, PcsScheme};
use crate::numerics::RngSeed;

/// What produced a LUT row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LutMode {
    /// ESS row at the given number of energy levels L.
    Ess { levels: usize },
    /// CCDM row at the given shaping parameter λ.
    Ccdm { lambda: f64 },
    /// 4D-QPSK floor.
    QpskFloor,
    /// Uniform M-QAM cap (no shaping).
    UniformCap,
}

#[derive(Debug, Clone)]
pub struct LutRow {
    pub mode: LutMode,
    pub dm_rate: f64,
    pub rate_loss: f64,
    pub net_rate: f64,
    pub snr_threshold_db: f64,
}

impl LutRow {
    pub fn csv_row(&self) -> String {
        let (mode, param) = match self.mode {
            LutMode::Ess { levels } => ("ess", levels.to_string()),
            LutMode::Ccdm { lambda } => ("ccdm", format!("{lambda:.6}")),
            LutMode::QpskFloor => ("qpsk", String::new()),
            LutMode::UniformCap => ("uniform", String::new()),
        };
        format!(
            "{mode},{param},{:.6},{:.6},{:.6},{:.4}",
            self.dm_rate, self.rate_loss, self.net_rate, self.snr_threshold_db
        )
    }
}

pub const LUT_CSV_HEADER: &str = "mode,shaping_param,r_dm,r_loss,r_tot_4d,gamma_thr_db";

/// Ordered rate/threshold table.
#[derive(Debug, Clone)]
pub struct RateLut {
    rows: Vec<LutRow>,
    bits_per_2d: usize,
    code_rate: f64,
}

/// Control range summary: γ_R = γ_thr^max - γ_thr^min in dB.
#[derive(Debug, Clone, Copy)]
pub struct ControlRange {
    pub control_range_db: f64,
    pub thr_min_db: f64,
    pub thr_max_db: f64,
}

impl RateLut {
    /// Rows sorted by net rate (floor and cap included).
    pub fn rows(&self) -> &[LutRow] {
        &self.rows
    }

    pub fn bits_per_2d(&self) -> usize {
        self.bits_per_2d
    }

    pub fn code_rate(&self) -> f64 {
        self.code_rate
    }

    pub fn qpsk_floor(&self) -> Option<&LutRow> {
        self.rows.iter().find(|r| r.mode == LutMode::QpskFloor)
    }

    pub fn uniform_cap(&self) -> Option<&LutRow> {
        self.rows.iter().find(|r| r.mode == LutMode::UniformCap)
    }

    pub fn max_net_rate(&self) -> f64 {
        self.rows.last().map(|r| r.net_rate).unwrap_or(0.0)
    }

    pub fn min_net_rate(&self) -> f64 {
        self.rows.first().map(|r| r.net_rate).unwrap_or(0.0)
    }

    pub fn control_range(&self) -> ControlRange {
        let thr_min = self.rows.iter().map(|r| r.snr_threshold_db).fold(f64::INFINITY, f64::min);
        let thr_max =
            self.rows.iter().map(|r| r.snr_threshold_db).fold(f64::NEG_INFINITY, f64::max);
        ControlRange {
            control_range_db: thr_max - thr_min,
            thr_min_db: thr_min,
            thr_max_db: thr_max,
        }
    }

    /// Highest-rate row whose threshold is met at `snr_db`; `None` means
    /// outage (no mode transmits).
    pub fn select_rate(&self, snr_db: f64) -> Option<&LutRow> {
        self.rows
            .iter()
            .filter(|r| r.snr_threshold_db <= snr_db)
            .max_by(|a, b| {
                a.net_rate
                    .partial_cmp(&b.net_rate)
                    .unwrap()
                    // equal rates: prefer the lower threshold
                    .then(b.snr_threshold_db.partial_cmp(&a.snr_threshold_db).unwrap())
            })
    }

    /// Monotone net-rate-versus-SNR curve through the table (the GMI_4D
    /// envelope used inside the capacity integrals).
    pub fn net_rate_curve(&self) -> NetRateCurve {
        NetRateCurve::from_rows(&self.rows)
    }

    pub fn from_rows(rows: Vec<LutRow>, bits_per_2d: usize, code_rate: f64) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidInput("LUT needs at least one row".into()));
        }
        let mut rows = rows;
        rows.sort_by(|a, b| {
            a.net_rate
                .partial_cmp(&b.net_rate)
                .unwrap()
                .then(a.snr_threshold_db.partial_cmp(&b.snr_threshold_db).unwrap())
        });
        Ok(RateLut { rows, bits_per_2d, code_rate })
    }
}

/// Shared options for LUT construction.
#[derive(Debug, Clone, Copy)]
pub struct LutBuildSpec {
    pub mc: McSpec,
    /// Keep only rows with net rate at or above the QPSK-equivalent
    /// floor 4 R_C (the switch-to-QPSK policy).
    pub include_endpoints: bool,
}

impl Default for LutBuildSpec {
    fn default() -> Self {
        LutBuildSpec { mc: McSpec::default(), include_endpoints: true }
    }
}

/// Build the ESS-based LUT: one row per L in `l_range` whose net rate
/// clears the QPSK floor, plus the floor and cap rows.
pub fn build_lut(
    alphabet: &AmplitudeAlphabet,
    block_len: usize,
    bits_per_2d: usize,
    code_rate: f64,
    l_range: (usize, usize),
    spec: &LutBuildSpec,
    seed: RngSeed,
) -> Result<RateLut> {
    let (lo, hi) = l_range;
    if lo < 1 || hi < lo {
        return Err(Error::InvalidInput(format!("bad L range [{lo}, {hi}]")));
    }
    let floor_rate = 4.0 * code_rate;

    let mut rows: Vec<LutRow> = (lo..=hi)
        .into_par_iter()
        .map(|levels| -> Result<Option<LutRow>> {
            let trellis = build_trellis(alphabet, block_len, levels)?;
            let cb = analyze(&trellis)?;
            if cb.rate() <= 0.0 {
                return Ok(None);
            }
            let scheme = PcsScheme::shaped(bits_per_2d, code_rate, &cb)?;
            let net_rate = scheme.total_net_rate();
            if net_rate < floor_rate - 1e-9 {
                return Ok(None);
            }
            let thr = snr_threshold(&scheme, net_rate, seed, &spec.mc)?;
            Ok(Some(LutRow {
                mode: LutMode::Ess { levels },
                dm_rate: cb.rate(),
                rate_loss: cb.rate_loss(),
                net_rate,
                snr_threshold_db: thr,
            }))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    if spec.include_endpoints {
        rows.extend(endpoint_rows(bits_per_2d, code_rate, spec, seed)?);
    }
    RateLut::from_rows(rows, bits_per_2d, code_rate)
}

/// Build the CCDM-based LUT over a geometric λ grid, same endpoints.
pub fn build_ccdm_lut(
    alphabet: &AmplitudeAlphabet,
    block_len: usize,
    bits_per_2d: usize,
    code_rate: f64,
    lambda_range: (f64, f64),
    steps: usize,
    spec: &LutBuildSpec,
    seed: RngSeed,
) -> Result<RateLut> {
    let (lo, hi) = lambda_range;
    if !(lo > 0.0 && hi > lo) || steps < 2 {
        return Err(Error::InvalidInput("bad lambda range".into()));
    }
    let floor_rate = 4.0 * code_rate;
    let ratio = (hi / lo).powf(1.0 / (steps - 1) as f64);

    let mut rows: Vec<LutRow> = (0..steps)
        .into_par_iter()
        .map(|i| -> Result<Option<LutRow>> {
            let lambda = lo * ratio.powi(i as i32);
            let cb = CcdmCodebook::from_lambda(alphabet, block_len, lambda)?;
            if cb.rate() <= 0.0 {
                return Ok(None);
            }
            // CCDM shapes through the composition: the per-symbol
            // distribution handed to the modem is the composition itself.
            let comp = cb.composition();
            let n = comp.block_len() as f64;
            let probs: Vec<f64> = comp.counts().iter().map(|&c| c as f64 / n).collect();
            let scheme = PcsScheme::shaped_from_distribution(
                bits_per_2d,
                code_rate,
                alphabet,
                &probs,
                cb.rate(),
                cb.rate_loss(),
            )?;
            let net_rate = scheme.total_net_rate();
            if net_rate < floor_rate - 1e-9 {
                return Ok(None);
            }
            let thr = snr_threshold(&scheme, net_rate, seed, &spec.mc)?;
            Ok(Some(LutRow {
                mode: LutMode::Ccdm { lambda },
                dm_rate: cb.rate(),
                rate_loss: cb.rate_loss(),
                net_rate,
                snr_threshold_db: thr,
            }))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    if spec.include_endpoints {
        rows.extend(endpoint_rows(bits_per_2d, code_rate, spec, seed)?);
    }
    RateLut::from_rows(rows, bits_per_2d, code_rate)
}

fn endpoint_rows(
    bits_per_2d: usize,
    code_rate: f64,
    spec: &LutBuildSpec,
    seed: RngSeed,
) -> Result<Vec<LutRow>> {
    let qpsk = PcsScheme::qpsk(code_rate)?;
    let qpsk_rate = qpsk.total_net_rate();
    let uniform = PcsScheme::uniform(bits_per_2d, code_rate)?;
    let uniform_rate = uniform.total_net_rate();
    let thr_qpsk = snr_threshold(&qpsk, qpsk_rate, seed, &spec.mc)?;
    let thr_uniform = snr_threshold(&uniform, uniform_rate, seed, &spec.mc)?;
    Ok(vec![
        LutRow {
            mode: LutMode::QpskFloor,
            dm_rate: 0.0,
            rate_loss: 0.0,
            net_rate: qpsk_rate,
            snr_threshold_db: thr_qpsk,
        },
        LutRow {
            mode: LutMode::UniformCap,
            dm_rate: (bits_per_2d as f64 - 2.0) / 2.0,
            rate_loss: 0.0,
            net_rate: uniform_rate,
            snr_threshold_db: thr_uniform,
        },
    ])
}

/// Monotone interpolant of net rate versus SNR, sampled on a 0.1 dB grid
/// spanning [thr_min - 2 dB, thr_max + 5 dB] and clamped to
/// [0, max net rate]. Below the lowest threshold no mode transmits, so
/// the curve is zero there.
#[derive(Debug, Clone)]
pub struct NetRateCurve {
    grid_lo: f64,
    step: f64,
    values: Vec<f64>,
    thr_min: f64,
    thr_max: f64,
    r_max: f64,
}

impl NetRateCurve {
    fn from_rows(rows: &[LutRow]) -> NetRateCurve {
        // Upper envelope: sort by threshold, keep strictly improving rows.
        let mut pts: Vec<(f64, f64)> =
            rows.iter().map(|r| (r.snr_threshold_db, r.net_rate)).collect();
        pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(b.1.partial_cmp(&a.1).unwrap()));
        let mut envelope: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
        for (x, y) in pts {
            match envelope.last() {
                None => envelope.push((x, y)),
                Some(&(lx, ly)) => {
                    if y > ly {
                        if x > lx + 1e-9 {
                            envelope.push((x, y));
                        } else {
                            envelope.last_mut().unwrap().1 = y;
                        }
                    }
                }
            }
        }
        let thr_min = envelope.first().map(|p| p.0).unwrap_or(0.0);
        let thr_max = envelope.last().map(|p| p.0).unwrap_or(0.0);
        let r_max = envelope.last().map(|p| p.1).unwrap_or(0.0);

        let xs: Vec<f64> = envelope.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = envelope.iter().map(|p| p.1).collect();
        let slopes = pchip_slopes(&xs, &ys);

        let grid_lo = thr_min - 2.0;
        let step = 0.1;
        let n = ((thr_max + 5.0 - grid_lo) / step).ceil() as usize + 1;
        let values: Vec<f64> = (0..n)
            .map(|i| {
                let x = grid_lo + i as f64 * step;
                if x < thr_min {
                    0.0
                } else if x >= thr_max {
                    r_max
                } else {
                    pchip_eval(&xs, &ys, &slopes, x).clamp(0.0, r_max)
                }
            })
            .collect();
        NetRateCurve { grid_lo, step, values, thr_min, thr_max, r_max }
    }

    /// Net rate achievable at `snr_db`.
    pub fn eval(&self, snr_db: f64) -> f64 {
        if snr_db < self.thr_min {
            return 0.0;
        }
        if snr_db >= self.thr_max {
            return self.r_max;
        }
        let t = (snr_db - self.grid_lo) / self.step;
        let i = (t.floor() as usize).min(self.values.len() - 2);
        let frac = t - i as f64;
        self.values[i] + frac * (self.values[i + 1] - self.values[i])
    }

    pub fn max_rate(&self) -> f64 {
        self.r_max
    }

    pub fn thr_min_db(&self) -> f64 {
        self.thr_min
    }

    pub fn thr_max_db(&self) -> f64 {
        self.thr_max
    }
}

/// Fritsch-Carlson monotone cubic slopes.
fn pchip_slopes(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    if n == 1 {
        return vec![0.0];
    }
    let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = ys.windows(2).zip(&h).map(|(w, &hi)| (w[1] - w[0]) / hi).collect();
    let mut m = vec![0.0; n];
    m[0] = delta[0];
    m[n - 1] = delta[n - 2];
    for i in 1..n - 1 {
        if delta[i - 1] * delta[i] <= 0.0 {
            m[i] = 0.0;
        } else {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            m[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    m
}

fn pchip_eval(xs: &[f64], ys: &[f64], slopes: &[f64], x: f64) -> f64 {
    let n = xs.len();
    if n == 1 {
        return ys[0];
    }
    let mut i = match xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
        Ok(i) => i,
        Err(i) => i.saturating_sub(1),
    };
    if i >= n - 1 {
        i = n - 2;
    }
    let h = xs[i + 1] - xs[i];
    let t = (x - xs[i]) / h;
    let h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
    let h10 = t * (1.0 - t) * (1.0 - t);
    let h01 = t * t * (3.0 - 2.0 * t);
    let h11 = t * t * (t - 1.0);
    h00 * ys[i] + h10 * h * slopes[i] + h01 * ys[i + 1] + h11 * h * slopes[i + 1]
}
