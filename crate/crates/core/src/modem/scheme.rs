//! Sign-amplitude PCS-M-QAM schemes and symbol mapping.
//!
//! Per real dimension the constellation is ±a for alphabet amplitudes a,
//! labeled with one sign bit plus Gray-coded amplitude bits. Four real
//! dimensions (I/Q of two polarizations) form one 4D symbol; amplitudes
//! are shaped, sign bits are uniform.

use crate::dm::{entropy_bits, DmCodebook};
use crate::error::{Error, Result};

/// One point of the per-dimension ASK constellation.
#[derive(Debug, Clone, Copy)]
pub struct AskPoint {
    pub value: f64,
    pub prob: f64,
    pub label: u8,
}

/// A PCS (or uniform) M-QAM transmission scheme.
#[derive(Debug, Clone)]
pub struct PcsScheme {
    bits_per_2d: usize,
    code_rate: f64,
    dm_rate: f64,
    rate_loss: f64,
    amplitudes: Vec<u32>,
    amp_probs: Vec<f64>,
    norm: f64,
    points: Vec<AskPoint>,
}

impl PcsScheme {
    /// Shaped scheme around a distribution matcher. `bits_per_2d` is
    /// log2 M of the underlying QAM (6 for 64QAM).
    pub fn shaped(bits_per_2d: usize, code_rate: f64, dm: &DmCodebook) -> Result<Self> {
        let amp_bits = bits_per_2d / 2 - 1;
        if bits_per_2d % 2 != 0 || bits_per_2d < 4 {
            return Err(Error::InvalidScheme(format!(
                "bits_per_2d must be an even number >= 4 for shaped schemes, got {bits_per_2d}"
            )));
        }
        if dm.alphabet().len() != 1 << amp_bits {
            return Err(Error::InvalidScheme(format!(
                "alphabet size {} does not match {} amplitude bits",
                dm.alphabet().len(),
                amp_bits
            )));
        }
        Self::build(
            bits_per_2d,
            code_rate,
            dm.rate(),
            dm.rate_loss(),
            dm.alphabet().amplitudes().to_vec(),
            dm.induced_dist().to_vec(),
        )
    }

    /// Shaped scheme from an explicit per-dimension amplitude
    /// distribution (e.g. a CCDM composition), with the matcher's rate
    /// and rate loss supplied by the caller.
    pub fn shaped_from_distribution(
        bits_per_2d: usize,
        code_rate: f64,
        alphabet: &crate::dm::AmplitudeAlphabet,
        amp_probs: &[f64],
        dm_rate: f64,
        rate_loss: f64,
    ) -> Result<Self> {
        if bits_per_2d % 2 != 0 || bits_per_2d < 4 {
            return Err(Error::InvalidScheme(format!(
                "bits_per_2d must be an even number >= 4 for shaped schemes, got {bits_per_2d}"
            )));
        }
        if alphabet.len() != 1 << (bits_per_2d / 2 - 1) {
            return Err(Error::InvalidScheme("alphabet size mismatch".into()));
        }
        if amp_probs.len() != alphabet.len() {
            return Err(Error::InvalidScheme("distribution length mismatch".into()));
        }
        Self::build(
            bits_per_2d,
            code_rate,
            dm_rate,
            rate_loss,
            alphabet.amplitudes().to_vec(),
            amp_probs.to_vec(),
        )
    }

    /// Uniform M-QAM: no shaping, R_DM fixed at (m-2)/2, zero rate loss.
    /// `bits_per_2d = 2` is the 4D-QPSK fallback (sign bits only).
    pub fn uniform(bits_per_2d: usize, code_rate: f64) -> Result<Self> {
        if bits_per_2d % 2 != 0 || bits_per_2d < 2 {
            return Err(Error::InvalidScheme(format!(
                "bits_per_2d must be even and >= 2, got {bits_per_2d}"
            )));
        }
        let n_amps = 1usize << (bits_per_2d / 2 - 1);
        let amplitudes: Vec<u32> = (0..n_amps).map(|i| 2 * i as u32 + 1).collect();
        let probs = vec![1.0 / n_amps as f64; n_amps];
        Self::build(
            bits_per_2d,
            code_rate,
            (bits_per_2d as f64 - 2.0) / 2.0,
            0.0,
            amplitudes,
            probs,
        )
    }

    /// The 4D-QPSK fallback mode.
    pub fn qpsk(code_rate: f64) -> Result<Self> {
        Self::uniform(2, code_rate)
    }

    fn build(
        bits_per_2d: usize,
        code_rate: f64,
        dm_rate: f64,
        rate_loss: f64,
        amplitudes: Vec<u32>,
        amp_probs: Vec<f64>,
    ) -> Result<Self> {
        let m = bits_per_2d as f64;
        if !(code_rate >= (m - 2.0) / m - 1e-12 && code_rate < 1.0) {
            return Err(Error::InvalidScheme(format!(
                "code rate {code_rate} outside [(m-2)/m, 1) = [{}, 1)",
                (m - 2.0) / m
            )));
        }
        if bits_per_2d > 2 && !(dm_rate > 0.0 && dm_rate <= (m - 2.0) / 2.0 + 1e-12) {
            return Err(Error::InvalidScheme(format!(
                "DM rate {dm_rate} outside (0, (m-2)/2] = (0, {}]",
                (m - 2.0) / 2.0
            )));
        }
        let mean_energy: f64 = amplitudes
            .iter()
            .zip(&amp_probs)
            .map(|(&a, &p)| p * (a as f64) * (a as f64))
            .sum();
        // Unit average energy per 2D symbol: E[x²] = 1/2 per dimension.
        let norm = 1.0 / (2.0 * mean_energy).sqrt();

        let amp_bits = bits_per_2d / 2 - 1;
        let mut points = Vec::new();
        for (i, (&a, &p)) in amplitudes.iter().zip(&amp_probs).enumerate() {
            if p <= 0.0 {
                continue; // unreachable amplitude under this shaping
            }
            let gray = (i ^ (i >> 1)) as u8;
            for sign in 0..2u8 {
                points.push(AskPoint {
                    value: if sign == 0 { a as f64 * norm } else { -(a as f64) * norm },
                    prob: p / 2.0,
                    // bit 0: sign, bits 1..: Gray-coded amplitude index
                    label: sign | (gray << 1),
                });
            }
        }
        let _ = amp_bits;
        Ok(PcsScheme {
            bits_per_2d,
            code_rate,
            dm_rate,
            rate_loss,
            amplitudes,
            amp_probs,
            norm,
            points,
        })
    }

    pub fn bits_per_2d(&self) -> usize {
        self.bits_per_2d
    }

    /// Bits per 1D constellation point (sign + amplitude bits).
    pub fn bits_per_1d(&self) -> usize {
        self.bits_per_2d / 2
    }

    pub fn code_rate(&self) -> f64 {
        self.code_rate
    }

    pub fn dm_rate(&self) -> f64 {
        self.dm_rate
    }

    pub fn rate_loss(&self) -> f64 {
        self.rate_loss
    }

    pub fn amplitudes(&self) -> &[u32] {
        &self.amplitudes
    }

    pub fn amp_probs(&self) -> &[f64] {
        &self.amp_probs
    }

    /// Energy normalization factor applied to raw amplitudes.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub(crate) fn points(&self) -> &[AskPoint] {
        &self.points
    }

    /// Source entropy per 1D: one uniform sign bit plus the shaped
    /// amplitude entropy.
    pub fn entropy_per_1d(&self) -> f64 {
        1.0 + entropy_bits(&self.amp_probs)
    }

    /// Net data rate of the 4D scheme:
    /// R_tot = 4 + 4 R_DM - 2m(1 - R_C) bits per 4D symbol.
    pub fn total_net_rate(&self) -> f64 {
        4.0 + 4.0 * self.dm_rate - 2.0 * self.bits_per_2d as f64 * (1.0 - self.code_rate)
    }
}

/// Map amplitude and sign streams to normalized 4D symbols; four
/// (amplitude, sign) pairs per symbol, sign bit 1 flips to the negative
/// rail.
pub fn map_symbols(
    scheme: &PcsScheme,
    amplitudes: &[u32],
    sign_bits: &[bool],
) -> Result<Vec<[f64; 4]>> {
    if amplitudes.len() != sign_bits.len() {
        return Err(Error::LengthMismatch(format!(
            "{} amplitudes vs {} sign bits",
            amplitudes.len(),
            sign_bits.len()
        )));
    }
    if amplitudes.len() % 4 != 0 {
        return Err(Error::LengthMismatch(format!(
            "stream length {} is not a multiple of 4",
            amplitudes.len()
        )));
    }
    let mut out = Vec::with_capacity(amplitudes.len() / 4);
    for (quad_a, quad_s) in amplitudes.chunks_exact(4).zip(sign_bits.chunks_exact(4)) {
        let mut sym = [0.0f64; 4];
        for (d, (&a, &s)) in quad_a.iter().zip(quad_s).enumerate() {
            if scheme.amplitudes.binary_search(&a).is_err() {
                return Err(Error::InvalidInput(format!("amplitude {a} not in scheme alphabet")));
            }
            let v = a as f64 * scheme.norm;
            sym[d] = if s { -v } else { v };
        }
        out.push(sym);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dm::{analyze, build_trellis, AmplitudeAlphabet};
    use approx::assert_relative_eq;

    fn shaped_scheme() -> PcsScheme {
        let t = build_trellis(&AmplitudeAlphabet::four_level(), 108, 150).unwrap();
        let cb = analyze(&t).unwrap();
        PcsScheme::shaped(6, 5.0 / 6.0, &cb).unwrap()
    }

    #[test]
    fn net_rate_formula() {
        // m=6, R_C=5/6: R_tot = 4 R_DM + 12 R_C - 8
        let uni = PcsScheme::uniform(6, 5.0 / 6.0).unwrap();
        assert_relative_eq!(uni.total_net_rate(), 10.0, epsilon = 1e-12);
        let qpsk = PcsScheme::qpsk(5.0 / 6.0).unwrap();
        assert_relative_eq!(qpsk.total_net_rate(), 10.0 / 3.0, epsilon = 1e-12);
        let lower = PcsScheme::uniform(6, 2.0 / 3.0).unwrap();
        assert_relative_eq!(lower.total_net_rate(), 8.0, epsilon = 1e-12);
    }

    #[test]
    fn rate_bounds_enforced() {
        // R_C below (m-2)/m
        assert!(PcsScheme::uniform(6, 0.5).is_err());
        assert!(PcsScheme::uniform(6, 1.0).is_err());
        // Alphabet size must match the amplitude bits.
        let t = build_trellis(&AmplitudeAlphabet::two_level(), 8, 4).unwrap();
        let cb = analyze(&t).unwrap();
        assert!(PcsScheme::shaped(6, 5.0 / 6.0, &cb).is_err());
        assert!(PcsScheme::shaped(4, 5.0 / 6.0, &cb).is_ok());
    }

    #[test]
    fn gray_labels_adjacent_amplitudes() {
        let s = PcsScheme::uniform(6, 5.0 / 6.0).unwrap();
        // Amplitude labels of +1,+3,+5,+7 differ in exactly one bit
        // between adjacent levels.
        let levels: Vec<u8> = s
            .points()
            .iter()
            .filter(|p| p.value > 0.0)
            .map(|p| p.label >> 1)
            .collect();
        assert_eq!(levels.len(), 4);
        for w in levels.windows(2) {
            assert_eq!((w[0] ^ w[1]).count_ones(), 1);
        }
    }

    #[test]
    fn sign_mapping() {
        let s = shaped_scheme();
        let syms = map_symbols(&s, &[3, 1, 1, 1], &[true, false, false, false]).unwrap();
        assert_relative_eq!(syms[0][0], -3.0 * s.norm(), epsilon = 1e-15);
        assert!(syms[0][1] > 0.0);
        let all_plus_one = map_symbols(&s, &[1; 4], &[false; 4]).unwrap();
        for d in 0..4 {
            assert_relative_eq!(all_plus_one[0][d], s.norm(), epsilon = 1e-15);
        }
    }

    #[test]
    fn mapping_length_checks() {
        let s = shaped_scheme();
        assert!(matches!(
            map_symbols(&s, &[1, 1], &[false]),
            Err(Error::LengthMismatch(_))
        ));
        assert!(matches!(
            map_symbols(&s, &[1, 1, 1], &[false, false, false]),
            Err(Error::LengthMismatch(_))
        ));
        assert!(map_symbols(&s, &[2, 1, 1, 1], &[false; 4]).is_err());
    }

    #[test]
    fn unit_energy_normalization() {
        let s = shaped_scheme();
        // E[x²] per dimension is 1/2, so one 2D symbol has unit energy.
        let e1d: f64 = s.points().iter().map(|p| p.prob * p.value * p.value).sum();
        assert_relative_eq!(e1d, 0.5, epsilon = 1e-12);
    }
}
