//! Enumerative sphere shaping.
//!
//! A bounded-energy trellis over amplitude sequences of length `N`: node
//! (n, e) holds the exact number of ways to finish a sequence from column
//! `n` at cumulative energy `e`. Energies in column n are `e = n + 8l`
//! with level `l in 0..levels`, since odd amplitudes step the energy by
//! `a² = 1 + 8w`. Counts are exact big integers: at N = 108 and
//! `levels = 271` the path count has a few hundred bits.
//!
//! Encoding maps a k-bit index to the sequence of that lexicographic rank
//! (alphabet ascending); decoding is the inverse rank computation.

use num::bigint::BigInt;
use num::rational::Ratio;
use num::traits::ToPrimitive;
use num::BigUint;
use num::Zero;
use rayon::prelude::*;

use super::alphabet::AmplitudeAlphabet;
use super::mb::mb_entropy_for_energy;
use crate::error::{Error, Result};

/// Bounded-energy enumerative trellis with exact path counts.
#[derive(Debug, Clone)]
pub struct ShapingTrellis {
    alphabet: AmplitudeAlphabet,
    block_len: usize,
    levels: usize,
    /// counts[n][l] = number of completions from column n, level l.
    counts: Vec<Vec<BigUint>>,
}

impl ShapingTrellis {
    pub fn alphabet(&self) -> &AmplitudeAlphabet {
        &self.alphabet
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    /// Number of energy levels L.
    pub fn levels(&self) -> usize {
        self.levels
    }

    /// Maximum sequence energy: 8(L-1) + N.
    pub fn e_max(&self) -> usize {
        8 * (self.levels - 1) + self.block_len
    }

    /// Exact path count at node (column, energy); zero off the trellis.
    pub fn path_count(&self, column: usize, energy: usize) -> BigUint {
        if column > self.block_len || energy < column || (energy - column) % 8 != 0 {
            return BigUint::zero();
        }
        let level = (energy - column) / 8;
        if level >= self.levels {
            return BigUint::zero();
        }
        self.counts[column][level].clone()
    }

    /// Total number of sequences, T_0^0.
    pub fn total_sequences(&self) -> &BigUint {
        &self.counts[0][0]
    }

    fn count(&self, column: usize, level: usize) -> &BigUint {
        &self.counts[column][level]
    }
}

/// Build the trellis for `block_len` amplitudes and `levels` energy
/// levels. Counts satisfy T_N^e = 1 and T_n^e = Σ_a T_{n+1}^{e+a²}.
pub fn build_trellis(
    alphabet: &AmplitudeAlphabet,
    block_len: usize,
    levels: usize,
) -> Result<ShapingTrellis> {
    if block_len == 0 {
        return Err(Error::InvalidInput("block length must be >= 1".into()));
    }
    if levels == 0 {
        return Err(Error::InvalidInput("level count must be >= 1".into()));
    }
    let weights = alphabet.level_weights();
    let mut counts = vec![vec![BigUint::zero(); levels]; block_len + 1];
    for l in 0..levels {
        counts[block_len][l] = BigUint::from(1u32);
    }
    for n in (0..block_len).rev() {
        for l in 0..levels {
            let mut sum = BigUint::zero();
            for &w in &weights {
                if l + w < levels {
                    sum += &counts[n + 1][l + w];
                }
            }
            counts[n][l] = sum;
        }
    }
    Ok(ShapingTrellis { alphabet: alphabet.clone(), block_len, levels, counts })
}

/// A distribution-matcher instance derived from a trellis.
#[derive(Debug, Clone)]
pub struct DmCodebook {
    trellis: ShapingTrellis,
    k_bits: usize,
    rate: f64,
    induced_dist: Vec<f64>,
    avg_energy: f64,
    mb_entropy: f64,
    rate_loss: f64,
}

impl DmCodebook {
    pub fn trellis(&self) -> &ShapingTrellis {
        &self.trellis
    }

    pub fn alphabet(&self) -> &AmplitudeAlphabet {
        self.trellis.alphabet()
    }

    pub fn block_len(&self) -> usize {
        self.trellis.block_len()
    }

    /// Input bits per block, k = floor(log2 T_0^0).
    pub fn k_bits(&self) -> usize {
        self.k_bits
    }

    /// R_DM = k / N in bits per amplitude.
    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// First-symbol marginal P_A(a) = T_1^{a²} / T_0^0.
    pub fn induced_dist(&self) -> &[f64] {
        &self.induced_dist
    }

    /// E_av = N Σ P_A(a) a².
    pub fn avg_energy(&self) -> f64 {
        self.avg_energy
    }

    /// Entropy of the MB distribution matched to E_av / N.
    pub fn mb_entropy(&self) -> f64 {
        self.mb_entropy
    }

    /// R_loss = H(A_MB) - R_DM, bits per amplitude.
    pub fn rate_loss(&self) -> f64 {
        self.rate_loss
    }
}

/// Rate and distribution analytics of a trellis.
pub fn analyze(trellis: &ShapingTrellis) -> Result<DmCodebook> {
    let n = trellis.block_len();
    let total = trellis.total_sequences().clone();
    let k_bits = (total.bits() - 1) as usize;
    let rate = k_bits as f64 / n as f64;

    let weights = trellis.alphabet().level_weights();
    let induced_dist: Vec<f64> = weights
        .iter()
        .map(|&w| {
            if w < trellis.levels() {
                big_ratio(trellis.count(1, w), &total)
            } else {
                0.0
            }
        })
        .collect();

    let per_symbol_energy: f64 = trellis
        .alphabet()
        .amplitudes()
        .iter()
        .zip(&induced_dist)
        .map(|(&a, &p)| p * (a as f64) * (a as f64))
        .sum();
    let avg_energy = n as f64 * per_symbol_energy;
    let mb_entropy = mb_entropy_for_energy(trellis.alphabet(), per_symbol_energy)?;
    let rate_loss = mb_entropy - rate;

    Ok(DmCodebook {
        trellis: trellis.clone(),
        k_bits,
        rate,
        induced_dist,
        avg_energy,
        mb_entropy,
        rate_loss,
    })
}

fn big_ratio(num: &BigUint, den: &BigUint) -> f64 {
    Ratio::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
        .to_f64()
        .expect("finite ratio")
}

/// Map `k_bits` input bits (MSB first) to the amplitude sequence of that
/// lexicographic index.
pub fn ess_encode(codebook: &DmCodebook, bits: &[bool]) -> Result<Vec<u32>> {
    if bits.len() != codebook.k_bits {
        return Err(Error::WrongBitLength { expected: codebook.k_bits, got: bits.len() });
    }
    let mut index = BigUint::zero();
    for &b in bits {
        index <<= 1;
        if b {
            index += 1u32;
        }
    }
    let trellis = &codebook.trellis;
    let weights = trellis.alphabet().level_weights();
    let amps = trellis.alphabet().amplitudes();
    let mut out = Vec::with_capacity(trellis.block_len());
    let mut level = 0usize;
    for n in 0..trellis.block_len() {
        let mut chosen = None;
        for (i, &w) in weights.iter().enumerate() {
            if level + w >= trellis.levels() {
                break; // heavier amplitudes only move further off-trellis
            }
            let c = trellis.count(n + 1, level + w);
            if &index < c {
                chosen = Some(i);
                break;
            }
            index -= c;
        }
        let i = chosen.expect("index < T_0^0 guarantees a branch");
        out.push(amps[i]);
        level += weights[i];
    }
    Ok(out)
}

/// Inverse of [`ess_encode`]: recover the bit index of a codeword.
pub fn ess_decode(codebook: &DmCodebook, amps: &[u32]) -> Result<Vec<bool>> {
    let trellis = &codebook.trellis;
    if amps.len() != trellis.block_len() {
        return Err(Error::InvalidCodeword(format!(
            "expected {} amplitudes, got {}",
            trellis.block_len(),
            amps.len()
        )));
    }
    let weights = trellis.alphabet().level_weights();
    let mut symbol_indices = Vec::with_capacity(amps.len());
    let mut total_level = 0usize;
    for &a in amps {
        let i = trellis
            .alphabet()
            .index_of(a)
            .ok_or_else(|| Error::InvalidCodeword(format!("amplitude {a} not in alphabet")))?;
        symbol_indices.push(i);
        total_level += weights[i];
    }
    if total_level >= trellis.levels() {
        return Err(Error::InvalidCodeword(format!(
            "sequence energy {} exceeds E_max {}",
            trellis.block_len() + 8 * total_level,
            trellis.e_max()
        )));
    }

    let mut rank = BigUint::zero();
    let mut level = 0usize;
    for (n, &i) in symbol_indices.iter().enumerate() {
        for (j, &w) in weights.iter().enumerate().take(i) {
            debug_assert!(j < i);
            if level + w < trellis.levels() {
                rank += trellis.count(n + 1, level + w);
            }
        }
        level += weights[i];
    }

    if rank.bits() as usize > codebook.k_bits {
        return Err(Error::IndexOutOfRange {
            index: rank.to_string(),
            k_bits: codebook.k_bits,
        });
    }
    let mut bits = vec![false; codebook.k_bits];
    for (pos, bit) in bits.iter_mut().rev().enumerate() {
        *bit = rank.bit(pos as u64);
    }
    Ok(bits)
}

/// One row of a rate sweep over the shaping parameter L.
#[derive(Debug, Clone)]
pub struct RateSweepRow {
    pub levels: usize,
    pub e_max: usize,
    pub k_bits: usize,
    pub rate: f64,
    pub rate_loss: f64,
    pub induced_dist: Vec<f64>,
}

/// Rate and rate loss for every L in `l_range` (inclusive).
pub fn rate_sweep(
    alphabet: &AmplitudeAlphabet,
    block_len: usize,
    l_range: (usize, usize),
) -> Result<Vec<RateSweepRow>> {
    let (lo, hi) = l_range;
    if lo < 1 || hi < lo {
        return Err(Error::InvalidInput(format!("bad L range [{lo}, {hi}]")));
    }
    (lo..=hi)
        .into_par_iter()
        .map(|levels| {
            let trellis = build_trellis(alphabet, block_len, levels)?;
            let cb = analyze(&trellis)?;
            Ok(RateSweepRow {
                levels,
                e_max: trellis.e_max(),
                k_bits: cb.k_bits(),
                rate: cb.rate(),
                rate_loss: cb.rate_loss(),
                induced_dist: cb.induced_dist().to_vec(),
            })
        })
        .collect()
}

/// CSV header matching [`RateSweepRow::csv_row`].
pub fn sweep_csv_header(alphabet: &AmplitudeAlphabet) -> String {
    let mut s = String::from("L,e_max,k_bits,r_dm,r_loss");
    for a in alphabet.amplitudes() {
        s.push_str(&format!(",p_a{a}"));
    }
    s
}

impl RateSweepRow {
    pub fn csv_row(&self) -> String {
        let mut s = format!(
            "{},{},{},{:.6},{:.6}",
            self.levels, self.e_max, self.k_bits, self.rate, self.rate_loss
        );
        for p in &self.induced_dist {
            s.push_str(&format!(",{p:.6}"));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fig1_codebook() -> DmCodebook {
        // A = {1, 3}, N = 4, L = 3 (E_max = 20)
        let t = build_trellis(&AmplitudeAlphabet::two_level(), 4, 3).unwrap();
        analyze(&t).unwrap()
    }

    #[test]
    fn worked_example_counts() {
        let cb = fig1_codebook();
        let t = cb.trellis();
        assert_eq!(t.e_max(), 20);
        assert_eq!(t.total_sequences(), &BigUint::from(11u32));
        assert_eq!(t.path_count(3, 11), BigUint::from(2u32));
        assert_eq!(t.path_count(1, 1), BigUint::from(7u32));
        assert_eq!(cb.k_bits(), 3);
    }

    #[test]
    fn worked_example_analytics() {
        let cb = fig1_codebook();
        assert_relative_eq!(cb.rate(), 0.75, epsilon = 1e-15);
        assert_relative_eq!(cb.induced_dist()[0], 7.0 / 11.0, epsilon = 1e-12);
        assert_relative_eq!(cb.induced_dist()[1], 4.0 / 11.0, epsilon = 1e-12);
        assert_relative_eq!(cb.avg_energy(), 172.0 / 11.0, epsilon = 1e-9);
        // H of the matched MB distribution is exactly H((7/11, 4/11)).
        let h = -(7.0 / 11.0f64) * (7.0 / 11.0f64).log2() - (4.0 / 11.0f64) * (4.0 / 11.0f64).log2();
        assert_relative_eq!(cb.mb_entropy(), h, epsilon = 1e-10);
        assert_relative_eq!(cb.rate_loss(), h - 0.75, epsilon = 1e-10);
    }

    #[test]
    fn degenerate_single_path() {
        let t = build_trellis(&AmplitudeAlphabet::two_level(), 1, 1).unwrap();
        assert_eq!(t.e_max(), 1);
        assert_eq!(t.total_sequences(), &BigUint::from(1u32));
        let cb = analyze(&t).unwrap();
        assert_eq!(cb.k_bits(), 0);
        assert_eq!(cb.rate(), 0.0);
        assert_eq!(cb.induced_dist(), &[1.0, 0.0]);
        assert_relative_eq!(cb.avg_energy(), 1.0, epsilon = 1e-15);
        assert_eq!(cb.mb_entropy(), 0.0);
        assert_eq!(cb.rate_loss(), 0.0);
        // The unique sequence encodes the empty bit string.
        assert_eq!(ess_encode(&cb, &[]).unwrap(), vec![1]);
    }

    #[test]
    fn zero_block_length_rejected() {
        assert!(build_trellis(&AmplitudeAlphabet::two_level(), 0, 3).is_err());
    }

    #[test]
    fn index_zero_is_all_ones() {
        let cb = fig1_codebook();
        assert_eq!(ess_encode(&cb, &[false, false, false]).unwrap(), vec![1, 1, 1, 1]);
        assert_eq!(
            ess_decode(&cb, &[1, 1, 1, 1]).unwrap(),
            vec![false, false, false]
        );
    }

    #[test]
    fn eight_indices_distinct_and_bounded() {
        let cb = fig1_codebook();
        let mut seen = Vec::new();
        for idx in 0..8u8 {
            let bits = [(idx >> 2) & 1 == 1, (idx >> 1) & 1 == 1, idx & 1 == 1];
            let seq = ess_encode(&cb, &bits).unwrap();
            let energy: u32 = seq.iter().map(|a| a * a).sum();
            assert!(energy <= 20);
            assert!(matches!(energy, 4 | 12 | 20));
            assert!(!seen.contains(&seq));
            seen.push(seq);
        }
    }

    #[test]
    fn out_of_range_distinct_from_invalid() {
        let cb = fig1_codebook();
        // (3,3,1,1) has energy 20 (a valid path) but lexicographic rank 10 >= 8.
        match ess_decode(&cb, &[3, 3, 1, 1]) {
            Err(Error::IndexOutOfRange { k_bits, .. }) => assert_eq!(k_bits, 3),
            other => panic!("expected IndexOutOfRange, got {other:?}"),
        }
        // (3,3,3,1) has energy 28 > 20: not a codeword at all.
        assert!(matches!(ess_decode(&cb, &[3, 3, 3, 1]), Err(Error::InvalidCodeword(_))));
        // Amplitude outside the alphabet.
        assert!(matches!(ess_decode(&cb, &[5, 1, 1, 1]), Err(Error::InvalidCodeword(_))));
        // Wrong length.
        assert!(matches!(ess_decode(&cb, &[1, 1, 1]), Err(Error::InvalidCodeword(_))));
    }

    #[test]
    fn wrong_bit_length() {
        let cb = fig1_codebook();
        assert!(matches!(
            ess_encode(&cb, &[true, false]),
            Err(Error::WrongBitLength { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn sweep_small_two_level() {
        let rows = rate_sweep(&AmplitudeAlphabet::two_level(), 4, (1, 3)).unwrap();
        assert_eq!(rows.len(), 3);
        // Monotone nondecreasing rate in L; last row is the Fig.-1 point.
        assert!(rows.windows(2).all(|w| w[1].rate >= w[0].rate));
        assert_relative_eq!(rows[2].rate, 0.75, epsilon = 1e-15);
        // L=1: only the all-ones sequence; L=2: 1 + 4 sequences -> k=2.
        assert_eq!(rows[0].k_bits, 0);
        assert_eq!(rows[1].k_bits, 2);
    }
}
