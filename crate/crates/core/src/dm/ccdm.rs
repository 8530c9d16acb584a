//! Constant-composition distribution matching.
//!
//! Sequences carry a fixed per-amplitude symbol count; the bit index is
//! the exact lexicographic rank among all arrangements of that multiset,
//! computed with unbounded integers. This realizes the same bijection an
//! arithmetic-coding matcher would, without finite-precision bookkeeping.

use num::bigint::BigInt;
use num::rational::Ratio;
use num::traits::ToPrimitive;
use num::{BigUint, Zero};
use rayon::prelude::*;

use super::alphabet::AmplitudeAlphabet;
use super::mb::{entropy_bits, mb_distribution, mb_entropy_for_energy};
use crate::error::{Error, Result};

/// Fixed symbol composition of a block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Composition {
    alphabet: AmplitudeAlphabet,
    counts: Vec<usize>,
}

impl Composition {
    pub fn new(alphabet: AmplitudeAlphabet, counts: Vec<usize>) -> Result<Self> {
        if counts.len() != alphabet.len() {
            return Err(Error::InvalidInput(format!(
                "composition needs {} counts, got {}",
                alphabet.len(),
                counts.len()
            )));
        }
        if counts.iter().sum::<usize>() == 0 {
            return Err(Error::InvalidInput("composition must be nonempty".into()));
        }
        Ok(Composition { alphabet, counts })
    }

    pub fn alphabet(&self) -> &AmplitudeAlphabet {
        &self.alphabet
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn block_len(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Mean symbol energy Σ n_a a² / N.
    pub fn mean_energy(&self) -> f64 {
        let n = self.block_len() as f64;
        self.alphabet
            .amplitudes()
            .iter()
            .zip(&self.counts)
            .map(|(&a, &c)| c as f64 * (a as f64) * (a as f64))
            .sum::<f64>()
            / n
    }

    /// Exact number of distinct arrangements, N! / Π n_a!.
    pub fn multinomial(&self) -> BigUint {
        let mut m = BigUint::from(1u32);
        let mut placed = 0usize;
        for &c in &self.counts {
            // multiply by C(placed + c, c)
            for i in 1..=c {
                m = m * BigUint::from(placed + i) / BigUint::from(i);
            }
            placed += c;
        }
        m
    }
}

/// Integer composition closest to `dist`: floor everything, then hand the
/// remaining symbols to the largest fractional parts, ties to the lower
/// amplitude. This is the KL-minimizing rounding of the target.
pub fn quantize_composition(
    alphabet: &AmplitudeAlphabet,
    dist: &[f64],
    block_len: usize,
) -> Result<Composition> {
    if dist.len() != alphabet.len() {
        return Err(Error::InvalidInput("distribution length mismatch".into()));
    }
    if block_len == 0 {
        return Err(Error::InvalidInput("block length must be >= 1".into()));
    }
    let sum: f64 = dist.iter().sum();
    if (sum - 1.0).abs() > 1e-9 || dist.iter().any(|&p| p < 0.0) {
        return Err(Error::InvalidInput(format!("probabilities must sum to 1, got {sum}")));
    }
    let scaled: Vec<f64> = dist.iter().map(|p| p * block_len as f64).collect();
    let mut counts: Vec<usize> = scaled.iter().map(|x| x.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..dist.len()).collect();
    // Descending fractional part; equal fractions go to the lower amplitude.
    order.sort_by(|&i, &j| {
        let fi = scaled[i] - scaled[i].floor();
        let fj = scaled[j] - scaled[j].floor();
        fj.partial_cmp(&fi).unwrap().then(i.cmp(&j))
    });
    for &i in order.iter().take(block_len - assigned) {
        counts[i] += 1;
    }
    Composition::new(alphabet.clone(), counts)
}

/// A constant-composition matcher instance.
#[derive(Debug, Clone)]
pub struct CcdmCodebook {
    composition: Composition,
    total: BigUint,
    k_bits: usize,
    rate: f64,
    rate_loss: f64,
    lambda: f64,
}

impl CcdmCodebook {
    /// Codebook for the composition quantized from the MB distribution at
    /// `lambda`.
    pub fn from_lambda(
        alphabet: &AmplitudeAlphabet,
        block_len: usize,
        lambda: f64,
    ) -> Result<Self> {
        let dist = mb_distribution(alphabet, lambda)?;
        let composition = quantize_composition(alphabet, &dist, block_len)?;
        Self::from_composition(composition, lambda)
    }

    pub fn from_composition(composition: Composition, lambda: f64) -> Result<Self> {
        let total = composition.multinomial();
        let k_bits = (total.bits() - 1) as usize;
        let n = composition.block_len();
        let rate = k_bits as f64 / n as f64;
        // Rate-loss reference: MB entropy matched to the quantized
        // composition's mean energy, so finite-N effects compare like
        // with like.
        let mb_entropy = mb_entropy_for_energy(composition.alphabet(), composition.mean_energy())?;
        Ok(CcdmCodebook {
            composition,
            total,
            k_bits,
            rate,
            rate_loss: mb_entropy - rate,
            lambda,
        })
    }

    pub fn composition(&self) -> &Composition {
        &self.composition
    }

    pub fn k_bits(&self) -> usize {
        self.k_bits
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn rate_loss(&self) -> f64 {
        self.rate_loss
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn total_sequences(&self) -> &BigUint {
        &self.total
    }
}

/// Map `k_bits` bits (MSB first) to the constant-composition sequence of
/// that lexicographic rank.
pub fn ccdm_encode(codebook: &CcdmCodebook, bits: &[bool]) -> Result<Vec<u32>> {
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
    let amps = codebook.composition.alphabet().amplitudes().to_vec();
    let mut counts = codebook.composition.counts().to_vec();
    let mut remaining = codebook.composition.block_len();
    // `m` counts arrangements of the remaining multiset.
    let mut m = codebook.total.clone();
    let mut out = Vec::with_capacity(remaining);
    for _ in 0..remaining {
        // placate the borrow checker: remaining changes inside the loop
        let total_here = counts.iter().sum::<usize>();
        debug_assert_eq!(total_here, remaining);
        let mut chosen = None;
        for (i, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            // arrangements if symbol i is placed next
            let m_if = &m * BigUint::from(c) / BigUint::from(remaining);
            if index < m_if {
                chosen = Some((i, m_if));
                break;
            }
            index -= m_if;
        }
        let (i, m_if) = chosen.expect("index < multinomial guarantees a symbol");
        out.push(amps[i]);
        counts[i] -= 1;
        remaining -= 1;
        m = m_if;
    }
    Ok(out)
}

/// Inverse of [`ccdm_encode`].
pub fn ccdm_decode(codebook: &CcdmCodebook, seq: &[u32]) -> Result<Vec<bool>> {
    let comp = &codebook.composition;
    if seq.len() != comp.block_len() {
        return Err(Error::InvalidCodeword(format!(
            "expected {} symbols, got {}",
            comp.block_len(),
            seq.len()
        )));
    }
    // Composition must match exactly.
    let mut observed = vec![0usize; comp.alphabet().len()];
    for &a in seq {
        let i = comp
            .alphabet()
            .index_of(a)
            .ok_or_else(|| Error::InvalidCodeword(format!("amplitude {a} not in alphabet")))?;
        observed[i] += 1;
    }
    if observed != comp.counts() {
        return Err(Error::InvalidCodeword(format!(
            "composition {observed:?} does not match {:?}",
            comp.counts()
        )));
    }

    let mut counts = comp.counts().to_vec();
    let mut remaining = comp.block_len();
    let mut m = codebook.total.clone();
    let mut rank = BigUint::zero();
    for &a in seq {
        let i = comp.alphabet().index_of(a).expect("validated above");
        for (j, &c) in counts.iter().enumerate().take(i) {
            if c > 0 {
                rank += &m * BigUint::from(c) / BigUint::from(remaining);
            }
            let _ = j;
        }
        m = &m * BigUint::from(counts[i]) / BigUint::from(remaining);
        counts[i] -= 1;
        remaining -= 1;
    }

    if rank.bits() as usize > codebook.k_bits {
        return Err(Error::IndexOutOfRange { index: rank.to_string(), k_bits: codebook.k_bits });
    }
    let mut bits = vec![false; codebook.k_bits];
    for (pos, bit) in bits.iter_mut().rev().enumerate() {
        *bit = rank.bit(pos as u64);
    }
    Ok(bits)
}

/// One row of a λ sweep.
#[derive(Debug, Clone)]
pub struct CcdmSweepRow {
    pub lambda: f64,
    pub k_bits: usize,
    pub rate: f64,
    /// H(A_MB at composition energy) - R_DM: the like-with-like loss.
    pub rate_loss: f64,
    /// H(A_MB(λ)) - R_DM: pre-quantization reference, exported alongside.
    pub rate_loss_pre_quant: f64,
    pub counts: Vec<usize>,
}

/// Sweep λ geometrically over `lambda_range` in `steps` points.
pub fn ccdm_rate_sweep(
    alphabet: &AmplitudeAlphabet,
    block_len: usize,
    lambda_range: (f64, f64),
    steps: usize,
) -> Result<Vec<CcdmSweepRow>> {
    let (lo, hi) = lambda_range;
    if !(lo > 0.0 && hi > lo) || steps < 2 {
        return Err(Error::InvalidInput(format!(
            "bad lambda sweep: range [{lo}, {hi}], steps {steps}"
        )));
    }
    let ratio = (hi / lo).powf(1.0 / (steps - 1) as f64);
    (0..steps)
        .into_par_iter()
        .map(|i| {
            let lambda = lo * ratio.powi(i as i32);
            let dist = mb_distribution(alphabet, lambda)?;
            let cb = CcdmCodebook::from_lambda(alphabet, block_len, lambda)?;
            Ok(CcdmSweepRow {
                lambda,
                k_bits: cb.k_bits(),
                rate: cb.rate(),
                rate_loss: cb.rate_loss(),
                rate_loss_pre_quant: entropy_bits(&dist) - cb.rate(),
                counts: cb.composition().counts().to_vec(),
            })
        })
        .collect()
}

/// CSV header matching [`CcdmSweepRow::csv_row`]; same leading shape as
/// the ESS sweep so the two overlay directly.
pub fn ccdm_sweep_csv_header(alphabet: &AmplitudeAlphabet) -> String {
    let mut s = String::from("lambda,k_bits,r_dm,r_loss,r_loss_pre_quant");
    for a in alphabet.amplitudes() {
        s.push_str(&format!(",n_{a}"));
    }
    s
}

impl CcdmSweepRow {
    pub fn csv_row(&self) -> String {
        let mut s = format!(
            "{:.6},{},{:.6},{:.6},{:.6}",
            self.lambda, self.k_bits, self.rate, self.rate_loss, self.rate_loss_pre_quant
        );
        for c in &self.counts {
            s.push_str(&format!(",{c}"));
        }
        s
    }
}

/// Exact KL divergence D(composition/N || dist), used by the quantizer
/// tests and exposed for diagnostics.
pub fn composition_kl(comp: &Composition, dist: &[f64]) -> f64 {
    let n = comp.block_len() as f64;
    comp.counts()
        .iter()
        .zip(dist)
        .filter(|(&c, _)| c > 0)
        .map(|(&c, &p)| {
            let q = c as f64 / n;
            q * (q / p).log2()
        })
        .sum()
}

#[allow(dead_code)]
fn big_ratio(num: &BigUint, den: &BigUint) -> f64 {
    Ratio::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
        .to_f64()
        .expect("finite ratio")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn quantize_uniform() {
        let comp = quantize_composition(&AmplitudeAlphabet::four_level(), &[0.25; 4], 108).unwrap();
        assert_eq!(comp.counts(), &[27, 27, 27, 27]);
    }

    #[test]
    fn quantize_fig1_marginal() {
        let comp =
            quantize_composition(&AmplitudeAlphabet::two_level(), &[7.0 / 11.0, 4.0 / 11.0], 4)
                .unwrap();
        assert_eq!(comp.counts(), &[3, 1]);
        // Check KL-optimality against every composition of 4 into 2 parts.
        let dist = [7.0 / 11.0, 4.0 / 11.0];
        let best = composition_kl(&comp, &dist);
        for k in 0..=4usize {
            let c = Composition::new(AmplitudeAlphabet::two_level(), vec![k, 4 - k]).unwrap();
            assert!(composition_kl(&c, &dist) >= best - 1e-12);
        }
    }

    #[test]
    fn quantize_single_symbol() {
        let comp =
            quantize_composition(&AmplitudeAlphabet::four_level(), &[0.25; 4], 1).unwrap();
        // Tie on fractional parts goes to the lowest amplitude.
        assert_eq!(comp.counts(), &[1, 0, 0, 0]);
    }

    #[test]
    fn tiny_codebook_roundtrip() {
        // Composition (3,1) over {1,3}: 4 sequences, k = 2.
        let comp = Composition::new(AmplitudeAlphabet::two_level(), vec![3, 1]).unwrap();
        let cb = CcdmCodebook::from_composition(comp, 0.0).unwrap();
        assert_eq!(cb.k_bits(), 2);
        let mut seen = Vec::new();
        for idx in 0..4u8 {
            let bits = [idx & 2 != 0, idx & 1 != 0];
            let seq = ccdm_encode(&cb, &bits).unwrap();
            assert_eq!(seq.iter().filter(|&&a| a == 3).count(), 1);
            assert_eq!(ccdm_decode(&cb, &seq).unwrap(), bits.to_vec());
            assert!(!seen.contains(&seq));
            seen.push(seq);
        }
    }

    #[test]
    fn single_sequence_composition() {
        let comp = Composition::new(AmplitudeAlphabet::two_level(), vec![5, 0]).unwrap();
        let cb = CcdmCodebook::from_composition(comp, 50.0).unwrap();
        assert_eq!(cb.k_bits(), 0);
        assert_eq!(ccdm_encode(&cb, &[]).unwrap(), vec![1, 1, 1, 1, 1]);
    }

    #[test]
    fn decode_rejects_wrong_composition() {
        let comp = Composition::new(AmplitudeAlphabet::two_level(), vec![3, 1]).unwrap();
        let cb = CcdmCodebook::from_composition(comp, 0.0).unwrap();
        assert!(matches!(
            ccdm_decode(&cb, &[3, 3, 1, 1]),
            Err(Error::InvalidCodeword(_))
        ));
        assert!(matches!(ccdm_decode(&cb, &[1, 1, 1]), Err(Error::InvalidCodeword(_))));
    }

    #[test]
    fn k_bits_bounds_total() {
        let comp = Composition::new(AmplitudeAlphabet::four_level(), vec![40, 30, 25, 13]).unwrap();
        let cb = CcdmCodebook::from_composition(comp, 0.1).unwrap();
        let log2m = cb.total_sequences().bits() as usize - 1;
        // k = floor(log2 M): 2^k <= M < 2^{k+1}
        assert_eq!(cb.k_bits(), log2m);
        assert!(BigUint::from(1u32) << cb.k_bits() <= *cb.total_sequences());
        assert!(*cb.total_sequences() < BigUint::from(1u32) << (cb.k_bits() + 1));
    }

    #[test]
    fn long_block_roundtrip() {
        let cb = CcdmCodebook::from_lambda(&AmplitudeAlphabet::four_level(), 108, 0.05).unwrap();
        use rand::Rng;
        let mut rng = crate::numerics::RngSeed(9).rng();
        for _ in 0..50 {
            let bits: Vec<bool> = (0..cb.k_bits()).map(|_| rng.gen()).collect();
            let seq = ccdm_encode(&cb, &bits).unwrap();
            for (i, &c) in cb.composition().counts().iter().enumerate() {
                let a = cb.composition().alphabet().amplitudes()[i];
                assert_eq!(seq.iter().filter(|&&x| x == a).count(), c);
            }
            assert_eq!(ccdm_decode(&cb, &seq).unwrap(), bits);
        }
    }

    #[test]
    fn sweep_shape() {
        let rows = ccdm_rate_sweep(&AmplitudeAlphabet::four_level(), 108, (0.006, 0.54), 8).unwrap();
        assert_eq!(rows.len(), 8);
        assert_relative_eq!(rows[0].lambda, 0.006, epsilon = 1e-12);
        assert_relative_eq!(rows[7].lambda, 0.54, max_relative = 1e-12);
        // Rate decreases as shaping strengthens.
        assert!(rows[0].rate > rows[7].rate);
    }
}
