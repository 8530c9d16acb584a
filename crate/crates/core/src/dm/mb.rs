//! Maxwell-Boltzmann amplitude distributions.

use super::alphabet::AmplitudeAlphabet;
use crate::error::{Error, Result};

/// P(a) ∝ e^{-λ a²} over the alphabet; λ = 0 gives the uniform
/// distribution, large λ collapses the mass onto the lowest amplitude.
pub fn mb_distribution(alphabet: &AmplitudeAlphabet, lambda: f64) -> Result<Vec<f64>> {
    if !(lambda >= 0.0) {
        return Err(Error::InvalidInput(format!("lambda must be >= 0, got {lambda}")));
    }
    // Shift energies by the minimum so the weights never underflow all
    // at once; the shift cancels in the normalization.
    let e_min = alphabet.amplitudes()[0] as f64;
    let e_min2 = e_min * e_min;
    let weights: Vec<f64> = alphabet
        .amplitudes()
        .iter()
        .map(|&a| (-lambda * ((a as f64) * (a as f64) - e_min2)).exp())
        .collect();
    let z: f64 = weights.iter().sum();
    Ok(weights.into_iter().map(|w| w / z).collect())
}

/// Shannon entropy in bits; 0·log 0 = 0.
pub fn entropy_bits(probs: &[f64]) -> f64 {
    -probs.iter().filter(|&&p| p > 0.0).map(|&p| p * p.log2()).sum::<f64>()
}

fn mean_energy(alphabet: &AmplitudeAlphabet, probs: &[f64]) -> f64 {
    alphabet
        .amplitudes()
        .iter()
        .zip(probs)
        .map(|(&a, &p)| p * (a as f64) * (a as f64))
        .sum()
}

/// λ of the MB distribution whose mean symbol energy equals
/// `target_energy`. Valid targets lie in (min a², mean of a² at λ=0].
pub fn fit_lambda(alphabet: &AmplitudeAlphabet, target_energy: f64) -> Result<f64> {
    let min_e = {
        let a = alphabet.amplitudes()[0] as f64;
        a * a
    };
    let uniform_mean = mean_energy(alphabet, &mb_distribution(alphabet, 0.0)?);
    if target_energy > uniform_mean + 1e-9 {
        return Err(Error::InvalidInput(format!(
            "target energy {target_energy} above the uniform-distribution mean {uniform_mean}"
        )));
    }
    if target_energy <= min_e + 1e-12 {
        // Degenerate point mass on the lowest amplitude.
        return Ok(f64::INFINITY);
    }
    // Mean energy is strictly decreasing in λ; bisect to fixed depth,
    // which pins the mean far below 1e-12.
    let (mut lo, mut hi) = (0.0f64, 60.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let m = mean_energy(alphabet, &mb_distribution(alphabet, mid)?);
        if m > target_energy {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Entropy in bits of the MB distribution fitted to `target_energy`.
pub fn mb_entropy_for_energy(alphabet: &AmplitudeAlphabet, target_energy: f64) -> Result<f64> {
    let lambda = fit_lambda(alphabet, target_energy)?;
    if lambda.is_infinite() {
        return Ok(0.0);
    }
    Ok(entropy_bits(&mb_distribution(alphabet, lambda)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn lambda_zero_is_uniform() {
        let p = mb_distribution(&AmplitudeAlphabet::four_level(), 0.0).unwrap();
        for &x in &p {
            assert_relative_eq!(x, 0.25, epsilon = 1e-15);
        }
    }

    #[test]
    fn large_lambda_collapses() {
        let p = mb_distribution(&AmplitudeAlphabet::two_level(), 50.0).unwrap();
        assert!(p[0] > 1.0 - 1e-15);
        assert!(p[1] < 1e-15);
    }

    #[test]
    fn direct_evaluation() {
        // P ∝ (e^{-0.05}, e^{-0.45}, e^{-1.25}, e^{-2.45})
        let p = mb_distribution(&AmplitudeAlphabet::four_level(), 0.05).unwrap();
        let w = [(-0.05f64).exp(), (-0.45f64).exp(), (-1.25f64).exp(), (-2.45f64).exp()];
        let z: f64 = w.iter().sum();
        for (a, b) in p.iter().zip(w.iter()) {
            assert_relative_eq!(*a, b / z, max_relative = 1e-13);
        }
    }

    #[test]
    fn negative_lambda_rejected() {
        assert!(mb_distribution(&AmplitudeAlphabet::two_level(), -0.1).is_err());
    }

    #[test]
    fn fit_recovers_two_point_distribution() {
        // Mean energy 43/11 over {1,3} forces P = (7/11, 4/11).
        let alphabet = AmplitudeAlphabet::two_level();
        let lambda = fit_lambda(&alphabet, 43.0 / 11.0).unwrap();
        let p = mb_distribution(&alphabet, lambda).unwrap();
        assert_relative_eq!(p[0], 7.0 / 11.0, epsilon = 1e-12);
        assert_relative_eq!(p[1], 4.0 / 11.0, epsilon = 1e-12);
    }

    #[test]
    fn degenerate_fit() {
        let alphabet = AmplitudeAlphabet::four_level();
        assert_eq!(mb_entropy_for_energy(&alphabet, 1.0).unwrap(), 0.0);
    }
}
