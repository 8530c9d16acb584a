//! Special functions, quadrature, root finding and the RNG contract used
//! by every other module.

mod bessel;
mod gamma;
mod quad;
mod rng;
mod root;

pub use bessel::{bessel_k, ln_bessel_k, SERIES_CF2_SWITCH};
pub use gamma::{erf, ln_gamma};
pub use quad::{integrate, QuadratureSpec};
pub use rng::RngSeed;
pub use root::find_root_monotone;

#[cfg(test)]
mod property_tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        // K_nu = K_{-nu} for random (nu, x).
        #[test]
        fn bessel_symmetric_in_order(nu in 0.01f64..60.0, x in 0.05f64..200.0) {
            let a = bessel_k(nu, x).unwrap();
            let b = bessel_k(-nu, x).unwrap();
            prop_assert!((a - b).abs() <= 1e-13 * a.abs().max(1e-300));
        }

        // K_{nu+1}(x) = K_{nu-1}(x) + (2 nu / x) K_nu(x)
        #[test]
        fn bessel_recurrence(nu in 1.0f64..40.0, x in 0.5f64..80.0) {
            let km1 = bessel_k(nu - 1.0, x).unwrap();
            let k0 = bessel_k(nu, x).unwrap();
            let kp1 = bessel_k(nu + 1.0, x).unwrap();
            let rhs = km1 + 2.0 * nu / x * k0;
            prop_assert!(
                (kp1 - rhs).abs() <= 1e-8 * kp1.abs(),
                "nu={} x={} lhs={} rhs={}", nu, x, kp1, rhs
            );
        }
    }
}
