//! Special functions: Gamma, the curvature normalization constant, and the
//! eigenvalues of the spherical fractional operator.

use crate::{Error, Real, Result};

/// Global problem parameters.
///
/// `n` is the ambient dimension (2 or 3 supported), `alpha` the fractional
/// order in `(0,1)` and `beta` a Hoelder index in `(alpha,1)` kept for
/// diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracParams<R> {
    pub n: usize,
    pub alpha: R,
    pub beta: R,
}

impl<R: Real> FracParams<R> {
    pub fn new(n: usize, alpha: R, beta: R) -> Result<Self> {
        if !(2..=3).contains(&n) {
            return Err(Error::InvalidParams(format!(
                "ambient dimension N={n} unsupported (need 2 or 3)"
            )));
        }
        if !(alpha > R::zero() && alpha < beta && beta < R::one()) {
            return Err(Error::InvalidParams(format!(
                "need 0 < alpha < beta < 1, got alpha={}, beta={}",
                alpha.as_f64(),
                beta.as_f64()
            )));
        }
        Ok(FracParams { n, alpha, beta })
    }

    /// Convenience constructor with `beta = (1 + alpha) / 2`.
    pub fn with_default_beta(n: usize, alpha: R) -> Result<Self> {
        Self::new(n, alpha, (R::one() + alpha) / R::of(2.0))
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

/// Lanczos series for `x >= 0.5`.
fn lanczos_core<R: Real>(x: R) -> R {
    let z = x - R::one();
    let mut acc = R::of(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + R::of(c) / (z + R::of_usize(i));
    }
    let t = z + R::of(LANCZOS_G) + R::of(0.5);
    (R::of(2.0) * R::PI()).sqrt() * t.powf(z + R::of(0.5)) * (-t).exp() * acc
}

/// Gamma for strictly positive arguments; no pole handling needed.
pub(crate) fn gamma_positive<R: Real>(x: R) -> R {
    debug_assert!(x > R::zero());
    if x < R::of(0.5) {
        lanczos_core(x + R::one()) / x
    } else {
        lanczos_core(x)
    }
}

/// `sin(pi x)` with exact integer argument reduction.
fn sin_pi<R: Real>(x: R) -> R {
    let k = x.floor();
    let r = x - k;
    let s = (R::PI() * r).sin();
    // sin(pi(x)) = (-1)^k sin(pi r)
    if (k.as_f64() as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

/// Gamma function on the real line, including negative non-integer arguments
/// via the reflection identity `Gamma(x) Gamma(1-x) = pi / sin(pi x)`.
pub fn gamma<R: Real>(x: R) -> Result<R> {
    if x <= R::zero() && x.fract() == R::zero() {
        return Err(Error::GammaPole(x.as_f64()));
    }
    if x < R::of(0.5) {
        Ok(R::PI() / (sin_pi(x) * lanczos_core(R::one() - x)))
    } else {
        Ok(lanczos_core(x))
    }
}

/// Surface area of the unit sphere in `R^n`.
pub fn surface_area<R: Real>(n: usize) -> R {
    let nr = R::of_usize(n);
    R::of(2.0) * R::PI().powf(nr / R::of(2.0)) / gamma_positive(nr / R::of(2.0))
}

/// Volume of the unit ball in `R^n` (`|B| = |S| / n`).
pub fn ball_volume<R: Real>(n: usize) -> R {
    surface_area::<R>(n) / R::of_usize(n)
}

/// Normalization constant `(1-alpha) Gamma((N+1)/2) / ((N-1) pi^((N-1)/2))`.
pub fn d_coeff<R: Real>(params: &FracParams<R>) -> R {
    let n = R::of_usize(params.n);
    let a = params.alpha;
    (R::one() - a) * gamma_positive((n + R::one()) / R::of(2.0))
        / ((n - R::one()) * R::PI().powf((n - R::one()) / R::of(2.0)))
}

/// Leading coefficient of the eigenvalue formula; also the limit of
/// `lambda_k / k^(1+alpha)` as `k` grows.
pub fn lambda_asymptotic_constant<R: Real>(params: &FracParams<R>) -> R {
    let n = R::of_usize(params.n);
    let a = params.alpha;
    R::PI().powf((n - R::one()) / R::of(2.0)) * gamma_positive((R::one() - a) / R::of(2.0))
        / ((R::one() + a) * R::of(2.0).powf(a) * gamma_positive((n + a) / R::of(2.0)))
}

/// Eigenvalue `lambda_k` of the spherical fractional operator on degree-`k`
/// spherical harmonics. `lambda_0 = 0` exactly; the sequence is strictly
/// increasing in `k`.
pub fn lambda_k<R: Real>(params: &FracParams<R>, k: usize) -> Result<R> {
    if k == 0 {
        // the two Gamma ratios coincide; return the exact cancellation
        return Ok(R::zero());
    }
    let n = R::of_usize(params.n);
    let a = params.alpha;
    let two = R::of(2.0);
    let kk = R::of_usize(k);
    let pre = lambda_asymptotic_constant(params);
    let ratio_k =
        gamma_positive((two * kk + n + a) / two) / gamma_positive((two * kk + n - a - two) / two);
    let ratio_0 = gamma((n + a) / two)? / gamma((n - a - two) / two)?;
    Ok(pre * (ratio_k - ratio_0))
}

/// Deviation of `2 d_{N,alpha} lambda_k` from the classical Jacobi eigenvalue
/// `k (k + N - 2) / (N - 1)`; tends to zero as `alpha -> 1`.
pub fn classical_limit_gap<R: Real>(params: &FracParams<R>, k: usize) -> Result<R> {
    assert!(k >= 1, "classical limit defined for k >= 1");
    let n = R::of_usize(params.n);
    let kk = R::of_usize(k);
    let target = kk * (kk + n - R::of(2.0)) / (n - R::one());
    Ok(R::of(2.0) * d_coeff(params) * lambda_k(params, k)? - target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn p64(n: usize, alpha: f64) -> FracParams<f64> {
        FracParams::with_default_beta(n, alpha).unwrap()
    }

    #[test]
    fn gamma_classic_values() {
        assert!((gamma(0.5f64).unwrap() - std::f64::consts::PI.sqrt()).abs() < 1e-14);
        assert!((gamma(5.0f64).unwrap() - 24.0).abs() < 1e-12);
        assert!((gamma(1.0f64).unwrap() - 1.0).abs() < 1e-14);
        // reflection value, high-precision reference
        let g = gamma(-0.25f64).unwrap();
        assert!((g - -4.901666809860710581).abs() < 1e-12 * 4.9);
    }

    #[test]
    fn gamma_poles_rejected() {
        for x in [0.0f64, -1.0, -2.0, -17.0] {
            assert!(matches!(gamma(x), Err(Error::GammaPole(_))));
        }
    }

    #[test]
    fn gamma_functional_equation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        while checked < 100 {
            let x: f64 = rng.gen_range(-5.0..5.0);
            // keep away from poles so both sides are well conditioned
            if x.fract().abs() < 1e-3 || (1.0 - x.fract().abs()) < 1e-3 {
                continue;
            }
            if x <= 0.0 && (x - x.round()).abs() < 1e-3 {
                continue;
            }
            let lhs = gamma(x + 1.0).unwrap();
            let rhs = x * gamma(x).unwrap();
            assert!(
                (lhs - rhs).abs() <= 1e-12 * lhs.abs().max(rhs.abs()),
                "x={x}: {lhs} vs {rhs}"
            );
            checked += 1;
        }
    }

    #[test]
    fn gamma_accuracy_large_range() {
        // spot values across |x| <= 30 from high-precision evaluation
        let cases = [
            (12.3, 83385367.8999698547f64),
            (29.5, 1.63481251982742664e30),
            (-3.7, 0.251643995902422644),
            (-12.25, -4.92032148266280136e-9),
        ];
        for (x, want) in cases {
            let g = gamma(x).unwrap();
            assert!(
                (g - want).abs() < 5e-12 * want.abs(),
                "x={x}: got {g:e}, want {want:e}"
            );
        }
    }

    #[test]
    fn d_coeff_values() {
        assert!((d_coeff(&p64(2, 0.5)) - 0.25).abs() < 1e-14);
        assert!((d_coeff(&p64(3, 0.5)) - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-15);
        // alpha -> 1 vanishes linearly
        assert!(d_coeff(&p64(2, 0.999_999)).abs() < 1e-5);
    }

    #[test]
    fn lambda_reference_values() {
        // frozen from the closed-form formula evaluated in high precision
        let l2_05 = [
            0.0,
            3.7081493546027438,
            9.8883982789406502,
            17.834432610232244,
            27.225200456304128,
            37.868070681852263,
            49.631243036405465,
        ];
        let p = p64(2, 0.5);
        for (k, want) in l2_05.iter().enumerate() {
            let got = lambda_k(&p, k).unwrap();
            assert!((got - want).abs() < 1e-12 * (1.0 + want), "k={k}");
        }
        let l3_05_1 = lambda_k(&p64(3, 0.5), 1).unwrap();
        assert!((l3_05_1 - 8.8857658763167325).abs() < 1e-12 * 9.0);
        let l2_025_1 = lambda_k(&p64(2, 0.25), 1).unwrap();
        assert!((l2_025_1 - 3.2423339416302489).abs() < 1e-12 * 4.0);
        let l3_075_1 = lambda_k(&p64(3, 0.75), 1).unwrap();
        assert!((l3_075_1 - 14.944017344357044).abs() < 1e-12 * 15.0);
    }

    #[test]
    fn lambda_zero_is_exact() {
        for n in [2, 3] {
            for a in [0.25, 0.5, 0.75, 0.999] {
                assert_eq!(lambda_k(&p64(n, a), 0).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn lambda_strictly_increasing_to_64() {
        for n in [2, 3] {
            for a in [0.25, 0.5, 0.75] {
                let p = p64(n, a);
                let mut prev = lambda_k(&p, 0).unwrap();
                for k in 1..=64 {
                    let cur = lambda_k(&p, k).unwrap();
                    assert!(cur > prev, "N={n} a={a} k={k}");
                    prev = cur;
                }
            }
        }
    }

    #[test]
    fn lambda_growth_matches_asymptotic_constant() {
        for n in [2, 3] {
            for a in [0.25, 0.5, 0.75] {
                let p = p64(n, a);
                let c = lambda_asymptotic_constant(&p);
                for k in [32usize, 64] {
                    let ratio = lambda_k(&p, k).unwrap() / (k as f64).powf(1.0 + a);
                    assert!(
                        (ratio / c - 1.0).abs() < 0.05,
                        "N={n} a={a} k={k}: ratio {ratio} vs {c}"
                    );
                }
            }
        }
    }

    #[test]
    fn classical_limit_near_alpha_one() {
        for n in [2usize, 3] {
            for k in 1..=4 {
                let p = p64(n, 0.999);
                let gap = classical_limit_gap(&p, k).unwrap();
                let target = (k * (k + n - 2)) as f64 / (n - 1) as f64;
                assert!(gap.abs() <= 0.01 * target, "N={n} k={k}: {gap}");
            }
        }
        // away from alpha = 1 the gap is genuinely nonzero
        let gap = classical_limit_gap(&p64(2, 0.5), 1).unwrap();
        assert!(gap.abs() > 0.1);
    }

    #[test]
    fn surface_areas() {
        assert!((surface_area::<f64>(2) - 2.0 * std::f64::consts::PI).abs() < 1e-14);
        assert!((surface_area::<f64>(3) - 4.0 * std::f64::consts::PI).abs() < 1e-13);
        assert!((ball_volume::<f64>(2) - std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn f32_instantiation() {
        let p = FracParams::<f32>::with_default_beta(2, 0.5).unwrap();
        let l1 = lambda_k(&p, 1).unwrap();
        assert!((l1 - 3.70815).abs() < 1e-3);
    }

    #[test]
    fn params_validation() {
        assert!(FracParams::new(4, 0.5, 0.75).is_err());
        assert!(FracParams::new(2, 0.8, 0.5).is_err());
        assert!(FracParams::new(2, 0.0, 0.5).is_err());
    }
}
