//! Gaussian quadrature rules: Legendre and Jacobi weights.
//!
//! Rules are computed by the Golub-Welsch method (symmetric tridiagonal
//! eigenproblem built from the recurrence coefficients of the orthogonal
//! polynomials). The Jacobi rule with weight `(1-x)^a (1+x)^b` absorbs
//! algebraic endpoint singularities, which is what the singular sphere
//! integrals of this crate reduce to.

use crate::specfun::gamma_positive;
use crate::util::tridiag_ql;
use crate::Real;

/// A quadrature rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct Rule<R> {
    pub nodes: Vec<R>,
    pub weights: Vec<R>,
}

impl<R: Real> Rule<R> {
    /// Gauss-Legendre rule with `n` points (weight 1).
    pub fn gauss_legendre(n: usize) -> Self {
        Self::gauss_jacobi(n, R::zero(), R::zero())
    }

    /// Gauss-Jacobi rule with `n` points for the weight `(1-x)^a (1+x)^b`,
    /// `a, b > -1`.
    pub fn gauss_jacobi(n: usize, a: R, b: R) -> Self {
        assert!(n >= 1, "rule order must be positive");
        let one = R::one();
        let two = R::of(2.0);
        // zeroth moment: 2^(a+b+1) B(a+1, b+1)
        let mu0 = two.powf(a + b + one) * gamma_positive(a + one) * gamma_positive(b + one)
            / gamma_positive(a + b + two);
        let mut diag = vec![R::zero(); n];
        let mut off = vec![R::zero(); n];
        let apb = a + b;
        diag[0] = (b - a) / (apb + two);
        for k in 1..n {
            let kk = R::of_usize(k);
            let den = (two * kk + apb) * (two * kk + apb + two);
            diag[k] = (b * b - a * a) / den;
            let beta = R::of(4.0) * kk * (kk + a) * (kk + b) * (kk + apb)
                / ((two * kk + apb) * (two * kk + apb) * (two * kk + apb + one)
                    * (two * kk + apb - one));
            off[k] = beta.sqrt();
        }
        let mut first = vec![R::zero(); n];
        first[0] = R::one();
        let ok = tridiag_ql(&mut diag, &mut off, &mut first);
        assert!(ok, "tridiagonal QL failed to converge");
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());
        let nodes: Vec<R> = idx.iter().map(|&i| diag[i]).collect();
        let weights: Vec<R> = idx.iter().map(|&i| mu0 * first[i] * first[i]).collect();
        Rule { nodes, weights }
    }

    /// Rule for `int_0^T t^b g(t) dt ~= sum w_i g(t_i)` with `b > -1`;
    /// the endpoint weight factor is absorbed into the weights.
    pub fn power_endpoint(n: usize, b: R, t_max: R) -> Self {
        let base = Self::gauss_jacobi(n, R::zero(), b);
        let half = t_max / R::of(2.0);
        let scale = half.powf(b + R::one());
        let nodes = base.nodes.iter().map(|&x| half * (x + R::one())).collect();
        let weights = base.weights.iter().map(|&w| w * scale).collect();
        Rule { nodes, weights }
    }

    /// Affine image of the rule on `[lo, hi]` for weight-1 rules.
    pub fn on_interval(&self, lo: R, hi: R) -> Self {
        let half = (hi - lo) / R::of(2.0);
        let mid = (hi + lo) / R::of(2.0);
        Rule {
            nodes: self.nodes.iter().map(|&x| mid + half * x).collect(),
            weights: self.weights.iter().map(|&w| w * half).collect(),
        }
    }

    pub fn integrate<F: Fn(R) -> R>(&self, f: F) -> R {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn legendre_exponential() {
        let rule = Rule::<f64>::gauss_legendre(12);
        let v = rule.integrate(f64::exp);
        let exact = 1f64.exp() - (-1f64).exp();
        assert!((v - exact).abs() < 1e-14, "{v} vs {exact}");
    }

    #[test]
    fn legendre_polynomial_exactness() {
        // n-point rule is exact through degree 2n-1
        let rule = Rule::<f64>::gauss_legendre(5);
        let v = rule.integrate(|x| x.powi(8));
        assert!((v - 2.0 / 9.0).abs() < 1e-14);
        let odd = rule.integrate(|x| x.powi(9));
        assert!(odd.abs() < 1e-15);
    }

    #[test]
    fn jacobi_weight_sums() {
        // sum of weights = 2^(1-b') B(1, 1-b') for a=0, b=-b'
        let cases = [
            (0.25, 2.24239044067657211),
            (0.5, 2.8284271247461901),
            (0.75, 4.75682846001088427),
        ];
        for (alpha, exact) in cases {
            let rule = Rule::<f64>::gauss_jacobi(20, 0.0, -alpha);
            let s: f64 = rule.weights.iter().sum();
            assert!((s - exact).abs() < 1e-12 * exact, "alpha={alpha}: {s} vs {exact}");
            assert!(rule.weights.iter().all(|&w| w > 0.0));
        }
    }

    #[test]
    fn jacobi_exponential() {
        // int_{-1}^{1} (1+x)^{-alpha} e^x dx, reference values from
        // high-precision quadrature
        let cases = [
            (0.25, 2.32821494036310157),
            (0.5, 2.46026201389615547),
            (0.75, 3.11729039631974179),
        ];
        for (alpha, exact) in cases {
            let rule = Rule::<f64>::gauss_jacobi(24, 0.0, -alpha);
            let v = rule.integrate(f64::exp);
            assert!((v - exact).abs() < 1e-13, "alpha={alpha}: {v} vs {exact}");
        }
    }

    #[test]
    fn power_endpoint_cosine() {
        // int_0^pi t^{-alpha} cos t dt
        let cases = [
            (0.25, 0.519488988116765817),
            (0.5, 1.32573462652054172),
            (0.75, 3.42720500112139386),
        ];
        for (alpha, exact) in cases {
            let rule = Rule::<f64>::power_endpoint(32, -alpha, PI);
            let v = rule.integrate(f64::cos);
            assert!((v - exact).abs() < 1e-12, "alpha={alpha}: {v} vs {exact}");
        }
    }

    #[test]
    fn works_in_f32() {
        let rule = Rule::<f32>::gauss_legendre(8);
        let v = rule.integrate(|x| x * x);
        assert!((v - 2.0 / 3.0).abs() < 1e-5);
    }
}
