//! Extremal functions attached to a Ma-Minda function φ.
//!
//! With `Λ(z) = ∫₀ᶻ (φ(t) - 1)/t dt` the bundle is
//! `k'(z) = exp Λ(z)`, `h(z) = z·k'(z)`, `k(z) = ∫₀ᶻ k'`,
//! `K'(z) = (k'(z²))^{1/2}` and `H(z) = (h(z²))^{1/2} = z·K'(z)`.

use crate::error::{BohrError, Result};
use crate::phi::{PhiFamily, PhiSpec};
use crate::quadrature::gauss_kronrod;
use crate::series::{TruncatedSeries, DEFAULT_ORDER};

/// Below this radius `(φ(t) - 1)/t` is evaluated from the series.
const KERNEL_SERIES_RADIUS: f64 = 0.1;

const LAMBDA_TOL: f64 = 1e-14;

/// Absolute tolerance for boundary values computed by quadrature.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Order of the series used for majorants of sign-changing bundles.
pub const WIDE_ORDER: usize = 1024;

/// Truncated Taylor series of the extremal bundle.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalSeries {
    pub phi: TruncatedSeries,
    pub h: TruncatedSeries,
    pub k: TruncatedSeries,
    pub k_prime: TruncatedSeries,
    /// `K'(t) = (k'(t²))^{1/2}` as a series in `t`.
    pub big_k_prime: TruncatedSeries,
    /// `H(z) = (h(z²))^{1/2}`, built through `exp` rather than `sqrt`.
    pub big_h: TruncatedSeries,
}

impl ExtremalSeries {
    /// Builds the bundle from the coefficients `[1, B₁, B₂, …]` of φ.
    pub fn from_phi_series(phi: &TruncatedSeries) -> Result<Self> {
        if phi.coeff(0) != 1.0 {
            return Err(BohrError::Parameter(format!(
                "phi must satisfy phi(0) = 1, got {}",
                phi.coeff(0)
            )));
        }
        let order = phi.order();
        let lambda = TruncatedSeries::from_fn(order, |n| if n == 0 { 0.0 } else { phi.coeff(n) / n as f64 });
        let k_prime = lambda.exp_series()?;
        let h = k_prime.shift_up();
        let k = k_prime.integrate_from_zero().with_order(order);

        let square = TruncatedSeries::monomial(1.0, 2, order);
        let big_k_prime = k_prime.compose_with_selfmap(&square)?.sqrt_series()?;
        let half_lambda_sq = lambda.compose_with_selfmap(&square)?.scale(0.5);
        let big_h = half_lambda_sq.exp_series()?.shift_up();

        Ok(Self {
            phi: phi.clone(),
            h,
            k,
            k_prime,
            big_k_prime,
            big_h,
        })
    }

    pub fn order(&self) -> usize {
        self.phi.order()
    }

    /// Largest coefficient defects of `h - z·k'` and `z·K' - H` over the
    /// first `n` coefficients.
    pub fn invariant_defects(&self, n: usize) -> (f64, f64) {
        let z = TruncatedSeries::identity(self.order());
        let zk = &z * &self.k_prime;
        let zkk = &z * &self.big_k_prime;
        let n = n.min(self.order());
        let d1 = (0..n)
            .map(|i| (self.h.coeff(i) - zk.coeff(i)).abs())
            .fold(0.0, f64::max);
        let d2 = (0..n)
            .map(|i| (zkk.coeff(i) - self.big_h.coeff(i)).abs())
            .fold(0.0, f64::max);
        (d1, d2)
    }

    /// Coefficientwise absolute values of every member.
    pub fn majorants(&self) -> Self {
        Self {
            phi: self.phi.majorant(),
            h: self.h.majorant(),
            k: self.k.majorant(),
            k_prime: self.k_prime.majorant(),
            big_k_prime: self.big_k_prime.majorant(),
            big_h: self.big_h.majorant(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kernel {
    /// `Λ(x) = p·ln(1 + Bx)`
    Power {
        b: f64,
        p: f64,
    },
    /// `Λ(x) = Ax`
    Linear {
        a: f64,
    },
    /// `Λ(x) = s(2x + sx²/2)`
    Lemniscate {
        s: f64,
    },
    Quadrature,
}

/// The extremal bundle for one φ: series together with pointwise evaluators
/// on the real diameter and the boundary constants `h(-1)`, `k(-1)`.
#[derive(Debug, Clone)]
pub struct ExtremalSet {
    pub spec: PhiSpec,
    pub series: ExtremalSeries,
    pub h_at_minus_one: f64,
    pub k_at_minus_one: f64,
    positive: bool,
    kernel: Kernel,
    /// Shifted φ series `B₁ + B₂t + …` for the kernel near 0.
    kernel_series: TruncatedSeries,
    /// Wide majorant series, present only when some coefficient is negative.
    wide: Option<ExtremalSeries>,
}

impl ExtremalSet {
    pub fn build(spec: PhiSpec, order: usize) -> Result<Self> {
        if order < 2 {
            return Err(BohrError::Parameter(format!(
                "truncation order must be at least 2, got {order}"
            )));
        }
        let phi = spec.series(order);
        let series = ExtremalSeries::from_phi_series(&phi)?;
        let kernel = match spec.as_janowski() {
            Some((a, 0.0)) => Kernel::Linear { a },
            Some((a, b)) => Kernel::Power { b, p: (a - b) / b },
            None => match spec.family() {
                PhiFamily::LemniscateS { s } => Kernel::Lemniscate { s },
                _ => Kernel::Quadrature,
            },
        };
        let short = spec.series(DEFAULT_ORDER + 1);
        let kernel_series = TruncatedSeries::from_fn(DEFAULT_ORDER, |n| short.coeff(n + 1));
        let positive = spec.has_positive_coeffs();
        let wide = if positive {
            None
        } else {
            Some(ExtremalSeries::from_phi_series(&spec.series(order.max(WIDE_ORDER)))?.majorants())
        };

        let mut set = Self {
            spec,
            series,
            h_at_minus_one: f64::NAN,
            k_at_minus_one: f64::NAN,
            positive,
            kernel,
            kernel_series,
            wide,
        };
        set.h_at_minus_one = set.h_at(-1.0)?;
        set.k_at_minus_one = set.k_at(-1.0)?;
        if !(set.h_at_minus_one < 0.0 && set.k_at_minus_one < 0.0) {
            return Err(BohrError::Inconsistent(format!(
                "expected h(-1) < 0 and k(-1) < 0 for {spec}, got {} and {}",
                set.h_at_minus_one, set.k_at_minus_one
            )));
        }
        Ok(set)
    }

    pub fn with_default_order(spec: PhiSpec) -> Result<Self> {
        Self::build(spec, DEFAULT_ORDER)
    }

    /// Whether φ (and therefore the whole bundle) has nonnegative coefficients.
    pub fn has_positive_coeffs(&self) -> bool {
        self.positive
    }

    /// Whether `h` has an elementary closed form for this φ.
    pub fn has_closed_form(&self) -> bool {
        self.kernel != Kernel::Quadrature
    }

    fn kernel_integrand(&self, t: f64) -> f64 {
        if t.abs() < KERNEL_SERIES_RADIUS {
            self.kernel_series.horner(t)
        } else {
            (self.spec.at(t).expect("t lies in [-1, 1)") - 1.0) / t
        }
    }

    /// `Λ(x) = ∫₀ˣ (φ(t) - 1)/t dt` on `[-1, 1)`.
    pub fn lambda(&self, x: f64) -> Result<f64> {
        if !(-1.0..1.0).contains(&x) {
            return Err(BohrError::Domain {
                what: "extremal function",
                x,
            });
        }
        Ok(match self.kernel {
            Kernel::Power { b, p } => p * (b * x).ln_1p(),
            Kernel::Linear { a } => a * x,
            Kernel::Lemniscate { s } => s * (2.0 * x + 0.5 * s * x * x),
            Kernel::Quadrature => {
                if x == 0.0 {
                    0.0
                } else if x > 0.0 {
                    gauss_kronrod(|t| self.kernel_integrand(t), 0.0, x, LAMBDA_TOL)?.value
                } else {
                    -gauss_kronrod(|t| self.kernel_integrand(t), x, 0.0, LAMBDA_TOL)?.value
                }
            }
        })
    }

    /// `h(x) = x·exp Λ(x)`.
    pub fn h_at(&self, x: f64) -> Result<f64> {
        Ok(x * self.lambda(x)?.exp())
    }

    /// `k'(x) = exp Λ(x)`.
    pub fn k_prime_at(&self, x: f64) -> Result<f64> {
        Ok(self.lambda(x)?.exp())
    }

    /// `k(x) = ∫₀ˣ k'` by quadrature.
    pub fn k_at(&self, x: f64) -> Result<f64> {
        if !(-1.0..1.0).contains(&x) {
            return Err(BohrError::Domain {
                what: "extremal function",
                x,
            });
        }
        let f = |t: f64| self.k_prime_at(t).unwrap_or(f64::NAN);
        Ok(if x >= 0.0 {
            gauss_kronrod(f, 0.0, x, BOUNDARY_TOL)?.value
        } else {
            -gauss_kronrod(f, x, 0.0, BOUNDARY_TOL)?.value
        })
    }

    /// `K'(x) = (k'(x²))^{1/2}`.
    pub fn big_k_prime_at(&self, x: f64) -> Result<f64> {
        Ok((0.5 * self.lambda(x * x)?).exp())
    }

    fn wide_majorant(
        &self,
        pick: impl Fn(&ExtremalSeries) -> &TruncatedSeries,
        t: f64,
        tol: f64,
    ) -> Result<f64> {
        let wide = self
            .wide
            .as_ref()
            .expect("wide series exists for sign-changing phi");
        Ok(pick(wide).eval_within(t, tol)?)
    }

    /// `M_φ(t)` for `0 ≤ t < 1`.
    pub fn majorant_phi(&self, t: f64) -> Result<f64> {
        self.spec.majorant_at(t)
    }

    /// `M_{k'}(t)`; `tol` bounds the series tail when coefficients change sign.
    pub fn majorant_k_prime(&self, t: f64, tol: f64) -> Result<f64> {
        if self.positive {
            self.k_prime_at(t)
        } else {
            self.wide_majorant(|s| &s.k_prime, t, tol)
        }
    }

    /// `M_h(t)`.
    pub fn majorant_h(&self, t: f64, tol: f64) -> Result<f64> {
        if self.positive {
            self.h_at(t)
        } else {
            self.wide_majorant(|s| &s.h, t, tol)
        }
    }

    /// `M_{K'}(t)`.
    pub fn majorant_big_k_prime(&self, t: f64, tol: f64) -> Result<f64> {
        if self.positive {
            self.big_k_prime_at(t)
        } else {
            self.wide_majorant(|s| &s.big_k_prime, t, tol)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn catalog() -> Vec<PhiSpec> {
        vec![
            PhiSpec::janowski(1.0, -1.0).unwrap(),
            PhiSpec::janowski(0.5, -0.5).unwrap(),
            PhiSpec::janowski(0.5, 0.25).unwrap(),
            PhiSpec::janowski(0.3, 0.0).unwrap(),
            PhiSpec::sakaguchi(0.2).unwrap(),
            PhiSpec::lemniscate(0.5).unwrap(),
            PhiSpec::lemniscate(FRAC_1_SQRT_2).unwrap(),
            PhiSpec::exp_blend(0.1).unwrap(),
            PhiSpec::strongly(0.5).unwrap(),
            PhiSpec::wang(0.5, 0.8).unwrap(),
        ]
    }

    fn set(spec: PhiSpec) -> ExtremalSet {
        ExtremalSet::build(spec, DEFAULT_ORDER).unwrap()
    }

    #[test]
    fn koebe_bundle() {
        let es = set(PhiSpec::janowski(1.0, -1.0).unwrap());
        for n in 0..20 {
            assert_abs_diff_eq!(es.series.h.coeff(n), n as f64, epsilon = 1e-10);
            assert_abs_diff_eq!(es.series.k_prime.coeff(n), (n + 1) as f64, epsilon = 1e-10);
            let k = if n == 0 { 0.0 } else { 1.0 };
            assert_abs_diff_eq!(es.series.k.coeff(n), k, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(es.h_at_minus_one, -0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(es.k_at_minus_one, -0.5, epsilon = 1e-13);
        assert_abs_diff_eq!(es.k_at(1.0 / 3.0).unwrap(), 0.5, epsilon = 1e-13);
        assert_eq!(es.k_at(0.0).unwrap(), 0.0);
        assert_eq!(es.h_at(0.0).unwrap(), 0.0);
    }

    #[test]
    fn janowski_b_zero_bundle() {
        let a = 0.7;
        let es = set(PhiSpec::janowski(a, 0.0).unwrap());
        assert_abs_diff_eq!(es.h_at_minus_one, -(-a).exp(), epsilon = 1e-15);
        // h = z e^{Az}: coefficient n is A^{n-1}/(n-1)!
        let mut c = 1.0;
        for n in 1..15 {
            assert_abs_diff_eq!(es.series.h.coeff(n), c, epsilon = 1e-14);
            c *= a / n as f64;
        }
    }

    #[test]
    fn lemniscate_closed_form() {
        let s = 0.5;
        let es = set(PhiSpec::lemniscate(s).unwrap());
        for r in [0.1, 0.25, 1.0 / 3.0, 0.6] {
            let expected = r * (s * (2.0 * r + s * r * r / 2.0)).exp();
            assert_abs_diff_eq!(es.h_at(r).unwrap(), expected, epsilon = 1e-15);
            assert_abs_diff_eq!(es.series.h.horner(r), expected, epsilon = 1e-13);
        }
    }

    #[test]
    fn table_values_through_quadrature() {
        let eb = set(PhiSpec::exp_blend(0.0).unwrap());
        assert!(!eb.has_closed_form());
        // printed value 0.47935 is truncated to five decimals
        assert_abs_diff_eq!(eb.h_at(1.0 / 3.0).unwrap(), 0.47935, epsilon = 1e-5);
        assert_abs_diff_eq!(eb.h_at(1.0 / 3.0).unwrap(), 0.479357902430999, epsilon = 1e-12);
        let sa = set(PhiSpec::strongly(0.5).unwrap());
        assert_abs_diff_eq!(sa.h_at(1.0 / 3.0).unwrap(), 0.482023, epsilon = 5e-7);
        assert_abs_diff_eq!(sa.h_at(1.0 / 3.0).unwrap(), 0.482023175554088, epsilon = 1e-12);
    }

    #[test]
    fn sakaguchi_boundary_values() {
        for gamma in [0.0, 0.1, 0.259, 0.5, 0.8] {
            let es = set(PhiSpec::sakaguchi(gamma).unwrap());
            let e = 2.0 * (1.0 - gamma);
            assert_abs_diff_eq!(
                es.h_at(1.0 / 3.0).unwrap(),
                3f64.powf(e - 1.0) / 2f64.powf(e),
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(-es.h_at_minus_one, 2f64.powf(-e), epsilon = 1e-12);
            // same values through the general quadrature kernel
            let mut q = es.clone();
            q.kernel = Kernel::Quadrature;
            assert_abs_diff_eq!(
                q.h_at(1.0 / 3.0).unwrap(),
                3f64.powf(e - 1.0) / 2f64.powf(e),
                epsilon = 1e-10
            );
            assert_abs_diff_eq!(q.h_at(-1.0).unwrap(), es.h_at_minus_one, epsilon = 1e-10);
        }
    }

    #[test]
    fn closed_and_quadrature_kernels_agree() {
        for spec in catalog() {
            let es = set(spec);
            let mut q = es.clone();
            q.kernel = Kernel::Quadrature;
            for x in [-1.0, -0.6, -0.05, 0.05, 0.3, 0.8] {
                assert_abs_diff_eq!(es.h_at(x).unwrap(), q.h_at(x).unwrap(), epsilon = 1e-11);
            }
        }
    }

    #[test]
    fn expblend_boundary_power_law() {
        for alpha in [0.0, 0.03, 0.5, 0.9] {
            let es = set(PhiSpec::exp_blend(alpha).unwrap());
            assert_abs_diff_eq!(
                -es.h_at_minus_one,
                0.450859463f64.powf(1.0 - alpha),
                epsilon = 1e-6
            );
        }
    }

    #[test]
    fn exp_blend_series_oracle() {
        // Λ(x) = (1-α) Σ xⁿ/(n·n!) for the exponential blend
        let alpha = 0.3;
        let es = set(PhiSpec::exp_blend(alpha).unwrap());
        for x in [-1.0, -0.4, 0.2, 0.9] {
            let mut sum = 0.0;
            let mut term = 1.0;
            for n in 1..40 {
                term *= x / n as f64;
                sum += term / n as f64;
            }
            assert_abs_diff_eq!(es.lambda(x).unwrap(), (1.0 - alpha) * sum, epsilon = 1e-13);
        }
    }

    #[test]
    fn invariants_through_order_forty() {
        for spec in catalog() {
            let es = set(spec);
            let (d1, d2) = es.series.invariant_defects(40);
            assert!(d1 <= 1e-10 && d2 <= 1e-10, "{spec}: {d1:e} {d2:e}");
            assert_eq!(es.series.h.coeff(0), 0.0);
            assert_eq!(es.series.h.coeff(1), 1.0);
            assert_eq!(es.series.k.coeff(0), 0.0);
            assert_eq!(es.series.k.coeff(1), 1.0);
        }
    }

    #[test]
    fn big_k_prime_series_matches_pointwise() {
        for spec in catalog() {
            let es = set(spec);
            for t in [0.1, 0.3, 0.5] {
                assert_abs_diff_eq!(
                    es.series.big_k_prime.horner(t),
                    es.big_k_prime_at(t).unwrap(),
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn majorants_of_sign_changing_bundle() {
        let spec = PhiSpec::janowski(0.5, 0.25).unwrap();
        let es = set(spec);
        assert!(!es.has_positive_coeffs());
        assert!(!es.series.h.is_nonnegative());
        let m = ExtremalSeries::from_phi_series(&spec.series(256))
            .unwrap()
            .majorants();
        for t in [0.1, 0.3] {
            assert_abs_diff_eq!(es.majorant_h(t, 1e-14).unwrap(), m.h.horner(t), epsilon = 1e-14);
            assert!(es.majorant_h(t, 1e-14).unwrap() >= es.h_at(t).unwrap());
        }
        let pos = set(PhiSpec::strongly(0.5).unwrap());
        assert_eq!(pos.majorant_h(0.3, 0.0).unwrap(), pos.h_at(0.3).unwrap());
    }

    #[test]
    fn rejects_bad_inputs() {
        let es = set(PhiSpec::lemniscate(0.5).unwrap());
        assert!(es.h_at(1.0).is_err());
        assert!(es.k_at(-1.5).is_err());
        assert!(ExtremalSet::build(PhiSpec::lemniscate(0.5).unwrap(), 1).is_err());
        let bad = TruncatedSeries::new(vec![2.0, 1.0]).unwrap();
        assert!(ExtremalSeries::from_phi_series(&bad).is_err());
    }

    proptest! {
        #[test]
        fn h_increasing_for_positive_specs(idx in 0usize..10, a in 0.0f64..0.95, b in 0.0f64..0.95) {
            let es = set(catalog()[idx]);
            prop_assume!(es.has_positive_coeffs());
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assume!(hi - lo > 1e-9);
            prop_assert!(es.h_at(lo).unwrap() < es.h_at(hi).unwrap());
        }

        #[test]
        fn h_is_z_times_k_prime(idx in 0usize..10, x in -1.0f64..0.95) {
            let es = set(catalog()[idx]);
            let lhs = es.h_at(x).unwrap();
            let rhs = x * es.k_prime_at(x).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-14 * lhs.abs().max(1.0));
        }
    }
}
