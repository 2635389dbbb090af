//! The six integrals entering the radius equations.
//!
//! | name | definition |
//! |------|------------|
//! | `R`  | `∫₀ʳ M_φ(t)/(1-t²) dt` |
//! | `L`  | `∫₀ʳ φ(-t)/(1+t²) dt` |
//! | `P`  | `∫₀ʳ M_h(t)M_φ(t)/t dt = ∫₀ʳ M_{k'}(t)M_φ(t) dt` |
//! | `T`  | `∫₀ʳ (1/s)∫₀ˢ M_{k'}(t)M_φ(t) dt ds` |
//! | `Rs` | `∫₀ʳ (1/s)∫₀ˢ M_{K'}(t)M_φ(t) dt ds` |
//! | `Ls` | `∫₀ʳ (1/s)∫₀ˢ (k'(-t²))^{1/2}φ(-t) dt ds` |
//!
//! Each can be evaluated by adaptive quadrature of pointwise closed forms or
//! by termwise integration of the Taylor series.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{BohrError, Result};
use crate::extremal::{ExtremalSeries, ExtremalSet};
use crate::quadrature::{integrate_1d, integrate_nested, Integrand1D, QuadratureResult};
use crate::series::TruncatedSeries;

/// Tail tolerance for majorants taken from the wide series.
const MAJORANT_TAIL_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RadiusIntegral {
    R,
    L,
    P,
    T,
    Rs,
    Ls,
}

impl RadiusIntegral {
    pub const ALL: [RadiusIntegral; 6] = [Self::R, Self::L, Self::P, Self::T, Self::Rs, Self::Ls];

    /// Whether the integral carries the inner `(1/s)∫₀ˢ`.
    pub fn is_nested(self) -> bool {
        matches!(self, Self::T | Self::Rs | Self::Ls)
    }

    /// The one-dimensional integrand, or the inner integrand when nested.
    ///
    /// All six integrands tend to 1 at `t = 0`.
    pub fn integrand(self, es: &Arc<ExtremalSet>) -> Integrand1D {
        let es = Arc::clone(es);
        let eval = move |t: f64| -> Result<f64> {
            Ok(match self {
                Self::R => es.majorant_phi(t)? / (1.0 - t * t),
                Self::L => es.spec.at(-t)? / (1.0 + t * t),
                Self::P | Self::T => es.majorant_k_prime(t, MAJORANT_TAIL_TOL)? * es.majorant_phi(t)?,
                Self::Rs => es.majorant_big_k_prime(t, MAJORANT_TAIL_TOL)? * es.majorant_phi(t)?,
                Self::Ls => (0.5 * es.lambda(-t * t)?).exp() * es.spec.at(-t)?,
            })
        };
        let domain = match self {
            Self::L | Self::Ls => (0.0, 1.0),
            _ => (0.0, 1.0 - f64::EPSILON),
        };
        Integrand1D::new(move |t| eval(t).unwrap_or(f64::NAN), 1.0, domain)
    }

    pub fn by_quadrature(self, es: &Arc<ExtremalSet>, r: f64, tol: f64) -> Result<QuadratureResult> {
        let f = self.integrand(es);
        Ok(if self.is_nested() {
            integrate_nested(&f, r, tol)?
        } else {
            integrate_1d(&f, 0.0, r, tol)?
        })
    }

    /// Taylor series of the integrand (the inner one when nested).
    pub fn integrand_series(self, s: &ExtremalSeries) -> Result<TruncatedSeries> {
        let order = s.order();
        let m_phi = s.phi.majorant();
        // Σ t^{2n} and Σ (-1)ⁿ t^{2n}
        let even = |sign: f64| {
            TruncatedSeries::from_fn(order, |n| match n % 4 {
                0 => 1.0,
                2 => sign,
                _ => 0.0,
            })
        };
        Ok(match self {
            Self::R => &m_phi * &TruncatedSeries::from_fn(order, |n| if n % 2 == 0 { 1.0 } else { 0.0 }),
            Self::L => &s.phi.reflect() * &even(-1.0),
            Self::P | Self::T => &s.k_prime.majorant() * &m_phi,
            Self::Rs => &s.big_k_prime.majorant() * &m_phi,
            Self::Ls => {
                let minus_square = TruncatedSeries::monomial(-1.0, 2, order);
                let root = s.k_prime.compose_with_selfmap(&minus_square)?.sqrt_series()?;
                &root * &s.phi.reflect()
            }
        })
    }

    /// Series `F` with `F(r)` equal to the integral.
    pub fn antiderivative_series(self, s: &ExtremalSeries) -> Result<TruncatedSeries> {
        let g = self.integrand_series(s)?.integrate_from_zero();
        Ok(if self.is_nested() {
            g.shift_down()?.integrate_from_zero()
        } else {
            g
        })
    }

    /// Termwise evaluation; fails when the truncation tail at `r` exceeds `tail_tol`.
    pub fn by_series(self, s: &ExtremalSeries, r: f64, tail_tol: f64) -> Result<f64> {
        Ok(self.antiderivative_series(s)?.eval_within(r, tail_tol)?)
    }
}

impl fmt::Display for RadiusIntegral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Self::R => "R",
            Self::L => "L",
            Self::P => "P",
            Self::T => "T",
            Self::Rs => "Rs",
            Self::Ls => "Ls",
        };
        f.write_str(name)
    }
}

impl FromStr for RadiusIntegral {
    type Err = BohrError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|i| i.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| BohrError::Parameter(format!("unknown integral {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phi::PhiSpec;
    use crate::quadrature::gauss_kronrod;
    use crate::series::DEFAULT_ORDER;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{LN_2, PI};

    fn bundle(spec: PhiSpec) -> Arc<ExtremalSet> {
        Arc::new(ExtremalSet::build(spec, DEFAULT_ORDER).unwrap())
    }

    #[test]
    fn sakaguchi_r_and_l_closed_forms() {
        for gamma in [0.0, 0.2, 0.259, 0.6] {
            let es = bundle(PhiSpec::sakaguchi(gamma).unwrap());
            for r in [0.05f64, 0.2, 1.0 / 3.0, 0.5, 0.8] {
                let expected = gamma / 2.0 * ((1.0 + r) / (1.0 - r)).ln() + (1.0 - gamma) * r / (1.0 - r);
                let q = RadiusIntegral::R.by_quadrature(&es, r, 1e-12).unwrap();
                assert_abs_diff_eq!(q.value, expected, epsilon = 1e-9);
                let expected_l = (1.0 - gamma) * ((1.0 + r) / (1.0 + r * r).sqrt()).ln() + gamma * r.atan();
                let l = RadiusIntegral::L.by_quadrature(&es, r, 1e-12).unwrap();
                assert_abs_diff_eq!(l.value, expected_l, epsilon = 1e-10);
            }
            let l1 = RadiusIntegral::L.by_quadrature(&es, 1.0, 1e-12).unwrap().value;
            assert_abs_diff_eq!(l1, (1.0 - gamma) / 2.0 * LN_2 + gamma * PI / 4.0, epsilon = 1e-11);
        }
    }

    #[test]
    fn koebe_nested_closed_forms() {
        // k'(t)φ(t) = (1+t)/(1-t)³, so T(r) = r/(1-r)
        let es = bundle(PhiSpec::janowski(1.0, -1.0).unwrap());
        for r in [0.1f64, 0.3, 0.6] {
            let t = RadiusIntegral::T.by_quadrature(&es, r, 1e-11).unwrap().value;
            assert_abs_diff_eq!(t, r / (1.0 - r), epsilon = 1e-9);
            // K'(t)φ(t) = 1/(1-t)², so the double integral is -ln(1-r)
            let rs = RadiusIntegral::Rs.by_quadrature(&es, r, 1e-11).unwrap().value;
            assert_abs_diff_eq!(rs, -(1.0 - r).ln(), epsilon = 1e-9);
        }
        let series = &es.series;
        let t = RadiusIntegral::T.by_series(series, 0.3, 1e-10).unwrap();
        let q = RadiusIntegral::T.by_quadrature(&es, 0.3, 1e-11).unwrap().value;
        assert_abs_diff_eq!(t, q, epsilon = 1e-8);
        // (k'(-t²))^{1/2}φ(-t) = (1-t)/((1+t²)(1+t)); Ls(1) = π²/16
        let ls = RadiusIntegral::Ls.by_quadrature(&es, 1.0, 1e-11).unwrap().value;
        assert_abs_diff_eq!(ls, PI * PI / 16.0, epsilon = 1e-9);
    }

    #[test]
    fn nested_matches_fubini_form() {
        let es = bundle(PhiSpec::strongly(0.5).unwrap());
        for kind in [RadiusIntegral::T, RadiusIntegral::Rs, RadiusIntegral::Ls] {
            let g = kind.integrand(&es);
            let r = 0.4;
            let fubini = gauss_kronrod(|t: f64| g.eval(t) * (r / t).ln(), 0.0, r, 1e-12)
                .unwrap()
                .value;
            let nested = kind.by_quadrature(&es, r, 1e-11).unwrap().value;
            assert_abs_diff_eq!(nested, fubini, epsilon = 1e-10);
        }
    }

    #[test]
    fn left_limits_match_extrapolation() {
        for spec in [
            PhiSpec::lemniscate(0.5).unwrap(),
            PhiSpec::exp_blend(0.3).unwrap(),
            PhiSpec::janowski(0.5, 0.25).unwrap(),
        ] {
            let es = bundle(spec);
            for kind in RadiusIntegral::ALL {
                let g = kind.integrand(&es);
                // Richardson step on g(h), g(h/2)
                let h = 1e-4;
                let extrapolated = 2.0 * g.eval(h / 2.0) - g.eval(h);
                assert_abs_diff_eq!(extrapolated, g.left_limit(), epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn p_equals_h_for_positive_coefficients() {
        for spec in [
            PhiSpec::lemniscate(0.6).unwrap(),
            PhiSpec::strongly(0.3).unwrap(),
            PhiSpec::wang(0.5, 0.8).unwrap(),
        ] {
            let es = bundle(spec);
            for r in [0.1, 0.25, 1.0 / 3.0] {
                let p = RadiusIntegral::P.by_quadrature(&es, r, 1e-12).unwrap().value;
                assert_abs_diff_eq!(p, es.h_at(r).unwrap(), epsilon = 1e-9);
                assert_abs_diff_eq!(p, es.majorant_h(r, 1e-14).unwrap(), epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn sign_changing_phi_uses_majorants() {
        let es = bundle(PhiSpec::janowski(0.5, 0.25).unwrap());
        let r = 0.3;
        let p = RadiusIntegral::P.by_quadrature(&es, r, 1e-12).unwrap().value;
        assert!(p > es.h_at(r).unwrap() + 1e-4);
        assert_abs_diff_eq!(
            p,
            RadiusIntegral::P.by_series(&es.series, r, 1e-12).unwrap(),
            epsilon = 1e-9
        );
    }

    #[test]
    fn parse_and_display() {
        for kind in RadiusIntegral::ALL {
            assert_eq!(kind.to_string().parse::<RadiusIntegral>().unwrap(), kind);
        }
        assert!("Q".parse::<RadiusIntegral>().is_err());
    }
}
