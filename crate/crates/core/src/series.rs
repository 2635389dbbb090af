//! Truncated Taylor series about the origin.
//!
//! Every function in this crate that has to be expanded (φ, the extremal
//! functions, sampled class members) is carried as a [`TruncatedSeries`]:
//! a dense vector of real coefficients `c[0..N]` standing for
//! `c[0] + c[1] z + … + c[N-1] z^(N-1) + O(z^N)`.
//!
//! Products and compositions truncate to the shortest operand. `exp` and
//! `sqrt` use the exact coefficient recurrences obtained from
//! `E' = s'E` and `R² = s`, so no powers of the argument series are ever
//! formed.

use std::ops::{Add, Mul, Neg};

use thiserror::Error;

/// Default number of stored coefficients.
pub const DEFAULT_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("a series needs at least one coefficient")]
    Empty,
    #[error("coefficient {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },
    #[error("{op} needs constant term {expected}, found {found}")]
    ConstantTerm {
        op: &'static str,
        expected: f64,
        found: f64,
    },
    #[error("evaluation point {0} lies outside the open unit interval")]
    Domain(f64),
    #[error("truncation tail {tail:e} at |x| = {radius} exceeds tolerance {tol:e}")]
    TailTooLarge { radius: f64, tail: f64, tol: f64 },
}

/// Real Taylor coefficients of a function analytic near 0.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<f64>,
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<f64>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::Empty);
        }
        if let Some((index, &value)) = coeffs.iter().enumerate().find(|(_, c)| !c.is_finite()) {
            return Err(SeriesError::NonFinite { index, value });
        }
        Ok(Self { coeffs })
    }

    /// Builds `order` coefficients from `f(n)`.
    ///
    /// Panics if `order == 0` or `f` produces a non-finite value.
    pub fn from_fn(order: usize, f: impl FnMut(usize) -> f64) -> Self {
        Self::new((0..order).map(f).collect()).expect("from_fn produced an invalid series")
    }

    pub fn zero(order: usize) -> Self {
        Self::from_fn(order, |_| 0.0)
    }

    pub fn constant(value: f64, order: usize) -> Self {
        Self::from_fn(order, |n| if n == 0 { value } else { 0.0 })
    }

    /// The identity map `z`.
    pub fn identity(order: usize) -> Self {
        Self::monomial(1.0, 1, order)
    }

    /// `scale · z^power`.
    pub fn monomial(scale: f64, power: usize, order: usize) -> Self {
        Self::from_fn(order, |n| if n == power { scale } else { 0.0 })
    }

    /// `1 + z + z² + … = 1/(1-z)`.
    pub fn geometric(order: usize) -> Self {
        Self::from_fn(order, |_| 1.0)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `z^n`; zero past the stored order.
    pub fn coeff(&self, n: usize) -> f64 {
        self.coeffs.get(n).copied().unwrap_or(0.0)
    }

    /// Truncates or zero-pads to exactly `order` coefficients.
    pub fn with_order(&self, order: usize) -> Self {
        Self::from_fn(order, |n| self.coeff(n))
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::from_fn(self.order(), |n| factor * self.coeffs[n])
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0.0)
    }

    /// Coefficientwise absolute value; evaluating it at `r` gives `M_f(r)`.
    pub fn majorant(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c.abs()).collect(),
        }
    }

    /// `s(-z)`.
    pub fn reflect(&self) -> Self {
        Self::from_fn(self.order(), |n| {
            if n % 2 == 0 {
                self.coeffs[n]
            } else {
                -self.coeffs[n]
            }
        })
    }

    /// Termwise antiderivative vanishing at 0; the order grows by one.
    pub fn integrate_from_zero(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.order() + 1);
        coeffs.push(0.0);
        coeffs.extend(self.coeffs.iter().enumerate().map(|(n, c)| c / (n + 1) as f64));
        Self { coeffs }
    }

    /// Termwise derivative; the order shrinks by one (never below one).
    pub fn derivative(&self) -> Self {
        if self.order() == 1 {
            return Self::zero(1);
        }
        Self::from_fn(self.order() - 1, |n| (n + 1) as f64 * self.coeffs[n + 1])
    }

    /// Multiplies by `z`, keeping the order (the top coefficient is dropped).
    pub fn shift_up(&self) -> Self {
        Self::from_fn(self.order(), |n| if n == 0 { 0.0 } else { self.coeffs[n - 1] })
    }

    /// Divides by `z`. The constant term must vanish; the order shrinks by one.
    pub fn shift_down(&self) -> Result<Self, SeriesError> {
        if self.coeffs[0] != 0.0 {
            return Err(SeriesError::ConstantTerm {
                op: "shift_down",
                expected: 0.0,
                found: self.coeffs[0],
            });
        }
        if self.order() == 1 {
            return Ok(Self::zero(1));
        }
        Ok(Self {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// `exp(s)` for a series with zero constant term.
    pub fn exp_series(&self) -> Result<Self, SeriesError> {
        if self.coeffs[0] != 0.0 {
            return Err(SeriesError::ConstantTerm {
                op: "exp_series",
                expected: 0.0,
                found: self.coeffs[0],
            });
        }
        let n_max = self.order();
        let mut e = vec![0.0; n_max];
        e[0] = 1.0;
        // n e_n = Σ_{k=1}^{n} k s_k e_{n-k}
        for n in 1..n_max {
            let acc: f64 = (1..=n).map(|k| k as f64 * self.coeffs[k] * e[n - k]).sum();
            e[n] = acc / n as f64;
        }
        Self::new(e)
    }

    /// Principal square root of a series with constant term 1.
    pub fn sqrt_series(&self) -> Result<Self, SeriesError> {
        if self.coeffs[0] != 1.0 {
            return Err(SeriesError::ConstantTerm {
                op: "sqrt_series",
                expected: 1.0,
                found: self.coeffs[0],
            });
        }
        let n_max = self.order();
        let mut r = vec![0.0; n_max];
        r[0] = 1.0;
        // 2 r_n = s_n - Σ_{k=1}^{n-1} r_k r_{n-k}
        for n in 1..n_max {
            let cross: f64 = (1..n).map(|k| r[k] * r[n - k]).sum();
            r[n] = 0.5 * (self.coeffs[n] - cross);
        }
        Self::new(r)
    }

    /// Taylor coefficients of `s ∘ w` for a map with `w(0) = 0`.
    ///
    /// Monomial maps `εz^m` are relocated coefficientwise; anything else goes
    /// through Horner's scheme on series.
    pub fn compose_with_selfmap(&self, w: &TruncatedSeries) -> Result<Self, SeriesError> {
        if w.coeffs[0] != 0.0 {
            return Err(SeriesError::ConstantTerm {
                op: "compose_with_selfmap",
                expected: 0.0,
                found: w.coeffs[0],
            });
        }
        let order = self.order().min(w.order());
        let nonzero: Vec<usize> = (0..order).filter(|&n| w.coeffs[n] != 0.0).collect();
        match nonzero.as_slice() {
            [] => Ok(Self::constant(self.coeffs[0], order)),
            [m] => {
                let (m, eps) = (*m, w.coeffs[*m]);
                let mut out = vec![0.0; order];
                let mut power = 1.0;
                for (n, c) in self.coeffs.iter().enumerate() {
                    let at = n * m;
                    if at >= order {
                        break;
                    }
                    out[at] = c * power;
                    power *= eps;
                }
                Self::new(out)
            }
            _ => {
                let w = w.with_order(order);
                let mut acc = Self::constant(self.coeffs[order - 1], order);
                for n in (0..order - 1).rev() {
                    acc = &(&acc * &w) + &Self::constant(self.coeffs[n], order);
                }
                Ok(acc)
            }
        }
    }

    /// Horner sum of the stored coefficients, no domain or tail checks.
    pub fn horner(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Evaluates at a point of the open unit interval.
    pub fn eval(&self, x: f64) -> Result<f64, SeriesError> {
        if !(x.abs() < 1.0) {
            return Err(SeriesError::Domain(x));
        }
        Ok(self.horner(x))
    }

    /// Evaluates and fails when the truncation tail at `|x|` exceeds `tol`.
    pub fn eval_within(&self, x: f64, tol: f64) -> Result<f64, SeriesError> {
        let value = self.eval(x)?;
        let radius = x.abs();
        let tail = self.tail_hint(radius);
        if tail > tol {
            return Err(SeriesError::TailTooLarge { radius, tail, tol });
        }
        Ok(value)
    }

    /// Geometric-majorant estimate `|c[N-1]| r^N / (1-r)` of the discarded tail.
    pub fn tail_hint(&self, r: f64) -> f64 {
        let r = r.abs();
        if r == 0.0 {
            return 0.0;
        }
        if r >= 1.0 {
            return f64::INFINITY;
        }
        let last = self.coeffs[self.order() - 1].abs();
        last * r.powi(self.order() as i32) / (1.0 - r)
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;

    /// Coefficientwise sum; the shorter operand is zero-padded.
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().max(rhs.order());
        TruncatedSeries::from_fn(order, |n| self.coeff(n) + rhs.coeff(n))
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;

    /// Cauchy product truncated to the shorter operand.
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        let (a, b) = (&self.coeffs, &rhs.coeffs);
        TruncatedSeries::from_fn(order, |n| (0..=n).map(|k| a[k] * b[n - k]).sum())
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn neg(self) -> TruncatedSeries {
        self.scale(-1.0)
    }
}
