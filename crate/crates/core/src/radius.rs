//! Radius equations `lhs(r) = target` for the four classes, their
//! closed-form special cases, sharpness witnesses and threshold scans.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{BohrError, Result};
use crate::extremal::{ExtremalSeries, ExtremalSet};
use crate::integrals::RadiusIntegral;
use crate::phi::PhiSpec;
use crate::quadrature::{
    gauss_kronrod, integrate_1d, integrate_nested, Integrand1D, NestedAccumulator, DEFAULT_TOL,
};
use crate::series::{TruncatedSeries, DEFAULT_ORDER};

pub const ONE_THIRD: f64 = 1.0 / 3.0;

/// Largest admissible `|lhs(r_f) - target|`.
pub const RESIDUAL_LIMIT: f64 = 1e-8;

/// Allowed decrease of the accumulated lhs between grid points.
const MONOTONE_SLACK: f64 = 1e-12;

const CLOSED_FORM_ROOT_TOL: f64 = 1e-13;

/// Largest `|M_h(r_f) + h(-1)|` accepted by the sharpness witness.
pub const WITNESS_TOL: f64 = 1e-7;

pub const NOTE_CAPPED: &str = "Bohr phenomenon holds for r <= 1/3";
pub const NOTE_LOWER_BOUND: &str = "lower bound on the Bohr radius; no sharpness claim";
pub const NOTE_SIGN_CHANGE: &str =
    "coefficients of phi change sign; majorants differ from the extremal function and sharpness is not claimed";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassId {
    Ks,
    Sc,
    Cc,
    Cs,
}

impl ClassId {
    pub const ALL: [ClassId; 4] = [Self::Ks, Self::Sc, Self::Cc, Self::Cs];

    /// The increasing side of the radius equation.
    pub fn lhs_integral(self) -> RadiusIntegral {
        match self {
            Self::Ks => RadiusIntegral::R,
            Self::Sc => RadiusIntegral::P,
            Self::Cc => RadiusIntegral::T,
            Self::Cs => RadiusIntegral::Rs,
        }
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Ks => "Ks",
            Self::Sc => "Sc",
            Self::Cc => "Cc",
            Self::Cs => "Cs",
        })
    }
}

impl FromStr for ClassId {
    type Err = BohrError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| BohrError::Parameter(format!("unknown class {s:?}; expected Ks, Sc, Cc or Cs")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub order: usize,
    /// Absolute tolerance for each integral.
    pub tol: f64,
    pub scan_step: f64,
    pub root_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            order: DEFAULT_ORDER,
            tol: DEFAULT_TOL,
            scan_step: 1e-3,
            root_tol: 1e-12,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if self.order < 2 {
            return Err(BohrError::Parameter(format!(
                "order must be at least 2, got {}",
                self.order
            )));
        }
        if !(self.tol > 0.0 && self.tol < 1e-3) {
            return Err(BohrError::Parameter(format!(
                "tol must lie in (0, 1e-3), got {}",
                self.tol
            )));
        }
        if !(self.scan_step > 0.0 && self.scan_step <= 0.1) {
            return Err(BohrError::Parameter(format!(
                "scan step must lie in (0, 0.1], got {}",
                self.scan_step
            )));
        }
        if !(self.root_tol > 0.0 && self.root_tol < self.scan_step) {
            return Err(BohrError::Parameter(format!(
                "root tolerance {} is not below the scan step",
                self.root_tol
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusResult {
    pub class: ClassId,
    pub spec: PhiSpec,
    pub method: String,
    pub r_f: f64,
    pub capped: f64,
    pub sharp: bool,
    pub target: f64,
    pub residual: f64,
    pub bracket: (f64, f64),
    pub notes: Vec<String>,
    pub warnings: Vec<String>,
}

fn notes_for(class: ClassId, positive: bool, r_f: f64) -> (bool, Vec<String>) {
    let mut notes = Vec::new();
    let sharp = class == ClassId::Sc && positive && r_f <= ONE_THIRD;
    if r_f > ONE_THIRD {
        notes.push(NOTE_CAPPED.to_string());
    }
    if class != ClassId::Sc {
        notes.push(NOTE_LOWER_BOUND.to_string());
    } else if !positive {
        notes.push(NOTE_SIGN_CHANGE.to_string());
    }
    (sharp, notes)
}

/// Checks the min/max hypothesis on a few circles and describes failures.
pub fn hypothesis_warnings(spec: &PhiSpec) -> Vec<String> {
    [0.25, 0.5, 0.75, 0.95]
        .into_iter()
        .filter(|&r| !spec.check_min_max_hypothesis(r, 256))
        .map(|r| format!("min/max hypothesis for |phi| fails numerically on |z| = {r} for {spec}"))
        .collect()
}

enum Lhs {
    Single(Integrand1D),
    Nested(Integrand1D),
}

#[derive(Clone)]
enum Cursor<'a> {
    Single {
        f: &'a Integrand1D,
        pos: f64,
        value: f64,
        tol: f64,
    },
    Nested(NestedAccumulator<'a>),
}

impl<'a> Cursor<'a> {
    fn new(lhs: &'a Lhs, segment_tol: f64) -> Result<Self> {
        Ok(match lhs {
            Lhs::Single(f) => Cursor::Single {
                f,
                pos: 0.0,
                value: 0.0,
                tol: segment_tol,
            },
            Lhs::Nested(f) => Cursor::Nested(NestedAccumulator::new(f, segment_tol)?),
        })
    }

    fn value(&self) -> f64 {
        match self {
            Cursor::Single { value, .. } => *value,
            Cursor::Nested(acc) => acc.value(),
        }
    }

    fn value_at(&self, s: f64) -> Result<f64> {
        Ok(match self {
            Cursor::Single { f, pos, value, tol } => value + integrate_1d(f, *pos, s, *tol)?.value,
            Cursor::Nested(acc) => acc.value_at(s)?,
        })
    }

    fn advance_to(&mut self, s: f64) -> Result<()> {
        match self {
            Cursor::Single { f, pos, value, tol } => {
                *value += integrate_1d(f, *pos, s, *tol)?.value;
                *pos = s;
            }
            Cursor::Nested(acc) => acc.advance_to(s)?,
        }
        Ok(())
    }
}

/// One radius equation, ready to solve.
pub struct RadiusProblem {
    pub class: ClassId,
    pub spec: PhiSpec,
    pub extremal: Arc<ExtremalSet>,
    pub target: f64,
    pub options: SolverOptions,
    lhs: Lhs,
}

impl RadiusProblem {
    pub fn new(class: ClassId, spec: PhiSpec, options: SolverOptions) -> Result<Self> {
        options.validate()?;
        let extremal = Arc::new(ExtremalSet::build(spec, options.order)?);
        let target = match class {
            ClassId::Ks => {
                RadiusIntegral::L
                    .by_quadrature(&extremal, 1.0, options.tol)?
                    .value
            }
            ClassId::Sc => -extremal.h_at_minus_one,
            ClassId::Cc => -extremal.k_at_minus_one,
            ClassId::Cs => {
                RadiusIntegral::Ls
                    .by_quadrature(&extremal, 1.0, options.tol)?
                    .value
            }
        };
        if !(target > 0.0) {
            return Err(BohrError::Inconsistent(format!(
                "target {target} for {class} / {spec} is not positive"
            )));
        }
        let kind = class.lhs_integral();
        let f = kind.integrand(&extremal);
        let lhs = if kind.is_nested() {
            Lhs::Nested(f)
        } else {
            Lhs::Single(f)
        };
        Ok(Self {
            class,
            spec,
            extremal,
            target,
            options,
            lhs,
        })
    }

    /// `lhs(r)` computed from scratch.
    pub fn lhs(&self, r: f64) -> Result<f64> {
        Ok(match &self.lhs {
            Lhs::Single(f) => integrate_1d(f, 0.0, r, self.options.tol)?.value,
            Lhs::Nested(f) => integrate_nested(f, r, self.options.tol)?.value,
        })
    }

    pub fn solve(&self) -> Result<RadiusResult> {
        let opts = &self.options;
        let steps = (1.0 / opts.scan_step).round() as usize;
        let mut cursor = Cursor::new(&self.lhs, opts.tol / steps as f64)?;
        let mut previous_r = 0.0;
        let mut found = None;
        for i in 1..steps {
            let r = i as f64 / steps as f64;
            let before = cursor.clone();
            cursor.advance_to(r)?;
            if cursor.value() < before.value() - MONOTONE_SLACK {
                return Err(BohrError::Inconsistent(format!(
                    "lhs decreases between r = {previous_r} and r = {r}"
                )));
            }
            if cursor.value() >= self.target {
                found = Some((before, previous_r, r));
                break;
            }
            previous_r = r;
        }
        let Some((start, mut lo, mut hi)) = found else {
            return Err(BohrError::NoRoot {
                target: self.target,
                last_r: previous_r,
            });
        };
        while hi - lo > opts.root_tol {
            let mid = 0.5 * (lo + hi);
            if start.value_at(mid)? < self.target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let r_f = 0.5 * (lo + hi);
        let residual = (self.lhs(r_f)? - self.target).abs();
        if residual > RESIDUAL_LIMIT {
            return Err(BohrError::Inconsistent(format!(
                "residual {residual:e} at r_f = {r_f} exceeds {RESIDUAL_LIMIT:e}"
            )));
        }
        let (sharp, notes) = notes_for(self.class, self.extremal.has_positive_coeffs(), r_f);
        Ok(RadiusResult {
            class: self.class,
            spec: self.spec,
            method: "quadrature".to_string(),
            r_f,
            capped: r_f.min(ONE_THIRD),
            sharp,
            target: self.target,
            residual,
            bracket: (lo, hi),
            notes,
            warnings: hypothesis_warnings(&self.spec),
        })
    }
}

pub fn solve_radius(class: ClassId, spec: PhiSpec, options: SolverOptions) -> Result<RadiusResult> {
    RadiusProblem::new(class, spec, options)?.solve()
}

/// Solves the class equation for raw φ coefficients through termwise
/// integration of majorant series. Only radii where the series tail stays
/// below `options.tol` are reachable.
pub fn solve_by_series(
    class: ClassId,
    phi: &TruncatedSeries,
    target: f64,
    options: SolverOptions,
) -> Result<f64> {
    options.validate()?;
    let bundle = ExtremalSeries::from_phi_series(phi)?;
    let lhs = class.lhs_integral().antiderivative_series(&bundle)?;
    let eval = |r: f64| lhs.eval_within(r, options.tol);
    let steps = (1.0 / options.scan_step).round() as usize;
    let mut lo = 0.0;
    let mut hi = None;
    for i in 1..steps {
        let r = i as f64 / steps as f64;
        if eval(r)? >= target {
            hi = Some(r);
            break;
        }
        lo = r;
    }
    let mut hi = hi.ok_or(BohrError::NoRoot { target, last_r: lo })?;
    while hi - lo > options.root_tol {
        let mid = 0.5 * (lo + hi);
        if eval(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Radius equations available in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "closed_form")]
pub enum ClosedForm {
    /// `γ/2·ln((1+r)/(1-r)) + (1-γ)r/(1-r) = (1-γ)/2·ln 2 + γπ/4`
    KsSakaguchi { gamma: f64 },
    /// `∫₀ʳ (1+βt)/((1-αβt)(1-t²)) dt = ∫₀¹ (1-βt)/((1+αβt)(1+t²)) dt`
    KsWang { alpha: f64, beta: f64 },
    /// `r·exp(s(2r + sr²/2)) = exp(s(s/2 - 2))`
    ScLemniscate { s: f64 },
    /// `r + 2r^{1/(2(1-γ))} - 1 = 0`
    ScSakaguchi { gamma: f64 },
    /// `r·e^{Ar} = e^{-A}`
    ScJanowskiLinear { a: f64 },
    /// `r(1+Br)^{(A-B)/B} = (1-B)^{(A-B)/B}`
    ScJanowski { a: f64, b: f64 },
}

impl ClosedForm {
    pub fn class(&self) -> ClassId {
        match self {
            Self::KsSakaguchi { .. } | Self::KsWang { .. } => ClassId::Ks,
            _ => ClassId::Sc,
        }
    }

    pub fn spec(&self) -> Result<PhiSpec> {
        match *self {
            Self::KsSakaguchi { gamma } | Self::ScSakaguchi { gamma } => PhiSpec::sakaguchi(gamma),
            Self::KsWang { alpha, beta } => PhiSpec::wang(alpha, beta),
            Self::ScLemniscate { s } => PhiSpec::lemniscate(s),
            Self::ScJanowskiLinear { a } => PhiSpec::janowski(a, 0.0),
            Self::ScJanowski { a, b } => {
                if b == 0.0 {
                    return Err(BohrError::Parameter(
                        "the Janowski closed form needs B != 0".into(),
                    ));
                }
                PhiSpec::janowski(a, b)
            }
        }
    }

    /// Whether the parameters lie in the range where the root is expected to
    /// lie in `(0, 1/3)`.
    pub fn in_sharp_range(&self) -> bool {
        match *self {
            Self::KsSakaguchi { gamma } => gamma < 0.259056404,
            Self::KsWang { .. } => true,
            Self::ScLemniscate { s } => s > 0.444981,
            Self::ScSakaguchi { gamma } => gamma < 0.5,
            Self::ScJanowskiLinear { a } => a >= 0.75 * 3f64.ln(),
            Self::ScJanowski { a, b } => {
                let p = (a - b) / b;
                (1.0 + b / 3.0).powf(p) / 3.0 >= (1.0 - b).powf(p)
            }
        }
    }

    /// The distance bound: `L(1)` for Ks, `-h(-1)` for Sc.
    pub fn target(&self) -> Result<f64> {
        Ok(match *self {
            Self::KsSakaguchi { gamma } => {
                (1.0 - gamma) / 2.0 * std::f64::consts::LN_2 + gamma * std::f64::consts::FRAC_PI_4
            }
            Self::KsWang { alpha, beta } => {
                let c = alpha * beta;
                let right = |t: f64| (1.0 - beta * t) / ((1.0 + c * t) * (1.0 + t * t));
                gauss_kronrod(right, 0.0, 1.0, 1e-14)?.value
            }
            Self::ScLemniscate { s } => (s * (s / 2.0 - 2.0)).exp(),
            Self::ScSakaguchi { gamma } => 2f64.powf(-2.0 * (1.0 - gamma)),
            Self::ScJanowskiLinear { a } => (-a).exp(),
            Self::ScJanowski { a, b } => (1.0 - b).powf((a - b) / b),
        })
    }

    /// `lhs(r) - rhs` of the closed-form equation; increasing in `r`.
    fn excess(&self, r: f64) -> Result<f64> {
        Ok(match *self {
            Self::KsSakaguchi { gamma } => {
                gamma / 2.0 * ((1.0 + r) / (1.0 - r)).ln() + (1.0 - gamma) * r / (1.0 - r) - self.target()?
            }
            Self::KsWang { alpha, beta } => {
                let c = alpha * beta;
                let left = |t: f64| (1.0 + beta * t) / ((1.0 - c * t) * (1.0 - t * t));
                gauss_kronrod(left, 0.0, r, 1e-13)?.value - self.target()?
            }
            Self::ScLemniscate { s } => r * (s * (2.0 * r + s * r * r / 2.0)).exp() - self.target()?,
            Self::ScSakaguchi { gamma } => r + 2.0 * r.powf(1.0 / (2.0 * (1.0 - gamma))) - 1.0,
            Self::ScJanowskiLinear { a } => r * (a * r).exp() - self.target()?,
            Self::ScJanowski { a, b } => r * (1.0 + b * r).powf((a - b) / b) - self.target()?,
        })
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::KsSakaguchi { gamma } => write!(f, "ks_sakaguchi(gamma={gamma})"),
            Self::KsWang { alpha, beta } => write!(f, "ks_wang(alpha={alpha}, beta={beta})"),
            Self::ScLemniscate { s } => write!(f, "sc_lemniscate(s={s})"),
            Self::ScSakaguchi { gamma } => write!(f, "sc_sakaguchi(gamma={gamma})"),
            Self::ScJanowskiLinear { a } => write!(f, "sc_janowski_linear(A={a})"),
            Self::ScJanowski { a, b } => write!(f, "sc_janowski(A={a}, B={b})"),
        }
    }
}

/// Root of the closed-form equation by bisection on `[0, 1)`.
pub fn solve_closed_form(closed: ClosedForm) -> Result<RadiusResult> {
    let spec = closed.spec()?;
    let mut lo = 0.0;
    let mut hi = 1.0 - 1e-6;
    if closed.excess(lo)? >= 0.0 || closed.excess(hi)? <= 0.0 {
        return Err(BohrError::NoRoot {
            target: 0.0,
            last_r: hi,
        });
    }
    while hi - lo > CLOSED_FORM_ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        if closed.excess(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r_f = 0.5 * (lo + hi);
    let residual = closed.excess(r_f)?.abs();
    let positive = spec.has_positive_coeffs();
    let (sharp, mut notes) = notes_for(closed.class(), positive, r_f);
    if !closed.in_sharp_range() {
        notes.push(format!(
            "{closed} has parameters for which the root need not lie below 1/3"
        ));
    }
    if !positive {
        notes.push("closed form uses h itself, not its majorant".to_string());
    }
    Ok(RadiusResult {
        class: closed.class(),
        spec,
        method: format!("closed form {closed}"),
        r_f,
        capped: r_f.min(ONE_THIRD),
        sharp,
        target: closed.target()?,
        residual,
        bracket: (lo, hi),
        notes,
        warnings: Vec::new(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SharpnessReport {
    pub r_f: f64,
    pub delta: f64,
    pub target: f64,
    pub at_root: f64,
    pub at_shift: f64,
    /// `at_root - target`
    pub defect: f64,
    pub exceeds_beyond: bool,
}

/// Evaluates `M_h` at `r_f` and `r_f + delta` against `-h(-1)`.
pub fn sharpness_witness(result: &RadiusResult, delta: f64) -> Result<SharpnessReport> {
    if !result.sharp {
        return Err(BohrError::Parameter(format!(
            "no sharpness claim for {} / {}",
            result.class, result.spec
        )));
    }
    if !(delta >= 0.0 && result.r_f + delta < 1.0) {
        return Err(BohrError::Parameter(format!("delta {delta} out of range")));
    }
    let es = ExtremalSet::build(result.spec, DEFAULT_ORDER)?;
    let target = -es.h_at_minus_one;
    let at_root = es.majorant_h(result.r_f, 1e-14)?;
    let at_shift = es.majorant_h(result.r_f + delta, 1e-14)?;
    let defect = at_root - target;
    if defect.abs() > WITNESS_TOL {
        return Err(BohrError::Inconsistent(format!(
            "M_h(r_f) - (-h(-1)) = {defect:e} for {}",
            result.spec
        )));
    }
    Ok(SharpnessReport {
        r_f: result.r_f,
        delta,
        target,
        at_root,
        at_shift,
        defect,
        exceeds_beyond: at_shift > target,
    })
}

/// `h(1/3)` against `-h(-1)`: which side of 1/3 the sharp radius falls on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryComparison {
    pub h_one_third: f64,
    pub minus_h_minus_one: f64,
    /// `h(1/3) + h(-1)`; positive means the sharp radius lies below 1/3.
    pub excess: f64,
}

impl BoundaryComparison {
    pub fn sign(&self) -> char {
        if self.excess > 0.0 {
            '+'
        } else {
            '-'
        }
    }
}

pub fn boundary_comparison(spec: PhiSpec) -> Result<BoundaryComparison> {
    let es = ExtremalSet::build(spec, DEFAULT_ORDER)?;
    let h_one_third = es.h_at(ONE_THIRD)?;
    let minus_h_minus_one = -es.h_at_minus_one;
    Ok(BoundaryComparison {
        h_one_third,
        minus_h_minus_one,
        excess: h_one_third - minus_h_minus_one,
    })
}

/// One-parameter families whose radius crosses 1/3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScanFamily {
    /// Ks with `(1 + (1-2γ)z)/(1-z)`, parameter γ
    KsSakaguchi,
    /// Sc with `(1 + sz)²`, parameter s
    ScLemniscate,
    /// Sc with `α + (1-α)eᶻ`, parameter α
    ScExpBlend,
    /// Sc with `((1+z)/(1-z))^α`, parameter α
    ScStrongly,
}

impl ScanFamily {
    pub fn spec(self, p: f64) -> Result<PhiSpec> {
        match self {
            Self::KsSakaguchi => PhiSpec::sakaguchi(p),
            Self::ScLemniscate => PhiSpec::lemniscate(p),
            Self::ScExpBlend => PhiSpec::exp_blend(p),
            Self::ScStrongly => PhiSpec::strongly(p),
        }
    }

    pub fn class(self) -> ClassId {
        match self {
            Self::KsSakaguchi => ClassId::Ks,
            _ => ClassId::Sc,
        }
    }

    /// `lhs(1/3) - target` at parameter `p`.
    pub fn excess_at_one_third(self, p: f64) -> Result<f64> {
        match self {
            Self::KsSakaguchi => ClosedForm::KsSakaguchi { gamma: p }.excess(ONE_THIRD),
            _ => Ok(boundary_comparison(self.spec(p)?)?.excess),
        }
    }

    /// The sharp radius at parameter `p`: root of `lhs(r) = target`, where
    /// Sc families use `P = h`.
    pub fn radius(self, p: f64) -> Result<f64> {
        match self {
            Self::KsSakaguchi => Ok(solve_closed_form(ClosedForm::KsSakaguchi { gamma: p })?.r_f),
            Self::ScLemniscate => Ok(solve_closed_form(ClosedForm::ScLemniscate { s: p })?.r_f),
            _ => {
                let es = ExtremalSet::build(self.spec(p)?, DEFAULT_ORDER)?;
                let target = -es.h_at_minus_one;
                let (mut lo, mut hi) = (0.0, 1.0 - 1e-9);
                if es.h_at(hi)? <= target {
                    return Err(BohrError::NoRoot { target, last_r: hi });
                }
                while hi - lo > CLOSED_FORM_ROOT_TOL {
                    let mid = 0.5 * (lo + hi);
                    if es.h_at(mid)? < target {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                Ok(0.5 * (lo + hi))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRow {
    pub param: f64,
    pub r_f: f64,
    pub in_sharp_window: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdScan {
    pub family: ScanFamily,
    pub rows: Vec<ThresholdRow>,
    /// Consecutive grid parameters between which `r_f` crosses 1/3.
    pub bracket: Option<(f64, f64)>,
}

pub fn threshold_scan(family: ScanFamily, grid: &[f64]) -> Result<ThresholdScan> {
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(BohrError::Parameter(
            "parameter grid must be strictly increasing".into(),
        ));
    }
    let rows = grid
        .iter()
        .map(|&param| {
            let r_f = family.radius(param)?;
            Ok(ThresholdRow {
                param,
                r_f,
                in_sharp_window: r_f < ONE_THIRD,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let bracket = rows
        .windows(2)
        .find(|w| w[0].in_sharp_window != w[1].in_sharp_window)
        .map(|w| (w[0].param, w[1].param));
    Ok(ThresholdScan {
        family,
        rows,
        bracket,
    })
}

/// Bisects the parameter on `excess(1/3) = 0` inside a scan bracket.
pub fn refine_threshold(family: ScanFamily, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = (lo, hi);
    let f_lo = family.excess_at_one_third(lo)?;
    let f_hi = family.excess_at_one_third(hi)?;
    if f_lo.signum() == f_hi.signum() {
        return Err(BohrError::Parameter(format!(
            "no threshold between {lo} and {hi} for {family:?}"
        )));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if family.excess_at_one_third(mid)?.signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// An inclusive grid `start, start + step, …` up to `end`.
pub fn grid(start: f64, end: f64, step: f64) -> Vec<f64> {
    let n = ((end - start) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| start + i as f64 * step).collect()
}
