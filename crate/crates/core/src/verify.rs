//! Explicit class members built from their defining identities, and
//! empirical checks of the Bohr inequality on them.
//!
//! | class | member |
//! |-------|--------|
//! | Ks | `f' = φ(ω(z))/(1 - z²)` |
//! | Sc | `f' = k'(z)·φ(ω(z))` |
//! | Cc | `f = ∫₀ᶻ (1/ξ)∫₀^ξ k'(η)φ(ω(η)) dη dξ` |
//! | Cs | `f = ∫₀ᶻ (1/ξ)∫₀^ξ K'(η)φ(ω(η)) dη dξ` |

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{BohrError, Result};
use crate::extremal::ExtremalSeries;
use crate::phi::PhiSpec;
use crate::radius::{ClassId, RadiusProblem, RadiusResult, SolverOptions, ONE_THIRD, WITNESS_TOL};
use crate::series::TruncatedSeries;

/// A Bohr check passes when `margin ≥ -BOHR_SLACK`.
pub const BOHR_SLACK: f64 = 1e-9;

/// Largest admissible truncation tail of `M_f` at the checked radius.
pub const CHECK_TAIL_TOL: f64 = 1e-10;

const LEMMA_SLACK: f64 = 1e-10;

/// Offset beyond `r_f` at which the extremal member must fail.
pub const WITNESS_DELTA: f64 = 0.01;

pub const REPORT_SCHEMA: u32 = 1;

const MAX_POWER: u32 = 4;

/// `ω(z) = ε·z^m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelfMap {
    pub epsilon: f64,
    pub m: u32,
}

impl SelfMap {
    pub fn new(epsilon: f64, m: u32) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) || m == 0 {
            return Err(BohrError::Parameter(format!(
                "self-map needs 0 <= epsilon <= 1 and m >= 1, got epsilon = {epsilon}, m = {m}"
            )));
        }
        Ok(Self { epsilon, m })
    }

    pub fn identity() -> Self {
        Self { epsilon: 1.0, m: 1 }
    }

    pub fn series(&self, order: usize) -> TruncatedSeries {
        TruncatedSeries::monomial(self.epsilon, self.m as usize, order)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    pub class: ClassId,
    pub spec: PhiSpec,
    pub omega: SelfMap,
    pub series: TruncatedSeries,
    /// Lower bound on `d(f(0), ∂f(𝔻))` for the class.
    pub distance_bound: f64,
}

/// Builds members of one class for one φ.
#[derive(Debug, Clone)]
pub struct Sampler {
    pub class: ClassId,
    pub spec: PhiSpec,
    pub distance_bound: f64,
    bundle: ExtremalSeries,
}

impl Sampler {
    pub fn new(class: ClassId, spec: PhiSpec, order: usize, distance_bound: f64) -> Result<Self> {
        let bundle = ExtremalSeries::from_phi_series(&spec.series(order))?;
        Ok(Self {
            class,
            spec,
            distance_bound,
            bundle,
        })
    }

    pub fn from_problem(problem: &RadiusProblem) -> Self {
        Self {
            class: problem.class,
            spec: problem.spec,
            distance_bound: problem.target,
            bundle: problem.extremal.series.clone(),
        }
    }

    pub fn order(&self) -> usize {
        self.bundle.order()
    }

    pub fn sample(&self, omega: SelfMap) -> Result<SampledFunction> {
        let order = self.order();
        let subordinate = self.bundle.phi.compose_with_selfmap(&omega.series(order))?;
        let series = match self.class {
            ClassId::Ks => {
                let g_over_z = TruncatedSeries::from_fn(order, |n| if n % 2 == 0 { 1.0 } else { 0.0 });
                (&g_over_z * &subordinate).integrate_from_zero()
            }
            ClassId::Sc => (&self.bundle.k_prime * &subordinate).integrate_from_zero(),
            ClassId::Cc | ClassId::Cs => {
                let g_prime = if self.class == ClassId::Cc {
                    &self.bundle.k_prime
                } else {
                    &self.bundle.big_k_prime
                };
                (g_prime * &subordinate)
                    .integrate_from_zero()
                    .shift_down()?
                    .integrate_from_zero()
            }
        }
        .with_order(order);
        Ok(SampledFunction {
            class: self.class,
            spec: self.spec,
            omega,
            series,
            distance_bound: self.distance_bound,
        })
    }
}

pub fn sample_member(
    class: ClassId,
    spec: PhiSpec,
    omega: SelfMap,
    order: usize,
    distance_bound: f64,
) -> Result<SampledFunction> {
    Sampler::new(class, spec, order, distance_bound)?.sample(omega)
}

/// `(holds, margin)` with `margin = distance_bound - M_f(r)`.
pub fn check_bohr(sf: &SampledFunction, r: f64) -> Result<(bool, f64)> {
    if !(r > 0.0 && r < 1.0) {
        return Err(BohrError::Parameter(format!(
            "check radius must lie in (0, 1), got {r}"
        )));
    }
    let m = sf.series.majorant().eval_within(r, CHECK_TAIL_TOL)?;
    let margin = sf.distance_bound - m;
    Ok((margin >= -BOHR_SLACK, margin))
}

/// Whether `M_{f∘ω}(r) ≤ M_f(r)` on every grid radius.
pub fn check_subordination_lemma(f: &TruncatedSeries, omega: SelfMap, r_grid: &[f64]) -> Result<bool> {
    if let Some(&r) = r_grid.iter().find(|&&r| !(r > 0.0 && r <= ONE_THIRD)) {
        return Err(BohrError::Parameter(format!("lemma radius {r} outside (0, 1/3]")));
    }
    let q = f.compose_with_selfmap(&omega.series(f.order()))?;
    let (mf, mq) = (f.majorant(), q.majorant());
    Ok(r_grid.iter().all(|&r| mq.horner(r) <= mf.horner(r) + LEMMA_SLACK))
}

/// Self-map for sample `index`; sample 0 is the identity.
pub fn campaign_self_map(seed: u64, index: u64) -> SelfMap {
    if index == 0 {
        return SelfMap::identity();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let epsilon = rng.gen_range(0.0..=1.0);
    let m = rng.gen_range(1..=MAX_POWER);
    SelfMap { epsilon, m }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignFailure {
    pub index: u64,
    pub epsilon: f64,
    pub m: u32,
    pub seed: u64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessOutcome {
    pub r_f: f64,
    pub margin_at_root: f64,
    pub margin_beyond: f64,
    pub delta: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub class: ClassId,
    pub spec: PhiSpec,
    pub seed: u64,
    pub n: u64,
    pub r_f: f64,
    pub capped: f64,
    pub sharp: bool,
    pub r_checked: f64,
    pub distance_bound: f64,
    pub min_margin: f64,
    pub failures: Vec<CampaignFailure>,
    pub witness: Option<WitnessOutcome>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.witness.as_ref().is_none_or(|w| w.ok)
    }

    pub fn into_result(self) -> Result<Self> {
        if self.passed() {
            return Ok(self);
        }
        let detail = match self.failures.first() {
            Some(f) => format!(
                "{} violation(s) at r = {}; first: sample {} (epsilon = {}, m = {}, seed = {}) margin {:e}",
                self.failures.len(),
                self.r_checked,
                f.index,
                f.epsilon,
                f.m,
                f.seed,
                f.margin
            ),
            None => "sharpness witness failed".to_string(),
        };
        Err(BohrError::Verification(detail))
    }
}

/// Solves the radius, then checks `n_samples` members at the capped radius
/// (or at `r_override`).
pub fn run_campaign(
    class: ClassId,
    spec: PhiSpec,
    n_samples: u64,
    seed: u64,
    r_override: Option<f64>,
    options: SolverOptions,
) -> Result<VerificationReport> {
    let problem = RadiusProblem::new(class, spec, options)?;
    let radius = problem.solve()?;
    run_campaign_with(&problem, &radius, n_samples, seed, r_override)
}

/// Campaign against an already solved radius problem.
pub fn run_campaign_with(
    problem: &RadiusProblem,
    radius: &RadiusResult,
    n_samples: u64,
    seed: u64,
    r_override: Option<f64>,
) -> Result<VerificationReport> {
    if n_samples == 0 {
        return Err(BohrError::Parameter(
            "a campaign needs at least one sample".into(),
        ));
    }
    let r_checked = r_override.unwrap_or(radius.capped);
    let sampler = Sampler::from_problem(problem);
    let mut min_margin = f64::INFINITY;
    let mut failures = Vec::new();
    for index in 0..n_samples {
        let omega = campaign_self_map(seed, index);
        let sf = sampler.sample(omega)?;
        let (holds, margin) = check_bohr(&sf, r_checked)?;
        min_margin = min_margin.min(margin);
        if !holds {
            failures.push(CampaignFailure {
                index,
                epsilon: omega.epsilon,
                m: omega.m,
                seed,
                margin,
            });
        }
    }
    let witness = if radius.sharp {
        let extremal = sampler.sample(SelfMap::identity())?;
        let (_, margin_at_root) = check_bohr(&extremal, radius.r_f)?;
        let (beyond_holds, margin_beyond) = check_bohr(&extremal, radius.r_f + WITNESS_DELTA)?;
        Some(WitnessOutcome {
            r_f: radius.r_f,
            margin_at_root,
            margin_beyond,
            delta: WITNESS_DELTA,
            ok: margin_at_root.abs() <= WITNESS_TOL && !beyond_holds,
        })
    } else {
        None
    };
    Ok(VerificationReport {
        schema: REPORT_SCHEMA,
        class: problem.class,
        spec: problem.spec,
        seed,
        n: n_samples,
        r_f: radius.r_f,
        capped: radius.capped,
        sharp: radius.sharp,
        r_checked,
        distance_bound: problem.target,
        min_margin,
        failures,
        witness,
    })
}
