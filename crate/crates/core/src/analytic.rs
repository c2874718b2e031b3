//! Closed-form machinery: the advection-removing transformation factor,
//! Fourier sine coefficients of the transformed initial condition, the
//! truncated series solution, the single-mode reference formula and modal
//! decay rates.
//!
//! The series exponent uses u^2/(4D); see [`mode_decay_rate`] for the decay
//! decomposition this relies on.

use std::f64::consts::PI;

use thiserror::Error;

use crate::model::{InitialCondition, ValidatedScenario, MAX_EXPONENT};

/// Pi rounded the way the source tables for pollutant decay rates round it.
pub const PAPER_PI: f64 = 3.14;

#[derive(Debug, Error)]
pub enum AnalyticError {
    #[error("exponent {0} exceeds the representable limit {MAX_EXPONENT}")]
    ExponentOverflow(f64),
    #[error("quadrature did not converge for mode {mode}: refinement changed b_n by {delta:e}")]
    QuadratureNotConverged { mode: usize, delta: f64 },
    #[error("quadrature panel count must be even and >= 8, got {0}")]
    InvalidPanels(usize),
    #[error("series truncation order must be >= 1")]
    InvalidTruncation,
    #[error("closed-form reference requires a single sine-mode initial condition")]
    NotSineMode,
    #[error("operation requires a uniform diffusivity scenario")]
    NotUniform,
    #[error("evaluation point (x = {x}, t = {t}) outside 0 <= x <= L, t >= 0")]
    OutOfDomain { x: f64, t: f64 },
}

/// Transformation factor A(x, t) = A0 * exp(-u^2 t / 4D) * exp(u x / 2D).
///
/// Multiplying the transformed pure-diffusion solution V by this factor
/// recovers the advection-diffusion solution C = A * V.
pub fn transform_factor(x: f64, t: f64, u: f64, d: f64, a0: f64) -> Result<f64, AnalyticError> {
    let space_exp = u * x / (2.0 * d);
    if space_exp.abs() > MAX_EXPONENT {
        return Err(AnalyticError::ExponentOverflow(space_exp));
    }
    let time_exp = -u * u * t / (4.0 * d);
    Ok(a0 * (time_exp + space_exp).exp())
}

/// Modal decay rate u^2/(4D) + D (n pi / L)^2, with its advective and
/// diffusive parts kept separate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayRate {
    pub mode: u32,
    /// u^2 / (4D)
    pub advective: f64,
    /// D (n pi / L)^2
    pub diffusive: f64,
}

impl DecayRate {
    pub fn rate(&self) -> f64 {
        self.advective + self.diffusive
    }
}

/// Decay rate of mode `n` with machine-precision pi.
pub fn mode_decay_rate(n: u32, d: f64, u: f64, length: f64) -> DecayRate {
    mode_decay_rate_with_pi(n, d, u, length, PI)
}

/// Decay rate of mode `n` with an explicit value of pi. Passing [`PAPER_PI`]
/// reproduces the printed pollutant-table rates.
pub fn mode_decay_rate_with_pi(n: u32, d: f64, u: f64, length: f64, pi: f64) -> DecayRate {
    let k = f64::from(n) * pi / length;
    DecayRate {
        mode: n,
        advective: u * u / (4.0 * d),
        diffusive: d * k * k,
    }
}

/// Composite Simpson integral of `f` over [a, b] with `panels` subintervals
/// (`panels` even).
fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    debug_assert!(panels >= 2 && panels % 2 == 0);
    let h = (b - a) / panels as f64;
    let mut acc = f(a) + f(b);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// Fourier sine coefficients b_n, n = 1..=K, of the transformed initial
/// condition:
///
///   b_n = (2/L) * integral_0^L exp(-u x / 2D) f(x) sin(n pi x / L) dx
///
/// computed by composite Simpson quadrature over `panels` intervals, with a
/// self-check against the half-resolution result.
pub fn fourier_coefficients(
    ic: &InitialCondition,
    u: f64,
    d: f64,
    length: f64,
    truncation: usize,
    panels: usize,
) -> Result<Vec<f64>, AnalyticError> {
    if truncation < 1 {
        return Err(AnalyticError::InvalidTruncation);
    }
    if panels < 8 || panels % 2 != 0 {
        return Err(AnalyticError::InvalidPanels(panels));
    }
    let boundary_exp = u * length / (2.0 * d);
    if boundary_exp.abs() > MAX_EXPONENT {
        return Err(AnalyticError::ExponentOverflow(boundary_exp));
    }

    let half = if (panels / 2) % 2 == 0 { panels / 2 } else { panels / 2 + 1 };
    let mut coeffs = Vec::with_capacity(truncation);
    for n in 1..=truncation {
        let integrand = |x: f64| {
            (-u * x / (2.0 * d)).exp() * ic.eval(x, length) * (n as f64 * PI * x / length).sin()
        };
        let fine = 2.0 / length * simpson(&integrand, 0.0, length, panels);
        let coarse = 2.0 / length * simpson(&integrand, 0.0, length, half);
        let delta = (fine - coarse).abs();
        if delta > 1e-10 {
            return Err(AnalyticError::QuadratureNotConverged { mode: n, delta });
        }
        coeffs.push(fine);
    }
    Ok(coeffs)
}

/// Default truncation order for the series solution.
pub const DEFAULT_TRUNCATION: usize = 64;

/// Default Simpson panel count for coefficient quadrature.
pub const DEFAULT_PANELS: usize = 2048;

/// Truncated series solution
///
///   C(x, t) = exp(-u^2 t / 4D) exp(u x / 2D)
///             * sum_n b_n sin(n pi x / L) exp(-D (n pi / L)^2 t).
///
/// Immutable after construction; evaluation is a pure function and safe
/// under concurrent calls.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSolution {
    coefficients: Vec<f64>,
    velocity: f64,
    diffusivity: f64,
    length: f64,
}

/// Value of the series at a point plus a bound on the truncated tail,
/// |b_K| * exp(-D (K pi / L)^2 t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub tail_bound: f64,
}

impl SeriesSolution {
    pub fn new(
        coefficients: Vec<f64>,
        velocity: f64,
        diffusivity: f64,
        length: f64,
    ) -> Result<Self, AnalyticError> {
        if coefficients.is_empty() {
            return Err(AnalyticError::InvalidTruncation);
        }
        if coefficients.iter().any(|b| !b.is_finite()) {
            return Err(AnalyticError::InvalidTruncation);
        }
        Ok(SeriesSolution { coefficients, velocity, diffusivity, length })
    }

    /// Builds the series for a uniform-diffusivity scenario by quadrature of
    /// its initial condition.
    pub fn for_scenario(
        scenario: &ValidatedScenario,
        truncation: usize,
        panels: usize,
    ) -> Result<Self, AnalyticError> {
        let d = scenario.diffusivity().as_uniform().ok_or(AnalyticError::NotUniform)?;
        let coefficients = fourier_coefficients(
            scenario.initial_condition(),
            scenario.velocity(),
            d,
            scenario.length(),
            truncation,
            panels,
        )?;
        SeriesSolution::new(coefficients, scenario.velocity(), d, scenario.length())
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn truncation(&self) -> usize {
        self.coefficients.len()
    }

    /// Evaluates C(x, t). Exactly zero at both boundaries.
    pub fn evaluate(&self, x: f64, t: f64) -> Result<SeriesValue, AnalyticError> {
        if !(0.0..=self.length).contains(&x) || t < 0.0 {
            return Err(AnalyticError::OutOfDomain { x, t });
        }
        let k = self.coefficients.len();
        let k_freq = k as f64 * PI / self.length;
        let tail_bound =
            self.coefficients[k - 1].abs() * (-self.diffusivity * k_freq * k_freq * t).exp();
        if x == 0.0 || x == self.length {
            return Ok(SeriesValue { value: 0.0, tail_bound });
        }
        let factor = transform_factor(x, t, self.velocity, self.diffusivity, 1.0)?;
        let mut sum = 0.0;
        for (i, b) in self.coefficients.iter().enumerate() {
            let freq = (i + 1) as f64 * PI / self.length;
            sum += b * (freq * x).sin() * (-self.diffusivity * freq * freq * t).exp();
        }
        Ok(SeriesValue { value: factor * sum, tail_bound })
    }
}

/// The single-mode reference formula
///
///   C(x, t) = exp(-(u^2/(4D) + D (n pi / L)^2) t) * sin(n pi x / L)
///
/// exposed verbatim for table reproduction. It solves the PDE exactly only
/// when u = 0; for u > 0 it carries a residual bounded by u*n*pi/L (the
/// transformed initial condition is then not a single mode).
pub fn closed_form_reference(
    x: f64,
    t: f64,
    scenario: &ValidatedScenario,
) -> Result<f64, AnalyticError> {
    let d = scenario.diffusivity().as_uniform().ok_or(AnalyticError::NotUniform)?;
    let n = match scenario.initial_condition() {
        InitialCondition::SineMode { n } => *n,
        InitialCondition::Samples { .. } => return Err(AnalyticError::NotSineMode),
    };
    Ok(closed_form_value(x, t, scenario.velocity(), d, scenario.length(), n))
}

/// [`closed_form_reference`] on raw parameters.
pub fn closed_form_value(x: f64, t: f64, u: f64, d: f64, length: f64, n: u32) -> f64 {
    let rate = mode_decay_rate(n, d, u, length).rate();
    if x == 0.0 || x == length {
        return 0.0;
    }
    (-rate * t).exp() * (f64::from(n) * PI * x / length).sin()
}
