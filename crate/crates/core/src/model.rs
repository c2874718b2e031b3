//! Problem definition: scenario types, validation, grid construction and
//! scenario-file parsing shared by the analytic and finite-difference solvers.
//!
//! All quantities use hours for time, metres for space (diffusivity in
//! m^2/hr, velocity in m/hr). Boundary concentrations are fixed at zero.

use serde::Deserialize;
use thiserror::Error;

/// Largest exponent magnitude we allow inside `exp` calls; beyond this the
/// transformation factor exp(u*x/2D) is not representable in f64.
pub const MAX_EXPONENT: f64 = 700.0;

/// Tolerance for "initial condition vanishes at the boundary".
pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("diffusivity must be positive, got {0}")]
    NonPositiveDiffusivity(f64),
    #[error("domain length must be positive, got {0}")]
    NonPositiveLength(f64),
    #[error("time horizon must be nonnegative, got {0}")]
    NegativeHorizon(f64),
    #[error("boundary concentrations are fixed at zero, got ({left}, {right})")]
    NonzeroBoundary { left: f64, right: f64 },
    #[error("transformation exponent u*L/(2D) = {0} exceeds the representable limit {MAX_EXPONENT}")]
    ExponentOverflow(f64),
    #[error("initial condition incompatible with zero Dirichlet boundaries: {0}")]
    IncompatibleIc(String),
    #[error("invalid sampled initial condition: {0}")]
    BadSamples(String),
    #[error("degenerate grid: need M >= 2 and N >= 1, got M = {m}, N = {n}")]
    DegenerateGrid { m: usize, n: usize },
    #[error("scenario config: {0}")]
    Config(String),
}

/// Diffusion coefficient, either uniform over [0, L] or split at L/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Diffusivity {
    Uniform(f64),
    /// `left` applies on [0, L/2), `right` on (L/2, L]; the interface node
    /// takes the arithmetic mean.
    Piecewise { left: f64, right: f64 },
}

impl Diffusivity {
    pub fn max(&self) -> f64 {
        match *self {
            Diffusivity::Uniform(d) => d,
            Diffusivity::Piecewise { left, right } => left.max(right),
        }
    }

    pub fn min(&self) -> f64 {
        match *self {
            Diffusivity::Uniform(d) => d,
            Diffusivity::Piecewise { left, right } => left.min(right),
        }
    }

    pub fn as_uniform(&self) -> Option<f64> {
        match *self {
            Diffusivity::Uniform(d) => Some(d),
            Diffusivity::Piecewise { .. } => None,
        }
    }
}

/// Initial concentration profile f(x) with f(0) = f(L) = 0.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    /// f(x) = sin(n*pi*x/L).
    SineMode { n: u32 },
    /// Tabulated (x, f) pairs, linearly interpolated between abscissae.
    Samples { points: Vec<(f64, f64)> },
}

impl InitialCondition {
    /// Evaluates f at `x` on a domain of length `length`.
    pub fn eval(&self, x: f64, length: f64) -> f64 {
        match self {
            InitialCondition::SineMode { n } => {
                (f64::from(*n) * std::f64::consts::PI * x / length).sin()
            }
            InitialCondition::Samples { points } => {
                if points.is_empty() {
                    return 0.0;
                }
                if x <= points[0].0 {
                    return points[0].1;
                }
                if x >= points[points.len() - 1].0 {
                    return points[points.len() - 1].1;
                }
                let i = points.partition_point(|&(px, _)| px <= x);
                let (x0, f0) = points[i - 1];
                let (x1, f1) = points[i];
                f0 + (f1 - f0) * (x - x0) / (x1 - x0)
            }
        }
    }
}

/// Raw problem description as supplied by the user or a config file.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub diffusivity: Diffusivity,
    /// Mean advection velocity u (m/hr).
    pub velocity: f64,
    /// Domain length L (m).
    pub length: f64,
    /// Time horizon T (hr).
    pub horizon: f64,
    pub initial_condition: InitialCondition,
    pub bc_left: f64,
    pub bc_right: f64,
}

impl ScenarioSpec {
    /// Uniform-diffusivity scenario with zero boundaries.
    pub fn uniform(d: f64, u: f64, length: f64, horizon: f64, ic: InitialCondition) -> Self {
        ScenarioSpec {
            diffusivity: Diffusivity::Uniform(d),
            velocity: u,
            length,
            horizon,
            initial_condition: ic,
            bc_left: 0.0,
            bc_right: 0.0,
        }
    }

    /// Scenario with diffusivity `d_left` on [0, L/2) and `d_right` on (L/2, L].
    pub fn piecewise(
        d_left: f64,
        d_right: f64,
        u: f64,
        length: f64,
        horizon: f64,
        ic: InitialCondition,
    ) -> Self {
        ScenarioSpec {
            diffusivity: Diffusivity::Piecewise { left: d_left, right: d_right },
            velocity: u,
            length,
            horizon,
            initial_condition: ic,
            bc_left: 0.0,
            bc_right: 0.0,
        }
    }
}

/// A scenario that has passed [`validate_scenario`]. Immutable thereafter and
/// safe to share read-only across concurrent solver runs.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedScenario(ScenarioSpec);

impl ValidatedScenario {
    pub fn spec(&self) -> &ScenarioSpec {
        &self.0
    }

    pub fn into_spec(self) -> ScenarioSpec {
        self.0
    }

    pub fn diffusivity(&self) -> Diffusivity {
        self.0.diffusivity
    }

    pub fn velocity(&self) -> f64 {
        self.0.velocity
    }

    pub fn length(&self) -> f64 {
        self.0.length
    }

    pub fn horizon(&self) -> f64 {
        self.0.horizon
    }

    pub fn initial_condition(&self) -> &InitialCondition {
        &self.0.initial_condition
    }

    /// Initial condition sampled at the spatial nodes of `grid`, with the
    /// boundary entries forced to the (zero) boundary values.
    pub fn sample_ic(&self, grid: &UniformGrid) -> Vec<f64> {
        let m = grid.space_steps();
        let mut row: Vec<f64> = (0..=m)
            .map(|i| self.0.initial_condition.eval(grid.x(i), self.0.length))
            .collect();
        row[0] = 0.0;
        row[m] = 0.0;
        row
    }
}

/// Checks every scenario invariant and normalizes sampled initial conditions
/// (sorts and deduplicates abscissae). Idempotent: validating an already
/// validated spec returns an equal spec.
pub fn validate_scenario(raw: ScenarioSpec) -> Result<ValidatedScenario, ModelError> {
    let mut spec = raw;

    match spec.diffusivity {
        Diffusivity::Uniform(d) if d <= 0.0 => return Err(ModelError::NonPositiveDiffusivity(d)),
        Diffusivity::Piecewise { left, right } => {
            if left <= 0.0 {
                return Err(ModelError::NonPositiveDiffusivity(left));
            }
            if right <= 0.0 {
                return Err(ModelError::NonPositiveDiffusivity(right));
            }
        }
        _ => {}
    }
    if spec.length <= 0.0 {
        return Err(ModelError::NonPositiveLength(spec.length));
    }
    if spec.horizon < 0.0 {
        return Err(ModelError::NegativeHorizon(spec.horizon));
    }
    if spec.bc_left != 0.0 || spec.bc_right != 0.0 {
        return Err(ModelError::NonzeroBoundary { left: spec.bc_left, right: spec.bc_right });
    }

    let exponent = spec.velocity * spec.length / (2.0 * spec.diffusivity.min());
    if exponent.abs() > MAX_EXPONENT {
        return Err(ModelError::ExponentOverflow(exponent));
    }

    match &mut spec.initial_condition {
        InitialCondition::SineMode { n } => {
            if *n < 1 {
                return Err(ModelError::IncompatibleIc("sine mode must be >= 1".into()));
            }
        }
        InitialCondition::Samples { points } => {
            if points.len() < 2 {
                return Err(ModelError::BadSamples("need at least two sample points".into()));
            }
            points.sort_by(|a, b| a.0.total_cmp(&b.0));
            points.dedup_by(|a, b| a.0 == b.0);
            if points.len() < 2 {
                return Err(ModelError::BadSamples("need at least two distinct abscissae".into()));
            }
            let first = points[0];
            let last = points[points.len() - 1];
            if first.0 != 0.0 || last.0 != spec.length {
                return Err(ModelError::BadSamples(format!(
                    "samples must span [0, {}], got [{}, {}]",
                    spec.length, first.0, last.0
                )));
            }
            if first.1.abs() > BOUNDARY_TOL || last.1.abs() > BOUNDARY_TOL {
                return Err(ModelError::IncompatibleIc(format!(
                    "f(0) = {} and f(L) = {} must vanish (tolerance {BOUNDARY_TOL})",
                    first.1, last.1
                )));
            }
        }
    }

    Ok(ValidatedScenario(spec))
}

/// Uniform space-time grid: x_m = m*dx for m = 0..=M, t_n = n*dt for n = 0..=N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    dx: f64,
    dt: f64,
    space_steps: usize,
    time_steps: usize,
}

/// Builds the grid with dx = L/M and dt = T/N.
pub fn build_grid(length: f64, horizon: f64, m: usize, n: usize) -> Result<UniformGrid, ModelError> {
    if m < 2 || n < 1 {
        return Err(ModelError::DegenerateGrid { m, n });
    }
    Ok(UniformGrid {
        dx: length / m as f64,
        dt: horizon / n as f64,
        space_steps: m,
        time_steps: n,
    })
}

impl UniformGrid {
    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Number of spatial steps M; there are M+1 nodes.
    pub fn space_steps(&self) -> usize {
        self.space_steps
    }

    /// Number of time steps N; there are N+1 levels.
    pub fn time_steps(&self) -> usize {
        self.time_steps
    }

    pub fn x(&self, m: usize) -> f64 {
        m as f64 * self.dx
    }

    pub fn t(&self, n: usize) -> f64 {
        n as f64 * self.dt
    }
}

/// Concentration values V_m^n over a [`UniformGrid`], stored one row per
/// time level.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSurface {
    grid: UniformGrid,
    rows: Vec<Vec<f64>>,
}

impl SolutionSurface {
    /// `rows[n][m]` holds the value at (x_m, t_n); shape must be
    /// (N+1) x (M+1).
    pub fn new(grid: UniformGrid, rows: Vec<Vec<f64>>) -> Self {
        assert_eq!(rows.len(), grid.time_steps() + 1, "surface row count");
        for row in &rows {
            assert_eq!(row.len(), grid.space_steps() + 1, "surface column count");
        }
        SolutionSurface { grid, rows }
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn value(&self, m: usize, n: usize) -> f64 {
        self.rows[n][m]
    }

    /// All spatial values at time level `n`.
    pub fn row(&self, n: usize) -> &[f64] {
        &self.rows[n]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIc {
    sine_mode: Option<u32>,
    samples: Option<Vec<(f64, f64)>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(rename = "D")]
    d: Option<f64>,
    #[serde(rename = "D1")]
    d1: Option<f64>,
    #[serde(rename = "D2")]
    d2: Option<f64>,
    u: f64,
    #[serde(rename = "L")]
    l: f64,
    #[serde(rename = "T")]
    t: f64,
    ic: RawIc,
}

/// Parses and validates a JSON scenario config.
///
/// Expected shape: `{"D": .., "u": .., "L": .., "T": .., "ic": {"sine_mode": 1}}`
/// with `"D1"`/`"D2"` replacing `"D"` for split-diffusivity scenarios and
/// `{"samples": [[x, f], ..]}` as the alternative initial condition.
/// Unknown keys are rejected.
pub fn parse_scenario(json: &str) -> Result<ValidatedScenario, ModelError> {
    let raw: RawConfig = serde_json::from_str(json).map_err(|e| ModelError::Config(e.to_string()))?;

    let diffusivity = match (raw.d, raw.d1, raw.d2) {
        (Some(d), None, None) => Diffusivity::Uniform(d),
        (None, Some(left), Some(right)) => Diffusivity::Piecewise { left, right },
        _ => {
            return Err(ModelError::Config(
                "specify either \"D\" or both \"D1\" and \"D2\"".into(),
            ))
        }
    };
    let ic = match (raw.ic.sine_mode, raw.ic.samples) {
        (Some(n), None) => InitialCondition::SineMode { n },
        (None, Some(points)) => InitialCondition::Samples { points },
        _ => {
            return Err(ModelError::Config(
                "ic must hold exactly one of \"sine_mode\" or \"samples\"".into(),
            ))
        }
    };

    validate_scenario(ScenarioSpec {
        diffusivity,
        velocity: raw.u,
        length: raw.l,
        horizon: raw.t,
        initial_condition: ic,
        bc_left: 0.0,
        bc_right: 0.0,
    })
}
