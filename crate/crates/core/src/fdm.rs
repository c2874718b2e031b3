//! Explicit finite-difference engine: FTCS coefficients, stability
//! reporting, the single-row update, the full uniform-diffusivity march and
//! the split-diffusivity march.
//!
//! Update for interior node m:
//!
//!   V_m^{n+1} = V_m^n + alpha (V_{m+1}^n - 2 V_m^n + V_{m-1}^n) + advection
//!
//! with alpha = D dt/dx^2, beta = u dt/dx and the advection term selected by
//! [`AdvectionStencil`]. Boundaries are reset to zero every step.

use thiserror::Error;

use crate::model::{Diffusivity, SolutionSurface, UniformGrid, ValidatedScenario};

#[derive(Debug, Error)]
pub enum FdmError {
    #[error("row must hold at least 3 nodes, got {0}")]
    LengthMismatch(usize),
    #[error(
        "unstable parameters: alpha = {alpha}, beta = {beta} violate {rule} \
         (pass the unsafe override to run anyway)"
    )]
    UnstableParameters { alpha: f64, beta: f64, rule: &'static str },
    #[error("split-diffusivity march needs the interface L/2 on the grid: M = {0} must be even")]
    InterfaceOffGrid(usize),
    #[error("scenario has piecewise diffusivity; use solve_ftcs_piecewise")]
    PiecewiseScenario,
    #[error("grid does not span the scenario domain (x_M = {x_max}, L = {length})")]
    GridMismatch { x_max: f64, length: f64 },
}

/// Dimensionless FTCS update coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FtcsCoefficients {
    /// D dt / dx^2
    pub alpha: f64,
    /// u dt / dx
    pub beta: f64,
}

/// alpha = D dt/dx^2 and beta = u dt/dx.
pub fn ftcs_coefficients(d: f64, u: f64, dx: f64, dt: f64) -> FtcsCoefficients {
    debug_assert!(dx > 0.0 && dt >= 0.0);
    FtcsCoefficients { alpha: d * dt / (dx * dx), beta: u * dt / dx }
}

/// Discretization of the advection term -u C_x.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdvectionStencil {
    /// -beta (V_{m+1} - V_m): the source scheme's forward difference
    /// (downwind for u > 0).
    Forward,
    /// -(beta/2) (V_{m+1} - V_{m-1})
    Central,
    /// -beta (V_m - V_{m-1}) for u > 0.
    Upwind,
}

impl AdvectionStencil {
    /// (left, center, right) weights of the full update for this stencil.
    pub fn update_weights(self, c: FtcsCoefficients) -> (f64, f64, f64) {
        let FtcsCoefficients { alpha, beta } = c;
        match self {
            AdvectionStencil::Forward => (alpha, 1.0 - 2.0 * alpha + beta, alpha - beta),
            AdvectionStencil::Central => {
                (alpha + beta / 2.0, 1.0 - 2.0 * alpha, alpha - beta / 2.0)
            }
            AdvectionStencil::Upwind => (alpha + beta, 1.0 - 2.0 * alpha - beta, alpha),
        }
    }
}

impl std::str::FromStr for AdvectionStencil {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "forward" => Ok(AdvectionStencil::Forward),
            "central" => Ok(AdvectionStencil::Central),
            "upwind" => Ok(AdvectionStencil::Upwind),
            other => Err(format!("unknown stencil {other:?} (forward|central|upwind)")),
        }
    }
}

/// Outcome of the explicit-scheme stability rules. Reporting only; the
/// solvers gate on `stable`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport {
    pub alpha: f64,
    pub beta: f64,
    /// alpha <= 1/2
    pub alpha_within_half: bool,
    /// All three update weights nonnegative (discrete maximum principle).
    pub weights_nonnegative: bool,
    /// (left, center, right) update weights for the chosen stencil.
    pub weights: (f64, f64, f64),
    /// Cell Peclet number u dx / D.
    pub cell_peclet: f64,
    pub stable: bool,
}

/// Evaluates alpha <= 1/2 and weight nonnegativity for `stencil`.
pub fn check_stability(c: FtcsCoefficients, stencil: AdvectionStencil) -> StabilityReport {
    let weights = stencil.update_weights(c);
    let alpha_within_half = c.alpha <= 0.5;
    let weights_nonnegative = weights.0 >= 0.0 && weights.1 >= 0.0 && weights.2 >= 0.0;
    StabilityReport {
        alpha: c.alpha,
        beta: c.beta,
        alpha_within_half,
        weights_nonnegative,
        weights,
        cell_peclet: if c.alpha > 0.0 { c.beta / c.alpha } else { f64::INFINITY },
        stable: alpha_within_half && weights_nonnegative,
    }
}

fn unstable_rule(report: &StabilityReport) -> &'static str {
    if !report.alpha_within_half {
        "alpha <= 1/2"
    } else {
        "update-weight nonnegativity"
    }
}

/// One FTCS step on a single row; boundaries are reset to zero.
pub fn ftcs_step(
    row: &[f64],
    c: FtcsCoefficients,
    stencil: AdvectionStencil,
) -> Result<Vec<f64>, FdmError> {
    if row.len() < 3 {
        return Err(FdmError::LengthMismatch(row.len()));
    }
    let alphas = vec![c.alpha; row.len()];
    Ok(step_varcoef(row, &alphas, c.beta, stencil))
}

/// Shared march kernel with per-node alpha. Uniform runs pass a constant
/// vector so uniform and degenerate split runs are bit-identical.
fn step_varcoef(row: &[f64], alphas: &[f64], beta: f64, stencil: AdvectionStencil) -> Vec<f64> {
    let last = row.len() - 1;
    let mut next = vec![0.0; row.len()];
    for m in 1..last {
        let diffusion = alphas[m] * (row[m + 1] - 2.0 * row[m] + row[m - 1]);
        let advection = match stencil {
            AdvectionStencil::Forward => -beta * (row[m + 1] - row[m]),
            AdvectionStencil::Central => -beta / 2.0 * (row[m + 1] - row[m - 1]),
            AdvectionStencil::Upwind => -beta * (row[m] - row[m - 1]),
        };
        next[m] = row[m] + diffusion + advection;
    }
    next
}

fn check_grid(scenario: &ValidatedScenario, grid: &UniformGrid) -> Result<(), FdmError> {
    let x_max = grid.x(grid.space_steps());
    if (x_max - scenario.length()).abs() > 1e-12 {
        return Err(FdmError::GridMismatch { x_max, length: scenario.length() });
    }
    Ok(())
}

fn march(
    scenario: &ValidatedScenario,
    grid: &UniformGrid,
    alphas: &[f64],
    beta: f64,
    stencil: AdvectionStencil,
) -> SolutionSurface {
    let mut rows = Vec::with_capacity(grid.time_steps() + 1);
    rows.push(scenario.sample_ic(grid));
    for n in 0..grid.time_steps() {
        let next = step_varcoef(&rows[n], alphas, beta, stencil);
        rows.push(next);
    }
    SolutionSurface::new(*grid, rows)
}

/// Full FTCS march for a uniform-diffusivity scenario. Refuses unstable
/// parameter combinations unless `allow_unstable` is set.
pub fn solve_ftcs(
    scenario: &ValidatedScenario,
    grid: &UniformGrid,
    stencil: AdvectionStencil,
    allow_unstable: bool,
) -> Result<SolutionSurface, FdmError> {
    let d = scenario
        .diffusivity()
        .as_uniform()
        .ok_or(FdmError::PiecewiseScenario)?;
    check_grid(scenario, grid)?;
    let c = ftcs_coefficients(d, scenario.velocity(), grid.dx(), grid.dt());
    let report = check_stability(c, stencil);
    if !report.stable && !allow_unstable {
        return Err(FdmError::UnstableParameters {
            alpha: c.alpha,
            beta: c.beta,
            rule: unstable_rule(&report),
        });
    }
    let alphas = vec![c.alpha; grid.space_steps() + 1];
    Ok(march(scenario, grid, &alphas, c.beta, stencil))
}

/// Node-wise diffusivities for a split scenario: D1 below L/2, D2 above,
/// their arithmetic mean at the interface node.
pub fn piecewise_diffusivities(
    scenario: &ValidatedScenario,
    grid: &UniformGrid,
) -> Result<Vec<f64>, FdmError> {
    let (d1, d2) = match scenario.diffusivity() {
        Diffusivity::Piecewise { left, right } => (left, right),
        Diffusivity::Uniform(d) => (d, d),
    };
    let m = grid.space_steps();
    if m % 2 != 0 {
        return Err(FdmError::InterfaceOffGrid(m));
    }
    let mid = m / 2;
    Ok((0..=m)
        .map(|i| {
            if i < mid {
                d1
            } else if i > mid {
                d2
            } else {
                (d1 + d2) / 2.0
            }
        })
        .collect())
}

/// FTCS march with diffusivity D1 on [0, L/2) and D2 on (L/2, L].
/// Stability is gated on max(D1, D2). Degenerates bit-identically to
/// [`solve_ftcs`] when D1 = D2.
pub fn solve_ftcs_piecewise(
    scenario: &ValidatedScenario,
    grid: &UniformGrid,
    stencil: AdvectionStencil,
    allow_unstable: bool,
) -> Result<SolutionSurface, FdmError> {
    check_grid(scenario, grid)?;
    let diffusivities = piecewise_diffusivities(scenario, grid)?;
    let c_max = ftcs_coefficients(
        scenario.diffusivity().max(),
        scenario.velocity(),
        grid.dx(),
        grid.dt(),
    );
    let report = check_stability(c_max, stencil);
    if !report.stable && !allow_unstable {
        return Err(FdmError::UnstableParameters {
            alpha: c_max.alpha,
            beta: c_max.beta,
            rule: unstable_rule(&report),
        });
    }
    // Same expression as the uniform path so equal diffusivities round
    // identically.
    let alphas: Vec<f64> = diffusivities
        .iter()
        .map(|d| ftcs_coefficients(*d, scenario.velocity(), grid.dx(), grid.dt()).alpha)
        .collect();
    Ok(march(scenario, grid, &alphas, c_max.beta, stencil))
}
