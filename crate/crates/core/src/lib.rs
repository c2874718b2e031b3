//! Solver laboratory for the 1-D linear advection-diffusion equation
//!
//!   C_t = D C_xx - u C_x,   C(0, t) = C(L, t) = 0,   C(x, 0) = f(x)
//!
//! with an analytic Fourier-series engine, an explicit FTCS finite-difference
//! engine (uniform and split diffusivity), and a verification layer for error
//! analysis, pollutant comparison tables and convergence studies.
//!
//! Module map:
//! - [`model`]: scenario types, validation, grids, config parsing
//! - [`analytic`]: transformation factor, Fourier coefficients, series and
//!   single-mode reference solutions, decay rates
//! - [`fdm`]: FTCS coefficients, stability rules, uniform and split marches
//! - [`analysis`]: error reports, pollutant registry, convergence studies
//! - [`report`]: CSV and SVG emission

pub mod analysis;
pub mod analytic;
pub mod fdm;
pub mod model;
pub mod report;

pub use analysis::{ErrorReport, ErrorSample, PollutantSpec};
pub use analytic::{DecayRate, SeriesSolution, SeriesValue};
pub use fdm::{AdvectionStencil, FtcsCoefficients, StabilityReport};
pub use model::{
    Diffusivity, InitialCondition, ScenarioSpec, SolutionSurface, UniformGrid, ValidatedScenario,
};
pub use report::ProfileSeries;
