//! Property suites: discrete maximum principle under stable parameters,
//! boundary exactness, linearity/scaling of the march, quadrature
//! orthogonality, and grid/CSV round trips.

use proptest::prelude::*;

use advdiff::analytic::fourier_coefficients;
use advdiff::fdm::{
    check_stability, ftcs_step, solve_ftcs, AdvectionStencil, FtcsCoefficients,
};
use advdiff::model::{build_grid, validate_scenario, InitialCondition, ScenarioSpec};
use advdiff::report::{format_value, write_surface_csv};

fn stencil_strategy() -> impl Strategy<Value = AdvectionStencil> {
    prop_oneof![
        Just(AdvectionStencil::Forward),
        Just(AdvectionStencil::Central),
        Just(AdvectionStencil::Upwind),
    ]
}

/// (alpha, beta) pairs inside the stability region of `stencil`.
fn stable_coefficients(
    stencil: AdvectionStencil,
) -> impl Strategy<Value = FtcsCoefficients> {
    (1e-6..0.5f64, 0.0..1.0f64).prop_map(move |(alpha, f)| {
        let beta_max = match stencil {
            AdvectionStencil::Forward => alpha,
            AdvectionStencil::Central => (2.0 * alpha).min(1.0 - 2.0 * alpha),
            AdvectionStencil::Upwind => 1.0 - 2.0 * alpha,
        };
        FtcsCoefficients { alpha, beta: f * beta_max.max(0.0) }
    })
}

fn interior_row() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0..10.0f64, 3..40).prop_map(|mut row| {
        let last = row.len() - 1;
        row[0] = 0.0;
        row[last] = 0.0;
        row
    })
}

proptest! {
    // 1000 randomized stable parameter sets: an explicit step with
    // nonnegative update weights cannot create new extrema.
    #![proptest_config(ProptestConfig::with_cases(1000))]
    #[test]
    fn discrete_maximum_principle(
        stencil in stencil_strategy(),
        (c, row) in stencil_strategy().prop_flat_map(|s| (Just(s), stable_coefficients(s)))
            .prop_flat_map(|(_, c)| (Just(c), interior_row())),
    ) {
        let report = check_stability(c, stencil);
        prop_assume!(report.stable);
        let before = row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let next = ftcs_step(&row, c, stencil).unwrap();
        let after = next.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        prop_assert!(
            after <= before * (1.0 + 1e-12) + 1e-300,
            "max grew from {before} to {after} (alpha {}, beta {})", c.alpha, c.beta
        );
    }
}

proptest! {
    #[test]
    fn boundaries_stay_exactly_zero(
        mode in 1u32..6,
        m in 2usize..30,
        n in 1usize..30,
        stencil in stencil_strategy(),
    ) {
        let scenario = validate_scenario(ScenarioSpec::uniform(
            1e-3, 1e-4, 1.0, 1.0, InitialCondition::SineMode { n: mode },
        )).unwrap();
        let grid = build_grid(1.0, 1.0, m, n).unwrap();
        // Stability is irrelevant here, so coarse-in-time grids are allowed.
        let surface = solve_ftcs(&scenario, &grid, stencil, true).unwrap();
        for level in 0..=n {
            prop_assert_eq!(surface.value(0, level), 0.0);
            prop_assert_eq!(surface.value(m, level), 0.0);
        }
    }

    // Solving c*f equals c times solving f, to rounding.
    #[test]
    fn march_is_linear_in_the_initial_condition(
        scale in 0.1..10.0f64,
        values in prop::collection::vec(-1.0..1.0f64, 3),
        stencil in stencil_strategy(),
    ) {
        let samples = |s: f64| InitialCondition::Samples {
            points: vec![
                (0.0, 0.0),
                (0.25, s * values[0]),
                (0.5, s * values[1]),
                (0.75, s * values[2]),
                (1.0, 0.0),
            ],
        };
        let grid = build_grid(1.0, 1.0, 8, 10).unwrap();
        let base = validate_scenario(ScenarioSpec::uniform(1e-2, 1e-3, 1.0, 1.0, samples(1.0)))
            .unwrap();
        let scaled = validate_scenario(ScenarioSpec::uniform(1e-2, 1e-3, 1.0, 1.0, samples(scale)))
            .unwrap();
        let a = solve_ftcs(&base, &grid, stencil, false).unwrap();
        let b = solve_ftcs(&scaled, &grid, stencil, false).unwrap();
        for n in 0..=grid.time_steps() {
            for m in 0..=grid.space_steps() {
                let want = scale * a.value(m, n);
                let got = b.value(m, n);
                prop_assert!(
                    (got - want).abs() <= 1e-13 * want.abs().max(1.0),
                    "node ({m}, {n}): {got} vs {want}"
                );
            }
        }
    }

    // With no advection the weighted sine modes are orthogonal: the
    // quadrature recovers the n-th unit vector.
    #[test]
    fn quadrature_orthogonality(mode in 1u32..=8) {
        let b = fourier_coefficients(
            &InitialCondition::SineMode { n: mode },
            0.0,
            3.6e-3,
            1.0,
            8,
            2048,
        ).unwrap();
        for (i, bn) in b.iter().enumerate() {
            let expect = if i + 1 == mode as usize { 1.0 } else { 0.0 };
            prop_assert!((bn - expect).abs() <= 1e-10, "b_{} = {bn}", i + 1);
        }
    }

    #[test]
    fn grid_nodes_reach_the_domain_corners(
        l in 0.1..50.0f64,
        t in 0.0..50.0f64,
        m in 2usize..500,
        n in 1usize..500,
    ) {
        let grid = build_grid(l, t, m, n).unwrap();
        prop_assert!((grid.x(m) - l).abs() <= 1e-12 * l.max(1.0));
        prop_assert!((grid.t(n) - t).abs() <= 1e-12 * t.max(1.0));
    }

    // Parsing the 9-significant-digit rendering recovers the value to the
    // precision of that rendering.
    #[test]
    fn format_value_round_trips(v in -1e6..1e6f64) {
        let s = format_value(v);
        let back: f64 = s.parse().unwrap();
        prop_assert!((back - v).abs() <= 1e-8 * v.abs().max(1e-9), "{v} -> {s} -> {back}");
    }
}

#[test]
fn surface_csv_round_trip_on_solver_output() {
    let scenario = validate_scenario(ScenarioSpec::uniform(
        3.6e-3,
        3.6e-4,
        1.0,
        1.0,
        InitialCondition::SineMode { n: 1 },
    ))
    .unwrap();
    let grid = build_grid(1.0, 1.0, 10, 25).unwrap();
    let surface = solve_ftcs(&scenario, &grid, AdvectionStencil::Forward, false).unwrap();
    let mut buf = Vec::new();
    write_surface_csv(&surface, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    for (i, line) in text.lines().skip(1).enumerate() {
        let fields: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
        let (n, m) = (i / 11, i % 11);
        assert!((fields[0] - grid.x(m)).abs() <= 1e-9);
        assert!((fields[1] - grid.t(n)).abs() <= 1e-9);
        assert!((fields[2] - surface.value(m, n)).abs() <= 1e-9);
    }
}
