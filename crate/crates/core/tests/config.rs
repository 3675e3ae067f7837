mod common;

use common::{bubble_cfg, isolated_cfg, ISOLATED_CFG};
use nonisoflow::config::{ScenarioConfig, ScenarioKind};
use nonisoflow::eos::Substance;
use nonisoflow::{ConvectionMode, Error, SolverKind, ThermalBc};
use proptest::prelude::*;

#[test]
fn shipped_isolated_config_has_reference_values() {
    let c = isolated_cfg();
    assert_eq!(c.substance, Substance::n_butane());
    assert_eq!((c.grid.nx, c.grid.ny), (40, 40));
    assert_eq!((c.grid.lx, c.grid.ly), (2e-8, 2e-8));
    assert_eq!(c.scheme.dt, 3e-13);
    assert_eq!(c.scheme.outer_tol, 1e-3);
    assert_eq!(c.scheme.max_outer_iters, 10);
    assert_eq!(c.scheme.shear_viscosity, 1e-4);
    assert_eq!(c.scheme.bulk_viscosity, 1e-4);
    assert_eq!(c.scheme.conductivity, 0.1);
    assert_eq!(c.scheme.convection, ConvectionMode::Skew);
    assert_eq!(c.scheme.linear.kind, SolverKind::Direct);
    assert_eq!(c.run.n_steps, 500);
    match c.scenario {
        ScenarioKind::IsolatedSquare(p) => {
            assert_eq!(p.r_frac, 0.35);
            assert_eq!(p.n_gas, 358.2996);
            assert_eq!(p.n_liquid, 9058.3724);
            assert_eq!(p.t_init, 345.0);
        }
        other => panic!("wrong scenario {other:?}"),
    }
}

#[test]
fn shipped_bubble_config_has_reference_values() {
    let c = bubble_cfg();
    assert_eq!(c.substance, Substance::n_butane());
    assert_eq!(c.scheme.dt, 5e-13);
    assert_eq!(c.scheme.linear.kind, SolverKind::Iterative);
    match c.scenario {
        ScenarioKind::BubbleTanh(p) => {
            assert_eq!(p.w, 1e5);
            assert_eq!(p.r_frac, 0.45);
            assert_eq!(p.t_init, 345.0);
            assert_eq!(p.t_top, 345.0);
            assert_eq!(p.t_bottom, 348.0);
        }
        other => panic!("wrong scenario {other:?}"),
    }
}

fn without(text: &str, key: &str) -> String {
    text.lines()
        .filter(|l| !l.trim_start().starts_with(key))
        .collect::<Vec<_>>()
        .join("\n")
}

fn replace(text: &str, key: &str, value: &str) -> String {
    text.lines()
        .map(|l| {
            if l.trim_start().starts_with(&format!("{key} ")) {
                format!("{key} = {value}")
            } else {
                l.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn missing_required_key_is_named() {
    let err = ScenarioConfig::parse(&without(ISOLATED_CFG, "substance.T_crit")).unwrap_err();
    assert!(matches!(err, Error::ConfigInvalid(_)));
    assert!(err.to_string().contains("substance.T_crit"), "{err}");
}

#[test]
fn negative_time_step_is_rejected() {
    let err = ScenarioConfig::parse(&replace(ISOLATED_CFG, "scheme.dt", "-1")).unwrap_err();
    assert!(err.to_string().contains("scheme.dt"), "{err}");
}

#[test]
fn out_of_range_values_are_rejected() {
    for (key, value) in [
        ("scenario.r_frac", "1.0"),
        ("scenario.n_liquid", "100"),
        ("grid.nx", "2"),
        ("scheme.outer_tol", "0"),
        ("substance.T_crit", "-5"),
    ] {
        assert!(ScenarioConfig::parse(&replace(ISOLATED_CFG, key, value)).is_err(), "{key} = {value} accepted");
    }
}

#[test]
fn unknown_key_reports_its_line() {
    let text = format!("{ISOLATED_CFG}\nscheme.colour = blue\n");
    let line = text.lines().position(|l| l.starts_with("scheme.colour")).unwrap() + 1;
    let msg = ScenarioConfig::parse(&text).unwrap_err().to_string();
    assert!(msg.contains("scheme.colour") && msg.contains(&format!("line {line}")), "{msg}");
}

#[test]
fn malformed_lines_report_their_line() {
    let text = ISOLATED_CFG.replacen("grid.nx = 40", "grid.nx 40", 1);
    let line = text.lines().position(|l| l.starts_with("grid.nx 40")).unwrap() + 1;
    assert!(matches!(ScenarioConfig::parse(&text), Err(Error::ConfigSyntax { line: l, .. }) if l == line));

    let text = ISOLATED_CFG.replacen("grid.nx = 40", "grid.nx = forty", 1);
    assert!(matches!(ScenarioConfig::parse(&text), Err(Error::ConfigSyntax { line: l, .. }) if l == line));

    let text = format!("{ISOLATED_CFG}\ngrid.nx = 41\n");
    assert!(matches!(ScenarioConfig::parse(&text), Err(Error::ConfigSyntax { .. })));
}

#[test]
fn custom_scenario_boundaries_parse() {
    let mut text = without(ISOLATED_CFG, "scenario.");
    text.push_str(
        "\nscenario.kind = custom\nscenario.n_init = 600\nscenario.T_init = 340\n\
         scenario.bc_left = neumann:0\nscenario.bc_right = neumann:-25.5\n\
         scenario.bc_bottom = dirichlet:348\nscenario.bc_top = dirichlet:345\n",
    );
    let c = ScenarioConfig::parse(&text).unwrap();
    match c.scenario {
        ScenarioKind::Custom(p) => {
            assert_eq!(p.n_init, 600.0);
            assert_eq!(p.right, ThermalBc::Neumann(-25.5));
            assert_eq!(p.bottom, ThermalBc::Dirichlet(348.0));
        }
        other => panic!("wrong scenario {other:?}"),
    }
    let bad = text.replace("dirichlet:345", "fixed:345");
    assert!(ScenarioConfig::parse(&bad).is_err());
}

#[test]
fn shipped_configs_round_trip() {
    for c in [isolated_cfg(), bubble_cfg()] {
        assert_eq!(ScenarioConfig::parse(&c.serialize()).unwrap(), c);
    }
}

proptest! {
    #[test]
    fn serialization_round_trips(
        dt in 1e-15f64..1e-11,
        tol in 1e-9f64..1e-2,
        nx in 4usize..80,
        ny in 4usize..80,
        r in 0.05f64..0.95,
        t in 250.0f64..450.0,
        eta in 1e-6f64..1e-2,
        upwind in any::<bool>(),
        steps in 0usize..10_000,
    ) {
        let mut c = isolated_cfg();
        c.scheme.dt = dt;
        c.scheme.outer_tol = tol;
        c.scheme.shear_viscosity = eta;
        c.scheme.bulk_viscosity = eta;
        c.scheme.convection = if upwind { ConvectionMode::Upwind } else { ConvectionMode::Skew };
        c.grid.nx = nx;
        c.grid.ny = ny;
        c.run.n_steps = steps;
        if let ScenarioKind::IsolatedSquare(p) = &mut c.scenario {
            p.r_frac = r;
            p.t_init = t;
        }
        prop_assert_eq!(ScenarioConfig::parse(&c.serialize()).unwrap(), c);
    }
}
