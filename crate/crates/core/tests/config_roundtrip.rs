use std::collections::BTreeMap;

use proptest::option;
use proptest::prelude::*;

use matchdyn::config::{
    parse_config, DynamicsSection, InitialSection, InstanceSection, OutputSection, PerturbationSpec, PrefSpec,
    RunConfig, StabilitySection, SweepSection, UtilitySection,
};
use matchdyn::Error;

fn arb_pref(prefix: &'static str) -> impl Strategy<Value = PrefSpec> {
    prop_oneof![
        (1usize..=6).prop_map(move |k| PrefSpec::Label(format!("{prefix}{k}"))),
        Just(vec![1usize, 2, 3]).prop_shuffle().prop_map(PrefSpec::Ranking),
    ]
}

fn arb_utility() -> impl Strategy<Value = UtilitySection> {
    prop_oneof![
        Just(UtilitySection::default()),
        prop_oneof![Just("u_conv"), Just("u_lin"), Just("u_conc"), Just("u_table")].prop_map(|p| UtilitySection {
            preset: Some(p.to_string()),
            ..Default::default()
        }),
        (1.0f64..50.0, 0.5f64..1.0, 0.1f64..1.0, option::of(-5.0f64..0.5)).prop_map(|(top, a, b, single)| {
            UtilitySection {
                preset: None,
                values: Some(vec![top, top * a, top * a * b]),
                single,
            }
        }),
    ]
}

fn arb_dynamics() -> impl Strategy<Value = DynamicsSection> {
    (
        any::<bool>(),
        0.1f64..4.0,
        option::of(0.001f64..0.05),
        option::of(0.5f64..50.0),
        option::of(1e-8f64..1e-3),
        option::of(1usize..10),
        option::of(1e-6f64..0.01),
        option::of(1usize..5),
    )
        .prop_map(|(sigmoid, beta, dt, t_max, tol, window, thr, stride)| DynamicsSection {
            kind: sigmoid.then(|| "sigmoid".to_string()),
            beta: sigmoid.then_some(beta),
            dt,
            t_max,
            stationarity_tol: tol,
            stationarity_window: window,
            survival_threshold: thr,
            sample_stride: stride,
        })
}

fn arb_perturbations() -> impl Strategy<Value = Vec<PerturbationSpec>> {
    proptest::collection::vec((0.0f64..10.0, 1usize..=3, 1usize..=6, -0.5f64..1.0), 0..4).prop_map(|mut v| {
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        v.into_iter()
            .map(|(time, w, h, delta)| PerturbationSpec {
                time,
                player: format!("w{w}"),
                strategy: format!("W{h}"),
                delta,
            })
            .collect()
    })
}

fn arb_config() -> impl Strategy<Value = RunConfig> {
    (
        proptest::collection::vec(arb_pref("M"), 3),
        proptest::collection::vec(arb_pref("W"), 3),
        option::of(prop_oneof![Just("men"), Just("women")]),
        arb_utility(),
        arb_dynamics(),
        arb_perturbations(),
        (option::of("[a-z]{1,8}"), option::of(any::<bool>())),
        (option::of(1usize..1_000_000), option::of(1usize..100), option::of(any::<bool>())),
        (option::of(1.0f64..300.0), option::of(1usize..8), option::of(any::<bool>()), any::<bool>()),
    )
        .prop_map(|(men, women, proposing, utility, dynamics, perturbation, out, stab, sw)| RunConfig {
            instance: InstanceSection {
                men,
                women,
                strategic: None,
                proposing: proposing.map(str::to_string),
            },
            utility,
            dynamics,
            initial: InitialSection::default(),
            perturbation,
            output: OutputSection { dir: out.0, svg: out.1 },
            stability: StabilitySection {
                box_cap: stab.0,
                family_cap: stab.1,
                exhaustive: stab.2,
                matchings: None,
            },
            sweep: SweepSection {
                fixed: sw.3.then(|| BTreeMap::from([("m1".to_string(), PrefSpec::Label("M2".to_string()))])),
                t_max: sw.0,
                threads: sw.1,
                cross_check: sw.2,
                file: None,
            },
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn render_then_parse_is_identity(c in arb_config()) {
        c.validate().unwrap();
        let text = c.render();
        let back = parse_config(&text).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(back.digest(), c.digest());
        prop_assert_eq!(back.render(), text);
    }
}

#[test]
fn digest_tracks_content() {
    let a = parse_config("[instance]\nmen = [\"M1\", \"M1\", \"M2\"]\nwomen = [\"W1\", \"W2\", \"W1\"]\n").unwrap();
    let mut b = a.clone();
    b.dynamics.dt = Some(0.005);
    assert_eq!(a.digest().len(), 64);
    assert_ne!(a.digest(), b.digest());
    // formatting does not matter, only content
    let c = parse_config("[instance]\nwomen=['W1','W2','W1']\nmen=['M1','M1','M2']\n").unwrap();
    assert_eq!(a.digest(), c.digest());
}

#[test]
fn errors_point_at_the_problem() {
    match parse_config("[instance]\nmen = [\"M1\", \"M1\"\n") {
        Err(Error::ConfigParse { line, .. }) => assert!(line >= 2),
        other => panic!("{other:?}"),
    }
    match parse_config("[instance]\nmen = [\"M1\", \"M1\", \"M2\"]\nwomen = [\"W1\", \"W2\", \"W1\"]\n[dynamics]\nspeed = 2\n") {
        Err(Error::ConfigParse { line, .. }) => assert_eq!(line, 5),
        other => panic!("{other:?}"),
    }
    match parse_config("[instance]\nmen = [\"M1\", \"M1\", \"M9\"]\nwomen = [\"W1\", \"W2\", \"W1\"]\n") {
        Err(Error::ConfigValidation { field, .. }) => assert_eq!(field, "instance.men[2]"),
        other => panic!("{other:?}"),
    }
    match parse_config("[instance]\nmen = [\"M1\", \"M1\", \"M2\"]\nwomen = [\"W1\", \"W2\", \"W1\"]\n[dynamics]\ndt = -1.0\n") {
        Err(Error::ConfigValidation { field, .. }) => assert!(field.starts_with("dynamics"), "{field}"),
        other => panic!("{other:?}"),
    }
}
