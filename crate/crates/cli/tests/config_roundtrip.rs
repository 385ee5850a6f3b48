use std::collections::BTreeMap;
use std::path::PathBuf;

use phasepad::numgrid::Axis;
use phasepad::{WindowSpec, C64};
use phasepad_cli::config::{Command, EvolveSpec, Format, GridSpec, PotentialSpec, RunConfig, StateSpec};
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![-1e3f64..1e3, Just(0.0), Just(-0.0), Just(1e-300), Just(0.1 + 0.2)]
}

fn positive() -> impl Strategy<Value = f64> {
    prop_oneof![1e-3f64..1e3, Just(0.1 + 0.2)]
}

fn state() -> impl Strategy<Value = StateSpec> {
    prop_oneof![
        Just(StateSpec::Test),
        (finite(), finite()).prop_map(|(a, b)| StateSpec::Coherent { mu: C64::new(a, b) }),
        (0usize..20).prop_map(|n| StateSpec::Oscillator { n }),
        positive().prop_map(|gamma| StateSpec::Gaussian { gamma }),
        finite().prop_map(|x0| StateSpec::Position { x0 }),
        finite().prop_map(|k0| StateSpec::Momentum { k0 }),
        "[a-z0-9_/.]{1,20}".prop_map(|p| StateSpec::File { path: PathBuf::from(p) }),
    ]
}

fn window() -> impl Strategy<Value = WindowSpec> {
    prop_oneof![
        (positive(), finite(), finite()).prop_map(|(beta, x_w, k_w)| WindowSpec::Gaussian { beta, x_w, k_w }),
        positive().prop_map(|a| WindowSpec::Square { a }),
        (0usize..6, positive(), finite(), finite())
            .prop_map(|(n, beta, x_w, k_w)| WindowSpec::OscillatorExcited { n, beta, x_w, k_w }),
    ]
}

fn axis() -> impl Strategy<Value = Axis> {
    (finite(), positive(), 8usize..2000).prop_map(|(min, w, n)| Axis::new(min, min + w, n).unwrap())
}

fn potential() -> impl Strategy<Value = PotentialSpec> {
    prop_oneof![
        Just(PotentialSpec::Free),
        Just(PotentialSpec::Oscillator),
        prop::collection::btree_map(0u32..9, finite(), 0..4).prop_map(|m: BTreeMap<u32, f64>| PotentialSpec::Poly(m)),
    ]
}

fn command() -> impl Strategy<Value = Command> {
    prop_oneof![
        Just(Command::Amplitude),
        Just(Command::Wigner),
        Just(Command::Husimi),
        Just(Command::Bargmann),
        Just(Command::Evolve),
        Just(Command::Eigenstate),
        (1u8..=6).prop_map(Command::Figure),
        Just(Command::Validate),
    ]
}

prop_compose! {
    fn run_config()(
        command in command(),
        state in state(),
        window in window(),
        (q, p, x) in (axis(), axis(), axis()),
        (potential, dt, steps, snapshots) in (potential(), positive(), 0usize..100_000, 0usize..50),
        out in "[a-z0-9_/]{1,20}",
        bin in any::<bool>(),
    ) -> RunConfig {
        RunConfig {
            command,
            state,
            window,
            grid: GridSpec { q, p, x },
            evolve: EvolveSpec { potential, dt, steps, snapshots },
            out: PathBuf::from(out),
            format: if bin { Format::Bin } else { Format::Csv },
        }
    }
}

proptest! {
    #[test]
    fn serialize_then_parse_is_identity(cfg in run_config()) {
        let text = cfg.to_toml();
        let back = RunConfig::from_toml(&text, Command::Validate).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(back.to_toml(), text);
    }
}
