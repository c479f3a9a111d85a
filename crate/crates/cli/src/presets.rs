//! Named reproduction runs. Unless noted: 30 qubits, Ω = ω = 1, t = π/4,
//! qubit 0 excited, excitation exchange.

use std::f64::consts::PI;

use crate::config::{KindName, RunConfig, SchemeName};

pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    pub config: RunConfig,
}

const RANDOM_SEED: u64 = 1;
/// The lone excited bath qubit of the hot-qubit runs.
pub const HOT_QUBIT: usize = 9;
pub const SCATTERED_EXCITATIONS: [usize; 3] = [0, 9, 19];

fn base(scheme: SchemeName) -> RunConfig {
    RunConfig { scheme, n: Some(30), seed: RANDOM_SEED, ..RunConfig::default() }
}

fn with_excited(scheme: SchemeName, excited: Vec<usize>) -> RunConfig {
    RunConfig { excited: Some(excited), ..base(scheme) }
}

fn xy(scheme: SchemeName, t: f64) -> RunConfig {
    RunConfig { kind: KindName::Xy, t, ..base(scheme) }
}

pub fn presets() -> Vec<Preset> {
    use SchemeName::{Binary, Chain, Random, Star, Uniform};
    let neel: Vec<usize> = (0..30).step_by(2).collect();
    let p = |name, summary, config| Preset { name, summary, config };
    vec![
        p("ground-random", "ground bath, each new qubit meets a random old one", base(Random)),
        p("ground-chain", "ground bath, qubit i meets qubit i-1", base(Chain)),
        p("ground-star", "ground bath, every qubit meets qubit 0", base(Star)),
        p(
            "ground-doubling",
            "uniform quilt on 32 qubits from the doubling schedule",
            RunConfig { n: Some(32), ..base(Binary) },
        ),
        p(
            "ground-uniform-chain",
            "uniform quilt on 32 qubits from a chain with tuned durations",
            RunConfig { n: Some(32), ..base(Uniform) },
        ),
        p("hot-qubit-random", "qubit 9 starts excited, random old partner", with_excited(Random, vec![0, HOT_QUBIT])),
        p("hot-qubit-chain", "qubit 9 starts excited, chain", with_excited(Chain, vec![0, HOT_QUBIT])),
        p("hot-qubit-star", "qubit 9 starts excited, star", with_excited(Star, vec![0, HOT_QUBIT])),
        p(
            "hot-qubit-chain-snapshots",
            "chain with qubit 9 excited, snapshots after collisions 8 to 11",
            RunConfig { snapshots: vec![8, 9, 10, 11], ..with_excited(Chain, vec![0, HOT_QUBIT]) },
        ),
        p("neel-random", "Neel start |1010...>, random old partner", with_excited(Random, neel.clone())),
        p("neel-chain", "Neel start |1010...>, chain", with_excited(Chain, neel.clone())),
        p("neel-star", "Neel start |1010...>, star", with_excited(Star, neel)),
        p(
            "three-excited-star",
            "qubits 0, 9 and 19 start excited, star",
            with_excited(Star, SCATTERED_EXCITATIONS.to_vec()),
        ),
        p("xy-random", "xy coupling, t = pi/8, random old partner", xy(Random, PI / 8.0)),
        p("xy-chain", "xy coupling, t = pi/8, chain", xy(Chain, PI / 8.0)),
        p("xy-star", "xy coupling, t = pi/8, star", xy(Star, PI / 8.0)),
        p("xy-star-pi16", "xy coupling, t = pi/16, star", xy(Star, PI / 16.0)),
        p("xy-star-pi32", "xy coupling, t = pi/32, star", xy(Star, PI / 32.0)),
        p("xy-star-pi64", "xy coupling, t = pi/64, star", xy(Star, PI / 64.0)),
        p("xy-star-pi128", "xy coupling, t = pi/128, star", xy(Star, PI / 128.0)),
    ]
}

pub fn find(name: &str) -> Option<Preset> {
    presets().into_iter().find(|p| p.name == name)
}
