use quilt_core::engine::PairState;
use quilt_core::measures::{DensityMatrix4, Structure};
use quilt_core::oracle::{max_density_diff, OracleState};
use quilt_core::scheme::{build_random_model, Model};

/// Class every pair state of the model must stay within.
fn closure(model: Model) -> Structure {
    match model {
        Model::GroundBath => Structure::Q,
        Model::ExcitedBath => Structure::Phi,
        Model::Xy | Model::MixedX => Structure::X,
        Model::Superposed => Structure::Box,
    }
}

fn for_each_run(mut f: impl FnMut(Model, u64, &mut PairState, &mut OracleState, &quilt_core::scheme::Event)) {
    for (m, model) in Model::ALL.into_iter().enumerate() {
        for k in 0..30u64 {
            let seed = 7000 + 100 * m as u64 + k;
            let scheme = build_random_model(model, 2 + (k as usize % 7), seed).unwrap();
            let mut pairs = PairState::from_scheme(&scheme).unwrap();
            let mut oracle = OracleState::new(&scheme, 14).unwrap();
            for ev in scheme.events() {
                f(model, seed, &mut pairs, &mut oracle, &ev);
            }
        }
    }
}

#[test]
fn random_models_agree_with_oracle() {
    let mut worst = (0.0f64, 0.0f64);
    for (m, model) in Model::ALL.into_iter().enumerate() {
        for k in 0..50u64 {
            let seed = 1000 * m as u64 + k;
            let n = 2 + (k as usize % 9);
            let scheme = build_random_model(model, n, seed).unwrap();
            let mut pairs = PairState::from_scheme(&scheme).unwrap();
            let mut oracle = OracleState::new(&scheme, 14).unwrap();
            for ev in scheme.events() {
                pairs.apply(&ev).unwrap_or_else(|e| panic!("{model:?} seed {seed}: {e}"));
                oracle.apply(&ev).unwrap();
            }
            let (d, _) = pairs.tangle_matrix().max_abs_diff(&oracle.tangle_matrix().unwrap());
            let dd = max_density_diff(&pairs, &oracle).unwrap();
            if d > 1e-9 || dd > 1e-9 {
                println!("{model:?} seed {seed} n {n}: tangle {d:e} density {dd:e}");
            }
            worst = (worst.0.max(d), worst.1.max(dd));
        }
    }
    println!("worst {worst:?}");
    assert!(worst.0 <= 1e-9 && worst.1 <= 1e-9);
}

#[test]
fn pair_states_keep_their_structure() {
    for_each_run(|model, seed, pairs, oracle, ev| {
        pairs.apply(ev).unwrap();
        oracle.apply(ev).unwrap();
        let n = pairs.n_qubits();
        for i in 0..n {
            for j in i + 1..n {
                let class = DensityMatrix4::classify(pairs.pair_density(i, j).unwrap().entries());
                assert!(class.within(closure(model)), "{model:?} seed {seed} ({i},{j}): {class:?}");
            }
        }
    });
}

#[test]
fn spectator_pairs_are_untouched() {
    for_each_run(|model, seed, pairs, oracle, ev| {
        let before = pairs.tangle_matrix();
        pairs.apply(ev).unwrap();
        oracle.apply(ev).unwrap();
        let after = pairs.tangle_matrix();
        let touched = ev.participants();
        let n = pairs.n_qubits();
        for i in 0..n {
            for j in i + 1..n {
                if !touched.contains(&i) && !touched.contains(&j) {
                    assert!((before.get(i, j) - after.get(i, j)).abs() < 1e-12, "{model:?} seed {seed} ({i},{j})");
                }
            }
        }
    });
}

#[test]
fn ground_exchange_conserves_spectator_tangle() {
    let mut checked = 0;
    for_each_run(|model, seed, pairs, oracle, ev| {
        let report = pairs.apply(ev).unwrap();
        oracle.apply(ev).unwrap();
        if !report.ground_exchange {
            return;
        }
        for sp in report.spectators.iter().filter(|sp| sp.structure.within(Structure::Box)) {
            let after = sp.with_old + sp.with_new.iter().sum::<f64>();
            assert!((sp.before - after).abs() < 1e-12, "{model:?} seed {seed}: {sp:?}");
            checked += 1;
        }
    });
    assert!(checked > 100, "only {checked} spectators checked");
}

#[test]
fn monogamy_holds_for_engine_tangles() {
    for_each_run(|model, seed, pairs, oracle, ev| {
        pairs.apply(ev).unwrap();
        oracle.apply(ev).unwrap();
        for (q, r) in oracle.ckw_residuals(&pairs.tangle_matrix()).into_iter().enumerate() {
            assert!(r >= -1e-9, "{model:?} seed {seed} qubit {q}: residual {r}");
        }
    });
}
