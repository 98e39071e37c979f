use inertia_core::metrics::mape;
use inertia_core::synthetic::{generate_synthetic, SyntheticConfig};
use inertia_core::{fit, predict};

fn train_mape(noise_sd: f64, seed: u64) -> f64 {
    let cfg = SyntheticConfig {
        hours: 24 * 90,
        noise_sd,
        seed,
        ..SyntheticConfig::default()
    };
    let ds = generate_synthetic(&cfg).unwrap();
    let model = fit(&ds, &cfg.spec, cfg.window()).unwrap();
    let fc = predict(&model, &ds, cfg.window()).unwrap();
    mape(&ds.target, &fc).unwrap()
}

#[test]
fn doubling_noise_raises_training_mape() {
    for seed in 0..5 {
        let lo = train_mape(2000.0, seed);
        let hi = train_mape(4000.0, seed);
        assert!(hi > lo, "seed {seed}: {lo} -> {hi}");
    }
}

#[test]
fn same_seed_same_data_different_seed_different_data() {
    let cfg = SyntheticConfig {
        hours: 24 * 30,
        noise_sd: 1000.0,
        seed: 11,
        ..SyntheticConfig::default()
    };
    assert_eq!(
        generate_synthetic(&cfg).unwrap(),
        generate_synthetic(&cfg).unwrap()
    );
    let other = SyntheticConfig {
        seed: 12,
        ..cfg.clone()
    };
    assert_ne!(
        generate_synthetic(&cfg).unwrap().target,
        generate_synthetic(&other).unwrap().target
    );
}
