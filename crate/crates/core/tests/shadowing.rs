//! Distribution of shadowed path loss draws.

use mmwpl_core::pathloss::{PRESET_28GHZ_NYC, PRESET_73GHZ_NYC};
use mmwpl_core::{LosParamsF64, NlosKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};

/// Two-sided Kolmogorov-Smirnov statistic against a fitted normal.
fn ks_statistic(mut xs: Vec<f64>, reference: &Normal) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = reference.cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn weighted_shadowing_is_normal() {
    // critical value at alpha = 0.01 for large n
    let n = 10_000;
    let critical = 1.628 / (n as f64).sqrt();
    for (preset, kind, d, seed) in [
        (PRESET_28GHZ_NYC, NlosKind::CloseIn, 100.0, 11),
        (PRESET_28GHZ_NYC, NlosKind::Floating, 45.0, 12),
        (PRESET_73GHZ_NYC, NlosKind::CloseIn, 150.0, 13),
    ] {
        let h = preset.hybrid(kind, LosParamsF64::nyc_mean());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let xs: Vec<f64> = (0..n).map(|_| h.sample_pl(d, &mut rng).unwrap()).collect();
        let reference = Normal::new(h.mean_pl(d).unwrap(), h.shadow_sigma(d).unwrap()).unwrap();
        let ks = ks_statistic(xs, &reference);
        assert!(ks < critical, "{} {kind:?} d={d}: D={ks} critical={critical}", preset.label);
    }
}
