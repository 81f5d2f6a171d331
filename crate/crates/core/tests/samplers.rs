use barrier_occupation::limit_laws::{g_atom, GDistribution};
use barrier_occupation::samplers::{
    limit_summary_batch, occupation_below_zero, sample_bm, sample_x, GridPath, LimitSampler, RngStream,
};
use barrier_occupation::validation::ks_one_sample;

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    xs[xs.len() / 2]
}

#[test]
fn occupation_error_shrinks_under_refinement() {
    let finest = 1.0 / 1024.0;
    let levels = 5; // steps 16, 8, 4, 2, 1 times the finest
    let paths = 2000;
    let mut diffs = vec![Vec::with_capacity(paths); levels - 1];
    for i in 0..paths as u64 {
        let fine = sample_bm(0.0, 1.0, finest, &mut RngStream::new(51, i)).unwrap();
        let occ: Vec<f64> = (0..levels)
            .map(|l| {
                let stride = 1usize << (levels - 1 - l);
                let values: Vec<f64> = fine.values().iter().step_by(stride).copied().collect();
                let coarse = GridPath::new(finest * stride as f64, values, 0.0).unwrap();
                occupation_below_zero(&coarse, 1.0).unwrap()
            })
            .collect();
        for l in 0..levels - 1 {
            diffs[l].push((occ[l] - occ[l + 1]).abs());
        }
    }
    let medians: Vec<f64> = diffs.into_iter().map(median).collect();
    for w in medians.windows(2) {
        let ratio = w[0] / w[1];
        assert!((1.2..=2.8).contains(&ratio), "median ratios off: {medians:?}");
    }
}

#[test]
fn limit_occupation_at_zero_start_is_sqrt_law() {
    let sampler = LimitSampler::new(0.0).unwrap();
    let draws = limit_summary_batch(&sampler, 10_000, 52).unwrap();
    let gammas: Vec<f64> = draws.iter().map(|d| d.gamma).collect();
    let ks = ks_one_sample(&gammas, |u| Ok(u.clamp(0.0, 1.0).sqrt()), 0.0).unwrap();
    assert!(ks <= 0.02, "KS {ks}");
    assert!(draws.iter().all(|d| d.tau == 0.0));
}

#[test]
fn limit_last_zero_follows_its_law() {
    for &y in &[-1.0, 0.0, 1.0] {
        let sampler = LimitSampler::new(y).unwrap();
        let law = GDistribution::new(y).unwrap();
        let gs: Vec<f64> = limit_summary_batch(&sampler, 10_000, 53)
            .unwrap()
            .iter()
            .map(|d| d.g)
            .collect();
        let ks = ks_one_sample(&gs, |x| law.cdf(x), g_atom(y)).unwrap();
        assert!(ks <= 0.02, "y={y}: KS {ks}");
    }
}

#[test]
fn atom_frequency_at_unit_start() {
    let n = 100_000;
    let sampler = LimitSampler::new(1.0).unwrap();
    let draws = limit_summary_batch(&sampler, n, 54).unwrap();
    let p = g_atom(1.0);
    assert!((p - 0.5562).abs() < 1e-4);
    let freq = draws.iter().filter(|d| d.g == 0.0).count() as f64 / n as f64;
    assert!(
        (freq - p).abs() < 3.0 * (p * (1.0 - p) / n as f64).sqrt(),
        "{freq} vs {p}"
    );
    assert!(draws.iter().all(|d| d.gamma <= 1.0));
    assert!(draws.iter().filter(|d| d.g == 0.0).all(|d| d.tau.is_infinite()));
}

#[test]
fn limit_paths_are_reproducible() {
    let a = sample_x(0.7, 3.0, 1.0 / 256.0, &mut RngStream::new(55, 1)).unwrap();
    let b = sample_x(0.7, 3.0, 1.0 / 256.0, &mut RngStream::new(55, 1)).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.path.values()[0], 0.7);
}
