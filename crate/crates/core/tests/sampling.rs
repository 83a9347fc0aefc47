//! Distribution checks for the samplers. Seeds are fixed, so every verdict
//! is reproducible; thresholds are chi-square 0.1% critical values.

use std::collections::HashMap;

use gbgen::backward::BackwardSpec;
use gbgen::{
    sample_permutation, sample_shape_basis, sample_unimodular_upper, DegreeDistribution, Ring, ShapeBasisSpec,
    TermOrder, F7,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn chi_square(observed: &[u64], expected: &[f64]) -> f64 {
    observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| (o as f64 - e).powi(2) / e)
        .sum()
}

fn binom(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[test]
fn permutations_are_uniform() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut counts: HashMap<Vec<usize>, u64> = HashMap::new();
    let draws = 6000;
    for _ in 0..draws {
        *counts.entry(sample_permutation(3, &mut rng)).or_default() += 1;
    }
    assert_eq!(counts.len(), 6);
    let obs: Vec<u64> = counts.values().copied().collect();
    let chi = chi_square(&obs, &[draws as f64 / 6.0; 6]);
    // 5 degrees of freedom.
    assert!(chi < 20.52, "chi2 = {chi}, counts {counts:?}");
}

#[test]
fn density_matches_sigma() {
    let ring = Ring::new(3, TermOrder::Lex);
    let spec = BackwardSpec::new(3);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for sigma in [0.2, 0.6, 1.0] {
        let (mut nonzero, mut slots) = (0usize, 0usize);
        for _ in 0..10_000 {
            let m = sample_unimodular_upper::<F7, _>(ring, 4, sigma, &spec, &mut rng);
            assert!(m.is_unimodular_upper());
            nonzero += m.upper_nonzeros();
            slots += 6;
        }
        let rate = nonzero as f64 / slots as f64;
        assert!((rate - sigma).abs() <= 0.02, "sigma {sigma}: observed {rate}");
    }
}

fn h_degrees(dist: DegreeDistribution, draws: usize, seed: u64) -> Vec<u64> {
    let mut spec = ShapeBasisSpec::new(2);
    spec.degree_distribution = dist;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hist = vec![0u64; spec.d as usize + 1];
    for _ in 0..draws {
        let g = sample_shape_basis::<F7, _>(&spec, &mut rng).unwrap();
        hist[g[1].degree().unwrap() as usize] += 1;
    }
    hist
}

#[test]
fn uniform_degree_histogram() {
    let draws = 10_000;
    let hist = h_degrees(DegreeDistribution::UniformDegree, draws, 13);
    assert_eq!(hist[0], 0);
    let chi = chi_square(&hist[1..], &[draws as f64 / 5.0; 5]);
    // 4 degrees of freedom.
    assert!(chi < 18.47, "chi2 = {chi}, hist {hist:?}");
}

#[test]
fn uniform_monomial_histogram() {
    // t uniform on 1..=5, then a t-subset of {0..5}; the all-zero draw for
    // t = 1 is rejected. deg h is the subset maximum.
    let mut p = [0.0f64; 6];
    for t in 1..=5u64 {
        for k in 1..=5u64 {
            let q = if t == 1 {
                1.0 / 5.0
            } else {
                binom(k, t - 1) / binom(6, t)
            };
            p[k as usize] += q / 5.0;
        }
    }
    let draws = 10_000;
    let hist = h_degrees(DegreeDistribution::UniformMonomial, draws, 14);
    assert_eq!(hist[0], 0);
    let expected: Vec<f64> = p[1..].iter().map(|q| q * draws as f64).collect();
    assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    let chi = chi_square(&hist[1..], &expected);
    assert!(chi < 18.47, "chi2 = {chi}, hist {hist:?} expected {expected:?}");
}

#[test]
fn shape_bases_respect_bounds() {
    let mut spec = ShapeBasisSpec::new(4);
    spec.d = 4;
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..2000 {
        let g = sample_shape_basis::<F7, _>(&spec, &mut rng).unwrap();
        assert!(gbgen::is_shape_position(&g));
        assert!(gbgen::is_reduced_groebner(&g));
        let dh = g[3].degree().unwrap();
        assert!((1..=4).contains(&dh));
        for p in &g[..3] {
            assert!(p.len() <= 6);
            assert!(p.degree_in(3) < dh);
        }
    }
}
