use cqie_core::analysis::{
    fit_alpha, fit_effective_temperature, fit_inverse_n_model, fit_n0_model, locate_critical_coupling,
    predict_global_fidelity, pseudo_likelihood_beta, CouplingSamples, ScalingPoint,
};
use cqie_core::dynamics::{exact_thermal_oracle, ShotSet, SpinConfiguration};
use cqie_core::schedule::HamiltonianParams;
use cqie_core::seed::rng_from_seed;
use cqie_core::topology::{Edge, Topology, TopologyKind};
use cqie_core::units::{beta_from_mk, mk_from_beta};
use proptest::prelude::*;
use rand::Rng;
use rand::distr::weighted::WeightedIndex;
use rand_distr::{Binomial, Distribution};

const SHOTS: u64 = 100_000;
const SIZES: [usize; 8] = [40, 262, 678, 1284, 2078, 3061, 4241, 5612];

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn noiseless(f: impl Fn(usize) -> f64) -> Vec<ScalingPoint> {
    SIZES
        .iter()
        .map(|&n| {
            let v = f(n);
            ScalingPoint::new(n, v, (v * (1.0 - v) / SHOTS as f64).sqrt())
        })
        .collect()
}

fn binomial_point<R: Rng>(n: usize, p: f64, trials: u64, rng: &mut R) -> ScalingPoint {
    let hits = Binomial::new(trials, p).unwrap().sample(rng);
    let v = hits as f64 / trials as f64;
    ScalingPoint::new(n, v, (v * (1.0 - v) / trials as f64).sqrt())
}

#[test]
fn noiseless_round_trips() {
    let alpha: f64 = 2.11e-4;
    let r = fit_alpha(&noiseless(|n| (1.0 - alpha).powi(n as i32))).unwrap();
    assert!(rel(r.param("alpha").unwrap(), alpha) < 1e-6);

    let alpha_hat = 5.0e-4;
    let r = fit_inverse_n_model(&noiseless(|n| 1.0 - alpha_hat / n as f64)).unwrap();
    assert!(rel(r.param("alpha_hat").unwrap(), alpha_hat) < 1e-6);

    let n0 = 329.0;
    let r = fit_n0_model(&noiseless(|n| (n as f64 / n0 * (-alpha).ln_1p()).exp()), alpha).unwrap();
    assert!(rel(r.param("n0").unwrap(), n0) < 1e-6);

    let (beta, delta_e) = (1.4f64, 6.0);
    let x = beta * delta_e;
    let r = fit_effective_temperature(&noiseless(|n| (1.0 + (-x).exp()).powf(-(n as f64))), delta_e).unwrap();
    assert!(rel(r.param("beta").unwrap(), beta) < 1e-6);
    assert!(rel(r.param("temperature_mk").unwrap(), mk_from_beta(beta)) < 1e-6);
}

/// Fraction of replications whose 2-stderr interval covers `truth`.
fn coverage(truth: f64, mut replicate: impl FnMut(u64) -> (f64, f64)) -> f64 {
    let hits = (0..100u64)
        .filter(|&seed| {
            let (v, se) = replicate(seed);
            (v - truth).abs() <= 2.0 * se
        })
        .count();
    hits as f64 / 100.0
}

#[test]
fn two_stderr_coverage_under_binomial_noise() {
    let alpha = 2.11e-4;
    let cov = coverage(alpha, |seed| {
        let mut rng = rng_from_seed(seed);
        let pts: Vec<_> = SIZES.iter().map(|&n| binomial_point(n, (1.0 - alpha).powi(n as i32), SHOTS, &mut rng)).collect();
        let r = fit_alpha(&pts).unwrap();
        (r.param("alpha").unwrap(), r.stderr("alpha").unwrap())
    });
    assert!(cov >= 0.9, "alpha coverage {cov}");

    let x_true = -(alpha / (1.0 - alpha)).ln();
    let cov = coverage(x_true, |seed| {
        let mut rng = rng_from_seed(1000 + seed);
        let pts: Vec<_> = SIZES.iter().map(|&n| binomial_point(n, (1.0 - alpha).powi(n as i32), SHOTS, &mut rng)).collect();
        let r = fit_effective_temperature(&pts, 6.0).unwrap();
        (r.param("x").unwrap(), r.stderr("x").unwrap())
    });
    assert!(cov >= 0.9, "effective-temperature coverage {cov}");

    let alpha_hat = 5.0e-4;
    let cov = coverage(alpha_hat, |seed| {
        let mut rng = rng_from_seed(2000 + seed);
        let pts: Vec<_> = [16usize, 64, 256]
            .iter()
            .map(|&n| binomial_point(n, 1.0 - alpha_hat / n as f64, SHOTS * n as u64, &mut rng))
            .collect();
        let r = fit_inverse_n_model(&pts).unwrap();
        (r.param("alpha_hat").unwrap(), r.stderr("alpha_hat").unwrap())
    });
    assert!(cov >= 0.9, "inverse-N coverage {cov}");

    let n0 = 329.0;
    let cov = coverage(n0, |seed| {
        let mut rng = rng_from_seed(3000 + seed);
        let pts: Vec<_> = SIZES[1..]
            .iter()
            .map(|&n| binomial_point(n, (n as f64 / n0 * (-alpha).ln_1p()).exp(), SHOTS, &mut rng))
            .collect();
        let r = fit_n0_model(&pts, alpha).unwrap();
        (r.param("n0").unwrap(), r.stderr("n0").unwrap())
    });
    assert!(cov >= 0.9, "N0 coverage {cov}");
}

#[test]
fn power_law_and_effective_temperature_agree() {
    let mut rng = rng_from_seed(8);
    let pts: Vec<_> = SIZES.iter().map(|&n| binomial_point(n, 0.9997f64.powi(n as i32), SHOTS, &mut rng)).collect();
    let a = fit_alpha(&pts).unwrap();
    let t = fit_effective_temperature(&pts, 6.0).unwrap();
    let (alpha, x) = (a.param("alpha").unwrap(), t.param("x").unwrap());
    let product = (1.0 - alpha) * (1.0 + (-x).exp());
    let se = a.stderr("alpha").unwrap() + (-x).exp() * t.stderr("x").unwrap();
    assert!((product - 1.0).abs() <= se, "{product}");
}

proptest! {
    #[test]
    fn predicted_fidelity_is_monotone(f in 0.0f64..1.0, n in 1usize..10_000) {
        prop_assert!(predict_global_fidelity(f, n + 1) <= predict_global_fidelity(f, n));
        let g = f + (1.0 - f) / 2.0;
        prop_assert!(predict_global_fidelity(g, n) >= predict_global_fidelity(f, n));
    }

    #[test]
    fn critical_coupling_is_scale_equivariant(c in 0.1f64..10.0, seed: u64) {
        let mut rng = rng_from_seed(seed);
        // Fluctuations peak in the middle of the grid.
        let curve: Vec<CouplingSamples> = (0..9)
            .map(|k| {
                let width = 0.05 + 0.4 * (-(k as f64 - 4.0).powi(2) / 4.0).exp();
                let ms = (0..200).map(|_| (0.5 + width * (rng.random::<f64>() - 0.5)).clamp(-1.0, 1.0)).collect();
                CouplingSamples { coupling: 0.3 + 0.025 * k as f64, magnetizations: ms }
            })
            .collect();
        let scaled: Vec<CouplingSamples> = curve
            .iter()
            .map(|s| CouplingSamples { coupling: s.coupling / c, ..s.clone() })
            .collect();
        let a = locate_critical_coupling(&curve, 64).unwrap();
        let b = locate_critical_coupling(&scaled, 64).unwrap();
        prop_assert!(rel(b.coupling, a.coupling / c) < 1e-12);
    }
}

fn kite() -> Topology {
    let edges = vec![
        Edge::new(0, 1, 1.0),
        Edge::new(1, 2, 1.0),
        Edge::new(2, 3, 1.0),
        Edge::new(3, 0, 1.0),
        Edge::new(0, 2, 1.0),
    ];
    Topology::new(4, edges, TopologyKind::Custom, 0).unwrap()
}

fn oracle_samples(topo: &Topology, params: &HamiltonianParams, t_mk: f64, count: usize, seed: u64) -> ShotSet {
    let probs = exact_thermal_oracle(topo, params, t_mk).unwrap().state_probs;
    let dist = WeightedIndex::new(&probs).unwrap();
    let mut rng = rng_from_seed(seed);
    ShotSet::from_configurations(
        (0..count).map(|_| SpinConfiguration::from_state_index(topo.n(), dist.sample(&mut rng))).collect(),
    )
    .unwrap()
}

#[test]
fn pseudo_likelihood_recovers_oracle_beta() {
    let topo = kite();
    let params = HamiltonianParams::new(0.0, 0.2, 0.3);
    for t in [20.0, 40.0, 80.0] {
        let shots = oracle_samples(&topo, &params, t, 10_000, t as u64);
        let fit = pseudo_likelihood_beta(&shots, &topo, &params).unwrap();
        let beta = fit.param("beta").unwrap();
        assert!(rel(beta, beta_from_mk(t)) < 0.05, "T={t}: {beta} vs {}", beta_from_mk(t));
    }
}

#[test]
fn pseudo_likelihood_is_flip_invariant_without_field() {
    let topo = kite();
    let params = HamiltonianParams::new(0.0, 0.0, 0.3);
    let shots = oracle_samples(&topo, &params, 30.0, 2_000, 4);
    let flipped = ShotSet::from_configurations(shots.shots().iter().map(SpinConfiguration::flipped).collect()).unwrap();
    let a = pseudo_likelihood_beta(&shots, &topo, &params).unwrap().param("beta").unwrap();
    let b = pseudo_likelihood_beta(&flipped, &topo, &params).unwrap().param("beta").unwrap();
    assert!(rel(a, b) < 1e-9);
}

#[test]
fn pseudo_likelihood_of_fair_coins_is_near_zero() {
    let topo = kite();
    let params = HamiltonianParams::new(0.0, 0.2, 0.3);
    let mut rng = rng_from_seed(12);
    let shots = ShotSet::from_configurations(
        (0..5_000).map(|_| SpinConfiguration::from_state_index(4, rng.random_range(0..16))).collect(),
    )
    .unwrap();
    let fit = pseudo_likelihood_beta(&shots, &topo, &params).unwrap();
    assert!(fit.param("beta").unwrap() <= 3.0 * fit.stderr("beta").unwrap());
}
