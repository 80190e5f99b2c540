use nue_core::hyperbolic::{
    adapted_hyperbolic_time, detect_hyperbolic_times, detect_hyperbolic_times_naive, first_hyperbolic_time,
    trace_orbit, HyperbolicParams, DEFAULT_NODE_BUDGET,
};
use nue_core::maps::{build_map, preimages, Doubling, Intermittent, MapConfig, MapModel, Quadratic, DEFAULT_PREIMAGE_TOL};
use nue_core::mc::{sample_rng, uniform_point};
use nue_core::measure::{physical_measure, stationary_measure, wasserstein1, EmpiricalMeasure, SamplingConfig};
use nue_core::noise::{
    choose_constants, preservation_experiment, random_orbit, AdaptedPerturbation, HSource, NoiseSequence,
    PreservationConfig,
};
use nue_core::stats::{fit_decay, ld_curve, LdConfig, MeasureMode};
use nue_core::Domain;
use proptest::prelude::*;
use rand::Rng;

fn families() -> Vec<Box<dyn MapModel>> {
    [
        MapConfig::new("doubling", &[]),
        MapConfig::new("intermittent", &[("alpha", 0.1)]),
        MapConfig::new("intermittent", &[("alpha", 0.7)]),
        MapConfig::new("quadratic", &[("a", 1.9)]),
        MapConfig::new("prv", &[]),
    ]
    .iter()
    .map(|c| build_map(c).unwrap())
    .collect()
}

fn grid(map: &dyn MapModel, k: usize) -> Vec<f64> {
    let d = map.domain();
    (0..k).map(|i| d.lower + d.length() * (i as f64 + 0.5) / k as f64).collect()
}

#[test]
fn branches_are_strictly_monotone() {
    for map in families() {
        let ends = map.branch_endpoints().to_vec();
        for (b, w) in ends.windows(2).enumerate() {
            // the innermost prv branches hold the unresolved oscillations at 0
            if w[1] - w[0] < 1e-10 {
                continue;
            }
            let pts: Vec<f64> = (0..=200).map(|i| w[0] + (w[1] - w[0]) * i as f64 / 200.0).collect();
            let vals: Vec<f64> = pts.iter().map(|&x| map.branch_lift(b, x)).collect();
            let up = vals.windows(2).all(|v| v[1] > v[0]);
            let down = vals.windows(2).all(|v| v[1] < v[0]);
            assert!(up || down, "{} branch {b} is not monotone", map.name());
        }
    }
}

#[test]
fn derivative_matches_finite_differences() {
    for map in families() {
        for x in grid(map.as_ref(), 997) {
            let Ok(df) = map.deriv(x) else { continue };
            let h = 1e-6;
            if map.dist_to_critical(x).is_some_and(|d| d < 1e-3) {
                continue;
            }
            let b = map.branch_endpoints().windows(2).position(|w| x >= w[0] && x < w[1]).unwrap();
            let w = &map.branch_endpoints()[b..b + 2];
            if x - h <= w[0] || x + h >= w[1] {
                continue;
            }
            let fd = (map.branch_lift(b, x + h) - map.branch_lift(b, x - h)) / (2.0 * h);
            assert!((fd - df).abs() <= 1e-4 * df.abs().max(1.0), "{} at {x}: {df} vs {fd}", map.name());
        }
    }
}

#[test]
fn preimages_agree_with_a_scan() {
    for map in families() {
        let d = map.domain();
        let mut rng = sample_rng(7, 0);
        for _ in 0..20 {
            let y = uniform_point(&d, &mut rng);
            let roots = preimages(map.as_ref(), y, DEFAULT_PREIMAGE_TOL).unwrap();
            for &z in &roots {
                assert!(d.dist(map.eval(z), y) < 1e-9, "{}: f({z}) != {y}", map.name());
            }
            // sign changes of f - y on a fine grid, each one a root
            let k = 20_000;
            let xs = grid(map.as_ref(), k);
            let mut crossings = 0;
            for w in xs.windows(2) {
                let g0 = signed(&d, map.eval(w[0]), y);
                let g1 = signed(&d, map.eval(w[1]), y);
                if g0 * g1 < 0.0 && (g0 - g1).abs() < 0.25 * d.length() {
                    crossings += 1;
                }
            }
            assert_eq!(roots.len(), crossings, "{} at y = {y}", map.name());
        }
    }
}

fn signed(d: &Domain, a: f64, b: f64) -> f64 {
    if d.is_circle() {
        let l = d.length();
        let mut s = (a - b) % l;
        if s > l / 2.0 {
            s -= l;
        } else if s < -l / 2.0 {
            s += l;
        }
        s
    } else {
        a - b
    }
}

#[test]
fn nondegeneracy_bounds_hold_on_samples() {
    for map in families() {
        let nd = map.nondegeneracy().unwrap();
        for x in grid(map.as_ref(), 4001) {
            let Ok(df) = map.deriv(x) else { continue };
            let dist = map.dist_to_critical(x).unwrap_or(1.0);
            let df = df.abs();
            assert!(df >= dist.powf(nd.beta) / nd.big_b * (1.0 - 1e-9), "{} lower bound at {x}", map.name());
            assert!(df <= nd.big_b * dist.powf(-nd.beta) * (1.0 + 1e-9), "{} upper bound at {x}", map.name());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn detectors_agree(
        sigma in 0.2f64..0.99,
        delta in 0.01f64..0.5,
        lid in prop::collection::vec(-1.5f64..0.8, 1..300),
        seed in any::<u64>(),
    ) {
        let p = HyperbolicParams::new(sigma, delta, 1.0, 2.0).unwrap();
        let mut rng = sample_rng(seed, 0);
        let ltd: Vec<f64> = lid.iter().map(|_| if rng.gen_bool(0.7) { 0.0 } else { rng.gen_range(-5.0..0.0) }).collect();
        prop_assert_eq!(detect_hyperbolic_times(&lid, &ltd, &p), detect_hyperbolic_times_naive(&lid, &ltd, &p));
    }

    #[test]
    fn wasserstein_is_a_metric(
        a in prop::collection::vec(0.0f64..1.0, 32),
        b in prop::collection::vec(0.0f64..1.0, 32),
        c in prop::collection::vec(0.0f64..1.0, 32),
        circle in any::<bool>(),
    ) {
        let d = if circle { Domain::circle(0.0, 1.0) } else { Domain::interval(-1.0, 1.0) };
        let bump = |v: Vec<f64>| v.into_iter().map(|w| w + 1e-3).collect::<Vec<_>>();
        let mu = EmpiricalMeasure::from_weights(d, bump(a)).unwrap();
        let nu = EmpiricalMeasure::from_weights(d, bump(b)).unwrap();
        let rho = EmpiricalMeasure::from_weights(d, bump(c)).unwrap();
        let mn = wasserstein1(&mu, &nu).unwrap();
        prop_assert!(wasserstein1(&mu, &mu).unwrap().abs() < 1e-12);
        prop_assert!((mn - wasserstein1(&nu, &mu).unwrap()).abs() < 1e-12);
        prop_assert!(mn <= wasserstein1(&mu, &rho).unwrap() + wasserstein1(&rho, &nu).unwrap() + 1e-12);
    }
}

#[test]
fn adapted_time_is_monotone_in_depth_and_bounds_h() {
    let q = Quadratic::new(1.9).unwrap();
    let p = HyperbolicParams::from_nondegeneracy(0.85, 1.0 / 256.0, q.nondegeneracy().unwrap()).unwrap();
    for x in grid(&q, 101) {
        let hs: Vec<usize> = (0..=5)
            .map(|l| adapted_hyperbolic_time(&q, x, &p, l, 500, DEFAULT_NODE_BUDGET).unwrap().value)
            .collect();
        assert!(hs.windows(2).all(|w| w[1] >= w[0]), "at {x}: {hs:?}");
        if let Some(h) = first_hyperbolic_time(&q, x, &p, 500).value() {
            assert_eq!(hs[0], h);
        }
    }
}

#[test]
fn zero_noise_random_orbit_is_the_deterministic_orbit() {
    let m = Intermittent::new(0.3).unwrap();
    let p = HyperbolicParams::from_nondegeneracy(0.8, 0.25, m.nondegeneracy().unwrap()).unwrap();
    let c = choose_constants(&p, 0.02).unwrap();
    let pert = AdaptedPerturbation::new(&m, p, c, 0.1, 4, 200).unwrap();
    let r = random_orbit(&pert, 0.37, &NoiseSequence::zeros(300, 0.1), 300).unwrap();
    let t = trace_orbit(&m, 0.37, 300, p.delta);
    assert_eq!(r.trace.points, t.points);
    assert!(r.deviations.iter().all(|&d| d == 0.0));
}

#[test]
fn noise_does_not_change_the_derivative_summands() {
    let m = Intermittent::new(0.3).unwrap();
    let p = HyperbolicParams::from_nondegeneracy(0.8, 0.25, m.nondegeneracy().unwrap()).unwrap();
    let c = choose_constants(&p, 0.02).unwrap();
    let pert = AdaptedPerturbation::new(&m, p, c, 0.1, 4, 200).unwrap();
    let noise = NoiseSequence::from_rng(0.1, 100, &mut sample_rng(3, 0));
    let r = random_orbit(&pert, 0.61, &noise, 100).unwrap();
    for (j, &x) in r.trace.points[..r.trace.log_inv_deriv.len()].iter().enumerate() {
        assert_eq!(r.trace.log_inv_deriv[j], -m.deriv(x).unwrap().abs().ln());
    }
}

fn doubling_pert(d: &Doubling) -> AdaptedPerturbation<'_> {
    let p = HyperbolicParams::from_nondegeneracy(2f64.powf(-1.0 / 3.0), 0.5, d.nondegeneracy().unwrap()).unwrap();
    let c = choose_constants(&p, 0.05).unwrap();
    let e = c.epsilon0;
    AdaptedPerturbation::new(d, p, c, e, 4, 100).unwrap().with_source(HSource::Constant(1))
}

#[test]
fn doubling_preserves_everything() {
    let d = Doubling::new();
    let pert = doubling_pert(&d);
    let sigma_hat = pert.params.sigma.sqrt();
    let cfg = PreservationConfig { samples: 50, trials: 10, h_max: 10, sigma_hat, max_attempts: 10, seed: 5 };
    let r = preservation_experiment(&pert, &cfg).unwrap();
    assert_eq!((r.pass_a, r.pass_b, r.pass_c), (1.0, 1.0, 1.0));

    let empty = preservation_experiment(&pert, &PreservationConfig { trials: 0, ..cfg }).unwrap();
    assert_eq!((empty.pass_a, empty.pass_b, empty.pass_c), (1.0, 1.0, 1.0));
}

#[test]
fn doubling_stationary_measure_is_near_uniform() {
    let d = Doubling::new();
    let pert = doubling_pert(&d);
    let cfg = SamplingConfig { n: 2000, samples: 200, bins: 64, burn_in: 10, seed: 9 };
    let run = stationary_measure(&pert, pert.epsilon, &cfg).unwrap();
    let u = EmpiricalMeasure::uniform(d.domain(), 64).unwrap();
    assert!(wasserstein1(&run.measure, &u).unwrap() < 5e-3);
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let m = Intermittent::new(0.2).unwrap();
    let cfg = SamplingConfig { n: 500, samples: 150, bins: 32, burn_in: 10, seed: 11 };
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let three = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let a = one.install(|| physical_measure(&m, &cfg).unwrap());
    let b = three.install(|| physical_measure(&m, &cfg).unwrap());
    assert_eq!(a.measure, b.measure);
    let c = physical_measure(&m, &SamplingConfig { seed: 12, ..cfg }).unwrap();
    assert_ne!(a.measure, c.measure);
}

#[test]
fn fit_is_invariant_under_scaling() {
    let ns = [1, 2, 4, 8, 16];
    let v: Vec<f64> = ns.iter().map(|&n| 0.3 * (n as f64).powf(-1.7)).collect();
    let a = fit_decay(&ns, &v).unwrap();
    let b = fit_decay(&ns, &v.iter().map(|x| 40.0 * x).collect::<Vec<_>>()).unwrap();
    assert!((a.slope + 1.7).abs() < 1e-12);
    assert!((a.slope - b.slope).abs() < 1e-12);
    assert!((b.intercept - a.intercept - 40f64.ln()).abs() < 1e-9);
}

#[test]
fn large_deviation_fraction_does_not_grow() {
    let m = Intermittent::new(0.2).unwrap();
    let cfg = LdConfig {
        eps_dev: 0.1,
        samples: 4000,
        mode: MeasureMode::Lebesgue,
        burn_in: 0,
        reference_len: Some(2_000_000),
        seed: 13,
    };
    let ns = [8, 16, 32, 64];
    let est = ld_curve(&m, |x| x, &ns, &cfg).unwrap();
    for w in est.windows(2) {
        let err = (w[0].value * (1.0 - w[0].value) / cfg.samples as f64).sqrt();
        assert!(w[1].value <= w[0].value + 3.0 * err + 1e-12, "{:?} then {:?}", w[0], w[1]);
    }
}
