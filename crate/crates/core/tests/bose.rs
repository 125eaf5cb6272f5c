use divgeo::bose_geometry::{connection, covariant_hessian, metric, Coord};
use divgeo::bose_model::{
    divergence, divergence_gradient, fit, log_partition, log_pmf, occupation,
    sample_mean_occupations, BoseModelPoint, EnergySpectrum, FitOptions, OccupationSequence,
};
use proptest::prelude::*;

mod common;
use common::{divergence_oracle, fd_gradient, fd_hessian};

fn spec(levels: &[f64]) -> EnergySpectrum {
    EnergySpectrum::new(levels.to_vec()).unwrap()
}

fn pt(beta: f64, mu: f64) -> BoseModelPoint {
    BoseModelPoint::new(beta, mu).unwrap()
}

#[test]
fn log_pmf_sums_to_one_by_enumeration() {
    // two levels, small reduced gaps so the mass spreads over many states
    let s = spec(&[0.5, 0.9]);
    let p = pt(1.0, 0.0);
    let mut partial = Vec::new();
    let mut total = 0.0;
    for n_max in 0..=200u64 {
        for n1 in 0..=n_max {
            let n2 = n_max - n1;
            let n = OccupationSequence::from_counts([n1, n2]);
            total += log_pmf(&n, &s, &p).unwrap().exp();
        }
        if n_max % 20 == 0 {
            partial.push(total);
        }
    }
    assert!(partial.windows(2).all(|w| w[1] >= w[0]));
    assert!((total - 1.0).abs() < 1e-12, "total mass {total}");
}

#[test]
fn gradient_matches_central_differences() {
    let cases = [
        (vec![1.0, 2.0], vec![0.3, 0.1], 1.0, 0.0),
        (
            vec![0.2, 0.5, 1.7, 3.0],
            vec![2.0, 1.0, 0.0, 0.5],
            2.3,
            -0.4,
        ),
        (vec![1.0, 2.0, 3.0], vec![3.0, 1.0, 0.0], 0.7, 0.5),
    ];
    for (levels, counts, beta, mu) in cases {
        let s = spec(&levels);
        let n = OccupationSequence::new(counts.clone()).unwrap();
        let g = divergence_gradient(&n, &s, &pt(beta, mu)).unwrap();
        let fd = fd_gradient(&levels, &counts, beta, mu);
        for k in 0..2 {
            let rel = (g[k] - fd[k]).abs() / g[k].abs().max(1e-3);
            assert!(rel <= 1e-6, "component {k}: {} vs {}", g[k], fd[k]);
        }
    }
}

/// Brute-force minimizer: a full grid over `(0, 10] x [-10, 1)` at step
/// `1e-3`, then nested bisection on the two estimating equations around the
/// best grid cell.
fn grid_oracle(levels: &[f64], n: &[f64]) -> (f64, f64) {
    let step = 1e-3;
    let n_beta = 10_000usize;
    let n_mu = 11_000usize;
    let threads = std::thread::available_parallelism()
        .map_or(4, |p| p.get())
        .min(16);
    let chunk = n_beta.div_ceil(threads);
    let best =
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads)
                .map(|t| {
                    scope.spawn(move || {
                        let mut best = (f64::INFINITY, 0.0, 0.0);
                        for i in (t * chunk)..((t + 1) * chunk).min(n_beta) {
                            let beta = (i + 1) as f64 * step;
                            for k in 0..n_mu {
                                let mu = -10.0 + k as f64 * step;
                                if mu >= levels[0] {
                                    break;
                                }
                                let d = divergence_oracle(levels, n, beta, mu);
                                if d < best.0 {
                                    best = (d, beta, mu);
                                }
                            }
                        }
                        best
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).fold(
                (f64::INFINITY, 0.0, 0.0),
                |a, b| if b.0 < a.0 { b } else { a },
            )
        });
    let (_, beta_grid, _) = best;

    let total: f64 = n.iter().sum();
    let energy: f64 = n.iter().zip(levels).map(|(a, b)| a * b).sum();
    let f = |beta: f64, mu: f64, e: f64| 1.0 / ((beta * (e - mu)).exp() - 1.0);
    // mu solving sum f = total at fixed beta (sum f increases with mu)
    let mu_of = |beta: f64| {
        let (mut lo, mut hi) = (levels[0] - 1e3, levels[0]);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let s: f64 = levels.iter().map(|&e| f(beta, mid, e)).sum();
            if s < total {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let energy_gap = |beta: f64| {
        let mu = mu_of(beta);
        levels.iter().map(|&e| e * f(beta, mu, e)).sum::<f64>() - energy
    };
    let (mut lo, mut hi) = ((beta_grid - 0.05).max(1e-6), beta_grid + 0.05);
    assert!(
        energy_gap(lo).signum() != energy_gap(hi).signum(),
        "no sign change around grid minimum {beta_grid}"
    );
    let lo_sign = energy_gap(lo).signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if energy_gap(mid).signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let beta = 0.5 * (lo + hi);
    (beta, mu_of(beta))
}

#[test]
fn fit_agrees_with_grid_oracle() {
    let levels = [1.0, 2.0, 3.0];
    let counts = [3.0, 1.0, 0.0];
    let (beta_o, mu_o) = grid_oracle(&levels, &counts);
    let r = fit(
        &OccupationSequence::new(counts.to_vec()).unwrap(),
        &spec(&levels),
        &FitOptions::default(),
    )
    .unwrap();
    assert!(
        (r.point.beta - beta_o).abs() < 1e-4,
        "{} vs {beta_o}",
        r.point.beta
    );
    assert!((r.point.mu - mu_o).abs() < 1e-4, "{} vs {mu_o}", r.point.mu);
    assert!(r.gradient_norm <= 1e-10);
}

#[test]
fn sample_mean_matches_bose_factor() {
    let s = spec(&[0.2, 0.6, 1.5]);
    let p = pt(1.3, -0.1);
    let shots = 100_000;
    let mean = sample_mean_occupations(&s, &p, shots, 2024).unwrap();
    let f = occupation(&s, &p).unwrap();
    for (m, fj) in mean.counts().iter().zip(&f) {
        // geometric variance q / (1 - q)^2 = f (1 + f)
        let se = (fj * (1.0 + fj) / shots as f64).sqrt();
        assert!((m - fj).abs() <= 3.0 * se, "mean {m} vs {fj} (se {se})");
    }
}

#[test]
fn metric_matches_finite_difference_hessian() {
    let levels = [1.0, 2.0];
    let (beta, mu) = (1.0, 0.0);
    let s = spec(&levels);
    let f = occupation(&s, &pt(beta, mu)).unwrap();
    let g = metric(&s, &pt(beta, mu)).unwrap().entries();
    let fd = fd_hessian(&levels, &f, beta, mu);
    for a in 0..2 {
        for b in 0..2 {
            let rel = (g[a][b] - fd[a][b]).abs() / g[a][b].abs();
            assert!(rel <= 1e-6, "({a},{b}): {} vs {}", g[a][b], fd[a][b]);
        }
    }
}

#[test]
fn covariant_hessian_is_data_independent() {
    let s = spec(&[0.5, 1.0, 1.8, 2.2]);
    let p = pt(1.4, 0.1);
    let reference = metric(&s, &p).unwrap().entries();
    let data = [
        vec![0.0, 0.0, 0.0, 0.0],
        vec![10.0, 3.0, 1.0, 0.0],
        vec![0.1, 5.0, 0.2, 7.5],
    ];
    for counts in data {
        let n = OccupationSequence::new(counts).unwrap();
        let h = covariant_hessian(&n, &s, &p).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                assert!((h[a][b] - reference[a][b]).abs() <= 1e-10 * (1.0 + reference[a][b].abs()));
            }
        }
    }
    assert_eq!(
        connection(&p).coefficient(Coord::Mu, Coord::Beta, Coord::Mu),
        1.0 / 1.4
    );
}

fn arb_problem() -> impl Strategy<Value = (Vec<f64>, f64, f64)> {
    (2usize..12)
        .prop_flat_map(|j| {
            (
                prop::collection::vec(0.05f64..1.5, j),
                -2.0f64..3.0,
                0.2f64..4.0,
                0.01f64..2.0,
            )
        })
        .prop_map(|(steps, e1, beta, below)| {
            let mut levels = Vec::with_capacity(steps.len());
            let mut e = e1;
            for s in steps {
                levels.push(e);
                e += s;
            }
            let mu = levels[0] - below;
            (levels, beta, mu)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn divergence_is_minus_log_pmf(
        (levels, beta, mu) in arb_problem(),
        seed in prop::collection::vec(0.0f64..20.0, 12),
    ) {
        let s = spec(&levels);
        let n = OccupationSequence::new(seed[..levels.len()].to_vec()).unwrap();
        let p = pt(beta, mu);
        let d = divergence(&n, &s, &p).unwrap();
        let l = log_pmf(&n, &s, &p).unwrap();
        prop_assert!((d + l).abs() <= 1e-12 * (1.0 + d.abs()));
    }

    #[test]
    fn log_partition_monotone(
        (levels, beta, mu) in arb_problem(),
        db in 0.01f64..1.0,
        dm in 0.001f64..0.9,
    ) {
        let s = spec(&levels);
        let base = log_partition(&s, &pt(beta, mu)).unwrap();
        prop_assert!(log_partition(&s, &pt(beta + db, mu)).unwrap() < base);
        let room = levels[0] - mu;
        prop_assert!(log_partition(&s, &pt(beta, mu + dm * room)).unwrap() > base);
    }

    #[test]
    fn fit_is_stationary_and_minimal(
        (levels, beta, mu) in arb_problem(),
        probes in prop::collection::vec((0.05f64..5.0, 0.01f64..5.0), 100),
    ) {
        let s = spec(&levels);
        let n = OccupationSequence::new(occupation(&s, &pt(beta, mu)).unwrap()).unwrap();
        let r = fit(&n, &s, &FitOptions::default()).unwrap();
        prop_assert!(r.gradient_norm <= 1e-10);

        let f = occupation(&s, &r.point).unwrap();
        let data_e: f64 = n.counts().iter().zip(&levels).map(|(a, b)| a * b).sum();
        let model_e: f64 = f.iter().zip(&levels).map(|(a, b)| a * b).sum();
        let tol = 1e-10 * (1.0 + data_e.abs());
        prop_assert!((data_e - model_e).abs() <= tol);
        prop_assert!((n.total() - f.iter().sum::<f64>()).abs() <= tol);

        let best = r.divergence_at_min;
        for (b, below) in probes {
            let d = divergence(&n, &s, &pt(b, levels[0] - below)).unwrap();
            prop_assert!(d >= best - 1e-12 * best.abs().max(1.0));
        }
    }
}

#[test]
fn fit_recovers_when_newton_step_overshoots_the_ground_level() {
    let levels = [
        -0.32918892833672975,
        0.4688690781835977,
        1.4652597697933618,
        1.5468027298694942,
    ];
    let counts = [
        6.14469967536165,
        0.854825376293461,
        0.3154642287800186,
        0.2273172053833166,
    ];
    let r = fit(
        &OccupationSequence::new(counts.to_vec()).unwrap(),
        &spec(&levels),
        &FitOptions::default(),
    )
    .unwrap();
    assert!(r.point.mu < levels[0]);
    assert!(r.gradient_norm <= 1e-10);
}
