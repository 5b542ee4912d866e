//! Independent routes to values the library computes another way.

use group_metrology::groups::{real_line_positive_kappa, su2_finite_cut_min, u1_finite_cut_min, EnergyCurve, WaveFunction};
use group_metrology::legendre::{gamma_from_operator, kappa_from_gamma, GammaCurve};
use group_metrology::mathieu::{characteristic_value, MathieuOrder};
use group_metrology::simulate::{
    circle_law, half_angle_law, mle_u1, sample_u1_outcome, trial_rng, wrap_angle, CosineLaw, U1Law,
};
use group_metrology::spectra::{solve_eigenvalues, TridiagonalOperator};

/// Phase operator `1 − (T + T†)/2` plus `s·k²` on charges `−n..=n`.
fn u1_operator(s: f64, n: usize) -> group_metrology::Result<TridiagonalOperator<f64>> {
    let diagonal = (0..=2 * n)
        .map(|i| {
            let k = i as f64 - n as f64;
            1.0 + s * k * k
        })
        .collect();
    TridiagonalOperator::new(diagonal, vec![-0.5; 2 * n])
}

#[test]
fn u1_operator_route_matches_mathieu_route() {
    let gamma = gamma_from_operator(u1_operator, 8, 1e-3, 1e3).unwrap();
    for s in [0.01, 0.1, 0.5, 1.0, 4.0, 30.0] {
        let via_mathieu = s * characteristic_value(MathieuOrder::A0, 2.0 / s).unwrap().value / 4.0 + 1.0;
        assert!((gamma.eval(s).unwrap() - via_mathieu).abs() < 1e-9, "s = {s}");
    }
    for e in [0.5, 2.0, 8.0] {
        let direct = kappa_from_gamma(&gamma, e).unwrap().kappa;
        let library = EnergyCurve::U1.kappa(e).unwrap().kappa;
        assert!((direct - library).abs() < 1e-8, "E = {e}");
    }
}

/// Lowest Dirichlet eigenvalue of `x² + s·(−d²/dx²)` on the half line, by
/// second-order finite differences on `n` interior points and one
/// Richardson step.
fn half_line_ground(s: f64, n: usize) -> f64 {
    let length = 10.0 * s.powf(0.25);
    let lowest = |n: usize| {
        let h = length / (n + 1) as f64;
        let diagonal = (1..=n).map(|i| (i as f64 * h).powi(2) + 2.0 * s / (h * h)).collect();
        let op = TridiagonalOperator::new(diagonal, vec![-s / (h * h); n - 1]).unwrap();
        solve_eigenvalues(&op, 1).unwrap()[0]
    };
    (4.0 * lowest(2 * n) - lowest(n)) / 3.0
}

#[test]
fn half_line_oscillator_ground_is_three_root_s() {
    for s in [0.1, 0.5, 1.0, 3.0, 10.0] {
        let ground = half_line_ground(s, 1500);
        assert!((ground - 3.0 * s.sqrt()).abs() < 1e-4, "s = {s}: {ground}");
    }
    let gamma = GammaCurve::new(|s: f64| Ok(half_line_ground(s, 600)), 1e-3, 1e3).unwrap();
    for e in [0.5, 2.0] {
        let numeric = kappa_from_gamma(&gamma, e).unwrap().kappa;
        let closed = real_line_positive_kappa(e).unwrap().kappa;
        assert!((numeric - closed).abs() < 1e-3 * closed, "E = {e}");
    }
}

/// Brute-force maximum of `Σ φ_i φ_{i+1}` over unit vectors on a path,
/// by power iteration on the shifted adjacency matrix.
fn path_top(m: usize) -> f64 {
    let mut v = vec![1.0; m];
    let mut value = 0.0;
    for _ in 0..200_000 {
        let mut w: Vec<f64> = (0..m)
            .map(|i| 2.0 * v[i] + if i > 0 { v[i - 1] } else { 0.0 } + if i + 1 < m { v[i + 1] } else { 0.0 })
            .collect();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        w.iter_mut().for_each(|x| *x /= norm);
        let next = (0..m - 1).map(|i| w[i] * w[i + 1]).sum::<f64>();
        v = w;
        if (next - value).abs() < 1e-15 {
            return next;
        }
        value = next;
    }
    value
}

#[test]
fn finite_cuts_match_power_iteration() {
    for n in [1usize, 2, 5, 10] {
        let u1 = u1_finite_cut_min::<f64>(n).unwrap().kappa;
        assert!((u1 - (1.0 - path_top(2 * n + 1))).abs() < 1e-9, "u1 n = {n}");
        let su2 = su2_finite_cut_min::<f64>(n).unwrap().kappa;
        assert!((su2 - (1.0 - path_top(n + 1))).abs() < 1e-9, "su2 n = {n}");
    }
}

#[test]
fn u1_estimate_concentrates_on_the_truth() {
    let labels: Vec<f64> = (-2..=2).map(f64::from).collect();
    let state = WaveFunction::normalized(labels, vec![1.0, 2.0, 3.0, 2.0, 1.0], vec![1.0; 5]).unwrap();
    let law = U1Law::new(&state).unwrap();
    let m = 500;
    let bound = 5.0 / (4.0 * law.energy() * m as f64).sqrt();
    for trial in 0..20 {
        let mut rng = trial_rng(3, trial);
        let samples: Vec<f64> = (0..m).map(|_| sample_u1_outcome(&law, 0.3, &mut rng)).collect();
        let estimate = mle_u1(&samples, &law).unwrap().estimate;
        assert!(wrap_angle(estimate - 0.3).abs() <= bound, "trial {trial}: {estimate}");
    }
}

fn ks_statistic(law: &CosineLaw, seed: u64, n: usize) -> f64 {
    let mut rng = trial_rng(seed, 0);
    let mut draws: Vec<f64> = (0..n).map(|_| law.sample(&mut rng)).collect();
    draws.sort_by(f64::total_cmp);
    draws
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = law.cdf_at(x);
            (f - i as f64 / n as f64).abs().max((f - (i + 1) as f64 / n as f64).abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn samplers_match_their_cdfs() {
    let n = 10_000;
    let bound = 1.63 / (n as f64).sqrt() + 0.01;
    let laws = [
        circle_law(&[0.5f64.sqrt(), 0.5f64.sqrt()]).unwrap(),
        circle_law(&[0.2, 0.5, 0.6, 0.5, 0.3]).unwrap(),
        half_angle_law(&[1.0]).unwrap(),
        half_angle_law(&[0.8, 0.0, 0.6]).unwrap(),
    ];
    for (i, law) in laws.iter().enumerate() {
        let d = ks_statistic(law, 40 + i as u64, n);
        assert!(d <= bound, "law {i}: KS {d}");
    }
}
