use std::f64::consts::PI;

use rand::Rng;

use super::cosine::{circle_law, CosineLaw};
use super::MleOutcome;
use crate::error::{Error, Result};
use crate::groups::WaveFunction;

/// Candidate angles in the likelihood scan.
pub const U1_SCAN_POINTS: usize = 1024;
/// Bisection steps on the score after the scan.
pub const U1_REFINEMENTS: usize = 30;

const LOG_TABLE_POINTS: usize = 1 << 14;
const LOG_FLOOR: f64 = 1e-300;
const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Maps an angle to `(−π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Outcome law of the covariant phase measurement for a U(1) state.
#[derive(Debug, Clone)]
pub struct U1Law {
    law: CosineLaw,
    probabilities: Vec<f64>,
    first_label: i64,
    log_table: Vec<f64>,
    symmetric: bool,
}

impl U1Law {
    pub fn new(state: &WaveFunction<f64>) -> Result<Self> {
        let mut labels = Vec::with_capacity(state.len());
        for &l in state.labels() {
            if l.fract() != 0.0 {
                return Err(Error::InvalidInput(format!("U(1) label {l} is not an integer")));
            }
            labels.push(l as i64);
        }
        if state.weights().iter().any(|&w| (w - 1.0).abs() > 1e-12) {
            return Err(Error::InvalidInput("U(1) labels carry unit weight".into()));
        }
        let beta = state.coefficients();
        let support: Vec<usize> = (0..labels.len()).filter(|&i| beta[i] != 0.0).collect();
        let (Some(&first), Some(&last)) = (support.iter().min_by_key(|&&i| labels[i]), support.iter().max_by_key(|&&i| labels[i])) else {
            return Err(Error::InvalidInput("state has no support".into()));
        };
        let (lo, hi) = (labels[first], labels[last]);
        let mut dense = vec![0.0; (hi - lo) as usize + 1];
        for &i in &support {
            dense[(labels[i] - lo) as usize] += beta[i];
        }
        let law = circle_law(&dense)?;
        let probabilities: Vec<f64> = dense.iter().map(|a| a * a).collect();
        let n = probabilities.len();
        let symmetric = (0..n).all(|i| (probabilities[i] - probabilities[n - 1 - i]).abs() <= SYMMETRY_TOLERANCE);
        let h = 2.0 * PI / LOG_TABLE_POINTS as f64;
        let log_table = (0..=LOG_TABLE_POINTS)
            .map(|i| law.density(-PI + h * i as f64).max(LOG_FLOOR).ln())
            .collect();
        Ok(Self {
            law,
            probabilities,
            first_label: lo,
            log_table,
            symmetric,
        })
    }

    pub fn law(&self) -> &CosineLaw {
        &self.law
    }

    /// Whether the charge distribution is mirror-symmetric about its mean,
    /// which puts the mean on the half-integer lattice.
    pub fn is_even(&self) -> bool {
        self.symmetric
    }

    pub fn mean_charge(&self) -> f64 {
        self.probabilities
            .iter()
            .enumerate()
            .map(|(i, p)| (self.first_label + i as i64) as f64 * p)
            .sum()
    }

    /// Charge variance `E_φ = Σ (k − mean)² p_k`.
    pub fn energy(&self) -> f64 {
        let mean = self.mean_charge();
        self.probabilities
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let d = (self.first_label + i as i64) as f64 - mean;
                d * d * p
            })
            .sum()
    }

    fn log_density_fast(&self, u: f64) -> f64 {
        let x = (wrap_angle(u) + PI) / (2.0 * PI) * LOG_TABLE_POINTS as f64;
        let i = (x.floor() as usize).min(LOG_TABLE_POINTS - 1);
        let t = x - i as f64;
        self.log_table[i] * (1.0 - t) + self.log_table[i + 1] * t
    }

    fn log_likelihood(&self, samples: &[f64], theta: f64) -> f64 {
        samples
            .iter()
            .map(|&x| self.law.density(wrap_angle(x - theta)).max(LOG_FLOOR).ln())
            .sum()
    }

    /// `d/dθ Σ log p(x_i − θ)`.
    fn score(&self, samples: &[f64], theta: f64) -> f64 {
        samples
            .iter()
            .map(|&x| {
                let u = wrap_angle(x - theta);
                -self.law.density_derivative(u) / self.law.density(u).max(LOG_FLOOR)
            })
            .sum()
    }
}

/// One outcome at true phase `θ`.
pub fn sample_u1_outcome<R: Rng + ?Sized>(law: &U1Law, theta: f64, rng: &mut R) -> f64 {
    wrap_angle(theta + law.law.sample(rng))
}

/// Maximum-likelihood phase: grid scan on tabulated log-densities, then
/// bisection of the exact score around the best grid point.
pub fn mle_u1(samples: &[f64], law: &U1Law) -> Result<MleOutcome<f64>> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("maximum likelihood needs at least one sample".into()));
    }
    let h = 2.0 * PI / U1_SCAN_POINTS as f64;
    let scan: Vec<(f64, f64)> = (1..=U1_SCAN_POINTS)
        .map(|i| {
            let theta = -PI + h * i as f64;
            let value: f64 = samples.iter().map(|&x| law.log_density_fast(x - theta)).sum();
            (theta, value)
        })
        .collect();
    let best = scan.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let worst = scan.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    if best - worst <= 1e-12 * (1.0 + best.abs()) {
        return Ok(MleOutcome { estimate: 0.0, flat: true });
    }
    let tie = 1e-12 * (1.0 + best.abs());
    let start = scan
        .iter()
        .filter(|p| p.1 >= best - tie)
        .map(|p| p.0)
        .min_by(|a, b| a.abs().total_cmp(&b.abs()))
        .unwrap_or(0.0);
    let (mut a, mut b) = (start - h, start + h);
    let estimate = if law.score(samples, a) >= 0.0 && law.score(samples, b) <= 0.0 {
        for _ in 0..U1_REFINEMENTS {
            let mid = 0.5 * (a + b);
            if law.score(samples, mid) > 0.0 {
                a = mid;
            } else {
                b = mid;
            }
        }
        0.5 * (a + b)
    } else {
        [a, start, b]
            .into_iter()
            .max_by(|&x, &y| law.log_likelihood(samples, x).total_cmp(&law.log_likelihood(samples, y)))
            .unwrap_or(start)
    };
    Ok(MleOutcome {
        estimate: wrap_angle(estimate),
        flat: false,
    })
}

/// Fisher information `∫ (p′)²/p` of the outcome law, by the trapezoid rule
/// on a half-step-offset grid of the periodic integrand.
pub fn fisher_u1(law: &U1Law) -> f64 {
    let n = LOG_TABLE_POINTS;
    let h = 2.0 * PI / n as f64;
    let mut total = 0.0;
    for i in 0..n {
        let u = -PI + h * (i as f64 + 0.5);
        let p = law.law.density(u);
        if p > 0.0 {
            let d = law.law.density_derivative(u);
            total += d * d / p;
        }
    }
    total * h
}
