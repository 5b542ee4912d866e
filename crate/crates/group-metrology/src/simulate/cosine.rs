use std::f64::consts::PI;

use rand::Rng;

use crate::error::{Error, Result};

/// Points of the inverse-CDF table.
pub const CDF_GRID_POINTS: usize = 1 << 14;
/// Frequencies at or above half the table size are rejected.
pub const MAX_BANDWIDTH: usize = CDF_GRID_POINTS / 2;

const NEWTON_STEPS: usize = 40;

/// Density `ρ(u) = Σ_c a_c cos(c u)` on `[lo, hi]`, with `lo` either `−π` or
/// `0` so that every `sin(c · lo)` vanishes.
#[derive(Debug, Clone)]
pub struct CosineLaw {
    lo: f64,
    hi: f64,
    coefficients: Vec<f64>,
    grid: Vec<f64>,
    cdf: Vec<f64>,
}

impl CosineLaw {
    pub fn new(lo: f64, hi: f64, coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() || coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("cosine coefficients must be finite and non-empty".into()));
        }
        if !(lo < hi) {
            return Err(Error::InvalidInput(format!("empty support [{lo}, {hi}]")));
        }
        let bandwidth = coefficients.len() - 1;
        if bandwidth >= MAX_BANDWIDTH {
            return Err(Error::Resolution(format!(
                "bandwidth {bandwidth} exceeds the {CDF_GRID_POINTS}-point sampling grid"
            )));
        }
        let mut law = Self {
            lo,
            hi,
            coefficients,
            grid: Vec::new(),
            cdf: Vec::new(),
        };
        let h = (hi - lo) / CDF_GRID_POINTS as f64;
        law.grid = (0..=CDF_GRID_POINTS).map(|i| lo + h * i as f64).collect();
        law.grid[CDF_GRID_POINTS] = hi;
        law.cdf = law.grid.iter().map(|&u| law.cdf_at(u)).collect();
        // Monotone clean-up of roundoff so the table can be searched.
        for i in 1..law.cdf.len() {
            if law.cdf[i] < law.cdf[i - 1] {
                law.cdf[i] = law.cdf[i - 1];
            }
        }
        Ok(law)
    }

    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn density(&self, u: f64) -> f64 {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(c, &a)| a * (c as f64 * u).cos())
            .sum()
    }

    pub fn density_derivative(&self, u: f64) -> f64 {
        self.coefficients
            .iter()
            .enumerate()
            .skip(1)
            .map(|(c, &a)| -a * c as f64 * (c as f64 * u).sin())
            .sum()
    }

    /// Exact CDF.
    pub fn cdf_at(&self, u: f64) -> f64 {
        let mut total = self.coefficients[0] * (u - self.lo);
        for (c, &a) in self.coefficients.iter().enumerate().skip(1) {
            let c = c as f64;
            total += a * ((c * u).sin() - (c * self.lo).sin()) / c;
        }
        total
    }

    /// Mass on the whole support; 1 for a valid law.
    pub fn total_mass(&self) -> f64 {
        self.cdf_at(self.hi)
    }

    /// Table lookup with linear interpolation, then safeguarded Newton steps
    /// on the exact CDF inside the bracketing cell.
    pub fn quantile(&self, p: f64) -> f64 {
        let p = p.clamp(0.0, 1.0);
        let i = self.cdf.partition_point(|&f| f <= p).clamp(1, self.grid.len() - 1);
        let (mut a, mut b) = (self.grid[i - 1], self.grid[i]);
        let (fa, fb) = (self.cdf[i - 1], self.cdf[i]);
        let mut u = if fb > fa { a + (b - a) * (p - fa) / (fb - fa) } else { a };
        for _ in 0..NEWTON_STEPS {
            let r = self.cdf_at(u) - p;
            if r.abs() <= 4.0 * f64::EPSILON {
                break;
            }
            if r > 0.0 {
                b = u;
            } else {
                a = u;
            }
            let d = self.density(u);
            let step = if d > 0.0 { u - r / d } else { f64::NAN };
            u = if step > a && step < b { step } else { 0.5 * (a + b) };
            if b - a <= 4.0 * f64::EPSILON * (1.0 + u.abs()) {
                break;
            }
        }
        u
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile(rng.random::<f64>())
    }
}

/// Density of `|Σ_k φ_k e^{−iku}|² / 2π` on `[−π, π]` for real amplitudes
/// on consecutive integer labels.
pub fn circle_law(amplitudes: &[f64]) -> Result<CosineLaw> {
    let n = amplitudes.len();
    let mut coefficients = vec![0.0; n];
    for (d, slot) in coefficients.iter_mut().enumerate() {
        let overlap: f64 = (0..n - d).map(|k| amplitudes[k] * amplitudes[k + d]).sum();
        *slot = if d == 0 { overlap / (2.0 * PI) } else { overlap / PI };
    }
    CosineLaw::new(-PI, PI, coefficients)
}

/// Half-angle density `(2/π) (Σ_k β_k sin((k+1)u))²` on `[0, π]`: the
/// rotation-angle law `θ = 2u` of a spin superposition.
pub fn half_angle_law(beta: &[f64]) -> Result<CosineLaw> {
    let n = beta.len();
    let mut coefficients = vec![0.0; 2 * n + 1];
    for k in 0..n {
        for l in 0..n {
            let w = 0.5 * beta[k] * beta[l];
            coefficients[k.abs_diff(l)] += w;
            coefficients[k + l + 2] -= w;
        }
    }
    for c in coefficients.iter_mut() {
        *c *= 2.0 / PI;
    }
    while coefficients.len() > 1 && coefficients.last() == Some(&0.0) {
        coefficients.pop();
    }
    CosineLaw::new(0.0, PI, coefficients)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn laws_integrate_to_one() {
        let s = 0.5f64.sqrt();
        let u1 = circle_law(&[s, s]).unwrap();
        assert!((u1.total_mass() - 1.0).abs() < 1e-10);
        let su2 = half_angle_law(&[0.6, 0.0, 0.8]).unwrap();
        assert!((su2.total_mass() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn two_level_density_matches_closed_form() {
        let s = 0.5f64.sqrt();
        let law = circle_law(&[s, s]).unwrap();
        for i in 0..20 {
            let u = -3.0 + 0.3 * i as f64;
            assert!((law.density(u) - (1.0 + u.cos()) / (2.0 * PI)).abs() < 1e-14);
        }
    }

    #[test]
    fn bell_half_angle_density() {
        // β at k = 1 gives (2/π) sin²(2u) = (8/π) cos²u sin²u.
        let law = half_angle_law(&[0.0, 1.0]).unwrap();
        for i in 0..20 {
            let u = 0.15 * i as f64;
            let expected = 8.0 / PI * (u.cos() * u.sin()).powi(2);
            assert!((law.density(u) - expected).abs() < 1e-13);
        }
    }

    #[test]
    fn quantile_inverts_cdf() {
        let law = half_angle_law(&[0.5, 0.5, 0.5, 0.5]).unwrap();
        for i in 1..100 {
            let p = i as f64 / 100.0;
            assert!((law.cdf_at(law.quantile(p)) - p).abs() < 1e-12);
        }
    }

    #[test]
    fn flat_state_samples_are_uniform() {
        let law = circle_law(&[1.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut draws: Vec<f64> = (0..10_000).map(|_| law.sample(&mut rng)).collect();
        draws.sort_by(f64::total_cmp);
        let n = draws.len() as f64;
        let ks = draws
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = (x + PI) / (2.0 * PI);
                (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
            })
            .fold(0.0, f64::max);
        assert!(ks <= 0.02, "ks = {ks}");
    }

    #[test]
    fn bandwidth_limit() {
        assert!(matches!(
            CosineLaw::new(-PI, PI, vec![0.0; MAX_BANDWIDTH + 1]),
            Err(Error::Resolution(_))
        ));
    }
}
