use super::{Constraint, GroupTag, MinErrorReport, Method, WaveFunction};
use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, Real};

/// Samples used for every continuous-label state.
pub const CONTINUOUS_GRID_POINTS: usize = 1 << 12;
/// Grids extend to `GRID_HALF_WIDTH · √E`.
pub const GRID_HALF_WIDTH: f64 = 8.0;

fn positive_energy<T: Real>(energy: T) -> Result<()> {
    if energy == T::zero() {
        return Err(Error::Unbounded("zero energy leaves the risk unbounded".into()));
    }
    if !(energy > T::zero()) || !energy.is_finite() {
        return Err(Error::InvalidInput(format!("energy {energy} must be finite and > 0")));
    }
    Ok(())
}

/// Uniform grid on `[lo, hi]` with trapezoid weights times `scale`.
fn trapezoid_grid<T: Real>(lo: T, hi: T, scale: T) -> (Vec<T>, Vec<T>) {
    let n = CONTINUOUS_GRID_POINTS;
    let h = (hi - lo) / from_usize(n - 1);
    let labels: Vec<T> = (0..n).map(|i| lo + h * from_usize(i)).collect();
    let weights = (0..n)
        .map(|i| {
            let w = if i == 0 || i == n - 1 { h / lit(2.0) } else { h };
            w * scale
        })
        .collect();
    (labels, weights)
}

fn inv_sqrt_two_pi<T: Real>() -> T {
    T::one() / (T::PI() + T::PI()).sqrt()
}

/// Translations of ℝ under `⟨λ²⟩ ≤ E`: `κ = 1/(4E)` with a Gaussian state.
pub fn real_line_kappa<T: Real>(energy: T) -> Result<MinErrorReport<T>> {
    positive_energy(energy)?;
    let half_width = lit::<T>(GRID_HALF_WIDTH) * energy.sqrt();
    let (labels, weights) = trapezoid_grid(-half_width, half_width, inv_sqrt_two_pi());
    let scale = energy.powf(lit(-0.25));
    let amplitudes = labels
        .iter()
        .map(|&l| scale * (-l * l / (lit::<T>(4.0) * energy)).exp())
        .collect();
    let state = WaveFunction::new(labels, amplitudes, weights)?;
    let mut report = MinErrorReport::new(
        GroupTag::RealLine,
        Constraint::Energy(energy),
        T::one() / (lit::<T>(4.0) * energy),
        Method::ClosedForm,
    );
    report.state_energy = Some(state.expectation(|l| l * l));
    Ok(report.with_state(state))
}

/// Translations restricted to nonnegative generators: `κ = 9/(4E)`.
pub fn real_line_positive_kappa<T: Real>(energy: T) -> Result<MinErrorReport<T>> {
    positive_energy(energy)?;
    let hi = lit::<T>(GRID_HALF_WIDTH) * energy.sqrt();
    let (labels, weights) = trapezoid_grid(T::zero(), hi, inv_sqrt_two_pi());
    let three: T = lit(3.0);
    let scale = lit::<T>(2.0).sqrt() * (three / energy).powf(lit(0.75));
    let amplitudes = labels
        .iter()
        .map(|&l| scale * l * (-three * l * l / (lit::<T>(4.0) * energy)).exp())
        .collect();
    let state = WaveFunction::new(labels, amplitudes, weights)?;
    let mut report = MinErrorReport::new(
        GroupTag::RealLinePositive,
        Constraint::Energy(energy),
        lit::<T>(9.0) / (lit::<T>(4.0) * energy),
        Method::ClosedForm,
    );
    report.state_energy = Some(state.expectation(|l| l * l));
    Ok(report.with_state(state))
}

/// Generator supported on `[−L, L]`: `κ = π²/(4L²)` with a half-sine state.
pub fn real_line_interval_min<T: Real>(half_length: T) -> Result<MinErrorReport<T>> {
    if !(half_length > T::zero()) || !half_length.is_finite() {
        return Err(Error::InvalidInput(format!("interval half-length {half_length} must be positive")));
    }
    let l = half_length;
    let (labels, weights) = trapezoid_grid(-l, l, inv_sqrt_two_pi());
    let scale = (T::PI() + T::PI()).powf(lit(0.25)) / l.sqrt();
    let amplitudes = labels
        .iter()
        .map(|&x| scale * (T::PI() * (T::one() + x / l) / lit(2.0)).sin())
        .collect();
    let state = WaveFunction::new(labels, amplitudes, weights)?;
    let pi2 = T::PI() * T::PI();
    let mut report = MinErrorReport::new(
        GroupTag::RealInterval,
        Constraint::Interval(l),
        pi2 / (lit::<T>(4.0) * l * l),
        Method::ClosedForm,
    );
    report.state_energy = Some((T::one() / lit(3.0) - lit::<T>(2.0) / pi2) * l * l);
    Ok(report.with_state(state))
}

/// Integer shifts with the circle as dual: perfect discrimination with the
/// flat state on a grid of `[−π, π)`.
pub fn integers_min<T: Real>() -> Result<MinErrorReport<T>> {
    let n = CONTINUOUS_GRID_POINTS;
    let h = (T::PI() + T::PI()) / from_usize(n);
    let labels: Vec<T> = (0..n).map(|i| -T::PI() + h * from_usize(i)).collect();
    let weights = vec![T::one() / from_usize(n); n];
    let state = WaveFunction::new(labels, vec![T::one(); n], weights)?;
    let report = MinErrorReport::new(GroupTag::Integers, Constraint::Unconstrained, T::zero(), Method::ClosedForm);
    Ok(report.with_state(state))
}

/// Phase-space displacements with `⟨Q² + P²⟩ ≤ E`: `κ = 1/(2E)`, outcome
/// coordinates Gaussian with variance `1/(8E)` each.
pub fn heisenberg_kappa<T: Real>(energy: T) -> Result<MinErrorReport<T>> {
    positive_energy(energy)?;
    let mut report = MinErrorReport::new(
        GroupTag::Heisenberg,
        Constraint::Energy(energy),
        T::one() / (energy + energy),
        Method::ClosedForm,
    );
    report.outcome_variance = Some(T::one() / (lit::<T>(8.0) * energy));
    report.state_energy = Some(energy);
    Ok(report)
}

/// Risk of combining the optimal estimators of two systems with energies
/// `E₁` and `E₂` by inverse-variance weighting of their outcomes.
pub fn heisenberg_composite_risk<T: Real>(e1: T, e2: T) -> Result<T> {
    let v1 = heisenberg_kappa(e1)?.outcome_variance.unwrap_or_else(T::zero);
    let v2 = heisenberg_kappa(e2)?.outcome_variance.unwrap_or_else(T::zero);
    let combined = v1 * v2 / (v1 + v2);
    Ok(lit::<T>(4.0) * combined)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_values() {
        assert_eq!(real_line_kappa(1.0f64).unwrap().kappa, 0.25);
        assert_eq!(real_line_kappa(0.25f64).unwrap().kappa, 1.0);
        assert_eq!(real_line_positive_kappa(1.0f64).unwrap().kappa, 2.25);
        assert_eq!(real_line_positive_kappa(9.0f64).unwrap().kappa, 0.25);
        assert!((real_line_interval_min(std::f64::consts::PI).unwrap().kappa - 0.25).abs() < 1e-15);
        let r = real_line_interval_min(1.0f64).unwrap();
        assert!((r.kappa - 2.4674011002723395).abs() < 1e-12);
        assert!((r.state_energy.unwrap() - 0.130_690_966_048_657_8).abs() < 1e-12);
        assert_eq!(heisenberg_kappa(1.0f64).unwrap().kappa, 0.5);
        assert_eq!(heisenberg_kappa(2.0f64).unwrap().kappa, 0.25);
        assert_eq!(integers_min::<f64>().unwrap().kappa, 0.0);
    }

    #[test]
    fn zero_energy_is_unbounded() {
        assert!(matches!(real_line_kappa(0.0f64), Err(Error::Unbounded(_))));
        assert!(matches!(real_line_positive_kappa(0.0f64), Err(Error::Unbounded(_))));
        assert!(matches!(heisenberg_kappa(0.0f64), Err(Error::Unbounded(_))));
        assert!(real_line_interval_min(0.0f64).is_err());
    }

    #[test]
    fn composite_matches_pooled_energy() {
        let c = heisenberg_composite_risk(0.7f64, 2.3).unwrap();
        assert!((c - heisenberg_kappa(3.0f64).unwrap().kappa).abs() < 1e-15);
    }

    #[test]
    fn analytic_states_have_unit_norm_and_budget_energy() {
        for e in [0.5f64, 1.0, 7.0] {
            let r = real_line_kappa(e).unwrap();
            assert!((r.state_energy.unwrap() - e).abs() < 1e-6);
            let r = real_line_positive_kappa(e).unwrap();
            assert!((r.state_energy.unwrap() - e).abs() < 1e-6);
            let s = r.optimal_state.unwrap();
            assert!((s.norm_sqr() - 1.0).abs() < 1e-8);
        }
        let s = real_line_interval_min(2.0f64).unwrap().optimal_state.unwrap();
        let quadrature = s.expectation(|l| l * l);
        assert!((quadrature - (1.0 / 3.0 - 2.0 / std::f64::consts::PI.powi(2)) * 4.0).abs() < 1e-6);
    }
}
