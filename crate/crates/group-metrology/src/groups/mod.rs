//! Minimum-error calculators for the concrete groups, their optimal input
//! states, asymptotic expansions, finite-representation cuts and
//! uncertainty-relation values.
//!
//! Measure conventions, fixed once for every state produced here:
//!
//! | group              | labels              | weight per label            |
//! |--------------------|---------------------|-----------------------------|
//! | ℝ, ℝ₊, interval    | grid points λ       | trapezoid step · 1/√(2π)    |
//! | ℤ (dual U(1))      | grid on [−π, π)     | step / 2π                   |
//! | U(1)               | integers k          | 1                           |
//! | SU(2)              | j = k/2             | 2j + 1                      |
//! | SO(3)              | j = k               | 2j + 1                      |
//! | SO(3) projective   | j = k + 1/2         | 2j + 1                      |
//!
//! The plain coefficients `β_j = √w_j · amplitude_j` are unit vectors in all
//! discrete cases.

mod characters;
pub(crate) mod compact;
mod continuous;
mod cuts;
mod energy;

pub use characters::{su2_character, su2_multiplicity};
pub use compact::{compact_cut_min, finite_group_min_error, finite_group_report, CutTerm};
pub use continuous::{
    heisenberg_composite_risk, heisenberg_kappa, integers_min, real_line_interval_min,
    real_line_kappa, real_line_positive_kappa, CONTINUOUS_GRID_POINTS, GRID_HALF_WIDTH,
};
pub use cuts::{so3_finite_cut_min, so3_tensor_qubit_asymptote, su2_finite_cut_min, u1_finite_cut_min};
pub use energy::{
    energy_kappa, so3_kappa, so3_kappa_small_expansions, su2_kappa, su2_uncertainty_max_p,
    su2_uncertainty_min, u1_kappa, u1_uncertainty_max_p, u1_uncertainty_min, EnergyCurve,
};

use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, Real};

/// Amplitudes over dual-group labels together with the label measure.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction<T> {
    labels: Vec<T>,
    amplitudes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> WaveFunction<T> {
    /// Validated constructor; the weighted squared norm must already be 1.
    pub fn new(labels: Vec<T>, amplitudes: Vec<T>, weights: Vec<T>) -> Result<Self> {
        let state = Self::unchecked(labels, amplitudes, weights)?;
        let n = state.norm_sqr();
        if (n - T::one()).abs() > norm_tolerance::<T>(state.len()) {
            return Err(Error::InvalidInput(format!("state has squared norm {n}, expected 1")));
        }
        Ok(state)
    }

    /// Rescales the amplitudes to unit weighted norm.
    pub fn normalized(labels: Vec<T>, amplitudes: Vec<T>, weights: Vec<T>) -> Result<Self> {
        let mut state = Self::unchecked(labels, amplitudes, weights)?;
        let n = state.norm_sqr();
        if !(n > T::zero()) {
            return Err(Error::InvalidInput("state has zero norm".into()));
        }
        let scale = n.sqrt();
        for a in state.amplitudes.iter_mut() {
            *a = *a / scale;
        }
        Ok(state)
    }

    /// Discrete state from unit-vector coefficients `β` and label weights `d`.
    pub fn from_coefficients(labels: Vec<T>, beta: &[T], weights: Vec<T>) -> Result<Self> {
        if beta.len() != weights.len() {
            return Err(Error::InvalidInput("coefficient and weight lengths differ".into()));
        }
        let amplitudes = beta
            .iter()
            .zip(&weights)
            .map(|(&b, &w)| b / w.sqrt())
            .collect();
        Self::normalized(labels, amplitudes, weights)
    }

    fn unchecked(labels: Vec<T>, amplitudes: Vec<T>, weights: Vec<T>) -> Result<Self> {
        if labels.is_empty() || labels.len() != amplitudes.len() || labels.len() != weights.len() {
            return Err(Error::InvalidInput(
                "labels, amplitudes and weights must be non-empty and of equal length".into(),
            ));
        }
        if labels.iter().chain(&amplitudes).chain(&weights).any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("state has a non-finite entry".into()));
        }
        if weights.iter().any(|&w| !(w > T::zero())) {
            return Err(Error::InvalidInput("label weights must be positive".into()));
        }
        Ok(Self {
            labels,
            amplitudes,
            weights,
        })
    }

    pub fn labels(&self) -> &[T] {
        &self.labels
    }

    pub fn amplitudes(&self) -> &[T] {
        &self.amplitudes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn norm_sqr(&self) -> T {
        self.expectation(|_| T::one())
    }

    /// `Σ w · a² · f(label)`.
    pub fn expectation(&self, f: impl Fn(T) -> T) -> T {
        self.labels
            .iter()
            .zip(&self.amplitudes)
            .zip(&self.weights)
            .fold(T::zero(), |acc, ((&l, &a), &w)| acc + w * a * a * f(l))
    }

    /// `β = √w · amplitude`, the unit-vector coefficients of a discrete state.
    pub fn coefficients(&self) -> Vec<T> {
        self.amplitudes
            .iter()
            .zip(&self.weights)
            .map(|(&a, &w)| w.sqrt() * a)
            .collect()
    }
}

fn norm_tolerance<T: Real>(len: usize) -> T {
    lit::<T>(1e-9).max(lit::<T>(16.0) * T::epsilon() * from_usize(len.max(1)))
}

/// Casimir value `j(j+1)` of a spin label.
pub fn casimir<T: Real>(j: T) -> T {
    j * (j + T::one())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupTag {
    RealLine,
    RealLinePositive,
    RealInterval,
    Integers,
    U1,
    Su2,
    So3,
    So3Projective,
    Heisenberg,
    Finite,
    Compact,
}

impl std::fmt::Display for GroupTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::RealLine => "real-line",
            Self::RealLinePositive => "real-line-positive",
            Self::RealInterval => "real-interval",
            Self::Integers => "integers",
            Self::U1 => "u1",
            Self::Su2 => "su2",
            Self::So3 => "so3",
            Self::So3Projective => "so3-projective",
            Self::Heisenberg => "heisenberg",
            Self::Finite => "finite",
            Self::Compact => "compact",
        })
    }
}

/// Resource restriction a minimum was computed under.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Constraint<T> {
    Energy(T),
    Cut(usize),
    Interval(T),
    Unconstrained,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ClosedForm,
    LegendreMathieu,
    FiniteCut,
    Expansion,
}

/// Minimum risk together with how it was obtained and the state attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct MinErrorReport<T> {
    pub group: GroupTag,
    pub constraint: Constraint<T>,
    pub kappa: T,
    pub s_e: Option<T>,
    pub optimal_state: Option<WaveFunction<T>>,
    pub method: Method,
    /// Energy of the optimal state, when the calculator knows it.
    pub state_energy: Option<T>,
    /// Variance of each Gaussian outcome coordinate (Heisenberg only).
    pub outcome_variance: Option<T>,
}

impl<T: Real> MinErrorReport<T> {
    pub(crate) fn new(group: GroupTag, constraint: Constraint<T>, kappa: T, method: Method) -> Self {
        Self {
            group,
            constraint,
            kappa,
            s_e: None,
            optimal_state: None,
            method,
            state_energy: None,
            outcome_variance: None,
        }
    }

    pub(crate) fn with_state(mut self, state: WaveFunction<T>) -> Self {
        self.optimal_state = Some(state);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wave_function_validation() {
        assert!(WaveFunction::new(vec![0.0], vec![1.0], vec![1.0]).is_ok());
        assert!(WaveFunction::new(vec![0.0], vec![0.5], vec![1.0]).is_err());
        assert!(WaveFunction::new(vec![0.0], vec![1.0], vec![0.0]).is_err());
        assert!(WaveFunction::new(vec![0.0, 1.0], vec![1.0], vec![1.0]).is_err());
        assert!(WaveFunction::<f64>::normalized(vec![0.0], vec![0.0], vec![1.0]).is_err());
    }

    #[test]
    fn coefficients_round_trip() {
        let s = WaveFunction::from_coefficients(vec![0.0f64, 0.5], &[0.6, 0.8], vec![1.0, 2.0]).unwrap();
        let beta = s.coefficients();
        assert!((beta[0] - 0.6).abs() < 1e-15 && (beta[1] - 0.8).abs() < 1e-15);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
        assert!((s.expectation(casimir) - 0.64 * 0.75).abs() < 1e-15);
    }
}
