use super::{casimir, Constraint, GroupTag, MinErrorReport, Method, WaveFunction};
use crate::error::{Error, Result};
use crate::legendre::{kappa_from_gamma, GammaCurve};
use crate::mathieu::{characteristic_coefficients, characteristic_value, MathieuOrder, MAX_ABS_Q};
use crate::scalar::{from_usize, lit, Real};

/// Largest multiplier searched; the maximizer grows like `E^{-1/2}` as `E → 0`.
const S_MAX: f64 = 1e12;

/// The four energy-constrained problems solved through a Mathieu ground state.
///
/// Each has `κ(E) = max_s γ(s) − s(E + shift)` with
/// `γ(s) = s · m(q_scale / s) / divisor + 1`, where `m` is a characteristic
/// value, and an optimal state read off the Fourier coefficients of a
/// Mathieu function at the negative parameter `−state_q_scale / s_E`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnergyCurve {
    U1,
    Su2,
    /// SO(3) with integer spins.
    So3Plus,
    /// Projective SO(3) with half-integer spins.
    So3Minus,
}

impl EnergyCurve {
    pub const ALL: [EnergyCurve; 4] = [Self::U1, Self::Su2, Self::So3Plus, Self::So3Minus];

    pub fn group(self) -> GroupTag {
        match self {
            Self::U1 => GroupTag::U1,
            Self::Su2 => GroupTag::Su2,
            Self::So3Plus => GroupTag::So3,
            Self::So3Minus => GroupTag::So3Projective,
        }
    }

    fn gamma_order(self) -> MathieuOrder {
        match self {
            Self::U1 => MathieuOrder::A0,
            Self::Su2 | Self::So3Minus => MathieuOrder::B2,
            Self::So3Plus => MathieuOrder::A1,
        }
    }

    fn state_order(self) -> MathieuOrder {
        match self {
            Self::U1 => MathieuOrder::A0,
            Self::Su2 | Self::So3Minus => MathieuOrder::B2,
            Self::So3Plus => MathieuOrder::B1,
        }
    }

    fn q_scale<T: Real>(self) -> T {
        lit(if self == Self::Su2 { 8.0 } else { 2.0 })
    }

    fn divisor<T: Real>(self) -> T {
        lit(if self == Self::Su2 { 16.0 } else { 4.0 })
    }

    /// Constant added to `E` inside the Legendre transform.
    pub fn energy_shift<T: Real>(self) -> T {
        lit(if self == Self::U1 { 0.0 } else { 0.25 })
    }

    /// Smallest energy any state of the sector has.
    pub fn min_energy<T: Real>(self) -> T {
        lit(if self == Self::So3Minus { 0.75 } else { 0.0 })
    }

    /// `κ` at the minimum energy.
    pub fn anchor_kappa<T: Real>(self) -> T {
        lit(if self == Self::So3Plus { 1.5 } else { 1.0 })
    }

    /// Spin (or integer) label of the `i`-th Mathieu coefficient.
    fn label<T: Real>(self, i: usize) -> T {
        let i: T = from_usize(i);
        match self {
            Self::U1 | Self::So3Plus => i,
            Self::Su2 => i / lit(2.0),
            Self::So3Minus => i + lit(0.5),
        }
    }

    /// Hamiltonian eigenvalue at a label.
    pub fn hamiltonian<T: Real>(self, label: T) -> T {
        match self {
            Self::U1 => label * label,
            _ => casimir(label),
        }
    }

    /// Concave curve `γ(s)` on `[q_scale / 10⁶, 10¹²]`.
    pub fn gamma<T: Real>(self) -> Result<GammaCurve<'static, T>> {
        let q_scale: T = self.q_scale();
        let divisor: T = self.divisor();
        let order = self.gamma_order();
        GammaCurve::new(
            move |s: T| {
                let m = characteristic_value(order, q_scale / s)?.value;
                Ok(s * m / divisor + T::one())
            },
            q_scale / lit(MAX_ABS_Q),
            lit(S_MAX),
        )
    }

    /// Leading large-`E` behavior.
    pub fn large_energy_expansion<T: Real>(self, energy: T) -> T {
        let e = energy;
        match self {
            Self::U1 => T::one() / (lit::<T>(8.0) * e) - T::one() / (lit::<T>(128.0) * e * e),
            Self::Su2 => lit::<T>(9.0) / (lit::<T>(32.0) * e) - lit::<T>(189.0) / (lit::<T>(2048.0) * e * e),
            Self::So3Plus | Self::So3Minus => {
                lit::<T>(9.0) / (lit::<T>(8.0) * e) - lit::<T>(81.0) / (lit::<T>(128.0) * e * e)
            }
        }
    }

    /// Expansion around the minimum energy, in powers of `√(E − E_min)`.
    pub fn small_energy_expansion<T: Real>(self, energy: T) -> T {
        let x = (energy - self.min_energy()).max(T::zero());
        let r = x.sqrt();
        let two: T = lit(2.0);
        let three: T = lit(3.0);
        match self {
            Self::U1 => T::one() - (two * x).sqrt() + lit::<T>(7.0) * two.sqrt() / lit(16.0) * x * r,
            Self::Su2 => {
                T::one() - two / three.sqrt() * r + lit::<T>(5.0) / (lit::<T>(6.0) * three.sqrt()) * x * r
            }
            Self::So3Plus => lit::<T>(1.5) - r / two.sqrt() - x / lit(4.0),
            Self::So3Minus => {
                T::one() - r / three.sqrt() + lit::<T>(5.0) / (lit::<T>(48.0) * three.sqrt()) * x * r
            }
        }
    }

    /// Optimal state for the multiplier `s`.
    pub fn optimal_state<T: Real>(self, s: T) -> Result<WaveFunction<T>> {
        if !(s > T::zero()) || !s.is_finite() {
            return Err(Error::InvalidInput(format!("multiplier {s} must be positive")));
        }
        let q = -self.q_scale::<T>() / s;
        let (_, coefficients) = characteristic_coefficients(self.state_order(), q)?;
        // At negative q the ground vector is entrywise nonnegative; abs() only
        // removes roundoff-level sign noise.
        let beta: Vec<T> = coefficients.iter().map(|c| c.abs()).collect();
        self.state_from_coefficients(&beta)
    }

    /// State whose `i`-th Mathieu coefficient is `beta[i]`.
    pub fn state_from_coefficients<T: Real>(self, beta: &[T]) -> Result<WaveFunction<T>> {
        if beta.is_empty() {
            return Err(Error::InvalidInput("empty coefficient vector".into()));
        }
        if self == Self::U1 {
            let k = beta.len() - 1;
            let root2 = lit::<T>(2.0).sqrt();
            let mut labels = Vec::with_capacity(2 * k + 1);
            let mut amplitudes = Vec::with_capacity(2 * k + 1);
            for i in (1..=k).rev() {
                labels.push(-from_usize::<T>(i));
                amplitudes.push(beta[i] / root2);
            }
            for (i, &b) in beta.iter().enumerate() {
                labels.push(from_usize(i));
                amplitudes.push(if i == 0 { b } else { b / root2 });
            }
            let weights = vec![T::one(); labels.len()];
            return WaveFunction::normalized(labels, amplitudes, weights);
        }
        let labels: Vec<T> = (0..beta.len()).map(|i| self.label(i)).collect();
        let weights = labels.iter().map(|&j| j + j + T::one()).collect();
        WaveFunction::from_coefficients(labels, beta, weights)
    }

    /// State attaining the anchor value at the minimum energy.
    pub fn anchor_state<T: Real>(self) -> Result<WaveFunction<T>> {
        self.state_from_coefficients(&[T::one()])
    }

    /// `⟨H⟩` of a state on this curve's labels.
    pub fn energy_of<T: Real>(self, state: &WaveFunction<T>) -> T {
        state.expectation(|l| self.hamiltonian(l))
    }

    /// Minimum risk at energy `E`, with its maximizer and optimal state.
    pub fn kappa<T: Real>(self, energy: T) -> Result<MinErrorReport<T>> {
        let e_min = self.min_energy::<T>();
        if !energy.is_finite() || energy < e_min {
            return Err(Error::InfeasibleEnergy {
                energy: crate::scalar::to_f64(energy),
                minimum: crate::scalar::to_f64(e_min),
            });
        }
        let report = |kappa: T| MinErrorReport::new(self.group(), Constraint::Energy(energy), kappa, Method::LegendreMathieu);
        if energy == e_min {
            let state = self.anchor_state()?;
            let mut r = report(self.anchor_kappa()).with_state(state);
            r.state_energy = Some(e_min);
            return Ok(r);
        }
        let gamma = self.gamma::<T>()?;
        let result = kappa_from_gamma(&gamma, energy + self.energy_shift())?;
        let state = self.optimal_state(result.s_e)?;
        let mut r = report(result.kappa);
        r.s_e = Some(result.s_e);
        r.state_energy = Some(self.energy_of(&state));
        Ok(r.with_state(state))
    }
}

impl std::fmt::Display for EnergyCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::U1 => "u1",
            Self::Su2 => "su2",
            Self::So3Plus => "so3-plus",
            Self::So3Minus => "so3-minus",
        })
    }
}

/// Same as [`EnergyCurve::kappa`].
pub fn energy_kappa<T: Real>(curve: EnergyCurve, energy: T) -> Result<MinErrorReport<T>> {
    curve.kappa(energy)
}

pub fn u1_kappa<T: Real>(energy: T) -> Result<MinErrorReport<T>> {
    EnergyCurve::U1.kappa(energy)
}

pub fn su2_kappa<T: Real>(energy: T) -> Result<MinErrorReport<T>> {
    EnergyCurve::Su2.kappa(energy)
}

/// `plus` selects integer spins, otherwise half-integer spins (`E ≥ 3/4`).
pub fn so3_kappa<T: Real>(energy: T, plus: bool) -> Result<MinErrorReport<T>> {
    if plus {
        EnergyCurve::So3Plus.kappa(energy)
    } else {
        EnergyCurve::So3Minus.kappa(energy)
    }
}

pub fn so3_kappa_small_expansions<T: Real>(energy: T, plus: bool) -> T {
    if plus {
        EnergyCurve::So3Plus.small_energy_expansion(energy)
    } else {
        EnergyCurve::So3Minus.small_energy_expansion(energy)
    }
}

fn uncertainty_from_kappa<T: Real>(kappa: T) -> T {
    let gap = T::one() - kappa;
    T::one() - gap * gap
}

/// Minimum of `1 − ⟨cos⟩²` at energy `E`.
pub fn u1_uncertainty_min<T: Real>(energy: T) -> Result<T> {
    Ok(uncertainty_from_kappa(u1_kappa(energy)?.kappa))
}

pub fn su2_uncertainty_min<T: Real>(energy: T) -> Result<T> {
    Ok(uncertainty_from_kappa(su2_kappa(energy)?.kappa))
}

pub fn u1_uncertainty_max_p<T: Real>(energy: T) -> Result<T> {
    if !(energy >= T::zero()) || !energy.is_finite() {
        return Err(Error::InvalidInput(format!("energy {energy} must be finite and ≥ 0")));
    }
    let n = energy.floor();
    let angle = T::PI() / (n + n + lit(2.0));
    Ok(angle.sin().powi(2))
}

pub fn su2_uncertainty_max_p<T: Real>(energy: T) -> Result<T> {
    if !(energy >= T::zero()) || !energy.is_finite() {
        return Err(Error::InvalidInput(format!("energy {energy} must be finite and ≥ 0")));
    }
    let half: T = lit(0.5);
    let n = (lit::<T>(2.0) * ((energy * energy + half * half).sqrt() - half)).floor();
    let angle = T::PI() / (n + lit(2.0));
    Ok(angle.sin().powi(2))
}
