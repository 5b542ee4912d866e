use super::{Constraint, GroupTag, MinErrorReport, Method, WaveFunction};
use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, Real};
use crate::spectra::odd_sector_spectrum;

fn cut_report<T: Real>(group: GroupTag, n: usize, kappa: T, state: WaveFunction<T>) -> MinErrorReport<T> {
    MinErrorReport::new(group, Constraint::Cut(n), kappa, Method::FiniteCut).with_state(state)
}

/// U(1) restricted to charges `−n..=n`: `κ = 1 − cos(π/(2n+2))`.
pub fn u1_finite_cut_min<T: Real>(n: usize) -> Result<MinErrorReport<T>> {
    let m = 2 * n + 2;
    let angle = T::PI() / from_usize(m);
    let labels: Vec<T> = (0..=2 * n).map(|i| from_usize::<T>(i) - from_usize::<T>(n)).collect();
    let amplitudes = (0..=2 * n)
        .map(|i| (T::PI() * from_usize::<T>(i + 1) / from_usize(m)).sin())
        .collect();
    let state = WaveFunction::normalized(labels, amplitudes, vec![T::one(); 2 * n + 1])?;
    Ok(cut_report(GroupTag::U1, n, T::one() - angle.cos(), state))
}

/// Ladder state with `β_i ∝ sin((i+1)π/(n+2))` on given labels.
fn sine_ladder<T: Real>(n: usize, labels: Vec<T>) -> Result<WaveFunction<T>> {
    let beta: Vec<T> = (0..=n)
        .map(|i| (T::PI() * from_usize::<T>(i + 1) / from_usize(n + 2)).sin())
        .collect();
    let weights = labels.iter().map(|&j| j + j + T::one()).collect();
    WaveFunction::from_coefficients(labels, &beta, weights)
}

/// SU(2) restricted to spins `0, 1/2, …, n/2`: `κ = 1 − cos(π/(n+2))`.
pub fn su2_finite_cut_min<T: Real>(n: usize) -> Result<MinErrorReport<T>> {
    let labels = (0..=n).map(|k| from_usize::<T>(k) / lit(2.0)).collect();
    let state = sine_ladder(n, labels)?;
    let kappa = T::one() - (T::PI() / from_usize(n + 2)).cos();
    Ok(cut_report(GroupTag::Su2, n, kappa, state))
}

/// SO(3) restricted to spins up to `n` (integer sector, `1 − cos(2π/(2n+3))`)
/// or up to `n + 1/2` (half-integer sector, `1 − cos(π/(n+2))`).
pub fn so3_finite_cut_min<T: Real>(n: usize, integer_sector: bool) -> Result<MinErrorReport<T>> {
    if !integer_sector {
        let labels = (0..=n).map(|i| from_usize::<T>(i) + lit(0.5)).collect();
        let state = sine_ladder(n, labels)?;
        let kappa = T::one() - (T::PI() / from_usize(n + 2)).cos();
        return Ok(cut_report(GroupTag::So3Projective, n, kappa, state));
    }
    let spectrum = odd_sector_spectrum::<T>(n + 1)?;
    let (top, vector) = spectrum
        .top()
        .ok_or_else(|| Error::Convergence("empty odd-sector spectrum".into()))?;
    let labels: Vec<T> = (0..=n).map(from_usize).collect();
    let weights = labels.iter().map(|&j| j + j + T::one()).collect();
    let beta: Vec<T> = vector.iter().map(|v| v.abs()).collect();
    let state = WaveFunction::from_coefficients(labels, &beta, weights)?;
    Ok(cut_report(GroupTag::So3, n, T::one() - top / lit(2.0), state))
}

/// `n² ·` the SO(3) cut minimum matching `n` qubits: the integer sector with
/// `m = n/2` for even `n`, the half-integer sector with `m = (n−1)/2` for odd.
/// Tends to `2π²`.
pub fn so3_tensor_qubit_asymptote<T: Real>(n: usize) -> Result<T> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("qubit count {n} must be at least 2")));
    }
    let kappa = so3_finite_cut_min::<T>(n / 2, n.is_multiple_of(2))?.kappa;
    let nf: T = from_usize(n);
    Ok(nf * nf * kappa)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::path_matrix_spectrum;
    use std::f64::consts::PI;

    /// Largest path-matrix eigenvalue, for cross-checks against the cut formulas.
    fn path_top<T: Real>(m: usize) -> Result<T> {
        path_matrix_spectrum::<T>(m)?
            .top()
            .map(|(v, _)| v)
            .ok_or_else(|| Error::Convergence("empty path spectrum".into()))
    }

    #[test]
    fn cut_values() {
        assert!((u1_finite_cut_min::<f64>(0).unwrap().kappa - 1.0).abs() < 1e-15);
        assert!((u1_finite_cut_min::<f64>(1).unwrap().kappa - 0.2928932188134524).abs() < 1e-15);
        assert!((su2_finite_cut_min::<f64>(0).unwrap().kappa - 1.0).abs() < 1e-15);
        assert!((su2_finite_cut_min::<f64>(1).unwrap().kappa - 0.5).abs() < 1e-15);
        assert!((so3_finite_cut_min::<f64>(0, true).unwrap().kappa - 1.5).abs() < 1e-15);
        assert!((so3_finite_cut_min::<f64>(0, false).unwrap().kappa - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cuts_agree_with_path_spectra() {
        let u1 = u1_finite_cut_min::<f64>(10).unwrap().kappa;
        assert!((u1 - (1.0 - path_top::<f64>(21).unwrap() / 2.0)).abs() < 1e-12);
        let su2 = su2_finite_cut_min::<f64>(12).unwrap().kappa;
        assert!((su2 - (1.0 - path_top::<f64>(13).unwrap() / 2.0)).abs() < 1e-12);
        let so3 = so3_finite_cut_min::<f64>(7, true).unwrap().kappa;
        assert!((so3 - (1.0 - (2.0 * PI / 17.0).cos())).abs() < 1e-12);
    }

    #[test]
    fn cut_states_are_nonnegative_and_meet_the_risk() {
        // Integer-sector ladder risk: 3/2 − Σ β_i β_{i+1} − (1 − β_0²)/2.
        let state = so3_finite_cut_min::<f64>(5, true).unwrap();
        let beta = state.optimal_state.as_ref().unwrap().coefficients();
        assert!(beta.iter().all(|&b| b >= 0.0));
        let overlap: f64 = beta.windows(2).map(|w| w[0] * w[1]).sum();
        let risk = 1.5 - overlap - 0.5 * (1.0 - beta[0] * beta[0]);
        assert!((risk - state.kappa).abs() < 1e-12);
        let su2 = su2_finite_cut_min::<f64>(5).unwrap();
        let beta = su2.optimal_state.unwrap().coefficients();
        let overlap: f64 = beta.windows(2).map(|w| w[0] * w[1]).sum();
        assert!((1.0 - overlap - su2.kappa).abs() < 1e-12);
    }

    #[test]
    fn qubit_asymptote() {
        let two = so3_tensor_qubit_asymptote::<f64>(2).unwrap();
        assert!((two - 4.0 * (1.0 - (2.0 * PI / 5.0).cos())).abs() < 1e-12);
        let limit = 2.0 * PI * PI;
        assert!((so3_tensor_qubit_asymptote::<f64>(200).unwrap() - limit).abs() / limit < 5e-2);
        assert!((so3_tensor_qubit_asymptote::<f64>(2000).unwrap() - limit).abs() / limit < 5e-3);
        assert!(so3_tensor_qubit_asymptote::<f64>(1).is_err());
    }
}
