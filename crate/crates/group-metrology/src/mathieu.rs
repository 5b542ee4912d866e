//! Characteristic values and eigenfunctions of `y'' + (a − 2q cos 2θ) y = 0`.
//!
//! Each symmetry sector is the operator `P² + 2q cos 2Q` written in an
//! orthonormal Fourier basis, which makes it a symmetric tridiagonal matrix:
//!
//! | order | basis                          | diagonal            | off-diagonal          |
//! |-------|--------------------------------|---------------------|-----------------------|
//! | A0    | `1`, `√2 cos 2kθ`              | `4k²`               | `q`, first is `√2 q`  |
//! | B2    | `√2 sin 2kθ`, `k ≥ 1`          | `4k²`               | `q`                   |
//! | A1    | `√2 cos (2k+1)θ`               | `(2k+1)²`, `1 + q`  | `q`                   |
//! | B1    | `√2 sin (2k+1)θ`               | `(2k+1)²`, `1 − q`  | `q`                   |
//!
//! The characteristic value is the smallest eigenvalue, with the truncation
//! doubled until it settles.

use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, tolerance, Real};
use crate::spectra::{fix_sign, solve_eigenvalues, solve_spectrum, TridiagonalOperator};

/// Largest accepted `|q|`.
pub const MAX_ABS_Q: f64 = 1e6;
/// Truncation size beyond which the doubling gives up.
pub const MAX_TRUNCATION: usize = 1 << 16;
/// Two successive truncations must agree to this (relative once `|a| > 1`).
pub const TRUNCATION_TOLERANCE: f64 = 1e-10;
/// Trailing Fourier coefficients below this fraction of the largest are dropped.
pub const COEFFICIENT_CUTOFF: f64 = 1e-12;

/// Symmetry sector of a Mathieu function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MathieuOrder {
    /// Even, π-periodic (`ce₀`).
    A0,
    /// Even, π-antiperiodic (`ce₁`).
    A1,
    /// Odd, π-antiperiodic (`se₁`).
    B1,
    /// Odd, π-periodic (`se₂`).
    B2,
}

impl MathieuOrder {
    pub const ALL: [MathieuOrder; 4] = [Self::A0, Self::A1, Self::B1, Self::B2];

    pub fn is_even(self) -> bool {
        matches!(self, Self::A0 | Self::A1)
    }

    /// `f(θ + π) = f(θ)` when true, `f(θ + π) = −f(θ)` otherwise.
    pub fn is_periodic(self) -> bool {
        matches!(self, Self::A0 | Self::B2)
    }

    /// Angular frequency of the `k`-th basis function.
    pub fn frequency(self, k: usize) -> usize {
        match self {
            Self::A0 => 2 * k,
            Self::B2 => 2 * (k + 1),
            Self::A1 | Self::B1 => 2 * k + 1,
        }
    }
}

impl std::fmt::Display for MathieuOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Self::A0 => "a0",
            Self::A1 => "a1",
            Self::B1 => "b1",
            Self::B2 => "b2",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MathieuValue<T> {
    pub order: MathieuOrder,
    pub q: T,
    pub value: T,
    /// Truncation size at which the value was accepted.
    pub truncation: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MathieuFunctionSample<T> {
    pub order: MathieuOrder,
    pub q: T,
    pub characteristic: T,
    pub grid: Vec<T>,
    /// Function values, normalized to mean square 1/2 over a period.
    pub values: Vec<T>,
}

/// The sector operator truncated to `n` basis functions.
pub fn sector_operator<T: Real>(
    order: MathieuOrder,
    q: T,
    n: usize,
) -> Result<TridiagonalOperator<T>> {
    if n == 0 {
        return Err(Error::EmptyOperator);
    }
    let mut diagonal: Vec<T> = (0..n)
        .map(|k| {
            let f = from_usize::<T>(order.frequency(k));
            f * f
        })
        .collect();
    match order {
        MathieuOrder::A1 => diagonal[0] = diagonal[0] + q,
        MathieuOrder::B1 => diagonal[0] = diagonal[0] - q,
        _ => {}
    }
    let mut offdiagonal = vec![q; n - 1];
    if order == MathieuOrder::A0 && n > 1 {
        offdiagonal[0] = q * T::SQRT_2();
    }
    TridiagonalOperator::new(diagonal, offdiagonal)
}

/// First truncation tried: `max(16, ⌈2√|q|⌉ + 8)`.
pub fn initial_truncation<T: Real>(q: T) -> usize {
    let grow = (lit::<T>(2.0) * q.abs().sqrt()).ceil().to_usize().unwrap_or(MAX_TRUNCATION);
    (grow + 8).max(16)
}

fn check_q<T: Real>(q: T) -> Result<()> {
    if !q.is_finite() {
        return Err(Error::InvalidInput(format!("q = {q} is not finite")));
    }
    if q.abs() > lit(MAX_ABS_Q) {
        return Err(Error::InvalidInput(format!("|q| = {} exceeds {MAX_ABS_Q}", q.abs())));
    }
    Ok(())
}

/// Smallest eigenvalue and the absolute resolution of the bisection that found it.
fn smallest<T: Real>(order: MathieuOrder, q: T, n: usize) -> Result<(T, T)> {
    let op = sector_operator(order, q, n)?;
    let floor = lit::<T>(4.0) * T::epsilon() * op.norm();
    Ok((solve_eigenvalues(&op, 1)?[0], floor))
}

/// Characteristic value of the sector, by adaptive truncation.
pub fn characteristic_value<T: Real>(order: MathieuOrder, q: T) -> Result<MathieuValue<T>> {
    check_q(q)?;
    let tol: T = tolerance(TRUNCATION_TOLERANCE);
    let mut n = initial_truncation(q);
    let (mut previous, _) = smallest(order, q, n)?;
    loop {
        n *= 2;
        if n > MAX_TRUNCATION {
            return Err(Error::Convergence(format!(
                "{order}({q}) did not settle below truncation {MAX_TRUNCATION}"
            )));
        }
        let (value, floor) = smallest(order, q, n)?;
        // The floor only matters in single precision, where the diagonal
        // growth swamps the requested tolerance.
        if (value - previous).abs() < tol * value.abs().max(T::one()) + floor {
            return Ok(MathieuValue {
                order,
                q,
                value,
                truncation: n,
            });
        }
        previous = value;
    }
}

/// Characteristic value together with the orthonormal-basis Fourier
/// coefficients of its eigenfunction (first coefficient positive, negligible
/// tail dropped).
pub fn characteristic_coefficients<T: Real>(
    order: MathieuOrder,
    q: T,
) -> Result<(MathieuValue<T>, Vec<T>)> {
    let value = characteristic_value(order, q)?;
    let spectrum = solve_spectrum(&sector_operator(order, q, value.truncation)?, 1)?;
    let mut coefficients = spectrum.eigenvectors.into_iter().next().unwrap_or_default();
    let big = coefficients.iter().fold(T::zero(), |a, &c| a.max(c.abs()));
    let cutoff = lit::<T>(COEFFICIENT_CUTOFF) * big;
    while coefficients.len() > 1 && coefficients.last().is_some_and(|c| c.abs() < cutoff) {
        coefficients.pop();
    }
    fix_sign(&mut coefficients);
    Ok((value, coefficients))
}

/// Evaluates `(1/√2) Σ c_k · basis_k(θ)` for orthonormal-basis coefficients.
pub fn evaluate_series<T: Real>(order: MathieuOrder, coefficients: &[T], theta: T) -> T {
    let mut sum = T::zero();
    for (k, &c) in coefficients.iter().enumerate() {
        let arg = from_usize::<T>(order.frequency(k)) * theta;
        let term = match order {
            MathieuOrder::A0 if k == 0 => c * T::FRAC_1_SQRT_2(),
            MathieuOrder::A0 | MathieuOrder::A1 => c * arg.cos(),
            MathieuOrder::B1 | MathieuOrder::B2 => c * arg.sin(),
        };
        sum = sum + term;
    }
    sum
}

/// Samples the sector eigenfunction on `grid`.
pub fn mathieu_function<T: Real>(
    order: MathieuOrder,
    q: T,
    grid: &[T],
) -> Result<MathieuFunctionSample<T>> {
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("grid has a non-finite angle".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("grid must be strictly increasing".into()));
    }
    if let (Some(&first), Some(&last)) = (grid.first(), grid.last()) {
        if last - first > lit::<T>(2.0) * T::PI() {
            return Err(Error::InvalidInput("grid spans more than one period".into()));
        }
    }
    let (value, coefficients) = characteristic_coefficients(order, q)?;
    let values = grid
        .iter()
        .map(|&t| evaluate_series(order, &coefficients, t))
        .collect();
    Ok(MathieuFunctionSample {
        order,
        q,
        characteristic: value.value,
        grid: grid.to_vec(),
        values,
    })
}

/// Small-`q` power series of the characteristic value.
pub fn expansion_small_q<T: Real>(order: MathieuOrder, q: T) -> T {
    let q2 = q * q;
    let q4 = q2 * q2;
    let a1 = |q: T| {
        T::one() + q - q * q / lit(8.0) - q * q * q / lit(64.0) - q * q * q * q / lit(1536.0)
    };
    match order {
        MathieuOrder::A0 => -q2 / lit(2.0) + lit::<T>(7.0) * q4 / lit(128.0),
        MathieuOrder::A1 => a1(q),
        MathieuOrder::B1 => a1(-q),
        MathieuOrder::B2 => lit::<T>(4.0) - q2 / lit(12.0) + lit::<T>(5.0) * q4 / lit(13824.0),
    }
}

/// Large-`q` asymptotic series with `q = h²`. B1 shares the A0 series and A1
/// shares the B2 series (the sector pairs merge as `q → ∞`).
pub fn expansion_large_q<T: Real>(order: MathieuOrder, h: T) -> Result<T> {
    if !(h > T::zero()) || !h.is_finite() {
        return Err(Error::InvalidInput(format!("h = {h} must be positive")));
    }
    let h2 = h * h;
    Ok(match order {
        MathieuOrder::A0 | MathieuOrder::B1 => {
            lit::<T>(-2.0) * h2 + lit::<T>(2.0) * h - lit(0.25)
                - T::one() / (lit::<T>(32.0) * h)
                - lit::<T>(3.0) / (lit::<T>(256.0) * h2)
        }
        MathieuOrder::A1 | MathieuOrder::B2 => {
            lit::<T>(-2.0) * h2 + lit::<T>(6.0) * h - lit(1.25)
                - lit::<T>(9.0) / (lit::<T>(32.0) * h)
                - lit::<T>(45.0) / (lit::<T>(256.0) * h2)
        }
    })
}
