//! Legendre duality between a concave curve `γ(s)` and the constrained risk
//! `κ(E) = max_{s>0} γ(s) − sE`.

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, tolerance, Real};
use crate::spectra::{solve_eigenvalues, TridiagonalOperator};

/// Initial multiplier bracket of the search.
pub const SEARCH_BRACKET: (f64, f64) = (1e-6, 1e6);
/// Geometric widenings allowed after the maximizer touches the bracket.
pub const MAX_EXPANSIONS: usize = 3;
pub const EXPANSION_FACTOR: f64 = 1e3;
/// Width of the final bracket in `ln s`.
pub const LOG_S_TOLERANCE: f64 = 1e-10;
/// Slack of the midpoint concavity test.
pub const CONCAVITY_SLACK: f64 = 1e-9;
/// Maximum truncation tried by [`gamma_from_operator`].
pub const MAX_OPERATOR_DIM: usize = 1 << 16;
pub const OPERATOR_TOLERANCE: f64 = 1e-10;

const GOLDEN_ITERATION_CAP: usize = 400;

type Evaluator<'a, T> = Box<dyn Fn(T) -> Result<T> + Send + Sync + 'a>;

/// A concave function of the multiplier `s` on `(s_min, s_max)`.
pub struct GammaCurve<'a, T> {
    evaluator: Evaluator<'a, T>,
    s_min: T,
    s_max: T,
}

impl<T: Real> std::fmt::Debug for GammaCurve<'_, T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GammaCurve")
            .field("s_min", &self.s_min)
            .field("s_max", &self.s_max)
            .finish_non_exhaustive()
    }
}

impl<'a, T: Real> GammaCurve<'a, T> {
    pub fn new(
        evaluator: impl Fn(T) -> Result<T> + Send + Sync + 'a,
        s_min: T,
        s_max: T,
    ) -> Result<Self> {
        if !(s_min > T::zero() && s_min < s_max && s_max.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "gamma domain ({s_min}, {s_max}) must satisfy 0 < s_min < s_max < ∞"
            )));
        }
        Ok(Self {
            evaluator: Box::new(evaluator),
            s_min,
            s_max,
        })
    }

    pub fn domain(&self) -> (T, T) {
        (self.s_min, self.s_max)
    }

    pub fn eval(&self, s: T) -> Result<T> {
        if !(s >= self.s_min && s <= self.s_max) {
            return Err(Error::InvalidInput(format!(
                "s = {s} outside the gamma domain ({}, {})",
                self.s_min, self.s_max
            )));
        }
        let value = (self.evaluator)(s)?;
        if !value.is_finite() {
            return Err(Error::InvalidCurve(format!("gamma({s}) = {value}")));
        }
        Ok(value)
    }

    /// Midpoint test `γ((a+b)/2) ≥ (γ(a)+γ(b))/2 − slack`.
    pub fn midpoint_concave(&self, a: T, b: T) -> Result<bool> {
        let mid = self.eval((a + b) / lit(2.0))?;
        let chord = (self.eval(a)? + self.eval(b)?) / lit(2.0);
        Ok(mid >= chord - lit::<T>(CONCAVITY_SLACK) * (T::one() + mid.abs()))
    }

    /// Runs the midpoint test on every adjacent pair of an ascending grid.
    pub fn check_concavity(&self, grid: &[T]) -> Result<()> {
        for pair in grid.windows(2) {
            if !self.midpoint_concave(pair[0], pair[1])? {
                return Err(Error::InvalidCurve(format!(
                    "midpoint test fails on [{}, {}]",
                    pair[0], pair[1]
                )));
            }
        }
        Ok(())
    }
}

/// Outcome of one Legendre maximization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaResult<T> {
    pub energy: T,
    pub kappa: T,
    /// Maximizing multiplier.
    pub s_e: T,
}

struct Golden<T> {
    log_s: T,
    left_fixed: bool,
    right_fixed: bool,
}

fn golden_section<T: Real>(f: &dyn Fn(T) -> Result<T>, lo: T, hi: T) -> Result<Golden<T>> {
    let ratio: T = lit(0.618_033_988_749_894_9);
    let tol: T = tolerance(LOG_S_TOLERANCE);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let (mut left_fixed, mut right_fixed) = (true, true);
    for _ in 0..GOLDEN_ITERATION_CAP {
        if b - a <= tol {
            break;
        }
        if fc >= fd {
            b = d;
            right_fixed = false;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            left_fixed = false;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d)?;
        }
    }
    Ok(Golden {
        log_s: (a + b) / lit(2.0),
        left_fixed,
        right_fixed,
    })
}

/// `κ(E) = max_{s>0} γ(s) − sE` by golden-section search in `ln s`.
pub fn kappa_from_gamma<T: Real>(gamma: &GammaCurve<'_, T>, energy: T) -> Result<KappaResult<T>> {
    if !(energy >= T::zero()) || !energy.is_finite() {
        return Err(Error::InvalidInput(format!("energy {energy} must be finite and ≥ 0")));
    }
    let (d_min, d_max) = gamma.domain();
    let mut lo = d_min.max(lit(SEARCH_BRACKET.0));
    let mut hi = d_max.min(lit(SEARCH_BRACKET.1));
    if lo >= hi {
        lo = d_min;
        hi = d_max;
    }
    let objective = |u: T| -> Result<T> {
        let s = u.exp().max(d_min).min(d_max);
        Ok(gamma.eval(s)? - s * energy)
    };
    let factor: T = lit(EXPANSION_FACTOR);
    for attempt in 0..=MAX_EXPANSIONS {
        let g = golden_section(&objective, lo.ln(), hi.ln())?;
        let s = g.log_s.exp().max(d_min).min(d_max);
        if !g.left_fixed && !g.right_fixed {
            spot_check(gamma, s)?;
            let kappa = gamma.eval(s)? - s * energy;
            return Ok(KappaResult {
                energy,
                kappa,
                s_e: s,
            });
        }
        let blocked = (g.left_fixed && lo <= d_min) || (g.right_fixed && hi >= d_max);
        if blocked || attempt == MAX_EXPANSIONS {
            return Err(Error::BoundaryHit { s: to_f64(s) });
        }
        if g.left_fixed {
            lo = (lo / factor).max(d_min);
        }
        if g.right_fixed {
            hi = (hi * factor).min(d_max);
        }
    }
    unreachable!("the final attempt always returns")
}

/// Midpoint tests on the five points `s·(0.5, 0.75, 1, 1.25, 1.5)`.
fn spot_check<T: Real>(gamma: &GammaCurve<'_, T>, s: T) -> Result<()> {
    let (d_min, d_max) = gamma.domain();
    let points: Vec<T> = (0..5)
        .map(|i| s * lit(0.5 + 0.25 * i as f64))
        .filter(|&p| p >= d_min && p <= d_max)
        .collect();
    let mut pairs: Vec<(T, T)> = Vec::new();
    for w in points.windows(3) {
        pairs.push((w[0], w[2]));
    }
    if points.len() == 5 {
        pairs.push((points[0], points[4]));
    }
    for (a, b) in pairs {
        if !gamma.midpoint_concave(a, b)? {
            return Err(Error::InvalidCurve(format!(
                "gamma is not concave on [{a}, {b}] near the maximizer {s}"
            )));
        }
    }
    Ok(())
}

/// `γ(s)` as the smallest eigenvalue of `builder(s, n)`, with the truncation
/// `n` doubled from `initial_dim` until two successive values agree.
pub fn gamma_from_operator<'a, T, F>(
    builder: F,
    initial_dim: usize,
    s_min: T,
    s_max: T,
) -> Result<GammaCurve<'a, T>>
where
    T: Real,
    F: Fn(T, usize) -> Result<TridiagonalOperator<T>> + Send + Sync + 'a,
{
    let tol: T = tolerance(OPERATOR_TOLERANCE);
    GammaCurve::new(
        move |s: T| {
            let smallest = |n: usize| -> Result<T> { Ok(solve_eigenvalues(&builder(s, n)?, 1)?[0]) };
            let mut n = initial_dim.max(1);
            let mut previous = smallest(n)?;
            loop {
                n *= 2;
                if n > MAX_OPERATOR_DIM {
                    return Err(Error::Convergence(format!(
                        "operator ground state at s = {s} unsettled at dimension {MAX_OPERATOR_DIM}"
                    )));
                }
                let value = smallest(n)?;
                if (value - previous).abs() < tol * value.abs().max(T::one()) {
                    return Ok(value);
                }
                previous = value;
            }
        },
        s_min,
        s_max,
    )
}
