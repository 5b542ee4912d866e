//! Symmetric tridiagonal eigenproblems.
//!
//! Eigenvalues come from Sturm-sequence bisection, eigenvectors from inverse
//! iteration on a pivoted LU factorization of `A - λI`. Both are deterministic,
//! so results reproduce bit for bit on a given platform. The closed-form path
//! and odd-sector spectra double as oracles for the numeric solver.

use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, tolerance, Real};

/// Relative stopping width of the eigenvalue bisection.
pub const BISECTION_TOLERANCE: f64 = 1e-12;
/// Residual bound `‖Av − λv‖ ≤ RESIDUAL_TOLERANCE · ‖A‖` enforced on every pair.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

const MAX_INVERSE_ITERATIONS: usize = 12;
/// Eigenvalues closer than this fraction of `‖A‖` are reorthogonalized as a cluster.
const CLUSTER_FRACTION: f64 = 1e-3;

/// Symmetric tridiagonal matrix stored as its diagonal and first off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator<T> {
    diagonal: Vec<T>,
    offdiagonal: Vec<T>,
}

impl<T: Real> TridiagonalOperator<T> {
    pub fn new(diagonal: Vec<T>, offdiagonal: Vec<T>) -> Result<Self> {
        if diagonal.is_empty() {
            return Err(Error::EmptyOperator);
        }
        if offdiagonal.len() + 1 != diagonal.len() {
            return Err(Error::InvalidInput(format!(
                "off-diagonal has length {}, expected {}",
                offdiagonal.len(),
                diagonal.len() - 1
            )));
        }
        if diagonal.iter().chain(&offdiagonal).any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("operator has a non-finite entry".into()));
        }
        Ok(Self {
            diagonal,
            offdiagonal,
        })
    }

    /// Adjacency matrix of the path graph on `m` nodes.
    pub fn path(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::EmptyOperator);
        }
        Self::new(vec![T::zero(); m], vec![T::one(); m - 1])
    }

    /// Path matrix on `l` nodes with `-1` on the first diagonal entry.
    pub fn odd_sector(l: usize) -> Result<Self> {
        let mut op = Self::path(l)?;
        op.diagonal[0] = -T::one();
        Ok(op)
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[T] {
        &self.diagonal
    }

    pub fn offdiagonal(&self) -> &[T] {
        &self.offdiagonal
    }

    /// Maximum absolute row sum, an upper bound on the spectral radius.
    pub fn norm(&self) -> T {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = self.diagonal[i].abs();
                if i > 0 {
                    s = s + self.offdiagonal[i - 1].abs();
                }
                if i + 1 < n {
                    s = s + self.offdiagonal[i].abs();
                }
                s
            })
            .fold(T::zero(), T::max)
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        let n = self.dim();
        assert_eq!(v.len(), n, "vector length must match the operator dimension");
        (0..n)
            .map(|i| {
                let mut s = self.diagonal[i] * v[i];
                if i > 0 {
                    s = s + self.offdiagonal[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s = s + self.offdiagonal[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    pub fn negated(&self) -> Self {
        Self {
            diagonal: self.diagonal.iter().map(|&x| -x).collect(),
            offdiagonal: self.offdiagonal.iter().map(|&x| -x).collect(),
        }
    }

    /// Leading principal `k × k` block.
    pub fn leading(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.dim() {
            return Err(Error::InvalidInput(format!(
                "leading block size {k} outside 1..={}",
                self.dim()
            )));
        }
        Self::new(
            self.diagonal[..k].to_vec(),
            self.offdiagonal[..k - 1].to_vec(),
        )
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn sturm_count(&self, x: T) -> usize {
        self.sturm_count_with(x, self.pivmin())
    }

    fn pivmin(&self) -> T {
        let max_b2 = self
            .offdiagonal
            .iter()
            .map(|&b| b * b)
            .fold(T::one(), T::max);
        T::min_positive_value() * max_b2
    }

    fn sturm_count_with(&self, x: T, pivmin: T) -> usize {
        let mut count = 0;
        let mut d = self.diagonal[0] - x;
        for i in 0..self.dim() {
            if i > 0 {
                let b = self.offdiagonal[i - 1];
                d = (self.diagonal[i] - x) - b * b / d;
            }
            if d.abs() < pivmin {
                d = -pivmin;
            }
            if d < T::zero() {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (T, T) {
        let n = self.dim();
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for i in 0..n {
            let mut r = T::zero();
            if i > 0 {
                r = r + self.offdiagonal[i - 1].abs();
            }
            if i + 1 < n {
                r = r + self.offdiagonal[i].abs();
            }
            lo = lo.min(self.diagonal[i] - r);
            hi = hi.max(self.diagonal[i] + r);
        }
        (lo, hi)
    }
}

/// Eigenpairs in ascending eigenvalue order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult<T> {
    pub eigenvalues: Vec<T>,
    /// Unit vectors; the first component above noise level is positive.
    pub eigenvectors: Vec<Vec<T>>,
}

impl<T: Real> SpectrumResult<T> {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Largest eigenpair held by the result.
    pub fn top(&self) -> Option<(T, &[T])> {
        let i = self.len().checked_sub(1)?;
        Some((self.eigenvalues[i], &self.eigenvectors[i]))
    }
}

fn check_count<T: Real>(op: &TridiagonalOperator<T>, count: usize) -> Result<()> {
    if count == 0 || count > op.dim() {
        return Err(Error::InvalidInput(format!(
            "requested {count} eigenpairs of a {}-dimensional operator",
            op.dim()
        )));
    }
    Ok(())
}

/// The `count` smallest eigenvalues, ascending, by Sturm bisection.
pub fn solve_eigenvalues<T: Real>(op: &TridiagonalOperator<T>, count: usize) -> Result<Vec<T>> {
    check_count(op, count)?;
    let pivmin = op.pivmin();
    let norm = op.norm();
    let floor = lit::<T>(2.0) * T::epsilon() * norm + pivmin;
    let (g_lo, g_hi) = op.gershgorin();
    let lo0 = g_lo - floor - T::epsilon() * g_lo.abs();
    let hi0 = g_hi + floor + T::epsilon() * g_hi.abs();
    let tol: T = lit(BISECTION_TOLERANCE);
    let two: T = lit(2.0);

    let mut values = Vec::with_capacity(count);
    let mut lo_k = lo0;
    for k in 0..count {
        // Every earlier eigenvalue sits at or below lo_k, so start there.
        let mut lo = lo_k;
        let mut hi = hi0;
        loop {
            let mid = (lo + hi) / two;
            let width = hi - lo;
            if width <= tol * lo.abs().max(hi.abs()) + floor || mid <= lo || mid >= hi {
                values.push(mid);
                break;
            }
            if op.sturm_count_with(mid, pivmin) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        lo_k = lo;
    }
    Ok(values)
}

/// The `count` smallest eigenpairs of `op`.
pub fn solve_spectrum<T: Real>(
    op: &TridiagonalOperator<T>,
    count: usize,
) -> Result<SpectrumResult<T>> {
    let eigenvalues = solve_eigenvalues(op, count)?;
    let norm = op.norm();
    let scale = norm.max(T::min_positive_value());
    let cluster_gap = lit::<T>(CLUSTER_FRACTION) * scale;
    let mut eigenvectors: Vec<Vec<T>> = Vec::with_capacity(count);
    for (j, &lambda) in eigenvalues.iter().enumerate() {
        let cluster_start = (0..j)
            .rev()
            .take_while(|&i| lambda - eigenvalues[i] <= cluster_gap)
            .last()
            .unwrap_or(j);
        let v = inverse_iteration(op, lambda, &eigenvectors[cluster_start..j], scale, j)?;
        eigenvectors.push(v);
    }
    Ok(SpectrumResult {
        eigenvalues,
        eigenvectors,
    })
}

fn inverse_iteration<T: Real>(
    op: &TridiagonalOperator<T>,
    lambda: T,
    cluster: &[Vec<T>],
    scale: T,
    seed: usize,
) -> Result<Vec<T>> {
    let n = op.dim();
    let lu = ShiftedLu::factor(op, lambda, T::epsilon() * scale);
    let golden = 0.618_033_988_749_894_9_f64;
    let mut v: Vec<T> = (0..n)
        .map(|i| lit(0.5 + ((i + 7 * seed + 1) as f64 * golden).fract()))
        .collect();
    orthogonalize(&mut v, cluster);
    normalize(&mut v);

    // Single precision cannot reach the f64 bound; fall back to a few ulps of ‖A‖.
    let bound = tolerance::<T>(RESIDUAL_TOLERANCE) * scale;
    let mut residual = T::infinity();
    for iteration in 0..MAX_INVERSE_ITERATIONS {
        lu.solve(&mut v);
        orthogonalize(&mut v, cluster);
        if !normalize(&mut v) {
            return Err(Error::Convergence(format!(
                "inverse iteration collapsed at eigenvalue {lambda}"
            )));
        }
        residual = residual_norm(op, lambda, &v);
        if iteration >= 1 && residual <= bound * lit(0.1) {
            break;
        }
    }
    if residual > bound && n > 1 {
        return Err(Error::Convergence(format!(
            "eigenvector residual {residual} exceeds {bound} at eigenvalue {lambda}"
        )));
    }
    fix_sign(&mut v);
    Ok(v)
}

fn residual_norm<T: Real>(op: &TridiagonalOperator<T>, lambda: T, v: &[T]) -> T {
    op.apply(v)
        .iter()
        .zip(v)
        .map(|(&av, &x)| (av - lambda * x) * (av - lambda * x))
        .fold(T::zero(), |a, b| a + b)
        .sqrt()
}

fn orthogonalize<T: Real>(v: &mut [T], basis: &[Vec<T>]) {
    for u in basis {
        let dot = u.iter().zip(v.iter()).fold(T::zero(), |a, (&x, &y)| a + x * y);
        for (x, &ui) in v.iter_mut().zip(u) {
            *x = *x - dot * ui;
        }
    }
}

fn normalize<T: Real>(v: &mut [T]) -> bool {
    let big = v.iter().fold(T::zero(), |a, &x| a.max(x.abs()));
    if big == T::zero() || !big.is_finite() {
        return false;
    }
    for x in v.iter_mut() {
        *x = *x / big;
    }
    let norm = v.iter().fold(T::zero(), |a, &x| a + x * x).sqrt();
    for x in v.iter_mut() {
        *x = *x / norm;
    }
    true
}

/// Makes the first component above `√ε · max|v|` positive.
pub(crate) fn fix_sign<T: Real>(v: &mut [T]) {
    let big = v.iter().fold(T::zero(), |a, &x| a.max(x.abs()));
    let threshold = T::epsilon().sqrt() * big;
    if let Some(&first) = v.iter().find(|x| x.abs() > threshold) {
        if first < T::zero() {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
    }
}

/// LU factorization with partial pivoting of `A - λI` (LAPACK `gttrf` layout).
struct ShiftedLu<T> {
    d: Vec<T>,
    dl: Vec<T>,
    du: Vec<T>,
    du2: Vec<T>,
    swapped: Vec<bool>,
}

impl<T: Real> ShiftedLu<T> {
    fn factor(op: &TridiagonalOperator<T>, lambda: T, tiny: T) -> Self {
        let n = op.dim();
        let mut d: Vec<T> = op.diagonal.iter().map(|&a| a - lambda).collect();
        let mut dl = op.offdiagonal.clone();
        let mut du = op.offdiagonal.clone();
        let mut du2 = vec![T::zero(); n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] != T::zero() {
                    let fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] = d[i + 1] - fact * du[i];
                }
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = true;
            }
        }
        let tiny = tiny.max(T::min_positive_value());
        for x in d.iter_mut() {
            if x.abs() < tiny {
                *x = if *x < T::zero() { -tiny } else { tiny };
            }
        }
        Self {
            d,
            dl,
            du,
            du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [T]) {
        let n = self.d.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] = b[i + 1] - self.dl[i] * b[i];
            }
        }
        b[n - 1] = b[n - 1] / self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

/// Closed-form spectrum of the `m`-node path matrix: `2cos(jπ/(m+1))` with
/// eigenvectors `sin(jkπ/(m+1))`, listed in ascending order.
pub fn path_matrix_spectrum<T: Real>(m: usize) -> Result<SpectrumResult<T>> {
    if m == 0 {
        return Err(Error::InvalidInput("path matrix needs m ≥ 1".into()));
    }
    let step = T::PI() / from_usize::<T>(m + 1);
    let (eigenvalues, eigenvectors) = (1..=m)
        .rev()
        .map(|j| {
            let angle = from_usize::<T>(j) * step;
            let v: Vec<T> = (1..=m).map(|k| (angle * from_usize(k)).sin()).collect();
            (lit::<T>(2.0) * angle.cos(), unit(v))
        })
        .unzip();
    Ok(SpectrumResult {
        eigenvalues,
        eigenvectors,
    })
}

/// Closed-form spectrum of [`TridiagonalOperator::odd_sector`]: eigenvalues
/// `2cos(2tπ/(2l+1))`, eigenvectors `sin(2t(k−1/2)π/(2l+1))`, ascending.
pub fn odd_sector_spectrum<T: Real>(l: usize) -> Result<SpectrumResult<T>> {
    if l == 0 {
        return Err(Error::InvalidInput("odd sector needs l ≥ 1".into()));
    }
    let step = lit::<T>(2.0) * T::PI() / from_usize::<T>(2 * l + 1);
    let half: T = lit(0.5);
    let (eigenvalues, eigenvectors) = (1..=l)
        .rev()
        .map(|t| {
            let angle = from_usize::<T>(t) * step;
            let v: Vec<T> = (1..=l)
                .map(|k| (angle * (from_usize::<T>(k) - half)).sin())
                .collect();
            (lit::<T>(2.0) * angle.cos(), unit(v))
        })
        .unzip();
    Ok(SpectrumResult {
        eigenvalues,
        eigenvectors,
    })
}

fn unit<T: Real>(mut v: Vec<T>) -> Vec<T> {
    normalize(&mut v);
    fix_sign(&mut v);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(d: &[f64], e: &[f64]) -> TridiagonalOperator<f64> {
        TridiagonalOperator::new(d.to_vec(), e.to_vec()).unwrap()
    }

    #[test]
    fn two_node_path() {
        let s = solve_spectrum(&op(&[0.0, 0.0], &[1.0]), 2).unwrap();
        assert!((s.eigenvalues[0] + 1.0).abs() < 1e-12);
        assert!((s.eigenvalues[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn one_by_one() {
        let s = solve_spectrum(&op(&[5.0], &[]), 1).unwrap();
        assert_eq!(s.eigenvalues.len(), 1);
        assert!((s.eigenvalues[0] - 5.0).abs() < 1e-12);
        assert_eq!(s.eigenvectors[0], vec![1.0]);
    }

    #[test]
    fn three_node_path_roots_of_characteristic_polynomial() {
        // det(A − x) for the 3-node path is −x³ + 2x.
        let charpoly = |x: f64| -x * x * x + 2.0 * x;
        let s = solve_spectrum(&op(&[0.0; 3], &[1.0, 1.0]), 3).unwrap();
        let expected = [-2f64.sqrt(), 0.0, 2f64.sqrt()];
        for (got, want) in s.eigenvalues.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
            assert!(charpoly(*got).abs() < 1e-11);
        }
    }

    #[test]
    fn empty_and_non_finite_inputs_are_rejected() {
        assert_eq!(
            TridiagonalOperator::<f64>::new(vec![], vec![]),
            Err(Error::EmptyOperator)
        );
        assert!(matches!(
            TridiagonalOperator::new(vec![1.0, f64::NAN], vec![0.0]),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            TridiagonalOperator::new(vec![1.0, 2.0], vec![]),
            Err(Error::InvalidInput(_))
        ));
        let a = op(&[1.0, 2.0], &[0.5]);
        assert!(solve_spectrum(&a, 3).is_err());
        assert!(solve_spectrum(&a, 0).is_err());
    }

    #[test]
    fn path_closed_form_small_cases() {
        let s = path_matrix_spectrum::<f64>(2).unwrap();
        assert!((s.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((s.eigenvalues[1] - 1.0).abs() < 1e-15);
        let s = path_matrix_spectrum::<f64>(1).unwrap();
        assert!(s.eigenvalues[0].abs() < 1e-15);
        assert!(path_matrix_spectrum::<f64>(0).is_err());
    }

    #[test]
    fn path_closed_form_matches_solver_m5() {
        let closed = path_matrix_spectrum::<f64>(5).unwrap();
        let numeric = solve_spectrum(&TridiagonalOperator::<f64>::path(5).unwrap(), 5).unwrap();
        for i in 0..5 {
            assert!((closed.eigenvalues[i] - numeric.eigenvalues[i]).abs() < 1e-12);
            for (a, b) in closed.eigenvectors[i].iter().zip(&numeric.eigenvectors[i]) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn odd_sector_small_cases() {
        let s = odd_sector_spectrum::<f64>(1).unwrap();
        assert!((s.eigenvalues[0] + 1.0).abs() < 1e-15);
        let s = odd_sector_spectrum::<f64>(2).unwrap();
        let pi = std::f64::consts::PI;
        assert!((s.eigenvalues[0] - 2.0 * (4.0 * pi / 5.0).cos()).abs() < 1e-15);
        assert!((s.eigenvalues[1] - 2.0 * (2.0 * pi / 5.0).cos()).abs() < 1e-15);
    }

    #[test]
    fn odd_sector_matches_solver_l4() {
        let closed = odd_sector_spectrum::<f64>(4).unwrap();
        let a = op(&[-1.0, 0.0, 0.0, 0.0], &[1.0, 1.0, 1.0]);
        let numeric = solve_spectrum(&a, 4).unwrap();
        for i in 0..4 {
            assert!((closed.eigenvalues[i] - numeric.eigenvalues[i]).abs() < 1e-12);
            let v = &closed.eigenvectors[i];
            let av = a.apply(v);
            let r: f64 = av
                .iter()
                .zip(v)
                .map(|(x, y)| (x - closed.eigenvalues[i] * y).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(r < 1e-12);
        }
    }

    #[test]
    fn repeated_eigenvalues_get_orthogonal_vectors() {
        let a = op(&[5.0, 5.0, 1.0], &[0.0, 0.0]);
        let s = solve_spectrum(&a, 3).unwrap();
        assert!((s.eigenvalues[1] - 5.0).abs() < 5e-12);
        assert!((s.eigenvalues[2] - 5.0).abs() < 5e-12);
        let dot: f64 = s.eigenvectors[1]
            .iter()
            .zip(&s.eigenvectors[2])
            .map(|(x, y)| x * y)
            .sum();
        assert!(dot.abs() < 1e-10);
    }

    #[test]
    fn sign_convention_first_component_positive() {
        let s = solve_spectrum(&TridiagonalOperator::<f64>::path(6).unwrap(), 6).unwrap();
        for v in &s.eigenvectors {
            assert!(v[0] > 0.0);
        }
    }

    #[test]
    fn works_in_single_precision() {
        let s = solve_spectrum(&TridiagonalOperator::<f32>::path(4).unwrap(), 4).unwrap();
        let closed = path_matrix_spectrum::<f32>(4).unwrap();
        for i in 0..4 {
            assert!((s.eigenvalues[i] - closed.eigenvalues[i]).abs() < 1e-5);
        }
    }

    #[test]
    fn sturm_count_brackets_the_spectrum() {
        let a = TridiagonalOperator::<f64>::path(5).unwrap();
        assert_eq!(a.sturm_count(-3.0), 0);
        assert_eq!(a.sturm_count(0.5), 3);
        assert_eq!(a.sturm_count(3.0), 5);
    }
}
