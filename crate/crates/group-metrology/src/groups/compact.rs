use num_traits::Num;

use super::{Constraint, GroupTag, MinErrorReport, Method, WaveFunction};
use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};

const JACOBI_SWEEPS: usize = 100;

/// One error term of a compact-group risk: coefficient `a` and the
/// Clebsch–Gordan multiplicity matrix `C[λ][λ′]` over the allowed labels.
#[derive(Debug, Clone, PartialEq)]
pub struct CutTerm<T> {
    pub coefficient: T,
    pub coupling: Vec<Vec<T>>,
}

/// Minimum over a finite label set `Λ` of `constant − Σ x_λ x_λ′ Ã_λλ′`,
/// `Ã = Σ a·(C + Cᵀ)/2`, subject to `|x| = 1`, `x ≥ 0`, where
/// `x_λ = √d_λ · c_λ`. The optimum is the Perron vector of `Ã`.
pub fn compact_cut_min<T: Real>(
    group: GroupTag,
    constant: T,
    terms: &[CutTerm<T>],
    labels: &[T],
    dims: &[T],
) -> Result<MinErrorReport<T>> {
    let n = labels.len();
    if n == 0 || dims.len() != n {
        return Err(Error::InvalidInput("labels and dims must be non-empty and of equal length".into()));
    }
    let mut matrix = vec![vec![T::zero(); n]; n];
    for term in terms {
        if term.coupling.len() != n || term.coupling.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidInput(format!("coupling matrices must be {n}×{n}")));
        }
        for i in 0..n {
            for j in 0..n {
                let sym = (term.coupling[i][j] + term.coupling[j][i]) / lit(2.0);
                matrix[i][j] = matrix[i][j] + term.coefficient * sym;
            }
        }
    }
    if matrix.iter().flatten().any(|&v| v < T::zero()) {
        return Err(Error::UnsupportedStructure(
            "quadratic form has a negative entry, so its top vector need not be nonnegative".into(),
        ));
    }
    let (top, vector) = largest_eigenpair(matrix)?;
    let beta: Vec<T> = vector.iter().map(|v| v.abs()).collect();
    let state = WaveFunction::from_coefficients(labels.to_vec(), &beta, dims.to_vec())?;
    let report = MinErrorReport::new(group, Constraint::Cut(n.saturating_sub(1)), constant - top, Method::FiniteCut);
    Ok(report.with_state(state))
}

/// Cyclic Jacobi rotations on a dense symmetric matrix.
pub(crate) fn largest_eigenpair<T: Real>(mut a: Vec<Vec<T>>) -> Result<(T, Vec<T>)> {
    let n = a.len();
    let mut v = vec![vec![T::zero(); n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = T::one();
    }
    let scale = a.iter().flatten().fold(T::zero(), |m, &x| m.max(x.abs()));
    let tol = T::epsilon() * scale;
    let mut converged = n == 1;
    for _ in 0..JACOBI_SWEEPS {
        let off = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .fold(T::zero(), |m, (i, j)| m.max(a[i][j].abs()));
        if off <= tol {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() <= tol {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (lit::<T>(2.0) * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vkp, vkq) = (row[p], row[q]);
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::Convergence(format!("Jacobi iteration on a {n}×{n} matrix")));
    }
    let best = (0..n)
        .max_by(|&i, &j| a[i][i].partial_cmp(&a[j][j]).unwrap_or(std::cmp::Ordering::Equal))
        .unwrap_or(0);
    Ok((a[best][best], v.iter().map(|row| row[best]).collect()))
}

/// `1 − Σ d_λ · min(dim V_λ, d_λ) / |G|`, clamped to `[0, 1]`.
///
/// Works for any ordered numeric type, including exact rationals.
pub fn finite_group_min_error<T>(irrep_dims: &[T], mult_dims: &[T], group_order: T) -> Result<T>
where
    T: Num + Clone + PartialOrd + std::fmt::Debug,
{
    if !(group_order > T::zero()) {
        return Err(Error::InvalidInput(format!("group order {group_order:?} must be positive")));
    }
    if irrep_dims.len() != mult_dims.len() {
        return Err(Error::InvalidInput("irrep and multiplicity lists differ in length".into()));
    }
    if irrep_dims.iter().chain(mult_dims).any(|d| *d < T::one()) {
        return Err(Error::InvalidInput("all dimensions must be at least 1".into()));
    }
    let mut captured = T::zero();
    for (d, v) in irrep_dims.iter().zip(mult_dims) {
        let rank = if v < d { v.clone() } else { d.clone() };
        captured = captured + d.clone() * rank;
    }
    let value = T::one() - captured / group_order;
    Ok(if value < T::zero() {
        T::zero()
    } else if value > T::one() {
        T::one()
    } else {
        value
    })
}

/// Reports the finite-group minimum as an `f64` risk record.
pub fn finite_group_report(irrep_dims: &[f64], mult_dims: &[f64], group_order: f64) -> Result<MinErrorReport<f64>> {
    let kappa = finite_group_min_error(irrep_dims, mult_dims, group_order)?;
    Ok(MinErrorReport::new(GroupTag::Finite, Constraint::Unconstrained, to_f64(kappa), Method::ClosedForm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{so3_finite_cut_min, su2_finite_cut_min};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn ladder_term(n: usize) -> CutTerm<f64> {
        let mut coupling = vec![vec![0.0; n]; n];
        for i in 0..n - 1 {
            coupling[i][i + 1] = 1.0;
            coupling[i + 1][i] = 1.0;
        }
        CutTerm { coefficient: 0.5, coupling }
    }

    #[test]
    fn reproduces_su2_cut() {
        for n in [0usize, 1, 4, 9] {
            let labels: Vec<f64> = (0..=n).map(|k| k as f64 / 2.0).collect();
            let dims: Vec<f64> = (0..=n).map(|k| k as f64 + 1.0).collect();
            let r = compact_cut_min(GroupTag::Su2, 1.0, &[ladder_term(n + 1)], &labels, &dims).unwrap();
            let expected = su2_finite_cut_min::<f64>(n).unwrap();
            assert!((r.kappa - expected.kappa).abs() < 1e-12, "n = {n}");
            let a = r.optimal_state.unwrap().coefficients();
            let b = expected.optimal_state.unwrap().coefficients();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn reproduces_so3_integer_cut() {
        let n = 6;
        let labels: Vec<f64> = (0..=n).map(|j| j as f64).collect();
        let dims: Vec<f64> = labels.iter().map(|j| 2.0 * j + 1.0).collect();
        let mut diagonal = vec![vec![0.0; n + 1]; n + 1];
        for (i, row) in diagonal.iter_mut().enumerate().skip(1) {
            row[i] = 1.0;
        }
        let terms = [ladder_term(n + 1), CutTerm { coefficient: 0.5, coupling: diagonal }];
        let r = compact_cut_min(GroupTag::So3, 1.5, &terms, &labels, &dims).unwrap();
        let expected = so3_finite_cut_min::<f64>(n, true).unwrap().kappa;
        assert!((r.kappa - expected).abs() < 1e-12);
    }

    #[test]
    fn single_label_and_negative_entries() {
        let term = CutTerm { coefficient: 0.5f64, coupling: vec![vec![0.8]] };
        let r = compact_cut_min(GroupTag::Compact, 1.0, &[term], &[0.0], &[1.0]).unwrap();
        assert!((r.kappa - 0.6).abs() < 1e-15);
        let bad = CutTerm { coefficient: -1.0, coupling: vec![vec![0.0, 1.0], vec![1.0, 0.0]] };
        assert!(matches!(
            compact_cut_min(GroupTag::Compact, 1.0, &[bad], &[0.0, 1.0], &[1.0, 1.0]),
            Err(Error::UnsupportedStructure(_))
        ));
    }

    #[test]
    fn finite_group_values() {
        assert_eq!(finite_group_min_error(&[1.0, 1.0, 1.0, 1.0], &[1.0; 4], 4.0).unwrap(), 0.0);
        assert_eq!(finite_group_min_error(&[1.0], &[1.0], 1.0).unwrap(), 0.0);
        assert_eq!(finite_group_min_error(&[1.0, 1.0], &[1.0, 1.0], 4.0).unwrap(), 0.5);
        // S₃ with the sign irrep missing and one copy of the 2-dim irrep.
        let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        let value = finite_group_min_error(&[r(1, 1), r(2, 1)], &[r(1, 1), r(1, 1)], r(6, 1)).unwrap();
        assert_eq!(value, r(1, 2));
        assert!(finite_group_min_error(&[1.0], &[1.0], 0.0).is_err());
        assert!(finite_group_min_error(&[0.5], &[1.0], 2.0).is_err());
    }
}
