use num_traits::{FromPrimitive, Num, ToPrimitive};

use crate::error::{Error, Result};

/// Law of the total-spin label after `n` qubit steps from the completely
/// mixed state.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurWalkResult {
    pub n: usize,
    /// Probability of total spin `k/2`, indexed by `k = 0..=n`.
    pub distribution: Vec<f64>,
    /// Kolmogorov–Smirnov distance of `j/√n` to the limiting radial law.
    pub ks_to_chi2: f64,
}

/// Exact spin distribution, indexed by doubled spin `k = 2j`.
///
/// Each step moves `j → j + 1/2` with probability `(2j+2)/(2(2j+1))` and
/// `j → j − 1/2` with probability `2j/(2(2j+1))`.
pub fn schur_distribution<T>(n: usize) -> Result<Vec<T>>
where
    T: Num + Clone + FromPrimitive,
{
    if n == 0 {
        return Err(Error::InvalidInput("the walk needs at least one qubit".into()));
    }
    let int = |x: usize| T::from_usize(x).expect("small integers convert");
    let mut p = vec![T::zero(); n + 1];
    p[1] = T::one();
    for step in 2..=n {
        let mut next = vec![T::zero(); n + 1];
        for k in (0..step).filter(|k| (step - 1 - k) % 2 == 0) {
            if p[k].is_zero() {
                continue;
            }
            let denominator = int(2 * (k + 1));
            let up = p[k].clone() * int(k + 2) / denominator.clone();
            next[k + 1] = next[k + 1].clone() + up;
            if k > 0 {
                let down = p[k].clone() * int(k) / denominator;
                next[k - 1] = next[k - 1].clone() + down;
            }
        }
        p = next;
    }
    Ok(p)
}

/// CDF of the χ² law with three degrees of freedom.
pub fn chi2_3_cdf(z: f64) -> f64 {
    if z <= 0.0 {
        return 0.0;
    }
    libm::erf((z / 2.0).sqrt()) - (2.0 * z / std::f64::consts::PI).sqrt() * (-z / 2.0).exp()
}

/// Limiting CDF of `x = j/√n`: `χ²₃` evaluated at `3x²/E` with `E = 3/4`.
pub fn limiting_cdf(x: f64) -> f64 {
    chi2_3_cdf(4.0 * x * x)
}

/// Distribution and its KS distance to the limit law.
pub fn schur_walk(n: usize) -> Result<SchurWalkResult> {
    let distribution: Vec<f64> = schur_distribution(n)?;
    Ok(SchurWalkResult {
        n,
        ks_to_chi2: ks_distance(&distribution, n),
        distribution,
    })
}

/// `sup |F_n − F|` over both sides of every atom of the discrete law.
pub fn ks_distance<T: ToPrimitive>(distribution: &[T], n: usize) -> f64 {
    let root = (n as f64).sqrt();
    let mut below = 0.0;
    let mut worst: f64 = 0.0;
    for (k, p) in distribution.iter().enumerate() {
        let p = p.to_f64().unwrap_or(f64::NAN);
        if p == 0.0 {
            continue;
        }
        let f = limiting_cdf(k as f64 / 2.0 / root);
        let above = below + p;
        worst = worst.max((f - below).abs()).max((above - f).abs());
        below = above;
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    #[test]
    fn small_walks() {
        let one: Vec<f64> = schur_distribution(1).unwrap();
        assert_eq!(one, vec![0.0, 1.0]);
        let two: Vec<f64> = schur_distribution(2).unwrap();
        assert_eq!(two, vec![0.25, 0.0, 0.75]);
        let exact: Vec<BigRational> = schur_distribution(3).unwrap();
        let r = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
        assert_eq!(exact, vec![r(0, 1), r(1, 2), r(0, 1), r(1, 2)]);
    }

    #[test]
    fn exact_mass_is_one() {
        for n in [1, 7, 30] {
            let p: Vec<BigRational> = schur_distribution(n).unwrap();
            let total = p.into_iter().fold(BigRational::from_integer(BigInt::from(0)), |a, b| a + b);
            assert_eq!(total, BigRational::from_integer(BigInt::from(1)));
        }
    }

    #[test]
    fn chi2_cdf_values() {
        assert_eq!(chi2_3_cdf(0.0), 0.0);
        // Reference values of the χ²₃ CDF.
        assert!((chi2_3_cdf(1.0) - 0.1987480430987992).abs() < 1e-12);
        assert!((chi2_3_cdf(7.814727903251178) - 0.95).abs() < 1e-12);
    }

    #[test]
    fn large_walk_approaches_limit() {
        let r = schur_walk(4000).unwrap();
        assert!((r.distribution.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(r.ks_to_chi2 <= 0.02, "ks = {}", r.ks_to_chi2);
    }
}
