use crate::scalar::Real;

/// Character `χ_{k/2}(θ) = sin((k+1)θ/2) / sin(θ/2)` of the spin-`k/2` irrep
/// at rotation angle `θ`.
///
/// Evaluated as the Chebyshev polynomial `U_k(cos(θ/2))`, which is the same
/// function without the removable singularity at `θ = 0` (value `k + 1`).
pub fn su2_character<T: Real>(k: usize, theta: T) -> T {
    let x = (theta / (T::one() + T::one())).cos();
    let two_x = x + x;
    let (mut prev, mut cur) = (T::zero(), T::one());
    for _ in 0..k {
        let next = two_x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Multiplicity (0 or 1) of spin `j` in `j1 ⊗ j2`, with every spin passed
/// doubled (`2j` as an integer).
pub fn su2_multiplicity(j1x2: usize, j2x2: usize, jx2: usize) -> usize {
    let low = j1x2.abs_diff(j2x2);
    let high = j1x2 + j2x2;
    usize::from(jx2 >= low && jx2 <= high && (high - jx2).is_multiple_of(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn character_values() {
        assert_eq!(su2_character(1, 0.0), 2.0);
        assert!((su2_character(2, PI) - -1.0).abs() < 1e-15);
        assert!((su2_character(4, 2.0 * PI) - 5.0).abs() < 1e-12);
        assert!((su2_character(3, 2.0 * PI) + 4.0).abs() < 1e-12);
    }

    #[test]
    fn character_matches_sine_ratio_away_from_zero() {
        for k in 0..8 {
            for i in 1..50 {
                let t = i as f64 * 0.12;
                let ratio = ((k + 1) as f64 * t / 2.0).sin() / (t / 2.0).sin();
                assert!((su2_character(k, t) - ratio).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn multiplicity_rules() {
        assert_eq!(su2_multiplicity(1, 1, 0), 1);
        assert_eq!(su2_multiplicity(1, 1, 2), 1);
        assert_eq!(su2_multiplicity(1, 1, 1), 0);
        assert_eq!(su2_multiplicity(0, 0, 2), 0);
        assert_eq!(su2_multiplicity(2, 2, 2), 1);
        assert_eq!(su2_multiplicity(4, 2, 0), 0);
    }
}
