use std::f64::consts::PI;

use rand::Rng;

use super::cosine::{half_angle_law, CosineLaw};
use super::MleOutcome;
use crate::error::{Error, Result};
use crate::groups::compact::largest_eigenpair;
use crate::groups::WaveFunction;

/// Initial pattern-search step (radians of rotation).
pub const ASCENT_START_STEP: f64 = 0.25;
/// Pattern search stops once the step falls below this.
pub const ASCENT_STEP_TOLERANCE: f64 = 1e-8;
/// Hurwitz units used as pattern-search starts.
pub const ASCENT_STARTS: usize = 4;

const LOG_FLOOR: f64 = 1e-300;

/// Unit quaternion `(w, x, y, z)` representing an element of SU(2).
pub type Quaternion = [f64; 4];

pub const IDENTITY: Quaternion = [1.0, 0.0, 0.0, 0.0];

pub fn mul(a: &Quaternion, b: &Quaternion) -> Quaternion {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

pub fn conj(a: &Quaternion) -> Quaternion {
    [a[0], -a[1], -a[2], -a[3]]
}

pub fn dot(a: &Quaternion, b: &Quaternion) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn normalize(a: &Quaternion) -> Quaternion {
    let n = dot(a, a).sqrt();
    [a[0] / n, a[1] / n, a[2] / n, a[3] / n]
}

/// `exp` of the rotation vector `v` (angle `|v|` about `v/|v|`).
pub fn from_rotation_vector(v: [f64; 3]) -> Quaternion {
    let angle = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if angle == 0.0 {
        return IDENTITY;
    }
    let s = (0.5 * angle).sin() / angle;
    [(0.5 * angle).cos(), v[0] * s, v[1] * s, v[2] * s]
}

/// The 24 unit Hurwitz quaternions (binary tetrahedral group).
pub fn hurwitz_units() -> Vec<Quaternion> {
    let mut out = Vec::with_capacity(24);
    for i in 0..4 {
        for sign in [1.0, -1.0] {
            let mut q = [0.0; 4];
            q[i] = sign;
            out.push(q);
        }
    }
    for mask in 0..16u32 {
        let s = |bit: u32| if mask & (1 << bit) == 0 { 0.5 } else { -0.5 };
        out.push([s(0), s(1), s(2), s(3)]);
    }
    out
}

/// Which group the estimate lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RotationGroup {
    Su2,
    /// Integer spins only.
    So3Plus,
    /// Half-integer spins only.
    So3Minus,
}

/// Outcome law of the covariant measurement for a spin superposition.
///
/// Relative to Haar measure the outcome density is `A(w)²`, where
/// `w = ⟨g, g_i⟩ = cos(θ/2)` and `A(w) = Σ_k β_k U_k(w)` sums Chebyshev
/// polynomials over doubled spins `k = 2j`. Since `A` depends on the
/// conjugation class only, an outcome is a half-angle from a cosine law
/// together with an independent uniform axis.
#[derive(Debug, Clone)]
pub struct RotationLaw {
    group: RotationGroup,
    beta: Vec<f64>,
    law: CosineLaw,
    energy: f64,
}

impl RotationLaw {
    pub fn new(group: RotationGroup, state: &WaveFunction<f64>) -> Result<Self> {
        let coefficients = state.coefficients();
        let mut beta: Vec<f64> = Vec::new();
        for (&j, &b) in state.labels().iter().zip(&coefficients) {
            let doubled = 2.0 * j;
            if j < 0.0 || doubled.fract() != 0.0 {
                return Err(Error::InvalidInput(format!("spin label {j} is not a nonnegative half-integer")));
            }
            let k = doubled as usize;
            if beta.len() <= k {
                beta.resize(k + 1, 0.0);
            }
            beta[k] += b;
        }
        let has = |parity: usize| beta.iter().enumerate().any(|(k, &b)| k % 2 == parity && b != 0.0);
        match group {
            RotationGroup::Su2 if !(has(0) && has(1)) => {
                return Err(Error::Precondition(
                    "SU(2) estimation needs weight on both an integer and a half-integer spin".into(),
                ))
            }
            RotationGroup::So3Plus if has(1) => {
                return Err(Error::Precondition("integer-spin SO(3) states cannot use half-integer spins".into()))
            }
            RotationGroup::So3Minus if has(0) => {
                return Err(Error::Precondition("half-integer SO(3) states cannot use integer spins".into()))
            }
            _ => {}
        }
        let energy = beta
            .iter()
            .enumerate()
            .map(|(k, b)| {
                let j = k as f64 / 2.0;
                j * (j + 1.0) * b * b
            })
            .sum();
        let law = half_angle_law(&beta)?;
        Ok(Self {
            group,
            beta,
            law,
            energy,
        })
    }

    pub fn group(&self) -> RotationGroup {
        self.group
    }

    /// `E_φ = Σ j(j+1) β_j²`.
    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn half_angle_law(&self) -> &CosineLaw {
        &self.law
    }

    /// `A(w)` and `A′(w)` by the Chebyshev recurrences.
    pub fn amplitude(&self, w: f64) -> (f64, f64) {
        let (mut u_prev, mut u) = (0.0, 1.0);
        let (mut d_prev, mut d) = (0.0, 0.0);
        let (mut a, mut da) = (0.0, 0.0);
        for &b in &self.beta {
            a += b * u;
            da += b * d;
            let u_next = 2.0 * w * u - u_prev;
            let d_next = 2.0 * u + 2.0 * w * d - d_prev;
            u_prev = u;
            u = u_next;
            d_prev = d;
            d = d_next;
        }
        (a, da)
    }

    pub fn log_likelihood(&self, samples: &[Quaternion], g: &Quaternion) -> f64 {
        samples
            .iter()
            .map(|s| {
                let a = self.amplitude(dot(g, s)).0;
                (a * a).max(LOG_FLOOR).ln()
            })
            .sum()
    }

    /// Loss of an estimate: `1 − ⟨ĝ, g⟩` for SU(2), `2(1 − ⟨ĝ, g⟩²)` for SO(3).
    pub fn loss(&self, estimate: &Quaternion, truth: &Quaternion) -> f64 {
        let c = dot(estimate, truth).clamp(-1.0, 1.0);
        match self.group {
            RotationGroup::Su2 => 1.0 - c,
            _ => 2.0 * (1.0 - c * c),
        }
    }

    /// Asymptotic `n · risk` of maximum likelihood.
    pub fn predicted_scaled_risk(&self) -> f64 {
        match self.group {
            RotationGroup::Su2 => 9.0 / (32.0 * self.energy),
            _ => 9.0 / (8.0 * self.energy),
        }
    }
}

/// Uniform point on the unit sphere.
fn random_axis<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    let z: f64 = 2.0 * rng.random::<f64>() - 1.0;
    let phi: f64 = 2.0 * PI * rng.random::<f64>();
    let r = (1.0 - z * z).max(0.0).sqrt();
    [r * phi.cos(), r * phi.sin(), z]
}

/// One outcome `g_true · h` with `h` drawn from the relative law.
pub fn sample_rotation_outcome<R: Rng + ?Sized>(law: &RotationLaw, truth: &Quaternion, rng: &mut R) -> Quaternion {
    let u = law.law.sample(rng);
    let n = random_axis(rng);
    let s = u.sin();
    let h = [u.cos(), n[0] * s, n[1] * s, n[2] * s];
    normalize(&mul(truth, &h))
}

/// Starting points beyond the Hurwitz units: the normalized sample mean and
/// the top eigenvector of the sample second moment.
fn moment_candidates(samples: &[Quaternion]) -> Vec<Quaternion> {
    let mut out = Vec::new();
    let mut mean = [0.0; 4];
    let mut second = vec![vec![0.0; 4]; 4];
    for s in samples {
        for i in 0..4 {
            mean[i] += s[i];
            for j in 0..4 {
                second[i][j] += s[i] * s[j];
            }
        }
    }
    if dot(&mean, &mean) > 0.0 {
        out.push(normalize(&mean));
    }
    if let Ok((_, v)) = largest_eigenpair(second) {
        let q = [v[0], v[1], v[2], v[3]];
        if dot(&q, &q) > 0.0 {
            let q = normalize(&q);
            out.push(q);
            out.push([-q[0], -q[1], -q[2], -q[3]]);
        }
    }
    out
}

/// Pattern search by right-multiplied rotations about the coordinate axes
/// with a halving step.
fn ascend(samples: &[Quaternion], law: &RotationLaw, start: Quaternion) -> (Quaternion, f64) {
    let mut current = start;
    let mut value = law.log_likelihood(samples, &current);
    let mut step = ASCENT_START_STEP;
    while step >= ASCENT_STEP_TOLERANCE {
        let mut improved = None;
        for axis in 0..3 {
            for sign in [1.0, -1.0] {
                let mut v = [0.0; 3];
                v[axis] = sign * step;
                let candidate = normalize(&mul(&current, &from_rotation_vector(v)));
                let cv = law.log_likelihood(samples, &candidate);
                if cv > improved.map_or(value, |(_, best): (Quaternion, f64)| best) {
                    improved = Some((candidate, cv));
                }
            }
        }
        match improved {
            Some((g, v)) => {
                current = g;
                value = v;
            }
            None => step *= 0.5,
        }
    }
    (current, value)
}

/// Maximum-likelihood group element: pattern search from the best
/// [`ASCENT_STARTS`] Hurwitz units and from each moment candidate, keeping
/// the highest end point.
pub fn mle_rotation(samples: &[Quaternion], law: &RotationLaw) -> Result<MleOutcome<Quaternion>> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("maximum likelihood needs at least one sample".into()));
    }
    let coarse = hurwitz_units();
    let coarse_values: Vec<f64> = coarse.iter().map(|g| law.log_likelihood(samples, g)).collect();
    let best = coarse_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let worst = coarse_values.iter().copied().fold(f64::INFINITY, f64::min);
    if best - worst <= 1e-12 * (1.0 + best.abs()) {
        return Ok(MleOutcome {
            estimate: IDENTITY,
            flat: true,
        });
    }
    let mut order: Vec<usize> = (0..coarse.len()).collect();
    order.sort_by(|&a, &b| coarse_values[b].total_cmp(&coarse_values[a]));
    let starts = order
        .iter()
        .take(ASCENT_STARTS)
        .map(|&i| coarse[i])
        .chain(moment_candidates(samples));
    let mut estimate = IDENTITY;
    let mut value = f64::NEG_INFINITY;
    for start in starts {
        let (g, v) = ascend(samples, law, start);
        if v > value {
            value = v;
            estimate = g;
        }
    }
    Ok(MleOutcome { estimate, flat: false })
}

/// Gauss–Legendre nodes and weights on `[a, b]` (`n ≥ 1`).
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut derivative = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            derivative = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / derivative;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * derivative * derivative);
        out.push((0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * w));
    }
    out
}

/// Fisher matrix in rotation-vector coordinates at the identity:
/// `J_st = ∫ A′(w)² q_s q_t dHaar`, with `q` the vector part of the outcome.
/// Product rule over half-angle (Gauss–Legendre) and sphere (Gauss–Legendre
/// in `z`, trapezoid in azimuth).
pub fn fisher_rotation(law: &RotationLaw) -> [[f64; 3]; 3] {
    let radial = gauss_legendre(law.beta.len() + 48, 0.0, PI);
    let heights = gauss_legendre(12, -1.0, 1.0);
    let azimuths = 24;
    let mut out = [[0.0; 3]; 3];
    for &(u, wu) in &radial {
        let s = u.sin();
        let haar = 2.0 / PI * s * s * wu;
        let d = law.amplitude(u.cos()).1;
        let radial_weight = haar * d * d * s * s;
        for &(z, wz) in &heights {
            let r = (1.0 - z * z).sqrt();
            for a in 0..azimuths {
                let phi = 2.0 * PI * a as f64 / azimuths as f64;
                let n = [r * phi.cos(), r * phi.sin(), z];
                let w = radial_weight * 0.5 * wz / azimuths as f64;
                for i in 0..3 {
                    for j in 0..3 {
                        out[i][j] += w * n[i] * n[j];
                    }
                }
            }
        }
    }
    out
}
