//! Monte-Carlo checks of the i.i.d.-copies-plus-maximum-likelihood protocols
//! and the exact spin-label random walk of qubit tensor powers.
//!
//! Every trial draws from its own ChaCha8 stream `(seed, trial)`, and trial
//! losses are collected in trial order before a pairwise sum, so reports do
//! not depend on the thread count.

mod cosine;
mod rotation;
mod schur;
mod u1;

pub use cosine::{circle_law, half_angle_law, CosineLaw, CDF_GRID_POINTS, MAX_BANDWIDTH};
pub use rotation::{
    conj, dot, fisher_rotation, from_rotation_vector, gauss_legendre, hurwitz_units, mle_rotation, mul,
    normalize, sample_rotation_outcome, Quaternion, RotationGroup, RotationLaw, ASCENT_START_STEP,
    ASCENT_STARTS, ASCENT_STEP_TOLERANCE, IDENTITY,
};
pub use schur::{chi2_3_cdf, ks_distance, limiting_cdf, schur_distribution, schur_walk, SchurWalkResult};
pub use u1::{fisher_u1, mle_u1, sample_u1_outcome, wrap_angle, U1Law, U1_REFINEMENTS, U1_SCAN_POINTS};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::groups::WaveFunction;

/// Largest tolerated fraction of trials with a flat likelihood.
pub const FLAT_TRIAL_CAP: f64 = 1e-3;

/// Result of one maximum-likelihood search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MleOutcome<G> {
    pub estimate: G,
    /// The likelihood did not separate any candidates.
    pub flat: bool,
}

/// Deterministic generator for one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProtocolGroup {
    U1,
    Su2,
    So3Plus,
    So3Minus,
}

impl ProtocolGroup {
    fn rotation(self) -> Option<RotationGroup> {
        match self {
            Self::U1 => None,
            Self::Su2 => Some(RotationGroup::Su2),
            Self::So3Plus => Some(RotationGroup::So3Plus),
            Self::So3Minus => Some(RotationGroup::So3Minus),
        }
    }
}

impl std::fmt::Display for ProtocolGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::U1 => "u1",
            Self::Su2 => "su2",
            Self::So3Plus => "so3-plus",
            Self::So3Minus => "so3-minus",
        })
    }
}

/// True parameter: a phase for U(1), a rotation vector otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrueParameter {
    Angle(f64),
    RotationVector([f64; 3]),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolConfig {
    pub group: ProtocolGroup,
    pub state: WaveFunction<f64>,
    pub true_parameter: TrueParameter,
    pub samples_per_trial: usize,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolReport {
    pub group: ProtocolGroup,
    pub samples_per_trial: usize,
    pub trials: usize,
    /// Trials excluded for a flat likelihood.
    pub flat_trials: usize,
    pub risk_estimate: f64,
    pub std_error: f64,
    /// `E_φ` of the input state.
    pub energy: f64,
    /// Predicted `m · risk` in the large-`m` limit.
    pub predicted_scaled_risk: f64,
    /// Fisher information per coordinate, by quadrature.
    pub fisher_numeric: f64,
    /// `4E_φ` for U(1), `(4/3)E_φ` otherwise.
    pub fisher_predicted: f64,
}

impl ProtocolReport {
    pub fn scaled_risk(&self) -> f64 {
        self.samples_per_trial as f64 * self.risk_estimate
    }

    pub fn scaled_std_error(&self) -> f64 {
        self.samples_per_trial as f64 * self.std_error
    }
}

/// Sum by recursive halving; the result depends only on the slice order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 8 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

fn validate(config: &ProtocolConfig) -> Result<()> {
    if config.samples_per_trial == 0 {
        return Err(Error::InvalidInput("samples per trial must be positive".into()));
    }
    if config.trials < 2 {
        return Err(Error::InvalidInput("a standard error needs at least two trials".into()));
    }
    Ok(())
}

/// Mean, standard error and flat count of per-trial losses.
fn summarize(losses: Vec<Option<f64>>) -> Result<(f64, f64, usize)> {
    let trials = losses.len();
    let kept: Vec<f64> = losses.iter().flatten().copied().collect();
    let flat = trials - kept.len();
    if flat as f64 > FLAT_TRIAL_CAP * trials as f64 || kept.len() < 2 {
        return Err(Error::TooManyFlat { flat, trials });
    }
    let n = kept.len() as f64;
    let mean = pairwise_sum(&kept) / n;
    let deviations: Vec<f64> = kept.iter().map(|x| (x - mean).powi(2)).collect();
    let variance = pairwise_sum(&deviations) / (n - 1.0);
    Ok((mean, (variance / n).sqrt(), flat))
}

/// U(1) phase protocol: `m` copies, covariant measurement on each, maximum
/// likelihood on the outcomes, loss `1 − cos(θ̂ − θ)`.
pub fn run_u1_protocol(config: &ProtocolConfig) -> Result<ProtocolReport> {
    validate(config)?;
    let TrueParameter::Angle(theta) = config.true_parameter else {
        return Err(Error::InvalidInput("U(1) needs an angle parameter".into()));
    };
    let law = U1Law::new(&config.state)?;
    if !law.is_even() {
        return Err(Error::Precondition(
            "the charge distribution must be mirror-symmetric about its mean".into(),
        ));
    }
    let energy = law.energy();
    if energy <= 0.0 {
        return Err(Error::Precondition("a single-charge state carries no phase information".into()));
    }
    let m = config.samples_per_trial;
    let losses: Vec<Option<f64>> = (0..config.trials)
        .into_par_iter()
        .map(|trial| -> Result<Option<f64>> {
            let mut rng = trial_rng(config.seed, trial as u64);
            let samples: Vec<f64> = (0..m).map(|_| sample_u1_outcome(&law, theta, &mut rng)).collect();
            let out = mle_u1(&samples, &law)?;
            Ok((!out.flat).then(|| 1.0 - (out.estimate - theta).cos()))
        })
        .collect::<Result<_>>()?;
    let (risk, std_error, flat) = summarize(losses)?;
    Ok(ProtocolReport {
        group: ProtocolGroup::U1,
        samples_per_trial: m,
        trials: config.trials,
        flat_trials: flat,
        risk_estimate: risk,
        std_error,
        energy,
        predicted_scaled_risk: 1.0 / (8.0 * energy),
        fisher_numeric: fisher_u1(&law),
        fisher_predicted: 4.0 * energy,
    })
}

/// SU(2) or SO(3) protocol: as for U(1), with group-element outcomes and the
/// loss of [`RotationLaw::loss`].
pub fn run_group_protocol(config: &ProtocolConfig) -> Result<ProtocolReport> {
    validate(config)?;
    let group = config
        .group
        .rotation()
        .ok_or_else(|| Error::InvalidInput("use the U(1) protocol for phases".into()))?;
    let TrueParameter::RotationVector(v) = config.true_parameter else {
        return Err(Error::InvalidInput("rotation groups need a rotation-vector parameter".into()));
    };
    let truth = from_rotation_vector(v);
    let law = RotationLaw::new(group, &config.state)?;
    let energy = law.energy();
    let n = config.samples_per_trial;
    let losses: Vec<Option<f64>> = (0..config.trials)
        .into_par_iter()
        .map(|trial| -> Result<Option<f64>> {
            let mut rng = trial_rng(config.seed, trial as u64);
            let samples: Vec<Quaternion> = (0..n).map(|_| sample_rotation_outcome(&law, &truth, &mut rng)).collect();
            let out = mle_rotation(&samples, &law)?;
            Ok((!out.flat).then(|| law.loss(&out.estimate, &truth)))
        })
        .collect::<Result<_>>()?;
    let (risk, std_error, flat) = summarize(losses)?;
    let fisher = fisher_rotation(&law);
    Ok(ProtocolReport {
        group: config.group,
        samples_per_trial: n,
        trials: config.trials,
        flat_trials: flat,
        risk_estimate: risk,
        std_error,
        energy,
        predicted_scaled_risk: law.predicted_scaled_risk(),
        fisher_numeric: (fisher[0][0] + fisher[1][1] + fisher[2][2]) / 3.0,
        fisher_predicted: 4.0 / 3.0 * energy,
    })
}

/// Dispatches on the configured group.
pub fn run_protocol(config: &ProtocolConfig) -> Result<ProtocolReport> {
    match config.group {
        ProtocolGroup::U1 => run_u1_protocol(config),
        _ => run_group_protocol(config),
    }
}
