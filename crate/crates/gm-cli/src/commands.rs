use std::f64::consts::PI;

use anyhow::{anyhow, bail, Context};
use clap::{ArgGroup, Args, ValueEnum};
use group_metrology::groups::{
    heisenberg_kappa, integers_min, real_line_interval_min, real_line_kappa, real_line_positive_kappa,
    so3_finite_cut_min, su2_finite_cut_min, u1_finite_cut_min, EnergyCurve, MinErrorReport, WaveFunction,
};
use group_metrology::simulate::{run_protocol, schur_walk, ProtocolConfig, ProtocolGroup, TrueParameter};
use rayon::prelude::*;

use crate::record::OutputRecord;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Factor {
    /// Integer spins.
    Plus,
    /// Half-integer spins.
    Minus,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Sector {
    Integer,
    HalfInteger,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum KappaGroup {
    U1,
    Su2,
    So3,
    RealLine,
    RealLinePositive,
    Heisenberg,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CutGroup {
    U1,
    Su2,
    So3,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum StateGroup {
    U1,
    Su2,
    So3,
    RealLine,
    RealLinePositive,
    Interval,
    Integers,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SimulateGroup {
    U1,
    Su2,
    So3Plus,
    So3Minus,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("energies").required(true).args(["energy", "energy_grid"])))]
pub struct KappaArgs {
    #[arg(long, value_enum)]
    group: KappaGroup,
    /// SO(3) spin sector.
    #[arg(long, value_enum, default_value_t = Factor::Plus)]
    factor: Factor,
    #[arg(long)]
    energy: Option<f64>,
    /// Comma list `a,b,c` or linear range `lo:hi:count`, ascending.
    #[arg(long)]
    energy_grid: Option<String>,
}

#[derive(Args, Debug)]
pub struct CutArgs {
    #[arg(long, value_enum)]
    group: CutGroup,
    /// SO(3) spin sector.
    #[arg(long, value_enum, default_value_t = Sector::Integer)]
    sector: Sector,
    /// Cut-offs: comma list `a,b,c` or inclusive range `lo:hi`, ascending.
    #[arg(long)]
    cut: String,
}

#[derive(Args, Debug)]
pub struct StateArgs {
    #[arg(long, value_enum)]
    group: StateGroup,
    #[arg(long, value_enum, default_value_t = Factor::Plus)]
    factor: Factor,
    #[arg(long, value_enum, default_value_t = Sector::Integer)]
    sector: Sector,
    #[arg(long, conflicts_with = "cut")]
    energy: Option<f64>,
    #[arg(long)]
    cut: Option<usize>,
    /// Half-length of the interval group's generator support.
    #[arg(long)]
    length: Option<f64>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    group: SimulateGroup,
    /// Use the optimal state for this energy budget.
    #[arg(long, conflicts_with_all = ["labels", "amplitudes"])]
    energy: Option<f64>,
    /// Charges (U(1)) or spins j, comma separated.
    #[arg(long, requires = "amplitudes")]
    labels: Option<String>,
    /// Per-label coefficients β, comma separated; rescaled to unit norm.
    #[arg(long, requires = "labels")]
    amplitudes: Option<String>,
    /// True phase for U(1).
    #[arg(long, default_value_t = 0.3, allow_hyphen_values = true)]
    theta: f64,
    /// True rotation vector `x,y,z` for SU(2) and SO(3).
    #[arg(long, default_value = "0.3,-0.2,0.5", allow_hyphen_values = true)]
    rotation: String,
    #[arg(long, default_value_t = 400)]
    samples: usize,
    #[arg(long, default_value_t = 2000)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args, Debug)]
pub struct SchurArgs {
    /// Number of qubits.
    #[arg(long)]
    qubits: usize,
}

fn parse_list<T: std::str::FromStr>(text: &str) -> anyhow::Result<Vec<T>>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    text.split(',')
        .map(|s| s.trim().parse::<T>().with_context(|| format!("cannot parse {s:?}")))
        .collect()
}

fn ensure_ascending<T: PartialOrd + std::fmt::Debug>(grid: &[T]) -> anyhow::Result<()> {
    if grid.is_empty() {
        bail!("grid is empty");
    }
    if let Some(w) = grid.windows(2).find(|w| w[0] >= w[1]) {
        bail!("grid is not strictly ascending at {:?}, {:?}", w[0], w[1]);
    }
    Ok(())
}

fn energy_grid(args: &KappaArgs) -> anyhow::Result<Vec<f64>> {
    let grid = match (&args.energy_grid, args.energy) {
        (Some(text), _) => match text.split(':').collect::<Vec<_>>()[..] {
            [lo, hi, count] => {
                let (lo, hi): (f64, f64) = (lo.parse()?, hi.parse()?);
                let count: usize = count.parse()?;
                match count {
                    0 => Vec::new(),
                    1 => vec![lo],
                    _ => (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect(),
                }
            }
            [_] => parse_list(text)?,
            _ => bail!("energy grid must be `a,b,c` or `lo:hi:count`"),
        },
        (None, Some(e)) => vec![e],
        (None, None) => bail!("give --energy or --energy-grid"),
    };
    ensure_ascending(&grid)?;
    Ok(grid)
}

fn cut_grid(text: &str) -> anyhow::Result<Vec<usize>> {
    let grid = match text.split(':').collect::<Vec<_>>()[..] {
        [lo, hi] => (lo.parse()?..=hi.parse()?).collect(),
        [_] => parse_list(text)?,
        _ => bail!("cut grid must be `a,b,c` or `lo:hi`"),
    };
    ensure_ascending(&grid)?;
    Ok(grid)
}

/// The command-line spelling of a value.
fn flag<V: ValueEnum>(value: V) -> String {
    value
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default()
}

fn so3_curve(factor: Factor) -> EnergyCurve {
    match factor {
        Factor::Plus => EnergyCurve::So3Plus,
        Factor::Minus => EnergyCurve::So3Minus,
    }
}

fn relative(approx: f64, exact: f64) -> f64 {
    ((approx - exact) / exact).abs()
}

pub fn kappa(args: &KappaArgs) -> anyhow::Result<OutputRecord> {
    let grid = energy_grid(args)?;
    let mut record = OutputRecord::new(
        "kappa",
        &["E", "kappa", "s_E", "approx_large", "approx_small", "rel_err_large", "rel_err_small"],
    );
    record.parameter("group", flag(args.group));
    if args.group == KappaGroup::So3 {
        record.parameter("factor", flag(args.factor));
    }
    let curve = match args.group {
        KappaGroup::U1 => Some(EnergyCurve::U1),
        KappaGroup::Su2 => Some(EnergyCurve::Su2),
        KappaGroup::So3 => Some(so3_curve(args.factor)),
        _ => None,
    };
    let rows: Vec<Result<Vec<Option<f64>>, String>> = grid
        .par_iter()
        .map(|&e| {
            if let Some(curve) = curve {
                let r = curve.kappa(e).map_err(|x| x.to_string())?;
                let large = curve.large_energy_expansion(e);
                let small = curve.small_energy_expansion(e);
                return Ok(vec![
                    Some(e),
                    Some(r.kappa),
                    r.s_e,
                    Some(large),
                    Some(small),
                    Some(relative(large, r.kappa)),
                    Some(relative(small, r.kappa)),
                ]);
            }
            // Closed forms c/E, whose multiplier is s_E = −dκ/dE = c/E².
            let r = match args.group {
                KappaGroup::RealLine => real_line_kappa(e),
                KappaGroup::RealLinePositive => real_line_positive_kappa(e),
                _ => heisenberg_kappa(e),
            }
            .map_err(|x| x.to_string())?;
            let k = r.kappa;
            Ok(vec![Some(e), Some(k), Some(k / e), Some(k), Some(k), Some(0.0), Some(0.0)])
        })
        .collect();
    for (e, row) in grid.iter().zip(rows) {
        match row {
            Ok(row) => record.push(*e, row),
            Err(message) => record.fail(*e, message),
        }
    }
    Ok(record)
}

pub fn cut(args: &CutArgs) -> anyhow::Result<OutputRecord> {
    let grid = cut_grid(&args.cut)?;
    let mut record = OutputRecord::new("cut", &["n", "kappa", "n2_kappa", "limit"]);
    record.parameter("group", flag(args.group));
    if args.group == CutGroup::So3 {
        record.parameter("sector", sector_name(args.sector));
    }
    let limit = match args.group {
        CutGroup::U1 => PI * PI / 8.0,
        _ => PI * PI / 2.0,
    };
    let rows: Vec<Result<f64, String>> = grid
        .par_iter()
        .map(|&n| {
            match args.group {
                CutGroup::U1 => u1_finite_cut_min::<f64>(n),
                CutGroup::Su2 => su2_finite_cut_min(n),
                CutGroup::So3 => so3_finite_cut_min(n, args.sector == Sector::Integer),
            }
            .map(|r| r.kappa)
            .map_err(|e| e.to_string())
        })
        .collect();
    for (&n, row) in grid.iter().zip(rows) {
        let x = n as f64;
        match row {
            Ok(k) => record.push(x, vec![Some(x), Some(k), Some(x * x * k), Some(limit)]),
            Err(message) => record.fail(x, message),
        }
    }
    Ok(record)
}

fn sector_name(sector: Sector) -> &'static str {
    match sector {
        Sector::Integer => "integer",
        Sector::HalfInteger => "half-integer",
    }
}

fn require<T>(value: Option<T>, option: &str, group: StateGroup) -> anyhow::Result<T> {
    value.ok_or_else(|| anyhow!("group {} needs --{option}", flag(group)))
}

pub fn state(args: &StateArgs) -> anyhow::Result<OutputRecord> {
    let mut record = OutputRecord::new("state", &["label", "amplitude", "weight"]);
    record.parameter("group", flag(args.group));
    let group = args.group;
    let report: MinErrorReport<f64> = match group {
        StateGroup::U1 | StateGroup::Su2 | StateGroup::So3 => match (args.energy, args.cut) {
            (Some(e), _) => {
                record.parameter("energy", e);
                let curve = match group {
                    StateGroup::U1 => EnergyCurve::U1,
                    StateGroup::Su2 => EnergyCurve::Su2,
                    _ => {
                        record.parameter("factor", flag(args.factor));
                        so3_curve(args.factor)
                    }
                };
                curve.kappa(e)?
            }
            (None, Some(n)) => {
                record.parameter("cut", n);
                match group {
                    StateGroup::U1 => u1_finite_cut_min(n)?,
                    StateGroup::Su2 => su2_finite_cut_min(n)?,
                    _ => {
                        record.parameter("sector", sector_name(args.sector));
                        so3_finite_cut_min(n, args.sector == Sector::Integer)?
                    }
                }
            }
            (None, None) => bail!("group {} needs --energy or --cut", flag(group)),
        },
        StateGroup::RealLine | StateGroup::RealLinePositive => {
            let e = require(args.energy, "energy", group)?;
            record.parameter("energy", e);
            if group == StateGroup::RealLine {
                real_line_kappa(e)?
            } else {
                real_line_positive_kappa(e)?
            }
        }
        StateGroup::Interval => {
            let l = require(args.length, "length", group)?;
            record.parameter("length", l);
            real_line_interval_min(l)?
        }
        StateGroup::Integers => integers_min()?,
    };
    let state = report
        .optimal_state
        .as_ref()
        .ok_or_else(|| anyhow!("no state is available for this group"))?;
    for ((&l, &a), &w) in state.labels().iter().zip(state.amplitudes()).zip(state.weights()) {
        record.push(l, vec![Some(l), Some(a), Some(w)]);
    }
    record.footer.insert("norm".into(), state.norm_sqr());
    record.footer.insert("kappa".into(), report.kappa);
    if let Some(e) = report.state_energy {
        record.footer.insert("state_energy".into(), e);
    }
    Ok(record)
}

fn simulation_state(args: &SimulateArgs) -> anyhow::Result<WaveFunction<f64>> {
    if let Some(e) = args.energy {
        let curve = match args.group {
            SimulateGroup::U1 => EnergyCurve::U1,
            SimulateGroup::Su2 => EnergyCurve::Su2,
            SimulateGroup::So3Plus => EnergyCurve::So3Plus,
            SimulateGroup::So3Minus => EnergyCurve::So3Minus,
        };
        return curve
            .kappa(e)?
            .optimal_state
            .ok_or_else(|| anyhow!("no optimal state at energy {e}"));
    }
    let (Some(labels), Some(beta)) = (&args.labels, &args.amplitudes) else {
        bail!("give --energy, or --labels with --amplitudes");
    };
    let labels: Vec<f64> = parse_list(labels)?;
    let beta: Vec<f64> = parse_list(beta)?;
    let weights = match args.group {
        SimulateGroup::U1 => vec![1.0; labels.len()],
        _ => labels.iter().map(|j| 2.0 * j + 1.0).collect(),
    };
    Ok(WaveFunction::from_coefficients(labels, &beta, weights)?)
}

pub fn simulate(args: &SimulateArgs) -> anyhow::Result<OutputRecord> {
    let state = simulation_state(args)?;
    let (group, true_parameter) = match args.group {
        SimulateGroup::U1 => (ProtocolGroup::U1, TrueParameter::Angle(args.theta)),
        other => {
            let v: Vec<f64> = parse_list(&args.rotation)?;
            let [x, y, z] = v[..] else {
                bail!("--rotation needs three components");
            };
            let group = match other {
                SimulateGroup::Su2 => ProtocolGroup::Su2,
                SimulateGroup::So3Plus => ProtocolGroup::So3Plus,
                _ => ProtocolGroup::So3Minus,
            };
            (group, TrueParameter::RotationVector([x, y, z]))
        }
    };
    let config = ProtocolConfig {
        group,
        state,
        true_parameter,
        samples_per_trial: args.samples,
        trials: args.trials,
        seed: args.seed,
    };
    let report = run_protocol(&config)?;
    let mut record = OutputRecord::new(
        "simulate",
        &[
            "samples",
            "trials",
            "flat_trials",
            "energy",
            "risk",
            "std_error",
            "scaled_risk",
            "scaled_std_error",
            "predicted_scaled_risk",
            "fisher_numeric",
            "fisher_predicted",
        ],
    );
    record.parameter("group", group.to_string());
    record.parameter("seed", args.seed);
    match true_parameter {
        TrueParameter::Angle(t) => record.parameter("theta", t),
        TrueParameter::RotationVector(v) => record.parameter("rotation", v.to_vec()),
    }
    if let Some(e) = args.energy {
        record.parameter("state_energy_budget", e);
    }
    record.push(
        report.energy,
        vec![
            Some(report.samples_per_trial as f64),
            Some(report.trials as f64),
            Some(report.flat_trials as f64),
            Some(report.energy),
            Some(report.risk_estimate),
            Some(report.std_error),
            Some(report.scaled_risk()),
            Some(report.scaled_std_error()),
            Some(report.predicted_scaled_risk),
            Some(report.fisher_numeric),
            Some(report.fisher_predicted),
        ],
    );
    Ok(record)
}

pub fn schur(args: &SchurArgs) -> anyhow::Result<OutputRecord> {
    let walk = schur_walk(args.qubits)?;
    let mut record = OutputRecord::new("schur", &["k", "spin", "probability"]);
    record.parameter("qubits", args.qubits);
    for (k, &p) in walk.distribution.iter().enumerate() {
        let k = k as f64;
        record.push(k, vec![Some(k), Some(k / 2.0), Some(p)]);
    }
    record.footer.insert("ks_to_chi2".into(), walk.ks_to_chi2);
    record.footer.insert("mass".into(), walk.distribution.iter().sum());
    Ok(record)
}
