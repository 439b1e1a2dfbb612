//! Parameter sweeps over `t`, `n` or `L`.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use trotter_core::bounds::{
    best_lower_state_bound, lower_norm_bound_refined, minimize_upper_shift, upper_norm_bound,
    upper_state_bound, BoundReport, GapData, NormMode, NormSet, ShiftMinimum,
};
use trotter_core::linalg::operator_norm;
use trotter_core::models::{SingleQubitModel, XXChainModel, MAX_LEN, MIN_LEN};
use trotter_core::trotter::{EigenPair, Splitting};
use trotter_core::Error;

use crate::csv::Table;
use crate::error::{CliError, CliResult};
use crate::matrix_file::load_splitting;

pub type SweepResult = Table;

#[derive(Clone, Debug, PartialEq)]
pub enum Model {
    SingleQubit,
    XXChain,
    CustomFile(PathBuf),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    T,
    N,
    L,
}

impl Axis {
    fn name(self) -> &'static str {
        match self {
            Axis::T => "t",
            Axis::N => "n",
            Axis::L => "L",
        }
    }
}

impl FromStr for Axis {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "t" => Ok(Axis::T),
            "n" => Ok(Axis::N),
            "L" | "l" => Ok(Axis::L),
            _ => Err(format!("unknown axis `{s}` (expected t, n or L)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    State,
    Norm,
    Both,
}

impl Metric {
    fn state(self) -> bool {
        self != Metric::Norm
    }
    fn norm(self) -> bool {
        self != Metric::State
    }
}

impl FromStr for Metric {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "state" => Ok(Metric::State),
            "norm" => Ok(Metric::Norm),
            "both" => Ok(Metric::Both),
            _ => Err(format!(
                "unknown metric `{s}` (expected state, norm or both)"
            )),
        }
    }
}

/// Which second eigenstate feeds the lower bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KChoice {
    /// Best candidate per point.
    Auto,
    Fixed(usize),
}

impl FromStr for KChoice {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(KChoice::Auto);
        }
        s.parse()
            .map(KChoice::Fixed)
            .map_err(|_| format!("bad k `{s}` (expected auto or an integer)"))
    }
}

/// `start:stop:points`, inclusive on both ends.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / last
                }
            })
            .collect()
    }

    /// Rounded to integers, consecutive duplicates removed.
    pub fn integers(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.values().iter().map(|v| v.round() as usize).collect();
        out.dedup();
        out
    }
}

impl FromStr for Grid {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || format!("bad grid `{s}` (expected start:stop:points)");
        if parts.len() != 3 {
            return Err(bad());
        }
        let start: f64 = parts[0].parse().map_err(|_| bad())?;
        let stop: f64 = parts[1].parse().map_err(|_| bad())?;
        let points: usize = parts[2].parse().map_err(|_| bad())?;
        if !start.is_finite() || !stop.is_finite() {
            return Err(bad());
        }
        Ok(Grid {
            start,
            stop,
            points,
        })
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.points)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub model: Model,
    pub axis: Axis,
    /// Fixed evolution time for the `n` and `L` axes.
    pub t: Option<f64>,
    /// Fixed step count for the `t` and `L` axes.
    pub n: Option<usize>,
    /// Chain length for the `t` and `n` axes.
    pub len: Option<usize>,
    pub coupling: f64,
    pub grid: Grid,
    pub mode: NormMode,
    pub metric: Metric,
    pub k: KChoice,
}

impl SweepSpec {
    pub fn validate(&self) -> CliResult<()> {
        let usage = |m: String| Err(CliError::Usage(m));
        if self.grid.points < 2 {
            return usage(format!(
                "grid needs at least 2 points, got {}",
                self.grid.points
            ));
        }
        let chain = self.model == Model::XXChain;
        match self.axis {
            Axis::T => {
                if self.grid.start < 0.0 || self.grid.stop < 0.0 {
                    return usage("t grid must be nonnegative".into());
                }
            }
            Axis::N | Axis::L => {
                if self.grid.start < 1.0 || self.grid.stop < 1.0 {
                    return usage(format!(
                        "{} grid must start at 1 or above",
                        self.axis.name()
                    ));
                }
            }
        }
        if self.axis != Axis::T {
            match self.t {
                Some(t) if t >= 0.0 && t.is_finite() => {}
                Some(t) => return usage(format!("--t must be finite and nonnegative, got {t}")),
                None => return usage(format!("--t is required for axis {}", self.axis.name())),
            }
        }
        if self.axis != Axis::N {
            match self.n {
                Some(n) if n >= 1 => {}
                Some(_) => return usage("--n must be at least 1".into()),
                None => return usage(format!("--n is required for axis {}", self.axis.name())),
            }
        }
        if chain {
            if !(self.coupling > 0.0 && self.coupling.is_finite()) {
                return usage(format!(
                    "--coupling must be positive, got {}",
                    self.coupling
                ));
            }
            let lens = match self.axis {
                Axis::L => self.grid.integers(),
                _ => match self.len {
                    Some(l) => vec![l],
                    None => return usage("--l is required for the xx-chain model".into()),
                },
            };
            if let Some(l) = lens.iter().find(|&&l| !(MIN_LEN..=MAX_LEN).contains(&l)) {
                return usage(format!("chain length {l} outside {MIN_LEN}..={MAX_LEN}"));
            }
        } else {
            if self.axis == Axis::L {
                return usage("axis L needs --model xx-chain".into());
            }
            if self.mode == NormMode::Certificate {
                return usage("certificate mode needs --model xx-chain".into());
            }
        }
        Ok(())
    }
}

enum Bounds {
    /// Generic bounds on precomputed norms and candidates.
    Generic {
        norms: NormSet,
        gaps: Vec<GapData>,
        shift: ShiftMinimum,
    },
    /// Closed-form chain bounds.
    ChainCertificate(XXChainModel),
}

/// Everything needed to evaluate one row.
struct Problem {
    splitting: Splitting,
    phi: EigenPair,
    bounds: Bounds,
    k: Option<usize>,
    state_label: &'static str,
}

fn pick_gaps(gaps: Vec<GapData>, k: KChoice) -> CliResult<Vec<GapData>> {
    match k {
        KChoice::Auto => Ok(gaps),
        KChoice::Fixed(k) => {
            let kept: Vec<GapData> = gaps.into_iter().filter(|g| g.k == Some(k)).collect();
            if kept.is_empty() {
                return Err(CliError::Usage(format!(
                    "k = {k} is not a usable candidate"
                )));
            }
            Ok(kept)
        }
    }
}

/// Ground state `φ`; every other nondegenerate eigenstate is a candidate,
/// labelled by its index in the sorted spectrum.
fn dense_problem(splitting: Splitting, k: KChoice) -> CliResult<Problem> {
    let phi = splitting.eigenpair(0);
    let mut gaps = Vec::new();
    for j in 1..splitting.dim() {
        match GapData::from_eigenpairs(splitting.a(), &phi, &splitting.eigenpair(j)) {
            Ok(g) => gaps.push(g.with_label(j)),
            Err(Error::DegenerateGap) => {}
            Err(e) => return Err(e.into()),
        }
    }
    let radius = splitting.a_norm() + operator_norm(splitting.b().matrix()) + phi.value.abs();
    let shift = minimize_upper_shift(splitting.a(), splitting.b(), phi.value, &phi.vector, radius)?;
    Ok(Problem {
        bounds: Bounds::Generic {
            norms: NormSet::exact(&splitting),
            gaps: pick_gaps(gaps, k)?,
            shift,
        },
        splitting,
        phi,
        k: match k {
            KChoice::Auto => None,
            KChoice::Fixed(k) => Some(k),
        },
        state_label: "ground",
    })
}

fn chain_problem(len: usize, coupling: f64, mode: NormMode, k: KChoice) -> CliResult<Problem> {
    let model = XXChainModel::build(len, coupling)?;
    let k = match k {
        KChoice::Auto => None,
        KChoice::Fixed(k) if model.usable_modes().contains(&k) => Some(k),
        KChoice::Fixed(k) => {
            return Err(CliError::Usage(format!(
                "k = {k} is not a usable mode at L = {len}"
            )))
        }
    };
    let bounds = match mode {
        NormMode::Exact => {
            let inputs = model.bound_inputs(NormMode::Exact)?;
            let gaps = match k {
                Some(k) => pick_gaps(inputs.gaps, KChoice::Fixed(k))?,
                None => inputs.gaps,
            };
            Bounds::Generic {
                norms: inputs.norms,
                gaps,
                shift: inputs.upper_shift,
            }
        }
        NormMode::Certificate => Bounds::ChainCertificate(model.clone()),
    };
    Ok(Problem {
        splitting: model.dense_splitting()?,
        phi: model.vacuum(),
        bounds,
        k,
        state_label: "vacuum",
    })
}

fn build_problem(spec: &SweepSpec, len: Option<usize>) -> CliResult<Problem> {
    match &spec.model {
        Model::SingleQubit => dense_problem(SingleQubitModel::build().splitting().clone(), spec.k),
        Model::CustomFile(path) => dense_problem(load_splitting(path)?, spec.k),
        Model::XXChain => chain_problem(
            len.expect("validated chain length"),
            spec.coupling,
            spec.mode,
            spec.k,
        ),
    }
}

struct Row {
    errors: Vec<f64>,
    uppers: Vec<f64>,
    lowers: Vec<f64>,
    notes: Vec<String>,
}

fn evaluate(problem: &Problem, metric: Metric, t: f64, n: usize) -> CliResult<Row> {
    let errs = problem
        .splitting
        .errors(t, n, metric.state().then_some(&problem.phi))?;
    let mut row = Row {
        errors: Vec::new(),
        uppers: Vec::new(),
        lowers: Vec::new(),
        notes: Vec::new(),
    };
    let lower = |report: Option<BoundReport>, name: &str, row: &mut Row| match report {
        Some(r) => {
            row.lowers.push(r.value);
            row.notes.push(format!("{name}: {}", r.provenance()));
        }
        None => {
            row.lowers.push(0.0);
            row.notes.push(format!("{name}: no candidate"));
        }
    };
    if metric.state() {
        row.errors.push(errs.state.expect("state requested"));
        match &problem.bounds {
            Bounds::Generic { norms, gaps, shift } => {
                row.uppers
                    .push(upper_state_bound(t, n, shift, norms.mode)?.value);
                lower(
                    best_lower_state_bound(t, n, gaps, norms)?,
                    "state",
                    &mut row,
                );
            }
            Bounds::ChainCertificate(model) => {
                row.uppers.push(model.chain_state_upper(t, n)?);
                lower(
                    Some(model.chain_state_bound(t, n, problem.k)?),
                    "state",
                    &mut row,
                );
            }
        }
    }
    if metric.norm() {
        row.errors.push(errs.norm);
        match &problem.bounds {
            Bounds::Generic { norms, gaps, .. } => {
                row.uppers.push(upper_norm_bound(t, n, norms)?.value);
                lower(
                    Some(lower_norm_bound_refined(t, n, norms, gaps)?),
                    "norm",
                    &mut row,
                );
            }
            Bounds::ChainCertificate(model) => {
                row.uppers.push(model.chain_norm_upper(t, n)?);
                lower(
                    Some(model.chain_norm_bound(t, n, problem.k)?),
                    "norm",
                    &mut row,
                );
            }
        }
    }
    Ok(row)
}

fn header(axis: Axis, metric: Metric) -> Vec<String> {
    let mut out = vec![axis.name().to_string()];
    for col in ["error", "upper", "lower"] {
        match metric {
            Metric::Both => {
                out.push(format!("{col}_state"));
                out.push(format!("{col}_norm"));
            }
            _ => out.push(col.to_string()),
        }
    }
    out
}

/// One row per grid point in axis order; rows are computed in parallel.
pub fn run_sweep(spec: &SweepSpec) -> CliResult<SweepResult> {
    spec.validate()?;
    let axis_values: Vec<f64> = match spec.axis {
        Axis::T => spec.grid.values(),
        Axis::N | Axis::L => spec.grid.integers().into_iter().map(|v| v as f64).collect(),
    };
    let shared = match spec.axis {
        Axis::L => None,
        _ => Some(build_problem(spec, spec.len)?),
    };
    let rows = axis_values
        .par_iter()
        .map(|&x| -> CliResult<(Vec<f64>, String)> {
            let (t, n) = match spec.axis {
                Axis::T => (x, spec.n.expect("validated")),
                Axis::N => (spec.t.expect("validated"), x as usize),
                Axis::L => (spec.t.expect("validated"), spec.n.expect("validated")),
            };
            let local;
            let problem = match &shared {
                Some(p) => p,
                None => {
                    local = build_problem(spec, Some(x as usize))?;
                    &local
                }
            };
            let row = evaluate(problem, spec.metric, t, n)?;
            let mut cells = vec![x];
            cells.extend(row.errors);
            cells.extend(row.uppers);
            cells.extend(row.lowers);
            let note = format!(
                "{}={} state={} {}",
                spec.axis.name(),
                crate::csv::format_number(x),
                problem.state_label,
                row.notes.join("; ")
            );
            Ok((cells, note))
        })
        .collect::<CliResult<Vec<_>>>()?;

    let mut footer = vec![summary(spec)];
    let mut table_rows = Vec::with_capacity(rows.len());
    for (cells, note) in rows {
        table_rows.push(cells);
        footer.push(note);
    }
    Ok(Table {
        header: header(spec.axis, spec.metric),
        rows: table_rows,
        footer,
    })
}

fn summary(spec: &SweepSpec) -> String {
    let mut out = format!(
        "axis={} grid={} mode={}",
        spec.axis.name(),
        spec.grid,
        spec.mode
    );
    if spec.axis != Axis::T {
        out.push_str(&format!(" t={}", spec.t.expect("validated")));
    }
    if spec.axis != Axis::N {
        out.push_str(&format!(" n={}", spec.n.expect("validated")));
    }
    if spec.model == Model::XXChain {
        if spec.axis != Axis::L {
            out.push_str(&format!(" L={}", spec.len.expect("validated")));
        }
        out.push_str(&format!(" J={}", spec.coupling));
    }
    if let KChoice::Fixed(k) = spec.k {
        out.push_str(&format!(" k={k}"));
    }
    out
}
