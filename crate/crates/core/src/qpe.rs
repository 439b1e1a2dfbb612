//! Evolution-time thresholds for phase estimation on the `XX` chain.
//!
//! Phase estimation needs `t < t_QPE = 1/‖H‖` so that the eigenphases of
//! `e^{-itH}` do not wrap around the unit circle. `t_{b_n}` is the end of the
//! first interval of `t` on which the refined lower bound on `b_n(t)` is
//! strictly positive.

use crate::bounds::{lower_norm_bound_refined, NormMode};
use crate::error::{Error, Result};
use crate::linalg::top_singular_value;
use crate::models::{ChainBoundInputs, XXChainModel};

/// Number of scan points on `(0, 2n/‖A‖]`.
pub const SCAN_POINTS: usize = 1000;
/// Bisection tolerance on the island edges.
pub const BISECTION_TOLERANCE: f64 = 1e-8;
/// Coupling at which the chain matches unit-weight `XX + YY` bonds.
pub const DEFAULT_COUPLING: f64 = 4.0;

/// `1/‖A + B‖`.
pub fn t_qpe(model: &XXChainModel) -> Result<f64> {
    Ok(1.0 / top_singular_value(&model.h())?)
}

/// Result of a `t_{b_n}` scan.
#[derive(Clone, Debug, PartialEq)]
pub struct TbnScan {
    /// Supremum of the first positivity interval.
    pub t_bn: f64,
    /// Positivity intervals found on the scan, edges bisected.
    pub islands: Vec<(f64, f64)>,
    /// End of the scanned range, `2n/‖A‖`.
    pub t_max: f64,
}

/// Scans the refined bound with exact norms for its first positivity
/// interval.
pub fn t_bn_max(model: &XXChainModel, n: usize) -> Result<TbnScan> {
    let inputs = model.bound_inputs(NormMode::Exact)?;
    t_bn_from_inputs(&inputs, n)
}

/// As [`t_bn_max`], with precomputed bound inputs.
pub fn t_bn_from_inputs(inputs: &ChainBoundInputs, n: usize) -> Result<TbnScan> {
    if n == 0 {
        return Err(Error::ZeroSteps);
    }
    let bound = |t: f64| -> Result<f64> {
        Ok(lower_norm_bound_refined(t, n, &inputs.norms, &inputs.gaps)?.raw)
    };
    let t_max = inputs.norms.window(n);
    if !t_max.is_finite() {
        return Err(Error::CommutingSplitting);
    }
    let grid: Vec<f64> = (1..=SCAN_POINTS)
        .map(|i| t_max * i as f64 / SCAN_POINTS as f64)
        .collect();
    let values = grid.iter().map(|&t| bound(t)).collect::<Result<Vec<_>>>()?;

    let mut islands = Vec::new();
    let mut start: Option<f64> = None;
    for i in 0..grid.len() {
        let positive = values[i] > 0.0;
        match (start, positive) {
            (None, true) => {
                start = Some(if i == 0 {
                    0.0
                } else {
                    bisect(&bound, grid[i - 1], grid[i], false)?
                });
            }
            (Some(s), false) => {
                islands.push((s, bisect(&bound, grid[i - 1], grid[i], true)?));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        islands.push((s, t_max));
    }
    match islands.first() {
        Some(&(_, end)) => Ok(TbnScan {
            t_bn: end,
            islands,
            t_max,
        }),
        None => Err(Error::TrivialBound { t_max }),
    }
}

/// Edge of positivity in `[lo, hi]`; `positive_at_lo` tells which end is
/// positive. Returns the last point known positive.
fn bisect(
    f: &impl Fn(f64) -> Result<f64>,
    mut lo: f64,
    mut hi: f64,
    positive_at_lo: bool,
) -> Result<f64> {
    while hi - lo > BISECTION_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if (f(mid)? > 0.0) == positive_at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(if positive_at_lo { lo } else { hi })
}

/// One row of the phase-estimation table.
#[derive(Clone, Debug, PartialEq)]
pub struct QpeScanRow {
    pub n: usize,
    /// `t_{b_n}` per chain length; `None` where the bound is nowhere positive.
    pub t_bn: Vec<Option<f64>>,
    /// Island counts per chain length.
    pub islands: Vec<usize>,
}

/// `t_{b_n}` for a range of `n` and chain lengths, with `t_QPE` per length.
#[derive(Clone, Debug, PartialEq)]
pub struct QpeTable {
    pub lens: Vec<usize>,
    pub coupling: f64,
    pub t_qpe: Vec<f64>,
    pub rows: Vec<QpeScanRow>,
}

impl QpeTable {
    /// `n,L1,L2,...`.
    pub fn header(&self) -> Vec<String> {
        std::iter::once("n".to_string())
            .chain((1..=self.lens.len()).map(|i| format!("L{i}")))
            .collect()
    }
}

/// Per-length work for [`qpe_scan`]: `t_QPE` and the bound inputs.
pub fn qpe_column(len: usize, coupling: f64) -> Result<(XXChainModel, f64, ChainBoundInputs)> {
    let model = XXChainModel::build(len, coupling)?;
    let tq = t_qpe(&model)?;
    let inputs = model.bound_inputs(NormMode::Exact)?;
    Ok((model, tq, inputs))
}

/// Builds the table sequentially; rows are sorted by `n`.
pub fn qpe_scan(lens: &[usize], ns: &[usize], coupling: f64) -> Result<QpeTable> {
    let columns = lens
        .iter()
        .map(|&len| qpe_column(len, coupling))
        .collect::<Result<Vec<_>>>()?;
    let mut ns = ns.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let rows = ns
        .iter()
        .map(|&n| {
            let mut row = QpeScanRow {
                n,
                t_bn: Vec::new(),
                islands: Vec::new(),
            };
            for (_, _, inputs) in &columns {
                match t_bn_from_inputs(inputs, n) {
                    Ok(scan) => {
                        row.t_bn.push(Some(scan.t_bn));
                        row.islands.push(scan.islands.len());
                    }
                    Err(Error::TrivialBound { .. }) => {
                        row.t_bn.push(None);
                        row.islands.push(0);
                    }
                    Err(e) => return Err(e),
                }
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QpeTable {
        lens: lens.to_vec(),
        coupling,
        t_qpe: columns.iter().map(|c| c.1).collect(),
        rows,
    })
}
