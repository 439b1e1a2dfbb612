//! The `n,L1,...` table of `t_{b_n}` values.

use rayon::prelude::*;
use trotter_core::qpe::{qpe_column, t_bn_from_inputs};
use trotter_core::Error;

use crate::csv::{format_number, Table};
use crate::error::{CliError, CliResult};

/// Parses `a:b` (inclusive), `a,b,c` or a single integer.
pub fn parse_int_list(s: &str) -> Result<Vec<usize>, String> {
    let bad = || format!("bad list `{s}` (expected a:b, a,b,c or a single integer)");
    if let Some((a, b)) = s.split_once(':') {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| bad()))
        .collect()
}

/// Columns are computed in parallel, one per chain length.
pub fn qpe_table(lens: &[usize], ns: &[usize], coupling: f64) -> CliResult<Table> {
    if lens.is_empty() || ns.is_empty() {
        return Err(CliError::Usage("qpe needs at least one L and one n".into()));
    }
    if ns.contains(&0) {
        return Err(CliError::Usage("n must be at least 1".into()));
    }
    if !(coupling > 0.0 && coupling.is_finite()) {
        return Err(CliError::Usage(format!(
            "--coupling must be positive, got {coupling}"
        )));
    }
    let mut ns = ns.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let columns = lens
        .par_iter()
        .map(|&len| -> CliResult<(f64, Vec<(f64, usize)>)> {
            let (_, t_qpe, inputs) = qpe_column(len, coupling)?;
            let cells = ns
                .iter()
                .map(|&n| match t_bn_from_inputs(&inputs, n) {
                    Ok(scan) => Ok((scan.t_bn, scan.islands.len())),
                    Err(Error::TrivialBound { .. }) => Ok((0.0, 0)),
                    Err(e) => Err(e.into()),
                })
                .collect::<CliResult<Vec<_>>>()?;
            Ok((t_qpe, cells))
        })
        .collect::<CliResult<Vec<_>>>()?;

    let mut header = vec!["n".to_string()];
    header.extend((1..=lens.len()).map(|i| format!("L{i}")));
    let mut footer = vec![format!(
        "coupling={coupling} mode=exact t_bn=end of first positive interval of lower_norm_refined"
    )];
    for (i, (len, (t_qpe, _))) in lens.iter().zip(&columns).enumerate() {
        footer.push(format!(
            "L{}: L={len} t_qpe={}",
            i + 1,
            format_number(*t_qpe)
        ));
    }
    let mut rows = Vec::with_capacity(ns.len());
    for (r, &n) in ns.iter().enumerate() {
        let mut row = vec![n as f64];
        let mut islands = Vec::new();
        for (_, cells) in &columns {
            row.push(cells[r].0);
            islands.push(if cells[r].1 == 0 {
                "trivial".to_string()
            } else {
                cells[r].1.to_string()
            });
        }
        rows.push(row);
        footer.push(format!("n={n} islands={}", islands.join(",")));
    }
    Ok(Table {
        header,
        rows,
        footer,
    })
}
