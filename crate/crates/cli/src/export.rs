//! Plot-ready CSV writers. All numbers are rendered with 12 significant
//! digits so exports are reproducible across runs and platforms.

use consult_core::grid::Solution;
use consult_core::lattice::PiecewiseValue;
use std::io::Write;

/// 12 significant digits, scientific notation.
pub fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

/// One row per stored belief: `p,value,decision,ties`, beliefs ascending,
/// with `decision` the tie-broken choice and `ties` the pipe-separated tie
/// set.
pub fn export_value_csv(solution: &Solution, out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "p,value,decision,ties")?;
    for i in 0..solution.grid.len() {
        let ties = solution.ties[i]
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join("|");
        writeln!(
            out,
            "{},{},{},{}",
            sig12(solution.grid[i]),
            sig12(solution.values[i]),
            solution.policy[i],
            ties
        )?;
    }
    Ok(())
}

/// One value column per cost on a common belief grid:
/// `p,c=<c1>,c=<c2>,...`.
pub fn export_sweep_csv(
    grid: &[f64],
    costs: &[f64],
    curves: &[Vec<f64>],
    out: &mut impl Write,
) -> std::io::Result<()> {
    let header: Vec<String> = std::iter::once("p".to_string())
        .chain(costs.iter().map(|c| format!("c={c}")))
        .collect();
    writeln!(out, "{}", header.join(","))?;
    for (i, &p) in grid.iter().enumerate() {
        let mut row = vec![sig12(p)];
        for curve in curves {
            row.push(sig12(curve[i]));
        }
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// Affine segments of the value-in-prior function:
/// `segment,p_lo,p_hi,slope,intercept`.
pub fn export_piecewise_csv(pw: &PiecewiseValue, out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "segment,p_lo,p_hi,slope,intercept")?;
    for (i, s) in pw.segments.iter().enumerate() {
        writeln!(
            out,
            "{},{},{},{},{}",
            i,
            sig12(s.p_lo),
            sig12(s.p_hi),
            sig12(s.slope),
            sig12(s.intercept)
        )?;
    }
    Ok(())
}
