//! `scaling`: query counts of the collapsed walk against the sorted
//! classical baseline, one CSV row per `(N, mode)`.

use std::io::Write;
use std::thread;

use asr_core::claw::{find_claws_sorted, ClawProblem};
use asr_core::quantum::{claw_walk_run, walk_params_scaled, WalkInstance, WalkMode};
use serde::Serialize;

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ScalingRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub r: Option<usize>,
    pub t1: Option<u64>,
    pub t2: Option<u64>,
    pub outer_reps: Option<u64>,
    pub queries: Option<u64>,
    pub success_prob: Option<f64>,
    pub mode: &'static str,
    pub classical_evals: Option<u64>,
    pub note: String,
}

#[derive(Clone, Debug)]
pub struct ScalingRequest {
    pub sizes: Vec<usize>,
    /// Planted-value range; `None` picks `2 * ceil(log2 N)` bits.
    pub range_bits: Option<u32>,
    pub seed: u64,
    pub outer_multiplier: f64,
}

fn range_bits_for(n: usize) -> u32 {
    let bits = usize::BITS - n.saturating_sub(1).leading_zeros();
    (2 * bits).clamp(8, 31)
}

fn walk_row(n: usize, req: &ScalingRequest) -> ScalingRow {
    let mut row = ScalingRow {
        n,
        mode: "walk-collapsed",
        ..ScalingRow::default()
    };
    let rb = req.range_bits.unwrap_or_else(|| range_bits_for(n));
    let run = ClawProblem::planted_unique(n, rb, req.seed ^ n as u64).and_then(|p| {
        let params = walk_params_scaled(n, n, req.outer_multiplier)?;
        let inst = WalkInstance::with_params(p, params, WalkMode::Collapsed, req.seed)?;
        claw_walk_run(&inst).map(|run| (params, run))
    });
    match run {
        Ok((params, run)) => {
            row.r = Some(params.r1);
            row.t1 = Some(params.t1);
            row.t2 = Some(params.t2);
            row.outer_reps = Some(params.outer);
            row.queries = Some(run.ledger.queries());
            row.success_prob = Some(run.success_prob);
        }
        Err(e) => row.note = format!("skipped: {e}"),
    }
    row
}

fn classical_row(n: usize, req: &ScalingRequest) -> ScalingRow {
    let mut row = ScalingRow {
        n,
        mode: "classical-sorted",
        ..ScalingRow::default()
    };
    let rb = req.range_bits.unwrap_or_else(|| range_bits_for(n));
    match ClawProblem::planted_unique(n, rb, req.seed ^ n as u64).and_then(|p| find_claws_sorted(&p)) {
        Ok(s) => {
            row.classical_evals = Some(s.evaluations);
            row.success_prob = Some(if s.claws.is_empty() { 0.0 } else { 1.0 });
        }
        Err(e) => row.note = format!("skipped: {e}"),
    }
    row
}

/// Rows in input order; sizes run on separate threads.
pub fn scaling_rows(req: &ScalingRequest) -> CliResult<Vec<ScalingRow>> {
    if !(req.outer_multiplier.is_finite() && req.outer_multiplier > 0.0) {
        return Err(CliError::input("outer multiplier must be positive"));
    }
    let rows = thread::scope(|s| {
        let handles: Vec<_> = req
            .sizes
            .iter()
            .map(|&n| s.spawn(move || [walk_row(n, req), classical_row(n, req)]))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("scaling worker panicked"))
            .collect()
    });
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[ScalingRow], out: W) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record([
            "N",
            "r",
            "t1",
            "t2",
            "outer_reps",
            "queries",
            "success_prob",
            "mode",
            "classical_evals",
            "note",
        ])
        .map_err(|e| CliError::input(e.to_string()))?;
    }
    for r in rows {
        w.serialize(r).map_err(|e| CliError::input(e.to_string()))?;
    }
    w.flush().map_err(|e| CliError::Io {
        path: "<csv>".into(),
        source: e,
    })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let k = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    (den > 0.0).then(|| num / den)
}

/// Slopes of walk queries and classical evaluations against `N`.
pub fn slopes(rows: &[ScalingRow]) -> (Option<f64>, Option<f64>) {
    let pick = |mode: &str, f: fn(&ScalingRow) -> Option<u64>| -> Vec<(f64, f64)> {
        rows.iter()
            .filter(|r| r.mode == mode)
            .filter_map(|r| f(r).map(|v| (r.n as f64, v as f64)))
            .collect()
    };
    (
        loglog_slope(&pick("walk-collapsed", |r| r.queries)),
        loglog_slope(&pick("classical-sorted", |r| r.classical_evals)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_range_is_header_only() {
        let rows = scaling_rows(&ScalingRequest {
            sizes: vec![],
            range_bits: None,
            seed: 0,
            outer_multiplier: 1.0,
        })
        .unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "N,r,t1,t2,outer_reps,queries,success_prob,mode,classical_evals,note\n"
        );
    }

    #[test]
    fn guard_refusals_become_notes() {
        let rows = scaling_rows(&ScalingRequest {
            sizes: vec![1, 16],
            range_bits: None,
            seed: 0,
            outer_multiplier: 1.0,
        })
        .unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows[0].note.starts_with("skipped"));
        assert!(rows[2].queries.is_some());
        assert_eq!(rows[3].classical_evals, Some(32));
    }

    #[test]
    fn slope_of_a_power_law() {
        let pts: Vec<(f64, f64)> = (1..6).map(|i| (i as f64, (i as f64).powf(1.5))).collect();
        assert!((loglog_slope(&pts).unwrap() - 1.5).abs() < 1e-12);
    }
}
