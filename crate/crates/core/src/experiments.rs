//! Bound-reproduction harness for random serial dictatorship.
//!
//! Rows are either exact (all orders enumerated) or Monte Carlo estimates
//! with a standard error. The upper-bound sweep checks every instance against
//! `ln 2` (plus three standard errors for estimates). Nothing here asserts the
//! lower-bound family reaches any particular value; its curve is reported as
//! measured.

use std::fmt::{self, Display, Write as _};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::allocation::{
    allocation_frontier_ranges, allocation_inefficiency, lower_bound_instance, matching_value,
    max_value_matching, random_instance, rsd_exact, rsd_sample_stream, ur_eps_instance,
    AllocationProblem, MatchingLottery,
};
use crate::error::{Error, Result};
use crate::scalar::{Exact, Extended, Scalar};

/// Largest `n` whose sweep rows enumerate all orders instead of sampling.
pub const SWEEP_EXACT_LIMIT: usize = 6;

/// Slack for float round-off in exact-row bound checks.
pub const FLOAT_SLACK: f64 = 1e-9;

pub const CSV_HEADER: &str = "n,eps,trials,seed,kind,value,se";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorKind {
    Exact,
    MonteCarlo,
}

impl Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EstimatorKind::Exact => "exact",
            EstimatorKind::MonteCarlo => "monte_carlo",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow<S> {
    pub n: usize,
    pub eps: S,
    /// Orders evaluated per instance (`n!` for exact rows).
    pub trials: u64,
    pub seed: u64,
    pub kind: EstimatorKind,
    /// Largest inefficiency measured over the row's instances.
    pub value: Extended<S>,
    /// Standard error of the instance attaining `value`.
    pub se: Option<f64>,
    pub instances: usize,
    /// Instances above `ln 2` (plus three standard errors when sampled).
    pub violations: usize,
}

impl<S: Scalar> SweepRow<S> {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.n,
            self.eps,
            self.trials,
            self.seed,
            self.kind,
            self.value,
            self.se.map(|s| s.to_string()).unwrap_or_default()
        )
    }
}

/// Header plus one line per row, newline-terminated.
pub fn to_csv<S: Scalar>(rows: &[SweepRow<S>]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.csv_line());
        out.push('\n');
    }
    out
}

/// Exact inefficiency of the exact RSD outcome on the shared-ranking family.
pub fn lower_bound_curve(ns: &[usize], eps: &Exact) -> Result<Vec<SweepRow<Exact>>> {
    ns.iter()
        .map(|&n| {
            let p = lower_bound_instance(n, eps)?;
            let value = allocation_inefficiency(&p, &rsd_exact(&p)?);
            Ok(SweepRow {
                n,
                eps: eps.clone(),
                trials: (1..=n as u64).product(),
                seed: 0,
                kind: EstimatorKind::Exact,
                value,
                se: None,
                instances: 1,
                violations: 0,
            })
        })
        .collect()
}

/// An RSD inefficiency measurement on one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub value: Extended<f64>,
    pub se: Option<f64>,
    pub kind: EstimatorKind,
    pub trials: u64,
}

impl Measurement {
    /// `value <= ln 2` (exact) or `value <= ln 2 + 3 se` (sampled), up to
    /// float round-off.
    pub fn within_ln2(&self) -> bool {
        let slack = 3.0 * self.se.unwrap_or(0.0) + FLOAT_SLACK;
        self.value.to_f64() <= std::f64::consts::LN_2 + slack
    }
}

/// Inefficiency of RSD on `p`: exact for `n <= SWEEP_EXACT_LIMIT`, else a
/// `trials`-order estimate with standard error `sd(V) / sqrt(trials)`.
pub fn measure_rsd(p: &AllocationProblem<f64>, trials: u64, seed: u64) -> Result<Measurement> {
    if p.n() <= SWEEP_EXACT_LIMIT {
        let outcome = rsd_exact(p)?;
        return Ok(Measurement {
            value: allocation_inefficiency(p, &outcome),
            se: None,
            kind: EstimatorKind::Exact,
            trials: (1..=p.n() as u64).product(),
        });
    }
    let outcome = rsd_sample_stream(p, trials, seed, 0)?;
    let (value, se) = estimate_with_error(p, &outcome, trials);
    Ok(Measurement {
        value,
        se: Some(se),
        kind: EstimatorKind::MonteCarlo,
        trials,
    })
}

/// Inefficiency of an empirical outcome and the standard error of its mean.
pub fn estimate_with_error(
    p: &AllocationProblem<f64>,
    outcome: &MatchingLottery<f64>,
    trials: u64,
) -> (Extended<f64>, f64) {
    let ranges = allocation_frontier_ranges(p);
    let (_, v_max) = max_value_matching(p, &ranges);
    let values: Vec<(f64, f64)> = outcome
        .entries()
        .iter()
        .map(|(m, prob)| (matching_value(p, &ranges, m).to_f64(), *prob))
        .collect();
    if values.iter().any(|(v, _)| v.is_infinite()) {
        return (Extended::PosInf, 0.0);
    }
    let mean: f64 = values.iter().map(|(v, w)| v * w).sum();
    let variance: f64 = values.iter().map(|(v, w)| w * (v - mean).powi(2)).sum();
    let gap = v_max - mean;
    let value = Extended::Finite(if gap.is_zero() { 0.0 } else { gap });
    (value, (variance / trials as f64).sqrt())
}

/// Per-instance seeds for row `n`: stream `n` of the seeded generator.
fn instance_seeds(seed: u64, n: usize, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(n as u64);
    (0..count).map(|_| rng.next_u64()).collect()
}

/// The `k`-th instance of row `n`: unit-range near-extreme instances at even
/// `k`, uniform random at odd `k`.
pub fn sweep_instance(
    n: usize,
    eps: f64,
    k: usize,
    instance_seed: u64,
) -> Result<AllocationProblem<f64>> {
    if n >= 2 && k % 2 == 0 {
        ur_eps_instance(n, &eps, instance_seed)
    } else {
        random_instance(n, instance_seed)
    }
}

/// For each `n`, the worst RSD inefficiency over `instances` generated
/// instances. Rows are computed on separate threads and returned in the order
/// of `ns`.
pub fn upper_bound_sweep(
    ns: &[usize],
    eps: f64,
    instances: usize,
    trials: u64,
    seed: u64,
) -> Result<Vec<SweepRow<f64>>> {
    if trials == 0 || instances == 0 {
        return Err(Error::PreconditionViolated(
            "need at least one trial and instance".into(),
        ));
    }
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::InvalidEpsilon(format!(
            "need 0 < eps < 1/2, got {eps}"
        )));
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = ns
            .iter()
            .map(|&n| scope.spawn(move || sweep_row(n, eps, instances, trials, seed)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    })
}

fn sweep_row(
    n: usize,
    eps: f64,
    instances: usize,
    trials: u64,
    seed: u64,
) -> Result<SweepRow<f64>> {
    let mut worst: Option<Measurement> = None;
    let mut violations = 0;
    for (k, s) in instance_seeds(seed, n, instances).into_iter().enumerate() {
        let p = sweep_instance(n, eps, k, s)?;
        let m = measure_rsd(&p, trials, s)?;
        if !m.within_ln2() {
            violations += 1;
        }
        if worst.as_ref().map_or(true, |w| m.value > w.value) {
            worst = Some(m);
        }
    }
    let worst = worst.expect("at least one instance");
    Ok(SweepRow {
        n,
        eps,
        trials: worst.trials,
        seed,
        kind: worst.kind,
        value: worst.value,
        se: worst.se,
        instances,
        violations,
    })
}

/// Descriptive comparison of measured inefficiencies with the `ln 2` ceiling
/// and the `1 / (2 ln 2)` optimality factor.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalityReport {
    pub rows: Vec<SweepRow<f64>>,
    pub max_measured: Option<f64>,
    pub ln2: f64,
    pub inverse_two_ln2: f64,
}

pub fn optimality_report(
    ns: &[usize],
    eps: f64,
    instances: usize,
    trials: u64,
    seed: u64,
) -> Result<OptimalityReport> {
    let rows = upper_bound_sweep(ns, eps, instances, trials, seed)?;
    let max_measured = rows.iter().map(|r| r.value.to_f64()).reduce(f64::max);
    Ok(OptimalityReport {
        rows,
        max_measured,
        ln2: std::f64::consts::LN_2,
        inverse_two_ln2: 1.0 / (2.0 * std::f64::consts::LN_2),
    })
}

impl Display for OptimalityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut body = String::new();
        writeln!(body, "n  kind         instances  worst      se")?;
        for r in &self.rows {
            let se = r.se.map_or_else(|| "-".to_string(), |s| format!("{s:.6}"));
            writeln!(
                body,
                "{:<2} {:<12} {:<10} {:<10.6} {}",
                r.n,
                r.kind.to_string(),
                r.instances,
                r.value.to_f64(),
                se
            )?;
        }
        match self.max_measured {
            Some(m) => writeln!(body, "max measured: {m:.6}")?,
            None => writeln!(body, "max measured: none")?,
        }
        writeln!(body, "ln 2 ceiling: {:.6}", self.ln2)?;
        writeln!(body, "1/(2 ln 2):   {:.6}", self.inverse_two_ln2)?;
        f.write_str(&body)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Exact {
        Exact::from_ratio(n, d)
    }

    #[test]
    fn lower_curve_small_cases() {
        let rows = lower_bound_curve(&[1, 2], &q(1, 10)).unwrap();
        assert_eq!(rows[0].value, Extended::Finite(q(0, 1)));
        assert_eq!(rows[1].value, Extended::Finite(q(0, 1)));
        assert_eq!(rows[1].trials, 2);
        assert!(matches!(
            lower_bound_curve(&[2], &q(1, 2)),
            Err(Error::InvalidEpsilon(_))
        ));
    }

    #[test]
    fn sweep_rows_respect_the_ceiling() {
        let rows = upper_bound_sweep(&[1, 2, 3, 7], 0.01, 6, 400, 5).unwrap();
        assert_eq!(
            rows.iter().map(|r| r.n).collect::<Vec<_>>(),
            vec![1, 2, 3, 7]
        );
        assert_eq!(rows[0].value, Extended::Finite(0.0));
        assert_eq!(rows[3].kind, EstimatorKind::MonteCarlo);
        assert!(rows.iter().all(|r| r.violations == 0));
        assert_eq!(
            to_csv(&rows),
            to_csv(&upper_bound_sweep(&[1, 2, 3, 7], 0.01, 6, 400, 5).unwrap())
        );
    }

    #[test]
    fn csv_layout() {
        let rows = lower_bound_curve(&[2], &q(1, 10)).unwrap();
        assert_eq!(
            to_csv(&rows),
            "n,eps,trials,seed,kind,value,se\n2,1/10,2,0,exact,0,\n"
        );
    }

    #[test]
    fn report_constants() {
        let r = optimality_report(&[], 0.01, 1, 1, 0).unwrap();
        let text = r.to_string();
        assert!(text.contains("0.721348"));
        assert!(text.contains("0.693147"));
        assert!(text.contains("max measured: none"));
    }
}
