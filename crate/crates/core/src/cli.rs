//! The `ineff` command line.
//!
//! Exit codes: 0 on success (or, for `axioms`, when the variant behaves as
//! documented), 1 when an `axioms` row deviates, 2 for bad input, 3 for
//! guardrails and violated preconditions.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::allocation::{
    allocation_frontier_ranges, allocation_inefficiency_with, find_min_pareto_match, rsd_exact,
    rsd_sample, AllocationProblem, MatchingLottery,
};
use crate::axioms::{default_battery, row_matches, variant_row, VariantId};
use crate::context::Context;
use crate::error::{Error, Result};
use crate::experiments::{lower_bound_curve, optimality_report, to_csv, upper_bound_sweep};
use crate::frontier::frontier_summary;
use crate::inefficiency::ihat;
use crate::io::{parse_allocation, parse_context, parse_lottery, read_text};
use crate::scalar::{parse_rational, Exact, Scalar};

/// Default largest context accepted by `frontier` and `inefficiency`.
pub const DEFAULT_ALTERNATIVE_CAP: usize = 5040;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Shared-ranking instances, exact RSD.
    Lower,
    /// Near-extreme unit-range and uniform instances, worst case per size.
    UrEps,
}

#[derive(Debug, Parser)]
#[command(
    name = "ineff",
    version,
    about = "Cardinal social inefficiency of lotteries and allocations"
)]
pub struct CliConfig {
    /// Arithmetic: exact rationals or f64.
    #[arg(long, global = true, value_enum, default_value = "exact")]
    pub mode: ModeArg,
    /// Accept `p/q` literals in float mode, rounding them.
    #[arg(long, global = true)]
    pub coerce: bool,
    /// Largest number of alternatives `frontier` and `inefficiency` accept.
    #[arg(long, global = true, default_value_t = DEFAULT_ALTERNATIVE_CAP)]
    pub cap: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Efficient pure alternatives and per-individual frontier ranges.
    Frontier { context: PathBuf },
    /// Inefficiency of a lottery.
    Inefficiency { context: PathBuf, lottery: PathBuf },
    /// Checks one variant against all seven axioms on the seeded battery.
    Axioms {
        variant: String,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
    /// Random serial dictatorship outcome and its inefficiency.
    Rsd {
        allocation: PathBuf,
        /// Sample this many orders instead of enumerating all of them.
        #[arg(long, alias = "trials")]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// The worst object an individual receives in any efficient matching.
    MinParetoMatch {
        allocation: PathBuf,
        individual: usize,
    },
    /// Bound-reproduction sweeps as CSV.
    Bounds {
        #[arg(value_enum)]
        family: Family,
        /// Comma-separated sizes, e.g. `2,3,4`.
        #[arg(long, value_delimiter = ',', required = true)]
        ns: Vec<usize>,
        /// Gap parameter; a decimal or `p/q`, strictly inside (0, 1/n) for `lower`.
        #[arg(long)]
        eps: String,
        /// Orders sampled per instance when sizes are too large to enumerate.
        #[arg(long, default_value_t = 2000)]
        trials: u64,
        /// Instances generated per size (`ur-eps` only).
        #[arg(long, default_value_t = 100)]
        instances: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Worst measured RSD inefficiency next to the `ln 2` and `1/(2 ln 2)`
    /// constants.
    Report {
        #[arg(long, value_delimiter = ',', required = true)]
        ns: Vec<usize>,
        #[arg(long, default_value = "0.01")]
        eps: f64,
        #[arg(long, default_value_t = 2000)]
        trials: u64,
        #[arg(long, default_value_t = 100)]
        instances: usize,
        #[arg(long)]
        seed: u64,
    },
}

/// Parses `args` (including the program name), runs the command, and
/// returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let mut buffer = Vec::new();
    let result = execute(&config, &mut buffer);
    let _ = out.write_all(&buffer);
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if let (Error::GuardrailExceeded { .. }, Command::Rsd { .. }) = (&e, &config.command) {
                let _ = writeln!(err, "hint: pass --samples N --seed S to estimate instead");
            }
            e.exit_code()
        }
    }
}

fn execute(config: &CliConfig, out: &mut Vec<u8>) -> Result<i32> {
    let text = match &config.command {
        Command::Frontier { context } => match config.mode {
            ModeArg::Exact => cmd_frontier::<Exact>(config, context)?,
            ModeArg::Float => cmd_frontier::<f64>(config, context)?,
        },
        Command::Inefficiency { context, lottery } => match config.mode {
            ModeArg::Exact => cmd_inefficiency::<Exact>(config, context, lottery)?,
            ModeArg::Float => cmd_inefficiency::<f64>(config, context, lottery)?,
        },
        Command::Axioms { variant, seed } => {
            let (text, code) = cmd_axioms(variant, *seed)?;
            out.extend_from_slice(text.as_bytes());
            return Ok(code);
        }
        Command::Rsd {
            allocation,
            samples,
            seed,
        } => match config.mode {
            ModeArg::Exact => cmd_rsd::<Exact>(config, allocation, *samples, *seed)?,
            ModeArg::Float => cmd_rsd::<f64>(config, allocation, *samples, *seed)?,
        },
        Command::MinParetoMatch {
            allocation,
            individual,
        } => match config.mode {
            ModeArg::Exact => cmd_min_pareto_match::<Exact>(config, allocation, *individual)?,
            ModeArg::Float => cmd_min_pareto_match::<f64>(config, allocation, *individual)?,
        },
        Command::Bounds {
            family,
            ns,
            eps,
            trials,
            instances,
            seed,
            out: path,
        } => cmd_bounds(
            *family,
            ns,
            eps,
            *trials,
            *instances,
            *seed,
            path.as_deref(),
        )?,
        Command::Report {
            ns,
            eps,
            trials,
            instances,
            seed,
        } => optimality_report(ns, *eps, *instances, *trials, *seed)?.to_string(),
    };
    out.extend_from_slice(text.as_bytes());
    Ok(0)
}

fn load_context<S: Scalar>(config: &CliConfig, path: &Path) -> Result<Context<S>> {
    let c = parse_context(&read_text(path)?, config.coerce)?;
    if c.n_alternatives() > config.cap {
        return Err(Error::GuardrailExceeded {
            what: format!("context with {} alternatives", c.n_alternatives()),
            limit: config.cap,
        });
    }
    Ok(c)
}

fn load_allocation<S: Scalar>(config: &CliConfig, path: &Path) -> Result<AllocationProblem<S>> {
    parse_allocation(&read_text(path)?, config.coerce)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_frontier<S: Scalar>(config: &CliConfig, path: &Path) -> Result<String> {
    let c: Context<S> = load_context(config, path)?;
    let s = frontier_summary(&c)?;
    let efficient: Vec<&str> = s
        .efficient_pure
        .iter()
        .map(|&a| c.names()[a].as_str())
        .collect();
    let mut text = format!("efficient: {}\n", efficient.join(", "));
    text.push_str("individual  u_min  u_max  frontier-indifferent\n");
    for i in 0..c.n_individuals() {
        text.push_str(&format!(
            "{i}  {}  {}  {}\n",
            s.u_min[i],
            s.u_max[i],
            yes_no(s.frontier_indifferent[i])
        ));
    }
    text.push_str(&format!("dimension: {}\n", s.dimension()));
    Ok(text)
}

fn cmd_inefficiency<S: Scalar>(
    config: &CliConfig,
    context: &Path,
    lottery: &Path,
) -> Result<String> {
    let c: Context<S> = load_context(config, context)?;
    let x = parse_lottery(&read_text(lottery)?, &c, config.coerce)?;
    let r = ihat(&c, &x)?;
    let mut text = format!("inefficiency: {}\n", r.value);
    if let Some(i) = r.infinite_witness {
        text.push_str(&format!(
            "individual {i} is frontier-indifferent and falls below their frontier utility\n"
        ));
    }
    text.push_str(&format!("value: {}\n", r.v_of_x));
    text.push_str(&format!(
        "best pure: {} ({})\n",
        c.names()[r.argmax_pure],
        r.v_max
    ));
    Ok(text)
}

fn cmd_axioms(variant: &str, seed: u64) -> Result<(String, i32)> {
    let variant: VariantId = variant.parse()?;
    let battery = default_battery(seed)?;
    let reports = variant_row(variant, &battery)?;
    let mut text = format!("variant: {variant} (seed {seed})\n");
    for r in &reports {
        text.push_str(&format!(
            "{}: {} (checked {}, skipped {})\n",
            r.axiom, r.verdict, r.checked, r.skipped
        ));
        if let Some(cx) = &r.counterexample {
            text.push_str(&format!("  counterexample: {cx}\n"));
        }
    }
    let matches = row_matches(variant, &reports);
    let expected = match variant.expected_failure() {
        Some(axiom) => format!("fails only {axiom}"),
        None => "passes every axiom".to_string(),
    };
    text.push_str(&format!(
        "expected: {expected}; {}\n",
        if matches { "as expected" } else { "UNEXPECTED" }
    ));
    Ok((text, if matches { 0 } else { 1 }))
}

fn cmd_rsd<S: Scalar>(
    config: &CliConfig,
    path: &Path,
    samples: Option<u64>,
    seed: Option<u64>,
) -> Result<String> {
    let p: AllocationProblem<S> = load_allocation(config, path)?;
    let outcome: MatchingLottery<S> = match samples {
        Some(trials) => {
            let seed = seed.ok_or_else(|| Error::Parse("sampling requires --seed".into()))?;
            rsd_sample(&p, trials, seed)?
        }
        None => rsd_exact(&p)?,
    };
    let ranges = allocation_frontier_ranges(&p);
    let mut text = String::from("matching  probability\n");
    for (m, prob) in outcome.entries() {
        text.push_str(&format!("{}  {prob}\n", m.display_with(p.object_names())));
    }
    text.push_str(&format!(
        "inefficiency: {}\n",
        allocation_inefficiency_with(&p, &ranges, &outcome)
    ));
    Ok(text)
}

fn cmd_min_pareto_match<S: Scalar>(
    config: &CliConfig,
    path: &Path,
    individual: usize,
) -> Result<String> {
    let p: AllocationProblem<S> = load_allocation(config, path)?;
    if individual >= p.n() {
        return Err(Error::IndexOutOfRange {
            index: individual,
            limit: p.n(),
        });
    }
    let o = find_min_pareto_match(&p, individual);
    Ok(format!("{}\n", p.object_names()[o]))
}

fn cmd_bounds(
    family: Family,
    ns: &[usize],
    eps: &str,
    trials: u64,
    instances: usize,
    seed: Option<u64>,
    out: Option<&Path>,
) -> Result<String> {
    let csv = match family {
        Family::Lower => to_csv(&lower_bound_curve(ns, &parse_rational(eps)?)?),
        Family::UrEps => {
            let seed = seed.ok_or_else(|| Error::Parse("ur-eps sweeps require --seed".into()))?;
            let eps: f64 = f64::parse_literal(eps, true)?;
            to_csv(&upper_bound_sweep(ns, eps, instances, trials, seed)?)
        }
    };
    match out {
        Some(path) => {
            std::fs::write(path, &csv)
                .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))?;
            Ok(format!(
                "wrote {} rows to {}\n",
                csv.lines().count() - 1,
                path.display()
            ))
        }
        None => Ok(csv),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(args.iter().copied(), &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_capture(&["ineff"]).0, 2);
        assert_eq!(run_capture(&["ineff", "frobnicate"]).0, 2);
        assert_eq!(run_capture(&["ineff", "--help"]).0, 0);
    }

    #[test]
    fn unknown_variant_exits_two() {
        let (code, _, err) = run_capture(&["ineff", "axioms", "bogus"]);
        assert_eq!(code, 2);
        assert!(err.contains("unknown variant"));
    }

    #[test]
    fn missing_file_exits_two() {
        assert_eq!(
            run_capture(&["ineff", "frontier", "/nonexistent/c.json"]).0,
            2
        );
    }

    #[test]
    fn lower_bounds_to_stdout() {
        let (code, out, _) =
            run_capture(&["ineff", "bounds", "lower", "--ns", "2", "--eps", "1/10"]);
        assert_eq!(code, 0);
        assert_eq!(
            out,
            "n,eps,trials,seed,kind,value,se\n2,1/10,2,0,exact,0,\n"
        );
        assert_eq!(
            run_capture(&["ineff", "bounds", "lower", "--ns", "2", "--eps", "0.5"]).0,
            3
        );
        assert_eq!(
            run_capture(&["ineff", "bounds", "ur-eps", "--ns", "2", "--eps", "0.01"]).0,
            2
        );
    }
}
