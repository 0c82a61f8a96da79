//! Executable axioms for social inefficiency functions.
//!
//! A [`battery::Battery`] is a finite list of prepared instances, each
//! exercising one axiom. [`checks::check_axiom`] runs one candidate function
//! ([`variants::VariantId`]) over the instances of one axiom and returns a
//! report whose counterexample, if any, can be replayed from scratch.
//! [`checks::independence_matrix`] does this for every candidate and axiom.
//!
//! All checks run in exact arithmetic.

pub mod battery;
pub mod checks;
pub mod fixtures;
pub mod variants;

use std::fmt;
use std::str::FromStr;

use crate::context::Context;
use crate::error::{Error, Result};
use crate::frontier::{frontier_summary, FrontierSummary};
use crate::scalar::Scalar;

pub use battery::{base_contexts, default_battery, Battery, Instance};
pub use checks::{
    check_axiom, evaluate, independence_matrix, row_matches, squared_negativity_report,
    variant_row, AxiomReport, Counterexample, IndependenceMatrix, NegativeValue, Verdict,
};
pub use fixtures::{
    arrow_context, constant_rows_context, make_chat, opposed_allocation_context,
    partially_indifferent_context, random_context, random_lottery,
};
pub use variants::{eval_variant, eval_variant_prepared, rad, VariantId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    ParetoMonotonicity,
    Anonymity,
    ExpectedInefficiency,
    Iia,
    Iip,
    PopulationSizeStability,
    Feasibility,
}

impl Axiom {
    pub const ALL: [Axiom; 7] = [
        Axiom::ParetoMonotonicity,
        Axiom::Anonymity,
        Axiom::ExpectedInefficiency,
        Axiom::Iia,
        Axiom::Iip,
        Axiom::PopulationSizeStability,
        Axiom::Feasibility,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::ParetoMonotonicity => "pareto-monotonicity",
            Axiom::Anonymity => "anonymity",
            Axiom::ExpectedInefficiency => "expected-inefficiency",
            Axiom::Iia => "iia",
            Axiom::Iip => "iip",
            Axiom::PopulationSizeStability => "population-size-stability",
            Axiom::Feasibility => "feasibility",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axiom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Axiom::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown axiom `{s}`")))
    }
}

/// A context together with its frontier summary, computed once and shared by
/// every evaluation on that context.
#[derive(Debug, Clone, PartialEq)]
pub struct Prepared<S> {
    pub label: String,
    pub context: Context<S>,
    pub summary: FrontierSummary<S>,
}

impl<S: Scalar> Prepared<S> {
    pub fn new(label: impl Into<String>, context: Context<S>) -> Result<Self> {
        let summary = frontier_summary(&context)?;
        Ok(Self {
            label: label.into(),
            context,
            summary,
        })
    }

    /// Recomputes the summary from the bare context.
    pub fn rebuild(&self) -> Result<Self> {
        Self::new(self.label.clone(), self.context.clone())
    }
}
