//! The seeded default battery of axiom instances.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::fixtures::{
    arrow_context, constant_rows_context, make_chat, opposed_allocation_context,
    partially_indifferent_context, random_context, random_lottery,
};
use super::{Axiom, Prepared};
use crate::context::{Context, Lottery, DEFAULT_COMPOSE_CAP};
use crate::error::{Error, Result};
use crate::frontier::{
    dominating_frontier_point, ideal_point_profile, minimal_expectations_profile,
};
use crate::inefficiency::best_pure;
use crate::scalar::{Exact, Scalar};

type Shared = Arc<Prepared<Exact>>;

/// One concrete check of one axiom. Contexts are stored with their summaries
/// so that variants can share them.
#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    /// Everyone weakly prefers `better` to `worse`.
    Pareto {
        context: Shared,
        better: Lottery<Exact>,
        worse: Lottery<Exact>,
    },
    /// `permuted` has row `i` equal to row `permutation[i]` of `context`.
    Anonymity {
        context: Shared,
        permuted: Shared,
        permutation: Vec<usize>,
        x: Lottery<Exact>,
    },
    ExpectedInefficiency {
        context: Shared,
        alpha: Exact,
        x: Lottery<Exact>,
        y: Lottery<Exact>,
    },
    /// `restricted` keeps the alternatives `keep` of `full`; `x`, `y` live on
    /// `restricted`.
    Iia {
        full: Shared,
        restricted: Shared,
        keep: Vec<usize>,
        x: Lottery<Exact>,
        y: Lottery<Exact>,
    },
    /// `left = C ⊕ D`, `right = C ⊕ D'`; `x`, `x_prime` live on `C` and `y`
    /// on the shared alternatives of `D` and `D'`.
    Iip {
        left: Shared,
        right: Shared,
        x: Lottery<Exact>,
        x_prime: Lottery<Exact>,
        y: Lottery<Exact>,
    },
    /// `composed` is the `k`-fold self-composition of `base`.
    PopulationSize {
        base: Shared,
        composed: Shared,
        k: usize,
        x: Lottery<Exact>,
        x_prime: Lottery<Exact>,
    },
    Feasibility {
        context: Shared,
    },
}

impl Instance {
    pub fn axiom(&self) -> Axiom {
        match self {
            Instance::Pareto { .. } => Axiom::ParetoMonotonicity,
            Instance::Anonymity { .. } => Axiom::Anonymity,
            Instance::ExpectedInefficiency { .. } => Axiom::ExpectedInefficiency,
            Instance::Iia { .. } => Axiom::Iia,
            Instance::Iip { .. } => Axiom::Iip,
            Instance::PopulationSize { .. } => Axiom::PopulationSizeStability,
            Instance::Feasibility { .. } => Axiom::Feasibility,
        }
    }

    /// Label of the (first) context involved.
    pub fn label(&self) -> &str {
        match self {
            Instance::Pareto { context, .. }
            | Instance::Anonymity { context, .. }
            | Instance::ExpectedInefficiency { context, .. }
            | Instance::Feasibility { context } => &context.label,
            Instance::Iia { full, .. } => &full.label,
            Instance::Iip { left, .. } => &left.label,
            Instance::PopulationSize { composed, .. } => &composed.label,
        }
    }

    /// The same instance with every frontier summary recomputed.
    pub fn rebuild(&self) -> Result<Self> {
        let re = |p: &Shared| p.rebuild().map(Arc::new);
        let mut out = self.clone();
        match &mut out {
            Instance::Pareto { context, .. }
            | Instance::ExpectedInefficiency { context, .. }
            | Instance::Feasibility { context } => *context = re(context)?,
            Instance::Anonymity {
                context, permuted, ..
            } => {
                *context = re(context)?;
                *permuted = re(permuted)?;
            }
            Instance::Iia {
                full, restricted, ..
            } => {
                *full = re(full)?;
                *restricted = re(restricted)?;
            }
            Instance::Iip { left, right, .. } => {
                *left = re(left)?;
                *right = re(right)?;
            }
            Instance::PopulationSize { base, composed, .. } => {
                *base = re(base)?;
                *composed = re(composed)?;
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Battery {
    pub instances: Vec<Instance>,
}

impl Battery {
    pub fn for_axiom(&self, axiom: Axiom) -> impl Iterator<Item = &Instance> {
        self.instances.iter().filter(move |i| i.axiom() == axiom)
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    /// Every distinct single context used by within-context instances.
    pub fn contexts(&self) -> Vec<Shared> {
        let mut out: Vec<Shared> = Vec::new();
        for inst in &self.instances {
            if let Instance::Feasibility { context } = inst {
                out.push(context.clone());
            }
        }
        out
    }
}

fn q(n: i64, d: i64) -> Exact {
    Exact::from_ratio(n, d)
}

fn prepare(label: impl Into<String>, c: Context<Exact>) -> Result<Shared> {
    Prepared::new(label, c).map(Arc::new)
}

/// Contexts over which the within-context axioms are checked.
pub fn base_contexts(seed: u64) -> Result<Vec<Shared>> {
    let mut out = vec![
        prepare("arrow", arrow_context())?,
        prepare("chat(2,{1,2})", make_chat(2, &[1, 2])?)?,
        prepare("chat(3,{1,2,3})", make_chat(3, &[1, 2, 3])?)?,
        prepare("opposed-allocation", opposed_allocation_context())?,
        prepare("partially-indifferent", partially_indifferent_context())?,
        prepare("constant-rows", constant_rows_context())?,
    ];
    let shapes = [
        (1, 3),
        (2, 2),
        (2, 3),
        (2, 4),
        (3, 2),
        (3, 3),
        (3, 4),
        (2, 3),
    ];
    for (k, &(n, m)) in shapes.iter().enumerate() {
        let s = seed.wrapping_mul(1_000_003).wrapping_add(k as u64);
        out.push(prepare(
            format!("random({n}x{m},{s})"),
            random_context(n, m, s),
        )?);
    }
    Ok(out)
}

/// Deterministic battery covering all seven axioms.
pub fn default_battery(seed: u64) -> Result<Battery> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bases = base_contexts(seed)?;
    let mut instances = Vec::new();

    for p in &bases {
        within_context(p, &mut rng, &mut instances)?;
    }
    iia_instances(&bases, &mut rng, &mut instances)?;
    iip_instances(seed, &mut rng, &mut instances)?;
    population_instances(&bases, &mut rng, &mut instances)?;
    Ok(Battery { instances })
}

fn within_context(p: &Shared, rng: &mut ChaCha8Rng, out: &mut Vec<Instance>) -> Result<()> {
    let c = &p.context;
    let (n, m) = (c.n_individuals(), c.n_alternatives());
    let point = |a| Lottery::point(m, a);

    // Pareto: dominating pure pairs, then lotteries against frontier points
    // dominating them.
    for a in 0..m {
        for b in 0..m {
            if a != b && (0..n).all(|i| c.utility(i, a) >= c.utility(i, b)) {
                out.push(Instance::Pareto {
                    context: p.clone(),
                    better: point(a),
                    worse: point(b),
                });
            }
        }
    }
    for _ in 0..2 {
        let y: Lottery<Exact> = random_lottery(m, rng);
        let w = dominating_frontier_point(c, &y)?;
        let mid = Lottery::mix(&q(1, 2), &w, &y)?;
        for better in [w, mid] {
            out.push(Instance::Pareto {
                context: p.clone(),
                better,
                worse: y.clone(),
            });
        }
    }
    if p.label.starts_with("chat(2") {
        let half = Lottery::new(vec![q(0, 1), q(1, 2), q(1, 2)])?;
        out.push(Instance::Pareto {
            context: p.clone(),
            better: half,
            worse: point(0),
        });
    }

    // Anonymity: reversal and rotation.
    if n >= 2 {
        let reversal: Vec<usize> = (0..n).rev().collect();
        let rotation: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        for perm in [reversal, rotation] {
            let permuted = prepare(format!("{}∘perm", p.label), c.permute_individuals(&perm)?)?;
            let mut xs: Vec<Lottery<Exact>> = (0..m).map(point).collect();
            xs.push(random_lottery(m, rng));
            for x in xs {
                out.push(Instance::Anonymity {
                    context: p.clone(),
                    permuted: permuted.clone(),
                    permutation: perm.clone(),
                    x,
                });
            }
        }
    }

    // Expected inefficiency: every pure pair at one half, and three pairs
    // involving lotteries at several weights.
    for a in 0..m {
        for b in a + 1..m {
            out.push(Instance::ExpectedInefficiency {
                context: p.clone(),
                alpha: q(1, 2),
                x: point(a),
                y: point(b),
            });
        }
    }
    let (best, _) = best_pure(c, &p.summary);
    let pairs = [
        (point(best), random_lottery(m, rng)),
        (point(0), point(m - 1)),
        (random_lottery(m, rng), random_lottery(m, rng)),
    ];
    for (x, y) in pairs {
        for alpha in [q(0, 1), q(1, 3), q(1, 2), q(1, 1)] {
            out.push(Instance::ExpectedInefficiency {
                context: p.clone(),
                alpha,
                x: x.clone(),
                y: y.clone(),
            });
        }
    }

    out.push(Instance::Feasibility { context: p.clone() });
    Ok(())
}

/// Appends one strictly dominated copy and one exact duplicate of random
/// columns. Neither changes the ideal point or the frontier ranges.
fn extend_with_irrelevant(c: &Context<Exact>, rng: &mut ChaCha8Rng) -> Result<Context<Exact>> {
    let m = c.n_alternatives();
    let (dominated_of, duplicate_of) = (rng.gen_range(0..m), rng.gen_range(0..m));
    let mut names = c.names().to_vec();
    names.push(format!("{}-worse", c.names()[dominated_of]));
    names.push(format!("{}-copy", c.names()[duplicate_of]));
    let utilities = c
        .utilities()
        .iter()
        .map(|row| {
            let mut row = row.clone();
            let delta = q(rng.gen_range(1..=10), 10);
            row.push(row[dominated_of].clone() - delta);
            row.push(row[duplicate_of].clone());
            row
        })
        .collect();
    Context::new(names, utilities)
}

/// Builds an IIA instance after checking both reference points agree.
fn iia_instance(
    full: &Shared,
    restricted: &Shared,
    keep: &[usize],
    x: Lottery<Exact>,
    y: Lottery<Exact>,
) -> Result<Instance> {
    if ideal_point_profile(&full.context) != ideal_point_profile(&restricted.context) {
        return Err(Error::PreconditionViolated(format!(
            "{}: ideal points differ",
            full.label
        )));
    }
    if minimal_expectations_profile(&full.context)?
        != minimal_expectations_profile(&restricted.context)?
    {
        return Err(Error::PreconditionViolated(format!(
            "{}: points of minimal expectations differ",
            full.label
        )));
    }
    Ok(Instance::Iia {
        full: full.clone(),
        restricted: restricted.clone(),
        keep: keep.to_vec(),
        x,
        y,
    })
}

fn iia_instances(bases: &[Shared], rng: &mut ChaCha8Rng, out: &mut Vec<Instance>) -> Result<()> {
    // Arrow with its dominated alternative deleted.
    let arrow = &bases[0];
    let keep = [0, 1];
    let small = prepare("arrow|{x,y}", arrow.context.restrict(&keep)?)?;
    for (a, b) in [(0, 1), (1, 0)] {
        out.push(iia_instance(
            arrow,
            &small,
            &keep,
            Lottery::point(2, a),
            Lottery::point(2, b),
        )?);
    }

    for base in bases.iter().skip(1) {
        let m = base.context.n_alternatives();
        let full = prepare(
            format!("{}+irrelevant", base.label),
            extend_with_irrelevant(&base.context, rng)?,
        )?;
        let keep: Vec<usize> = (0..m).collect();
        let (best, _) = best_pure(&base.context, &base.summary);
        let pairs = [
            (Lottery::point(m, best), Lottery::point(m, m - 1)),
            (Lottery::point(m, best), random_lottery(m, rng)),
            (random_lottery(m, rng), random_lottery(m, rng)),
        ];
        for (x, y) in pairs {
            out.push(iia_instance(&full, base, &keep, x, y)?);
        }
    }
    Ok(())
}

fn iip_instances(seed: u64, rng: &mut ChaCha8Rng, out: &mut Vec<Instance>) -> Result<()> {
    // D has two frontier-concerned individuals, D' none.
    let split = Context::from_rows(vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)]])?;
    let agreed = Context::from_rows(vec![vec![q(1, 1), q(0, 1)], vec![q(1, 1), q(0, 1)]])?;
    let random_d = random_context::<Exact>(2, 2, seed ^ 0x5eed_0001);
    let random_d_prime = random_context::<Exact>(2, 2, seed ^ 0x5eed_0002);
    let pairs = [
        ("split", split, "agreed", agreed),
        ("rd", random_d, "rd'", random_d_prime),
    ];

    let cs = [
        ("chat(2,{1,2})", make_chat(2, &[1, 2])?),
        ("arrow", arrow_context()),
        (
            "random(2x2)",
            random_context::<Exact>(2, 2, seed ^ 0x5eed_0003),
        ),
    ];
    for (c_label, c) in &cs {
        let mc = c.n_alternatives();
        for (d_label, d, dp_label, dp) in &pairs {
            let left = prepare(format!("{c_label}⊕{d_label}"), c.compose(d)?)?;
            let right = prepare(format!("{c_label}⊕{dp_label}"), c.compose(dp)?)?;
            let xs = [
                (Lottery::point(mc, 0), Lottery::point(mc, 1)),
                (random_lottery(mc, rng), Lottery::point(mc, mc - 1)),
            ];
            let ys = [
                Lottery::point(2, 0),
                Lottery::point(2, 1),
                random_lottery(2, rng),
            ];
            for (x, x_prime) in &xs {
                for y in &ys {
                    out.push(Instance::Iip {
                        left: left.clone(),
                        right: right.clone(),
                        x: x.clone(),
                        x_prime: x_prime.clone(),
                        y: y.clone(),
                    });
                }
            }
        }
    }
    Ok(())
}

fn population_instances(
    bases: &[Shared],
    rng: &mut ChaCha8Rng,
    out: &mut Vec<Instance>,
) -> Result<()> {
    let small = bases.iter().filter(|p| {
        let (n, m) = (p.context.n_individuals(), p.context.n_alternatives());
        p.label == "arrow" || (m <= 3 && n <= 2)
    });
    for base in small {
        let m = base.context.n_alternatives();
        let (best, _) = best_pure(&base.context, &base.summary);
        let other = (best + 1) % m;
        let pairs = [
            (Lottery::point(m, best), Lottery::point(m, other)),
            (random_lottery(m, rng), Lottery::point(m, best)),
        ];
        for k in 1..=3 {
            let composed = prepare(
                format!("{}^{k}", base.label),
                base.context.self_compose(k, DEFAULT_COMPOSE_CAP)?,
            )?;
            for (x, x_prime) in &pairs {
                out.push(Instance::PopulationSize {
                    base: base.clone(),
                    composed: composed.clone(),
                    k,
                    x: x.clone(),
                    x_prime: x_prime.clone(),
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_is_deterministic_and_covers_every_axiom() {
        let a = default_battery(7).unwrap();
        let b = default_battery(7).unwrap();
        assert_eq!(a.instances, b.instances);
        for axiom in Axiom::ALL {
            assert!(a.for_axiom(axiom).count() > 0, "{axiom}");
        }
    }

    #[test]
    fn irrelevant_extension_keeps_reference_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let base = arrow_context();
        let ext = extend_with_irrelevant(&base, &mut rng).unwrap();
        assert_eq!(ext.n_alternatives(), 5);
        assert_eq!(ideal_point_profile(&ext), ideal_point_profile(&base));
        assert_eq!(
            minimal_expectations_profile(&ext).unwrap(),
            minimal_expectations_profile(&base).unwrap()
        );
    }
}
