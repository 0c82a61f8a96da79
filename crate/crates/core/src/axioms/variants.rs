//! The characterized function and seven alternatives, each violating exactly
//! one axiom.

use std::fmt;
use std::str::FromStr;

use super::{Axiom, Prepared};
use crate::context::{Context, Lottery};
use crate::error::{Error, Result};
use crate::frontier::FrontierSummary;
use crate::inefficiency::{self, normalize};
use crate::scalar::{Extended, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VariantId {
    /// The characterized function.
    Ihat,
    /// Constantly zero.
    Zero,
    /// Welfare with geometrically decaying weights on individuals.
    Weighted,
    /// Average squared normalized shortfall from the ideal point.
    Squared,
    /// Scaled by the radical of the number of alternatives.
    Radical,
    /// Averaged over frontier-concerned individuals instead of everyone.
    Dimension,
    /// Scaled by `2^n`.
    Exponential,
    /// Shifted up by one.
    Shifted,
}

impl VariantId {
    pub const ALL: [VariantId; 8] = [
        VariantId::Ihat,
        VariantId::Zero,
        VariantId::Weighted,
        VariantId::Squared,
        VariantId::Radical,
        VariantId::Dimension,
        VariantId::Exponential,
        VariantId::Shifted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VariantId::Ihat => "ihat",
            VariantId::Zero => "zero",
            VariantId::Weighted => "weighted",
            VariantId::Squared => "squared",
            VariantId::Radical => "radical",
            VariantId::Dimension => "dimension",
            VariantId::Exponential => "exponential",
            VariantId::Shifted => "shifted",
        }
    }

    /// The one axiom this variant is built to violate.
    pub fn expected_failure(self) -> Option<Axiom> {
        match self {
            VariantId::Ihat => None,
            VariantId::Zero => Some(Axiom::ParetoMonotonicity),
            VariantId::Weighted => Some(Axiom::Anonymity),
            VariantId::Squared => Some(Axiom::ExpectedInefficiency),
            VariantId::Radical => Some(Axiom::Iia),
            VariantId::Dimension => Some(Axiom::Iip),
            VariantId::Exponential => Some(Axiom::PopulationSizeStability),
            VariantId::Shifted => Some(Axiom::Feasibility),
        }
    }
}

impl fmt::Display for VariantId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for VariantId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        VariantId::ALL
            .into_iter()
            .find(|v| v.name() == lower)
            .ok_or_else(|| Error::UnknownVariant(s.to_string()))
    }
}

/// Product of the distinct primes dividing `m`; `rad(1) = 1`.
pub fn rad(mut m: u64) -> u64 {
    assert!(m >= 1, "radical of zero");
    let mut out = 1;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            out *= p;
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out *= m;
    }
    out
}

/// Evaluates variant `id` at `x`, computing the frontier summary of `c`.
pub fn eval_variant<S: Scalar>(
    id: VariantId,
    c: &Context<S>,
    x: &Lottery<S>,
) -> Result<Extended<S>> {
    let prepared = Prepared::new("", c.clone())?;
    eval_variant_prepared(id, &prepared, x)
}

pub fn eval_variant_prepared<S: Scalar>(
    id: VariantId,
    p: &Prepared<S>,
    x: &Lottery<S>,
) -> Result<Extended<S>> {
    let (c, s) = (&p.context, &p.summary);
    let ihat = || inefficiency::ihat_with(c, s, x).map(|r| r.value);
    let n = c.n_individuals();
    Ok(match id {
        VariantId::Ihat => ihat()?,
        VariantId::Zero => {
            c.check_lottery(x)?;
            Extended::zero()
        }
        VariantId::Weighted => {
            let at_x = weighted_value(s, c.utility_profile(x)?);
            let best = max_finite((0..c.n_alternatives()).map(|a| weighted_value(s, c.column(a))));
            Extended::Finite(best) - at_x
        }
        VariantId::Squared => {
            let at_x = squared_value(s, c.utility_profile(x)?);
            let best = min_finite((0..c.n_alternatives()).map(|a| squared_value(s, c.column(a))));
            at_x - Extended::Finite(best)
        }
        VariantId::Radical => {
            let r = rad(c.n_alternatives() as u64);
            ihat()?.scale(&S::from_int(r as i64))
        }
        VariantId::Dimension => {
            let d = s.dimension();
            if d == 0 {
                return Err(Error::DegenerateDimension);
            }
            ihat()?.scale(&S::from_ratio(n as i64, d as i64))
        }
        VariantId::Exponential => ihat()?.scale(&pow2(n)),
        VariantId::Shifted => ihat()? + Extended::Finite(S::one()),
    })
}

fn pow2<S: Scalar>(k: usize) -> S {
    (0..k).fold(S::one(), |acc, _| acc * S::from_int(2))
}

/// Welfare with weight `2^-(i+1)` on individual `i`, normalized by
/// `1 / (1 - 2^-n)` so that the weights sum to one.
fn weighted_value<S: Scalar>(s: &FrontierSummary<S>, profile: Vec<S>) -> Extended<S> {
    let n = profile.len();
    let total = profile
        .into_iter()
        .enumerate()
        .fold(Extended::zero(), |acc, (i, eu)| {
            acc + normalize(s, i, eu).scale(&(S::one() / pow2::<S>(i + 1)))
        });
    let full = pow2::<S>(n);
    total.scale(&(full.clone() / (full - S::one())))
}

/// Average of `((u_max - u) / (u_max - u_min))^2`, with `positive/0 = +inf`.
fn squared_value<S: Scalar>(s: &FrontierSummary<S>, profile: Vec<S>) -> Extended<S> {
    let n = profile.len() as i64;
    let total = profile
        .into_iter()
        .enumerate()
        .fold(Extended::zero(), |acc, (i, eu)| {
            let gap = s.u_max[i].clone() - eu;
            let shortfall = if s.frontier_indifferent[i] {
                if gap.is_positive() {
                    Extended::PosInf
                } else {
                    Extended::zero()
                }
            } else {
                Extended::ratio(gap, s.diameter(i))
            };
            let squared = match shortfall {
                Extended::Finite(v) => Extended::Finite(v.clone() * v),
                _ => Extended::PosInf,
            };
            acc + squared
        });
    total.scale(&S::from_ratio(1, n))
}

// Efficient pure alternatives always give finite values, so the extrema over
// pure alternatives exist.
fn max_finite<S: Scalar>(values: impl Iterator<Item = Extended<S>>) -> S {
    values
        .filter_map(|v| v.finite().cloned())
        .reduce(S::max_of)
        .expect("some pure alternative is efficient")
}

fn min_finite<S: Scalar>(values: impl Iterator<Item = Extended<S>>) -> S {
    values
        .filter_map(|v| v.finite().cloned())
        .reduce(S::min_of)
        .expect("some pure alternative is efficient")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::fixtures::{arrow_context, make_chat};
    use crate::scalar::Exact;

    fn q(n: i64, d: i64) -> Extended<Exact> {
        Extended::Finite(Exact::from_ratio(n, d))
    }

    #[test]
    fn radicals() {
        assert_eq!(rad(12), 6);
        assert_eq!(rad(1), 1);
        assert_eq!(rad(7), 7);
        assert_eq!(rad(27), 3);
        assert_eq!(rad(4096), 2);
    }

    #[test]
    fn parses_names() {
        assert_eq!("Shifted".parse::<VariantId>().unwrap(), VariantId::Shifted);
        assert!(matches!(
            "bogus".parse::<VariantId>(),
            Err(Error::UnknownVariant(_))
        ));
        for v in VariantId::ALL {
            assert_eq!(v.name().parse::<VariantId>().unwrap(), v);
        }
    }

    #[test]
    fn spec_examples() {
        let arrow = arrow_context();
        let chat = make_chat(2, &[1, 2]).unwrap();
        let x = Lottery::point(3, 0);
        let y = Lottery::point(3, 1);
        assert_eq!(eval_variant(VariantId::Zero, &arrow, &y).unwrap(), q(0, 1));
        assert_eq!(
            eval_variant(VariantId::Shifted, &arrow, &x).unwrap(),
            q(1, 1)
        );
        assert_eq!(
            eval_variant(VariantId::Radical, &arrow, &y).unwrap(),
            q(1, 1)
        );
        assert_eq!(
            eval_variant(VariantId::Exponential, &chat, &Lottery::point(3, 0)).unwrap(),
            q(2, 1)
        );
    }

    #[test]
    fn weighted_on_chat() {
        // Normalized profiles: origin (0,0), alternative 1 (1,0), alternative 2 (0,1).
        // Weighted values: 0, (4/3)(1/2) = 2/3, (4/3)(1/4) = 1/3.
        let chat = make_chat(2, &[1, 2]).unwrap();
        let at = |a| eval_variant(VariantId::Weighted, &chat, &Lottery::point(3, a)).unwrap();
        assert_eq!(at(0), q(2, 3));
        assert_eq!(at(1), q(0, 1));
        assert_eq!(at(2), q(1, 3));
    }

    #[test]
    fn squared_on_chat_mixture_is_negative() {
        let chat = make_chat(2, &[1, 2]).unwrap();
        let half = Lottery::new(vec![
            Exact::from_ratio(0, 1),
            Exact::from_ratio(1, 2),
            Exact::from_ratio(1, 2),
        ])
        .unwrap();
        assert_eq!(
            eval_variant(VariantId::Squared, &chat, &half).unwrap(),
            q(-1, 4)
        );
        assert_eq!(
            eval_variant(VariantId::Squared, &chat, &Lottery::point(3, 0)).unwrap(),
            q(1, 2)
        );
    }

    #[test]
    fn dimension_undefined_without_concerned_individuals() {
        let flat = Context::from_rows(vec![vec![Exact::from_ratio(1, 1); 2]]).unwrap();
        assert_eq!(
            eval_variant(VariantId::Dimension, &flat, &Lottery::point(2, 0)),
            Err(Error::DegenerateDimension)
        );
    }

    #[test]
    fn dimension_is_rescaled_ihat() {
        let arrow = arrow_context();
        for a in 0..3 {
            let x = Lottery::point(3, a);
            let ihat = eval_variant(VariantId::Ihat, &arrow, &x).unwrap();
            assert_eq!(
                eval_variant(VariantId::Dimension, &arrow, &x).unwrap(),
                ihat
            );
        }
    }

    #[test]
    fn infinite_values_propagate() {
        let opposed = Context::from_rows(vec![
            vec![Exact::from_ratio(1, 1), Exact::from_ratio(0, 1)],
            vec![Exact::from_ratio(1, 1), Exact::from_ratio(0, 1)],
        ])
        .unwrap();
        let bad = Lottery::point(2, 1);
        for v in [
            VariantId::Ihat,
            VariantId::Weighted,
            VariantId::Squared,
            VariantId::Shifted,
        ] {
            assert_eq!(
                eval_variant(v, &opposed, &bad).unwrap(),
                Extended::PosInf,
                "{v}"
            );
        }
        assert_eq!(
            eval_variant(VariantId::Zero, &opposed, &bad).unwrap(),
            q(0, 1)
        );
    }
}
