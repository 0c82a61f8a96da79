//! The social value `V` and the inefficiency function built on it.
//!
//! Each individual's utility is rescaled so that their range over the Pareto
//! frontier becomes `[0, 1]`; `V` is the average rescaled utility and the
//! inefficiency of a lottery is how far its `V` falls short of the best pure
//! alternative.

use crate::context::{Context, Lottery};
use crate::error::Result;
use crate::frontier::{frontier_summary, FrontierSummary};
use crate::scalar::{Extended, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct InefficiencyResult<S> {
    /// `v_max - v_of_x`; nonnegative or `+inf`.
    pub value: Extended<S>,
    pub v_of_x: Extended<S>,
    pub v_max: S,
    /// First pure alternative attaining `v_max`.
    pub argmax_pure: usize,
    /// A frontier-indifferent individual left below their frontier utility,
    /// present exactly when `value` is infinite.
    pub infinite_witness: Option<usize>,
}

/// `(EU_i(x) - u_min(i)) / (u_max(i) - u_min(i))` with `0/0 = 0` and
/// `negative/0 = -inf`.
pub fn normalized_utility<S: Scalar>(
    c: &Context<S>,
    summary: &FrontierSummary<S>,
    i: usize,
    x: &Lottery<S>,
) -> Result<Extended<S>> {
    let eu = c.expected_utility(i, x)?;
    Ok(normalize(summary, i, eu))
}

pub(crate) fn normalize<S: Scalar>(summary: &FrontierSummary<S>, i: usize, eu: S) -> Extended<S> {
    normalize_in_range(
        eu,
        &summary.u_min[i],
        &summary.u_max[i],
        summary.frontier_indifferent[i],
    )
}

/// Rescales `eu` so that `[lo, hi]` maps to `[0, 1]`. A degenerate range
/// (`indifferent`) maps `lo` to 0 and anything below it to `-inf`.
pub fn normalize_in_range<S: Scalar>(eu: S, lo: &S, hi: &S, indifferent: bool) -> Extended<S> {
    let shortfall = eu - lo.clone();
    if indifferent {
        // Routed through the flag so that float noise in the diameter
        // cannot produce a huge finite quotient.
        if shortfall.is_negative() {
            Extended::NegInf
        } else {
            Extended::zero()
        }
    } else {
        Extended::ratio(shortfall, hi.clone() - lo.clone())
    }
}

/// `V(x)`: the average normalized utility.
pub fn social_value<S: Scalar>(c: &Context<S>, x: &Lottery<S>) -> Result<Extended<S>> {
    let summary = frontier_summary(c)?;
    social_value_with(c, &summary, x)
}

pub fn social_value_with<S: Scalar>(
    c: &Context<S>,
    summary: &FrontierSummary<S>,
    x: &Lottery<S>,
) -> Result<Extended<S>> {
    let profile = c.utility_profile(x)?;
    Ok(value_of_profile(summary, profile))
}

pub(crate) fn value_of_profile<S: Scalar>(
    summary: &FrontierSummary<S>,
    profile: Vec<S>,
) -> Extended<S> {
    let n = profile.len() as i64;
    let total = profile
        .into_iter()
        .enumerate()
        .fold(Extended::zero(), |acc, (i, eu)| {
            acc + normalize(summary, i, eu)
        });
    total.scale(&S::from_ratio(1, n))
}

/// `V` at every pure alternative.
pub fn pure_social_values<S: Scalar>(
    c: &Context<S>,
    summary: &FrontierSummary<S>,
) -> Vec<Extended<S>> {
    (0..c.n_alternatives())
        .map(|a| value_of_profile(summary, c.column(a)))
        .collect()
}

/// Inefficiency of `x`, computing the frontier summary on the way.
pub fn ihat<S: Scalar>(c: &Context<S>, x: &Lottery<S>) -> Result<InefficiencyResult<S>> {
    let summary = frontier_summary(c)?;
    ihat_with(c, &summary, x)
}

/// Inefficiency of `x` against a precomputed summary of `c`.
pub fn ihat_with<S: Scalar>(
    c: &Context<S>,
    summary: &FrontierSummary<S>,
    x: &Lottery<S>,
) -> Result<InefficiencyResult<S>> {
    let (argmax_pure, v_max) = best_pure(c, summary);
    let v_of_x = social_value_with(c, summary, x)?;
    let value = match &v_of_x {
        Extended::Finite(v) => {
            let gap = v_max.clone() - v.clone();
            // Float round-off may leave a tiny negative gap at the optimum.
            Extended::Finite(if gap.is_zero() { S::zero() } else { gap })
        }
        Extended::NegInf => Extended::PosInf,
        Extended::PosInf => unreachable!("normalized utilities are bounded above by 1"),
    };
    let infinite_witness = infinite_witness_with(c, summary, x)?;
    debug_assert_eq!(infinite_witness.is_some(), value.is_pos_inf());
    Ok(InefficiencyResult {
        value,
        v_of_x,
        v_max,
        argmax_pure,
        infinite_witness,
    })
}

/// The pure alternative maximizing `V` and its value, which is always finite
/// since efficient pure alternatives keep everyone within their frontier range.
pub fn best_pure<S: Scalar>(c: &Context<S>, summary: &FrontierSummary<S>) -> (usize, S) {
    let mut best: Option<(usize, S)> = None;
    for (a, v) in pure_social_values(c, summary).into_iter().enumerate() {
        if let Extended::Finite(v) = v {
            if best.as_ref().map_or(true, |(_, b)| v > *b) {
                best = Some((a, v));
            }
        }
    }
    best.expect("an efficient pure alternative has finite value")
}

/// True iff some frontier-indifferent individual gets strictly less than their
/// frontier utility at `x`. Decided from the utilities alone, without `V`.
pub fn is_infinite<S: Scalar>(c: &Context<S>, x: &Lottery<S>) -> Result<bool> {
    let summary = frontier_summary(c)?;
    Ok(infinite_witness_with(c, &summary, x)?.is_some())
}

pub fn infinite_witness_with<S: Scalar>(
    c: &Context<S>,
    summary: &FrontierSummary<S>,
    x: &Lottery<S>,
) -> Result<Option<usize>> {
    for i in 0..c.n_individuals() {
        if summary.frontier_indifferent[i]
            && c.expected_utility(i, x)? < summary.u_min[i].clone() - S::tolerance()
        {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    fn q(n: i64, d: i64) -> Exact {
        Exact::from_ratio(n, d)
    }

    fn fin(n: i64, d: i64) -> Extended<Exact> {
        Extended::Finite(q(n, d))
    }

    fn arrow() -> Context<Exact> {
        Context::new(
            vec!["x".into(), "y".into(), "z".into()],
            vec![
                vec![q(1, 1), q(9, 10), q(0, 1)],
                vec![q(1, 1), q(9, 10), q(0, 1)],
                vec![q(1, 2), q(1, 1), q(0, 1)],
            ],
        )
        .unwrap()
    }

    fn opposed() -> Context<Exact> {
        // Matchings (0->a, 1->b) and (0->b, 1->a) with 0: a > b, 1: b > a.
        Context::from_rows(vec![vec![q(1, 1), q(0, 1)], vec![q(1, 1), q(0, 1)]]).unwrap()
    }

    #[test]
    fn arrow_values() {
        let c = arrow();
        let expected = [fin(0, 1), fin(1, 3), fin(7, 1)];
        for (a, want) in expected.into_iter().enumerate() {
            let r = ihat(&c, &Lottery::point(3, a)).unwrap();
            assert_eq!(r.value, want, "alternative {a}");
            assert_eq!(r.v_max, q(2, 3));
            assert_eq!(r.argmax_pure, 0);
        }
        let half = Lottery::new(vec![q(1, 2), q(1, 2), q(0, 1)]).unwrap();
        assert_eq!(ihat(&c, &half).unwrap().value, fin(1, 6));
    }

    #[test]
    fn arrow_social_values() {
        let c = arrow();
        assert_eq!(social_value(&c, &Lottery::point(3, 0)).unwrap(), fin(2, 3));
        assert_eq!(
            social_value(&c, &Lottery::point(3, 2)).unwrap(),
            fin(-19, 3)
        );
    }

    #[test]
    fn arrow_normalized_utilities() {
        let c = arrow();
        let s = frontier_summary(&c).unwrap();
        assert_eq!(
            normalized_utility(&c, &s, 0, &Lottery::point(3, 1)).unwrap(),
            fin(0, 1)
        );
        assert_eq!(
            normalized_utility(&c, &s, 0, &Lottery::point(3, 2)).unwrap(),
            fin(-9, 1)
        );
    }

    #[test]
    fn indifferent_individual_at_frontier_is_zero() {
        let c = Context::from_rows(vec![vec![q(1, 1), q(1, 1)], vec![q(0, 1), q(1, 1)]]).unwrap();
        let s = frontier_summary(&c).unwrap();
        assert!(s.frontier_indifferent[0]);
        assert_eq!(
            normalized_utility(&c, &s, 0, &Lottery::point(2, 1)).unwrap(),
            fin(0, 1)
        );
    }

    #[test]
    fn deleting_dominated_alternative_keeps_values() {
        let full = arrow();
        let small = full.restrict(&[0, 1]).unwrap();
        for a in 0..2 {
            let lhs = ihat(&full, &Lottery::point(3, a)).unwrap().value;
            let rhs = ihat(&small, &Lottery::point(2, a)).unwrap().value;
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn chat_values() {
        let c = Context::from_rows(vec![
            vec![q(0, 1), q(1, 1), q(0, 1)],
            vec![q(0, 1), q(0, 1), q(1, 1)],
        ])
        .unwrap();
        assert_eq!(social_value(&c, &Lottery::point(3, 0)).unwrap(), fin(0, 1));
        assert_eq!(ihat(&c, &Lottery::point(3, 0)).unwrap().value, fin(1, 2));
        assert_eq!(ihat(&c, &Lottery::point(3, 1)).unwrap().value, fin(0, 1));
        assert_eq!(ihat(&c, &Lottery::point(3, 2)).unwrap().value, fin(0, 1));
    }

    #[test]
    fn opposed_allocation_is_infinite_off_the_frontier() {
        let c = opposed();
        let good = ihat(&c, &Lottery::point(2, 0)).unwrap();
        assert_eq!(good.value, fin(0, 1));
        assert_eq!(good.infinite_witness, None);
        let bad = ihat(&c, &Lottery::point(2, 1)).unwrap();
        assert_eq!(bad.value, Extended::PosInf);
        assert_eq!(bad.infinite_witness, Some(0));
        assert!(is_infinite(&c, &Lottery::point(2, 1)).unwrap());
        assert!(!is_infinite(&c, &Lottery::point(2, 0)).unwrap());
    }

    #[test]
    fn float_mode_matches_exact_on_arrow() {
        let c = arrow().map_scalars(|v| v.to_f64());
        let r = ihat(&c, &Lottery::point(3, 2)).unwrap();
        assert!((r.value.to_f64() - 7.0).abs() < 1e-9);
        let r = ihat(&c, &Lottery::point(3, 0)).unwrap();
        assert_eq!(r.value, Extended::Finite(0.0));
    }
}
