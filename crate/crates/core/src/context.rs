//! Contexts (alternatives plus per-individual vNM utilities), lotteries, and
//! the structural operators on contexts: composition, permutation of
//! individuals, restriction and renaming of alternatives.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default cap on the number of alternatives a composition may produce.
pub const DEFAULT_COMPOSE_CAP: usize = 4096;

/// A finite set of alternatives together with one utility row per individual.
///
/// Row `i`, column `a` is `u_i(a)`. Alternatives are addressed by index; the
/// names only matter for I/O.
#[derive(Debug, Clone, PartialEq)]
pub struct Context<S> {
    names: Vec<String>,
    utilities: Vec<Vec<S>>,
}

impl<S: Scalar> Context<S> {
    /// Validates and builds a context. Rows are individuals, columns follow
    /// `names`.
    pub fn new(names: Vec<String>, utilities: Vec<Vec<S>>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::EmptyAlternatives);
        }
        let mut seen = HashSet::with_capacity(names.len());
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateName(name.clone()));
            }
        }
        if utilities.is_empty() {
            return Err(Error::NoIndividuals);
        }
        for (row, values) in utilities.iter().enumerate() {
            if values.len() != names.len() {
                return Err(Error::RaggedMatrix {
                    row,
                    expected: names.len(),
                    found: values.len(),
                });
            }
        }
        Ok(Self { names, utilities })
    }

    /// Context with alternatives named `0..m`.
    pub fn from_rows(utilities: Vec<Vec<S>>) -> Result<Self> {
        let m = utilities.first().map_or(0, Vec::len);
        Self::new((0..m).map(|a| a.to_string()).collect(), utilities)
    }

    pub fn n_individuals(&self) -> usize {
        self.utilities.len()
    }

    pub fn n_alternatives(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn utilities(&self) -> &[Vec<S>] {
        &self.utilities
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.utilities[i]
    }

    pub fn utility(&self, i: usize, a: usize) -> &S {
        &self.utilities[i][a]
    }

    /// Utility vector `(u_1(a), ..., u_n(a))` of a pure alternative.
    pub fn column(&self, a: usize) -> Vec<S> {
        self.utilities.iter().map(|row| row[a].clone()).collect()
    }

    /// `sum_a x(a) u_i(a)`.
    pub fn expected_utility(&self, i: usize, x: &Lottery<S>) -> Result<S> {
        if i >= self.n_individuals() {
            return Err(Error::IndexOutOfRange {
                index: i,
                limit: self.n_individuals(),
            });
        }
        self.check_lottery(x)?;
        Ok(dot(&self.utilities[i], x.weights()))
    }

    /// Expected utility of every individual.
    pub fn utility_profile(&self, x: &Lottery<S>) -> Result<Vec<S>> {
        self.check_lottery(x)?;
        Ok(self
            .utilities
            .iter()
            .map(|row| dot(row, x.weights()))
            .collect())
    }

    pub fn check_lottery(&self, x: &Lottery<S>) -> Result<()> {
        if x.len() != self.n_alternatives() {
            return Err(Error::InvalidLottery(format!(
                "lottery over {} alternatives used with a context of {}",
                x.len(),
                self.n_alternatives()
            )));
        }
        Ok(())
    }

    /// Composition `self ⊕ other` with the default size cap.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.compose_with_cap(other, DEFAULT_COMPOSE_CAP)
    }

    /// Composition: alternatives are ordered pairs (index `a1 * |X2| + a2`),
    /// individuals of `self` come first and only see the first coordinate.
    pub fn compose_with_cap(&self, other: &Self, cap: usize) -> Result<Self> {
        let (m1, m2) = (self.n_alternatives(), other.n_alternatives());
        let requested = m1.saturating_mul(m2);
        if requested > cap {
            return Err(Error::SizeLimitExceeded { requested, cap });
        }
        let mut names = Vec::with_capacity(requested);
        for a in &self.names {
            for b in &other.names {
                names.push(format!("{a}⊗{b}"));
            }
        }
        let mut utilities = Vec::with_capacity(self.n_individuals() + other.n_individuals());
        for row in &self.utilities {
            utilities.push((0..requested).map(|pair| row[pair / m2].clone()).collect());
        }
        for row in &other.utilities {
            utilities.push((0..requested).map(|pair| row[pair % m2].clone()).collect());
        }
        Ok(Self { names, utilities })
    }

    /// Left-associated `k`-fold self-composition; `k = 1` returns a clone.
    pub fn self_compose(&self, k: usize, cap: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidFixture(
                "self-composition needs k >= 1".into(),
            ));
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.compose_with_cap(self, cap)?;
        }
        Ok(acc)
    }

    /// Row `i` of the result is row `pi[i]` of `self`.
    pub fn permute_individuals(&self, pi: &[usize]) -> Result<Self> {
        check_permutation(pi, self.n_individuals())?;
        Ok(Self {
            names: self.names.clone(),
            utilities: pi.iter().map(|&src| self.utilities[src].clone()).collect(),
        })
    }

    /// Keeps the given alternatives (by index), preserving the original order.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if let Some(&bad) = keep.iter().find(|&&a| a >= self.n_alternatives()) {
            return Err(Error::UnknownAlternative(bad.to_string()));
        }
        Ok(Self {
            names: keep.iter().map(|&a| self.names[a].clone()).collect(),
            utilities: self
                .utilities
                .iter()
                .map(|row| keep.iter().map(|&a| row[a].clone()).collect())
                .collect(),
        })
    }

    pub fn restrict_by_names<T: AsRef<str>>(&self, keep: &[T]) -> Result<Self> {
        let idx = keep
            .iter()
            .map(|name| {
                self.index_of(name.as_ref())
                    .ok_or_else(|| Error::UnknownAlternative(name.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        self.restrict(&idx)
    }

    /// Renames every alternative through `mapping`; utilities are untouched.
    pub fn rename_alternatives(&self, mapping: &HashMap<String, String>) -> Result<Self> {
        let mut images = HashSet::with_capacity(self.names.len());
        let mut names = Vec::with_capacity(self.names.len());
        for name in &self.names {
            let image = mapping
                .get(name)
                .ok_or_else(|| Error::MissingName(name.clone()))?;
            if !images.insert(image.clone()) {
                return Err(Error::NotInjective(image.clone()));
            }
            names.push(image.clone());
        }
        Ok(Self {
            names,
            utilities: self.utilities.clone(),
        })
    }

    /// Same context with every entry mapped through `f` (e.g. to change mode).
    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Context<T> {
        Context {
            names: self.names.clone(),
            utilities: self
                .utilities
                .iter()
                .map(|row| row.iter().map(&f).collect())
                .collect(),
        }
    }

    /// Replaces row `i` by `scale * u_i + shift`.
    pub fn affine_row(&self, i: usize, scale: &S, shift: &S) -> Self {
        let mut out = self.clone();
        for v in &mut out.utilities[i] {
            *v = scale.clone() * v.clone() + shift.clone();
        }
        out
    }
}

pub(crate) fn check_permutation(pi: &[usize], n: usize) -> Result<()> {
    if pi.len() != n {
        return Err(Error::NotAPermutation(n));
    }
    let mut seen = vec![false; n];
    for &p in pi {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::NotAPermutation(n));
        }
    }
    Ok(())
}

fn dot<S: Scalar>(row: &[S], weights: &[S]) -> S {
    row.iter()
        .zip(weights)
        .filter(|(_, w)| **w != S::zero())
        .fold(S::zero(), |acc, (u, w)| acc + u.clone() * w.clone())
}

/// A probability distribution over the alternatives of a context, stored
/// densely by alternative index.
#[derive(Debug, Clone, PartialEq)]
pub struct Lottery<S> {
    weights: Vec<S>,
}

impl<S: Scalar> Lottery<S> {
    /// Validates nonnegativity and unit mass (exact, or within `1e-12` in
    /// float mode).
    pub fn new(weights: Vec<S>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidLottery("no alternatives".into()));
        }
        if weights.iter().any(|w| *w < S::zero()) {
            return Err(Error::InvalidLottery("negative probability".into()));
        }
        let total = weights.iter().cloned().fold(S::zero(), |a, b| a + b);
        let ok = match S::MODE {
            crate::scalar::Mode::Exact => total == S::one(),
            crate::scalar::Mode::Float => (total.to_f64() - 1.0).abs() <= 1e-12,
        };
        if !ok {
            return Err(Error::InvalidLottery(format!("weights sum to {total}")));
        }
        Ok(Self { weights })
    }

    /// Builds a lottery from unnormalized nonnegative weights.
    pub fn normalized(raw: Vec<S>) -> Result<Self> {
        let total = raw.iter().cloned().fold(S::zero(), |a, b| a + b);
        if !total.is_positive() {
            return Err(Error::InvalidLottery("total weight is not positive".into()));
        }
        if S::MODE == crate::scalar::Mode::Exact {
            return Self::new(raw.into_iter().map(|w| w / total.clone()).collect());
        }
        // Float: make the last positive atom absorb the rounding residue.
        let mut weights: Vec<S> = raw.into_iter().map(|w| w / total.clone()).collect();
        if let Some(last) = weights.iter().rposition(|w| w.is_positive()) {
            let rest = weights
                .iter()
                .enumerate()
                .filter(|&(a, _)| a != last)
                .fold(S::zero(), |acc, (_, w)| acc + w.clone());
            weights[last] = S::one() - rest;
        }
        Self::new(weights)
    }

    /// Point mass on alternative `a` among `m`.
    pub fn point(m: usize, a: usize) -> Self {
        assert!(a < m, "alternative {a} out of range {m}");
        let mut weights = vec![S::zero(); m];
        weights[a] = S::one();
        Self { weights }
    }

    /// `alpha * x + (1 - alpha) * y`.
    pub fn mix(alpha: &S, x: &Self, y: &Self) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::InvalidLottery(
                "mixing lotteries of different sizes".into(),
            ));
        }
        if *alpha < S::zero() || *alpha > S::one() {
            return Err(Error::InvalidLottery(format!("mixing weight {alpha}")));
        }
        let beta = S::one() - alpha.clone();
        Ok(Self {
            weights: x
                .weights
                .iter()
                .zip(&y.weights)
                .map(|(a, b)| alpha.clone() * a.clone() + beta.clone() * b.clone())
                .collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    pub fn weight(&self, a: usize) -> &S {
        &self.weights[a]
    }

    /// Indices with positive probability.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&a| self.weights[a].is_positive())
            .collect()
    }

    /// The alternative carrying all the mass, if any.
    pub fn as_point(&self) -> Option<usize> {
        match self.support().as_slice() {
            [a] if self.weights[*a] == S::one() => Some(*a),
            _ => None,
        }
    }

    /// Re-indexes a lottery over `keep` (sorted indices of a restriction) as
    /// a lottery over the full alternative set of size `m`.
    pub fn lift(&self, keep: &[usize], m: usize) -> Result<Self> {
        if keep.len() != self.len() {
            return Err(Error::FactorMismatch);
        }
        let mut weights = vec![S::zero(); m];
        for (w, &a) in self.weights.iter().zip(keep) {
            if a >= m {
                return Err(Error::IndexOutOfRange { index: a, limit: m });
            }
            weights[a] = w.clone();
        }
        Ok(Self { weights })
    }
}

/// Independent product of `parts`, indexed consistently with left-associated
/// [`Context::compose`].
pub fn product_lottery<S: Scalar>(parts: &[Lottery<S>]) -> Result<Lottery<S>> {
    let (first, rest) = parts.split_first().ok_or(Error::FactorMismatch)?;
    let mut acc = first.weights.clone();
    for part in rest {
        let mut next = Vec::with_capacity(acc.len() * part.len());
        for a in &acc {
            for b in &part.weights {
                next.push(a.clone() * b.clone());
            }
        }
        acc = next;
    }
    Ok(Lottery { weights: acc })
}

/// [`product_lottery`], checked against the composed context it lives in.
pub fn product_lottery_for<S: Scalar>(c: &Context<S>, parts: &[Lottery<S>]) -> Result<Lottery<S>> {
    let size: usize = parts.iter().map(Lottery::len).product();
    if parts.is_empty() || size != c.n_alternatives() {
        return Err(Error::FactorMismatch);
    }
    product_lottery(parts)
}
