//! Brute-force ground truth: integrate `f` exactly over products of
//! grid-aligned sets.
//!
//! At refinement factor `r` each of the `n` coarse cells of an axis is split
//! into `r` refined cells, and a [`GridPartition`] labels the `N = n·r` refined
//! cells with `1..=m` (label `t` is the set `A_t`) or `0` (unused). Such
//! partitions are unions of intervals, so their boundaries are null.
//!
//! [`brute_force_vanishes`] covers every labeling with the required label
//! counts by scanning the distinct count profiles (labelings that put the same
//! number of each label into every coarse cell have equal integrals). The
//! reported counterexample is the lexicographically smallest failing labeling,
//! with labels ranked `1 < ⋯ < m < 0`.
//! When the number of profiles exceeds the budget the factor is instead
//! sampled: `budget` uniformly shuffled labelings from a SplitMix64 stream
//! seeded with `seed ^ r`, stopping at the first failure.

mod tensor;

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::alpha::AlphaVector;
use crate::error::{Error, Result};
use crate::rational::{complex_to_json, Rational, RationalComplex};
use crate::rng::SplitMix64;
use crate::stepfn::StepFunction;
use crate::subset::SubsetMask;

use tensor::{contract_all, is_zero_pair, label_weights, profile_count, scan_profiles, ScaledFunction, Scalar};

/// A labeling of the `n_cells` refined cells of `[0,1]` with labels `0..=m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridPartition {
    labels: Vec<usize>,
}

impl GridPartition {
    pub fn new(labels: Vec<usize>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Partition("a partition needs at least one cell".into()));
        }
        Ok(GridPartition { labels })
    }

    pub fn n_cells(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Cells carrying each label `1..=m`.
    pub fn counts(&self, m: usize) -> Vec<usize> {
        (1..=m)
            .map(|t| self.labels.iter().filter(|&&l| l == t).count())
            .collect()
    }

    /// Label counts equal `α_t · n_cells`.
    pub fn realizes(&self, alpha: &AlphaVector) -> bool {
        self.labels.iter().all(|&l| l <= alpha.len())
            && alpha
                .counts(self.n_cells())
                .map(|c| c == self.counts(alpha.len()))
                .unwrap_or(false)
    }

    pub fn to_json(&self) -> Value {
        json!({ "n_cells": self.n_cells(), "labels": self.labels })
    }
}

/// Iterator over all labelings of `n_cells` cells in which label `t + 1` occurs
/// `counts[t]` times and label 0 fills the rest, in lexicographic order with
/// labels ranked `1 < ⋯ < m < 0`.
#[derive(Debug, Clone)]
pub struct Partitions {
    m: usize,
    next: Option<Vec<usize>>,
}

impl Iterator for Partitions {
    type Item = GridPartition;

    fn next(&mut self) -> Option<GridPartition> {
        let keys = self.next.take()?;
        let mut succ = keys.clone();
        if next_permutation(&mut succ) {
            self.next = Some(succ);
        }
        let slack = self.m + 1;
        let labels = keys.into_iter().map(|k| if k == slack { 0 } else { k }).collect();
        Some(GridPartition { labels })
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let pivot = i - 1;
    let j = (i..v.len()).rev().find(|&j| v[j] > v[pivot]).expect("successor exists");
    v.swap(pivot, j);
    v[i..].reverse();
    true
}

pub fn enumerate_partitions(n_cells: usize, counts: &[usize]) -> Result<Partitions> {
    let used: usize = counts.iter().sum();
    if used > n_cells {
        return Err(Error::Partition(format!(
            "label counts sum to {used} > {n_cells} cells"
        )));
    }
    let m = counts.len();
    let mut first = Vec::with_capacity(n_cells);
    for (t, &c) in counts.iter().enumerate() {
        first.extend(std::iter::repeat_n(t + 1, c));
    }
    first.extend(std::iter::repeat_n(m + 1, n_cells - used));
    Ok(Partitions { m, next: Some(first) })
}

/// `multinomial(n_cells; counts, slack)`.
pub fn partition_count(n_cells: usize, counts: &[usize]) -> BigUint {
    let mut remaining = n_cells;
    let mut total = BigUint::from(1u32);
    for &c in counts {
        total *= crate::rational::binomial(remaining, c)
            .to_biguint()
            .expect("binomials are nonnegative");
        remaining -= c.min(remaining);
    }
    total
}

fn refinement_of(f: &StepFunction, n_cells: usize) -> Result<usize> {
    if n_cells == 0 || !n_cells.is_multiple_of(f.resolution()) {
        return Err(Error::Partition(format!(
            "{n_cells} cells do not refine resolution {}",
            f.resolution()
        )));
    }
    Ok(n_cells / f.resolution())
}

fn evaluate<T: Scalar + Into<BigInt>>(
    scaled: &ScaledFunction,
    tensor: &[T],
    labels: &[usize],
) -> RationalComplex {
    let n_cells = labels.len();
    let weights = label_weights(labels, scaled.resolution, scaled.arity);
    let (re, im) = contract_all(tensor, scaled.resolution, &weights);
    scaled.unscale(re.into(), im.into(), n_cells)
}

/// `∫_{A_1 × ⋯ × A_m} f` with `A_t` the cells labeled `t`.
pub fn product_set_integral(f: &StepFunction, p: &GridPartition) -> Result<RationalComplex> {
    refinement_of(f, p.n_cells())?;
    if let Some(&bad) = p.labels.iter().find(|&&l| l > f.arity()) {
        return Err(Error::Partition(format!("label {bad} exceeds arity {}", f.arity())));
    }
    let scaled = ScaledFunction::new(f);
    Ok(match scaled.as_i128(p.n_cells()) {
        Some(t) => evaluate(&scaled, &t, &p.labels),
        None => evaluate(&scaled, &scaled.as_bigint(), &p.labels),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    Exhaustive,
    Sampled { seed: u64, budget: u64 },
}

impl OracleMode {
    fn to_json(self) -> Value {
        match self {
            OracleMode::Exhaustive => json!("exhaustive"),
            OracleMode::Sampled { seed, budget } => json!({ "sampled": { "seed": seed, "budget": budget } }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub partition: GridPartition,
    pub value: RationalComplex,
}

/// What happened at one refinement factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorReport {
    pub refinement: usize,
    pub mode: OracleMode,
    /// Labelings covered (saturating).
    pub partitions_checked: u64,
    /// Distinct integrals evaluated.
    pub profiles_evaluated: u64,
    pub all_zero: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub all_zero: bool,
    /// Labelings covered across all factors (saturating).
    pub partitions_checked: u64,
    pub counterexample: Option<Counterexample>,
    /// Factor of the counterexample, or the last factor checked.
    pub refinement: usize,
    /// `Sampled` if any factor was sampled.
    pub mode: OracleMode,
    pub factors: Vec<FactorReport>,
}

impl OracleReport {
    pub fn to_json(&self) -> Value {
        json!({
            "all_zero": self.all_zero,
            "partitions_checked": self.partitions_checked,
            "counterexample": self.counterexample.as_ref().map(|c| {
                let mut v = c.partition.to_json();
                v["value"] = complex_to_json(&c.value);
                v
            }),
            "refinement": self.refinement,
            "mode": self.mode.to_json(),
            "factors": self.factors.iter().map(|r| json!({
                "refinement": r.refinement,
                "mode": r.mode.to_json(),
                "partitions_checked": r.partitions_checked,
                "profiles_evaluated": r.profiles_evaluated,
                "all_zero": r.all_zero,
            })).collect::<Vec<_>>(),
        })
    }

    fn from_factors(factors: Vec<FactorReport>, counterexample: Option<Counterexample>) -> Self {
        let mode = factors
            .iter()
            .map(|r| r.mode)
            .find(|m| matches!(m, OracleMode::Sampled { .. }))
            .unwrap_or(OracleMode::Exhaustive);
        OracleReport {
            all_zero: counterexample.is_none(),
            partitions_checked: factors
                .iter()
                .fold(0u64, |acc, r| acc.saturating_add(r.partitions_checked)),
            refinement: factors.last().map(|r| r.refinement).unwrap_or(0),
            mode,
            counterexample,
            factors,
        }
    }
}

impl Serialize for OracleReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleConfig {
    /// Refinement factors, checked in order. Empty means `1..=max(2, m)`.
    pub refinements: Vec<usize>,
    /// Maximum number of distinct profiles scanned exhaustively per factor.
    pub budget: u64,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            refinements: Vec::new(),
            budget: 1_000_000,
            seed: 0,
        }
    }
}

impl OracleConfig {
    pub fn with_refinements(refinements: impl IntoIterator<Item = usize>) -> Self {
        OracleConfig {
            refinements: refinements.into_iter().collect(),
            ..Default::default()
        }
    }
}

pub fn default_refinements(arity: usize) -> Vec<usize> {
    (1..=arity.max(2)).collect()
}

/// Factors in `1..=max` at which `alpha` fits a grid of `resolution · r` cells.
pub fn compatible_refinements(alpha: &AlphaVector, resolution: usize, max: usize) -> Vec<usize> {
    (1..=max)
        .filter(|r| alpha.check_resolution(resolution * r).is_ok())
        .collect()
}

fn saturating_u64(v: &BigUint) -> u64 {
    v.to_u64().unwrap_or(u64::MAX)
}

fn check_factor<T: Scalar + Into<BigInt>>(
    scaled: &ScaledFunction,
    tensor: &[T],
    r: usize,
    counts: &[usize],
    config: &OracleConfig,
) -> (FactorReport, Option<Counterexample>) {
    let n = scaled.resolution;
    let n_cells = n * r;
    let profiles = profile_count(n, r, counts);
    if profiles <= config.budget as u128 {
        let scan = scan_profiles(tensor, n, r, counts);
        let counterexample = scan.best.map(|(labels, pair)| {
            let (re, im) = tensor::to_bigint_pair(pair);
            Counterexample {
                partition: GridPartition { labels },
                value: scaled.unscale(re, im, n_cells),
            }
        });
        let report = FactorReport {
            refinement: r,
            mode: OracleMode::Exhaustive,
            partitions_checked: saturating_u64(&partition_count(n_cells, counts)),
            profiles_evaluated: scan.profiles,
            all_zero: counterexample.is_none(),
        };
        return (report, counterexample);
    }
    let seed = config.seed ^ r as u64;
    let mut rng = SplitMix64::new(seed);
    let mut labels = enumerate_partitions(n_cells, counts)
        .expect("counts fit")
        .next()
        .expect("at least one labeling")
        .labels;
    let mut checked = 0u64;
    let mut counterexample = None;
    while checked < config.budget {
        rng.shuffle(&mut labels);
        checked += 1;
        let weights = label_weights(&labels, n, counts.len());
        let pair = contract_all(tensor, n, &weights);
        if !is_zero_pair(&pair) {
            let (re, im) = tensor::to_bigint_pair(pair);
            counterexample = Some(Counterexample {
                partition: GridPartition { labels: labels.clone() },
                value: scaled.unscale(re, im, n_cells),
            });
            break;
        }
    }
    let report = FactorReport {
        refinement: r,
        mode: OracleMode::Sampled {
            seed,
            budget: config.budget,
        },
        partitions_checked: checked,
        profiles_evaluated: checked,
        all_zero: counterexample.is_none(),
    };
    (report, counterexample)
}

/// Searches grid partitions realizing `alpha` for a product set on which `f`
/// has nonzero integral.
pub fn brute_force_vanishes(f: &StepFunction, alpha: &AlphaVector, config: &OracleConfig) -> Result<OracleReport> {
    if alpha.len() != f.arity() {
        return Err(Error::Alpha(format!(
            "{} entries for arity {}",
            alpha.len(),
            f.arity()
        )));
    }
    let refinements = if config.refinements.is_empty() {
        default_refinements(f.arity())
    } else {
        config.refinements.clone()
    };
    if refinements.contains(&0) {
        return Err(Error::Precondition("refinement factors must be positive".into()));
    }
    let mut plan = Vec::with_capacity(refinements.len());
    for &r in &refinements {
        plan.push((r, alpha.counts(f.resolution() * r)?));
    }
    let scaled = ScaledFunction::new(f);
    let mut factors = Vec::new();
    for (r, counts) in plan {
        let n_cells = f.resolution() * r;
        let (report, counterexample) = match scaled.as_i128(n_cells) {
            Some(t) => check_factor(&scaled, &t, r, &counts, config),
            None => check_factor(&scaled, &scaled.as_bigint(), r, &counts, config),
        };
        factors.push(report);
        if counterexample.is_some() {
            return Ok(OracleReport::from_factors(factors, counterexample));
        }
    }
    Ok(OracleReport::from_factors(factors, None))
}

/// `∫_{A^{m-r} × Ā^r} f`, with `A` the cells of `set` labeled 1 and `Ā` the rest.
pub fn family_integral(f: &StepFunction, r: usize, set: &GridPartition) -> Result<RationalComplex> {
    refinement_of(f, set.n_cells())?;
    let m = f.arity();
    if r > m {
        return Err(Error::Precondition(format!("r = {r} exceeds m = {m}")));
    }
    let labels: Vec<usize> = set.labels.iter().map(|&l| usize::from(l != 0)).collect();
    let inside = label_weights(&labels, f.resolution(), 1).remove(0);
    let refine = (set.n_cells() / f.resolution()) as u32;
    let outside: Vec<u32> = inside.iter().map(|w| refine - w).collect();
    let weights: Vec<Vec<u32>> = (0..m)
        .map(|axis| if axis < m - r { inside.clone() } else { outside.clone() })
        .collect();
    let scaled = ScaledFunction::new(f);
    let (re, im) = match scaled.as_i128(set.n_cells()) {
        Some(t) => tensor::to_bigint_pair(contract_all(&t, f.resolution(), &weights)),
        None => contract_all(&scaled.as_bigint(), f.resolution(), &weights),
    };
    Ok(scaled.unscale(re, im, set.n_cells()))
}

/// Integrates symmetric `f` over `A^{m-r} × Ā^r` for every grid set `A` of
/// `α · n · refine` refined cells (lexicographic order of the cell sets).
/// Counterexample partitions label `A` with 1 and `Ā` with 0.
pub fn symmetric_family_check(f: &StepFunction, r: usize, alpha: &Rational, refine: usize) -> Result<OracleReport> {
    if let Some((i, j, _)) = f.symmetry_defect(SubsetMask::full(f.arity())) {
        return Err(Error::Precondition(format!(
            "function is not symmetric under swapping coordinates {} and {}",
            i + 1,
            j + 1
        )));
    }
    if refine == 0 {
        return Err(Error::Precondition("refinement factors must be positive".into()));
    }
    let n_cells = f.resolution() * refine;
    let size = AlphaVector::new(vec![alpha.clone()])?.counts(n_cells)?[0];
    let mut checked = 0u64;
    let mut counterexample = None;
    for chosen in (0..n_cells).combinations(size) {
        let mut labels = vec![0; n_cells];
        for c in chosen {
            labels[c] = 1;
        }
        let set = GridPartition { labels };
        checked += 1;
        let value = family_integral(f, r, &set)?;
        if !value.is_zero() {
            counterexample = Some(Counterexample { partition: set, value });
            break;
        }
    }
    let factor = FactorReport {
        refinement: refine,
        mode: OracleMode::Exhaustive,
        partitions_checked: checked,
        profiles_evaluated: checked,
        all_zero: counterexample.is_none(),
    };
    Ok(OracleReport::from_factors(vec![factor], counterexample))
}
