//! Generators of functions that satisfy the vanishing-average condition.
//!
//! General case (`Σα = 1`): pick alternating Walsh components `F_S` for every
//! `S` containing the last axis, then solve condition 3 with `ℓ = m` for the
//! remaining nonempty `S`; `F_∅ = 0`.
//!
//! Symmetric case: sum symmetric Walsh functions `g_k(x_S)` over all `|S| = k`
//! for the levels `k ∈ K(m, r, α)`.
//!
//! Randomness comes from [`SplitMix64`]. Raw cell values are integers in
//! `[-9, 9]`. Per-subset streams are seeded with `seed ^ bitmask(S)`,
//! per-level streams with `seed ^ k`.

use num_complex::Complex;
use num_traits::Zero;

use crate::alpha::AlphaVector;
use crate::error::{Error, Result};
use crate::rational::{binomial, int, Rational};
use crate::rng::SplitMix64;
use crate::stepfn::StepFunction;
use crate::subset::SubsetMask;
use crate::symmetric::compute_k;
use crate::walsh::{is_walsh, walsh_component, WalshExpansion};

/// Real function with independent integer values in `[-9, 9]`.
pub fn random_function(arity: usize, resolution: usize, seed: u64) -> Result<StepFunction> {
    let mut rng = SplitMix64::new(seed);
    StepFunction::from_fn(arity, resolution, |_| Complex::new(int(rng.int_in(-9, 9)), Rational::zero()))
}

/// A random alternating Walsh function on `s`: the `F_S` component of a random
/// function, antisymmetrized over `s`.
///
/// That space has dimension `C(n-1, |S|)`, so `n ≥ |S| + 1` is required.
pub fn random_walsh_alternating(
    arity: usize,
    resolution: usize,
    s: SubsetMask,
    seed: u64,
) -> Result<StepFunction> {
    if s.arity() != arity {
        return Err(Error::Subset(format!("subset over {} axes used with arity {arity}", s.arity())));
    }
    if s.is_empty() {
        return Err(Error::Subset("alternating Walsh functions need |S| ≥ 1".into()));
    }
    if resolution < s.len() + 1 {
        return Err(Error::Precondition(format!(
            "alternating Walsh functions on {s} at n={resolution} form a space of dimension C({}, {}) = {}; only the zero function exists",
            resolution.saturating_sub(1),
            s.len(),
            binomial(resolution.saturating_sub(1), s.len())
        )));
    }
    let raw = random_function(arity, resolution, seed)?;
    walsh_component(&raw, s)?.antisymmetrize(s)
}

/// Fills in `F_S` for every nonempty `S` avoiding the last axis from the
/// components on subsets containing it, using condition 3 with `ℓ` the last axis:
/// `F_S(x) = α(S) Σ_{i∈S} F_{S_i}(x^{(i)}) / α(S_i)`. `F_∅` is set to zero.
pub fn complete_expansion(
    arity: usize,
    resolution: usize,
    top: impl IntoIterator<Item = (SubsetMask, StepFunction)>,
    alpha: &AlphaVector,
) -> Result<WalshExpansion> {
    if alpha.len() != arity {
        return Err(Error::Alpha(format!("{} entries for arity {arity}", alpha.len())));
    }
    if !alpha.is_full() {
        return Err(Error::Precondition("complete_expansion needs alpha summing to 1".into()));
    }
    let last = arity - 1;
    let mut e = WalshExpansion::zero(arity, resolution)?;
    for (s, g) in top {
        if !s.contains(last) {
            return Err(Error::Precondition(format!(
                "top component {s} does not contain coordinate {arity}"
            )));
        }
        if !g.same_shape(&StepFunction::zero(arity, resolution)?) {
            return Err(Error::Shape(format!("top component {s} has the wrong shape")));
        }
        if !is_walsh(&g, s) {
            return Err(Error::Precondition(format!("top component {s} is not a Walsh function")));
        }
        if !g.is_alternating(s) {
            return Err(Error::Precondition(format!("top component {s} is not alternating")));
        }
        e.set(s, g)?;
    }
    for s in SubsetMask::all(arity) {
        if s.is_empty() || s.contains(last) {
            continue;
        }
        let mut acc = StepFunction::zero(arity, resolution)?;
        for i in s.axes() {
            let si = s.with(last).without(i);
            let weight = alpha.product(s) / alpha.product(si);
            acc = acc.add(&e.component(si).swap_coords(last, i)?.scale_real(&weight));
        }
        e.set(s, acc)?;
    }
    Ok(e)
}

/// The seeded top components used by [`construct_solution`]: a random
/// alternating Walsh function for every `S ∋ m` with `n ≥ |S| + 1`, zero otherwise.
pub fn random_top_components(
    arity: usize,
    resolution: usize,
    seed: u64,
) -> Result<Vec<(SubsetMask, StepFunction)>> {
    let last = arity - 1;
    SubsetMask::all(arity)
        .filter(|s| s.contains(last))
        .map(|s| {
            let g = if resolution > s.len() {
                random_walsh_alternating(arity, resolution, s, seed ^ s.bits() as u64)?
            } else {
                StepFunction::zero(arity, resolution)?
            };
            Ok((s, g))
        })
        .collect()
}

/// Expansion of a seeded solution; [`construct_solution`] reconstructs it.
pub fn construct_solution_expansion(
    arity: usize,
    resolution: usize,
    alpha: &AlphaVector,
    seed: u64,
) -> Result<WalshExpansion> {
    if resolution < 2 {
        return Err(Error::Precondition("construct_solution needs n ≥ 2".into()));
    }
    if alpha.len() != arity {
        return Err(Error::Alpha(format!("{} entries for arity {arity}", alpha.len())));
    }
    alpha.check_resolution(resolution)?;
    let top = random_top_components(arity, resolution, seed)?;
    complete_expansion(arity, resolution, top, alpha)
}

/// A seeded function vanishing on every `α`-product.
pub fn construct_solution(
    arity: usize,
    resolution: usize,
    alpha: &AlphaVector,
    seed: u64,
) -> Result<StepFunction> {
    Ok(construct_solution_expansion(arity, resolution, alpha, seed)?.reconstruct())
}

/// Random symmetric Walsh function of the leading `k` axes, at arity `arity`.
pub fn random_symmetric_walsh(arity: usize, k: usize, resolution: usize, seed: u64) -> Result<StepFunction> {
    let lead = SubsetMask::from_axes(arity, 0..k)?;
    let raw = random_function(arity, resolution, seed)?;
    walsh_component(&raw, lead)?.symmetrize(lead)
}

/// `Σ_{|S| = k} g(x_S)` for `g` a symmetric function of the leading `k` axes.
pub fn spread_over_level(g: &StepFunction, k: usize) -> Result<StepFunction> {
    let m = g.arity();
    let mut acc = StepFunction::zero(m, g.resolution())?;
    for s in SubsetMask::all(m).filter(|s| s.len() == k) {
        acc = acc.add(&g.embed_leading(k, m, s)?);
    }
    Ok(acc)
}

/// A seeded symmetric solution of `∫_{A^{m-r} × Ā^r} f = 0` for all `A` of measure
/// `alpha`, supported on the levels `K(m, r, α)`.
pub fn construct_symmetric_solution(
    arity: usize,
    r: usize,
    alpha: &Rational,
    resolution: usize,
    seed: u64,
) -> Result<StepFunction> {
    let kset = compute_k(arity, r, alpha)?;
    let single = AlphaVector::new(vec![alpha.clone()])?;
    single.check_resolution(resolution)?;
    if kset.members.is_empty() {
        return Err(Error::Precondition(format!(
            "K({arity},{r},{}) is empty: only the zero function satisfies the condition",
            alpha
        )));
    }
    let mut acc = StepFunction::zero(arity, resolution)?;
    for &k in &kset.members {
        let g = random_symmetric_walsh(arity, k, resolution, seed ^ k as u64)?;
        acc = acc.add(&spread_over_level(&g, k)?);
    }
    Ok(acc)
}
