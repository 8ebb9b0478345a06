//! Integer-scaled tensors and the count-profile search behind the oracle.
//!
//! `∫_{A_1×⋯×A_m} f` over a refined grid labeling depends only on the profile
//! `w_t(j)`: how many refined cells of coarse cell `j` carry label `t`. With
//! `f = D^{-1} F` for an integer tensor `F`,
//! `N^m D · ∫ = Σ_j F(j) Π_t w_t(j_t)`, which is contracted one axis at a time.
//! Labels are assigned last axis first so every partial contraction is shared
//! by all profiles that extend it.

use std::collections::HashMap;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::{Rational, RationalComplex};
use crate::stepfn::StepFunction;

/// Arithmetic the contraction needs; implemented by `i128` and `BigInt`.
pub(crate) trait Scalar: Clone + Zero + PartialEq + Add<Output = Self> + Mul<Output = Self> {
    fn from_count(c: u32) -> Self;
}

impl Scalar for i128 {
    fn from_count(c: u32) -> Self {
        c as i128
    }
}

impl Scalar for BigInt {
    fn from_count(c: u32) -> Self {
        BigInt::from(c)
    }
}

/// Cell values times a common denominator, real and imaginary parts interleaved.
pub(crate) struct ScaledFunction {
    pub arity: usize,
    pub resolution: usize,
    pub denom: BigInt,
    pub data: Vec<BigInt>,
}

impl ScaledFunction {
    pub fn new(f: &StepFunction) -> Self {
        let denom = f
            .values()
            .iter()
            .flat_map(|v| [v.re.denom(), v.im.denom()])
            .fold(BigInt::one(), |acc, d| acc.lcm(d));
        let data = f
            .values()
            .iter()
            .flat_map(|v| [&v.re, &v.im])
            .map(|x| (x * Rational::from_integer(denom.clone())).to_integer())
            .collect();
        ScaledFunction {
            arity: f.arity(),
            resolution: f.resolution(),
            denom,
            data,
        }
    }

    /// `i128` copy when no partial sum over `cells` refined cells per axis can overflow.
    pub fn as_i128(&self, cells: usize) -> Option<Vec<i128>> {
        let max_bits = self.data.iter().map(|v| v.abs().bits()).max().unwrap_or(0);
        let cell_bits = (usize::BITS - cells.leading_zeros()) as u64;
        if max_bits + cell_bits * self.arity as u64 + 1 > 125 {
            return None;
        }
        self.data.iter().map(|v| v.to_i128()).collect()
    }

    pub fn as_bigint(&self) -> Vec<BigInt> {
        self.data.clone()
    }

    /// Turns a contracted pair back into the integral over `cells^arity` cell mass.
    pub fn unscale(&self, re: BigInt, im: BigInt, cells: usize) -> RationalComplex {
        let denom = &self.denom * BigInt::from(cells).pow(self.arity as u32);
        RationalComplex::new(Rational::new(re, denom.clone()), Rational::new(im, denom))
    }
}

/// Contracts the last axis (size `n`) of an interleaved tensor with `weights`.
pub(crate) fn contract_last<T: Scalar>(tensor: &[T], n: usize, weights: &[u32]) -> Vec<T> {
    let outer = tensor.len() / (2 * n);
    let mut out = vec![T::zero(); outer * 2];
    for (j, &w) in weights.iter().enumerate() {
        if w == 0 {
            continue;
        }
        let w = T::from_count(w);
        for idx in 0..outer {
            let base = (idx * n + j) * 2;
            out[idx * 2] = out[idx * 2].clone() + tensor[base].clone() * w.clone();
            out[idx * 2 + 1] = out[idx * 2 + 1].clone() + tensor[base + 1].clone() * w.clone();
        }
    }
    out
}

/// Full contraction with one weight vector per axis (axis 0 first in `weights`).
pub(crate) fn contract_all<T: Scalar>(tensor: &[T], n: usize, weights: &[Vec<u32>]) -> (T, T) {
    let mut current = tensor.to_vec();
    for w in weights.iter().rev() {
        current = contract_last(&current, n, w);
    }
    (current[0].clone(), current[1].clone())
}

/// Refined cells per coarse cell carrying each label `1..=labels`, one vector per label.
pub(crate) fn label_weights(labels: &[usize], n: usize, label_count: usize) -> Vec<Vec<u32>> {
    let r = labels.len() / n;
    let mut w = vec![vec![0u32; n]; label_count];
    for (cell, &label) in labels.iter().enumerate() {
        if label > 0 {
            w[label - 1][cell / r] += 1;
        }
    }
    w
}

/// Compositions of `total` into `caps.len()` parts bounded by `caps`, in an
/// arbitrary fixed order.
fn bounded_compositions(total: u32, caps: &[u32], out: &mut Vec<Vec<u32>>) {
    fn go(j: usize, remaining: u32, caps: &[u32], suffix: &[u32], cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if j == caps.len() {
            if remaining == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if remaining > suffix[j] {
            return;
        }
        for v in 0..=caps[j].min(remaining) {
            cur.push(v);
            go(j + 1, remaining - v, caps, suffix, cur, out);
            cur.pop();
        }
    }
    let mut suffix = vec![0u32; caps.len() + 1];
    for j in (0..caps.len()).rev() {
        suffix[j] = suffix[j + 1] + caps[j];
    }
    go(0, total, caps, &suffix, &mut Vec::new(), out);
}

/// Number of distinct count profiles for `counts` labels over `n` blocks of `r` cells.
pub(crate) fn profile_count(n: usize, r: usize, counts: &[usize]) -> u128 {
    fn go(depth: usize, caps: Vec<u32>, counts: &[usize], memo: &mut HashMap<(usize, Vec<u32>), u128>) -> u128 {
        if depth == counts.len() {
            return 1;
        }
        if let Some(&v) = memo.get(&(depth, caps.clone())) {
            return v;
        }
        let mut options = Vec::new();
        bounded_compositions(counts[depth] as u32, &caps, &mut options);
        let mut total = 0u128;
        for w in options {
            let next: Vec<u32> = caps.iter().zip(&w).map(|(c, x)| c - x).collect();
            total = total.saturating_add(go(depth + 1, next, counts, memo));
        }
        memo.insert((depth, caps), total);
        total
    }
    go(0, vec![r as u32; n], counts, &mut HashMap::new())
}

/// Outcome of an exhaustive profile scan.
pub(crate) struct ScanResult<T> {
    pub profiles: u64,
    /// Lexicographically smallest failing labeling and its contracted pair.
    pub best: Option<(Vec<usize>, (T, T))>,
}

/// Sort key of a label: `1 < 2 < ⋯ < m < 0`, slack last.
pub(crate) fn label_key(label: usize, m: usize) -> usize {
    if label == 0 {
        m + 1
    } else {
        label
    }
}

pub(crate) fn labeling_less(a: &[usize], b: &[usize], m: usize) -> bool {
    a.iter().map(|&l| label_key(l, m)).lt(b.iter().map(|&l| label_key(l, m)))
}

/// Smallest labeling with the given profile: each block sorted, slack last.
fn minimal_labeling(weights: &[Vec<u32>], n: usize, r: usize) -> Vec<usize> {
    let mut labels = Vec::with_capacity(n * r);
    for j in 0..n {
        let used: u32 = weights.iter().map(|w| w[j]).sum();
        for (t, w) in weights.iter().enumerate() {
            labels.extend(std::iter::repeat_n(t + 1, w[j] as usize));
        }
        labels.extend(std::iter::repeat_n(0, r - used as usize));
    }
    labels
}

/// Evaluates every count profile; `counts[t]` is the cell count of label `t + 1`.
pub(crate) fn scan_profiles<T: Scalar>(tensor: &[T], n: usize, r: usize, counts: &[usize]) -> ScanResult<T> {
    struct Ctx<'a, T> {
        n: usize,
        r: usize,
        counts: &'a [usize],
        weights: Vec<Vec<u32>>,
        result: ScanResult<T>,
    }

    fn go<T: Scalar>(ctx: &mut Ctx<'_, T>, axis: usize, tensor: &[T], caps: &[u32]) {
        let mut options = Vec::new();
        bounded_compositions(ctx.counts[axis] as u32, caps, &mut options);
        for w in options {
            let reduced = contract_last(tensor, ctx.n, &w);
            let next: Vec<u32> = caps.iter().zip(&w).map(|(c, x)| c - x).collect();
            ctx.weights[axis] = w;
            if axis == 0 {
                ctx.result.profiles += 1;
                let (re, im) = (reduced[0].clone(), reduced[1].clone());
                if !(re.is_zero() && im.is_zero()) {
                    let labels = minimal_labeling(&ctx.weights, ctx.n, ctx.r);
                    let better = match &ctx.result.best {
                        Some((current, _)) => labeling_less(&labels, current, ctx.counts.len()),
                        None => true,
                    };
                    if better {
                        ctx.result.best = Some((labels, (re, im)));
                    }
                }
            } else {
                go(ctx, axis - 1, &reduced, &next);
            }
        }
    }

    let m = counts.len();
    let mut ctx = Ctx {
        n,
        r,
        counts,
        weights: vec![vec![0; n]; m],
        result: ScanResult {
            profiles: 0,
            best: None,
        },
    };
    go(&mut ctx, m - 1, tensor, &vec![r as u32; n]);
    ctx.result
}

pub(crate) fn to_bigint_pair<T: Scalar + Into<BigInt>>(pair: (T, T)) -> (BigInt, BigInt) {
    (pair.0.into(), pair.1.into())
}

pub(crate) fn is_zero_pair<T: Scalar>(pair: &(T, T)) -> bool {
    pair.0.is_zero() && pair.1.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compositions_respect_caps() {
        let mut out = Vec::new();
        bounded_compositions(3, &[2, 1, 2], &mut out);
        assert!(out.iter().all(|w| w.iter().sum::<u32>() == 3));
        assert!(out.iter().all(|w| w[0] <= 2 && w[1] <= 1 && w[2] <= 2));
        assert_eq!(out.len(), 5);
    }

    #[test]
    fn profile_count_matches_block_multisets() {
        // r = 1: profiles are the labelings themselves
        assert_eq!(profile_count(4, 1, &[2, 2]), 6);
        assert_eq!(profile_count(3, 1, &[1, 1]), 6);
        // one block: a single profile
        assert_eq!(profile_count(1, 6, &[2, 4]), 1);
        // two blocks of two, labels (1, 1) plus two slack cells: block contents
        // {1,2},{0,0} / {0,0},{1,2} / {0,1},{0,2} / {0,2},{0,1}
        assert_eq!(profile_count(2, 2, &[1, 1]), 4);
    }

    #[test]
    fn minimal_labeling_sorts_blocks() {
        let w = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(minimal_labeling(&w, 2, 2), vec![1, 0, 2, 0]);
        assert!(labeling_less(&[1, 0], &[0, 1], 1));
    }
}
