//! Direct-evaluation reference implementations shared by the integration
//! tests. Everything here is written from the definitions, by summing over
//! cells, and deliberately avoids the library's fast paths.
#![allow(dead_code)]

use itertools::Itertools;
use num_complex::Complex;
use num_traits::{One, Zero};
use proptest::prelude::*;

use vanish_core::rng::SplitMix64;
use vanish_core::{AlphaVector, Rational, RationalComplex, StepFunction, SubsetMask};

pub fn q(p: i64, d: i64) -> Rational {
    Rational::new(p.into(), d.into())
}

pub fn cq(p: i64, d: i64) -> RationalComplex {
    Complex::new(q(p, d), Rational::zero())
}

pub fn reals(m: usize, n: usize, vals: &[i64]) -> StepFunction {
    StepFunction::from_reals(m, n, vals.iter().map(|&v| q(v, 1)).collect()).unwrap()
}

pub fn coords(m: usize, c: &[usize]) -> SubsetMask {
    SubsetMask::from_coords(m, c).unwrap()
}

fn all_cells(m: usize, n: usize) -> Vec<Vec<usize>> {
    (0..m).map(|_| 0..n).multi_cartesian_product().collect()
}

/// `Σ_{c_t ∈ A_t} f(⌊c/r⌋) / N^m`, one tuple of refined cells at a time.
pub fn naive_integral(f: &StepFunction, labels: &[usize]) -> RationalComplex {
    let m = f.arity();
    let big_n = labels.len();
    let r = big_n / f.resolution();
    let mut total = RationalComplex::zero();
    let choices: Vec<Vec<usize>> = (1..=m)
        .map(|t| (0..big_n).filter(|&c| labels[c] == t).collect())
        .collect();
    if choices.iter().any(|c| c.is_empty()) {
        return total;
    }
    for tuple in choices.iter().map(|c| c.iter()).multi_cartesian_product() {
        let cell: Vec<usize> = tuple.iter().map(|&&c| c / r).collect();
        total += f.get(&cell);
    }
    let scale = Rational::from_integer(big_n.into()).pow(m as i32);
    Complex::new(&total.re / &scale, &total.im / &scale)
}

/// Every labeling with the given counts, lexicographic with labels ranked
/// `1 < ⋯ < m < 0`.
pub fn naive_labelings(n_cells: usize, counts: &[usize]) -> Vec<Vec<usize>> {
    fn go(pos: usize, left: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, n: usize) {
        if pos == n {
            out.push(cur.clone());
            return;
        }
        let m = left.len() - 1;
        // left[0] is slack, ranked last
        for label in (1..=m).chain(std::iter::once(0)) {
            if left[label] > 0 {
                left[label] -= 1;
                cur.push(label);
                go(pos + 1, left, cur, out, n);
                cur.pop();
                left[label] += 1;
            }
        }
    }
    let used: usize = counts.iter().sum();
    let mut left = vec![n_cells - used];
    left.extend_from_slice(counts);
    let mut out = Vec::new();
    go(0, &mut left, &mut Vec::new(), &mut out, n_cells);
    out
}

/// First failing labeling over the given factors: `(factor, labels, value)`.
pub fn naive_oracle(
    f: &StepFunction,
    alpha: &AlphaVector,
    refinements: &[usize],
) -> Option<(usize, Vec<usize>, RationalComplex)> {
    for &r in refinements {
        let cells = f.resolution() * r;
        let counts = alpha.counts(cells).unwrap();
        for labels in naive_labelings(cells, &counts) {
            let v = naive_integral(f, &labels);
            if !v.is_zero() {
                return Some((r, labels, v));
            }
        }
    }
    None
}

/// `E[f | x_T]` evaluated at `x`, by summing over every cell that agrees with `x` on `T`.
fn conditional_mean(f: &StepFunction, t: SubsetMask, x: &[usize]) -> RationalComplex {
    let mut total = RationalComplex::zero();
    let mut count = 0i64;
    for y in all_cells(f.arity(), f.resolution()) {
        if t.axes().all(|a| y[a] == x[a]) {
            total += f.get(&y);
            count += 1;
        }
    }
    Complex::new(&total.re / q(count, 1), &total.im / q(count, 1))
}

/// `F_S(x) = Σ_{T ⊆ S} (-1)^{|S∖T|} E[f | x_T]`.
pub fn naive_walsh(f: &StepFunction, s: SubsetMask) -> StepFunction {
    StepFunction::from_fn(f.arity(), f.resolution(), |x| {
        let mut v = RationalComplex::zero();
        for t in s.subsets() {
            let term = conditional_mean(f, t, x);
            if (s.len() - t.len()).is_multiple_of(2) {
                v += term;
            } else {
                v -= term;
            }
        }
        v
    })
    .unwrap()
}

/// `∫_{A^{m-r} × Ā^r} f` with `A` the cells labeled 1, by tuple summation.
pub fn naive_family_integral(f: &StepFunction, r: usize, in_a: &[bool]) -> RationalComplex {
    let m = f.arity();
    let labels: Vec<usize> = in_a.iter().map(|&b| usize::from(b)).collect();
    let big_n = labels.len();
    let refine = big_n / f.resolution();
    let inside: Vec<usize> = (0..big_n).filter(|&c| labels[c] == 1).collect();
    let outside: Vec<usize> = (0..big_n).filter(|&c| labels[c] == 0).collect();
    let mut total = RationalComplex::zero();
    let axes: Vec<&Vec<usize>> = (0..m).map(|a| if a < m - r { &inside } else { &outside }).collect();
    if axes.iter().any(|c| c.is_empty()) {
        return total;
    }
    for tuple in axes.iter().map(|c| c.iter()).multi_cartesian_product() {
        let cell: Vec<usize> = tuple.iter().map(|&&c| c / refine).collect();
        total += f.get(&cell);
    }
    let scale = Rational::from_integer(big_n.into()).pow(m as i32);
    Complex::new(&total.re / &scale, &total.im / &scale)
}

/// Rank of a list of rational vectors, by fraction-exact Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let width = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let lead = rows[rank][col].clone();
        for v in rows[rank].iter_mut() {
            *v /= &lead;
        }
        #[allow(clippy::needless_range_loop)]
        for i in 0..rows.len() {
            if i != rank && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                for j in 0..width {
                    let delta = &factor * &rows[rank][j];
                    rows[i][j] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn real_parts(f: &StepFunction) -> Vec<Rational> {
    f.values().iter().map(|v| v.re.clone()).collect()
}

/// The explicit signed sum for `∂^K_{Y,Z} F_S`, `F_S` depending only on `S`:
/// `Σ_{D ⊆ S∩K, |D|=k} 1/α(D) Σ_{π: D → [k] bijective} Σ_{B ⊆ [k]} (-1)^{|B|} F_S(w, ·)`
/// with `w(t) = y_{π(t)}(t)` for `π(t) ∈ B` and `z_{π(t)}(t)` otherwise.
pub fn lemma_signed_sum(
    f: &StepFunction,
    alpha: &AlphaVector,
    s: SubsetMask,
    k_set: SubsetMask,
    ys: &[Vec<usize>],
    zs: &[Vec<usize>],
) -> StepFunction {
    let k = ys.len();
    let m = f.arity();
    let pool: Vec<usize> = s.intersection(k_set).axes().collect();
    let mut out = StepFunction::zero(m, f.resolution()).unwrap();
    for d in pool.iter().copied().combinations(k) {
        let weight = d.iter().fold(Rational::one(), |acc, &i| acc * alpha.get(i)).recip();
        for steps in (0..k).permutations(k) {
            // steps[j] = π(d[j])
            for b in 0..(1u32 << k) {
                let sign = if b.count_ones() % 2 == 0 { weight.clone() } else { -weight.clone() };
                let term = StepFunction::from_fn(m, f.resolution(), |x| {
                    let mut cell = x.to_vec();
                    for (j, &t) in d.iter().enumerate() {
                        let step = steps[j];
                        cell[t] = if b >> step & 1 == 1 { ys[step][t] } else { zs[step][t] };
                    }
                    f.get(&cell).clone()
                })
                .unwrap();
                out = out.add(&term.scale_real(&sign));
            }
        }
    }
    out
}

/// Composition of `n` into `m` positive parts, as `α_i = part_i / n`.
pub fn random_full_alpha(m: usize, n: usize, rng: &mut SplitMix64) -> AlphaVector {
    assert!(n >= m);
    let mut cuts: Vec<usize> = (1..n).collect();
    rng.shuffle(&mut cuts);
    let mut cuts: Vec<usize> = cuts.into_iter().take(m - 1).collect();
    cuts.sort_unstable();
    let mut parts = Vec::with_capacity(m);
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(n)) {
        parts.push(q((c - prev) as i64, n as i64));
        prev = c;
    }
    AlphaVector::new(parts).unwrap()
}

/// Strategy for small step functions with rational values `p/d`.
pub fn step_function(max_m: usize, max_n: usize) -> impl Strategy<Value = StepFunction> {
    (1..=max_m, 1..=max_n).prop_flat_map(|(m, n)| {
        proptest::collection::vec((-6i64..=6, 1i64..=3, -2i64..=2), n.pow(m as u32)).prop_map(move |vals| {
            let values = vals
                .into_iter()
                .map(|(p, d, im)| Complex::new(q(p, d), q(im, 1)))
                .collect();
            StepFunction::new(m, n, values).unwrap()
        })
    })
}

/// Strategy for a pair of same-shape functions.
pub fn step_pair(max_m: usize, max_n: usize) -> impl Strategy<Value = (StepFunction, StepFunction)> {
    (1..=max_m, 1..=max_n).prop_flat_map(|(m, n)| {
        let one = move || {
            proptest::collection::vec((-6i64..=6, 1i64..=3), n.pow(m as u32))
                .prop_map(move |vals| StepFunction::from_reals(m, n, vals.into_iter().map(|(p, d)| q(p, d)).collect()).unwrap())
        };
        (one(), one())
    })
}
