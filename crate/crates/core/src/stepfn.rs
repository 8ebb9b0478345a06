//! Step functions on the uniform grid of `[0,1]^m`.
//!
//! A [`StepFunction`] of arity `m` and resolution `n` is constant on each of the
//! `n^m` cells `Π [c_i/n, (c_i+1)/n)`. Values are stored row-major with axis 0
//! (coordinate 1) varying slowest. Every cell has mass `n^{-m}`, so all integrals
//! are finite exact sums.

use itertools::Itertools;
use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{czero, serde_complex, Rational, RationalComplex};
use crate::subset::SubsetMask;

/// Cell coordinates, one entry per axis, each in `0..n`.
pub type CellIndex = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepFunction {
    arity: usize,
    resolution: usize,
    values: Vec<RationalComplex>,
}

fn cell_count(arity: usize, resolution: usize) -> Result<usize> {
    (0..arity)
        .try_fold(1usize, |acc, _| acc.checked_mul(resolution))
        .ok_or_else(|| Error::Shape(format!("n^m overflows for m={arity}, n={resolution}")))
}

impl StepFunction {
    pub fn new(arity: usize, resolution: usize, values: Vec<RationalComplex>) -> Result<Self> {
        if arity == 0 || resolution == 0 {
            return Err(Error::EmptyShape { arity, resolution });
        }
        let expected = cell_count(arity, resolution)?;
        if values.len() != expected {
            return Err(Error::Length {
                arity,
                resolution,
                expected,
                got: values.len(),
            });
        }
        Ok(StepFunction {
            arity,
            resolution,
            values,
        })
    }

    /// Real-valued convenience constructor.
    pub fn from_reals(arity: usize, resolution: usize, values: Vec<Rational>) -> Result<Self> {
        Self::new(
            arity,
            resolution,
            values
                .into_iter()
                .map(|v| Complex::new(v, Rational::zero()))
                .collect(),
        )
    }

    pub fn constant(arity: usize, resolution: usize, value: RationalComplex) -> Result<Self> {
        let len = cell_count(arity, resolution)?;
        Self::new(arity, resolution, vec![value; len])
    }

    pub fn zero(arity: usize, resolution: usize) -> Result<Self> {
        Self::constant(arity, resolution, czero())
    }

    /// Builds a function by evaluating `value` at every cell.
    pub fn from_fn(
        arity: usize,
        resolution: usize,
        mut value: impl FnMut(&[usize]) -> RationalComplex,
    ) -> Result<Self> {
        let len = cell_count(arity, resolution)?;
        let mut cell = vec![0usize; arity];
        let mut values = Vec::with_capacity(len);
        for _ in 0..len {
            values.push(value(&cell));
            advance(&mut cell, resolution);
        }
        Self::new(arity, resolution, values)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn values(&self) -> &[RationalComplex] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn same_shape(&self, other: &StepFunction) -> bool {
        self.arity == other.arity && self.resolution == other.resolution
    }

    /// Distance in the flat array between neighbouring cells along `axis`.
    pub fn stride(&self, axis: usize) -> usize {
        self.resolution.pow((self.arity - 1 - axis) as u32)
    }

    pub fn flat_index(&self, cell: &[usize]) -> usize {
        debug_assert_eq!(cell.len(), self.arity);
        cell.iter().fold(0, |acc, &c| acc * self.resolution + c)
    }

    pub fn cell_of(&self, mut flat: usize) -> CellIndex {
        let mut cell = vec![0; self.arity];
        for slot in cell.iter_mut().rev() {
            *slot = flat % self.resolution;
            flat /= self.resolution;
        }
        cell
    }

    pub fn check_cell(&self, cell: &[usize]) -> Result<()> {
        if cell.len() != self.arity {
            return Err(Error::Shape(format!(
                "cell has {} coordinates, function has arity {}",
                cell.len(),
                self.arity
            )));
        }
        match cell.iter().find(|&&c| c >= self.resolution) {
            Some(&c) => Err(Error::Cell {
                cell: c,
                resolution: self.resolution,
            }),
            None => Ok(()),
        }
    }

    pub fn get(&self, cell: &[usize]) -> &RationalComplex {
        &self.values[self.flat_index(cell)]
    }

    pub fn cells(&self) -> impl Iterator<Item = CellIndex> + '_ {
        (0..self.values.len()).map(|i| self.cell_of(i))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// First cell (in storage order) with a nonzero value.
    pub fn first_nonzero(&self) -> Option<CellIndex> {
        self.values
            .iter()
            .position(|v| !v.is_zero())
            .map(|i| self.cell_of(i))
    }

    pub fn map(&self, f: impl Fn(&RationalComplex) -> RationalComplex) -> StepFunction {
        StepFunction {
            arity: self.arity,
            resolution: self.resolution,
            values: self.values.iter().map(f).collect(),
        }
    }

    fn zip_with(
        &self,
        other: &StepFunction,
        f: impl Fn(&RationalComplex, &RationalComplex) -> RationalComplex,
    ) -> StepFunction {
        assert!(
            self.same_shape(other),
            "shape mismatch: (m={}, n={}) vs (m={}, n={})",
            self.arity,
            self.resolution,
            other.arity,
            other.resolution
        );
        StepFunction {
            arity: self.arity,
            resolution: self.resolution,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    /// Cell-wise sum. Panics if the shapes differ.
    pub fn add(&self, other: &StepFunction) -> StepFunction {
        self.zip_with(other, |a, b| a + b)
    }

    /// Cell-wise difference. Panics if the shapes differ.
    pub fn sub(&self, other: &StepFunction) -> StepFunction {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> StepFunction {
        self.map(|v| -v)
    }

    pub fn scale(&self, c: &RationalComplex) -> StepFunction {
        self.map(|v| v * c)
    }

    pub fn scale_real(&self, c: &Rational) -> StepFunction {
        self.map(|v| Complex::new(&v.re * c, &v.im * c))
    }

    /// Average over the whole cube.
    pub fn total_average(&self) -> RationalComplex {
        let sum: RationalComplex = self.values.iter().cloned().sum();
        let len = Rational::from_integer(self.values.len().into());
        Complex::new(sum.re / &len, sum.im / &len)
    }

    /// `⟨f, g⟩ = n^{-m} Σ f · conj(g)`.
    pub fn inner_product(&self, other: &StepFunction) -> RationalComplex {
        self.zip_with(other, |a, b| a * b.conj()).total_average()
    }

    fn check_axis(&self, axis: usize) -> Result<()> {
        if axis >= self.arity {
            Err(Error::Coordinate {
                coord: axis,
                arity: self.arity,
            })
        } else {
            Ok(())
        }
    }

    fn check_subset(&self, subset: SubsetMask) -> Result<()> {
        if subset.arity() != self.arity {
            Err(Error::Subset(format!(
                "subset over {} axes used with arity {}",
                subset.arity(),
                self.arity
            )))
        } else {
            Ok(())
        }
    }

    fn average_along(&self, axis: usize) -> StepFunction {
        let n = self.resolution;
        let stride = self.stride(axis);
        let block = stride * n;
        let inv = Rational::new(1.into(), n.into());
        let mut values = self.values.clone();
        for outer in (0..values.len()).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                let sum: RationalComplex = (0..n).map(|j| &self.values[base + j * stride]).sum();
                let mean = Complex::new(sum.re * &inv, sum.im * &inv);
                for j in 0..n {
                    values[base + j * stride] = mean.clone();
                }
            }
        }
        StepFunction {
            arity: self.arity,
            resolution: n,
            values,
        }
    }

    /// Averages out the axes in `subset`; the result has the same arity and is
    /// constant along `subset`.
    pub fn marginalize(&self, subset: SubsetMask) -> Result<StepFunction> {
        self.check_subset(subset)?;
        Ok(subset
            .axes()
            .fold(self.clone(), |acc, axis| acc.average_along(axis)))
    }

    /// The fiber `f_y`: axes in `subset` are pinned to the cells given in
    /// `assignment` as `(axis, cell)` pairs. The result is constant along `subset`.
    pub fn fiber(&self, subset: SubsetMask, assignment: &[(usize, usize)]) -> Result<StepFunction> {
        self.check_subset(subset)?;
        let mut pinned = vec![None; self.arity];
        for &(axis, cell) in assignment {
            self.check_axis(axis)?;
            if !subset.contains(axis) {
                return Err(Error::Subset(format!(
                    "fiber assigns coordinate {} outside {}",
                    axis + 1,
                    subset
                )));
            }
            if cell >= self.resolution {
                return Err(Error::Cell {
                    cell,
                    resolution: self.resolution,
                });
            }
            pinned[axis] = Some(cell);
        }
        if let Some(axis) = subset.axes().find(|&a| pinned[a].is_none()) {
            return Err(Error::Subset(format!(
                "fiber leaves coordinate {} of {} unassigned",
                axis + 1,
                subset
            )));
        }
        Ok(self.pinned(&pinned))
    }

    fn pinned(&self, pinned: &[Option<usize>]) -> StepFunction {
        let mut src = vec![0usize; self.arity];
        let values = (0..self.values.len())
            .map(|i| {
                let cell = self.cell_of(i);
                for (d, slot) in src.iter_mut().enumerate() {
                    *slot = pinned[d].unwrap_or(cell[d]);
                }
                self.values[self.flat_index(&src)].clone()
            })
            .collect();
        StepFunction {
            arity: self.arity,
            resolution: self.resolution,
            values,
        }
    }

    /// `g(x) = f(x_{perm[0]}, …, x_{perm[m-1]})`. `perm` must be a permutation of `0..m`.
    pub fn permute(&self, perm: &[usize]) -> StepFunction {
        debug_assert_eq!(perm.len(), self.arity);
        let mut src = vec![0usize; self.arity];
        let values = (0..self.values.len())
            .map(|i| {
                let cell = self.cell_of(i);
                for (d, slot) in src.iter_mut().enumerate() {
                    *slot = cell[perm[d]];
                }
                self.values[self.flat_index(&src)].clone()
            })
            .collect();
        StepFunction {
            arity: self.arity,
            resolution: self.resolution,
            values,
        }
    }

    /// `g(x) = f(x^{(i↔j)})`.
    pub fn swap_coords(&self, i: usize, j: usize) -> Result<StepFunction> {
        self.check_axis(i)?;
        self.check_axis(j)?;
        if i == j {
            return Ok(self.clone());
        }
        let mut perm: Vec<usize> = (0..self.arity).collect();
        perm.swap(i, j);
        Ok(self.permute(&perm))
    }

    /// Every permutation of the axes of `subset` (others fixed), with its sign.
    fn subset_permutations(&self, subset: SubsetMask) -> Vec<(Vec<usize>, bool)> {
        let axes: Vec<usize> = subset.axes().collect();
        let k = axes.len();
        axes.iter()
            .copied()
            .permutations(k)
            .map(|image| {
                let mut perm: Vec<usize> = (0..self.arity).collect();
                for (slot, &target) in axes.iter().zip(&image) {
                    perm[*slot] = target;
                }
                let inversions = (0..k)
                    .flat_map(|a| (a + 1..k).map(move |b| (a, b)))
                    .filter(|&(a, b)| image[a] > image[b])
                    .count();
                (perm, inversions % 2 == 1)
            })
            .collect()
    }

    fn signed_average(&self, subset: SubsetMask, signed: bool) -> Result<StepFunction> {
        self.check_subset(subset)?;
        if subset.len() <= 1 {
            return Ok(self.clone());
        }
        let perms = self.subset_permutations(subset);
        let count = Rational::from_integer(perms.len().into());
        let mut acc = StepFunction::zero(self.arity, self.resolution)?;
        for (perm, odd) in perms {
            let term = self.permute(&perm);
            acc = if signed && odd {
                acc.sub(&term)
            } else {
                acc.add(&term)
            };
        }
        Ok(acc.map(|v| Complex::new(&v.re / &count, &v.im / &count)))
    }

    /// `(1/|S|!) Σ_π sign(π) f∘π` over permutations of the axes in `subset`.
    pub fn antisymmetrize(&self, subset: SubsetMask) -> Result<StepFunction> {
        self.signed_average(subset, true)
    }

    /// `(1/|S|!) Σ_π f∘π` over permutations of the axes in `subset`.
    pub fn symmetrize(&self, subset: SubsetMask) -> Result<StepFunction> {
        self.signed_average(subset, false)
    }

    /// First transposition `(i, j)` of `subset` (lexicographic, `i < j`) and
    /// first cell at which `f(x^{(i↔j)}) ≠ -f(x)`.
    pub fn alternation_defect(&self, subset: SubsetMask) -> Option<(usize, usize, CellIndex)> {
        self.transposition_defect(subset, true)
    }

    /// As [`alternation_defect`](Self::alternation_defect), for `f(x^{(i↔j)}) ≠ f(x)`.
    pub fn symmetry_defect(&self, subset: SubsetMask) -> Option<(usize, usize, CellIndex)> {
        self.transposition_defect(subset, false)
    }

    fn transposition_defect(&self, subset: SubsetMask, negate: bool) -> Option<(usize, usize, CellIndex)> {
        let axes: Vec<usize> = subset.axes().collect();
        for (a, &i) in axes.iter().enumerate() {
            for &j in &axes[a + 1..] {
                let mut swapped = vec![0; self.arity];
                for flat in 0..self.values.len() {
                    let cell = self.cell_of(flat);
                    swapped.copy_from_slice(&cell);
                    swapped.swap(i, j);
                    let other = &self.values[self.flat_index(&swapped)];
                    let ok = if negate {
                        *other == -&self.values[flat]
                    } else {
                        *other == self.values[flat]
                    };
                    if !ok {
                        return Some((i, j, cell));
                    }
                }
            }
        }
        None
    }

    /// Swapping any two axes of `subset` negates `f`. Vacuous for `|S| ≤ 1`.
    pub fn is_alternating(&self, subset: SubsetMask) -> bool {
        self.alternation_defect(subset).is_none()
    }

    /// Swapping any two axes of `subset` leaves `f` unchanged.
    pub fn is_symmetric(&self, subset: SubsetMask) -> bool {
        self.symmetry_defect(subset).is_none()
    }

    /// `f` is constant along every axis outside `subset`.
    pub fn depends_only_on(&self, subset: SubsetMask) -> bool {
        let free: Vec<usize> = subset.complement().axes().collect();
        (0..self.values.len()).all(|flat| {
            let mut cell = self.cell_of(flat);
            for &a in &free {
                cell[a] = 0;
            }
            self.values[self.flat_index(&cell)] == self.values[flat]
        })
    }

    /// Reinterprets a function of the first `k` axes as one of the axes in
    /// `target` (ascending), at arity `arity`: `g(x) = f(x_{t_1}, …, x_{t_k}, 0, …)`.
    pub fn embed_leading(&self, k: usize, arity: usize, target: SubsetMask) -> Result<StepFunction> {
        if target.len() != k || k > self.arity || target.arity() != arity {
            return Err(Error::Shape(format!(
                "cannot place {k} leading axes onto {target} at arity {arity}"
            )));
        }
        let axes: Vec<usize> = target.axes().collect();
        let mut src = vec![0usize; self.arity];
        StepFunction::from_fn(arity, self.resolution, |cell| {
            for (d, &a) in axes.iter().enumerate() {
                src[d] = cell[a];
            }
            self.get(&src).clone()
        })
    }

    /// The same function on the finer grid of `resolution · factor` cells per axis.
    pub fn refine(&self, factor: usize) -> Result<StepFunction> {
        if factor == 0 {
            return Err(Error::EmptyShape {
                arity: self.arity,
                resolution: 0,
            });
        }
        let mut src = vec![0usize; self.arity];
        StepFunction::from_fn(self.arity, self.resolution * factor, |cell| {
            for (s, &c) in src.iter_mut().zip(cell) {
                *s = c / factor;
            }
            self.get(&src).clone()
        })
    }
}

/// Odometer step over `0..resolution` per axis, last axis fastest.
pub(crate) fn advance(cell: &mut [usize], resolution: usize) {
    for slot in cell.iter_mut().rev() {
        *slot += 1;
        if *slot < resolution {
            return;
        }
        *slot = 0;
    }
}

/// `Σ_t coeffs[t] · fns[t]`, exactly.
pub fn linear_combine(coeffs: &[RationalComplex], fns: &[StepFunction]) -> Result<StepFunction> {
    if coeffs.len() != fns.len() {
        return Err(Error::Shape(format!(
            "{} coefficients for {} functions",
            coeffs.len(),
            fns.len()
        )));
    }
    let first = fns
        .first()
        .ok_or_else(|| Error::Shape("linear combination of no functions".into()))?;
    if let Some(bad) = fns.iter().find(|g| !g.same_shape(first)) {
        return Err(Error::Shape(format!(
            "(m={}, n={}) vs (m={}, n={})",
            first.arity, first.resolution, bad.arity, bad.resolution
        )));
    }
    let mut values = vec![czero(); first.len()];
    for (c, g) in coeffs.iter().zip(fns) {
        for (acc, v) in values.iter_mut().zip(&g.values) {
            *acc += c * v;
        }
    }
    StepFunction::new(first.arity, first.resolution, values)
}

#[derive(Serialize, Deserialize)]
struct StepFunctionRepr {
    m: usize,
    n: usize,
    values: Vec<CellValue>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct CellValue(#[serde(with = "serde_complex")] RationalComplex);

impl Serialize for StepFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        StepFunctionRepr {
            m: self.arity,
            n: self.resolution,
            values: self.values.iter().cloned().map(CellValue).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StepFunction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = StepFunctionRepr::deserialize(deserializer)?;
        StepFunction::new(repr.m, repr.n, repr.values.into_iter().map(|v| v.0).collect())
            .map_err(serde::de::Error::custom)
    }
}
