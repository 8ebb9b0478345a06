use std::fmt;

use crate::error::{Error, Result};

/// A subset of the axes `0..arity`, stored as a bitmask with axis 0 in the
/// least significant bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask {
    arity: usize,
    bits: u32,
}

pub const MAX_ARITY: usize = 16;

impl SubsetMask {
    pub fn new(arity: usize, bits: u32) -> Result<Self> {
        if arity > MAX_ARITY {
            return Err(Error::Subset(format!("arity {arity} exceeds {MAX_ARITY}")));
        }
        if (bits as u64) >= (1u64 << arity) {
            return Err(Error::Subset(format!("bits {bits:#b} do not fit arity {arity}")));
        }
        Ok(SubsetMask { arity, bits })
    }

    pub fn empty(arity: usize) -> Self {
        SubsetMask { arity, bits: 0 }
    }

    pub fn full(arity: usize) -> Self {
        SubsetMask {
            arity,
            bits: ((1u64 << arity) - 1) as u32,
        }
    }

    pub fn singleton(arity: usize, axis: usize) -> Result<Self> {
        Self::from_axes(arity, [axis])
    }

    pub fn from_axes(arity: usize, axes: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut bits = 0u32;
        for axis in axes {
            if axis >= arity {
                return Err(Error::Coordinate { coord: axis, arity });
            }
            bits |= 1 << axis;
        }
        Self::new(arity, bits)
    }

    /// 1-based coordinate list, as used in the JSON formats.
    pub fn from_coords(arity: usize, coords: &[usize]) -> Result<Self> {
        let mut axes = Vec::with_capacity(coords.len());
        for &c in coords {
            if c == 0 || c > arity {
                return Err(Error::Coordinate { coord: c, arity });
            }
            axes.push(c - 1);
        }
        Self::from_axes(arity, axes)
    }

    pub fn to_coords(self) -> Vec<usize> {
        self.axes().map(|a| a + 1).collect()
    }

    pub fn arity(self) -> usize {
        self.arity
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn contains(self, axis: usize) -> bool {
        axis < self.arity && self.bits & (1 << axis) != 0
    }

    pub fn axes(self) -> impl Iterator<Item = usize> {
        let bits = self.bits;
        (0..self.arity).filter(move |a| bits & (1 << a) != 0)
    }

    pub fn complement(self) -> Self {
        SubsetMask {
            arity: self.arity,
            bits: !self.bits & Self::full(self.arity).bits,
        }
    }

    pub fn union(self, other: Self) -> Self {
        debug_assert_eq!(self.arity, other.arity);
        SubsetMask {
            arity: self.arity,
            bits: self.bits | other.bits,
        }
    }

    pub fn intersection(self, other: Self) -> Self {
        debug_assert_eq!(self.arity, other.arity);
        SubsetMask {
            arity: self.arity,
            bits: self.bits & other.bits,
        }
    }

    pub fn difference(self, other: Self) -> Self {
        debug_assert_eq!(self.arity, other.arity);
        SubsetMask {
            arity: self.arity,
            bits: self.bits & !other.bits,
        }
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn with(self, axis: usize) -> Self {
        SubsetMask {
            arity: self.arity,
            bits: self.bits | (1 << axis),
        }
    }

    pub fn without(self, axis: usize) -> Self {
        SubsetMask {
            arity: self.arity,
            bits: self.bits & !(1 << axis),
        }
    }

    /// Every subset of `0..arity`, in increasing bitmask order.
    pub fn all(arity: usize) -> impl Iterator<Item = SubsetMask> {
        (0..(1u32 << arity)).map(move |bits| SubsetMask { arity, bits })
    }

    /// Every subset of `self` (including `∅` and `self`), in increasing bitmask order.
    pub fn subsets(self) -> impl Iterator<Item = SubsetMask> {
        let arity = self.arity;
        let bits = self.bits;
        (0..=bits)
            .filter(move |t| t & !bits == 0)
            .map(move |t| SubsetMask { arity, bits: t })
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.to_coords().into_iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}
