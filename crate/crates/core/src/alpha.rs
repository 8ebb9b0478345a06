use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational_list, Rational};
use crate::subset::SubsetMask;

/// Measures `(α_1, …, α_m)`, each strictly inside `(0, 1)`, summing to at most 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaVector {
    entries: Vec<Rational>,
}

impl AlphaVector {
    pub fn new(entries: Vec<Rational>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Alpha("at least one entry is required".into()));
        }
        for a in &entries {
            if !(a > &Rational::zero() && a < &Rational::one()) {
                return Err(Error::Alpha(format!(
                    "entry {} is not strictly between 0 and 1",
                    format_rational(a)
                )));
            }
        }
        let sum: Rational = entries.iter().cloned().sum();
        if sum > Rational::one() {
            return Err(Error::Alpha(format!("alpha sums to {} > 1", format_rational(&sum))));
        }
        Ok(AlphaVector { entries })
    }

    /// Parses `"1/3,2/3"`.
    pub fn parse(text: &str) -> Result<Self> {
        Self::new(parse_rational_list(text)?)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, axis: usize) -> &Rational {
        &self.entries[axis]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn sum(&self) -> Rational {
        self.entries.iter().cloned().sum()
    }

    /// `Σα = 1`.
    pub fn is_full(&self) -> bool {
        self.sum().is_one()
    }

    /// `Π_{i ∈ S} α_i`.
    pub fn product(&self, subset: SubsetMask) -> Rational {
        subset
            .axes()
            .fold(Rational::one(), |acc, a| acc * &self.entries[a])
    }

    /// Cells per label on an axis of `cells` cells; errors unless every
    /// `α_i · cells` is an integer.
    pub fn counts(&self, cells: usize) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(self.entries.len());
        for a in &self.entries {
            let scaled = a * Rational::from_integer(cells.into());
            if !scaled.is_integer() {
                return Err(Error::Incompatible {
                    cells,
                    detail: format!(
                        "{}·{} = {} is not an integer",
                        cells,
                        format_rational(a),
                        format_rational(&scaled)
                    ),
                });
            }
            let count: usize = scaled
                .to_integer()
                .try_into()
                .map_err(|_| Error::Alpha("count does not fit usize".into()))?;
            out.push(count);
        }
        Ok(out)
    }

    pub fn check_resolution(&self, cells: usize) -> Result<()> {
        self.counts(cells).map(|_| ())
    }

    /// Least common multiple of the denominators: the coarsest compatible resolution.
    pub fn common_denominator(&self) -> usize {
        let lcm = self
            .entries
            .iter()
            .fold(num_bigint::BigInt::one(), |acc, a| acc.lcm(a.denom()));
        lcm.try_into().unwrap_or(usize::MAX)
    }

    pub fn is_uniform(&self) -> bool {
        self.entries.iter().all(|a| a == &self.entries[0])
    }
}

impl fmt::Display for AlphaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(format_rational).collect();
        write!(f, "{}", parts.join(","))
    }
}
