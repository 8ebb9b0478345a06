//! Generalized Walsh (Hoeffding/ANOVA) expansion `f = Σ_{S ⊆ [m]} F_S`, where
//! `F_S` depends only on the axes in `S` and integrates to zero along each of
//! them.
//!
//! Components are computed by inclusion–exclusion over the subset lattice:
//! `F_S = Σ_{T ⊆ S} (-1)^{|S∖T|} M_T`, with `M_T` the average of `f` over the
//! axes outside `T`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::stepfn::StepFunction;
use crate::subset::SubsetMask;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalshExpansion {
    arity: usize,
    resolution: usize,
    /// Indexed by subset bitmask.
    components: Vec<StepFunction>,
}

/// Which levels `|S|` a projection keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelSelector {
    Eq(usize),
    Le(usize),
    Lt(usize),
    Ge(usize),
    Gt(usize),
}

impl LevelSelector {
    pub fn matches(self, level: usize) -> bool {
        match self {
            LevelSelector::Eq(k) => level == k,
            LevelSelector::Le(k) => level <= k,
            LevelSelector::Lt(k) => level < k,
            LevelSelector::Ge(k) => level >= k,
            LevelSelector::Gt(k) => level > k,
        }
    }
}

impl FromStr for LevelSelector {
    type Err = Error;

    /// `"=1"`, `"<=2"`, `"<3"`, `">=1"`, `">0"`; a bare number means `=`.
    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        let (ctor, rest): (fn(usize) -> LevelSelector, &str) = if let Some(r) = t.strip_prefix("<=") {
            (LevelSelector::Le, r)
        } else if let Some(r) = t.strip_prefix(">=") {
            (LevelSelector::Ge, r)
        } else if let Some(r) = t.strip_prefix('<') {
            (LevelSelector::Lt, r)
        } else if let Some(r) = t.strip_prefix('>') {
            (LevelSelector::Gt, r)
        } else if let Some(r) = t.strip_prefix('=') {
            (LevelSelector::Eq, r)
        } else {
            (LevelSelector::Eq, t)
        };
        rest.trim()
            .parse()
            .map(ctor)
            .map_err(|_| Error::Precondition(format!("invalid level selector {text:?}")))
    }
}

impl fmt::Display for LevelSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevelSelector::Eq(k) => write!(f, "={k}"),
            LevelSelector::Le(k) => write!(f, "<={k}"),
            LevelSelector::Lt(k) => write!(f, "<{k}"),
            LevelSelector::Ge(k) => write!(f, ">={k}"),
            LevelSelector::Gt(k) => write!(f, ">{k}"),
        }
    }
}

/// Averages `M_T = ∫ f(y_T, x_{T̄}) dx_{T̄}` for every `T`, indexed by bitmask.
fn lattice_marginals(f: &StepFunction) -> Vec<StepFunction> {
    let m = f.arity();
    let mut marginals: Vec<Option<StepFunction>> = vec![None; 1 << m];
    let full = SubsetMask::full(m);
    marginals[full.bits() as usize] = Some(f.clone());
    // Descending bitmask order guarantees T ∪ {a} is ready before T.
    for t in SubsetMask::all(m).collect::<Vec<_>>().into_iter().rev() {
        if t == full {
            continue;
        }
        let missing = t.complement().axes().next().expect("T is not full");
        let parent = marginals[t.with(missing).bits() as usize]
            .as_ref()
            .expect("parent computed");
        let single = SubsetMask::empty(m).with(missing);
        marginals[t.bits() as usize] = Some(parent.marginalize(single).expect("same arity"));
    }
    marginals.into_iter().map(|g| g.expect("all filled")).collect()
}

fn inclusion_exclusion(marginals: &[StepFunction], s: SubsetMask) -> StepFunction {
    let first = &marginals[0];
    let mut acc = StepFunction::zero(first.arity(), first.resolution()).expect("valid shape");
    for t in s.subsets() {
        let term = &marginals[t.bits() as usize];
        acc = if (s.len() - t.len()).is_multiple_of(2) {
            acc.add(term)
        } else {
            acc.sub(term)
        };
    }
    acc
}

/// The single component `F_S` of `f`.
pub fn walsh_component(f: &StepFunction, s: SubsetMask) -> Result<StepFunction> {
    if s.arity() != f.arity() {
        return Err(Error::Subset(format!(
            "subset over {} axes used with arity {}",
            s.arity(),
            f.arity()
        )));
    }
    let m = f.arity();
    let mut acc = StepFunction::zero(m, f.resolution())?;
    for t in s.subsets() {
        let term = f.marginalize(t.complement())?;
        acc = if (s.len() - t.len()).is_multiple_of(2) {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };
    }
    Ok(acc)
}

/// The full expansion of `f`.
pub fn expand(f: &StepFunction) -> WalshExpansion {
    let marginals = lattice_marginals(f);
    let components = SubsetMask::all(f.arity())
        .map(|s| inclusion_exclusion(&marginals, s))
        .collect();
    WalshExpansion {
        arity: f.arity(),
        resolution: f.resolution(),
        components,
    }
}

/// `F` depends only on `S` and has zero mean along every axis of `S`.
pub fn is_walsh(component: &StepFunction, s: SubsetMask) -> bool {
    if s.arity() != component.arity() || !component.depends_only_on(s) {
        return false;
    }
    s.axes().all(|axis| {
        let single = SubsetMask::empty(s.arity()).with(axis);
        component
            .marginalize(single)
            .map(|g| g.is_zero())
            .unwrap_or(false)
    })
}

/// `Σ_{S : selector(|S|)} F_S`.
pub fn project(f: &StepFunction, selector: LevelSelector) -> StepFunction {
    expand(f).project(selector)
}

impl WalshExpansion {
    pub fn zero(arity: usize, resolution: usize) -> Result<Self> {
        let z = StepFunction::zero(arity, resolution)?;
        Ok(WalshExpansion {
            arity,
            resolution,
            components: vec![z; 1 << arity],
        })
    }

    /// Builds an expansion from `(S, F_S)` pairs; missing subsets are zero.
    /// Components are not required to be Walsh functions.
    pub fn from_components(
        arity: usize,
        resolution: usize,
        parts: impl IntoIterator<Item = (SubsetMask, StepFunction)>,
    ) -> Result<Self> {
        let mut e = Self::zero(arity, resolution)?;
        for (s, g) in parts {
            e.set(s, g)?;
        }
        Ok(e)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn component(&self, s: SubsetMask) -> &StepFunction {
        &self.components[s.bits() as usize]
    }

    pub fn set(&mut self, s: SubsetMask, g: StepFunction) -> Result<()> {
        if s.arity() != self.arity {
            return Err(Error::Subset(format!(
                "subset over {} axes used with arity {}",
                s.arity(),
                self.arity
            )));
        }
        if g.arity() != self.arity || g.resolution() != self.resolution {
            return Err(Error::Shape(format!(
                "component (m={}, n={}) in expansion (m={}, n={})",
                g.arity(),
                g.resolution(),
                self.arity,
                self.resolution
            )));
        }
        self.components[s.bits() as usize] = g;
        Ok(())
    }

    /// `(S, F_S)` in increasing bitmask order.
    pub fn iter(&self) -> impl Iterator<Item = (SubsetMask, &StepFunction)> {
        SubsetMask::all(self.arity).zip(self.components.iter())
    }

    pub fn reconstruct(&self) -> StepFunction {
        self.sum_where(|_| true)
    }

    pub fn project(&self, selector: LevelSelector) -> StepFunction {
        self.sum_where(|s| selector.matches(s.len()))
    }

    fn sum_where(&self, keep: impl Fn(SubsetMask) -> bool) -> StepFunction {
        let mut acc = StepFunction::zero(self.arity, self.resolution).expect("valid shape");
        for (s, g) in self.iter() {
            if keep(s) {
                acc = acc.add(g);
            }
        }
        acc
    }

    /// Cell-wise linear map applied to every component.
    pub fn map_components(&self, f: impl Fn(SubsetMask, &StepFunction) -> StepFunction) -> Self {
        WalshExpansion {
            arity: self.arity,
            resolution: self.resolution,
            components: self.iter().map(|(s, g)| f(s, g)).collect(),
        }
    }

    /// First subset whose component fails [`is_walsh`].
    pub fn first_non_walsh(&self) -> Option<SubsetMask> {
        self.iter().find(|(s, g)| !is_walsh(g, *s)).map(|(s, _)| s)
    }
}

#[derive(Serialize, Deserialize)]
struct ComponentRepr {
    #[serde(rename = "S")]
    subset: Vec<usize>,
    #[serde(rename = "fn")]
    function: StepFunction,
}

#[derive(Serialize, Deserialize)]
struct ExpansionRepr {
    m: usize,
    n: usize,
    components: Vec<ComponentRepr>,
}

impl Serialize for WalshExpansion {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ExpansionRepr {
            m: self.arity,
            n: self.resolution,
            components: self
                .iter()
                .map(|(s, g)| ComponentRepr {
                    subset: s.to_coords(),
                    function: g.clone(),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for WalshExpansion {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = ExpansionRepr::deserialize(deserializer)?;
        let parts = repr
            .components
            .into_iter()
            .map(|c| SubsetMask::from_coords(repr.m, &c.subset).map(|s| (s, c.function)))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        WalshExpansion::from_components(repr.m, repr.n, parts).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::creal;

    fn fracs(m: usize, n: usize, vals: &[(i64, i64)]) -> StepFunction {
        StepFunction::new(m, n, vals.iter().map(|&(p, q)| creal(p, q)).collect()).unwrap()
    }

    fn subset(m: usize, coords: &[usize]) -> SubsetMask {
        SubsetMask::from_coords(m, coords).unwrap()
    }

    fn corner() -> StepFunction {
        fracs(2, 2, &[(1, 1), (0, 1), (0, 1), (0, 1)])
    }

    #[test]
    fn constant_has_only_mean() {
        let f = StepFunction::constant(3, 2, creal(5, 3)).unwrap();
        let e = expand(&f);
        for (s, g) in e.iter() {
            if s.is_empty() {
                assert_eq!(g, &f);
            } else {
                assert!(g.is_zero(), "component {s}");
            }
        }
    }

    #[test]
    fn univariate_mean_deviation_split() {
        let f = fracs(1, 2, &[(3, 1), (7, 1)]);
        let e = expand(&f);
        assert_eq!(e.component(SubsetMask::empty(1)), &fracs(1, 2, &[(5, 1), (5, 1)]));
        assert_eq!(e.component(subset(1, &[1])), &fracs(1, 2, &[(-2, 1), (2, 1)]));
    }

    #[test]
    fn corner_expansion_by_hand() {
        let e = expand(&corner());
        let q = (1, 4);
        let mq = (-1, 4);
        assert_eq!(e.component(SubsetMask::empty(2)), &fracs(2, 2, &[q, q, q, q]));
        assert_eq!(e.component(subset(2, &[1])), &fracs(2, 2, &[q, q, mq, mq]));
        assert_eq!(e.component(subset(2, &[2])), &fracs(2, 2, &[q, mq, q, mq]));
        assert_eq!(e.component(subset(2, &[1, 2])), &fracs(2, 2, &[q, mq, mq, q]));
        assert_eq!(e.reconstruct(), corner());
    }

    #[test]
    fn single_component_matches_full_expansion() {
        let f = fracs(2, 3, &[(1, 1), (2, 1), (-3, 2), (0, 1), (5, 1), (1, 3), (-1, 1), (2, 7), (4, 1)]);
        let e = expand(&f);
        for s in SubsetMask::all(2) {
            assert_eq!(&walsh_component(&f, s).unwrap(), e.component(s));
        }
    }

    #[test]
    fn projections() {
        let f = corner();
        let mean = project(&f, LevelSelector::Eq(0));
        assert_eq!(mean, StepFunction::constant(2, 2, creal(1, 4)).unwrap());
        assert_eq!(project(&f, LevelSelector::Le(2)), f);
        assert_eq!(
            project(&f, LevelSelector::Eq(1)),
            fracs(2, 2, &[(1, 2), (0, 1), (0, 1), (-1, 2)])
        );
    }

    #[test]
    fn reconstruct_edge_cases() {
        let c = StepFunction::constant(2, 3, creal(2, 1)).unwrap();
        let e = WalshExpansion::from_components(2, 3, [(SubsetMask::empty(2), c.clone())]).unwrap();
        assert_eq!(e.reconstruct(), c);
        assert!(WalshExpansion::zero(2, 3).unwrap().reconstruct().is_zero());
        let mut e = WalshExpansion::zero(2, 3).unwrap();
        assert!(e.set(SubsetMask::empty(2), StepFunction::zero(2, 2).unwrap()).is_err());
    }

    #[test]
    fn walsh_predicate() {
        let s1 = subset(1, &[1]);
        assert!(is_walsh(&StepFunction::zero(1, 2).unwrap(), s1));
        assert!(!is_walsh(&StepFunction::constant(1, 2, creal(1, 1)).unwrap(), s1));
        assert!(is_walsh(&fracs(1, 2, &[(1, 1), (-1, 1)]), s1));
        // mean zero but varies along an axis outside S
        assert!(!is_walsh(&fracs(2, 2, &[(1, 1), (-1, 1), (-1, 1), (1, 1)]), subset(2, &[1])));
    }

    #[test]
    fn selector_parsing() {
        assert_eq!("<=2".parse::<LevelSelector>().unwrap(), LevelSelector::Le(2));
        assert_eq!("=1".parse::<LevelSelector>().unwrap(), LevelSelector::Eq(1));
        assert_eq!("3".parse::<LevelSelector>().unwrap(), LevelSelector::Eq(3));
        assert_eq!(">0".parse::<LevelSelector>().unwrap(), LevelSelector::Gt(0));
        assert!("~1".parse::<LevelSelector>().is_err());
        assert_eq!(LevelSelector::Ge(1).to_string(), ">=1");
    }

    #[test]
    fn json_lists_every_subset_in_bitmask_order() {
        let e = expand(&corner());
        let v = serde_json::to_value(&e).unwrap();
        let subsets: Vec<Vec<usize>> = v["components"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| serde_json::from_value(c["S"].clone()).unwrap())
            .collect();
        assert_eq!(subsets, vec![vec![], vec![1], vec![2], vec![1, 2]]);
        let back: WalshExpansion = serde_json::from_value(v).unwrap();
        assert_eq!(back, e);
    }
}
