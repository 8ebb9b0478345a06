//! Graphons, homomorphism densities and the product-set properties
//! `P(F, α)`: `∫_{A_1×⋯×A_m} Π_{ij ∈ E(F)} W(x_i, x_j) = p^{|E(F)|} Π α_i`
//! for all disjoint `A_i` with `λ(A_i) = α_i`.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::alpha::AlphaVector;
use crate::characterize::{decide_vanishing, Verdict};
use crate::error::{Error, Result};
use crate::oracle::{brute_force_vanishes, compatible_refinements, OracleConfig, OracleReport};
use crate::rational::{format_rational, parse_rational, real, Rational};
use crate::stepfn::StepFunction;
use crate::subset::SubsetMask;

/// A simple graph on vertices `0..m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphSpec {
    m: usize,
    edges: Vec<(usize, usize)>,
}

impl GraphSpec {
    /// Edges are 0-based and unordered; loops and repeated edges are rejected.
    pub fn new(m: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if m == 0 {
            return Err(Error::Graph("a graph needs at least one vertex".into()));
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for (i, j) in edges {
            if i >= m || j >= m {
                return Err(Error::Graph(format!(
                    "edge ({}, {}) has a vertex outside 1..={m}",
                    i + 1,
                    j + 1
                )));
            }
            if i == j {
                return Err(Error::Graph(format!("self-loop at vertex {}", i + 1)));
            }
            let e = (i.min(j), i.max(j));
            if !seen.insert(e) {
                return Err(Error::Graph(format!("duplicate edge ({}, {})", e.0 + 1, e.1 + 1)));
            }
            out.push(e);
        }
        Ok(GraphSpec { m, edges: out })
    }

    pub fn empty(m: usize) -> Result<Self> {
        Self::new(m, [])
    }

    pub fn complete(m: usize) -> Result<Self> {
        Self::new(m, (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))))
    }

    pub fn path(m: usize) -> Result<Self> {
        Self::new(m, (1..m).map(|i| (i - 1, i)))
    }

    pub fn cycle(m: usize) -> Result<Self> {
        if m < 3 {
            return Err(Error::Graph(format!("a cycle needs at least 3 vertices, got {m}")));
        }
        Self::new(m, (0..m).map(|i| (i, (i + 1) % m)))
    }

    pub fn vertex_count(&self) -> usize {
        self.m
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> BTreeSet<usize> {
        self.edges
            .iter()
            .filter_map(|&(i, j)| match v {
                _ if v == i => Some(j),
                _ if v == j => Some(i),
                _ => None,
            })
            .collect()
    }

    /// Vertices of `other` follow those of `self`.
    pub fn disjoint_union(&self, other: &GraphSpec) -> GraphSpec {
        let shift = self.m;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(i, j)| (i + shift, j + shift)));
        GraphSpec {
            m: self.m + other.m,
            edges,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "m": self.m,
            "edges": self.edges.iter().map(|&(i, j)| [i + 1, j + 1]).collect::<Vec<_>>(),
        })
    }
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    m: usize,
    edges: Vec<[usize; 2]>,
}

impl Serialize for GraphSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        GraphRepr {
            m: self.m,
            edges: self.edges.iter().map(|&(i, j)| [i + 1, j + 1]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GraphSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = GraphRepr::deserialize(deserializer)?;
        let mut edges = Vec::with_capacity(repr.edges.len());
        for [i, j] in repr.edges {
            if i == 0 || j == 0 {
                return Err(D::Error::custom("vertices are numbered from 1"));
            }
            edges.push((i - 1, j - 1));
        }
        GraphSpec::new(repr.m, edges).map_err(D::Error::custom)
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G(m={}; ", self.m)?;
        for (k, (i, j)) in self.edges.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}-{}", i + 1, j + 1)?;
        }
        write!(f, ")")
    }
}

/// A symmetric step graphon with values in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graphon {
    n: usize,
    values: Vec<Vec<Rational>>,
}

impl Graphon {
    pub fn new(values: Vec<Vec<Rational>>) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::Graphon("resolution must be at least 1".into()));
        }
        if let Some(row) = values.iter().position(|r| r.len() != n) {
            return Err(Error::Graphon(format!(
                "row {row} has {} entries, expected {n}",
                values[row].len()
            )));
        }
        #[allow(clippy::needless_range_loop)]
        for a in 0..n {
            for b in 0..n {
                let v = &values[a][b];
                if v.is_negative() || *v > Rational::one() {
                    return Err(Error::Graphon(format!(
                        "entry ({a}, {b}) = {} is outside [0, 1]",
                        format_rational(v)
                    )));
                }
                if values[b][a] != *v {
                    return Err(Error::Graphon(format!("not symmetric at ({a}, {b})")));
                }
            }
        }
        Ok(Graphon { n, values })
    }

    pub fn constant(n: usize, p: Rational) -> Result<Self> {
        Self::new(vec![vec![p; n]; n])
    }

    pub fn resolution(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, b: usize) -> &Rational {
        &self.values[a][b]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.values
    }

    pub fn is_constant(&self) -> bool {
        self.values.iter().flatten().all(|v| *v == self.values[0][0])
    }

    pub fn to_step_function(&self) -> StepFunction {
        StepFunction::from_fn(2, self.n, |c| real(self.values[c[0]][c[1]].clone())).expect("n >= 1")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "values": self
                .values
                .iter()
                .map(|r| r.iter().map(format_rational).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }
}

#[derive(Deserialize)]
struct GraphonRepr {
    n: usize,
    values: Vec<Vec<String>>,
}

impl Serialize for Graphon {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Graphon {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = GraphonRepr::deserialize(deserializer)?;
        let values = repr
            .values
            .iter()
            .map(|row| row.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        if values.len() != repr.n {
            return Err(D::Error::custom(format!(
                "graphon has {} rows, expected n = {}",
                values.len(),
                repr.n
            )));
        }
        Graphon::new(values).map_err(D::Error::custom)
    }
}

/// `Π_{ij ∈ E(F)} W(x_i, x_j)` as a step function on `[0,1]^m`.
pub fn edge_product(graph: &GraphSpec, w: &Graphon) -> StepFunction {
    StepFunction::from_fn(graph.m, w.n, |cell| {
        let mut v = Rational::one();
        for &(i, j) in &graph.edges {
            v *= &w.values[cell[i]][cell[j]];
            if v.is_zero() {
                break;
            }
        }
        real(v)
    })
    .expect("m, n >= 1")
}

/// `t(F, W)`.
pub fn hom_density(graph: &GraphSpec, w: &Graphon) -> Rational {
    edge_product(graph, w).total_average().re
}

/// `Π W − p^{|E(F)|}`, the integrand whose product-set integrals must vanish.
pub fn property_integrand(graph: &GraphSpec, w: &Graphon, p: &Rational) -> StepFunction {
    let target = real(num_traits::pow(p.clone(), graph.edge_count()));
    edge_product(graph, w).map(|v| v - &target)
}

/// Outcome of testing a property on one graphon: the exact verdict and the
/// brute-force search that should agree with it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub holds: bool,
    pub theory: Verdict,
    pub oracle: OracleReport,
}

impl PropertyReport {
    pub fn agrees(&self) -> bool {
        self.theory.holds == self.oracle.all_zero
    }

    pub fn to_json(&self) -> Value {
        json!({
            "holds": self.holds,
            "agrees": self.agrees(),
            "theory": self.theory.to_json(),
            "oracle": self.oracle.to_json(),
        })
    }
}

fn run_property(g: &StepFunction, alpha: &AlphaVector, config: &OracleConfig) -> Result<PropertyReport> {
    let mut config = config.clone();
    if config.refinements.is_empty() {
        config.refinements = property_refinements(alpha, g.resolution(), g.arity());
    }
    let factor = config.refinements.first().copied().unwrap_or(1);
    let theory = decide_vanishing(&g.refine(factor)?, alpha)?;
    let oracle = brute_force_vanishes(g, alpha, &config)?;
    Ok(PropertyReport {
        holds: theory.holds,
        theory,
        oracle,
    })
}

/// Compatible factors in `1..=max(2, m)`, or the smallest compatible factor if none is.
pub fn property_refinements(alpha: &AlphaVector, resolution: usize, arity: usize) -> Vec<usize> {
    let found = compatible_refinements(alpha, resolution, arity.max(2));
    if !found.is_empty() {
        return found;
    }
    let d = alpha.common_denominator();
    compatible_refinements(alpha, resolution, d)
        .into_iter()
        .take(1)
        .collect()
}

/// Tests `P(F, α)` on `w` with target density `p`. An empty refinement list
/// in `config` picks [`property_refinements`].
pub fn test_property_p(
    graph: &GraphSpec,
    alpha: &AlphaVector,
    p: &Rational,
    w: &Graphon,
    config: &OracleConfig,
) -> Result<PropertyReport> {
    check_inputs(graph, alpha, p)?;
    run_property(&property_integrand(graph, w, p), alpha, config)
}

/// Symmetrized variant: the integrand is averaged over all `m!` orderings of
/// the coordinates before testing.
pub fn test_property_p_sym(
    graph: &GraphSpec,
    alpha: &AlphaVector,
    p: &Rational,
    w: &Graphon,
    config: &OracleConfig,
) -> Result<PropertyReport> {
    check_inputs(graph, alpha, p)?;
    let g = property_integrand(graph, w, p).symmetrize(SubsetMask::full(graph.m))?;
    run_property(&g, alpha, config)
}

fn check_inputs(graph: &GraphSpec, alpha: &AlphaVector, p: &Rational) -> Result<()> {
    if alpha.len() != graph.m {
        return Err(Error::Alpha(format!(
            "{} entries for a graph on {} vertices",
            alpha.len(),
            graph.m
        )));
    }
    if p.is_negative() || *p > Rational::one() {
        return Err(Error::Precondition(format!("p = {} is outside [0, 1]", format_rational(p))));
    }
    Ok(())
}

/// Lexicographically smallest pair `u < v` of vertices with equal neighborhoods.
pub fn find_twins(graph: &GraphSpec) -> Option<(usize, usize)> {
    let nbrs: Vec<BTreeSet<usize>> = (0..graph.m).map(|v| graph.neighbors(v)).collect();
    (0..graph.m)
        .flat_map(|u| (u + 1..graph.m).map(move |v| (u, v)))
        .find(|&(u, v)| nbrs[u] == nbrs[v])
}
