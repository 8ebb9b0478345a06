//! Exact decision procedure for `∫_{A_1×⋯×A_m} f = 0` over all disjoint
//! `A_1, …, A_m` of measures `α_1, …, α_m`.
//!
//! With `Σα = 1`, `f` vanishes on every such product iff its Walsh expansion
//! satisfies:
//!
//! 1. `F_∅ = 0`;
//! 2. `F_S` is alternating on `S` whenever `|S| ≥ 2`;
//! 3. for `1 ≤ |S| ≤ m-1` and `ℓ ∉ S`,
//!    `F_S(x)/α(S) = Σ_{i∈S} F_{S_i}(x^{(i)})/α(S_i)` where `S_i = S ∪ {ℓ} ∖ {i}`
//!    and `x^{(i)}` swaps `x_ℓ` and `x_i`.
//!
//! With `Σα < 1` only `f = 0` qualifies.
//!
//! Failures come with a [`Certificate`] naming the first violated condition:
//! conditions are scanned in the order above, subsets by increasing bitmask,
//! then `ℓ` ascending. [`replay_certificate`] re-evaluates it.

use num_complex::Complex;
use num_traits::Zero;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::alpha::AlphaVector;
use crate::error::{Error, Result};
use crate::rational::{complex_to_json, Rational, RationalComplex};
use crate::stepfn::{CellIndex, StepFunction};
use crate::subset::SubsetMask;
use crate::walsh::{expand, WalshExpansion};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateKind {
    /// Condition 1: `F_∅ ≠ 0`.
    NonzeroMean,
    /// Condition 2: `F_S` is not alternating.
    NotAlternating,
    /// Condition 3: nonzero residual.
    LevelRelation,
    /// `Σα < 1` and `f ≠ 0`.
    NonzeroFunction,
    /// Symmetric family: a level outside `K(m, r, α)` carries a nonzero component.
    NonzeroLevel,
}

impl CertificateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CertificateKind::NonzeroMean => "nonzero_mean",
            CertificateKind::NotAlternating => "not_alternating",
            CertificateKind::LevelRelation => "level_relation",
            CertificateKind::NonzeroFunction => "nonzero_function",
            CertificateKind::NonzeroLevel => "nonzero_level",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Detail {
    /// A cell where the offending function is nonzero, with its value.
    Cell {
        cell: CellIndex,
        value: RationalComplex,
    },
    /// `F_S(x^{(i↔j)}) + F_S(x) ≠ 0` at `cell`; `defect` is that sum.
    Transposition {
        first: usize,
        second: usize,
        cell: CellIndex,
        defect: RationalComplex,
    },
    /// The condition-3 residual for `(S, ℓ)` is `residual` at `cell`.
    Relation {
        ell: usize,
        cell: CellIndex,
        residual: RationalComplex,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub subset: SubsetMask,
    pub detail: Detail,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub certificate: Option<Certificate>,
}

impl Verdict {
    pub fn holds() -> Self {
        Verdict {
            holds: true,
            certificate: None,
        }
    }

    pub fn fails(certificate: Certificate) -> Self {
        Verdict {
            holds: false,
            certificate: Some(certificate),
        }
    }
}

impl Detail {
    fn to_json(&self) -> Value {
        match self {
            Detail::Cell { cell, value } => json!({ "cell": cell, "value": complex_to_json(value) }),
            Detail::Transposition {
                first,
                second,
                cell,
                defect,
            } => json!({
                "swap": [first + 1, second + 1],
                "cell": cell,
                "defect": complex_to_json(defect),
            }),
            Detail::Relation { ell, cell, residual } => json!({
                "ell": ell + 1,
                "cell": cell,
                "residual": complex_to_json(residual),
            }),
        }
    }
}

impl Certificate {
    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind.as_str(),
            "subset": self.subset.to_coords(),
            "detail": self.detail.to_json(),
        })
    }
}

impl Verdict {
    pub fn to_json(&self) -> Value {
        match &self.certificate {
            Some(c) => json!({ "holds": self.holds, "certificate": c.to_json() }),
            None => json!({ "holds": self.holds }),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

fn check_alpha_arity(arity: usize, alpha: &AlphaVector) -> Result<()> {
    if alpha.len() != arity {
        return Err(Error::Alpha(format!(
            "{} entries for arity {}",
            alpha.len(),
            arity
        )));
    }
    Ok(())
}

fn scale_by_inverse(g: &StepFunction, denom: &Rational) -> StepFunction {
    g.map(|v| Complex::new(&v.re / denom, &v.im / denom))
}

/// Residual of condition 3 for `(S, ℓ)`:
/// `F_S/α(S) − Σ_{i∈S} F_{S_i}∘swap(ℓ, i) / α(S_i)`. Zero iff the relation holds.
pub fn check_level_relation(
    e: &WalshExpansion,
    alpha: &AlphaVector,
    s: SubsetMask,
    ell: usize,
) -> Result<StepFunction> {
    let m = e.arity();
    check_alpha_arity(m, alpha)?;
    if s.arity() != m {
        return Err(Error::Subset(format!("subset over {} axes used with arity {m}", s.arity())));
    }
    if s.is_empty() || s.len() >= m {
        return Err(Error::Subset(format!(
            "level relation needs 1 ≤ |S| ≤ m-1, got S = {s}"
        )));
    }
    if ell >= m {
        return Err(Error::Coordinate { coord: ell, arity: m });
    }
    if s.contains(ell) {
        return Err(Error::Subset(format!("ell = {} lies in S = {s}", ell + 1)));
    }
    let mut residual = scale_by_inverse(e.component(s), &alpha.product(s));
    for i in s.axes() {
        let si = s.with(ell).without(i);
        let swapped = e.component(si).swap_coords(ell, i)?;
        residual = residual.sub(&scale_by_inverse(&swapped, &alpha.product(si)));
    }
    Ok(residual)
}

/// Runs conditions 1–3 on an expansion, assuming `Σα = 1`.
pub fn decide_expansion(e: &WalshExpansion, alpha: &AlphaVector) -> Result<Verdict> {
    let m = e.arity();
    check_alpha_arity(m, alpha)?;
    if !alpha.is_full() {
        return Err(Error::Precondition(
            "the Walsh conditions apply only when alpha sums to 1".into(),
        ));
    }
    let empty = SubsetMask::empty(m);
    let mean = e.component(empty);
    if let Some(cell) = mean.first_nonzero() {
        let value = mean.get(&cell).clone();
        return Ok(Verdict::fails(Certificate {
            kind: CertificateKind::NonzeroMean,
            subset: empty,
            detail: Detail::Cell { cell, value },
        }));
    }
    for (s, g) in e.iter() {
        if s.len() < 2 {
            continue;
        }
        if let Some((first, second, cell)) = g.alternation_defect(s) {
            let mut swapped = cell.clone();
            swapped.swap(first, second);
            let defect = g.get(&cell) + g.get(&swapped);
            return Ok(Verdict::fails(Certificate {
                kind: CertificateKind::NotAlternating,
                subset: s,
                detail: Detail::Transposition {
                    first,
                    second,
                    cell,
                    defect,
                },
            }));
        }
    }
    for s in SubsetMask::all(m) {
        if s.is_empty() || s.len() >= m {
            continue;
        }
        for ell in s.complement().axes() {
            let residual = check_level_relation(e, alpha, s, ell)?;
            if let Some(cell) = residual.first_nonzero() {
                let value = residual.get(&cell).clone();
                return Ok(Verdict::fails(Certificate {
                    kind: CertificateKind::LevelRelation,
                    subset: s,
                    detail: Detail::Relation {
                        ell,
                        cell,
                        residual: value,
                    },
                }));
            }
        }
    }
    Ok(Verdict::holds())
}

fn check_inputs(f: &StepFunction, alpha: &AlphaVector) -> Result<()> {
    check_alpha_arity(f.arity(), alpha)?;
    alpha.check_resolution(f.resolution())
}

/// Decides whether `f` integrates to zero over every product of disjoint sets
/// of measures `alpha`.
pub fn decide_vanishing(f: &StepFunction, alpha: &AlphaVector) -> Result<Verdict> {
    check_inputs(f, alpha)?;
    if !alpha.is_full() {
        return Ok(match f.first_nonzero() {
            None => Verdict::holds(),
            Some(cell) => {
                let value = f.get(&cell).clone();
                Verdict::fails(Certificate {
                    kind: CertificateKind::NonzeroFunction,
                    subset: SubsetMask::empty(f.arity()),
                    detail: Detail::Cell { cell, value },
                })
            }
        });
    }
    decide_expansion(&expand(f), alpha)
}

/// Re-evaluates the condition named by `cert` against `f` and reports whether
/// the recorded failure is reproduced exactly.
///
/// `NonzeroLevel` certificates come from the symmetric family; for them the
/// subset is `[k]` and the cell/value refer to `F_{[k]}`.
pub fn replay_certificate(f: &StepFunction, alpha: &AlphaVector, cert: &Certificate) -> Result<bool> {
    check_inputs(f, alpha)?;
    let e = expand(f);
    Ok(match (&cert.kind, &cert.detail) {
        (CertificateKind::NonzeroFunction, Detail::Cell { cell, value }) => {
            f.check_cell(cell)?;
            !value.is_zero() && f.get(cell) == value
        }
        (CertificateKind::NonzeroMean | CertificateKind::NonzeroLevel, Detail::Cell { cell, value }) => {
            f.check_cell(cell)?;
            !value.is_zero() && e.component(cert.subset).get(cell) == value
        }
        (
            CertificateKind::NotAlternating,
            Detail::Transposition {
                first,
                second,
                cell,
                defect,
            },
        ) => {
            f.check_cell(cell)?;
            if !(cert.subset.contains(*first) && cert.subset.contains(*second)) {
                return Ok(false);
            }
            let g = e.component(cert.subset);
            let mut swapped = cell.clone();
            swapped.swap(*first, *second);
            let sum = g.get(cell) + g.get(&swapped);
            !sum.is_zero() && &sum == defect
        }
        (CertificateKind::LevelRelation, Detail::Relation { ell, cell, residual }) => {
            f.check_cell(cell)?;
            let r = check_level_relation(&e, alpha, cert.subset, *ell)?;
            !residual.is_zero() && r.get(cell) == residual
        }
        _ => false,
    })
}

/// First-variation operator `∂^i_{y,z} f = (f_{z(i)} − f_{y(i)}) / α_i`, with
/// `y`, `z` the cells on axis `axis`. The result is constant along `axis`.
pub fn partial_diff(
    f: &StepFunction,
    alpha: &AlphaVector,
    axis: usize,
    y: usize,
    z: usize,
) -> Result<StepFunction> {
    check_alpha_arity(f.arity(), alpha)?;
    let single = SubsetMask::singleton(f.arity(), axis)?;
    let at_z = f.fiber(single, &[(axis, z)])?;
    let at_y = f.fiber(single, &[(axis, y)])?;
    Ok(scale_by_inverse(&at_z.sub(&at_y), alpha.get(axis)))
}

/// Iterated operator `∂^K_{Y,Z} f = ∂^K_{y_k,z_k} ⋯ ∂^K_{y_1,z_1} f`, where each
/// step is `Σ_{i∈K} ∂^i`. `ys[t]` and `zs[t]` are full cell vectors of which
/// only the entries on `K` are read.
pub fn partial_diff_multi(
    f: &StepFunction,
    alpha: &AlphaVector,
    k_set: SubsetMask,
    ys: &[CellIndex],
    zs: &[CellIndex],
) -> Result<StepFunction> {
    check_alpha_arity(f.arity(), alpha)?;
    if ys.len() != zs.len() {
        return Err(Error::Shape(format!(
            "{} y-vectors but {} z-vectors",
            ys.len(),
            zs.len()
        )));
    }
    if ys.is_empty() {
        return Err(Error::Shape("at least one (y, z) pair is required".into()));
    }
    if k_set.arity() != f.arity() {
        return Err(Error::Subset(format!(
            "subset over {} axes used with arity {}",
            k_set.arity(),
            f.arity()
        )));
    }
    for v in ys.iter().chain(zs) {
        f.check_cell(v)?;
    }
    let mut g = f.clone();
    for (y, z) in ys.iter().zip(zs) {
        let mut next = StepFunction::zero(f.arity(), f.resolution())?;
        for i in k_set.axes() {
            next = next.add(&partial_diff(&g, alpha, i, y[i], z[i])?);
        }
        g = next;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{creal, int, rat};
    use crate::walsh::WalshExpansion;

    fn reals(m: usize, n: usize, vals: &[i64]) -> StepFunction {
        StepFunction::from_reals(m, n, vals.iter().map(|&v| int(v)).collect()).unwrap()
    }

    fn subset(m: usize, coords: &[usize]) -> SubsetMask {
        SubsetMask::from_coords(m, coords).unwrap()
    }

    fn antisym3() -> StepFunction {
        reals(2, 3, &[0, 1, -1, -1, 0, 1, 1, -1, 0])
    }

    /// g(x_1) on a 2-variable grid of resolution 2.
    fn g_of_first() -> StepFunction {
        reals(2, 2, &[1, 1, -1, -1])
    }

    #[test]
    fn zero_expansion_has_zero_residual() {
        let e = WalshExpansion::zero(2, 2).unwrap();
        let a = AlphaVector::parse("1/2,1/2").unwrap();
        assert!(check_level_relation(&e, &a, subset(2, &[1]), 1).unwrap().is_zero());
    }

    #[test]
    fn proportional_singletons_satisfy_relation() {
        let a = AlphaVector::parse("1/3,2/3").unwrap();
        let g1 = g_of_first();
        let g2 = g1.swap_coords(0, 1).unwrap();
        let e = WalshExpansion::from_components(
            2,
            2,
            [
                (subset(2, &[1]), g1.scale_real(&rat(1, 3))),
                (subset(2, &[2]), g2.scale_real(&rat(2, 3))),
            ],
        )
        .unwrap();
        assert!(check_level_relation(&e, &a, subset(2, &[1]), 1).unwrap().is_zero());
        assert!(check_level_relation(&e, &a, subset(2, &[2]), 0).unwrap().is_zero());
    }

    #[test]
    fn unequal_singletons_leave_residual() {
        let a = AlphaVector::parse("1/3,2/3").unwrap();
        let g1 = g_of_first();
        let g2 = g1.swap_coords(0, 1).unwrap();
        let e = WalshExpansion::from_components(2, 2, [(subset(2, &[1]), g1.clone()), (subset(2, &[2]), g2)])
            .unwrap();
        let r = check_level_relation(&e, &a, subset(2, &[1]), 1).unwrap();
        assert_eq!(r, g1.scale_real(&rat(3, 2)));
    }

    #[test]
    fn relation_rejects_bad_arguments() {
        let e = WalshExpansion::zero(3, 2).unwrap();
        let a = AlphaVector::parse("1/2,1/4,1/4").unwrap();
        assert!(check_level_relation(&e, &a, subset(3, &[1]), 0).is_err());
        assert!(check_level_relation(&e, &a, SubsetMask::empty(3), 0).is_err());
        assert!(check_level_relation(&e, &a, SubsetMask::full(3), 0).is_err());
    }

    #[test]
    fn decide_examples() {
        let a = AlphaVector::parse("1/3,2/3").unwrap();
        assert!(decide_vanishing(&StepFunction::zero(2, 3).unwrap(), &a).unwrap().holds);
        assert!(decide_vanishing(&antisym3(), &a).unwrap().holds);
        assert!(decide_vanishing(&StepFunction::zero(2, 2).unwrap(), &a).is_err());

        let half = AlphaVector::parse("1/2,1/2").unwrap();
        let g_sum = reals(2, 2, &[2, 0, 0, -2]);
        assert!(decide_vanishing(&g_sum, &half).unwrap().holds);

        let one = AlphaVector::parse("1/2").unwrap();
        let f = reals(1, 2, &[1, -1]);
        let v = decide_vanishing(&f, &one).unwrap();
        assert!(!v.holds);
        let cert = v.certificate.unwrap();
        assert_eq!(cert.kind, CertificateKind::NonzeroFunction);
        assert!(replay_certificate(&f, &one, &cert).unwrap());
    }

    #[test]
    fn certificates_are_canonical_and_replayable() {
        let a = AlphaVector::parse("1/3,2/3").unwrap();
        let constant = StepFunction::constant(2, 3, creal(1, 1)).unwrap();
        let v = decide_vanishing(&constant, &a).unwrap();
        let c = v.certificate.clone().unwrap();
        assert_eq!(c.kind, CertificateKind::NonzeroMean);
        assert!(replay_certificate(&constant, &a, &c).unwrap());
        assert_eq!(
            v.to_json(),
            json!({"holds": false, "certificate": {"kind": "nonzero_mean", "subset": [],
                "detail": {"cell": [0, 0], "value": {"re": "1", "im": "0"}}}})
        );

        // symmetric mean-zero level-2 component: not alternating
        let sym = reals(2, 3, &[2, -1, -1, -1, 2, -1, -1, -1, 2]);
        let v = decide_vanishing(&sym, &a).unwrap();
        let c = v.certificate.unwrap();
        assert_eq!(c.kind, CertificateKind::NotAlternating);
        assert_eq!(c.subset, subset(2, &[1, 2]));
        assert!(replay_certificate(&sym, &a, &c).unwrap());

        // level-1 only, wrong proportions
        let g = reals(2, 3, &[1, 1, 1, 0, 0, 0, -1, -1, -1]);
        let v = decide_vanishing(&g, &a).unwrap();
        let c = v.certificate.unwrap();
        assert_eq!(c.kind, CertificateKind::LevelRelation);
        assert_eq!(c.subset, subset(2, &[1]));
        assert!(matches!(c.detail, Detail::Relation { ell: 1, .. }));
        assert!(replay_certificate(&g, &a, &c).unwrap());
        // a tampered certificate does not replay
        let mut bad = c.clone();
        if let Detail::Relation { residual, .. } = &mut bad.detail {
            *residual = residual.clone() + creal(1, 1);
        }
        assert!(!replay_certificate(&g, &a, &bad).unwrap());
    }

    #[test]
    fn partial_diff_examples() {
        let a = AlphaVector::parse("1/2").unwrap();
        let f = reals(1, 2, &[3, 8]);
        let d = partial_diff(&f, &a, 0, 0, 1).unwrap();
        assert_eq!(d, reals(1, 2, &[10, 10]));
        assert!(partial_diff(&f, &a, 0, 1, 1).unwrap().is_zero());

        let b = AlphaVector::parse("1/3,2/3").unwrap();
        let h = reals(2, 3, &[1, 2, 3, 1, 2, 3, 1, 2, 3]);
        assert!(partial_diff(&h, &b, 0, 0, 2).unwrap().is_zero());
    }

    #[test]
    fn partial_diff_multi_single_step_unrolls() {
        let a = AlphaVector::parse("1/3,1/3,1/3").unwrap();
        let f = StepFunction::from_fn(3, 3, |c| creal((c[0] * 7 + c[1] * c[2] + 1) as i64, 1)).unwrap();
        let k = subset(3, &[1, 3]);
        let y = vec![0, 1, 2];
        let z = vec![2, 0, 1];
        let multi = partial_diff_multi(&f, &a, k, std::slice::from_ref(&y), std::slice::from_ref(&z)).unwrap();
        let unrolled = partial_diff(&f, &a, 0, y[0], z[0])
            .unwrap()
            .add(&partial_diff(&f, &a, 2, y[2], z[2]).unwrap());
        assert_eq!(multi, unrolled);
        assert!(partial_diff_multi(&f, &a, k, std::slice::from_ref(&y), &[]).is_err());
        assert!(partial_diff_multi(&f, &a, k, &[], &[]).is_err());
    }
}
