//! Symmetric functions and the family `∫_{A^{m-r} × Ā^r} f = 0` for all `A`
//! of measure `α`.
//!
//! For symmetric `f` with expansion levels `F_{[k]}` the family integral equals
//! `((1-α)/α)^r Σ_k c_k ∫_{A^m} F_{[k]}`, where
//! `c_k = Σ_{i=0}^k C(m-r, k-i) C(r, i) (-α/(1-α))^i`. A symmetric `f` satisfies
//! the family iff every level with `c_k ≠ 0` vanishes; `K(m, r, α)` collects the
//! levels `k ∈ [m]` with `c_k = 0`. Since `c_0 = 1`, the mean must vanish too.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::alpha::AlphaVector;
use crate::characterize::{Certificate, CertificateKind, Detail, Verdict};
use crate::error::{Error, Result};
use crate::rational::{binomial, format_rational, Rational};
use crate::stepfn::StepFunction;
use crate::subset::SubsetMask;
use crate::walsh::expand;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KSet {
    pub m: usize,
    pub r: usize,
    #[serde(with = "crate::rational::serde_rational")]
    pub alpha: Rational,
    /// Levels `k ∈ [m]` with `c_k = 0`, ascending.
    pub members: Vec<usize>,
    /// `c_1, …, c_m`.
    #[serde(serialize_with = "serialize_rationals")]
    pub coefficients: Vec<Rational>,
}

fn serialize_rationals<S: serde::Serializer>(values: &[Rational], serializer: S) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_seq(values.iter().map(format_rational))
}

fn check_params(m: usize, r: usize, alpha: &Rational) -> Result<()> {
    if m == 0 {
        return Err(Error::Precondition("m must be at least 1".into()));
    }
    if r > m {
        return Err(Error::Precondition(format!("r = {r} exceeds m = {m}")));
    }
    if !(alpha > &Rational::zero() && alpha < &Rational::one()) {
        return Err(Error::Alpha(format!(
            "alpha = {} must lie strictly between 0 and 1",
            format_rational(alpha)
        )));
    }
    Ok(())
}

/// `c_k(m, r, α)`; `k = 0` gives 1.
pub fn level_coefficient(m: usize, r: usize, alpha: &Rational, k: usize) -> Result<Rational> {
    check_params(m, r, alpha)?;
    if k > m {
        return Err(Error::Precondition(format!("level k = {k} exceeds m = {m}")));
    }
    let ratio = -alpha / (Rational::one() - alpha);
    let mut power = Rational::one();
    let mut sum = Rational::zero();
    for i in 0..=k {
        let weight = binomial(m - r, k - i) * binomial(r, i);
        sum += Rational::from_integer(weight) * &power;
        power *= &ratio;
    }
    Ok(sum)
}

pub fn compute_k(m: usize, r: usize, alpha: &Rational) -> Result<KSet> {
    let coefficients = (1..=m)
        .map(|k| level_coefficient(m, r, alpha, k))
        .collect::<Result<Vec<_>>>()?;
    let members = coefficients
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_zero())
        .map(|(i, _)| i + 1)
        .collect();
    Ok(KSet {
        m,
        r,
        alpha: alpha.clone(),
        members,
        coefficients,
    })
}

/// Decides `∫_{A^{m-r} × Ā^r} f = 0` for every `A` with `λ(A) = α`, for symmetric `f`.
/// A failure names the smallest level `k` (subset `[k]`) with `c_k ≠ 0` and
/// `F_{[k]} ≠ 0`.
pub fn decide_symmetric_vanishing(f: &StepFunction, r: usize, alpha: &Rational) -> Result<Verdict> {
    let m = f.arity();
    check_params(m, r, alpha)?;
    AlphaVector::new(vec![alpha.clone()])?.check_resolution(f.resolution())?;
    if let Some((i, j, _)) = f.symmetry_defect(SubsetMask::full(m)) {
        return Err(Error::Precondition(format!(
            "function is not symmetric under swapping coordinates {} and {}",
            i + 1,
            j + 1
        )));
    }
    let e = expand(f);
    for k in 0..=m {
        if level_coefficient(m, r, alpha, k)?.is_zero() {
            continue;
        }
        let lead = SubsetMask::from_axes(m, 0..k)?;
        let component = e.component(lead);
        if let Some(cell) = component.first_nonzero() {
            let value = component.get(&cell).clone();
            return Ok(Verdict::fails(Certificate {
                kind: CertificateKind::NonzeroLevel,
                subset: lead,
                detail: Detail::Cell { cell, value },
            }));
        }
    }
    Ok(Verdict::holds())
}
