mod common;

use common::*;
use itertools::Itertools;
use num_complex::Complex;
use num_traits::{One, Zero};
use vanish_core::construct::{random_function, random_symmetric_walsh, spread_over_level};
use vanish_core::oracle::{family_integral, symmetric_family_check};
use vanish_core::symmetric::{decide_symmetric_vanishing, level_coefficient};
use vanish_core::{compute_k, expand, CertificateKind, GridPartition, Rational, RationalComplex, StepFunction, SubsetMask};

/// `Σ_i C(m-r, k-i) C(r, i) t^i`, as the coefficient of `x^k` in `(1+x)^{m-r} (1+tx)^r`.
fn coefficient_by_polynomial(m: usize, r: usize, alpha: &Rational, k: usize) -> Rational {
    let t = -alpha / (Rational::one() - alpha);
    let mut poly = vec![Rational::one()];
    let mul = |poly: &Vec<Rational>, c: &Rational| {
        let mut out = vec![Rational::zero(); poly.len() + 1];
        for (i, p) in poly.iter().enumerate() {
            out[i] += p;
            out[i + 1] += p * c;
        }
        out
    };
    for _ in 0..m - r {
        poly = mul(&poly, &Rational::one());
    }
    for _ in 0..r {
        poly = mul(&poly, &t);
    }
    poly.get(k).cloned().unwrap_or_else(Rational::zero)
}

#[test]
fn coefficients_match_generating_polynomial() {
    for m in 1..=7 {
        for r in 0..=m {
            for (p, d) in [(1, 2), (1, 3), (2, 3), (3, 4), (2, 7)] {
                let a = q(p, d);
                for k in 0..=m {
                    assert_eq!(level_coefficient(m, r, &a, k).unwrap(), coefficient_by_polynomial(m, r, &a, k));
                }
            }
        }
    }
}

#[test]
fn k_set_examples() {
    assert_eq!(compute_k(6, 3, &q(1, 2)).unwrap().members, vec![1, 3, 5]);
    assert_eq!(compute_k(3, 1, &q(2, 3)).unwrap().members, vec![1]);
    assert!(compute_k(3, 1, &q(1, 2)).unwrap().members.is_empty());
    let k = compute_k(2, 1, &q(1, 2)).unwrap();
    assert_eq!(
        serde_json::to_value(&k).unwrap(),
        serde_json::json!({"m": 2, "r": 1, "alpha": "1/2", "members": [1], "coefficients": ["0", "-1"]})
    );
}

#[test]
fn odd_levels_vanish_at_one_half() {
    for r in 1..=6 {
        for k in (1..=2 * r).step_by(2) {
            assert!(level_coefficient(2 * r, r, &q(1, 2), k).unwrap().is_zero(), "r={r} k={k}");
        }
    }
}

fn random_symmetric(m: usize, n: usize, seed: u64) -> StepFunction {
    random_function(m, n, seed).unwrap().symmetrize(SubsetMask::full(m)).unwrap()
}

fn alphas_for(n: usize) -> Vec<Rational> {
    (1..n).map(|c| q(c as i64, n as i64)).collect()
}

/// `∫_{A^{m-r} × Ā^r} f = ((1-α)/α)^r Σ_k c_k ∫_{A^m} F_{[k]}` on every grid set `A`.
#[test]
fn family_identity_on_random_symmetric_functions() {
    for seed in 0..20u64 {
        let m = 1 + (seed % 4) as usize;
        let n = 2 + (seed % 3) as usize;
        let f = random_symmetric(m, n, seed);
        let e = expand(&f);
        for a in alphas_for(n) {
            let size = (&a * Rational::from_integer(n.into())).to_integer().try_into().unwrap();
            for r in 0..=m {
                let ratio = ((Rational::one() - &a) / &a).pow(r as i32);
                for chosen in (0..n).combinations(size) {
                    let in_a: Vec<bool> = (0..n).map(|c| chosen.contains(&c)).collect();
                    let lhs = naive_family_integral(&f, r, &in_a);
                    let mut rhs = RationalComplex::zero();
                    for k in 0..=m {
                        let lead = SubsetMask::from_axes(m, 0..k).unwrap();
                        let c = level_coefficient(m, r, &a, k).unwrap();
                        rhs += naive_family_integral(e.component(lead), 0, &in_a) * Complex::new(c, Rational::zero());
                    }
                    rhs *= Complex::new(ratio.clone(), Rational::zero());
                    assert_eq!(lhs, rhs, "seed {seed} alpha {a} r {r} A {chosen:?}");
                }
            }
        }
    }
}

#[test]
fn decision_agrees_with_family_search() {
    let mut checked = 0;
    for seed in 0..24u64 {
        let m = 2 + (seed % 3) as usize;
        let n = 2 + (seed % 2) as usize;
        for a in alphas_for(n) {
            for r in 0..=m {
                let kset = compute_k(m, r, &a).unwrap();
                let mut f = StepFunction::zero(m, n).unwrap();
                for &k in &kset.members {
                    let g = random_symmetric_walsh(m, k, n, seed ^ k as u64).unwrap();
                    f = f.add(&spread_over_level(&g, k).unwrap());
                }
                if seed % 2 == 1 {
                    let k = 1 + seed as usize % m;
                    let g = random_symmetric_walsh(m, k, n, seed + 50).unwrap();
                    f = f.add(&spread_over_level(&g, k).unwrap());
                }
                let verdict = decide_symmetric_vanishing(&f, r, &a).unwrap();
                for refine in 1..=2 {
                    let report = symmetric_family_check(&f, r, &a, refine).unwrap();
                    assert_eq!(verdict.holds, report.all_zero, "seed {seed} m {m} r {r} alpha {a} refine {refine}");
                    if let Some(c) = &report.counterexample {
                        assert_eq!(family_integral(&f, r, &c.partition).unwrap(), c.value);
                    }
                }
                if let Some(c) = verdict.certificate {
                    assert_eq!(c.kind, CertificateKind::NonzeroLevel);
                }
                checked += 1;
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn level_three_is_not_in_k_at_one_third() {
    let g = random_symmetric_walsh(6, 3, 3, 2).unwrap();
    let f = spread_over_level(&g, 3).unwrap();
    let v = decide_symmetric_vanishing(&f, 3, &q(1, 3)).unwrap();
    assert!(!v.holds);
    assert_eq!(v.certificate.unwrap().subset, SubsetMask::from_axes(6, 0..3).unwrap());
    assert_eq!(level_coefficient(6, 3, &q(1, 3), 3).unwrap(), q(-11, 8));
}

#[test]
fn rejects_asymmetric_input() {
    let f = reals(2, 2, &[0, 1, 0, 0]);
    assert!(decide_symmetric_vanishing(&f, 1, &q(1, 2)).is_err());
    let p = GridPartition::new(vec![1, 0]).unwrap();
    assert!(family_integral(&f, 3, &p).is_err());
}
