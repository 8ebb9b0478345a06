mod common;

use common::*;
use num_traits::Zero;
use proptest::prelude::*;
use vanish_core::{linear_combine, StepFunction, SubsetMask};

fn masks(m: usize) -> impl Strategy<Value = SubsetMask> {
    (0u32..(1 << m)).prop_map(move |b| SubsetMask::new(m, b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn marginalize_composes_over_disjoint_sets(
        (f, s, t) in step_function(3, 3).prop_flat_map(|f| {
            let m = f.arity();
            (Just(f), masks(m), masks(m))
        })
    ) {
        let t = t.difference(s);
        let lhs = f.marginalize(s).unwrap().marginalize(t).unwrap();
        prop_assert_eq!(lhs, f.marginalize(s.union(t)).unwrap());
    }

    #[test]
    fn antisymmetrize_is_idempotent_and_alternating(
        (f, s) in step_function(3, 3).prop_flat_map(|f| {
            let m = f.arity();
            (Just(f), masks(m))
        })
    ) {
        let a = f.antisymmetrize(s).unwrap();
        prop_assert!(a.is_alternating(s));
        prop_assert_eq!(a.antisymmetrize(s).unwrap(), a);
    }

    #[test]
    fn alternating_functions_vanish_on_diagonals(f in step_function(3, 3)) {
        let s = SubsetMask::full(f.arity());
        let a = f.antisymmetrize(s).unwrap();
        for cell in a.cells() {
            let repeated = (0..cell.len()).any(|i| (i + 1..cell.len()).any(|j| cell[i] == cell[j]));
            if repeated {
                prop_assert!(a.get(&cell).is_zero());
            }
        }
    }

    #[test]
    fn swap_preserves_total(
        (f, i, j) in step_function(3, 3).prop_flat_map(|f| {
            let m = f.arity();
            (Just(f), 0..m, 0..m)
        })
    ) {
        let g = f.swap_coords(i, j).unwrap();
        prop_assert_eq!(g.total_average(), f.total_average());
        prop_assert_eq!(g.swap_coords(i, j).unwrap(), f);
    }

    #[test]
    fn operations_are_linear((f, g) in step_pair(3, 3), a in -4i64..=4, b in 1i64..=3) {
        let m = f.arity();
        let coeffs = [cq(a, b), cq(-1, 2)];
        let combo = linear_combine(&coeffs, &[f.clone(), g.clone()]).unwrap();
        let s = SubsetMask::from_axes(m, [0]).unwrap();
        let full = SubsetMask::full(m);
        type Op = fn(&StepFunction, SubsetMask) -> StepFunction;
        let ops: [Op; 3] = [
            |h, s| h.marginalize(s).unwrap(),
            |h, s| h.antisymmetrize(s).unwrap(),
            |h, s| h.symmetrize(s).unwrap(),
        ];
        for op in ops {
            for mask in [s, full] {
                let lhs = op(&combo, mask);
                let rhs = linear_combine(&coeffs, &[op(&f, mask), op(&g, mask)]).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }
        let perm: Vec<usize> = (0..m).rev().collect();
        prop_assert_eq!(
            combo.permute(&perm),
            linear_combine(&coeffs, &[f.permute(&perm), g.permute(&perm)]).unwrap()
        );
    }

    #[test]
    fn symmetrize_output_is_symmetric(f in step_function(3, 3)) {
        let s = SubsetMask::full(f.arity());
        let g = f.symmetrize(s).unwrap();
        prop_assert!(g.is_symmetric(s));
        prop_assert_eq!(g.symmetrize(s).unwrap(), g);
    }

    #[test]
    fn marginal_is_free_of_averaged_axes(
        (f, s) in step_function(3, 3).prop_flat_map(|f| {
            let m = f.arity();
            (Just(f), masks(m))
        })
    ) {
        let g = f.marginalize(s).unwrap();
        prop_assert!(g.depends_only_on(s.complement()));
        prop_assert_eq!(g.total_average(), f.total_average());
    }

    #[test]
    fn json_round_trips(f in step_function(3, 3)) {
        let text = serde_json::to_string(&f).unwrap();
        let back: StepFunction = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, f);
    }
}

#[test]
fn marginalize_example() {
    let f = reals(2, 2, &[1, 2, 3, 4]);
    let g = f.marginalize(coords(2, &[2])).unwrap();
    assert_eq!(g, StepFunction::from_reals(2, 2, vec![q(3, 2), q(3, 2), q(7, 2), q(7, 2)]).unwrap());
}
