use plumb_core::laurent::{divide, taylor_coefficients, DivisionOrder, Exponent};
use plumb_core::zeta::taylor_decomposition_holds;
use plumb_core::{DenominatorFactors, LaurentPoly};
use proptest::prelude::*;

fn instance() -> impl Strategy<Value = (LaurentPoly, DenominatorFactors, Vec<usize>)> {
    (1usize..=3).prop_flat_map(|n| {
        let exp = prop::collection::vec(-4i64..10, n);
        let factor = prop::collection::vec(1i64..5, n);
        (
            prop::collection::vec((exp, -3i128..=3), 1..8),
            prop::collection::vec(factor, 0..4),
            prop::collection::vec(any::<bool>(), n),
            Just(n),
        )
            .prop_map(|(terms, factors, mask, n)| {
                let b = LaurentPoly::from_terms(n, 1, terms.into_iter().map(|(e, c)| (Exponent::from_vec(e), c)));
                let fs = DenominatorFactors::new(n, 1, factors.into_iter().map(Exponent::from_vec).collect()).unwrap();
                let mut subset: Vec<usize> = (0..n).filter(|&i| mask[i]).collect();
                if subset.is_empty() {
                    subset.push(0);
                }
                (b, fs, subset)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn division_contracts((b, fs, subset) in instance()) {
        let d = divide(&b, &fs, &subset, DivisionOrder::GradedLex).unwrap();
        prop_assert!(d.reconstructs(&b, &fs).unwrap());

        let a = fs.total();
        if !fs.is_empty() {
            for (e, _) in d.quotient.terms() {
                prop_assert!(subset.iter().any(|&s| e[s] >= 0), "quotient exponent {:?} is < 0", e);
            }
        }
        for (e, _) in d.remainder.terms() {
            prop_assert!(subset.iter().all(|&s| e[s] < a[s]), "remainder exponent {:?} not < {:?}", e, a);
        }

        let other = divide(&b, &fs, &subset, DivisionOrder::Lex).unwrap();
        prop_assert_eq!(&other.quotient, &d.quotient);
        prop_assert_eq!(&other.remainder, &d.remainder);

        let corner: Vec<i64> = (0..b.nvars()).map(|i| a[i] + 12 - i as i64).collect();
        prop_assert!(taylor_decomposition_holds(&b, &fs, &d, &corner, 1_000_000).unwrap());
    }
}

#[test]
fn one_variable_by_hand() {
    // 1 - t^6 = (-t)(1 - t^2 - t^3 + t^5) + (1 + t - t^3 - t^4)
    let b = LaurentPoly::from_dense(&[1, 0, 0, 0, 0, 0, -1]);
    let fs = DenominatorFactors::new(1, 1, vec![Exponent::from_slice(&[2]), Exponent::from_slice(&[3])]).unwrap();
    let d = divide(&b, &fs, &[0], DivisionOrder::GradedLex).unwrap();
    assert_eq!(d.quotient, LaurentPoly::from_dense(&[0, -1]));
    assert_eq!(d.remainder, LaurentPoly::from_dense(&[1, 1, 0, -1, -1]));
    assert!(d.reconstructs(&b, &fs).unwrap());
}

#[test]
fn taylor_of_geometric_series() {
    let fs = DenominatorFactors::new(2, 1, vec![Exponent::from_slice(&[1, 2])]).unwrap();
    let t = taylor_coefficients(&LaurentPoly::one(2, 1), &fs, &[3, 3], 100).unwrap();
    let keys: Vec<Vec<i64>> = t.keys().map(|e| e.to_vec()).collect();
    assert_eq!(keys, vec![vec![0, 0], vec![1, 2], vec![2, 4]]);
    assert!(taylor_coefficients(&LaurentPoly::one(2, 1), &fs, &[50, 50], 10).is_err());
}

#[test]
fn rejects_bad_input() {
    assert!(DenominatorFactors::new(1, 1, vec![Exponent::from_slice(&[0])]).is_err());
    let fs = DenominatorFactors::new(1, 1, vec![Exponent::from_slice(&[2])]).unwrap();
    let b = LaurentPoly::from_dense(&[1]);
    assert!(divide(&b, &fs, &[], DivisionOrder::GradedLex).is_err());
    assert!(divide(&b, &fs, &[3], DivisionOrder::GradedLex).is_err());
}
