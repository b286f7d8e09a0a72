use proptest::prelude::*;
use scva_core::linalg::Matrix;
use scva_core::rational::rat;
use scva_core::Rational;

fn matrix() -> impl Strategy<Value = Matrix> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec((-4i64..=4, 1i64..=3), c), r).prop_map(move |rows| {
            let data: Vec<Vec<Rational>> =
                rows.into_iter().map(|row| row.into_iter().map(|(n, d)| rat(n, d)).collect()).collect();
            Matrix::from_rows(data, c)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn rank_nullity(m in matrix()) {
        let kernel = m.kernel();
        prop_assert_eq!(m.rank() + kernel.len(), m.cols);
        for v in &kernel {
            let col = Matrix::from_rows(v.iter().map(|x| vec![x.clone()]).collect(), 1);
            prop_assert!(m.mul(&col).is_zero());
        }
    }

    #[test]
    fn rank_of_product_is_bounded(a in matrix(), b in matrix()) {
        if a.cols == b.rows {
            let p = a.mul(&b);
            prop_assert!(p.rank() <= a.rank().min(b.rank()));
        }
    }

    #[test]
    fn columns_lie_in_column_space(m in matrix(), j in 0usize..6) {
        let j = j % m.cols;
        let col: Vec<Rational> = (0..m.rows).map(|i| m.get(i, j).clone()).collect();
        prop_assert!(m.column_space_contains(&col));
    }
}
