use kmonoid::exactla::*;
use proptest::prelude::*;

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| proptest::collection::vec(proptest::collection::vec(-3i64..4, c), r))
}

proptest! {
    #[test]
    fn rank_plus_nullity_is_column_count(rows in small_matrix()) {
        let m = SparseMatrix::from_i64(&rows);
        let ker = kernel_basis(&m);
        prop_assert_eq!(rank(&m) + ker.len(), m.cols());
        for v in &ker {
            prop_assert!(m.mul_vec(v).unwrap().is_empty());
        }
    }

    #[test]
    fn rank_of_transpose(rows in small_matrix()) {
        let m = SparseMatrix::from_i64(&rows);
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
    }

    #[test]
    fn quotient_dimension_and_lifts(rows in small_matrix()) {
        let m = SparseMatrix::from_i64(&rows);
        let n = m.cols();
        let sub: Vec<SparseVec> = m.row_vectors().to_vec();
        let q = quotient_space(&VectorSpace::indexed("e", n), &sub).unwrap();
        prop_assert_eq!(q.dim(), n - rank(&m));
        for k in 0..q.dim() {
            prop_assert_eq!(q.project(&q.lift(&unit(k))), unit(k));
        }
        for v in &sub {
            prop_assert!(q.project(v).is_empty());
        }
    }

    #[test]
    fn sum_and_intersection_dimensions(a in small_matrix(), b in small_matrix()) {
        let n = 5;
        let trim = |rows: &Vec<Vec<i64>>| -> Vec<SparseVec> {
            rows.iter()
                .map(|r| vec_from_dense(&(0..n).map(|i| q(*r.get(i).unwrap_or(&0))).collect::<Vec<_>>()))
                .collect()
        };
        let sa = Subspace::span(n, &trim(&a));
        let sb = Subspace::span(n, &trim(&b));
        prop_assert_eq!(sa.sum(&sb).dim() + sa.intersect(&sb).dim(), sa.dim() + sb.dim());
        for v in sa.intersect(&sb).basis() {
            prop_assert!(sa.contains(&v) && sb.contains(&v));
        }
    }

    #[test]
    fn coordinates_recombine(rows in small_matrix(), x in proptest::collection::vec(-4i64..5, 6)) {
        let m = SparseMatrix::from_i64(&rows);
        let s = Subspace::span(m.cols(), m.row_vectors());
        let basis = s.basis();
        let mut v = SparseVec::new();
        for (b, c) in basis.iter().zip(&x) {
            axpy(&mut v, &q(*c), b);
        }
        let coords = s.coordinates(&v).unwrap();
        prop_assert_eq!(s.combine(&coords), v);
    }
}

#[test]
fn map_kernel_image_examples() {
    let id = LinearMap::identity(&VectorSpace::indexed("e", 5));
    let ki = map_kernel_image(&id);
    assert_eq!((ki.kernel.dim(), ki.image.dim()), (0, 5));
    let z = LinearMap::zero(&VectorSpace::indexed("e", 5), &VectorSpace::indexed("f", 5));
    let ki = map_kernel_image(&z);
    assert_eq!((ki.kernel.dim(), ki.image.dim()), (5, 0));
    let r1 = SparseMatrix::from_i64(&[vec![1, 2, 3], vec![2, 4, 6], vec![-1, -2, -3]]);
    let f = LinearMap::new(VectorSpace::indexed("e", 3), VectorSpace::indexed("f", 3), r1).unwrap();
    let ki = map_kernel_image(&f);
    assert_eq!((ki.kernel.dim(), ki.image.dim()), (2, 1));
}
