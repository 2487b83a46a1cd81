use kmonoid::exactla::{LinearMap, SparseMatrix, VectorSpace};
use kmonoid::prosys::*;
use proptest::prelude::*;

/// System on `k^d` at every level whose transitions are a fixed matrix.
fn constant_system(rows: &[Vec<i64>], levels: usize) -> ProVectorSystem {
    let d = rows.len();
    let space = VectorSpace::indexed("e", d);
    let t = LinearMap::new(space.clone(), space.clone(), SparseMatrix::from_i64(rows)).unwrap();
    ProVectorSystem::new(1, vec![space; levels], vec![t; levels - 1]).unwrap()
}

/// Strictly upper triangular matrices are nilpotent, so these systems are
/// pro-zero at some window.
fn nilpotent(d: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    proptest::collection::vec(-2i64..3, d * d).prop_map(move |xs| {
        (0..d).map(|i| (0..d).map(|j| if j > i { xs[i * d + j] } else { 0 }).collect()).collect()
    })
}

proptest! {
    #[test]
    fn pro_zero_is_monotone_in_the_window(rows in (1usize..5).prop_flat_map(nilpotent)) {
        let sys = constant_system(&rows, 7);
        let mut seen = false;
        for c in 0..6 {
            let v = certify_pro_zero(&sys, c).unwrap();
            prop_assert!(!(seen && !v.pass), "window {} fails after a smaller window passed", c);
            seen |= v.pass;
        }
        // Nilpotency index is at most the dimension.
        prop_assert!(certify_pro_zero(&sys, rows.len()).unwrap().pass);
    }

    #[test]
    fn pro_iso_is_monotone_in_the_window(rows in (1usize..4).prop_flat_map(nilpotent)) {
        let sys = constant_system(&rows, 6);
        let zero = ProVectorSystem::with_zero_transitions(1, vec![VectorSpace::zero(); 6]).unwrap();
        let comps = (0..6).map(|k| LinearMap::zero(sys.level(k + 1), zero.level(k + 1))).collect();
        let f = StrictProMap::new(sys, zero, comps).unwrap();
        let mut seen = false;
        for c in 0..5 {
            let v = certify_pro_iso(&f, c).unwrap();
            prop_assert!(!(seen && !v.pass));
            seen |= v.pass;
        }
    }
}

#[test]
fn identity_is_a_pro_iso_and_inclusion_of_zero_is_not() {
    let sys = constant_system(&[vec![1, 0], vec![0, 1]], 4);
    let id = StrictProMap::new(sys.clone(), sys.clone(), (1..=4).map(|n| LinearMap::identity(sys.level(n))).collect()).unwrap();
    assert!(certify_pro_iso(&id, 1).unwrap().pass);
    let zero = ProVectorSystem::with_zero_transitions(1, vec![VectorSpace::zero(); 4]).unwrap();
    let inc = StrictProMap::new(zero.clone(), sys.clone(), (1..=4).map(|n| LinearMap::zero(zero.level(n), sys.level(n))).collect()).unwrap();
    let v = certify_pro_iso(&inc, 2).unwrap();
    assert!(!v.pass);
    assert_eq!(v.failing_level, Some(1));
}

#[test]
fn kernel_and_cokernel_of_zero_map() {
    let sys = constant_system(&[vec![0, 1], vec![0, 0]], 3);
    let z = StrictProMap::new(sys.clone(), sys.clone(), (1..=3).map(|n| LinearMap::zero(sys.level(n), sys.level(n))).collect()).unwrap();
    assert_eq!(pro_kernel(&z).unwrap().dims(), vec![2, 2, 2]);
    assert_eq!(pro_cokernel(&z).unwrap().dims(), vec![2, 2, 2]);
}
