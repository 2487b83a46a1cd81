use kmonoid::exactla::{q, SparseVec};
use kmonoid::polyring::*;
use proptest::prelude::*;

fn poly4() -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec((-3i64..4, proptest::collection::vec(0u32..3, 4)), 0..5)
        .prop_map(|terms| Polynomial::from_terms(4, &terms))
}

fn qn(n: usize) -> FiniteAlgebra {
    truncated_quotient(&[segre_relation()], n).unwrap()
}

proptest! {
    #[test]
    fn normal_form_is_idempotent(p in poly4()) {
        let gb = buchberger(&[segre_relation()], &MonomialOrder::grevlex(4)).unwrap();
        let nf = gb.normal_form(&p);
        prop_assert_eq!(gb.normal_form(&nf), nf.clone());
        prop_assert!(gb.contains(&p.sub(&nf)));
    }

    #[test]
    fn normal_form_is_linear(a in poly4(), b in poly4()) {
        let gb = buchberger(&[segre_relation()], &MonomialOrder::lex(4)).unwrap();
        prop_assert_eq!(gb.normal_form(&a.add(&b)), gb.normal_form(&a).add(&gb.normal_form(&b)));
    }

    #[test]
    fn truncation_multiplication_matches_polynomials(a in poly4(), b in poly4()) {
        let alg = qn(3);
        let prod = alg.mul(&alg.coords(&a), &alg.coords(&b));
        prop_assert_eq!(prod, alg.coords(&a.mul(&b)));
    }
}

fn basis_vectors(alg: &FiniteAlgebra) -> Vec<SparseVec> {
    (0..alg.dim()).map(|i| [(i, q(1))].into_iter().collect()).collect()
}

#[test]
fn truncations_are_commutative_and_associative() {
    for n in 1..=4 {
        let alg = qn(n);
        let e = basis_vectors(&alg);
        for a in &e {
            for b in &e {
                let ab = alg.mul(a, b);
                assert_eq!(ab, alg.mul(b, a));
                for c in &e {
                    assert_eq!(alg.mul(&ab, c), alg.mul(a, &alg.mul(b, c)));
                }
            }
        }
    }
}

#[test]
fn truncation_hilbert_functions() {
    for n in 1..=6 {
        let h = qn(n).hilbert_function().unwrap();
        let expect: Vec<usize> = (0..n).map(|j| (j + 1) * (j + 1)).collect();
        assert_eq!(h, expect);
    }
}

#[test]
fn groebner_elements_reduce_to_zero() {
    let gens = vec![
        Polynomial::from_terms(3, &[(1, vec![2, 0, 0]), (-1, vec![0, 1, 0])]),
        Polynomial::from_terms(3, &[(1, vec![1, 1, 0]), (-1, vec![0, 0, 1])]),
    ];
    for order in [MonomialOrder::grevlex(3), MonomialOrder::lex(3)] {
        let gb = buchberger(&gens, &order).unwrap();
        for g in &gens {
            assert!(gb.normal_form(g).is_zero());
        }
    }
}
