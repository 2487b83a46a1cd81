use kmonoid::monoid::*;
use kmonoid::polyring::{segre_relation, MonomialOrder};

fn cone_monoid() -> AffineMonoid {
    gubeladze_monoid().reordered(&CONE_ORDER)
}

#[test]
fn toric_ideal_is_the_segre_relation() {
    let ideal = toric_ideal(&cone_monoid()).unwrap();
    assert!(same_ideal(&ideal, &[segre_relation()], &MonomialOrder::grevlex(4)).unwrap());
    assert!(same_ideal(&ideal, &[segre_relation()], &MonomialOrder::lex(4)).unwrap());
}

#[test]
fn not_divisible_for_small_c() {
    let m = cone_monoid();
    for c in 2..=12 {
        let d = is_c_divisible(&m, c, 4).unwrap();
        assert!(!d.divisible, "c = {c}");
        assert!(d.witness.is_some());
    }
}

#[test]
fn normal_up_to_degree_six() {
    let n = is_normal_up_to(&cone_monoid(), 6);
    assert!(n.normal, "{:?}", n.witness);
    assert!(n.checked > 0);
}

#[test]
fn quadratic_veronese_ideal() {
    let m = AffineMonoid::new(2, vec![vec![2, 0], vec![1, 1], vec![0, 2]]).unwrap();
    let ideal = toric_ideal(&m).unwrap();
    assert_eq!(ideal.len(), 1);
}
