use kmonoid::kaehler::*;
use kmonoid::prosys::certify_pro_zero;

#[test]
fn cone_truncations_have_expected_form_dimensions() {
    let expect = [
        (1, vec![1, 0, 0, 0, 0]),
        (2, vec![5, 10, 10, 5, 1]),
        (3, vec![14, 35, 35, 14, 1]),
        (4, vec![30, 81, 81, 30, 1]),
    ];
    for (n, dims) in expect {
        let dm = qn_module(n, 4).unwrap();
        assert_eq!((0..=4).map(|m| dm.dim(m)).collect::<Vec<_>>(), dims, "n = {n}");
    }
}

#[test]
fn top_hodge_pieces() {
    for (n, hc) in [(2, [6, 4, 1, 0]), (3, [22, 13, 1, 0]), (4, [52, 29, 1, 0])] {
        let dm = qn_module(n, 4).unwrap();
        let got: Vec<usize> = (1..=4).map(|m| hodge_piece_hc(&dm, m).unwrap().dim()).collect();
        assert_eq!(got, hc, "n = {n}");
    }
}

#[test]
fn d_squared_and_leibniz_on_cone_truncations() {
    for n in 1..=4 {
        let dm = qn_module(n, 4).unwrap();
        let dd = check_d_squared(&dm).unwrap();
        assert!(dd.pass, "{dd}");
        let lb = check_leibniz(&dm).unwrap();
        assert!(lb.pass, "{lb}");
    }
}

#[test]
fn d_squared_and_leibniz_on_chart_algebras() {
    let degs = chart_degrees(4, 3);
    for n in 2..=3 {
        let e = FormEngine::new(chart_algebra(n)).unwrap();
        let dm = build_on_degrees(e, 3, &degs).unwrap();
        assert!(check_d_squared(&dm).unwrap().pass);
        assert!(check_leibniz(&dm).unwrap().pass);
    }
}

#[test]
fn top_forms_on_the_cone_are_one_dimensional() {
    let (v, levels) = omega4_cone_check(4).unwrap();
    assert!(v.pass, "{v}");
    assert!(levels.iter().all(|l| l.model_dim == 1 && l.annihilated_by_vars));
}

#[test]
fn chart_identities() {
    let degs = chart_degrees(6, 3);
    for n in 2..=3 {
        for m in 0..=3 {
            assert!(verify_chart_splitting(m, n, &degs).unwrap().pass);
        }
        assert!(verify_ker_d_claims(n, &degs).unwrap().pass);
        assert!(verify_relative_forms_collapse(n, &degs).unwrap().pass);
    }
}

#[test]
fn andre_quillen_models_agree() {
    for n in 2..=3 {
        let degs = chart_degrees(2 * n as i64, 4);
        let naive = naive_cotangent_d1(&chart_algebra_over_qn(n), &degs).unwrap();
        let local = local_aq_model(n, &degs).unwrap();
        assert_eq!(naive.dims, local.dims, "n = {n}");
        let rel = naive_cotangent_d1(&chart_algebra_over_base(n), &degs).unwrap();
        for d in &degs {
            let expect = usize::from(d[0] > n as i64 && d[0] < 2 * n as i64);
            assert_eq!(rel.dims[d], expect, "n = {n}, degree {d:?}");
        }
    }
}

#[test]
fn base_change_kernel_has_zero_transitions() {
    let (sys, cross) = beta_kernel_system(4, &chart_degrees(5, 4)).unwrap();
    assert!(cross.pass, "{cross}");
    assert!(certify_pro_zero(&sys, 1).unwrap().pass);
}

#[test]
fn exterior_powers_of_the_cone_surjection() {
    let sys = SurjectionSystem::cone_forms(4).unwrap();
    let r = pro_exterior_power_check(4, &sys, 2).unwrap();
    assert!(r.power.pass, "{:?}", r);
}
