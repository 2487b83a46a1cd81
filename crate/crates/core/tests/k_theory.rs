use kmonoid::ktheory::*;
use kmonoid::prosys::{certify_pro_iso, certify_pro_zero};
use kmonoid::sheafcalc::BlowUp;

fn cone(n: usize) -> ConeLevels {
    ConeLevels::build(n).unwrap()
}

#[test]
fn pullback_lands_on_the_chart_weights() {
    pullback_consistency(&BlowUp::new()).unwrap();
}

#[test]
fn reduced_hilbert_sums() {
    assert_eq!((2..=5).map(reduced_hilbert_sum).collect::<Vec<_>>(), vec![4, 13, 29, 54]);
}

#[test]
fn k1_comparison_is_an_isomorphism() {
    let c = cone(4);
    let r = verify_k1(&c, &BlowUp::new(), Params { nmax: 4, window: 2, pad: 4 }).unwrap();
    assert!(r.pass, "{r:?}");
    let ranks: Vec<usize> = r.reduced_iso.iter().map(|l| l.rank).collect();
    assert_eq!(ranks, vec![0, 4, 13, 29]);
}

#[test]
fn k1_rejects_too_few_levels() {
    let c = cone(2);
    assert!(matches!(
        verify_k1(&c, &BlowUp::new(), Params { nmax: 2, window: 1, pad: 4 }),
        Err(KTheoryError::BadLevel { .. })
    ));
}

#[test]
fn k4_class_survives_every_level() {
    let c = cone(4);
    let (sys, r) = compute_k4(&c).unwrap();
    assert!(r.pass, "{r:?}");
    assert_eq!(sys.dims(), vec![0, 1, 1, 1]);
    assert!(r.levels.iter().skip(1).all(|l| l.witness_nonzero));
    assert_eq!(r.nonvanishing_windows, vec![1, 2]);
}

#[test]
fn top_degree_inputs_vanish() {
    let r = verify_k5plus_inputs(&cone(4)).unwrap();
    assert!(r.pass, "{r:?}");
    assert!(r.levels.iter().all(|l| l.dim_omega5 == 0 && l.dim_hc4 == 0));
}

#[test]
fn k3_targets_agree() {
    let c = cone(4);
    let (_, r) = compute_k3(&c, &BlowUp::new(), 4).unwrap();
    assert!(r.pass);
    let t: Vec<(usize, usize)> = r.levels.iter().map(|l| (l.target_cech, l.kernel_dim)).collect();
    assert_eq!(t, vec![(0, 0), (0, 4), (1, 13), (5, 25)]);
    assert!(r.levels.iter().all(|l| l.target_cech == l.target_filtered));
}

#[test]
fn boundary_terms_at_degree_two_are_bounds() {
    let c = cone(3);
    let r = report_mt_general(&c, &BlowUp::new(), 2, Params { nmax: 3, window: 1, pad: 4 }).unwrap();
    assert!(r.bounds_only);
    assert_eq!(r.levels.len(), 3);
    assert!(matches!(
        report_mt_general(&c, &BlowUp::new(), 5, Params::default()),
        Err(KTheoryError::FormDegree(5))
    ));
}

#[test]
fn certificates_are_monotone_on_computed_systems() {
    let c = cone(4);
    let bu = BlowUp::new();
    let (k4, _) = compute_k4(&c).unwrap();
    let (k3, _) = compute_k3(&c, &bu, 4).unwrap();
    for sys in [&k4, &k3] {
        let v: Vec<bool> = (0..4).map(|w| certify_pro_zero(sys, w).unwrap().pass).collect();
        assert!(v.windows(2).all(|p| !p[0] || p[1]), "{v:?}");
    }
    let f = forms_comparison(&c, &bu, 4).unwrap();
    let v: Vec<bool> = (0..4).map(|w| certify_pro_iso(&f, w).unwrap().pass).collect();
    assert!(v.windows(2).all(|p| !p[0] || p[1]), "{v:?}");
}

#[test]
fn report_serializes() {
    let r = verify_k5plus_inputs(&cone(3)).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    assert_eq!(v["levels"].as_array().unwrap().len(), 3);
}
