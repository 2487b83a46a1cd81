use kmonoid::sheafcalc::*;
use proptest::prelude::*;

#[test]
fn closed_forms_match_cech_on_the_box() {
    for a in -6..=6 {
        for b in -6..=6 {
            for i in 0..3 {
                let l = LineBundle::new(a, b);
                assert_eq!(coh_cech_oracle(l, i), h_closed(l, i), "h^{i}({l})");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kunneth_holds_for_the_oracle(a in -5i64..6, b in -5i64..6, i in 0usize..3) {
        let k: usize = (0..=i).map(|p| h_p1(a, p) * h_p1(b, i - p)).sum();
        prop_assert_eq!(coh_cech_oracle(LineBundle::new(a, b), i), k);
    }

    #[test]
    fn euler_characteristic(a in -8i64..9, b in -8i64..9) {
        let l = LineBundle::new(a, b);
        let chi = h_closed(l, 0) as i64 - h_closed(l, 1) as i64 + h_closed(l, 2) as i64;
        prop_assert_eq!(chi, (a + 1) * (b + 1));
    }

    #[test]
    fn serre_duality(a in -5i64..6, b in -5i64..6, i in 0usize..3) {
        let l = LineBundle::new(a, b);
        let dual = LineBundle::new(-2 - a, -2 - b);
        prop_assert_eq!(coh_cech_oracle(l, i), coh_cech_oracle(dual, 2 - i));
    }
}

#[test]
fn audit_flags_only_the_top_cohomology_index() {
    let rows = closed_form_audit(-5..=5);
    for r in &rows {
        if r.item == 4 && r.n < -1 {
            assert!(r.flagged);
            assert_eq!(r.oracle as i64, (-1 - r.n) * (-1 - r.n));
            assert_eq!(r.literal as i64, (3 - r.n) * (3 - r.n));
        } else {
            assert!(!r.flagged, "{r:?}");
        }
    }
    let n2 = rows.iter().find(|r| r.item == 4 && r.n == -2).unwrap();
    assert_eq!((n2.literal, n2.oracle), (25, 1));
}

#[test]
fn reduced_forms_have_no_higher_cohomology() {
    for m in 0..=4 {
        for n in 1..=5 {
            let f = filtration_tilde_omega(m, n).unwrap();
            for i in 1..=2 {
                let h = h_filtered(&f, i);
                assert!(h.certified && h.dim == 0, "m={m} n={n} i={i}: {h:?}");
            }
        }
    }
}

#[test]
fn neighborhood_sections_by_cech() {
    let bu = BlowUp::new();
    let ideal: Vec<usize> = (2..=4).map(|n| bu.cohomology(SheafModel::TildeOmega, 0, n, 4).unwrap()[0]).collect();
    assert_eq!(ideal, vec![4, 13, 29]);
    assert_eq!(bu.cohomology(SheafModel::TildeOmega, 1, 3, 4).unwrap(), [19, 0, 0, 0]);
    for n in 2..=3 {
        for m in 0..=3 {
            let h = bu.cohomology(SheafModel::TildeOmega, m, n, 4).unwrap();
            let f = h_filtered(&filtration_tilde_omega(m, n).unwrap(), 0);
            assert_eq!(h[0], f.dim, "m={m} n={n}");
            assert_eq!(&h[1..], &[0, 0, 0]);
        }
    }
}

#[test]
fn omega_of_e_matches_closed_forms() {
    // Level 0 of the pullback model is Ω^m_E itself.
    let bu = BlowUp::new();
    for m in 0..=2 {
        let h = bu.cohomology(SheafModel::PullbackFromE, m, 1, 4).unwrap();
        for i in 0..3 {
            assert_eq!(h[i], coh_closed_form(m, 0, i), "m={m} i={i}");
        }
    }
}

#[test]
fn surjections_onto_hodge_and_algebraic_sections() {
    let bu = BlowUp::new();
    for n in 2..=3 {
        for m in 1..=3 {
            let v = verify_h0_surjection(&bu, m, n, 4).unwrap();
            assert!(v.pass, "{}", v.detail);
            let v = verify_alg_surjection(&bu, m, n, 4).unwrap();
            assert!(v.pass, "{}", v.detail);
        }
    }
}

#[test]
fn euler_sequence() {
    assert!(euler_identification_check().pass);
}

#[test]
fn charts_are_unimodular_and_cover_the_lattice() {
    for c in ToricChart::all() {
        assert!(c.is_unimodular());
        for g in c.generators {
            assert!(in_lattice(&g));
        }
        assert!(c.coords(&[1, 1, 1, 1]).is_some());
    }
}
