mod common;

use common::*;
use ksix::homalg::{gamma, GroupHom};
use ksix::uct::{assemble_uct, verify_uct, Naturality};
use num_bigint::BigInt;
use proptest::prelude::*;

#[test]
fn integers_with_unit_one() {
    let (z, t) = (g(&[], 1), g(&[], 0));
    let d = assemble_uct(&z, &el(&z, &[1]), &t, &z, &t).unwrap();
    assert!(d.k0b_mod_gamma().is_trivial());
    assert!(d.pointed_ext().is_trivial());
    assert!(d.plain_ext().is_trivial());
    assert!(d.pointed_hom().is_trivial());
    assert_eq!(d.ext_us().forced_order(), Some(BigInt::from(1)));
    assert_eq!(d.ext_uw().forced_order(), Some(BigInt::from(1)));
    assert!(verify_uct(&d, None).passed());
}

#[test]
fn zero_unit() {
    let (z, t) = (g(&[], 1), g(&[3], 0));
    let d = assemble_uct(&z, &z.zero(), &t, &z, &t).unwrap();
    assert_eq!(d.k0b_mod_gamma(), &z);
    assert!(d.gamma().group().is_trivial());
    assert_eq!(d.pointed_ext(), &g(&[3], 1));
    assert_eq!(d.plain_ext(), &g(&[3], 0));
    assert!(verify_uct(&d, None).passed());
}

#[test]
fn two_torsion_unit() {
    let (z, z2, t) = (g(&[], 1), g(&[2], 0), g(&[], 0));
    let d = assemble_uct(&z2, &el(&z2, &[1]), &t, &z, &t).unwrap();
    assert!(d.gamma().group().is_trivial());
    assert_eq!(d.k0b_mod_gamma(), &z);
    assert_eq!(d.plain_ext(), &z2);
    assert!(d.pointed_hom().is_trivial());
    assert!(d.ext_us().forced_order().is_none());
    let r = verify_uct(&d, None);
    assert!(r.passed(), "{r}");
}

#[test]
fn naturality_examples() {
    let (z, t) = (g(&[], 1), g(&[], 0));
    let d = assemble_uct(&z, &el(&z, &[1]), &t, &z, &t).unwrap();
    let (id, id0) = (GroupHom::identity(&z), GroupHom::identity(&t));
    let first = Naturality::FirstVariable { source: &d, alpha0: &id, alpha1: &id0 };
    assert!(verify_uct(&d, Some(first)).passed());

    let d = assemble_uct(&z, &el(&z, &[2]), &t, &z, &t).unwrap();
    let double = hom(&z, &z, &[&[2]]);
    let second = Naturality::SecondVariable { target: &d, beta0: &double, beta1: &id0 };
    let r = verify_uct(&d, Some(second));
    assert!(r.passed(), "{r}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn assembled_diagrams_verify(seed in 0u64..10_000) {
        let mut r = rng(seed);
        let groups: Vec<_> = (0..4).map(|_| random_group(&mut r, 24, 1)).collect();
        let u = random_element(&mut r, &groups[0]);
        let d = assemble_uct(&groups[0], &u, &groups[1], &groups[2], &groups[3]).unwrap();
        let report = verify_uct(&d, None);
        prop_assert!(report.passed(), "{}", report);
        let gm = gamma(&groups[0], &u, &groups[2]).unwrap();
        prop_assert!(d.gamma().same_as(&gm));
        if d.pointed_ext().order().is_some() && d.k0b_mod_gamma().order().is_some() {
            let lhs = d.pointed_ext().order().unwrap();
            let rhs = d.k0b_mod_gamma().order().unwrap() * d.plain_ext().order().unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn naturality_in_both_variables(seed in 0u64..10_000) {
        let mut r = rng(seed);
        let (a0, a1) = (random_group(&mut r, 12, 1), random_group(&mut r, 12, 1));
        let (a0s, a1s) = (random_group(&mut r, 12, 1), random_group(&mut r, 12, 1));
        let (b0, b1) = (random_group(&mut r, 12, 1), random_group(&mut r, 12, 1));
        let (b0t, b1t) = (random_group(&mut r, 12, 1), random_group(&mut r, 12, 1));

        let us = random_element(&mut r, &a0s);
        let alpha0 = random_hom(&mut r, &a0s, &a0);
        let alpha1 = random_hom(&mut r, &a1s, &a1);
        let u = alpha0.apply(&us).unwrap();
        let d = assemble_uct(&a0, &u, &a1, &b0, &b1).unwrap();
        let src = assemble_uct(&a0s, &us, &a1s, &b0, &b1).unwrap();
        let first = Naturality::FirstVariable { source: &src, alpha0: &alpha0, alpha1: &alpha1 };
        let report = verify_uct(&d, Some(first));
        prop_assert!(report.passed(), "{}", report);

        let beta0 = random_hom(&mut r, &b0, &b0t);
        let beta1 = random_hom(&mut r, &b1, &b1t);
        let tgt = assemble_uct(&a0, &u, &a1, &b0t, &b1t).unwrap();
        let second = Naturality::SecondVariable { target: &tgt, beta0: &beta0, beta1: &beta1 };
        let report = verify_uct(&d, Some(second));
        prop_assert!(report.passed(), "{}", report);
    }
}
