mod common;

use common::*;
use ksix::abgroup::{DirectSum, FgAbGroup};
use ksix::matrix::IntMatrix;
use ksix::snf::{smith_normal_form, solve};
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

fn matrix(rows: &[Vec<i64>], cols: usize) -> IntMatrix {
    let rows: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| big(x)).collect()).collect();
    IntMatrix::from_rows(&rows, cols).unwrap()
}

fn small_matrix() -> impl Strategy<Value = (Vec<Vec<i64>>, usize)> {
    (1usize..6, 1usize..6).prop_flat_map(|(m, n)| {
        (prop::collection::vec(prop::collection::vec(-9i64..=9, n), m), Just(n))
    })
}

#[test]
fn smith_form_examples() {
    let s = smith_normal_form(&IntMatrix::from_i64(&[&[2, 4], &[6, 8]]));
    assert_eq!(s.diagonal(), vec![big(2), big(4)]);
    assert_eq!(s.u.mul(&IntMatrix::from_i64(&[&[2, 4], &[6, 8]])).unwrap().mul(&s.v).unwrap(), s.d);

    let z = IntMatrix::zeros(2, 3);
    let s = smith_normal_form(&z);
    assert!(s.d.is_zero());
    assert_eq!(s.u, IntMatrix::identity(2));
    assert_eq!(s.v, IntMatrix::identity(3));

    let s = smith_normal_form(&IntMatrix::identity(3));
    assert_eq!(s.d, IntMatrix::identity(3));
}

#[test]
fn presentations() {
    let z2 = FgAbGroup::from_presentation(&IntMatrix::from_i64(&[&[2]]), 1).unwrap();
    assert_eq!(factors(&z2), vec![2]);
    let z6 = FgAbGroup::from_presentation(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]]), 2).unwrap();
    assert_eq!(z6, g(&[6], 0));
    // brute force: (1, 1) generates all six elements
    let x = z6.element_from_presentation(&[big(1), big(1)]).unwrap();
    let multiples: std::collections::HashSet<_> = (0..6).map(|k| x.scale(&big(k))).collect();
    assert_eq!(multiples.len(), 6);
    let free = FgAbGroup::from_presentation(&IntMatrix::zeros(0, 2), 2).unwrap();
    assert_eq!(free, g(&[], 2));
}

#[test]
fn arithmetic() {
    let z4 = g(&[4], 0);
    assert_eq!(el(&z4, &[3]).try_add(&el(&z4, &[3])).unwrap(), el(&z4, &[2]));
    let z2 = g(&[], 2);
    assert_eq!(el(&z2, &[1, -1]).scale(&big(2)), el(&z2, &[2, -2]));
    let h = g(&[2, 6], 1);
    let x = el(&h, &[1, 5, -3]);
    assert!(x.try_add(&x.scale(&big(-1))).unwrap().is_zero());
    assert!(el(&z4, &[1]).try_add(&el(&z2, &[0, 0])).is_err());
}

#[test]
fn sums_and_enumeration() {
    let s = DirectSum::new(&[g(&[], 1), g(&[2], 0)]);
    assert_eq!(factors(s.group()), vec![2]);
    assert_eq!(s.group().free_rank(), 1);
    let h = g(&[3, 4], 0);
    let t = DirectSum::new(&[h.clone(), FgAbGroup::trivial()]);
    assert_eq!(t.group(), &h);
    assert!(t.projection(0).compose(&t.inclusion(0)).unwrap().is_identity());
    assert_eq!(factors(DirectSum::new(&[g(&[2], 0), g(&[4], 0)]).group()), vec![2, 4]);
    assert_eq!(g(&[3], 0).enumerate_elements().unwrap().count(), 3);
    assert_eq!(FgAbGroup::trivial().enumerate_elements().unwrap().count(), 1);
    assert_eq!(g(&[2, 2], 0).enumerate_elements().unwrap().count(), 4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_form_certificate((rows, n) in small_matrix()) {
        let a = matrix(&rows, n);
        let s = smith_normal_form(&a);
        prop_assert_eq!(s.u.mul(&a).unwrap().mul(&s.v).unwrap(), s.d.clone());
        prop_assert_eq!(s.u.mul(&s.u_inv).unwrap(), IntMatrix::identity(a.rows()));
        prop_assert_eq!(s.v.mul(&s.v_inv).unwrap(), IntMatrix::identity(a.cols()));
        let d = s.diagonal();
        for w in d.windows(2) {
            prop_assert!(w[0].is_zero() && w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero()));
        }
    }

    #[test]
    fn presentation_invariance((rows, n) in small_matrix(), seed in 0u64..1000) {
        // unimodular changes of relations and generators give the same group
        let a = matrix(&rows, n);
        let g1 = FgAbGroup::from_presentation(&a, n).unwrap();
        let mut r = rng(seed);
        let mut b = a.clone();
        for _ in 0..4 {
            let (i, j) = (rand::Rng::gen_range(&mut r, 0..n), rand::Rng::gen_range(&mut r, 0..n));
            if i != j {
                let mut e = IntMatrix::identity(n);
                e[(i, j)] = big(rand::Rng::gen_range(&mut r, -3..=3));
                b = b.mul(&e).unwrap();
            }
        }
        let g2 = FgAbGroup::from_presentation(&b, n).unwrap();
        prop_assert_eq!(&g1, &g2);
        let extra = b.vstack(&IntMatrix::zeros(1, n)).unwrap();
        prop_assert_eq!(&g1, &FgAbGroup::from_presentation(&extra, n).unwrap());
    }

    #[test]
    fn presentation_coordinates_round_trip((rows, n) in small_matrix(), c in prop::collection::vec(-20i64..=20, 6)) {
        let g = FgAbGroup::from_presentation(&matrix(&rows, n), n).unwrap();
        let v: Vec<BigInt> = c[..n].iter().map(|&x| big(x)).collect();
        let x = g.element_from_presentation(&v).unwrap();
        let back = g.element_from_presentation(&g.presentation_coords(&x)).unwrap();
        prop_assert_eq!(x, back);
    }

    #[test]
    fn solve_returns_solutions((rows, n) in small_matrix(), x in prop::collection::vec(-5i64..=5, 6)) {
        let a = matrix(&rows, n);
        let xv: Vec<BigInt> = x[..n].iter().map(|&v| big(v)).collect();
        let b = a.mul_vec(&xv).unwrap();
        let y = solve(&a, &b).expect("b is in the image");
        prop_assert_eq!(a.mul_vec(&y).unwrap(), b);
    }
}
