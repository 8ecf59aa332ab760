#![allow(dead_code)]

use ksix::abgroup::{FgAbGroup, GroupElement};
use ksix::homalg::{ExtGroup, GroupHom, PointedExtGroup};
use ksix::sixterm::SixTermSequence;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn g(orders: &[i64], free: usize) -> FgAbGroup {
    FgAbGroup::from_orders_i64(orders, free)
}

pub fn el(g: &FgAbGroup, c: &[i64]) -> GroupElement {
    g.element_i64(c).unwrap()
}

pub fn hom(s: &FgAbGroup, t: &FgAbGroup, images: &[&[i64]]) -> GroupHom {
    let ims: Vec<GroupElement> = images.iter().map(|c| el(t, c)).collect();
    GroupHom::from_images(s, t, &ims).unwrap()
}

pub fn factors(g: &FgAbGroup) -> Vec<i64> {
    g.invariant_factors().iter().map(|d| d.to_i64().unwrap()).collect()
}

pub fn order(g: &FgAbGroup) -> i64 {
    g.order().unwrap().to_i64().unwrap()
}

/// A group with finite part of order at most `max_torsion` and free rank at most `max_free`.
pub fn random_group(r: &mut TestRng, max_torsion: i64, max_free: usize) -> FgAbGroup {
    let mut orders = Vec::new();
    let mut n = 1;
    for _ in 0..r.gen_range(0..=2) {
        let cap = max_torsion / n;
        if cap < 2 {
            break;
        }
        let d = r.gen_range(2..=cap.min(12));
        orders.push(d);
        n *= d;
    }
    g(&orders, r.gen_range(0..=max_free))
}

pub fn random_finite_group(r: &mut TestRng, max_order: i64) -> FgAbGroup {
    random_group(r, max_order, 0)
}

pub fn random_element(r: &mut TestRng, g: &FgAbGroup) -> GroupElement {
    let c: Vec<i64> = (0..g.ngens())
        .map(|i| {
            let d = g.gen_order(i).to_i64().unwrap();
            if d == 0 {
                r.gen_range(-2..=2)
            } else {
                r.gen_range(0..d)
            }
        })
        .collect();
    el(g, &c)
}

/// A random homomorphism, images of torsion generators drawn from the right torsion subgroup.
pub fn random_hom(r: &mut TestRng, s: &FgAbGroup, t: &FgAbGroup) -> GroupHom {
    let tf = factors(t);
    let images: Vec<GroupElement> = (0..s.ngens())
        .map(|i| {
            let d = s.gen_order(i).to_i64().unwrap();
            if d == 0 {
                return random_element(r, t);
            }
            let mut c = vec![0i64; t.ngens()];
            for (j, &e) in tf.iter().enumerate() {
                c[j] = (e / e.gcd(&d)) * r.gen_range(0..e);
            }
            el(t, &c)
        })
        .collect();
    GroupHom::from_images(s, t, &images).unwrap()
}

/// A random six-term sequence with units, built from random boundary maps and random
/// (pointed) extension classes.
pub fn random_six_term(r: &mut TestRng, max_torsion: i64, max_free: usize) -> SixTermSequence {
    let k0a = random_group(r, max_torsion, max_free);
    let k1a = random_group(r, max_torsion, max_free);
    let k0b = random_group(r, max_torsion, max_free);
    let k1b = random_group(r, max_torsion, max_free);
    let delta0 = if r.gen_bool(0.3) {
        GroupHom::zero(&k0a, &k1b)
    } else {
        random_hom(r, &k0a, &k1b)
    };
    let delta1 = if r.gen_bool(0.3) {
        GroupHom::zero(&k1a, &k0b)
    } else {
        random_hom(r, &k1a, &k0b)
    };
    six_term_over(r, &delta0, &delta1)
}

pub fn six_term_over(r: &mut TestRng, delta0: &GroupHom, delta1: &GroupHom) -> SixTermSequence {
    let (k0, c1) = (delta0.kernel(), delta1.cokernel());
    let (k1, c0) = (delta1.kernel(), delta0.cokernel());
    let unit = random_element(r, k0.group());
    let pext = PointedExtGroup::new(k0.group(), &unit, c1.group()).unwrap();
    let x0 = random_element(r, pext.group());
    let e0 = pext.realize(&x0).unwrap();
    let ext = ExtGroup::new(k1.group(), c0.group());
    let x1 = random_element(r, ext.group());
    let e1 = ext.realize(&x1).unwrap();
    SixTermSequence::from_extensions(delta0, delta1, &e0, &e1).unwrap()
}

/// Every abelian group of order `n`, one per invariant factor chain.
pub fn groups_of_order(n: i64) -> Vec<FgAbGroup> {
    fn chains(n: i64, min: i64, acc: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if n == 1 {
            out.push(acc.clone());
            return;
        }
        for d in min.max(2)..=n {
            if n % d == 0 && acc.last().map_or(true, |&p| d % p == 0) {
                acc.push(d);
                chains(n / d, d, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    chains(n, 2, &mut Vec::new(), &mut out);
    out.into_iter().map(|c| g(&c, 0)).collect()
}

/// Elements of `⊕ Z/d_i` as coordinate vectors, first coordinate slowest.
pub fn tuples(orders: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &d in orders {
        let mut next = Vec::with_capacity(out.len() * d as usize);
        for t in &out {
            for a in 0..d {
                let mut v = t.clone();
                v.push(a);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

pub fn reduce(v: &mut [i64], orders: &[i64]) {
    for (x, &d) in v.iter_mut().zip(orders) {
        *x = x.rem_euclid(d);
    }
}

/// Brute-force `|Hom(H, K)|` for finite `H`, `K`: all assignments of generator images that
/// respect the relations.
pub fn brute_hom_count(h: &[i64], k: &[i64]) -> usize {
    let elems = tuples(k);
    let mut count = 0;
    let mut idx = vec![0usize; h.len()];
    loop {
        let ok = idx.iter().zip(h).all(|(&i, &d)| {
            elems[i].iter().zip(k).all(|(&c, &e)| (c * d) % e == 0)
        });
        if ok {
            count += 1;
        }
        let mut p = h.len();
        loop {
            if p == 0 {
                return count;
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < elems.len() {
                break;
            }
            idx[p] = 0;
        }
    }
}

/// All homomorphisms `H -> K` as lists of generator images.
pub fn brute_homs(h: &[i64], k: &[i64]) -> Vec<Vec<Vec<i64>>> {
    let elems = tuples(k);
    let mut out = Vec::new();
    let choices: Vec<Vec<&Vec<i64>>> = h
        .iter()
        .map(|&d| {
            elems
                .iter()
                .filter(|y| y.iter().zip(k).all(|(&c, &e)| (c * d) % e == 0))
                .collect()
        })
        .collect();
    let mut idx = vec![0usize; h.len()];
    if choices.iter().any(|c| c.is_empty()) {
        return out;
    }
    loop {
        out.push(idx.iter().zip(&choices).map(|(&i, c)| c[i].clone()).collect());
        let mut p = h.len();
        loop {
            if p == 0 {
                return out;
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < choices[p].len() {
                break;
            }
            idx[p] = 0;
        }
    }
}

/// Brute-force `|Ext(H, K)|`: an abelian extension of `⊕ Z/d_i` by `K` is realized by the
/// values `d_i · (lift of generator i) ∈ K`; two realizations are congruent exactly when they
/// differ by `(d_i c_i)` for some change of lifts `c ∈ K^t`. Counts classes by enumeration.
pub fn brute_ext_count(h: &[i64], k: &[i64]) -> usize {
    use std::collections::HashSet;
    let elems = tuples(k);
    let mut moves: HashSet<Vec<Vec<i64>>> = HashSet::new();
    let mut idx = vec![0usize; h.len()];
    loop {
        let m: Vec<Vec<i64>> = idx
            .iter()
            .zip(h)
            .map(|(&i, &d)| {
                let mut v: Vec<i64> = elems[i].iter().map(|c| c * d).collect();
                reduce(&mut v, k);
                v
            })
            .collect();
        moves.insert(m);
        let mut p = h.len();
        let done = loop {
            if p == 0 {
                break true;
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < elems.len() {
                break false;
            }
            idx[p] = 0;
        };
        if done {
            break;
        }
    }
    let realizations = elems.len().pow(h.len() as u32);
    realizations / moves.len()
}

/// Applies a hom given by generator images (canonical coordinates) to coordinates.
pub fn apply_images(images: &[Vec<i64>], x: &[i64], k: &[i64]) -> Vec<i64> {
    let mut y = vec![0i64; k.len()];
    for (img, &c) in images.iter().zip(x) {
        for (t, v) in y.iter_mut().zip(img) {
            *t += c * v;
        }
    }
    reduce(&mut y, k);
    y
}

pub fn coords_i64(x: &GroupElement) -> Vec<i64> {
    x.coords().iter().map(|c| c.to_i64().unwrap()).collect()
}

pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}
