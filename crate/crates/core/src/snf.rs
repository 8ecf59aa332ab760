//! Smith normal form with unimodular transforms, and the lattice routines built on it.
//!
//! The elimination runs first in `i64`, then `i128`, with every operation
//! overflow-checked; on overflow it restarts with `BigInt`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::matrix::IntMatrix;

/// `u · m · v = d` with `u`, `v` unimodular and `d` in Smith form.
#[derive(Clone, Debug)]
pub struct Snf {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    rank: usize,
}

trait Scalar: Clone {
    fn nil() -> Self;
    fn unit() -> Self;
    fn is_nil(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn abs_lt(&self, other: &Self) -> bool;
    fn add(&self, other: &Self) -> Option<Self>;
    fn mul(&self, other: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    /// Nearest-integer quotient, so the remainder is at most half the divisor.
    fn div_round(&self, other: &Self) -> Option<Self>;
    fn divides(&self, other: &Self) -> bool;
    fn from_big(x: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

macro_rules! prim_scalar {
    ($t:ty, $conv:ident) => {
        impl Scalar for $t {
            fn nil() -> Self {
                0
            }
            fn unit() -> Self {
                1
            }
            fn is_nil(&self) -> bool {
                *self == 0
            }
            fn is_neg(&self) -> bool {
                *self < 0
            }
            fn abs_lt(&self, other: &Self) -> bool {
                self.unsigned_abs() < other.unsigned_abs()
            }
            fn add(&self, other: &Self) -> Option<Self> {
                self.checked_add(*other)
            }
            fn mul(&self, other: &Self) -> Option<Self> {
                self.checked_mul(*other)
            }
            fn neg(&self) -> Option<Self> {
                self.checked_neg()
            }
            fn div_round(&self, other: &Self) -> Option<Self> {
                let q = self.checked_div(*other)?;
                let r = self.checked_rem(*other)?;
                let (ra, ba) = (r.unsigned_abs(), other.unsigned_abs());
                if ra > ba - ra {
                    if (r < 0) == (*other < 0) {
                        q.checked_add(1)
                    } else {
                        q.checked_sub(1)
                    }
                } else {
                    Some(q)
                }
            }
            fn divides(&self, other: &Self) -> bool {
                if *self == 0 {
                    *other == 0
                } else {
                    other.checked_rem(*self).map_or(false, |r| r == 0)
                }
            }
            fn from_big(x: &BigInt) -> Option<Self> {
                x.$conv()
            }
            fn to_big(&self) -> BigInt {
                BigInt::from(*self)
            }
        }
    };
}

prim_scalar!(i64, to_i64);
prim_scalar!(i128, to_i128);

impl Scalar for BigInt {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.magnitude() < other.magnitude()
    }
    fn add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn div_round(&self, other: &Self) -> Option<Self> {
        let q = self / other;
        let r = self - &q * other;
        let (ra, ba) = (r.magnitude().clone(), other.magnitude().clone());
        if &ra + &ra > ba {
            if r.is_negative() == other.is_negative() {
                Some(q + 1)
            } else {
                Some(q - 1)
            }
        } else {
            Some(q)
        }
    }
    fn divides(&self, other: &Self) -> bool {
        if Zero::is_zero(self) {
            Zero::is_zero(other)
        } else {
            Zero::is_zero(&(other % self))
        }
    }
    fn from_big(x: &BigInt) -> Option<Self> {
        Some(x.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

struct Work<T> {
    m: usize,
    n: usize,
    a: Vec<Vec<T>>,
    u: Vec<Vec<T>>,
    ui: Vec<Vec<T>>,
    v: Vec<Vec<T>>,
    vi: Vec<Vec<T>>,
}

fn identity<T: Scalar>(n: usize) -> Vec<Vec<T>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::unit() } else { T::nil() }).collect())
        .collect()
}

// row_i += c * row_j
fn row_axpy<T: Scalar>(mat: &mut [Vec<T>], i: usize, j: usize, c: &T) -> Option<()> {
    let (ri, rj) = if i < j {
        let (lo, hi) = mat.split_at_mut(j);
        (&mut lo[i], &hi[0])
    } else {
        let (lo, hi) = mat.split_at_mut(i);
        (&mut hi[0], &lo[j])
    };
    for (x, y) in ri.iter_mut().zip(rj.iter()) {
        if !y.is_nil() {
            *x = x.add(&y.mul(c)?)?;
        }
    }
    Some(())
}

// col_i += c * col_j
fn col_axpy<T: Scalar>(mat: &mut [Vec<T>], i: usize, j: usize, c: &T) -> Option<()> {
    for row in mat.iter_mut() {
        if !row[j].is_nil() {
            let t = row[j].mul(c)?;
            row[i] = row[i].add(&t)?;
        }
    }
    Some(())
}

impl<T: Scalar> Work<T> {
    fn new(src: &IntMatrix) -> Option<Self> {
        let (m, n) = (src.rows(), src.cols());
        let mut a = Vec::with_capacity(m);
        for i in 0..m {
            let row: Option<Vec<T>> = src.row(i).iter().map(T::from_big).collect();
            a.push(row?);
        }
        Some(Work {
            m,
            n,
            a,
            u: identity(m),
            ui: identity(m),
            v: identity(n),
            vi: identity(n),
        })
    }

    fn row_add(&mut self, i: usize, j: usize, c: &T) -> Option<()> {
        row_axpy(&mut self.a, i, j, c)?;
        row_axpy(&mut self.u, i, j, c)?;
        col_axpy(&mut self.ui, j, i, &c.neg()?)
    }

    fn col_add(&mut self, i: usize, j: usize, c: &T) -> Option<()> {
        col_axpy(&mut self.a, i, j, c)?;
        col_axpy(&mut self.v, i, j, c)?;
        row_axpy(&mut self.vi, j, i, &c.neg()?)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        self.u.swap(i, j);
        for row in self.ui.iter_mut() {
            row.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        for row in self.v.iter_mut() {
            row.swap(i, j);
        }
        self.vi.swap(i, j);
    }

    fn negate_row(&mut self, i: usize) -> Option<()> {
        for x in self.a[i].iter_mut() {
            *x = x.neg()?;
        }
        for x in self.u[i].iter_mut() {
            *x = x.neg()?;
        }
        for row in self.ui.iter_mut() {
            row[i] = row[i].neg()?;
        }
        Some(())
    }

    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.m {
            for j in t..self.n {
                let x = &self.a[i][j];
                if x.is_nil() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if !x.abs_lt(&self.a[bi][bj]) => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }

    fn run(&mut self) -> Option<usize> {
        let mut t = 0;
        while t < self.m.min(self.n) {
            let Some((pi, pj)) = self.min_entry(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let p = self.a[t][t].clone();
                let mut clean = true;
                for i in t + 1..self.m {
                    if !self.a[i][t].is_nil() {
                        let q = self.a[i][t].div_round(&p)?;
                        self.row_add(i, t, &q.neg()?)?;
                        clean &= self.a[i][t].is_nil();
                    }
                }
                for j in t + 1..self.n {
                    if !self.a[t][j].is_nil() {
                        let q = self.a[t][j].div_round(&p)?;
                        self.col_add(j, t, &q.neg()?)?;
                        clean &= self.a[t][j].is_nil();
                    }
                }
                if !clean {
                    // a remainder smaller than the pivot survives: make it the new pivot
                    let mut best = (t, t);
                    for i in t + 1..self.m {
                        if !self.a[i][t].is_nil() && self.a[i][t].abs_lt(&self.a[best.0][best.1]) {
                            best = (i, t);
                        }
                    }
                    for j in t + 1..self.n {
                        if !self.a[t][j].is_nil() && self.a[t][j].abs_lt(&self.a[best.0][best.1]) {
                            best = (t, j);
                        }
                    }
                    self.swap_rows(t, best.0);
                    self.swap_cols(t, best.1);
                    continue;
                }
                let bad = (t + 1..self.m).find(|&i| {
                    (t + 1..self.n).any(|j| !p.divides(&self.a[i][j]))
                });
                match bad {
                    Some(i) => self.row_add(t, i, &T::unit())?,
                    None => break,
                }
            }
            if self.a[t][t].is_neg() {
                self.negate_row(t)?;
            }
            t += 1;
        }
        Some(t)
    }
}

fn to_matrix<T: Scalar>(rows: &[Vec<T>], ncols: usize) -> IntMatrix {
    let data: Vec<BigInt> = rows.iter().flat_map(|r| r.iter().map(T::to_big)).collect();
    IntMatrix::from_vec(rows.len(), ncols, data).expect("shape is consistent")
}

fn attempt<T: Scalar>(m: &IntMatrix) -> Option<Snf> {
    let mut w: Work<T> = Work::new(m)?;
    let rank = w.run()?;
    Some(Snf {
        d: to_matrix(&w.a, w.n),
        u: to_matrix(&w.u, w.m),
        v: to_matrix(&w.v, w.n),
        u_inv: to_matrix(&w.ui, w.m),
        v_inv: to_matrix(&w.vi, w.n),
        rank,
    })
}

/// Smith normal form of `m`: returns `d, u, v` (and inverses) with `u·m·v = d`.
pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    attempt::<i64>(m)
        .or_else(|| attempt::<i128>(m))
        .or_else(|| attempt::<BigInt>(m))
        .expect("big-integer elimination cannot overflow")
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Nonzero diagonal entries `d_1 | d_2 | ... | d_rank`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// An integer solution of `m·x = b`, if one exists. Free variables are set to zero.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let y = self.u.mul_vec(b).ok()?;
        let n = self.v.rows();
        let mut z = vec![BigInt::zero(); n];
        for (i, yi) in y.iter().enumerate() {
            if i < self.rank {
                let d = &self.d[(i, i)];
                if !(yi % d).is_zero() {
                    return None;
                }
                z[i] = yi / d;
            } else if !yi.is_zero() {
                return None;
            }
        }
        self.v.mul_vec(&z).ok()
    }

    /// Basis of the integer kernel `{x : m·x = 0}` as columns.
    pub fn kernel_basis(&self) -> IntMatrix {
        self.v.col_range(self.rank, self.v.cols())
    }

    /// Basis of the column lattice of `m` as columns.
    pub fn image_basis(&self) -> IntMatrix {
        let mut out = self.u_inv.col_range(0, self.rank);
        for j in 0..self.rank {
            let d = self.d[(j, j)].clone();
            for i in 0..out.rows() {
                let x = &out[(i, j)] * &d;
                out[(i, j)] = x;
            }
        }
        out
    }
}

/// Integer solution of `m·x = b`, if any.
pub fn solve(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    if b.len() != m.rows() {
        return None;
    }
    smith_normal_form(m).solve(b)
}

/// Solution `x` of `m·x ≡ b` modulo the column lattice of `rels`.
pub fn solve_modulo(m: &IntMatrix, rels: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let full = m.hstack(rels).ok()?;
    let x = solve(&full, b)?;
    Some(x[..m.cols()].to_vec())
}

/// Basis of the column lattice spanned by `gens`.
pub fn lattice_basis(gens: &IntMatrix) -> IntMatrix {
    if gens.cols() == 0 {
        return IntMatrix::zeros(gens.rows(), 0);
    }
    smith_normal_form(gens).image_basis()
}

/// Basis of `{x : m·x ∈ colspan(rels)}`.
pub fn kernel_modulo(m: &IntMatrix, rels: &IntMatrix) -> IntMatrix {
    let full = m.hstack(rels).expect("row counts agree");
    let kernel = smith_normal_form(&full).kernel_basis();
    let projected = kernel.row_range(0, m.cols());
    lattice_basis(&projected)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> Snf {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).unwrap().mul(&s.v).unwrap(), s.d);
        assert!(s.d.is_smith_form(), "{}", s.d);
        assert_eq!(s.u.mul(&s.u_inv).unwrap(), IntMatrix::identity(m.rows()));
        assert_eq!(s.v.mul(&s.v_inv).unwrap(), IntMatrix::identity(m.cols()));
        s
    }

    #[test]
    fn two_by_two() {
        let s = check(&IntMatrix::from_i64(&[&[2, 4], &[6, 8]]));
        assert_eq!(s.d, IntMatrix::from_i64(&[&[2, 0], &[0, 4]]));
    }

    #[test]
    fn zero_and_identity() {
        let s = check(&IntMatrix::zeros(2, 3));
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(3));
        assert_eq!(s.rank(), 0);
        let s = check(&IntMatrix::identity(3));
        assert_eq!(s.d, IntMatrix::identity(3));
    }

    #[test]
    fn falls_back_to_big_integers() {
        let huge: BigInt = BigInt::from(i128::MAX) * 7;
        let m = IntMatrix::from_rows(
            &[
                vec![huge.clone(), BigInt::from(3)],
                vec![BigInt::from(5), &huge + 1],
            ],
            2,
        )
        .unwrap();
        check(&m);
    }

    #[test]
    fn rectangular_and_sign() {
        check(&IntMatrix::from_i64(&[&[-3, 0, 6], &[0, 0, 0]]));
        let s = check(&IntMatrix::from_i64(&[&[-5]]));
        assert_eq!(s.d, IntMatrix::from_i64(&[&[5]]));
    }

    #[test]
    fn lattice_helpers() {
        let m = IntMatrix::from_i64(&[&[2, 4], &[1, 2]]);
        let x = solve(&m, &[BigInt::from(6), BigInt::from(3)]).unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), vec![BigInt::from(6), BigInt::from(3)]);
        assert!(solve(&m, &[BigInt::from(1), BigInt::from(0)]).is_none());
        let k = kernel_modulo(&IntMatrix::from_i64(&[&[2]]), &IntMatrix::from_i64(&[&[4]]));
        assert_eq!(k.cols(), 1);
        assert_eq!(k[(0, 0)].abs(), BigInt::from(2));
    }
}
