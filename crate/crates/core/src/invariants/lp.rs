//! Exact phase-one simplex over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Some `x >= 0` with `a·x = b`, or `None` if there is none. Uses Bland's rule.
pub(crate) fn feasible_point(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let width = n + m + 1;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut row = vec![BigRational::zero(); width];
        for j in 0..n {
            row[j] = if flip { -&a[i][j] } else { a[i][j].clone() };
        }
        row[n + i] = BigRational::one();
        row[width - 1] = if flip { -&b[i] } else { b[i].clone() };
        t.push(row);
    }
    // objective: minimize the sum of artificials, written as reduced costs
    let mut obj = vec![BigRational::zero(); width];
    for row in &t {
        for j in 0..n {
            obj[j] -= &row[j];
        }
        obj[width - 1] -= &row[width - 1];
    }
    t.push(obj);
    let mut basis: Vec<usize> = (n..n + m).collect();
    loop {
        let Some(enter) = (0..width - 1).find(|&j| t[m][j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (r, _) = leave?;
        let p = t[r][enter].clone();
        for v in t[r].iter_mut() {
            *v /= &p;
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        basis[r] = enter;
    }
    if !t[m][width - 1].is_zero() {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &j) in basis.iter().enumerate() {
        if j < n {
            x[j] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

/// Least common multiple of the denominators.
pub(crate) fn common_denominator(v: &[BigRational]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub(crate) fn rational(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// An integer functional at least one on every column, if the columns span a pointed cone.
pub(crate) fn positive_functional(cols: &[Vec<BigInt>], dim: usize) -> Option<Vec<BigInt>> {
    // ℓ = u - v with u, v >= 0 and slacks: (u - v)·f_j - s_j = 1
    let k = cols.len();
    if k == 0 {
        return Some(vec![BigInt::zero(); dim]);
    }
    let mut a = Vec::with_capacity(k);
    for (j, f) in cols.iter().enumerate() {
        let mut row = vec![BigRational::zero(); 2 * dim + k];
        for d in 0..dim {
            row[d] = rational(&f[d]);
            row[dim + d] = -rational(&f[d]);
        }
        row[2 * dim + j] = -BigRational::one();
        a.push(row);
    }
    let b = vec![BigRational::one(); k];
    let x = feasible_point(&a, &b)?;
    let ell: Vec<BigRational> = (0..dim).map(|d| &x[d] - &x[dim + d]).collect();
    let den = common_denominator(&ell);
    Some(ell.iter().map(|q| (q * rational(&den)).to_integer()).collect())
}

/// Nonnegative `a` with `Σ a_j cols_j = target`, if any.
pub(crate) fn nonnegative_combination(
    cols: &[Vec<BigInt>],
    dim: usize,
    target: &[BigInt],
) -> Option<Vec<BigRational>> {
    let a: Vec<Vec<BigRational>> = (0..dim)
        .map(|d| cols.iter().map(|c| rational(&c[d])).collect())
        .collect();
    let b: Vec<BigRational> = target.iter().map(rational).collect();
    if dim == 0 {
        return Some(vec![BigRational::zero(); cols.len()]);
    }
    feasible_point(&a, &b)
}
