//! Deterministic enumerations: group elements by radius and automorphism candidates.

use std::rc::Rc;

use num_bigint::BigInt;

use super::Budget;
use crate::abgroup::{FgAbGroup, GroupElement};
use crate::homalg::GroupHom;
use crate::matrix::IntMatrix;

/// All index tuples below `sizes`, last position fastest.
fn odometer(sizes: Vec<usize>) -> impl Iterator<Item = Vec<usize>> {
    let mut next = if sizes.iter().any(|&s| s == 0) {
        None
    } else {
        Some(vec![0; sizes.len()])
    };
    std::iter::from_fn(move || {
        let cur = next.take()?;
        let mut n = cur.clone();
        let mut k = sizes.len();
        while k > 0 {
            k -= 1;
            n[k] += 1;
            if n[k] < sizes[k] {
                next = Some(n);
                break;
            }
            n[k] = 0;
        }
        Some(cur)
    })
}

/// Integer vectors of length `n` with largest absolute entry exactly `radius`.
fn shell(n: usize, radius: i64) -> impl Iterator<Item = Vec<i64>> {
    let width = (2 * radius + 1) as usize;
    odometer(vec![width; n])
        .map(move |ix| ix.iter().map(|&i| i as i64 - radius).collect::<Vec<i64>>())
        .filter(move |v| v.iter().map(|x| x.abs()).max().unwrap_or(0) == radius)
}

fn det(mut m: Vec<Vec<i128>>) -> i128 {
    // Bareiss elimination
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    if n == 0 {
        1
    } else {
        sign * m[n - 1][n - 1]
    }
}

/// `GL_r(Z)` in shells of growing entry size; finite only for `r <= 1`.
fn general_linear(r: usize) -> Box<dyn Iterator<Item = Vec<Vec<i64>>>> {
    match r {
        0 => Box::new(std::iter::once(Vec::new())),
        1 => Box::new([vec![vec![1]], vec![vec![-1]]].into_iter()),
        _ => Box::new((1i64..).flat_map(move |radius| {
            shell(r * r, radius).filter_map(move |v| {
                let m: Vec<Vec<i64>> = v.chunks(r).map(|c| c.to_vec()).collect();
                let wide = m
                    .iter()
                    .map(|row| row.iter().map(|&x| x as i128).collect())
                    .collect();
                (det(wide).abs() == 1).then_some(m)
            })
        })),
    }
}

fn torsion_order(coords: &[BigInt], factors: &[BigInt]) -> BigInt {
    use num_integer::Integer;
    let mut n = BigInt::from(1);
    for (c, d) in coords.iter().zip(factors) {
        n = n.lcm(&(d / c.gcd(d)));
    }
    n
}

/// Elements of `g` by growing radius of the free coordinates, torsion innermost.
/// The iterator is finite exactly when `g` is.
pub fn elements_by_radius(g: &FgAbGroup) -> Box<dyn Iterator<Item = GroupElement>> {
    let torsion = FgAbGroup::from_orders(g.invariant_factors(), 0).expect("valid orders");
    let tors: Rc<Vec<Vec<BigInt>>> = Rc::new(
        torsion
            .enumerate_elements()
            .expect("finite")
            .map(|x| x.into_coords())
            .collect(),
    );
    let r = g.free_rank();
    let g = g.clone();
    let radii: Box<dyn Iterator<Item = i64>> = if r == 0 {
        Box::new(std::iter::once(0))
    } else {
        Box::new(0i64..)
    };
    Box::new(radii.flat_map(move |radius| {
        let tors = tors.clone();
        let g = g.clone();
        shell(r, radius).flat_map(move |free| {
            let g = g.clone();
            let tors = tors.clone();
            (0..tors.len()).map(move |i| {
                let mut c = tors[i].clone();
                c.extend(free.iter().map(|&x| BigInt::from(x)));
                g.element(c).expect("coordinate count matches")
            })
        })
    }))
}

/// Isomorphisms `g1 -> g2`, identity first when the groups coincide.
///
/// One unit of `budget` is spent per raw candidate matrix; the enumeration is complete
/// when the free rank is at most one.
pub fn isomorphisms<'a>(
    g1: &FgAbGroup,
    g2: &FgAbGroup,
    budget: &'a Budget,
) -> Box<dyn Iterator<Item = GroupHom> + 'a> {
    if g1 != g2 {
        return Box::new(std::iter::empty());
    }
    let g = g1.clone();
    let (t, r, n) = (g.torsion_len(), g.free_rank(), g.ngens());
    let factors: Rc<Vec<BigInt>> = Rc::new(g.invariant_factors().to_vec());
    let torsion = FgAbGroup::from_orders(&factors, 0).expect("valid orders");
    let tors: Rc<Vec<Vec<BigInt>>> = Rc::new(
        torsion
            .enumerate_elements()
            .expect("finite")
            .map(|x| x.into_coords())
            .collect(),
    );
    // a torsion generator must go to an element of the same order
    let choices: Rc<Vec<Vec<usize>>> = Rc::new(
        factors
            .iter()
            .map(|d| {
                (0..tors.len())
                    .filter(|&i| &torsion_order(&tors[i], &factors) == d)
                    .collect()
            })
            .collect(),
    );
    let identity = IntMatrix::identity(n);
    let build = {
        let tors = tors.clone();
        let choices = choices.clone();
        move |f: &[Vec<i64>], ti: &[usize], xi: &[usize]| {
            let mut m = IntMatrix::zeros(n, n);
            for (i, &c) in ti.iter().enumerate() {
                for (row, v) in tors[choices[i][c]].iter().enumerate() {
                    m[(row, i)] = v.clone();
                }
            }
            for j in 0..r {
                for (row, v) in tors[xi[j]].iter().enumerate() {
                    m[(row, t + j)] = v.clone();
                }
                for (row, frow) in f.iter().enumerate() {
                    m[(t + row, t + j)] = BigInt::from(frow[j]);
                }
            }
            m
        }
    };
    let tsizes: Vec<usize> = choices.iter().map(|c| c.len()).collect();
    let ntors = tors.len();
    let raw = general_linear(r).flat_map(move |f| {
        let build = build.clone();
        let f = Rc::new(f);
        odometer(tsizes.clone()).flat_map(move |ti| {
            let build = build.clone();
            let f = f.clone();
            odometer(vec![ntors; r]).map(move |xi| build(&f, &ti, &xi))
        })
    });
    let id = identity.clone();
    let src = g.clone();
    Box::new(
        std::iter::once(identity)
            .chain(raw.filter(move |m| *m != id))
            .take_while(move |_| budget.spend())
            .filter_map(move |m| {
                GroupHom::new(&src, &src, m)
                    .ok()
                    .filter(|h| h.is_isomorphism())
            }),
    )
}
