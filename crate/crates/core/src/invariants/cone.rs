//! Membership in finitely generated cones, scales, and order isomorphisms.

use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::lp::{common_denominator, nonnegative_combination, positive_functional, rational};
use super::{Budget, Decision, OrderedGroup, Scale};
use crate::abgroup::{FgAbGroup, GroupElement};
use crate::error::{Error, Result};
use crate::homalg::{Cokernel, GroupHom, Subgroup};
use crate::matrix::IntMatrix;
use crate::snf::smith_normal_form;

fn combination_map(g: &FgAbGroup, gens: &[GroupElement]) -> Result<GroupHom> {
    GroupHom::from_images(&FgAbGroup::free(gens.len()), g, gens)
}

/// Generators whose negatives also lie in the cone, and a relation with positive
/// coefficients on exactly those generators.
fn grouplike(g: &FgAbGroup, gens: &[GroupElement]) -> Result<(Vec<usize>, Vec<BigInt>)> {
    let m = gens.len();
    let tors = g.torsion_len();
    let free: Vec<Vec<BigInt>> = gens.iter().map(|x| x.coords()[tors..].to_vec()).collect();
    let mut t = Vec::new();
    let mut rel = vec![BigInt::zero(); m];
    for k in 0..m {
        let target: Vec<BigInt> = free[k].iter().map(|x| -x).collect();
        let Some(a) = nonnegative_combination(&free, g.free_rank(), &target) else {
            continue;
        };
        // clear denominators, then kill the torsion left over
        let den = common_denominator(&a);
        let mut v: Vec<BigInt> = a.iter().map(|q| (q * rational(&den)).to_integer()).collect();
        v[k] += &den;
        let mut tau = g.zero();
        for (c, x) in v.iter().zip(gens) {
            tau = tau.try_add(&x.scale(c))?;
        }
        let o = tau.order();
        for (r, c) in rel.iter_mut().zip(&v) {
            *r += &o * c;
        }
        t.push(k);
    }
    Ok((t, rel))
}

/// Shifts `c` by a multiple of the positive relation until it is nonnegative.
fn make_nonnegative(c: &mut [BigInt], rel: &[BigInt]) {
    let mut copies = BigInt::zero();
    for (x, p) in c.iter().zip(rel) {
        if x.is_negative() {
            copies = copies.max((-x).div_ceil(p));
        }
    }
    for (x, p) in c.iter_mut().zip(rel) {
        *x += &copies * p;
    }
}

/// Calls `f` on every `a >= 0` with `Σ a_k w_k = total`, stopping early on `Break`.
fn weighted_compositions(
    weights: &[u64],
    total: u64,
    f: &mut dyn FnMut(&[u64]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    fn go(
        weights: &[u64],
        left: u64,
        acc: &mut Vec<u64>,
        f: &mut dyn FnMut(&[u64]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let k = acc.len();
        if k == weights.len() {
            return if left == 0 { f(acc) } else { ControlFlow::Continue(()) };
        }
        for a in 0..=left / weights[k] {
            acc.push(a);
            let flow = go(weights, left - a * weights[k], acc, f);
            acc.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }
    go(weights, total, &mut Vec::new(), f)
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Decides `x ∈ C`; a `Yes` carries nonnegative coefficients on `og.cone_gens()`.
pub fn cone_contains(
    og: &OrderedGroup,
    x: &GroupElement,
    budget: &Budget,
) -> Result<Decision<Vec<BigInt>>> {
    let g = og.group();
    g.check_member(x)?;
    let gens = og.cone_gens();
    let m = gens.len();
    let lambda = combination_map(g, gens)?;
    let Some(c) = lambda.preimage(x) else {
        return Ok(Decision::No);
    };
    let (t, rel) = grouplike(g, gens)?;
    if t.len() == m {
        let mut c = c.into_coords();
        make_nonnegative(&mut c, &rel);
        return Ok(Decision::Yes(c));
    }
    let rest: Vec<usize> = (0..m).filter(|k| !t.contains(k)).collect();
    let tg: Vec<GroupElement> = t.iter().map(|&i| gens[i].clone()).collect();
    let q = Cokernel::of_subgroup(&Subgroup::generated_by(g, &tg)?);
    let quot = q.group();
    let proj = q.projection();
    let rg: Vec<GroupElement> = rest
        .iter()
        .map(|&k| proj.apply(&gens[k]))
        .collect::<Result<_>>()?;
    let xq = proj.apply(x)?;
    let lam_rest = combination_map(quot, &rg)?;
    let tors = quot.torsion_len();
    let free_cols: Vec<Vec<BigInt>> = rg.iter().map(|y| y.coords()[tors..].to_vec()).collect();

    // turns coefficients on `rest` into a full certificate
    let assemble = |a: &[BigInt]| -> Result<Vec<BigInt>> {
        let mut y = x.clone();
        for (ak, &k) in a.iter().zip(&rest) {
            y = y.try_sub(&gens[k].scale(ak))?;
        }
        let mut ct = combination_map(g, &tg)?
            .preimage(&y)
            .expect("remainder lies in the group-like part")
            .into_coords();
        let rt: Vec<BigInt> = t.iter().map(|&i| rel[i].clone()).collect();
        make_nonnegative(&mut ct, &rt);
        let mut out = vec![BigInt::zero(); m];
        for (v, &i) in ct.into_iter().zip(&t) {
            out[i] = v;
        }
        for (v, &k) in a.iter().zip(&rest) {
            out[k] = v.clone();
        }
        Ok(out)
    };

    let fm = IntMatrix::from_columns(&free_cols, quot.free_rank());
    if smith_normal_form(&fm).rank() == rest.len() {
        // independent free parts: the coefficients are unique
        let a = lam_rest
            .preimage(&xq)
            .expect("x lies in the group generated by the cone");
        return Ok(if a.coords().iter().all(|v| !v.is_negative()) {
            Decision::Yes(assemble(a.coords())?)
        } else {
            Decision::No
        });
    }

    let mut found: Option<Vec<BigInt>> = None;
    let mut failure: Option<Error> = None;
    let mut cut = false;
    let mut probe = |a: &[u64]| -> ControlFlow<()> {
        if !budget.spend() {
            cut = true;
            return ControlFlow::Break(());
        }
        let a: Vec<BigInt> = a.iter().map(|&v| BigInt::from(v)).collect();
        let hit = FgAbGroup::free(a.len())
            .element(a.clone())
            .and_then(|v| lam_rest.apply(&v))
            .map(|y| y == xq);
        match hit {
            Ok(true) => match assemble(&a) {
                Ok(w) => {
                    found = Some(w);
                    ControlFlow::Break(())
                }
                Err(e) => {
                    failure = Some(e);
                    ControlFlow::Break(())
                }
            },
            Ok(false) => ControlFlow::Continue(()),
            Err(e) => {
                failure = Some(e);
                ControlFlow::Break(())
            }
        }
    };

    if let Some(ell) = positive_functional(&free_cols, quot.free_rank()) {
        let level = dot(&ell, &xq.coords()[tors..]);
        if level.is_negative() {
            return Ok(Decision::No);
        }
        let weights: Option<Vec<u64>> = free_cols.iter().map(|c| dot(&ell, c).to_u64()).collect();
        match (weights, level.to_u64()) {
            (Some(w), Some(l)) => {
                let _ = weighted_compositions(&w, l, &mut probe);
            }
            _ => {
                budget.give_up();
                cut = true;
            }
        }
        if let Some(e) = failure {
            return Err(e);
        }
        return Ok(match found {
            Some(w) => Decision::Yes(w),
            None if cut => Decision::Unknown,
            None => Decision::No,
        });
    }

    // the cone contains a line: search by total size until the budget runs out
    let ones = vec![1u64; rest.len()];
    for level in 0u64.. {
        if weighted_compositions(&ones, level, &mut probe).is_break() {
            break;
        }
    }
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(match found {
        Some(w) => Decision::Yes(w),
        None => Decision::Unknown,
    })
}

// Scale reduced to one of two normal forms.
enum NormalScale {
    Full,
    Gens(Vec<GroupElement>),
}

fn cone_is_group(og: &OrderedGroup, budget: &Budget) -> Result<Decision<()>> {
    let mut unknown = false;
    for g in og.cone_gens() {
        match cone_contains(og, &-g, budget)? {
            Decision::No => return Ok(Decision::No),
            Decision::Unknown => unknown = true,
            Decision::Yes(_) => {}
        }
    }
    Ok(if unknown { Decision::Unknown } else { Decision::Yes(()) })
}

fn normal_scale(og: &OrderedGroup, budget: &Budget) -> Result<Decision<NormalScale>> {
    let listed: Vec<GroupElement> = match og.scale() {
        Scale::FullCone => return Ok(Decision::Yes(NormalScale::Full)),
        Scale::IntervalBelow(u) => vec![u.clone()],
        Scale::ExplicitGens(l) => l.clone(),
    };
    // a listed element outside the cone bounds nothing
    let mut kept = Vec::new();
    for s in listed {
        match cone_contains(og, &s, budget)? {
            Decision::Yes(_) => kept.push(s),
            Decision::No => {}
            Decision::Unknown => return Ok(Decision::Unknown),
        }
    }
    if kept.is_empty() {
        return Ok(Decision::Yes(NormalScale::Gens(kept)));
    }
    Ok(match cone_is_group(og, budget)? {
        Decision::Yes(()) => Decision::Yes(NormalScale::Full),
        Decision::No => Decision::Yes(NormalScale::Gens(kept)),
        Decision::Unknown => Decision::Unknown,
    })
}

// every `a` is below some `b`
fn dominated(
    a: &[GroupElement],
    b: &[GroupElement],
    og: &OrderedGroup,
    budget: &Budget,
) -> Result<Decision<()>> {
    let mut unknown = false;
    for x in a {
        let mut status = Decision::No;
        for y in b {
            match cone_contains(og, &y.try_sub(x)?, budget)? {
                Decision::Yes(_) => {
                    status = Decision::Yes(());
                    break;
                }
                Decision::Unknown => status = Decision::Unknown,
                Decision::No => {}
            }
        }
        match status {
            Decision::No => return Ok(Decision::No),
            Decision::Unknown => unknown = true,
            Decision::Yes(()) => {}
        }
    }
    Ok(if unknown { Decision::Unknown } else { Decision::Yes(()) })
}

/// Whether `f` is a group isomorphism carrying cone onto cone, scale onto scale,
/// and `units.0` to `units.1` when given.
pub fn is_order_unit_iso(
    f: &GroupHom,
    og1: &OrderedGroup,
    og2: &OrderedGroup,
    units: Option<(&GroupElement, &GroupElement)>,
    budget: &Budget,
) -> Result<Decision<()>> {
    if f.source() != og1.group() || f.target() != og2.group() {
        return Err(Error::DimensionMismatch(format!(
            "map {} -> {} between orders on {} and {}",
            f.source(),
            f.target(),
            og1.group(),
            og2.group()
        )));
    }
    if !f.is_isomorphism() {
        return Ok(Decision::No);
    }
    if let Some((u1, u2)) = units {
        if &f.apply(u1)? != u2 {
            return Ok(Decision::No);
        }
    }
    let finv = f.inverse()?;
    let mut unknown = false;
    let mut note = |d: Decision<Vec<BigInt>>| -> bool {
        match d {
            Decision::No => false,
            Decision::Unknown => {
                unknown = true;
                true
            }
            Decision::Yes(_) => true,
        }
    };
    for g in og1.cone_gens() {
        if !note(cone_contains(og2, &f.apply(g)?, budget)?) {
            return Ok(Decision::No);
        }
    }
    for h in og2.cone_gens() {
        if !note(cone_contains(og1, &finv.apply(h)?, budget)?) {
            return Ok(Decision::No);
        }
    }
    let (s1, s2) = match (normal_scale(og1, budget)?, normal_scale(og2, budget)?) {
        (Decision::Yes(a), Decision::Yes(b)) => (a, b),
        _ => return Ok(Decision::Unknown),
    };
    let scale = match (s1, s2) {
        (NormalScale::Full, NormalScale::Full) => Decision::Yes(()),
        (NormalScale::Full, NormalScale::Gens(_)) | (NormalScale::Gens(_), NormalScale::Full) => {
            Decision::No
        }
        (NormalScale::Gens(a), NormalScale::Gens(b)) => {
            let fa: Vec<GroupElement> = a.iter().map(|x| f.apply(x)).collect::<Result<_>>()?;
            match dominated(&fa, &b, og2, budget)? {
                Decision::Yes(()) => dominated(&b, &fa, og2, budget)?,
                other => other,
            }
        }
    };
    Ok(match scale {
        Decision::No => Decision::No,
        Decision::Unknown => Decision::Unknown,
        Decision::Yes(()) if unknown => Decision::Unknown,
        Decision::Yes(()) => Decision::Yes(()),
    })
}
