//! Isomorphism search for unital invariants and their D-row refinement.

use std::ops::ControlFlow;

use super::{
    elements_by_radius, is_order_unit_iso, isomorphisms, transport, Budget, Decision,
    KTildeInvariant, UnitalKSixInvariant,
};
use crate::error::Result;
use crate::homalg::{solve_hom_constraints, GroupHom, HomConstraint, HomGroup};

/// End maps `φ` on the `A`-groups, `ψ` on the `B`-groups, and middle maps `ρ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoWitness {
    pub phi0: GroupHom,
    pub phi1: GroupHom,
    pub psi0: GroupHom,
    pub psi1: GroupHom,
    pub rho0: GroupHom,
    pub rho1: GroupHom,
}

impl IsoWitness {
    pub fn inverse(&self) -> Result<IsoWitness> {
        Ok(IsoWitness {
            phi0: self.phi0.inverse()?,
            phi1: self.phi1.inverse()?,
            psi0: self.psi0.inverse()?,
            psi1: self.psi1.inverse()?,
            rho0: self.rho0.inverse()?,
            rho1: self.rho1.inverse()?,
        })
    }

    /// Checks every square, the units and the orders directly.
    pub fn verify(
        &self,
        i1: &UnitalKSixInvariant,
        i2: &UnitalKSixInvariant,
        budget: &Budget,
    ) -> Result<Decision<()>> {
        let (s1, s2) = (i1.seq(), i2.seq());
        let maps = [
            &self.psi0, &self.rho0, &self.phi0, &self.psi1, &self.rho1, &self.phi1,
        ];
        let from = s1.groups();
        let to = s2.groups();
        for k in 0..6 {
            if maps[k].source() != from[k] || maps[k].target() != to[k] || !maps[k].is_isomorphism()
            {
                return Ok(Decision::No);
            }
        }
        let m1 = s1.maps();
        let m2 = s2.maps();
        for k in 0..6 {
            // maps[k] at the source of m[k], maps[k+1] at its target
            let lhs = maps[(k + 1) % 6].compose(m1[k])?;
            let rhs = m2[k].compose(maps[k])?;
            if lhs != rhs {
                return Ok(Decision::No);
            }
        }
        if &self.rho0.apply(i1.unit_e())? != i2.unit_e() {
            return Ok(Decision::No);
        }
        let mut unknown = false;
        for (f, o1, o2) in [
            (&self.psi0, i1.order_b(), i2.order_b()),
            (&self.rho0, i1.order_e(), i2.order_e()),
            (&self.phi0, i1.order_a(), i2.order_a()),
        ] {
            match is_order_unit_iso(f, o1, o2, None, budget)? {
                Decision::No => return Ok(Decision::No),
                Decision::Unknown => unknown = true,
                Decision::Yes(()) => {}
            }
        }
        Ok(if unknown { Decision::Unknown } else { Decision::Yes(()) })
    }
}

/// An isomorphism of unital invariants together with the map on the D-groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TildeWitness {
    pub base: IsoWitness,
    pub theta0: GroupHom,
}

fn accept(d: Decision<()>, budget: &Budget) -> bool {
    match d {
        Decision::Yes(()) => true,
        Decision::No => false,
        Decision::Unknown => {
            budget.give_up();
            false
        }
    }
}

/// Walks all base isomorphisms in a fixed order, calling `visit` on each.
fn search_base(
    i1: &UnitalKSixInvariant,
    i2: &UnitalKSixInvariant,
    budget: &Budget,
    visit: &mut dyn FnMut(IsoWitness) -> Result<ControlFlow<()>>,
) -> Result<ControlFlow<()>> {
    let (s1, s2) = (i1.seq(), i2.seq());
    if s1.k0e() != s2.k0e() || s1.k1e() != s2.k1e() {
        return Ok(ControlFlow::Continue(()));
    }
    for phi0 in isomorphisms(s1.k0a(), s2.k0a(), budget) {
        let units = Some((i1.unit_a(), i2.unit_a()));
        if !accept(
            is_order_unit_iso(&phi0, i1.order_a(), i2.order_a(), units, budget)?,
            budget,
        ) {
            continue;
        }
        let d0 = s2.delta0().compose(&phi0)?;
        for psi1 in isomorphisms(s1.k1b(), s2.k1b(), budget) {
            if psi1.compose(s1.delta0())? != d0 {
                continue;
            }
            for phi1 in isomorphisms(s1.k1a(), s2.k1a(), budget) {
                let d1 = s2.delta1().compose(&phi1)?;
                for psi0 in isomorphisms(s1.k0b(), s2.k0b(), budget) {
                    if psi0.compose(s1.delta1())? != d1 {
                        continue;
                    }
                    if !accept(
                        is_order_unit_iso(&psi0, i1.order_b(), i2.order_b(), None, budget)?,
                        budget,
                    ) {
                        continue;
                    }
                    let moved = transport(s1, (&phi0, &phi1), (&psi0, &psi1))?;
                    let Some((rho0s, rho1s)) = moved.congruence_solutions(s2)? else {
                        continue;
                    };
                    let rho1 = rho1s.particular_map();
                    for k in elements_by_radius(rho0s.kernel.group()) {
                        if !budget.spend() {
                            break;
                        }
                        let rho0 = rho0s.solution_at(&k)?;
                        if !accept(
                            is_order_unit_iso(&rho0, i1.order_e(), i2.order_e(), None, budget)?,
                            budget,
                        ) {
                            continue;
                        }
                        let w = IsoWitness {
                            phi0: phi0.clone(),
                            phi1: phi1.clone(),
                            psi0: psi0.clone(),
                            psi1: psi1.clone(),
                            rho0,
                            rho1: rho1.clone(),
                        };
                        if visit(w)?.is_break() {
                            return Ok(ControlFlow::Break(()));
                        }
                    }
                }
            }
        }
    }
    Ok(ControlFlow::Continue(()))
}

fn conclude<W>(found: Option<W>, budget: &Budget) -> Decision<W> {
    match found {
        Some(w) => Decision::Yes(w),
        None if budget.incomplete() => Decision::Unknown,
        None => Decision::No,
    }
}

/// Decides whether two unital invariants are isomorphic, spending at most `bound`
/// candidate evaluations. The witness is the first one met in the enumeration order.
pub fn isomorphic(
    i1: &UnitalKSixInvariant,
    i2: &UnitalKSixInvariant,
    bound: u64,
) -> Result<Decision<IsoWitness>> {
    let budget = Budget::new(bound);
    let mut found = None;
    let _ = search_base(i1, i2, &budget, &mut |w| {
        found = Some(w);
        Ok(ControlFlow::Break(()))
    })?;
    Ok(conclude(found, &budget))
}

/// As [`isomorphic`], additionally requiring an order-, scale- and unit-preserving
/// `θ0` between the D-groups compatible with `ψ0`, `d_surj` and `j0`.
pub fn isomorphic_tilde(
    i1: &KTildeInvariant,
    i2: &KTildeInvariant,
    bound: u64,
) -> Result<Decision<TildeWitness>> {
    let budget = Budget::new(bound);
    let mut found = None;
    let hom = HomGroup::new(i1.dgroup().group(), i2.dgroup().group());
    let _ = search_base(i1.base(), i2.base(), &budget, &mut |w| {
        let constraints = [
            HomConstraint::Pre {
                inner: i1.d_inj().clone(),
                value: i2.d_inj().compose(&w.psi0)?,
            },
            HomConstraint::Post {
                outer: i2.d_surj().clone(),
                value: i1.d_surj().clone(),
            },
            HomConstraint::Eval {
                at: i1.unit_d().clone(),
                value: i2.unit_d().clone(),
            },
            HomConstraint::Post {
                outer: i2.j0().clone(),
                value: w.rho0.compose(i1.j0())?,
            },
        ];
        let Some(thetas) = solve_hom_constraints(&hom, &constraints)? else {
            return Ok(ControlFlow::Continue(()));
        };
        for k in elements_by_radius(thetas.kernel.group()) {
            if !budget.spend() {
                break;
            }
            let theta0 = thetas.solution_at(&k)?;
            let units = Some((i1.unit_d(), i2.unit_d()));
            if accept(
                is_order_unit_iso(&theta0, i1.dgroup(), i2.dgroup(), units, &budget)?,
                &budget,
            ) {
                found = Some(TildeWitness {
                    base: w,
                    theta0,
                });
                return Ok(ControlFlow::Break(()));
            }
        }
        Ok(ControlFlow::Continue(()))
    })?;
    Ok(conclude(found, &budget))
}
