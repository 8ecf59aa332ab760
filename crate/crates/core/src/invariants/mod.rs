//! Ordered K-theory data and isomorphism decisions for unital six-term invariants.

mod cone;
mod iso;
mod lp;
mod search;

pub use cone::{cone_contains, is_order_unit_iso};
pub use iso::{isomorphic, isomorphic_tilde, IsoWitness, TildeWitness};
pub use search::{elements_by_radius, isomorphisms};

use std::cell::Cell;

use num_bigint::BigInt;

use crate::abgroup::{FgAbGroup, GroupElement};
use crate::error::{Error, Result};
use crate::homalg::{is_exact_at, GroupHom};
use crate::sixterm::SixTermSequence;

/// Candidate evaluations allowed when a caller gives no bound.
pub const DEFAULT_BOUND: u64 = 10_000;

/// Three-valued answer of a bounded search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision<W> {
    Yes(W),
    No,
    Unknown,
}

impl<W> Decision<W> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Decision::No)
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Decision::Unknown)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Decision::Yes(_) => "yes",
            Decision::No => "no",
            Decision::Unknown => "unknown",
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Decision<V> {
        match self {
            Decision::Yes(w) => Decision::Yes(f(w)),
            Decision::No => Decision::No,
            Decision::Unknown => Decision::Unknown,
        }
    }

    pub fn witness(self) -> Option<W> {
        match self {
            Decision::Yes(w) => Some(w),
            _ => None,
        }
    }
}

/// Counter of candidate evaluations shared by nested searches.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: Cell<u64>,
    incomplete: Cell<bool>,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget {
            limit,
            used: Cell::new(0),
            incomplete: Cell::new(false),
        }
    }

    /// Consumes one unit; `false` once the limit is reached.
    pub fn spend(&self) -> bool {
        if self.used.get() >= self.limit {
            self.incomplete.set(true);
            return false;
        }
        self.used.set(self.used.get() + 1);
        true
    }

    /// Records that some part of the search was cut short.
    pub fn give_up(&self) {
        self.incomplete.set(true);
    }

    pub fn incomplete(&self) -> bool {
        self.incomplete.get()
    }

    pub fn used(&self) -> u64 {
        self.used.get()
    }
}

/// The distinguished subset of the positive cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scale {
    FullCone,
    /// `{x ∈ C : x <= u}`
    IntervalBelow(GroupElement),
    /// `{x ∈ C : x <= s}` for some listed `s`.
    ExplicitGens(Vec<GroupElement>),
}

/// A group with a finitely generated positive cone and a scale.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedGroup {
    group: FgAbGroup,
    cone_gens: Vec<GroupElement>,
    scale: Scale,
}

impl OrderedGroup {
    /// Zero cone generators are dropped; they do not change the cone.
    pub fn new(group: &FgAbGroup, cone_gens: Vec<GroupElement>, scale: Scale) -> Result<Self> {
        for g in &cone_gens {
            group.check_member(g)?;
        }
        match &scale {
            Scale::FullCone => {}
            Scale::IntervalBelow(u) => group.check_member(u)?,
            Scale::ExplicitGens(l) => {
                for s in l {
                    group.check_member(s)?;
                }
            }
        }
        Ok(OrderedGroup {
            group: group.clone(),
            cone_gens: cone_gens.into_iter().filter(|g| !g.is_zero()).collect(),
            scale,
        })
    }

    /// Cone spanned by all canonical generators: the orthant on the free part, everything on torsion.
    pub fn standard(group: &FgAbGroup) -> Self {
        OrderedGroup {
            group: group.clone(),
            cone_gens: group.generators(),
            scale: Scale::FullCone,
        }
    }

    pub fn with_scale(&self, scale: Scale) -> Result<Self> {
        Self::new(&self.group, self.cone_gens.clone(), scale)
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn cone_gens(&self) -> &[GroupElement] {
        &self.cone_gens
    }

    pub fn scale(&self) -> &Scale {
        &self.scale
    }
}

/// Six-term sequence with units and orders on the three `K0`-groups.
#[derive(Clone, Debug)]
pub struct UnitalKSixInvariant {
    seq: SixTermSequence,
    order_b: OrderedGroup,
    order_e: OrderedGroup,
    order_a: OrderedGroup,
}

fn check_positive(f: &GroupHom, src: &OrderedGroup, dst: &OrderedGroup, name: &str) -> Result<()> {
    let budget = Budget::new(DEFAULT_BOUND);
    for g in src.cone_gens() {
        if cone_contains(dst, &f.apply(g)?, &budget)?.is_no() {
            return Err(Error::PreconditionViolated(format!("{name} is not positive")));
        }
    }
    Ok(())
}

impl UnitalKSixInvariant {
    /// Rejects a connecting map that provably leaves the cone.
    pub fn new(
        seq: SixTermSequence,
        order_b: OrderedGroup,
        order_e: OrderedGroup,
        order_a: OrderedGroup,
    ) -> Result<Self> {
        if seq.units().is_none() {
            return Err(Error::PreconditionViolated("sequence carries no units".into()));
        }
        for (og, g, name) in [
            (&order_b, seq.k0b(), "K0B"),
            (&order_e, seq.k0e(), "K0E"),
            (&order_a, seq.k0a(), "K0A"),
        ] {
            if og.group() != g {
                return Err(Error::DimensionMismatch(format!(
                    "order on {} given for {name} = {g}",
                    og.group()
                )));
            }
        }
        check_positive(seq.iota0(), &order_b, &order_e, "iota0")?;
        check_positive(seq.pi0(), &order_e, &order_a, "pi0")?;
        Ok(UnitalKSixInvariant {
            seq,
            order_b,
            order_e,
            order_a,
        })
    }

    /// Standard orders with full scales on all three groups.
    pub fn with_standard_orders(seq: SixTermSequence) -> Result<Self> {
        let (b, e, a) = (
            OrderedGroup::standard(seq.k0b()),
            OrderedGroup::standard(seq.k0e()),
            OrderedGroup::standard(seq.k0a()),
        );
        Self::new(seq, b, e, a)
    }

    pub fn seq(&self) -> &SixTermSequence {
        &self.seq
    }

    pub fn order_b(&self) -> &OrderedGroup {
        &self.order_b
    }

    pub fn order_e(&self) -> &OrderedGroup {
        &self.order_e
    }

    pub fn order_a(&self) -> &OrderedGroup {
        &self.order_a
    }

    pub fn unit_e(&self) -> &GroupElement {
        self.seq.unit_e().expect("checked at construction")
    }

    pub fn unit_a(&self) -> &GroupElement {
        self.seq.unit_a().expect("checked at construction")
    }
}

/// The unital invariant extended by the row `0 -> K0B -> K0(D) -> Z -> 0`.
#[derive(Clone, Debug)]
pub struct KTildeInvariant {
    base: UnitalKSixInvariant,
    dgroup: OrderedGroup,
    unit_d: GroupElement,
    d_inj: GroupHom,
    d_surj: GroupHom,
    j0: GroupHom,
}

impl KTildeInvariant {
    pub fn new(
        base: UnitalKSixInvariant,
        dgroup: OrderedGroup,
        unit_d: GroupElement,
        d_inj: GroupHom,
        d_surj: GroupHom,
        j0: GroupHom,
    ) -> Result<Self> {
        let s = base.seq();
        let d = dgroup.group();
        d.check_member(&unit_d)?;
        let z = FgAbGroup::free(1);
        if d_inj.source() != s.k0b() || d_inj.target() != d {
            return Err(Error::DimensionMismatch("d_inj must map K0B to D".into()));
        }
        if d_surj.source() != d || d_surj.target() != &z {
            return Err(Error::DimensionMismatch("d_surj must map D to Z".into()));
        }
        if j0.source() != d || j0.target() != s.k0e() {
            return Err(Error::DimensionMismatch("j0 must map D to K0E".into()));
        }
        if !d_inj.is_injective() {
            return Err(Error::NotExact("K0B in the D-row".into()));
        }
        if !is_exact_at(&d_inj, &d_surj) {
            return Err(Error::NotExact("D".into()));
        }
        if !d_surj.is_surjective() {
            return Err(Error::NotExact("Z in the D-row".into()));
        }
        if &j0.compose(&d_inj)? != s.iota0() {
            return Err(Error::PreconditionViolated("iota0 differs from j0 ∘ d_inj".into()));
        }
        let unit_map = GroupHom::from_element(base.unit_a());
        if s.pi0().compose(&j0)? != unit_map.compose(&d_surj)? {
            return Err(Error::PreconditionViolated(
                "pi0 ∘ j0 differs from the unit embedding after d_surj".into(),
            ));
        }
        if d_surj.apply(&unit_d)?.coords() != [BigInt::from(1)] {
            return Err(Error::UnitIncompatible("d_surj(unit_d) is not 1".into()));
        }
        if &j0.apply(&unit_d)? != base.unit_e() {
            return Err(Error::UnitIncompatible("j0(unit_d) is not unitE".into()));
        }
        Ok(KTildeInvariant {
            base,
            dgroup,
            unit_d,
            d_inj,
            d_surj,
            j0,
        })
    }

    pub fn base(&self) -> &UnitalKSixInvariant {
        &self.base
    }

    pub fn dgroup(&self) -> &OrderedGroup {
        &self.dgroup
    }

    pub fn unit_d(&self) -> &GroupElement {
        &self.unit_d
    }

    pub fn d_inj(&self) -> &GroupHom {
        &self.d_inj
    }

    pub fn d_surj(&self) -> &GroupHom {
        &self.d_surj
    }

    pub fn j0(&self) -> &GroupHom {
        &self.j0
    }
}

fn check_iso(f: &GroupHom, src: &FgAbGroup, name: &str) -> Result<GroupHom> {
    if f.source() != src {
        return Err(Error::SourceMismatch(format!("{name} starts at {}, not {src}", f.source())));
    }
    f.inverse()
        .map_err(|_| Error::NotIsomorphism(name.into()))
}

/// Relabels the ends of `s` along `phi = (φ0, φ1)` on the `A`-groups and `psi = (ψ0, ψ1)`
/// on the `B`-groups. Middles and `unitE` stay; `unitA` becomes `φ0(unitA)`.
pub fn transport(
    s: &SixTermSequence,
    phi: (&GroupHom, &GroupHom),
    psi: (&GroupHom, &GroupHom),
) -> Result<SixTermSequence> {
    let phi0_inv = check_iso(phi.0, s.k0a(), "phi0")?;
    let phi1_inv = check_iso(phi.1, s.k1a(), "phi1")?;
    let psi0_inv = check_iso(psi.0, s.k0b(), "psi0")?;
    let psi1_inv = check_iso(psi.1, s.k1b(), "psi1")?;
    let maps = [
        s.iota0().compose(&psi0_inv)?,
        phi.0.compose(s.pi0())?,
        psi.1.compose(&s.delta0().compose(&phi0_inv)?)?,
        s.iota1().compose(&psi1_inv)?,
        phi.1.compose(s.pi1())?,
        psi.0.compose(&s.delta1().compose(&phi1_inv)?)?,
    ];
    let units = match s.units() {
        Some((e, a)) => Some((e.clone(), phi.0.apply(a)?)),
        None => None,
    };
    SixTermSequence::new(maps, units)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::IntMatrix;

    #[test]
    fn transport_identity_and_inverse() {
        let z = FgAbGroup::free(1);
        let z3 = FgAbGroup::cyclic(3);
        let t = FgAbGroup::trivial();
        let u = z3.element_i64(&[1]).unwrap();
        let s = SixTermSequence::split(&z, &z3, &t, &t, Some(&u)).unwrap();
        let (ia, ib) = (GroupHom::identity(&z3), GroupHom::identity(&z));
        let it = GroupHom::identity(&t);
        assert_eq!(transport(&s, (&ia, &it), (&ib, &it)).unwrap(), s);

        let neg_a = GroupHom::new(&z3, &z3, IntMatrix::from_i64(&[&[2]])).unwrap();
        let neg_b = GroupHom::new(&z, &z, IntMatrix::from_i64(&[&[-1]])).unwrap();
        let moved = transport(&s, (&neg_a, &it), (&neg_b, &it)).unwrap();
        assert_eq!(moved.unit_a().unwrap().coords(), [BigInt::from(2)]);
        let back = transport(&moved, (&neg_a.inverse().unwrap(), &it), (&neg_b, &it)).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn budget_counts() {
        let b = Budget::new(2);
        assert!(b.spend() && b.spend() && !b.spend());
        assert!(b.incomplete());
        assert_eq!(b.used(), 2);
    }
}
