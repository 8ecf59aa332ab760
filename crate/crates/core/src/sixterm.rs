//! Cyclic six-term exact sequences with optional units, and their congruence.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::abgroup::{FgAbGroup, GroupElement};
use crate::error::{Error, Result};
use crate::homalg::{
    gamma_delta, is_exact_at, pullback, solve_hom_constraints, AffineHomSolution, Cokernel, GroupHom, HomConstraint,
    HomGroup, ShortExactSeq, Subgroup,
};

/// Names of the six positions, in the order exactness is checked.
pub const SPOTS: [&str; 6] = ["K0E", "K0A", "K1B", "K1E", "K1A", "K0B"];

/// ```text
/// K0B --iota0--> K0E --pi0--> K0A
///  ^                           |
/// delta1                     delta0
///  |                           v
/// K1A <--pi1--- K1E <--iota1-- K1B
/// ```
#[derive(Clone, PartialEq, Eq)]
pub struct SixTermSequence {
    iota0: GroupHom,
    pi0: GroupHom,
    delta0: GroupHom,
    iota1: GroupHom,
    pi1: GroupHom,
    delta1: GroupHom,
    units: Option<(GroupElement, GroupElement)>,
}

fn check_chain(f: &GroupHom, g: &GroupHom, at: &str) -> Result<()> {
    if f.target() != g.source() {
        return Err(Error::DimensionMismatch(format!(
            "maps meeting at {at}: {} vs {}",
            f.target(),
            g.source()
        )));
    }
    Ok(())
}

impl SixTermSequence {
    /// Checks composability, exactness at every spot, and the unit pair.
    pub fn new(
        maps: [GroupHom; 6],
        units: Option<(GroupElement, GroupElement)>,
    ) -> Result<Self> {
        let [iota0, pi0, delta0, iota1, pi1, delta1] = maps;
        let cycle = [&iota0, &pi0, &delta0, &iota1, &pi1, &delta1];
        for k in 0..6 {
            check_chain(cycle[k], cycle[(k + 1) % 6], SPOTS[k])?;
        }
        for k in 0..6 {
            if !is_exact_at(cycle[k], cycle[(k + 1) % 6]) {
                return Err(Error::NotExact(SPOTS[k].into()));
            }
        }
        if let Some((ue, ua)) = &units {
            iota0.target().check_member(ue)?;
            pi0.target().check_member(ua)?;
            if pi0.apply(ue)? != *ua {
                return Err(Error::UnitIncompatible("pi0(unitE) differs from unitA".into()));
            }
        }
        Ok(SixTermSequence {
            iota0,
            pi0,
            delta0,
            iota1,
            pi1,
            delta1,
            units,
        })
    }

    /// The sequence with vanishing boundary maps and middles `K_iB ⊕ K_iA`.
    /// With `unit_a`, the middle unit is `(0, unit_a)`.
    pub fn split(
        k0b: &FgAbGroup,
        k0a: &FgAbGroup,
        k1b: &FgAbGroup,
        k1a: &FgAbGroup,
        unit_a: Option<&GroupElement>,
    ) -> Result<Self> {
        let zero = k0b.zero();
        let e0 = ShortExactSeq::split(k0b, k0a, unit_a.map(|u| (&zero, u)))?;
        let e1 = ShortExactSeq::split(k1b, k1a, None)?;
        Self::from_extensions(
            &GroupHom::zero(k0a, k1b),
            &GroupHom::zero(k1a, k0b),
            &e0,
            &e1,
        )
    }

    /// Glues `0 -> coker δ1 -> K0E -> ker δ0 -> 0` and `0 -> coker δ0 -> K1E -> ker δ1 -> 0`
    /// into a six-term sequence. A distinguished pair on the first extension becomes the units.
    pub fn from_extensions(
        delta0: &GroupHom,
        delta1: &GroupHom,
        e0: &ShortExactSeq,
        e1: &ShortExactSeq,
    ) -> Result<Self> {
        let (k0, c1) = (delta0.kernel(), delta1.cokernel());
        let (k1, c0) = (delta1.kernel(), delta0.cokernel());
        if e0.left() != c1.group() || e0.right() != k0.group() {
            return Err(Error::EndMismatch("degree 0 extension has the wrong ends".into()));
        }
        if e1.left() != c0.group() || e1.right() != k1.group() {
            return Err(Error::EndMismatch("degree 1 extension has the wrong ends".into()));
        }
        let iota0 = e0.inj().compose(c1.projection())?;
        let pi0 = k0.inclusion().compose(e0.surj())?;
        let iota1 = e1.inj().compose(c0.projection())?;
        let pi1 = k1.inclusion().compose(e1.surj())?;
        let units = match e0.distinguished() {
            Some((g, h)) => Some((g.clone(), k0.inclusion().apply(h)?)),
            None => None,
        };
        Self::new(
            [iota0, pi0, delta0.clone(), iota1, pi1, delta1.clone()],
            units,
        )
    }

    pub fn k0b(&self) -> &FgAbGroup {
        self.iota0.source()
    }
    pub fn k0e(&self) -> &FgAbGroup {
        self.pi0.source()
    }
    pub fn k0a(&self) -> &FgAbGroup {
        self.pi0.target()
    }
    pub fn k1b(&self) -> &FgAbGroup {
        self.iota1.source()
    }
    pub fn k1e(&self) -> &FgAbGroup {
        self.pi1.source()
    }
    pub fn k1a(&self) -> &FgAbGroup {
        self.pi1.target()
    }
    pub fn iota0(&self) -> &GroupHom {
        &self.iota0
    }
    pub fn pi0(&self) -> &GroupHom {
        &self.pi0
    }
    pub fn delta0(&self) -> &GroupHom {
        &self.delta0
    }
    pub fn iota1(&self) -> &GroupHom {
        &self.iota1
    }
    pub fn pi1(&self) -> &GroupHom {
        &self.pi1
    }
    pub fn delta1(&self) -> &GroupHom {
        &self.delta1
    }

    /// The six maps in cyclic order starting at `iota0`.
    pub fn maps(&self) -> [&GroupHom; 6] {
        [
            &self.iota0,
            &self.pi0,
            &self.delta0,
            &self.iota1,
            &self.pi1,
            &self.delta1,
        ]
    }

    /// The six groups in the order `K0B, K0E, K0A, K1B, K1E, K1A`.
    pub fn groups(&self) -> [&FgAbGroup; 6] {
        [
            self.k0b(),
            self.k0e(),
            self.k0a(),
            self.k1b(),
            self.k1e(),
            self.k1a(),
        ]
    }

    /// `(unitE, unitA)`.
    pub fn units(&self) -> Option<(&GroupElement, &GroupElement)> {
        self.units.as_ref().map(|(e, a)| (e, a))
    }

    pub fn unit_e(&self) -> Option<&GroupElement> {
        self.units.as_ref().map(|(e, _)| e)
    }

    pub fn unit_a(&self) -> Option<&GroupElement> {
        self.units.as_ref().map(|(_, a)| a)
    }

    fn require_units(&self) -> Result<(&GroupElement, &GroupElement)> {
        self.units()
            .ok_or_else(|| Error::PreconditionViolated("sequence carries no units".into()))
    }

    pub fn forget_units(&self) -> Self {
        SixTermSequence {
            units: None,
            ..self.clone()
        }
    }

    /// Same ends and boundary maps.
    pub fn same_ends(&self, other: &SixTermSequence) -> bool {
        self.k0b() == other.k0b()
            && self.k0a() == other.k0a()
            && self.k1b() == other.k1b()
            && self.k1a() == other.k1a()
            && self.delta0 == other.delta0
            && self.delta1 == other.delta1
    }

    /// `0 -> coker δ1 -> K0E -> ker δ0 -> 0`, pointed at `(unitE, unitA)` when units exist.
    pub fn degree0_extension(&self) -> Result<ShortExactSeq> {
        self.degree0_extension_over(&self.delta0.kernel(), &self.delta1.cokernel())
    }

    fn degree0_extension_over(&self, ker: &Subgroup, coker: &Cokernel) -> Result<ShortExactSeq> {
        let inj = coker.factor(&self.iota0)?;
        let surj = ker.corestrict(&self.pi0)?;
        let dist = match &self.units {
            Some((ue, ua)) => {
                let h = ker.coords_of(ua).ok_or(Error::UnitNotInKernel)?;
                Some((ue.clone(), h))
            }
            None => None,
        };
        ShortExactSeq::new(inj, surj, dist)
    }

    /// `0 -> coker δ0 -> K1E -> ker δ1 -> 0`.
    pub fn degree1_extension(&self) -> Result<ShortExactSeq> {
        self.degree1_extension_over(&self.delta1.kernel(), &self.delta0.cokernel())
    }

    fn degree1_extension_over(&self, ker: &Subgroup, coker: &Cokernel) -> Result<ShortExactSeq> {
        let inj = coker.factor(&self.iota1)?;
        let surj = ker.corestrict(&self.pi1)?;
        ShortExactSeq::new(inj, surj, None)
    }

    /// Whether a middle isomorphism fixing the ends (and carrying units) exists.
    ///
    /// Decided by comparing the classes of the two induced extensions, so no search is involved.
    pub fn congruent(&self, other: &SixTermSequence) -> Result<bool> {
        if !self.same_ends(other) {
            return Ok(false);
        }
        match (&self.units, &other.units) {
            (Some((_, a1)), Some((_, a2))) if a1 != a2 => return Ok(false),
            (Some(_), None) | (None, Some(_)) => return Ok(false),
            _ => {}
        }
        let (k0, c1) = (self.delta0.kernel(), self.delta1.cokernel());
        let (k1, c0) = (self.delta1.kernel(), self.delta0.cokernel());
        let x0 = self.degree0_extension_over(&k0, &c1)?;
        let y0 = other.degree0_extension_over(&k0, &c1)?;
        let same0 = if x0.distinguished().is_some() {
            let (pext, a) = x0.pointed_ext_class()?;
            a == y0.pointed_ext_class_in(&pext)?
        } else {
            let (ext, a) = x0.ext_class()?;
            a == y0.ext_class_in(&ext)?
        };
        if !same0 {
            return Ok(false);
        }
        let x1 = self.degree1_extension_over(&k1, &c0)?;
        let y1 = other.degree1_extension_over(&k1, &c0)?;
        let (ext, a) = x1.ext_class()?;
        Ok(a == y1.ext_class_in(&ext)?)
    }

    /// Middle maps `(ρ0, ρ1)` realizing a congruence, if one exists.
    pub fn congruence_witness(
        &self,
        other: &SixTermSequence,
    ) -> Result<Option<(GroupHom, GroupHom)>> {
        Ok(self
            .congruence_solutions(other)?
            .map(|(r0, r1)| (r0.particular_map(), r1.particular_map())))
    }

    /// All middle maps commuting with the ends (and carrying units), as affine sets in
    /// `Hom(K0E, K0E')` and `Hom(K1E, K1E')`. Every member is an isomorphism.
    pub fn congruence_solutions(
        &self,
        other: &SixTermSequence,
    ) -> Result<Option<(AffineHomSolution, AffineHomSolution)>> {
        if !self.same_ends(other) {
            return Ok(None);
        }
        let mut c0 = vec![
            HomConstraint::Pre {
                inner: self.iota0.clone(),
                value: other.iota0.clone(),
            },
            HomConstraint::Post {
                outer: other.pi0.clone(),
                value: self.pi0.clone(),
            },
        ];
        match (&self.units, &other.units) {
            (Some((e1, _)), Some((e2, _))) => c0.push(HomConstraint::Eval {
                at: e1.clone(),
                value: e2.clone(),
            }),
            (None, None) => {}
            _ => return Ok(None),
        }
        let Some(rho0) = solve_hom_constraints(&HomGroup::new(self.k0e(), other.k0e()), &c0)?
        else {
            return Ok(None);
        };
        let c1 = [
            HomConstraint::Pre {
                inner: self.iota1.clone(),
                value: other.iota1.clone(),
            },
            HomConstraint::Post {
                outer: other.pi1.clone(),
                value: self.pi1.clone(),
            },
        ];
        let Some(rho1) = solve_hom_constraints(&HomGroup::new(self.k1e(), other.k1e()), &c1)?
        else {
            return Ok(None);
        };
        Ok(Some((rho0, rho1)))
    }

    /// Replaces `unitE` by `unitE + iota0(x)`.
    pub fn shift_unit(&self, x: &GroupElement) -> Result<Self> {
        let (ue, ua) = self.require_units()?;
        self.k0b().check_member(x)?;
        let ue = ue.try_add(&self.iota0.apply(x)?)?;
        Ok(SixTermSequence {
            units: Some((ue, ua.clone())),
            ..self.clone()
        })
    }

    /// Same sequence with the units replaced; `pi0(unit_e)` must equal `unit_a`.
    pub fn with_units(&self, unit_e: &GroupElement, unit_a: &GroupElement) -> Result<Self> {
        Self::new(
            self.maps().map(|m| m.clone()),
            Some((unit_e.clone(), unit_a.clone())),
        )
    }

    /// Sum with a sequence whose boundary maps vanish: middles are pull-backs over the
    /// `A`-groups modulo the antidiagonal image of the `B`-groups.
    pub fn cuntz_sum(&self, other: &SixTermSequence) -> Result<Self> {
        if self.k0b() != other.k0b()
            || self.k0a() != other.k0a()
            || self.k1b() != other.k1b()
            || self.k1a() != other.k1a()
        {
            return Err(Error::EndMismatch("summands have different end groups".into()));
        }
        if !other.delta0.is_zero() || !other.delta1.is_zero() {
            return Err(Error::PreconditionViolated(
                "second summand has a nonzero boundary map".into(),
            ));
        }
        let (iota0, pi0, unit_pb) = sum_degree(&self.iota0, &self.pi0, &other.iota0, &other.pi0)?;
        let (iota1, pi1, _) = sum_degree(&self.iota1, &self.pi1, &other.iota1, &other.pi1)?;
        let units = match (&self.units, &other.units) {
            (None, None) => None,
            (Some((e1, a1)), Some((e2, a2))) => {
                if a1 != a2 {
                    return Err(Error::UnitIncompatible("summands have different unitA".into()));
                }
                Some((unit_pb(e1, e2)?, a1.clone()))
            }
            _ => {
                return Err(Error::PreconditionViolated(
                    "only one summand carries units".into(),
                ))
            }
        };
        Self::new(
            [
                iota0,
                pi0,
                self.delta0.clone(),
                iota1,
                pi1,
                self.delta1.clone(),
            ],
            units,
        )
    }

    /// Evaluates conditions (c1) to (c6) and compares `Γ^(0,δ1)` with `Γ^δ`.
    pub fn check_unit_conditions(&self) -> Result<ConditionReport> {
        let (_, ua) = self.require_units()?;
        let k0 = self.delta0.kernel();
        let c1 = ua.is_zero();
        let c2 = self.delta0.is_injective();
        let c3 = self.delta1.is_surjective();
        let mut g = num_bigint::BigInt::zero();
        for c in ua.free_part() {
            g = g.gcd(c);
        }
        let c4 = g.is_one();
        let retraction = [HomConstraint::Pre {
            inner: k0.inclusion().clone(),
            value: GroupHom::identity(k0.group()),
        }];
        let c5 = solve_hom_constraints(&HomGroup::new(self.k0a(), k0.group()), &retraction)?
            .is_some();
        let c6 = self.k0e().is_trivial();
        let zero = GroupHom::zero(self.k0a(), self.k1b());
        let g0 = gamma_delta(&zero, &self.delta1, ua)?;
        let gd = gamma_delta(&self.delta0, &self.delta1, ua)?;
        Ok(ConditionReport {
            c1,
            c2,
            c3,
            c4,
            c5,
            c6,
            gamma_equal: g0.same_as(&gd),
        })
    }
}

type UnitPairing = Box<dyn Fn(&GroupElement, &GroupElement) -> Result<GroupElement>>;

fn sum_degree(
    iota1: &GroupHom,
    pi1: &GroupHom,
    iota2: &GroupHom,
    pi2: &GroupHom,
) -> Result<(GroupHom, GroupHom, UnitPairing)> {
    let pb = pullback(pi1, pi2)?;
    let antidiag = pb.mediate(iota1, &iota2.neg())?;
    let q = antidiag.cokernel();
    let zero = GroupHom::zero(iota1.source(), iota2.target());
    let iota = q.projection().compose(&pb.mediate(iota1, &zero)?)?;
    let pi = q.factor(&pi1.compose(pb.p1())?)?;
    let proj = q.projection().clone();
    let pairing: UnitPairing = Box::new(move |a, b| proj.apply(&pb.element(a, b)?));
    Ok((iota, pi, pairing))
}

/// Outcome of [`SixTermSequence::check_unit_conditions`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    pub c1: bool,
    pub c2: bool,
    pub c3: bool,
    pub c4: bool,
    pub c5: bool,
    pub c6: bool,
    pub gamma_equal: bool,
}

impl ConditionReport {
    pub fn flags(&self) -> [(&'static str, bool); 6] {
        [
            ("c1", self.c1),
            ("c2", self.c2),
            ("c3", self.c3),
            ("c4", self.c4),
            ("c5", self.c5),
            ("c6", self.c6),
        ]
    }

    /// Conditions that hold although the two Γ-groups differ. Always empty unless something is broken.
    pub fn soundness_violations(&self) -> Vec<&'static str> {
        if self.gamma_equal {
            return Vec::new();
        }
        self.flags()
            .into_iter()
            .filter(|(_, v)| *v)
            .map(|(n, _)| n)
            .collect()
    }
}

impl fmt::Debug for SixTermSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SixTermSequence")
            .field("iota0", &self.iota0)
            .field("pi0", &self.pi0)
            .field("delta0", &self.delta0)
            .field("iota1", &self.iota1)
            .field("pi1", &self.pi1)
            .field("delta1", &self.delta1)
            .field("units", &self.units)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::PointedExtGroup;
    use crate::matrix::IntMatrix;

    fn z() -> FgAbGroup {
        FgAbGroup::free(1)
    }

    fn split_z(unit_a: i64) -> SixTermSequence {
        let z = z();
        let t = FgAbGroup::trivial();
        let u = z.element_i64(&[unit_a]).unwrap();
        SixTermSequence::split(&z, &z, &t, &t, Some(&u)).unwrap()
    }

    #[test]
    fn trivial_and_split() {
        let t = FgAbGroup::trivial();
        let s = SixTermSequence::split(&t, &t, &t, &t, Some(&t.zero())).unwrap();
        assert!(s.groups().iter().all(|g| g.is_trivial()));
        let s = split_z(1);
        assert_eq!(s.unit_e().unwrap().coords(), split_z(1).unit_e().unwrap().coords());
        assert!(s.congruent(&s).unwrap());
    }

    #[test]
    fn non_exact_is_rejected() {
        let z = z();
        let t = FgAbGroup::trivial();
        let z2 = z.direct_sum(&z).group().clone();
        // pi0 only hits 2Z while delta0 = 0
        let iota0 = GroupHom::new(&z, &z2, IntMatrix::from_i64(&[&[1], &[0]])).unwrap();
        let pi0 = GroupHom::new(&z2, &z, IntMatrix::from_i64(&[&[0, 2]])).unwrap();
        let r = SixTermSequence::new(
            [
                iota0,
                pi0,
                GroupHom::zero(&z, &t),
                GroupHom::zero(&t, &t),
                GroupHom::zero(&t, &t),
                GroupHom::zero(&t, &z),
            ],
            None,
        );
        assert!(matches!(r, Err(Error::NotExact(s)) if s == "K0A"));
    }

    #[test]
    fn unit_shift_congruence_examples() {
        let s = split_z(1);
        let shifted = s.shift_unit(&z().element_i64(&[3]).unwrap()).unwrap();
        assert!(s.congruent(&shifted).unwrap());
        assert!(s.congruence_witness(&shifted).unwrap().is_some());

        let s = split_z(2);
        let shifted = s.shift_unit(&z().element_i64(&[1]).unwrap()).unwrap();
        assert!(!s.congruent(&shifted).unwrap());
        assert!(s.congruence_witness(&shifted).unwrap().is_none());
        let shifted = s.shift_unit(&z().element_i64(&[4]).unwrap()).unwrap();
        assert!(s.congruent(&shifted).unwrap());
    }

    #[test]
    fn shifts_add() {
        let s = split_z(2);
        let x = z().element_i64(&[5]).unwrap();
        let y = z().element_i64(&[-2]).unwrap();
        let a = s.shift_unit(&x).unwrap().shift_unit(&y).unwrap();
        let b = s.shift_unit(&(&x + &y)).unwrap();
        assert_eq!(a, b);
        assert_eq!(s.shift_unit(&z().zero()).unwrap(), s);
    }

    #[test]
    fn cuntz_sum_with_split_summand() {
        let z = z();
        let t = FgAbGroup::trivial();
        let z2 = FgAbGroup::cyclic(2);
        // nontrivial extension Z -> Z -> Z/2 with unit over 1
        let u = z2.element_i64(&[1]).unwrap();
        let pext = PointedExtGroup::new(&z2, &u, &z).unwrap();
        let x = pext.group().generators().pop().unwrap();
        let e0 = pext.realize(&x).unwrap();
        let e1 = ShortExactSeq::split(&t, &t, None).unwrap();
        let s1 = SixTermSequence::from_extensions(
            &GroupHom::zero(&z2, &t),
            &GroupHom::zero(&t, &z),
            &e0,
            &e1,
        )
        .unwrap();
        let s2 = SixTermSequence::split(&z, &z2, &t, &t, Some(&u)).unwrap();
        let sum = s1.cuntz_sum(&s2).unwrap();
        assert!(sum.congruent(&s1).unwrap());
        assert_eq!(sum.pi0().apply(sum.unit_e().unwrap()).unwrap(), u);
        assert!(matches!(s2.cuntz_sum(&s2.shift_unit(&z.generator(0)).unwrap()), Ok(_)));
    }

    #[test]
    fn conditions() {
        let s = split_z(0);
        let r = s.check_unit_conditions().unwrap();
        assert!(r.c1 && r.gamma_equal && !r.c6);
        let r = split_z(1).check_unit_conditions().unwrap();
        assert!(r.c4 && r.c5 && r.gamma_equal);
        assert!(r.soundness_violations().is_empty());
    }
}
