use num_traits::Zero;

use super::{is_exact_at, pullback, pushout, ExtGroup, GroupHom, PointedExtGroup};
use crate::abgroup::{FgAbGroup, GroupElement};
use crate::error::{Error, Result};

/// `0 -> left -> mid -> right -> 0`, optionally with `g ∈ mid` over `h ∈ right`.
#[derive(Clone, Debug)]
pub struct ShortExactSeq {
    inj: GroupHom,
    surj: GroupHom,
    distinguished: Option<(GroupElement, GroupElement)>,
}

impl ShortExactSeq {
    pub fn new(
        inj: GroupHom,
        surj: GroupHom,
        distinguished: Option<(GroupElement, GroupElement)>,
    ) -> Result<Self> {
        if inj.target() != surj.source() {
            return Err(Error::DimensionMismatch(format!(
                "{} -> {} followed by {} -> {}",
                inj.source(),
                inj.target(),
                surj.source(),
                surj.target()
            )));
        }
        if !inj.is_injective() {
            return Err(Error::NotExact("left".into()));
        }
        if !surj.is_surjective() {
            return Err(Error::NotExact("right".into()));
        }
        if !is_exact_at(&inj, &surj) {
            return Err(Error::NotExact("middle".into()));
        }
        if let Some((g, h)) = &distinguished {
            if surj.apply(g)? != *h {
                return Err(Error::UnitIncompatible(
                    "distinguished element does not map to the given one".into(),
                ));
            }
        }
        Ok(ShortExactSeq {
            inj,
            surj,
            distinguished,
        })
    }

    /// `0 -> K -> K ⊕ H -> H -> 0`, pointed at `(k, h)` when given.
    pub fn split(
        k: &FgAbGroup,
        h: &FgAbGroup,
        pointed: Option<(&GroupElement, &GroupElement)>,
    ) -> Result<Self> {
        let sum = k.direct_sum(h);
        let dist = match pointed {
            None => None,
            Some((kx, hx)) => Some((sum.element(&[kx.clone(), hx.clone()])?, hx.clone())),
        };
        ShortExactSeq::new(sum.inclusion(0), sum.projection(1), dist)
    }

    pub fn left(&self) -> &FgAbGroup {
        self.inj.source()
    }

    pub fn mid(&self) -> &FgAbGroup {
        self.inj.target()
    }

    pub fn right(&self) -> &FgAbGroup {
        self.surj.target()
    }

    pub fn inj(&self) -> &GroupHom {
        &self.inj
    }

    pub fn surj(&self) -> &GroupHom {
        &self.surj
    }

    pub fn distinguished(&self) -> Option<&(GroupElement, GroupElement)> {
        self.distinguished.as_ref()
    }

    /// The same sequence pointed at `g` and its image.
    pub fn with_distinguished(&self, g: &GroupElement) -> Result<Self> {
        let h = self.surj.apply(g)?;
        Ok(ShortExactSeq {
            inj: self.inj.clone(),
            surj: self.surj.clone(),
            distinguished: Some((g.clone(), h)),
        })
    }

    pub fn forget_distinguished(&self) -> Self {
        ShortExactSeq {
            distinguished: None,
            ..self.clone()
        }
    }

    /// Preimages in `mid` of the canonical generators of `right`.
    fn lifts(&self) -> Vec<GroupElement> {
        self.right()
            .generators()
            .iter()
            .map(|e| self.surj.preimage(e).expect("surjective"))
            .collect()
    }

    fn cocycle(&self, lifts: &[GroupElement]) -> Vec<GroupElement> {
        let h = self.right();
        (0..h.torsion_len())
            .map(|j| {
                let y = lifts[j].scale(&h.gen_order(j));
                self.inj.preimage(&y).expect("exact at the middle")
            })
            .collect()
    }

    fn check_ends(&self, h: &FgAbGroup, k: &FgAbGroup) -> Result<()> {
        if self.right() != h || self.left() != k {
            return Err(Error::EndMismatch(format!(
                "extension of {} by {} in Ext({}, {})",
                self.right(),
                self.left(),
                h,
                k
            )));
        }
        Ok(())
    }

    /// Class in `Ext(right, left)`.
    pub fn ext_class_in(&self, ext: &ExtGroup) -> Result<GroupElement> {
        self.check_ends(ext.h(), ext.k())?;
        let lifts = self.lifts();
        ext.class_of_cocycle(&self.cocycle(&lifts))
    }

    pub fn ext_class(&self) -> Result<(ExtGroup, GroupElement)> {
        let ext = ExtGroup::new(self.right(), self.left());
        let x = self.ext_class_in(&ext)?;
        Ok((ext, x))
    }

    /// Class in `Ext((right, h), left)`.
    pub fn pointed_ext_class_in(&self, pext: &PointedExtGroup) -> Result<GroupElement> {
        self.check_ends(pext.h(), pext.k())?;
        let (g, h) = self
            .distinguished
            .as_ref()
            .ok_or_else(|| Error::PreconditionViolated("sequence has no distinguished elements".into()))?;
        if h != pext.dist() {
            return Err(Error::EndMismatch(format!(
                "distinguished element {} differs from {}",
                h,
                pext.dist()
            )));
        }
        let lifts = self.lifts();
        let mut rest = g.clone();
        for (m, x) in lifts.iter().zip(h.coords()) {
            if !x.is_zero() {
                rest = rest.try_sub(&m.scale(x))?;
            }
        }
        let k0 = self
            .inj
            .preimage(&rest)
            .expect("difference lies over zero");
        pext.class_of(&self.cocycle(&lifts), &k0)
    }

    pub fn pointed_ext_class(&self) -> Result<(PointedExtGroup, GroupElement)> {
        let (_, h) = self
            .distinguished
            .as_ref()
            .ok_or_else(|| Error::PreconditionViolated("sequence has no distinguished elements".into()))?;
        let pext = PointedExtGroup::new(self.right(), h, self.left())?;
        let x = self.pointed_ext_class_in(&pext)?;
        Ok((pext, x))
    }

    /// Whether some section `right -> mid` exists (carrying `h` to `g` if pointed).
    pub fn splits(&self) -> Result<bool> {
        Ok(match &self.distinguished {
            None => self.ext_class()?.1.is_zero(),
            Some(_) => self.pointed_ext_class()?.1.is_zero(),
        })
    }

    /// Baer sum: the pull-back over `right` modulo the antidiagonal copy of `left`.
    pub fn baer_sum(&self, other: &ShortExactSeq) -> Result<ShortExactSeq> {
        if self.left() != other.left() || self.right() != other.right() {
            return Err(Error::EndMismatch(format!(
                "extensions of {} by {} and of {} by {}",
                self.right(),
                self.left(),
                other.right(),
                other.left()
            )));
        }
        let pb = pullback(&self.surj, &other.surj)?;
        let antidiag = pb.mediate(&self.inj, &other.inj.neg())?;
        let q = antidiag.cokernel();
        let left_zero = GroupHom::zero(self.left(), other.mid());
        let inj = q
            .projection()
            .compose(&pb.mediate(&self.inj, &left_zero)?)?;
        let surj = q.factor(&self.surj.compose(pb.p1())?)?;
        let dist = match (&self.distinguished, &other.distinguished) {
            (None, None) => None,
            (Some((g1, h1)), Some((g2, h2))) => {
                if h1 != h2 {
                    return Err(Error::EndMismatch(
                        "pointed extensions over different elements".into(),
                    ));
                }
                let g = q.projection().apply(&pb.element(g1, g2)?)?;
                Some((g, h1.clone()))
            }
            _ => {
                return Err(Error::EndMismatch(
                    "cannot add a pointed and an unpointed extension".into(),
                ))
            }
        };
        ShortExactSeq::new(inj, surj, dist)
    }

    /// Pull-back along `alpha: H' -> right`; a pointed sequence needs `h'` with `alpha(h') = h`.
    pub fn pull_back(&self, alpha: &GroupHom, new_h: Option<&GroupElement>) -> Result<ShortExactSeq> {
        let pb = pullback(&self.surj, alpha)?;
        let inj = pb.mediate(&self.inj, &GroupHom::zero(self.left(), alpha.source()))?;
        let dist = match (&self.distinguished, new_h) {
            (Some((g, _)), Some(h2)) => Some((pb.element(g, h2)?, h2.clone())),
            (None, None) => None,
            _ => {
                return Err(Error::PreconditionViolated(
                    "a distinguished element is needed on both sides or neither".into(),
                ))
            }
        };
        ShortExactSeq::new(inj, pb.p2().clone(), dist)
    }

    /// Push-out along `beta: left -> K'`.
    pub fn push_forward(&self, beta: &GroupHom) -> Result<ShortExactSeq> {
        let po = pushout(&self.inj, beta)?;
        let surj = po.mediate(&self.surj, &GroupHom::zero(beta.target(), self.right()))?;
        let dist = match &self.distinguished {
            Some((g, h)) => Some((po.i1().apply(g)?, h.clone())),
            None => None,
        };
        ShortExactSeq::new(po.i2().clone(), surj, dist)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::IntMatrix;

    fn g(orders: &[i64], r: usize) -> FgAbGroup {
        FgAbGroup::from_orders_i64(orders, r)
    }

    fn hom(s: &FgAbGroup, t: &FgAbGroup, rows: &[&[i64]]) -> GroupHom {
        GroupHom::new(s, t, IntMatrix::from_i64(rows)).unwrap()
    }

    #[test]
    fn non_exact_is_rejected() {
        let z = FgAbGroup::free(1);
        let z2 = g(&[2], 0);
        let two = hom(&z, &z, &[&[2]]);
        let four_to_z2 = hom(&z, &z2, &[&[1]]);
        assert!(ShortExactSeq::new(two.clone(), four_to_z2, None).is_ok());
        let z4 = g(&[4], 0);
        assert!(matches!(
            ShortExactSeq::new(two, hom(&z, &z4, &[&[1]]), None),
            Err(Error::NotExact(_))
        ));
    }

    #[test]
    fn classes() {
        let z = FgAbGroup::free(1);
        let z2 = g(&[2], 0);
        let s = ShortExactSeq::new(hom(&z, &z, &[&[2]]), hom(&z, &z2, &[&[1]]), None).unwrap();
        let (ext, x) = s.ext_class().unwrap();
        assert_eq!(ext.group(), &z2);
        assert!(!x.is_zero());
        let sum = s.baer_sum(&s).unwrap();
        assert!(sum.ext_class().unwrap().1.is_zero());

        let z4 = g(&[4], 0);
        let s = ShortExactSeq::new(hom(&z2, &z4, &[&[2]]), hom(&z4, &z2, &[&[1]]), None).unwrap();
        assert!(!s.splits().unwrap());

        let sp = ShortExactSeq::split(&z2, &z2, None).unwrap();
        assert!(sp.splits().unwrap());
    }

    #[test]
    fn realized_classes_round_trip() {
        let h = g(&[2, 4], 1);
        let k = g(&[4], 1);
        let ext = ExtGroup::new(&h, &k);
        for x in ext.group().enumerate_elements().unwrap() {
            let s = ext.realize(&x).unwrap();
            assert_eq!(s.ext_class_in(&ext).unwrap(), x);
        }
        let dist = h.element_i64(&[1, 2, 3]).unwrap();
        let pext = PointedExtGroup::new(&h, &dist, &k).unwrap();
        let gens = pext.group().generators();
        for x in gens {
            let s = pext.realize(&x).unwrap();
            assert_eq!(s.pointed_ext_class_in(&pext).unwrap(), x);
        }
    }
}
