use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::{gamma, Cokernel, GroupHom, ShortExactSeq, Subgroup};
use crate::abgroup::{FgAbGroup, GroupElement, Subquotient};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// The canonical resolution `0 -> F1 -> F0 -> H -> 0` with `F0 = Z^ngens` and
/// `F1 = Z^t` mapping generator `j` to `d_j e_j`.
#[derive(Clone, Debug)]
pub struct FreeResolution {
    f1: GroupHom,
    f0: GroupHom,
}

impl FreeResolution {
    pub fn new(h: &FgAbGroup) -> Self {
        let n = h.ngens();
        let t = h.torsion_len();
        let f0_group = FgAbGroup::free(n);
        let f1_group = FgAbGroup::free(t);
        let f1 = GroupHom::new(
            &f1_group,
            &f0_group,
            IntMatrix::diagonal(n, t, h.invariant_factors()),
        )
        .expect("free source");
        let f0 = GroupHom::new(&f0_group, h, IntMatrix::identity(n)).expect("free source");
        FreeResolution { f1, f0 }
    }

    pub fn f1(&self) -> &GroupHom {
        &self.f1
    }

    pub fn f0(&self) -> &GroupHom {
        &self.f0
    }

    pub fn sequence(&self) -> Result<ShortExactSeq> {
        ShortExactSeq::new(self.f1.clone(), self.f0.clone(), None)
    }
}

/// `Hom(G, H)` as a subquotient of `Z^(nH·nG)` (matrices stored column-major).
#[derive(Clone, Debug)]
pub struct HomGroup {
    source: FgAbGroup,
    target: FgAbGroup,
    sq: Subquotient,
}

impl HomGroup {
    pub fn new(g: &FgAbGroup, h: &FgAbGroup) -> Self {
        let (ng, nh) = (g.ngens(), h.ngens());
        let dim = ng * nh;
        let mut lattice = Vec::new();
        let mut rels = Vec::new();
        for j in 0..ng {
            let d = g.gen_order(j);
            for i in 0..nh {
                let e = h.gen_order(i);
                let slot = j * nh + i;
                // admissible values of entry (i, j): multiples of `scale`
                let scale = if d.is_zero() {
                    BigInt::from(1)
                } else if e.is_zero() {
                    BigInt::zero()
                } else {
                    &e / d.gcd(&e)
                };
                if !scale.is_zero() {
                    let mut v = vec![BigInt::zero(); dim];
                    v[slot] = scale;
                    lattice.push(v);
                }
                if !e.is_zero() {
                    let mut v = vec![BigInt::zero(); dim];
                    v[slot] = e;
                    rels.push(v);
                }
            }
        }
        let sq = Subquotient::new(
            &IntMatrix::from_columns(&lattice, dim),
            &IntMatrix::from_columns(&rels, dim),
        )
        .expect("diagonal lattices");
        HomGroup {
            source: g.clone(),
            target: h.clone(),
            sq,
        }
    }

    pub fn group(&self) -> &FgAbGroup {
        self.sq.group()
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn realize(&self, x: &GroupElement) -> Result<GroupHom> {
        self.group().check_member(x)?;
        let v = self.sq.representative(x);
        let nh = self.target.ngens();
        let mut m = IntMatrix::zeros(nh, self.source.ngens());
        for (k, val) in v.into_iter().enumerate() {
            m[(k % nh, k / nh)] = val;
        }
        GroupHom::new(&self.source, &self.target, m)
    }

    pub fn element_of(&self, f: &GroupHom) -> Result<GroupElement> {
        if f.source() != &self.source || f.target() != &self.target {
            return Err(Error::DimensionMismatch(format!(
                "map {} -> {} is not in Hom({}, {})",
                f.source(),
                f.target(),
                self.source,
                self.target
            )));
        }
        let m = f.matrix();
        let mut v = Vec::with_capacity(m.rows() * m.cols());
        for j in 0..m.cols() {
            v.extend(m.column(j));
        }
        self.sq.class_of(&v)
    }
}

/// `Hom((H, h), K) = {f : f(h) = 0}` inside `Hom(H, K)`.
#[derive(Clone, Debug)]
pub struct PointedHomGroup {
    hom: HomGroup,
    sub: Subgroup,
}

impl PointedHomGroup {
    pub fn new(h: &FgAbGroup, dist: &GroupElement, k: &FgAbGroup) -> Result<Self> {
        h.check_member(dist)?;
        let hom = HomGroup::new(h, k);
        let images: Result<Vec<GroupElement>> = hom
            .group()
            .generators()
            .iter()
            .map(|x| hom.realize(x)?.apply(dist))
            .collect();
        let ev = GroupHom::from_images(hom.group(), k, &images?)?;
        Ok(PointedHomGroup {
            sub: ev.kernel(),
            hom,
        })
    }

    pub fn group(&self) -> &FgAbGroup {
        self.sub.group()
    }

    pub fn hom_group(&self) -> &HomGroup {
        &self.hom
    }

    /// Inclusion into `Hom(H, K)`.
    pub fn inclusion(&self) -> &GroupHom {
        self.sub.inclusion()
    }

    pub fn realize(&self, x: &GroupElement) -> Result<GroupHom> {
        self.hom.realize(&self.sub.inclusion().apply(x)?)
    }
}

/// `Ext(H, K) = Hom(F1, K) / im Hom(F0, K) = ⊕_j K / d_j K`.
///
/// A cocycle is a list of `t` elements of `K`, one per torsion generator of `H`.
#[derive(Clone, Debug)]
pub struct ExtGroup {
    h: FgAbGroup,
    k: FgAbGroup,
    resolution: FreeResolution,
    sq: Subquotient,
}

fn block_relations(k: &FgAbGroup, blocks: usize, dim: usize) -> Vec<Vec<BigInt>> {
    let nk = k.ngens();
    let mut rels = Vec::new();
    for b in 0..blocks {
        for (i, e) in k.invariant_factors().iter().enumerate() {
            let mut v = vec![BigInt::zero(); dim];
            v[b * nk + i] = e.clone();
            rels.push(v);
        }
    }
    rels
}

fn check_cocycle(h: &FgAbGroup, k: &FgAbGroup, c: &[GroupElement]) -> Result<Vec<BigInt>> {
    if c.len() != h.torsion_len() {
        return Err(Error::DimensionMismatch(format!(
            "cocycle with {} entries for {} torsion generators",
            c.len(),
            h.torsion_len()
        )));
    }
    let mut v = Vec::with_capacity(c.len() * k.ngens());
    for x in c {
        k.check_member(x)?;
        v.extend(x.coords().iter().cloned());
    }
    Ok(v)
}

impl ExtGroup {
    pub fn new(h: &FgAbGroup, k: &FgAbGroup) -> Self {
        let nk = k.ngens();
        let t = h.torsion_len();
        let dim = nk * t;
        let mut rels = block_relations(k, t, dim);
        for (b, d) in h.invariant_factors().iter().enumerate() {
            for i in 0..nk {
                let mut v = vec![BigInt::zero(); dim];
                v[b * nk + i] = d.clone();
                rels.push(v);
            }
        }
        let sq = Subquotient::quotient_of_free(dim, &IntMatrix::from_columns(&rels, dim))
            .expect("dimensions agree");
        ExtGroup {
            h: h.clone(),
            k: k.clone(),
            resolution: FreeResolution::new(h),
            sq,
        }
    }

    pub fn group(&self) -> &FgAbGroup {
        self.sq.group()
    }

    /// The quotient argument `H`.
    pub fn h(&self) -> &FgAbGroup {
        &self.h
    }

    /// The kernel argument `K`.
    pub fn k(&self) -> &FgAbGroup {
        &self.k
    }

    pub fn resolution(&self) -> &FreeResolution {
        &self.resolution
    }

    pub fn class_of_cocycle(&self, c: &[GroupElement]) -> Result<GroupElement> {
        let v = check_cocycle(&self.h, &self.k, c)?;
        self.sq.class_of(&v)
    }

    pub fn cocycle_of(&self, x: &GroupElement) -> Result<Vec<GroupElement>> {
        self.group().check_member(x)?;
        let v = self.sq.representative(x);
        let nk = self.k.ngens();
        (0..self.h.torsion_len())
            .map(|b| self.k.element(v[b * nk..(b + 1) * nk].to_vec()))
            .collect()
    }

    /// An extension whose class is `x`, built as a push-out of the resolution.
    pub fn realize(&self, x: &GroupElement) -> Result<ShortExactSeq> {
        let c = self.cocycle_of(x)?;
        realize_from_cocycle(&self.resolution, &self.k, &c, None)
    }
}

pub(super) fn realize_from_cocycle(
    res: &FreeResolution,
    k: &FgAbGroup,
    c: &[GroupElement],
    pointed: Option<(&GroupElement, &GroupElement)>,
) -> Result<ShortExactSeq> {
    let cmap = GroupHom::from_images(res.f1().source(), k, c)?;
    let po = super::pushout(&cmap, res.f1())?;
    let h = res.f0().target();
    let surj = po.mediate(&GroupHom::zero(k, h), res.f0())?;
    let dist = match pointed {
        None => None,
        Some((hx, k0)) => {
            let xh = res.f0().source().element(hx.coords().to_vec())?;
            let g = po.i1().apply(k0)?.try_add(&po.i2().apply(&xh)?)?;
            Some((g, hx.clone()))
        }
    };
    ShortExactSeq::new(po.i1().clone(), surj, dist)
}

/// `Ext((H, h), K)`: pairs `(c, k0)` of a cocycle and an element of `K`, modulo
/// `{(φ∘f1, -φ(x_h)) : φ ∈ Hom(F0, K)}` where `x_h` are the coordinates of `h`.
#[derive(Clone, Debug)]
pub struct PointedExtGroup {
    h: FgAbGroup,
    dist: GroupElement,
    k: FgAbGroup,
    ext: ExtGroup,
    sq: Subquotient,
    structural: ShortExactSeq,
}

impl PointedExtGroup {
    pub fn new(h: &FgAbGroup, dist: &GroupElement, k: &FgAbGroup) -> Result<Self> {
        h.check_member(dist)?;
        let nk = k.ngens();
        let t = h.torsion_len();
        let dim = nk * (t + 1);
        let last = t * nk;
        let mut rels = block_relations(k, t + 1, dim);
        for j in 0..h.ngens() {
            let xj = &dist.coords()[j];
            if j >= t && xj.is_zero() {
                continue;
            }
            for i in 0..nk {
                let mut v = vec![BigInt::zero(); dim];
                if j < t {
                    v[j * nk + i] = h.gen_order(j);
                }
                v[last + i] = -xj;
                rels.push(v);
            }
        }
        let sq = Subquotient::quotient_of_free(dim, &IntMatrix::from_columns(&rels, dim))?;
        let ext = ExtGroup::new(h, k);

        let alpha_images: Result<Vec<GroupElement>> = k
            .generators()
            .iter()
            .map(|x| {
                let mut v = vec![BigInt::zero(); last];
                v.extend(x.coords().iter().cloned());
                sq.class_of(&v)
            })
            .collect();
        let alpha = GroupHom::from_images(k, sq.group(), &alpha_images?)?;
        let gamma_sub = gamma(h, dist, k)?;
        let quot = Cokernel::of_subgroup(&gamma_sub);
        let alpha_bar = quot.factor(&alpha)?;
        let beta_images: Result<Vec<GroupElement>> = sq
            .group()
            .generators()
            .iter()
            .map(|x| {
                let v = sq.representative(x);
                ext.sq.class_of(&v[..last])
            })
            .collect();
        let beta = GroupHom::from_images(sq.group(), ext.group(), &beta_images?)?;
        let structural = ShortExactSeq::new(alpha_bar, beta, None)?;
        Ok(PointedExtGroup {
            h: h.clone(),
            dist: dist.clone(),
            k: k.clone(),
            ext,
            sq,
            structural,
        })
    }

    pub fn group(&self) -> &FgAbGroup {
        self.sq.group()
    }

    pub fn h(&self) -> &FgAbGroup {
        &self.h
    }

    pub fn dist(&self) -> &GroupElement {
        &self.dist
    }

    pub fn k(&self) -> &FgAbGroup {
        &self.k
    }

    pub fn ext_group(&self) -> &ExtGroup {
        &self.ext
    }

    /// `0 -> K/{ψ(h)} -> Ext((H,h),K) -> Ext(H,K) -> 0`.
    pub fn structural_sequence(&self) -> &ShortExactSeq {
        &self.structural
    }

    pub fn class_of(&self, c: &[GroupElement], k0: &GroupElement) -> Result<GroupElement> {
        let mut v = check_cocycle(&self.h, &self.k, c)?;
        self.k.check_member(k0)?;
        v.extend(k0.coords().iter().cloned());
        self.sq.class_of(&v)
    }

    pub fn components_of(&self, x: &GroupElement) -> Result<(Vec<GroupElement>, GroupElement)> {
        self.group().check_member(x)?;
        let v = self.sq.representative(x);
        let nk = self.k.ngens();
        let t = self.h.torsion_len();
        let c: Result<Vec<GroupElement>> = (0..t)
            .map(|b| self.k.element(v[b * nk..(b + 1) * nk].to_vec()))
            .collect();
        Ok((c?, self.k.element(v[t * nk..].to_vec())?))
    }

    /// A pointed extension whose class is `x`.
    pub fn realize(&self, x: &GroupElement) -> Result<ShortExactSeq> {
        let (c, k0) = self.components_of(x)?;
        realize_from_cocycle(self.ext.resolution(), &self.k, &c, Some((&self.dist, &k0)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(orders: &[i64], r: usize) -> FgAbGroup {
        FgAbGroup::from_orders_i64(orders, r)
    }

    #[test]
    fn hom_groups() {
        let h = g(&[3], 1);
        assert_eq!(HomGroup::new(&FgAbGroup::free(1), &h).group(), &h);
        assert_eq!(HomGroup::new(&g(&[4], 0), &g(&[6], 0)).group(), &g(&[2], 0));
        assert!(HomGroup::new(&g(&[3], 0), &FgAbGroup::free(1)).group().is_trivial());
    }

    #[test]
    fn hom_realize_round_trip() {
        let hg = HomGroup::new(&g(&[2, 4], 1), &g(&[4], 1));
        for x in [vec![1, 0, 2, 1, 0, 3], vec![0, 1, 1, 0, 2, 2]] {
            let x = hg.group().element_i64(&x[..hg.group().ngens()]).unwrap();
            let f = hg.realize(&x).unwrap();
            assert_eq!(hg.element_of(&f).unwrap(), x);
        }
    }

    #[test]
    fn pointed_homs() {
        let z = FgAbGroup::free(1);
        let z4 = g(&[4], 0);
        let p = PointedHomGroup::new(&z, &z.zero(), &z4).unwrap();
        assert_eq!(p.group(), &z4);
        let p = PointedHomGroup::new(&z, &z.element_i64(&[1]).unwrap(), &z4).unwrap();
        assert!(p.group().is_trivial());
        let p = PointedHomGroup::new(&z, &z.element_i64(&[2]).unwrap(), &z4).unwrap();
        assert_eq!(p.group(), &g(&[2], 0));
    }

    #[test]
    fn ext_groups() {
        let z = FgAbGroup::free(1);
        assert!(ExtGroup::new(&z, &g(&[5], 2)).group().is_trivial());
        assert_eq!(ExtGroup::new(&g(&[2], 0), &g(&[4], 0)).group(), &g(&[2], 0));
        assert_eq!(ExtGroup::new(&g(&[6], 0), &z).group(), &g(&[6], 0));
    }

    #[test]
    fn pointed_ext_groups() {
        let z = FgAbGroup::free(1);
        let one = z.element_i64(&[1]).unwrap();
        let p = PointedExtGroup::new(&z, &one, &g(&[3], 1)).unwrap();
        assert!(p.group().is_trivial());
        let p = PointedExtGroup::new(&z, &z.zero(), &z).unwrap();
        assert_eq!(p.group(), &z);
        let z2 = g(&[2], 0);
        let p = PointedExtGroup::new(&z2, &z2.element_i64(&[1]).unwrap(), &z2).unwrap();
        assert_eq!(p.group(), &z2);
    }

    #[test]
    fn resolution_of_mixed_group() {
        let h = g(&[2], 1);
        let r = FreeResolution::new(&h);
        assert_eq!(r.f1().source(), &FgAbGroup::free(1));
        assert_eq!(r.f1().matrix(), &IntMatrix::from_i64(&[&[2], &[0]]));
        assert!(r.sequence().is_ok());
    }
}
