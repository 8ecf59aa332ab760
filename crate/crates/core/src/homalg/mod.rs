//! Homomorphisms, kernels and cokernels, pull-backs and push-outs, Hom and Ext.

mod functors;
mod gamma;
mod sequence;

pub use functors::{ExtGroup, FreeResolution, HomGroup, PointedExtGroup, PointedHomGroup};
pub use gamma::{
    gamma, gamma_delta, resolve_pushout_lift, solve_hom_constraints, AffineHomSolution,
    HomConstraint, PushoutLift,
};
pub use sequence::ShortExactSeq;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::abgroup::{DirectSum, FgAbGroup, GroupElement, Subquotient};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::snf::{kernel_modulo, smith_normal_form, solve_modulo};

/// A homomorphism between canonical groups. Column `j` of the matrix holds the
/// image of source generator `j`; torsion rows are kept reduced.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupHom {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: IntMatrix,
}

impl GroupHom {
    /// Checks well-definedness: `d_j` times column `j` must vanish in the target.
    pub fn new(source: &FgAbGroup, target: &FgAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.ngens() || matrix.cols() != source.ngens() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for a map {} -> {}",
                matrix.rows(),
                matrix.cols(),
                source,
                target
            )));
        }
        let mut matrix = matrix;
        let tf = target.invariant_factors();
        for j in 0..source.torsion_len() {
            let d = source.gen_order(j);
            for i in 0..target.ngens() {
                let ok = match tf.get(i) {
                    Some(e) => (&d * &matrix[(i, j)]).is_multiple_of(e),
                    None => matrix[(i, j)].is_zero(),
                };
                if !ok {
                    return Err(Error::NotWellDefined(format!(
                        "generator {} of order {} in {} cannot map to column {:?} of {}",
                        j,
                        d,
                        source,
                        matrix.column(j).iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                        target
                    )));
                }
            }
        }
        for (i, e) in tf.iter().enumerate() {
            for j in 0..source.ngens() {
                let r = matrix[(i, j)].mod_floor(e);
                matrix[(i, j)] = r;
            }
        }
        Ok(GroupHom {
            source: source.clone(),
            target: target.clone(),
            matrix,
        })
    }

    /// The homomorphism sending canonical generator `j` of `source` to `images[j]`.
    pub fn from_images(
        source: &FgAbGroup,
        target: &FgAbGroup,
        images: &[GroupElement],
    ) -> Result<Self> {
        if images.len() != source.ngens() {
            return Err(Error::DimensionMismatch(format!(
                "{} images for {} generators",
                images.len(),
                source.ngens()
            )));
        }
        for x in images {
            target.check_member(x)?;
        }
        let cols: Vec<Vec<BigInt>> = images.iter().map(|x| x.coords().to_vec()).collect();
        Self::new(source, target, IntMatrix::from_columns(&cols, target.ngens()))
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        GroupHom {
            source: g.clone(),
            target: g.clone(),
            matrix: IntMatrix::identity(g.ngens()),
        }
    }

    pub fn zero(source: &FgAbGroup, target: &FgAbGroup) -> Self {
        GroupHom {
            source: source.clone(),
            target: target.clone(),
            matrix: IntMatrix::zeros(target.ngens(), source.ngens()),
        }
    }

    /// The map `Z -> g` sending `1` to `x`.
    pub fn from_element(x: &GroupElement) -> Self {
        GroupHom::from_images(&FgAbGroup::free(1), x.group(), std::slice::from_ref(x))
            .expect("free source")
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &GroupElement) -> Result<GroupElement> {
        self.source.check_member(x)?;
        let y = self.matrix.mul_vec(x.coords())?;
        self.target.element(y)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &GroupHom) -> Result<GroupHom> {
        if inner.target != self.source {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose {} -> {} after {} -> {}",
                self.source, self.target, inner.source, inner.target
            )));
        }
        GroupHom::new(&inner.source, &self.target, self.matrix.mul(&inner.matrix)?)
    }

    fn same_ends(&self, other: &GroupHom) -> Result<()> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::DimensionMismatch(format!(
                "maps {} -> {} and {} -> {}",
                self.source, self.target, other.source, other.target
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &GroupHom) -> Result<GroupHom> {
        self.same_ends(other)?;
        GroupHom::new(&self.source, &self.target, self.matrix.add(&other.matrix)?)
    }

    pub fn sub(&self, other: &GroupHom) -> Result<GroupHom> {
        self.same_ends(other)?;
        GroupHom::new(&self.source, &self.target, self.matrix.sub(&other.matrix)?)
    }

    pub fn neg(&self) -> GroupHom {
        GroupHom::new(&self.source, &self.target, self.matrix.neg()).expect("negation is well defined")
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.matrix == IntMatrix::identity(self.source.ngens())
    }

    /// Images of the canonical generators.
    pub fn images(&self) -> Vec<GroupElement> {
        (0..self.source.ngens())
            .map(|j| {
                self.target
                    .element(self.matrix.column(j))
                    .expect("column length matches")
            })
            .collect()
    }

    pub fn kernel(&self) -> Subgroup {
        let l = kernel_modulo(&self.matrix, &self.target.relation_lattice());
        let sq = Subquotient::new(&l, &self.source.relation_lattice())
            .expect("kernel lattice contains the source relations");
        Subgroup::from_subquotient(&sq, &self.source)
    }

    pub fn image(&self) -> Subgroup {
        Subgroup::generated_by(&self.target, &self.images()).expect("images lie in the target")
    }

    pub fn cokernel(&self) -> Cokernel {
        let rels = self
            .matrix
            .hstack(&self.target.relation_lattice())
            .expect("row counts agree");
        let sq = Subquotient::quotient_of_free(self.target.ngens(), &rels).expect("dimensions agree");
        Cokernel::from_subquotient(sq, &self.target)
    }

    /// Some `a` with `self(a) = b`.
    pub fn preimage(&self, b: &GroupElement) -> Option<GroupElement> {
        if !self.target.contains(b) {
            return None;
        }
        let x = solve_modulo(&self.matrix, &self.target.relation_lattice(), b.coords())?;
        self.source.element(x).ok()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().group().is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        let full = self
            .matrix
            .hstack(&self.target.relation_lattice())
            .expect("row counts agree");
        let snf = smith_normal_form(&full);
        snf.rank() == self.target.ngens() && snf.diagonal().iter().all(One::is_one)
    }

    // A surjective endomorphism of a finitely generated abelian group is injective,
    // so between isomorphic groups surjectivity suffices.
    pub fn is_isomorphism(&self) -> bool {
        self.source == self.target && self.is_surjective()
    }

    pub fn inverse(&self) -> Result<GroupHom> {
        if !self.is_isomorphism() {
            return Err(Error::NotIsomorphism(format!(
                "{} -> {}",
                self.source, self.target
            )));
        }
        let images: Vec<GroupElement> = self
            .target
            .generators()
            .iter()
            .map(|y| self.preimage(y).expect("surjective"))
            .collect();
        GroupHom::from_images(&self.target, &self.source, &images)
    }
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupHom({} -> {}, {})", self.source, self.target, self.matrix)
    }
}

/// A subgroup, always carried by an injective homomorphism.
#[derive(Clone, Debug)]
pub struct Subgroup {
    group: FgAbGroup,
    inclusion: GroupHom,
}

impl Subgroup {
    fn from_subquotient(sq: &Subquotient, ambient: &FgAbGroup) -> Self {
        let images: Vec<GroupElement> = sq
            .group()
            .generators()
            .iter()
            .map(|x| {
                ambient
                    .element(sq.representative(x))
                    .expect("representative has ambient length")
            })
            .collect();
        let inclusion =
            GroupHom::from_images(sq.group(), ambient, &images).expect("inclusion is well defined");
        Subgroup {
            group: sq.group().clone(),
            inclusion,
        }
    }

    pub fn generated_by(ambient: &FgAbGroup, gens: &[GroupElement]) -> Result<Self> {
        for g in gens {
            ambient.check_member(g)?;
        }
        let cols: Vec<Vec<BigInt>> = gens.iter().map(|x| x.coords().to_vec()).collect();
        let l = IntMatrix::from_columns(&cols, ambient.ngens());
        let sq = Subquotient::new(&l, &ambient.relation_lattice())?;
        Ok(Self::from_subquotient(&sq, ambient))
    }

    pub fn whole(g: &FgAbGroup) -> Self {
        Subgroup {
            group: g.clone(),
            inclusion: GroupHom::identity(g),
        }
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn ambient(&self) -> &FgAbGroup {
        self.inclusion.target()
    }

    pub fn inclusion(&self) -> &GroupHom {
        &self.inclusion
    }

    /// Images of the subgroup generators in the ambient group.
    pub fn generators(&self) -> Vec<GroupElement> {
        self.inclusion.images()
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.coords_of(x).is_some()
    }

    /// The element of the subgroup mapping to `x`.
    pub fn coords_of(&self, x: &GroupElement) -> Option<GroupElement> {
        self.inclusion.preimage(x)
    }

    pub fn contains_subgroup(&self, other: &Subgroup) -> bool {
        other.ambient() == self.ambient() && other.generators().iter().all(|x| self.contains(x))
    }

    pub fn same_as(&self, other: &Subgroup) -> bool {
        self.contains_subgroup(other) && other.contains_subgroup(self)
    }

    /// Factor `f` through the inclusion; fails if the image of `f` leaves the subgroup.
    pub fn corestrict(&self, f: &GroupHom) -> Result<GroupHom> {
        if f.target() != self.ambient() {
            return Err(Error::TargetMismatch(format!(
                "{} is not the ambient group {}",
                f.target(),
                self.ambient()
            )));
        }
        let images: Option<Vec<GroupElement>> =
            f.images().iter().map(|y| self.coords_of(y)).collect();
        let images = images.ok_or_else(|| {
            Error::NoPreimage("image of the map is not contained in the subgroup".into())
        })?;
        GroupHom::from_images(f.source(), &self.group, &images)
    }
}

/// A quotient `target / image` with its projection.
#[derive(Clone, Debug)]
pub struct Cokernel {
    sq: Subquotient,
    projection: GroupHom,
}

impl Cokernel {
    fn from_subquotient(sq: Subquotient, ambient: &FgAbGroup) -> Self {
        let images: Vec<GroupElement> = ambient
            .generators()
            .iter()
            .map(|x| sq.class_of(x.coords()).expect("quotient of free module"))
            .collect();
        let projection =
            GroupHom::from_images(ambient, sq.group(), &images).expect("projection is well defined");
        Cokernel { sq, projection }
    }

    /// Quotient of `g` by a subgroup.
    pub fn of_subgroup(sub: &Subgroup) -> Self {
        sub.inclusion().cokernel()
    }

    pub fn group(&self) -> &FgAbGroup {
        self.sq.group()
    }

    pub fn projection(&self) -> &GroupHom {
        &self.projection
    }

    /// A preimage of `x` under the projection.
    pub fn lift(&self, x: &GroupElement) -> Result<GroupElement> {
        self.group().check_member(x)?;
        self.projection.source().element(self.sq.representative(x))
    }

    /// The map out of the quotient induced by `h`; `h` must kill the image.
    pub fn factor(&self, h: &GroupHom) -> Result<GroupHom> {
        if h.source() != self.projection.source() {
            return Err(Error::SourceMismatch(format!(
                "{} is not the quotiented group {}",
                h.source(),
                self.projection.source()
            )));
        }
        let images: Result<Vec<GroupElement>> = self
            .group()
            .generators()
            .iter()
            .map(|x| h.apply(&self.lift(x)?))
            .collect();
        GroupHom::from_images(self.group(), h.target(), &images?)
    }
}

/// `P = {(a, b) : f(a) = g(b)}`.
#[derive(Clone, Debug)]
pub struct Pullback {
    sum: DirectSum,
    sub: Subgroup,
    p1: GroupHom,
    p2: GroupHom,
    f: GroupHom,
    g: GroupHom,
}

pub fn pullback(f: &GroupHom, g: &GroupHom) -> Result<Pullback> {
    if f.target() != g.target() {
        return Err(Error::TargetMismatch(format!(
            "{} vs {}",
            f.target(),
            g.target()
        )));
    }
    let sum = f.source().direct_sum(g.source());
    let diff = f
        .compose(&sum.projection(0))?
        .sub(&g.compose(&sum.projection(1))?)?;
    let sub = diff.kernel();
    let p1 = sum.projection(0).compose(sub.inclusion())?;
    let p2 = sum.projection(1).compose(sub.inclusion())?;
    Ok(Pullback {
        sum,
        sub,
        p1,
        p2,
        f: f.clone(),
        g: g.clone(),
    })
}

impl Pullback {
    pub fn group(&self) -> &FgAbGroup {
        self.sub.group()
    }

    pub fn p1(&self) -> &GroupHom {
        &self.p1
    }

    pub fn p2(&self) -> &GroupHom {
        &self.p2
    }

    /// The pair `(a, b)`; fails unless `f(a) = g(b)`.
    pub fn element(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        if self.f.apply(a)? != self.g.apply(b)? {
            return Err(Error::NoPreimage("pair does not lie in the pull-back".into()));
        }
        let x = self.sum.element(&[a.clone(), b.clone()])?;
        Ok(self.sub.coords_of(&x).expect("pair lies in the kernel"))
    }

    /// The map `X -> P` induced by `u: X -> A`, `v: X -> B` with `f∘u = g∘v`.
    pub fn mediate(&self, u: &GroupHom, v: &GroupHom) -> Result<GroupHom> {
        if u.source() != v.source() {
            return Err(Error::SourceMismatch(format!("{} vs {}", u.source(), v.source())));
        }
        let into_sum = self
            .sum
            .inclusion(0)
            .compose(u)?
            .add(&self.sum.inclusion(1).compose(v)?)?;
        self.sub.corestrict(&into_sum)
    }
}

/// `P = (A ⊕ B) / {(f(x), -g(x))}`.
#[derive(Clone, Debug)]
pub struct Pushout {
    sum: DirectSum,
    coker: Cokernel,
    i1: GroupHom,
    i2: GroupHom,
}

pub fn pushout(f: &GroupHom, g: &GroupHom) -> Result<Pushout> {
    if f.source() != g.source() {
        return Err(Error::SourceMismatch(format!(
            "{} vs {}",
            f.source(),
            g.source()
        )));
    }
    let sum = f.target().direct_sum(g.target());
    let h = sum
        .inclusion(0)
        .compose(f)?
        .sub(&sum.inclusion(1).compose(g)?)?;
    let coker = h.cokernel();
    let i1 = coker.projection().compose(&sum.inclusion(0))?;
    let i2 = coker.projection().compose(&sum.inclusion(1))?;
    Ok(Pushout { sum, coker, i1, i2 })
}

impl Pushout {
    pub fn group(&self) -> &FgAbGroup {
        self.coker.group()
    }

    pub fn i1(&self) -> &GroupHom {
        &self.i1
    }

    pub fn i2(&self) -> &GroupHom {
        &self.i2
    }

    /// The map `P -> X` induced by `u: A -> X`, `v: B -> X` with `u∘f = v∘g`.
    pub fn mediate(&self, u: &GroupHom, v: &GroupHom) -> Result<GroupHom> {
        if u.target() != v.target() {
            return Err(Error::TargetMismatch(format!("{} vs {}", u.target(), v.target())));
        }
        let out_of_sum = u
            .compose(&self.sum.projection(0))?
            .add(&v.compose(&self.sum.projection(1))?)?;
        self.coker.factor(&out_of_sum)
    }
}

/// Whether `im f = ker g` for composable `f`, `g`.
pub fn is_exact_at(f: &GroupHom, g: &GroupHom) -> bool {
    if f.target() != g.source() {
        return false;
    }
    match g.compose(f) {
        Ok(c) if c.is_zero() => {}
        _ => return false,
    }
    g.kernel()
        .generators()
        .iter()
        .all(|x| f.preimage(x).is_some())
}
