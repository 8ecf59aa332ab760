//! Finitely generated abelian groups in Smith-normal-form coordinates, their
//! elements, and subquotients of free lattices.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::homalg::GroupHom;
use crate::matrix::IntMatrix;
use crate::snf::{lattice_basis, smith_normal_form, Snf};

/// `Z/d_1 ⊕ ... ⊕ Z/d_k ⊕ Z^r` with `2 <= d_1 | d_2 | ... | d_k`.
///
/// Canonical generators are ordered torsion first, free last.
#[derive(Clone)]
pub struct FgAbGroup(Arc<GroupData>);

struct GroupData {
    invariant_factors: Vec<BigInt>,
    free_rank: usize,
    presentation: IntMatrix,
    cert_u: IntMatrix,
    cert_v: IntMatrix,
    // canonical coords <- presentation coords, and back
    to_canonical: IntMatrix,
    from_canonical: IntMatrix,
}

impl FgAbGroup {
    /// `Z^ngens / rowspan(relations)`.
    pub fn from_presentation(relations: &IntMatrix, ngens: usize) -> Result<Self> {
        if relations.cols() != ngens {
            return Err(Error::DimensionMismatch(format!(
                "relation matrix has {} columns but {} generators were given",
                relations.cols(),
                ngens
            )));
        }
        let snf = smith_normal_form(relations);
        let rank = snf.rank();
        let mut kept = Vec::new();
        let mut factors = Vec::new();
        for i in 0..rank {
            let d = &snf.d[(i, i)];
            if !d.is_one() {
                kept.push(i);
                factors.push(d.clone());
            }
        }
        kept.extend(rank..ngens);
        let to_canonical = snf.v.select_cols(&kept).transpose();
        let from_canonical = snf.v_inv.select_rows(&kept).transpose();
        Ok(FgAbGroup(Arc::new(GroupData {
            invariant_factors: factors,
            free_rank: ngens - rank,
            presentation: relations.clone(),
            cert_u: snf.u,
            cert_v: snf.v,
            to_canonical,
            from_canonical,
        })))
    }

    /// `⊕ Z/n_i ⊕ Z^free_rank`; the `n_i` need not form a divisibility chain.
    pub fn from_orders(orders: &[BigInt], free_rank: usize) -> Result<Self> {
        let n = orders.len() + free_rank;
        let rels = IntMatrix::diagonal(orders.len(), n, orders);
        Self::from_presentation(&rels, n)
    }

    pub fn from_orders_i64(orders: &[i64], free_rank: usize) -> Self {
        let orders: Vec<BigInt> = orders.iter().map(|&x| BigInt::from(x)).collect();
        Self::from_orders(&orders, free_rank).expect("diagonal presentation is well formed")
    }

    pub fn cyclic(n: i64) -> Self {
        Self::from_orders_i64(&[n], 0)
    }

    pub fn free(rank: usize) -> Self {
        Self::from_orders_i64(&[], rank)
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.0.invariant_factors
    }

    pub fn free_rank(&self) -> usize {
        self.0.free_rank
    }

    pub fn torsion_len(&self) -> usize {
        self.0.invariant_factors.len()
    }

    /// Number of canonical generators.
    pub fn ngens(&self) -> usize {
        self.torsion_len() + self.free_rank()
    }

    pub fn presentation(&self) -> &IntMatrix {
        &self.0.presentation
    }

    /// The unimodular pair `(U, V)` putting the presentation in Smith form.
    pub fn certificate(&self) -> (&IntMatrix, &IntMatrix) {
        (&self.0.cert_u, &self.0.cert_v)
    }

    /// Order of canonical generator `i`, zero for free generators.
    pub fn gen_order(&self, i: usize) -> BigInt {
        self.0
            .invariant_factors
            .get(i)
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn is_trivial(&self) -> bool {
        self.ngens() == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank() == 0
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite()
            .then(|| self.0.invariant_factors.iter().product())
    }

    /// Relation lattice in canonical coordinates: column `i` is `d_i e_i`.
    pub fn relation_lattice(&self) -> IntMatrix {
        IntMatrix::diagonal(self.ngens(), self.torsion_len(), &self.0.invariant_factors)
    }

    pub fn normalize(&self, coords: &mut [BigInt]) {
        for (c, d) in coords.iter_mut().zip(&self.0.invariant_factors) {
            *c = c.mod_floor(d);
        }
    }

    /// Element with the given canonical coordinates.
    pub fn element(&self, coords: Vec<BigInt>) -> Result<GroupElement> {
        if coords.len() != self.ngens() {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for a group with {} generators",
                coords.len(),
                self.ngens()
            )));
        }
        let mut coords = coords;
        self.normalize(&mut coords);
        Ok(GroupElement {
            group: self.clone(),
            coords,
        })
    }

    pub fn element_i64(&self, coords: &[i64]) -> Result<GroupElement> {
        self.element(coords.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// Element given in the coordinates of the original presentation.
    pub fn element_from_presentation(&self, coords: &[BigInt]) -> Result<GroupElement> {
        let c = self.0.to_canonical.mul_vec(coords)?;
        self.element(c)
    }

    /// Representative of `x` in the coordinates of the original presentation.
    pub fn presentation_coords(&self, x: &GroupElement) -> Vec<BigInt> {
        self.0
            .from_canonical
            .mul_vec(&x.coords)
            .expect("element belongs to this group")
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            group: self.clone(),
            coords: vec![BigInt::zero(); self.ngens()],
        }
    }

    pub fn generator(&self, i: usize) -> GroupElement {
        let mut coords = vec![BigInt::zero(); self.ngens()];
        coords[i] = BigInt::one();
        self.element(coords).expect("index in range")
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        (0..self.ngens()).map(|i| self.generator(i)).collect()
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        &x.group == self
    }

    pub fn check_member(&self, x: &GroupElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::ParentMismatch(format!(
                "element of {} used in {}",
                x.group, self
            )))
        }
    }

    /// All elements of a finite group, torsion coordinates in lexicographic order.
    pub fn enumerate_elements(&self) -> Result<ElementIter> {
        if !self.is_finite() {
            return Err(Error::InfiniteGroup);
        }
        Ok(ElementIter {
            group: self.clone(),
            next: Some(vec![BigInt::zero(); self.ngens()]),
        })
    }

    /// Canonical biproduct `self ⊕ other`.
    pub fn direct_sum(&self, other: &FgAbGroup) -> DirectSum {
        DirectSum::new(&[self.clone(), other.clone()])
    }
}

impl PartialEq for FgAbGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.free_rank == other.0.free_rank
                && self.0.invariant_factors == other.0.invariant_factors)
    }
}

impl Eq for FgAbGroup {}

impl Hash for FgAbGroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.invariant_factors.hash(state);
        self.0.free_rank.hash(state);
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self
            .0
            .invariant_factors
            .iter()
            .map(|d| format!("Z/{}", d))
            .collect();
        match self.free_rank() {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{}", r)),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgAbGroup({})", self)
    }
}

/// An element in canonical coordinates, torsion coordinates reduced.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    group: FgAbGroup,
    coords: Vec<BigInt>,
}

impl GroupElement {
    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Coordinates of the free part.
    pub fn free_part(&self) -> &[BigInt] {
        &self.coords[self.group.torsion_len()..]
    }

    pub fn normalized(&self) -> GroupElement {
        self.group
            .element(self.coords.clone())
            .expect("length already checked")
    }

    fn same_parent(&self, other: &GroupElement) -> Result<()> {
        if self.group == other.group {
            Ok(())
        } else {
            Err(Error::ParentMismatch(format!(
                "{} vs {}",
                self.group, other.group
            )))
        }
    }

    pub fn try_add(&self, other: &GroupElement) -> Result<GroupElement> {
        self.same_parent(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        self.group.element(coords)
    }

    pub fn try_sub(&self, other: &GroupElement) -> Result<GroupElement> {
        self.same_parent(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect();
        self.group.element(coords)
    }

    pub fn scale(&self, k: &BigInt) -> GroupElement {
        let coords = self.coords.iter().map(|a| a * k).collect();
        self.group.element(coords).expect("length unchanged")
    }

    /// Order of the element, zero if it has infinite order.
    pub fn order(&self) -> BigInt {
        if self.free_part().iter().any(|x| !x.is_zero()) {
            return BigInt::zero();
        }
        let mut ord = BigInt::one();
        for (c, d) in self.coords.iter().zip(self.group.invariant_factors()) {
            if !c.is_zero() {
                ord = ord.lcm(&(d / c.gcd(d)));
            }
        }
        ord
    }
}

impl Add for &GroupElement {
    type Output = GroupElement;
    fn add(self, rhs: &GroupElement) -> GroupElement {
        self.try_add(rhs).expect("elements of different groups")
    }
}

impl Sub for &GroupElement {
    type Output = GroupElement;
    fn sub(self, rhs: &GroupElement) -> GroupElement {
        self.try_sub(rhs).expect("elements of different groups")
    }
}

impl Neg for &GroupElement {
    type Output = GroupElement;
    fn neg(self) -> GroupElement {
        self.scale(&BigInt::from(-1))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", c.join(", "))
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.group)
    }
}

pub struct ElementIter {
    group: FgAbGroup,
    next: Option<Vec<BigInt>>,
}

impl Iterator for ElementIter {
    type Item = GroupElement;

    fn next(&mut self) -> Option<GroupElement> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let factors = self.group.invariant_factors();
        let mut pos = factors.len();
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            succ[pos] += 1;
            if succ[pos] < factors[pos] {
                self.next = Some(succ);
                break;
            }
            succ[pos] = BigInt::zero();
        }
        Some(GroupElement {
            group: self.group.clone(),
            coords: cur,
        })
    }
}

/// `L/N` for lattices `N ⊆ L ⊆ Z^dim`, with its canonical group.
#[derive(Clone, Debug)]
pub struct Subquotient {
    group: FgAbGroup,
    dim: usize,
    // basis of L as columns with its Smith form; `None` when L = Z^dim
    basis: Option<(IntMatrix, Snf)>,
}

impl Subquotient {
    /// `L/N` with `L` spanned by the columns of `lattice` and `relations`,
    /// `N` by the columns of `relations`.
    pub fn new(lattice: &IntMatrix, relations: &IntMatrix) -> Result<Self> {
        let dim = lattice.rows();
        let basis = lattice_basis(&lattice.hstack(relations)?);
        let snf = smith_normal_form(&basis);
        let l = basis.cols();
        let mut rel_rows = Vec::with_capacity(relations.cols());
        for j in 0..relations.cols() {
            let c = snf
                .solve(&relations.column(j))
                .expect("relations lie in the lattice they span");
            rel_rows.push(c);
        }
        let rels = IntMatrix::from_rows(&rel_rows, l)?;
        Ok(Subquotient {
            group: FgAbGroup::from_presentation(&rels, l)?,
            dim,
            basis: Some((basis, snf)),
        })
    }

    /// `Z^dim / N` with `N` spanned by the columns of `relations`.
    pub fn quotient_of_free(dim: usize, relations: &IntMatrix) -> Result<Self> {
        if relations.rows() != dim {
            return Err(Error::DimensionMismatch(format!(
                "relations of length {} in Z^{}",
                relations.rows(),
                dim
            )));
        }
        Ok(Subquotient {
            group: FgAbGroup::from_presentation(&relations.transpose(), dim)?,
            dim,
            basis: None,
        })
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Class of an ambient vector; fails if the vector is outside `L`.
    pub fn class_of(&self, v: &[BigInt]) -> Result<GroupElement> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in Z^{}",
                v.len(),
                self.dim
            )));
        }
        match &self.basis {
            None => self.group.element_from_presentation(v),
            Some((_, snf)) => {
                let c = snf.solve(v).ok_or(Error::NotInLattice)?;
                self.group.element_from_presentation(&c)
            }
        }
    }

    pub fn representative(&self, x: &GroupElement) -> Vec<BigInt> {
        let c = self.group.presentation_coords(x);
        match &self.basis {
            None => c,
            Some((b, _)) => b.mul_vec(&c).expect("basis coordinates fit"),
        }
    }
}

/// Biproduct of finitely many groups with inclusions and projections.
#[derive(Clone, Debug)]
pub struct DirectSum {
    sq: Subquotient,
    summands: Vec<FgAbGroup>,
    offsets: Vec<usize>,
}

impl DirectSum {
    pub fn new(summands: &[FgAbGroup]) -> Self {
        let mut offsets = Vec::with_capacity(summands.len());
        let mut total = 0;
        for g in summands {
            offsets.push(total);
            total += g.ngens();
        }
        let ntors: usize = summands.iter().map(|g| g.torsion_len()).sum();
        let mut rels = IntMatrix::zeros(total, ntors);
        let mut col = 0;
        for (g, &off) in summands.iter().zip(&offsets) {
            for (i, d) in g.invariant_factors().iter().enumerate() {
                rels[(off + i, col)] = d.clone();
                col += 1;
            }
        }
        DirectSum {
            sq: Subquotient::quotient_of_free(total, &rels).expect("dimensions agree"),
            summands: summands.to_vec(),
            offsets,
        }
    }

    pub fn group(&self) -> &FgAbGroup {
        self.sq.group()
    }

    pub fn summands(&self) -> &[FgAbGroup] {
        &self.summands
    }

    /// The element with the given components.
    pub fn element(&self, parts: &[GroupElement]) -> Result<GroupElement> {
        if parts.len() != self.summands.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} components for {} summands",
                parts.len(),
                self.summands.len()
            )));
        }
        let mut v = Vec::with_capacity(self.sq.ambient_dim());
        for (p, g) in parts.iter().zip(&self.summands) {
            g.check_member(p)?;
            v.extend(p.coords().iter().cloned());
        }
        self.sq.class_of(&v)
    }

    pub fn components(&self, x: &GroupElement) -> Result<Vec<GroupElement>> {
        self.group().check_member(x)?;
        let v = self.sq.representative(x);
        self.summands
            .iter()
            .zip(&self.offsets)
            .map(|(g, &off)| g.element(v[off..off + g.ngens()].to_vec()))
            .collect()
    }

    pub fn inclusion(&self, k: usize) -> GroupHom {
        let g = &self.summands[k];
        let images: Vec<GroupElement> = g
            .generators()
            .into_iter()
            .map(|x| {
                let mut parts: Vec<GroupElement> = self.summands.iter().map(|s| s.zero()).collect();
                parts[k] = x;
                self.element(&parts).expect("components are members")
            })
            .collect();
        GroupHom::from_images(g, self.group(), &images).expect("inclusion is well defined")
    }

    pub fn projection(&self, k: usize) -> GroupHom {
        let images: Vec<GroupElement> = self
            .group()
            .generators()
            .iter()
            .map(|x| self.components(x).expect("member").swap_remove(k))
            .collect();
        GroupHom::from_images(self.group(), &self.summands[k], &images)
            .expect("projection is well defined")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn presentations() {
        let g = FgAbGroup::from_presentation(&IntMatrix::from_i64(&[&[2]]), 1).unwrap();
        assert_eq!(g, FgAbGroup::cyclic(2));
        let g = FgAbGroup::from_presentation(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]]), 2).unwrap();
        assert_eq!(g.invariant_factors(), &[big(6)]);
        assert_eq!(g.free_rank(), 0);
        let g = FgAbGroup::from_presentation(&IntMatrix::zeros(0, 2), 2).unwrap();
        assert_eq!(g, FgAbGroup::free(2));
        assert!(FgAbGroup::from_presentation(&IntMatrix::from_i64(&[&[1, 2]]), 3).is_err());
    }

    #[test]
    fn presentation_coordinates_round_trip() {
        let g = FgAbGroup::from_presentation(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]]), 2).unwrap();
        let x = g.element_from_presentation(&[big(1), big(1)]).unwrap();
        assert_eq!(x.order(), big(6));
        let back = g.presentation_coords(&x);
        assert_eq!(g.element_from_presentation(&back).unwrap(), x);
    }

    #[test]
    fn arithmetic() {
        let z4 = FgAbGroup::cyclic(4);
        let three = z4.element_i64(&[3]).unwrap();
        assert_eq!(&three + &three, z4.element_i64(&[2]).unwrap());
        assert!((&three + &(-&three)).is_zero());
        let z2 = FgAbGroup::free(2);
        let v = z2.element_i64(&[1, -1]).unwrap();
        assert_eq!(v.scale(&big(2)), z2.element_i64(&[2, -2]).unwrap());
        assert!(three.try_add(&v).is_err());
    }

    #[test]
    fn enumeration() {
        assert_eq!(FgAbGroup::cyclic(3).enumerate_elements().unwrap().count(), 3);
        assert_eq!(FgAbGroup::trivial().enumerate_elements().unwrap().count(), 1);
        let v4 = FgAbGroup::from_orders_i64(&[2, 2], 0);
        let all: Vec<_> = v4.enumerate_elements().unwrap().collect();
        assert_eq!(all.len(), 4);
        assert!(matches!(
            FgAbGroup::free(1).enumerate_elements(),
            Err(Error::InfiniteGroup)
        ));
    }

    #[test]
    fn sums() {
        let s = FgAbGroup::free(1).direct_sum(&FgAbGroup::cyclic(2));
        assert_eq!(s.group().invariant_factors(), &[big(2)]);
        assert_eq!(s.group().free_rank(), 1);
        let s = FgAbGroup::cyclic(2).direct_sum(&FgAbGroup::cyclic(4));
        assert_eq!(s.group().invariant_factors(), &[big(2), big(4)]);
        let g = FgAbGroup::from_orders_i64(&[6], 1);
        let s = g.direct_sum(&FgAbGroup::trivial());
        assert_eq!(s.group(), &g);
        let inc = s.inclusion(0);
        assert!(inc.is_isomorphism());
    }

    #[test]
    fn biproduct_identities() {
        let s = FgAbGroup::cyclic(2).direct_sum(&FgAbGroup::cyclic(3));
        let (i0, i1, p0, p1) = (s.inclusion(0), s.inclusion(1), s.projection(0), s.projection(1));
        assert!(p0.compose(&i0).unwrap().is_identity());
        assert!(p1.compose(&i1).unwrap().is_identity());
        assert!(p1.compose(&i0).unwrap().is_zero());
        let sum = i0
            .compose(&p0)
            .unwrap()
            .add(&i1.compose(&p1).unwrap())
            .unwrap();
        assert!(sum.is_identity());
    }

    #[test]
    fn subquotient_classes() {
        // L = 2Z ⊕ Z, N = 4Z ⊕ 0 gives Z/2 ⊕ Z
        let l = IntMatrix::from_i64(&[&[2, 0], &[0, 1]]);
        let n = IntMatrix::from_i64(&[&[4], &[0]]);
        let sq = Subquotient::new(&l, &n).unwrap();
        assert_eq!(sq.group(), &FgAbGroup::from_orders_i64(&[2], 1));
        assert!(sq.class_of(&[big(1), big(0)]).is_err());
        let x = sq.class_of(&[big(6), big(5)]).unwrap();
        let r = sq.representative(&x);
        assert_eq!(sq.class_of(&r).unwrap(), x);
        assert!(sq.class_of(&[big(4), big(0)]).unwrap().is_zero());
    }
}
