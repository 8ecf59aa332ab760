//! The unital UCT diagram: the computable left column and formal middle nodes.

use std::fmt;

use num_bigint::BigInt;

use crate::abgroup::{DirectSum, FgAbGroup, GroupElement};
use crate::error::{Error, Result};
use crate::homalg::{
    gamma, gamma_delta, Cokernel, ExtGroup, GroupHom, HomGroup, PointedExtGroup, PointedHomGroup,
    ShortExactSeq, Subgroup,
};

/// A node whose group is not computed, only the two ends of the extension it sits in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalNode {
    pub name: &'static str,
    pub sub: FgAbGroup,
    pub quotient: FgAbGroup,
}

impl FormalNode {
    /// `|sub| · |quotient|`, when both are finite.
    pub fn forced_order(&self) -> Option<BigInt> {
        Some(self.sub.order()? * self.quotient.order()?)
    }
}

#[derive(Clone, Debug)]
pub struct UctDiagram {
    k0a: FgAbGroup,
    unit_a: GroupElement,
    k1a: FgAbGroup,
    k0b: FgAbGroup,
    k1b: FgAbGroup,
    gamma: Subgroup,
    quotient: Cokernel,
    pext0: PointedExtGroup,
    ext1: ExtGroup,
    pointed_ext: DirectSum,
    plain_ext: DirectSum,
    phom0: PointedHomGroup,
    hom1: HomGroup,
    pointed_hom: DirectSum,
    left_column: ShortExactSeq,
    ext_us: FormalNode,
    ext_uw: FormalNode,
}

/// Builds every computable corner and checks the left column.
pub fn assemble_uct(
    k0a: &FgAbGroup,
    unit_a: &GroupElement,
    k1a: &FgAbGroup,
    k0b: &FgAbGroup,
    k1b: &FgAbGroup,
) -> Result<UctDiagram> {
    k0a.check_member(unit_a)?;
    let gamma_sub = gamma(k0a, unit_a, k0b)?;
    let quotient = Cokernel::of_subgroup(&gamma_sub);
    let pext0 = PointedExtGroup::new(k0a, unit_a, k0b)?;
    let ext1 = ExtGroup::new(k1a, k1b);
    let pointed_ext = DirectSum::new(&[pext0.group().clone(), ext1.group().clone()]);
    let plain_ext = DirectSum::new(&[pext0.ext_group().group().clone(), ext1.group().clone()]);
    let phom0 = PointedHomGroup::new(k0a, unit_a, k1b)?;
    let hom1 = HomGroup::new(k1a, k0b);
    let pointed_hom = DirectSum::new(&[phom0.group().clone(), hom1.group().clone()]);

    let structural = pext0.structural_sequence();
    if structural.left() != quotient.group() {
        return Err(Error::NotExact("K0(B)/Γ".into()));
    }
    let inj = pointed_ext.inclusion(0).compose(structural.inj())?;
    let surj = plain_ext
        .inclusion(0)
        .compose(structural.surj())?
        .compose(&pointed_ext.projection(0))?
        .add(&plain_ext.inclusion(1).compose(&pointed_ext.projection(1))?)?;
    let left_column = ShortExactSeq::new(inj, surj, None)?;

    let ext_us = FormalNode {
        name: "Ext_us",
        sub: pointed_ext.group().clone(),
        quotient: pointed_hom.group().clone(),
    };
    let ext_uw = FormalNode {
        name: "Ext_uw",
        sub: plain_ext.group().clone(),
        quotient: pointed_hom.group().clone(),
    };
    Ok(UctDiagram {
        k0a: k0a.clone(),
        unit_a: unit_a.clone(),
        k1a: k1a.clone(),
        k0b: k0b.clone(),
        k1b: k1b.clone(),
        gamma: gamma_sub,
        quotient,
        pext0,
        ext1,
        pointed_ext,
        plain_ext,
        phom0,
        hom1,
        pointed_hom,
        left_column,
        ext_us,
        ext_uw,
    })
}

impl UctDiagram {
    pub fn k0a(&self) -> &FgAbGroup {
        &self.k0a
    }

    pub fn unit_a(&self) -> &GroupElement {
        &self.unit_a
    }

    pub fn k1a(&self) -> &FgAbGroup {
        &self.k1a
    }

    pub fn k0b(&self) -> &FgAbGroup {
        &self.k0b
    }

    pub fn k1b(&self) -> &FgAbGroup {
        &self.k1b
    }

    /// `Γ` as a subgroup of `K0(B)`.
    pub fn gamma(&self) -> &Subgroup {
        &self.gamma
    }

    pub fn k0b_mod_gamma(&self) -> &FgAbGroup {
        self.quotient.group()
    }

    pub fn pointed_ext(&self) -> &FgAbGroup {
        self.pointed_ext.group()
    }

    pub fn plain_ext(&self) -> &FgAbGroup {
        self.plain_ext.group()
    }

    pub fn pointed_hom(&self) -> &FgAbGroup {
        self.pointed_hom.group()
    }

    pub fn pointed_ext_summands(&self) -> (&PointedExtGroup, &ExtGroup) {
        (&self.pext0, &self.ext1)
    }

    pub fn pointed_hom_summands(&self) -> (&PointedHomGroup, &HomGroup) {
        (&self.phom0, &self.hom1)
    }

    /// `0 -> K0(B)/Γ -> pointed Ext -> Ext -> 0`.
    pub fn left_column(&self) -> &ShortExactSeq {
        &self.left_column
    }

    pub fn ext_us(&self) -> &FormalNode {
        &self.ext_us
    }

    pub fn ext_uw(&self) -> &FormalNode {
        &self.ext_uw
    }

    /// Whether `Γ` lies in `Γ^δ` for the given boundary maps.
    pub fn gamma_within(&self, delta0: &GroupHom, delta1: &GroupHom) -> Result<bool> {
        if delta0.source() != &self.k0a || delta1.target() != &self.k0b {
            return Err(Error::EndMismatch("boundary maps do not match the diagram".into()));
        }
        Ok(gamma_delta(delta0, delta1, &self.unit_a)?.contains_subgroup(&self.gamma))
    }

    /// Map on the left column's middle group induced by re-classifying realized extensions.
    fn induced_pointed(
        &self,
        other: &UctDiagram,
        f0: &dyn Fn(&ShortExactSeq) -> Result<ShortExactSeq>,
        f1: &dyn Fn(&ShortExactSeq) -> Result<ShortExactSeq>,
    ) -> Result<GroupHom> {
        let images: Result<Vec<GroupElement>> = self
            .pointed_ext
            .group()
            .generators()
            .iter()
            .map(|x| {
                let parts = self.pointed_ext.components(x)?;
                let a = f0(&self.pext0.realize(&parts[0])?)?.pointed_ext_class_in(&other.pext0)?;
                let b = f1(&self.ext1.realize(&parts[1])?)?.ext_class_in(&other.ext1)?;
                other.pointed_ext.element(&[a, b])
            })
            .collect();
        GroupHom::from_images(self.pointed_ext.group(), other.pointed_ext.group(), &images?)
    }

    fn induced_plain(
        &self,
        other: &UctDiagram,
        f0: &dyn Fn(&ShortExactSeq) -> Result<ShortExactSeq>,
        f1: &dyn Fn(&ShortExactSeq) -> Result<ShortExactSeq>,
    ) -> Result<GroupHom> {
        let ext0 = self.pext0.ext_group();
        let images: Result<Vec<GroupElement>> = self
            .plain_ext
            .group()
            .generators()
            .iter()
            .map(|x| {
                let parts = self.plain_ext.components(x)?;
                let a = f0(&ext0.realize(&parts[0])?)?.ext_class_in(other.pext0.ext_group())?;
                let b = f1(&self.ext1.realize(&parts[1])?)?.ext_class_in(&other.ext1)?;
                other.plain_ext.element(&[a, b])
            })
            .collect();
        GroupHom::from_images(self.plain_ext.group(), other.plain_ext.group(), &images?)
    }
}

/// Maps between two diagrams for the naturality check.
#[derive(Clone, Copy, Debug)]
pub enum Naturality<'a> {
    /// `alpha0: (K0A', u') -> (K0A, u)` and `alpha1: K1A' -> K1A`; `source` is the
    /// diagram of the primed groups over the same B-groups.
    FirstVariable {
        source: &'a UctDiagram,
        alpha0: &'a GroupHom,
        alpha1: &'a GroupHom,
    },
    /// `beta0: K0B -> K0B'` and `beta1: K1B -> K1B'`; `target` has the same A-side.
    SecondVariable {
        target: &'a UctDiagram,
        beta0: &'a GroupHom,
        beta1: &'a GroupHom,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub node: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UctReport {
    pub checks: Vec<Check>,
}

impl UctReport {
    fn record(&mut self, node: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            node: node.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

impl fmt::Display for UctReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.passed { "ok" } else { "FAILED" };
            writeln!(f, "{}: {} {}", c.node, mark, c.detail)?;
        }
        Ok(())
    }
}

fn order_text(g: &FgAbGroup) -> String {
    g.order().map_or_else(|| "infinite".into(), |n| n.to_string())
}

/// Re-checks the left column and the cardinality identities, and the naturality
/// square when maps to or from a second diagram are given.
pub fn verify_uct(d: &UctDiagram, naturality: Option<Naturality<'_>>) -> UctReport {
    let mut report = UctReport::default();
    let col = &d.left_column;
    let exact = col.inj().is_injective()
        && col.surj().is_surjective()
        && col.inj().image().same_as(&col.surj().kernel())
        && col.left() == d.k0b_mod_gamma()
        && col.mid() == d.pointed_ext()
        && col.right() == d.plain_ext();
    report.record("left column", exact, "0 -> K0(B)/Γ -> pointed Ext -> Ext -> 0");

    let structural = d.pext0.structural_sequence();
    report.record(
        "pointed Ext (degree 0)",
        structural.inj().is_injective()
            && structural.surj().is_surjective()
            && structural.inj().image().same_as(&structural.surj().kernel()),
        "structural sequence",
    );

    let mut gamma_ok = d.gamma.ambient() == &d.k0b;
    if gamma_ok {
        let images: Vec<GroupElement> = HomGroup::new(&d.k0a, &d.k0b)
            .group()
            .generators()
            .iter()
            .filter_map(|x| HomGroup::new(&d.k0a, &d.k0b).realize(x).ok())
            .filter_map(|f| f.apply(&d.unit_a).ok())
            .collect();
        gamma_ok = images.iter().all(|y| d.gamma.contains(y));
    }
    report.record("Γ", gamma_ok, "generated by evaluations at the unit");

    let (p, q, e) = (d.pointed_ext(), d.k0b_mod_gamma(), d.plain_ext());
    if let (Some(np), Some(nq), Some(ne)) = (p.order(), q.order(), e.order()) {
        report.record(
            "pointed Ext",
            np == &nq * &ne,
            format!("|{}| = |{}| · |{}|", np, nq, ne),
        );
    }
    for (node, sub) in [(&d.ext_us, p), (&d.ext_uw, e)] {
        let consistent = &node.sub == sub && &node.quotient == d.pointed_hom();
        report.record(
            node.name,
            consistent,
            format!(
                "ends of order {} and {}",
                order_text(&node.sub),
                order_text(&node.quotient)
            ),
        );
    }
    if let (Some(us), Some(uw)) = (d.ext_us.forced_order(), d.ext_uw.forced_order()) {
        let nq = q.order().expect("finite whenever the pointed Ext is");
        report.record(
            "middle column",
            us == &nq * &uw,
            format!("|Ext_us| = {} and |K0(B)/Γ| · |Ext_uw| = {}", us, &nq * &uw),
        );
    }

    if let Some(n) = naturality {
        match naturality_square(d, n) {
            Ok(problems) if problems.is_empty() => report.record("naturality", true, "squares commute"),
            Ok(problems) => report.record("naturality", false, problems.join("; ")),
            Err(e) => report.record("naturality", false, e.to_string()),
        }
    }
    report
}

/// Returns the names of the squares that fail to commute.
fn naturality_square(d: &UctDiagram, n: Naturality<'_>) -> Result<Vec<String>> {
    // (from, to, left map, middle map, right map)
    let (from, to, left, mid, right) = match n {
        Naturality::FirstVariable {
            source,
            alpha0,
            alpha1,
        } => {
            if alpha0.target() != &d.k0a
                || alpha0.source() != &source.k0a
                || alpha1.target() != &d.k1a
                || alpha1.source() != &source.k1a
                || source.k0b != d.k0b
                || source.k1b != d.k1b
            {
                return Err(Error::EndMismatch("maps do not connect the two diagrams".into()));
            }
            if alpha0.apply(&source.unit_a)? != d.unit_a {
                return Err(Error::UnitIncompatible("alpha0 must carry the unit to the unit".into()));
            }
            let u = source.unit_a.clone();
            let f0 = move |s: &ShortExactSeq| match s.distinguished() {
                Some(_) => s.pull_back(alpha0, Some(&u)),
                None => s.pull_back(alpha0, None),
            };
            let f1 = |s: &ShortExactSeq| s.pull_back(alpha1, None);
            let left = source.quotient.projection().clone();
            let left = d.quotient.factor(&left)?;
            let mid = d.induced_pointed(source, &f0, &f1)?;
            let right = d.induced_plain(source, &f0, &f1)?;
            (d, source, left, mid, right)
        }
        Naturality::SecondVariable {
            target,
            beta0,
            beta1,
        } => {
            if beta0.source() != &d.k0b
                || beta0.target() != &target.k0b
                || beta1.source() != &d.k1b
                || beta1.target() != &target.k1b
                || target.k0a != d.k0a
                || target.k1a != d.k1a
                || target.unit_a != d.unit_a
            {
                return Err(Error::EndMismatch("maps do not connect the two diagrams".into()));
            }
            let f0 = |s: &ShortExactSeq| s.push_forward(beta0);
            let f1 = |s: &ShortExactSeq| s.push_forward(beta1);
            let left = d.quotient.factor(&target.quotient.projection().compose(beta0)?)?;
            let mid = d.induced_pointed(target, &f0, &f1)?;
            let right = d.induced_plain(target, &f0, &f1)?;
            (d, target, left, mid, right)
        }
    };
    let mut problems = Vec::new();
    let (c1, c2) = (&from.left_column, &to.left_column);
    if mid.compose(c1.inj())? != c2.inj().compose(&left)? {
        problems.push("K0(B)/Γ -> pointed Ext".to_string());
    }
    if right.compose(c1.surj())? != c2.surj().compose(&mid)? {
        problems.push("pointed Ext -> Ext".to_string());
    }
    Ok(problems)
}
