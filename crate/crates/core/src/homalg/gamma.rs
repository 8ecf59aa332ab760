use super::{pushout, Cokernel, FreeResolution, GroupHom, HomGroup, ShortExactSeq, Subgroup};
use crate::abgroup::{DirectSum, FgAbGroup, GroupElement};
use crate::error::{Error, Result};

/// `{ψ(u) : ψ ∈ Hom(A, B)}` as a subgroup of `B`.
pub fn gamma(a: &FgAbGroup, unit: &GroupElement, b: &FgAbGroup) -> Result<Subgroup> {
    a.check_member(unit)?;
    let hom = HomGroup::new(a, b);
    let images: Result<Vec<GroupElement>> = hom
        .group()
        .generators()
        .iter()
        .map(|x| hom.realize(x)?.apply(unit))
        .collect();
    Subgroup::generated_by(b, &images?)
}

/// The preimage under `K0B -> coker δ1` of `{φ(u) : φ ∈ Hom(ker δ0, coker δ1)}`.
pub fn gamma_delta(delta0: &GroupHom, delta1: &GroupHom, unit: &GroupElement) -> Result<Subgroup> {
    let image = delta0.apply(unit)?;
    if !image.is_zero() {
        return Err(Error::UnitNotInKernel);
    }
    let kd = delta0.kernel();
    let u = kd.coords_of(unit).expect("unit lies in the kernel");
    let cd = delta1.cokernel();
    let inner = gamma(kd.group(), &u, cd.group())?;
    let q2 = Cokernel::of_subgroup(&inner);
    Ok(q2.projection().compose(cd.projection())?.kernel())
}

/// Output of the push-out construction lifting `ψ: K0A -> coker δ1`.
#[derive(Clone, Debug)]
pub struct PushoutLift {
    pub sequence: ShortExactSeq,
    pub phi: GroupHom,
    pub coker: Cokernel,
}

impl PushoutLift {
    pub fn group(&self) -> &FgAbGroup {
        self.sequence.mid()
    }

    pub fn inclusion(&self) -> &GroupHom {
        self.sequence.inj()
    }

    pub fn onto(&self) -> &GroupHom {
        self.sequence.surj()
    }
}

/// Given `δ1: K1A -> K0B` and `ψ: K0A -> coker δ1`, builds `0 -> K1A -> G -> K0A -> 0`
/// and `φ: G -> K0B` with `φ∘into = δ1` and `q∘φ = ψ∘onto`.
pub fn resolve_pushout_lift(delta1: &GroupHom, psi: &GroupHom) -> Result<PushoutLift> {
    let coker = delta1.cokernel();
    if psi.target() != coker.group() {
        return Err(Error::TargetMismatch(format!(
            "{} is not coker δ1 = {}",
            psi.target(),
            coker.group()
        )));
    }
    let a0 = psi.source();
    let a1 = delta1.source();
    let res = FreeResolution::new(a0);
    let psi0_images: Result<Vec<GroupElement>> = res
        .f0()
        .images()
        .iter()
        .map(|x| coker.lift(&psi.apply(x)?))
        .collect();
    let psi0 = GroupHom::from_images(res.f0().source(), delta1.target(), &psi0_images?)?;
    let psi1_images: Result<Vec<GroupElement>> = res
        .f1()
        .images()
        .iter()
        .map(|r| {
            let y = psi0.apply(r)?;
            delta1
                .preimage(&y)
                .ok_or_else(|| Error::NoPreimage("lift does not factor through δ1".into()))
        })
        .collect();
    let psi1 = GroupHom::from_images(res.f1().source(), a1, &psi1_images?)?;
    let po = pushout(&psi1, res.f1())?;
    let onto = po.mediate(&GroupHom::zero(a1, a0), res.f0())?;
    let phi = po.mediate(delta1, &psi0)?;
    let sequence = ShortExactSeq::new(po.i1().clone(), onto, None)?;
    Ok(PushoutLift {
        sequence,
        phi,
        coker,
    })
}

/// A linear condition on an unknown `f ∈ Hom(X, Y)`.
#[derive(Clone, Debug)]
pub enum HomConstraint {
    /// `f(at) = value`
    Eval { at: GroupElement, value: GroupElement },
    /// `f ∘ inner = value`
    Pre { inner: GroupHom, value: GroupHom },
    /// `outer ∘ f = value`
    Post { outer: GroupHom, value: GroupHom },
}

/// All solutions of a constraint system: `particular + kernel`.
#[derive(Clone, Debug)]
pub struct AffineHomSolution {
    pub hom: HomGroup,
    pub particular: GroupElement,
    pub kernel: Subgroup,
}

impl AffineHomSolution {
    pub fn particular_map(&self) -> GroupHom {
        self.hom
            .realize(&self.particular)
            .expect("particular solution lies in the Hom group")
    }

    /// The solution `particular + k` for `k` in the kernel subgroup.
    pub fn solution_at(&self, k: &GroupElement) -> Result<GroupHom> {
        let shift = self.kernel.inclusion().apply(k)?;
        self.hom.realize(&self.particular.try_add(&shift)?)
    }
}

// (point in X, optional post-composition, required value)
type Atom = (GroupElement, Option<GroupHom>, GroupElement);

fn atoms(hom: &HomGroup, c: &HomConstraint) -> Result<Vec<Atom>> {
    let (x, y) = (hom.source(), hom.target());
    match c {
        HomConstraint::Eval { at, value } => {
            x.check_member(at)?;
            y.check_member(value)?;
            Ok(vec![(at.clone(), None, value.clone())])
        }
        HomConstraint::Pre { inner, value } => {
            if inner.target() != x || value.target() != y || inner.source() != value.source() {
                return Err(Error::DimensionMismatch("pre-composition constraint".into()));
            }
            Ok(inner
                .images()
                .into_iter()
                .zip(value.images())
                .map(|(a, v)| (a, None, v))
                .collect())
        }
        HomConstraint::Post { outer, value } => {
            if outer.source() != y || value.source() != x || outer.target() != value.target() {
                return Err(Error::DimensionMismatch("post-composition constraint".into()));
            }
            Ok(x.generators()
                .into_iter()
                .zip(value.images())
                .map(|(a, v)| (a, Some(outer.clone()), v))
                .collect())
        }
    }
}

/// Solves the constraints in `Hom(X, Y)`; `None` if they are inconsistent.
pub fn solve_hom_constraints(
    hom: &HomGroup,
    constraints: &[HomConstraint],
) -> Result<Option<AffineHomSolution>> {
    let mut all = Vec::new();
    for c in constraints {
        all.extend(atoms(hom, c)?);
    }
    let targets: Vec<FgAbGroup> = all.iter().map(|(_, _, v)| v.group().clone()).collect();
    let sum = DirectSum::new(&targets);
    let mut images = Vec::with_capacity(hom.group().ngens());
    for g in hom.group().generators() {
        let f = hom.realize(&g)?;
        let parts: Result<Vec<GroupElement>> = all
            .iter()
            .map(|(at, outer, _)| {
                let y = f.apply(at)?;
                match outer {
                    Some(o) => o.apply(&y),
                    None => Ok(y),
                }
            })
            .collect();
        images.push(sum.element(&parts?)?);
    }
    let lambda = GroupHom::from_images(hom.group(), sum.group(), &images)?;
    let values: Vec<GroupElement> = all.into_iter().map(|(_, _, v)| v).collect();
    let b = sum.element(&values)?;
    Ok(lambda.preimage(&b).map(|particular| AffineHomSolution {
        hom: hom.clone(),
        particular,
        kernel: lambda.kernel(),
    }))
}
