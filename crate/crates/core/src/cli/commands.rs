//! One function per command; each returns a status and a JSON result.

use serde_json::{json, Map, Value};

use super::document::{Document, InputError};
use super::Failure;
use crate::abgroup::{FgAbGroup, GroupElement};
use crate::homalg::{
    gamma, gamma_delta, ExtGroup, GroupHom, HomGroup, PointedExtGroup, ShortExactSeq, Subgroup,
};
use crate::invariants::{isomorphic, isomorphic_tilde, Budget, Decision, IsoWitness};
use crate::sixterm::SixTermSequence;
use crate::uct::{assemble_uct, verify_uct, Naturality, UctDiagram};

pub const COMMANDS: [&str; 15] = [
    "ext",
    "hom",
    "pointed-ext",
    "ext-class",
    "baer-sum",
    "gamma",
    "gamma-member",
    "congruent",
    "shift-unit",
    "cuntz-sum",
    "conditions",
    "uct-assemble",
    "uct-verify",
    "iso",
    "iso-tilde",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Yes,
    No,
    Unknown,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Yes => "yes",
            Status::No => "no",
            Status::Unknown => "unknown",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok | Status::Yes => 0,
            Status::No => 1,
            Status::Unknown => 2,
        }
    }

    fn of(b: bool) -> Status {
        if b {
            Status::Yes
        } else {
            Status::No
        }
    }
}

pub fn group_json(g: &FgAbGroup) -> Value {
    json!({
        "invariant_factors": g.invariant_factors().iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        "free_rank": g.free_rank(),
    })
}

fn coords_json(x: &GroupElement) -> Value {
    json!(x.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>())
}

pub fn element_json(x: &GroupElement) -> Value {
    json!({ "group": group_json(x.group()), "coords": coords_json(x) })
}

pub fn hom_json(f: &GroupHom) -> Value {
    let m = f.matrix();
    let rows: Vec<Vec<String>> = (0..m.rows())
        .map(|i| m.row(i).iter().map(|c| c.to_string()).collect())
        .collect();
    json!({ "source": group_json(f.source()), "target": group_json(f.target()), "matrix": rows })
}

fn subgroup_json(s: &Subgroup) -> Value {
    json!({
        "group": group_json(s.group()),
        "generators": s.generators().iter().map(|x| element_json(&s.inclusion().apply(x).expect("member"))).collect::<Vec<_>>(),
    })
}

fn sequence_json(s: &ShortExactSeq) -> Value {
    let mut v = json!({
        "left": group_json(s.left()),
        "mid": group_json(s.mid()),
        "right": group_json(s.right()),
        "inj": hom_json(s.inj()),
        "surj": hom_json(s.surj()),
    });
    if let Some((g, h)) = s.distinguished() {
        v["distinguished"] = json!([element_json(g), element_json(h)]);
    }
    v
}

fn six_json(s: &SixTermSequence) -> Value {
    let names = ["iota0", "pi0", "delta0", "iota1", "pi1", "delta1"];
    let mut maps = Map::new();
    for (n, m) in names.iter().zip(s.maps()) {
        maps.insert((*n).into(), hom_json(m));
    }
    let mut v = json!({ "maps": maps });
    if let Some((ue, ua)) = s.units() {
        v["unit_e"] = element_json(ue);
        v["unit_a"] = element_json(ua);
    }
    v
}

fn witness_json(w: &IsoWitness) -> Value {
    json!({
        "phi0": hom_json(&w.phi0),
        "phi1": hom_json(&w.phi1),
        "psi0": hom_json(&w.psi0),
        "psi1": hom_json(&w.psi1),
        "rho0": hom_json(&w.rho0),
        "rho1": hom_json(&w.rho1),
    })
}

fn input(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

struct Args<'a> {
    doc: &'a Document,
    args: &'a Map<String, Value>,
}

impl<'a> Args<'a> {
    fn name(&self, key: &str) -> Result<&'a str, Failure> {
        match self.args.get(key) {
            Some(Value::String(s)) => Ok(s),
            Some(_) => Err(input(format!("argument `{key}` must be a name"))),
            None => Err(input(format!("missing argument `{key}`"))),
        }
    }

    fn has(&self, key: &str) -> bool {
        self.args.contains_key(key)
    }

    fn get<T>(
        &self,
        key: &str,
        f: impl Fn(&'a Document, &str) -> Result<&'a T, InputError>,
    ) -> Result<&'a T, Failure> {
        f(self.doc, self.name(key)?).map_err(input)
    }

    fn group(&self, key: &str) -> Result<&'a FgAbGroup, Failure> {
        self.get(key, Document::group)
    }

    fn element(&self, key: &str) -> Result<&'a GroupElement, Failure> {
        self.get(key, Document::element)
    }

    fn hom(&self, key: &str) -> Result<&'a GroupHom, Failure> {
        self.get(key, Document::hom)
    }

    fn six(&self, key: &str) -> Result<&'a SixTermSequence, Failure> {
        self.get(key, Document::six)
    }
}

pub fn dispatch(
    command: &str,
    doc: &Document,
    args: &Map<String, Value>,
    bound: u64,
) -> Result<(Status, Value), Failure> {
    let a = Args { doc, args };
    match command {
        "ext" => {
            let e = ExtGroup::new(a.group("h")?, a.group("k")?);
            Ok((Status::Ok, json!({ "group": group_json(e.group()) })))
        }
        "hom" => {
            let h = HomGroup::new(a.group("g")?, a.group("h")?);
            Ok((Status::Ok, json!({ "group": group_json(h.group()) })))
        }
        "pointed-ext" => {
            let p = PointedExtGroup::new(a.group("h")?, a.element("dist")?, a.group("k")?)
                .map_err(input)?;
            let s = p.structural_sequence();
            Ok((
                Status::Ok,
                json!({
                    "group": group_json(p.group()),
                    "k_mod_gamma": group_json(s.left()),
                    "ext": group_json(s.right()),
                }),
            ))
        }
        "ext-class" => {
            let s = a.get("sequence", Document::short_sequence)?;
            let v = if s.distinguished().is_some() {
                let (p, x) = s.pointed_ext_class().map_err(input)?;
                json!({ "pointed": true, "ext_group": group_json(p.group()), "class": coords_json(&x), "splits": s.splits().map_err(input)? })
            } else {
                let (e, x) = s.ext_class().map_err(input)?;
                json!({ "pointed": false, "ext_group": group_json(e.group()), "class": coords_json(&x), "splits": s.splits().map_err(input)? })
            };
            Ok((Status::Ok, v))
        }
        "baer-sum" => {
            let s1 = a.get("left", Document::short_sequence)?;
            let s2 = a.get("right", Document::short_sequence)?;
            let sum = s1.baer_sum(s2).map_err(input)?;
            let class = if sum.distinguished().is_some() {
                coords_json(&sum.pointed_ext_class().map_err(input)?.1)
            } else {
                coords_json(&sum.ext_class().map_err(input)?.1)
            };
            Ok((Status::Ok, json!({ "sequence": sequence_json(&sum), "class": class })))
        }
        "gamma" => {
            let (g, u, b) = (a.group("a")?, a.element("unit")?, a.group("b")?);
            let sub = gamma(g, u, b).map_err(input)?;
            let q = crate::homalg::Cokernel::of_subgroup(&sub);
            Ok((
                Status::Ok,
                json!({ "subgroup": subgroup_json(&sub), "quotient": group_json(q.group()) }),
            ))
        }
        "gamma-member" => {
            let s = a.six("six_term")?;
            let x = a.element("x")?;
            let ua = s
                .unit_a()
                .ok_or_else(|| input("six-term sequence carries no units"))?;
            let sub = gamma_delta(s.delta0(), s.delta1(), ua).map_err(input)?;
            if x.group() != s.k0b() {
                return Err(input("x must lie in K0B"));
            }
            let member = sub.contains(x);
            Ok((Status::of(member), json!({ "member": member, "subgroup": subgroup_json(&sub) })))
        }
        "congruent" => {
            let c = a.six("left")?.congruent(a.six("right")?).map_err(input)?;
            Ok((Status::of(c), json!({ "congruent": c })))
        }
        "shift-unit" => {
            let s = a.six("six_term")?.shift_unit(a.element("x")?).map_err(input)?;
            Ok((Status::Ok, json!({ "six_term": six_json(&s) })))
        }
        "cuntz-sum" => {
            let (s1, s2) = (a.six("left")?, a.six("right")?);
            let s = s1.cuntz_sum(s2).map_err(input)?;
            if s.delta0() != s1.delta0() || s.delta1() != s1.delta1() {
                return Err(Failure::Internal("sum changed the boundary maps".into()));
            }
            Ok((Status::Ok, json!({ "six_term": six_json(&s) })))
        }
        "conditions" => {
            let r = a.six("six_term")?.check_unit_conditions().map_err(input)?;
            let bad = r.soundness_violations();
            if !bad.is_empty() {
                return Err(Failure::Internal(format!(
                    "conditions {} hold but the Γ-groups differ",
                    bad.join(", ")
                )));
            }
            let mut v = Map::new();
            for (n, b) in r.flags() {
                v.insert(n.into(), json!(b));
            }
            v.insert("gamma_equal".into(), json!(r.gamma_equal));
            Ok((Status::Ok, Value::Object(v)))
        }
        "uct-assemble" => {
            let d = uct(&a)?;
            Ok((Status::Ok, uct_json(&d)))
        }
        "uct-verify" => {
            let d = uct(&a)?;
            let report = if a.has("first_variable") {
                let n = nested(&a, "first_variable")?;
                let src = assemble_uct(
                    n.group("k0a")?,
                    n.element("unit_a")?,
                    n.group("k1a")?,
                    d.k0b(),
                    d.k1b(),
                )
                .map_err(input)?;
                let (alpha0, alpha1) = (n.hom("alpha0")?, n.hom("alpha1")?);
                verify_uct(
                    &d,
                    Some(Naturality::FirstVariable {
                        source: &src,
                        alpha0,
                        alpha1,
                    }),
                )
            } else if a.has("second_variable") {
                let n = nested(&a, "second_variable")?;
                let tgt = assemble_uct(d.k0a(), d.unit_a(), d.k1a(), n.group("k0b")?, n.group("k1b")?)
                    .map_err(input)?;
                let (beta0, beta1) = (n.hom("beta0")?, n.hom("beta1")?);
                verify_uct(
                    &d,
                    Some(Naturality::SecondVariable {
                        target: &tgt,
                        beta0,
                        beta1,
                    }),
                )
            } else {
                verify_uct(&d, None)
            };
            let checks: Vec<Value> = report
                .checks
                .iter()
                .map(|c| json!({ "node": c.node, "passed": c.passed, "detail": c.detail }))
                .collect();
            Ok((Status::of(report.passed()), json!({ "checks": checks })))
        }
        "iso" => {
            let (i1, i2) = (
                a.get("left", Document::invariant)?,
                a.get("right", Document::invariant)?,
            );
            let d = isomorphic(i1, i2, bound).map_err(input)?;
            if let Decision::Yes(w) = &d {
                if !w.verify(i1, i2, &Budget::new(bound.max(1)))?.is_yes() {
                    return Err(Failure::Internal("witness fails verification".into()));
                }
            }
            Ok(decision(d.map(|w| witness_json(&w))))
        }
        "iso-tilde" => {
            let (i1, i2) = (
                a.get("left", Document::tilde)?,
                a.get("right", Document::tilde)?,
            );
            let d = isomorphic_tilde(i1, i2, bound).map_err(input)?;
            Ok(decision(d.map(|w| {
                let mut v = witness_json(&w.base);
                v["theta0"] = hom_json(&w.theta0);
                v
            })))
        }
        other => Err(input(format!("unknown command `{other}`"))),
    }
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

fn decision(d: Decision<Value>) -> (Status, Value) {
    match d {
        Decision::Yes(w) => (Status::Yes, json!({ "decision": "yes", "witness": w })),
        Decision::No => (Status::No, json!({ "decision": "no" })),
        Decision::Unknown => (Status::Unknown, json!({ "decision": "unknown" })),
    }
}

fn nested<'a>(a: &Args<'a>, key: &str) -> Result<Args<'a>, Failure> {
    match a.args.get(key) {
        Some(Value::Object(m)) => Ok(Args { doc: a.doc, args: m }),
        _ => Err(input(format!("argument `{key}` must be an object"))),
    }
}

fn uct(a: &Args<'_>) -> Result<UctDiagram, Failure> {
    assemble_uct(
        a.group("k0a")?,
        a.element("unit_a")?,
        a.group("k1a")?,
        a.group("k0b")?,
        a.group("k1b")?,
    )
    .map_err(input)
}

fn order_json(g: &FgAbGroup) -> Value {
    match g.order() {
        Some(n) => json!(n.to_string()),
        None => Value::Null,
    }
}

fn uct_json(d: &UctDiagram) -> Value {
    let formal = |n: &crate::uct::FormalNode| {
        json!({
            "sub": group_json(&n.sub),
            "quotient": group_json(&n.quotient),
            "forced_order": n.forced_order().map(|x| x.to_string()),
        })
    };
    json!({
        "gamma": subgroup_json(d.gamma()),
        "k0b_mod_gamma": group_json(d.k0b_mod_gamma()),
        "pointed_ext": group_json(d.pointed_ext()),
        "plain_ext": group_json(d.plain_ext()),
        "pointed_hom": group_json(d.pointed_hom()),
        "left_column": sequence_json(d.left_column()),
        "ext_us": formal(d.ext_us()),
        "ext_uw": formal(d.ext_uw()),
        "orders": {
            "k0b_mod_gamma": order_json(d.k0b_mod_gamma()),
            "pointed_ext": order_json(d.pointed_ext()),
            "plain_ext": order_json(d.plain_ext()),
            "pointed_hom": order_json(d.pointed_hom()),
        },
    })
}
