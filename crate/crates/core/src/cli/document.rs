//! Input documents: raw JSON definitions resolved into checked objects.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::{Map, Value};

use crate::abgroup::{FgAbGroup, GroupElement};
use crate::homalg::{GroupHom, ShortExactSeq};
use crate::invariants::{KTildeInvariant, OrderedGroup, Scale, UnitalKSixInvariant};
use crate::matrix::IntMatrix;
use crate::sixterm::SixTermSequence;

pub const SCHEMA_VERSION: u32 = 1;

/// An integer written as a decimal string. Plain JSON integers are accepted too.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Int(pub BigInt);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct IntVisitor;
        impl Visitor<'_> for IntVisitor {
            type Value = Int;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer as a decimal string")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Int, E> {
                v.trim()
                    .parse::<BigInt>()
                    .map(Int)
                    .map_err(|_| E::custom(format!("`{v}` is not a decimal integer")))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Int, E> {
                Ok(Int(v.into()))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Int, E> {
                Ok(Int(v.into()))
            }
        }
        d.deserialize_any(IntVisitor)
    }
}

fn big(v: &[Int]) -> Vec<BigInt> {
    v.iter().map(|x| x.0.clone()).collect()
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(untagged, deny_unknown_fields)]
pub enum RawGroup {
    Orders {
        invariant_factors: Vec<Int>,
        free_rank: usize,
    },
    Presentation {
        presentation: Vec<Vec<Int>>,
        ngens: usize,
    },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawElement {
    pub group: String,
    pub coords: Vec<Int>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawHom {
    pub source: String,
    pub target: String,
    /// One row per target generator, one column per source generator.
    pub matrix: Vec<Vec<Int>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawShortSeq {
    pub inj: String,
    pub surj: String,
    #[serde(default)]
    pub distinguished: Option<[String; 2]>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSixTerm {
    /// `iota0, pi0, delta0, iota1, pi1, delta1`
    pub maps: [String; 6],
    /// `[unit_e, unit_a]`
    #[serde(default)]
    pub units: Option<[String; 2]>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum RawScale {
    Full,
    IntervalBelow(String),
    Gens(Vec<String>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawOrderedGroup {
    pub group: String,
    /// Cone generators; the standard cone when absent.
    #[serde(default)]
    pub cone: Option<Vec<String>>,
    #[serde(default)]
    pub scale: Option<RawScale>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawInvariant {
    pub six_term: String,
    #[serde(default)]
    pub order_b: Option<String>,
    #[serde(default)]
    pub order_e: Option<String>,
    #[serde(default)]
    pub order_a: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTilde {
    pub base: String,
    pub d_order: String,
    pub unit_d: String,
    pub d_inj: String,
    pub d_surj: String,
    pub j0: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct RawQuery {
    pub command: String,
    #[serde(flatten)]
    pub args: Map<String, Value>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDocument {
    pub schema_version: u32,
    #[serde(default)]
    pub groups: BTreeMap<String, RawGroup>,
    #[serde(default)]
    pub elements: BTreeMap<String, RawElement>,
    #[serde(default)]
    pub homs: BTreeMap<String, RawHom>,
    #[serde(default)]
    pub short_sequences: BTreeMap<String, RawShortSeq>,
    #[serde(default)]
    pub six_term: BTreeMap<String, RawSixTerm>,
    #[serde(default)]
    pub ordered_groups: BTreeMap<String, RawOrderedGroup>,
    #[serde(default)]
    pub invariants: BTreeMap<String, RawInvariant>,
    #[serde(default)]
    pub tilde_invariants: BTreeMap<String, RawTilde>,
    #[serde(default)]
    pub queries: BTreeMap<String, RawQuery>,
}

/// A parse or validation failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn at(kind: &str, name: &str, e: impl fmt::Display) -> InputError {
    InputError(format!("{kind}.{name}: {e}"))
}

/// A validated document. Every definition has passed its constructor.
#[derive(Clone, Debug, Default)]
pub struct Document {
    pub groups: BTreeMap<String, FgAbGroup>,
    pub elements: BTreeMap<String, GroupElement>,
    pub homs: BTreeMap<String, GroupHom>,
    pub short_sequences: BTreeMap<String, ShortExactSeq>,
    pub six_term: BTreeMap<String, SixTermSequence>,
    pub ordered_groups: BTreeMap<String, OrderedGroup>,
    pub invariants: BTreeMap<String, UnitalKSixInvariant>,
    pub tilde_invariants: BTreeMap<String, KTildeInvariant>,
    pub queries: BTreeMap<String, RawQuery>,
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, kind: &str, name: &str) -> Result<&'a T, InputError> {
    map.get(name)
        .ok_or_else(|| InputError(format!("unknown {kind} `{name}`")))
}

impl Document {
    pub fn parse(text: &str) -> Result<Document, InputError> {
        let raw: RawDocument = serde_json::from_str(text).map_err(|e| {
            InputError(format!(
                "parse error at line {}, column {}: {}",
                e.line(),
                e.column(),
                e
            ))
        })?;
        Document::resolve(raw)
    }

    pub fn group(&self, name: &str) -> Result<&FgAbGroup, InputError> {
        lookup(&self.groups, "group", name)
    }

    pub fn element(&self, name: &str) -> Result<&GroupElement, InputError> {
        lookup(&self.elements, "element", name)
    }

    pub fn hom(&self, name: &str) -> Result<&GroupHom, InputError> {
        lookup(&self.homs, "hom", name)
    }

    pub fn short_sequence(&self, name: &str) -> Result<&ShortExactSeq, InputError> {
        lookup(&self.short_sequences, "short sequence", name)
    }

    pub fn six(&self, name: &str) -> Result<&SixTermSequence, InputError> {
        lookup(&self.six_term, "six-term sequence", name)
    }

    pub fn ordered(&self, name: &str) -> Result<&OrderedGroup, InputError> {
        lookup(&self.ordered_groups, "ordered group", name)
    }

    pub fn invariant(&self, name: &str) -> Result<&UnitalKSixInvariant, InputError> {
        lookup(&self.invariants, "invariant", name)
    }

    pub fn tilde(&self, name: &str) -> Result<&KTildeInvariant, InputError> {
        lookup(&self.tilde_invariants, "tilde invariant", name)
    }

    fn resolve(raw: RawDocument) -> Result<Document, InputError> {
        if raw.schema_version != SCHEMA_VERSION {
            return Err(InputError(format!(
                "schema_version {} is not supported, expected {SCHEMA_VERSION}",
                raw.schema_version
            )));
        }
        let mut doc = Document {
            queries: raw.queries,
            ..Document::default()
        };
        for (name, g) in &raw.groups {
            let group = match g {
                RawGroup::Orders {
                    invariant_factors,
                    free_rank,
                } => {
                    let orders = big(invariant_factors);
                    if orders.iter().any(|d| d <= &BigInt::from(0)) {
                        return Err(at("groups", name, "invariant factors must be positive"));
                    }
                    FgAbGroup::from_orders(&orders, *free_rank)
                }
                RawGroup::Presentation {
                    presentation,
                    ngens,
                } => {
                    let rows: Vec<Vec<BigInt>> = presentation.iter().map(|r| big(r)).collect();
                    IntMatrix::from_rows(&rows, *ngens)
                        .and_then(|m| FgAbGroup::from_presentation(&m, *ngens))
                }
            };
            doc.groups
                .insert(name.clone(), group.map_err(|e| at("groups", name, e))?);
        }
        for (name, e) in &raw.elements {
            let g = doc.group(&e.group).map_err(|e| at("elements", name, e))?;
            let n = g.presentation().cols();
            if e.coords.len() != n {
                return Err(at(
                    "elements",
                    name,
                    format!("{} coordinates for {} generators", e.coords.len(), n),
                ));
            }
            let x = g
                .element_from_presentation(&big(&e.coords))
                .map_err(|err| at("elements", name, err))?;
            doc.elements.insert(name.clone(), x);
        }
        for (name, h) in &raw.homs {
            let f = doc.build_hom(h).map_err(|e| at("homs", name, e))?;
            doc.homs.insert(name.clone(), f);
        }
        for (name, s) in &raw.short_sequences {
            let inj = doc.hom(&s.inj).map_err(|e| at("short_sequences", name, e))?;
            let surj = doc.hom(&s.surj).map_err(|e| at("short_sequences", name, e))?;
            let dist = match &s.distinguished {
                Some([g, h]) => Some((
                    doc.element(g).map_err(|e| at("short_sequences", name, e))?.clone(),
                    doc.element(h).map_err(|e| at("short_sequences", name, e))?.clone(),
                )),
                None => None,
            };
            let seq = ShortExactSeq::new(inj.clone(), surj.clone(), dist)
                .map_err(|e| at("short_sequences", name, e))?;
            doc.short_sequences.insert(name.clone(), seq);
        }
        for (name, s) in &raw.six_term {
            let maps: Result<Vec<GroupHom>, InputError> =
                s.maps.iter().map(|m| doc.hom(m).cloned()).collect();
            let maps: [GroupHom; 6] = maps
                .map_err(|e| at("six_term", name, e))?
                .try_into()
                .expect("six names give six maps");
            let units = match &s.units {
                Some([ue, ua]) => Some((
                    doc.element(ue).map_err(|e| at("six_term", name, e))?.clone(),
                    doc.element(ua).map_err(|e| at("six_term", name, e))?.clone(),
                )),
                None => None,
            };
            let seq = SixTermSequence::new(maps, units).map_err(|e| at("six_term", name, e))?;
            doc.six_term.insert(name.clone(), seq);
        }
        for (name, o) in &raw.ordered_groups {
            let og = doc.build_order(o).map_err(|e| at("ordered_groups", name, e))?;
            doc.ordered_groups.insert(name.clone(), og);
        }
        for (name, i) in &raw.invariants {
            let inv = doc.build_invariant(i).map_err(|e| at("invariants", name, e))?;
            doc.invariants.insert(name.clone(), inv);
        }
        for (name, t) in &raw.tilde_invariants {
            let ctx = |e: &dyn fmt::Display| at("tilde_invariants", name, e);
            let inv = KTildeInvariant::new(
                doc.invariant(&t.base).map_err(|e| ctx(&e))?.clone(),
                doc.ordered(&t.d_order).map_err(|e| ctx(&e))?.clone(),
                doc.element(&t.unit_d).map_err(|e| ctx(&e))?.clone(),
                doc.hom(&t.d_inj).map_err(|e| ctx(&e))?.clone(),
                doc.hom(&t.d_surj).map_err(|e| ctx(&e))?.clone(),
                doc.hom(&t.j0).map_err(|e| ctx(&e))?.clone(),
            )
            .map_err(|e| ctx(&e))?;
            doc.tilde_invariants.insert(name.clone(), inv);
        }
        Ok(doc)
    }

    /// Reads the matrix in presentation coordinates and checks that every relation
    /// of the source is sent to zero.
    fn build_hom(&self, h: &RawHom) -> Result<GroupHom, InputError> {
        let src = self.group(&h.source)?;
        let tgt = self.group(&h.target)?;
        let (n, m) = (src.presentation().cols(), tgt.presentation().cols());
        if h.matrix.len() != m || h.matrix.iter().any(|r| r.len() != n) {
            return Err(InputError(format!("matrix must be {m} x {n}")));
        }
        let err = |e: crate::Error| InputError(e.to_string());
        let images: Vec<GroupElement> = (0..n)
            .map(|j| {
                let col: Vec<BigInt> = h.matrix.iter().map(|r| r[j].0.clone()).collect();
                tgt.element_from_presentation(&col)
            })
            .collect::<crate::Result<_>>()
            .map_err(err)?;
        let combine = |c: &[BigInt]| {
            images
                .iter()
                .zip(c)
                .fold(tgt.zero(), |acc, (y, k)| acc.try_add(&y.scale(k)).expect("same group"))
        };
        let rels = src.presentation();
        for i in 0..rels.rows() {
            if !combine(rels.row(i)).is_zero() {
                return Err(InputError(format!(
                    "homomorphism not well defined: relation {i} of `{}` is not sent to zero",
                    h.source
                )));
            }
        }
        let canonical: Vec<GroupElement> = src
            .generators()
            .iter()
            .map(|x| combine(&src.presentation_coords(x)))
            .collect();
        GroupHom::from_images(src, tgt, &canonical).map_err(err)
    }

    fn build_order(&self, o: &RawOrderedGroup) -> Result<OrderedGroup, InputError> {
        let g = self.group(&o.group)?;
        let member = |name: &String| -> Result<GroupElement, InputError> {
            let x = self.element(name)?;
            if x.group() != g {
                return Err(InputError(format!("element `{name}` is not in `{}`", o.group)));
            }
            Ok(x.clone())
        };
        let gens = match &o.cone {
            Some(names) => names.iter().map(member).collect::<Result<Vec<_>, _>>()?,
            None => OrderedGroup::standard(g).cone_gens().to_vec(),
        };
        let scale = match &o.scale {
            None | Some(RawScale::Full) => Scale::FullCone,
            Some(RawScale::IntervalBelow(u)) => Scale::IntervalBelow(member(u)?),
            Some(RawScale::Gens(v)) => {
                Scale::ExplicitGens(v.iter().map(member).collect::<Result<Vec<_>, _>>()?)
            }
        };
        OrderedGroup::new(g, gens, scale).map_err(|e| InputError(e.to_string()))
    }

    fn build_invariant(&self, i: &RawInvariant) -> Result<UnitalKSixInvariant, InputError> {
        let seq = self.six(&i.six_term)?.clone();
        let pick = |name: &Option<String>, g: &FgAbGroup| -> Result<OrderedGroup, InputError> {
            match name {
                Some(n) => Ok(self.ordered(n)?.clone()),
                None => Ok(OrderedGroup::standard(g)),
            }
        };
        let b = pick(&i.order_b, seq.k0b())?;
        let e = pick(&i.order_e, seq.k0e())?;
        let a = pick(&i.order_a, seq.k0a())?;
        UnitalKSixInvariant::new(seq, b, e, a).map_err(|e| InputError(e.to_string()))
    }
}
