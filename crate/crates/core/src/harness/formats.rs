//! JSON documents: maps, instances, automorphism words, normal forms, reports.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::grammar::{parse_poly_in, parse_upoly, print_poly, print_upoly, SOURCE_VARS};
use crate::automorph::{AutoWord, ElementaryMove, PolyMap};
use crate::normalize::NormalForm;
use crate::poly::{Rat, UPoly};
use crate::{Error, Result};

pub fn rat_to_string(r: &Rat) -> String {
    r.to_string()
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    Rat::from_str(s.trim()).map_err(|_| Error::Parse {
        offset: 0,
        expected: format!("rational number, got {s:?}"),
    })
}

/// One move of a word.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MoveJson {
    /// `(x, y) ↦ (a x + b y + e, c x + d y + f)` with `linear = [[a, b], [c, d]]`, `translation = [e, f]`.
    Affine {
        linear: [[String; 2]; 2],
        translation: [String; 2],
    },
    /// `(x, y) ↦ (x + shift(y), y)`.
    TriangularX { shift: String },
    /// `(x, y) ↦ (x, y + shift(x))`.
    TriangularY { shift: String },
}

impl From<&ElementaryMove> for MoveJson {
    fn from(m: &ElementaryMove) -> Self {
        let s = rat_to_string;
        match m {
            ElementaryMove::Affine { a, b, c, d, e, f } => MoveJson::Affine {
                linear: [[s(a), s(b)], [s(c), s(d)]],
                translation: [s(e), s(f)],
            },
            ElementaryMove::TriangularX(q) => MoveJson::TriangularX {
                shift: print_upoly(q, "y"),
            },
            ElementaryMove::TriangularY(q) => MoveJson::TriangularY {
                shift: print_upoly(q, "x"),
            },
        }
    }
}

fn parse_shift(text: &str, var: &str) -> Result<UPoly> {
    parse_upoly(text, var)
}

impl TryFrom<&MoveJson> for ElementaryMove {
    type Error = Error;
    fn try_from(m: &MoveJson) -> Result<Self> {
        match m {
            MoveJson::Affine {
                linear: [[a, b], [c, d]],
                translation: [e, f],
            } => ElementaryMove::affine(
                parse_rat(a)?,
                parse_rat(b)?,
                parse_rat(c)?,
                parse_rat(d)?,
                parse_rat(e)?,
                parse_rat(f)?,
            ),
            MoveJson::TriangularX { shift } => Ok(ElementaryMove::TriangularX(parse_shift(shift, "y")?)),
            MoveJson::TriangularY { shift } => Ok(ElementaryMove::TriangularY(parse_shift(shift, "x")?)),
        }
    }
}

pub fn word_to_json(w: &AutoWord) -> Vec<MoveJson> {
    w.moves().iter().map(MoveJson::from).collect()
}

pub fn word_from_json(ms: &[MoveJson]) -> Result<AutoWord> {
    Ok(AutoWord::new(
        ms.iter()
            .map(ElementaryMove::try_from)
            .collect::<Result<Vec<_>>>()?,
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum NormalFormJson {
    #[serde(rename = "i")]
    I { d: u32 },
    #[serde(rename = "ii")]
    II { d: u32, m: u32 },
    #[serde(rename = "iii")]
    III { d: u32, m: u32, n: u32, a: Vec<String> },
}

impl From<&NormalForm> for NormalFormJson {
    fn from(nf: &NormalForm) -> Self {
        match nf {
            NormalForm::TypeI { d } => NormalFormJson::I { d: *d },
            NormalForm::TypeII { d, m } => NormalFormJson::II { d: *d, m: *m },
            NormalForm::TypeIII { d, m, n, a } => NormalFormJson::III {
                d: *d,
                m: *m,
                n: *n,
                a: a.iter().map(rat_to_string).collect(),
            },
        }
    }
}

impl TryFrom<&NormalFormJson> for NormalForm {
    type Error = Error;
    fn try_from(j: &NormalFormJson) -> Result<Self> {
        match j {
            NormalFormJson::I { d } => NormalForm::type_i(*d),
            NormalFormJson::II { d, m } => NormalForm::type_ii(*d, *m),
            NormalFormJson::III { d, m, n, a } => NormalForm::type_iii(
                *d,
                *m,
                *n,
                a.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>>>()?,
            ),
        }
    }
}

/// A map file; instance files carry the optional generation data as well.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapDoc {
    pub f1: String,
    pub f2: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normal_form: Option<NormalFormJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pre: Option<Vec<MoveJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub post: Option<Vec<MoveJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl MapDoc {
    pub fn from_map(f: &PolyMap) -> Self {
        MapDoc {
            f1: print_poly(&f.f1),
            f2: print_poly(&f.f2),
            normal_form: None,
            pre: None,
            post: None,
            seed: None,
        }
    }

    pub fn map(&self) -> Result<PolyMap> {
        Ok(PolyMap::new(
            parse_poly_in(&self.f1, SOURCE_VARS)?,
            parse_poly_in(&self.f2, SOURCE_VARS)?,
        ))
    }
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        offset: text
            .lines()
            .take(e.line().saturating_sub(1))
            .map(|l| l.len() + 1)
            .sum::<usize>()
            + e.column().saturating_sub(1),
        expected: e.to_string(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentJson {
    pub p: String,
    pub q: String,
}

/// Parametrised components `t ↦ (p(t), q(t))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentsDoc {
    pub components: Vec<ComponentJson>,
}

impl ComponentsDoc {
    pub fn parse_components(&self) -> Result<Vec<(UPoly, UPoly)>> {
        self.components
            .iter()
            .map(|c| Ok((parse_upoly(&c.p, "t")?, parse_upoly(&c.q, "t")?)))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Not applicable to this input; does not affect the verdict.
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub name: String,
    pub status: Status,
    pub evidence: serde_json::Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub records: Vec<Record>,
    pub verdict: Status,
}

impl Report {
    pub fn new(records: Vec<Record>) -> Self {
        let verdict = if records.iter().any(|r| r.status == Status::Fail) {
            Status::Fail
        } else {
            Status::Pass
        };
        Report { records, verdict }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Status::Pass
    }
}

/// Point as a pair of rational strings.
pub fn point_json(p: &(Rat, Rat)) -> serde_json::Value {
    serde_json::json!([rat_to_string(&p.0), rat_to_string(&p.1)])
}

/// Both components of a word as polynomial strings.
pub fn components_json(w: &AutoWord) -> serde_json::Value {
    let (a, b) = w.components();
    serde_json::json!([print_poly(a), print_poly(b)])
}
