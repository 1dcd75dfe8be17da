//! JSON documents for towers, arcs, reports, lines and collineations.
//!
//! Field elements are lowercase hex strings of the coefficient bit-vector,
//! zero-padded to `⌈2m/4⌉` digits.

use std::collections::BTreeMap;

use kmarc_core::arcs::{ArcReport, Outcome, PointSet, Verdict};
use kmarc_core::{Collineation, FieldElement, FieldTower, Line};
use serde::{Deserialize, Serialize};

use crate::{CliError, CliResult};

pub fn hex_width(m: u32) -> usize {
    (2 * m as usize).div_ceil(4)
}

pub fn to_hex(tower: &FieldTower, x: FieldElement) -> String {
    format!("{:0w$x}", x.bits(), w = hex_width(tower.m()))
}

pub fn parse_hex_u32(s: &str) -> CliResult<u32> {
    let digits = s.trim().trim_start_matches("0x").trim_start_matches("0X");
    u32::from_str_radix(digits, 16).map_err(|_| CliError::Hex(s.to_string()))
}

pub fn parse_hex(tower: &FieldTower, s: &str) -> CliResult<FieldElement> {
    Ok(tower.element(parse_hex_u32(s)?)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerJson {
    pub m: u32,
    pub h: u32,
    pub modulus_hex: String,
    pub i_hex: String,
}

impl TowerJson {
    pub fn from_tower(tower: &FieldTower) -> Self {
        TowerJson {
            m: tower.m(),
            h: tower.h(),
            modulus_hex: format!("{:x}", tower.modulus()),
            i_hex: to_hex(tower, tower.i_elem()),
        }
    }

    pub fn to_tower(&self) -> CliResult<FieldTower> {
        let tower = FieldTower::new(self.m, self.h, Some(parse_hex_u32(&self.modulus_hex)?))?;
        let i = parse_hex(&tower, &self.i_hex)?;
        if i == tower.i_elem() {
            Ok(tower)
        } else {
            Ok(tower.with_i_elem(i)?)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub construction: String,
    pub h: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_hex: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_gen_hex: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcJson {
    pub tower: TowerJson,
    pub points: Vec<String>,
    pub claimed_t: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

/// A decoded arc file.
#[derive(Clone, Debug)]
pub struct ArcFile {
    pub tower: FieldTower,
    pub set: PointSet,
    pub claimed_t: u32,
    pub provenance: Option<Provenance>,
}

impl ArcFile {
    pub fn new(
        tower: FieldTower,
        set: PointSet,
        claimed_t: u32,
        provenance: Option<Provenance>,
    ) -> Self {
        ArcFile {
            tower,
            set,
            claimed_t,
            provenance,
        }
    }

    pub fn to_json(&self) -> ArcJson {
        ArcJson {
            tower: TowerJson::from_tower(&self.tower),
            points: self
                .set
                .points()
                .iter()
                .map(|&x| to_hex(&self.tower, x))
                .collect(),
            claimed_t: self.claimed_t,
            provenance: self.provenance.clone(),
        }
    }

    pub fn from_json(doc: &ArcJson) -> CliResult<Self> {
        let tower = doc.tower.to_tower()?;
        let points = doc
            .points
            .iter()
            .map(|s| parse_hex(&tower, s))
            .collect::<CliResult<Vec<_>>>()?;
        let set = PointSet::new(points)?;
        Ok(ArcFile {
            tower,
            set,
            claimed_t: doc.claimed_t,
            provenance: doc.provenance.clone(),
        })
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        Self::from_json(&serde_json::from_str(text)?)
    }

    pub fn render(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("arc JSON serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LineJson {
    Affine { u_hex: String, mu_hex: String },
    Infinity { infinity: bool },
}

impl LineJson {
    pub fn from_line(tower: &FieldTower, line: &Line) -> Self {
        match *line {
            Line::Affine { u, mu } => LineJson::Affine {
                u_hex: to_hex(tower, u),
                mu_hex: to_hex(tower, mu),
            },
            Line::Infinity => LineJson::Infinity { infinity: true },
        }
    }

    pub fn to_line(&self, tower: &FieldTower) -> CliResult<Line> {
        let line = match self {
            LineJson::Affine { u_hex, mu_hex } => Line::Affine {
                u: parse_hex(tower, u_hex)?,
                mu: parse_hex(tower, mu_hex)?,
            },
            LineJson::Infinity { infinity: true } => Line::Infinity,
            LineJson::Infinity { infinity: false } => {
                return Err(CliError::Input(
                    "line object needs u_hex/mu_hex or infinity: true".into(),
                ))
            }
        };
        tower.check_line(&line)?;
        Ok(line)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollineationJson {
    pub matrix: [[String; 3]; 3],
    pub frobenius: u32,
}

impl CollineationJson {
    pub fn from_collineation(tower: &FieldTower, c: &Collineation) -> Self {
        CollineationJson {
            matrix: c.matrix().map(|row| row.map(|x| to_hex(tower, x))),
            frobenius: c.frob(),
        }
    }

    pub fn to_collineation(&self, tower: &FieldTower) -> CliResult<Collineation> {
        let mut matrix = [[FieldElement::ZERO; 3]; 3];
        for (row, src) in matrix.iter_mut().zip(&self.matrix) {
            for (cell, s) in row.iter_mut().zip(src) {
                *cell = parse_hex(tower, s)?;
            }
        }
        Ok(tower.collineation(matrix, self.frobenius)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub line: LineJson,
    pub count: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub is_star_set: bool,
    pub t: Option<u32>,
    pub histogram: BTreeMap<u32, u32>,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
}

impl ReportJson {
    pub fn from_report(tower: &FieldTower, report: &ArcReport) -> Self {
        let (verdict, witness) = match report.verdict {
            Verdict::KmArc(_) => ("km_arc", None),
            Verdict::NotKmArc { witness, count } => (
                "not_km_arc",
                Some(WitnessJson {
                    line: LineJson::from_line(tower, &witness),
                    count,
                }),
            ),
        };
        ReportJson {
            is_star_set: report.is_star_set,
            t: report.t,
            histogram: report.histogram.clone(),
            verdict: verdict.to_string(),
            witness,
        }
    }
}

/// Outcome of an algebraic criterion; `reason` is set when it could not be
/// applied (for instance to a set that is not a star-set).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionJson {
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl CriterionJson {
    pub fn from_outcome<W>(
        outcome: &Outcome<W>,
        witness: impl Fn(&W) -> serde_json::Value,
    ) -> Self {
        match outcome {
            Outcome::Holds => CriterionJson {
                holds: true,
                witness: None,
                reason: None,
            },
            Outcome::Fails(w) => CriterionJson {
                holds: false,
                witness: Some(witness(w)),
                reason: None,
            },
        }
    }

    pub fn not_applicable(err: &kmarc_core::Error) -> Self {
        CriterionJson {
            holds: false,
            witness: None,
            reason: Some(err.to_string()),
        }
    }
}
