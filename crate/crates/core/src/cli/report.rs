//! Serializable result records.
//!
//! Field order in these structs is the key order of the emitted JSON, so
//! reordering fields changes the output format. Exact rationals are written
//! as `"a/b"` strings and cyclotomic terms are listed by ascending phase.

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

use crate::cyclo::{CyclotomicSum, RationalMod1};
use crate::gluing::{GluingData, ValidationReport};
use crate::homology::{self, HomologyStructure};
use crate::invariants::{self, ExpectationResult};

/// An integer written as a JSON number when it fits in 64 bits and as a
/// decimal string otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(&self.0) {
            Ok(v) => s.serialize_i64(v),
            Err(_) => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl From<&BigInt> for JsonInt {
    fn from(v: &BigInt) -> Self {
        JsonInt(v.clone())
    }
}

fn phase_str<S: Serializer>(q: &RationalMod1, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(q)
}

#[derive(Serialize)]
pub struct RelationRecord {
    pub relation: &'static str,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<Vec<Vec<JsonInt>>>,
}

#[derive(Serialize)]
pub struct ValidateReport {
    pub valid: bool,
    pub genus: usize,
    pub relations: Vec<RelationRecord>,
    pub determinant: JsonInt,
    pub determinant_note: Option<String>,
}

fn matrix_json(rows: Vec<Vec<BigInt>>) -> Vec<Vec<JsonInt>> {
    rows.into_iter()
        .map(|r| r.into_iter().map(JsonInt).collect())
        .collect()
}

impl From<&ValidationReport> for ValidateReport {
    fn from(r: &ValidationReport) -> Self {
        let relations = r
            .checks
            .iter()
            .map(|c| {
                let ok = c.holds();
                RelationRecord {
                    relation: c.relation.name(),
                    status: if ok { "PASS" } else { "FAIL" },
                    residual: (!ok).then(|| matrix_json(c.residual.to_rows())),
                }
            })
            .collect();
        ValidateReport {
            valid: r.is_valid(),
            genus: r.genus,
            relations,
            determinant: JsonInt(r.determinant.clone()),
            determinant_note: r.determinant_note(),
        }
    }
}

#[derive(Serialize)]
pub struct HomologyReport {
    pub free_rank: usize,
    pub invariant_factors: Vec<JsonInt>,
    pub h2_rank: usize,
}

impl HomologyReport {
    pub fn of(gd: &GluingData) -> Self {
        let h = homology::h1(gd);
        HomologyReport {
            free_rank: h.free_rank(),
            invariant_factors: h.invariant_factors().iter().map(JsonInt::from).collect(),
            h2_rank: h.kernel_basis().len(),
        }
    }
}

/// Linking form over the canonical torsion generators.
pub fn linking_form_report(gd: &GluingData, h: &HomologyStructure) -> Vec<Vec<String>> {
    invariants::linking_form_matrix(h, gd)
        .into_iter()
        .map(|row| row.iter().map(ToString::to_string).collect())
        .collect()
}

#[derive(Serialize)]
pub struct Term {
    #[serde(serialize_with = "phase_str")]
    pub phase: RationalMod1,
    pub coeff: JsonInt,
}

#[derive(Serialize)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

/// Terms of a sum, ascending by phase.
pub fn terms(sum: &CyclotomicSum) -> Vec<Term> {
    sum.terms()
        .iter()
        .map(|(q, c)| Term {
            phase: q.clone(),
            coeff: JsonInt(c.clone()),
        })
        .collect()
}

/// Floating-point value of an exact sum, evaluated from its reduced form so
/// that exactly vanishing sums print as zero. Negative zero is cleared.
pub fn value(normalized: &CyclotomicSum) -> Complex {
    let (re, im) = normalized.eval_complex();
    Complex {
        re: re + 0.0,
        im: im + 0.0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Theory {
    Cs,
    Bf,
}

#[derive(Serialize)]
pub struct PartitionReport {
    pub theory: Theory,
    pub level: u64,
    pub torsion_order: JsonInt,
    pub terms: Vec<Term>,
    pub normalized: Vec<Term>,
    pub value: Complex,
}

impl PartitionReport {
    pub fn new(theory: Theory, level: u64, torsion_order: &BigInt, sum: &CyclotomicSum) -> Self {
        let normalized = sum.normalize();
        PartitionReport {
            theory,
            level,
            torsion_order: JsonInt::from(torsion_order),
            terms: terms(sum),
            value: value(&normalized),
            normalized: terms(&normalized),
        }
    }
}

#[derive(Serialize)]
pub struct WilsonReport {
    pub theory: Theory,
    pub level: u64,
    pub delta_satisfied: bool,
    #[serde(serialize_with = "phase_str")]
    pub perturbative_phase: RationalMod1,
    pub torsion_sum: Vec<Term>,
    pub total: Vec<Term>,
    pub normalized_total: Vec<Term>,
    pub value: Complex,
}

impl WilsonReport {
    pub fn new(theory: Theory, level: u64, r: &ExpectationResult) -> Self {
        let normalized = r.total.normalize();
        WilsonReport {
            theory,
            level,
            delta_satisfied: r.delta_satisfied,
            perturbative_phase: r.perturbative_phase.clone(),
            torsion_sum: terms(&r.torsion_sum),
            total: terms(&r.total),
            value: value(&normalized),
            normalized_total: terms(&normalized),
        }
    }
}
