//! `eval`: closed-form values at a single point.

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Map, Value};
use twistloop::correlators as cor;
use twistloop::geometry::{strip_from_halfplane, Anchors};
use twistloop::params::kac_weight;
use twistloop::Point;

use crate::params::Params;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Formula {
    #[value(name = "bulk-twist-4pt")]
    #[serde(rename = "bulk-twist-4pt")]
    BulkTwist4pt,
    SalProb,
    #[value(name = "mag-4pt")]
    #[serde(rename = "mag-4pt")]
    Mag4pt,
    SingleTwist,
    DoubleTwist,
    Schramm,
    Winding,
    Pll,
    #[value(name = "percolation-6pt")]
    #[serde(rename = "percolation-6pt")]
    Percolation6pt,
    Kac,
    HGeneral,
}

impl Formula {
    pub fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }

    pub fn units(self) -> &'static str {
        match self {
            Formula::SalProb | Formula::Schramm | Formula::Winding | Formula::Pll => "probability",
            Formula::Kac => "weight",
            _ => "correlator",
        }
    }
}

/// One evaluated formula: echoed inputs and named outputs.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub formula: Formula,
    pub inputs: Map<String, Value>,
    pub values: Vec<(&'static str, f64)>,
}

impl Evaluation {
    pub fn to_json(&self) -> Value {
        let mut out = Map::new();
        out.insert("formula".into(), json!(self.formula.name()));
        out.insert("inputs".into(), Value::Object(self.inputs.clone()));
        if let [(_, v)] = self.values.as_slice() {
            out.insert("value".into(), json!(v));
        } else {
            let vals: Map<String, Value> = self.values.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
            out.insert("values".into(), Value::Object(vals));
        }
        out.insert("units".into(), json!(self.formula.units()));
        Value::Object(out)
    }
}

fn anchors(p: &mut Params) -> Result<Anchors, CliError> {
    match (p.has("x1"), p.has("x2")) {
        (false, false) => Ok(Anchors::standard()),
        (true, false) => Ok(Anchors::to_infinity(p.real("x1")?)?),
        _ => Ok(Anchors::new(p.real("x1")?, p.real("x2")?)?),
    }
}

fn four_points(p: &mut Params) -> Result<[Point; 4], CliError> {
    Ok([p.point("z1")?, p.point("z2")?, p.point("z3")?, p.point("z4")?])
}

pub fn evaluate(formula: Formula, mut p: Params) -> Result<Evaluation, CliError> {
    use Formula::*;
    let values: Vec<(&'static str, f64)> = match formula {
        BulkTwist4pt => {
            let z = [p.complex("z1")?, p.complex("z2")?, p.complex("z3")?, p.complex("z4")?];
            vec![("value", cor::bulk_twist_4pt(z, p.real("kappa")?)?)]
        }
        SalProb | Mag4pt => {
            let max_config = p.has("config");
            let value = if max_config {
                let config = p.word("config")?;
                if config != "max" {
                    return Err(CliError::Usage(format!("unknown config '{config}' (only 'max')")));
                }
                let s = cor::sal_prob_max()?;
                if formula == SalProb {
                    s
                } else {
                    1.0 - s
                }
            } else if p.has("x") {
                let x = p.complex("x")?;
                if formula == SalProb {
                    cor::sal_prob_x(x)?
                } else {
                    cor::mag_4pt_x(x)?
                }
            } else {
                let [a, b, c, d] = four_points(&mut p)?;
                if formula == SalProb {
                    cor::sal_separation_prob(a, b, c, d)?
                } else {
                    cor::mag_4pt(a, b, c, d)?
                }
            };
            vec![("value", value)]
        }
        SingleTwist => {
            let v = if p.has("v") {
                cor::single_twist_strip(p.real("v")?)?
            } else {
                cor::boundary_single_twist(p.real("x")?.into())?.re
            };
            vec![("value", v)]
        }
        DoubleTwist => {
            let v = if p.has("v") {
                let v = p.real("v")?;
                cor::double_twist_strip(v, p.real("kappa")?)?
            } else {
                let x = p.real("x")?;
                cor::boundary_double_twist(x.into(), p.real("kappa")?)?.re
            };
            vec![("value", v)]
        }
        Schramm => {
            let v = if p.has("z") {
                let z = p.complex("z")?;
                let a = anchors(&mut p)?;
                strip_from_halfplane(z, a)?.im
            } else {
                p.real("v")?
            };
            vec![("value", cor::schramm_left_passage(v)?)]
        }
        Winding => {
            let w = if p.has("zA") || p.has("zB") {
                let (za, zb) = (p.complex("zA")?, p.complex("zB")?);
                let a = anchors(&mut p)?;
                cor::winding_probs_halfplane(za, zb, a)?
            } else {
                cor::winding_probs(p.real("vA")?, p.real("vB")?, p.real("sigma")?)?
            };
            vec![("p_ab", w.p_ab), ("p_a", w.p_a), ("p_b", w.p_b), ("p_o", w.p_o)]
        }
        Pll => vec![("value", cor::pll_halfplane(p.complex("zA")?, p.complex("zB")?)?)],
        Percolation6pt => {
            let z = p.complex("z")?;
            let x = [p.real("x1")?, p.real("x2")?, p.real("x3")?, p.real("x4")?];
            vec![("value", cor::percolation_6pt(z, x)?)]
        }
        Kac => {
            let k = p.real("kappa")?;
            twistloop::params::ModelParams::new(k)?;
            vec![("value", kac_weight(k, p.real("r")?, p.real("s")?))]
        }
        HGeneral => {
            let (s, t) = (p.real("sigma")?, p.real("tau")?);
            let (c1, c2) = (p.real_or("c1", 1.0)?, p.real_or("c2", 0.0)?);
            vec![("value", cor::h_general(s, t, c1, c2)?)]
        }
    };
    let inputs = p.finish()?;
    Ok(Evaluation {
        formula,
        inputs,
        values,
    })
}
