//! The measure-spec JSON grammar.
//!
//! Leaves: `{"type":"neg_expectation"}`, `{"type":"var","alpha":A}`,
//! `{"type":"es","alpha":A}`, `{"type":"entropic","theta":T}`,
//! `{"type":"worst_case"}`, `{"type":"spectral","alphas":[..],"masses":[..]}`,
//! `{"type":"stdev","p":P}`, `{"type":"semidev","p":P}`,
//! `{"type":"induced","rho":RISK}`, `{"type":"range"}`.
//! Compositions nest arbitrarily:
//! `{"type":"compose","rho":RISK,"dev":DEV,"beta":B}` and
//! `{"type":"loss_deviation","rho":RISK,"beta":B,"p":P}`.
//!
//! `P` is a number `>= 1` or the string `"inf"`. Parsing is strict
//! (unknown keys are rejected with the JSON path) and every type invariant
//! is enforced before a spec is returned.

use crate::compose::{Functional, RiskFunctional};
use crate::deviation::DeviationMeasure;
use crate::error::{Error, Result};
use crate::risk::{RiskMeasure, SpectralMeasure};
use serde::ser::{Serialize, SerializeMap, Serializer};
use serde_json::{Map, Value};

const RISK_TAGS: [&str; 8] = [
    "neg_expectation",
    "var",
    "es",
    "entropic",
    "worst_case",
    "spectral",
    "compose",
    "loss_deviation",
];
const DEV_TAGS: [&str; 4] = ["stdev", "semidev", "induced", "range"];

pub fn parse_functional(text: &str) -> Result<Functional> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| Error::parse("$", e.to_string()))?;
    let f = functional_from_value(&value, "$")?;
    f.validate()?;
    Ok(f)
}

pub fn parse_risk_functional(text: &str) -> Result<RiskFunctional> {
    match parse_functional(text)? {
        Functional::Risk(r) => Ok(r),
        Functional::Deviation(_) => Err(Error::parse(
            "$",
            "expected a risk-valued measure, got a deviation",
        )),
    }
}

pub fn parse_deviation(text: &str) -> Result<DeviationMeasure> {
    match parse_functional(text)? {
        Functional::Deviation(d) => Ok(d),
        Functional::Risk(_) => Err(Error::parse(
            "$",
            "expected a deviation measure, got a risk measure",
        )),
    }
}

pub fn functional_from_value(value: &Value, path: &str) -> Result<Functional> {
    let obj = as_object(value, path)?;
    let tag = type_tag(obj, path)?;
    if RISK_TAGS.contains(&tag.as_str()) {
        Ok(Functional::Risk(risk_from_value(value, path)?))
    } else if DEV_TAGS.contains(&tag.as_str()) {
        Ok(Functional::Deviation(deviation_from_value(value, path)?))
    } else {
        Err(Error::parse(
            format!("{path}.type"),
            format!("unknown measure type '{tag}'"),
        ))
    }
}

fn risk_from_value(value: &Value, path: &str) -> Result<RiskFunctional> {
    let obj = as_object(value, path)?;
    let tag = type_tag(obj, path)?;
    match tag.as_str() {
        "neg_expectation" => {
            expect_keys(obj, &["type"], path)?;
            Ok(RiskFunctional::Measure(RiskMeasure::NegExpectation))
        }
        "worst_case" => {
            expect_keys(obj, &["type"], path)?;
            Ok(RiskFunctional::Measure(RiskMeasure::WorstCase))
        }
        "var" => {
            expect_keys(obj, &["type", "alpha"], path)?;
            Ok(RiskFunctional::Measure(RiskMeasure::ValueAtRisk {
                alpha: number(obj, "alpha", path)?,
            }))
        }
        "es" => {
            expect_keys(obj, &["type", "alpha"], path)?;
            Ok(RiskFunctional::Measure(RiskMeasure::ExpectedShortfall {
                alpha: number(obj, "alpha", path)?,
            }))
        }
        "entropic" => {
            expect_keys(obj, &["type", "theta"], path)?;
            Ok(RiskFunctional::Measure(RiskMeasure::Entropic {
                theta: number(obj, "theta", path)?,
            }))
        }
        "spectral" => {
            expect_keys(obj, &["type", "alphas", "masses"], path)?;
            let alphas = number_array(obj, "alphas", path)?;
            let masses = number_array(obj, "masses", path)?;
            Ok(RiskFunctional::Measure(RiskMeasure::Spectral(
                SpectralMeasure::new(alphas, masses)?,
            )))
        }
        "compose" => {
            expect_keys(obj, &["type", "rho", "dev", "beta"], path)?;
            let rho_value = require(obj, "rho", path)?;
            let dev_value = require(obj, "dev", path)?;
            Ok(RiskFunctional::Compose {
                rho: Box::new(risk_from_value(rho_value, &format!("{path}.rho"))?),
                dev: deviation_from_value(dev_value, &format!("{path}.dev"))?,
                beta: number(obj, "beta", path)?,
            })
        }
        "loss_deviation" => {
            expect_keys(obj, &["type", "rho", "beta", "p"], path)?;
            let rho_value = require(obj, "rho", path)?;
            Ok(RiskFunctional::LossDeviation {
                rho: Box::new(risk_from_value(rho_value, &format!("{path}.rho"))?),
                beta: number(obj, "beta", path)?,
                p: norm_exponent(obj, "p", path)?,
            })
        }
        other => Err(Error::parse(
            format!("{path}.type"),
            format!("expected a risk-valued measure, got '{tag}'", tag = other),
        )),
    }
}

fn deviation_from_value(value: &Value, path: &str) -> Result<DeviationMeasure> {
    let obj = as_object(value, path)?;
    let tag = type_tag(obj, path)?;
    match tag.as_str() {
        "stdev" => {
            expect_keys(obj, &["type", "p"], path)?;
            Ok(DeviationMeasure::FullDeviation {
                p: norm_exponent(obj, "p", path)?,
            })
        }
        "semidev" => {
            expect_keys(obj, &["type", "p"], path)?;
            Ok(DeviationMeasure::LowerSemideviation {
                p: norm_exponent(obj, "p", path)?,
            })
        }
        "induced" => {
            expect_keys(obj, &["type", "rho"], path)?;
            let rho_value = require(obj, "rho", path)?;
            Ok(DeviationMeasure::Induced {
                rho: Box::new(risk_from_value(rho_value, &format!("{path}.rho"))?),
            })
        }
        "range" => {
            expect_keys(obj, &["type"], path)?;
            Ok(DeviationMeasure::Range)
        }
        other => Err(Error::parse(
            format!("{path}.type"),
            format!("expected a deviation measure, got '{other}'"),
        )),
    }
}

fn as_object<'v>(value: &'v Value, path: &str) -> Result<&'v Map<String, Value>> {
    value
        .as_object()
        .ok_or_else(|| Error::parse(path, "expected a JSON object"))
}

fn type_tag(obj: &Map<String, Value>, path: &str) -> Result<String> {
    obj.get("type")
        .ok_or_else(|| Error::parse(path, "missing 'type'"))?
        .as_str()
        .map(|s| s.to_string())
        .ok_or_else(|| Error::parse(format!("{path}.type"), "expected a string"))
}

fn expect_keys(obj: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<()> {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(Error::parse(
                format!("{path}.{key}"),
                format!("unknown key '{key}'"),
            ));
        }
    }
    for key in allowed {
        if !obj.contains_key(*key) {
            return Err(Error::parse(path, format!("missing '{key}'")));
        }
    }
    Ok(())
}

fn require<'v>(obj: &'v Map<String, Value>, key: &str, path: &str) -> Result<&'v Value> {
    obj.get(key)
        .ok_or_else(|| Error::parse(path, format!("missing '{key}'")))
}

fn number(obj: &Map<String, Value>, key: &str, path: &str) -> Result<f64> {
    require(obj, key, path)?
        .as_f64()
        .ok_or_else(|| Error::parse(format!("{path}.{key}"), "expected a number"))
}

fn number_array(obj: &Map<String, Value>, key: &str, path: &str) -> Result<Vec<f64>> {
    let arr = require(obj, key, path)?
        .as_array()
        .ok_or_else(|| Error::parse(format!("{path}.{key}"), "expected an array of numbers"))?;
    arr.iter()
        .enumerate()
        .map(|(i, v)| {
            v.as_f64()
                .ok_or_else(|| Error::parse(format!("{path}.{key}[{i}]"), "expected a number"))
        })
        .collect()
}

/// A norm exponent: a number, or the string `"inf"` for the sup norm.
fn norm_exponent(obj: &Map<String, Value>, key: &str, path: &str) -> Result<f64> {
    let v = require(obj, key, path)?;
    if let Some(n) = v.as_f64() {
        return Ok(n);
    }
    match v.as_str() {
        Some("inf") | Some("infinity") => Ok(f64::INFINITY),
        _ => Err(Error::parse(
            format!("{path}.{key}"),
            "expected a number or \"inf\"",
        )),
    }
}

fn entry_p<S: SerializeMap>(map: &mut S, key: &str, p: f64) -> std::result::Result<(), S::Error> {
    if p.is_infinite() {
        map.serialize_entry(key, "inf")
    } else {
        map.serialize_entry(key, &p)
    }
}

impl Serialize for RiskMeasure {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        match self {
            RiskMeasure::NegExpectation => map.serialize_entry("type", "neg_expectation")?,
            RiskMeasure::WorstCase => map.serialize_entry("type", "worst_case")?,
            RiskMeasure::ValueAtRisk { alpha } => {
                map.serialize_entry("type", "var")?;
                map.serialize_entry("alpha", alpha)?;
            }
            RiskMeasure::ExpectedShortfall { alpha } => {
                map.serialize_entry("type", "es")?;
                map.serialize_entry("alpha", alpha)?;
            }
            RiskMeasure::Entropic { theta } => {
                map.serialize_entry("type", "entropic")?;
                map.serialize_entry("theta", theta)?;
            }
            RiskMeasure::Spectral(m) => {
                map.serialize_entry("type", "spectral")?;
                map.serialize_entry("alphas", m.alphas())?;
                map.serialize_entry("masses", m.masses())?;
            }
        }
        map.end()
    }
}

impl Serialize for DeviationMeasure {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        match self {
            DeviationMeasure::FullDeviation { p } => {
                map.serialize_entry("type", "stdev")?;
                entry_p(&mut map, "p", *p)?;
            }
            DeviationMeasure::LowerSemideviation { p } => {
                map.serialize_entry("type", "semidev")?;
                entry_p(&mut map, "p", *p)?;
            }
            DeviationMeasure::Induced { rho } => {
                map.serialize_entry("type", "induced")?;
                map.serialize_entry("rho", rho)?;
            }
            DeviationMeasure::Range => map.serialize_entry("type", "range")?,
        }
        map.end()
    }
}

impl Serialize for RiskFunctional {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            RiskFunctional::Measure(m) => m.serialize(serializer),
            RiskFunctional::Compose { rho, dev, beta } => {
                let mut map = serializer.serialize_map(None)?;
                map.serialize_entry("type", "compose")?;
                map.serialize_entry("rho", rho)?;
                map.serialize_entry("dev", dev)?;
                map.serialize_entry("beta", beta)?;
                map.end()
            }
            RiskFunctional::LossDeviation { rho, beta, p } => {
                let mut map = serializer.serialize_map(None)?;
                map.serialize_entry("type", "loss_deviation")?;
                map.serialize_entry("rho", rho)?;
                map.serialize_entry("beta", beta)?;
                entry_p(&mut map, "p", *p)?;
                map.end()
            }
        }
    }
}

impl Serialize for Functional {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Functional::Risk(r) => r.serialize(serializer),
            Functional::Deviation(d) => d.serialize(serializer),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::to_json_string;

    #[test]
    fn parse_examples() {
        let f = parse_functional("{\"type\":\"es\",\"alpha\":0.05}").unwrap();
        assert_eq!(
            f,
            Functional::Risk(RiskFunctional::Measure(RiskMeasure::ExpectedShortfall {
                alpha: 0.05
            }))
        );

        let f = parse_functional(
            "{\"type\":\"loss_deviation\",\"rho\":{\"type\":\"es\",\"alpha\":0.667},\"beta\":1.0,\"p\":1}",
        )
        .unwrap();
        match f {
            Functional::Risk(RiskFunctional::LossDeviation { beta, p, .. }) => {
                assert_eq!(beta, 1.0);
                assert_eq!(p, 1.0);
            }
            other => panic!("unexpected parse: {other:?}"),
        }
    }

    #[test]
    fn alpha_validation_names_the_constraint() {
        let err = parse_functional("{\"type\":\"es\",\"alpha\":1.5}").unwrap_err();
        assert!(err.to_string().contains("alpha must lie in (0,1]"), "{err}");
    }

    #[test]
    fn unknown_keys_and_types_are_rejected_with_paths() {
        let err = parse_functional("{\"type\":\"es\",\"alpha\":0.5,\"extra\":1}").unwrap_err();
        assert!(err.to_string().contains("$.extra"), "{err}");

        let err = parse_functional("{\"type\":\"nope\"}").unwrap_err();
        assert!(err.to_string().contains("$.type"), "{err}");

        let err = parse_functional(
            "{\"type\":\"compose\",\"rho\":{\"type\":\"es\"},\"dev\":{\"type\":\"range\"},\"beta\":1}",
        )
        .unwrap_err();
        assert!(err.to_string().contains("$.rho"), "{err}");
    }

    #[test]
    fn infinite_p_round_trips_as_string() {
        let f = parse_functional("{\"type\":\"semidev\",\"p\":\"inf\"}").unwrap();
        let text = to_json_string(&f).unwrap();
        assert!(text.contains("\"p\":\"inf\""), "{text}");
        assert_eq!(parse_functional(&text).unwrap(), f);
    }

    #[test]
    fn every_cataloged_spec_round_trips() {
        for (name, f) in crate::implications::reference_catalog() {
            let text = to_json_string(&f).unwrap();
            assert_eq!(parse_functional(&text).unwrap(), f, "{name}: {text}");
        }
    }

    #[test]
    fn nested_specs_round_trip() {
        let texts = [
            "{\"type\":\"neg_expectation\"}",
            "{\"type\":\"var\",\"alpha\":0.1}",
            "{\"type\":\"es\",\"alpha\":0.05}",
            "{\"type\":\"entropic\",\"theta\":1.0}",
            "{\"type\":\"worst_case\"}",
            "{\"type\":\"spectral\",\"alphas\":[0.25,1.0],\"masses\":[0.5,0.5]}",
            "{\"type\":\"stdev\",\"p\":2}",
            "{\"type\":\"semidev\",\"p\":1}",
            "{\"type\":\"range\"}",
            "{\"type\":\"induced\",\"rho\":{\"type\":\"es\",\"alpha\":0.5}}",
            "{\"type\":\"compose\",\"rho\":{\"type\":\"loss_deviation\",\"rho\":{\"type\":\"es\",\"alpha\":0.5},\"beta\":0.5,\"p\":2},\"dev\":{\"type\":\"semidev\",\"p\":2},\"beta\":0.25}",
        ];
        for text in texts {
            let parsed = parse_functional(text).unwrap();
            let emitted = to_json_string(&parsed).unwrap();
            assert_eq!(parse_functional(&emitted).unwrap(), parsed, "{text}");
        }
    }
}
