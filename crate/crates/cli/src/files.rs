//! Arrangements, nets, and counterexample artifacts as JSON files with
//! exact "num/den" rationals.

use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use regionbound_core::oracle::{
    LineEq, NetLayer, OrientedArrangement2D, RationalNet, Tau2Counterexample,
};

use crate::output::histogram_json;
use crate::Failure;

pub fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(text: &str) -> Result<BigRational, String> {
    let (num, den) = match text.split_once('/') {
        Some((num, den)) => (num, den),
        None => (text, "1"),
    };
    let numer: BigInt =
        num.trim().parse().map_err(|_| format!("bad numerator in {text:?}"))?;
    let denom: BigInt =
        den.trim().parse().map_err(|_| format!("bad denominator in {text:?}"))?;
    if denom.is_zero() {
        return Err(format!("zero denominator in {text:?}"));
    }
    Ok(BigRational::new(numer, denom))
}

fn read_value(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("{}: invalid JSON: {e}", path.display())))
}

fn rational_field(object: &Value, key: &str, context: &str) -> Result<BigRational, Failure> {
    let text = object
        .get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| Failure::Usage(format!("{context}: missing string field {key:?}")))?;
    parse_rational(text).map_err(|e| Failure::Usage(format!("{context}: {e}")))
}

pub fn arrangement_json(arr: &OrientedArrangement2D) -> Value {
    json!({
        "lines": arr
            .lines()
            .iter()
            .map(|line| {
                json!({
                    "a": rational_string(&line.a),
                    "b": rational_string(&line.b),
                    "c": rational_string(&line.c),
                })
            })
            .collect::<Vec<_>>(),
    })
}

pub fn read_arrangement(path: &Path) -> Result<OrientedArrangement2D, Failure> {
    let value = read_value(path)?;
    let lines = value
        .get("lines")
        .and_then(Value::as_array)
        .ok_or_else(|| {
            Failure::Usage(format!("{}: expected {{\"lines\": [...]}}", path.display()))
        })?;
    let mut eqs = Vec::with_capacity(lines.len());
    for (index, line) in lines.iter().enumerate() {
        let context = format!("{}: line {index}", path.display());
        eqs.push(LineEq::new(
            rational_field(line, "a", &context)?,
            rational_field(line, "b", &context)?,
            rational_field(line, "c", &context)?,
        ));
    }
    Ok(OrientedArrangement2D::new(eqs)?)
}

pub fn net_json(net: &RationalNet) -> Value {
    json!({
        "layers": net
            .layers()
            .iter()
            .map(|layer| {
                json!({
                    "weights": layer
                        .weights
                        .iter()
                        .map(|row| row.iter().map(rational_string).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                    "biases": layer.biases.iter().map(rational_string).collect::<Vec<_>>(),
                })
            })
            .collect::<Vec<_>>(),
    })
}

pub fn read_net(path: &Path) -> Result<RationalNet, Failure> {
    let value = read_value(path)?;
    let layers = value
        .get("layers")
        .and_then(Value::as_array)
        .ok_or_else(|| {
            Failure::Usage(format!("{}: expected {{\"layers\": [...]}}", path.display()))
        })?;
    let mut parsed = Vec::with_capacity(layers.len());
    for (index, layer) in layers.iter().enumerate() {
        let context = format!("{}: layer {index}", path.display());
        let weights = layer
            .get("weights")
            .and_then(Value::as_array)
            .ok_or_else(|| Failure::Usage(format!("{context}: missing array field \"weights\"")))?;
        let biases = layer
            .get("biases")
            .and_then(Value::as_array)
            .ok_or_else(|| Failure::Usage(format!("{context}: missing array field \"biases\"")))?;
        let mut rows = Vec::with_capacity(weights.len());
        for (r, row) in weights.iter().enumerate() {
            let cells = row.as_array().ok_or_else(|| {
                Failure::Usage(format!("{context}: weight row {r} is not an array"))
            })?;
            let mut parsed_row = Vec::with_capacity(cells.len());
            for cell in cells {
                let text = cell.as_str().ok_or_else(|| {
                    Failure::Usage(format!("{context}: weight row {r} holds a non-string"))
                })?;
                parsed_row.push(
                    parse_rational(text).map_err(|e| Failure::Usage(format!("{context}: {e}")))?,
                );
            }
            rows.push(parsed_row);
        }
        let mut parsed_biases = Vec::with_capacity(biases.len());
        for bias in biases {
            let text = bias.as_str().ok_or_else(|| {
                Failure::Usage(format!("{context}: biases hold a non-string"))
            })?;
            parsed_biases.push(
                parse_rational(text).map_err(|e| Failure::Usage(format!("{context}: {e}")))?,
            );
        }
        parsed.push(NetLayer { weights: rows, biases: parsed_biases });
    }
    Ok(RationalNet::new(parsed)?)
}

/// Dumps a refuting configuration with everything needed to replay the
/// search that found it.
pub fn write_counterexample(
    dir: &Path,
    seed: u64,
    trials: usize,
    cx: &Tau2Counterexample,
) -> std::io::Result<PathBuf> {
    let p1 = cx.arrangement.len();
    fs::create_dir_all(dir)?;
    let path = dir.join(format!("counterexample-tau2-p{p1}-seed{seed}.json"));
    let doc = json!({
        "p1": p1,
        "seed": seed,
        "trials": trials,
        "sample_index": cx.sample_index,
        "flip": cx.flip,
        "arrangement": arrangement_json(&cx.arrangement),
        "histogram": histogram_json(&cx.histogram),
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("value rendering cannot fail");
    text.push('\n');
    fs::write(&path, text)?;
    Ok(path)
}
