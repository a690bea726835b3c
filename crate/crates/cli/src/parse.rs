use std::collections::BTreeMap;
use std::path::Path;

use ghz_decay::Complex64;
use serde_json::Value;

use crate::error::CliError;

fn field_error(field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("--{field}: {msg}"))
}

/// `a,b,...` where each item is an integer or an inclusive `start:stop` range.
pub fn int_list(field: &str, text: &str) -> Result<Vec<usize>, CliError> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim) {
        let parse = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| field_error(field, format!("'{s}' is not a non-negative integer")))
        };
        match item.split_once(':') {
            Some((a, b)) => {
                let (a, b) = (parse(a)?, parse(b)?);
                if a > b {
                    return Err(field_error(field, format!("empty range {item}")));
                }
                out.extend(a..=b);
            }
            None => out.push(parse(item)?),
        }
    }
    Ok(out)
}

/// `a,b,...` or an inclusive `start:stop:step` grid.
pub fn float_grid(field: &str, text: &str) -> Result<Vec<f64>, CliError> {
    let number = |s: &str| -> Result<f64, CliError> {
        let v: f64 = s
            .trim()
            .parse()
            .map_err(|_| field_error(field, format!("'{s}' is not a number")))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(field_error(field, format!("'{s}' is not finite")))
        }
    };
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step) = (number(start)?, number(stop)?, number(step)?);
            if step <= 0.0 || stop < start {
                return Err(field_error(
                    field,
                    format!("grid {text} needs start <= stop and step > 0"),
                ));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize;
            Ok((0..=count)
                .map(|k| start + k as f64 * step)
                .map(|v| if v > stop { stop } else { v })
                .collect())
        }
        [single] => single.split(',').map(number).collect(),
        _ => Err(field_error(
            field,
            format!("'{text}' is neither a list nor start:stop:step"),
        )),
    }
}

/// `re,im;re,im;...`.
pub fn complex_list(field: &str, text: &str) -> Result<Vec<Complex64>, CliError> {
    text.split(';')
        .map(|pair| {
            let parts: Vec<&str> = pair.split(',').map(str::trim).collect();
            match parts.as_slice() {
                [re, im] => {
                    let re: f64 = re
                        .parse()
                        .map_err(|_| field_error(field, format!("'{re}' is not a number")))?;
                    let im: f64 = im
                        .parse()
                        .map_err(|_| field_error(field, format!("'{im}' is not a number")))?;
                    Ok(Complex64::new(re, im))
                }
                _ => Err(field_error(field, format!("'{pair}' is not a re,im pair"))),
            }
        })
        .collect()
}

pub fn real_list(field: &str, text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| field_error(field, format!("'{s}' is not a number")))
        })
        .collect()
}

fn json_pairs(field: &str, value: &Value) -> Result<Vec<Complex64>, CliError> {
    let items = value
        .as_array()
        .ok_or_else(|| field_error(field, "expected an array of [re, im] pairs"))?;
    items
        .iter()
        .enumerate()
        .map(|(k, item)| match item.as_array().map(Vec::as_slice) {
            Some([re, im]) => match (re.as_f64(), im.as_f64()) {
                (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
                _ => Err(field_error(
                    field,
                    format!("entry {k} is not a pair of numbers"),
                )),
            },
            _ => Err(field_error(
                field,
                format!("entry {k} is not a [re, im] pair"),
            )),
        })
        .collect()
}

fn read_json(field: &str, path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| field_error(field, format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| field_error(field, format!("{}: {e}", path.display())))
}

/// A JSON array of `[re, im]` pairs.
pub fn amplitude_file(field: &str, path: &Path) -> Result<Vec<Complex64>, CliError> {
    json_pairs(field, &read_json(field, path)?)
}

pub enum AmplitudeFile {
    Single(Vec<Complex64>),
    PerDimension(BTreeMap<usize, Vec<Complex64>>),
}

/// A JSON array of `[re, im]` pairs, or an object mapping dimensions to such
/// arrays.
pub fn amplitude_map_file(field: &str, path: &Path) -> Result<AmplitudeFile, CliError> {
    let value = read_json(field, path)?;
    match &value {
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| {
                let d = k
                    .parse()
                    .map_err(|_| field_error(field, format!("key '{k}' is not a dimension")))?;
                Ok((d, json_pairs(field, v)?))
            })
            .collect::<Result<_, _>>()
            .map(AmplitudeFile::PerDimension),
        _ => json_pairs(field, &value).map(AmplitudeFile::Single),
    }
}
