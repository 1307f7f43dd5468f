//! Serialization helpers shared by every report: counts as decimal strings,
//! reals rounded to 12 significant digits, and a flat CSV rendering.

use std::collections::BTreeMap;
use std::fmt::Display;

use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::combinatorics::BigCount;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

pub fn big_as_string<S: Serializer>(value: &BigCount, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.serialize_str(&value.to_string())
}

pub fn big_map_as_strings<K, S>(map: &BTreeMap<K, BigCount>, serializer: S) -> Result<S::Ok, S::Error>
where
    K: Display,
    S: Serializer,
{
    serializer.collect_map(map.iter().map(|(k, v)| (k.to_string(), v.to_string())))
}

/// Rounds to 12 significant digits so that reports do not depend on the
/// last bits of floating-point evaluation order.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

pub fn real12<S: Serializer>(x: &f64, serializer: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        serializer.serialize_f64(round12(*x))
    } else {
        serializer.serialize_str(&x.to_string())
    }
}

pub fn opt_real12<S: Serializer>(x: &Option<f64>, serializer: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(x) => real12(x, serializer),
        None => serializer.serialize_none(),
    }
}

pub fn to_json<T: Serialize + ?Sized>(report: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    Ok(text)
}

/// Flattens a report into `field,value` rows; nested fields are joined with
/// `.` and array positions appear as indices.
pub fn to_csv<T: Serialize + ?Sized>(report: &T) -> Result<String> {
    let value = serde_json::to_value(report)?;
    let mut rows = Vec::new();
    flatten("", &value, &mut rows);
    write_csv(["field", "value"], rows)
}

/// One `ell,count` row per deficiency, ascending.
pub fn histogram_csv(histogram: &BTreeMap<u64, BigCount>) -> Result<String> {
    write_csv(
        ["ell", "count"],
        histogram.iter().map(|(ell, count)| (ell.to_string(), count.to_string())),
    )
}

pub fn emit<T: Serialize + ?Sized>(report: &T, format: Format) -> Result<String> {
    match format {
        Format::Json => to_json(report),
        Format::Csv => to_csv(report),
    }
}

fn write_csv<I: IntoIterator<Item = (String, String)>>(header: [&str; 2], rows: I) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(header)?;
    for (field, value) in rows {
        writer.write_record([field, value])?;
    }
    let bytes = writer.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn flatten(prefix: &str, value: &Value, rows: &mut Vec<(String, String)>) {
    let join = |key: &str| {
        if prefix.is_empty() {
            key.to_string()
        } else {
            format!("{prefix}.{key}")
        }
    };
    match value {
        Value::Object(map) if !map.is_empty() => {
            for (key, v) in map {
                flatten(&join(key), v, rows);
            }
        }
        Value::Array(items) if items.iter().any(|v| v.is_object() || v.is_array()) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), v, rows);
            }
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            rows.push((prefix.to_string(), parts.join(" ")));
        }
        other => rows.push((prefix.to_string(), scalar(other))),
    }
}

fn scalar(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        Value::Object(_) => "{}".into(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Sample {
        #[serde(serialize_with = "big_as_string")]
        total: BigCount,
        #[serde(serialize_with = "real12")]
        ratio: f64,
        #[serde(serialize_with = "real12")]
        blowup: f64,
        members: Vec<u32>,
        #[serde(serialize_with = "big_map_as_strings")]
        profile: BTreeMap<u64, BigCount>,
    }

    fn sample() -> Sample {
        Sample {
            total: BigCount::from(76u8),
            ratio: 1.0 / 3.0,
            blowup: f64::INFINITY,
            members: vec![1, 2],
            profile: BTreeMap::from([(10, BigCount::from(1u8)), (2, BigCount::from(5u8))]),
        }
    }

    #[test]
    fn json_is_stable_and_ordered() {
        let a = to_json(&sample()).unwrap();
        assert_eq!(a, to_json(&sample()).unwrap());
        assert!(a.contains("\"total\": \"76\""));
        assert!(a.contains("\"ratio\": 0.333333333333"));
        assert!(a.contains("\"blowup\": \"inf\""));
        assert!(a.find("\"2\"").unwrap() < a.find("\"10\"").unwrap());
        assert!(a.find("total").unwrap() < a.find("ratio").unwrap());
    }

    #[test]
    fn csv_flattens_fields() {
        let text = to_csv(&sample()).unwrap();
        assert!(text.starts_with("field,value\ntotal,76\n"));
        assert!(text.contains("members,1 2\n"));
        assert!(text.contains("profile.2,5\n"));
    }

    #[test]
    fn histogram_rows_ascend() {
        let hist = BTreeMap::from([(3, BigCount::from(2u8)), (1, BigCount::from(10u8))]);
        assert_eq!(histogram_csv(&hist).unwrap(), "ell,count\n1,10\n3,2\n");
    }

    #[test]
    fn rounding() {
        assert_eq!(round12(0.1 + 0.2), 0.3);
        assert_eq!(round12(0.0), 0.0);
        assert!(round12(f64::NAN).is_nan());
    }
}
