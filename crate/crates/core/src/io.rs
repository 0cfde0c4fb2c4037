//! Text formats: the dataset CSV, `key = value` config files and lists of
//! reals.

use std::collections::BTreeMap;

use crate::depth::Dataset;
use crate::error::{Error, Result};

/// Parses a dataset CSV.
///
/// The header must be `y,x1,...,xk`. With an intercept the design gains a
/// leading column of ones, so `p = k + 1`; without one `p = k` and `k >= 1`.
/// Blank lines are skipped and fields may be padded with spaces.
pub fn parse_dataset(text: &str, with_intercept: bool) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(csv_error)?.clone();
    let k = check_header(&header, with_intercept)?;

    let mut y = Vec::new();
    let mut x = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let mut values = record.iter().enumerate().map(|(j, field)| {
            field.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| Error::Parse {
                line,
                msg: format!("column '{}': '{field}' is not a finite number", &header[j]),
            })
        });
        y.push(values.next().ok_or(Error::Parse { line, msg: "empty record".into() })??);
        let row = values.collect::<Result<Vec<f64>>>()?;
        debug_assert_eq!(row.len(), k);
        x.push(row);
    }
    if y.is_empty() {
        return Err(Error::Parse { line: 1, msg: "no data rows after the header".into() });
    }
    Dataset::new(y, x, with_intercept)
}

fn check_header(header: &csv::StringRecord, with_intercept: bool) -> Result<usize> {
    let bad = |msg: String| Error::Parse { line: 1, msg };
    let mut cols = header.iter();
    match cols.next() {
        Some("y") => {}
        Some(other) => return Err(bad(format!("first column must be 'y', found '{other}'"))),
        None => return Err(bad("missing header".into())),
    }
    let mut k = 0;
    for (j, name) in cols.enumerate() {
        let want = format!("x{}", j + 1);
        if name != want {
            return Err(bad(format!("column {} must be '{want}', found '{name}'", j + 2)));
        }
        k += 1;
    }
    if !with_intercept && k == 0 {
        return Err(bad("a model without intercept needs at least column 'x1'".into()));
    }
    Ok(k)
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    let msg = match e.kind() {
        csv::ErrorKind::UnequalLengths { expected_len, len, .. } => {
            format!("expected {expected_len} fields, found {len}")
        }
        csv::ErrorKind::Utf8 { .. } => "invalid UTF-8".into(),
        _ => e.to_string(),
    };
    Error::Parse { line, msg }
}

/// Writes `data` in the format read by [`parse_dataset`]. Values use the
/// shortest representation that parses back to the same float.
pub fn write_dataset(data: &Dataset) -> String {
    let k = data.x(0).len();
    let mut out = String::from("y");
    for j in 1..=k {
        out.push_str(&format!(",x{j}"));
    }
    out.push('\n');
    for i in 0..data.n() {
        out.push_str(&data.y()[i].to_string());
        for v in data.x(i) {
            out.push(',');
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    out
}

/// Parses `key = value` lines. `#` starts a comment, blank lines are
/// ignored and a key may appear only once. Keys are lowercase letters,
/// digits, `_` and `-`.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split_once('#').map_or(raw, |(head, _)| head).trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| Error::Parse { line, msg: format!("expected 'key = value', found '{content}'") })?;
        let key = key.trim();
        let value = value.trim();
        if key.is_empty()
            || !key.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' || c == '-')
        {
            return Err(Error::Parse { line, msg: format!("invalid key '{key}'") });
        }
        if value.is_empty() {
            return Err(Error::Parse { line, msg: format!("key '{key}' has no value") });
        }
        if out.insert(key.to_string(), value.to_string()).is_some() {
            return Err(Error::Parse { line, msg: format!("duplicate key '{key}'") });
        }
    }
    Ok(out)
}

/// Parses a nonempty list of finite reals separated by commas and/or
/// whitespace, e.g. `"0.5, -1 2e3"`.
pub fn parse_real_list(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for token in text.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
        let v: f64 = token
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| Error::Parse { line: 1, msg: format!("'{token}' is not a finite number") })?;
        out.push(v);
    }
    if out.is_empty() {
        return Err(Error::Parse { line: 1, msg: "empty list".into() });
    }
    Ok(out)
}
