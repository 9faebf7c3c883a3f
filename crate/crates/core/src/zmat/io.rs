//! Matrix exchange formats: integer CSV (one row per line) and
//! `{"rows":m,"cols":n,"data":[[...],...]}` JSON.

use std::path::Path;

use serde_json::{json, Value};

use super::{IntMatrix, IntScalar, ZmatError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixFormat {
    Csv,
    Json,
}

impl MatrixFormat {
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => MatrixFormat::Json,
            _ => MatrixFormat::Csv,
        }
    }
}

fn parse_entry<T: IntScalar>(text: &str, row: usize, col: usize) -> Result<T, ZmatError> {
    let t = text.trim();
    let t = t.strip_prefix('+').unwrap_or(t);
    T::from_str_radix(t, 10)
        .map_err(|_| ZmatError::Parse(format!("entry ({row}, {col}) is not an integer: {text:?}")))
}

/// Parses integer CSV. Blank lines and lines starting with `#` are skipped.
pub fn parse_csv<T: IntScalar>(text: &str) -> Result<IntMatrix<T>, ZmatError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<T>> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| ZmatError::Parse(e.to_string()))?;
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        let row = record
            .iter()
            .enumerate()
            .map(|(j, field)| parse_entry(field, i, j))
            .collect::<Result<Vec<T>, _>>()?;
        rows.push(row);
    }
    let cols = rows.first().map_or(0, |r| r.len());
    IntMatrix::from_rows(rows, cols)
}

fn json_entry<T: IntScalar>(v: &Value, row: usize, col: usize) -> Result<T, ZmatError> {
    match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_entry(&n.to_string(), row, col),
        Value::String(s) => parse_entry(s, row, col),
        other => Err(ZmatError::Parse(format!(
            "entry ({row}, {col}) is not an integer: {other}"
        ))),
    }
}

pub fn parse_json<T: IntScalar>(text: &str) -> Result<IntMatrix<T>, ZmatError> {
    let value: Value = serde_json::from_str(text).map_err(|e| ZmatError::Parse(e.to_string()))?;
    let dim = |key: &str| -> Result<usize, ZmatError> {
        value
            .get(key)
            .and_then(Value::as_u64)
            .map(|x| x as usize)
            .ok_or_else(|| ZmatError::Parse(format!("missing or invalid {key:?}")))
    };
    let rows = dim("rows")?;
    let cols = dim("cols")?;
    let data = value
        .get("data")
        .and_then(Value::as_array)
        .ok_or_else(|| ZmatError::Parse("missing \"data\" array".into()))?;
    if data.len() != rows {
        return Err(ZmatError::Parse(format!(
            "\"rows\" is {rows} but \"data\" has {} rows",
            data.len()
        )));
    }
    let parsed = data
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let row = row
                .as_array()
                .ok_or_else(|| ZmatError::Parse(format!("row {i} is not an array")))?;
            row.iter()
                .enumerate()
                .map(|(j, v)| json_entry(v, i, j))
                .collect::<Result<Vec<T>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    IntMatrix::from_rows(parsed, cols)
}

pub fn read_matrix<T: IntScalar>(path: &Path) -> Result<IntMatrix<T>, ZmatError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ZmatError::Io(format!("{}: {e}", path.display())))?;
    match MatrixFormat::from_path(path) {
        MatrixFormat::Json => parse_json(&text),
        MatrixFormat::Csv => parse_csv(&text),
    }
}

pub fn to_csv<T: IntScalar>(m: &IntMatrix<T>) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let line: Vec<String> = m.row(i).iter().map(|x| x.to_string()).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

fn entry_value<T: IntScalar>(x: &T) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => Value::String(x.to_string()),
    }
}

pub fn to_json_value<T: IntScalar>(m: &IntMatrix<T>) -> Value {
    let data: Vec<Value> = (0..m.rows())
        .map(|i| Value::Array(m.row(i).iter().map(entry_value).collect()))
        .collect();
    json!({"rows": m.rows(), "cols": m.cols(), "data": data})
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type M = IntMatrix<BigInt>;

    #[test]
    fn csv_reads_rows() {
        let m: M = parse_csv("# comment\n1, 2,-3\n\n4,5,+6\n").unwrap();
        assert_eq!(m, M::from_i64_rows(&[&[1, 2, -3], &[4, 5, 6]]));
    }

    #[test]
    fn csv_rejects_non_integers() {
        assert!(parse_csv::<BigInt>("1,2.5\n").is_err());
        assert!(parse_csv::<BigInt>("1,x\n").is_err());
        assert!(matches!(
            parse_csv::<BigInt>("1,2\n3\n"),
            Err(ZmatError::Ragged { .. })
        ));
    }

    #[test]
    fn json_reads_and_validates() {
        let m: M = parse_json(r#"{"rows":2,"cols":2,"data":[[1,0],[0,"-7"]]}"#).unwrap();
        assert_eq!(m, M::from_i64_rows(&[&[1, 0], &[0, -7]]));
        assert!(parse_json::<BigInt>(r#"{"rows":1,"cols":1,"data":[[1.0]]}"#).is_err());
        assert!(parse_json::<BigInt>(r#"{"rows":2,"cols":1,"data":[[1]]}"#).is_err());
        let empty: M = parse_json(r#"{"rows":3,"cols":0,"data":[[],[],[]]}"#).unwrap();
        assert_eq!(empty.shape(), (3, 0));
    }

    #[test]
    fn big_entries_survive_json() {
        let huge: BigInt = "123456789012345678901234567890".parse().unwrap();
        let m = M::from_rows(vec![vec![huge.clone()]], 1).unwrap();
        let text = to_json_value(&m).to_string();
        assert_eq!(parse_json::<BigInt>(&text).unwrap(), m);
    }

    #[test]
    fn csv_writer_matches_reader() {
        let m = M::from_i64_rows(&[&[1, -2], &[0, 3]]);
        assert_eq!(to_csv(&m), "1,-2\n0,3\n");
        assert_eq!(parse_csv::<BigInt>(&to_csv(&m)).unwrap(), m);
    }
}
