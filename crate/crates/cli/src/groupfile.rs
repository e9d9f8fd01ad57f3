//! JSON group files.
//!
//! ```json
//! {
//!   "kind": "SL",
//!   "n": 3,
//!   "generators": [[["0", "-1", "1"], ["0", "-1", "2"], ["-1", "0", "1"]]],
//!   "transvection": { "word": [1, -2] },
//!   "pcs_level": 45
//! }
//! ```
//!
//! Integers are decimal strings; plain JSON integers are accepted too.
//! Words use signed 1-based generator indices.

use std::path::Path;

use arithlevel::{Ambient, GroupSpec, GroupWord, IntMatrix, Kind, Transvection};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Text(String),
    Int(i64),
}

pub type MatrixRows = Vec<Vec<Entry>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransvectionField {
    Word(Vec<i32>),
    Matrix(MatrixRows),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub kind: String,
    pub n: usize,
    pub generators: Vec<MatrixRows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transvection: Option<TransvectionField>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pcs_level: Option<u64>,
}

fn parse_error(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

fn to_matrix(rows: &MatrixRows, n: usize, what: &str) -> Result<IntMatrix, CliError> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(parse_error(format!("{what} is not {n} x {n}")));
    }
    let mut entries = Vec::with_capacity(n * n);
    for x in rows.iter().flatten() {
        entries.push(match x {
            Entry::Int(v) => BigInt::from(*v),
            Entry::Text(s) => s
                .trim()
                .parse::<BigInt>()
                .map_err(|_| parse_error(format!("{what}: {s:?} is not an integer")))?,
        });
    }
    Ok(IntMatrix::from_entries(n, entries).expect("checked shape"))
}

fn from_matrix(g: &IntMatrix) -> MatrixRows {
    g.rows()
        .map(|r| r.iter().map(|x| Entry::Text(x.to_string())).collect())
        .collect()
}

impl GroupFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| parse_error(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Validated group.
    pub fn to_spec(&self) -> Result<GroupSpec, CliError> {
        let kind = match self.kind.as_str() {
            "SL" => Kind::SL,
            "Sp" => Kind::Sp,
            other => return Err(parse_error(format!("unknown kind {other:?}"))),
        };
        let ambient = Ambient::new(kind, self.n).map_err(|e| parse_error(e.to_string()))?;
        let mut gens = Vec::with_capacity(self.generators.len());
        for (i, g) in self.generators.iter().enumerate() {
            let what = format!("generator {}", i + 1);
            let m = to_matrix(g, self.n, &what)?;
            if !ambient.contains(&m) {
                return Err(parse_error(format!(
                    "{what} is not in {ambient} (determinant {})",
                    m.det()
                )));
            }
            gens.push(m);
        }
        let mut spec = GroupSpec::new(ambient, gens).map_err(|e| parse_error(e.to_string()))?;
        if let Some(t) = &self.transvection {
            let t = match t {
                TransvectionField::Word(w) => Transvection::Word(GroupWord::new(w.clone())),
                TransvectionField::Matrix(rows) => {
                    Transvection::Matrix(to_matrix(rows, self.n, "transvection")?)
                }
            };
            spec = spec
                .with_transvection(t)
                .map_err(|e| parse_error(format!("transvection: {e}")))?;
        }
        if let Some(r) = self.pcs_level {
            spec = spec
                .with_pcs_level(r)
                .map_err(|e| parse_error(format!("pcs_level: {e}")))?;
        }
        Ok(spec)
    }

    pub fn from_spec(spec: &GroupSpec) -> Self {
        GroupFile {
            kind: spec.ambient().kind().to_string(),
            n: spec.degree(),
            generators: spec.generators().iter().map(from_matrix).collect(),
            transvection: spec.transvection().map(|t| match t {
                Transvection::Word(w) => TransvectionField::Word(w.letters().to_vec()),
                Transvection::Matrix(m) => TransvectionField::Matrix(from_matrix(m)),
            }),
            pcs_level: spec.pcs_level(),
        }
    }
}

/// A single matrix given as JSON rows.
pub fn parse_matrix(text: &str, n: usize) -> Result<IntMatrix, CliError> {
    let rows: MatrixRows = serde_json::from_str(text).map_err(|e| parse_error(e.to_string()))?;
    to_matrix(&rows, n, "matrix")
}

#[cfg(test)]
mod tests {
    use super::*;
    use arithlevel::families;

    #[test]
    fn round_trip() {
        for spec in [
            families::beta(3, true).unwrap(),
            families::mixed_level_example().unwrap(),
            families::hypergeometric(2, 3).unwrap(),
        ] {
            let file = GroupFile::from_spec(&spec);
            let back = GroupFile::parse(&file.to_json()).unwrap();
            assert_eq!(back, file);
            let spec2 = back.to_spec().unwrap();
            assert_eq!(spec2.generators(), spec.generators());
            assert_eq!(spec2.transvection(), spec.transvection());
            assert_eq!(spec2.pcs_level(), spec.pcs_level());
        }
    }

    #[test]
    fn rejects_bad_generator() {
        let text = r#"{"kind":"SL","n":3,"generators":[
            [[1,0,0],[0,1,0],[0,0,1]],
            [["2","0","0"],["0","1","0"],["0","0","1"]]]}"#;
        let err = GroupFile::parse(text).unwrap().to_spec().unwrap_err();
        assert!(err.to_string().contains("generator 2"), "{err}");
    }

    #[test]
    fn big_entries() {
        let big = "123456789012345678901234567890";
        let text = format!(
            r#"{{"kind":"SL","n":3,"generators":[[["1","{big}","0"],["0","1","0"],["0","0","1"]]]}}"#
        );
        let spec = GroupFile::parse(&text).unwrap().to_spec().unwrap();
        assert_eq!(spec.generators()[0].get(0, 1).to_string(), big);
    }
}
