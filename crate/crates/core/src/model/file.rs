//! JSON instance documents.
//!
//! ```json
//! {
//!   "kind": "udcop",
//!   "n": 3,
//!   "d": 3,
//!   "domains": [[1, 2, 3], [1, 2, 3], [1, 2, 3]],
//!   "unary": [{"1": 70.0, "2": 230.0}, ...],
//!   "privacy": [{"1": 80.0, "2": 20.0}, ...],
//!   "global": {"type": "all_equal", "penalty": "inf"}
//! }
//! ```
//!
//! Privacy keys are values for `udcop` and constraint ids (`unary:<v>`,
//! `all_equal`) for `udcoppc`. `privacy` is empty or omitted for `dcop`.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{ConstraintId, GlobalConstraint, Instance, Penalty, ProblemKind, RevealEntry, Value};
use crate::error::{Error, Result};

/// A `{key: cost}` object that keeps document order.
#[derive(Debug, Default)]
struct CostMap(Vec<(String, f64)>);

impl Serialize for CostMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for CostMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = CostMap;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an object mapping keys to costs")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut a: A) -> Result<CostMap, A::Error> {
                let mut out: Vec<(String, f64)> = Vec::new();
                while let Some((k, v)) = a.next_entry::<String, f64>()? {
                    if out.iter().any(|(x, _)| *x == k) {
                        return Err(de::Error::custom(format!("duplicate key `{k}`")));
                    }
                    out.push((k, v));
                }
                Ok(CostMap(out))
            }
        }
        d.deserialize_map(V)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum PenaltyRepr {
    Number(f64),
    Text(String),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GlobalDoc {
    #[serde(rename = "type")]
    kind: String,
    penalty: PenaltyRepr,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    kind: ProblemKind,
    n: usize,
    d: u32,
    domains: Vec<Vec<u32>>,
    unary: Vec<CostMap>,
    #[serde(default)]
    privacy: Vec<CostMap>,
    global: GlobalDoc,
}

fn field_err(path: &Path, field: String, message: String) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line: 0,
        column: 0,
        message: format!("{field}: {message}"),
    }
}

fn to_doc(inst: &Instance) -> InstanceDoc {
    let costs =
        |t: &super::CostTable| CostMap(t.iter().map(|(v, c)| (v.to_string(), *c)).collect());
    InstanceDoc {
        kind: inst.kind,
        n: inst.n,
        d: inst.d,
        domains: inst
            .domains
            .iter()
            .map(|d| d.iter().map(|v| v.0).collect())
            .collect(),
        unary: inst.unary.iter().map(costs).collect(),
        privacy: inst
            .privacy
            .iter()
            .map(|t| CostMap(t.iter().map(|(e, c)| (e.to_string(), *c)).collect()))
            .collect(),
        global: GlobalDoc {
            kind: "all_equal".into(),
            penalty: match inst.global.penalty {
                Penalty::Finite(w) => PenaltyRepr::Number(w),
                Penalty::Infinite => PenaltyRepr::Text("inf".into()),
            },
        },
    }
}

fn from_doc(doc: InstanceDoc, path: &Path) -> Result<Instance> {
    if doc.global.kind != "all_equal" {
        return Err(field_err(
            path,
            "global.type".into(),
            format!("unsupported constraint type `{}`", doc.global.kind),
        ));
    }
    let penalty = match doc.global.penalty {
        PenaltyRepr::Number(w) => Penalty::Finite(w),
        PenaltyRepr::Text(s) if s == "inf" => Penalty::Infinite,
        PenaltyRepr::Text(s) => {
            return Err(field_err(
                path,
                "global.penalty".into(),
                format!("expected a number or \"inf\", got `{s}`"),
            ))
        }
    };

    let parse_value = |field: &str, k: &str| -> Result<Value> {
        k.parse::<u32>()
            .map(Value)
            .map_err(|_| field_err(path, field.to_string(), format!("key `{k}` is not a value")))
    };

    let mut unary = Vec::with_capacity(doc.unary.len());
    for (i, m) in doc.unary.into_iter().enumerate() {
        let mut t = super::CostTable::new();
        for (k, c) in m.0 {
            t.insert(parse_value(&format!("unary[{i}]"), &k)?, c);
        }
        unary.push(t);
    }

    let mut privacy = Vec::with_capacity(doc.privacy.len());
    for (i, m) in doc.privacy.into_iter().enumerate() {
        let field = format!("privacy[{i}]");
        let mut t = super::PrivacyTable::new();
        for (k, c) in m.0 {
            let entry = match doc.kind {
                ProblemKind::Udcoppc => RevealEntry::Constraint(
                    k.parse::<ConstraintId>()
                        .map_err(|e| field_err(path, field.clone(), e))?,
                ),
                _ => RevealEntry::Value(parse_value(&field, &k)?),
            };
            t.insert(entry, c);
        }
        privacy.push(t);
    }

    Ok(Instance {
        kind: doc.kind,
        n: doc.n,
        d: doc.d,
        domains: doc
            .domains
            .into_iter()
            .map(|d| d.into_iter().map(Value).collect())
            .collect(),
        unary,
        privacy,
        global: GlobalConstraint { penalty },
    })
}

/// Pretty-printed JSON document for `inst`, newline terminated.
pub fn to_json(inst: &Instance) -> String {
    let mut s =
        serde_json::to_string_pretty(&to_doc(inst)).expect("instance documents always serialize");
    s.push('\n');
    s
}

/// Parses and validates a document. `path` is only used in error messages.
pub fn parse_instance(text: &str, path: &Path) -> Result<Instance> {
    let doc: InstanceDoc = serde_json::from_str(text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let inst = from_doc(doc, path)?;
    super::ensure_valid(&inst)?;
    Ok(inst)
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_instance(&text, path)
}

pub fn save_instance(inst: &Instance, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_json(inst)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn example_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        for inst in [
            fixtures::example1(),
            fixtures::example2(),
            fixtures::example3(),
        ] {
            let p = dir.path().join("x.json");
            save_instance(&inst, &p).unwrap();
            assert_eq!(load_instance(&p).unwrap(), inst);
        }
    }

    #[test]
    fn missing_kind_is_named() {
        let text = to_json(&fixtures::example2()).replace("\"kind\": \"udcop\",", "");
        let err = parse_instance(&text, Path::new("inst.json")).unwrap_err();
        let msg = err.to_string();
        assert!(matches!(err, Error::Parse { .. }));
        assert!(msg.contains("kind"), "{msg}");
    }

    #[test]
    fn negative_privacy_fails_validation() {
        let text = to_json(&fixtures::example2()).replacen("\"1\": 80.0", "\"1\": -80.0", 1);
        // the first such entry is A1's privacy for value 1
        let err = parse_instance(&text, Path::new("inst.json")).unwrap_err();
        assert!(err.to_string().contains("costs ≥ 0"), "{err}");
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = parse_instance("{\n  \"kind\": ", Path::new("bad.json")).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_keys_and_penalties() {
        let text = to_json(&fixtures::example1()).replace("\"inf\"", "\"lots\"");
        let err = parse_instance(&text, Path::new("p.json")).unwrap_err();
        assert!(err.to_string().contains("global.penalty"));

        let text = to_json(&fixtures::example3()).replace("unary:1", "unary:one");
        let err = parse_instance(&text, Path::new("p.json")).unwrap_err();
        assert!(err.to_string().contains("privacy[0]"), "{err}");
    }

    #[test]
    fn dcop_omits_privacy() {
        let inst = fixtures::example1();
        assert_eq!(inst.kind, ProblemKind::Dcop);
        let text = to_json(&inst).replace(",\n  \"privacy\": []", "");
        assert_eq!(parse_instance(&text, Path::new("d.json")).unwrap(), inst);
    }
}
