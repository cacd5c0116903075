//! Resolving the `<input>` argument: a family spec string, a JSON file, or
//! `-` for JSON on standard input.

use std::fs;
use std::io::Read;
use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use irrseq::families::FamilySpec;
use irrseq::semigroup::SemigroupJson;
use irrseq::{ElementId, FiniteRing, Semigroup};

/// A semigroup to analyze, with its ring when it is `S_R`.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub semigroup: Semigroup,
    pub ring: Option<FiniteRing>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum RingSpec {
    ZmodProduct {
        moduli: Vec<usize>,
    },
    Tables {
        n: usize,
        add: Vec<Vec<usize>>,
        mul: Vec<Vec<usize>>,
    },
}

fn from_ring(ring: FiniteRing) -> Loaded {
    Loaded {
        semigroup: ring.mult_semigroup(),
        ring: Some(ring),
    }
}

/// Parses a JSON document: a ring spec when it has a `kind` field,
/// otherwise a semigroup table.
pub fn parse_json(text: &str) -> Result<Loaded, String> {
    let value: Value = serde_json::from_str(text).map_err(|e| format!("invalid JSON: {e}"))?;
    if value.get("kind").is_some() {
        let spec: RingSpec = serde_json::from_value(value).map_err(|e| format!("invalid ring spec: {e}"))?;
        let ring = match spec {
            RingSpec::ZmodProduct { moduli } => FiniteRing::zmod_product(&moduli),
            RingSpec::Tables { n, add, mul } => {
                if add.len() != n || mul.len() != n {
                    return Err(format!("ring spec declares n = {n} but tables have {} and {} rows", add.len(), mul.len()));
                }
                FiniteRing::from_tables(&add, &mul)
            }
        }
        .map_err(|e| e.to_string())?;
        return Ok(from_ring(ring));
    }
    let doc: SemigroupJson = serde_json::from_value(value).map_err(|e| format!("invalid semigroup JSON: {e}"))?;
    let semigroup = Semigroup::from_json(&doc).map_err(|e| e.to_string())?;
    Ok(Loaded { semigroup, ring: None })
}

pub fn load(input: &str) -> Result<Loaded, String> {
    if input == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| format!("reading standard input: {e}"))?;
        return parse_json(&text);
    }
    if Path::new(input).is_file() {
        let text = fs::read_to_string(input).map_err(|e| format!("reading {input}: {e}"))?;
        return parse_json(&text);
    }
    let spec: FamilySpec = input
        .parse()
        .map_err(|e| format!("{input:?} is neither a file nor a family spec: {e}"))?;
    let instance = spec.build().map_err(|e| e.to_string())?;
    Ok(Loaded {
        semigroup: instance.semigroup,
        ring: instance.ring,
    })
}

/// Looks an element up by label first, then by index.
pub fn resolve_element(s: &Semigroup, name: &str) -> Result<ElementId, String> {
    if let Some(a) = s.find_element(name) {
        return Ok(a);
    }
    match name.parse::<usize>() {
        Ok(a) if a < s.order() => Ok(a),
        _ => Err(format!("no element named {name:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_specs() {
        let l = parse_json(r#"{"kind":"zmod_product","moduli":[2,4]}"#).unwrap();
        assert_eq!(l.semigroup.order(), 8);
        assert!(l.ring.is_some());
        let l = parse_json(r#"{"kind":"tables","n":2,"add":[[0,1],[1,0]],"mul":[[0,0],[0,1]]}"#).unwrap();
        assert_eq!(l.semigroup.identity(), Some(1));
        assert!(parse_json(r#"{"kind":"tables","n":3,"add":[[0,1],[1,0]],"mul":[[0,0],[0,1]]}"#).is_err());
        assert!(parse_json(r#"{"kind":"bogus"}"#).is_err());
    }

    #[test]
    fn semigroup_json() {
        let l = parse_json(r#"{"n":2,"table":[[0,1],[1,1]],"labels":["e","z"]}"#).unwrap();
        assert_eq!(l.semigroup.identity(), Some(0));
        assert_eq!(resolve_element(&l.semigroup, "z"), Ok(1));
        assert_eq!(resolve_element(&l.semigroup, "1"), Ok(1));
        assert!(resolve_element(&l.semigroup, "7").is_err());
        assert!(parse_json(r#"{"n":2,"table":[[0,1],[0,1]]}"#).is_err());
        assert!(parse_json("not json").is_err());
    }

    #[test]
    fn family_specs() {
        let l = load("s2:m=3").unwrap();
        assert_eq!(l.semigroup.order(), 7);
        assert!(load("zmod:12").unwrap().ring.is_some());
        assert!(load("nonsense").is_err());
    }
}
