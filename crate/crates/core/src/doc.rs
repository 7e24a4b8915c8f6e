//! Serialized shift and code descriptions: the JSON formats consumed and
//! produced by the command line tool.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize};

use crate::alphabet::Alphabet;
use crate::code::SlidingBlockCode;
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::sft::{from_forbidden, SftSpec};

/// A shift space given either by forbidden words or by a labeled graph.
///
/// ```json
/// {"alphabet": ["0","1"], "kind": "forbidden", "forbidden": [["1","1"]]}
/// {"alphabet": ["0","1"], "kind": "graph",
///  "states": ["a","b"], "edges": [["a","0","a"],["a","1","b"],["b","0","a"]]}
/// ```
///
/// Forbidden words may also be written as plain strings like "11" when
/// every symbol is a single character.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftDocument {
    pub alphabet: Vec<String>,
    pub kind: String,
    #[serde(
        default,
        skip_serializing_if = "Vec::is_empty",
        deserialize_with = "deserialize_words"
    )]
    pub forbidden: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub states: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub edges: Vec<[String; 3]>,
}

fn deserialize_words<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<String>>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Word {
        Text(String),
        Symbols(Vec<String>),
    }
    let raw: Vec<Word> = Vec::deserialize(d)?;
    Ok(raw
        .into_iter()
        .map(|w| match w {
            Word::Text(s) => s.chars().map(|c| c.to_string()).collect(),
            Word::Symbols(v) => v,
        })
        .collect())
}

impl ShiftDocument {
    pub fn from_presentation(p: &Presentation) -> Self {
        ShiftDocument {
            alphabet: p.alphabet().names().to_vec(),
            kind: "graph".into(),
            forbidden: Vec::new(),
            states: p.state_names().to_vec(),
            edges: p
                .edges()
                .iter()
                .map(|e| {
                    [
                        p.state_name(e.src).to_string(),
                        p.alphabet().name(e.sym).to_string(),
                        p.state_name(e.dst).to_string(),
                    ]
                })
                .collect(),
        }
    }

    pub fn from_spec(spec: &SftSpec) -> Self {
        ShiftDocument {
            alphabet: spec.alphabet.names().to_vec(),
            kind: "forbidden".into(),
            forbidden: spec
                .forbidden
                .iter()
                .map(|w| {
                    w.iter()
                        .map(|&s| spec.alphabet.name(s).to_string())
                        .collect()
                })
                .collect(),
            states: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn to_presentation(&self) -> Result<Presentation> {
        let alphabet = Alphabet::new(self.alphabet.clone())?;
        match self.kind.as_str() {
            "forbidden" => {
                let words = self
                    .forbidden
                    .iter()
                    .map(|w| w.iter().map(|s| alphabet.id(s)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                from_forbidden(&SftSpec::new(alphabet, words)?)
            }
            "graph" => {
                if self.states.is_empty() {
                    return Err(Error::InvalidDocument(
                        "graph documents need a nonempty \"states\" list".into(),
                    ));
                }
                let states: Vec<&str> = self.states.iter().map(|s| s.as_str()).collect();
                let edges: Vec<(&str, &str, &str)> = self
                    .edges
                    .iter()
                    .map(|[a, b, c]| (a.as_str(), b.as_str(), c.as_str()))
                    .collect();
                Presentation::from_named(
                    alphabet,
                    &states,
                    &edges,
                )
            }
            other => Err(Error::InvalidDocument(format!(
                "unknown shift kind {other:?}, expected \"forbidden\" or \"graph\""
            ))),
        }
    }
}

/// A sliding block code: a domain shift (inline or by file reference), the
/// window, the rule table keyed by comma-joined blocks, and the codomain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDocument {
    pub domain: DomainRef,
    pub memory: usize,
    pub anticipation: usize,
    /// block of domain symbols joined by "," -> codomain symbol
    pub rule: BTreeMap<String, String>,
    #[serde(rename = "codomainAlphabet")]
    pub codomain_alphabet: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DomainRef {
    Path(String),
    Inline(ShiftDocument),
}

impl CodeDocument {
    pub fn from_code(code: &SlidingBlockCode) -> Self {
        let domain = code.domain();
        let rule = code
            .rule_table()
            .iter()
            .map(|(block, &out)| {
                let key = block
                    .iter()
                    .map(|&s| domain.alphabet().name(s))
                    .collect::<Vec<_>>()
                    .join(",");
                (key, code.codomain_alphabet().name(out).to_string())
            })
            .collect();
        CodeDocument {
            domain: DomainRef::Inline(ShiftDocument::from_presentation(domain)),
            memory: code.memory(),
            anticipation: code.anticipation(),
            rule,
            codomain_alphabet: code.codomain_alphabet().names().to_vec(),
        }
    }

    /// Build the code over an already resolved domain presentation.
    pub fn to_code_with_domain(&self, domain: Presentation) -> Result<SlidingBlockCode> {
        let codomain = Alphabet::new(self.codomain_alphabet.clone())?;
        let mut rule = BTreeMap::new();
        for (key, out) in &self.rule {
            let block = key
                .split(',')
                .map(|s| domain.alphabet().id(s))
                .collect::<Result<Vec<_>>>()?;
            rule.insert(block, codomain.id(out)?);
        }
        SlidingBlockCode::new(domain, self.memory, self.anticipation, codomain, rule)
    }

    /// Build the code, resolving a file reference through `load`.
    pub fn to_code(
        &self,
        load: impl FnOnce(&str) -> Result<ShiftDocument>,
    ) -> Result<SlidingBlockCode> {
        let domain = match &self.domain {
            DomainRef::Inline(doc) => doc.to_presentation()?,
            DomainRef::Path(path) => load(path)?.to_presentation()?,
        };
        self.to_code_with_domain(domain)
    }
}

/// Canonical serialization used for digests and byte-reproducible reports.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("document serialization cannot fail")
}

/// FNV-1a digest of the canonical serialization, as fixed-width hex.
pub fn digest<T: Serialize>(value: &T) -> String {
    let bytes = canonical_json(value);
    let mut h: u64 = 0xcbf29ce484222325;
    for b in bytes.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}
