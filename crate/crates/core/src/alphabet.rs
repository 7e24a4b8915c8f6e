use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A finite ordered set of symbol names.
///
/// The declaration order is canonical: deterministic iteration, lexicographic
/// tie-breaking and serialization all follow it. Symbols are arbitrary
/// nonempty strings, so multi-character names like `"1bar"` are fine.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Alphabet {
    symbols: Arc<Vec<String>>,
    index: Arc<BTreeMap<String, u32>>,
}

impl Alphabet {
    pub fn new<S: Into<String>, I: IntoIterator<Item = S>>(symbols: I) -> Result<Self> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        let mut index = BTreeMap::new();
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() || s.contains(',') {
                // commas are reserved for joining block symbols
                return Err(Error::UnknownSymbol(s.clone()));
            }
            if index.insert(s.clone(), i as u32).is_some() {
                return Err(Error::DuplicateSymbol(s.clone()));
            }
        }
        Ok(Alphabet {
            symbols: Arc::new(symbols),
            index: Arc::new(index),
        })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn name(&self, id: u32) -> &str {
        &self.symbols[id as usize]
    }

    pub fn id(&self, name: &str) -> Result<u32> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn ids(&self) -> impl Iterator<Item = u32> {
        0..self.symbols.len() as u32
    }

    pub fn names(&self) -> &[String] {
        &self.symbols
    }

    /// Same symbol set, ignoring order.
    pub fn same_set(&self, other: &Alphabet) -> bool {
        self.index.keys().eq(other.index.keys())
    }

    /// Render a word of symbol ids as a readable string. Single-character
    /// symbols are joined directly, anything else with commas.
    pub fn word_name(&self, word: &[u32]) -> String {
        join_symbols(word.iter().map(|&s| self.name(s)))
    }
}

/// Join symbol names into one block name: plain concatenation when every
/// symbol is one character, dot separated otherwise. Used for the block
/// symbols of higher-block alphabets.
pub fn join_symbols<'a, I: IntoIterator<Item = &'a str> + Clone>(parts: I) -> String {
    let single = parts.clone().into_iter().all(|p| p.chars().count() == 1);
    let sep = if single { "" } else { "." };
    parts.into_iter().collect::<Vec<_>>().join(sep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_empty() {
        assert_eq!(
            Alphabet::new(Vec::<String>::new()).unwrap_err(),
            Error::EmptyAlphabet
        );
        assert!(matches!(
            Alphabet::new(["a", "b", "a"]),
            Err(Error::DuplicateSymbol(_))
        ));
    }

    #[test]
    fn canonical_order_is_declaration_order() {
        let a = Alphabet::new(["1", "1bar", "2", "3"]).unwrap();
        assert_eq!(a.id("1bar").unwrap(), 1);
        assert_eq!(a.name(3), "3");
        assert_eq!(a.word_name(&[1, 2]), "1bar.2");
        let b = Alphabet::new(["0", "1"]).unwrap();
        assert_eq!(b.word_name(&[0, 1, 1]), "011");
    }
}
