//! Alphabets, nonempty words, the cutoff function, and word enumeration.

use crate::{Error, Result};
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

/// Index of a symbol within its alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sym(pub u32);

/// An ordered, duplicate-free, nonempty set of symbol names.
///
/// Symbols are arbitrary UTF-8 strings; their ordering is declaration order,
/// which fixes the lexicographic order used by [`enumerate_words`].
#[derive(Debug, Clone)]
pub struct Alphabet {
    symbols: Arc<Vec<String>>,
    index: Arc<HashMap<String, Sym>>,
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
    }
}
impl Eq for Alphabet {}

impl Alphabet {
    pub fn new<S: Into<String>, I: IntoIterator<Item = S>>(symbols: I) -> Result<Self> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::BadAlphabet("<empty>".into()));
        }
        let mut index = HashMap::new();
        for (i, s) in symbols.iter().enumerate() {
            if index.insert(s.clone(), Sym(i as u32)).is_some() {
                return Err(Error::BadAlphabet(s.clone()));
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
        false // nonempty by construction
    }

    pub fn symbols(&self) -> impl Iterator<Item = Sym> + '_ {
        (0..self.symbols.len() as u32).map(Sym)
    }

    pub fn name(&self, s: Sym) -> &str {
        &self.symbols[s.0 as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.symbols
    }

    pub fn lookup(&self, name: &str) -> Result<Sym> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }
}

/// A nonempty word over an alphabet, identified with the pointed labeled
/// dipath whose nodes carry the word's symbols and whose distinguished node
/// is the last one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    syms: Vec<Sym>,
}

impl Word {
    pub fn new(syms: Vec<Sym>) -> Result<Self> {
        if syms.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(Word { syms })
    }

    /// Parses a word whose symbols are single characters of `alphabet`.
    /// Symbols that are longer than one character cannot be parsed this way.
    pub fn parse(alphabet: &Alphabet, text: &str) -> Result<Self> {
        let syms = text
            .chars()
            .map(|c| alphabet.lookup(&c.to_string()))
            .collect::<Result<Vec<_>>>()?;
        Word::new(syms)
    }

    pub fn len(&self) -> usize {
        self.syms.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn symbols(&self) -> &[Sym] {
        &self.syms
    }

    pub fn display(&self, alphabet: &Alphabet) -> String {
        self.syms.iter().map(|&s| alphabet.name(s)).collect()
    }

    /// Checks that every symbol index is valid for `alphabet`.
    pub fn fits(&self, alphabet: &Alphabet) -> bool {
        self.syms.iter().all(|s| (s.0 as usize) < alphabet.len())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.syms {
            write!(f, "{}", s.0)?;
        }
        Ok(())
    }
}

/// Truncates `i` to the interval `[lo, hi]`.
pub fn cutoff(lo: i64, hi: i64, i: i64) -> Result<i64> {
    if lo > hi {
        return Err(Error::InvalidRange { lo, hi });
    }
    Ok(i.clamp(lo, hi))
}

/// Iterator over all nonempty words of length at most `max_len`, in
/// length-then-lexicographic order with respect to the alphabet's symbol
/// ordering.
pub fn enumerate_words(alphabet: &Alphabet, max_len: usize) -> WordIter {
    assert!(max_len >= 1, "max_len must be positive");
    WordIter {
        base: alphabet.len() as u32,
        max_len,
        current: Vec::new(),
    }
}

pub struct WordIter {
    base: u32,
    max_len: usize,
    current: Vec<u32>,
}

impl Iterator for WordIter {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        // Odometer increment; rolling over every digit extends the length.
        if self.current.is_empty() {
            self.current.push(0);
        } else {
            let mut i = self.current.len();
            loop {
                if i == 0 {
                    for d in self.current.iter_mut() {
                        *d = 0;
                    }
                    self.current.push(0);
                    break;
                }
                i -= 1;
                self.current[i] += 1;
                if self.current[i] < self.base {
                    break;
                }
                self.current[i] = 0;
            }
        }
        if self.current.len() > self.max_len {
            return None;
        }
        Some(Word {
            syms: self.current.iter().map(|&d| Sym(d)).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> Alphabet {
        Alphabet::new(["a", "b", "c"]).unwrap()
    }

    #[test]
    fn cutoff_clamps() {
        assert_eq!(cutoff(-1, 1, 5).unwrap(), 1);
        assert_eq!(cutoff(-1, 1, 0).unwrap(), 0);
        assert_eq!(cutoff(-2, 3, -7).unwrap(), -2);
        assert!(matches!(
            cutoff(2, 1, 0),
            Err(Error::InvalidRange { lo: 2, hi: 1 })
        ));
    }

    #[test]
    fn cutoff_idempotent_and_monotone() {
        for i in -20..20 {
            let once = cutoff(-3, 4, i).unwrap();
            assert_eq!(cutoff(-3, 4, once).unwrap(), once);
            if i < 19 {
                assert!(cutoff(-3, 4, i).unwrap() <= cutoff(-3, 4, i + 1).unwrap());
            }
        }
    }

    #[test]
    fn words_in_length_lex_order() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let words: Vec<String> = enumerate_words(&ab, 2).map(|w| w.display(&ab)).collect();
        assert_eq!(words, ["a", "b", "aa", "ab", "ba", "bb"]);
    }

    #[test]
    fn unary_words() {
        let a = Alphabet::new(["a"]).unwrap();
        let words: Vec<String> = enumerate_words(&a, 3).map(|w| w.display(&a)).collect();
        assert_eq!(words, ["a", "aa", "aaa"]);
    }

    #[test]
    fn word_count_over_three_symbols() {
        assert_eq!(enumerate_words(&abc(), 6).count(), 1092);
        let mut seen = std::collections::HashSet::new();
        for w in enumerate_words(&abc(), 4) {
            assert!(seen.insert(w));
        }
    }

    #[test]
    fn rejects_empty_word_and_duplicate_symbols() {
        assert!(matches!(Word::new(vec![]), Err(Error::EmptyWord)));
        assert!(Alphabet::new(["a", "a"]).is_err());
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
    }
}
