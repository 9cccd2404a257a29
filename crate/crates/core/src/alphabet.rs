//! Alphabets, symbols and finite words.
//!
//! An [`Alphabet`] is an ordered set of distinct named symbols. A [`Symbol`]
//! is an index into its alphabet, and a [`Word`] is a finite sequence of
//! symbols that all belong to one shared alphabet. Words render as the
//! concatenation of their symbol names; when any name in the alphabet is
//! longer than one character the names are joined with `.` instead, so that
//! the rendering stays unambiguous.

use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

/// A symbol, identified by its position in the owning alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub(crate) u32);

impl Symbol {
    /// Position of this symbol in its alphabet.
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An ordered set of distinct named symbols.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    /// Builds an alphabet from symbol names, kept in the given order.
    ///
    /// Fails on an empty list, an empty name, or duplicate names.
    pub fn new<I, S>(names: I) -> Result<Alphabet>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::InvalidArgument("alphabet must be non-empty".into()));
        }
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::InvalidArgument("symbol name must be non-empty".into()));
            }
            if names[..i].contains(name) {
                return Err(Error::InvalidArgument(format!("duplicate symbol `{name}`")));
            }
        }
        Ok(Alphabet { names })
    }

    /// Convenience constructor for known-good fixed alphabets.
    ///
    /// Panics on the same inputs [`Alphabet::new`] rejects.
    pub fn shared<I, S>(names: I) -> Arc<Alphabet>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Arc::new(Alphabet::new(names).expect("valid alphabet"))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Looks a symbol up by name.
    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        self.names.iter().position(|n| n == name).map(|i| Symbol(i as u32))
    }

    /// Like [`Alphabet::symbol`] but produces an error naming the offender.
    pub fn expect_symbol(&self, name: &str) -> Result<Symbol> {
        self.symbol(name).ok_or_else(|| Error::UnknownSymbol(name.into()))
    }

    /// Name of a symbol of this alphabet.
    pub fn name(&self, sym: Symbol) -> &str {
        &self.names[sym.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// All symbols in stored order.
    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.names.len()).map(|i| Symbol(i as u32))
    }

    pub fn contains(&self, sym: Symbol) -> bool {
        sym.index() < self.names.len()
    }

    /// True when every symbol name is a single character, which allows the
    /// compact undotted rendering of words.
    pub fn single_char_names(&self) -> bool {
        self.names.iter().all(|n| n.chars().count() == 1)
    }
}

pub(crate) fn same_alphabet(a: &Arc<Alphabet>, b: &Arc<Alphabet>, context: &str) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch(context.into()))
    }
}

/// A finite word over a shared alphabet.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    alphabet: Arc<Alphabet>,
    letters: Vec<Symbol>,
}

impl Word {
    /// Builds a word, checking every letter against the alphabet.
    pub fn new(alphabet: Arc<Alphabet>, letters: Vec<Symbol>) -> Result<Word> {
        if let Some(sym) = letters.iter().find(|s| !alphabet.contains(**s)) {
            return Err(Error::UnknownSymbol(format!("#{}", sym.index())));
        }
        Ok(Word { alphabet, letters })
    }

    pub fn empty(alphabet: Arc<Alphabet>) -> Word {
        Word { alphabet, letters: Vec::new() }
    }

    /// Parses a word from symbol names.
    pub fn from_names(alphabet: &Arc<Alphabet>, names: &[&str]) -> Result<Word> {
        let letters = names
            .iter()
            .map(|n| alphabet.expect_symbol(n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Word { alphabet: Arc::clone(alphabet), letters })
    }

    /// Parses the textual rendering of a word: one symbol per character, or
    /// `.`-separated names when the alphabet has multi-character names. The
    /// empty string and `ε` both denote the empty word.
    pub fn parse(alphabet: &Arc<Alphabet>, text: &str) -> Result<Word> {
        if text.is_empty() || text == "ε" {
            return Ok(Word::empty(Arc::clone(alphabet)));
        }
        let letters = if text.contains('.') {
            text.split('.')
                .map(|n| alphabet.expect_symbol(n))
                .collect::<Result<Vec<_>>>()?
        } else if alphabet.single_char_names() {
            text.chars()
                .map(|c| alphabet.expect_symbol(&c.to_string()))
                .collect::<Result<Vec<_>>>()?
        } else {
            // A single undotted token over a multi-character alphabet must be
            // one symbol name.
            vec![alphabet.expect_symbol(text)?]
        };
        Ok(Word { alphabet: Arc::clone(alphabet), letters })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn letters(&self) -> &[Symbol] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Concatenation over the same alphabet.
    pub fn concat(&self, other: &Word) -> Result<Word> {
        same_alphabet(&self.alphabet, &other.alphabet, "word concatenation")?;
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(Word { alphabet: Arc::clone(&self.alphabet), letters })
    }

    /// The word formed by the first `len` letters.
    pub fn take(&self, len: usize) -> Word {
        Word {
            alphabet: Arc::clone(&self.alphabet),
            letters: self.letters[..len.min(self.letters.len())].to_vec(),
        }
    }

    pub(crate) fn from_letters(alphabet: &Arc<Alphabet>, letters: Vec<Symbol>) -> Word {
        debug_assert!(letters.iter().all(|s| alphabet.contains(*s)));
        Word { alphabet: Arc::clone(alphabet), letters }
    }

    /// Names of the letters, for serialization.
    pub fn names(&self) -> Vec<String> {
        self.letters.iter().map(|s| self.alphabet.name(*s).to_string()).collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "ε");
        }
        let dotted = !self.alphabet.single_char_names();
        for (i, sym) in self.letters.iter().enumerate() {
            if dotted && i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{}", self.alphabet.name(*sym))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicate_names() {
        assert!(Alphabet::new(["a", "b", "a"]).is_err());
    }

    #[test]
    fn symbol_lookup_follows_declaration_order() {
        let alpha = Alphabet::shared(["a", "b", "c"]);
        assert_eq!(alpha.symbol("b"), Some(Symbol(1)));
        assert_eq!(alpha.name(Symbol(2)), "c");
        assert!(alpha.symbol("d").is_none());
    }

    #[test]
    fn parse_single_char_words() {
        let alpha = Alphabet::shared(["a", "b"]);
        let w = Word::parse(&alpha, "abba").unwrap();
        assert_eq!(w.to_string(), "abba");
        assert_eq!(w.len(), 4);
    }

    #[test]
    fn parse_dotted_words() {
        let alpha = Alphabet::shared(["d1", "1", "a"]);
        let w = Word::parse(&alpha, "d1.1.a").unwrap();
        assert_eq!(w.names(), vec!["d1", "1", "a"]);
        assert_eq!(w.to_string(), "d1.1.a");
    }

    #[test]
    fn empty_word_renders_as_epsilon() {
        let alpha = Alphabet::shared(["a"]);
        assert_eq!(Word::empty(alpha.clone()).to_string(), "ε");
        assert!(Word::parse(&alpha, "ε").unwrap().is_empty());
    }

    #[test]
    fn concat_requires_same_alphabet() {
        let a = Alphabet::shared(["a"]);
        let b = Alphabet::shared(["b"]);
        let wa = Word::parse(&a, "a").unwrap();
        let wb = Word::parse(&b, "b").unwrap();
        assert!(wa.concat(&wb).is_err());
    }
}
