//! Ultimately periodic words in lasso form.
//!
//! A [`LassoWord`] denotes the infinite word `prefix · cycle · cycle · …`.
//! Construction always normalizes to the canonical representation: the cycle
//! is primitive (not a power of a shorter word) and the prefix is shortest,
//! obtained by rotating the final letter of the cycle out of the prefix while
//! the two agree. Two lasso words denote the same infinite word exactly when
//! their canonical forms are equal, and [`LassoWord::same_word`] additionally
//! decides that by direct letter comparison up to the sound bound
//! `max(|p₁|, |p₂|) + lcm(|c₁|, |c₂|)`.

use std::fmt;
use std::sync::Arc;

use crate::alphabet::{same_alphabet, Alphabet, Symbol, Word};
use crate::{Error, Result};

/// An ultimately periodic word `prefix · cycleᵚ` in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LassoWord {
    prefix: Word,
    cycle: Word,
}

/// Length of the smallest word whose repetition forms `w`.
fn primitive_period(w: &[Symbol]) -> usize {
    // KMP failure function of w; the smallest period is |w| - f[|w|] when it
    // divides |w|, otherwise w is already primitive.
    let n = w.len();
    let mut fail = vec![0usize; n + 1];
    let mut k = 0usize;
    for i in 1..n {
        while k > 0 && w[i] != w[k] {
            k = fail[k];
        }
        if w[i] == w[k] {
            k += 1;
        }
        fail[i + 1] = k;
    }
    let p = n - fail[n];
    if n % p == 0 {
        p
    } else {
        n
    }
}

impl LassoWord {
    /// Builds the canonical lasso denoting `prefix · cycleᵚ`.
    ///
    /// Fails when the cycle is empty or the parts disagree on the alphabet.
    pub fn new(prefix: Word, cycle: Word) -> Result<LassoWord> {
        if cycle.is_empty() {
            return Err(Error::EmptyLoop);
        }
        same_alphabet(prefix.alphabet(), cycle.alphabet(), "lasso prefix and cycle")?;
        let alphabet = Arc::clone(prefix.alphabet());
        let mut prefix: Vec<Symbol> = prefix.letters().to_vec();
        let mut cycle: Vec<Symbol> = cycle.letters().to_vec();

        let period = primitive_period(&cycle);
        cycle.truncate(period);

        // u·(v·a)ᵚ = u'·(a·v)ᵚ whenever u = u'·a, so rotate the shared final
        // letter out of the prefix until none remains.
        while let Some(&last) = prefix.last() {
            if last != *cycle.last().expect("non-empty cycle") {
                break;
            }
            prefix.pop();
            let rot = cycle.pop().expect("non-empty cycle");
            cycle.insert(0, rot);
        }

        Ok(LassoWord {
            prefix: Word::from_letters(&alphabet, prefix),
            cycle: Word::from_letters(&alphabet, cycle),
        })
    }

    /// The periodic word `cycleᵚ`.
    pub fn periodic(cycle: Word) -> Result<LassoWord> {
        let prefix = Word::empty(Arc::clone(cycle.alphabet()));
        LassoWord::new(prefix, cycle)
    }

    /// Parses `prefix(cycle)` in the textual lasso grammar, for example
    /// `ab(ba)`, `(a)` or `ε(ab)`; multi-character symbol names are
    /// `.`-separated as in [`Word::parse`].
    pub fn parse(alphabet: &Arc<Alphabet>, text: &str) -> Result<LassoWord> {
        let open = text
            .find('(')
            .ok_or_else(|| Error::Parse(format!("`{text}`: expected `prefix(cycle)`")))?;
        if !text.ends_with(')') {
            return Err(Error::Parse(format!("`{text}`: expected closing `)`")));
        }
        let prefix_text = text[..open].trim_end_matches('.');
        let cycle_text = &text[open + 1..text.len() - 1];
        let prefix = Word::parse(alphabet, prefix_text)?;
        let cycle = Word::parse(alphabet, cycle_text)?;
        LassoWord::new(prefix, cycle)
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        self.prefix.alphabet()
    }

    pub fn prefix(&self) -> &Word {
        &self.prefix
    }

    pub fn cycle(&self) -> &Word {
        &self.cycle
    }

    /// Letter at position `i` (0-based) of the denoted infinite word.
    pub fn letter_at(&self, i: usize) -> Symbol {
        if i < self.prefix.len() {
            self.prefix.letters()[i]
        } else {
            self.cycle.letters()[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// The first `len` letters of the denoted infinite word.
    pub fn prefix_word(&self, len: usize) -> Word {
        let letters = (0..len).map(|i| self.letter_at(i)).collect();
        Word::from_letters(self.prefix.alphabet(), letters)
    }

    /// Position of the first letter where the two denoted words differ, or
    /// `None` when they are equal. Comparing letters up to
    /// `max(|p₁|, |p₂|) + lcm(|c₁|, |c₂|)` is sound for ultimately periodic
    /// words. Fails on an alphabet mismatch.
    pub fn first_difference(&self, other: &LassoWord) -> Result<Option<usize>> {
        same_alphabet(self.alphabet(), other.alphabet(), "lasso comparison")?;
        let bound = self.prefix.len().max(other.prefix.len())
            + lcm(self.cycle.len(), other.cycle.len());
        Ok((0..bound).find(|&i| self.letter_at(i) != other.letter_at(i)))
    }

    /// Decides whether two lassos denote the same infinite word.
    pub fn same_word(&self, other: &LassoWord) -> Result<bool> {
        Ok(self.first_difference(other)?.is_none())
    }

    /// Total representation size `|prefix| + |cycle|`.
    pub fn size(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl fmt::Display for LassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.prefix.is_empty() {
            write!(f, "({})", self.cycle)
        } else {
            write!(f, "{}({})", self.prefix, self.cycle)
        }
    }
}
