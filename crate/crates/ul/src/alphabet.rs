//! Alphabets, letters and finite words.
//!
//! Words use 1-based positions throughout the crate; position 0 and
//! position `len + 1` are reserved for the virtual end-markers of the
//! extended view used by the automata ([`crate::po2dfa`]).

use std::fmt;

use thiserror::Error;

/// A single letter. Printable ASCII excluding `( ) < >`, whitespace and `;`,
/// so that letters are always valid s-expression atoms and never collide
/// with the end-marker symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(char);

impl Letter {
    pub fn new(c: char) -> Result<Letter, AlphabetError> {
        if ('!'..='~').contains(&c) && !"()<>;".contains(c) {
            Ok(Letter(c))
        } else {
            Err(AlphabetError::BadLetter(c))
        }
    }

    pub fn ch(self) -> char {
        self.0
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlphabetError {
    #[error("letter {0:?} is not a printable ASCII character outside \"()<>;\" and whitespace")]
    BadLetter(char),
    #[error("alphabet must be non-empty")]
    Empty,
    #[error("duplicate letter {0} in alphabet")]
    Duplicate(Letter),
    #[error("letter {letter:?} at position {position} is not in the alphabet")]
    LetterNotInAlphabet { letter: char, position: usize },
}

/// An ordered, duplicate-free set of letters. Iteration order is the
/// declaration order, which keeps every printed artifact deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    letters: Vec<Letter>,
}

impl Alphabet {
    pub fn new(letters: Vec<Letter>) -> Result<Alphabet, AlphabetError> {
        if letters.is_empty() {
            return Err(AlphabetError::Empty);
        }
        for (i, l) in letters.iter().enumerate() {
            if letters[..i].contains(l) {
                return Err(AlphabetError::Duplicate(*l));
            }
        }
        Ok(Alphabet { letters })
    }

    /// Convenience constructor from a string of letters, e.g. `"abcd"`.
    pub fn from_chars(s: &str) -> Result<Alphabet, AlphabetError> {
        Alphabet::new(s.chars().map(Letter::new).collect::<Result<_, _>>()?)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn contains(&self, l: Letter) -> bool {
        self.letters.contains(&l)
    }

    pub fn iter(&self) -> impl Iterator<Item = Letter> + '_ {
        self.letters.iter().copied()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn first(&self) -> Letter {
        self.letters[0]
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(alphabet")?;
        for l in &self.letters {
            write!(f, " {l}")?;
        }
        write!(f, ")")
    }
}

/// A finite word over some alphabet. Positions are 1-based: `at(1)` is the
/// first letter and `at(len())` the last.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Word {
        Word { letters }
    }

    pub fn empty() -> Word {
        Word { letters: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Letter at 1-based position `pos`; `None` outside `1..=len`.
    pub fn at(&self, pos: usize) -> Option<Letter> {
        if pos == 0 {
            None
        } else {
            self.letters.get(pos - 1).copied()
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// 1-based position range `1..=len`.
    pub fn positions(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.len()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            // Words print as bare tokens; the empty word needs a spelling.
            return write!(f, "\"\"");
        }
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Parses a word token letter by letter, rejecting anything outside the
/// alphabet. The empty token (or `""`) denotes the empty word.
pub fn parse_word(token: &str, alphabet: &Alphabet) -> Result<Word, AlphabetError> {
    if token.is_empty() || token == "\"\"" {
        return Ok(Word::empty());
    }
    let mut letters = Vec::with_capacity(token.len());
    for (i, c) in token.chars().enumerate() {
        let l = Letter::new(c).map_err(|_| AlphabetError::LetterNotInAlphabet {
            letter: c,
            position: i + 1,
        })?;
        if !alphabet.contains(l) {
            return Err(AlphabetError::LetterNotInAlphabet {
                letter: c,
                position: i + 1,
            });
        }
        letters.push(l);
    }
    Ok(Word::new(letters))
}

/// All words of length `0..=max_len` in length-then-lexicographic order,
/// where lexicographic order follows the alphabet's declaration order.
pub fn enumerate_words<'a>(
    alphabet: &'a Alphabet,
    max_len: usize,
) -> impl Iterator<Item = Word> + 'a {
    WordEnumerator {
        alphabet,
        max_len,
        // Digits of the next word, as indices into the alphabet.
        digits: Vec::new(),
        done: false,
    }
}

/// Total number of words of length `0..=max_len`, saturating at `u64::MAX`.
pub fn word_count(alphabet_size: usize, max_len: usize) -> u64 {
    let k = alphabet_size as u64;
    let mut total: u64 = 0;
    let mut pow: u64 = 1;
    for _ in 0..=max_len {
        total = total.saturating_add(pow);
        pow = pow.saturating_mul(k);
    }
    total
}

struct WordEnumerator<'a> {
    alphabet: &'a Alphabet,
    max_len: usize,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for WordEnumerator<'_> {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.done {
            return None;
        }
        let word = Word::new(
            self.digits
                .iter()
                .map(|&d| self.alphabet.letters()[d])
                .collect(),
        );
        // Advance: increment as a base-k number, carrying into longer words.
        let k = self.alphabet.len();
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                if self.digits.len() == self.max_len {
                    self.done = true;
                } else {
                    self.digits = vec![0; self.digits.len() + 1];
                }
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < k {
                break;
            }
            self.digits[i] = 0;
            if i == 0 {
                if self.digits.len() == self.max_len {
                    self.done = true;
                } else {
                    self.digits = vec![0; self.digits.len() + 1];
                }
                break;
            }
        }
        Some(word)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::from_chars("ab").unwrap()
    }

    #[test]
    fn parse_word_roundtrip() {
        let sigma = Alphabet::from_chars("abcd").unwrap();
        let w = parse_word("acdb", &sigma).unwrap();
        assert_eq!(w.len(), 4);
        assert_eq!(w.to_string(), "acdb");
        assert_eq!(parse_word("", &sigma).unwrap(), Word::empty());
        assert_eq!(
            parse_word("axe", &ab()),
            Err(AlphabetError::LetterNotInAlphabet {
                letter: 'x',
                position: 2
            })
        );
    }

    #[test]
    fn enumeration_order_and_counts() {
        let words: Vec<String> = enumerate_words(&ab(), 1).map(|w| w.to_string()).collect();
        assert_eq!(words, vec!["\"\"", "a", "b"]);

        let a = Alphabet::from_chars("a").unwrap();
        let words: Vec<String> = enumerate_words(&a, 3).map(|w| w.to_string()).collect();
        assert_eq!(words, vec!["\"\"", "a", "aa", "aaa"]);

        let abc = Alphabet::from_chars("abc").unwrap();
        assert_eq!(enumerate_words(&abc, 6).count(), 1093);
        assert_eq!(word_count(3, 6), 1093);
        // Exactly |Sigma|^k words of each length k.
        for k in 0..=4 {
            assert_eq!(
                enumerate_words(&abc, 4).filter(|w| w.len() == k).count(),
                3usize.pow(k as u32)
            );
        }
    }

    #[test]
    fn end_markers_are_not_letters() {
        assert!(Letter::new('<').is_err());
        assert!(Letter::new('>').is_err());
        assert!(Letter::new('(').is_err());
        assert!(Letter::new(' ').is_err());
    }
}
