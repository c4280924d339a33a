//! Letters, alphabets and words over `S ⊔ S⁻¹`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Suffix marking a formal inverse in every textual format.
pub const INVERSE_SUFFIX: &str = "^-1";

/// A generator or its formal inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: u16,
    pub inverted: bool,
}

impl Letter {
    pub fn new(generator: u16, inverted: bool) -> Self {
        Letter { generator, inverted }
    }

    pub fn inverse(self) -> Self {
        Letter { generator: self.generator, inverted: !self.inverted }
    }

    /// Dense index in `0..2·|S|`, generator-major.
    pub fn index(self) -> usize {
        2 * self.generator as usize + self.inverted as usize
    }

    pub fn from_index(index: usize) -> Self {
        Letter { generator: (index / 2) as u16, inverted: index % 2 == 1 }
    }
}

/// Ordered generating set together with a strict total order on all letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    generators: Vec<String>,
    order: Vec<Letter>,
    rank: Vec<usize>,
}

impl Alphabet {
    /// Default order `a < a⁻¹ < b < b⁻¹ < …` following the generator list.
    pub fn new<S: AsRef<str>>(generators: &[S]) -> Result<Self> {
        let generators: Vec<String> = generators.iter().map(|g| g.as_ref().to_string()).collect();
        for (i, g) in generators.iter().enumerate() {
            if g.is_empty() || g.contains(char::is_whitespace) || g.ends_with(INVERSE_SUFFIX) {
                return Err(Error::Schema(format!("/alphabet/{i}: invalid generator name {g:?}")));
            }
            if generators[..i].contains(g) {
                return Err(Error::Schema(format!("/alphabet/{i}: duplicate generator {g:?}")));
            }
        }
        if generators.len() > u16::MAX as usize {
            return Err(Error::Schema("/alphabet: too many generators".into()));
        }
        let order: Vec<Letter> = (0..2 * generators.len()).map(Letter::from_index).collect();
        let rank = (0..order.len()).collect();
        Ok(Alphabet { generators, order, rank })
    }

    /// Replace the letter order; `names` must list every letter exactly once.
    pub fn with_order<S: AsRef<str>>(mut self, names: &[S]) -> Result<Self> {
        if names.len() != self.letter_count() {
            return Err(Error::Schema(format!(
                "/letter_order: expected {} letters, found {}",
                self.letter_count(),
                names.len()
            )));
        }
        let mut order = Vec::with_capacity(names.len());
        let mut rank = vec![usize::MAX; names.len()];
        for (i, name) in names.iter().enumerate() {
            let letter = self.parse_letter(name.as_ref())?;
            if rank[letter.index()] != usize::MAX {
                return Err(Error::Schema(format!("/letter_order/{i}: repeated letter {:?}", name.as_ref())));
            }
            rank[letter.index()] = i;
            order.push(letter);
        }
        self.order = order;
        self.rank = rank;
        Ok(self)
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn letter_count(&self) -> usize {
        2 * self.generators.len()
    }

    /// Letters from least to greatest.
    pub fn letters(&self) -> &[Letter] {
        &self.order
    }

    pub fn rank(&self, letter: Letter) -> usize {
        self.rank[letter.index()]
    }

    pub fn is_default_order(&self) -> bool {
        self.order.iter().enumerate().all(|(i, l)| l.index() == i)
    }

    pub fn cmp_letters(&self, a: Letter, b: Letter) -> Ordering {
        self.rank(a).cmp(&self.rank(b))
    }

    pub fn parse_letter(&self, text: &str) -> Result<Letter> {
        let (name, inverted) = match text.strip_suffix(INVERSE_SUFFIX) {
            Some(stem) => (stem, true),
            None => (text, false),
        };
        self.generators
            .iter()
            .position(|g| g == name)
            .map(|i| Letter::new(i as u16, inverted))
            .ok_or_else(|| Error::UnknownLetter(text.to_string()))
    }

    pub fn letter_name(&self, letter: Letter) -> String {
        let g = &self.generators[letter.generator as usize];
        if letter.inverted {
            format!("{g}{INVERSE_SUFFIX}")
        } else {
            g.clone()
        }
    }

    /// Whitespace-separated letters; the empty string and `1` denote the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text == "1" {
            return Ok(Word::empty());
        }
        text.split_whitespace().map(|t| self.parse_letter(t)).collect::<Result<Vec<_>>>().map(Word)
    }

    pub fn format_word(&self, word: &Word) -> String {
        word.letters().iter().map(|&l| self.letter_name(l)).collect::<Vec<_>>().join(" ")
    }

    /// Lexicographic comparison under the letter order (a proper prefix is smaller).
    pub fn cmp_lex(&self, u: &Word, v: &Word) -> Ordering {
        for (&a, &b) in u.0.iter().zip(&v.0) {
            match self.cmp_letters(a, b) {
                Ordering::Equal => {}
                other => return other,
            }
        }
        u.len().cmp(&v.len())
    }

    pub fn cmp_shortlex(&self, u: &Word, v: &Word) -> Ordering {
        u.len().cmp(&v.len()).then_with(|| self.cmp_lex(u, v))
    }
}

/// A finite sequence of letters.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        out.extend_from_slice(&other.0);
        Word(out)
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[1] != w[0].inverse())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_freely_reduced()
            && match (self.0.first(), self.0.last()) {
                (Some(&f), Some(&l)) => self.len() == 1 || f != l.inverse(),
                _ => true,
            }
    }

    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Rotation starting at position `k`.
    pub fn rotate(&self, k: usize) -> Word {
        if self.is_empty() {
            return Word::empty();
        }
        let k = k % self.len();
        Word(self.0[k..].iter().chain(&self.0[..k]).copied().collect())
    }

    pub fn subword(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Generator indices only; use `Alphabet::format_word` for names.
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|l| if l.inverted { format!("g{}^-1", l.generator) } else { format!("g{}", l.generator) })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}
