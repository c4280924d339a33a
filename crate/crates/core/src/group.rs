//! The group G(Γ): relators read along simple closed paths and Dehn reduction.

use std::cmp::Ordering;

use crate::cancellation::{CancellationReport, Lambda};
use crate::error::{Error, Result};
use crate::graph::LabeledGraph;
use crate::word::{Alphabet, Letter, Word};

/// A cyclic relator word in canonical form, with the component it was read in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relator {
    pub word: Word,
    pub component: usize,
}

impl Relator {
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }
}

/// Lexicographically least rotation of the lesser of `w` and its inverse.
pub fn canonical_cyclic(alphabet: &Alphabet, w: &Word) -> Word {
    let inv = w.inverse();
    let mut best: Option<Word> = None;
    for base in [w, &inv] {
        for k in 0..base.len().max(1) {
            let r = base.rotate(k);
            if best.as_ref().is_none_or(|b| alphabet.cmp_lex(&r, b) == Ordering::Less) {
                best = Some(r);
            }
        }
    }
    best.unwrap_or_default()
}

/// One relator per simple closed path class, deduplicated by canonical word.
pub fn relators(graph: &LabeledGraph, cycle_cap: usize) -> Result<Vec<Relator>> {
    let al = graph.alphabet();
    let mut out: Vec<Relator> = Vec::new();
    for c in 0..graph.components().len() {
        let cycles = graph.simple_closed_paths(c, graph.component(c).count, cycle_cap)?;
        let mut words: Vec<Word> = cycles
            .iter()
            .map(|cy| canonical_cyclic(al, &graph.read_label(&cy.path).expect("cycle paths are valid")))
            .collect();
        words.sort_by(|a, b| al.cmp_shortlex(a, b));
        words.dedup();
        for word in words {
            if !out.iter().any(|r| r.word == word) {
                out.push(Relator { word, component: c });
            }
        }
    }
    Ok(out)
}

const NO_CHILD: u32 = u32::MAX;

/// Trie over all cyclic conjugates of the relators and their inverses.
///
/// A node at depth `d` reached by a prefix `u` of a conjugate `u·v` of length
/// `n` with `2d > n` records the replacement `v⁻¹`.
#[derive(Debug, Clone)]
struct DehnTrie {
    letters: usize,
    children: Vec<u32>,
    replacement: Vec<Option<Word>>,
}

impl DehnTrie {
    fn new(alphabet: &Alphabet, relators: &[Relator]) -> Self {
        let letters = alphabet.letter_count();
        let mut conjugates: Vec<Word> = Vec::new();
        for r in relators {
            for base in [r.word.clone(), r.word.inverse()] {
                for k in 0..base.len() {
                    conjugates.push(base.rotate(k));
                }
            }
        }
        conjugates.sort_by(|a, b| alphabet.cmp_shortlex(a, b));
        conjugates.dedup();
        let mut trie = DehnTrie { letters, children: vec![NO_CHILD; letters], replacement: vec![None] };
        for c in &conjugates {
            let n = c.len();
            let mut node = 0usize;
            for (i, &l) in c.letters().iter().enumerate() {
                let slot = node * letters + l.index();
                if trie.children[slot] == NO_CHILD {
                    trie.children[slot] = trie.replacement.len() as u32;
                    trie.replacement.push(None);
                    trie.children.extend(std::iter::repeat(NO_CHILD).take(letters));
                }
                node = trie.children[slot] as usize;
                let depth = i + 1;
                if 2 * depth > n && trie.replacement[node].is_none() {
                    trie.replacement[node] = Some(c.subword(depth, n).inverse());
                }
            }
        }
        trie
    }

    /// Whether some subword of length `t` is a subword of a cyclic relator word.
    fn has_relator_subword(&self, word: &[Letter], t: usize) -> bool {
        (0..word.len().saturating_sub(t.saturating_sub(1))).any(|start| {
            let mut node = 0usize;
            for &l in &word[start..start + t] {
                let next = self.children[node * self.letters + l.index()];
                if next == NO_CHILD {
                    return false;
                }
                node = next as usize;
            }
            true
        })
    }

    /// Longest replaceable match starting at `start`: (length, replacement).
    fn longest_match(&self, word: &[Letter], start: usize) -> Option<(usize, &Word)> {
        let mut node = 0usize;
        let mut best = None;
        for (i, &l) in word[start..].iter().enumerate() {
            let next = self.children[node * self.letters + l.index()];
            if next == NO_CHILD {
                break;
            }
            node = next as usize;
            if let Some(rep) = &self.replacement[node] {
                best = Some((i + 1, rep));
            }
        }
        best
    }
}

/// A presentation certified for Dehn's algorithm (graphical C'(λ) with λ ≤ 1/6).
#[derive(Debug, Clone)]
pub struct Group {
    alphabet: Alphabet,
    relators: Vec<Relator>,
    trie: DehnTrie,
    lambda: Lambda,
}

impl Group {
    /// Requires a passing C'(λ) report with λ ≤ 1/6.
    pub fn certified(graph: &LabeledGraph, report: &CancellationReport, relators: Vec<Relator>) -> Result<Self> {
        if !report.passes() {
            return Err(Error::NotCertified(format!("C'({}) does not hold", report.lambda)));
        }
        if report.lambda > Lambda::new(1, 6) {
            return Err(Error::NotCertified(format!(
                "Dehn reduction needs C'(λ) with λ ≤ 1/6, certificate is for λ = {}",
                report.lambda
            )));
        }
        let trie = DehnTrie::new(graph.alphabet(), &relators);
        Ok(Group { alphabet: graph.alphabet().clone(), relators, trie, lambda: report.lambda })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn relators(&self) -> &[Relator] {
        &self.relators
    }

    pub fn lambda(&self) -> Lambda {
        self.lambda
    }

    /// Free reduction plus leftmost-longest replacement of more than half a relator.
    pub fn dehn_reduce(&self, w: &Word) -> Word {
        Word(self.dehn_reduce_letters(w.free_reduce().0))
    }

    /// Dehn's algorithm on an already freely reduced word.
    fn dehn_reduce_letters(&self, mut word: Vec<Letter>) -> Vec<Letter> {
        'outer: loop {
            for i in 0..word.len() {
                if let Some((len, rep)) = self.trie.longest_match(&word, i) {
                    let mut next = Vec::with_capacity(word.len() - len + rep.len());
                    next.extend_from_slice(&word[..i]);
                    next.extend_from_slice(rep.letters());
                    next.extend_from_slice(&word[i + len..]);
                    word = Word(next).free_reduce().0;
                    continue 'outer;
                }
            }
            return word;
        }
    }

    /// A Dehn-reduced word is rigid when none of its subwords of length
    /// `⌊m/4⌋ + 1` (`m` the shortest relator) is read along a relator.
    ///
    /// If two distinct Dehn-reduced words are equal, the free reduction of
    /// `u·v⁻¹` contains more than half of some relator, so one of `u`, `v`
    /// carries more than a quarter of it; hence a rigid word equals no other
    /// rigid word.
    pub fn is_rigid(&self, reduced: &Word) -> bool {
        match self.relators.iter().map(Relator::len).min() {
            None => true,
            Some(m) => !self.trie.has_relator_subword(reduced.letters(), m / 4 + 1),
        }
    }

    pub fn is_trivial(&self, w: &Word) -> bool {
        self.dehn_reduce(w).is_empty()
    }

    pub fn equal(&self, g: &Word, h: &Word) -> bool {
        let mut w: Vec<Letter> = Vec::with_capacity(g.len() + h.len());
        for l in g.letters().iter().copied().chain(h.letters().iter().rev().map(|l| l.inverse())) {
            if w.last() == Some(&l.inverse()) {
                w.pop();
            } else {
                w.push(l);
            }
        }
        self.dehn_reduce_letters(w).is_empty()
    }
}
