//! Finite-depth boundary machinery: certified lex-least geodesics, windowed
//! tail equivalence, basepoint shifting and the tail-class census.

use std::cmp::Ordering;

use crate::ball::{CayleyBall, Norm};
use crate::error::{Error, Result};
use crate::word::{Letter, Word};

/// A lex-least geodesic from 1 with, at each position, the smaller letters
/// that admit no geodesic completion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexLeastGeodesic {
    pub target: Word,
    pub word: Word,
    pub rejected: Vec<Vec<Letter>>,
}

/// The lex-least geodesic to `target` with its per-position certificate.
pub fn lex_least_geodesic(ball: &CayleyBall, target: &Word) -> Result<LexLeastGeodesic> {
    let word = ball.lex_least_geodesic(target)?;
    let n = word.len();
    let al = ball.alphabet();
    let mut rejected = Vec::with_capacity(n);
    for i in 0..n {
        let chosen = word.letters()[i];
        let prefix = word.subword(0, i);
        let mut smaller = Vec::new();
        for &s in al.letters().iter().take_while(|&&s| al.cmp_letters(s, chosen) == Ordering::Less) {
            let mut step = prefix.clone();
            step.push(s);
            // s extends geodesically iff |prefix·s| = i + 1 and d(prefix·s, target) = n − i − 1
            let on_geodesic = ball.norm(&step)?.value(ball) == i + 1
                && ball.distance(&step, target)? == n - i - 1;
            if on_geodesic {
                return Err(Error::InvariantViolation(format!(
                    "letter {} at position {i} extends to a geodesic yet {} was chosen",
                    al.letter_name(s),
                    al.letter_name(chosen)
                )));
            }
            smaller.push(s);
        }
        rejected.push(smaller);
    }
    Ok(LexLeastGeodesic { target: target.clone(), word, rejected })
}

/// Bounded prefix cuts and a minimum overlap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TailWindow {
    pub cut: usize,
    pub overlap: usize,
}

impl TailWindow {
    pub fn new(cut: usize, overlap: usize) -> Result<Self> {
        if overlap == 0 {
            return Err(Error::Usage("tail window overlap must be at least 1".into()));
        }
        Ok(TailWindow { cut, overlap })
    }
}

/// Whether `u[n..]` and `v[k..]` agree on their common length, for some cuts
/// `n, k ≤ c` leaving at least `m` letters in each.
pub fn tail_equivalent(u: &Word, v: &Word, window: TailWindow) -> Result<bool> {
    let m = window.overlap;
    let shorter = u.len().min(v.len());
    if shorter < m {
        return Err(Error::WindowTooLarge { shorter, overlap: m });
    }
    let (a, b) = (u.letters(), v.letters());
    for n in 0..=window.cut.min(a.len() - m) {
        for k in 0..=window.cut.min(b.len() - m) {
            let len = (a.len() - n).min(b.len() - k);
            if a[n..n + len] == b[k..k + len] {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// A geodesic from `y` to the endpoint of `x·word` sharing the longest
/// terminal segment with `word`; ties go to the lex-least.
pub fn shift_basepoint(ball: &CayleyBall, x: &Word, word: &Word, y: &Word, cap: usize) -> Result<Word> {
    let n = ball.norm(word)?.value(ball);
    if n != word.len() {
        return Err(Error::Precondition(format!("word of length {} is not geodesic (norm {n})", word.len())));
    }
    let end = x.concat(word);
    let candidates = ball.all_geodesics(y, &end, cap)?;
    let shared = |w: &Word| w.letters().iter().rev().zip(word.letters().iter().rev()).take_while(|(a, b)| a == b).count();
    // all_geodesics is lex-ordered, so the first maximum is the lex-least one
    let mut best: Option<(usize, &Word)> = None;
    for w in &candidates {
        let s = shared(w);
        if best.is_none_or(|(b, _)| s > b) {
            best = Some((s, w));
        }
    }
    best.map(|(_, w)| w.clone()).ok_or(Error::InvariantViolation("no geodesic between ball elements".into()))
}

/// One translate in a census.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusMember {
    pub translate: Word,
    pub target: Word,
    pub word: Word,
    pub class: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailCensus {
    pub base: Word,
    pub window: TailWindow,
    pub members: Vec<CensusMember>,
    /// Translates whose target lies beyond the certified range.
    pub skipped: Vec<Word>,
    /// Classes of greedy leader clustering under the raw window relation.
    pub classes_raw: usize,
    /// Classes of the transitive closure of the window relation.
    pub classes_closure: usize,
    pub k0: u64,
    pub bound: u64,
    /// Pairs of lex-least words through a common element at the same
    /// position whose segments between two such positions differ.
    pub segment_violations: Vec<(usize, usize)>,
}

impl TailCensus {
    pub fn passes(&self) -> bool {
        self.classes_closure as u64 <= self.bound
    }
}

/// Lex-least geodesic word of length `depth` from 1, found by depth-first search.
pub fn base_ray(ball: &CayleyBall, depth: usize) -> Result<Word> {
    fn extend(ball: &CayleyBall, prefix: &mut Word, depth: usize) -> Result<bool> {
        if prefix.len() == depth {
            return Ok(true);
        }
        for &s in ball.alphabet().letters() {
            prefix.push(s);
            if ball.norm(prefix)?.value(ball) == prefix.len() && extend(ball, prefix, depth)? {
                return Ok(true);
            }
            prefix.0.pop();
        }
        Ok(false)
    }
    if depth > 2 * ball.radius() {
        return Err(Error::InsufficientRadius { needed: depth.div_ceil(2), radius: ball.radius() });
    }
    let mut prefix = Word::empty();
    if extend(ball, &mut prefix, depth)? {
        Ok(prefix)
    } else {
        Err(Error::CensusInfeasible(format!("no geodesic of length {depth}")))
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Class labels of the transitive closure (numbered by first member) and
/// the number of greedy leader clusters.
pub fn partition(words: &[Word], window: TailWindow) -> Result<(Vec<usize>, usize)> {
    let n = words.len();
    let mut related = vec![vec![false; n]; n];
    let mut uf = UnionFind((0..n).collect());
    for i in 0..n {
        related[i][i] = true;
        for j in i + 1..n {
            if tail_equivalent(&words[i], &words[j], window)? {
                related[i][j] = true;
                related[j][i] = true;
                uf.union(i, j);
            }
        }
    }
    let mut leaders: Vec<usize> = Vec::new();
    for i in 0..n {
        if !leaders.iter().any(|&l| related[l][i]) {
            leaders.push(i);
        }
    }
    let mut label_of_root = std::collections::HashMap::new();
    let labels = (0..n)
        .map(|i| {
            let r = uf.find(i);
            let next = label_of_root.len();
            *label_of_root.entry(r).or_insert(next)
        })
        .collect();
    Ok((labels, leaders.len()))
}

/// Pairs of words from 1 that pass through a common element at positions
/// `i < j` yet differ between them.
pub fn segment_violations(ball: &CayleyBall, words: &[Word]) -> Vec<(usize, usize)> {
    let group = ball.group();
    let mut out = Vec::new();
    for a in 0..words.len() {
        for b in a + 1..words.len() {
            let (u, v) = (&words[a], &words[b]);
            let common: Vec<usize> = (0..=u.len().min(v.len()))
                .filter(|&i| group.equal(&u.subword(0, i), &v.subword(0, i)))
                .collect();
            if let (Some(&lo), Some(&hi)) = (common.first(), common.last()) {
                if u.letters()[lo..hi] != v.letters()[lo..hi] {
                    out.push((a, b));
                }
            }
        }
    }
    out
}

/// Census of lex-least geodesics to the translates `g·t`, `g ∈ B(r)`, of the
/// base target `t` at depth `D`.
pub fn tail_class_census(ball: &CayleyBall, depth: usize, translates: usize, window: TailWindow, k0: u64) -> Result<TailCensus> {
    if translates > ball.radius() {
        return Err(Error::InsufficientRadius { needed: translates, radius: ball.radius() });
    }
    let base = base_ray(ball, depth)?;
    let mut members = Vec::new();
    let mut skipped = Vec::new();
    for g in (0..=translates).flat_map(|k| ball.layer_elements(k)) {
        let target = ball.word(g).concat(&base);
        match ball.norm(&target) {
            Ok(Norm::Inside(_) | Norm::Beyond(_)) => {
                let word = ball.lex_least_geodesic(&target)?;
                members.push(CensusMember { translate: ball.word(g).clone(), target, word, class: 0 });
            }
            Err(Error::InsufficientRadius { .. }) => skipped.push(ball.word(g).clone()),
            Err(e) => return Err(e),
        }
    }
    if members.is_empty() {
        return Err(Error::CensusInfeasible("no translate of the base target is certified".into()));
    }
    let words: Vec<Word> = members.iter().map(|m| m.word.clone()).collect();
    let (labels, classes_raw) = partition(&words, window)?;
    for (m, l) in members.iter_mut().zip(&labels) {
        m.class = *l;
    }
    let classes_closure = labels.iter().max().map_or(0, |m| m + 1);
    Ok(TailCensus {
        base,
        window,
        segment_violations: segment_violations(ball, &words),
        members,
        skipped,
        classes_raw,
        classes_closure,
        k0,
        bound: crate::cancellation::index_bound(k0),
    })
}

/// Closure class counts of a census under alternative windows.
pub fn window_sweep(census: &TailCensus, windows: &[TailWindow]) -> Result<Vec<(TailWindow, usize, usize)>> {
    let words: Vec<Word> = census.members.iter().map(|m| m.word.clone()).collect();
    windows
        .iter()
        .map(|&w| {
            let (labels, raw) = partition(&words, w)?;
            Ok((w, raw, labels.iter().max().map_or(0, |m| m + 1)))
        })
        .collect()
}

/// Default window: cuts up to `2r + D_max`, overlap 4.
pub fn default_window(translates: usize, max_relator_diameter: usize) -> TailWindow {
    TailWindow { cut: 2 * translates + max_relator_diameter, overlap: 4 }
}
