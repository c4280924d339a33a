//! Balls in the Cayley graph X = Cay(G, S) with shortlex canonical names.
//!
//! Distances beyond the ball use homogeneity: `d(g, h) = |g⁻¹h|`, and an
//! element `e` with `R < |e| ≤ 2R` splits along any geodesic as `x·y` with
//! `|x| = |e| − R` and `|y| = R`, both of which lie in the ball.

use std::collections::{HashMap, HashSet};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::Group;
use crate::perm::ElementKeyer;
use crate::word::{Alphabet, Letter, Word};

pub type ElementId = usize;

/// Seed and search budget for the element-keying representations.
pub const KEYER_SEED: u64 = 0x6773_635f_6b65_7973;
const KEYER_REPS: usize = 6;
const KEYER_BUDGET: usize = 200_000;

#[derive(Debug, Clone)]
pub struct CayleyBall {
    group: Group,
    keyer: ElementKeyer,
    radius: usize,
    words: Vec<Word>,
    layer: Vec<usize>,
    layer_start: Vec<usize>,
    /// `adj[g][letter.index()]`: the element `g·letter` when it lies in the ball.
    adj: Vec<Vec<Option<ElementId>>>,
    buckets: HashMap<Vec<i64>, Vec<ElementId>>,
    /// The same buckets restricted to elements whose names are not rigid.
    flexible_buckets: HashMap<Vec<i64>, Vec<ElementId>>,
    by_word: HashMap<Word, ElementId>,
    same_layer_edges: usize,
}

/// Where a word's element sits relative to the ball.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    Inside(ElementId),
    /// `R < |e| ≤ 2R`, with the exact norm.
    Beyond(usize),
}

impl Norm {
    pub fn value(self, ball: &CayleyBall) -> usize {
        match self {
            Norm::Inside(id) => ball.layer(id),
            Norm::Beyond(n) => n,
        }
    }
}

impl CayleyBall {
    /// Breadth-first construction in shortlex order; the first word reaching an
    /// element is its shortlex-least geodesic and becomes its canonical name.
    pub fn build(group: &Group, radius: usize, size_cap: usize) -> Result<Self> {
        let keyer = ElementKeyer::new(
            group.alphabet().generator_count(),
            group.relators(),
            KEYER_SEED,
            KEYER_REPS,
            KEYER_BUDGET,
        );
        let letters = group.alphabet().letter_count();
        let mut ball = CayleyBall {
            group: group.clone(),
            keyer,
            radius,
            words: Vec::new(),
            layer: Vec::new(),
            layer_start: vec![0],
            adj: Vec::new(),
            buckets: HashMap::new(),
            flexible_buckets: HashMap::new(),
            by_word: HashMap::new(),
            same_layer_edges: 0,
        };
        ball.insert(Word::empty(), 0);
        ball.layer_start.push(1);
        let order: Vec<Letter> = group.alphabet().letters().to_vec();
        for k in 0..radius {
            let (lo, hi) = (ball.layer_start[k], ball.layer_start[k + 1]);
            for g in lo..hi {
                for &s in &order {
                    if ball.adj[g][s.index()].is_some() {
                        continue;
                    }
                    let candidate = ball.words[g].concat(&Word(vec![s]));
                    let h = match ball.locate(&candidate) {
                        Some(h) => h,
                        None => {
                            if ball.words.len() >= size_cap {
                                return Err(Error::BallTooLarge { layer_sizes: ball.layer_sizes_partial() });
                            }
                            ball.insert(candidate, k + 1)
                        }
                    };
                    ball.link(g, s, h);
                }
            }
            ball.layer_start.push(ball.words.len());
        }
        // close the outer layer: edges among layer-R elements and back to layer R-1 are known
        // from the expansion above except those between two layer-R elements
        let (lo, hi) = (ball.layer_start[radius], ball.layer_start[radius + 1]);
        for g in lo..hi {
            for &s in &order {
                if ball.adj[g][s.index()].is_none() {
                    let candidate = ball.words[g].concat(&Word(vec![s]));
                    if let Some(h) = ball.locate(&candidate) {
                        ball.link(g, s, h);
                    }
                }
            }
        }
        debug_assert!(ball.adj.iter().all(|a| a.len() == letters));
        Ok(ball)
    }

    fn insert(&mut self, word: Word, layer: usize) -> ElementId {
        let id = self.words.len();
        let key = self.keyer.key(&word);
        if !self.group.is_rigid(&word) {
            self.flexible_buckets.entry(key.clone()).or_default().push(id);
        }
        self.buckets.entry(key).or_default().push(id);
        self.by_word.insert(word.clone(), id);
        self.words.push(word);
        self.layer.push(layer);
        self.adj.push(vec![None; self.group.alphabet().letter_count()]);
        id
    }

    fn link(&mut self, g: ElementId, s: Letter, h: ElementId) {
        if self.adj[g][s.index()].is_none() && self.layer[g] == self.layer[h] {
            self.same_layer_edges += 1;
        }
        self.adj[g][s.index()] = Some(h);
        self.adj[h][s.inverse().index()] = Some(g);
    }

    fn layer_sizes_partial(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.layer.iter().copied().max().unwrap_or(0) + 1];
        for &l in &self.layer {
            sizes[l] += 1;
        }
        sizes
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.group.alphabet()
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        self.layer_start.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Elements of layer `k` in shortlex order of their names.
    pub fn layer_elements(&self, k: usize) -> std::ops::Range<ElementId> {
        if k > self.radius {
            return 0..0;
        }
        self.layer_start[k]..self.layer_start[k + 1]
    }

    pub fn word(&self, g: ElementId) -> &Word {
        &self.words[g]
    }

    /// `|g| = d_X(1, g)`.
    pub fn layer(&self, g: ElementId) -> usize {
        self.layer[g]
    }

    pub fn neighbor(&self, g: ElementId, s: Letter) -> Option<ElementId> {
        self.adj[g][s.index()]
    }

    /// Number of edges joining two elements of the same layer (odd cycles).
    pub fn same_layer_edges(&self) -> usize {
        self.same_layer_edges
    }

    pub fn keyer(&self) -> &ElementKeyer {
        &self.keyer
    }

    /// The ball element represented by `word`, if any.
    pub fn locate(&self, word: &Word) -> Option<ElementId> {
        let reduced = self.group.dehn_reduce(word);
        if let Some(&id) = self.by_word.get(&reduced) {
            return Some(id);
        }
        // canonical names are geodesic, hence Dehn-reduced
        let buckets = if self.group.is_rigid(&reduced) { &self.flexible_buckets } else { &self.buckets };
        let bucket = buckets.get(&self.keyer.key(&reduced))?;
        bucket
            .iter()
            .copied()
            .find(|&id| self.layer[id] <= reduced.len() && self.group.equal(&reduced, &self.words[id]))
    }

    pub fn parse_element(&self, text: &str) -> Result<ElementId> {
        let w = self.alphabet().parse_word(text)?;
        self.locate(&w).ok_or(Error::InsufficientRadius { needed: self.radius + 1, radius: self.radius })
    }

    /// The norm `|e|` for an element given by a word, exact up to `2R`.
    pub fn norm(&self, word: &Word) -> Result<Norm> {
        if let Some(id) = self.locate(word) {
            return Ok(Norm::Inside(id));
        }
        for l in self.radius + 1..=2 * self.radius {
            if !self.split_points(word, l).is_empty() {
                return Ok(Norm::Beyond(l));
            }
        }
        Err(Error::InsufficientRadius { needed: 2 * self.radius + 1, radius: self.radius })
    }

    /// Elements `x` of layer `l − R` with `x⁻¹e` in layer `R`, paired with `x⁻¹e`.
    fn split_points(&self, word: &Word, l: usize) -> Vec<(ElementId, ElementId)> {
        let r = self.radius;
        self.layer_elements(l - r)
            .filter_map(|x| {
                let rest = self.words[x].inverse().concat(word);
                self.locate(&rest).filter(|&y| self.layer[y] == r).map(|y| (x, y))
            })
            .collect()
    }

    /// `d_X(g, h) = |g⁻¹h|`, exact whenever it is at most `2R`.
    pub fn distance(&self, g: &Word, h: &Word) -> Result<usize> {
        Ok(self.norm(&g.inverse().concat(h))?.value(self))
    }

    pub fn distance_ids(&self, g: ElementId, h: ElementId) -> Result<usize> {
        self.distance(&self.words[g], &self.words[h])
    }

    /// Elements lying on some geodesic from 1 to `e` (inside the ball), i.e. the
    /// backward closure of `e` along layer-decreasing edges.
    fn geodesic_interval(&self, e: ElementId) -> HashSet<ElementId> {
        let mut good = HashSet::from([e]);
        let mut stack = vec![e];
        while let Some(v) = stack.pop() {
            for p in self.adj[v].iter().flatten() {
                if self.layer[*p] + 1 == self.layer[v] && good.insert(*p) {
                    stack.push(*p);
                }
            }
        }
        good
    }

    /// Every geodesic word from 1 to ball element `e`.
    fn geodesic_words_inside(&self, e: ElementId, cap: usize) -> Result<Vec<Word>> {
        let good = self.geodesic_interval(e);
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        self.extend_geodesics(0, e, &good, &mut prefix, &mut out, cap)?;
        Ok(out)
    }

    fn extend_geodesics(
        &self,
        at: ElementId,
        target: ElementId,
        good: &HashSet<ElementId>,
        prefix: &mut Vec<Letter>,
        out: &mut Vec<Word>,
        cap: usize,
    ) -> Result<()> {
        if at == target {
            if out.len() == cap {
                return Err(Error::EnumerationOverflow { partial: cap });
            }
            out.push(Word(prefix.clone()));
            return Ok(());
        }
        for &s in self.alphabet().letters() {
            if let Some(next) = self.adj[at][s.index()] {
                if self.layer[next] == self.layer[at] + 1 && good.contains(&next) {
                    prefix.push(s);
                    self.extend_geodesics(next, target, good, prefix, out, cap)?;
                    prefix.pop();
                }
            }
        }
        Ok(())
    }

    /// All geodesic words from `g` to `h` (those of `g⁻¹h` from 1), in lexicographic order.
    pub fn all_geodesics(&self, g: &Word, h: &Word, cap: usize) -> Result<Vec<Word>> {
        let e = g.inverse().concat(h);
        match self.norm(&e)? {
            Norm::Inside(id) => self.geodesic_words_inside(id, cap),
            Norm::Beyond(l) => {
                let mut out = Vec::new();
                for (x, y) in self.split_points(&e, l) {
                    let heads = self.geodesic_words_inside(x, cap)?;
                    let tails = self.geodesic_words_inside(y, cap)?;
                    for u in &heads {
                        for v in &tails {
                            if out.len() == cap {
                                return Err(Error::EnumerationOverflow { partial: cap });
                            }
                            out.push(u.concat(v));
                        }
                    }
                }
                out.sort_by(|a, b| self.alphabet().cmp_lex(a, b));
                Ok(out)
            }
        }
    }

    /// Greedy least-letter walk from 1 to ball element `e` through its geodesic interval.
    fn lex_least_inside(&self, e: ElementId) -> Word {
        let good = self.geodesic_interval(e);
        let mut at = 0;
        let mut word = Vec::with_capacity(self.layer[e]);
        while at != e {
            let (s, next) = self
                .alphabet()
                .letters()
                .iter()
                .find_map(|&s| {
                    self.adj[at][s.index()]
                        .filter(|&n| self.layer[n] == self.layer[at] + 1 && good.contains(&n))
                        .map(|n| (s, n))
                })
                .expect("every interval element below e has a successor in the interval");
            word.push(s);
            at = next;
        }
        Word(word)
    }

    /// The lexicographically least geodesic word from 1 to the element of `target`.
    ///
    /// For `R < |e| ≤ 2R` the first `|e| − R` letters are the least prefix
    /// reaching a split point, followed by the least geodesic of the remainder.
    pub fn lex_least_geodesic(&self, target: &Word) -> Result<Word> {
        match self.norm(target)? {
            Norm::Inside(id) => Ok(self.lex_least_inside(id)),
            Norm::Beyond(l) => {
                let splits = self.split_points(target, l);
                let mut good = HashSet::new();
                for &(x, _) in &splits {
                    good.extend(self.geodesic_interval(x));
                }
                let ends: HashMap<ElementId, ElementId> = splits.into_iter().collect();
                let mut at = 0;
                let mut word = Vec::new();
                while !ends.contains_key(&at) {
                    let (s, next) = self
                        .alphabet()
                        .letters()
                        .iter()
                        .find_map(|&s| {
                            self.adj[at][s.index()]
                                .filter(|&n| self.layer[n] == self.layer[at] + 1 && good.contains(&n))
                                .map(|n| (s, n))
                        })
                        .expect("split interval is connected to 1");
                    word.push(s);
                    at = next;
                }
                let tail = self.lex_least_inside(ends[&at]);
                Ok(Word(word).concat(&tail))
            }
        }
    }

    /// Stable 64-bit digest of the relator set, for export metadata.
    pub fn presentation_hash(&self) -> String {
        let mut text = self.alphabet().generators().join(",");
        for r in self.group.relators() {
            text.push('|');
            text.push_str(&self.alphabet().format_word(&r.word));
        }
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in text.bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        format!("{h:016x}")
    }

    /// Undirected edges `(g, h, s)` with `h = g·s` and `s` a positive generator.
    pub fn edges(&self) -> Vec<(ElementId, ElementId, Letter)> {
        let mut out = Vec::new();
        for g in 0..self.len() {
            for s in (0..self.alphabet().generator_count()).map(|i| Letter::new(i as u16, false)) {
                if let Some(h) = self.adj[g][s.index()] {
                    out.push((g, h, s));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let al = self.alphabet();
        let vertices: Vec<Value> = (0..self.len())
            .map(|g| json!({ "word": al.format_word(&self.words[g]), "layer": self.layer[g] }))
            .collect();
        let edges: Vec<Value> = self.edges().into_iter().map(|(g, h, s)| json!([g, h, al.letter_name(s)])).collect();
        json!({
            "vertices": vertices,
            "edges": edges,
            "metadata": { "R": self.radius, "presentation_hash": self.presentation_hash() },
        })
    }

    pub fn to_dot(&self) -> String {
        let al = self.alphabet();
        let mut out = String::from("digraph ball {\n  rankdir=TB;\n");
        for k in 0..=self.radius {
            let ids: Vec<String> = self.layer_elements(k).map(|g| format!("n{g}")).collect();
            out.push_str(&format!("  {{ rank=same; {} }}\n", ids.join("; ")));
        }
        for g in 0..self.len() {
            let name = if self.words[g].is_empty() { "1".to_string() } else { al.format_word(&self.words[g]) };
            out.push_str(&format!("  n{g} [label=\"{name}\"];\n"));
        }
        for (g, h, s) in self.edges() {
            out.push_str(&format!("  n{g} -> n{h} [label=\"{}\"];\n", al.letter_name(s)));
        }
        out.push_str("}\n");
        out
    }
}
