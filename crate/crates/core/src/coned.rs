//! Relator copies in a Cayley ball, the coned-off metric d_Y, geodesic
//! decompositions and hyperbolicity diagnostics.
//!
//! Every copy meeting the ball contributes a clique on its in-ball vertices.
//! A distance `d_Y(x, y)` is certified when `|x⁻¹y| ≤ R`: some X-geodesic
//! from `x` to `y` decomposes into `d_Y(x, y)` blocks each inside one relator
//! copy or a single edge, and that geodesic (translated to start at 1) stays
//! in the ball, so the clique BFS inside the ball realizes `d_Y`.

use std::collections::{HashMap, HashSet, VecDeque};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ball::{CayleyBall, ElementId, Norm};
use crate::cancellation::Lambda;
use crate::error::{Error, Result};
use crate::graph::{Automorphisms, LabeledGraph, VertexId};
use crate::word::{Letter, Word};

pub type CopyId = usize;

/// Image of a label-preserving map `Γᵢ → X` restricted to the ball.
#[derive(Debug, Clone)]
pub struct RelatorCopy {
    pub component: usize,
    /// The anchor `(v, g)`: local vertex `v` is sent to ball element `g`.
    pub anchor: (usize, ElementId),
    /// Image of each local vertex, when it lies in the ball.
    pub images: Vec<Option<ElementId>>,
}

impl RelatorCopy {
    pub fn is_complete(&self) -> bool {
        self.images.iter().all(Option::is_some)
    }

    pub fn members(&self) -> impl Iterator<Item = (usize, ElementId)> + '_ {
        self.images.iter().enumerate().filter_map(|(v, g)| g.map(|g| (v, g)))
    }
}

/// Block tag in a geodesic decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockTag {
    Copy(CopyId),
    LoneEdge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeodesicDecomposition {
    pub word: Word,
    /// Positions along the word: `0 = b₀ < b₁ < … < b_k = |word|`.
    pub breakpoints: Vec<usize>,
    pub tags: Vec<BlockTag>,
}

impl GeodesicDecomposition {
    pub fn k(&self) -> usize {
        self.tags.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigonViolation {
    pub target: Word,
    pub p: Word,
    pub q: Word,
    pub copy: CopyId,
    pub shorter_side: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BigonReport {
    /// Pairs of distinct geodesics compared.
    pub pairs: usize,
    /// Pairs whose difference is one simple cycle inside one copy.
    pub single_cycle: usize,
    pub violations: Vec<BigonViolation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaEstimate {
    pub delta: Ratio<i64>,
    pub points: usize,
    pub quadruples: u64,
}

#[derive(Debug, Clone)]
pub struct ConedBall {
    ball: CayleyBall,
    graph: LabeledGraph,
    copies: Vec<RelatorCopy>,
    element_copies: Vec<Vec<(CopyId, usize)>>,
    dy_from_one: Vec<usize>,
    girth: Vec<Option<usize>>,
    max_diameter: usize,
}

impl ConedBall {
    /// Materialize every relator copy meeting the ball and the clique BFS from 1.
    ///
    /// Only components containing a cycle are relators; tree components add nothing.
    pub fn build(ball: CayleyBall, graph: &LabeledGraph, aut: &Automorphisms) -> Result<Self> {
        let girth: Vec<Option<usize>> = (0..graph.components().len()).map(|c| graph.girth(c)).collect();
        let max_diameter = (0..graph.components().len())
            .filter(|&c| girth[c].is_some())
            .map(|c| graph.diameter(c))
            .max()
            .unwrap_or(0);
        let mut copies = Vec::new();
        let mut element_copies = vec![Vec::new(); ball.len()];
        for c in 0..graph.components().len() {
            if girth[c].is_none() {
                continue;
            }
            let comp = graph.component(c).clone();
            let paths = label_paths_from(graph, comp.first);
            let auts = aut.of_component(c);
            let graph_distances: Vec<Vec<Option<usize>>> = comp
                .vertices()
                .map(|x| graph.bfs_distances(x)[comp.vertices()].to_vec())
                .collect();
            let mut covered: HashSet<(usize, ElementId)> = HashSet::new();
            for g in 0..ball.len() {
                for v in 0..comp.count {
                    if covered.contains(&(v, g)) {
                        continue;
                    }
                    // h = f(w0) for the map sending v to g
                    let h = ball.word(g).concat(&paths[v].inverse());
                    // copies embed isometrically, so vertices farther than 2R from v leave the ball
                    let near = &graph_distances[v];
                    let images: Vec<Option<ElementId>> = (0..comp.count)
                        .map(|u| match near[u] {
                            _ if u == v => Some(g),
                            Some(d) if d <= 2 * ball.radius() => ball.locate(&h.concat(&paths[u])),
                            _ => None,
                        })
                        .collect();
                    for (u, img) in images.iter().enumerate() {
                        if let Some(x) = *img {
                            for phi in auts {
                                covered.insert((phi[u] - comp.first, x));
                            }
                        }
                    }
                    let id = copies.len();
                    for (u, img) in images.iter().enumerate() {
                        if let Some(x) = *img {
                            element_copies[x].push((id, u));
                        }
                    }
                    copies.push(RelatorCopy { component: c, anchor: (v, g), images });
                }
            }
        }
        let mut coned = ConedBall {
            ball,
            graph: graph.clone(),
            copies,
            element_copies,
            dy_from_one: Vec::new(),
            girth,
            max_diameter,
        };
        coned.dy_from_one = coned.clique_bfs(0);
        Ok(coned)
    }

    pub fn ball(&self) -> &CayleyBall {
        &self.ball
    }

    pub fn copies(&self) -> &[RelatorCopy] {
        &self.copies
    }

    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    /// Largest diameter of a relator component.
    pub fn max_relator_diameter(&self) -> usize {
        self.max_diameter
    }

    pub fn copy_girth(&self, copy: CopyId) -> usize {
        self.girth[self.copies[copy].component].expect("copies come from cyclic components")
    }

    /// Copies containing ball element `g`, with the local vertex mapped to it.
    pub fn copies_at(&self, g: ElementId) -> &[(CopyId, usize)] {
        &self.element_copies[g]
    }

    /// BFS in the ball augmented by the copy cliques.
    pub fn clique_bfs(&self, source: ElementId) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.ball.len()];
        let mut used_copy = vec![false; self.copies.len()];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            let d = dist[x];
            for &s in self.ball.alphabet().letters() {
                if let Some(y) = self.ball.neighbor(x, s) {
                    if dist[y] == usize::MAX {
                        dist[y] = d + 1;
                        queue.push_back(y);
                    }
                }
            }
            for &(c, _) in &self.element_copies[x] {
                if used_copy[c] {
                    continue;
                }
                used_copy[c] = true;
                for (_, y) in self.copies[c].members() {
                    if dist[y] == usize::MAX {
                        dist[y] = d + 1;
                        queue.push_back(y);
                    }
                }
            }
        }
        dist
    }

    /// `d_Y(1, g)` for a ball element.
    pub fn dy_from_one(&self, g: ElementId) -> usize {
        self.dy_from_one[g]
    }

    /// Certified `d_Y(x, y)`; beyond `|x⁻¹y| ≤ R` only the lower bound
    /// `⌈d_X / D_max⌉` is known.
    pub fn coned_distance(&self, x: &Word, y: &Word) -> Result<usize> {
        let e = x.inverse().concat(y);
        match self.ball.norm(&e) {
            Ok(Norm::Inside(id)) => Ok(self.dy_from_one[id]),
            Ok(Norm::Beyond(n)) => Err(Error::UncertifiedDistance { lower_bound: n.div_ceil(self.max_diameter.max(1)) }),
            Err(Error::InsufficientRadius { .. }) => Err(Error::UncertifiedDistance {
                lower_bound: (2 * self.ball.radius() + 1).div_ceil(self.max_diameter.max(1)),
            }),
            Err(e) => Err(e),
        }
    }

    /// Elements visited by `word` read from 1.
    fn trace(&self, word: &Word) -> Result<Vec<ElementId>> {
        let mut at = 0;
        let mut out = vec![0];
        for &l in word.letters() {
            at = self.ball.neighbor(at, l).ok_or(Error::InsufficientRadius {
                needed: word.len(),
                radius: self.ball.radius(),
            })?;
            out.push(at);
        }
        Ok(out)
    }

    /// Local vertex of `g` in copy `c`, if `g` belongs to it.
    fn local_vertex(&self, c: CopyId, g: ElementId) -> Option<usize> {
        self.element_copies[g].iter().find(|&&(id, _)| id == c).map(|&(_, v)| v)
    }

    /// Whether the path `elements[i..=j]` read by `letters[i..j]` runs along edges of copy `c`.
    fn path_in_copy(&self, c: CopyId, elements: &[ElementId], letters: &[Letter]) -> bool {
        let comp_first = self.graph.component(self.copies[c].component).first;
        let Some(mut v) = self.local_vertex(c, elements[0]) else {
            return false;
        };
        for (k, &l) in letters.iter().enumerate() {
            let Some(d) = self.graph.follow(comp_first + v, l) else {
                return false;
            };
            let next = self.graph.dart(d).target - comp_first;
            if self.copies[c].images[next] != Some(elements[k + 1]) {
                return false;
            }
            v = next;
        }
        true
    }

    /// A copy containing the whole path, preferring the smallest id.
    fn copy_containing(&self, elements: &[ElementId], letters: &[Letter]) -> Option<CopyId> {
        self.element_copies[elements[0]]
            .iter()
            .map(|&(c, _)| c)
            .filter(|&c| self.path_in_copy(c, elements, letters))
            .min()
    }

    /// Minimal split of an X-geodesic from `x` into blocks inside single copies or single edges.
    pub fn decompose(&self, x: &Word, geodesic: &Word) -> Result<GeodesicDecomposition> {
        let n = geodesic.len();
        if n > self.ball.radius() {
            return Err(Error::InsufficientRadius { needed: n, radius: self.ball.radius() });
        }
        let norm = self.ball.norm(geodesic)?.value(&self.ball);
        if norm != n {
            return Err(Error::Precondition(format!("word of length {n} is not geodesic (norm {norm})")));
        }
        // by homogeneity the path from x is the translate of the path from 1
        let elements = self.trace(geodesic)?;
        let letters = geodesic.letters();
        let mut best = vec![usize::MAX; n + 1];
        let mut choice: Vec<(usize, BlockTag)> = vec![(0, BlockTag::LoneEdge); n + 1];
        best[0] = 0;
        for j in 1..=n {
            for i in 0..j {
                if best[i] == usize::MAX || best[i] + 1 >= best[j] {
                    continue;
                }
                let tag = match self.copy_containing(&elements[i..=j], &letters[i..j]) {
                    Some(c) => BlockTag::Copy(c),
                    None if j == i + 1 => BlockTag::LoneEdge,
                    None => continue,
                };
                best[j] = best[i] + 1;
                choice[j] = (i, tag);
            }
        }
        let mut breakpoints = vec![n];
        let mut tags = Vec::new();
        let mut j = n;
        while j > 0 {
            let (i, tag) = choice[j];
            tags.push(tag);
            breakpoints.push(i);
            j = i;
        }
        breakpoints.reverse();
        tags.reverse();
        let dec = GeodesicDecomposition { word: geodesic.clone(), breakpoints, tags };
        let y = x.concat(geodesic);
        let dy = self.coned_distance(x, &y)?;
        if dec.k() != dy {
            return Err(Error::InvariantViolation(format!(
                "decomposition of {} has {} blocks but d_Y = {dy}",
                self.ball.alphabet().format_word(geodesic),
                dec.k()
            )));
        }
        Ok(dec)
    }

    /// Verify a chain of long blocks in distinct consecutive copies realizes `d_Y = k`.
    pub fn check_chain_geodesic(&self, geodesic: &Word, breakpoints: &[usize], lambda: Lambda) -> Result<bool> {
        let n = geodesic.len();
        if breakpoints.first() != Some(&0) || breakpoints.last() != Some(&n) || breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Precondition("breakpoints must increase from 0 to the word length".into()));
        }
        let elements = self.trace(geodesic)?;
        let letters = geodesic.letters();
        let mut prev: Option<CopyId> = None;
        for (b, w) in breakpoints.windows(2).enumerate() {
            let (i, j) = (w[0], w[1]);
            let candidates: Vec<CopyId> = self.element_copies[elements[i]]
                .iter()
                .map(|&(c, _)| c)
                .filter(|&c| self.path_in_copy(c, &elements[i..=j], &letters[i..j]))
                .filter(|&c| Some(c) != prev)
                .collect();
            let Some(&c) = candidates.first() else {
                return Err(Error::Precondition(format!("block {b} lies in no relator copy distinct from its predecessor")));
            };
            let girth = self.copy_girth(c) as i128;
            // |block| ≥ 3λ·girth
            if ((j - i) as i128) * (*lambda.denom() as i128) < 3 * (*lambda.numer() as i128) * girth {
                return Err(Error::Precondition(format!("block {b} has length {} < 3λ·girth = 3·{lambda}·{girth}", j - i)));
            }
            prev = Some(c);
        }
        let k = breakpoints.len() - 1;
        let dy = self.coned_distance(&Word::empty(), geodesic)?;
        Ok(dy == k)
    }

    /// Pairs `(x, y)` of ball elements for which `d_X` or convexity are checked: the core `B(⌊R/2⌋)`.
    pub fn core(&self) -> Vec<ElementId> {
        (0..=self.ball.radius() / 2).flat_map(|k| self.ball.layer_elements(k)).collect()
    }

    /// Pairs of in-ball vertices of copies meeting the core whose X-distance
    /// differs from their distance in the component.
    pub fn isometry_violations(&self) -> Result<Vec<(CopyId, usize, usize)>> {
        let core_radius = self.ball.radius() / 2;
        let mut out = Vec::new();
        for (id, copy) in self.copies.iter().enumerate() {
            if copy.members().all(|(_, g)| self.ball.layer(g) > core_radius) {
                continue;
            }
            let first = self.graph.component(copy.component).first;
            let members: Vec<(usize, ElementId)> = copy.members().collect();
            for (i, &(u, gu)) in members.iter().enumerate() {
                let dg = self.graph.bfs_distances(first + u);
                for &(w, gw) in &members[i + 1..] {
                    if Some(self.ball.distance_ids(gu, gw)?) != dg[first + w] {
                        out.push((id, u, w));
                    }
                }
            }
        }
        Ok(out)
    }

    /// For every geodesic between core elements, copies meeting it in a
    /// non-contiguous set of positions or along non-copy edges.
    pub fn convexity_violations(&self, geodesic_cap: usize) -> Result<Vec<(Word, Word, CopyId)>> {
        let mut out = Vec::new();
        let core = self.core();
        for &x in &core {
            for &y in &core {
                if x == y {
                    continue;
                }
                for p in self.ball.all_geodesics(self.ball.word(x), self.ball.word(y), geodesic_cap)? {
                    // walk the path from x itself: both endpoints lie in the ball core
                    let mut elements = vec![x];
                    for &l in p.letters() {
                        let next = self.ball.neighbor(*elements.last().unwrap(), l).ok_or(Error::InsufficientRadius {
                            needed: self.ball.layer(x) + p.len(),
                            radius: self.ball.radius(),
                        })?;
                        elements.push(next);
                    }
                    let mut positions: HashMap<CopyId, Vec<usize>> = HashMap::new();
                    for (i, &g) in elements.iter().enumerate() {
                        for &(c, _) in &self.element_copies[g] {
                            positions.entry(c).or_default().push(i);
                        }
                    }
                    let mut ids: Vec<_> = positions.into_iter().collect();
                    ids.sort();
                    for (c, pos) in ids {
                        let (lo, hi) = (pos[0], *pos.last().unwrap());
                        let contiguous = hi - lo + 1 == pos.len();
                        if !contiguous || !self.path_in_copy(c, &elements[lo..=hi], &p.letters()[lo..hi]) {
                            out.push((self.ball.word(x).clone(), p.clone(), c));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Decompose every geodesic from 1 to every ball element; returns the
    /// number of geodesics checked and the targets whose block count differs from d_Y.
    pub fn decomposition_check(&self, geodesic_cap: usize) -> Result<(usize, Vec<Word>)> {
        let one = Word::empty();
        let mut checked = 0;
        let mut mismatches = Vec::new();
        for e in 0..self.ball.len() {
            for p in self.ball.all_geodesics(&one, self.ball.word(e), geodesic_cap)? {
                checked += 1;
                match self.decompose(&one, &p) {
                    Ok(_) => {}
                    Err(Error::InvariantViolation(_)) => mismatches.push(p),
                    Err(err) => return Err(err),
                }
            }
        }
        Ok((checked, mismatches))
    }

    /// Exact four-point δ over `points`, using certified d_Y.
    pub fn estimate_delta_on(&self, points: &[ElementId]) -> Result<DeltaEstimate> {
        let n = points.len();
        let mut d = vec![vec![0usize; n]; n];
        for i in 0..n {
            for j in 0..n {
                d[i][j] = self.coned_distance(self.ball.word(points[i]), self.ball.word(points[j]))?;
            }
        }
        let mut worst: i64 = 0;
        let mut count = 0u64;
        for w in 0..n {
            for x in 0..n {
                for y in 0..n {
                    let xy = doubled_gromov(&d, x, y, w);
                    for z in 0..n {
                        count += 1;
                        let defect = xy.min(doubled_gromov(&d, y, z, w)) - doubled_gromov(&d, x, z, w);
                        worst = worst.max(defect);
                    }
                }
            }
        }
        Ok(DeltaEstimate { delta: Ratio::new(worst, 2), points: n, quadruples: count })
    }

    /// Four-point δ: exhaustive over the core, or over `samples` random quadruples.
    pub fn estimate_delta(&self, samples: Option<(u64, u64)>) -> Result<DeltaEstimate> {
        let core = self.core();
        match samples {
            None => self.estimate_delta_on(&core),
            Some((count, seed)) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut worst: i64 = 0;
                for _ in 0..count {
                    let q: Vec<ElementId> = (0..4).map(|_| core[rng.gen_range(0..core.len())]).collect();
                    let est = self.estimate_delta_on(&q)?;
                    worst = worst.max(*(est.delta * 2).numer());
                }
                Ok(DeltaEstimate { delta: Ratio::new(worst, 2), points: core.len(), quadruples: count })
            }
        }
    }

    /// Compare every pair of geodesics from 1 to each ball element.
    pub fn check_bigon_bound(&self, lambda: Lambda, geodesic_cap: usize) -> Result<BigonReport> {
        // ½ − 2λ ≥ 3λ  ⇔  λ ≤ 1/10
        if lambda > Lambda::new(1, 10) {
            return Err(Error::Precondition(format!("bigon bound needs 1/2 - 2λ ≥ 3λ, got λ = {lambda}")));
        }
        let (num, den) = (*lambda.numer() as i128, *lambda.denom() as i128);
        let mut report = BigonReport::default();
        let one = Word::empty();
        for e in 0..self.ball.len() {
            let geos = self.ball.all_geodesics(&one, self.ball.word(e), geodesic_cap)?;
            if geos.len() < 2 {
                continue;
            }
            let traces: Vec<Vec<ElementId>> = geos.iter().map(|w| self.trace(w)).collect::<Result<_>>()?;
            for a in 0..geos.len() {
                for b in a + 1..geos.len() {
                    report.pairs += 1;
                    let (p, q) = (&traces[a], &traces[b]);
                    let len = p.len() - 1;
                    let mut lo = 0;
                    while p[lo + 1] == q[lo + 1] {
                        lo += 1;
                    }
                    let mut hi = len;
                    while p[hi - 1] == q[hi - 1] {
                        hi -= 1;
                    }
                    let inner_p: HashSet<_> = p[lo + 1..hi].iter().collect();
                    if q[lo + 1..hi].iter().any(|g| inner_p.contains(g)) {
                        continue;
                    }
                    let copy = self
                        .copy_containing(&p[lo..=hi], &geos[a].letters()[lo..hi])
                        .filter(|&c| self.path_in_copy(c, &q[lo..=hi], &geos[b].letters()[lo..hi]));
                    let Some(c) = copy else {
                        continue;
                    };
                    report.single_cycle += 1;
                    let side = (hi - lo) as i128;
                    let girth = self.copy_girth(c) as i128;
                    // side > (1/2 − 2λ)·girth  ⇔  2·den·side > (den − 4·num)·girth
                    if 2 * den * side <= (den - 4 * num) * girth {
                        report.violations.push(BigonViolation {
                            target: self.ball.word(e).clone(),
                            p: geos[a].clone(),
                            q: geos[b].clone(),
                            copy: c,
                            shorter_side: hi - lo,
                        });
                    }
                }
            }
        }
        Ok(report)
    }
}

/// `2·(x, y)_z = d(x,z) + d(y,z) − d(x,y)`.
fn doubled_gromov(d: &[Vec<usize>], x: usize, y: usize, z: usize) -> i64 {
    d[x][z] as i64 + d[y][z] as i64 - d[x][y] as i64
}

/// The Gromov product `(x, y)_z` as an exact half-integer.
pub fn gromov_product<F>(mut d: F, x: ElementId, y: ElementId, z: ElementId) -> Result<Ratio<i64>>
where
    F: FnMut(ElementId, ElementId) -> Result<usize>,
{
    let twice = d(x, z)? as i64 + d(y, z)? as i64 - d(x, y)? as i64;
    Ok(Ratio::new(twice, 2))
}

/// Label of a shortest path from `root` to every vertex of its component, by local index.
fn label_paths_from(graph: &LabeledGraph, root: VertexId) -> Vec<Word> {
    let comp = graph.component(graph.component_of(root));
    let mut paths: Vec<Option<Word>> = vec![None; comp.count];
    paths[root - comp.first] = Some(Word::empty());
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        let base = paths[x - comp.first].clone().unwrap();
        for &d in graph.out_darts(x) {
            let dart = graph.dart(d);
            if paths[dart.target - comp.first].is_none() {
                let mut w = base.clone();
                w.push(dart.label);
                paths[dart.target - comp.first] = Some(w);
                queue.push_back(dart.target);
            }
        }
    }
    paths.into_iter().map(|p| p.expect("components are connected")).collect()
}
