//! Labeled multigraphs: the defining graph of a graphical presentation.
//!
//! Every undirected edge `e` is stored as two darts: `2e` in the declared
//! direction and `2e + 1` its inverse. Components occupy contiguous vertex
//! ranges.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::ops::Range;

use crate::error::{Error, Result};
use crate::word::{Alphabet, Letter, Word};

pub type VertexId = usize;
pub type DartId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dart {
    pub source: VertexId,
    pub target: VertexId,
    pub label: Letter,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub name: String,
    pub first: VertexId,
    pub count: usize,
}

impl Component {
    pub fn vertices(&self) -> Range<VertexId> {
        self.first..self.first + self.count
    }
}

/// Input description of one component: a name, a vertex count and local edges `(u, v, label)`.
#[derive(Debug, Clone)]
pub struct ComponentSpec {
    pub name: String,
    pub vertices: usize,
    pub edges: Vec<(usize, usize, Letter)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    alphabet: Alphabet,
    components: Vec<Component>,
    vertex_component: Vec<usize>,
    darts: Vec<Dart>,
    out: Vec<Vec<DartId>>,
}

/// A path given by its start vertex and dart sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GraphPath {
    pub start: VertexId,
    pub darts: Vec<DartId>,
}

impl GraphPath {
    pub fn empty(start: VertexId) -> Self {
        GraphPath { start, darts: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }
}

/// A simple closed path, stored once per cycle (one basepoint, one orientation).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub component: usize,
    pub path: GraphPath,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_empty(&self) -> bool {
        self.path.is_empty()
    }

    pub fn edges(&self) -> BTreeSet<usize> {
        self.path.darts.iter().map(|d| d / 2).collect()
    }
}

/// Result of folding: the folded graph and where each input vertex went.
#[derive(Debug, Clone)]
pub struct FoldReport {
    pub graph: LabeledGraph,
    pub quotient: Vec<VertexId>,
    pub changed: bool,
}

impl LabeledGraph {
    pub fn new(alphabet: Alphabet, specs: Vec<ComponentSpec>) -> Result<Self> {
        let mut components = Vec::with_capacity(specs.len());
        let mut vertex_component = Vec::new();
        let mut darts = Vec::new();
        for (ci, spec) in specs.into_iter().enumerate() {
            let first = vertex_component.len();
            vertex_component.extend(std::iter::repeat(ci).take(spec.vertices));
            for (ei, &(u, v, label)) in spec.edges.iter().enumerate() {
                if u >= spec.vertices || v >= spec.vertices {
                    return Err(Error::Schema(format!(
                        "/components/{ci}/edges/{ei}: vertex out of range 0..{}",
                        spec.vertices
                    )));
                }
                if label.generator as usize >= alphabet.generator_count() {
                    return Err(Error::UnknownLetter(format!("{label:?}")));
                }
                darts.push(Dart { source: first + u, target: first + v, label });
                darts.push(Dart { source: first + v, target: first + u, label: label.inverse() });
            }
            components.push(Component { name: spec.name, first, count: spec.vertices });
        }
        let mut out = vec![Vec::new(); vertex_component.len()];
        for (d, dart) in darts.iter().enumerate() {
            out[dart.source].push(d);
        }
        let graph = LabeledGraph { alphabet, components, vertex_component, darts, out };
        for (ci, c) in graph.components.iter().enumerate() {
            if c.count == 0 {
                return Err(Error::Schema(format!("/components/{ci}: component has no vertices")));
            }
            let seen = graph.bfs_distances(c.first);
            if c.vertices().any(|v| seen[v].is_none()) {
                return Err(Error::Schema(format!("/components/{ci}: component {:?} is not connected", c.name)));
            }
        }
        Ok(graph)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component(&self, c: usize) -> &Component {
        &self.components[c]
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_component.len()
    }

    pub fn component_of(&self, v: VertexId) -> usize {
        self.vertex_component[v]
    }

    pub fn darts(&self) -> &[Dart] {
        &self.darts
    }

    pub fn dart(&self, d: DartId) -> Dart {
        self.darts[d]
    }

    pub fn edge_count(&self) -> usize {
        self.darts.len() / 2
    }

    pub fn inverse_dart(d: DartId) -> DartId {
        d ^ 1
    }

    pub fn out_darts(&self, v: VertexId) -> &[DartId] {
        &self.out[v]
    }

    /// Darts whose source lies in component `c`.
    pub fn component_darts(&self, c: usize) -> impl Iterator<Item = DartId> + '_ {
        self.components[c].vertices().flat_map(move |v| self.out[v].iter().copied())
    }

    /// The dart leaving `v` with the given label, if any (unique when folded).
    pub fn follow(&self, v: VertexId, label: Letter) -> Option<DartId> {
        self.out[v].iter().copied().find(|&d| self.darts[d].label == label)
    }

    /// Endpoint of the label-driven walk from `v`, if the word can be read.
    pub fn read_from(&self, v: VertexId, word: &Word) -> Option<VertexId> {
        word.letters().iter().try_fold(v, |x, &l| self.follow(x, l).map(|d| self.darts[d].target))
    }

    /// Two distinct darts with the same source and label, if the graph is not folded.
    pub fn fold_conflict(&self) -> Option<(DartId, DartId)> {
        for v in 0..self.vertex_count() {
            let mut seen: HashMap<Letter, DartId> = HashMap::new();
            for &d in &self.out[v] {
                if let Some(&prev) = seen.get(&self.darts[d].label) {
                    return Some((prev, d));
                }
                seen.insert(self.darts[d].label, d);
            }
        }
        None
    }

    pub fn is_folded(&self) -> bool {
        self.fold_conflict().is_none()
    }

    /// Identify same-source same-label darts until none remain.
    pub fn fold(&self) -> FoldReport {
        let n = self.vertex_count();
        let mut uf = UnionFind::new(n);
        let mut changed = false;
        let mut edges: BTreeSet<(usize, usize, Letter)>;
        loop {
            edges = (0..self.edge_count())
                .map(|e| {
                    let d = self.darts[2 * e];
                    normalize_edge(uf.find(d.source), uf.find(d.target), d.label)
                })
                .collect();
            let mut targets: HashMap<(usize, Letter), usize> = HashMap::new();
            let mut merged = false;
            for &(u, v, l) in &edges {
                for (s, t, lab) in [(u, v, l), (v, u, l.inverse())] {
                    match targets.get(&(s, lab)) {
                        Some(&t0) if uf.find(t0) != uf.find(t) => {
                            uf.union(t0, t);
                            merged = true;
                        }
                        Some(_) => {}
                        None => {
                            targets.insert((s, lab), t);
                        }
                    }
                }
            }
            if !merged {
                break;
            }
            changed = true;
        }
        changed |= edges.len() != self.edge_count();
        // Keep surviving edges in input order and orientation so folding a folded graph is the identity.
        let mut kept: Vec<(usize, usize, Letter)> = Vec::with_capacity(edges.len());
        let mut seen = BTreeSet::new();
        for e in 0..self.edge_count() {
            let d = self.darts[2 * e];
            let (u, v) = (uf.find(d.source), uf.find(d.target));
            if seen.insert(normalize_edge(u, v, d.label)) {
                kept.push((u, v, d.label));
            }
        }

        // Renumber representatives component by component, in order of first occurrence.
        let mut new_id: HashMap<usize, usize> = HashMap::new();
        let mut quotient = vec![0; n];
        let mut specs = Vec::with_capacity(self.components.len());
        let mut next = 0;
        for c in &self.components {
            let first = next;
            for v in c.vertices() {
                let r = uf.find(v);
                let id = *new_id.entry(r).or_insert_with(|| {
                    next += 1;
                    next - 1
                });
                quotient[v] = id;
            }
            let local: Vec<(usize, usize, Letter)> = kept
                .iter()
                .filter(|(u, _, _)| self.vertex_component[*u] == self.vertex_component[c.first])
                .map(|&(u, v, l)| (new_id[&u] - first, new_id[&v] - first, l))
                .collect();
            specs.push(ComponentSpec { name: c.name.clone(), vertices: next - first, edges: local });
        }
        let graph = LabeledGraph::new(self.alphabet.clone(), specs).expect("folding preserves validity");
        FoldReport { graph, quotient, changed }
    }

    pub fn validate_path(&self, path: &GraphPath) -> Result<()> {
        if path.start >= self.vertex_count() {
            return Err(Error::MalformedPath(format!("start vertex {} out of range", path.start)));
        }
        let mut at = path.start;
        for (i, &d) in path.darts.iter().enumerate() {
            let dart = self.darts.get(d).ok_or_else(|| Error::MalformedPath(format!("dart {d} out of range")))?;
            if dart.source != at {
                return Err(Error::MalformedPath(format!("dart {i} leaves {} but path is at {at}", dart.source)));
            }
            at = dart.target;
        }
        Ok(())
    }

    pub fn path_end(&self, path: &GraphPath) -> VertexId {
        path.darts.last().map_or(path.start, |&d| self.darts[d].target)
    }

    /// The label `ℓ(γ)` of a path.
    pub fn read_label(&self, path: &GraphPath) -> Result<Word> {
        self.validate_path(path)?;
        Ok(Word(path.darts.iter().map(|&d| self.darts[d].label).collect()))
    }

    pub fn reverse_path(&self, path: &GraphPath) -> GraphPath {
        GraphPath {
            start: self.path_end(path),
            darts: path.darts.iter().rev().map(|&d| Self::inverse_dart(d)).collect(),
        }
    }

    /// Vertex sequence visited by a path, including both endpoints.
    pub fn path_vertices(&self, path: &GraphPath) -> Vec<VertexId> {
        std::iter::once(path.start).chain(path.darts.iter().map(|&d| self.darts[d].target)).collect()
    }

    /// Unweighted distances from `v`; `None` outside its component.
    pub fn bfs_distances(&self, v: VertexId) -> Vec<Option<usize>> {
        self.bfs_avoiding(v, usize::MAX)
    }

    fn bfs_avoiding(&self, v: VertexId, banned_edge: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        dist[v] = Some(0);
        let mut queue = VecDeque::from([v]);
        while let Some(x) = queue.pop_front() {
            let dx = dist[x].unwrap();
            for &d in &self.out[x] {
                if d / 2 == banned_edge {
                    continue;
                }
                let y = self.darts[d].target;
                if dist[y].is_none() {
                    dist[y] = Some(dx + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Largest graph distance between two vertices of component `c`.
    pub fn diameter(&self, c: usize) -> usize {
        self.components[c]
            .vertices()
            .map(|v| self.bfs_distances(v).into_iter().flatten().max().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// Length of the shortest simple closed path in component `c`; `None` for a tree.
    ///
    /// Computed edge by edge: the shortest cycle through `e = (u, v)` is one
    /// plus the `u`–`v` distance in the graph with `e` removed.
    pub fn girth(&self, c: usize) -> Option<usize> {
        let comp = &self.components[c];
        (0..self.edge_count())
            .filter(|&e| comp.vertices().contains(&self.darts[2 * e].source))
            .filter_map(|e| {
                let d = self.darts[2 * e];
                self.bfs_avoiding(d.source, e)[d.target].map(|k| k + 1)
            })
            .min()
    }

    /// All simple closed paths of component `c` up to `length_cap`, one per cycle.
    ///
    /// Each cycle is reported from its least vertex, in the orientation whose
    /// first edge id is smaller than its last (loops: the declared dart).
    pub fn simple_closed_paths(&self, c: usize, length_cap: usize, count_cap: usize) -> Result<Vec<Cycle>> {
        let (found, complete) = self.simple_closed_paths_partial(c, length_cap, count_cap);
        if complete {
            Ok(found)
        } else {
            Err(Error::EnumerationOverflow { partial: found.len() })
        }
    }

    /// Like [`simple_closed_paths`](Self::simple_closed_paths) but returns what was
    /// found before the count cap together with a completeness flag.
    pub fn simple_closed_paths_partial(&self, c: usize, length_cap: usize, count_cap: usize) -> (Vec<Cycle>, bool) {
        let mut found = Vec::new();
        let comp = &self.components[c];
        let mut on_path = vec![false; self.vertex_count()];
        for s in comp.vertices() {
            let mut darts = Vec::new();
            if self.cycle_dfs(c, s, s, &mut darts, &mut on_path, length_cap, count_cap, &mut found).is_err() {
                return (found, false);
            }
        }
        (found, true)
    }

    #[allow(clippy::too_many_arguments)]
    fn cycle_dfs(
        &self,
        c: usize,
        base: VertexId,
        at: VertexId,
        darts: &mut Vec<DartId>,
        on_path: &mut [bool],
        length_cap: usize,
        count_cap: usize,
        found: &mut Vec<Cycle>,
    ) -> Result<()> {
        if darts.len() >= length_cap {
            return Ok(());
        }
        for &d in &self.out[at] {
            let t = self.darts[d].target;
            if t == base {
                let keep = match darts.first() {
                    None => d % 2 == 0,
                    Some(&first) => first / 2 < d / 2,
                };
                if keep {
                    if found.len() == count_cap {
                        return Err(Error::EnumerationOverflow { partial: found.len() });
                    }
                    let mut all = darts.clone();
                    all.push(d);
                    found.push(Cycle { component: c, path: GraphPath { start: base, darts: all } });
                }
            } else if t > base && !on_path[t] {
                on_path[t] = true;
                darts.push(d);
                let r = self.cycle_dfs(c, base, t, darts, on_path, length_cap, count_cap, found);
                darts.pop();
                on_path[t] = false;
                r?;
            }
        }
        Ok(())
    }

    /// Label-preserving automorphisms of the (folded) graph.
    ///
    /// Because no two components are isomorphic, every automorphism fixes each
    /// component setwise, so the group is the product of per-component groups.
    pub fn label_automorphisms(&self) -> Result<Automorphisms> {
        if let Some((d1, d2)) = self.fold_conflict() {
            return Err(Error::Precondition(format!("graph is not folded (darts {d1} and {d2})")));
        }
        let k = self.components.len();
        for i in 0..k {
            for j in i + 1..k {
                if !self.isomorphisms(i, j, true).is_empty() {
                    return Err(Error::DuplicateComponent {
                        first: self.components[i].name.clone(),
                        second: self.components[j].name.clone(),
                    });
                }
            }
        }
        let per_component = (0..k).map(|c| self.isomorphisms(c, c, false)).collect();
        Ok(Automorphisms { per_component, offsets: self.components.iter().map(|c| c.first).collect() })
    }

    /// Label-preserving isomorphisms from component `a` onto component `b`,
    /// as images of `a`'s vertices in order.
    fn isomorphisms(&self, a: usize, b: usize, first_only: bool) -> Vec<Vec<VertexId>> {
        let ca = &self.components[a];
        let cb = &self.components[b];
        let darts_a = self.component_darts(a).count();
        let darts_b = self.component_darts(b).count();
        if ca.count != cb.count || darts_a != darts_b {
            return Vec::new();
        }
        let mut out = Vec::new();
        for w in cb.vertices() {
            if let Some(map) = self.extend_map(ca, cb, w) {
                out.push(map);
                if first_only {
                    break;
                }
            }
        }
        out
    }

    fn extend_map(&self, ca: &Component, cb: &Component, image_of_first: VertexId) -> Option<Vec<VertexId>> {
        let mut map = vec![usize::MAX; ca.count];
        let mut used = vec![false; cb.count];
        map[0] = image_of_first;
        used[image_of_first - cb.first] = true;
        let mut queue = VecDeque::from([ca.first]);
        while let Some(x) = queue.pop_front() {
            let fx = map[x - ca.first];
            if self.out[x].len() != self.out[fx].len() {
                return None;
            }
            for &d in &self.out[x] {
                let dart = self.darts[d];
                let fd = self.follow(fx, dart.label)?;
                let fy = self.darts[fd].target;
                let slot = &mut map[dart.target - ca.first];
                if *slot == usize::MAX {
                    if used[fy - cb.first] {
                        return None;
                    }
                    *slot = fy;
                    used[fy - cb.first] = true;
                    queue.push_back(dart.target);
                } else if *slot != fy {
                    return None;
                }
            }
        }
        Some(map)
    }
}

/// The automorphism group, stored as the full list of automorphisms of each component.
#[derive(Debug, Clone)]
pub struct Automorphisms {
    per_component: Vec<Vec<Vec<VertexId>>>,
    offsets: Vec<VertexId>,
}

impl Automorphisms {
    /// Automorphisms of component `c`, each the image list of its vertices.
    pub fn of_component(&self, c: usize) -> &[Vec<VertexId>] {
        &self.per_component[c]
    }

    /// Order of the whole group (product over components).
    pub fn order(&self) -> u128 {
        self.per_component.iter().map(|a| a.len() as u128).product()
    }

    /// Whether some automorphism sends `v` to `w`.
    pub fn related(&self, graph: &LabeledGraph, v: VertexId, w: VertexId) -> bool {
        let c = graph.component_of(v);
        if c != graph.component_of(w) {
            return false;
        }
        let local = v - self.offsets[c];
        self.per_component[c].iter().any(|m| m[local] == w)
    }

    /// Image of `v` under the `k`-th automorphism of its component.
    pub fn apply(&self, graph: &LabeledGraph, k: usize, v: VertexId) -> VertexId {
        let c = graph.component_of(v);
        self.per_component[c][k][v - self.offsets[c]]
    }
}

fn normalize_edge(u: usize, v: usize, l: Letter) -> (usize, usize, Letter) {
    if l.inverted {
        (v, u, l.inverse())
    } else {
        (u, v, l)
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller id as representative so renumbering is stable
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Build a one-component graph from `(u, v, "label")` triples; test and fixture helper.
pub fn single_component(alphabet: &Alphabet, name: &str, vertices: usize, edges: &[(usize, usize, &str)]) -> Result<LabeledGraph> {
    let edges = edges
        .iter()
        .map(|&(u, v, l)| Ok((u, v, alphabet.parse_letter(l)?)))
        .collect::<Result<Vec<_>>>()?;
    LabeledGraph::new(alphabet.clone(), vec![ComponentSpec { name: name.into(), vertices, edges }])
}

/// A cycle reading `word` (letters separated by whitespace) as one component.
pub fn cycle_spec(alphabet: &Alphabet, name: &str, word: &str) -> Result<ComponentSpec> {
    let w = alphabet.parse_word(word)?;
    let n = w.len();
    let edges = w.letters().iter().enumerate().map(|(i, &l)| (i, (i + 1) % n, l)).collect();
    Ok(ComponentSpec { name: name.into(), vertices: n, edges })
}
