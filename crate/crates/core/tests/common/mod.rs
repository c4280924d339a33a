//! Brute-force oracles shared by the integration tests.
//!
//! Each oracle recomputes a quantity from definitions with no shortcuts from
//! the library: automorphisms by vertex-image propagation, pieces by pairing
//! every non-backtracking path, word equality by closing under all
//! length-non-increasing relator rewrites, balls by oracle-deduplicated BFS
//! over words, geodesics by exhaustive word search, and d_Y by BFS over
//! cliques on every label-traced relator image.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::path::PathBuf;

use gsc::ball::{CayleyBall, ElementId};
use gsc::cancellation::Lambda;
use gsc::graph::{ComponentSpec, LabeledGraph, VertexId};
use gsc::pipeline::{Caps, Presentation};
use gsc::word::{Alphabet, Letter, Word};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

pub const CORPUS: [&str; 4] = ["free2", "classical", "theta", "multi"];

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn corpus_path(name: &str) -> PathBuf {
    manifest_dir().join("corpus").join(format!("{name}.json"))
}

pub fn fixture_path(name: &str) -> PathBuf {
    manifest_dir().join("fixtures").join(format!("{name}.json"))
}

pub fn tenth() -> Lambda {
    Lambda::new(1, 10)
}

pub fn load_corpus(name: &str) -> Presentation {
    Presentation::load(&corpus_path(name), tenth(), Caps::default()).expect("corpus entries load")
}

pub fn load_fixture(name: &str) -> Presentation {
    Presentation::load(&fixture_path(name), tenth(), Caps::default()).expect("fixtures load")
}

/// Golden values live in `corpus/golden/<name>.json`; with `GSC_BLESS=1`
/// the oracle value is written instead of compared.
pub fn golden(name: &str, computed: &Value) -> Value {
    let path = manifest_dir().join("corpus").join("golden").join(format!("{name}.json"));
    if std::env::var("GSC_BLESS").is_ok_and(|v| v == "1") {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, serde_json::to_string_pretty(computed).unwrap() + "\n").unwrap();
    }
    let text = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    serde_json::from_str(&text).unwrap()
}

// ---------------------------------------------------------------- graphs

/// Vertex maps (global ids) of every label-preserving automorphism of component `c`.
pub fn oracle_automorphisms(g: &LabeledGraph, c: usize) -> Vec<Vec<VertexId>> {
    let comp = g.component(c).clone();
    let mut out = Vec::new();
    'candidate: for image in comp.vertices() {
        let mut map: Vec<Option<VertexId>> = vec![None; comp.count];
        map[0] = Some(image);
        let mut queue = VecDeque::from([comp.first]);
        while let Some(x) = queue.pop_front() {
            let fx = map[x - comp.first].unwrap();
            for &d in g.out_darts(x) {
                let dart = g.dart(d);
                let Some(fd) = g.follow(fx, dart.label) else { continue 'candidate };
                let fy = g.dart(fd).target;
                match map[dart.target - comp.first] {
                    None => {
                        map[dart.target - comp.first] = Some(fy);
                        queue.push_back(dart.target);
                    }
                    Some(prev) if prev != fy => continue 'candidate,
                    Some(_) => {}
                }
            }
        }
        let map: Vec<VertexId> = map.into_iter().map(Option::unwrap).collect();
        let distinct: HashSet<_> = map.iter().collect();
        let degrees_match = comp.vertices().all(|v| g.out_darts(v).len() == g.out_darts(map[v - comp.first]).len());
        if distinct.len() == comp.count && degrees_match {
            out.push(map);
        }
    }
    out
}

/// Automorphisms by trying every permutation of the component (tiny graphs only).
pub fn permutation_automorphisms(g: &LabeledGraph, c: usize) -> usize {
    let comp = g.component(c).clone();
    let darts: BTreeSet<(usize, usize, usize)> = g
        .component_darts(c)
        .map(|d| {
            let x = g.dart(d);
            (x.source - comp.first, x.target - comp.first, x.label.index())
        })
        .collect();
    let mut perm: Vec<usize> = (0..comp.count).collect();
    let mut count = 0;
    permute(&mut perm, 0, &mut |p| {
        let mapped: BTreeSet<_> = darts.iter().map(|&(s, t, l)| (p[s], p[t], l)).collect();
        if mapped == darts {
            count += 1;
        }
    });
    count
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// Labels of all non-backtracking paths of length `len` from `v`.
fn labels_from(g: &LabeledGraph, v: VertexId, len: usize) -> BTreeSet<Vec<usize>> {
    let mut out = BTreeSet::new();
    let mut stack: Vec<(VertexId, Option<usize>, Vec<usize>)> = vec![(v, None, Vec::new())];
    while let Some((x, last, label)) = stack.pop() {
        if label.len() == len {
            out.insert(label);
            continue;
        }
        for &d in g.out_darts(x) {
            if Some(d ^ 1) == last {
                continue;
            }
            let dart = g.dart(d);
            let mut l = label.clone();
            l.push(dart.label.index());
            stack.push((dart.target, Some(d), l));
        }
    }
    out
}

/// Longest piece per component, or `None` when a piece of length `cap + 1` exists.
pub fn oracle_max_pieces(g: &LabeledGraph, cap: usize) -> Vec<Option<usize>> {
    let auts: Vec<Vec<Vec<VertexId>>> = (0..g.components().len()).map(|c| oracle_automorphisms(g, c)).collect();
    let related = |v: VertexId, w: VertexId| {
        let c = g.component_of(v);
        c == g.component_of(w) && auts[c].iter().any(|m| m[v - g.component(c).first] == w)
    };
    let n = g.vertex_count();
    let mut best = vec![Some(0); g.components().len()];
    for len in 1..=cap + 1 {
        let labels: Vec<BTreeSet<Vec<usize>>> = (0..n).map(|v| labels_from(g, v, len)).collect();
        for v in 0..n {
            for w in 0..n {
                if v == w || related(v, w) {
                    continue;
                }
                if labels[v].intersection(&labels[w]).next().is_some() {
                    let c = g.component_of(v);
                    best[c] = if len > cap { None } else { best[c].map(|b| b.max(len)) };
                }
            }
        }
    }
    best
}

/// Shortest simple closed path by exhaustive DFS over simple paths.
pub fn oracle_girth(g: &LabeledGraph, c: usize) -> Option<usize> {
    let comp = g.component(c).clone();
    let mut best: Option<usize> = None;
    fn dfs(g: &LabeledGraph, start: VertexId, at: VertexId, used: &mut Vec<bool>, edges: &mut Vec<usize>, best: &mut Option<usize>) {
        for &d in g.out_darts(at) {
            let e = d / 2;
            if edges.contains(&e) {
                continue;
            }
            let t = g.dart(d).target;
            if best.is_some_and(|b| edges.len() + 1 >= b) {
                continue;
            }
            if t == start {
                *best = Some(edges.len() + 1);
                continue;
            }
            if used[t] {
                continue;
            }
            used[t] = true;
            edges.push(e);
            dfs(g, start, t, used, edges, best);
            edges.pop();
            used[t] = false;
        }
    }
    for s in comp.vertices() {
        let mut used = vec![false; g.vertex_count()];
        used[s] = true;
        dfs(g, s, s, &mut used, &mut Vec::new(), &mut best);
    }
    best
}

/// Every simple closed path of component `c` as an edge set with its label read from its least vertex.
pub fn oracle_cycles(g: &LabeledGraph, c: usize) -> Vec<(BTreeSet<usize>, Word)> {
    let comp = g.component(c).clone();
    let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    let mut out = Vec::new();
    fn dfs(
        g: &LabeledGraph,
        start: VertexId,
        at: VertexId,
        used: &mut Vec<bool>,
        darts: &mut Vec<usize>,
        seen: &mut BTreeSet<BTreeSet<usize>>,
        out: &mut Vec<(BTreeSet<usize>, Word)>,
    ) {
        for &d in g.out_darts(at) {
            if darts.iter().any(|&x| x / 2 == d / 2) {
                continue;
            }
            let t = g.dart(d).target;
            if t == start {
                darts.push(d);
                let edges: BTreeSet<usize> = darts.iter().map(|x| x / 2).collect();
                if seen.insert(edges.clone()) {
                    out.push((edges, Word(darts.iter().map(|&x| g.dart(x).label).collect())));
                }
                darts.pop();
                continue;
            }
            if used[t] || t < start {
                continue;
            }
            used[t] = true;
            darts.push(d);
            dfs(g, start, t, used, darts, seen, out);
            darts.pop();
            used[t] = false;
        }
    }
    for s in comp.vertices() {
        let mut used = vec![false; g.vertex_count()];
        used[s] = true;
        dfs(g, s, s, &mut used, &mut Vec::new(), &mut seen, &mut out);
    }
    out
}

/// Number of simple closed paths through the busiest edge.
pub fn oracle_k0(g: &LabeledGraph) -> usize {
    let mut per_edge: BTreeMap<usize, usize> = BTreeMap::new();
    for c in 0..g.components().len() {
        for (edges, _) in oracle_cycles(g, c) {
            for e in edges {
                *per_edge.entry(e).or_insert(0) += 1;
            }
        }
    }
    per_edge.values().copied().max().unwrap_or(0)
}

/// A random folded graph on 2 generators with at most `max_darts` darts,
/// split into one or two connected components; `None` when the draw is
/// not folded or not connected.
pub fn random_folded_graph(rng: &mut ChaCha8Rng, max_darts: usize) -> Option<LabeledGraph> {
    let al = Alphabet::new(&["a", "b"]).unwrap();
    let edges_total = rng.gen_range(1..=max_darts / 2);
    let components = if edges_total >= 2 { rng.gen_range(1..=2) } else { 1 };
    let split = if components == 2 { rng.gen_range(1..edges_total) } else { edges_total };
    let mut specs = Vec::new();
    for (i, m) in [split, edges_total - split].into_iter().enumerate().take(components) {
        let vertices = rng.gen_range(1..=m + 1);
        let edges = (0..m)
            .map(|_| {
                let u = rng.gen_range(0..vertices);
                let v = rng.gen_range(0..vertices);
                let letter = Letter::new(rng.gen_range(0..2), rng.gen_bool(0.5));
                (u, v, letter)
            })
            .collect();
        specs.push(ComponentSpec { name: format!("g{i}"), vertices, edges });
    }
    let g = LabeledGraph::new(al, specs).ok()?;
    if !g.is_folded() || g.label_automorphisms().is_err() {
        return None;
    }
    Some(g)
}

// ---------------------------------------------------------------- words

fn free_reduce(w: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

fn invert(w: &[Letter]) -> Vec<Letter> {
    w.iter().rev().map(|l| l.inverse()).collect()
}

/// Word equality by closure under free reduction and every rewrite
/// `x → y⁻¹` where `x·y` is a cyclic conjugate of a relator or its inverse
/// and `|y| ≤ |x|`.
pub struct RewriteOracle {
    rules: Vec<(Vec<Letter>, Vec<Letter>)>,
    memo: HashMap<Vec<Letter>, bool>,
}

impl RewriteOracle {
    pub fn new(relators: &[Word]) -> Self {
        let mut rules = BTreeSet::new();
        for r in relators {
            for base in [r.0.clone(), invert(&r.0)] {
                let n = base.len();
                for k in 0..n {
                    let rot: Vec<Letter> = base[k..].iter().chain(&base[..k]).copied().collect();
                    for split in n.div_ceil(2)..=n {
                        rules.insert((rot[..split].to_vec(), invert(&rot[split..])));
                    }
                }
            }
        }
        let mut rules: Vec<_> = rules.into_iter().collect();
        rules.sort_by_key(|(lhs, _)| lhs.len());
        RewriteOracle { rules, memo: HashMap::new() }
    }

    /// Relators read independently from the simple closed paths of every component.
    pub fn for_graph(g: &LabeledGraph) -> Self {
        let words: Vec<Word> = (0..g.components().len()).flat_map(|c| oracle_cycles(g, c)).map(|(_, w)| w).collect();
        Self::new(&words)
    }

    pub fn is_trivial(&mut self, w: &[Letter]) -> bool {
        let start = free_reduce(w);
        if let Some(&b) = self.memo.get(&start) {
            return b;
        }
        let mut seen = HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([start.clone()]);
        let mut found = false;
        while let Some(x) = queue.pop_front() {
            if x.is_empty() {
                found = true;
                break;
            }
            for (lhs, rhs) in &self.rules {
                if lhs.len() > x.len() {
                    break;
                }
                for i in 0..=x.len() - lhs.len() {
                    if x[i..i + lhs.len()] == lhs[..] {
                        let mut next = x[..i].to_vec();
                        next.extend_from_slice(rhs);
                        next.extend_from_slice(&x[i + lhs.len()..]);
                        let next = free_reduce(&next);
                        if seen.insert(next.clone()) {
                            queue.push_back(next);
                        }
                    }
                }
            }
        }
        self.memo.insert(start, found);
        found
    }

    pub fn equal(&mut self, u: &[Letter], v: &[Letter]) -> bool {
        let mut w = u.to_vec();
        w.extend(invert(v));
        self.is_trivial(&w)
    }
}

/// Every word over the letters of `al` of length exactly `n`.
pub fn all_words(al: &Alphabet, n: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                al.letters().iter().map(move |&l| {
                    let mut x = w.clone();
                    x.push(l);
                    x
                })
            })
            .collect();
    }
    out
}

/// Ball layer sizes by BFS over words, deduplicating with the rewrite oracle.
pub fn oracle_layers(al: &Alphabet, oracle: &mut RewriteOracle, radius: usize) -> Vec<usize> {
    let mut elements: Vec<Vec<Letter>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<Letter>> = vec![Vec::new()];
    let mut sizes = vec![1];
    for _ in 0..radius {
        let mut next: Vec<Vec<Letter>> = Vec::new();
        for w in &frontier {
            for &l in al.letters() {
                let mut x = w.clone();
                x.push(l);
                if !elements.iter().chain(&next).any(|e| oracle.equal(&x, e)) {
                    next.push(x);
                }
            }
        }
        sizes.push(next.len());
        elements.extend(next.iter().cloned());
        frontier = next;
    }
    sizes
}

/// Every geodesic word from 1 to `target`, by exhaustive search over
/// freely reduced words of the target's norm.
pub fn oracle_geodesics(al: &Alphabet, oracle: &mut RewriteOracle, target: &Word, norm: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<Letter>> = vec![Vec::new()];
    while let Some(w) = stack.pop() {
        if w.len() == norm {
            if oracle.equal(&w, &target.0) {
                out.push(Word(w));
            }
            continue;
        }
        for &l in al.letters() {
            if w.last() == Some(&l.inverse()) {
                continue;
            }
            let mut x = w.clone();
            x.push(l);
            stack.push(x);
        }
    }
    out.sort_by(|a, b| al.cmp_lex(a, b));
    out
}

// ---------------------------------------------------------------- coned-off metric

/// `d_Y(1, ·)` on a ball by BFS over the Cayley edges plus a clique on the
/// in-ball image of every label-traced map `Γᵢ → X` anchored in the ball.
pub fn oracle_dy_from_one(ball: &CayleyBall, g: &LabeledGraph) -> Vec<usize> {
    let mut cliques: BTreeSet<Vec<ElementId>> = BTreeSet::new();
    for c in 0..g.components().len() {
        if oracle_girth(g, c).is_none() {
            continue;
        }
        let comp = g.component(c).clone();
        // label of a path from vertex 0 of the component to each vertex
        let mut label: Vec<Option<Word>> = vec![None; comp.count];
        label[0] = Some(Word::empty());
        let mut queue = VecDeque::from([comp.first]);
        while let Some(x) = queue.pop_front() {
            for &d in g.out_darts(x) {
                let dart = g.dart(d);
                if label[dart.target - comp.first].is_none() {
                    let mut w = label[x - comp.first].clone().unwrap();
                    w.push(dart.label);
                    label[dart.target - comp.first] = Some(w);
                    queue.push_back(dart.target);
                }
            }
        }
        let label: Vec<Word> = label.into_iter().map(Option::unwrap).collect();
        for v in 0..comp.count {
            let dist = g.bfs_distances(comp.first + v);
            for e in 0..ball.len() {
                let base = ball.word(e).concat(&label[v].inverse());
                let mut image: Vec<ElementId> = (0..comp.count)
                    .filter(|&u| dist[comp.first + u].is_some_and(|d| d <= 2 * ball.radius()))
                    .filter_map(|u| ball.locate(&base.concat(&label[u])))
                    .collect();
                image.sort();
                cliques.insert(image);
            }
        }
    }
    let mut member_of: Vec<Vec<usize>> = vec![Vec::new(); ball.len()];
    let cliques: Vec<Vec<ElementId>> = cliques.into_iter().collect();
    for (i, cl) in cliques.iter().enumerate() {
        for &x in cl {
            member_of[x].push(i);
        }
    }
    let mut dist = vec![usize::MAX; ball.len()];
    dist[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        let mut next: Vec<ElementId> = ball.alphabet().letters().iter().filter_map(|&l| ball.neighbor(x, l)).collect();
        for &i in &member_of[x] {
            next.extend(&cliques[i]);
        }
        for y in next {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}
