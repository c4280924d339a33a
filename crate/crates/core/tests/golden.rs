//! Oracle-derived corpus constants, frozen in `corpus/golden/`.
//!
//! Run with `GSC_BLESS=1` to rewrite the files from the oracles.

mod common;

use common::*;
use gsc::cancellation::{default_piece_cap, enumerate_pieces, fineness_constant};
use serde_json::{json, Map, Value};

#[test]
fn max_pieces_and_girth() {
    let mut computed = Map::new();
    for name in CORPUS {
        let p = load_corpus(name);
        let g = p.graph();
        let cap = default_piece_cap(g);
        let oracle = oracle_max_pieces(g, cap);
        let mut per = Map::new();
        for c in 0..g.components().len() {
            per.insert(
                g.component(c).name.clone(),
                json!({ "max_piece": oracle[c], "girth": oracle_girth(g, c), "diameter": g.diameter(c) }),
            );
        }
        computed.insert(name.to_string(), Value::Object(per));
    }
    let computed = Value::Object(computed);
    let frozen = golden("pieces", &computed);
    assert_eq!(frozen, computed);
    for name in CORPUS {
        let p = load_corpus(name);
        let g = p.graph();
        let pieces = enumerate_pieces(g, &p.parsed.automorphisms, default_piece_cap(g)).unwrap();
        for (c, pc) in pieces.iter().enumerate() {
            let entry = &frozen[name][&g.component(c).name];
            assert_eq!(entry["max_piece"], json!(pc.max_piece), "{name}");
            assert_eq!(entry["girth"], json!(g.girth(c)), "{name}");
        }
    }
}

#[test]
fn fineness_constants() {
    let mut computed = Map::new();
    for name in CORPUS {
        computed.insert(name.to_string(), json!(oracle_k0(load_corpus(name).graph())));
    }
    let computed = Value::Object(computed);
    let frozen = golden("fineness", &computed);
    assert_eq!(frozen, computed);
    for name in CORPUS {
        let p = load_corpus(name);
        assert_eq!(frozen[name], json!(fineness_constant(p.graph(), 1000).unwrap().k0), "{name}");
    }
}

#[test]
fn ball_layers() {
    let mut computed = Map::new();
    for name in CORPUS {
        let p = load_corpus(name);
        let mut oracle = RewriteOracle::for_graph(p.graph());
        computed.insert(name.to_string(), json!(oracle_layers(p.graph().alphabet(), &mut oracle, 4)));
    }
    let computed = Value::Object(computed);
    let frozen = golden("layers", &computed);
    assert_eq!(frozen, computed);
    for name in CORPUS {
        assert_eq!(frozen[name], json!(load_corpus(name).ball(4).unwrap().layer_sizes()), "{name}");
    }
}

/// Exhaustive four-point δ of the clique-BFS metric on the core `B(2)` of the radius-4 ball.
#[test]
fn coned_delta() {
    let mut computed = Map::new();
    for name in CORPUS {
        let p = load_corpus(name);
        let ball = p.ball(4).unwrap();
        let dy = oracle_dy_from_one(&ball, p.graph());
        let core: Vec<usize> = (0..=2).flat_map(|k| ball.layer_elements(k)).collect();
        let d: Vec<Vec<i64>> = core
            .iter()
            .map(|&x| {
                core.iter()
                    .map(|&y| dy[ball.locate(&ball.word(x).inverse().concat(ball.word(y))).unwrap()] as i64)
                    .collect()
            })
            .collect();
        let n = core.len();
        let mut worst = 0;
        for w in 0..n {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        let g = |a: usize, b: usize| d[a][w] + d[b][w] - d[a][b];
                        worst = worst.max(g(x, y).min(g(y, z)) - g(x, z));
                    }
                }
            }
        }
        computed.insert(name.to_string(), json!(num_rational::Ratio::new(worst, 2).to_string()));
    }
    let computed = Value::Object(computed);
    let frozen = golden("delta", &computed);
    assert_eq!(frozen, computed);
    for name in CORPUS {
        let y = load_corpus(name).coned(4).unwrap();
        assert_eq!(frozen[name], json!(y.estimate_delta(None).unwrap().delta.to_string()), "{name}");
    }
}
