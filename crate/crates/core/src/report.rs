//! Command dispatch and versioned JSON reports for the command-line front end.

use std::path::PathBuf;
use std::time::Instant;

use serde_json::{json, Map, Value};

use crate::ball::CayleyBall;
use crate::boundary::{self, TailCensus, TailWindow};
use crate::cancellation::{enumerate_pieces, fineness_constant, index_bound, parse_lambda, Lambda, Piece, Verdict};
use crate::coned::{BlockTag, ConedBall};
use crate::error::{Error, Result};
use crate::graph::{GraphPath, LabeledGraph};
use crate::group::relators;
use crate::pipeline::{radius_for_reach, Caps, Presentation};
use crate::word::Word;

pub const SCHEMA_VERSION: u64 = 1;
pub const GEODESIC_CAP: usize = 100_000;
pub const DEFAULT_DELTA_SAMPLES: u64 = 2_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Validate,
    Pieces,
    Girth,
    Fineness,
    Relators,
    Ball,
    Copies,
    Dist { x: String, y: String },
    Dy { x: String, y: String },
    Decompose { x: String, y: String },
    Delta { exhaustive: bool, samples: u64, seed: u64 },
    Bigons,
    Lexleast { word: String },
    Tails { sweep: bool },
    ReportAll,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Pieces => "pieces",
            Command::Girth => "girth",
            Command::Fineness => "fineness",
            Command::Relators => "relators",
            Command::Ball => "ball",
            Command::Copies => "copies",
            Command::Dist { .. } => "dist",
            Command::Dy { .. } => "dy",
            Command::Decompose { .. } => "decompose",
            Command::Delta { .. } => "delta",
            Command::Bigons => "bigons",
            Command::Lexleast { .. } => "lexleast",
            Command::Tails { .. } => "tails",
            Command::ReportAll => "report-all",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: PathBuf,
    pub lambda: String,
    pub radius: usize,
    pub depth: usize,
    pub translates: usize,
    pub cut: Option<usize>,
    pub overlap: usize,
    pub caps: Caps,
    pub dot: Option<PathBuf>,
    pub deterministic: bool,
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>) -> Self {
        RunConfig {
            input: input.into(),
            lambda: "1/10".into(),
            radius: 4,
            depth: 12,
            translates: 2,
            cut: None,
            overlap: 4,
            caps: Caps::default(),
            dot: None,
            deterministic: false,
        }
    }

    fn echo(&self) -> Value {
        json!({
            "input": self.input.display().to_string(),
            "lambda": self.lambda,
            "radius": self.radius,
            "depth": self.depth,
            "translates": self.translates,
            "cut": self.cut,
            "overlap": self.overlap,
            "cap_cycles": self.caps.cycles,
            "cap_pieces": self.caps.pieces,
            "cap_ball": self.caps.ball,
        })
    }
}

/// A finished command: its JSON report and process exit code.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    pub exit_code: i32,
}

/// Run one command; errors are folded into the report.
pub fn run(command: &Command, config: &RunConfig) -> Outcome {
    let start = Instant::now();
    let mut report = Map::new();
    report.insert("schema".into(), json!(SCHEMA_VERSION));
    report.insert("command".into(), json!(command.name()));
    report.insert("config".into(), config.echo());
    let exit_code = match dispatch(command, config) {
        Ok((payload, passed)) => {
            report.insert("status".into(), json!(if passed { "ok" } else { "fail" }));
            report.insert("payload".into(), payload);
            if passed { 0 } else { 1 }
        }
        Err(e) => {
            report.insert("status".into(), json!("error"));
            report.insert("error".into(), json!({ "kind": e.kind(), "message": e.to_string(), "exit_code": e.exit_code() }));
            e.exit_code()
        }
    };
    if !config.deterministic {
        report.insert("timing_ms".into(), json!(start.elapsed().as_secs_f64() * 1000.0));
    }
    Outcome { report: Value::Object(report), exit_code }
}

fn lambda_of(config: &RunConfig) -> Result<Lambda> {
    parse_lambda(&config.lambda)
}

fn load(config: &RunConfig) -> Result<Presentation> {
    Presentation::load(&config.input, lambda_of(config)?, config.caps)
}

fn dispatch(command: &Command, config: &RunConfig) -> Result<(Value, bool)> {
    let p = load(config)?;
    match command {
        Command::Validate => Ok(validate_payload(&p)),
        Command::Pieces => pieces_payload(&p),
        Command::Girth => Ok((girth_payload(p.graph()), true)),
        Command::Fineness => fineness_payload(&p).map(|v| (v, true)),
        Command::Relators => relators_payload(&p).map(|v| (v, true)),
        Command::Ball => ball_payload(&p, config).map(|v| (v, true)),
        Command::Copies => copies_payload(&p.coned(config.radius)?).map(|v| (v, true)),
        Command::Dist { x, y } => dist_payload(&p, config, x, y).map(|v| (v, true)),
        Command::Dy { x, y } => dy_payload(&p.coned(config.radius)?, x, y).map(|v| (v, true)),
        Command::Decompose { x, y } => decompose_payload(&p.coned(config.radius)?, x, y).map(|v| (v, true)),
        Command::Delta { exhaustive, samples, seed } => {
            let y = p.coned(config.radius)?;
            delta_payload(&y, (!exhaustive).then_some((*samples, *seed))).map(|v| (v, true))
        }
        Command::Bigons => bigons_payload(&p.coned(config.radius)?, lambda_of(config)?),
        Command::Lexleast { word } => lexleast_payload(&p, config, word).map(|v| (v, true)),
        Command::Tails { sweep } => tails_payload(&p, config, *sweep),
        Command::ReportAll => report_all(&p, config),
    }
}

fn path_json(graph: &LabeledGraph, path: &GraphPath) -> Value {
    let comp = graph.component(graph.component_of(path.start));
    json!({
        "component": comp.name,
        "vertices": graph.path_vertices(path).iter().map(|v| v - comp.first).collect::<Vec<_>>(),
    })
}

fn piece_json(graph: &LabeledGraph, piece: &Piece) -> Value {
    json!({
        "label": graph.alphabet().format_word(&piece.label),
        "p": path_json(graph, &piece.p),
        "q": path_json(graph, &piece.q),
    })
}

fn dart_json(graph: &LabeledGraph, d: usize) -> Value {
    let dart = graph.dart(d);
    let comp = graph.component(graph.component_of(dart.source));
    json!({
        "component": comp.name,
        "source": dart.source - comp.first,
        "target": dart.target - comp.first,
        "label": graph.alphabet().letter_name(dart.label),
    })
}

pub fn validate_payload(p: &Presentation) -> (Value, bool) {
    let graph = if p.parsed.was_folded() { &p.parsed.folded } else { &p.parsed.raw };
    let components: Vec<Value> = p
        .report
        .components
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "girth": c.girth,
                "max_piece": c.max_piece,
                "passes": c.passes,
                "witness": c.witness.as_ref().map(|w| piece_json(graph, w)),
            })
        })
        .collect();
    let mut out = json!({
        "lambda": p.report.lambda.to_string(),
        "verdict": if p.report.passes() { "pass" } else { "fail" },
        "folded": p.parsed.was_folded(),
        "warnings": p.parsed.warnings,
        "components": components,
    });
    match p.report.verdict {
        Verdict::Unfolded { dart_a, dart_b } => {
            out["folding_witness"] = json!([dart_json(graph, dart_a), dart_json(graph, dart_b)]);
        }
        Verdict::PieceTooLong { component } => {
            out["failing_component"] = json!(graph.component(component).name);
        }
        Verdict::Pass => {}
    }
    (out, p.report.passes())
}

fn pieces_payload(p: &Presentation) -> Result<(Value, bool)> {
    let g = p.graph();
    let cap = p.caps.pieces.unwrap_or_else(|| crate::cancellation::default_piece_cap(g));
    let pieces = enumerate_pieces(g, &p.parsed.automorphisms, cap)?;
    let components: Vec<Value> = pieces
        .iter()
        .enumerate()
        .map(|(c, pc)| {
            json!({
                "name": g.component(c).name,
                "max_piece": pc.max_piece,
                "witness": pc.witness.as_ref().map(|w| piece_json(g, w)),
            })
        })
        .collect();
    Ok((json!({ "cap": cap, "automorphism_group_order": p.parsed.automorphisms.order().to_string(), "components": components }), true))
}

pub fn girth_payload(g: &LabeledGraph) -> Value {
    let components: Vec<Value> = (0..g.components().len())
        .map(|c| {
            let comp = g.component(c);
            json!({
                "name": comp.name,
                "vertices": comp.count,
                "edges": g.component_darts(c).count() / 2,
                "girth": g.girth(c),
                "diameter": g.diameter(c),
            })
        })
        .collect();
    json!({ "components": components })
}

pub fn fineness_payload(p: &Presentation) -> Result<Value> {
    let f = fineness_constant(p.graph(), p.caps.cycles)?;
    Ok(json!({
        "K0": f.k0,
        "K": index_bound(f.k0 as u64),
        "histogram": f.histogram.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<Map<_, _>>(),
        "cap": f.cap,
    }))
}

fn relators_payload(p: &Presentation) -> Result<Value> {
    let g = p.graph();
    let rels = relators(g, p.caps.cycles)?;
    let list: Vec<Value> = rels
        .iter()
        .map(|r| json!({ "component": g.component(r.component).name, "length": r.len(), "word": g.alphabet().format_word(&r.word) }))
        .collect();
    Ok(json!({ "count": rels.len(), "relators": list }))
}

fn ball_payload(p: &Presentation, config: &RunConfig) -> Result<Value> {
    let ball = p.ball(config.radius)?;
    if let Some(path) = &config.dot {
        std::fs::write(path, ball.to_dot())?;
    }
    let mut out = ball.to_json();
    out["layer_sizes"] = json!(ball.layer_sizes());
    out["size"] = json!(ball.len());
    out["same_layer_edges"] = json!(ball.same_layer_edges());
    Ok(out)
}

fn parse_word(ball: &CayleyBall, text: &str) -> Result<Word> {
    ball.alphabet().parse_word(text)
}

fn dist_payload(p: &Presentation, config: &RunConfig, x: &str, y: &str) -> Result<Value> {
    let ball = p.ball(config.radius)?;
    let (wx, wy) = (parse_word(&ball, x)?, parse_word(&ball, y)?);
    let d = ball.distance(&wx, &wy)?;
    let geodesic = ball.lex_least_geodesic(&wx.inverse().concat(&wy))?;
    Ok(json!({ "x": x, "y": y, "d_X": d, "lex_least_geodesic": ball.alphabet().format_word(&geodesic) }))
}

fn dy_payload(y: &ConedBall, a: &str, b: &str) -> Result<Value> {
    let ball = y.ball();
    let (wa, wb) = (parse_word(ball, a)?, parse_word(ball, b)?);
    let d_x = ball.distance(&wa, &wb)?;
    match y.coned_distance(&wa, &wb) {
        Ok(d) => Ok(json!({ "x": a, "y": b, "d_X": d_x, "d_Y": d, "certified": true })),
        Err(Error::UncertifiedDistance { lower_bound }) => {
            Ok(json!({ "x": a, "y": b, "d_X": d_x, "d_Y_lower_bound": lower_bound, "certified": false }))
        }
        Err(e) => Err(e),
    }
}

fn decompose_payload(y: &ConedBall, a: &str, b: &str) -> Result<Value> {
    let ball = y.ball();
    let al = ball.alphabet();
    let (wa, wb) = (parse_word(ball, a)?, parse_word(ball, b)?);
    let mut list = Vec::new();
    for p in ball.all_geodesics(&wa, &wb, GEODESIC_CAP)? {
        let dec = y.decompose(&wa, &p)?;
        let blocks: Vec<Value> = dec
            .breakpoints
            .windows(2)
            .zip(&dec.tags)
            .map(|(w, tag)| {
                json!({
                    "segment": al.format_word(&p.subword(w[0], w[1])),
                    "tag": match tag {
                        BlockTag::Copy(c) => json!({ "copy": c, "component": y.graph().component(y.copies()[*c].component).name }),
                        BlockTag::LoneEdge => json!("lone-edge"),
                    },
                })
            })
            .collect();
        list.push(json!({ "geodesic": al.format_word(&p), "k": dec.k(), "breakpoints": dec.breakpoints, "blocks": blocks }));
    }
    Ok(json!({ "x": a, "y": b, "d_Y": y.coned_distance(&wa, &wb)?, "decompositions": list }))
}

fn copies_payload(y: &ConedBall) -> Result<Value> {
    let ball = y.ball();
    let al = ball.alphabet();
    let list: Vec<Value> = y
        .copies()
        .iter()
        .map(|c| {
            json!({
                "component": y.graph().component(c.component).name,
                "anchor_vertex": c.anchor.0,
                "anchor": al.format_word(ball.word(c.anchor.1)),
                "complete": c.is_complete(),
                "vertices_in_ball": c.members().count(),
            })
        })
        .collect();
    let complete = y.copies().iter().filter(|c| c.is_complete()).count();
    Ok(json!({
        "radius": ball.radius(),
        "count": y.copies().len(),
        "complete": complete,
        "truncated": y.copies().len() - complete,
        "copies": list,
    }))
}

fn ratio_json(r: num_rational::Ratio<i64>) -> Value {
    json!(r.to_string())
}

fn delta_payload(y: &ConedBall, samples: Option<(u64, u64)>) -> Result<Value> {
    let est = y.estimate_delta(samples)?;
    Ok(json!({
        "mode": if samples.is_some() { "sampled" } else { "exhaustive" },
        "seed": samples.map(|s| s.1),
        "delta": ratio_json(est.delta),
        "core_radius": y.ball().radius() / 2,
        "points": est.points,
        "quadruples": est.quadruples,
    }))
}

fn bigons_payload(y: &ConedBall, lambda: Lambda) -> Result<(Value, bool)> {
    let al = y.ball().alphabet();
    let r = y.check_bigon_bound(lambda, GEODESIC_CAP)?;
    let violations: Vec<Value> = r
        .violations
        .iter()
        .map(|v| {
            json!({
                "target": al.format_word(&v.target),
                "p": al.format_word(&v.p),
                "q": al.format_word(&v.q),
                "copy": v.copy,
                "shorter_side": v.shorter_side,
            })
        })
        .collect();
    let ok = violations.is_empty();
    Ok((json!({ "lambda": lambda.to_string(), "pairs": r.pairs, "single_cycle_bigons": r.single_cycle, "violations": violations }), ok))
}

fn lexleast_payload(p: &Presentation, config: &RunConfig, word: &str) -> Result<Value> {
    let probe = p.ball(1)?;
    let target = parse_word(&probe, word)?;
    let radius = config.radius.max(radius_for_reach(target.len()));
    let ball = if radius == 1 { probe } else { p.ball(radius)? };
    let g = boundary::lex_least_geodesic(&ball, &target)?;
    let al = ball.alphabet();
    Ok(json!({
        "target": word,
        "norm": g.word.len(),
        "word": al.format_word(&g.word),
        "ball_radius": radius,
        "rejected": g.rejected.iter().map(|r| r.iter().map(|&l| al.letter_name(l)).collect::<Vec<_>>()).collect::<Vec<_>>(),
    }))
}

fn census_json(ball: &CayleyBall, c: &TailCensus) -> Value {
    let al = ball.alphabet();
    let members: Vec<Value> = c
        .members
        .iter()
        .map(|m| {
            json!({
                "translate": al.format_word(&m.translate),
                "target": al.format_word(&m.target),
                "word": al.format_word(&m.word),
                "class": m.class,
            })
        })
        .collect();
    json!({
        "target": al.format_word(&c.base),
        "window": { "cut": c.window.cut, "overlap": c.window.overlap },
        "K0": c.k0,
        "K": c.bound,
        "classes_raw": c.classes_raw,
        "classes_closure": c.classes_closure,
        "skipped": c.skipped.iter().map(|w| al.format_word(w)).collect::<Vec<_>>(),
        "segment_violations": c.segment_violations,
        "verdict": if c.passes() { format!("count <= {}", c.bound) } else { format!("count > {}", c.bound) },
        "members": members,
    })
}

/// Largest diameter of a component containing a cycle.
fn max_relator_diameter(g: &LabeledGraph) -> usize {
    (0..g.components().len()).filter(|&c| g.girth(c).is_some()).map(|c| g.diameter(c)).max().unwrap_or(0)
}

fn tails_payload(p: &Presentation, config: &RunConfig, sweep: bool) -> Result<(Value, bool)> {
    let k0 = fineness_constant(p.graph(), p.caps.cycles)?.k0 as u64;
    let d_max = max_relator_diameter(p.graph());
    let window = match config.cut {
        Some(c) => TailWindow::new(c, config.overlap)?,
        None => TailWindow::new(boundary::default_window(config.translates, d_max).cut, config.overlap)?,
    };
    let radius = radius_for_reach(config.depth + config.translates);
    let ball = p.ball(radius)?;
    let census = boundary::tail_class_census(&ball, config.depth, config.translates, window, k0)?;
    let mut out = census_json(&ball, &census);
    out["ball_radius"] = json!(radius);
    if sweep {
        let mut windows = Vec::new();
        for cut in [0, config.translates, 2 * config.translates, window.cut] {
            for overlap in [2, 4, 6, 8] {
                let w = TailWindow::new(cut, overlap)?;
                if !windows.contains(&w) && overlap <= config.depth.saturating_sub(2 * config.translates) {
                    windows.push(w);
                }
            }
        }
        let rows = boundary::window_sweep(&census, &windows)?;
        out["sweep"] = json!(rows
            .iter()
            .map(|(w, raw, closure)| json!({ "cut": w.cut, "overlap": w.overlap, "classes_raw": raw, "classes_closure": closure }))
            .collect::<Vec<_>>());
    }
    let ok = census.passes();
    Ok((out, ok))
}

fn report_all(p: &Presentation, config: &RunConfig) -> Result<(Value, bool)> {
    let (validate, valid) = validate_payload(p);
    let mut out = json!({ "validate": validate });
    if !valid {
        return Ok((out, false));
    }
    out["fineness"] = fineness_payload(p)?;
    let y = p.coned(config.radius)?;
    let ball = y.ball();
    out["ball"] = json!({ "radius": ball.radius(), "layer_sizes": ball.layer_sizes(), "size": ball.len(), "presentation_hash": ball.presentation_hash() });
    let complete = y.copies().iter().filter(|c| c.is_complete()).count();
    out["copies"] = json!({ "count": y.copies().len(), "complete": complete, "truncated": y.copies().len() - complete });
    let (checked, mismatches) = y.decomposition_check(GEODESIC_CAP)?;
    let iso = y.isometry_violations()?.len();
    let conv = y.convexity_violations(GEODESIC_CAP)?.len();
    out["dy_cross_check"] = json!({
        "geodesics": checked,
        "mismatches": mismatches.len(),
        "isometry_violations": iso,
        "convexity_violations": conv,
    });
    out["delta"] = delta_payload(&y, None)?;
    let (bigons, bigons_ok) = bigons_payload(&y, lambda_of(config)?)?;
    out["bigons"] = bigons;
    let (tails, tails_ok) = tails_payload(p, config, true)?;
    out["tails"] = tails;
    let ok = mismatches.is_empty() && iso == 0 && conv == 0 && bigons_ok && tails_ok;
    Ok((out, ok))
}

/// Human-readable rendering: scalars as `key: value`, short lists inline.
pub fn render_text(report: &Value) -> String {
    let mut out = String::new();
    let status = report["status"].as_str().unwrap_or("?");
    out.push_str(&format!("{} [{}]\n", report["command"].as_str().unwrap_or("?"), status));
    if let Some(err) = report.get("error") {
        out.push_str(&format!("error ({}): {}\n", err["kind"].as_str().unwrap_or("?"), err["message"].as_str().unwrap_or("")));
    }
    if let Some(payload) = report.get("payload") {
        render_value(&mut out, payload, 0);
    }
    out
}

fn render_value(out: &mut String, value: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                match v {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_value(out, v, indent + 1);
                    }
                    Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) && items.len() <= 16 => {
                        let parts: Vec<String> = items.iter().map(scalar_text).collect();
                        out.push_str(&format!("{pad}{k}: [{}]\n", parts.join(", ")));
                    }
                    Value::Array(items) if items.len() <= 16 => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        for (i, item) in items.iter().enumerate() {
                            out.push_str(&format!("{pad}  [{i}]\n"));
                            render_value(out, item, indent + 2);
                        }
                    }
                    Value::Array(items) => out.push_str(&format!("{pad}{k}: {} entries\n", items.len())),
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar_text(v))),
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar_text(other))),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        other => other.to_string(),
    }
}
