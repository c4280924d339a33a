//! Loading a presentation file up to a certified group and its balls.

use std::path::Path;

use crate::ball::CayleyBall;
use crate::cancellation::{default_piece_cap, verify_cprime, CancellationReport, Lambda};
use crate::coned::ConedBall;
use crate::error::Result;
use crate::graph::LabeledGraph;
use crate::group::{relators, Group};
use crate::input::{parse_graph_file, parse_graph_str, ParsedGraph};

pub const DEFAULT_CYCLE_CAP: usize = 100_000;
pub const DEFAULT_BALL_CAP: usize = 2_000_000;

#[derive(Debug, Clone, Copy)]
pub struct Caps {
    pub cycles: usize,
    /// Piece length cap; `None` uses [`default_piece_cap`].
    pub pieces: Option<usize>,
    pub ball: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { cycles: DEFAULT_CYCLE_CAP, pieces: None, ball: DEFAULT_BALL_CAP }
    }
}

/// A parsed presentation with its C'(λ) report.
#[derive(Debug, Clone)]
pub struct Presentation {
    pub parsed: ParsedGraph,
    pub report: CancellationReport,
    pub caps: Caps,
}

impl Presentation {
    pub fn load(path: &Path, lambda: Lambda, caps: Caps) -> Result<Self> {
        Self::from_parsed(parse_graph_file(path)?, lambda, caps)
    }

    pub fn from_str(text: &str, lambda: Lambda, caps: Caps) -> Result<Self> {
        Self::from_parsed(parse_graph_str(text)?, lambda, caps)
    }

    /// The C'(λ) verdict is taken on the graph as declared, so unfolded input fails.
    pub fn from_parsed(parsed: ParsedGraph, lambda: Lambda, caps: Caps) -> Result<Self> {
        let report = if parsed.was_folded() {
            let cap = caps.pieces.unwrap_or_else(|| default_piece_cap(&parsed.folded));
            verify_cprime(&parsed.folded, lambda, cap)?
        } else {
            verify_cprime(&parsed.raw, lambda, 1)?
        };
        Ok(Presentation { parsed, report, caps })
    }

    pub fn graph(&self) -> &LabeledGraph {
        &self.parsed.folded
    }

    pub fn group(&self) -> Result<Group> {
        Group::certified(self.graph(), &self.report, relators(self.graph(), self.caps.cycles)?)
    }

    pub fn ball(&self, radius: usize) -> Result<CayleyBall> {
        CayleyBall::build(&self.group()?, radius, self.caps.ball)
    }

    pub fn coned(&self, radius: usize) -> Result<ConedBall> {
        ConedBall::build(self.ball(radius)?, self.graph(), &self.parsed.automorphisms)
    }
}

/// Ball radius needed so that every target of norm at most `reach` has certified geodesics.
pub fn radius_for_reach(reach: usize) -> usize {
    reach.div_ceil(2).max(1)
}
