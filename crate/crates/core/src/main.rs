use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use gsc::pipeline::{Caps, DEFAULT_BALL_CAP, DEFAULT_CYCLE_CAP};
use gsc::report::{render_text, run, Command, RunConfig, DEFAULT_DELTA_SAMPLES};

#[derive(Parser)]
#[command(name = "gsc", version, about = "Graphical small cancellation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Clone)]
struct Common {
    /// Graph file (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Cancellation parameter as a rational `p/q`.
    #[arg(long, default_value = "1/10")]
    lambda: String,
    /// Ball radius R.
    #[arg(long, default_value_t = 4)]
    radius: usize,
    /// Census depth D.
    #[arg(long, default_value_t = 12)]
    depth: usize,
    /// Census translate radius r.
    #[arg(long, default_value_t = 2)]
    translates: usize,
    /// Tail window prefix cut c (default 2r + largest relator diameter).
    #[arg(long)]
    cut: Option<usize>,
    /// Tail window minimum overlap m.
    #[arg(long, default_value_t = 4)]
    overlap: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the ball as Graphviz DOT.
    #[arg(long)]
    dot: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_CYCLE_CAP)]
    cap_cycles: usize,
    /// Piece length cap (default: largest component dart count + 2).
    #[arg(long)]
    cap_pieces: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_BALL_CAP)]
    cap_ball: usize,
    /// Omit timing so reports are byte-identical across runs.
    #[arg(long)]
    deterministic: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check foldedness and the graphical C'(λ) condition.
    Validate(Common),
    /// Longest piece per component with witnesses.
    Pieces(Common),
    /// Girth and diameter per component.
    Girth(Common),
    /// Extreme-fineness constant K₀ and index bound K.
    Fineness(Common),
    /// Relator words read along simple closed paths.
    Relators(Common),
    /// Cayley ball of radius R.
    Ball(Common),
    /// Relator copies meeting the ball.
    Copies(Common),
    /// Word-metric distance d_X.
    Dist {
        x: String,
        y: String,
        #[command(flatten)]
        common: Common,
    },
    /// Coned-off distance d_Y.
    Dy {
        x: String,
        y: String,
        #[command(flatten)]
        common: Common,
    },
    /// Minimal block decompositions of every geodesic from x to y.
    Decompose {
        x: String,
        y: String,
        #[command(flatten)]
        common: Common,
    },
    /// Four-point δ of the coned-off ball core.
    Delta {
        /// Scan every quadruple instead of sampling.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = DEFAULT_DELTA_SAMPLES)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Bigon bound over all geodesic pairs in the ball.
    Bigons(Common),
    /// Lexicographically least geodesic to an element.
    Lexleast {
        word: String,
        #[command(flatten)]
        common: Common,
    },
    /// Tail-class census of translates of a deep lex-least target.
    Tails {
        /// Also report class counts across a grid of windows.
        #[arg(long)]
        sweep: bool,
        /// Alias for --translates.
        #[arg(long = "radius", hide = true)]
        translate_radius: Option<usize>,
        #[command(flatten)]
        common: TailsCommon,
    },
    /// Full pipeline in one report.
    ReportAll(Common),
}

/// Common flags for `tails`, where `--radius` names the translate radius.
#[derive(Args, Clone)]
struct TailsCommon {
    /// Graph file (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Cancellation parameter as a rational `p/q`.
    #[arg(long, default_value = "1/10")]
    lambda: String,
    /// Census depth D.
    #[arg(long, default_value_t = 12)]
    depth: usize,
    /// Census translate radius r.
    #[arg(long, default_value_t = 2)]
    translates: usize,
    /// Tail window prefix cut c (default 2r + largest relator diameter).
    #[arg(long)]
    cut: Option<usize>,
    /// Tail window minimum overlap m.
    #[arg(long, default_value_t = 4)]
    overlap: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long, default_value_t = DEFAULT_CYCLE_CAP)]
    cap_cycles: usize,
    /// Piece length cap (default: largest component dart count + 2).
    #[arg(long)]
    cap_pieces: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_BALL_CAP)]
    cap_ball: usize,
    /// Omit timing so reports are byte-identical across runs.
    #[arg(long)]
    deterministic: bool,
}

fn config(c: Common) -> (RunConfig, Format) {
    let cfg = RunConfig {
        input: c.input,
        lambda: c.lambda,
        radius: c.radius,
        depth: c.depth,
        translates: c.translates,
        cut: c.cut,
        overlap: c.overlap,
        caps: Caps { cycles: c.cap_cycles, pieces: c.cap_pieces, ball: c.cap_ball },
        dot: c.dot,
        deterministic: c.deterministic,
    };
    (cfg, c.format)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, (cfg, format)) = match cli.command {
        Cmd::Validate(c) => (Command::Validate, config(c)),
        Cmd::Pieces(c) => (Command::Pieces, config(c)),
        Cmd::Girth(c) => (Command::Girth, config(c)),
        Cmd::Fineness(c) => (Command::Fineness, config(c)),
        Cmd::Relators(c) => (Command::Relators, config(c)),
        Cmd::Ball(c) => (Command::Ball, config(c)),
        Cmd::Copies(c) => (Command::Copies, config(c)),
        Cmd::Dist { x, y, common } => (Command::Dist { x, y }, config(common)),
        Cmd::Dy { x, y, common } => (Command::Dy { x, y }, config(common)),
        Cmd::Decompose { x, y, common } => (Command::Decompose { x, y }, config(common)),
        Cmd::Delta { exhaustive, samples, seed, common } => (Command::Delta { exhaustive, samples, seed }, config(common)),
        Cmd::Bigons(c) => (Command::Bigons, config(c)),
        Cmd::Lexleast { word, common } => (Command::Lexleast { word }, config(common)),
        Cmd::Tails { sweep, translate_radius, common: t } => {
            let c = Common {
                input: t.input,
                lambda: t.lambda,
                radius: 4,
                depth: t.depth,
                translates: translate_radius.unwrap_or(t.translates),
                cut: t.cut,
                overlap: t.overlap,
                format: t.format,
                dot: None,
                cap_cycles: t.cap_cycles,
                cap_pieces: t.cap_pieces,
                cap_ball: t.cap_ball,
                deterministic: t.deterministic,
            };
            (Command::Tails { sweep }, config(c))
        }
        Cmd::ReportAll(c) => (Command::ReportAll, config(c)),
    };
    let outcome = run(&command, &cfg);
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&outcome.report).expect("reports serialize")),
        Format::Text => print!("{}", render_text(&outcome.report)),
    }
    ExitCode::from(outcome.exit_code as u8)
}
