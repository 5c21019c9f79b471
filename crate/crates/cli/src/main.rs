use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use orbigraph::cohomology::Domain;
use orbigraph::graph::ValidationMode;
use orbigraph_cli::{CliError, Format, Output, RunConfig, Source};

type Run = fn(&RunConfig) -> Result<Output, CliError>;

/// Integral equivariant cohomology of torus orbifolds and their GKM graphs.
#[derive(Parser)]
#[command(name = "orbigraph", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a graph (or the graph of a pair) against the torus or GKM axioms.
    Validate(Common),
    /// Compute the labelled graph of a characteristic pair.
    Derive(Common),
    /// List the face poset.
    Faces(Common),
    /// Rational Thom classes and their minimal integral multiples.
    Thom(Common),
    /// Integrality lattice of the face ring in one degree.
    Lattice(Common),
    /// Graded bases of graph cohomology and ordinary ranks.
    Cohomology(Common),
    /// Polygon pairs: D_k, the gcd test and the generator lattice.
    Polygon(Common),
    /// Degreewise face ring vs graph cohomology check.
    Verify(Common),
    /// Print the input as canonical JSON.
    Emit(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Integral,
    Rational,
    Torus,
    Gkm,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Human,
    Json,
}

#[derive(Args)]
struct Common {
    /// JSON file holding a graph or a characteristic pair.
    #[arg(long, conflicts_with = "fixture", required_unless_present = "fixture")]
    input: Option<PathBuf>,
    /// Built-in example, e.g. p1236, cp2, doubled-square, spindle-2-3.
    #[arg(long)]
    fixture: Option<String>,
    /// Polynomial degree d (cohomological degree 2d); for `polygon`, n.
    #[arg(long)]
    degree: Option<u32>,
    /// Largest polynomial degree for `cohomology` and `verify`.
    #[arg(long)]
    max_degree: Option<u32>,
    /// Coefficient domain and/or validation mode; may be repeated.
    #[arg(long, value_enum)]
    mode: Vec<Mode>,
    #[arg(long, value_enum, default_value = "human")]
    format: OutFormat,
    /// Restrict `thom` to one face, by name.
    #[arg(long)]
    face: Option<String>,
}

impl Common {
    fn config(self) -> RunConfig {
        let source = match (self.input, self.fixture) {
            (Some(p), _) => Source::Path(p),
            (None, Some(f)) => Source::Fixture(f),
            (None, None) => unreachable!("clap requires one source"),
        };
        let mut cfg = RunConfig::new(source);
        cfg.degree = self.degree;
        cfg.max_degree = self.max_degree;
        cfg.face = self.face;
        cfg.format = match self.format {
            OutFormat::Human => Format::Human,
            OutFormat::Json => Format::Json,
        };
        for m in self.mode {
            match m {
                Mode::Integral => cfg.domain = Domain::Integral,
                Mode::Rational => cfg.domain = Domain::Rational,
                Mode::Torus => cfg.check = ValidationMode::Torus,
                Mode::Gkm => cfg.check = ValidationMode::Gkm,
            }
        }
        cfg
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (run, common): (Run, Common) = match cli.command {
        Command::Validate(c) => (orbigraph_cli::cmd_validate, c),
        Command::Derive(c) => (orbigraph_cli::cmd_derive, c),
        Command::Faces(c) => (orbigraph_cli::cmd_faces, c),
        Command::Thom(c) => (orbigraph_cli::cmd_thom, c),
        Command::Lattice(c) => (orbigraph_cli::cmd_lattice, c),
        Command::Cohomology(c) => (orbigraph_cli::cmd_cohomology, c),
        Command::Polygon(c) => (orbigraph_cli::cmd_polygon, c),
        Command::Verify(c) => (orbigraph_cli::cmd_verify, c),
        Command::Emit(c) => (orbigraph_cli::cmd_emit, c),
    };
    match run(&common.config()) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
