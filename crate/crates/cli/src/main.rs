//! `aperiodic`: build the tile set, generate, verify, analyze, search and draw.
//!
//! Exit codes: 0 success, 1 invalid window (or failed check), 2 usage error,
//! 3 I/O or decode error, 4 search timeout.

mod report;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use aperiodic_core::analysis::{check_lemmas_on, extract_blue_paths, LemmaStatus};
use aperiodic_core::generator::generate_window_with;
use aperiodic_core::io::{window_from_json, window_to_json};
use aperiodic_core::mutate::mutate_check_with;
use aperiodic_core::periodicity::{derive_axis_periods, scan, search_torus, Outcome};
use aperiodic_core::recode::{legal_blocks_with, to_wang};
use aperiodic_core::render::{parse_layers, render_svg, RenderStyle};
use aperiodic_core::{compile_tileset, verify_with, Coord2, Exec, PatternWindow, TileSet, Wrap};

use report::{InputDigest, Report, REPORT_FORMAT};

#[derive(Parser)]
#[command(name = "aperiodic", version, about = "Aperiodic tile set toolkit")]
struct Cli {
    /// Worker threads (1 is the deterministic reference; 0 uses every core).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tile set export.
    Tiles {
        #[command(subcommand)]
        action: TilesAction,
    },
    /// Paint the canonical configuration on a window.
    Gen {
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true, default_value = "0,0")]
        origin: (i64, i64),
        #[arg(long, value_parser = parse_size)]
        size: (usize, usize),
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a window against the rules.
    Verify {
        #[command(flatten)]
        input: WindowInput,
        /// Wrap both directions.
        #[arg(long)]
        torus: bool,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Extract squares and run the structural checks.
    Analyze {
        #[command(flatten)]
        input: WindowInput,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Single-cell mutation test.
    Mutate {
        #[command(flatten)]
        input: WindowInput,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Search one torus for a periodic tiling.
    Search {
        #[arg(long, value_parser = parse_size)]
        size: (usize, usize),
        /// Seconds; omit for no limit.
        #[arg(long)]
        budget: Option<f64>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Search every torus up to a size.
    Scan {
        #[arg(long, value_parser = parse_max)]
        max: (usize, usize),
        /// Seconds per torus; omit for no limit.
        #[arg(long)]
        budget: Option<f64>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Axis-parallel periods implied by two periods.
    Periods {
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        v1: (i64, i64),
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        v2: (i64, i64),
    },
    /// Export the 2x2 block alphabet as Wang tiles.
    Wang {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a window as SVG.
    Render {
        #[command(flatten)]
        input: WindowInput,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "blue,diagonals,arms,marks,coords")]
        layers: String,
        #[arg(long, default_value_t = 12)]
        cell_size: u32,
        #[arg(long)]
        grid: bool,
    },
}

#[derive(Subcommand)]
enum TilesAction {
    Build {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct WindowInput {
    /// Window file, or `-` for stdin.
    #[arg(long, default_value = "-")]
    window: String,
}

fn parse_pair(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected X,Y, got '{s}'"))?;
    let p = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("'{t}': {e}"));
    Ok((p(a)?, p(b)?))
}

fn parse_size(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WxH, got '{s}'"))?;
    let p = |t: &str| match t.trim().parse::<usize>() {
        Ok(0) => Err("sizes must be positive".to_string()),
        Ok(n) => Ok(n),
        Err(e) => Err(format!("'{t}': {e}")),
    };
    Ok((p(a)?, p(b)?))
}

fn parse_max(s: &str) -> Result<(usize, usize), String> {
    match s.split_once(',') {
        Some(_) => parse_size(&s.replacen(',', "x", 1)),
        None => parse_size(&format!("{s}x{s}")),
    }
}

enum Failure {
    Invalid,
    Io(String),
    Timeout,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid => 1,
            Failure::Io(_) => 3,
            Failure::Timeout => 4,
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Outcome_ = Result<(), Failure>;

struct Ctx {
    exec: Exec,
    argv: Vec<String>,
    start: Instant,
    inputs: Vec<InputDigest>,
}

impl Ctx {
    fn read_window(&mut self, ts: &TileSet, input: &WindowInput) -> Result<PatternWindow, Failure> {
        let bytes = if input.window == "-" {
            let mut buf = Vec::new();
            io::stdin().read_to_end(&mut buf)?;
            buf
        } else {
            fs::read(&input.window).map_err(|e| Failure::Io(format!("{}: {e}", input.window)))?
        };
        self.inputs.push(InputDigest::of(&input.window, &bytes));
        let text = String::from_utf8(bytes).map_err(|e| Failure::Io(format!("{}: {e}", input.window)))?;
        window_from_json(&text, ts).map_err(|e| Failure::Io(format!("{}: {e}", input.window)))
    }

    fn write_report<T: Serialize>(&mut self, path: &Option<PathBuf>, result: T) -> Outcome_ {
        let Some(path) = path else { return Ok(()) };
        let report = Report {
            format: REPORT_FORMAT,
            command: self.argv.clone(),
            inputs: std::mem::take(&mut self.inputs),
            wall_time_ms: self.start.elapsed().as_millis() as u64,
            result,
        };
        let text = serde_json::to_string_pretty(&report).expect("report serializes");
        fs::write(path, text + "\n").map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Outcome_ {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

fn budget(secs: Option<f64>) -> Option<Duration> {
    secs.map(|s| Duration::from_secs_f64(s.max(0.0)))
}

#[derive(Serialize)]
struct TileSetExport<'a> {
    version: &'static str,
    symbols: usize,
    angle_rule: bool,
    alphabet: &'a [aperiodic_core::CellState],
    /// Per symbol, the symbols allowed to its east / north, as little-endian
    /// hex bitsets.
    east_allowed: Vec<String>,
    north_allowed: Vec<String>,
}

fn bits_hex(b: &aperiodic_core::rules::Tables, east: bool) -> Vec<String> {
    let sets = if east { &b.east_of } else { &b.north_of };
    sets.iter()
        .map(|s| {
            let bytes: Vec<u8> = s.as_slice().iter().flat_map(|w| w.to_le_bytes()).collect();
            hex::encode(bytes)
        })
        .collect()
}

fn run(cli: Cli, ctx: &mut Ctx) -> Outcome_ {
    let ts = compile_tileset();
    match cli.command {
        Command::Tiles {
            action: TilesAction::Build { out },
        } => {
            let t = ts.tables();
            let export = TileSetExport {
                version: ts.version(),
                symbols: ts.len(),
                angle_rule: ts.angle_rule(),
                alphabet: ts.alphabet(),
                east_allowed: bits_hex(t, true),
                north_allowed: bits_hex(t, false),
            };
            emit(&out, &(serde_json::to_string(&export).expect("serializes") + "\n"))?;
            eprintln!("{} symbols", ts.len());
            Ok(())
        }
        Command::Gen { origin, size, out } => {
            let w = generate_window_with(Coord2::new(origin.0, origin.1), size.0, size.1, &ctx.exec);
            emit(&out, &(window_to_json(&w) + "\n"))
        }
        Command::Verify { input, torus, report } => {
            let w = ctx.read_window(&ts, &input)?;
            let wrap = if torus { Wrap::Torus } else { Wrap::Open };
            let v = verify_with(&w, &ts, wrap, &ctx.exec);
            for x in &v {
                println!("{} {} {}", x.location, x.rule, x.detail);
            }
            println!("{} violation(s)", v.len());
            let bad = !v.is_empty();
            ctx.write_report(&report, &v)?;
            if bad {
                Err(Failure::Invalid)
            } else {
                Ok(())
            }
        }
        Command::Analyze { input, report } => {
            let w = ctx.read_window(&ts, &input)?;
            let s = extract_blue_paths(&w);
            let lemmas = check_lemmas_on(&w, &s);
            println!(
                "{} closed squares, {} truncated paths, {} anomalies",
                s.squares.len(),
                s.truncated.len(),
                s.anomalies.len()
            );
            for (name, r) in lemmas.entries() {
                let status = match r.status {
                    LemmaStatus::Pass => "pass",
                    LemmaStatus::Fail => "FAIL",
                    LemmaStatus::NotApplicable => "n/a",
                };
                println!("{name:<20} {status:<5} checked {}", r.checked);
                for c in r.counterexamples.iter().take(5) {
                    println!("    at {c}");
                }
            }
            #[derive(Serialize)]
            struct Analysis<'a> {
                structure: &'a aperiodic_core::analysis::BlueStructure,
                lemmas: &'a aperiodic_core::analysis::LemmaReport,
            }
            let failed = lemmas.any_fail();
            ctx.write_report(
                &report,
                Analysis {
                    structure: &s,
                    lemmas: &lemmas,
                },
            )?;
            if failed {
                Err(Failure::Invalid)
            } else {
                Ok(())
            }
        }
        Command::Mutate {
            input,
            samples,
            seed,
            report,
        } => {
            let w = ctx.read_window(&ts, &input)?;
            let r = mutate_check_with(&w, &ts, samples, seed, &ctx.exec).map_err(|e| Failure::Io(e.to_string()))?;
            println!("{}/{} mutations caught", r.caught, r.samples);
            for s in &r.silent {
                println!("silent at {}: {} -> {}", s.location, s.original, s.replacement);
            }
            let bad = !r.all_caught();
            ctx.write_report(&report, &r)?;
            if bad {
                Err(Failure::Invalid)
            } else {
                Ok(())
            }
        }
        Command::Search {
            size,
            budget: b,
            report,
        } => {
            let r = search_torus(size.0, size.1, &ts, budget(b), &ctx.exec);
            println!(
                "{}x{} {} (nodes {}, depth {}, {} ms)",
                size.0,
                size.1,
                r.outcome.label(),
                r.stats.nodes,
                r.stats.max_depth,
                r.stats.wall_time_ms
            );
            if let Outcome::Sat { domain } = &r.outcome {
                println!("{}", window_to_json(domain));
            }
            let timeout = matches!(r.outcome, Outcome::Timeout);
            ctx.write_report(&report, &r)?;
            if timeout {
                Err(Failure::Timeout)
            } else {
                Ok(())
            }
        }
        Command::Scan { max, budget: b, report } => {
            let table = scan(max.0, max.1, &ts, budget(b), &ctx.exec);
            print!("{}", table.grid());
            let timeout = table.entries.iter().any(|e| e.outcome == "timeout");
            ctx.write_report(&report, &table)?;
            if timeout {
                Err(Failure::Timeout)
            } else {
                Ok(())
            }
        }
        Command::Periods { v1, v2 } => match derive_axis_periods(v1, v2) {
            Ok(p) => {
                println!(
                    "({},{}) ({},{})",
                    p.horizontal.0, p.horizontal.1, p.vertical.0, p.vertical.1
                );
                Ok(())
            }
            Err(e) => {
                eprintln!("error: {e}");
                Err(Failure::Invalid)
            }
        },
        Command::Wang { out } => {
            let blocks = legal_blocks_with(&ts, &ctx.exec);
            let wang = to_wang(&blocks);
            #[derive(Serialize)]
            struct WangExport<'a> {
                blocks: usize,
                column_colors: usize,
                row_colors: usize,
                /// `[north, east, south, west]` per tile, in block order.
                tiles: Vec<[u32; 4]>,
                block_symbols: &'a [[aperiodic_core::SymbolId; 4]],
            }
            let export = WangExport {
                blocks: blocks.len(),
                column_colors: wang.column_colors.len(),
                row_colors: wang.row_colors.len(),
                tiles: wang.tiles.iter().map(|t| [t.north, t.east, t.south, t.west]).collect(),
                block_symbols: blocks.blocks(),
            };
            emit(&out, &(serde_json::to_string(&export).expect("serializes") + "\n"))?;
            eprintln!("{} Wang tiles", wang.len());
            Ok(())
        }
        Command::Render {
            input,
            out,
            layers,
            cell_size,
            grid,
        } => {
            let w = ctx.read_window(&ts, &input)?;
            let layers = parse_layers(&layers).map_err(|e| {
                eprintln!("error: {e}");
                Failure::Invalid
            })?;
            let style = RenderStyle {
                cell_size,
                layers,
                show_grid: grid,
                ..RenderStyle::default()
            };
            emit(&out, &render_svg(&w, &style))
        }
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let mut ctx = Ctx {
        exec: Exec::with_threads(cli.threads),
        argv,
        start: Instant::now(),
        inputs: Vec::new(),
    };
    match run(cli, &mut ctx) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if let Failure::Io(msg) = &f {
                eprintln!("error: {msg}");
            }
            ExitCode::from(f.code())
        }
    }
}
