//! Command-line parsing and the commands themselves.
//!
//! Exit codes: 0 success, 1 invalid input arrangement or failed
//! verification, 2 unreadable or malformed input.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use mbc_core::json::{canonical, graph_to_json};
use mbc_core::moves::{classify, fuzz_run, verify, FuzzConfig, MoveFile, MoveError, MovePoint};
use mbc_core::sweep::{build_graph_with, SweepOptions};
use mbc_core::{validate_with, Arrangement, Axis, ValidateOptions};
use serde_json::{json, Value};

use crate::render::{graph_svg, render_svg};

#[derive(Debug, Parser)]
#[command(name = "mbc", version, about = "Circle arrangements, their sweep graphs, and small-circle moves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Svg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check an arrangement file and print the report.
    Validate {
        file: PathBuf,
        /// Only check tangencies, triple points and poles inside the region closure.
        #[arg(long)]
        lenient: bool,
    },
    /// Print the graph for one axis.
    Graph {
        file: PathBuf,
        #[arg(long, default_value = "x")]
        axis: Axis,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Make the regular poles on the boundary vertices too.
        #[arg(long)]
        declare_regular_poles: bool,
    },
    /// Add a small circle at a boundary point and verify the predicted graphs.
    Add {
        file: PathBuf,
        #[arg(long)]
        circle: String,
        #[arg(long, allow_hyphen_values = true)]
        angle: f64,
        #[arg(long)]
        radius: Option<f64>,
        /// Write the new arrangement here instead of printing it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify a boundary point without changing anything.
    Classify {
        file: PathBuf,
        #[arg(long)]
        circle: String,
        #[arg(long, allow_hyphen_values = true)]
        angle: f64,
        /// Only this axis (default: both).
        #[arg(long)]
        axis: Option<Axis>,
    },
    /// Replay a file of moves, verifying each.
    Verify {
        file: PathBuf,
        #[arg(long)]
        moves: PathBuf,
        /// Write the final arrangement here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random move sequences on random bases.
    Fuzz {
        #[arg(long, default_value_t = 20)]
        seeds: u64,
        #[arg(long, default_value_t = 6)]
        moves: usize,
        #[arg(long, default_value_t = 0)]
        rng: u64,
        /// Oracle values sampled per axis after each move.
        #[arg(long, default_value_t = 64)]
        samples: usize,
        /// Write each counterexample arrangement into this directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Draw the arrangement and both graphs as SVG.
    Render {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Start the HTTP service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
}

/// Failure with its exit code.
#[derive(Debug)]
pub struct Exit {
    pub code: i32,
    pub message: String,
}

impl Exit {
    fn parse(message: impl Into<String>) -> Exit {
        Exit {
            code: 2,
            message: message.into(),
        }
    }

    fn failed(message: impl Into<String>) -> Exit {
        Exit {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<MoveError> for Exit {
    fn from(e: MoveError) -> Exit {
        Exit::failed(e.to_string())
    }
}

pub fn load(path: &Path) -> Result<Arrangement, Exit> {
    let text = std::fs::read_to_string(path).map_err(|e| Exit::parse(format!("{}: {e}", path.display())))?;
    Arrangement::from_json(&text).map_err(|e| Exit::parse(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Exit> {
    std::fs::write(path, text).map_err(|e| Exit::failed(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Exit> {
    writeln!(out, "{text}").map_err(|e| Exit::failed(e.to_string()))
}

/// Parses `args` (program name first) and runs; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32, Exit> {
    match cmd {
        Command::Validate { file, lenient } => {
            let arr = load(&file)?;
            let report = validate_with(&arr, ValidateOptions { lenient });
            emit(out, &canonical(&serde_json::to_value(&report).unwrap_or(Value::Null)))?;
            Ok(if report.valid { 0 } else { 1 })
        }
        Command::Graph {
            file,
            axis,
            format,
            declare_regular_poles,
        } => {
            let arr = load(&file)?;
            let report = mbc_core::validate(&arr);
            if !report.valid {
                emit(out, &canonical(&serde_json::to_value(&report).unwrap_or(Value::Null)))?;
                return Ok(1);
            }
            let opts = SweepOptions { declare_regular_poles };
            let g = build_graph_with(&arr, axis, opts).map_err(|e| Exit::failed(e.to_string()))?;
            let text = match format {
                Format::Json => graph_to_json(&g),
                Format::Dot => g.to_dot(),
                Format::Svg => graph_svg(&arr, &g),
            };
            emit(out, text.trim_end())?;
            Ok(0)
        }
        Command::Add {
            file,
            circle,
            angle,
            radius,
            out: dest,
        } => {
            let arr = load(&file)?;
            let p = MovePoint::resolve(&arr, &circle, angle)?;
            let rep = verify(&arr, &p, radius)?;
            let report = rep.to_json_value();
            match dest {
                Some(path) => {
                    write_file(&path, &rep.arrangement.to_json())?;
                    emit(out, &canonical(&report))?;
                }
                None => emit(
                    out,
                    &canonical(&json!({"arrangement": rep.arrangement.to_json_value(), "report": report})),
                )?,
            }
            Ok(if rep.ok() { 0 } else { 1 })
        }
        Command::Classify {
            file,
            circle,
            angle,
            axis,
        } => {
            let arr = load(&file)?;
            let p = MovePoint::resolve(&arr, &circle, angle)?;
            let axes: Vec<Axis> = axis.map(|a| vec![a]).unwrap_or_else(|| Axis::BOTH.to_vec());
            let mut list = Vec::new();
            for a in axes {
                let c = classify(&arr, a, &p)?;
                list.push(serde_json::to_value(&c).unwrap_or(Value::Null));
            }
            emit(out, &canonical(&json!({"point": p, "axes": list})))?;
            Ok(0)
        }
        Command::Verify { file, moves, out: dest } => {
            let mut arr = load(&file)?;
            let text = std::fs::read_to_string(&moves).map_err(|e| Exit::parse(format!("{}: {e}", moves.display())))?;
            let plan: MoveFile =
                serde_json::from_str(&text).map_err(|e| Exit::parse(format!("{}: {e}", moves.display())))?;
            let (steps, verdict) = replay(&mut arr, &plan);
            if let Some(path) = dest {
                write_file(&path, &arr.to_json())?;
            }
            emit(
                out,
                &canonical(&json!({"steps": steps, "verdict": verdict, "arrangement": arr.to_json_value()})),
            )?;
            Ok(if verdict == "ok" { 0 } else { 1 })
        }
        Command::Fuzz {
            seeds,
            moves,
            rng,
            samples,
            out_dir,
        } => {
            let report = fuzz_run(&FuzzConfig {
                seeds,
                moves,
                rng_seed: rng,
                oracle_samples: samples,
            });
            if let Some(dir) = out_dir {
                std::fs::create_dir_all(&dir).map_err(|e| Exit::failed(e.to_string()))?;
                for (i, v) in report.violations.iter().enumerate() {
                    write_file(&dir.join(format!("counterexample-{i}.json")), &canonical(&v.arrangement))?;
                }
            }
            emit(out, &canonical(&serde_json::to_value(&report).unwrap_or(Value::Null)))?;
            Ok(if report.ok() { 0 } else { 1 })
        }
        Command::Render { file, out: dest } => {
            let arr = load(&file)?;
            let svg = render_svg(&arr);
            match dest {
                Some(path) => write_file(&path, &svg)?,
                None => emit(out, svg.trim_end())?,
            }
            Ok(0)
        }
        Command::Serve { port, host } => {
            let rt = tokio::runtime::Runtime::new().map_err(|e| Exit::failed(e.to_string()))?;
            rt.block_on(crate::service::serve(&host, port))
                .map_err(|e| Exit::failed(e.to_string()))?;
            Ok(0)
        }
    }
}

/// Applies each move in turn, stopping at the first error. Returns the step
/// reports and the overall verdict ("ok", "mismatch" or "error").
pub fn replay(arr: &mut Arrangement, plan: &MoveFile) -> (Vec<Value>, &'static str) {
    let mut steps = Vec::new();
    let mut verdict = "ok";
    for m in &plan.moves {
        let step = MovePoint::resolve(arr, &m.circle, m.angle).and_then(|p| verify(arr, &p, m.radius));
        match step {
            Ok(rep) => {
                if !rep.ok() {
                    verdict = "mismatch";
                }
                steps.push(rep.to_json_value());
                *arr = rep.arrangement;
            }
            Err(e) => {
                steps.push(json!({"circle": m.circle, "angle": m.angle, "error": e.to_string()}));
                return (steps, "error");
            }
        }
    }
    (steps, verdict)
}
