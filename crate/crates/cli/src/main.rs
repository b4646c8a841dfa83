//! Command-line front end: parse space files, dispatch analyses, and emit
//! deterministic human-readable or JSON reports.
//!
//! Exit codes separate tool failure from mathematical verdicts: 0 success,
//! 2 parse error, 3 validation error, 4 assertion failure, 5 asserted value
//! still unknown under the budget. Verdicts live in the report; `--assert
//! key=value` opts into verdict-driven exit codes.

mod report;

use clap::{Parser, Subcommand};
use irrtopo_core::battery::{generate, BatteryConfig, BatterySize};
use irrtopo_core::{derive, irr, nets, parse, waybelow, Error};
use report::{CommandResult, ReportDocument};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "irrtopo",
    version,
    about = "Analyze irreducible-set topology on finitely presented T0 spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit the report as JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Seed for battery generation
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Budget for bounded enumerations
    #[arg(long, global = true, default_value_t = 64)]
    budget: u64,
    /// Check a report entry (key=value); exit 4 on mismatch, 5 on unknown
    #[arg(long, global = true)]
    assert: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide irreducibility of a definable set
    Irr {
        file: PathBuf,
        #[arg(long)]
        set: String,
    },
    /// Compute the supremum of a definable set
    Sup {
        file: PathBuf,
        #[arg(long)]
        set: String,
    },
    /// Derivative stages of the topology; optionally test one open set
    Si {
        file: PathBuf,
        /// Iterate to the fixpoint (otherwise two stages are shown)
        #[arg(long)]
        iterate: bool,
        #[arg(long, default_value_t = 8)]
        bound: u32,
        /// Test this set for openness in the derivative
        #[arg(long)]
        set: Option<String>,
    },
    /// Sobriety hierarchy of the space
    Sober { file: PathBuf },
    /// Decide the way-below relation between two points
    Waybelow { file: PathBuf, x: String, y: String },
    /// The approximation set of a point (with its dual cone)
    Belowset { file: PathBuf, x: String },
    /// Decide continuity of the space
    Continuity { file: PathBuf },
    /// Search for an interpolant between a way-below pair
    Interpolate { file: PathBuf, z: String, x: String },
    /// Decide convergence of a net to a point
    Converge {
        file: PathBuf,
        #[arg(long)]
        net: String,
        #[arg(long)]
        to: String,
        /// Derivative level for the topological side
        #[arg(long, default_value_t = 0)]
        level: u32,
    },
    /// Run the convergence-axiom battery
    Kelley {
        file: PathBuf,
        #[arg(long, default_value = "small")]
        battery: String,
    },
    /// Combined continuity/sobriety verdict with empirical corroboration
    Verdict { file: PathBuf },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parse { .. } => 2,
        _ => 3,
    }
}

fn run(cli: &Cli) -> Result<ReportDocument, Error> {
    let (file, command_name) = match &cli.command {
        Command::Irr { file, .. } => (file, "irr"),
        Command::Sup { file, .. } => (file, "sup"),
        Command::Si { file, .. } => (file, "si"),
        Command::Sober { file } => (file, "sober"),
        Command::Waybelow { file, .. } => (file, "waybelow"),
        Command::Belowset { file, .. } => (file, "belowset"),
        Command::Continuity { file } => (file, "continuity"),
        Command::Interpolate { file, .. } => (file, "interpolate"),
        Command::Converge { file, .. } => (file, "converge"),
        Command::Kelley { file, .. } => (file, "kelley"),
        Command::Verdict { file } => (file, "verdict"),
    };
    let text = std::fs::read_to_string(file).map_err(|e| Error::Parse {
        line: 0,
        expected: format!("a readable space file ({e})"),
    })?;
    let space = parse::parse_space(&text)?;
    let result = match &cli.command {
        Command::Irr { set, .. } => {
            let e = parse::parse_set(&space, set)?;
            let d = irr::is_irreducible(&space, &e)?;
            CommandResult::from_irr(set, &d)
        }
        Command::Sup { set, .. } => {
            let e = parse::parse_set(&space, set)?;
            let s = irr::sup(&space, &e)?;
            CommandResult::from_sup(set, &s)
        }
        Command::Si {
            iterate,
            bound,
            set,
            ..
        } => {
            let bound = if *iterate { *bound } else { (*bound).min(1) };
            let trace = derive::si_iterate(&space, bound);
            let infty = derive::has_si_infty_property(&space);
            let crosscheck = derive::thm23_crosscheck(&space)?;
            let tested = match set {
                Some(s) => {
                    let u = parse::parse_set(&space, s)?;
                    Some((s.clone(), derive::si_open(&space, &u)?))
                }
                None => None,
            };
            CommandResult::from_si(&trace, &infty, &crosscheck, tested)
        }
        Command::Sober { .. } => {
            let rep = derive::sobriety_spectrum(&space)?;
            CommandResult::from_sober(&rep)
        }
        Command::Waybelow { x, y, .. } => {
            let px = parse::parse_point(x)?;
            let py = parse::parse_point(y)?;
            let r = waybelow::way_below(&space, &px, &py)?;
            let battery = generate(
                &space,
                &BatteryConfig {
                    seed: cli.seed,
                    size: BatterySize::Small,
                },
            );
            let nets_agree = nets::way_below_via_nets(&space, &px, &py, &battery)?;
            CommandResult::from_waybelow(x, y, &r.holds, &nets_agree)
        }
        Command::Belowset { x, .. } => {
            let px = parse::parse_point(x)?;
            let below = waybelow::below_set(&space, &px)?;
            let (above, above_open) = waybelow::above_set(&space, &px)?;
            let (m, msup) = waybelow::m_set(&space, &px)?;
            CommandResult::from_belowset(x, &below, &above, above_open, &m, msup.as_ref())
        }
        Command::Continuity { .. } => {
            let rep = waybelow::is_irr_continuous(&space)?;
            CommandResult::from_continuity(&rep)
        }
        Command::Interpolate { z, x, .. } => {
            let pz = parse::parse_point(z)?;
            let px = parse::parse_point(x)?;
            let out = waybelow::interpolate(&space, &pz, &px)?;
            CommandResult::from_interpolate(z, x, &out)
        }
        Command::Converge { net, to, level, .. } => {
            let n = parse::parse_net(&space, net)?;
            let y = parse::parse_point(to)?;
            let j = nets::irr_converges(&space, &n, &y)?;
            let t = nets::topo_converges(&space, &n, &y, *level)?;
            CommandResult::from_converge(net, to, *level, &j, &t)
        }
        Command::Kelley { battery, .. } => {
            let size = match battery.as_str() {
                "large" => BatterySize::Large,
                _ => BatterySize::Small,
            };
            let b = generate(
                &space,
                &BatteryConfig {
                    seed: cli.seed,
                    size,
                },
            );
            let rep = nets::kelley_check(&space, &b)?;
            CommandResult::from_kelley(&rep, b.nets.len(), b.points.len())
        }
        Command::Verdict { .. } => {
            let b = generate(
                &space,
                &BatteryConfig {
                    seed: cli.seed,
                    size: BatterySize::Small,
                },
            );
            let v = nets::main_verdict(&space, &b)?;
            CommandResult::from_verdict(&v)
        }
    };
    Ok(ReportDocument::new(
        command_name,
        &space,
        cli.seed,
        cli.budget,
        result,
    ))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(doc) => {
            if cli.json {
                println!("{}", doc.to_json());
            } else {
                print!("{}", doc.to_text());
            }
            if let Some(assertion) = &cli.assert {
                let Some((key, expected)) = assertion.split_once('=') else {
                    eprintln!("irrtopo: --assert expects key=value");
                    return ExitCode::from(4);
                };
                match doc.assertables().get(key) {
                    Some(actual) if actual == expected => ExitCode::SUCCESS,
                    Some(actual) if actual.starts_with("unknown") || actual.starts_with("inconclusive") => {
                        eprintln!("irrtopo: assertion {key}={expected} unresolved: {actual}");
                        ExitCode::from(5)
                    }
                    Some(actual) => {
                        eprintln!(
                            "irrtopo: assertion failed: {key} is {actual}, expected {expected}"
                        );
                        ExitCode::from(4)
                    }
                    None => {
                        eprintln!("irrtopo: no assertable entry named {key}");
                        ExitCode::from(4)
                    }
                }
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(err) => {
            eprintln!("irrtopo: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
