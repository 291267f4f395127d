use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use dqmod::cli::{run, RunOptions};
use dqmod::ideal::BuchbergerLimits;
use dqmod::problem::parse_problem_with;
use dqmod::quantize::HkrCaps;
use dqmod::Error;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Emit {
    Text,
    Machine,
}

/// Runs the commands of a problem file and prints a report.
///
/// Exit status: 0 all commands pass, 1 a mathematical failure,
/// 2 usage or parse error, 3 a search cap was exhausted.
#[derive(Parser, Debug)]
#[command(name = "dqmod", version)]
struct Args {
    /// Problem file; reads stdin when absent or `-`.
    input: Option<String>,
    /// HKR search caps `order,degree`, overriding the file.
    #[arg(long, value_parser = parse_caps)]
    caps: Option<HkrCaps>,
    /// Caps used when neither the flag nor the file sets them.
    #[arg(long, env = "DQMOD_CAPS", value_parser = parse_caps, hide_env_values = true)]
    default_caps: Option<HkrCaps>,
    /// Seed for randomized sweeps.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Emit::Text)]
    emit: Emit,
    /// Buchberger step limit.
    #[arg(long, default_value_t = BuchbergerLimits::default().max_steps)]
    max_steps: usize,
}

fn parse_caps(s: &str) -> Result<HkrCaps, String> {
    let (o, d) = s.split_once(',').ok_or("expected order,degree")?;
    let o = o.trim().parse().map_err(|_| "bad order")?;
    let d = d.trim().parse().map_err(|_| "bad degree")?;
    Ok(HkrCaps::new(o, d))
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match args.input.as_deref() {
        None | Some("-") => {
            let mut s = String::new();
            if let Err(e) = std::io::stdin().read_to_string(&mut s) {
                eprintln!("error: reading stdin: {}", e);
                return ExitCode::from(2);
            }
            s
        }
        Some(path) => match std::fs::read_to_string(path) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {}: {}", path, e);
                return ExitCode::from(2);
            }
        },
    };
    let limits = BuchbergerLimits {
        max_steps: args.max_steps,
        ..BuchbergerLimits::default()
    };
    let pf = match parse_problem_with(&text, limits) {
        Ok(pf) => pf,
        Err(Error::Parse { line, col, msg }) => {
            eprintln!(
                "{}:{}:{}: {}",
                match args.input.as_deref() {
                    None | Some("-") => "<stdin>",
                    Some(path) => path,
                },
                line,
                col,
                msg
            );
            return ExitCode::from(2);
        }
        Err(e @ Error::ResourceLimit { .. }) => {
            eprintln!("error: {}", e);
            return ExitCode::from(3);
        }
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(2);
        }
    };
    let opts = RunOptions {
        caps: args.caps,
        default_caps: args.default_caps.unwrap_or_default(),
        seed: args.seed,
    };
    let report = run(&pf, opts);
    match args.emit {
        Emit::Text => print!("{}", report.text()),
        Emit::Machine => print!("{}", report.machine()),
    }
    ExitCode::from(report.exit_code() as u8)
}
