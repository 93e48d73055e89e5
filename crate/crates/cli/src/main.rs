use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use aspec_cli::{run, Command, Format, Options};
use clap::Parser;

#[derive(Parser, Debug)]
#[command(name = "aspec", version, about = "Deformation hulls, O^A and aSpec of finite-dimensional algebras")]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Input document.
    #[arg(long)]
    input: PathBuf,
    /// Truncation order N.
    #[arg(long)]
    order: Option<usize>,
    /// Comma-separated module or point names.
    #[arg(long, value_delimiter = ',')]
    modules: Vec<String>,
    /// Algebra element as a combination of basis labels; repeatable.
    #[arg(long)]
    elem: Vec<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Seed for the randomized checks of `verify`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match std::fs::read_to_string(&args.input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", args.input.display());
            return ExitCode::from(2);
        }
    };
    let opts = Options { order: args.order, modules: args.modules, elems: args.elem, seed: args.seed };
    let start = Instant::now();
    match run(args.command, &text, opts) {
        Ok(report) => {
            print!("{}", report.render(args.format));
            eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
            if report.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
