//! The `efgc` command line: solve, verify, generate and inspect instances.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use efgc_core::arrangement::enumerate_sign_conditions;
use efgc_core::format::{emit_assignment, emit_instance, parse_assignment, parse_forms, parse_instance, parse_region};
use efgc_core::generators::{gen_ladder_tw2, gen_matching_plus_two, gen_star_from_numpart};
use efgc_core::oracle::scale_warning;
use efgc_core::rational::format_rational;
use efgc_core::{solve, verify_assignment, Instance, SolverSelection, Variant, Verdict};
use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "efgc", version, about = "Envy-free connected division of graphs with divisible edges")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide an instance; on Yes print an envy-free assignment.
    Solve {
        /// Instance file, `-` or omitted for stdin.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long, default_value = "auto", value_parser = parse_mode)]
        mode: SolverSelection,
        /// Write the assignment here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check an assignment against an instance.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        assignment: PathBuf,
    },
    /// Print an instance built from a Number Partitioning input.
    Gen {
        family: Family,
        /// Comma-separated positive integers.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<u64>,
        #[arg(long)]
        variant: Option<VariantArg>,
    },
    /// Decide an instance by exhaustive search.
    Oracle {
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Print the realizable sign vectors of linear forms over a region.
    Cells {
        #[arg(long)]
        forms: PathBuf,
        #[arg(long)]
        region: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Family {
    Star,
    Matching2,
    Ladder,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VariantArg {
    Gc,
    Vdgc,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Gc => Variant::Gc,
            VariantArg::Vdgc => Variant::Vdgc,
        }
    }
}

fn parse_mode(s: &str) -> Result<SolverSelection, String> {
    s.parse()
}

/// Caps the worker pool from the `EFGC_THREADS` value, if set.
pub fn configure_threads(value: Option<&str>) -> Result<()> {
    let Some(v) = value else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| anyhow!("EFGC_THREADS must be a positive integer, got `{v}`"))?;
    // A pool that is already running keeps its size.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Io<'_> {
    fn read_input(&mut self, path: Option<&Path>) -> Result<String> {
        match path {
            Some(p) if p != Path::new("-") => {
                std::fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))
            }
            _ => {
                let mut s = String::new();
                self.stdin.read_to_string(&mut s).context("cannot read stdin")?;
                Ok(s)
            }
        }
    }
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return EXIT_ERROR;
            }
            let _ = write!(stdout, "{}", e.render());
            return EXIT_YES;
        }
    };
    let mut io = Io { stdin, stdout, stderr };
    match dispatch(cli.command, &mut io) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(io.stderr, "error: {e:#}");
            EXIT_ERROR
        }
    }
}

fn dispatch(command: Command, io: &mut Io) -> Result<i32> {
    match command {
        Command::Solve { input, mode, out } => {
            let instance = parse_instance(&io.read_input(input.as_deref())?)?;
            decide(&instance, mode, out.as_deref(), io)
        }
        Command::Oracle { input } => {
            let instance = parse_instance(&io.read_input(input.as_deref())?)?;
            decide(&instance, SolverSelection::Oracle, None, io)
        }
        Command::Verify { input, assignment } => {
            let instance = parse_instance(&read_file(&input)?)?;
            let asg = parse_assignment(&read_file(&assignment)?, &instance)?;
            let report = verify_assignment(&instance, &asg);
            if report.is_valid() {
                writeln!(io.stdout, "valid")?;
                return Ok(EXIT_YES);
            }
            writeln!(io.stdout, "invalid")?;
            for f in &report.failures {
                writeln!(io.stdout, "{f}")?;
            }
            Ok(EXIT_NO)
        }
        Command::Gen {
            family,
            values,
            variant,
        } => {
            let instance = match family {
                Family::Star => gen_star_from_numpart(&values)?,
                Family::Matching2 => gen_matching_plus_two(&values)?,
                Family::Ladder => gen_ladder_tw2(&values, variant.map_or(Variant::Vdgc, Variant::from))?,
            };
            let instance = match variant {
                Some(v) => instance.with_variant(v.into()),
                None => instance,
            };
            write!(io.stdout, "{}", emit_instance(&instance))?;
            Ok(EXIT_YES)
        }
        Command::Cells { forms, region } => {
            let (names, forms) = parse_forms(&read_file(&forms)?)?;
            let region = parse_region(&read_file(&region)?, &names)?;
            let cells = enumerate_sign_conditions(&forms, &region)?;
            for c in &cells {
                let sign: String = c
                    .sign
                    .iter()
                    .map(|s| match s {
                        1 => '+',
                        -1 => '-',
                        _ => '0',
                    })
                    .collect();
                let point: Vec<String> = names
                    .iter()
                    .zip(&c.point)
                    .map(|(n, v)| format!("{n}={}", format_rational(v)))
                    .collect();
                writeln!(io.stdout, "{sign} {}", point.join(" "))?;
            }
            writeln!(io.stdout, "{} cells", cells.len())?;
            Ok(EXIT_YES)
        }
    }
}

fn decide(instance: &Instance, mode: SolverSelection, out: Option<&Path>, io: &mut Io) -> Result<i32> {
    if mode.resolve(instance) == SolverSelection::Oracle {
        if let Some(w) = scale_warning(instance) {
            writeln!(io.stderr, "warning: {w}")?;
        }
    }
    match solve(instance, mode)? {
        Verdict::No => {
            writeln!(io.stdout, "No")?;
            Ok(EXIT_NO)
        }
        Verdict::Yes(asg) => {
            let report = verify_assignment(instance, &asg);
            if !report.is_valid() {
                bail!("solver produced an assignment that fails verification: {:?}", report.failures);
            }
            writeln!(io.stdout, "Yes")?;
            let text = emit_assignment(instance, &asg);
            match out {
                Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display()))?,
                None => write!(io.stdout, "{text}")?,
            }
            Ok(EXIT_YES)
        }
    }
}
