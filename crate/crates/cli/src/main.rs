//! `ccs`: invariants of cut cellular surfaces from the command line.
//!
//! Exit codes: 0 success, 1 validation or arity failure, 2 parse error,
//! 3 property or identity failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ccs_core::ccs::{
    builtin, dump_surface, glue, parse_surface, random_walk, reflect, rotate, CellComplex,
    ComplexError, ParseErrorKind,
};
use ccs_core::colouring::{BoundaryColouring, ColouringError};
use ccs_core::dcp::{run_all, CheckStatus};
use ccs_core::group::{Group, GroupSpec};
use ccs_core::tqft::{invariant_matrix, invariant_scalar, matrices_equal};

#[derive(Parser)]
#[command(name = "ccs", version, about = "Finite-group invariants of cut cellular surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a surface file.
    Validate { file: PathBuf },
    /// Normalized invariant for one boundary colouring.
    Invariant {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        group: String,
        /// Comma-separated element indices for the in circles.
        #[arg(long = "in", default_value = "")]
        in_list: String,
        /// Comma-separated element indices for the out circles.
        #[arg(long = "out", default_value = "")]
        out_list: String,
        /// Also print the boundary colours by element name.
        #[arg(long)]
        names: bool,
    },
    /// Full invariant matrix in the dump format.
    Matrix {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        group: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Apply seeded random moves and check the matrix after each one.
    CheckMoves {
        #[arg(long)]
        builtin: String,
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        steps: usize,
    },
    /// Run every D/C/P identity check over a group.
    Identities {
        #[arg(long)]
        group: String,
        /// Print counterexample elements by name as well as by index.
        #[arg(long)]
        names: bool,
    },
    /// Glue the out circles of A onto the in circles of B.
    Glue {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write a builtin surface.
    Builtin {
        name: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write the reflection of a surface.
    Reflect {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write the rotation of a surface.
    Rotate {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    #[arg(long)]
    surface: Option<PathBuf>,
    #[arg(long)]
    builtin: Option<String>,
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn invalid(msg: impl Into<String>) -> Failure {
        Failure { code: 1, msg: msg.into() }
    }

    fn parse(msg: impl Into<String>) -> Failure {
        Failure { code: 2, msg: msg.into() }
    }

    fn property(msg: impl Into<String>) -> Failure {
        Failure { code: 3, msg: msg.into() }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { file } => cmd_validate(&file),
        Command::Invariant { source, group, in_list, out_list, names } => {
            cmd_invariant(&source, &group, &in_list, &out_list, names)
        }
        Command::Matrix { source, group, output } => cmd_matrix(&source, &group, output.as_deref()),
        Command::CheckMoves { builtin, group, seed, steps } => {
            cmd_check_moves(&builtin, &group, seed, steps)
        }
        Command::Identities { group, names } => cmd_identities(&group, names),
        Command::Glue { a, b, output } => cmd_glue(&a, &b, output.as_deref()),
        Command::Builtin { name, output } => {
            load_builtin(&name).and_then(|m| write_out(output.as_deref(), &dump_surface(&m)))
        }
        Command::Reflect { file, output } => load_valid(&file)
            .and_then(|m| write_out(output.as_deref(), &dump_surface(&reflect(&m)))),
        Command::Rotate { file, output } => load_valid(&file)
            .and_then(|m| write_out(output.as_deref(), &dump_surface(&rotate(&m)))),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn load_group(spec: &str) -> Result<Group, Failure> {
    let spec: GroupSpec = spec.parse().map_err(|e| Failure::parse(format!("group: {e}")))?;
    spec.build().map_err(|e| Failure::parse(format!("group: {e}")))
}

fn read_surface(path: &Path) -> Result<CellComplex, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::parse(format!("cannot read {}: {e}", path.display())))?;
    parse_surface(&text).map_err(|e| {
        let msg = format!("{}: {e}", path.display());
        match e.kind {
            ParseErrorKind::DuplicatePosition => Failure::invalid(msg),
            _ => Failure::parse(msg),
        }
    })
}

fn check_valid(m: &CellComplex) -> Outcome {
    m.validate().map_err(|violations| {
        let lines: Vec<String> = violations.iter().map(|v| format!("  {v}")).collect();
        Failure::invalid(format!("invalid complex:\n{}", lines.join("\n")))
    })
}

fn load_valid(path: &Path) -> Result<CellComplex, Failure> {
    let m = read_surface(path)?;
    check_valid(&m)?;
    Ok(m)
}

fn load_builtin(name: &str) -> Result<CellComplex, Failure> {
    builtin(name).map_err(|e| Failure::parse(e.to_string()))
}

fn load_source(source: &Source) -> Result<CellComplex, Failure> {
    match (&source.surface, &source.builtin) {
        (Some(path), _) => load_valid(path),
        (None, Some(name)) => load_builtin(name),
        (None, None) => Err(Failure::parse("give --surface or --builtin")),
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => fs::write(p, text)
            .map_err(|e| Failure::invalid(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_list(text: &str, what: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Failure::parse(format!("--{what}: `{t}` is not an element index")))
        })
        .collect()
}

fn cmd_validate(path: &Path) -> Outcome {
    let m = load_valid(path)?;
    let genus = m.genus().map_or("?".to_string(), |g| g.to_string());
    println!(
        "ok: {} n={} m={} v={} genus={}",
        m.name(),
        m.in_count(),
        m.out_count(),
        m.internal_vertex_count(),
        genus
    );
    Ok(())
}

fn cmd_invariant(source: &Source, group: &str, ins: &str, outs: &str, names: bool) -> Outcome {
    let g = load_group(group)?;
    let m = load_source(source)?;
    let bc = BoundaryColouring::new(parse_list(ins, "in")?, parse_list(outs, "out")?);
    let v = invariant_scalar(&g, &m, &bc).map_err(|e| match e {
        ColouringError::Arity { .. } | ColouringError::Element { .. } => {
            Failure::invalid(e.to_string())
        }
        other => Failure::property(other.to_string()),
    })?;
    if names {
        let show = |xs: &[usize]| xs.iter().map(|&x| g.label(x)).collect::<Vec<_>>().join(",");
        println!("in=({}) out=({})", show(&bc.in_elems), show(&bc.out_elems));
    }
    println!("count={} half_exponent={} value≈{}", v.count, v.half_exponent, v.render());
    Ok(())
}

fn cmd_matrix(source: &Source, group: &str, output: Option<&Path>) -> Outcome {
    let g = load_group(group)?;
    let m = load_source(source)?;
    write_out(output, &invariant_matrix(&g, &m).dump())
}

fn cmd_check_moves(name: &str, group: &str, seed: u64, steps: usize) -> Outcome {
    let g = load_group(group)?;
    let m = load_builtin(name)?;
    let initial = invariant_matrix(&g, &m);
    println!(
        "start {name} over {} seed={seed} steps={steps} v={} he={}",
        g.name(),
        m.internal_vertex_count(),
        initial.half_exponent
    );
    let trace = random_walk(&m, seed, steps).map_err(|e: ComplexError| {
        Failure::property(format!("move produced an invalid complex: {e}"))
    })?;
    for step in &trace {
        let z = invariant_matrix(&g, &step.complex);
        let same = matrices_equal(&z, &initial).expect("same group");
        println!(
            "step {:>3}: {} v={} he={} {}",
            step.index + 1,
            step.description,
            step.complex.internal_vertex_count(),
            z.half_exponent,
            if same { "ok" } else { "MISMATCH" }
        );
        if !same {
            return Err(Failure::property(format!("matrix changed at step {}", step.index + 1)));
        }
    }
    println!("invariant unchanged after {} moves", trace.len());
    Ok(())
}

fn cmd_identities(group: &str, names: bool) -> Outcome {
    let g = load_group(group)?;
    println!("identities over {} (order {})", g.name(), g.order());
    println!("{:<22} {:<8} {:>10}  detail", "check", "status", "time_ms");
    let mut failed = 0;
    for o in run_all(&g) {
        let (status, detail) = match &o.status {
            CheckStatus::Ok => ("ok", String::new()),
            CheckStatus::Skipped(why) => ("skipped", why.clone()),
            CheckStatus::Fail(cx) => {
                failed += 1;
                let mut d = cx.to_string();
                if names {
                    let labels: Vec<String> =
                        cx.args.iter().map(|(k, v)| format!("{k}={}", g.label(*v))).collect();
                    d.push_str(&format!(" [{}]", labels.join(" ")));
                }
                ("fail", d)
            }
        };
        let ms = o.elapsed.as_secs_f64() * 1000.0;
        let line = format!("{:<22} {:<8} {:>10.3}  {}", o.name, status, ms, detail);
        println!("{}", line.trim_end());
    }
    if failed > 0 {
        return Err(Failure::property(format!("{failed} check(s) failed")));
    }
    Ok(())
}

fn cmd_glue(a: &Path, b: &Path, output: Option<&Path>) -> Outcome {
    let (ma, mb) = (load_valid(a)?, load_valid(b)?);
    let glued = glue(&ma, &mb).map_err(|e| Failure::invalid(e.to_string()))?;
    write_out(output, &dump_surface(&glued))
}
