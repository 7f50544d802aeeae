//! Command implementations for the `twistcode` binary.
//!
//! Every command writes to the given streams and returns its exit status:
//! 0 on success, 1 when a verification check fails, 2 on bad input.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use twistcode::affine::{build_affine_twisted, AffineParams};
use twistcode::codes::file::{read_code, write_code, CodeFileHeader};
use twistcode::codes::{Code, DistanceRegistry};
use twistcode::family::{Bounds, FamilyRegistry, Params};
use twistcode::fields::{parse_polynomial, BinaryField};
use twistcode::symplectic::{build_symplectic_twisted, SymplecticSpace};
use twistcode::{CheckLevel, Error, VerificationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "twistcode",
    version,
    about = "Build and verify twisted permutation codes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Twisted code of the affine group Gbar_k over GF(p)
    Affine(AffineArgs),
    /// Twisted code of Sp(4, 2^n) on projective points
    Symplectic(SymplecticArgs),
    /// Minimum distance of a codeword file
    Dist(DistArgs),
    /// Recompute the summary table over a range of instances
    Table1(TableArgs),
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Write codewords to this file
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the key=value report to this file instead of stdout
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Verification level: fast or all
    #[arg(long, default_value = "fast", value_parser = parse_level)]
    pub check: CheckLevel,
}

#[derive(Args, Debug, Clone)]
pub struct AffineArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub k: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct SymplecticArgs {
    /// Field GF(2^n)
    #[arg(long)]
    pub n: u32,
    /// Reduction polynomial, e.g. x^2+x+1, 0b111 or 0x7
    #[arg(long)]
    pub poly: Option<String>,
    /// Allow enumeration for n > 2
    #[arg(long)]
    pub allow_large: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct DistArgs {
    pub file: PathBuf,
    /// Distance algorithm: pairwise or closure
    #[arg(long, default_value = "pairwise")]
    pub method: String,
}

#[derive(Args, Debug, Clone)]
pub struct TableArgs {
    #[arg(long)]
    pub max_p: u32,
    #[arg(long)]
    pub max_n: u32,
    /// Only affine rows with k <= max-k
    #[arg(long)]
    pub max_k: Option<usize>,
    #[arg(long, default_value = "fast", value_parser = parse_level)]
    pub check: CheckLevel,
}

fn parse_level(s: &str) -> Result<CheckLevel, String> {
    CheckLevel::parse(s).ok_or_else(|| format!("expected fast or all, got {s}"))
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match cli.command {
        Command::Affine(a) => cmd_affine(&a, out, err),
        Command::Symplectic(a) => cmd_symplectic(&a, out, err),
        Command::Dist(a) => cmd_dist(&a, out, err),
        Command::Table1(a) => cmd_table1(&a, out, err),
    }
}

fn build_failure_code(e: &Error) -> i32 {
    match e {
        Error::Consistency { .. } | Error::Domain(_) => EXIT_CHECK_FAILED,
        _ => EXIT_BAD_INPUT,
    }
}

fn fail(err: &mut dyn Write, e: &Error) -> i32 {
    let _ = writeln!(err, "error: {e}");
    build_failure_code(e)
}

fn write_outputs(
    family: &str,
    code: &Code,
    report: &VerificationReport,
    output: &OutputArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Error> {
    if let Some(path) = &output.out {
        let header = CodeFileHeader::for_code(family, report.params.clone(), report.r, code);
        let mut w = BufWriter::new(File::create(path)?);
        write_code(&mut w, &header, code)?;
        w.flush()?;
    }
    let text = report.to_key_value();
    match &output.report {
        Some(path) => std::fs::write(path, &text)?,
        None => out.write_all(text.as_bytes())?,
    }
    err.write_all(report.timings_text().as_bytes())?;
    for c in report.failed_checks() {
        writeln!(err, "check failed: {}", c.name)?;
    }
    Ok(())
}

fn finish(
    family: &str,
    built: Result<(Code, VerificationReport), Error>,
    output: &OutputArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let (code, report) = match built {
        Ok(b) => b,
        Err(e) => return fail(err, &e),
    };
    if let Err(e) = write_outputs(family, &code, &report, output, out, err) {
        let _ = writeln!(err, "error: {e}");
        return EXIT_BAD_INPUT;
    }
    if report.all_passed() {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

pub fn cmd_affine(args: &AffineArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let built = AffineParams::new(args.p, args.k)
        .and_then(|params| build_affine_twisted(params, args.output.check));
    finish("affine", built, &args.output, out, err)
}

fn symplectic_space(args: &SymplecticArgs) -> Result<SymplecticSpace, Error> {
    let field = match &args.poly {
        Some(text) => BinaryField::new(args.n, parse_polynomial(text)?)?,
        None => BinaryField::with_default(args.n)?,
    };
    Ok(SymplecticSpace::with_field(field)?.allow_large(args.allow_large))
}

pub fn cmd_symplectic(args: &SymplecticArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let built = symplectic_space(args).and_then(|s| build_symplectic_twisted(s, args.output.check));
    finish("symplectic", built, &args.output, out, err)
}

fn load_code(path: &Path) -> Result<Code, Error> {
    let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(read_code(BufReader::new(file))?.1)
}

pub fn cmd_dist(args: &DistArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let registry = DistanceRegistry::with_builtin();
    let result = registry
        .get(&args.method)
        .and_then(|strategy| strategy.min_distance(&load_code(&args.file)?));
    match result {
        Ok(delta) => match writeln!(out, "delta={delta}") {
            Ok(()) => EXIT_OK,
            Err(_) => EXIT_BAD_INPUT,
        },
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_BAD_INPUT
        }
    }
}

/// One recomputed table line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub label: String,
    pub r: usize,
    pub q: usize,
    pub delta_tw: usize,
    pub gap: isize,
    pub ok: bool,
}

/// Builds every instance within the bounds and compares it with the
/// closed-form row.
pub fn table_rows(
    registry: &FamilyRegistry,
    bounds: &Bounds,
    level: CheckLevel,
) -> Result<Vec<TableRow>, Error> {
    let mut plan: Vec<(&dyn twistcode::family::CodeFamily, Params)> = Vec::new();
    for family in registry.iter() {
        for params in family.instances(bounds) {
            family.guard(&params)?;
            plan.push((family, params));
        }
    }
    let mut rows = Vec::new();
    for (family, params) in plan {
        let (_, report) = family.build(&params, level)?;
        let expected = family.expected(&params)?;
        let ok = report.all_passed()
            && report.r == expected.r
            && report.alphabet == expected.q
            && report.delta_tw == expected.delta_tw
            && report.gap() == expected.gap as isize
            && report.gap() > 0;
        rows.push(TableRow {
            label: family.label(&params),
            r: report.r,
            q: report.alphabet,
            delta_tw: report.delta_tw,
            gap: report.gap(),
            ok,
        });
    }
    Ok(rows)
}

pub fn render_table(rows: &[TableRow]) -> String {
    let mut s = format!(
        "{:<14} {:>3} {:>6} {:>9} {:>19}  status\n",
        "T", "r", "q", "delta_tw", "delta_tw-delta_rep"
    );
    for row in rows {
        s.push_str(&format!(
            "{:<14} {:>3} {:>6} {:>9} {:>19}  {}\n",
            row.label,
            row.r,
            row.q,
            row.delta_tw,
            row.gap,
            if row.ok { "ok" } else { "MISMATCH" }
        ));
    }
    s
}

pub fn cmd_table1(args: &TableArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let bounds = Bounds {
        max_p: args.max_p,
        max_n: args.max_n,
        max_k: args.max_k,
    };
    let rows = match table_rows(&FamilyRegistry::with_builtin(), &bounds, args.check) {
        Ok(rows) => rows,
        Err(e) => return fail(err, &e),
    };
    if out.write_all(render_table(&rows).as_bytes()).is_err() {
        return EXIT_BAD_INPUT;
    }
    if rows.iter().all(|r| r.ok) {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}
