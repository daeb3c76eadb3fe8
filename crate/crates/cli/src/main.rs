//! `btf`: construct, assemble and verify unit-norm tight frames.
//!
//! Exit status is 0 when every check passes, 1 when a check fails on
//! well-formed input, and 2 for bad arguments or malformed files.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use btf_core::algebra::AbelianGroup;
use btf_core::assembly::{
    assemble, build_family, corollary_params, prime_power_pairs, AssembledFrame, AssemblySpec,
    BlockMode, CorollaryReport, Family, Geometry,
};
use btf_core::curve::{curve_angles, curve_frame, etf_parameter};
use btf_core::designs::{load_steiner, save_steiner, SteinerMatrix};
use btf_core::diffsets::{picket_fence, search, simplectic, singer, BidifferenceSet, Kind};
use btf_core::fusion::{build_plucker_example, is_plucker_etf};
use btf_core::harmonic::{harmonic_frame, harmonic_from_diffset};
use btf_core::io::{load_document, load_frame, save_frame, save_fusion, Document};
use btf_core::numerics::sets_match;
use btf_core::{Error, Frame, Tolerance};
use clap::{Parser, Subcommand, ValueEnum};

use report::{list, Report};

#[derive(Parser)]
#[command(
    name = "btf",
    version,
    about = "Construct and certify equiangular and biangular tight frames"
)]
struct Cli {
    /// Equality tolerance for numerical checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    /// Gap below which frame angles are merged.
    #[arg(long, global = true, default_value_t = 1e-7)]
    cluster_tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a frame, Steiner matrix or fusion frame and write it to a file.
    Construct {
        #[command(subcommand)]
        kind: Construct,
    },
    /// Load a FRAME, STEINER or FUSION file and certify it.
    Verify { path: PathBuf },
    /// Substitute flat building blocks into a Steiner matrix.
    Assemble(AssembleArgs),
    /// Exhaustively search a group for bidifference sets.
    Search {
        /// Group spec such as `7` or `2x4`.
        #[arg(long)]
        group: String,
        #[arg(long)]
        size: usize,
        /// difference, divisible, relative, partial or general.
        #[arg(long, default_value = "general")]
        kind: String,
        /// Fixed relative set, e.g. `{0,4}`.
        #[arg(long)]
        relative: Option<String>,
    },
    /// List consecutive prime-power pairs `(q, q+1)` with `q <= limit`.
    Primes {
        #[arg(long)]
        limit: u64,
    },
    /// Compare a family's published parameters with the computed ones.
    Params {
        #[arg(long)]
        corollary: String,
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        geometry: GeometryArgs,
    },
}

#[derive(Subcommand)]
enum Construct {
    /// Harmonic frame of a subset of a finite abelian group.
    Harmonic {
        #[arg(long)]
        group: String,
        /// Comma-separated elements, e.g. `1,2,4` or `(0,1),(1,1)`.
        #[arg(long)]
        subset: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Harmonic ETF from the Singer difference set of PG(2,q).
    Singer {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Harmonic BTF from the picket-fence relative difference set.
    Picket {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Harmonic `(n, n-1)` ETF from `{1, ..., n-1}` in `Z_n`.
    Simplectic {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Steiner matrix of the lines of AG(a,q) or PG(a,q).
    Steiner {
        #[arg(long, value_enum)]
        family: GeometryName,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 2)]
        a: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Point `F(t)` of the real `(6,3)` curve of biangular frames.
    Curve {
        /// Parameter `t >= 1`, or `etf` for the point where both angles meet.
        #[arg(long, allow_negative_numbers = true, value_parser = parse_curve_parameter)]
        t: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// The tight `(16,2,4)` fusion frame and its Plücker ETF.
    PluckerExample {
        /// Fusion frame output.
        #[arg(long)]
        out: PathBuf,
        /// Embedded frame output.
        #[arg(long)]
        frame_out: PathBuf,
    },
}

fn parse_curve_parameter(text: &str) -> std::result::Result<f64, String> {
    match text {
        "etf" => Ok(etf_parameter()),
        _ => text.parse().map_err(|e| format!("{e}")),
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GeometryName {
    Affine,
    Projective,
}

impl From<GeometryName> for Geometry {
    fn from(g: GeometryName) -> Self {
        match g {
            GeometryName::Affine => Geometry::Affine,
            GeometryName::Projective => Geometry::Projective,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeName {
    EtfBlocks,
    BtfBlocks,
}

#[derive(clap::Args)]
struct GeometryArgs {
    /// Geometry of the `steiner-etf` family.
    #[arg(long, value_enum, default_value = "projective")]
    geometry: GeometryName,
    /// Dimension of the `steiner-etf` geometry.
    #[arg(long, default_value_t = 2)]
    a: u32,
}

#[derive(clap::Args)]
struct AssembleArgs {
    /// STEINER file.
    #[arg(long, requires = "blocks", conflicts_with = "family")]
    steiner: Option<PathBuf>,
    /// FRAME files, one per Steiner column; a single file is reused for every column.
    #[arg(long, num_args = 1..)]
    blocks: Vec<PathBuf>,
    /// Skip the building-block hypotheses and only check shapes.
    #[arg(long)]
    force: bool,
    /// Block mode when it cannot be read off the first block.
    #[arg(long, value_enum)]
    mode: Option<ModeName>,
    /// Built-in family such as `affine-picket` or `steiner-etf`.
    #[arg(long, required_unless_present = "steiner", requires = "q")]
    family: Option<String>,
    #[arg(long)]
    q: Option<u64>,
    #[command(flatten)]
    geometry: GeometryArgs,
    #[arg(long)]
    out: PathBuf,
}

/// Failure of a command, mapped to an exit status.
enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_certification_failure() {
            Failure::Check(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

type Outcome = std::result::Result<Report, Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> std::result::Result<(), Failure> {
    std::fs::write(path, text)
        .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn predicted_check(
    report: &mut Report,
    predicted: Option<&[f64]>,
    empirical: &[f64],
    tol: &Tolerance,
) {
    match predicted {
        Some(p) => {
            report.push("predicted_angles", list(p));
            report.check(
                "predicted_angles",
                sets_match(p, empirical, tol.cluster_tol()),
                || format!("predicted {} but found {}", list(p), list(empirical)),
            );
        }
        None => report.push("predicted_angles", "-"),
    }
}

fn diffset_frame(name: &str, set: &BidifferenceSet, out: &Path, tol: Tolerance) -> Outcome {
    let cert = harmonic_from_diffset(set, tol)?;
    write(out, &save_frame(&cert.frame))?;
    let mut r = Report::default();
    r.push("construction", name);
    r.push("group", &set.group);
    r.push("set", set.group.format_set(&set.set));
    r.push("relative", set.group.format_set(&set.relative));
    r.push("kind", set.kind);
    r.push("params", set.params);
    report::frame(&mut r, &cert.frame);
    predicted_check(&mut r, cert.predicted.as_deref(), &cert.empirical, &tol);
    Ok(r)
}

fn steiner_report(r: &mut Report, prefix: &str, s: &SteinerMatrix) {
    r.push(&format!("{prefix}v"), s.v());
    r.push(&format!("{prefix}k"), s.k());
    r.push(&format!("{prefix}s"), s.s());
    r.push(&format!("{prefix}m"), s.m());
}

fn construct(kind: Construct, tol: Tolerance) -> Outcome {
    match kind {
        Construct::Harmonic { group, subset, out } => {
            let g = AbelianGroup::parse(&group)?;
            let set = g.parse_set(&subset)?;
            let frame = harmonic_frame(&g, &set, tol)?;
            write(&out, &save_frame(&frame))?;
            let mut r = Report::default();
            r.push("construction", "harmonic");
            r.push("group", &g);
            r.push("set", g.format_set(&set));
            report::frame(&mut r, &frame);
            Ok(r)
        }
        Construct::Singer { q, out } => diffset_frame("singer", &singer(q)?, &out, tol),
        Construct::Picket { q, out } => diffset_frame("picket", &picket_fence(q)?, &out, tol),
        Construct::Simplectic { n, out } => diffset_frame("simplectic", &simplectic(n)?, &out, tol),
        Construct::Steiner { family, q, a, out } => {
            let geometry = Geometry::from(family);
            let s = geometry.steiner(q, a)?;
            write(&out, &save_steiner(&s))?;
            let mut r = Report::default();
            r.push("construction", format!("{geometry}-steiner"));
            r.push("q", q);
            r.push("a", a);
            steiner_report(&mut r, "", &s);
            r.check("steiner", true, String::new);
            Ok(r)
        }
        Construct::Curve { t, out } => {
            let frame = curve_frame(t, tol)?;
            write(&out, &save_frame(&frame))?;
            let mut r = Report::default();
            r.push("construction", "curve");
            r.push("t", t);
            report::frame(&mut r, &frame);
            let empirical = frame.angle_report().map(|a| a.angles).unwrap_or_default();
            predicted_check(&mut r, Some(&curve_angles(t, &tol)?), &empirical, &tol);
            Ok(r)
        }
        Construct::PluckerExample { out, frame_out } => {
            let (ff, frame) = build_plucker_example(tol)?;
            write(&out, &save_fusion(&ff))?;
            write(&frame_out, &save_frame(&frame))?;
            let mut r = Report::default();
            r.push("construction", "plucker-example");
            report::fusion(&mut r, &ff);
            report::frame(&mut r, &frame);
            let plucker = is_plucker_etf(&frame, &ff)?;
            r.push("plucker_etf", plucker);
            r.check("plucker_etf", plucker, || {
                "embedded frame is not the lifted Plücker image".into()
            });
            Ok(r)
        }
    }
}

fn verify(path: &Path, tol: Tolerance) -> Outcome {
    let text = read(path)?;
    let mut r = Report::default();
    match load_document(&text, tol)? {
        Document::Frame(frame) => {
            r.push("file", "FRAME");
            report::frame(&mut r, &frame);
        }
        Document::Steiner(s) => {
            r.push("file", "STEINER");
            steiner_report(&mut r, "", &s);
            r.check("steiner", true, String::new);
        }
        Document::Fusion(ff) => {
            r.push("file", "FUSION");
            r.check("projections", true, String::new);
            report::fusion(&mut r, &ff);
        }
    }
    Ok(r)
}

/// Published parameters go under `<prefix>n`, `<prefix>m`, `<prefix>angles`.
fn corollary_lines(r: &mut Report, prefix: &str, c: &CorollaryReport) {
    r.push("family", c.family);
    r.push("q", c.q);
    r.push(&format!("{prefix}n"), c.claimed.n);
    r.push(&format!("{prefix}m"), c.claimed.m);
    r.push(&format!("{prefix}angles"), list(&c.claimed.angles));
    match &c.computed {
        Some(p) => {
            r.push("computed_n", p.n);
            r.push("computed_m", p.m);
            r.push("computed_angles", list(&p.angles));
        }
        None => {
            for key in ["computed_n", "computed_m", "computed_angles"] {
                r.push(key, "-");
            }
        }
    }
    r.push("consistent", c.consistent);
    for note in &c.notes {
        r.push("note", note);
    }
}

fn assembled_lines(r: &mut Report, out: &AssembledFrame, tol: &Tolerance) {
    report::frame(r, &out.frame);
    r.push("empirical_angles", list(&out.empirical));
    predicted_check(r, out.predicted.as_deref(), &out.empirical, tol);
}

fn load_blocks(
    paths: &[PathBuf],
    v: usize,
    tol: Tolerance,
) -> std::result::Result<Vec<Frame>, Failure> {
    let mut blocks = paths
        .iter()
        .map(|p| Ok(load_frame(&read(p)?, tol)?))
        .collect::<std::result::Result<Vec<_>, Failure>>()?;
    if blocks.len() == 1 {
        blocks = vec![blocks.remove(0); v];
    }
    Ok(blocks)
}

fn assemble_cmd(args: AssembleArgs, tol: Tolerance) -> Outcome {
    let mut r = Report::default();
    let assembled = if let Some(name) = &args.family {
        let q = args.q.expect("clap requires --q with --family");
        let family = Family::parse(name, args.geometry.geometry.into(), args.geometry.a)?;
        let (out, corollary) = build_family(family, q, tol)?;
        corollary_lines(&mut r, "claimed_", &corollary);
        out
    } else {
        let path = args
            .steiner
            .as_ref()
            .expect("clap requires --steiner or --family");
        let steiner = load_steiner(&read(path)?)?;
        let blocks = load_blocks(&args.blocks, steiner.v(), tol)?;
        let mode = match (args.mode, BlockMode::detect(&blocks[0])) {
            (Some(ModeName::EtfBlocks), _) => BlockMode::EtfBlocks,
            (Some(ModeName::BtfBlocks), _) => BlockMode::BtfBlocks,
            (None, Some(mode)) => mode,
            (None, None) => {
                return Err(Failure::Usage(format!(
                    "block 0 is {}, neither ETF nor BTF; pass --mode",
                    blocks[0].classify()
                )))
            }
        };
        let spec = if args.force {
            AssemblySpec::forced(steiner, blocks, mode)?
        } else {
            AssemblySpec::new(steiner, blocks, mode)?
        };
        r.push("mode", mode);
        r.push("forced", spec.is_forced());
        steiner_report(&mut r, "steiner_", spec.steiner());
        r.push("t", spec.t());
        assemble(&spec)?
    };
    write(&args.out, &save_frame(&assembled.frame))?;
    assembled_lines(&mut r, &assembled, &tol);
    Ok(r)
}

fn search_cmd(
    group: &str,
    size: usize,
    kind: &str,
    relative: Option<&str>,
) -> std::result::Result<String, Failure> {
    let g = AbelianGroup::parse(group)?;
    let kind = Kind::parse(kind)?;
    let relative = relative.map(|a| g.parse_set(a)).transpose()?;
    let hits = search(&g, size, kind, relative.as_deref())?;
    let mut out = format!("hits={}\n", hits.len());
    for h in &hits {
        out.push_str(&format!(
            "set={} relative={} kind={} params={}\n",
            g.format_set(&h.set),
            g.format_set(&h.relative),
            h.kind,
            h.params
        ));
    }
    Ok(out)
}

fn primes_cmd(limit: u64) -> std::result::Result<String, Failure> {
    let mut out = String::new();
    for (q, class) in prime_power_pairs(limit)? {
        out.push_str(&format!("{q} {} {class}\n", q + 1));
    }
    Ok(out)
}

fn run(cli: Cli) -> std::result::Result<String, Failure> {
    let tol = Tolerance::new(cli.tol, cli.cluster_tol)?;
    let report = match cli.command {
        Command::Construct { kind } => construct(kind, tol)?,
        Command::Verify { path } => verify(&path, tol)?,
        Command::Assemble(args) => assemble_cmd(args, tol)?,
        Command::Search {
            group,
            size,
            kind,
            relative,
        } => return search_cmd(&group, size, &kind, relative.as_deref()),
        Command::Primes { limit } => return primes_cmd(limit),
        Command::Params {
            corollary,
            q,
            geometry,
        } => {
            let family = Family::parse(&corollary, geometry.geometry.into(), geometry.a)?;
            let mut r = Report::default();
            corollary_lines(&mut r, "", &corollary_params(family, q)?);
            return Ok(r.render_values());
        }
    };
    let text = report.render();
    if let Some((name, witness)) = report.failed().next() {
        print!("{text}");
        return Err(Failure::Check(format!("check {name} failed: {witness}")));
    }
    Ok(text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
