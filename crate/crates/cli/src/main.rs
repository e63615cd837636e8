use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use flagcurv::exterior::SymOp;
use flagcurv::forms::{basis_form, form_csv, form_kinds, invariant_form};
use flagcurv::moduli::{self, Certificate, CertificateKind, DEFAULT_TOL};
use flagcurv::scan::{region_svg, scan};
use flagcurv::{closed_form_blocks, curvature_operator, omega0, selftest};
use flagcurv::{FlagAlgebra, FlagError, FlagModel, InvariantCoeffs, MetricParams};

const TOL_ENV: &str = "FLAGCURV_TOL";
const CROSSCHECK_LIMIT: f64 = 1e-8;

#[derive(Parser)]
#[command(name = "flagcurv", version, about = "Curvature of homogeneous metrics on the Wallach flag manifolds")]
struct Cli {
    /// Eigenvalue tolerance; overrides FLAGCURV_TOL (default 1e-9)
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one metric g_s
    Classify {
        #[arg(long)]
        model: FlagModel,
        /// s1,s2,s3 (any positive scale)
        #[arg(long, value_parser = parse_triple)]
        s: [f64; 3],
        /// Write the certificate JSON here
        #[arg(long)]
        certificate: Option<PathBuf>,
        /// Print the classification as JSON
        #[arg(long)]
        json: bool,
    },
    /// Raster the slice s1+s2+s3=1
    Scan {
        #[arg(long, default_value = "W24")]
        model: FlagModel,
        #[arg(long, default_value_t = 200)]
        resolution: u32,
        /// CSV output; stdout when neither --csv nor --svg is given
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Print the closed-form blocks of R + omega
    Blocks {
        #[arg(long)]
        model: FlagModel,
        #[arg(long, value_parser = parse_triple)]
        s: [f64; 3],
        /// Coefficients a1,a2,a3 of the invariant 4-form
        #[arg(long, value_parser = parse_triple, conflicts_with = "omega0")]
        a: Option<[f64; 3]>,
        /// Coefficients b1,b2,b3 (W12 only)
        #[arg(long, value_parser = parse_triple, conflicts_with = "omega0")]
        b: Option<[f64; 3]>,
        /// Use the form omega_0 that makes the third block vanish
        #[arg(long)]
        omega0: bool,
        #[arg(long)]
        json: bool,
        /// Dump the full operator R + omega as CSV (row, col, value)
        #[arg(long)]
        operator_csv: Option<PathBuf>,
        /// Dump the structure constants of g as CSV
        #[arg(long)]
        structure_csv: Option<PathBuf>,
        /// Dump the invariant basis 4-forms as CSV
        #[arg(long)]
        forms_csv: Option<PathBuf>,
    },
    /// Compare the first-principles operator with the closed-form blocks
    Crosscheck {
        #[arg(long)]
        model: FlagModel,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Produce or verify a certificate
    Certify {
        #[arg(long, required_unless_present = "verify")]
        model: Option<FlagModel>,
        #[arg(long, value_parser = parse_triple, required_unless_present = "verify")]
        s: Option<[f64; 3]>,
        #[arg(long, value_enum, default_value_t = Kind::Strongest)]
        kind: Kind,
        /// Output path; stdout when absent
        #[arg(long)]
        out: Option<PathBuf>,
        /// Re-check an existing certificate instead
        #[arg(long, conflicts_with_all = ["model", "s", "out"])]
        verify: Option<PathBuf>,
    },
    /// Run the invariant battery
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Strongest,
    Pos,
    Nonneg,
}

enum Failure {
    /// Bad input: exit 2.
    Domain(String),
    /// The command ran but the claim does not hold, or I/O failed: exit 1.
    Failed(String),
}

impl From<FlagError> for Failure {
    fn from(e: FlagError) -> Self {
        match e {
            FlagError::Domain(_)
            | FlagError::Parse(_)
            | FlagError::NoBlocks(_)
            | FlagError::Dimension { .. }
            | FlagError::ModelMismatch { .. }
            | FlagError::TagMismatch { .. } => Failure::Domain(e.to_string()),
            _ => Failure::Failed(e.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn parse_triple(text: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got {text:?}"));
    }
    let mut out = [0.0; 3];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p.parse().map_err(|_| format!("not a number: {p:?}"))?;
    }
    Ok(out)
}

fn resolve_tol(flag: Option<f64>) -> Result<f64, Failure> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var(TOL_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| Failure::Domain(format!("{TOL_ENV}={v:?} is not a number")))?,
            Err(_) => DEFAULT_TOL,
        },
    };
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Failure::Domain(format!("tolerance must be a nonnegative number, got {tol}")));
    }
    Ok(tol)
}

fn write_file(path: &Path, text: &str) -> CmdResult {
    fs::write(path, text).map_err(|e| Failure::Failed(format!("{}: {e}", path.display())))
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",")
}

fn classify(model: FlagModel, s: [f64; 3], certificate: Option<PathBuf>, json: bool, tol: f64) -> CmdResult {
    let s = MetricParams::new(s)?;
    let c = moduli::classify(model, &s, tol)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&c).expect("classification serializes"));
    } else {
        println!("model={}", model.name());
        println!("s={}", join(&c.s));
        println!("p={}", join(&c.p_values));
        println!("sec_nonneg={}", c.flags.sec_nonneg);
        println!("sec_pos={}", c.flags.sec_pos);
        println!("strongly_nonneg={}", c.flags.strongly_nonneg);
        println!("strongly_pos={}", c.flags.strongly_pos);
        println!("reason={}", c.reason.as_str());
        let subs: Vec<String> = c.submersions.iter().map(usize::to_string).collect();
        println!("equal_pairs={}", subs.join(","));
        println!("tie_distances={}", join(&c.tie_distances));
        if let Some(cert) = &c.certificate {
            println!("certificate_min_eigenvalue={:e}", cert.min_eigenvalue);
        }
        println!("certified={}", c.certified);
    }
    if let Some(path) = certificate {
        match &c.certificate {
            Some(cert) => write_file(&path, &cert.to_json())?,
            None => eprintln!("no certificate: {} is not strongly nonnegative", model.name()),
        }
    }
    Ok(())
}

fn cmd_scan(model: FlagModel, resolution: u32, csv: Option<PathBuf>, svg: Option<PathBuf>) -> CmdResult {
    if resolution < 2 {
        return Err(Failure::Domain(format!("resolution must be at least 2, got {resolution}")));
    }
    let sc = scan(model, resolution)?;
    if csv.is_none() && svg.is_none() {
        print!("{}", sc.to_csv());
        return Ok(());
    }
    if let Some(path) = csv {
        write_file(&path, &sc.to_csv())?;
    }
    if let Some(path) = svg {
        write_file(&path, &region_svg(model))?;
    }
    println!(
        "{} points, {} in the region, symmetry defects {}",
        sc.points.len(),
        sc.count_region(),
        sc.symmetry_defects()
    );
    Ok(())
}

struct BlocksArgs {
    model: FlagModel,
    s: [f64; 3],
    a: Option<[f64; 3]>,
    b: Option<[f64; 3]>,
    omega0: bool,
    json: bool,
    operator_csv: Option<PathBuf>,
    structure_csv: Option<PathBuf>,
    forms_csv: Option<PathBuf>,
}

fn blocks(args: BlocksArgs) -> CmdResult {
    let model = args.model;
    let s = MetricParams::new(args.s)?;
    let coeffs = if args.omega0 {
        omega0(&s)
    } else {
        InvariantCoeffs::new(args.a.unwrap_or([0.0; 3]), args.b.unwrap_or([0.0; 3]))
    };
    coeffs.check(model)?;
    if let Some(path) = &args.structure_csv {
        write_file(path, &FlagAlgebra::get(model).structure_csv())?;
    }
    if let Some(path) = &args.forms_csv {
        let mut text = String::from("form,a,b,c,d,value\n");
        let (first, second) = form_kinds(model);
        for kind in [first, second].into_iter().flatten() {
            for r in 0..3 {
                let body = form_csv(model, &basis_form(model, kind, r)?);
                for line in body.lines().skip(1) {
                    text.push_str(&format!("{kind}_{},{line}\n", r + 1));
                }
            }
        }
        write_file(path, &text)?;
    }
    if let Some(path) = &args.operator_csv {
        let op: SymOp = curvature_operator(model, &s).modified(&invariant_form(model, &coeffs)?)?;
        let alg = FlagAlgebra::get(model);
        let labels: Vec<String> = (0..model.dim_m()).map(|a| alg.label(a)).collect();
        write_file(path, &op.to_csv(&labels))?;
    }
    let b = closed_form_blocks(model, &s, &coeffs)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&b.to_json()).expect("blocks serialize"));
    } else {
        println!("model={} s={} a={} b={}", model.name(), join(&s.s()), join(&coeffs.a), join(&coeffs.b));
        print!("{b}");
        println!("block_minima={}", join(&b.block_minima()));
    }
    Ok(())
}

fn crosscheck(model: FlagModel, samples: usize, seed: u64) -> CmdResult {
    let r = selftest::crosscheck(model, samples, seed)?;
    println!("model={} samples={} seed={}", model.name(), samples, seed);
    println!("max_block_deviation={:e}", r.block_deviation);
    println!("max_off_block={:e}", r.off_block);
    println!("max_spectrum_deviation={:e}", r.spectrum_deviation);
    if r.worst() > CROSSCHECK_LIMIT {
        return Err(Failure::Failed(format!("deviation {:e} exceeds {CROSSCHECK_LIMIT:e}", r.worst())));
    }
    Ok(())
}

fn certify(model: FlagModel, s: [f64; 3], kind: Kind, out: Option<PathBuf>, tol: f64) -> CmdResult {
    let s = MetricParams::new(s)?;
    let cert = match kind {
        Kind::Pos => moduli::certify_strongly_pos(model, &s, tol)?,
        Kind::Nonneg => moduli::certify_strongly_nonneg(model, &s, tol)?,
        Kind::Strongest => match moduli::classify(model, &s, tol)?.certificate {
            Some(c) => c,
            None => return Err(Failure::Failed(format!("{} at {:?} is not strongly nonnegative", model.name(), s.s()))),
        },
    };
    match out {
        Some(path) => {
            write_file(&path, &cert.to_json())?;
            println!("wrote {} certificate to {}", kind_name(cert.kind), path.display());
        }
        None => println!("{}", cert.to_json()),
    }
    Ok(())
}

fn kind_name(k: CertificateKind) -> &'static str {
    match k {
        CertificateKind::StronglyPos => "strongly_pos",
        CertificateKind::StronglyNonneg => "strongly_nonneg",
    }
}

fn verify(path: &Path, tol: f64) -> CmdResult {
    let text = fs::read_to_string(path).map_err(|e| Failure::Failed(format!("{}: {e}", path.display())))?;
    let cert = Certificate::from_json(&text)?;
    let v = cert.verify(tol)?;
    println!("kind={}", kind_name(cert.kind));
    println!("min_eigenvalue={:e}", v.min_eigenvalue);
    println!("cholesky={}", v.cholesky_ok);
    println!("block_deviation={:e}", v.block_deviation);
    println!("valid={}", v.valid);
    if v.valid {
        Ok(())
    } else {
        Err(Failure::Failed("certificate does not verify".into()))
    }
}

fn run_selftest() -> CmdResult {
    let results = selftest::run();
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    for r in &results {
        let mark = if r.passed { "PASS" } else { "FAIL" };
        println!("{mark}  {:<width$}  {}", r.name, r.detail);
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        return Err(Failure::Failed(format!("{failed} check(s) failed")));
    }
    Ok(())
}

fn run(cli: Cli) -> CmdResult {
    let tol = resolve_tol(cli.tol)?;
    match cli.command {
        Command::Classify {
            model,
            s,
            certificate,
            json,
        } => classify(model, s, certificate, json, tol),
        Command::Scan {
            model,
            resolution,
            csv,
            svg,
        } => cmd_scan(model, resolution, csv, svg),
        Command::Blocks {
            model,
            s,
            a,
            b,
            omega0,
            json,
            operator_csv,
            structure_csv,
            forms_csv,
        } => blocks(BlocksArgs {
            model,
            s,
            a,
            b,
            omega0,
            json,
            operator_csv,
            structure_csv,
            forms_csv,
        }),
        Command::Crosscheck { model, samples, seed } => crosscheck(model, samples, seed),
        Command::Certify {
            model,
            s,
            kind,
            out,
            verify: check,
        } => match (check, model, s) {
            (Some(path), _, _) => verify(&path, tol),
            (None, Some(model), Some(s)) => certify(model, s, kind, out, tol),
            _ => Err(Failure::Domain("certify needs --model and --s, or --verify".into())),
        },
        Command::Selftest => run_selftest(),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
