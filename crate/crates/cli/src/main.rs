use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use canendo::coalgebra::PoissonPackage;
use canendo::endo::{verify_integrability, verify_structural, verify_theorem21};
use canendo::flow::{integrate, FlowSpec, Method};
use canendo::lax::{lax_field, verify_closed_forms, verify_homomorphism, verify_jacobi_deformed};
use canendo::random::RandomSource;
use canendo::report::{Status, VerificationReport};
use canendo::{
    catalog, load_algebra, parse_field, parse_params, CanonicalPackage, Error, LieAlgebra, Params,
};

#[derive(Parser)]
#[command(
    name = "canendo",
    version,
    about = "Canonical endomorphism field workbench"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List catalog algebras and their basis conventions
    List,
    /// Check identities of the canonical field; prints a JSON report
    Verify {
        #[command(flatten)]
        source: Source,
        /// `all`, `structural`, or a single identity name
        #[arg(long, default_value = "all")]
        which: String,
        #[command(flatten)]
        common: Common,
    },
    /// Print the Casimir polynomials I_k = Tr A^k
    Casimir {
        #[command(flatten)]
        source: Source,
        /// Highest power (default: the dimension)
        #[arg(long)]
        max_k: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Deformed bracket {B,C} of two potentials
    Bracket {
        #[command(flatten)]
        source: Source,
        #[arg(long = "b", value_name = "FIELD")]
        b: String,
        #[arg(long = "c", value_name = "FIELD")]
        c: String,
        #[command(flatten)]
        common: Common,
    },
    /// Integrate the Lax field X_B and write a CSV trajectory
    Flow {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_name = "FIELD")]
        potential: String,
        /// Initial state, comma separated
        #[arg(long, allow_negative_numbers = true, value_delimiter = ',')]
        x0: Vec<f64>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t0: f64,
        #[arg(long, allow_negative_numbers = true)]
        t1: f64,
        #[arg(long, default_value_t = 1e-3, allow_negative_numbers = true)]
        dt: f64,
        #[arg(long, default_value = "rk4")]
        method: String,
        /// Number of Casimirs logged (default: the dimension)
        #[arg(long)]
        max_k: Option<usize>,
        #[arg(long, default_value_t = 1)]
        sample_every: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Catalog name (so3, sut4, ...) or path to a JSON document
    #[arg(value_name = "ALGEBRA")]
    spec: Option<String>,
    /// Catalog name
    #[arg(long = "algebra", value_name = "NAME")]
    name: Option<String>,
    /// JSON algebra document
    #[arg(long, value_name = "PATH")]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct Common {
    /// Write output here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for randomized checks
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Parameter bindings, e.g. a=1,b=-2/3
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    param: String,
}

enum Failure {
    /// Exit 1: a check failed or the computation could not complete.
    Verification(String),
    /// Exit 2.
    Usage(String),
    /// Exit 3.
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Verification(m) | Failure::Usage(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::JacobiViolation { .. } | Error::NonFinite { .. } => {
                Failure::Verification(e.to_string())
            }
            other => Failure::Usage(other.to_string()),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn io_err(path: &Path, e: io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn read_document(path: &Path) -> CliResult<LieAlgebra> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    Ok(load_algebra(&text)?)
}

impl Source {
    fn load(&self) -> CliResult<LieAlgebra> {
        if let Some(path) = &self.file {
            return read_document(path);
        }
        if let Some(name) = &self.name {
            return Ok(catalog::lookup(name)?);
        }
        let spec = self.spec.as_deref().expect("clap enforces one source");
        let path = Path::new(spec);
        if path.is_file() || spec.ends_with(".json") {
            read_document(path)
        } else {
            Ok(catalog::lookup(spec)?)
        }
    }
}

impl Common {
    fn params(&self) -> CliResult<Params> {
        parse_params(&self.param).map_err(|e| Failure::Usage(format!("--param: {e}")))
    }

    fn emit(&self, text: &str) -> CliResult<()> {
        match &self.out {
            Some(path) => fs::write(path, text).map_err(|e| io_err(path, e)),
            None => io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Io(format!("stdout: {e}"))),
        }
    }
}

fn cmd_list() -> String {
    let mut out = String::from("families:\n");
    for fam in catalog::families() {
        let label = match (fam.sizes.first(), fam.sizes.last()) {
            (Some(lo), Some(hi)) => format!("{} n≤{hi} (from n={lo})", fam.pattern),
            _ => fam.pattern.to_string(),
        };
        out.push_str(&format!("  {label}: {}\n", fam.basis));
    }
    out.push_str("aliases: solvable, heisenberg, sl, sut<n> = strict_upper_triangular<n>\n");
    out.push_str("verification suite:\n");
    for alg in catalog::standard_suite() {
        out.push_str(&format!("  {} (dim {})\n", alg.name(), alg.dim()));
    }
    out
}

const SAMPLE_PAIRS: usize = 3;
const SAMPLE_TRIPLES: usize = 2;

const STRUCTURAL: &[&str] = &[
    "liouville-derivative",
    "liouville-kernel",
    "adjoint-invariance",
    "trace-square-killing",
    "trace-characteristic",
    "killing-skew",
    "casimir-annihilated",
    "nijenhuis-on-constants",
    "representation-homomorphism",
    "representation-constant",
];

const OTHER: &[&str] = &[
    "nijenhuis-canonical",
    "bracket-constants",
    "bracket-fundamental-constant",
    "bracket-fundamental-pair",
    "lax-homomorphism",
    "deformed-jacobi",
    "poisson-jacobi",
];

fn merge(id: &str, statement: &str, reports: Vec<VerificationReport>) -> VerificationReport {
    let witness: Vec<String> = reports
        .into_iter()
        .enumerate()
        .filter(|(_, r)| !r.passed())
        .flat_map(|(s, r)| {
            r.witness
                .unwrap_or_default()
                .into_iter()
                .map(move |w| format!("sample {s}: {w}"))
        })
        .collect();
    VerificationReport::from_residuals(id, statement, witness)
}

#[derive(Clone, Copy)]
enum Group {
    Nijenhuis,
    Structural,
    ClosedForms,
    Homomorphism,
    Jacobi,
    Poisson,
    Integrability,
}

fn run_group(
    group: Group,
    pkg: &CanonicalPackage,
    seed: u64,
) -> CliResult<Vec<VerificationReport>> {
    let n = pkg.dim();
    let mut rs = RandomSource::new(seed);
    Ok(match group {
        Group::Nijenhuis => vec![verify_theorem21(pkg)],
        Group::Structural => verify_structural(pkg),
        Group::ClosedForms => verify_closed_forms(pkg)?,
        Group::Homomorphism => {
            let reports = (0..SAMPLE_PAIRS)
                .map(|_| verify_homomorphism(pkg, &rs.field(n), &rs.field(n)))
                .collect::<Result<Vec<_>, _>>()?;
            vec![merge("lax-homomorphism", "[X_B,X_C] = X_{B,C}", reports)]
        }
        Group::Jacobi => {
            let reports = (0..SAMPLE_TRIPLES)
                .map(|_| verify_jacobi_deformed(pkg, &rs.field(n), &rs.field(n), &rs.field(n)))
                .collect::<Result<Vec<_>, _>>()?;
            vec![merge(
                "deformed-jacobi",
                "{B,{C,D}} + {C,{D,B}} + {D,{B,C}} = 0",
                reports,
            )]
        }
        Group::Poisson => {
            let pp = PoissonPackage::new(pkg.algebra.clone());
            let reports = (0..SAMPLE_PAIRS)
                .map(|_| pp.verify_poisson_jacobi(&rs.poly(n), &rs.poly(n), &rs.poly(n)))
                .collect::<Result<Vec<_>, _>>()?;
            vec![merge(
                "poisson-jacobi",
                "{f,{g,h}} + {g,{h,f}} + {h,{f,g}} = 0",
                reports,
            )]
        }
        Group::Integrability => vec![verify_integrability(&pkg.algebra)],
    })
}

fn group_of(identity: &str) -> Option<Group> {
    Some(match identity {
        "nijenhuis-canonical" => Group::Nijenhuis,
        s if STRUCTURAL.contains(&s) => Group::Structural,
        "bracket-constants" | "bracket-fundamental-constant" | "bracket-fundamental-pair" => {
            Group::ClosedForms
        }
        "lax-homomorphism" => Group::Homomorphism,
        "deformed-jacobi" => Group::Jacobi,
        "poisson-jacobi" => Group::Poisson,
        "integrability" => Group::Integrability,
        _ => return None,
    })
}

fn verify_reports(alg: LieAlgebra, which: &str, seed: u64) -> CliResult<Vec<VerificationReport>> {
    let selected: Vec<&str> = match which {
        "all" => OTHER[..1]
            .iter()
            .chain(STRUCTURAL)
            .chain(&OTHER[1..])
            .copied()
            .collect(),
        "structural" => STRUCTURAL.to_vec(),
        name if group_of(name).is_some() => vec![name],
        other => {
            return Err(Failure::Usage(format!(
                "unknown identity {other:?}; expected all, structural, integrability, {}, {}",
                OTHER.join(", "),
                STRUCTURAL.join(", ")
            )))
        }
    };
    let mut groups: Vec<Group> = Vec::new();
    for name in &selected {
        let g = group_of(name).expect("validated above");
        if !groups
            .iter()
            .any(|h| std::mem::discriminant(h) == std::mem::discriminant(&g))
        {
            groups.push(g);
        }
    }
    let pkg = CanonicalPackage::from_arc(Arc::new(alg));
    let results = groups
        .par_iter()
        .map(|&g| run_group(g, &pkg, seed))
        .collect::<CliResult<Vec<_>>>()?;
    let all: Vec<VerificationReport> = results.into_iter().flatten().collect();
    Ok(selected
        .iter()
        .filter_map(|name| all.iter().find(|r| r.identity == *name).cloned())
        .collect())
}

fn report_json(reports: &[VerificationReport]) -> String {
    let mut s = serde_json::to_string_pretty(reports).expect("reports serialize");
    s.push('\n');
    s
}

fn cmd_verify(source: &Source, which: &str, common: &Common) -> CliResult<()> {
    let alg = match source.load() {
        Err(Failure::Verification(msg)) => {
            // A document violating Jacobi is reported like any other failed identity.
            let r = VerificationReport::fail(
                "structure-jacobi",
                "[[e_i,e_j],e_l] + cyclic = 0",
                vec![msg.clone()],
            );
            common.emit(&report_json(&[r]))?;
            return Err(Failure::Verification(msg));
        }
        other => other?,
    };
    let reports = verify_reports(alg, which, common.seed)?;
    common.emit(&report_json(&reports))?;
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| r.status != Status::Pass)
        .map(|r| r.identity.as_str())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "failed: {}",
            failed.join(", ")
        )))
    }
}

fn cmd_casimir(source: &Source, max_k: Option<usize>, common: &Common) -> CliResult<()> {
    let pkg = CanonicalPackage::build(source.load()?);
    let k = max_k.unwrap_or(pkg.dim());
    let text: String = pkg
        .casimirs(k)
        .polys
        .iter()
        .enumerate()
        .map(|(i, p)| format!("I{} = {p}\n", i + 1))
        .collect();
    common.emit(&text)
}

fn parse_potential(
    label: &str,
    text: &str,
    n: usize,
    params: &Params,
) -> CliResult<canendo::PolyVectorField> {
    parse_field(text, n, params).map_err(|e| Failure::Usage(format!("{label}: {e}")))
}

fn cmd_bracket(source: &Source, b: &str, c: &str, common: &Common) -> CliResult<()> {
    let pkg = CanonicalPackage::build(source.load()?);
    let params = common.params()?;
    let n = pkg.dim();
    let b = parse_potential("--b", b, n, &params)?;
    let c = parse_potential("--c", c, n, &params)?;
    let bc = canendo::deformed_bracket(&pkg, &b, &c)?;
    let check = verify_homomorphism(&pkg, &b, &c)?;
    let mut text = format!("{{B,C}} = {bc}\n");
    text.push_str(&format!(
        "[X_B,X_C] = X_{{B,C}}: {}\n",
        if check.passed() { "pass" } else { "fail" }
    ));
    for w in check.witness.iter().flatten() {
        text.push_str(&format!("  {w}\n"));
    }
    common.emit(&text)?;
    if check.passed() {
        Ok(())
    } else {
        Err(Failure::Verification("homomorphism check failed".into()))
    }
}

struct FlowArgs<'a> {
    potential: &'a str,
    x0: &'a [f64],
    t0: f64,
    t1: f64,
    dt: f64,
    method: &'a str,
    max_k: Option<usize>,
    sample_every: usize,
}

fn cmd_flow(source: &Source, args: FlowArgs<'_>, common: &Common) -> CliResult<()> {
    let method: Method = args.method.parse()?;
    if args.sample_every == 0 {
        return Err(Failure::Usage("--sample-every must be at least 1".into()));
    }
    let alg = source.load()?;
    let n = alg.dim();
    let params = common.params()?;
    let b = parse_potential("--potential", args.potential, n, &params)?;
    // Validate the numeric options before the symbolic precomputation.
    FlowSpec::new(
        canendo::PolyVectorField::zero(n),
        args.x0.to_vec(),
        args.t0,
        args.t1,
        args.dt,
        method,
    )?;
    let pkg = CanonicalPackage::build(alg);
    let system = lax_field(&pkg, &b)?;
    let k = args.max_k.unwrap_or(n);
    let spec = FlowSpec::for_system(
        &system,
        k,
        args.x0.to_vec(),
        args.t0,
        args.t1,
        args.dt,
        method,
    )?;

    let (traj, blow_up) = match integrate(&spec, args.sample_every) {
        Ok(t) => (t, None),
        Err(Error::NonFinite {
            t,
            accepted,
            partial,
        }) => (
            *partial,
            Some(format!(
                "non-finite state at t = {t} after {accepted} samples"
            )),
        ),
        Err(e) => return Err(e.into()),
    };
    let mut csv = Vec::new();
    traj.write_csv(&mut csv).expect("writing to memory");
    common.emit(std::str::from_utf8(&csv).expect("ascii"))?;

    let mut err = io::stderr().lock();
    for i in 0..k {
        let _ = writeln!(
            err,
            "max drift I{} = {:.6e}",
            i + 1,
            traj.invariant_drift(i)
        );
    }
    let _ = writeln!(
        err,
        "max spectral deviation = {:.6e}",
        traj.max_spectral_deviation()
    );
    match blow_up {
        Some(msg) => Err(Failure::Verification(msg)),
        None => Ok(()),
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::List => {
            print!("{}", cmd_list());
            Ok(())
        }
        Command::Verify {
            source,
            which,
            common,
        } => cmd_verify(&source, &which, &common),
        Command::Casimir {
            source,
            max_k,
            common,
        } => cmd_casimir(&source, max_k, &common),
        Command::Bracket {
            source,
            b,
            c,
            common,
        } => cmd_bracket(&source, &b, &c, &common),
        Command::Flow {
            source,
            potential,
            x0,
            t0,
            t1,
            dt,
            method,
            max_k,
            sample_every,
            common,
        } => cmd_flow(
            &source,
            FlowArgs {
                potential: &potential,
                x0: &x0,
                t0,
                t1,
                dt,
                method: &method,
                max_k,
                sample_every,
            },
            &common,
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
