//! `pgn`: command-line front end for the pgn library.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use pgn::arith::{Point, Rational};
use pgn::chains::{
    canonicalize, chain_from_system, densify_auto, densify_path, extract_paths, join_chains, system_from_chain,
    validate_chain, ClosedChain, ElementaryPath,
};
use pgn::deform::{extend_to, extension_drift, selfsimilarize, selfsimilarize_general, translate_by, translation_drift};
use pgn::exponents::{f_set, mu_t, six_exponents, LinearMap};
use pgn::plot::{chain_svg, default_qmax, system_csv, system_svg};
use pgn::random::random_periodic_canvas3;
use pgn::spectrum::{
    construct_path_lower, construct_path_upper, membership, realize, sample_spectrum, samples_csv, SpectrumPoint6,
};
use pgn::{Canvas, Error, NSystem};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "pgn", version, about = "Exact n-systems, their exponents, and the six-exponent spectrum")]
struct Cli {
    /// Worker threads for sampling verbs.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args)]
struct Out {
    /// Write the primary output here instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Verb {
    /// Check a canvas or system JSON file.
    Validate {
        file: PathBuf,
        /// Require k < l at every canvas transition.
        #[arg(long)]
        strict: bool,
    },
    /// Compile a canvas into a system.
    Build {
        canvas: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Evaluate a system at q.
    Eval {
        system: PathBuf,
        #[arg(long)]
        q: String,
    },
    /// Six exponents of a self-similar 3-system, or mu_T for a given linear map.
    Exponents {
        system: PathBuf,
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Raise the endpoint of a finite rigid system to a target.
    Extend {
        system: PathBuf,
        /// Comma-separated rationals.
        #[arg(long)]
        target: String,
        /// Write the verification report here.
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        out: Out,
    },
    /// Translate a finite rigid system by b along (1,...,1).
    Translate {
        system: PathBuf,
        #[arg(long)]
        b: String,
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        out: Out,
    },
    /// Self-similar system with F-set within eps of that of the input.
    Selfsim {
        system: PathBuf,
        #[arg(long)]
        eps: String,
        /// Skip the shortcut for inputs that already have an integer period ratio.
        #[arg(long)]
        general: bool,
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        out: Out,
    },
    /// Closed chains and elementary paths.
    Chain {
        #[command(subcommand)]
        cmd: ChainCmd,
    },
    /// The six-exponent spectrum.
    Spectrum {
        #[command(subcommand)]
        cmd: SpectrumCmd,
    },
    /// SVG (and optionally CSV) of a system, or of a chain in the triangle.
    Plot {
        file: PathBuf,
        #[arg(long)]
        qmax: Option<String>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        out: Out,
    },
    /// Random strict periodic 3-canvases.
    Sample {
        #[arg(short = 'n', long = "count", default_value_t = 10)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum ChainCmd {
    /// Check the closed-chain conditions.
    Validate { chain: PathBuf },
    /// Chain of a self-similar 3-system.
    FromSystem {
        system: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Self-similar system realizing a chain.
    ToSystem {
        chain: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Chain whose hull is the hull of both inputs.
    Join {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Elementary paths of a chain.
    Extract { chain: PathBuf },
    /// Closed chain with the same hull as an elementary path.
    Densify {
        path: PathBuf,
        #[arg(long)]
        gap: Option<String>,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        h: usize,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum SpectrumCmd {
    /// Membership report; exit 1 for non-members.
    Check { point: PathBuf },
    /// The lower and upper elementary paths.
    Construct { point: PathBuf },
    /// A system with the given exponents.
    Realize {
        point: PathBuf,
        #[arg(long, default_value = "1/1000")]
        tol: String,
        #[command(flatten)]
        out: Out,
    },
    /// Seeded CSV of sampled points.
    Sample {
        #[arg(short = 'n', long = "count", default_value_t = 1000)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: Out,
    },
}

enum Failure {
    Input(String),
    Negative(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotMember | Error::NoPath(_) | Error::HorizonExhausted(_) => Failure::Negative(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Run = Result<ExitCode, Failure>;

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse_q(s: &str) -> Result<Rational, Failure> {
    s.trim().parse::<Rational>().map_err(Failure::from)
}

fn parse_point(s: &str) -> Result<Point, Failure> {
    Ok(Point(s.split(',').map(parse_q).collect::<Result<_, _>>()?))
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn emit(out: &Out, text: &str) -> Result<(), Failure> {
    match &out.output {
        Some(p) => write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(p: &Path, text: &str) -> Result<(), Failure> {
    fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))
}

fn line(v: &Value) -> String {
    format!("{v}\n")
}

fn report(mut v: Value) -> Value {
    v.as_object_mut().expect("object").insert("tool_version".into(), json!(VERSION));
    v
}

fn decimals(p: &Point) -> Value {
    json!(p.iter().map(|x| x.to_decimal(12)).collect::<Vec<_>>())
}

fn code(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn emit_with_report(out: &Out, data: &Value, rep: Value, path: &Option<PathBuf>) -> Result<(), Failure> {
    emit(out, &line(data))?;
    if let Some(p) = path {
        write_file(p, &line(&report(rep)))?;
    }
    Ok(())
}

fn load_system(path: &Path) -> Result<NSystem, Failure> {
    let v: Value = read_json(path)?;
    if v.get("events").is_some() {
        serde_json::from_value(v).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    } else if v.get("points").is_some() {
        let c: Canvas = serde_json::from_value(v).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        Ok(c.build_system()?)
    } else {
        Err(Failure::Input(format!("{}: neither a canvas nor a system", path.display())))
    }
}

fn run(cli: Cli) -> Run {
    match cli.verb {
        Verb::Validate { file, strict } => {
            let v: Value = read_json(&file)?;
            let (ok, rep) = if v.get("points").is_some() {
                let c: Canvas = serde_json::from_value(v).map_err(|e| Failure::Input(e.to_string()))?;
                let r = c.validate(strict);
                (r.ok, json!({"kind": "canvas", "report": to_json(&r)}))
            } else {
                let s: NSystem = serde_json::from_value(v).map_err(|e| Failure::Input(e.to_string()))?;
                let r = s.validate();
                (r.valid, json!({"kind": "system", "report": to_json(&r)}))
            };
            print!("{}", line(&report(rep)));
            Ok(code(ok))
        }
        Verb::Build { canvas, out } => {
            let c: Canvas = read_json(&canvas)?;
            emit(&out, &line(&to_json(&c.build_system()?)))?;
            Ok(ExitCode::SUCCESS)
        }
        Verb::Eval { system, q } => {
            let s = load_system(&system)?;
            print!("{}", line(&to_json(&s.eval(&parse_q(&q)?)?)));
            Ok(ExitCode::SUCCESS)
        }
        Verb::Exponents { system, map } => {
            let s = load_system(&system)?;
            let v = match map {
                None => to_json(&six_exponents(&s)?),
                Some(m) => {
                    let t: LinearMap = read_json(&m)?;
                    t.check()?;
                    to_json(&mu_t(&t, &f_set(&s, None)?)?)
                }
            };
            print!("{}", line(&v));
            Ok(ExitCode::SUCCESS)
        }
        Verb::Extend { system, target, report: rp, out } => {
            let s = load_system(&system)?;
            let ext = extend_to(&s, &parse_point(&target)?)?;
            let drift = extension_drift(&s, &ext)?;
            let ok = ext.report.ok() && drift.within != Some(false);
            let rep = json!({
                "checks": to_json(&ext.report),
                "map": to_json(&ext.map),
                "passes": ext.passes.iter().map(|(m, c)| json!({"m": m, "points": to_json(&c.points)})).collect::<Vec<_>>(),
                "drift": to_json(&drift),
            });
            emit_with_report(&out, &to_json(&ext.system), rep, &rp)?;
            Ok(code(ok))
        }
        Verb::Translate { system, b, report: rp, out } => {
            let s = load_system(&system)?;
            let b = parse_q(&b)?;
            let p = translate_by(&s, &b)?;
            let (worst, bound) = translation_drift(&s, &p, &b)?;
            let rep = json!({
                "drift": worst, "drift_decimal": worst.to_decimal(12),
                "bound": bound, "bound_decimal": bound.to_decimal(12),
            });
            emit_with_report(&out, &to_json(&p), rep, &rp)?;
            Ok(code(worst <= bound))
        }
        Verb::Selfsim { system, eps, general, report: rp, out } => {
            let s = load_system(&system)?;
            let eps = parse_q(&eps)?;
            let (r, rep) = if general { selfsimilarize_general(&s, &eps)? } else { selfsimilarize(&s, &eps)? };
            let ok = rep.dist <= rep.eps;
            let mut v = to_json(&rep);
            v["dist_decimal"] = json!(rep.dist.to_decimal(12));
            emit_with_report(&out, &to_json(&r), v, &rp)?;
            Ok(code(ok))
        }
        Verb::Chain { cmd } => run_chain(cmd),
        Verb::Spectrum { cmd } => run_spectrum(cmd),
        Verb::Plot { file, qmax, csv, out } => {
            let v: Value = read_json(&file)?;
            if v.get("vertices").is_some() {
                let c: ClosedChain = serde_json::from_value(v).map_err(|e| Failure::Input(e.to_string()))?;
                emit(&out, &chain_svg(&c.vertices))?;
                return Ok(ExitCode::SUCCESS);
            }
            let s = load_system(&file)?;
            let qmax = match qmax {
                Some(x) => parse_q(&x)?,
                None => default_qmax(&s),
            };
            emit(&out, &system_svg(&s, &qmax)?)?;
            if let Some(p) = csv {
                write_file(&p, &system_csv(&s, &qmax)?)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Verb::Sample { n, seed, out } => {
            use rand::SeedableRng;
            let canvases: Vec<Value> = (0..n as u64)
                .map(|i| {
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(i);
                    to_json(&random_periodic_canvas3(&mut rng))
                })
                .collect();
            emit(&out, &line(&json!(canvases)))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_chain(cmd: ChainCmd) -> Run {
    match cmd {
        ChainCmd::Validate { chain } => {
            let c: ClosedChain = read_json(&chain)?;
            let r = validate_chain(&c);
            print!("{}", line(&report(to_json(&r))));
            Ok(code(r.ok))
        }
        ChainCmd::FromSystem { system, out } => {
            emit(&out, &line(&to_json(&chain_from_system(&load_system(&system)?)?)))?;
            Ok(ExitCode::SUCCESS)
        }
        ChainCmd::ToSystem { chain, out } => {
            let c: ClosedChain = read_json(&chain)?;
            emit(&out, &line(&to_json(&system_from_chain(&c)?)))?;
            Ok(ExitCode::SUCCESS)
        }
        ChainCmd::Join { first, second, out } => {
            let (a, b): (ClosedChain, ClosedChain) = (read_json(&first)?, read_json(&second)?);
            emit(&out, &line(&to_json(&canonicalize(&join_chains(&a, &b)?)?)))?;
            Ok(ExitCode::SUCCESS)
        }
        ChainCmd::Extract { chain } => {
            let c: ClosedChain = read_json(&chain)?;
            print!("{}", line(&to_json(&extract_paths(&c)?)));
            Ok(ExitCode::SUCCESS)
        }
        ChainCmd::Densify { path, gap, m, h, out } => {
            let p: ElementaryPath = read_json(&path)?;
            let c = match gap {
                Some(g) => densify_path(&p, m, h, &parse_q(&g)?)?,
                None => densify_auto(&p)?,
            };
            emit(&out, &line(&to_json(&c)))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_spectrum(cmd: SpectrumCmd) -> Run {
    match cmd {
        SpectrumCmd::Check { point } => {
            let a: SpectrumPoint6 = read_json(&point)?;
            let (member, rep) = membership(&a);
            let v = json!({
                "point": to_json(&a),
                "decimal": {"lower": decimals(&a.lower), "upper": decimals(&a.upper)},
                "member": member,
                "failed": rep.failed(),
                "equalities": rep.equalities(),
                "atoms": to_json(&rep.atoms),
            });
            print!("{}", line(&report(v)));
            Ok(code(member))
        }
        SpectrumCmd::Construct { point } => {
            let a: SpectrumPoint6 = read_json(&point)?;
            let (lo, up) = (construct_path_lower(&a)?, construct_path_upper(&a)?);
            let v = json!({"lower": to_json(&lo), "upper": to_json(&up)});
            print!("{}", line(&report(v)));
            Ok(code(lo.exists && up.exists))
        }
        SpectrumCmd::Realize { point, tol, out } => {
            let a: SpectrumPoint6 = read_json(&point)?;
            let r = realize(&a, &parse_q(&tol)?)?;
            if let Some(p) = &out.output {
                write_file(p, &line(&to_json(&r.system)))?;
            }
            let v = json!({
                "exact": r.exact,
                "target": to_json(&r.target),
                "achieved": to_json(&r.achieved),
                "distance": r.distance,
                "distance_decimal": r.distance.to_decimal(12),
                "chain": to_json(&r.chain),
                "system": to_json(&r.system),
            });
            print!("{}", line(&report(v)));
            Ok(ExitCode::SUCCESS)
        }
        SpectrumCmd::Sample { n, seed, out } => {
            emit(&out, &samples_csv(&sample_spectrum(n, seed))?)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(2);
        }
    };
    if let Some(j) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
    }
    match run(cli) {
        Ok(c) => c,
        Err(Failure::Input(m)) => {
            eprintln!("{}", json!({"error": m}));
            ExitCode::from(2)
        }
        Err(Failure::Negative(m)) => {
            eprintln!("{}", json!({"error": m}));
            ExitCode::from(1)
        }
    }
}
