//! Command line front end: construct modules, print Jordan type profiles,
//! compute kernel and filtration sheaves, run Heller shifts, and execute the
//! full verification suite.
//!
//! Exit codes: 0 success, 1 computation or verification failure, 2 usage
//! error.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use sl2sheaf::field::{Ext, Field, Fp};
use sl2sheaf::fi::{default_degree_bound, fi_data, FiError};
use sl2sheaf::graded::{graded_kernel, GradedError, SplittingType};
use sl2sheaf::heller::heller_shift;
use sl2sheaf::nullcone::{jordan_profile, PointP1};
use sl2sheaf::poly::{ext_field, is_irreducible, Poly};
use sl2sheaf::report::{fi_report, kernel_report, profile_report, SheafReport};
use sl2sheaf::sl2::{dual_weyl, phi, projective, weyl, Sl2Module};
use sl2sheaf::theta::build_theta;
use sl2sheaf::verify::{verify_all, VerifyConfig};

#[derive(Parser)]
#[command(
    name = "sl2sheaf",
    version,
    about = "Exact computations with restricted sl2-modules and their sheaves on the projective line"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    /// Weyl module V(lambda)
    Weyl,
    /// Dual Weyl module V(lambda)*
    DualWeyl,
    /// Projective indecomposable Q(lambda), lambda < p
    Projective,
    /// Twisted module Phi_xi(lambda), lambda >= p, requires --xi
    Phi,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct ModuleArgs {
    /// Odd prime characteristic, p >= 3
    #[arg(long)]
    p: u64,
    #[arg(long, value_enum, default_value = "weyl")]
    family: FamilyArg,
    /// Highest weight
    #[arg(long)]
    lambda: usize,
    /// Point for the phi family: "s,t" with integer homogeneous coordinates,
    /// or "ext:e" / "ext:e:c0,...,c{e-1}" for the point [1:u] in the degree-e
    /// extension with monic modulus u^e + c{e-1} u^{e-1} + ... + c0
    #[arg(long)]
    xi: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Local Jordan types of a module over the projective line
    Jtype {
        #[command(flatten)]
        module: ModuleArgs,
        /// Largest extension degree searched for non-rational exceptional points
        #[arg(long, default_value_t = 8)]
        ext_max: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Splitting type of the kernel sheaf of the global operator
    Kernel {
        #[command(flatten)]
        module: ModuleArgs,
        /// Degree bound for the graded computation
        #[arg(long)]
        max_degree: Option<i64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Filtration layer F_i of the module's sheaf on the projective line
    Fi {
        #[command(flatten)]
        module: ModuleArgs,
        /// Layer index, 1 <= i <= p
        #[arg(long)]
        i: usize,
        /// Degree bound for the graded computation
        #[arg(long)]
        max_degree: Option<i64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Heller shift of the Weyl module V(lambda)
    Heller {
        /// Odd prime characteristic, p >= 3
        #[arg(long)]
        p: u64,
        #[arg(long)]
        lambda: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run every verification check for one prime
    VerifyAll {
        /// Odd prime characteristic, p >= 3
        #[arg(long)]
        p: u64,
        /// Largest highest weight checked (default 3p)
        #[arg(long)]
        lambda_max: Option<usize>,
        /// Largest extension degree searched for exceptional points
        #[arg(long, default_value_t = 8)]
        ext_max: usize,
        /// Seed for randomized searches; all reported results are
        /// seed-independent
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads for independent verification cases
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

enum CliError {
    Usage(String),
    Failure(String),
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn failure(msg: impl Into<String>) -> CliError {
    CliError::Failure(msg.into())
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.cmd) {
        Ok(()) => 0,
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            2
        }
        Err(CliError::Failure(m)) => {
            eprintln!("error: {m}");
            1
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<(), CliError> {
    match cmd {
        Cmd::Jtype {
            module,
            ext_max,
            format,
        } => match setup(&module)? {
            Setup::Base(k, xi) => cmd_jtype(&k, &module, xi, ext_max, format),
            Setup::Extension(k, xi) => cmd_jtype(&k, &module, Some(xi), ext_max, format),
        },
        Cmd::Kernel {
            module,
            max_degree,
            format,
        } => match setup(&module)? {
            Setup::Base(k, xi) => cmd_kernel(&k, &module, xi, max_degree, format),
            Setup::Extension(k, xi) => cmd_kernel(&k, &module, Some(xi), max_degree, format),
        },
        Cmd::Fi {
            module,
            i,
            max_degree,
            format,
        } => match setup(&module)? {
            Setup::Base(k, xi) => cmd_fi(&k, &module, xi, i, max_degree, format),
            Setup::Extension(k, xi) => cmd_fi(&k, &module, Some(xi), i, max_degree, format),
        },
        Cmd::Heller { p, lambda, format } => cmd_heller(&prime_field(p)?, lambda, format),
        Cmd::VerifyAll {
            p,
            lambda_max,
            ext_max,
            seed: _,
            jobs,
            format,
        } => cmd_verify_all(p, lambda_max, ext_max, jobs, format),
    }
}

fn prime_field(p: u64) -> Result<Fp, CliError> {
    if p < 3 {
        return Err(usage(format!("p must be an odd prime >= 3, got {p}")));
    }
    Fp::new(p).map_err(|e| usage(e.to_string()))
}

/// The field and optional point a module will be built over: the prime field
/// for rational points (or no point), an extension for "ext:..." points.
enum Setup {
    Base(Fp, Option<PointP1<Fp>>),
    Extension(Ext<Fp>, PointP1<Ext<Fp>>),
}

fn setup(args: &ModuleArgs) -> Result<Setup, CliError> {
    let k = prime_field(args.p)?;
    let Some(xi) = &args.xi else {
        return Ok(Setup::Base(k, None));
    };
    if let Some(rest) = xi.strip_prefix("ext:") {
        let mut parts = rest.splitn(2, ':');
        let e: usize = parts
            .next()
            .unwrap()
            .parse()
            .map_err(|_| usage(format!("bad extension degree in --xi {xi}")))?;
        if e == 0 {
            return Err(usage("extension degree must be at least 1"));
        }
        let ext = match parts.next() {
            None => ext_field(&k, e),
            Some(coeffs) => {
                let cs: Vec<i64> = coeffs
                    .split(',')
                    .map(|c| c.trim().parse())
                    .collect::<Result<_, _>>()
                    .map_err(|_| usage(format!("bad modulus coefficients in --xi {xi}")))?;
                if cs.len() != e {
                    return Err(usage(format!(
                        "expected {e} modulus coefficients, got {}",
                        cs.len()
                    )));
                }
                let mut m: Vec<u64> = cs.iter().map(|&c| k.from_int(c)).collect();
                m.push(k.one());
                if !is_irreducible(&k, &Poly::new(&k, m.clone())) {
                    return Err(usage("the given modulus is not irreducible"));
                }
                Ext::new(k, m)
            }
        };
        let u = ext.generator();
        Ok(Setup::Extension(ext, PointP1::Finite(u)))
    } else {
        let (s, t) = xi
            .split_once(',')
            .ok_or_else(|| usage(format!("--xi must be \"s,t\" or \"ext:e:coeffs\", got {xi}")))?;
        let parse = |x: &str| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| usage(format!("bad coordinate in --xi {xi}")))
        };
        let s = k.from_int(parse(s)?);
        let t = k.from_int(parse(t)?);
        let pt = if k.is_zero(&s) {
            if k.is_zero(&t) {
                return Err(usage("--xi must be a nonzero point"));
            }
            PointP1::Infinity
        } else {
            PointP1::Finite(k.div(&t, &s).unwrap())
        };
        Ok(Setup::Base(k, Some(pt)))
    }
}

fn module_from<K: Field>(
    k: &K,
    args: &ModuleArgs,
    xi: Option<PointP1<K>>,
) -> Result<Sl2Module<K>, CliError> {
    match args.family {
        FamilyArg::Weyl => Ok(weyl(k, args.lambda)),
        FamilyArg::DualWeyl => Ok(dual_weyl(k, args.lambda)),
        FamilyArg::Projective => projective(k, args.lambda).map_err(|e| usage(e.to_string())),
        FamilyArg::Phi => {
            let pt = xi.ok_or_else(|| usage("--xi is required for the phi family"))?;
            phi(k, args.lambda, &pt).map_err(|e| usage(e.to_string()))
        }
    }
}

fn csv_quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn cmd_jtype<K: Field>(
    k: &K,
    args: &ModuleArgs,
    xi: Option<PointP1<K>>,
    ext_max: usize,
    format: Format,
) -> Result<(), CliError> {
    let m = module_from(k, args, xi)?;
    let profile = jordan_profile(&m, ext_max).map_err(|e| failure(e.to_string()))?;
    let rep = profile_report(&m, &profile);
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&rep).unwrap()),
        Format::Csv => {
            println!("object,point,field,type");
            println!("generic,,{},{}", field_csv(&k.describe()), rep.generic);
            for ex in &rep.exceptional {
                println!(
                    "exceptional,{},{},{}",
                    csv_quote(&format!("[{}:{}]", ex.point[0], ex.point[1])),
                    field_csv(&ex.field),
                    ex.jordan_type
                );
            }
        }
        Format::Text => {
            if rep.exceptional.is_empty() {
                println!("constant {}", rep.generic);
            } else {
                println!("generic {}", rep.generic);
                for ex in &rep.exceptional {
                    let where_ = if ex.field.e == 1 {
                        String::new()
                    } else {
                        format!(
                            " over F_{}^{} (modulus coefficients {})",
                            ex.field.p,
                            ex.field.e,
                            ex.field.modulus.join(",")
                        )
                    };
                    println!(
                        "exceptional [{}:{}]{} -> {}",
                        ex.point[0], ex.point[1], where_, ex.jordan_type
                    );
                }
            }
        }
    }
    Ok(())
}

fn field_csv(d: &sl2sheaf::field::FieldDesc) -> String {
    if d.e == 1 {
        format!("F_{}", d.p)
    } else {
        format!("F_{}^{}", d.p, d.e)
    }
}

fn splitting_text(twists: &[i64]) -> String {
    SplittingType::new(twists.to_vec()).to_string()
}

fn print_sheaf(rep: &SheafReport, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(rep).unwrap()),
        Format::Csv => {
            println!("key,value");
            println!("module,{}", csv_quote(&rep.module));
            println!("object,{}", rep.object);
            println!("certified,{}", rep.certified);
            if let Some(tw) = &rep.splitting {
                println!("splitting,{}", csv_quote(&splitting_text(tw)));
            }
            for g in &rep.generators {
                println!(
                    "generator(deg {}),{}",
                    g.degree,
                    csv_quote(&format!("({})", g.vector.join(", ")))
                );
            }
            for h in &rep.hilbert {
                println!("h({}),{}", h.d, h.dim);
            }
        }
        Format::Text => match &rep.splitting {
            Some(tw) => println!("{}", splitting_text(tw)),
            None => {
                let hs: Vec<String> = rep
                    .hilbert
                    .iter()
                    .map(|h| format!("h({})={}", h.d, h.dim))
                    .collect();
                println!("splitting undetermined; Hilbert data {}", hs.join(" "));
            }
        },
    }
}

fn suggest_bound(e: &GradedError, suggested: i64) -> String {
    format!("{e}; retry with --max-degree {suggested}")
}

fn cmd_kernel<K: Field>(
    k: &K,
    args: &ModuleArgs,
    xi: Option<PointP1<K>>,
    max_degree: Option<i64>,
    format: Format,
) -> Result<(), CliError> {
    let m = module_from(k, args, xi)?;
    let bound = max_degree.unwrap_or_else(|| default_degree_bound(&m));
    let suggested = (2 * bound).max(default_degree_bound(&m));
    let th = build_theta(&m);
    let ker = graded_kernel(&th, bound).map_err(|e| failure(suggest_bound(&e, suggested)))?;
    let hilbert_to = ker
        .generators
        .iter()
        .map(|(d, _)| *d)
        .max()
        .unwrap_or(0)
        .saturating_add(4)
        .min(bound);
    let rep = kernel_report(&m, 1, &ker, hilbert_to);
    print_sheaf(&rep, format);
    Ok(())
}

fn cmd_fi<K: Field>(
    k: &K,
    args: &ModuleArgs,
    xi: Option<PointP1<K>>,
    i: usize,
    max_degree: Option<i64>,
    format: Format,
) -> Result<(), CliError> {
    let m = module_from(k, args, xi)?;
    let bound = max_degree.unwrap_or_else(|| default_degree_bound(&m));
    let suggested = (2 * bound).max(default_degree_bound(&m));
    let data = fi_data(&m, i, bound).map_err(|e| match e {
        FiError::BadIndex(_, _) => usage(e.to_string()),
        FiError::Graded(g) => failure(suggest_bound(&g, suggested)),
        e => failure(format!("{e}; retry with --max-degree {suggested}")),
    })?;
    let rep = fi_report(&m, &data);
    if format == Format::Text && data.is_zero() {
        println!("0");
        return Ok(());
    }
    print_sheaf(&rep, format);
    Ok(())
}

fn cmd_heller(k: &Fp, lambda: usize, format: Format) -> Result<(), CliError> {
    let shift = heller_shift(k, lambda).map_err(|e| failure(e.to_string()))?;
    match format {
        Format::Json => {
            let v = match &shift {
                None => serde_json::json!({
                    "lambda": lambda,
                    "shift": "0",
                    "projective": true,
                }),
                Some(d) => serde_json::json!({
                    "lambda": lambda,
                    "shift": format!("V({})", d.omega_lambda),
                    "omega_lambda": d.omega_lambda,
                    "dim": d.kernel.dim(),
                    "cover_dim": d.cover.dim(),
                    "projective": false,
                }),
            };
            println!("{}", serde_json::to_string_pretty(&v).unwrap());
        }
        Format::Csv => {
            println!("key,value");
            println!("lambda,{lambda}");
            match &shift {
                None => println!("shift,0 (projective)"),
                Some(d) => {
                    println!("shift,V({})", d.omega_lambda);
                    println!("dim,{}", d.kernel.dim());
                    println!("cover_dim,{}", d.cover.dim());
                }
            }
        }
        Format::Text => match &shift {
            None => println!("0 (projective)"),
            Some(d) => println!("V({}) (dim {})", d.omega_lambda, d.kernel.dim()),
        },
    }
    Ok(())
}

fn cmd_verify_all(
    p: u64,
    lambda_max: Option<usize>,
    ext_max: usize,
    jobs: Option<usize>,
    format: Format,
) -> Result<(), CliError> {
    prime_field(p)?;
    if let Some(n) = jobs {
        // Ignore the error when a global pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let cfg = VerifyConfig {
        p,
        lambda_max: lambda_max.unwrap_or(3 * p as usize),
        ext_bound: ext_max,
    };
    let results = verify_all(&cfg);
    let failed = results.iter().filter(|r| !r.passed).count();
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&results).unwrap()),
        Format::Csv => {
            println!("name,passed,detail");
            for r in &results {
                println!("{},{},{}", r.name, r.passed, csv_quote(&r.detail));
            }
        }
        Format::Text => {
            for r in &results {
                let tag = if r.passed { "PASS" } else { "FAIL" };
                println!("{tag} {}: {}", r.name, r.detail);
            }
            println!("{}/{} checks passed", results.len() - failed, results.len());
        }
    }
    if failed > 0 {
        Err(failure(format!(
            "{failed} of {} checks failed",
            results.len()
        )))
    } else {
        Ok(())
    }
}
