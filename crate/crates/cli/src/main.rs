//! `shtukalab`: reports for Drinfeld modules, L-values, Taelman units and
//! shtuka trace formulas.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 infeasible within the
//! budget, 3 bad input.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use shtukalab_core::drinfeld::{field_from_spec, DrinfeldModule, ModuleSpec};
use shtukalab_core::error::Error;
use shtukalab_core::field::Fq;
use shtukalab_core::irreducible::irreducibles_of_degree;
use shtukalab_core::parse::parse_mpoly;
use shtukalab_core::poly::{ring_a, ring_r, Poly};
use shtukalab_core::ring::Ring;
use shtukalab_core::shtuka::{self, random, POneShtuka, TraceReport};
use shtukalab_core::special_values::{carlitz_check, l_value, l_value_with_cutoff};
use shtukalab_core::taelman::{class_module, verify_cnf};

const DEFAULT_SEED: u64 = 20240611;

#[derive(Parser, Debug)]
#[command(name = "shtukalab", version, about = "Exact arithmetic for Drinfeld modules and shtukas")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Size of the constant field.
    #[arg(long, default_value_t = 2)]
    q: u32,
    /// Modulus of F_q over F_p as a polynomial in g, e.g. "g^2+g+1".
    #[arg(long)]
    modulus: Option<String>,
    /// Rank of the module; defaults to the number of coefficients.
    #[arg(long)]
    rank: Option<usize>,
    /// Coefficients a_1,...,a_r of φ_t as polynomials in x, comma separated.
    #[arg(long, value_delimiter = ',')]
    coeffs: Vec<String>,
    /// JSON file: a module spec, or a shtuka for trace-check.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long, default_value_t = 8)]
    prec: i64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized suites.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Formula {
    /// Nilpotent formula when i = 1, artinian formula otherwise.
    Auto,
    Nilpotent,
    Artinian,
    Both,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Nilpotent,
    Constant,
    Shifted,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Monic irreducible polynomials in t of degree <= d.
    Irreducibles {
        #[command(flatten)]
        common: Common,
        #[arg(long, short = 'd', default_value_t = 3)]
        degree: usize,
    },
    /// Local L-factor of a module at a prime of R.
    Lfactor {
        #[command(flatten)]
        common: Common,
        /// Monic irreducible, in x (θ) or t.
        #[arg(long)]
        prime: String,
    },
    /// L(E*, 0) as an Euler product modulo t^-prec.
    Lvalue {
        #[command(flatten)]
        common: Common,
        /// Override the certified degree cutoff (uncertified below it).
        #[arg(long)]
        cutoff: Option<usize>,
    },
    /// Euler product vs smooth sum vs log_C(1) for the Carlitz module;
    /// --prec is the prime cutoff degree.
    CarlitzCheck {
        #[command(flatten)]
        common: Common,
    },
    /// Taelman unit and class modules.
    Units {
        #[command(flatten)]
        common: Common,
    },
    /// g(θ)·u = α·L(E*, 0).
    VerifyCnf {
        #[command(flatten)]
        common: Common,
    },
    /// Trace formulas for a shtuka file (--spec) or a seeded random family.
    TraceCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Formula::Auto)]
        formula: Formula,
        /// Run this many random instances instead of reading --spec.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, value_enum, default_value_t = Family::Nilpotent)]
        family: Family,
    },
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Budget(_) | Error::Infeasible(_) | Error::Precision(_) | Error::OutsideBall(_) => 2,
            Error::Certificate(_) | Error::Integrality(_) => 1,
            _ => 3,
        };
        Failure { code, message: e.to_string() }
    }
}

fn input_error(msg: impl Into<String>) -> Failure {
    Failure { code: 3, message: msg.into() }
}

/// What a command prints, and whether its verdict passed.
struct Output {
    json: Value,
    text: String,
    pass: bool,
}

fn read_spec(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn module(common: &Common) -> Result<DrinfeldModule, Failure> {
    if let Some(path) = &common.spec {
        return Ok(DrinfeldModule::from_json(&read_spec(path)?)?);
    }
    let coeffs = if common.coeffs.is_empty() { vec!["1".to_string()] } else { common.coeffs.clone() };
    let spec = ModuleSpec {
        q: common.q,
        modulus: common.modulus.clone(),
        rank: common.rank.unwrap_or(coeffs.len()),
        coeffs,
    };
    Ok(DrinfeldModule::from_spec(&spec)?)
}

fn field(common: &Common) -> Result<Fq, Failure> {
    Ok(field_from_spec(common.q, common.modulus.as_deref())?)
}

fn threads(common: &Common) -> Result<usize, Failure> {
    if common.threads == 0 {
        return Err(input_error("--threads must be at least 1"));
    }
    Ok(common.threads)
}

/// A prime written in x (θ) or in t.
fn parse_prime(fq: &Fq, text: &str) -> Result<Poly<shtukalab_core::field::FqElem>, Failure> {
    let m = parse_mpoly(fq, text, &["x", "t"])?;
    let r = ring_r(fq);
    let mut c = vec![fq.zero(); 1];
    for (e, &x) in &m.terms {
        if e[0] > 0 && e[1] > 0 {
            return Err(input_error("the prime must be univariate"));
        }
        let d = (e[0] + e[1]) as usize;
        if c.len() <= d {
            c.resize(d + 1, fq.zero());
        }
        c[d] = x;
    }
    Ok(r.from_vec(c))
}

fn run(command: &Command) -> Result<(Output, Format), Failure> {
    match command {
        Command::Irreducibles { common, degree } => {
            let fq = field(common)?;
            let a = ring_a(&fq);
            let mut by_degree = Vec::new();
            let mut lines = Vec::new();
            for d in 1..=*degree {
                let ps: Vec<String> = irreducibles_of_degree(&fq, d).iter().map(|p| a.fmt_elem(p)).collect();
                lines.push(format!("degree {d} ({}): {}", ps.len(), ps.join(", ")));
                by_degree.push(json!({"degree": d, "count": ps.len(), "polynomials": ps}));
            }
            Ok((
                Output { json: json!({"q": fq.q(), "irreducibles": by_degree}), text: lines.join("\n"), pass: true },
                common.format,
            ))
        }
        Command::Lfactor { common, prime } => {
            let e = module(common)?;
            let f = parse_prime(e.fq(), prime)?;
            let lf = shtukalab_core::drinfeld::local_lfactor(&e, &f, common.prec)?;
            let j = lf.to_json(e.fq());
            let text = format!(
                "prime {}\ncharpoly c(X) = {}\nP(T) = {}\nP(1) = ({})/({}) = {}",
                j["prime"].as_str().unwrap_or(""),
                lf.charpoly_text(e.fq()),
                lf.lpoly_text(e.fq()),
                j["value_num"].as_str().unwrap_or(""),
                j["value_den"].as_str().unwrap_or(""),
                lf.value
            );
            Ok((Output { json: j, text, pass: true }, common.format))
        }
        Command::Lvalue { common, cutoff } => {
            let e = module(common)?;
            let t = threads(common)?;
            let rep = match cutoff {
                None => l_value(&e, common.prec, t)?,
                Some(c) => l_value_with_cutoff(&e, common.prec, *c, t)?,
            };
            let text = format!(
                "L(E*,0) = {}\ncutoff degree {}, {} primes",
                rep.value, rep.cutoff_degree, rep.primes
            );
            Ok((Output { json: rep.to_json(), text, pass: true }, common.format))
        }
        Command::CarlitzCheck { common } => {
            let fq = field(common)?;
            if common.prec < 1 {
                return Err(input_error("--prec must be at least 1"));
            }
            let c = carlitz_check(&fq, common.prec as usize, threads(common)?)?;
            let mut j = c.to_json();
            let mut text = format!(
                "euler      {}\nsmooth sum {}\nlog series {}\nlog(1)     {}\n",
                c.euler, c.smooth, c.log_series, c.log_generic
            );
            if !c.agree {
                let first = [&c.smooth, &c.log_series, &c.log_generic]
                    .iter()
                    .filter_map(|s| c.euler.first_difference(s, c.prec))
                    .min();
                if let Some(k) = first {
                    j["first_disagreement"] = json!(format!("t^-{k}"));
                    text.push_str(&format!("first disagreement at t^-{k}\n"));
                }
            }
            text.push_str(if c.agree { "PASS" } else { "FAIL" });
            Ok((Output { json: j, text, pass: c.agree }, common.format))
        }
        Command::Units { common } => {
            let e = module(common)?;
            let rep = class_module(&e, common.prec, None)?;
            let text = format!(
                "class module dimension {}\nFitting generator {}\nunit (degree {}) {}\nwindow c={} B={} N={}",
                rep.class_dim,
                ring_a(e.fq()).fmt_elem(&rep.fitting),
                rep.unit_degree,
                rep.unit,
                rep.window.c,
                rep.window.b,
                rep.window.n
            );
            Ok((Output { json: rep.to_json(e.fq()), text, pass: true }, common.format))
        }
        Command::VerifyCnf { common } => {
            let e = module(common)?;
            let rep = verify_cnf(&e, common.prec, threads(common)?)?;
            let fq = e.fq();
            let alpha = rep.alpha.map(|a| fq.fmt_elem(a)).unwrap_or_else(|| "FAIL".into());
            let mut text = format!(
                "g = {}\ng(θ)·u = {}\nL      = {}\nalpha = {alpha}",
                ring_a(fq).fmt_elem(&rep.units.fitting),
                rep.lhs,
                rep.l_value
            );
            if let Some(k) = rep.residual_at {
                text.push_str(&format!("\nfirst difference at t^-{k}"));
            }
            Ok((Output { json: rep.to_json(fq), text, pass: rep.pass() }, common.format))
        }
        Command::TraceCheck { common, formula, random: count, family } => {
            let out = match count {
                Some(n) => trace_random(common, *n, *family, *formula)?,
                None => {
                    let path = common.spec.as_ref().ok_or_else(|| input_error("trace-check needs --spec or --random"))?;
                    let p = POneShtuka::from_json(&read_spec(path)?)?;
                    trace_one(&p, *formula)?
                }
            };
            Ok((out, common.format))
        }
    }
}

fn reports(p: &POneShtuka, formula: Formula) -> Result<Vec<TraceReport>, Failure> {
    let nilp = || shtuka::check_nilptrace(p);
    let art = || shtuka::check_arttrace(p);
    Ok(match formula {
        Formula::Auto if p.i_is_identity() => vec![nilp()?],
        Formula::Auto | Formula::Artinian => vec![art()?],
        Formula::Nilpotent => vec![nilp()?],
        Formula::Both => vec![nilp()?, art()?],
    })
}

fn report_text(p: &POneShtuka, r: &TraceReport) -> String {
    let f = |x| p.lambda.fmt(x);
    let mut s = format!("{} trace formula\n", r.formula);
    for h in &r.hypotheses {
        let mark = if h.ok { "ok  " } else { "FAIL" };
        s.push_str(&format!("  [{mark}] {} {}\n", h.name, h.detail));
    }
    for row in &r.global.factors {
        s.push_str(&format!(
            "  prime {}: local {}, factor {}\n",
            ring_r(p.lambda.fq()).fmt_elem(&row.prime),
            f(&row.local),
            f(&row.factor)
        ));
    }
    if let (Some(z), Some(d)) = (&r.zeta, &r.det_rho) {
        s.push_str(&format!("  zeta = {}, L = {}, det rho = {}\n", f(z), f(&r.global.value), f(d)));
    }
    s.push_str(&format!("  {} = {}  {}", f(&r.lhs), f(&r.rhs), if r.verdict { "PASS" } else { "FAIL" }));
    s
}

fn trace_one(p: &POneShtuka, formula: Formula) -> Result<Output, Failure> {
    let reps = reports(p, formula)?;
    let pass = reps.iter().all(|r| r.verdict);
    let text = reps.iter().map(|r| report_text(p, r)).collect::<Vec<_>>().join("\n");
    let json = json!({"shtuka": p.to_json(), "reports": reps.iter().map(|r| r.to_json(&p.lambda)).collect::<Vec<_>>()});
    Ok(Output { json, text, pass })
}

fn trace_random(common: &Common, n: usize, family: Family, formula: Formula) -> Result<Output, Failure> {
    let mut rng = random::rng(common.seed);
    let mut items = Vec::with_capacity(n);
    let mut lines = Vec::with_capacity(n + 1);
    let mut passed = 0;
    for idx in 0..n {
        let p = match family {
            Family::Nilpotent => random::nilptrace_instance(&mut rng)?,
            Family::Constant => random::arttrace_constant_instance(&mut rng)?,
            Family::Shifted => random::arttrace_shifted_instance(&mut rng)?,
        };
        let reps = reports(&p, formula)?;
        let mut ok = reps.iter().all(|r| r.verdict);
        let mut entry = json!({"shtuka": p.to_json(), "reports": reps.iter().map(|r| r.to_json(&p.lambda)).collect::<Vec<_>>()});
        if family != Family::Nilpotent {
            let inv = random::zeta_invariance(&p, &mut rng)?;
            entry["zeta_invariance"] = json!(inv);
            ok &= inv;
        }
        passed += ok as usize;
        let r = &reps[0];
        lines.push(format!(
            "#{idx} q={} e={} twists0={:?} twists1={:?}: {} = {} {}",
            p.lambda.fq().q(),
            p.lambda.e,
            p.twists0,
            p.twists1,
            p.lambda.fmt(&r.lhs),
            p.lambda.fmt(&r.rhs),
            if ok { "PASS" } else { "FAIL" }
        ));
        items.push(entry);
    }
    lines.push(format!("{passed}/{n} PASS (seed {})", common.seed));
    Ok(Output {
        json: json!({"seed": common.seed, "passed": passed, "total": n, "instances": items}),
        text: lines.join("\n"),
        pass: passed == n,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli.command) {
        Ok((out, format)) => {
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable")),
                Format::Text => println!("{}", out.text),
            }
            eprintln!("elapsed {:.3}s", start.elapsed().as_secs_f64());
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
