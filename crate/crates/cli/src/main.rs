use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use qid::engine::{param_check, verify_exprs, ReportEntry};
use qid::{
    mock_theta_series, parse, run_suite, verify, MockThetaSelector, ParamProofOutcome, Registry, Status,
    SuiteReport, Tier,
};

/// Verify identities between q-series exactly.
#[derive(Parser)]
#[command(name = "qid", version)]
struct Cli {
    /// Registry file; falls back to $QID_REGISTRY, then the bundled registry.
    #[arg(long, global = true, env = "QID_REGISTRY")]
    registry: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify one registry identity, or two expressions against each other.
    Verify(VerifyArgs),
    /// Print coefficients of A, B or MU2.
    Coeffs(CoeffsArgs),
    /// Verify every identity of a tier.
    Suite(SuiteArgs),
    /// Prove an eta-quotient sum is zero via the (p, k) parametrization.
    ParamCheck(ParamCheckArgs),
    /// List registry identities.
    List,
}

#[derive(Args)]
struct VerifyArgs {
    /// Identity id.
    id: Option<String>,
    /// Left and right sides, given twice instead of an id.
    #[arg(long = "expr", num_args = 1, conflicts_with = "id")]
    exprs: Vec<String>,
    /// Verification order; defaults to the record's own (200 for --expr).
    #[arg(long)]
    order: Option<i64>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CoeffsArgs {
    /// A, B, MU2, or a specific form such as B3.
    series: String,
    #[arg(long)]
    upto: u64,
    /// Reduce each coefficient to a residue in [0, M).
    #[arg(long = "mod")]
    modulus: Option<u64>,
}

#[derive(Args)]
struct SuiteArgs {
    /// core, classical or background; all tiers when omitted.
    #[arg(long)]
    tier: Option<String>,
    /// Override the order of every equality record.
    #[arg(long)]
    order: Option<i64>,
    #[arg(long)]
    json: bool,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ParamCheckArgs {
    /// A registry definition such as S0, S1, H0, H1 or R0.
    target: Option<String>,
    #[arg(long, conflicts_with = "target")]
    expr: Option<String>,
    /// Order of the series cross-check.
    #[arg(long, default_value_t = 200)]
    order: i64,
}

struct Failure(String);

type CmdResult = Result<u8, Failure>;

fn fail<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure(msg.into()))
}

fn load_registry(path: &Option<PathBuf>) -> Result<Registry, Failure> {
    match path {
        Some(p) => Registry::load(p).map_err(|e| Failure(e.to_string())),
        None => Ok(Registry::bundled()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(a) => cmd_verify(&cli, a),
        Command::Coeffs(a) => cmd_coeffs(a),
        Command::Suite(a) => cmd_suite(&cli, a),
        Command::ParamCheck(a) => cmd_param_check(&cli, a),
        Command::List => cmd_list(&cli),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(msg)) => {
            eprintln!("qid: {msg}");
            ExitCode::from(2)
        }
    }
}

fn human_line(e: &ReportEntry) -> String {
    let mut s = format!("{:<28} {:<10} {:<5}", e.id, e.tier, e.status);
    match e.status {
        Status::Pass => write!(s, " through q^{}", e.compared_order).unwrap(),
        _ => write!(s, " {}", e.message).unwrap(),
    }
    write!(s, " ({} ms)", e.elapsed_ms).unwrap();
    s
}

fn status_code(s: Status) -> u8 {
    match s {
        Status::Pass => 0,
        Status::Fail => 1,
        Status::Error => 2,
    }
}

fn cmd_verify(cli: &Cli, a: &VerifyArgs) -> CmdResult {
    let start = Instant::now();
    let entry = match (&a.id, a.exprs.as_slice()) {
        (Some(id), []) => {
            let reg = load_registry(&cli.registry)?;
            let Some(rec) = reg.get(id) else {
                return fail(format!("no identity with id {id:?}; see `qid list`"));
            };
            let out = verify(rec, a.order.unwrap_or(rec.order));
            ReportEntry::new(&rec.id, rec.tier, out, start.elapsed().as_millis() as u64)
        }
        (None, [lhs, rhs]) => {
            let lhs = parse(lhs).map_err(|e| Failure(format!("first --expr: {e}")))?;
            let rhs = parse(rhs).map_err(|e| Failure(format!("second --expr: {e}")))?;
            let out = verify_exprs(&lhs, &rhs, a.order.unwrap_or(200), None);
            ReportEntry::new("expr", Tier::Core, out, start.elapsed().as_millis() as u64)
        }
        _ => return fail("give an identity id, or --expr exactly twice"),
    };
    if a.json {
        println!("{}", SuiteReport { entries: vec![entry.clone()] }.to_json());
    } else {
        println!("{}", human_line(&entry));
        if let Some(m) = &entry.first_mismatch {
            println!("  first mismatch at q^{}: lhs {} rhs {}", m.exponent, m.lhs, m.rhs);
        }
    }
    Ok(status_code(entry.status))
}

fn cmd_coeffs(a: &CoeffsArgs) -> CmdResult {
    let sel: MockThetaSelector = a.series.parse().map_err(|e: qid::Error| Failure(e.to_string()))?;
    if a.modulus == Some(0) {
        return fail("--mod must be positive");
    }
    let n = i64::try_from(a.upto).map_err(|_| Failure("--upto is too large".into()))?;
    let s = mock_theta_series(sel, n);
    let mut out = String::new();
    for k in 0..=n {
        let c = s.coefficient(k).expect("computed through upto");
        match a.modulus {
            Some(m) if c.is_integer() => {
                let m = qid::Rat::from_integer(m.into());
                let r = ((c % &m) + &m) % &m;
                writeln!(out, "{k} {r}").unwrap();
            }
            _ => writeln!(out, "{k} {c}").unwrap(),
        }
    }
    print!("{out}");
    Ok(0)
}

fn cmd_suite(cli: &Cli, a: &SuiteArgs) -> CmdResult {
    let tier = match &a.tier {
        Some(t) => Some(t.parse::<Tier>().map_err(|e| Failure(e.to_string()))?),
        None => None,
    };
    let reg = load_registry(&cli.registry)?;
    let report = run_suite(&reg, tier, a.order);
    let text = if a.json {
        report.to_json() + "\n"
    } else {
        let mut s = String::new();
        for e in &report.entries {
            writeln!(s, "{}", human_line(e)).unwrap();
        }
        let count = |st: Status| report.entries.iter().filter(|e| e.status == st).count();
        writeln!(
            s,
            "{} records: {} pass, {} fail, {} error",
            report.entries.len(),
            count(Status::Pass),
            count(Status::Fail),
            count(Status::Error)
        )
        .unwrap();
        let findings: Vec<_> = report.findings().collect();
        if !findings.is_empty() {
            writeln!(s, "findings (background claims that did not hold):").unwrap();
            for f in findings {
                let m = f.first_mismatch.as_ref().expect("fail has a mismatch");
                writeln!(s, "  {}: first mismatch at q^{}: lhs {} rhs {}", f.id, m.exponent, m.lhs, m.rhs)
                    .unwrap();
            }
        }
        s
    };
    match &a.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(report.exit_code() as u8)
}

fn cmd_param_check(cli: &Cli, a: &ParamCheckArgs) -> CmdResult {
    let expr = match (&a.target, &a.expr) {
        (Some(name), None) => {
            let reg = load_registry(&cli.registry)?;
            match reg.def(name) {
                Some(e) => e.clone(),
                None => {
                    let known: Vec<_> = reg.def_names().collect();
                    return fail(format!("no definition {name:?}; known: {}", known.join(", ")));
                }
            }
        }
        (None, Some(src)) => parse(src).map_err(|e| Failure(e.to_string()))?,
        _ => return fail("give a definition name or --expr"),
    };
    let report = param_check(&expr, a.order);
    let proof = report.proof.as_ref().map_err(|e| Failure(e.to_string()))?;
    match proof {
        ParamProofOutcome::ProvedZero => println!("ProvedZero"),
        other => print!("{other}{}", if matches!(other, ParamProofOutcome::NonIntegral { .. }) { "" } else { "\n" }),
    }
    println!("series check: {} ({})", report.series.status, report.series.message);
    Ok(if report.proved() { 0 } else { 1 })
}

fn cmd_list(cli: &Cli) -> CmdResult {
    let reg = load_registry(&cli.registry)?;
    for r in reg.records() {
        println!("{}\t{}\t{}", r.id, r.tier, r.anchor);
    }
    Ok(0)
}
