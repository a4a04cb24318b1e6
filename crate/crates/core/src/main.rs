use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use hahn_bispectral::algebra::xi_params;
use hahn_bispectral::bases::{build_u_series, build_v, eval_u_hypergeometric, phi};
use hahn_bispectral::bispectral::{lambda, mu_coeffs, nu_coeffs};
use hahn_bispectral::emit::{
    build, default_file_name, default_out_dir, write_to, EmitKind, Emitted,
};
use hahn_bispectral::kernel::{fmt_rat, parse_rat};
use hahn_bispectral::suite::{run_suite, Format, SuiteConfig};
use hahn_bispectral::{Basis, Error, Params, RatScalar, Result};

/// Exact difference operators and biorthogonal Hahn-like rational functions.
#[derive(Parser)]
#[command(name = "hahnbrf", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suite, or the named checks.
    Verify(VerifyArgs),
    /// Write one exact object to a file.
    Emit(EmitArgs),
    /// Evaluate U_n, V_n or phi_n at a rational point.
    Eval(EvalArgs),
    /// Print xi, lambda, nu and mu for one parameter set.
    Params(ParamArgs),
}

#[derive(Args)]
struct ParamArgs {
    /// Grid size N.
    #[arg(long = "N", default_value_t = 3)]
    n: usize,
    #[arg(long, value_parser = parse_rat, allow_hyphen_values = true, default_value = "1/2")]
    alpha: RatScalar,
    #[arg(long, value_parser = parse_rat, allow_hyphen_values = true, default_value = "1/3")]
    beta: RatScalar,
    /// Skip the genericity check.
    #[arg(long)]
    force: bool,
}

impl ParamArgs {
    fn params(&self) -> Result<Params> {
        if self.force {
            Params::forced(self.alpha.clone(), self.beta.clone(), self.n)
        } else {
            Params::new(self.alpha.clone(), self.beta.clone(), self.n)
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Check ids or prefixes; all checks when empty.
    checks: Vec<String>,
    /// Comma-separated grid sizes.
    #[arg(long = "N", value_delimiter = ',', default_value = "1,2,3,4,5,6")]
    n_list: Vec<usize>,
    /// Explicit alpha; requires --beta.
    #[arg(long, value_parser = parse_rat, allow_hyphen_values = true, requires = "beta")]
    alpha: Option<RatScalar>,
    #[arg(long, value_parser = parse_rat, allow_hyphen_values = true, requires = "alpha")]
    beta: Option<RatScalar>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Seeded draws per N; defaults to 5 without explicit parameters, 0 with.
    #[arg(long)]
    draws: Option<usize>,
    #[arg(long)]
    force: bool,
    /// Report file.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = |s: &str| s.parse::<Format>(), default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct EmitArgs {
    /// matrix, function, weight, coefficients or report.
    #[arg(value_parser = |s: &str| s.parse::<EmitKind>())]
    kind: EmitKind,
    /// Object within the kind, e.g. X, U2, lambda, all.
    #[arg(default_value = "")]
    selector: String,
    #[arg(long, value_parser = |s: &str| s.parse::<Basis>(), default_value = "delta")]
    basis: Basis,
    #[command(flatten)]
    p: ParamArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = |s: &str| s.parse::<Format>(), default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct EvalArgs {
    /// U, V or phi.
    family: String,
    #[arg(value_name = "n")]
    index: usize,
    #[arg(value_parser = parse_rat, allow_hyphen_values = true)]
    x: RatScalar,
    #[command(flatten)]
    p: ParamArgs,
}

fn verify(a: VerifyArgs) -> Result<ExitCode> {
    let explicit: Vec<_> = a.alpha.into_iter().zip(a.beta).collect();
    let draws = a.draws.unwrap_or(if explicit.is_empty() { 5 } else { 0 });
    let cfg = SuiteConfig {
        n_list: a.n_list,
        param_draws: draws,
        explicit_params: explicit,
        seed: a.seed,
        force: a.force,
        output_path: a.out.or_else(|| {
            default_out_dir().map(|d| d.join(format!("report.{}", a.format.extension())))
        }),
        format: a.format,
        checks: a.checks,
    };
    let report = run_suite(&cfg)?;
    for c in report.checks.iter().filter(|c| !c.passed()) {
        let status = serde_json::to_value(c.status)?;
        println!(
            "{} {} {}",
            status.as_str().unwrap_or_default().to_uppercase(),
            c.check_id,
            c.params
        );
    }
    let s = &report.summary;
    println!(
        "{} checks: {} passed, {} failed, {} errors",
        s.total, s.passed, s.failed, s.errors
    );
    if let Some(path) = &cfg.output_path {
        let code = report.exit_code();
        write_to(path, &Emitted::Report(report).render(cfg.format)?)?;
        eprintln!("report written to {}", path.display());
        return Ok(ExitCode::from(code as u8));
    }
    Ok(ExitCode::from(report.exit_code() as u8))
}

fn emit(a: EmitArgs) -> Result<ExitCode> {
    let p = a.p.params()?;
    let obj = build(a.kind, &a.selector, a.basis, &p)?;
    let text = obj.render(a.format)?;
    let path = a.out.or_else(|| {
        default_out_dir().map(|d| d.join(default_file_name(a.kind, &a.selector, a.format)))
    });
    match path {
        Some(path) => {
            write_to(&path, &text)?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn eval(a: EvalArgs) -> Result<ExitCode> {
    let p = a.p.params()?;
    let f = match a.family.as_str() {
        "U" => build_u_series(a.index, &p)?.fun,
        "V" => build_v(a.index, &p)?.fun,
        "phi" => phi(a.index, &p)?.fun,
        s => return Err(Error::UnknownSelector(format!("family {s:?}"))),
    };
    let value = f
        .eval(&a.x)
        .ok_or_else(|| Error::InvalidParams(format!("{} is a pole", fmt_rat(&a.x))))?;
    let mut out = json!({ "function": f.to_string(), "value": fmt_rat(&value) });
    if a.family == "U" {
        if let Ok(h) = eval_u_hypergeometric(a.index, &p, &a.x) {
            out["hypergeometric"] = json!(fmt_rat(&h));
        }
    }
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(ExitCode::SUCCESS)
}

fn params(a: ParamArgs) -> Result<ExitCode> {
    let p = a.params()?;
    let strs = |v: &[RatScalar]| v.iter().map(fmt_rat).collect::<Vec<_>>();
    // null where a denominator vanishes
    let mu: Vec<_> = (0..=p.n)
        .map(|n| mu_coeffs(n, &p).ok().map(|m| strs(&m)))
        .collect();
    let out = json!({
        "params": p,
        "xi": xi_params(&p),
        "lambda": strs(&(0..=p.n).map(|n| lambda(n, &p)).collect::<Vec<_>>()),
        "nu": (0..=p.n).map(|n| strs(&nu_coeffs(n, &p))).collect::<Vec<_>>(),
        "mu": mu,
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(a) => verify(a),
        Command::Emit(a) => emit(a),
        Command::Eval(a) => eval(a),
        Command::Params(a) => params(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
