//! Command-line front end: density evaluation, CSV sampling, marginals,
//! conditioning, residual transforms, and the verification suites, all over
//! JSON-specified distributions.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mvt::{
    condition, independence_residual, marginal, run_named_suite, MVTParams, ParamsDoc, Partition,
    RngStream, SuiteConfig,
};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "mvt",
    version,
    about = "Multivariate Student-t toolkit: densities, sampling, conditioning, verification"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the density (or log-density) at a point.
    Pdf {
        /// JSON parameter file: {"mu": [..], "sigma": [[..],[..]], "nu": ..}.
        #[arg(long)]
        params: PathBuf,
        /// Evaluation point, comma-separated reals, e.g. "0.5,-1".
        #[arg(long)]
        point: String,
        /// Print the natural log of the density instead.
        #[arg(long)]
        log: bool,
    },
    /// Draw samples into a CSV file with header x0..x{p-1}.
    Sample {
        #[arg(long)]
        params: PathBuf,
        /// Number of rows to draw (at least 1).
        #[arg(long)]
        n: u64,
        /// RNG seed; a fixed seed reproduces the file byte for byte.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the marginal distribution of the kept coordinates as JSON.
    Marginal {
        #[arg(long)]
        params: PathBuf,
        /// Comma-separated coordinate indices to keep, e.g. "0,2".
        #[arg(long)]
        keep: String,
    },
    /// Print the conditional law given observed coordinates as JSON.
    Condition {
        #[arg(long)]
        params: PathBuf,
        /// Observed coordinates as index:value pairs, e.g. "0:2.0,3:-1.5".
        #[arg(long)]
        given: String,
    },
    /// Print the scaled residual of a free-block point as a JSON array.
    Residual {
        #[arg(long)]
        params: PathBuf,
        /// Observed coordinates as index:value pairs.
        #[arg(long)]
        given: String,
        /// Free-block point, coordinates in ascending index order.
        #[arg(long)]
        point: String,
    },
    /// Run a verification suite and print its JSON report.
    Verify {
        /// Distribution to verify; omitted, the built-in battery runs.
        #[arg(long)]
        params: Option<PathBuf>,
        /// One of: chain-rule, proportionality, quadrature, sampling-gof,
        /// independence, moments, all.
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::Pdf { params, point, log } => {
            let p = load_params(&params)?;
            let x = parse_reals(&point, "--point")?;
            let value = if log { p.log_pdf(&x) } else { p.pdf(&x) }.map_err(|e| e.to_string())?;
            println!("{}", format_g17(value));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Sample {
            params,
            n,
            seed,
            out,
        } => {
            let p = load_params(&params)?;
            if n == 0 {
                return Err("--n must be at least 1".into());
            }
            write_csv(&p, n as usize, seed, &out)
                .map_err(|e| format!("cannot write {}: {e}", out.display()))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Marginal { params, keep } => {
            let p = load_params(&params)?;
            let indices = parse_indices(&keep, "--keep")?;
            let part = Partition::new(p.dim(), &indices).map_err(|e| e.to_string())?;
            let kept = marginal(&p, &part).map_err(|e| e.to_string())?;
            println!("{}", ParamsDoc::from_params(&kept).to_json());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Condition { params, given } => {
            let p = load_params(&params)?;
            let (indices, values) = parse_given(&given)?;
            let part = Partition::new(p.dim(), &indices).map_err(|e| e.to_string())?;
            let (spec, law) = condition(&p, &part, &values).map_err(|e| e.to_string())?;
            let doc = json!({
                "conditional": spec,
                "params": ParamsDoc::from_params(&law),
            });
            println!("{doc}");
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Residual {
            params,
            given,
            point,
        } => {
            let p = load_params(&params)?;
            let (indices, values) = parse_given(&given)?;
            let x2 = parse_reals(&point, "--point")?;
            let part = Partition::new(p.dim(), &indices).map_err(|e| e.to_string())?;
            let resid =
                independence_residual(&p, &part, &values, &x2).map_err(|e| e.to_string())?;
            println!(
                "{}",
                serde_json::to_string(&resid).map_err(|e| e.to_string())?
            );
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify {
            params,
            suite,
            seed,
        } => {
            let user = match params {
                Some(path) => Some(load_params(&path)?),
                None => None,
            };
            let outcomes = run_named_suite(&suite, user.as_ref(), &SuiteConfig::new(seed))
                .map_err(|e| e.to_string())?;
            let pass = outcomes.iter().all(|o| o.pass);
            let report = json!({ "seed": seed, "pass": pass, "suites": outcomes });
            println!("{report}");
            Ok(if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn load_params(path: &Path) -> Result<MVTParams, String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    ParamsDoc::from_json(&text)
        .and_then(ParamsDoc::try_into_params)
        .map_err(|e| e.to_string())
}

fn write_csv(p: &MVTParams, n: usize, seed: u64, out: &Path) -> io::Result<()> {
    let mut rng = RngStream::from_seed(seed);
    let file = fs::File::create(out)?;
    let mut w = io::BufWriter::new(file);
    let header: Vec<String> = (0..p.dim()).map(|i| format!("x{i}")).collect();
    writeln!(w, "{}", header.join(","))?;
    for row in p.sample(n, &mut rng) {
        let cells: Vec<String> = row.iter().map(|&v| format_g17(v)).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    w.flush()
}

fn parse_reals(s: &str, flag: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<f64>()
                .map_err(|_| format!("invalid real '{tok}' in {flag}"))
        })
        .collect()
}

fn parse_indices(s: &str, flag: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<usize>()
                .map_err(|_| format!("invalid index '{tok}' in {flag}"))
        })
        .collect()
}

fn parse_given(s: &str) -> Result<(Vec<usize>, Vec<f64>), String> {
    let mut indices = Vec::new();
    let mut values = Vec::new();
    for pair in s.split(',') {
        let pair = pair.trim();
        let (i, v) = pair
            .split_once(':')
            .ok_or_else(|| format!("expected index:value, got '{pair}' in --given"))?;
        let i = i
            .trim()
            .parse::<usize>()
            .map_err(|_| format!("invalid index '{}' in --given", i.trim()))?;
        let v = v
            .trim()
            .parse::<f64>()
            .map_err(|_| format!("invalid real '{}' in --given", v.trim()))?;
        if !v.is_finite() {
            return Err(format!("value for index {i} in --given is not finite"));
        }
        indices.push(i);
        values.push(v);
    }
    Ok((indices, values))
}

/// Scalar rendering with 17 significant digits (enough to round-trip any
/// f64), fixed or scientific by magnitude, trailing zeros trimmed. Pure
/// function of the value, so repeated invocations are byte-identical.
fn format_g17(v: f64) -> String {
    if v == 0.0 {
        return if v.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation has an e");
    let x: i32 = exp.parse().expect("decimal exponent is an integer");
    if (-4..17).contains(&x) {
        let decimals = (16 - x).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{x}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(mut s: String) -> String {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digit_rendering() {
        assert_eq!(format_g17(1.0 / std::f64::consts::PI), "0.31830988618379069");
        assert_eq!(format_g17(7.0 / 6.0), "1.1666666666666667");
        assert_eq!(format_g17(0.25), "0.25");
        assert_eq!(format_g17(-2.0), "-2");
        assert_eq!(format_g17(0.0), "0");
        assert_eq!(format_g17(1e17), "1e17");
        assert_eq!(format_g17(1e16), "10000000000000000");
        assert_eq!(format_g17(1.5e-4), "0.00014999999999999999");
        assert_eq!(format_g17(1e-5), "1.0000000000000001e-5");
    }

    #[test]
    fn rendered_scalars_round_trip() {
        for v in [
            1.0 / 3.0,
            -1.8378770664093453,
            6.02e23,
            -7.777e-300,
            f64::MIN_POSITIVE,
            123456.789,
        ] {
            let s = format_g17(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
        }
    }

    #[test]
    fn given_pairs_parse_and_reject() {
        let (i, v) = parse_given("0:2.0, 3:-1.5").unwrap();
        assert_eq!(i, vec![0, 3]);
        assert_eq!(v, vec![2.0, -1.5]);
        assert!(parse_given("0=2.0").is_err());
        assert!(parse_given("a:2.0").is_err());
        assert!(parse_given("0:inf").is_err());
        assert!(parse_given("").is_err());
    }
}
