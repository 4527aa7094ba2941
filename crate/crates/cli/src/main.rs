use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use std::io::Read;
use std::process::ExitCode;
use waring::apolarity::{apolar_length, essential_variables, hilbert_function, minimal_generator_degrees};
use waring::binary::DEFAULT_SEED;
use waring::bounds::{generic_waring_rank, upper_bounds};
use waring::decomposition::WaringDecomposition;
use waring::dispatch::{self, RankOptions, DEFAULT_BCMT_MAX, DEFAULT_RESIDUAL_TOL};
use waring::modp::DEFAULT_PRIMES;
use waring::secant::{
    defect_scan, generic_fat_point_hf, generic_rank, reports_to_csv, secant_dim, SecantConfig, VarietySpec,
};
use waring::{parse_form, Error, Form};

#[derive(Parser)]
#[command(name = "waring", version, about = "Waring ranks, decompositions and secant dimensions")]
struct Cli {
    #[command(flatten)]
    opts: Options,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Options {
    /// Emit one JSON object on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Primes for secant sampling, comma separated or repeated.
    #[arg(long = "prime", global = true, value_delimiter = ',')]
    primes: Vec<u64>,
    /// Random trials per prime.
    #[arg(long, global = true, default_value_t = 3)]
    trials: usize,
    /// Residual tolerance, relative to the largest coefficient.
    #[arg(long, global = true, default_value_t = DEFAULT_RESIDUAL_TOL)]
    tol: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Rank, or a certified interval, with the deciding method.
    Rank { form: Option<String> },
    /// Border rank where it is decidable.
    BorderRank { form: Option<String> },
    /// Verified power-sum decomposition.
    Decompose { form: Option<String> },
    /// Hilbert function and minimal generator degrees of the apolar ideal.
    Apolar { form: Option<String> },
    /// Hilbert function in degree d of generic fat points in P^n.
    Hilbert {
        #[arg(long, num_args = 3.., value_names = ["N", "D", "M"], required = true)]
        fatpoints: Vec<u32>,
    },
    /// Dimension of the s-th secant variety.
    SecantDim { spec: String, s: u64 },
    /// Secant dimensions over a range of s, as CSV or JSON.
    DefectScan {
        spec: String,
        /// `a..b`, `a..=b` or `a-b`, inclusive.
        #[arg(long = "s-range")]
        s_range: String,
    },
    /// Upper bounds for the rank of forms of degree d in n + 1 variables.
    Bounds { n: u64, d: u32 },
    /// Smallest s whose secant variety fills the ambient space.
    GenericRank { spec: String },
}

#[derive(Serialize)]
struct Report {
    input: String,
    method: String,
    result: Value,
    certificate: Value,
    seed: u64,
    prime: Option<Vec<u64>>,
    residual: Option<f64>,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::Argument(_) => 2,
            Error::Numeric(_) => 3,
            Error::MethodInapplicable(_) => 4,
        };
        Failure { code, message: e.to_string() }
    }
}

fn argument(message: String) -> Failure {
    Failure { code: 2, message }
}

fn read_form(arg: &Option<String>) -> Result<(String, Form), Failure> {
    let text = match arg.as_deref() {
        Some("-") | None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| argument(format!("cannot read stdin: {e}")))?;
            s.trim().to_string()
        }
        Some(t) => t.to_string(),
    };
    let f = parse_form(&text, None)?;
    Ok((text, f))
}

fn secant_config(o: &Options) -> SecantConfig {
    SecantConfig {
        trials: o.trials,
        primes: if o.primes.is_empty() { DEFAULT_PRIMES.to_vec() } else { o.primes.clone() },
        seed: o.seed,
    }
}

fn rank_options(o: &Options) -> Result<RankOptions, Failure> {
    if !(o.tol > 0.0 && o.tol.is_finite()) {
        return Err(argument(format!("tolerance must be positive, got {}", o.tol)));
    }
    Ok(RankOptions { seed: o.seed, tol: o.tol, bcmt_max: DEFAULT_BCMT_MAX })
}

/// Re-checks a decomposition before it is printed: exact ones must sum to `F`
/// identically, floating ones must meet the tolerance.
fn reverify(f: &Form, dec: &WaringDecomposition, tol: f64) -> Result<(), Failure> {
    match &dec.exact {
        Some(ex) => {
            let mut acc = Form::zero(f.nvars(), f.degree());
            for (c, l) in ex.coefficients.iter().zip(&ex.linear_forms) {
                acc = acc.add(&Form::power_of_linear(l, f.degree()).scale(c))?;
            }
            if acc != *f {
                return Err(Failure { code: 3, message: "exact decomposition does not sum to the input".into() });
            }
        }
        None => {
            let bound = tol * f.max_abs().max(1.0);
            let r = waring::decomposition::residual(f, &dec.reconstruct());
            if !(r <= bound) {
                return Err(Failure { code: 3, message: format!("residual {r:e} exceeds {bound:e}") });
            }
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(Report, String), Failure> {
    let o = &cli.opts;
    let report = |input: String, method: &str, result: Value, certificate: Value| Report {
        input,
        method: method.to_string(),
        result,
        certificate,
        seed: o.seed,
        prime: None,
        residual: None,
    };
    match &cli.command {
        Command::Rank { form } => {
            let (text, f) = read_form(form)?;
            let out = dispatch::rank(&f, &rank_options(o)?)?;
            let dec = out.decomposition.as_ref().map(|d| d.report());
            let human = match out.rank() {
                Some(r) => format!("rank {r} ({})", out.method.label()),
                None => format!(
                    "rank in [{}, {}] ({})",
                    out.interval.lower,
                    out.interval.upper.map_or("?".to_string(), |u| u.to_string()),
                    out.method.label()
                ),
            };
            let mut rep = report(
                text,
                out.method.label(),
                json!({
                    "rank": out.rank(),
                    "lower": out.interval.lower,
                    "upper": out.interval.upper,
                    "border_rank": out.border_rank,
                    "essential_variables": out.essential_variables,
                }),
                json!({ "trail": out.trail, "bounds": out.bounds, "decomposition": dec }),
            );
            rep.residual = out.decomposition.as_ref().map(|d| d.residual);
            Ok((rep, human))
        }
        Command::BorderRank { form } => {
            let (text, f) = read_form(form)?;
            let (b, method) = dispatch::border_rank(&f, &rank_options(o)?)?;
            let rep = report(text, method.label(), json!({ "border_rank": b }), Value::Null);
            Ok((rep, format!("border rank {b} ({})", method.label())))
        }
        Command::Decompose { form } => {
            let (text, f) = read_form(form)?;
            let opts = rank_options(o)?;
            let (dec, method) = dispatch::decompose(&f, &opts)?;
            reverify(&f, &dec, opts.tol)?;
            let human = format!(
                "{} summands, residual {:e}\n{}",
                dec.len(),
                dec.residual,
                dec.to_expression()
            );
            let mut rep = report(
                text,
                method.label(),
                json!({ "summands": dec.len(), "expression": dec.to_expression() }),
                serde_json::to_value(dec.report()).expect("serializable"),
            );
            rep.residual = Some(dec.residual);
            Ok((rep, human))
        }
        Command::Apolar { form } => {
            let (text, f) = read_form(form)?;
            let hf = hilbert_function(&f)?;
            let gens = minimal_generator_degrees(&f)?;
            let length = apolar_length(&f)?;
            let m = essential_variables(&f)?.m;
            let human = format!(
                "hilbert function {hf:?}\nlength {length}\nessential variables {m}\nminimal generator degrees {}",
                gens.iter().map(|(d, c)| format!("{c}x{d}")).collect::<Vec<_>>().join(" ")
            );
            let rep = report(
                text,
                "catalecticant ranks",
                json!({ "hilbert_function": hf, "length": length, "essential_variables": m }),
                json!({ "minimal_generator_degrees": gens }),
            );
            Ok((rep, human))
        }
        Command::Hilbert { fatpoints } => {
            let (n, d, mults) = (fatpoints[0] as usize, fatpoints[1], &fatpoints[2..]);
            if n == 0 || mults.contains(&0) {
                return Err(argument("need n >= 1 and positive multiplicities".into()));
            }
            let cfg = secant_config(o);
            let hf = generic_fat_point_hf(n, d, mults, &cfg)?;
            let forms = waring::monomial::binomial(n as i64 + i64::from(d), n as i64);
            let conditions: u64 =
                mults.iter().map(|&m| waring::monomial::binomial(n as i64 + i64::from(m) - 1, n as i64)).sum();
            let expected = forms.min(conditions);
            let mut rep = report(
                format!("fatpoints {n} {d} {mults:?}"),
                "fat points over prime fields",
                json!({ "hilbert_function": hf, "expected": expected }),
                json!({ "trials": cfg.trials }),
            );
            rep.prime = Some(cfg.primes.clone());
            Ok((rep, format!("HF = {hf} (expected {expected})")))
        }
        Command::SecantDim { spec, s } => {
            let v: VarietySpec = spec.parse()?;
            let cfg = secant_config(o);
            let r = secant_dim(&v, *s, &cfg)?;
            let human = format!(
                "{} s={}: expected {}, actual {}, defect {}{}",
                r.spec,
                r.s,
                r.expected,
                r.actual,
                r.defect,
                if r.primes_agree { "" } else { " (primes disagree)" }
            );
            let mut rep = report(
                spec.clone(),
                "tangent spans over prime fields",
                json!({ "expected": r.expected, "actual": r.actual, "defect": r.defect }),
                serde_json::to_value(&r).expect("serializable"),
            );
            rep.method = serde_json::to_value(r.method)
                .ok()
                .and_then(|m| m.as_str().map(str::to_string))
                .unwrap_or_default();
            rep.prime = Some(cfg.primes.clone());
            Ok((rep, human))
        }
        Command::DefectScan { spec, s_range } => {
            let v: VarietySpec = spec.parse()?;
            let range = parse_range(s_range)?;
            let cfg = secant_config(o);
            let reports = defect_scan(&v, range, &cfg)?;
            let csv = reports_to_csv(&reports);
            let mut rep = report(
                spec.clone(),
                "defect scan",
                serde_json::to_value(&reports).expect("serializable"),
                Value::Null,
            );
            rep.prime = Some(cfg.primes.clone());
            Ok((rep, csv.trim_end().to_string()))
        }
        Command::Bounds { n, d } => {
            let ub = upper_bounds(*n, *d)?;
            let human = format!(
                "landsberg-teitler {}\njelisiejew {}\nblekherman-teitler {}\ngeneric rank {}\nbest {}",
                ub.landsberg_teitler,
                ub.jelisiejew.map_or("n/a".into(), |j| j.to_string()),
                ub.blekherman_teitler,
                ub.generic_rank,
                ub.best()
            );
            let rep = report(
                format!("n={n} d={d}"),
                "upper bounds",
                serde_json::to_value(&ub).expect("serializable"),
                json!({ "generic_rank": generic_waring_rank(*n, *d)? }),
            );
            Ok((rep, human))
        }
        Command::GenericRank { spec } => {
            let v: VarietySpec = spec.parse()?;
            let cfg = secant_config(o);
            let g = generic_rank(&v, &cfg)?;
            let human = match g.oracle {
                Some(x) => format!("generic rank {} (closed form {x})", g.rank),
                None => format!("generic rank {}", g.rank),
            };
            let mut rep = report(
                spec.clone(),
                "secant filling",
                json!({ "generic_rank": g.rank }),
                serde_json::to_value(&g).expect("serializable"),
            );
            rep.prime = Some(cfg.primes.clone());
            Ok((rep, human))
        }
    }
}

fn parse_range(text: &str) -> Result<std::ops::RangeInclusive<u64>, Failure> {
    let bad = || argument(format!("invalid range {text:?}; use a..b"));
    let (a, b) = text
        .split_once("..=")
        .or_else(|| text.split_once(".."))
        .or_else(|| text.split_once('-'))
        .ok_or_else(bad)?;
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((rep, human)) => {
            if cli.opts.json {
                println!("{}", serde_json::to_string(&rep).expect("serializable"));
            } else {
                println!("{human}");
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
