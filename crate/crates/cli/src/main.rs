use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use levy_skew::chain_diagnostics::{chain_report, parse_chain_csv, write_chain_csv, OptionChain};
use levy_skew::model_file::{parse_kv, spec_from_map, model_to_kv};
use levy_skew::numfmt::fmt_sig;
use levy_skew::skew_analytics::{
    duality_legs, monotonicity_scan, sk, sk_excess_sign_scan, ScanMarket, DEFAULT_ZERO_TOL,
};
use levy_skew::{
    euro_call, euro_put, mc_price, merton_series, FourierConfig, LevyError, LevyModel,
    MarketParams, OptionKind,
};

const DIGITS: usize = 10;

#[derive(Parser)]
#[command(name = "levy-skew", version, about = "Lévy-model option pricing, duality and skew diagnostics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Price a European option.
    Price(PriceArgs),
    /// Print the dual model and the put-call duality residual (exit 4 if above 2·tol).
    Dual(DualArgs),
    /// Skewness premium table: x,k_call,k_put,sk,excess.
    Sk(SkArgs),
    /// Sign scan of the SK excess over beta and x, plus a price-monotonicity scan over beta.
    Scan(ScanArgs),
    /// Paired-strike reports and a symmetry verdict for an option chain CSV.
    Chain(ChainArgs),
    /// Write a synthetic European option chain priced from a model.
    SynthChain(SynthArgs),
}

#[derive(Args, Clone)]
struct ModelArgs {
    /// Key-value model file; inline model flags are then not allowed.
    #[arg(long, conflicts_with_all = ["family", "sigma", "lambda", "mu", "delta_j", "c", "g", "m", "y", "a_m", "b_m", "d_m"])]
    model: Option<PathBuf>,
    /// none, merton, cgmy or meixner.
    #[arg(long)]
    family: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    delta_j: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    g: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    m: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    y: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    a_m: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b_m: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    d_m: Option<f64>,
    /// Re-tilt the jump measure to this beta before use.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
}

#[derive(Args, Clone)]
struct PricerArgs {
    #[arg(long, default_value_t = 0.75)]
    alpha: f64,
    #[arg(long, default_value_t = 200.0)]
    u_max: f64,
    #[arg(long, default_value_t = 2048)]
    n_nodes: usize,
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
}

impl PricerArgs {
    fn config(&self) -> Result<FourierConfig, LevyError> {
        let cfg = FourierConfig {
            damping_alpha: self.alpha,
            u_max: self.u_max,
            n_nodes: self.n_nodes,
            abs_tol: self.tol,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Fourier,
    Mc,
    Series,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Call,
    Put,
}

#[derive(Args)]
struct PriceArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    pricer: PricerArgs,
    #[arg(long, visible_alias = "f0")]
    s0: f64,
    #[arg(long)]
    k: f64,
    /// Defaults to the model file's r, else 0.
    #[arg(long)]
    r: Option<f64>,
    /// Defaults to the model file's delta, else 0.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    t: f64,
    #[arg(long, value_enum, default_value = "call")]
    kind: Kind,
    #[arg(long, value_enum, default_value = "fourier")]
    method: Method,
    #[arg(long, default_value_t = 100_000)]
    paths: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Number of Poisson terms for the series method.
    #[arg(long, default_value_t = 60)]
    terms: usize,
}

#[derive(Args)]
struct DualArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    pricer: PricerArgs,
    #[arg(long, visible_alias = "f0")]
    s0: f64,
    #[arg(long)]
    k: f64,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    t: f64,
}

#[derive(Args)]
struct SkArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    pricer: PricerArgs,
    #[arg(long, visible_alias = "s0")]
    f0: f64,
    /// Rate; the dividend rate is set equal (futures convention).
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    t: f64,
    /// Comma-separated moneyness offsets.
    #[arg(long, value_delimiter = ',', required = true)]
    x: Vec<f64>,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    pricer: PricerArgs,
    #[arg(long, visible_alias = "s0")]
    f0: f64,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    t: f64,
    /// Comma-separated beta grid.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    betas: Vec<f64>,
    /// Comma-separated moneyness offsets for the sign scan.
    #[arg(long, value_delimiter = ',', required = true)]
    x: Vec<f64>,
    /// Strike of the monotonicity scan; defaults to 1.05·F0.
    #[arg(long)]
    k: Option<f64>,
    /// Band within which an excess counts as zero.
    #[arg(long, default_value_t = DEFAULT_ZERO_TOL)]
    zero_tol: f64,
    /// Write sign_scan.csv and monotonicity.csv here instead of stdout.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct ChainArgs {
    /// Chain CSV with #F= header and strike,call_mid,put_mid columns.
    #[arg(long)]
    input: PathBuf,
    /// Write calls_table.csv, puts_table.csv and summary.txt here instead of stdout.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    pricer: PricerArgs,
    #[arg(long, visible_alias = "s0")]
    f0: f64,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    t: f64,
    /// Comma-separated strikes quoted for both calls and puts.
    #[arg(long, value_delimiter = ',', required = true)]
    strikes: Vec<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Everything that ends a run early, with its exit code.
#[derive(Debug)]
enum Failure {
    Levy(LevyError),
    Input(String),
    Io(String),
}

impl From<LevyError> for Failure {
    fn from(e: LevyError) -> Self {
        Failure::Levy(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl Failure {
    fn report(&self) -> ExitCode {
        let (kind, msg, code) = match self {
            Failure::Levy(e) => (e.kind(), e.to_string(), if e.is_numerical() { 3 } else { 2 }),
            Failure::Input(m) => ("InvalidInput", m.clone(), 2),
            Failure::Io(m) => ("Io", m.clone(), 2),
        };
        eprintln!("error kind={kind} exit={code} message={msg:?}");
        ExitCode::from(code)
    }
}

type Run = Result<ExitCode, Failure>;

struct LoadedModel {
    model: LevyModel,
    r: Option<f64>,
    delta: Option<f64>,
}

fn load_model(args: &ModelArgs) -> Result<LoadedModel, Failure> {
    let map = match &args.model {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            parse_kv(&text)?
        }
        None => {
            let mut map = BTreeMap::new();
            let family = args
                .family
                .clone()
                .ok_or_else(|| Failure::Input("either --model or --family is required".into()))?;
            map.insert("family".to_string(), family);
            let inline = [
                ("sigma", args.sigma),
                ("lambda", args.lambda),
                ("mu", args.mu),
                ("delta_j", args.delta_j),
                ("c", args.c),
                ("g", args.g),
                ("m", args.m),
                ("y", args.y),
                ("a_m", args.a_m),
                ("b_m", args.b_m),
                ("d_m", args.d_m),
            ];
            for (k, v) in inline {
                if let Some(v) = v {
                    map.insert(k.to_string(), v.to_string());
                }
            }
            map
        }
    };
    let spec = spec_from_map(&map)?;
    let model = match args.beta {
        Some(b) => spec.model.with_beta(b)?,
        None => spec.model,
    };
    Ok(LoadedModel {
        model,
        r: spec.r,
        delta: spec.delta,
    })
}

/// Flag value, else the model file's value, else 0.
fn rate(flag: Option<f64>, file: Option<f64>) -> f64 {
    flag.or(file).unwrap_or(0.0)
}

fn fmt(v: f64) -> String {
    fmt_sig(v, DIGITS)
}

/// Prices within the tolerance of zero are reported as zero.
fn fmt_price(v: f64, tol: f64) -> String {
    fmt(if v.abs() < tol { 0.0 } else { v })
}

fn cmd_price(a: &PriceArgs) -> Run {
    let loaded = load_model(&a.model)?;
    let (r, delta) = (rate(a.r, loaded.r), rate(a.delta, loaded.delta));
    let market = MarketParams::new(a.s0, r, delta, a.t)?;
    let model = loaded.model.mean_correct(r, delta)?;
    let kind = match a.kind {
        Kind::Call => OptionKind::Call,
        Kind::Put => OptionKind::Put,
    };
    let cfg = a.pricer.config()?;
    let mut out = io::stdout().lock();
    match a.method {
        Method::Fourier => {
            let p = match kind {
                OptionKind::Call => euro_call(&market, &model, a.k, &cfg)?,
                OptionKind::Put => euro_put(&market, &model, a.k, &cfg)?,
            };
            writeln!(out, "price={}", fmt_price(p, cfg.abs_tol))?;
        }
        Method::Series => {
            let p = merton_series(&market, &model, a.k, kind, a.terms)?;
            writeln!(out, "price={}", fmt_price(p, cfg.abs_tol))?;
        }
        Method::Mc => {
            let res = mc_price(&market, &model, a.k, kind, a.paths, a.seed)?;
            writeln!(
                out,
                "price={} std_error={} paths={} seed={}",
                fmt_price(res.estimate, cfg.abs_tol),
                fmt(res.std_error),
                res.n_paths,
                res.seed
            )?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_dual(a: &DualArgs) -> Run {
    let loaded = load_model(&a.model)?;
    let (r, delta) = (rate(a.r, loaded.r), rate(a.delta, loaded.delta));
    let cfg = a.pricer.config()?;
    let model = loaded.model.mean_correct(r, delta)?;
    let dual = model.dual(r, delta)?;
    let legs = duality_legs(&model, a.s0, a.k, r, delta, a.t, &cfg)?;
    let residual = legs.residual();
    let mut out = io::stdout().lock();
    write!(out, "{}", model_to_kv(&dual))?;
    writeln!(out, "drift = {}", fmt(dual.drift))?;
    writeln!(out, "r = {}", fmt(delta))?;
    writeln!(out, "delta = {}", fmt(r))?;
    if let (Ok(b), Ok(bd)) = (model.beta(), dual.beta()) {
        writeln!(out, "beta = {}", fmt(b))?;
        writeln!(out, "dual_beta = {}", fmt(bd))?;
    }
    writeln!(out, "call = {}", fmt_price(legs.call, cfg.abs_tol))?;
    writeln!(out, "dual_put = {}", fmt_price(legs.dual_put, cfg.abs_tol))?;
    writeln!(out, "residual = {}", fmt(residual))?;
    if residual <= 2.0 * cfg.abs_tol {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!(
            "check failed kind=DualityResidual residual={} limit={}",
            fmt(residual),
            fmt(2.0 * cfg.abs_tol)
        );
        Ok(ExitCode::from(4))
    }
}

fn cmd_sk(a: &SkArgs) -> Run {
    let loaded = load_model(&a.model)?;
    let r = rate(a.r, loaded.r);
    let cfg = a.pricer.config()?;
    let mut out = io::stdout().lock();
    writeln!(out, "x,k_call,k_put,sk,excess")?;
    for &x in &a.x {
        match sk(&loaded.model, a.f0, r, a.t, x, &cfg) {
            Ok(p) => writeln!(
                out,
                "{},{},{},{},{}",
                fmt(p.x),
                fmt(p.k_call),
                fmt(p.k_put),
                fmt(p.sk),
                fmt(p.excess)
            )?,
            Err(e @ LevyError::DegeneratePut { .. }) => {
                eprintln!("warning kind={} x={} message={:?}", e.kind(), fmt(x), e.to_string());
                writeln!(out, "{},{},{},NA,NA", fmt(x), fmt((1.0 + x) * a.f0), fmt(a.f0 / (1.0 + x)))?;
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_scan(a: &ScanArgs) -> Run {
    let loaded = load_model(&a.model)?;
    let cfg = a.pricer.config()?;
    let mkt = ScanMarket {
        f0: a.f0,
        r: rate(a.r, loaded.r),
        t: a.t,
    };
    MarketParams::futures(mkt.f0, mkt.r, mkt.t)?;
    let strike = a.k.unwrap_or(1.05 * a.f0);

    let cells = sk_excess_sign_scan(&loaded.model, &a.betas, &a.x, mkt, &cfg, a.zero_tol);
    let mut sign_csv = String::from("beta,x,sk,excess,sign,predicted_sign\n");
    for cell in &cells {
        let (sk, excess, sign) = match &cell.outcome {
            Ok(o) => (fmt(o.sk), fmt(o.excess), o.sign.to_string()),
            Err(e) => {
                eprintln!(
                    "warning kind={} beta={} x={} message={:?}",
                    e.kind(),
                    fmt(cell.beta),
                    fmt(cell.x),
                    e.to_string()
                );
                ("NA".into(), "NA".into(), "NA".into())
            }
        };
        sign_csv.push_str(&format!(
            "{},{},{sk},{excess},{sign},{}\n",
            fmt(cell.beta),
            fmt(cell.x),
            cell.predicted_sign()
        ));
    }

    let mono = monotonicity_scan(&loaded.model, &a.betas, strike, mkt, &cfg);
    let mut mono_csv = String::from("beta,call\n");
    for row in &mono.rows {
        let call = match &row.call {
            Ok(c) => fmt_price(*c, cfg.abs_tol),
            Err(e) => {
                eprintln!("warning kind={} beta={} message={:?}", e.kind(), fmt(row.beta), e.to_string());
                "NA".into()
            }
        };
        mono_csv.push_str(&format!("{},{call}\n", fmt(row.beta)));
    }
    let verdict = format!("strike={}\nmonotonicity={}\n", fmt(strike), mono.verdict.as_str());

    match &a.out_dir {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join("sign_scan.csv"), sign_csv)?;
            fs::write(dir.join("monotonicity.csv"), mono_csv)?;
            print!("{verdict}");
        }
        None => print!("{sign_csv}\n{mono_csv}\n{verdict}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn read_chain(path: &Path) -> Result<OptionChain, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(parse_chain_csv(&text)?)
}

fn cmd_chain(a: &ChainArgs) -> Run {
    let chain = read_chain(&a.input)?;
    let report = chain_report(&chain)?;
    let mut calls = Vec::new();
    report.calls_table.write_csv(&mut calls)?;
    let mut puts = Vec::new();
    report.puts_table.write_csv(&mut puts)?;
    let summary = report.summary.to_kv();
    match &a.out_dir {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join("calls_table.csv"), &calls)?;
            fs::write(dir.join("puts_table.csv"), &puts)?;
            fs::write(dir.join("summary.txt"), &summary)?;
            print!("{summary}");
        }
        None => {
            let mut out = io::stdout().lock();
            out.write_all(&calls)?;
            writeln!(out)?;
            out.write_all(&puts)?;
            writeln!(out)?;
            write!(out, "{summary}")?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_synth(a: &SynthArgs) -> Run {
    let loaded = load_model(&a.model)?;
    let cfg = a.pricer.config()?;
    let mut strikes = a.strikes.clone();
    strikes.sort_by(f64::total_cmp);
    let r = rate(a.r, loaded.r);
    let chain = OptionChain::synthetic(&loaded.model, a.f0, r, a.t, &strikes, &strikes, &cfg)?;
    match &a.out {
        Some(path) => write_chain_csv(&chain, fs::File::create(path)?)?,
        None => write_chain_csv(&chain, io::stdout().lock())?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Price(a) => cmd_price(a),
        Command::Dual(a) => cmd_dual(a),
        Command::Sk(a) => cmd_sk(a),
        Command::Scan(a) => cmd_scan(a),
        Command::Chain(a) => cmd_chain(a),
        Command::SynthChain(a) => cmd_synth(a),
    };
    result.unwrap_or_else(|f| f.report())
}
