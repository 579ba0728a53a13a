use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use fsdim_core::approx::{approx_chain, scaled_chain, ApproxChain, Mode};
use fsdim_core::enumerator::{from_spec, SeparatorEnumerator};
use fsdim_core::equidist::{
    digit_window_residue_stream, equidist_report, nearlinear_bound, nearlinear_residue_stream,
    ResidueStats,
};
use fsdim_core::kdim::{fmt_k, ratio_curve, RatioCurve, ScaleKind};
use fsdim_core::rat::{check_unit, fmt_rat, parse_rat, rat, Rat};
use fsdim_core::sequence::{Champernowne, Constant, DigitSource, RationalDigits};
use fsdim_core::verify::{self, CheckReport, VerifyConfig};
use fsdim_core::{Alphabet, Fst};

#[derive(Parser)]
#[command(name = "fsdim", version, about = "Separator enumerators and relativized finite-state dimension")]
struct Cli {
    /// Alphabet size.
    #[arg(long, global = true, default_value_t = 2)]
    k: u32,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an enumerator on one word.
    Eval {
        #[command(flatten)]
        f: EnumArgs,
        /// Digits, e.g. 0110.
        word: String,
    },
    /// Best-from-below chain a_0..a_N and its scaled integers.
    Chain {
        #[command(flatten)]
        f: EnumArgs,
        /// Target point "p/q".
        #[arg(long)]
        x: String,
        #[arg(long = "N", default_value_t = 16)]
        n: usize,
        #[arg(long, default_value = "fast")]
        mode: String,
    },
    /// Residue frequencies of b_n mod k^m for m = 1..=M.
    Equidist {
        /// nearlinear, champernowne, constant:<a> or rational:<p/q>.
        #[arg(long, default_value = "nearlinear")]
        source: String,
        #[arg(long = "N", default_value_t = 100_000)]
        n: u64,
        /// Largest m.
        #[arg(long, default_value_t = 3)]
        m: u32,
        /// Fixed threshold "p/q"; nearlinear defaults to (m + k^m)/N.
        #[arg(long)]
        threshold: Option<String>,
    },
    /// Ratio curve K^{T,f}_δ(x) / log_k(1/δ) over a family of scales.
    Kcurve {
        #[command(flatten)]
        f: EnumArgs,
        /// identity, zero:<L> or a transducer file.
        #[arg(long, default_value = "identity")]
        t: String,
        #[arg(long)]
        x: String,
        /// pair, nearlinear or power.
        #[arg(long, default_value = "power")]
        scale: String,
        /// Scale indices n-min..=n.
        #[arg(long, default_value_t = 1)]
        n_min: usize,
        #[arg(long, default_value_t = 16)]
        n: usize,
    },
    /// Run verification suites; exit status 1 if any check fails.
    Verify {
        /// Suite name or "all".
        #[arg(default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Corrupt each suite's object so its checks should fail.
        #[arg(long)]
        inject_fault: bool,
        /// Report elapsed_ms as 0 for byte-stable output.
        #[arg(long)]
        no_timing: bool,
    },
}

#[derive(clap::Args)]
struct EnumArgs {
    /// std, pair:f0, pair:f1, nearlinear or coherent:<machine>.
    #[arg(long = "f", default_value = "std")]
    spec: String,
    /// Mealy machine file, used by `--f coherent`.
    #[arg(long)]
    machine: Option<PathBuf>,
}

impl EnumArgs {
    fn build(&self, a: Alphabet) -> Result<Box<dyn SeparatorEnumerator>> {
        let spec = match (&self.spec[..], &self.machine) {
            ("coherent", Some(p)) => format!("coherent:{}", p.display()),
            ("coherent", None) => bail!("--f coherent needs --machine <file>"),
            (_, Some(_)) => bail!("--machine only applies to --f coherent"),
            (s, None) => s.to_string(),
        };
        Ok(from_spec(&spec, a)?)
    }
}

/// Input problems exit with 2, failed checks with 1.
enum Outcome {
    Ok(String),
    ChecksFailed(String),
}

fn parse_x(s: &str) -> Result<Rat> {
    let x = parse_rat(s).with_context(|| format!("--x {s}"))?;
    check_unit(&x)?;
    Ok(x)
}

#[derive(Serialize)]
struct ChainRow {
    n: usize,
    a_n: String,
    b_n: String,
    integer: bool,
}

#[derive(Serialize)]
struct ChainJson {
    enumerator: String,
    k: u8,
    x: String,
    rows: Vec<ChainRow>,
}

fn chain_json(c: &ApproxChain) -> ChainJson {
    let (b, _) = scaled_chain(c);
    ChainJson {
        enumerator: c.id.clone(),
        k: c.k,
        x: fmt_rat(&c.x),
        rows: b
            .iter()
            .enumerate()
            .map(|(i, bn)| ChainRow {
                n: i + 1,
                a_n: fmt_rat(&c.values[i + 1]),
                b_n: fmt_rat(bn),
                integer: bn.is_integer(),
            })
            .collect(),
    }
}

#[derive(Serialize)]
struct CurveRowJson {
    n: usize,
    delta: String,
    logscale: f64,
    k: String,
    ratio: Option<f64>,
}

#[derive(Serialize)]
struct CurveJson {
    enumerator: String,
    transducer: String,
    x: String,
    monotone: bool,
    rows: Vec<CurveRowJson>,
}

fn curve_json(c: &RatioCurve) -> CurveJson {
    CurveJson {
        enumerator: c.enumerator.clone(),
        transducer: c.transducer.clone(),
        x: fmt_rat(&c.x),
        monotone: c.is_monotone(),
        rows: c
            .rows
            .iter()
            .map(|r| CurveRowJson {
                n: r.scale.n,
                delta: fmt_rat(&r.scale.delta),
                logscale: r.scale.logscale,
                k: fmt_k(r.k),
                ratio: r.ratio().filter(|v| v.is_finite()),
            })
            .collect(),
    }
}

fn parse_transducer(spec: &str, a: Alphabet) -> Result<Fst> {
    if spec == "identity" {
        return Ok(Fst::identity(a));
    }
    if let Some(l) = spec.strip_prefix("zero:") {
        let l: usize = l.parse().with_context(|| format!("zero:<L> needs an integer, got '{l}'"))?;
        return Ok(Fst::zero_emitter(a, l)?);
    }
    let text = std::fs::read_to_string(spec).with_context(|| format!("transducer '{spec}'"))?;
    let t = Fst::from_text(&text)?;
    if t.alphabet() != a {
        bail!("transducer alphabet k={} does not match --k {}", t.k(), a.k());
    }
    Ok(t)
}

fn parse_source(spec: &str, a: Alphabet) -> Result<Box<dyn DigitSource>> {
    if spec == "champernowne" {
        return Ok(Box::new(Champernowne::new(a)));
    }
    if let Some(s) = spec.strip_prefix("constant:") {
        let symbol: u8 = s.parse().with_context(|| format!("constant:<a>, got '{s}'"))?;
        if symbol >= a.k() {
            bail!("symbol {symbol} not below k = {}", a.k());
        }
        return Ok(Box::new(Constant { alphabet: a, symbol }));
    }
    if let Some(s) = spec.strip_prefix("rational:") {
        return Ok(Box::new(RationalDigits::new(a, parse_x(s)?)?));
    }
    bail!("unknown source '{spec}' (nearlinear, champernowne, constant:<a>, rational:<p/q>)")
}

fn run(cli: &Cli) -> Result<Outcome> {
    let a = Alphabet::new(cli.k)?;
    let json = matches!(cli.format, Format::Json);
    let text = match &cli.command {
        Command::Eval { f, word } => {
            let f = f.build(a)?;
            let w = a.parse_word(word)?;
            let v = fmt_rat(&f.eval(&w));
            if json {
                serde_json::json!({ "enumerator": f.id(), "word": word, "value": v }).to_string() + "\n"
            } else {
                v + "\n"
            }
        }
        Command::Chain { f, x, n, mode } => {
            let f = f.build(a)?;
            let x = parse_x(x)?;
            let mode: Mode = mode.parse()?;
            let c = approx_chain(f.as_ref(), &x, *n, mode)?;
            if json {
                serde_json::to_string_pretty(&chain_json(&c))? + "\n"
            } else {
                c.to_csv()
            }
        }
        Command::Equidist { source, n, m, threshold } => {
            if *m == 0 {
                bail!("--m must be at least 1");
            }
            let fixed = threshold.as_deref().map(parse_rat).transpose()?;
            let stats: Vec<ResidueStats> = if source == "nearlinear" {
                (1..=*m)
                    .map(|m| nearlinear_residue_stream(a.k(), m, *n))
                    .collect::<fsdim_core::Result<_>>()?
            } else {
                let src = parse_source(source, a)?;
                (1..=*m)
                    .map(|m| digit_window_residue_stream(src.as_ref(), m, *n))
                    .collect::<fsdim_core::Result<_>>()?
            };
            let rep = equidist_report(source, stats, |s| match &fixed {
                Some(t) => t.clone(),
                None if source == "nearlinear" => nearlinear_bound(s),
                None => rat(1, 50),
            });
            if json {
                serde_json::to_string_pretty(&rep)? + "\n"
            } else {
                rep.to_csv()
            }
        }
        Command::Kcurve { f, t, x, scale, n_min, n } => {
            let f = f.build(a)?;
            let x = parse_x(x)?;
            let kind: ScaleKind = scale.parse()?;
            let tr = parse_transducer(t, a)?;
            let curve = ratio_curve(&tr, t, f.as_ref(), &x, kind.range(a.k(), *n_min..=*n))?;
            if json {
                serde_json::to_string_pretty(&curve_json(&curve))? + "\n"
            } else {
                curve.to_csv()
            }
        }
        Command::Verify {
            suite,
            seed,
            inject_fault,
            no_timing,
        } => {
            let cfg = VerifyConfig {
                seed: *seed,
                inject_fault: *inject_fault,
            };
            let mut reports: Vec<CheckReport> = if suite == "all" {
                verify::run_all(&cfg)
            } else {
                verify::run_suite(suite, &cfg)?
            };
            if *no_timing {
                reports.iter_mut().for_each(|r| r.elapsed_ms = 0);
            }
            let body = if json {
                serde_json::to_string_pretty(&reports)? + "\n"
            } else {
                let mut s = String::from("suite,check,status,elapsed_ms,details\n");
                for r in &reports {
                    let status = if r.passed() { "pass" } else { "fail" };
                    s += &format!(
                        "{},{},{status},{},{}\n",
                        csv_field(&r.suite),
                        csv_field(&r.check),
                        r.elapsed_ms,
                        csv_field(&r.details)
                    );
                }
                s
            };
            return Ok(if verify::all_passed(&reports) {
                Outcome::Ok(body)
            } else {
                Outcome::ChecksFailed(body)
            });
        }
    };
    Ok(Outcome::Ok(text))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli).and_then(|o| {
        let (text, code) = match o {
            Outcome::Ok(t) => (t, ExitCode::SUCCESS),
            Outcome::ChecksFailed(t) => (t, ExitCode::from(1)),
        };
        emit(&cli, &text)?;
        Ok(code)
    });
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
