//! `meadows`: evaluate and flatten terms over common meadows of reals,
//! compute information measures from pmf files, and run identity suites.
//!
//! Exit status: 0 on success, 1 when a check suite reports a failure,
//! 2 on usage or input errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use meadows::eval::{eval, Environment};
use meadows::flatten::flatten;
use meadows::measures::{
    build_cross_entropy_term, build_entropy_term, build_js_term, build_kl_term, cross_entropy,
    entropy, js_divergence, kl_divergence, measure_environment, MeasureVariant, Pmf,
};
use meadows::oracle::{run_suite, SuiteConfig};
use meadows::term::{parse, Term};
use meadows::value::{parse_value, Carrier, CarrierKind, Mode, Value};
use num_rational::BigRational;

#[derive(Parser)]
#[command(
    name = "meadows",
    version,
    about = "Totalised real arithmetic with bot, signed infinities and Suppes-Ono semantics: \
             evaluate terms, flatten fracterms, compute entropy-style measures, run check suites"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    /// Common meadow: 1/0 = bot, log2(x) = bot for x <= 0.
    Bot,
    /// Adds +inf/-inf; log2(0) = -inf.
    Signed,
    /// Suppes-Ono: 1/0 = 0 and log2(x) = 0 for x <= 0.
    Suppes,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Bot => Mode::Bottom,
            ModeArg::Signed => Mode::Signed,
            ModeArg::Suppes => Mode::SuppesOno,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CarrierArg {
    /// Arbitrary-precision rationals; log2 only of powers of two.
    Exact,
    /// Binary floating point, printed with 12 significant digits.
    Approx,
}

impl From<CarrierArg> for CarrierKind {
    fn from(c: CarrierArg) -> CarrierKind {
        match c {
            CarrierArg::Exact => CarrierKind::Exact,
            CarrierArg::Approx => CarrierKind::Approx,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    /// Compute over values, no term.
    Direct,
    /// The left-sequential form `-sum a(ci) |*| log2 b(ci)`.
    Seqmul,
    /// The form with division, `sum a(ci) |*| log2(1/b(ci))`.
    SeqmulDiv,
    /// Inlined composite operator (entropy only).
    CompositeF,
    /// Sign-squared chain form.
    SignChain,
    /// Guarded two-argument summand (cross-entropy only).
    FXy,
}

impl From<VariantArg> for MeasureVariant {
    fn from(v: VariantArg) -> MeasureVariant {
        match v {
            VariantArg::Direct => MeasureVariant::Direct,
            VariantArg::Seqmul => MeasureVariant::SeqMul,
            VariantArg::SeqmulDiv => MeasureVariant::SeqMulDiv,
            VariantArg::CompositeF => MeasureVariant::CompositeF,
            VariantArg::SignChain => MeasureVariant::SignChain,
            VariantArg::FXy => MeasureVariant::FXy,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a term, e.g. `meadows eval "1/0 + 5"`.
    Eval {
        term: String,
        #[arg(long, value_enum, default_value = "bot")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "approx")]
        carrier: CarrierArg,
        /// Bindings `x=1/2` or `alpha(c1)=1/4`; repeatable.
        #[arg(long = "bind", value_name = "NAME=VALUE")]
        bind: Vec<String>,
    },
    /// Rewrite a bottom-mode term into a flat fracterm `(p) / (q)`.
    Flatten {
        term: String,
        #[arg(long, value_enum, default_value = "bot")]
        mode: ModeArg,
    },
    /// Entropy of a pmf file.
    Entropy {
        pmf: PathBuf,
        #[arg(long, value_enum, default_value = "direct")]
        variant: VariantArg,
        #[arg(long, value_enum, default_value = "approx")]
        carrier: CarrierArg,
    },
    /// Cross-entropy of two pmf files over the same labels.
    Crossentropy {
        p: PathBuf,
        q: PathBuf,
        #[arg(long, value_enum, default_value = "direct")]
        variant: VariantArg,
        #[arg(long, value_enum, default_value = "approx")]
        carrier: CarrierArg,
    },
    /// Kullback-Leibler divergence of two pmf files.
    Kl {
        p: PathBuf,
        q: PathBuf,
        #[arg(long, value_enum, default_value = "direct")]
        variant: VariantArg,
        #[arg(long, value_enum, default_value = "approx")]
        carrier: CarrierArg,
    },
    /// Jensen-Shannon divergence of two pmf files (no 1/2 factors).
    Js {
        p: PathBuf,
        q: PathBuf,
        #[arg(long, value_enum, default_value = "direct")]
        variant: VariantArg,
        #[arg(long, value_enum, default_value = "approx")]
        carrier: CarrierArg,
    },
    /// Check the guarded Bayes-Price identity over all event pairs of a
    /// pmf file.
    Bayes { pmf: PathBuf },
    /// Run a named check suite (or `all`).
    Check {
        suite: String,
        /// Seed for the random-term stream of the flattening sweep.
        #[arg(long)]
        seed: Option<u64>,
        /// Number of random terms in the flattening sweep.
        #[arg(long)]
        terms: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Eval {
            term,
            mode,
            carrier,
            bind,
        } => {
            let t = parse(&term).map_err(|e| e.to_string())?;
            let mode = Mode::from(mode);
            let rendered = match CarrierKind::from(carrier) {
                CarrierKind::Exact => eval_with::<BigRational>(&t, mode, &bind)?,
                CarrierKind::Approx => eval_with::<f64>(&t, mode, &bind)?,
            };
            println!("{rendered}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Flatten { term, mode } => {
            if mode != ModeArg::Bot {
                return Err("flatten is defined for bottom-mode terms only".into());
            }
            let t = parse(&term).map_err(|e| e.to_string())?;
            let f = flatten(&t).map_err(|e| e.to_string())?;
            println!("{f}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Entropy {
            pmf,
            variant,
            carrier,
        } => {
            let p = load_pmf(&pmf)?;
            print_measure(MeasureKind::Entropy, &[p], variant.into(), carrier.into())
        }
        Command::Crossentropy {
            p,
            q,
            variant,
            carrier,
        } => {
            let pmfs = [load_pmf(&p)?, load_pmf(&q)?];
            print_measure(MeasureKind::CrossEntropy, &pmfs, variant.into(), carrier.into())
        }
        Command::Kl {
            p,
            q,
            variant,
            carrier,
        } => {
            let pmfs = [load_pmf(&p)?, load_pmf(&q)?];
            print_measure(MeasureKind::Kl, &pmfs, variant.into(), carrier.into())
        }
        Command::Js {
            p,
            q,
            variant,
            carrier,
        } => {
            let pmfs = [load_pmf(&p)?, load_pmf(&q)?];
            print_measure(MeasureKind::Js, &pmfs, variant.into(), carrier.into())
        }
        Command::Bayes { pmf } => bayes(&pmf),
        Command::Check { suite, seed, terms } => check(&suite, seed, terms),
    }
}

fn eval_with<N: Carrier>(t: &Term, mode: Mode, binds: &[String]) -> Result<String, String> {
    let mut env = Environment::<N>::new();
    for spec in binds {
        env = apply_binding(env, spec, mode)?;
    }
    let v = eval(t, &env, mode).map_err(|e| e.to_string())?;
    Ok(v.render())
}

fn apply_binding<N: Carrier>(
    env: Environment<N>,
    spec: &str,
    mode: Mode,
) -> Result<Environment<N>, String> {
    let (key, value) = spec
        .split_once('=')
        .ok_or_else(|| format!("binding `{spec}` is not of the form NAME=VALUE"))?;
    let v: Value<N> = parse_value(value).map_err(|e| e.to_string())?;
    if !v.legal_for(mode) {
        return Err(format!(
            "value `{}` is not part of mode {mode}",
            value.trim()
        ));
    }
    let key = key.trim();
    if let Some((fun, rest)) = key.split_once('(') {
        let label = rest
            .strip_suffix(')')
            .ok_or_else(|| format!("binding key `{key}` is missing `)`"))?;
        Ok(env.bind_fun(fun.trim(), label.trim(), v))
    } else {
        Ok(env.bind_var(key, v))
    }
}

fn load_pmf(path: &Path) -> Result<Pmf, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    Pmf::from_tsv(&text).map_err(|e| format!("{}: {e}", path.display()))
}

enum MeasureKind {
    Entropy,
    CrossEntropy,
    Kl,
    Js,
}

fn print_measure(
    kind: MeasureKind,
    pmfs: &[Pmf],
    variant: MeasureVariant,
    carrier: CarrierKind,
) -> Result<ExitCode, String> {
    let rendered = match carrier {
        CarrierKind::Exact => measure_with::<BigRational>(&kind, pmfs, variant)?,
        CarrierKind::Approx => measure_with::<f64>(&kind, pmfs, variant)?,
    };
    println!("{rendered}");
    Ok(ExitCode::SUCCESS)
}

fn measure_with<N: Carrier>(
    kind: &MeasureKind,
    pmfs: &[Pmf],
    variant: MeasureVariant,
) -> Result<String, String> {
    let err = |e: meadows::measures::MeasureError| e.to_string();
    let direct = matches!(variant, MeasureVariant::Direct);
    let value: Value<N> = match kind {
        MeasureKind::Entropy if direct => entropy(&pmfs[0]).map_err(err)?,
        MeasureKind::CrossEntropy if direct => cross_entropy(&pmfs[0], &pmfs[1]).map_err(err)?,
        MeasureKind::Kl if direct => kl_divergence(&pmfs[0], &pmfs[1]).map_err(err)?,
        MeasureKind::Js if direct => js_divergence(&pmfs[0], &pmfs[1]).map_err(err)?,
        _ => {
            let n = pmfs[0].len();
            if pmfs.len() == 2 && pmfs[1].len() != n {
                return Err("the two pmf files bind different numbers of labels".into());
            }
            let term = match kind {
                MeasureKind::Entropy => build_entropy_term(n, variant).map_err(err)?,
                MeasureKind::CrossEntropy => build_cross_entropy_term(n, variant).map_err(err)?,
                MeasureKind::Kl => match variant {
                    MeasureVariant::SeqMul => build_kl_term(n),
                    v => return Err(format!("kl supports --variant direct|seqmul, not {v:?}")),
                },
                MeasureKind::Js => match variant {
                    MeasureVariant::SeqMul => build_js_term(n),
                    v => return Err(format!("js supports --variant direct|seqmul, not {v:?}")),
                },
            };
            let bindings: Vec<(&str, &Pmf)> = ["alpha", "beta"]
                .iter()
                .zip(pmfs)
                .map(|(name, p)| (*name, p))
                .collect();
            let env = measure_environment::<N>(&bindings);
            eval(&term, &env, Mode::Bottom).map_err(|e| e.to_string())?
        }
    };
    Ok(value.render())
}

fn bayes(path: &Path) -> Result<ExitCode, String> {
    let pmf = load_pmf(path)?;
    let space = meadows::events::EventSpace::new(pmf).map_err(|e| e.to_string())?;
    let report = space.bayes_check();
    println!(
        "checked {} ordered event pairs over {} outcomes",
        report.pairs,
        space.len()
    );
    println!(
        "guard holds and sides agree: {} pairs; guard fails: {} pairs ({} equal anyway)",
        report.guarded_equal,
        report.unguarded_equal + report.unguarded_diffs.len(),
        report.unguarded_equal
    );
    for d in &report.unguarded_diffs {
        println!(
            "  unguarded difference: A={{{}}} B={{{}}}: P(A|B)={} vs P(B|A)*P(A)/P(B)={}",
            d.a.join(","),
            d.b.join(","),
            d.lhs,
            d.rhs
        );
    }
    if report.guarded_failures.is_empty() {
        println!("guarded identity: OK");
        Ok(ExitCode::SUCCESS)
    } else {
        for d in &report.guarded_failures {
            println!(
                "  GUARDED FAILURE: A={{{}}} B={{{}}}: {} vs {}",
                d.a.join(","),
                d.b.join(","),
                d.lhs,
                d.rhs
            );
        }
        Ok(ExitCode::FAILURE)
    }
}

fn check(suite: &str, seed: Option<u64>, terms: Option<usize>) -> Result<ExitCode, String> {
    let mut cfg = SuiteConfig::default();
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    if let Some(terms) = terms {
        cfg.soundness_terms = terms;
    }
    let results = run_suite(suite, &cfg).map_err(|e| e.to_string())?;
    let mut failed = 0usize;
    for c in &results {
        if c.verdict.is_pass() {
            println!("PASS {}", c.name);
        } else {
            failed += 1;
            println!("FAIL {}: {}", c.name, c.verdict.describe());
        }
    }
    println!("{} checks, {} failed", results.len(), failed);
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
