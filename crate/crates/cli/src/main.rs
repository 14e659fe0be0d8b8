use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use synideal::harness::{self, CampaignSpec, Check, HarnessError};
use synideal::injection::{verify_injection, InjectionContext, InjectionError};
use synideal::semigroup::{SemigroupError, DEFAULT_CAP};
use synideal::witness::{self, IdealClass};
use synideal::{classify, ideals, Dfa};

#[derive(Parser)]
#[command(name = "synideal", version, about = "Syntactic complexity of ideal languages")]
struct Cli {
    /// Machine-readable JSON output for every command.
    #[arg(long, global = true)]
    json: bool,
    /// Cap on worker threads used by closures and campaigns.
    #[arg(long, global = true, value_name = "K")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Class {
    Right,
    Left,
    TwoSided,
}

impl From<Class> for IdealClass {
    fn from(c: Class) -> Self {
        match c {
            Class::Right => IdealClass::Right,
            Class::Left => IdealClass::Left,
            Class::TwoSided => IdealClass::TwoSided,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckArg {
    Bound,
    SpecialBound,
    Uniqueness,
    Injection,
}

impl From<CheckArg> for Check {
    fn from(c: CheckArg) -> Self {
        match c {
            CheckArg::Bound => Check::Bound,
            CheckArg::SpecialBound => Check::SpecialBound,
            CheckArg::Uniqueness => Check::Uniqueness,
            CheckArg::Injection => Check::Injection,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the witness DFA of a class.
    Witness {
        #[arg(long, value_enum)]
        class: Class,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Classify a DFA and compare σ with the applicable bounds.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Size (and optionally elements) of the transition semigroup.
    Semigroup {
        file: PathBuf,
        #[arg(long)]
        list: bool,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Ideal class membership only, without the semigroup.
    Classify { file: PathBuf },
    /// Bound formula values for n = 1..=n-max.
    Bounds {
        #[arg(long, value_enum)]
        class: Class,
        #[arg(long)]
        n_max: usize,
    },
    /// Check the injection S -> W on a left or two-sided ideal.
    VerifyInjection {
        file: PathBuf,
        /// Defaults to the most specific class the language belongs to.
        #[arg(long, value_enum)]
        class: Option<Class>,
    },
    /// Run an exhaustive or sampled campaign.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long, short = 'k')]
        alphabet: usize,
        #[arg(long, value_enum)]
        class: Option<Class>,
        /// Sample this many DFAs instead of enumerating (needs --class).
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        budget: Option<u128>,
        #[arg(long, value_enum, value_delimiter = ',')]
        checks: Vec<CheckArg>,
    },
    /// Print a DFA in Graphviz DOT.
    ExportDot { file: PathBuf },
}

/// Exit status with a message for stderr.
struct Failure {
    code: u8,
    message: String,
}

fn malformed(message: impl ToString) -> Failure {
    Failure { code: 2, message: message.to_string() }
}

impl From<SemigroupError> for Failure {
    fn from(e: SemigroupError) -> Self {
        let code = match e {
            SemigroupError::CapExceeded { .. }
            | SemigroupError::SearchInfeasible { .. }
            | SemigroupError::RelabelInfeasible { .. } => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        let code = if matches!(e, HarnessError::BudgetExceeded { .. }) { 3 } else { 2 };
        Failure { code, message: e.to_string() }
    }
}

impl From<InjectionError> for Failure {
    fn from(e: InjectionError) -> Self {
        match e {
            InjectionError::Semigroup(s) => s.into(),
            other => malformed(other),
        }
    }
}

fn load(path: &Path) -> Result<Dfa, Failure> {
    let text = fs::read_to_string(path).map_err(|e| malformed(format!("{}: {e}", path.display())))?;
    Dfa::parse_any(&text).map_err(|e| malformed(format!("{}: {e}", path.display())))
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

fn run(cli: Cli) -> Result<(String, u8), Failure> {
    let json = cli.json;
    let out = match cli.command {
        Command::Witness { class, n, format } => {
            let d = witness::build(class.into(), n).map_err(malformed)?;
            match (json, format) {
                (true, _) | (_, Format::Json) => d.to_json(),
                (_, Format::Dot) => d.to_dot(),
                (_, Format::Text) => d.to_text(),
            }
        }
        Command::Analyze { file, cap } => {
            let d = load(&file)?;
            let r = ideals::classify_with_cap(&d, Some(cap.unwrap_or(DEFAULT_CAP)))?;
            let class_bound = r.ideal_class().and_then(|c| witness::bound(c, r.n).ok().flatten());
            let bound = class_bound.unwrap_or_else(|| r.min_bound());
            let met = r.sigma as u128 == bound;
            let chain = d.minimize().preorder().max_chain_length();
            if json {
                let mut v = serde_json::to_value(&r).expect("report serializes");
                v["applicable_bound"] = json!(bound.to_string());
                v["bound_met"] = json!(met);
                v["max_chain_length"] = json!(chain);
                pretty(&v)
            } else {
                format!("{}applicable_bound {bound}\nbound_met {met}\nmax_chain_length {chain}\n", r.to_text())
            }
        }
        Command::Semigroup { file, list, cap } => {
            let d = load(&file)?;
            let s = d.minimize().transition_semigroup(Some(cap.unwrap_or(DEFAULT_CAP)))?;
            let elements: Vec<String> = s.elements().iter().map(|t| t.to_string()).collect();
            if json {
                let mut v = json!({ "n": s.n(), "size": s.len() });
                if list {
                    v["elements"] = json!(elements);
                }
                pretty(&v)
            } else {
                let mut out = format!("size {}\n", s.len());
                if list {
                    for e in elements {
                        out.push_str(&e);
                        out.push('\n');
                    }
                }
                out
            }
        }
        Command::Classify { file } => {
            let d = load(&file)?;
            let m = d.minimize();
            let flags: Vec<(IdealClass, bool)> = IdealClass::ALL.iter().map(|&c| (c, ideals::is_ideal(&m, c))).collect();
            if json {
                let mut v = json!({ "n": m.n() });
                for (c, b) in &flags {
                    v[c.name()] = json!(b);
                }
                pretty(&v)
            } else {
                let mut out = format!("n {}\n", m.n());
                for (c, b) in flags {
                    out.push_str(&format!("{c} {b}\n"));
                }
                out
            }
        }
        Command::Bounds { class, n_max } => {
            let class: IdealClass = class.into();
            let rows: Vec<(usize, Option<u128>)> = (class.min_states()..=n_max)
                .map(|n| witness::bound(class, n).map(|b| (n, b)))
                .collect::<Result<_, _>>()
                .map_err(malformed)?;
            let show = |b: Option<u128>| b.map_or("overflow".to_string(), |v| v.to_string());
            if json {
                let v: Vec<_> = rows.iter().map(|&(n, b)| json!({ "n": n, "bound": show(b) })).collect();
                pretty(&json!({ "class": class, "bounds": v }))
            } else {
                rows.iter().map(|&(n, b)| format!("{n} {}\n", show(b))).collect()
            }
        }
        Command::VerifyInjection { file, class } => {
            let d = load(&file)?;
            let class = match class {
                Some(c) => c.into(),
                None => classify(&d)?.ideal_class().ok_or_else(|| malformed("the language is not an ideal"))?,
            };
            let ctx = InjectionContext::new(&d, class)?;
            let r = verify_injection(&ctx);
            let code = if r.ok() { 0 } else { 1 };
            return Ok((if json { r.to_json() } else { r.to_text() }, code));
        }
        Command::Enumerate { n, alphabet, class, sample, seed, budget, checks } => {
            let mut spec = match sample {
                Some(count) => {
                    let class = class.ok_or_else(|| malformed("--sample needs --class"))?;
                    CampaignSpec::sample(n, alphabet, class.into(), count, seed)
                }
                None => CampaignSpec::exhaustive(n, alphabet, class.map(Into::into)),
            };
            if let Some(b) = budget {
                spec.budget = b;
            }
            if !checks.is_empty() {
                spec.checks = checks.into_iter().map(Into::into).collect();
            }
            let r = harness::run(&spec)?;
            let code = if r.ok() { 0 } else { 1 };
            return Ok((if json { r.to_json() } else { r.to_text() }, code));
        }
        Command::ExportDot { file } => load(&file)?.to_dot(),
    };
    Ok((out, 0))
}

fn configure_threads(k: Option<usize>) -> Result<(), Failure> {
    let Some(k) = k else { return Ok(()) };
    if k == 0 {
        return Err(malformed("--threads must be at least 1"));
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new().num_threads(k).build_global().map_err(malformed)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads(cli.threads).and_then(|()| run(cli));
    match result {
        Ok((out, code)) => {
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let mut stdout = io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            if !out.ends_with('\n') {
                let _ = stdout.write_all(b"\n");
            }
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
