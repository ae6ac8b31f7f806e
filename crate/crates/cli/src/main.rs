//! `trunco`: composition multiplicities for Verma modules over `g ⊗ C[t]/t^{n+1}`.
//!
//! Weights are given in fundamental-weight coordinates, one bracketed group
//! per power of `t`: `--lambda "[3],[0]"` is `lambda_0 = 3 omega_1`,
//! `lambda_1 = 0`. Rationals are written `p/q`.

use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use trunco::characters::{kostant_partition, verma_character};
use trunco::engine::Step;
use trunco::kl::KlTable;
use trunco::oracle::Oracle;
use trunco::parse::{parse_beta, parse_truncated_weight, parse_word};
use trunco::{CartanType, Engine, Error, KlCache, LeviDatum, RootDatum, Transport, TruncatedWeight, Weight};

const EXIT_PARSE: u8 = 2;
const EXIT_MISMATCH: u8 = 3;

#[derive(Parser)]
#[command(name = "trunco", version, about = "Verma module multiplicities for truncated current Lie algebras")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// [M_lambda : L_nu] by the level-lowering recursion.
    Mult {
        #[command(flatten)]
        q: Query,
        #[arg(long)]
        nu: String,
        /// Print the full recursion trace.
        #[arg(long)]
        trace: bool,
        /// Cross-check against the explicit-module oracle.
        #[arg(long)]
        verify: bool,
        /// Oracle window; defaults to the height of lambda_0 - nu_0.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// All nonzero [M_lambda : L_nu] with ht(lambda_0 - nu_0) <= depth.
    Table {
        #[command(flatten)]
        q: Query,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        verify: bool,
    },
    /// Kazhdan-Lusztig polynomial P_{x,y}; words are 1-based, e.g. "2,1,3,2".
    Kl {
        #[arg(long = "type")]
        cartan: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Kostant's partition function p(beta), beta over the simple roots.
    Partition {
        #[arg(long = "type")]
        cartan: String,
        #[arg(long)]
        beta: String,
    },
    /// Verma character to the given depth.
    Character {
        #[command(flatten)]
        q: Query,
        #[arg(long)]
        depth: usize,
    },
    /// Explicit module: weight spaces, maximal submodule, simple character;
    /// with --nu, the oracle multiplicity.
    Oracle {
        #[command(flatten)]
        q: Query,
        #[arg(long)]
        nu: Option<String>,
        #[arg(long)]
        depth: usize,
    },
    /// Randomized engine-versus-oracle comparison.
    VerifySuite {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random highest weights.
        #[arg(long, default_value_t = 12)]
        cases: usize,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
}

#[derive(Args)]
struct Query {
    #[arg(long = "type")]
    cartan: String,
    /// Weight transport along twisting words; `literal` uses w(lambda + n rho) - n rho.
    #[arg(long, value_enum, default_value_t = Shift::Twisting)]
    transport: Shift,
    /// Level n; must match the number of components of --lambda minus one.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    lambda: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum Shift {
    Twisting,
    Literal,
}

/// A validated query: root datum plus highest weight.
struct ParsedQuery {
    datum: Arc<RootDatum>,
    lambda: TruncatedWeight,
    transport: Transport,
}

impl ParsedQuery {
    fn engine(&self, cache: Arc<KlCache>) -> Engine {
        Engine::with_cache(self.datum.clone(), cache).with_transport(self.transport)
    }
}

enum Failure {
    Parse(String),
    Mismatch(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::CartanType(_) | Error::Dimension { .. } => Failure::Parse(e.to_string()),
            _ => Failure::Other(e.to_string()),
        }
    }
}

fn datum(cartan: &str) -> Result<Arc<RootDatum>, Failure> {
    let t: CartanType = cartan.parse()?;
    Ok(Arc::new(RootDatum::new(&t)))
}

fn weight_arg(datum: &RootDatum, s: &str, n: usize) -> Result<TruncatedWeight, Failure> {
    let t = parse_truncated_weight(s)?;
    Ok(TruncatedWeight::checked(t.components().to_vec(), datum, n)?)
}

impl Query {
    fn parse(&self) -> Result<ParsedQuery, Failure> {
        let datum = datum(&self.cartan)?;
        let raw = parse_truncated_weight(&self.lambda)?;
        let n = self.n.unwrap_or(raw.level());
        let lambda = weight_arg(&datum, &self.lambda, n)?;
        let transport = match self.transport {
            Shift::Twisting => Transport::Twisting,
            Shift::Literal => Transport::Literal,
        };
        Ok(ParsedQuery { datum, lambda, transport })
    }
}

fn kl_cache() -> Arc<KlCache> {
    match std::env::var_os("TRUNCO_CACHE_DIR") {
        Some(dir) => Arc::new(KlCache::with_dir(dir)),
        None => Arc::new(KlCache::new()),
    }
}

fn print<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) {
    let out = if json { serde_json::to_string_pretty(value).expect("serializable") } else { text() };
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let _ = writeln!(std::io::stdout().lock(), "{out}");
}

fn coords(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(i64::to_string).collect();
    format!("[{}]", parts.join(","))
}

fn height_between(datum: &RootDatum, lambda: &TruncatedWeight, nu: &TruncatedWeight) -> Option<usize> {
    let beta = datum.integral_root_coords(&(lambda.head() - nu.head()))?;
    beta.iter().all(|&c| c >= 0).then(|| beta.iter().sum::<i64>() as usize)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let json = cli.json;
    match cli.command {
        Command::Mult { q, nu, trace, verify, depth } => {
            let parsed = q.parse()?;
            let nu = weight_arg(&parsed.datum, &nu, parsed.lambda.level())?;
            let cache = kl_cache();
            let engine = parsed.engine(cache.clone());
            let t = engine.traced(&parsed.lambda, &nu)?;
            cache.persist()?;
            let note = match &t.step {
                Step::DifferentBlock { note } => Some(note.clone()),
                _ => None,
            };
            let oracle = if verify {
                let d = depth.or_else(|| height_between(&parsed.datum, &parsed.lambda, &nu)).unwrap_or(0);
                Some(Oracle::new(parsed.datum.clone())?.multiplicity(&parsed.lambda, &nu, d)?)
            } else {
                None
            };
            let report = json!({
                "value": t.value,
                "note": note,
                "oracle": oracle,
                "agree": oracle.map(|o| o == t.value),
                "trace": if trace { serde_json::to_value(&*t).expect("serializable") } else { serde_json::Value::Null },
            });
            print(json, &report, || {
                let mut out = t.value.to_string();
                if let Some(n) = &note {
                    out += &format!("\nnote: {n}");
                }
                if let Some(o) = oracle {
                    out += &format!("\noracle: {o} ({})", if o == t.value { "agree" } else { "MISMATCH" });
                }
                if trace {
                    out += &format!("\n{}", serde_json::to_string_pretty(&*t).expect("serializable"));
                }
                out
            });
            if oracle.is_some_and(|o| o != t.value) {
                return Err(Failure::Mismatch(format!("engine {} but oracle {}", t.value, oracle.unwrap())));
            }
        }
        Command::Table { q, depth, verify } => {
            let parsed = q.parse()?;
            let cache = kl_cache();
            let engine = parsed.engine(cache.clone());
            let table = engine.multiplicity_table(&parsed.lambda, depth)?;
            cache.persist()?;
            let mut mismatches = Vec::new();
            if verify {
                let dec = Oracle::new(parsed.datum.clone())?.decomposition(&parsed.lambda, depth)?;
                let mut seen = 0;
                for e in &table.entries {
                    if dec.multiplicity(&e.beta) != e.value {
                        mismatches.push(e.beta.clone());
                    }
                    seen += 1;
                }
                if dec.entries.len() != seen {
                    mismatches.extend(
                        dec.entries.keys().filter(|b| !table.entries.iter().any(|e| e.beta == b.0)).map(|b| b.0.clone()),
                    );
                }
            }
            let report = json!({ "table": table, "verified": verify, "mismatches": mismatches });
            print(json, &report, || {
                let mut lines: Vec<String> =
                    table.entries.iter().map(|e| format!("{}\t{}\t{}", e.nu0, coords(&e.beta), e.value)).collect();
                if verify {
                    lines.push(format!("oracle: {}", if mismatches.is_empty() { "agree" } else { "MISMATCH" }));
                }
                lines.join("\n")
            });
            if !mismatches.is_empty() {
                return Err(Failure::Mismatch(format!("engine and oracle differ at {mismatches:?}")));
            }
        }
        Command::Kl { cartan, x, y } => {
            let d = datum(&cartan)?;
            let element = |s: &str| -> Result<_, Failure> {
                d.element(&parse_word(s)?).map_err(|e| Failure::Parse(e.to_string()))
            };
            let (xe, ye) = (element(&x)?, element(&y)?);
            let cache = kl_cache();
            let table: Arc<KlTable> = cache.table(d.cartan_matrix())?;
            let p = table.polynomial(&xe, &ye);
            cache.persist()?;
            let report = json!({
                "x": xe.word_one_based(),
                "y": ye.word_one_based(),
                "bruhat_leq": d.bruhat_leq(&xe, &ye),
                "polynomial": p,
                "display": p.to_string(),
            });
            print(json, &report, || p.to_string());
        }
        Command::Partition { cartan, beta } => {
            let d = datum(&cartan)?;
            let b = parse_beta(&beta)?;
            if b.len() != d.rank() {
                return Err(Failure::Parse(format!("beta has {} coordinates, rank is {}", b.len(), d.rank())));
            }
            let p = kostant_partition(&d, &b)?;
            print(json, &json!({ "beta": b, "value": p }), || p.to_string());
        }
        Command::Character { q, depth } => {
            let parsed = q.parse()?;
            let ch = verma_character(&parsed.datum, &LeviDatum::full(&parsed.datum), &parsed.lambda, depth)?;
            print(json, &ch, || {
                ch.entries().map(|(b, c)| format!("{}\t{c}", coords(&b.0))).collect::<Vec<_>>().join("\n")
            });
        }
        Command::Oracle { q, nu, depth } => {
            let parsed = q.parse()?;
            let oracle = Oracle::new(parsed.datum.clone())?;
            match nu {
                Some(nu) => {
                    let nu = weight_arg(&parsed.datum, &nu, parsed.lambda.level())?;
                    let v = oracle.multiplicity(&parsed.lambda, &nu, depth)?;
                    print(json, &json!({ "value": v, "depth": depth }), || v.to_string());
                }
                None => {
                    let r = oracle.report(&parsed.lambda, depth)?;
                    print(json, &r, || {
                        r.spaces
                            .iter()
                            .map(|s| format!("{}\tdim {}\tradical {}\tsimple {}", coords(&s.beta), s.dim, s.radical_dim, s.dim - s.radical_dim))
                            .collect::<Vec<_>>()
                            .join("\n")
                    });
                }
            }
        }
        Command::VerifySuite { seed, cases, depth } => {
            let report = verify_suite(seed, cases, depth)?;
            let failed = report.iter().filter(|c| !c.agree).count();
            print(json, &json!({ "seed": seed, "cases": report, "failed": failed }), || {
                let mut lines: Vec<String> = report
                    .iter()
                    .map(|c| format!("{} {}  {}", c.cartan, c.lambda, if c.agree { "ok" } else { "MISMATCH" }))
                    .collect();
                lines.push(format!("{} of {} cases agree", report.len() - failed, report.len()));
                lines.join("\n")
            });
            if failed > 0 {
                return Err(Failure::Mismatch(format!("{failed} cases disagree")));
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct SuiteCase {
    cartan: String,
    lambda: TruncatedWeight,
    depth: usize,
    agree: bool,
}

fn verify_suite(seed: u64, cases: usize, depth: usize) -> Result<Vec<SuiteCase>, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..cases {
        let cartan = if rng.gen_bool(0.5) { "A1" } else { "A2" };
        let d = datum(cartan)?;
        let r = d.rank();
        let n = rng.gen_range(1..=if r == 1 { 2 } else { 1 });
        let mut comps = vec![Weight::from_ints(&(0..r).map(|_| rng.gen_range(0..=3)).collect::<Vec<_>>())];
        for _ in 0..n {
            comps.push(Weight::from_ints(&(0..r).map(|_| rng.gen_range(-1..=1)).collect::<Vec<_>>()));
        }
        let lambda = TruncatedWeight::new(comps)?;
        let engine = Engine::new(d.clone());
        let table = engine.multiplicity_table(&lambda, depth)?;
        let dec = Oracle::new(d.clone())?.decomposition(&lambda, depth)?;
        let agree = table.entries.len() == dec.entries.len()
            && table.entries.iter().all(|e| dec.multiplicity(&e.beta) == e.value);
        out.push(SuiteCase { cartan: cartan.to_string(), lambda, depth, agree });
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_PARSE } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Parse(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_PARSE)
        }
        Err(Failure::Mismatch(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(EXIT_MISMATCH)
        }
        Err(Failure::Other(m)) => {
            eprintln!("error: {m}");
            ExitCode::FAILURE
        }
    }
}
