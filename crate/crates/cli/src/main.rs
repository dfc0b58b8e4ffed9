//! `growth`: growth series, configuration counts and partition functions of
//! homogeneous monoids from the command line.

mod cache;
mod verify;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use growth_core::cayley::CayleyBall;
use growth_core::confalg::{self, render_rational};
use growth_core::config::{self, Configuration, Pattern};
use growth_core::coxeter;
use growth_core::omega;
use growth_core::presentation::{CoxeterMatrix, Presentation};
use growth_core::series::{self, GrowthKind};
use growth_core::words::ElementStore;
use growth_core::Rational;
use num_traits::FromPrimitive;

#[derive(Parser, Debug)]
#[command(name = "growth", version, about = "Growth series and growth partition functions of homogeneous monoids")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct RunConfig {
    /// Catalog name: A<l>, B<l>, D<l>, E6..E8, F4, G2, H3, H4, I2:<p>, Free:<f>, FreeGroup:<f>
    #[arg(long, global = true, conflicts_with = "presentation")]
    catalog: Option<String>,
    /// Presentation file (JSON with kind, generators, coxeter or relations)
    #[arg(long, global = true)]
    presentation: Option<PathBuf>,
    /// Horizon: enumerate elements of length at most n
    #[arg(long, global = true, default_value_t = 6)]
    n: usize,
    /// Maximal configuration size (default 4 for rank 2, else 3)
    #[arg(long, global = true)]
    maxdeg: Option<usize>,
    /// Series order (defaults to the horizon)
    #[arg(long, global = true)]
    order: Option<usize>,
    /// Root precision, as p/q or a decimal
    #[arg(long, global = true, default_value = "1/1000000000000")]
    eps: String,
    /// What to print on stdout
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Output directory
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Store cache directory (overrides $GROWTH_CACHE_DIR)
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Cap on enumerated elements
    #[arg(long, global = true)]
    cap: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Sphere,
    Ball,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sphere and ball counts
    Ball {
        /// Also write the edge list of the ball
        #[arg(long)]
        edges: bool,
    },
    /// Growth series coefficients
    Growth {
        #[arg(long, value_enum, default_value_t = Kind::Ball)]
        kind: Kind,
    },
    /// Connected configurations with first radius, L and d
    Configs,
    /// A(S, Γ_k) for k <= n
    Count {
        /// Configuration form like `3[0.0.1 0.1.2]`, or vertex words like `words:e,a,ab`
        #[arg(long)]
        config: String,
    },
    /// Kabi coefficients K(T,S)
    Kabi {
        /// Ball radius used to collect configurations (default n-1)
        #[arg(long)]
        radius: Option<usize>,
    },
    /// Partition functions Z(S,t)
    Partition,
    /// Denominator polynomial and root diagnostics (Artin monoids)
    Denominator,
    /// Ratios A(S,Γ_n)/#Γ_n against r^L(S)
    Omega {
        /// Radii to evaluate at, comma separated (default n)
        #[arg(long, value_delimiter = ',')]
        balls: Vec<usize>,
    },
    /// Run a verification suite
    Verify {
        #[arg(value_enum)]
        suite: verify::Suite,
        /// Largest subgraph size for the extension property
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Ball radius for the kabi table (default n-1)
        #[arg(long)]
        radius: Option<usize>,
    },
}

/// Collects output files and the `key: value` summary.
struct Output {
    dir: PathBuf,
    summary: Vec<(String, String)>,
    stdout: String,
}

impl Output {
    fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Output { dir: dir.to_path_buf(), summary: Vec::new(), stdout: String::new() })
    }

    fn file(&self, name: &str, contents: &str) -> Result<()> {
        cache::write_atomic(&self.dir.join(name), contents.as_bytes())
    }

    fn table(&mut self, name: &str, contents: &str, format: Format) -> Result<()> {
        if format == Format::Csv {
            self.stdout.push_str(contents);
        }
        self.file(name, contents)
    }

    fn put(&mut self, key: &str, value: impl ToString) {
        self.summary.push((key.to_string(), value.to_string()));
    }

    fn finish(self, format: Format) -> Result<()> {
        let text: String = self.summary.iter().map(|(k, v)| format!("{k}: {v}\n")).collect();
        self.file("summary.txt", &text)?;
        match format {
            Format::Text => print!("{text}"),
            Format::Csv => print!("{}", self.stdout),
        }
        Ok(())
    }
}

fn parse_eps(s: &str) -> Result<Rational> {
    let v = match Rational::from_str(s) {
        Ok(v) => v,
        Err(_) => {
            let x: f64 = s.parse().map_err(|_| anyhow!("cannot parse --eps {s:?}"))?;
            Rational::from_f64(x).ok_or_else(|| anyhow!("--eps must be finite"))?
        }
    };
    if v <= Rational::from_integer(0.into()) {
        bail!("--eps must be positive");
    }
    Ok(v)
}

fn load_presentation(rc: &RunConfig) -> Result<Presentation> {
    match (&rc.catalog, &rc.presentation) {
        (Some(name), None) => Ok(Presentation::catalog(name)?),
        (None, Some(path)) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Ok(Presentation::from_json(&text)?)
        }
        _ => bail!("give exactly one of --catalog or --presentation"),
    }
}

fn coxeter_of(p: &Presentation) -> Result<&CoxeterMatrix> {
    p.coxeter.as_ref().ok_or_else(|| anyhow!("this command needs an Artin presentation (Coxeter matrix)"))
}

fn parse_config(store: &ElementStore, text: &str) -> Result<Configuration> {
    if let Some(words) = text.strip_prefix("words:") {
        let ids = words
            .split(',')
            .map(|w| match w.trim() {
                "e" | "" => Ok(store.identity()),
                w => Ok(store.evaluate(&store.presentation().parse_word(w)?)?),
            })
            .collect::<Result<Vec<_>>>()?;
        let ball = CayleyBall::new(store, store.horizon())?;
        return Ok(ball.subgraph(ids)?.configuration()?);
    }
    Ok(Configuration::from_str(text)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verification failed");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let rc = cli.run;
    if let Some(t) = rc.threads {
        if t == 0 {
            bail!("--threads must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    if rc.n == 0 {
        bail!("--n must be positive");
    }
    let eps = parse_eps(&rc.eps)?;
    let p = load_presentation(&rc)?;
    let max_deg = rc.maxdeg.unwrap_or(if p.rank() <= 2 { 4 } else { 3 });
    if max_deg == 0 {
        bail!("--maxdeg must be positive");
    }
    let order = rc.order.unwrap_or(rc.n);
    if order > rc.n {
        bail!("--order {order} exceeds the horizon --n {}", rc.n);
    }
    let cache_dir = cache::resolve_dir(rc.cache_dir.as_deref());
    let store = || cache::load_or_build(cache_dir.as_deref(), &p, rc.n, rc.cap);
    let mut out = Output::new(&rc.out)?;
    out.put("presentation", p.to_canonical_json());
    out.put("n", rc.n);
    let mut ok = true;

    match cli.command {
        Command::Ball { edges } => {
            let s = store()?;
            out.put("command", "ball");
            out.put("elements", s.len());
            out.put("spheres", join(&s.sphere_sizes()));
            out.put("balls", join(&s.ball_sizes()));
            out.table("counts.csv", &s.counts_csv(), rc.format)?;
            if edges {
                out.file("edges.txt", &CayleyBall::new(&s, rc.n)?.edge_list())?;
            }
        }
        Command::Growth { kind } => {
            let s = store()?;
            let k = match kind {
                Kind::Sphere => GrowthKind::Sphere,
                Kind::Ball => GrowthKind::Ball,
            };
            let series = series::growth_series(&s, k, order)?;
            out.put("command", "growth");
            out.put("kind", format!("{kind:?}").to_lowercase());
            out.put("coefficients", series.coeffs().iter().map(render_rational).collect::<Vec<_>>().join(","));
            if let Some(m) = &p.coxeter {
                let inv = coxeter::inverse_denominator_series(m, order)?;
                let expected = match kind {
                    Kind::Sphere => inv,
                    Kind::Ball => inv.partial_sums(),
                };
                let matches = expected == series;
                out.put("matches_denominator", matches);
                ok &= matches;
            }
            out.table("growth.csv", &series::series_csv_rows(&format!("{kind:?}").to_lowercase(), &series), rc.format)?;
        }
        Command::Configs => {
            let s = store()?;
            let entries = config::enumerate_connected(&CayleyBall::new(&s, order)?, max_deg);
            out.put("command", "configs");
            out.put("maxdeg", max_deg);
            out.put("configurations", entries.len());
            out.table("configs.csv", &config::catalog_csv(&s, &entries), rc.format)?;
            let mut words = String::from("form,vertices\n");
            for e in &entries {
                let vs: Vec<String> = e.representative.iter().map(|&v| s.render(v)).collect();
                words.push_str(&format!("{},{}\n", e.config, vs.join(" ")));
            }
            out.file("representatives.csv", &words)?;
        }
        Command::Count { config: text } => {
            let s = store()?;
            let c = parse_config(&s, &text)?;
            let counts = config::embedding_counts_by_radius(&s, &c, order)?;
            let mut csv = String::from("n,count,ball\n");
            for (k, a) in counts.iter().enumerate() {
                csv.push_str(&format!("{k},{a},{}\n", s.ball_size(k)?));
            }
            out.put("command", "count");
            out.put("config", &c);
            out.put("automorphisms", Pattern::new(&c).automorphisms());
            out.put("counts", join(&counts));
            match config::radius_l(&s, &c) {
                Ok(l) => out.put("L", l),
                Err(e) => out.put("L", format!("undefined ({e})")),
            }
            out.put("d", config::diameter_d(&c));
            out.table("count.csv", &csv, rc.format)?;
        }
        Command::Kabi { radius } => {
            let s = store()?;
            let table = confalg::kabi_table(&s, max_deg, radius.unwrap_or(rc.n - 1))?;
            out.put("command", "kabi");
            out.put("maxdeg", max_deg);
            out.put("configurations", table.len());
            out.put("nonzero", table.k.iter().flatten().filter(|v| **v != Rational::from_integer(0.into())).count());
            let mut cfgs = String::from("index,form,size\n");
            for (i, c) in table.configs.iter().enumerate() {
                cfgs.push_str(&format!("{i},{c},{}\n", c.size()));
            }
            out.file("kabi_configs.csv", &cfgs)?;
            out.table("kabi.csv", &table.to_csv(), rc.format)?;
        }
        Command::Partition => {
            let s = store()?;
            let lie = series::partition_function(&s, max_deg, order)?;
            let mut csv = String::from("S,n,numerator,denominator\n");
            for (c, z) in &lie.terms {
                csv.push_str(&series::series_csv_rows(&c.to_string(), z));
            }
            out.put("command", "partition");
            out.put("maxdeg", max_deg);
            out.put("order", order);
            out.put("configurations", lie.terms.len());
            out.table("partition.csv", &csv, rc.format)?;
        }
        Command::Denominator => {
            let m = coxeter_of(&p)?;
            let report = coxeter::conjecture_report(m, &eps)?;
            out.put("command", "denominator");
            for line in report.render().lines() {
                if let Some((k, v)) = line.split_once(": ") {
                    out.put(k, v);
                }
            }
            if let Some(r) = &report.root {
                out.put("smallest_root_approx", format!("{:.12}", r.to_f64().0));
            }
            let inv = coxeter::inverse_denominator_series(m, order)?;
            out.table("inverse_denominator.csv", &series::series_csv_rows("1/N", &inv), rc.format)?;
            out.file("conjecture.txt", &report.render())?;
            ok &= report.root_count_matches();
        }
        Command::Omega { balls } => {
            let m = coxeter_of(&p)?.clone();
            let s = store()?;
            let radii = if balls.is_empty() { vec![rc.n] } else { balls };
            out.put("command", "omega");
            out.put("maxdeg", max_deg);
            out.put("r", omega::root_interval(&m, &eps)?);
            for k in radii {
                if k > rc.n {
                    bail!("--balls entry {k} exceeds the horizon {}", rc.n);
                }
                let est = omega::omega_closed(&s, &m, max_deg, k, &eps)?;
                let worst = est.entries.iter().map(|e| e.gap.hi().clone()).max();
                out.put(&format!("max_gap_n{k}"), worst.map(|g| render_rational(&g)).unwrap_or_default());
                out.table(&format!("omega_n{k}.csv"), &est.to_csv(), rc.format)?;
            }
        }
        Command::Verify { suite, k, radius } => {
            let s = store()?;
            let params = verify::Params { max_deg, kabi_radius: radius, extension_size: k };
            let report = verify::run(suite, &s, &params)?;
            out.put("command", "verify");
            out.put("suite", suite.name());
            out.put("maxdeg", max_deg);
            for (name, pass, _) in &report.checks {
                out.put(name, if *pass { "pass" } else { "fail" });
            }
            out.put("result", if report.passed() { "pass" } else { "fail" });
            out.table(&format!("verify_{}.txt", suite.name()), &report.render(), rc.format)?;
            ok &= report.passed();
        }
    }
    out.finish(rc.format)?;
    Ok(ok)
}

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}
