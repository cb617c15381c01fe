mod config;
mod suites;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use shearcert::io::{to_json, write_gram, write_samples_1d};
use shearcert::mra1d::Mra;
use shearcert::shearlet2d::{enumerate, support_svg, Cone, DomainRule};
use shearcert::{Error, Result};

use config::RunConfig;
use suites::{Outcome, Report};

#[derive(Parser)]
#[command(
    name = "shearcert",
    version,
    about = "Linear-independence certificates for compactly supported separable shearlet systems"
)]
struct Cli {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(flatten)]
    overrides: Overrides,

    /// Exit 0 exactly when the outcome matches.
    #[arg(long, global = true, value_enum)]
    expect: Option<Expect>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Overrides {
    #[arg(long, global = true)]
    order: Option<usize>,
    #[arg(long, global = true)]
    c1: Option<String>,
    #[arg(long, global = true)]
    c2: Option<String>,
    #[arg(long, global = true)]
    j_max: Option<u32>,
    /// Domain corners `x_min,y_min,x_max,y_max`.
    #[arg(long, global = true, value_delimiter = ',', num_args = 4)]
    domain: Option<Vec<String>>,
    #[arg(long, global = true, value_enum)]
    rule: Option<Rule>,
    #[arg(long, global = true)]
    cascade_level: Option<u32>,
    /// Quadrature levels `L0,L1`.
    #[arg(long, global = true, value_delimiter = ',', num_args = 2)]
    levels: Option<Vec<u32>>,
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory for reports and plots.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Accept sampling constants with even denominators.
    #[arg(long, global = true)]
    allow_inadmissible: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    Intersecting,
    Contained,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expect {
    Pass,
    Fail,
    Dependent,
    Inconclusive,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Lemma31,
    Prop33,
    Cones,
    Gram,
    Hypotheses,
    Oversampling,
}

#[derive(Subcommand)]
enum Command {
    /// Daubechies masks and QMF residuals.
    Filters {
        #[arg(value_parser = clap::value_parser!(u16).range(1..=20))]
        orders: Vec<u16>,
    },
    /// Scaling function and wavelet samples as CSV.
    Cascade {
        #[arg(long, default_value_t = 10)]
        level: u32,
    },
    /// Enumerate the system and check admissibility.
    System,
    /// Gram certificate for the enumerated system.
    Gram {
        #[arg(long)]
        inject_duplicate: bool,
        /// Also write the matrix as `gram.csv`.
        #[arg(long)]
        csv: bool,
    },
    /// Run a certification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long)]
        inject_duplicate: bool,
        /// Filter orders for `lemma31` and `hypotheses`.
        #[arg(long, value_delimiter = ',')]
        orders: Option<Vec<usize>>,
        /// Offsets for `prop33`.
        #[arg(long, value_delimiter = ',')]
        offsets: Option<Vec<String>>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        /// Count failed decay bounds against `hypotheses`.
        #[arg(long)]
        require_decay: bool,
    },
    /// SVG of support polygons.
    PlotSupport {
        #[arg(long, value_delimiter = ',', value_parser = parse_cone)]
        cones: Option<Vec<Cone>>,
        #[arg(long)]
        j: Option<u32>,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Lower frame bounds of nested prefixes of the system.
    FrameBounds {
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
    },
    /// Containment of the system in its oversampled versions.
    Oversampling {
        #[arg(long, value_delimiter = ',')]
        factors: Option<Vec<u32>>,
    },
}

fn parse_cone(s: &str) -> std::result::Result<Cone, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn resolve(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let o = &cli.overrides;
    if let Some(v) = o.order {
        cfg.order = v;
    }
    if let Some(v) = &o.c1 {
        cfg.c1 = v.clone();
    }
    if let Some(v) = &o.c2 {
        cfg.c2 = v.clone();
    }
    if let Some(v) = o.j_max {
        cfg.j_max = v;
    }
    if let Some(v) = &o.domain {
        cfg.domain = [v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()];
    }
    if let Some(r) = o.rule {
        cfg.rule = match r {
            Rule::Intersecting => DomainRule::Intersecting,
            Rule::Contained => DomainRule::Contained,
        };
    }
    if o.cascade_level.is_some() {
        cfg.cascade_level = o.cascade_level;
    }
    if let Some(v) = &o.levels {
        cfg.quadrature_levels = [v[0], v[1]];
    }
    if let Some(v) = o.tolerance {
        cfg.tolerance = v;
    }
    if let Some(v) = o.seed {
        cfg.seed = v;
    }
    if let Some(v) = &o.out {
        cfg.output_dir = v.clone();
    }
    cfg.allow_inadmissible |= o.allow_inadmissible;
    if let Command::Verify {
        orders,
        offsets,
        alpha,
        gamma,
        require_decay,
        ..
    } = &cli.command
    {
        if let Some(v) = orders {
            cfg.lemma31.orders = v.clone();
            cfg.hypotheses.orders = v.clone();
        }
        if let Some(v) = offsets {
            cfg.prop33.offsets = v.clone();
        }
        if let Some(v) = alpha {
            cfg.hypotheses.alpha = *v;
        }
        if let Some(v) = gamma {
            cfg.hypotheses.gamma = *v;
        }
        cfg.hypotheses.require_decay |= require_decay;
    }
    Ok(cfg)
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, contents)?;
    Ok(path)
}

fn emit(report: &Report, cfg: &RunConfig, name: &str) -> Result<Outcome> {
    for c in &report.checks {
        println!("{}", c.line());
    }
    let path = write_file(&cfg.output_dir, name, &to_json(report)?)?;
    println!(
        "{:?} {} -> {}",
        report.outcome,
        report.command,
        path.display()
    );
    Ok(report.outcome)
}

fn run(cli: &Cli) -> Result<Outcome> {
    let cfg = resolve(cli)?;
    match &cli.command {
        Command::Filters { orders } => {
            let orders: Vec<usize> = if orders.is_empty() {
                vec![cfg.order]
            } else {
                orders.iter().map(|&n| n as usize).collect()
            };
            emit(&suites::filters(&cfg, &orders)?, &cfg, "filters.json")
        }
        Command::Cascade { level } => {
            let mra = Mra::daubechies(cfg.order, *level)?;
            std::fs::create_dir_all(&cfg.output_dir)?;
            for (name, f) in [("phi.csv", &mra.phi), ("psi.csv", &mra.psi)] {
                let file = std::fs::File::create(cfg.output_dir.join(name))?;
                write_samples_1d(f, std::io::BufWriter::new(file))?;
            }
            emit(&suites::cascade_summary(&cfg, &mra), &cfg, "cascade.json")
        }
        Command::System => emit(&suites::system(&cfg)?, &cfg, "system.json"),
        Command::Gram {
            inject_duplicate,
            csv,
        } => {
            cfg.validate()?;
            let (report, gram) = suites::gram_suite(&cfg, *inject_duplicate)?;
            if *csv {
                std::fs::create_dir_all(&cfg.output_dir)?;
                let file = std::fs::File::create(cfg.output_dir.join("gram.csv"))?;
                write_gram(&gram.labels, &gram.gram, std::io::BufWriter::new(file))?;
            }
            emit(&report, &cfg, "gram.json")
        }
        Command::Verify {
            suite,
            inject_duplicate,
            ..
        } => {
            let (report, name) = match suite {
                Suite::Lemma31 => (suites::lemma31(&cfg)?, "verify-lemma31.json"),
                Suite::Prop33 => (suites::prop33(&cfg)?, "verify-prop33.json"),
                Suite::Cones => (suites::cones(&cfg)?, "verify-cones.json"),
                Suite::Gram => {
                    cfg.validate()?;
                    let (mut r, _) = suites::gram_suite(&cfg, *inject_duplicate)?;
                    r.command = "verify gram".into();
                    (r, "verify-gram.json")
                }
                Suite::Hypotheses => (suites::hypotheses(&cfg)?, "verify-hypotheses.json"),
                Suite::Oversampling => (
                    suites::oversampling(&cfg, &cfg.oversampling.factors)?,
                    "verify-oversampling.json",
                ),
            };
            emit(&report, &cfg, name)
        }
        Command::PlotSupport { cones, j, limit } => {
            let spec = cfg.spec()?;
            let mut indices = enumerate(&spec);
            if let Some(cones) = cones {
                indices.retain(|i| cones.contains(&i.cone));
            }
            if let Some(j) = j {
                indices.retain(|i| i.j == *j);
            }
            if let Some(limit) = limit {
                indices.truncate(*limit);
            }
            if indices.is_empty() {
                return Err(Error::EmptySelection);
            }
            let s = shearcert::dyadic::Exact::from_int(spec.support_length());
            let polygons: Vec<_> = indices
                .iter()
                .map(|i| {
                    (
                        i.cone,
                        shearcert::shearlet2d::support_polygon(i, &spec.c, &s, &s),
                    )
                })
                .collect();
            let path = write_file(
                &cfg.output_dir,
                "support.svg",
                &support_svg(&polygons, &spec.domain),
            )?;
            println!("{} polygons -> {}", polygons.len(), path.display());
            Ok(Outcome::Pass)
        }
        Command::FrameBounds { sizes } => {
            cfg.validate()?;
            let sizes = sizes
                .clone()
                .unwrap_or_else(|| cfg.frame_bounds.sizes.clone());
            emit(
                &suites::frame_bounds(&cfg, &sizes)?,
                &cfg,
                "frame-bounds.json",
            )
        }
        Command::Oversampling { factors } => {
            let factors = factors
                .clone()
                .unwrap_or_else(|| cfg.oversampling.factors.clone());
            emit(
                &suites::oversampling(&cfg, &factors)?,
                &cfg,
                "oversampling.json",
            )
        }
    }
}

fn init_threads() {
    if let Some(n) = std::env::var("SHEARCERT_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|n| *n > 0)
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::EvenDenominator(_)) {
                eprintln!("hint: pass --allow-inadmissible for negative-control runs");
            }
            Outcome::Fail
        }
    };
    let code = match (cli.expect, outcome) {
        (Some(Expect::Pass), Outcome::Pass)
        | (Some(Expect::Fail | Expect::Dependent), Outcome::Fail)
        | (Some(Expect::Inconclusive), Outcome::Inconclusive) => 0,
        (Some(_), _) => 1,
        (None, Outcome::Pass) => 0,
        (None, Outcome::Fail) => 1,
        (None, Outcome::Inconclusive) => 2,
    };
    ExitCode::from(code)
}
