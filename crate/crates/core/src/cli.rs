//! The `andor` command line.
//!
//! Single queries print a bare value; grids print a CSV (or JSON) table.
//! In CSV mode the run metadata goes to standard error as `# key=value`
//! lines, in JSON mode it sits under `meta`.

use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::boolfn::{complexity, TruthTable};
use crate::combinatorics::{count_trees, rat_asymptotic, rat_exact, ratio_to_f64, regime, threshold_m, ModelTag};
use crate::distribution::{exact_distribution, tautology_ratio_report, KRule, TrendMode};
use crate::error::{domain, Error, Result};
use crate::patterns::{tautology_census, TautologyCensus};
use crate::quotient::{canonicalize, for_each_tree};
use crate::report::{Format, Table};
use crate::sampling::{rng, sample_class_e, sample_tree_g, Seed, GENERATOR};
use crate::verify::{run_suite, VerifyParams, SUITES};
use crate::DEFAULT_BUDGET;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "andor",
    version,
    about = "Counting, sampling and censuses of random And/Or trees"
)]
struct Cli {
    /// Worker threads (results do not depend on this).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest number of objects an enumeration may visit.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long, global = true, default_value = "csv")]
    format: Format,
    #[arg(long, global = true, default_value_t = 1)]
    seed: Seed,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Grid {
    /// Sizes: `7`, `2,3,5` or `2..7`.
    #[arg(long, value_parser = parse_grid)]
    n: Vec<Vec<u32>>,
    /// Number of variables; overrides `--k-rule`.
    #[arg(long)]
    k: Option<u32>,
    /// `identity`, `sqrt`, `log` or `const:<c>`.
    #[arg(long, default_value = "identity")]
    k_rule: KRule,
}

impl Grid {
    fn points(&self) -> Result<Vec<(u32, u32)>> {
        let ns: Vec<u32> = self.n.iter().flatten().copied().collect();
        if ns.is_empty() {
            return domain("--n is required");
        }
        Ok(ns
            .into_iter()
            .map(|n| (n, self.k.unwrap_or_else(|| self.k_rule.apply(n))))
            .collect())
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Number of trees (G) or classes (E).
    Count {
        #[command(flatten)]
        grid: Grid,
        #[arg(long, default_value = "G")]
        model: ModelTag,
    },
    /// Lists every tree (G) or class (E) of one size.
    Enumerate {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value = "G")]
        model: ModelTag,
    },
    /// Draws uniform trees (G) or classes (E).
    Sample {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value = "G")]
        model: ModelTag,
        #[arg(long, default_value_t = 10)]
        samples: u64,
    },
    /// Exact distribution on Boolean functions.
    Dist {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value = "G")]
        model: ModelTag,
    },
    /// Tautology census, exact or, with `--samples`, Monte Carlo.
    Tautology {
        #[command(flatten)]
        grid: Grid,
        #[arg(long, default_value = "G")]
        model: ModelTag,
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Complexity `L`, essential variables `E` and repetitions `R = L - E`.
    Complexity {
        /// Truth table, e.g. `m=2:0x6`.
        #[arg(long)]
        table: TruthTable,
    },
    /// `M_n` and `rat_n` along a grid.
    Thresholds {
        #[command(flatten)]
        grid: Grid,
        #[arg(long, default_value = "E")]
        model: ModelTag,
    },
    /// Runs the self-check suites; exits 1 on any failure.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        n_max: Option<u32>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
    },
}

fn parse_grid(s: &str) -> std::result::Result<Vec<u32>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let a: u32 = a.parse().map_err(|e| format!("`{part}`: {e}"))?;
            let b: u32 = b
                .trim_start_matches('=')
                .parse()
                .map_err(|e| format!("`{part}`: {e}"))?;
            if a > b {
                return Err(format!("empty range `{part}`"));
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|e| format!("`{part}`: {e}"))?);
        }
    }
    if out.is_empty() {
        return Err("empty grid".into());
    }
    Ok(out)
}

/// What a command produced.
enum Output {
    Line(String),
    Table(Table),
    Verify(Table, bool),
}

/// Parses `args` (program name first), runs the command and returns the exit
/// status.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        builder = builder.num_threads(t);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let result = pool.install(|| dispatch(&cli));
    let argv: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let meta = [
        ("tool", json!(format!("andor {}", env!("CARGO_PKG_VERSION")))),
        ("args", json!(argv.join(" "))),
        ("seed", json!(cli.seed)),
        ("generator", json!(GENERATOR)),
        ("budget", json!(cli.budget)),
    ];
    let write = |out: &mut dyn Write, err: &mut dyn Write, mut table: Table| -> std::io::Result<()> {
        for (k, v) in &meta {
            table.meta.insert(k.to_string(), v.clone());
        }
        if cli.format == Format::Csv {
            for (k, v) in &table.meta {
                writeln!(
                    err,
                    "# {k}={}",
                    v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string())
                )?;
            }
        }
        out.write_all(table.render(cli.format).as_bytes())
    };
    let status = match result {
        Ok(Output::Line(line)) if cli.format == Format::Csv => writeln!(out, "{line}").map(|_| EXIT_OK),
        Ok(Output::Line(line)) => write(out, err, Table::new(["value"]).with_row(vec![json!(line)])).map(|_| EXIT_OK),
        Ok(Output::Table(t)) => write(out, err, t).map(|_| EXIT_OK),
        Ok(Output::Verify(t, passed)) => write(out, err, t).map(|_| if passed { EXIT_OK } else { EXIT_VERIFY }),
        Err(e @ Error::Budget { .. }) => writeln!(err, "error: {e}").map(|_| EXIT_BUDGET),
        Err(e) => writeln!(err, "error: {e}").map(|_| EXIT_USAGE),
    };
    status.unwrap_or(EXIT_USAGE)
}

fn dispatch(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Count { grid, model } => {
            let points = grid.points()?;
            if let [(n, k)] = points[..] {
                return Ok(Output::Line(count_trees(n, k, *model)?.to_string()));
            }
            let mut t = Table::new(["n", "k", "model", "count"]);
            for (n, k) in points {
                t.push(vec![
                    json!(n),
                    json!(k),
                    json!(model.to_string()),
                    json!(count_trees(n, k, *model)?.to_string()),
                ]);
            }
            Ok(Output::Table(t))
        }
        Command::Enumerate { n, k, model } => {
            let mut t = Table::new(["index", "tree"]);
            let mut i = 0u64;
            for_each_tree(*n, *k, *model, cli.budget, |v| {
                let text = match model {
                    ModelTag::G => v.tree().to_string(),
                    ModelTag::E => canonicalize(&v.tree()).to_string(),
                };
                t.push(vec![json!(i), json!(text)]);
                i += 1;
            })?;
            Ok(Output::Table(t))
        }
        Command::Sample { n, k, model, samples } => {
            let mut r = rng(cli.seed, 0);
            let mut t = Table::new(["index", "tree"]);
            for i in 0..*samples {
                let text = match model {
                    ModelTag::G => sample_tree_g(*n, *k, &mut r)?.to_string(),
                    ModelTag::E => sample_class_e(*n, *k, &mut r)?.to_string(),
                };
                t.push(vec![json!(i), json!(text)]);
            }
            Ok(Output::Table(t))
        }
        Command::Dist { n, k, model } => {
            let dist = exact_distribution(*n, *k, *model, cli.budget)?;
            let mut t = Table::new(["function", "count", "probability", "exact"]);
            for (key, mass) in dist.masses() {
                t.push(vec![
                    json!(key.to_string()),
                    json!(dist.counts[key].to_string()),
                    json!(ratio_to_f64(&mass)),
                    json!(mass.to_string()),
                ]);
            }
            Ok(Output::Table(t.meta("total", dist.total.to_string())))
        }
        Command::Tautology { grid, model, samples } => {
            let points = grid.points()?;
            match samples {
                None => {
                    let mut t = Table::new(TautologyCensus::CSV_HEADER.split(','));
                    for (n, k) in points {
                        let c = tautology_census(n, k, *model, cli.budget)?;
                        let row = c.csv_row()?;
                        t.push(row.split(',').map(|s| json!(s)).collect());
                    }
                    Ok(Output::Table(t))
                }
                Some(samples) => {
                    let mut t = Table::new([
                        "n",
                        "k",
                        "model",
                        "mu_s",
                        "mu_s_low",
                        "mu_s_high",
                        "mu_t",
                        "mu_t_low",
                        "mu_t_high",
                        "rat",
                        "s_over_rat",
                        "t_over_s",
                    ]);
                    for (n, k) in points {
                        let mode = TrendMode::MonteCarlo {
                            samples: *samples,
                            seed: cli.seed,
                        };
                        for r in tautology_ratio_report(&[n], KRule::Const(k), *model, mode)? {
                            let (sl, sh) = r.ci_s.unwrap_or_default();
                            let (tl, th) = r.ci_t.unwrap_or_default();
                            t.push(vec![
                                json!(r.n),
                                json!(r.k),
                                json!(model.to_string()),
                                json!(r.mu_s),
                                json!(sl),
                                json!(sh),
                                json!(r.mu_t),
                                json!(tl),
                                json!(th),
                                json!(r.rat),
                                json!(r.s_over_rat),
                                json!(r.t_over_s),
                            ]);
                        }
                    }
                    Ok(Output::Table(t.meta("samples", *samples)))
                }
            }
        }
        Command::Complexity { table } => {
            let l = complexity(table)?;
            let e = table.essential_count() as u32;
            Ok(Output::Line(format!("L={l} E={e} R={}", l - e)))
        }
        Command::Thresholds { grid, model } => {
            let mut t = Table::new(["n", "k", "M_n", "n_over_ln_n", "regime", "rat_exact", "rat_asymptotic"]);
            for (n, k) in grid.points()? {
                if n < 2 {
                    return domain("thresholds need n >= 2");
                }
                t.push(vec![
                    json!(n),
                    json!(k),
                    json!(threshold_m(n)),
                    json!(n as f64 / (n as f64).ln()),
                    json!(regime(n, k).to_string()),
                    json!(ratio_to_f64(&rat_exact(n, k, *model)?)),
                    json!(rat_asymptotic(n, k, *model)?.approx),
                ]);
            }
            Ok(Output::Table(t.meta("model", model.to_string())))
        }
        Command::Verify { suite, n_max, samples } => {
            let params = VerifyParams {
                n_max: *n_max,
                samples: *samples,
                seed: cli.seed,
                budget: cli.budget,
            };
            let names: Vec<&str> = if suite == "all" {
                SUITES.to_vec()
            } else {
                vec![suite.as_str()]
            };
            let mut t = Table::new(["suite", "check", "passed", "detail"]);
            let mut passed = true;
            for name in names {
                let report = run_suite(name, &params)?;
                passed &= report.passed();
                for c in report.checks {
                    t.push(vec![json!(name), json!(c.name), Value::Bool(c.passed), json!(c.detail)]);
                }
            }
            Ok(Output::Verify(t, passed))
        }
    }
}
