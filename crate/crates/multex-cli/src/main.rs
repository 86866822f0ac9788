//! Command-line front end.  Every subcommand parses its arguments, calls one
//! library entry point, and formats the report; no domain logic lives here.

use std::env;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use multex_core::bounds::product_upper_bound;
use multex_core::constructions::{
    build_construction, optimal_v0_size, pi_rd_with_witness, sigma_rd,
};
use multex_core::search::{exact_ex_pi, search_cache_lookup, search_cache_store, CacheKey};
use multex_core::verify::{
    check_conjecture, claim_c4_enumeration, ratio_trend, run_criterion, theorem_suite,
    SuiteConfig, SuiteReport,
};
use multex_core::{SearchConfig, TuranTemplate, SCHEMA};

#[derive(Parser)]
#[command(
    name = "multex",
    version,
    about = "Exact solver and verification toolkit for product-extremal multigraph problems",
    arg_required_else_help = true
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Search-result cache directory (overrides MULTEX_CACHE_DIR).
    #[arg(long, global = true, value_name = "DIR")]
    cache_dir: Option<PathBuf>,

    /// Disable cache lookup and persistence.
    #[arg(long, global = true)]
    no_cache: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Edge-count and product caps for an instance.
    Bounds {
        n: usize,
        s: usize,
        /// Set cap, either an integer or the form `a*K+C` (needs --a).
        q: String,
        /// Value substituted for `a` in a q expression.
        #[arg(long)]
        a: Option<u64>,
    },
    /// Materialize one member of the layered construction family.
    Construct {
        a: u64,
        /// Number of parts; must match the number of sizes given.
        r: usize,
        d: u64,
        /// Part sizes, distinguished part first.
        #[arg(required = true)]
        sizes: Vec<usize>,
    },
    /// Worst-case s-set weight over the family with these parameters.
    Sigma { a: u64, r: usize, d: u64, n: usize },
    /// Best product over part sizes for fixed (a, r, d).
    Pi { a: u64, r: usize, d: u64, n: usize },
    /// Closed-form optimal distinguished-part size and its value.
    OptimalX { a: u64, n: usize },
    /// Exact branch-and-bound search for the extremal product.
    Search {
        n: usize,
        s: usize,
        /// Set cap, either an integer or the form `a*K+C` (needs --a).
        q: String,
        /// Value substituted for `a` in a q expression.
        #[arg(long)]
        a: Option<u64>,
        /// Node-expansion allowance per top-level subtree.
        #[arg(long, value_name = "N")]
        budget_nodes: Option<u64>,
        /// Wall-clock allowance for the whole search.
        #[arg(long, value_name = "SECS")]
        budget_secs: Option<u64>,
        /// Worker threads (default: available cores, capped at 8).
        #[arg(long, value_name = "K")]
        threads: Option<usize>,
    },
    /// Compare a family member against the searched optimum at its own cap.
    Conjecture {
        a: u64,
        r: usize,
        d: u64,
        s: usize,
        n: usize,
        /// Node-expansion allowance per top-level subtree.
        #[arg(long, value_name = "N")]
        budget_nodes: Option<u64>,
        /// Wall-clock allowance for the embedded search.
        #[arg(long, value_name = "SECS")]
        budget_secs: Option<u64>,
        /// Worker threads (default: available cores, capped at 8).
        #[arg(long, value_name = "K")]
        threads: Option<usize>,
    },
    /// Enumerate eight-edge supports on seven vertices under the five-set cap.
    ClaimC4 {
        /// Spanned edge-count cap per five-set.
        #[arg(long, default_value_t = 4)]
        cap: u32,
        /// Also enumerate marked-edge configurations.
        #[arg(long)]
        deep: bool,
    },
    /// Run the verification criteria and report pass/fail per criterion.
    Suite {
        /// Run a single criterion by id (1..=10) instead of all.
        #[arg(long, value_name = "ID")]
        only: Option<u32>,
        /// Shift applied to every searched cap (control knob; default 0).
        #[arg(long, value_name = "DELTA", default_value_t = 0, allow_hyphen_values = true)]
        q_offset: i64,
        /// Node-expansion allowance per top-level subtree.
        #[arg(long, value_name = "N")]
        budget_nodes: Option<u64>,
        /// Wall-clock allowance per search.
        #[arg(long, value_name = "SECS")]
        budget_secs: Option<u64>,
        /// Worker threads per search.
        #[arg(long, value_name = "K")]
        threads: Option<usize>,
    },
    /// Bound-to-construction ratio along a grid of `a` values.
    Ratio {
        n: usize,
        /// Strictly increasing grid of a values, each at least 3.
        #[arg(required = true)]
        a: Vec<u64>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    let Cli {
        format,
        cache_dir,
        no_cache,
        cmd,
    } = cli;
    match cmd {
        Cmd::Bounds { n, s, q, a } => {
            let q = eval_q(&q, a)?;
            let rep = product_upper_bound(n, s, q).map_err(err)?;
            match format {
                Format::Text => {
                    println!("n: {}", rep.n);
                    println!("s: {}", rep.s);
                    println!("q: {}", rep.q);
                    println!("edge_cap: {}", rep.edge_cap);
                    println!("product_cap: {}", rep.product_cap);
                    println!("method: {}", token(&rep.method)?);
                }
                Format::Json => print_json(with_schema(serde_json::to_value(&rep).map_err(err)?)),
                Format::Csv => {
                    println!("n,s,q,edge_cap,product_cap,method");
                    println!(
                        "{},{},{},{},{},{}",
                        rep.n,
                        rep.s,
                        rep.q,
                        rep.edge_cap,
                        csv_quote(&rep.product_cap.to_string()),
                        token(&rep.method)?
                    );
                }
            }
            Ok(0)
        }
        Cmd::Construct { a, r, d, sizes } => {
            if sizes.len() != r {
                return Err(format!(
                    "invalid parameter r: {} part sizes given for r = {}",
                    sizes.len(),
                    r
                ));
            }
            let t = TuranTemplate::new(a, d, sizes).map_err(err)?;
            let g = build_construction(&t).map_err(err)?;
            match format {
                Format::Text => {
                    println!("a: {a}");
                    println!("r: {r}");
                    println!("d: {d}");
                    println!("sizes: {:?}", t.sizes);
                    println!("n: {}", g.n());
                    println!("edge_sum: {}", g.edge_sum());
                    println!("product: {}", g.product());
                    println!("witness:");
                    print!("{}", g.to_edge_list());
                }
                Format::Json => print_json(json!({
                    "schema": SCHEMA,
                    "a": a,
                    "r": r,
                    "d": d,
                    "sizes": t.sizes,
                    "n": g.n(),
                    "edge_sum": g.edge_sum(),
                    "product": g.product().to_string(),
                    "witness": g.to_edge_list(),
                })),
                Format::Csv => {
                    println!("a,r,d,n,edge_sum,product,witness");
                    println!(
                        "{},{},{},{},{},{},{}",
                        a,
                        r,
                        d,
                        g.n(),
                        g.edge_sum(),
                        csv_quote(&g.product().to_string()),
                        csv_quote(&g.to_edge_list())
                    );
                }
            }
            Ok(0)
        }
        Cmd::Sigma { a, r, d, n } => {
            let value = sigma_rd(a, r, d, n).map_err(err)?;
            match format {
                Format::Text => println!("value: {value}"),
                Format::Json => print_json(json!({
                    "schema": SCHEMA,
                    "a": a, "r": r, "d": d, "n": n,
                    "value": value,
                })),
                Format::Csv => {
                    println!("a,r,d,n,value");
                    println!("{a},{r},{d},{n},{value}");
                }
            }
            Ok(0)
        }
        Cmd::Pi { a, r, d, n } => {
            let (value, t) = pi_rd_with_witness(a, r, d, n).map_err(err)?;
            match format {
                Format::Text => {
                    println!("value: {value}");
                    println!("sizes: {:?}", t.sizes);
                }
                Format::Json => print_json(json!({
                    "schema": SCHEMA,
                    "a": a, "r": r, "d": d, "n": n,
                    "value": value.to_string(),
                    "sizes": t.sizes,
                })),
                Format::Csv => {
                    println!("a,r,d,n,value,sizes");
                    println!(
                        "{a},{r},{d},{n},{},{}",
                        csv_quote(&value.to_string()),
                        csv_quote(&format!("{:?}", t.sizes))
                    );
                }
            }
            Ok(0)
        }
        Cmd::OptimalX { a, n } => {
            let opt = optimal_v0_size(a, n).map_err(err)?;
            match format {
                Format::Text => {
                    println!("x_star: {}", opt.x_star);
                    println!("value: {}", opt.value);
                    println!("tied: {}", opt.tied);
                }
                Format::Json => {
                    let mut v = serde_json::to_value(&opt).map_err(err)?;
                    let map = v.as_object_mut().expect("struct serializes to object");
                    map.insert("a".into(), json!(a));
                    map.insert("n".into(), json!(n));
                    print_json(with_schema(v));
                }
                Format::Csv => {
                    println!("a,n,x_star,value,tied");
                    println!(
                        "{a},{n},{},{},{}",
                        opt.x_star,
                        csv_quote(&opt.value.to_string()),
                        opt.tied
                    );
                }
            }
            Ok(0)
        }
        Cmd::Search {
            n,
            s,
            q,
            a,
            budget_nodes,
            budget_secs,
            threads,
        } => {
            let q = eval_q(&q, a)?;
            let cfg = search_config(budget_nodes, budget_secs, threads)?;
            let dir = resolve_cache_dir(cache_dir);
            let key = CacheKey::new(n, s, q, &cfg);
            let mut cached = false;
            let result = match (!no_cache).then(|| search_cache_lookup(&dir, &key)).flatten() {
                Some(r) => {
                    cached = true;
                    r
                }
                None => {
                    let r = exact_ex_pi(n, s, q, &cfg).map_err(err)?;
                    if !no_cache {
                        if let Err(e) = search_cache_store(&dir, &key, &r) {
                            eprintln!("warning: cache entry not persisted: {e}");
                        }
                    }
                    r
                }
            };
            match format {
                Format::Text => {
                    println!("n: {n}");
                    println!("s: {s}");
                    println!("q: {q}");
                    println!("status: {}", token(&result.status)?);
                    println!("lower: {}", result.lower);
                    println!("upper: {}", result.upper);
                    println!("nodes: {}", result.stats.nodes_expanded);
                    println!(
                        "prunes: {} bound, {} infeasible, {} symmetry",
                        result.stats.prunes_bound,
                        result.stats.prunes_infeasible,
                        result.stats.prunes_symmetry
                    );
                    println!("wall_ms: {}", result.stats.wall_time_ms);
                    println!("cached: {cached}");
                    println!("witness:");
                    print!("{}", result.witness.to_edge_list());
                }
                Format::Json => {
                    let mut v = serde_json::to_value(&result).map_err(err)?;
                    let map = v.as_object_mut().expect("struct serializes to object");
                    map.insert("n".into(), json!(n));
                    map.insert("s".into(), json!(s));
                    map.insert("q".into(), json!(q));
                    map.insert("cached".into(), json!(cached));
                    print_json(with_schema(v));
                }
                Format::Csv => {
                    println!("n,s,q,status,lower,upper,nodes,wall_ms,cached,witness");
                    println!(
                        "{n},{s},{q},{},{},{},{},{},{cached},{}",
                        token(&result.status)?,
                        csv_quote(&result.lower.to_string()),
                        csv_quote(&result.upper.to_string()),
                        result.stats.nodes_expanded,
                        result.stats.wall_time_ms,
                        csv_quote(&result.witness.to_edge_list())
                    );
                }
            }
            Ok(0)
        }
        Cmd::Conjecture {
            a,
            r,
            d,
            s,
            n,
            budget_nodes,
            budget_secs,
            threads,
        } => {
            let cfg = search_config(budget_nodes, budget_secs, threads)?;
            let v = check_conjecture(a, r, d, s, n, &cfg).map_err(err)?;
            match format {
                Format::Text => {
                    println!("a: {a}");
                    println!("r: {r}");
                    println!("d: {d}");
                    println!("s: {s}");
                    println!("n: {n}");
                    println!("q: {}", v.q);
                    println!("construction_value: {}", v.construction_value);
                    println!("extremal_status: {}", token(&v.extremal.status)?);
                    println!("extremal_lower: {}", v.extremal.lower);
                    println!("extremal_upper: {}", v.extremal.upper);
                    println!("verdict: {}", token(&v.verdict)?);
                }
                Format::Json => print_json(with_schema(serde_json::to_value(&v).map_err(err)?)),
                Format::Csv => {
                    println!("a,r,d,s,n,q,construction_value,verdict,extremal_status,extremal_lower,extremal_upper");
                    println!(
                        "{a},{r},{d},{s},{n},{},{},{},{},{},{}",
                        v.q,
                        csv_quote(&v.construction_value.to_string()),
                        token(&v.verdict)?,
                        token(&v.extremal.status)?,
                        csv_quote(&v.extremal.lower.to_string()),
                        csv_quote(&v.extremal.upper.to_string())
                    );
                }
            }
            Ok(0)
        }
        Cmd::ClaimC4 { cap, deep } => {
            let rep = claim_c4_enumeration(cap, deep);
            match format {
                Format::Text => {
                    println!("cap: {}", rep.cap);
                    println!("supports_examined: {}", rep.supports_examined);
                    println!("valid_supports: {}", rep.valid_supports);
                    println!("all_contain_c4: {}", rep.all_contain_c4);
                    if let Some(deep) = rep.deep {
                        println!("deep_configs_examined: {}", deep.configs_examined);
                        println!("deep_valid_configs: {}", deep.valid_configs);
                    }
                }
                Format::Json => print_json(with_schema(serde_json::to_value(&rep).map_err(err)?)),
                Format::Csv => {
                    println!("cap,supports_examined,valid_supports,all_contain_c4,deep_configs_examined,deep_valid_configs");
                    let (dc, dv) = rep
                        .deep
                        .map_or((String::new(), String::new()), |d| {
                            (d.configs_examined.to_string(), d.valid_configs.to_string())
                        });
                    println!(
                        "{},{},{},{},{dc},{dv}",
                        rep.cap, rep.supports_examined, rep.valid_supports, rep.all_contain_c4
                    );
                }
            }
            Ok(0)
        }
        Cmd::Suite {
            only,
            q_offset,
            budget_nodes,
            budget_secs,
            threads,
        } => {
            let mut cfg = SuiteConfig {
                q_offset,
                ..SuiteConfig::default()
            };
            if budget_nodes.is_some() {
                cfg.search.node_budget = budget_nodes;
            }
            if let Some(secs) = budget_secs {
                cfg.search.time_budget = Some(Duration::from_secs(secs));
            }
            if let Some(k) = threads {
                if k == 0 {
                    return Err("invalid parameter threads: must be at least 1".into());
                }
                cfg.search.parallel_width = k;
            }
            let report = match only {
                Some(id) => {
                    let entry = run_criterion(id, &cfg).map_err(err)?;
                    SuiteReport {
                        passed: entry.pass,
                        entries: vec![entry],
                    }
                }
                None => theorem_suite(&cfg).map_err(err)?,
            };
            match format {
                Format::Text => {
                    for c in &report.entries {
                        println!(
                            "criterion {:2}: {} — {} [expected {}; got {}; {} ms]",
                            c.id,
                            if c.pass { "pass" } else { "FAIL" },
                            c.description,
                            c.expected,
                            c.actual,
                            c.runtime_ms,
                        );
                    }
                    let failed = report.entries.iter().filter(|c| !c.pass).count();
                    if report.passed {
                        println!("suite: all {} criteria pass", report.entries.len());
                    } else {
                        println!("suite: {failed} of {} criteria FAILED", report.entries.len());
                    }
                }
                Format::Json => {
                    print_json(with_schema(serde_json::to_value(&report).map_err(err)?))
                }
                Format::Csv => {
                    println!("id,pass,runtime_ms,description,expected,actual");
                    for c in &report.entries {
                        println!(
                            "{},{},{},{},{},{}",
                            c.id,
                            c.pass,
                            c.runtime_ms,
                            csv_quote(&c.description),
                            csv_quote(&c.expected),
                            csv_quote(&c.actual)
                        );
                    }
                }
            }
            Ok(if report.passed { 0 } else { 1 })
        }
        Cmd::Ratio { n, a } => {
            let ratios = ratio_trend(n, &a).map_err(err)?;
            match format {
                Format::Text => {
                    for (a, ratio) in a.iter().zip(&ratios) {
                        println!("a={a}: {ratio:.8}");
                    }
                }
                Format::Json => print_json(json!({
                    "schema": SCHEMA,
                    "n": n,
                    "grid": a,
                    "ratios": ratios,
                })),
                Format::Csv => {
                    println!("a,ratio");
                    for (a, ratio) in a.iter().zip(&ratios) {
                        println!("{a},{ratio:.8}");
                    }
                }
            }
            Ok(0)
        }
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Evaluate a cap given literally or as `a*K+C` / `a*K` with `--a`.
fn eval_q(expr: &str, a: Option<u64>) -> Result<u64, String> {
    let t = expr.trim();
    if let Ok(v) = t.parse::<u64>() {
        return Ok(v);
    }
    let rest = t
        .strip_prefix("a*")
        .ok_or_else(|| format!("invalid parameter q: expected an integer or `a*K+C`, got `{t}`"))?;
    let (k, c) = match rest.split_once('+') {
        Some((k, c)) => (k, c),
        None => (rest, "0"),
    };
    let k: u64 = k
        .trim()
        .parse()
        .map_err(|_| format!("invalid parameter q: bad multiplier in `{t}`"))?;
    let c: u64 = c
        .trim()
        .parse()
        .map_err(|_| format!("invalid parameter q: bad offset in `{t}`"))?;
    let a = a.ok_or_else(|| format!("invalid parameter q: `{t}` needs --a"))?;
    a.checked_mul(k)
        .and_then(|v| v.checked_add(c))
        .ok_or_else(|| format!("invalid parameter q: `{t}` overflows at a = {a}"))
}

fn search_config(
    nodes: Option<u64>,
    secs: Option<u64>,
    threads: Option<usize>,
) -> Result<SearchConfig, String> {
    let width = match threads {
        Some(0) => return Err("invalid parameter threads: must be at least 1".into()),
        Some(k) => k,
        None => std::thread::available_parallelism()
            .map(|p| p.get().min(8))
            .unwrap_or(1),
    };
    Ok(SearchConfig {
        node_budget: nodes,
        time_budget: secs.map(Duration::from_secs),
        parallel_width: width,
        ..SearchConfig::default()
    })
}

fn resolve_cache_dir(flag: Option<PathBuf>) -> PathBuf {
    if let Some(d) = flag {
        return d;
    }
    if let Some(d) = env::var_os("MULTEX_CACHE_DIR") {
        return PathBuf::from(d);
    }
    if let Some(d) = env::var_os("XDG_CACHE_HOME") {
        return PathBuf::from(d).join("multex");
    }
    if let Some(h) = env::var_os("HOME") {
        return PathBuf::from(h).join(".cache").join("multex");
    }
    env::temp_dir().join("multex-cache")
}

/// The canonical serialized token of a fieldless enum value.
fn token<T: serde::Serialize>(x: &T) -> Result<String, String> {
    match serde_json::to_value(x).map_err(err)? {
        Value::String(s) => Ok(s),
        other => Err(format!("expected a string token, got {other}")),
    }
}

fn with_schema(mut v: Value) -> Value {
    v.as_object_mut()
        .expect("report serializes to an object")
        .insert("schema".into(), json!(SCHEMA));
    v
}

fn print_json(v: Value) {
    println!("{}", serde_json::to_string_pretty(&v).expect("valid JSON"));
}

fn csv_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}
