use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gentle_udr::catalog::{identify, lookup, table1_catalog};
use gentle_udr::dsl::{parse_presentation, to_dsl};
use gentle_udr::homext::{brute_force_ext, end_is_trivial, ext1_dim, hom_dim, HomExtError};
use gentle_udr::lifts::{count_deformations_exhaustive, fingerprint, CoeffRing};
use gentle_udr::report::{analyze, census_string, sweep, sweep_markdown, udr_markdown, RunConfig};
use gentle_udr::udr::UdrError;
use gentle_udr::{make_string, string_module, FinModule, Presentation, PrimeField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Md,
}

#[derive(Debug, Parser)]
#[command(name = "gentle-udr", version, about = "Deformation rings of string modules over two-point gentle algebras")]
struct Cli {
    /// Prime order of the residue field.
    #[arg(long, global = true, default_value_t = 2)]
    q: u32,
    #[arg(long, global = true, default_value_t = 6)]
    max_len: usize,
    /// Highest truncation level t^n used by sequences and the lift census.
    #[arg(long, global = true, default_value_t = 3)]
    n_max: usize,
    /// Cap on brute-force enumeration steps.
    #[arg(long, global = true, default_value_t = 1 << 22)]
    budget: u128,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Lists the built-in algebras (usable as `@NAME`).
    Catalog,
    /// Checks the gentle conditions.
    Validate {
        algebra: String,
    },
    /// Computes the universal deformation ring of a string module.
    Udr {
        algebra: String,
        module: String,
    },
    /// dim Ext^1(M, N) by the linear solver and by brute force.
    Ext {
        algebra: String,
        m: String,
        n: Option<String>,
    },
    Hom {
        algebra: String,
        m: String,
        n: Option<String>,
    },
    /// Classifies every End = k string module of every selected algebra.
    Sweep {
        /// Restrict to these catalog names.
        #[arg(long = "only", num_args = 0..)]
        only: Option<Vec<String>>,
    },
    /// Layers and arms of a projective truncated at some radical depth.
    Radical {
        algebra: String,
        vertex: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Compares dim Ext^1(V, V) with deformations over the dual numbers.
    Tangent {
        algebra: String,
        module: String,
    },
    /// Counts deformations over F_q[t]/(t^n) for n up to --n-max.
    Census {
        algebra: String,
        module: String,
    },
}

struct Loaded {
    name: String,
    presentation: Arc<Presentation>,
}

/// `@NAME` picks a catalog entry; anything else is a path to a text
/// presentation.
fn load(spec: &str) -> Result<Loaded> {
    if let Some(name) = spec.strip_prefix('@') {
        let e = lookup(name).with_context(|| format!("no catalog algebra named `{name}`"))?;
        return Ok(Loaded { name: e.name.to_string(), presentation: e.presentation });
    }
    let p = read_presentation(Path::new(spec))?.into_gentle().map_err(|rep| {
        let why: Vec<String> = rep.violations.iter().map(|v| format!("{:?}: {}", v.condition, v.message)).collect();
        anyhow::anyhow!("{spec} is not gentle: {}", why.join("; "))
    })?;
    let name = identify(&p).map_or_else(|| p.name().to_string(), |e| e.name.to_string());
    Ok(Loaded { name, presentation: Arc::new(p) })
}

fn read_presentation(path: &Path) -> Result<Presentation> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_presentation(&text).with_context(|| format!("parsing {}", path.display()))
}

fn module(l: &Loaded, spec: &str, field: PrimeField) -> Result<FinModule> {
    let w = make_string(&l.presentation, spec).with_context(|| format!("module `{spec}`"))?;
    Ok(string_module(&l.presentation, &w, field)?)
}

fn require_trivial_end(v: &FinModule) -> Result<()> {
    if !end_is_trivial(v) {
        bail!(UdrError::EndNotTrivial(v.label()));
    }
    Ok(())
}

fn emit(cli: &Cli, json: &Value, md: impl FnOnce() -> String) -> Result<()> {
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(json)? + "\n",
        Format::Md => md(),
    };
    match &cli.output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Returns whether an internal inconsistency was found.
fn run(cli: &Cli) -> Result<bool> {
    let cfg = RunConfig { q: cli.q, max_len: cli.max_len, n_max: cli.n_max, budget: cli.budget };
    let field = cfg.field()?;
    match &cli.command {
        Command::Catalog => {
            let cat = table1_catalog();
            let rows: Vec<Value> = cat
                .iter()
                .map(|e| json!({"name": e.name, "quiver": e.quiver_label, "dsl": to_dsl(&e.presentation)}))
                .collect();
            emit(cli, &Value::Array(rows), || {
                cat.iter()
                    .map(|e| {
                        format!("## {} ({})\n\n```text\n{}```\n\n", e.name, e.quiver_label, to_dsl(&e.presentation))
                    })
                    .collect()
            })?;
        }
        Command::Validate { algebra } => {
            let p = match algebra.strip_prefix('@') {
                Some(_) => load(algebra)?.presentation,
                None => Arc::new(read_presentation(Path::new(algebra))?),
            };
            let rep = p.validate_gentle();
            let js = serde_json::to_value(&rep)?;
            emit(cli, &js, || {
                let mut s = format!("{}: {}\n", p.name(), if rep.pass { "gentle" } else { "not gentle" });
                for v in &rep.violations {
                    s += &format!("- {:?}: {}\n", v.condition, v.message);
                }
                s
            })?;
            if !rep.pass {
                bail!("{} is not gentle", p.name());
            }
        }
        Command::Udr { algebra, module: spec } => {
            let l = load(algebra)?;
            let w = make_string(&l.presentation, spec).with_context(|| format!("module `{spec}`"))?;
            let rep = analyze(&l.name, &l.presentation, &w, &cfg)?;
            emit(cli, &serde_json::to_value(&rep)?, || udr_markdown(&rep))?;
            return Ok(rep.descriptor.is_inconsistent() || rep.oracle_mismatch());
        }
        Command::Ext { algebra, m, n } => {
            let l = load(algebra)?;
            let mm = module(&l, m, field)?;
            let nn = module(&l, n.as_deref().unwrap_or(m), field)?;
            let dim = ext1_dim(&mm, &nn)?;
            let (bf, note) = match brute_force_ext(&mm, &nn, cfg.budget) {
                Ok(b) => (Some(b), None),
                Err(e @ HomExtError::BudgetExceeded { .. }) => (None, Some(format!("skipped: {e}"))),
                Err(e) => return Err(e.into()),
            };
            let js = json!({"algebra": l.name, "m": mm.label(), "n": nn.label(), "q": cfg.q,
                "ext1_dim": dim, "brute_force_ext": bf, "brute_force_note": note});
            emit(cli, &js, || {
                let b = bf.map_or_else(|| note.clone().unwrap_or_default(), |b| b.to_string());
                format!("dim Ext^1({}, {}) = {dim} (brute force: {b})\n", mm.label(), nn.label())
            })?;
            return Ok(bf.is_some_and(|b| b != dim));
        }
        Command::Hom { algebra, m, n } => {
            let l = load(algebra)?;
            let mm = module(&l, m, field)?;
            let nn = module(&l, n.as_deref().unwrap_or(m), field)?;
            let dim = hom_dim(&mm, &nn)?;
            let js = json!({"algebra": l.name, "m": mm.label(), "n": nn.label(), "q": cfg.q, "hom_dim": dim});
            emit(cli, &js, || format!("dim Hom({}, {}) = {dim}\n", mm.label(), nn.label()))?;
        }
        Command::Sweep { only } => {
            let rep = sweep(&cfg, only.as_deref())?;
            emit(cli, &serde_json::to_value(&rep)?, || sweep_markdown(&rep))?;
            return Ok(rep.has_internal_inconsistency());
        }
        Command::Radical { algebra, vertex, depth } => {
            let l = load(algebra)?;
            let p = &l.presentation;
            let rep = p.radical_series(vertex, *depth)?;
            let q = p.quiver();
            let js = json!({"algebra": l.name, "vertex": vertex, "depth": depth,
                "layers": rep.layer_labels(q), "arms": rep.arms.iter().zip(rep.arm_labels(q))
                    .map(|(a, labels)| json!({"first_arrow": q.arrow(a.first_arrow).name, "simples": labels}))
                    .collect::<Vec<_>>()});
            emit(cli, &js, || rep.render(q))?;
        }
        Command::Tangent { algebra, module: spec } => {
            let l = load(algebra)?;
            let v = module(&l, spec, field)?;
            require_trivial_end(&v)?;
            let dim = ext1_dim(&v, &v)?;
            let count = count_deformations_exhaustive(&v, CoeffRing::dual_numbers(field), cfg.budget)?;
            let expected = u128::from(cfg.q).pow(dim as u32);
            let js = json!({"algebra": l.name, "module": v.label(), "q": cfg.q, "ext1_dim": dim,
                "dual_number_deformations": count, "agrees": count == expected});
            emit(cli, &js, || format!("dim Ext^1 = {dim}; deformations over F_{}[e]: {count}\n", cfg.q))?;
            return Ok(count != expected);
        }
        Command::Census { algebra, module: spec } => {
            let l = load(algebra)?;
            let v = module(&l, spec, field)?;
            require_trivial_end(&v)?;
            let c = fingerprint(&v, cfg.n_max, cfg.budget)?;
            emit(cli, &serde_json::to_value(&c)?, || {
                format!("census (q = {}): {} matches [{}]\n", c.q, census_string(&c.counts()), c.matches.join(", "))
            })?;
        }
    }
    Ok(false)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("error: internal consistency check failed (see report)");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
