use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use powergroup::catalog::{self, SMALL_GROUPS, UNDERLIES_CATALOG};
use powergroup::census::{census, to_jsonl};
use powergroup::classify::enumerate_subquotients;
use powergroup::iso::{self, GroupFingerprint};
use powergroup::qcuts::{self, QuadExt};
use powergroup::suites::{self, matrix_csv, SuiteOptions, SUITES};
use powergroup::zset::{self, ZSet};
use powergroup::{Caps, FiniteGroup};

const AFTER_HELP: &str = "\
Suites (stable names): thm1-equivalence, thm2-finite, oracle-equivalence,
zsets-thm3, qcuts-thm4, coset-epimorphism, underlies-matrix, or `all`.

Exit codes: 0 all checks pass, 1 a mathematical check failed,
2 usage or input error.";

#[derive(Parser)]
#[command(name = "powergroup", version, about = "Power groups of small groups, Z and Q", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Args, Clone)]
struct GroupArg {
    /// Group name, e.g. C4, V4, S3, D4, Q8, C2^3, C4xC2.
    #[arg(long, conflicts_with = "table")]
    group: Option<String>,
    /// JSON Cayley table `{"order": n, "table": [[...]]}`.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Largest order for exhaustive subset scans.
    #[arg(long, default_value_t = 8)]
    max_order: usize,
    /// Write output here (atomically) instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate every power group of a group as JSON lines.
    Enum(GroupArg),
    /// Run a named invariant suite.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 8)]
        max_order: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Oracle window for sums over Z.
        #[arg(long, default_value_t = 256)]
        window: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Does G2 underlie G1 (G1 has a power group isomorphic to G2)?
    Underlies {
        #[arg(long, requires = "g2", conflicts_with = "matrix")]
        g1: Option<String>,
        #[arg(long, requires = "g1")]
        g2: Option<String>,
        /// `default`, or a comma-separated list of group names.
        #[arg(long)]
        matrix: Option<String>,
        #[arg(long, default_value_t = 8)]
        max_order: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List every subquotient H/N as JSON lines.
    Subquotients(GroupArg),
    /// Subsets of Z.
    Zset {
        #[command(subcommand)]
        op: ZsetOp,
    },
    /// Cuts of Q with endpoints in Q(sqrt2).
    Qcuts {
        #[command(subcommand)]
        op: QcutsOp,
    },
    /// Built-in groups.
    Catalog {
        #[command(subcommand)]
        op: CatalogOp,
    },
}

#[derive(Subcommand)]
enum ZsetOp {
    /// Exact Minkowski sum A + B.
    Sum {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        /// Also list members in [-W, W].
        #[arg(long)]
        window: Option<i64>,
    },
    /// Is E + E = E?
    Idempotent {
        #[arg(allow_hyphen_values = true)]
        e: String,
    },
    /// The coset family {a + E | a in dZ} over a window of representatives.
    CosetGroup {
        #[arg(allow_hyphen_values = true)]
        e: String,
        #[arg(long, default_value_t = 1)]
        d: u64,
        #[arg(long, default_value_t = 12)]
        window: i64,
    },
    /// Is A a unit at E, and is A a translate of E? Exit 1 if they disagree.
    #[command(name = "thm3-test")]
    UnitTest {
        #[arg(allow_hyphen_values = true)]
        e: String,
        #[arg(allow_hyphen_values = true)]
        a: String,
    },
}

#[derive(Subcommand)]
enum QcutsOp {
    /// Check the cut family generated by the given endpoints.
    Verify {
        #[arg(default_values_t = ["1".to_string(), "sqrt2".to_string()], allow_hyphen_values = true)]
        generators: Vec<String>,
    },
    /// A rational in exactly one of a + (0, inf) and (r, inf).
    Witness {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(long, default_value = "sqrt2", allow_hyphen_values = true)]
        r: String,
    },
}

#[derive(Subcommand)]
enum CatalogOp {
    List,
    Show { name: String },
}

fn caps(max_order: usize) -> Caps {
    Caps::default().with_exhaustive_order(max_order)
}

fn load_group(arg: &GroupArg) -> Result<(String, FiniteGroup)> {
    let caps = caps(arg.max_order);
    let (name, g) = match (&arg.group, &arg.table) {
        (Some(name), None) => (name.clone(), catalog::parse(name, &caps)?),
        (None, Some(path)) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let g = FiniteGroup::from_json(&text)
                .with_context(|| format!("invalid table {}", path.display()))?;
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            (name, g)
        }
        _ => bail!("give exactly one of --group or --table"),
    };
    if g.order() > arg.max_order {
        bail!(
            "group {name} has order {} above --max-order {}",
            g.order(),
            arg.max_order
        );
    }
    Ok((name, g))
}

/// Writes to `path` via a temporary sibling and a rename, or to stdout.
fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            let mut tmp = path.as_os_str().to_owned();
            tmp.push(".tmp");
            let tmp = PathBuf::from(tmp);
            fs::write(&tmp, text).with_context(|| format!("writing {}", tmp.display()))?;
            fs::rename(&tmp, path).with_context(|| format!("renaming to {}", path.display()))?;
            Ok(())
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn zset_arg(s: &str) -> Result<ZSet> {
    s.parse().map_err(|e| anyhow!("{e}"))
}

fn quad_arg(s: &str) -> Result<QuadExt> {
    s.parse().map_err(|e| anyhow!("{e}"))
}

fn status(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Enum(arg) => {
            let (name, g) = load_group(&arg)?;
            let records = census(&name, &g, &caps(arg.max_order))?;
            emit(arg.out.as_deref(), &to_jsonl(&records))?;
            let subq = records
                .iter()
                .filter(|r| r.flags.conditions.is_subquotient)
                .count();
            eprintln!(
                "{name}: {} power groups, {subq} subquotients",
                records.len()
            );
            Ok(status(subq == records.len()))
        }
        Command::Verify {
            suite,
            max_order,
            trials,
            seed,
            window,
            out,
        } => {
            let opts = SuiteOptions {
                caps: caps(max_order.max(4)),
                max_order,
                trials,
                seed,
                window,
            };
            let names: Vec<&str> = if suite == "all" {
                SUITES.to_vec()
            } else {
                vec![suite.as_str()]
            };
            let mut reports = Vec::new();
            for name in names {
                let rep = suites::run_suite(name, &opts)?;
                for c in &rep.checks {
                    eprintln!(
                        "[{}] {name} / {}: {}",
                        if c.passed { "pass" } else { "FAIL" },
                        c.name,
                        c.detail
                    );
                }
                eprintln!("{name}: {}", if rep.passed { "pass" } else { "FAIL" });
                reports.push(rep);
            }
            let ok = reports.iter().all(|r| r.passed);
            let text: String = reports
                .iter()
                .map(|r| serde_json::to_string(r).expect("serializable") + "\n")
                .collect();
            emit(out.as_deref(), &text)?;
            Ok(status(ok))
        }
        Command::Underlies {
            g1,
            g2,
            matrix,
            max_order,
            out,
        } => {
            let caps = caps(max_order);
            if let (Some(g1), Some(g2)) = (&g1, &g2) {
                let a = catalog::parse(g1, &caps)?;
                let b = catalog::parse(g2, &caps)?;
                let text = match iso::underlies(&a, &b, &caps)? {
                    Some(w) => format!(
                        "yes\n{}",
                        pretty(
                            &json!({"g1": g1, "g2": g2, "family": w.family.elements(), "mapping": w.mapping.0})
                        )
                    ),
                    None => "no\n".to_string(),
                };
                emit(out.as_deref(), &text)?;
                return Ok(ExitCode::SUCCESS);
            }
            let Some(list) = matrix else {
                bail!("give --g1 and --g2, or --matrix")
            };
            let names: Vec<String> = if list == "default" {
                UNDERLIES_CATALOG.iter().map(|s| s.to_string()).collect()
            } else {
                list.split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect()
            };
            let groups: Vec<FiniteGroup> = names
                .iter()
                .map(|n| catalog::parse(n, &caps))
                .collect::<Result<_, _>>()?;
            let m = iso::underlies_matrix(&groups, &caps)?;
            emit(out.as_deref(), &matrix_csv(&names, &m))?;
            let (refl, trans) = (iso::is_reflexive(&m), iso::is_transitive(&m));
            eprintln!("reflexive: {refl}\ntransitive: {trans}");
            Ok(status(refl && trans))
        }
        Command::Subquotients(arg) => {
            let (name, g) = load_group(&arg)?;
            let text: String = enumerate_subquotients(&g)
                .iter()
                .map(|(d, f)| {
                    json!({"group": name, "h": d.h, "n": d.n, "elements": f.elements(),
                           "fingerprint": GroupFingerprint::of(f.abstract_table())})
                    .to_string()
                        + "\n"
                })
                .collect();
            emit(arg.out.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Zset { op } => match op {
            ZsetOp::Sum { a, b, window } => {
                let (a, b) = (zset_arg(&a)?, zset_arg(&b)?);
                let s = zset::zset_sum(&a, &b)?;
                let mut v = json!({"a": a, "b": b, "sum": s});
                if let Some(w) = window {
                    v["members"] = json!(s.members_in(-w, w));
                }
                emit(None, &pretty(&v))?;
                Ok(ExitCode::SUCCESS)
            }
            ZsetOp::Idempotent { e } => {
                let e = zset_arg(&e)?;
                let square = zset::zset_sum(&e, &e)?;
                emit(
                    None,
                    &pretty(&json!({"set": e, "square": square, "idempotent": square == e})),
                )?;
                Ok(ExitCode::SUCCESS)
            }
            ZsetOp::CosetGroup { e, d, window } => {
                let rep = zset::build_z_coset_group(&zset_arg(&e)?, d, (-window, window))?;
                emit(None, &pretty(&json!(rep)))?;
                Ok(status(rep.product_law && rep.epimorphism_verified))
            }
            ZsetOp::UnitTest { e, a } => {
                let v = zset::decide_unit(&zset_arg(&e)?, &zset_arg(&a)?)?;
                emit(None, &pretty(&json!(v)))?;
                Ok(status(v.agrees()))
            }
        },
        Command::Qcuts { op } => match op {
            QcutsOp::Verify { generators } => {
                let gens: Vec<QuadExt> = generators
                    .iter()
                    .map(|g| quad_arg(g))
                    .collect::<Result<_>>()?;
                let rep = qcuts::verify_cut_power_group(&gens)?;
                emit(None, &pretty(&json!(rep)))?;
                Ok(status(rep.is_power_group()))
            }
            QcutsOp::Witness { a, r } => {
                let a = quad_arg(&a)?;
                if !a.is_rational() {
                    bail!("a must be rational");
                }
                let r = quad_arg(&r)?;
                let w = qcuts::not_coset_group_witness(&a.p, &r)?;
                let ok = qcuts::separates(&w, &a.p, &r);
                let cut = qcuts::CutElement::new(r.clone());
                emit(
                    None,
                    &pretty(&json!({
                        "a": a, "r": r, "witness": QuadExt::rational(w.clone()),
                        "in_translate": w > a.p, "in_cut": qcuts::cut_member(&w, &cut),
                    })),
                )?;
                Ok(status(ok))
            }
        },
        Command::Catalog { op } => match op {
            CatalogOp::List => {
                let caps = Caps::default();
                let text: String = SMALL_GROUPS
                    .iter()
                    .map(|&n| {
                        let g = catalog::parse(n, &caps).expect("catalog names parse");
                        format!("{n}\t{}\n", g.order())
                    })
                    .collect();
                emit(None, &text)?;
                Ok(ExitCode::SUCCESS)
            }
            CatalogOp::Show { name } => {
                let g = catalog::parse(&name, &Caps::default())?;
                let doc = g.to_document();
                emit(
                    None,
                    &pretty(
                        &json!({"name": name, "order": doc.order, "table": doc.table,
                                    "fingerprint": GroupFingerprint::of(&g)}),
                    ),
                )?;
                Ok(ExitCode::SUCCESS)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
