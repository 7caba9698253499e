use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use capitula::cycunits::{
    compute_fitting_ideal, eigen_characters, export_table, ingest_table, render_line, Budget,
    FittingIdealRecord, RecordCache,
};
use capitula::fields::{compositum_polynomial, period_polynomial};
use capitula::quadforms::{class_group, fundamental_unit, lemma1_decompose, visible_class};
use capitula::survey::{
    parse_records_csv, parse_records_json, parse_residue, record_of, render_report, scan,
    scan_checkpointed, survey_field, Family, Format, ScanOptions, ScanSpec, SurveyRecord,
};

#[derive(Parser)]
#[command(name = "capitula", version, about = "Class groups of abelian fields of prime conductor and their capitulation")]
struct Cli {
    /// Output format: csv, json or md-table.
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Auxiliary-prime offset for Fitting ideal sampling.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory caching Fitting ideals.
    #[arg(long, global = true, env = "CAPITULA_CACHE")]
    cache: Option<PathBuf>,
    /// TOML file with defaults for the flags above and a [budget] table.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (0: one per core).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Record per-row wall-clock times in scans.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Quad,
    Cubic,
}

impl From<Kind> for Family {
    fn from(k: Kind) -> Family {
        match k {
            Kind::Quad => Family::Quad,
            Kind::Cubic => Family::Cubic,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Ideal class group of Q(√d) from binary quadratic forms.
    Classgroup {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
    },
    /// Fundamental unit of the real quadratic field of discriminant d.
    Unit {
        #[arg(long)]
        disc: i64,
    },
    /// The class of Q(√d) built from the unit of Q(√d₁), d = d₁d₂.
    Visible {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long)]
        d1: i64,
    },
    /// Fitting ideals for the characters of order `chi` on the p-free part.
    Fitting {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        chi: u64,
        /// Precision exponent (default: doubling from n+3).
        #[arg(long)]
        prec: Option<u32>,
    },
    /// Capitulation verdict for the p-part of one field of conductor ℓ.
    Capitulation {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value = "quad")]
        kind: Kind,
        /// Run the eigenspace computation even when the rules decide.
        #[arg(long)]
        confirm: bool,
    },
    /// Minimal polynomial of the Gaussian periods of degree m.
    Period {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        deg: u64,
        /// Also print the polynomial of K(√ℓ*).
        #[arg(long)]
        compositum: bool,
    },
    /// Survey every conductor below --max.
    Scan {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 10000)]
        max: u64,
        /// Residue class a:m of ℓ.
        #[arg(long = "mod", value_parser = residue)]
        residue: Option<(u64, u64)>,
        /// Required for bounds above 100000; checkpoints progress in the cache.
        #[arg(long)]
        long_run: bool,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Load a Fitting-ideal table into the cache.
    Ingest {
        #[arg(long)]
        file: PathBuf,
    },
    /// Write every cached Fitting ideal to a table.
    Export {
        #[arg(long)]
        file: PathBuf,
    },
    /// Re-render a saved scan (csv or json) in --format.
    Report {
        #[arg(long)]
        file: PathBuf,
    },
}

fn residue(s: &str) -> Result<(u64, u64), String> {
    parse_residue(s).map_err(|e| e.to_string())
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct Config {
    format: Option<Format>,
    seed: Option<u64>,
    cache: Option<PathBuf>,
    jobs: Option<usize>,
    timing: Option<bool>,
    budget: Option<BudgetConfig>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct BudgetConfig {
    batch_size: Option<usize>,
    stable_batches: Option<usize>,
    max_batches: Option<usize>,
    max_precision: Option<u32>,
    max_tower: Option<u32>,
}

struct Settings {
    format: Format,
    cache: Option<RecordCache>,
    opts: ScanOptions,
}

fn settings(cli: &Cli) -> Result<Settings> {
    let cfg: Config = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            toml::from_str(&text).with_context(|| format!("parsing {}", p.display()))?
        }
        None => Config::default(),
    };
    let mut budget = Budget::default();
    if let Some(b) = cfg.budget {
        budget.batch_size = b.batch_size.unwrap_or(budget.batch_size);
        budget.stable_batches = b.stable_batches.unwrap_or(budget.stable_batches);
        budget.max_batches = b.max_batches.unwrap_or(budget.max_batches);
        budget.max_precision = b.max_precision.unwrap_or(budget.max_precision);
        budget.max_tower = b.max_tower.unwrap_or(budget.max_tower);
    }
    budget.seed = cli.seed.or(cfg.seed).unwrap_or(0);
    let cache = match cli.cache.clone().or(cfg.cache) {
        Some(dir) => Some(RecordCache::open(&dir).with_context(|| format!("cache {}", dir.display()))?),
        None => None,
    };
    Ok(Settings {
        format: cli.format.or(cfg.format).unwrap_or(Format::Csv),
        opts: ScanOptions {
            budget,
            jobs: cli.jobs.or(cfg.jobs).unwrap_or(0),
            cache: cache.clone(),
            timing: cli.timing || cfg.timing.unwrap_or(false),
            confirm: false,
        },
        cache,
    })
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).unwrap() + "\n"
}

fn join(v: &[u64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Small key/value outputs: json object, csv header and row, or a two-column table.
fn emit(format: Format, fields: &[(&str, String)]) -> String {
    match format {
        Format::Json => {
            let m: serde_json::Map<String, serde_json::Value> =
                fields.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
            pretty(&serde_json::Value::Object(m))
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(fields.iter().map(|f| f.0)).unwrap();
            w.write_record(fields.iter().map(|f| f.1.as_str())).unwrap();
            String::from_utf8(w.into_inner().unwrap()).unwrap()
        }
        Format::MdTable => {
            let mut s = String::from("| key | value |\n|---|---|\n");
            for (k, v) in fields {
                s += &format!("| {k} | {} |\n", v.replace('|', "\\|"));
            }
            s
        }
    }
}

fn fitting_fields(r: &FittingIdealRecord) -> Result<Vec<(&'static str, String)>> {
    let ideal = r.ideal()?;
    let p = r.p;
    let class: Vec<u64> = ideal.class_invariants()?.iter().map(|&e| p.pow(e)).collect();
    let cap = ideal.capitulation_module()?;
    Ok(vec![
        ("record", render_line(r)),
        ("eigenspace_invariants", join(&class)),
        ("capitulation_order", cap.order().to_string()),
        ("maximal_capitulation", ideal.maximal_capitulation()?.to_string()),
    ])
}

fn cached_records(dir: &Path) -> Result<Vec<FittingIdealRecord>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "txt"))
        .collect();
    paths.sort();
    let mut out = Vec::new();
    for p in paths {
        out.extend(ingest_table(&p).with_context(|| format!("{}", p.display()))?);
    }
    out.sort_by_key(|r| (r.ell, r.p, r.chi_order, r.chi_id, r.n, r.seed));
    Ok(out)
}

fn run(cli: Cli) -> Result<String> {
    let s = settings(&cli)?;
    let f = s.format;
    Ok(match cli.cmd {
        Cmd::Classgroup { disc } => {
            let g = class_group(disc)?;
            let gens: Vec<String> = g.generators.iter().map(|q| q.to_string()).collect();
            emit(
                f,
                &[
                    ("disc", disc.to_string()),
                    ("order", g.order.to_string()),
                    ("invariants", join(&g.invariants)),
                    ("generators", gens.join(" ")),
                    ("narrow_order", g.narrow_order.to_string()),
                    ("ambiguous_classes", g.ambiguous_count.to_string()),
                ],
            )
        }
        Cmd::Unit { disc } => {
            let u = fundamental_unit(disc)?;
            let mut fields = vec![
                ("disc", disc.to_string()),
                ("x", u.x.to_string()),
                ("y", u.y.to_string()),
                ("norm", u.norm.to_string()),
            ];
            if let Ok(l) = lemma1_decompose(&u) {
                fields.push(("r", l.r.to_string()));
                fields.push(("w", l.w.to_string()));
            }
            emit(f, &fields)
        }
        Cmd::Visible { disc, d1 } => {
            let v = visible_class(disc, d1)?;
            emit(
                f,
                &[
                    ("disc", disc.to_string()),
                    ("d1", d1.to_string()),
                    ("form", v.form.to_string()),
                    ("order", v.order.to_string()),
                    ("r", v.r.to_string()),
                ],
            )
        }
        Cmd::Fitting { ell, p, chi, prec } => {
            let chars = eigen_characters(ell, p, chi);
            if chars.is_empty() {
                bail!("no character of order {chi} on the {p}-free part of (Z/{ell})*/±1");
            }
            let mut out = String::new();
            for id in chars {
                let r = compute_fitting_ideal(ell, p, chi, id, prec, &s.opts.budget)?;
                if let Some(c) = &s.cache {
                    c.put(&r)?;
                }
                out += &emit(f, &fitting_fields(&r)?);
            }
            out
        }
        Cmd::Capitulation { ell, p, kind, confirm } => {
            let family = Family::from(kind);
            let opts = ScanOptions { confirm, ..s.opts };
            match survey_field(family, ell, p, &opts)? {
                None => emit(f, &[("ell", ell.to_string()), ("p", p.to_string()), ("class_part", "1".into())]),
                Some(v) if f == Format::Json => pretty(&serde_json::to_value(&v)?),
                Some(v) => render_report(&[record_of(family, ell, p, &v, 0)], f)?,
            }
        }
        Cmd::Period { ell, deg, compositum } => {
            let pp = period_polynomial(ell, deg)?;
            let mut fields = vec![("ell", ell.to_string()), ("deg", deg.to_string()), ("polynomial", pp.poly.to_string())];
            if compositum {
                fields.push(("compositum", compositum_polynomial(&pp, ell)?.to_string()));
            }
            emit(f, &fields)
        }
        Cmd::Scan { kind, p, max, residue, long_run, out } => {
            if max > 100_000 && !long_run {
                bail!("--max {max} needs --long-run");
            }
            let spec = ScanSpec { family: kind.into(), p, residue, max };
            let rows = if long_run {
                let dir = s.cache.as_ref().ok_or_else(|| anyhow!("--long-run needs --cache or CAPITULA_CACHE"))?;
                let (a, m) = residue.unwrap_or((0, 1));
                let path = dir.dir().join(format!("scan-{}-{p}-{a}-{m}.json", spec.family.as_str()));
                scan_checkpointed(&spec, &s.opts, &path, 256, |done, total| {
                    eprintln!("{done}/{total} conductors");
                })?
            } else {
                scan(&spec, &s.opts)?
            };
            let text = render_report(&rows, f)?;
            match out {
                Some(path) => {
                    std::fs::write(&path, &text).with_context(|| format!("writing {}", path.display()))?;
                    String::new()
                }
                None => text,
            }
        }
        Cmd::Ingest { file } => {
            let cache = s.cache.as_ref().ok_or_else(|| anyhow!("ingest needs --cache or CAPITULA_CACHE"))?;
            let records = ingest_table(&file).with_context(|| format!("{}", file.display()))?;
            for r in &records {
                r.ideal().with_context(|| render_line(r))?;
                cache.put(r)?;
            }
            emit(f, &[("ingested", records.len().to_string())])
        }
        Cmd::Export { file } => {
            let cache = s.cache.as_ref().ok_or_else(|| anyhow!("export needs --cache or CAPITULA_CACHE"))?;
            let records = cached_records(cache.dir())?;
            export_table(&records, &file)?;
            emit(f, &[("exported", records.len().to_string())])
        }
        Cmd::Report { file } => {
            let text = std::fs::read_to_string(&file).with_context(|| format!("{}", file.display()))?;
            let rows: Vec<SurveyRecord> = if text.trim_start().starts_with(['{', '[']) {
                parse_records_json(&text)?
            } else {
                parse_records_csv(&text)?
            };
            render_report(&rows, f)?
        }
    })
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => print!("{out}"),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}
