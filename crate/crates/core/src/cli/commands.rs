//! Data commands and the report bundle.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::coset::{pair_row, standard_vectors, DoubleCoset};
use crate::error::Error;
use crate::hecke::{classes_up_to, product_row, HeckeElement};
use crate::kms::partition::{partition_global, partition_prime, sigma1_table, DEFAULT_ZETA_TERMS};
use crate::kms::state::{e0_expected, phi, residual_table};
use crate::kms::Ctx;
use crate::lattice::{superlattices, Lattice};
use crate::spectral::{op_generator, op_h, op_hecke, Generator, SparseOperator, Window};

use super::config::{
    parse_class, parse_range, Command, Format, OpKind, RunConfig, Suite, MAX_DEPTH, MAX_LATTICE_INDEX,
    MAX_PARTITION_BOUND, MAX_WINDOW_BOUND, MAX_WINDOW_DIM,
};
use super::report::{data_row, write_csv, write_json, Report, Status, Table, SCHEMA};
use super::suites::{self, A_CHARACTERIZED, A_EULER, A_KMS, A_LATTICES, A_MODULAR, A_PRODUCT, A_ZETA, TOL_RESIDUAL, TOL_STATE};

const A_OPERATORS: &str = "These are classical formulas for Hecke operators.";

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io { path: PathBuf, source: std::io::Error },
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "{m}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
        }
    }
}

type Outcome = Result<bool, CliError>;

fn stdout_err(e: std::io::Error) -> CliError {
    CliError::Io { path: PathBuf::from("<stdout>"), source: e }
}

fn config(e: impl ToString) -> CliError {
    CliError::Config(e.to_string())
}

pub fn dispatch(cmd: &Command, cfg: &RunConfig, out_dir: Option<&Path>, out: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Lattices { n, range, check } => emit(lattices(*n, range.as_deref(), check.is_some(), cfg)?, cfg, out),
        Command::Verify { suite } => {
            let report = Report::new(format!("verify {}", suite.name()), cfg, suites::run_suite(*suite, cfg));
            report.write(cfg.format, out).map_err(stdout_err)?;
            Ok(report.pass)
        }
        Command::PairVerify => emit(pair_verify(cfg), cfg, out),
        Command::HeckeMul { lhs, rhs } => emit(hecke_mul(lhs.as_deref(), rhs.as_deref(), cfg)?, cfg, out),
        Command::OpMatrix { op, class } => op_matrix(*op, class.as_deref(), cfg, out_dir, out),
        Command::Partition => emit(partition(cfg)?, cfg, out),
        Command::KmsVerify => emit(kms_verify(cfg)?, cfg, out),
        Command::Report => {
            let dir = out_dir.ok_or_else(|| config("report needs --out"))?;
            report_bundle(cfg, dir, out)
        }
    }
}

fn emit(t: Table, cfg: &RunConfig, out: &mut dyn Write) -> Outcome {
    t.write(cfg.format, out).map_err(stdout_err)?;
    Ok(t.pass)
}

#[derive(Serialize)]
struct LatticeRow {
    n: u64,
    lattice: String,
    q: String,
    hnf: [String; 3],
    class: String,
}

fn lattice_row(n: u64, l: &Lattice) -> Value {
    let (d1, d2) = l.class().expect("superlattice");
    let h = l.hnf();
    let row = LatticeRow {
        n,
        lattice: l.to_string(),
        q: l.q().to_string(),
        hnf: [h.a().to_string(), h.c().to_string(), h.d().to_string()],
        class: format!("({d1}, {d2})"),
    };
    data_row(A_LATTICES, Status::Pass, &row)
}

fn lattices(n: Option<u64>, range: Option<&str>, counts_only: bool, cfg: &RunConfig) -> Result<Table, CliError> {
    let (a, b) = match (n, range) {
        (Some(0), _) => return Err(config("--n must be positive")),
        (Some(n), _) => (n, n),
        (None, Some(r)) => parse_range(r).map_err(config)?,
        (None, None) => return Err(config("lattices needs --n or --range")),
    };
    let name = match n {
        Some(n) => format!("lattices --n {n}"),
        None => format!("lattices --range {a}..{b}"),
    };
    if b > MAX_LATTICE_INDEX {
        let row = json!({ "n": b, "anchor": A_LATTICES, "status": "skipped", "detail": format!("index cap is {MAX_LATTICE_INDEX}") });
        return Ok(Table::new(name, cfg, vec![row], Vec::new()));
    }
    let sigma = sigma1_table(b);
    let mut listing = Vec::new();
    let mut checks = Vec::new();
    for m in a..=b {
        let ls = superlattices(m);
        let pass = ls.len() as u64 == sigma[m as usize];
        checks.push(json!({
            "n": m,
            "count": ls.len(),
            "sigma1": sigma[m as usize],
            "anchor": A_LATTICES,
            "status": if pass { "pass" } else { "fail" },
        }));
        if !counts_only || n.is_some() {
            listing.extend(ls.iter().map(|l| lattice_row(m, l)));
        }
    }
    Ok(if counts_only && n.is_none() {
        Table::new(name, cfg, checks, Vec::new())
    } else {
        Table::new(name, cfg, listing, checks)
    })
}

fn pair_verify(cfg: &RunConfig) -> Table {
    let rows = standard_vectors()
        .iter()
        .map(|x| match pair_row(x, cfg.modcap) {
            Ok(r) => data_row(A_MODULAR, Status::of(r.pass), &r),
            Err(e) => {
                let status = if matches!(e, Error::CapExceeded { .. }) { "skipped" } else { "fail" };
                json!({ "m": x.m.to_string(), "g": x.g.to_string(), "detail": e.to_string(), "anchor": A_MODULAR, "status": status })
            }
        })
        .collect();
    Table::new("pair-verify", cfg, rows, Vec::new())
}

fn class_arg(s: &str) -> Result<DoubleCoset, CliError> {
    let (a, b) = parse_class(s).map_err(config)?;
    DoubleCoset::new(a, b).map_err(config)
}

/// Rows pass when the degree `Σ coeff R(class)` is `R(lhs) R(rhs)`.
fn product_value(lhs: &DoubleCoset, rhs: &DoubleCoset) -> Value {
    let row = product_row(lhs, rhs);
    let mut f = HeckeElement::zero();
    for t in &row.products {
        let c: crate::exact::Rat = t.coeff.parse().expect("rational coefficient");
        f.add_term(t.class.clone(), c);
    }
    let degree: crate::exact::Rat = f.terms().map(|(dc, c)| c * crate::exact::Rat::from_integer(dc.coset_count())).sum();
    let pass = degree == crate::exact::Rat::from_integer(lhs.coset_count() * rhs.coset_count());
    data_row(A_PRODUCT, Status::of(pass), &row)
}

fn hecke_mul(lhs: Option<&str>, rhs: Option<&str>, cfg: &RunConfig) -> Result<Table, CliError> {
    let rows = match (lhs, rhs) {
        (Some(l), Some(r)) => vec![product_value(&class_arg(l)?, &class_arg(r)?)],
        _ => {
            let bound = cfg.bound.unwrap_or(8);
            if bound > 64 {
                return Err(config("hecke-mul table bound is capped at 64"));
            }
            let classes = classes_up_to(bound);
            let mut rows = Vec::new();
            for a in &classes {
                for b in &classes {
                    rows.push(product_value(a, b));
                }
            }
            rows
        }
    };
    Ok(Table::new("hecke-mul", cfg, rows, Vec::new()))
}

fn op_window(cfg: &RunConfig) -> Result<Window, CliError> {
    match cfg.bound {
        Some(b) if b > MAX_WINDOW_BOUND => Err(config(format!("--bound is capped at {MAX_WINDOW_BOUND} for operators"))),
        Some(b) => Window::global(b, 1).map_err(config),
        None => {
            let p = cfg.primes.first().copied().ok_or_else(|| config("prime window needs --primes"))?;
            let k = cfg.k.unwrap_or(3);
            let w = Window::prime(p, k).map_err(config)?;
            if w.len() as u64 > MAX_WINDOW_DIM {
                return Err(config(format!("prime window has {} vectors, cap is {MAX_WINDOW_DIM}", w.len())));
            }
            Ok(w)
        }
    }
}

fn build_op(op: OpKind, class: Option<&str>, cfg: &RunConfig, win: &Window) -> Result<(String, SparseOperator), CliError> {
    let p = cfg.primes.first().copied().unwrap_or(2);
    let gen = match op {
        OpKind::V => Generator::V(p),
        OpKind::VStar => Generator::VStar(p),
        OpKind::U => Generator::U(p),
        OpKind::UStar => Generator::UStar(p),
        OpKind::E => Generator::E { lattice: Lattice::z2(), p },
        OpKind::H => return Ok(("H".into(), op_h(win))),
        OpKind::Hecke => {
            let dc = class_arg(class.ok_or_else(|| config("--op hecke needs --class d1,d2"))?)?;
            let op = op_hecke(&HeckeElement::basis(dc.clone()), win, None).map_err(config)?;
            return Ok((format!("pi{dc}"), op));
        }
    };
    Ok((gen.to_string(), op_generator(&gen, win, None).map_err(config)?))
}

#[derive(Serialize)]
struct BasisEntry {
    i: usize,
    lattice: String,
    index: u64,
}

fn basis_manifest(win: &Window) -> Vec<BasisEntry> {
    win.basis().iter().enumerate().map(|(i, l)| BasisEntry { i, lattice: l.to_string(), index: win.index_of(i) }).collect()
}

fn write_file(path: &Path, body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> Result<(), CliError> {
    let io = |source| CliError::Io { path: path.to_path_buf(), source };
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(io)?;
    }
    let mut buf = Vec::new();
    body(&mut buf).map_err(io)?;
    fs::write(path, buf).map_err(io)
}

fn write_basis_csv(win: &Window, w: &mut dyn Write) -> std::io::Result<()> {
    let rows: Vec<Value> = basis_manifest(win).iter().map(|b| serde_json::to_value(b).expect("serializes")).collect();
    write_csv(&rows, w)
}

fn write_triplets_csv(op: &SparseOperator, w: &mut dyn Write) -> std::io::Result<()> {
    let mut c = csv::Writer::from_writer(w);
    c.write_record(["row", "col", "value"])?;
    for t in op.triplets() {
        c.write_record([t.row.to_string(), t.col.to_string(), t.value])?;
    }
    c.flush()
}

fn file_stem(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '-' }).collect()
}

fn op_matrix(op: OpKind, class: Option<&str>, cfg: &RunConfig, out_dir: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let win = op_window(cfg)?;
    let (name, m) = build_op(op, class, cfg, &win)?;
    if let Some(dir) = out_dir {
        let stem = file_stem(&name);
        write_file(&dir.join(format!("{stem}.basis.csv")), |w| write_basis_csv(&win, w))?;
        write_file(&dir.join(format!("{stem}.triplets.csv")), |w| write_triplets_csv(&m, w))?;
    }
    match cfg.format {
        Format::Csv => write_triplets_csv(&m, out),
        Format::Text => {
            m.triplets().iter().try_for_each(|t| writeln!(out, "{} {} {}", t.row, t.col, t.value))
        }
        Format::Json => write_json(
            &json!({
                "schema": SCHEMA,
                "command": "op-matrix",
                "seed": cfg.seed,
                "config": cfg,
                "operator": name,
                "anchor": A_OPERATORS,
                "window": win.mode(),
                "dim": win.len(),
                "interior": win.interior(),
                "boundary": m.boundary(),
                "basis": basis_manifest(&win),
                "triplets": m.triplets(),
            }),
            out,
        ),
    }
    .map_err(stdout_err)?;
    Ok(true)
}

fn ctx(cfg: &RunConfig) -> Result<Ctx, CliError> {
    Ctx::new(cfg.precision).map_err(config)
}

fn skipped_row(anchor: &'static str, record: Value, e: &Error) -> Value {
    let mut v = record;
    v["detail"] = Value::from(e.to_string());
    v["anchor"] = Value::from(anchor);
    v["status"] = Value::from("skipped");
    v
}

/// Local sums at `--depth` for every prime and beta, then global sums at
/// `--bound` (default 10^4).
pub fn partition_rows(cfg: &RunConfig) -> Result<(Vec<Value>, Vec<Value>), CliError> {
    let ctx = ctx(cfg)?;
    if cfg.depth > MAX_DEPTH {
        return Err(config(format!("--depth is capped at {MAX_DEPTH}")));
    }
    let mut local = Vec::new();
    for beta in &cfg.beta {
        for &p in &cfg.primes {
            local.push(match partition_prime(p, beta, cfg.depth, &ctx) {
                Ok(r) => data_row(A_EULER, Status::of(r.report.within_bound), &r.report),
                Err(e) => skipped_row(A_EULER, json!({ "kind": "prime", "p": p, "beta": beta }), &e),
            });
        }
    }
    let bound = cfg.bound.unwrap_or(10_000);
    if bound > MAX_PARTITION_BOUND {
        return Err(config(format!("--bound is capped at {MAX_PARTITION_BOUND} for partition sums")));
    }
    let mut global = Vec::new();
    for beta in &cfg.beta {
        global.push(match partition_global(beta, bound, DEFAULT_ZETA_TERMS, &ctx) {
            Ok(r) => data_row(A_ZETA, Status::of(r.report.within_bound), &r.report),
            Err(e) => skipped_row(A_ZETA, json!({ "kind": "global", "beta": beta, "truncation": bound }), &e),
        });
    }
    Ok((local, global))
}

fn partition(cfg: &RunConfig) -> Result<Table, CliError> {
    let (mut rows, global) = partition_rows(cfg)?;
    rows.extend(global);
    Ok(Table::new("partition", cfg, rows, Vec::new()))
}

#[derive(Serialize)]
struct StateRow {
    p: u64,
    beta: String,
    element: &'static str,
    value: String,
    bound: String,
    expected: String,
    method: &'static str,
    depth_used: u32,
}

fn kms_verify(cfg: &RunConfig) -> Result<Table, CliError> {
    let ctx = ctx(cfg)?;
    if cfg.depth > MAX_DEPTH {
        return Err(config(format!("--depth is capped at {MAX_DEPTH}")));
    }
    let mut rows = Vec::new();
    for beta in &cfg.beta {
        for &p in &cfg.primes {
            let mut spec = crate::kms::state::StateSpec::new(p, beta.clone(), cfg.depth);
            spec.det_power = cfg.det_power;
            let eff = spec.effective_beta();
            let cases = [
                ("v*v", vec![Generator::VStar(p), Generator::V(p)], ctx.u64(p + 1), A_CHARACTERIZED),
                ("e_Z2", vec![Generator::E { lattice: Lattice::z2(), p }], e0_expected(p, &eff, &ctx), A_EULER),
            ];
            for (name, word, expected, anchor) in cases {
                rows.push(match phi(&word, &spec, &ctx) {
                    Ok(v) => {
                        let tol = ctx.add(&v.value.bound, &ctx.from_f64(TOL_STATE));
                        let pass = ctx.le(&ctx.abs(&ctx.sub(&v.value.value, &expected)), &tol);
                        let row = StateRow {
                            p,
                            beta: beta.to_string(),
                            element: name,
                            value: ctx.fmt(&v.value.value),
                            bound: ctx.fmt(&v.value.bound),
                            expected: ctx.fmt(&expected),
                            method: v.method,
                            depth_used: v.depth_used,
                        };
                        data_row(anchor, Status::of(pass), &row)
                    }
                    Err(e) => skipped_row(anchor, json!({ "p": p, "beta": beta, "element": name }), &e),
                });
            }
            match residual_table(&spec, TOL_RESIDUAL, &ctx) {
                Ok(table) => rows.extend(table.iter().map(|r| {
                    let mut v = data_row(A_KMS, Status::of(r.pass), r);
                    v["p"] = Value::from(p);
                    v["beta"] = Value::from(beta.to_string());
                    v
                })),
                Err(e) => rows.push(skipped_row(A_KMS, json!({ "p": p, "beta": beta, "element": "residuals" }), &e)),
            }
        }
    }
    Ok(Table::new("kms-verify", cfg, rows, Vec::new()))
}

#[derive(Serialize)]
struct SuiteEntry {
    name: &'static str,
    file: String,
    summary: super::report::Summary,
    pass: bool,
}

/// Writes the bundle and prints the summary. An empty prime list writes
/// the summary alone.
fn report_bundle(cfg: &RunConfig, dir: &Path, out: &mut dyn Write) -> Outcome {
    let mut files: Vec<String> = Vec::new();
    let mut suite_entries = Vec::new();
    let mut pass = true;
    let mut put = |rel: String, body: &dyn Fn(&mut dyn Write) -> std::io::Result<()>| -> Result<(), CliError> {
        write_file(&dir.join(&rel), body)?;
        files.push(rel);
        Ok(())
    };
    if !cfg.primes.is_empty() {
        for suite in Suite::ALL {
            let report = Report::new(format!("verify {}", suite.name()), cfg, suites::run_suite(suite, cfg));
            let rel = format!("suites/{}.json", suite.name());
            put(rel.clone(), &|w| write_json(&report, w))?;
            pass &= report.pass;
            suite_entries.push(SuiteEntry { name: suite.name(), file: rel, summary: report.summary, pass: report.pass });
        }
        for &p in &cfg.primes {
            let k = cfg.k.unwrap_or(3);
            let win = Window::prime(p, k).map_err(config)?;
            if win.len() as u64 > MAX_WINDOW_DIM {
                return Err(config(format!("prime window p={p} k={k} exceeds {MAX_WINDOW_DIM} vectors")));
            }
            put(format!("basis/prime-{p}-{k}.csv"), &|w| write_basis_csv(&win, w))?;
            for gen in [Generator::V(p), Generator::VStar(p), Generator::U(p), Generator::UStar(p)] {
                let m = op_generator(&gen, &win, None).map_err(config)?;
                put(format!("operators/{}-prime-{p}-{k}.triplets.csv", file_stem(&gen.to_string())), &|w| {
                    write_triplets_csv(&m, w)
                })?;
            }
        }
        let bound = cfg.bound.unwrap_or(12).min(MAX_WINDOW_BOUND);
        let win = Window::global(bound, 1).map_err(config)?;
        put(format!("basis/global-{bound}.csv"), &|w| write_basis_csv(&win, w))?;
        let (local, global) = partition_rows(cfg)?;
        put("partition/prime.csv".into(), &|w| write_csv(&local, w))?;
        put("partition/global.csv".into(), &|w| write_csv(&global, w))?;
    }
    let summary = json!({
        "schema": SCHEMA,
        "command": "report",
        "seed": cfg.seed,
        "config": cfg,
        "versions": { "hecke-core": env!("CARGO_PKG_VERSION"), "schema": SCHEMA },
        "suites": suite_entries,
        "files": files,
        "pass": pass,
    });
    write_file(&dir.join("summary.json"), |w| write_json(&summary, w))?;
    match cfg.format {
        Format::Json => write_json(&summary, out),
        _ => (|| {
            for s in &suite_entries {
                writeln!(out, "{:<10} {} passed, {} failed, {} skipped", s.name, s.summary.passed, s.summary.failed, s.summary.skipped)?;
            }
            writeln!(out, "wrote {} files to {}", files.len() + 1, dir.display())
        })(),
    }
    .map_err(stdout_err)?;
    Ok(pass)
}
