//! Subcommand bodies. Each returns the process exit code.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::{json, Value};

use hallforge::algebra::AlgebraTable;
use hallforge::blueprint::{catalog, Blueprint};
use hallforge::hall::{hall_mul_basis, hall_number, riedtmann_check, Registry};
use hallforge::hallpoly::{interpolate, Certificate, Family, DEFAULT_HOLDOUT, DEFAULT_POINTS};
use hallforge::homological::ext_dim;
use hallforge::liecomp::{bracket_table_csv, DegenConfig, DegenContext};
use hallforge::module::simples;

use crate::suites::{file_stem, run_suite};
use crate::{CliError, CliResult, Format, RunConfig, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};

pub fn write_json(path: &Path, v: &impl serde::Serialize) -> CliResult<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    fs::write(path, s)?;
    Ok(())
}

/// Gabriel quiver in DOT: one edge `i -> j` per dimension of `Ext¹(S_i, S_j)`.
pub fn quiver_dot(alg: &Arc<AlgebraTable>, name: &str) -> CliResult<String> {
    let labels = alg.vertex_labels();
    let s = simples(alg);
    let mut out = format!("digraph \"{name}\" {{\n");
    for v in &labels {
        out.push_str(&format!("  \"{v}\";\n"));
    }
    for (i, si) in s.iter().enumerate() {
        for (j, sj) in s.iter().enumerate() {
            for _ in 0..ext_dim(1, si, sj)? {
                out.push_str(&format!("  \"{}\" -> \"{}\";\n", labels[i], labels[j]));
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}

pub fn build(cfg: &RunConfig, out: &Path) -> CliResult<i32> {
    let alg = cfg.algebra.load(cfg.fields.first().copied())?;
    let report = alg.validate_laws();
    if !report.passed() {
        eprintln!("validation failed: {report:?}");
        return Ok(EXIT_USAGE);
    }
    let name = cfg.algebra.to_string();
    let dot = quiver_dot(&alg, &name)?;
    fs::create_dir_all(out)?;
    write_json(&out.join("algebra.json"), &alg.to_json())?;
    fs::write(out.join("quiver.dot"), &dot)?;
    let arrows = dot.lines().filter(|l| l.contains("->")).count();
    println!(
        "{name} over GF({}): dim {}, {} vertices, {arrows} arrows",
        alg.field().q(),
        alg.dim(),
        alg.num_vertices()
    );
    Ok(EXIT_PASS)
}

fn resolver(cfg: &RunConfig) -> Vec<Blueprint> {
    match &cfg.algebra {
        crate::AlgebraSource::Builtin(n) => catalog(n).unwrap_or_default(),
        crate::AlgebraSource::Json(_) => vec![],
    }
}

fn blueprint(s: &str, named: &[Blueprint]) -> CliResult<Blueprint> {
    Blueprint::parse_with(s, named).map_err(|e| CliError::usage(e.to_string()))
}

pub struct HallArgs {
    pub m: Option<String>,
    pub n: Option<String>,
    pub l: Option<String>,
    pub x: Option<String>,
    pub y: Option<String>,
    pub product: bool,
    pub riedtmann: bool,
}

pub fn hall(cfg: &RunConfig, args: &HallArgs, out: Option<&Path>) -> CliResult<i32> {
    let q = cfg.fields.first().copied();
    let alg = cfg.algebra.load(q)?;
    let mut reg = Registry::new(&alg, cfg.seed)?;
    reg.caps = cfg.caps();
    let named = resolver(cfg);
    for b in &named {
        let m = b.instantiate(&alg, cfg.seed)?;
        let c = reg.class_of(&m)?;
        reg.set_label(c, &b.name);
    }
    fn need<'a>(o: &'a Option<String>, flag: &str) -> CliResult<&'a str> {
        o.as_deref().ok_or_else(|| CliError::usage(format!("missing --{flag}")))
    }
    let mut code = EXIT_PASS;
    let mut result = serde_json::Map::new();
    let (nb, lb) = if args.product {
        (blueprint(need(&args.x, "x")?, &named)?, blueprint(need(&args.y, "y")?, &named)?)
    } else {
        (blueprint(need(&args.n, "n")?, &named)?, blueprint(need(&args.l, "l")?, &named)?)
    };
    let (nm, lm) = (nb.instantiate(&alg, cfg.seed)?, lb.instantiate(&alg, cfg.seed)?);
    if args.product {
        let (cn, cl) = (reg.class_of(&nm)?, reg.class_of(&lm)?);
        reg.set_label(cn, &nb.name);
        reg.set_label(cl, &lb.name);
        let prod = hall_mul_basis(&mut reg, cn, cl)?;
        println!("u[{}] * u[{}] = {}", nb.name, lb.name, prod.display(&reg));
        result.insert("product".into(), serde_json::to_value(prod.to_json(&reg, Some((cn, cl))))?);
    } else {
        let mb = blueprint(need(&args.m, "m")?, &named)?;
        let mm = mb.instantiate(&alg, cfg.seed)?;
        let g = hall_number(&mut reg, &mm, &nm, &lm)?;
        println!("{g}");
        result.insert("count".into(), json!(g));
    }
    if args.riedtmann {
        let (cn, cl) = (reg.class_of(&nm)?, reg.class_of(&lm)?);
        let rep = riedtmann_check(&mut reg, cn, cl)?;
        for r in &rep.rows {
            println!("  {}: ext classes {}, formula {}, brute {}{}", r.middle, r.ext_classes, r.formula, r.brute, if r.agree { "" } else { "  MISMATCH" });
        }
        if !rep.passed() {
            code = EXIT_FAIL;
        }
        result.insert("riedtmann".into(), serde_json::to_value(&rep)?);
    }
    if let Some(dir) = out {
        write_json(&dir.join("hall.json"), &Value::Object(result))?;
    }
    Ok(code)
}

fn cache_path(cfg: &RunConfig, triple: &[&Blueprint; 3], points: &[u64], holdout: &[u64]) -> Option<PathBuf> {
    let dir = std::env::var_os("HALLFORGE_CACHE")?;
    let join = |v: &[u64]| v.iter().map(|q| q.to_string()).collect::<Vec<_>>().join("-");
    let stem = format!(
        "{}_{}_{}_{}_s{}_p{}_h{}",
        file_stem(&cfg.algebra.to_string()),
        file_stem(&triple[0].recipe.to_string()),
        file_stem(&triple[1].recipe.to_string()),
        file_stem(&triple[2].recipe.to_string()),
        cfg.seed,
        join(points),
        join(holdout)
    );
    Some(PathBuf::from(dir).join(format!("{stem}.json")))
}

pub fn interpolate_cmd(cfg: &RunConfig, x: &str, y: &str, m: &str, out: Option<&Path>) -> CliResult<i32> {
    let name = cfg.algebra.builtin_name()?.to_string();
    let named = resolver(cfg);
    let (xb, yb, mb) = (blueprint(x, &named)?, blueprint(y, &named)?, blueprint(m, &named)?);
    let points = cfg.points.clone().unwrap_or(DEFAULT_POINTS.to_vec());
    let holdout = cfg.holdout.clone().unwrap_or(DEFAULT_HOLDOUT.to_vec());
    let cache = cache_path(cfg, &[&xb, &yb, &mb], &points, &holdout);
    let cached: Option<Certificate> =
        cache.as_ref().and_then(|p| fs::read_to_string(p).ok()).and_then(|s| serde_json::from_str(&s).ok());
    let cert = match cached {
        Some(c) => c,
        None => {
            let mut fam = Family::new(&name, cfg.seed)?.with_caps(cfg.caps());
            let c = interpolate(&mut fam, &xb, &yb, &mb, &points, &holdout)?;
            if let Some(p) = &cache {
                write_json(p, &c)?;
            }
            c
        }
    };
    match &cert.poly {
        Some(p) => println!("g = {}", hallforge::hallpoly::poly_string(p)),
        None => println!("no certified polynomial: {}", cert.failure.clone().unwrap_or_default()),
    }
    if let Some(dir) = out {
        let stem = file_stem(&format!("{}_{}_{}", xb.name, yb.name, mb.name));
        write_json(&dir.join("certificates").join(format!("{stem}.json")), &cert)?;
    }
    Ok(if cert.certified() { EXIT_PASS } else { EXIT_FAIL })
}

pub fn bracket_cmd(cfg: &RunConfig, x: Option<&str>, y: Option<&str>, out: Option<&Path>) -> CliResult<i32> {
    let name = cfg.algebra.builtin_name()?.to_string();
    let named = resolver(cfg);
    let d = DegenConfig::default();
    let dc = DegenConfig { points: cfg.points.clone().unwrap_or(d.points), holdout: cfg.holdout.clone().unwrap_or(d.holdout) };
    let mut ctx = DegenContext::new(&name, cfg.seed, dc)?;
    match (x, y) {
        (Some(x), Some(y)) => {
            let (xb, yb) = (blueprint(x, &named)?, blueprint(y, &named)?);
            let br = ctx.bracket(&xb, &yb)?;
            println!("[u[{}], u[{}]] = {}", xb.name, yb.name, br.display());
            if let Some(dir) = out {
                write_json(&dir.join("bracket.json"), &json!({ "x": xb.name, "y": yb.name, "terms": br.to_json() }))?;
            }
        }
        (None, None) => {
            let csv = bracket_table_csv(&mut ctx, &named)?;
            match cfg.format {
                Format::Csv => print!("{csv}"),
                Format::Json => {
                    let rows: Vec<Value> = csv.lines().map(|l| json!(l)).collect();
                    println!("{}", serde_json::to_string_pretty(&rows)?);
                }
            }
            if let Some(dir) = out {
                fs::create_dir_all(dir)?;
                fs::write(dir.join("brackets.csv"), csv)?;
            }
        }
        _ => return Err(CliError::usage("give both --x and --y, or neither for the catalog table")),
    }
    Ok(EXIT_PASS)
}

pub fn verify(cfg: &RunConfig, out: &Path) -> CliResult<i32> {
    let suite = cfg.suite.clone().ok_or_else(|| CliError::usage("missing --suite"))?;
    let res = run_suite(&suite, cfg)?;
    let report = &res.report;
    write_json(&out.join("report.json"), report)?;
    if cfg.format == Format::Csv {
        fs::write(out.join("report.csv"), report.to_csv())?;
    }
    for (stem, cert) in &res.certificates {
        write_json(&out.join("certificates").join(format!("{stem}.json")), cert)?;
    }
    let failed = report.checks.iter().filter(|c| !c.pass).count();
    println!("suite {suite} on {}: {} checks, {failed} failed", cfg.algebra, report.checks.len());
    if let Some(i) = report.first_failure {
        let c = &report.checks[i];
        println!("first failure: {}: {}", c.name, c.detail);
    }
    for n in &report.notes {
        println!("note: {n}");
    }
    Ok(if report.passed { EXIT_PASS } else { EXIT_FAIL })
}
