//! Verification suites run by `hallforge verify`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use hallforge::blueprint::{catalog, Blueprint};
use hallforge::decomp::{part_of, Part};
use hallforge::hall::{hall_mul, riedtmann_check, triangular_factor, HallElement};
use hallforge::hallpoly::{hom_exponent, hom_order, specialization_check, prime_power, Family, SpecializationCase};
use hallforge::homological::{is_injective_indecomposable, is_projective_indecomposable};
use hallforge::liecomp::{lie_axiom_suite, verify_skew_identity, DegenConfig, DegenContext};
use hallforge::Error;

use crate::{CliError, CliResult, RunConfig};

pub const SUITES: [&str; 8] = [
    "triangular",
    "skew-identities",
    "nested-bracket",
    "riedtmann",
    "specialization",
    "hom-constancy",
    "assoc",
    "lie-axioms",
];

/// Default interpolation schedule for the degenerate-algebra suites.
pub fn degen_schedule(suite: &str) -> (Vec<u64>, Vec<u64>) {
    match suite {
        "lie-axioms" => (vec![2, 3, 4, 5, 7, 8, 9], vec![11]),
        _ => {
            let d = DegenConfig::default();
            (d.points, d.holdout)
        }
    }
}

/// Largest total dimension of a Jacobi triple in `lie-axioms`.
pub const JACOBI_MAX_DIM: usize = 7;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub config: RunConfig,
    pub passed: bool,
    pub checks: Vec<Check>,
    /// Index into `checks` of the first failure.
    pub first_failure: Option<usize>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,pass,detail\n");
        for c in &self.checks {
            out.push_str(&format!("{},{},{}\n", csv_cell(&c.name), c.pass, csv_cell(&c.detail.to_string())));
        }
        out
    }
}

pub fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Suite output: the report plus certificates keyed by file stem.
pub struct SuiteOutput {
    pub report: SuiteReport,
    pub certificates: Vec<(String, Value)>,
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    name: String,
    checks: Vec<Check>,
    notes: Vec<String>,
    certificates: Vec<(String, Value)>,
}

impl Ctx<'_> {
    fn check(&mut self, name: String, pass: bool, detail: Value) {
        self.checks.push(Check { name, pass, detail });
    }

    fn family(&self) -> CliResult<Family> {
        Ok(Family::new(&self.name, self.cfg.seed)?.with_caps(self.cfg.caps()))
    }

    fn catalog(&self) -> CliResult<Vec<Blueprint>> {
        Ok(catalog(&self.name)?)
    }

    fn require_dup(&self) -> CliResult<()> {
        if self.name.ends_with("-dup") {
            Ok(())
        } else {
            Err(CliError::usage(format!("this suite needs a duplicated algebra, not {}", self.name)))
        }
    }
}

pub fn run_suite(suite: &str, cfg: &RunConfig) -> CliResult<SuiteOutput> {
    if !SUITES.contains(&suite) {
        return Err(CliError::usage(format!("unknown suite {suite:?}; known: {}", SUITES.join(", "))));
    }
    if cfg.fields.is_empty() {
        return Err(CliError::usage("no fields"));
    }
    let name = cfg.algebra.builtin_name()?.to_string();
    let mut ctx = Ctx { cfg, name, checks: vec![], notes: vec![], certificates: vec![] };
    match suite {
        "triangular" => triangular(&mut ctx)?,
        "skew-identities" => skew_identities(&mut ctx)?,
        "nested-bracket" => nested_bracket(&mut ctx)?,
        "riedtmann" => riedtmann(&mut ctx)?,
        "specialization" => specialization(&mut ctx)?,
        "hom-constancy" => hom_constancy(&mut ctx)?,
        "assoc" => assoc(&mut ctx)?,
        "lie-axioms" => lie_axioms(&mut ctx)?,
        _ => unreachable!(),
    }
    let first_failure = ctx.checks.iter().position(|c| !c.pass);
    let report = SuiteReport {
        suite: suite.to_string(),
        config: cfg.clone(),
        passed: first_failure.is_none() && !ctx.checks.is_empty(),
        checks: ctx.checks,
        first_failure,
        notes: ctx.notes,
    };
    Ok(SuiteOutput { report, certificates: ctx.certificates })
}

fn triangular(ctx: &mut Ctx) -> CliResult<()> {
    ctx.require_dup()?;
    let cat = ctx.catalog()?;
    let mut fam = ctx.family()?;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.cfg.seed);
    let fields = ctx.cfg.fields.clone();
    let mut mixed = Vec::new();
    for b in &cat {
        let m = fam.module(b, fields[0])?;
        if hallforge::decomp::is_indecomposable(&m, ctx.cfg.seed)? && part_of(&m, ctx.cfg.seed)? == Part::A01 {
            mixed.push(b.clone());
        }
    }
    if mixed.is_empty() {
        return Err(CliError::usage("catalog has no mixed modules"));
    }
    let mut i = 0;
    while i < 20 {
        let q = fields[i % fields.len()];
        let mut parts = vec![mixed.choose(&mut rng).unwrap().clone()];
        let extra = 1 + (i % 3);
        for _ in 0..extra {
            parts.push(cat.choose(&mut rng).unwrap().clone());
        }
        let refs: Vec<&Blueprint> = parts.iter().collect();
        let b = Blueprint::sum(&refs);
        let m = fam.module(&b, q)?;
        if m.dim() > 9 {
            continue;
        }
        let reg = fam.registry(q)?;
        let (_, _, _, rep) = triangular_factor(reg, &m)?;
        ctx.check(format!("GF({q}) {}", b.name), rep.passed(), serde_json::to_value(&rep)?);
        i += 1;
    }
    Ok(())
}

/// Indecomposable projective-injectives among the `P_v`.
fn projective_injectives(fam: &mut Family, q: u64) -> CliResult<Vec<Blueprint>> {
    let labels = fam.registry(q)?.algebra().vertex_labels();
    let mut out = Vec::new();
    for v in labels {
        let b = Blueprint::projective(&v);
        let m = fam.module(&b, q)?;
        if is_projective_indecomposable(&m) && is_injective_indecomposable(&m) {
            out.push(b);
        }
    }
    Ok(out)
}

fn skew_identities(ctx: &mut Ctx) -> CliResult<()> {
    ctx.require_dup()?;
    let mut fam = ctx.family()?;
    let fields = ctx.cfg.fields.clone();
    for b in projective_injectives(&mut fam, fields[0])? {
        let rep = verify_skew_identity(&mut fam, &b, &fields)?;
        ctx.check(format!("{} = {}", b.name, rep.loewy), rep.passed(), serde_json::to_value(&rep)?);
    }
    Ok(())
}

fn degen_config(ctx: &Ctx, suite: &str) -> DegenConfig {
    let (points, holdout) = degen_schedule(suite);
    DegenConfig {
        points: ctx.cfg.points.clone().unwrap_or(points),
        holdout: ctx.cfg.holdout.clone().unwrap_or(holdout),
    }
}

fn nested_bracket(ctx: &mut Ctx) -> CliResult<()> {
    if ctx.name != "kronecker-dup" {
        return Err(CliError::usage("nested-bracket runs on kronecker-dup"));
    }
    let cfg = degen_config(ctx, "nested-bracket");
    let mut dc = DegenContext::new(&ctx.name, ctx.cfg.seed, cfg)?;
    let mut basis = Vec::new();
    for s in ["S1", "S2", "S1'", "P1'"] {
        basis.push(dc.basis(&Blueprint::parse(s)?)?);
    }
    let sq = dc.mul(&basis[1], &basis[1])?;
    let inner = dc.commutator(&basis[0], &sq)?;
    let outer = dc.commutator(&basis[2], &inner)?;
    let pass = outer.specialized() == basis[3].specialized();
    ctx.check(
        "[u_S1', [u_S1, u_S2 u_S2]] = u_P1'".into(),
        pass,
        json!({ "bracket": outer.to_json(), "target": basis[3].to_json(), "bracket_text": outer.display() }),
    );
    Ok(())
}

fn catalog_dims(fam: &mut Family, cat: &[Blueprint], q: u64) -> CliResult<Vec<usize>> {
    cat.iter().map(|b| Ok(fam.module(b, q)?.dim())).collect()
}

fn riedtmann(ctx: &mut Ctx) -> CliResult<()> {
    let cat = ctx.catalog()?;
    let mut fam = ctx.family()?;
    for &q in &ctx.cfg.fields.clone() {
        let dims = catalog_dims(&mut fam, &cat, q)?;
        let ids: Vec<_> = cat.iter().map(|b| fam.class(b, q)).collect::<Result<_, Error>>()?;
        let reg = fam.registry(q)?;
        for i in 0..cat.len() {
            for j in 0..cat.len() {
                if dims[i] + dims[j] > 6 {
                    continue;
                }
                let rep = riedtmann_check(reg, ids[i], ids[j])?;
                ctx.check(
                    format!("GF({q}) ({}, {})", cat[i].name, cat[j].name),
                    rep.passed(),
                    serde_json::to_value(&rep.rows)?,
                );
            }
        }
    }
    Ok(())
}

fn specialization(ctx: &mut Ctx) -> CliResult<()> {
    let cat = ctx.catalog()?;
    let mut fam = ctx.family()?;
    let q0 = ctx.cfg.fields[0];
    let points = ctx.cfg.points.clone().unwrap_or(hallforge::hallpoly::DEFAULT_POINTS.to_vec());
    let holdout = ctx.cfg.holdout.clone().unwrap_or(hallforge::hallpoly::DEFAULT_HOLDOUT.to_vec());
    let mut dvs = Vec::new();
    for b in &cat {
        let m = fam.module(b, q0)?;
        dvs.push((m.dim(), m.dim_vector(), hallforge::decomp::is_indecomposable(&m, ctx.cfg.seed)?));
    }
    let indec: Vec<usize> = (0..cat.len()).filter(|&i| dvs[i].2).collect();
    for &x in &indec {
        for &y in &indec {
            if dvs[x].0 + dvs[y].0 > 3 {
                continue;
            }
            let sum_dv: Vec<usize> = dvs[x].1.iter().zip(&dvs[y].1).map(|(a, b)| a + b).collect();
            let mut targets = vec![Blueprint::sum(&[&cat[x], &cat[y]])];
            targets.extend(indec.iter().filter(|&&m| dvs[m].1 == sum_dv).map(|&m| cat[m].clone()));
            for m in targets {
                let v = specialization_check(&mut fam, &cat[x], &cat[y], &m, &points, &holdout)?;
                let name = format!("({}, {}; {})", cat[x].name, cat[y].name, m.name);
                let pass = match v.case {
                    SpecializationCase::NotSplit => true,
                    _ => v.holds,
                };
                if v.flagged {
                    ctx.notes.push(format!("flagged {name}: {} with g(1) = {}", v.case.tag(), v.g_at_one));
                }
                ctx.certificates.push((file_stem(&name), v.certificate.to_json()));
                ctx.check(name, pass, serde_json::to_value(&v)?);
            }
        }
    }
    Ok(())
}

fn hom_constancy(ctx: &mut Ctx) -> CliResult<()> {
    let cat = ctx.catalog()?;
    let mut fam = ctx.family()?;
    let (p, _) = prime_power(ctx.cfg.fields[0])?;
    for m in &cat {
        for n in &cat {
            let name = format!("Hom({}, {})", m.name, n.name);
            match hom_exponent(&mut fam, m, n, p, &[1, 2, 3]) {
                Ok(h) => {
                    let mut orders = Vec::new();
                    let mut pass = true;
                    for r in 1..=3u32 {
                        let q = p.pow(r);
                        let o = hom_order(&mut fam, m, n, q)?;
                        pass &= o == num_bigint::BigUint::from(p).pow(r * h as u32);
                        orders.push(json!({ "q": q, "order": o.to_string() }));
                    }
                    ctx.check(name, pass, json!({ "h": h, "orders": orders }));
                }
                Err(Error::Inconsistent(msg)) => ctx.check(name, false, json!(msg)),
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(())
}

fn assoc(ctx: &mut Ctx) -> CliResult<()> {
    let cat = ctx.catalog()?;
    let mut fam = ctx.family()?;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.cfg.seed);
    for &q in &ctx.cfg.fields.clone() {
        let dims = catalog_dims(&mut fam, &cat, q)?;
        let ids: Vec<_> = cat.iter().map(|b| fam.class(b, q)).collect::<Result<_, Error>>()?;
        let reg = fam.registry(q)?;
        let idx: Vec<usize> = (0..cat.len()).collect();
        let mut done = 0;
        while done < 25 {
            let t: Vec<usize> = (0..3).map(|_| *idx.choose(&mut rng).unwrap()).collect();
            if t.iter().map(|&i| dims[i]).sum::<usize>() > 7 {
                continue;
            }
            let [a, b, c] = [0, 1, 2].map(|k| HallElement::basis(ids[t[k]]));
            let ab = hall_mul(reg, &a, &b)?;
            let bc = hall_mul(reg, &b, &c)?;
            let left = hall_mul(reg, &ab, &c)?;
            let right = hall_mul(reg, &a, &bc)?;
            let name = format!("GF({q}) ({}, {}, {})", cat[t[0]].name, cat[t[1]].name, cat[t[2]].name);
            let detail = if left == right {
                json!(left.display(reg))
            } else {
                json!({ "left": left.display(reg), "right": right.display(reg) })
            };
            ctx.check(name, left == right, detail);
            done += 1;
        }
    }
    Ok(())
}

fn lie_axioms(ctx: &mut Ctx) -> CliResult<()> {
    let cat = ctx.catalog()?;
    let cfg = degen_config(ctx, "lie-axioms");
    let mut dc = DegenContext::new(&ctx.name, ctx.cfg.seed, cfg)?;
    let r = lie_axiom_suite(&mut dc, &cat, JACOBI_MAX_DIM)?;
    for (kind, checks) in [("antisymmetry", &r.antisymmetry), ("closure", &r.closure), ("jacobi", &r.jacobi)] {
        for c in checks {
            ctx.checks.push(Check {
                name: format!("{kind} ({})", c.classes.join(", ")),
                pass: c.pass,
                detail: c.detail.clone().map(Value::String).unwrap_or(Value::Null),
            });
        }
    }
    for s in &r.skipped {
        ctx.notes.push(format!("jacobi ({}) skipped: over the dimension budget or a cap", s.join(", ")));
    }
    Ok(())
}

/// File-name-safe stem.
pub fn file_stem(s: &str) -> String {
    let mut out = String::new();
    for ch in s.chars() {
        match ch {
            'a'..='z' | 'A'..='Z' | '0'..='9' | '-' | '_' => out.push(ch),
            '\'' => out.push('p'),
            '+' => out.push_str("_plus_"),
            _ if !out.ends_with('_') => out.push('_'),
            _ => {}
        }
    }
    out.trim_matches('_').to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stems() {
        assert_eq!(file_stem("(S1', rad(P1'); P1')"), "S1p_rad_P1p_P1p");
        assert_eq!(file_stem("S1+S1"), "S1_plus_S1");
    }

    #[test]
    fn unknown_suite_is_usage_error() {
        let err = run_suite("nosuch", &RunConfig::default()).err().unwrap();
        assert_eq!(err.code, crate::EXIT_USAGE);
    }
}
