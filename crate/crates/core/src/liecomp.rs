//! The degenerate Hall algebra (field size specialized to 1): cross-field
//! elements, brackets of indecomposables, commutator identities for
//! projective-injectives and a bounded search for iterated skew commutators
//! of simples.
//!
//! Elements are evaluated exactly in the Hall algebra over each scheduled
//! field. Classes are matched across fields by catalog labels; unlabelled
//! indecomposable summands are aggregated by dimension vector into bundles.
//! Each coefficient is then interpolated as an integer polynomial in `q` and
//! evaluated at 1.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::Copy01;
use crate::blueprint::{catalog, Blueprint};
use crate::error::{Error, Result};
use crate::hall::{hall_mul, ClassId, HallElement};
use crate::hallpoly::{eval_poly, eval_rational, fit, fit_rational, poly_string, poly_string_q, Family, FitFailure, Q};
use crate::homological::{is_exceptional, is_injective_indecomposable, is_projective_indecomposable};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegenConfig {
    pub points: Vec<u64>,
    pub holdout: Vec<u64>,
}

impl Default for DegenConfig {
    fn default() -> Self {
        DegenConfig { points: vec![2, 3, 5, 7], holdout: vec![11] }
    }
}

/// Cross-field class: labelled summands plus, for each unlabelled
/// indecomposable summand, its dimension vector and multiplicity (a bundle
/// when nonempty).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DegenKey {
    pub stable: Vec<String>,
    pub rest: Vec<(Vec<usize>, usize)>,
}

impl DegenKey {
    pub fn is_bundle(&self) -> bool {
        !self.rest.is_empty()
    }
    pub fn num_summands(&self) -> usize {
        self.stable.len() + self.rest.iter().map(|r| r.1).sum::<usize>()
    }
    pub fn is_indecomposable(&self) -> bool {
        self.num_summands() == 1
    }
}

impl fmt::Display for DegenKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.stable.clone();
        for (dv, k) in &self.rest {
            let s: Vec<String> = dv.iter().map(|d| d.to_string()).collect();
            let p = format!("<{}>", s.join(","));
            parts.push(if *k == 1 { p } else { format!("{p}^{k}") });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

/// Coefficient of one key as a polynomial in `q`. Labelled keys have integer
/// coefficients; bundle sums are only integer-valued (they count unordered
/// families of classes).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegenCoeff {
    pub poly: Vec<Q>,
    pub at_one: i128,
    /// Number of classes aggregated under a bundle key.
    pub members: Option<Vec<Q>>,
}

/// An element of the degenerate algebra together with its exact value over
/// every scheduled field.
#[derive(Clone, Debug)]
pub struct DegenElement {
    pub terms: BTreeMap<DegenKey, DegenCoeff>,
    pub per_field: BTreeMap<u64, HallElement>,
}

impl DegenElement {
    /// Nonzero coefficients after specializing at 1.
    pub fn specialized(&self) -> BTreeMap<DegenKey, i128> {
        self.terms.iter().filter(|(_, c)| c.at_one != 0).map(|(k, c)| (k.clone(), c.at_one)).collect()
    }
    pub fn is_zero(&self) -> bool {
        self.specialized().is_empty()
    }
    pub fn coeff(&self, key: &DegenKey) -> i128 {
        self.terms.get(key).map(|c| c.at_one).unwrap_or(0)
    }
    pub fn display(&self) -> String {
        let s = self.specialized();
        if s.is_empty() {
            return "0".into();
        }
        s.iter().map(|(k, c)| format!("{c}*u[{k}]")).collect::<Vec<_>>().join(" + ")
    }
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(k, c)| {
                    let mut v = json!({"class": k.to_string(), "poly": poly_string_q(&c.poly), "at_one": c.at_one});
                    if let Some(m) = &c.members {
                        v["members"] = Value::String(poly_string_q(m));
                    }
                    v
                })
                .collect(),
        )
    }
}

/// A family of fields plus the catalog used to label classes across them.
pub struct DegenContext {
    pub fam: Family,
    pub cfg: DegenConfig,
    pub catalog: Vec<Blueprint>,
}

impl DegenContext {
    pub fn new(algebra: &str, seed: u64, cfg: DegenConfig) -> Result<DegenContext> {
        let mut ctx = DegenContext { fam: Family::new(algebra, seed)?, cfg, catalog: catalog(algebra)? };
        for q in ctx.fields() {
            for b in ctx.catalog.clone() {
                ctx.fam.class(&b, q)?;
            }
        }
        Ok(ctx)
    }

    pub fn fields(&self) -> Vec<u64> {
        self.cfg.points.iter().chain(&self.cfg.holdout).copied().collect()
    }

    pub fn key_of(&mut self, q: u64, c: ClassId) -> Result<DegenKey> {
        let reg = self.fam.registry(q)?;
        let mut stable = Vec::new();
        let mut rest = Vec::new();
        for &(i, k) in reg.class_key(c) {
            let e = &reg.indecomposables()[i];
            match &e.label {
                Some(l) => stable.extend(std::iter::repeat(l.clone()).take(k)),
                None => rest.push((e.module.dim_vector(), k)),
            }
        }
        stable.sort();
        rest.sort();
        Ok(DegenKey { stable, rest })
    }

    /// Match classes across fields and interpolate every coefficient.
    pub fn from_per_field(&mut self, per_field: BTreeMap<u64, HallElement>) -> Result<DegenElement> {
        let mut table: BTreeMap<DegenKey, BTreeMap<u64, (i128, i128)>> = BTreeMap::new();
        for (&q, el) in &per_field {
            for (&c, &k) in &el.terms {
                let key = self.key_of(q, c)?;
                let e = table.entry(key).or_default().entry(q).or_insert((0, 0));
                e.0 += k;
                e.1 += 1;
            }
        }
        let mut terms = BTreeMap::new();
        for (key, vals) in table {
            let series = |j: usize, qs: &[u64]| -> Vec<(u64, i128)> {
                qs.iter().map(|&q| (q, vals.get(&q).map(|v| if j == 0 { v.0 } else { v.1 }).unwrap_or(0))).collect()
            };
            let err = |what: &str, f: FitFailure| {
                Error::Interpolation(format!("{what} of {key}: {} {:?} {:?}", f.reason, f.points, f.holdout))
            };
            let (pts, hold) = (series(0, &self.cfg.points), series(0, &self.cfg.holdout));
            let (poly, members) = if key.is_bundle() {
                let poly = fit_rational(&pts, &hold, 1).map_err(|f| err("coefficient", f))?.0;
                let m = fit_rational(&series(1, &self.cfg.points), &series(1, &self.cfg.holdout), 1)
                    .map_err(|f| err("member count", f))?
                    .0;
                (poly, Some(m))
            } else {
                let p = fit(&pts, &hold, 1).map_err(|f| err("coefficient", f))?;
                (p.coeffs.iter().map(|&c| Q::from_integer(c)).collect(), None)
            };
            let v = eval_rational(&poly, 1);
            if !v.is_integer() {
                return Err(Error::Interpolation(format!("coefficient of {key} is {v} at 1")));
            }
            terms.insert(key, DegenCoeff { poly, at_one: v.to_integer(), members });
        }
        Ok(DegenElement { terms, per_field })
    }

    pub fn basis(&mut self, b: &Blueprint) -> Result<DegenElement> {
        let mut per = BTreeMap::new();
        for q in self.fields() {
            per.insert(q, HallElement::basis(self.fam.class(b, q)?));
        }
        self.from_per_field(per)
    }

    pub fn one(&mut self) -> Result<DegenElement> {
        let per = self.fields().into_iter().map(|q| (q, HallElement::one())).collect();
        self.from_per_field(per)
    }

    fn combine(
        &mut self,
        a: &DegenElement,
        b: &DegenElement,
        op: impl Fn(&mut Family, u64, &HallElement, &HallElement) -> Result<HallElement>,
    ) -> Result<DegenElement> {
        let mut per = BTreeMap::new();
        for q in self.fields() {
            let (x, y) = (field_value(a, q)?, field_value(b, q)?);
            per.insert(q, op(&mut self.fam, q, x, y)?);
        }
        self.from_per_field(per)
    }

    /// Product in the degenerate algebra.
    pub fn mul(&mut self, a: &DegenElement, b: &DegenElement) -> Result<DegenElement> {
        self.combine(a, b, |fam, q, x, y| hall_mul(fam.registry(q)?, x, y))
    }

    pub fn add(&mut self, a: &DegenElement, b: &DegenElement) -> Result<DegenElement> {
        self.combine(a, b, |_, _, x, y| Ok(x.add(y)))
    }

    pub fn sub(&mut self, a: &DegenElement, b: &DegenElement) -> Result<DegenElement> {
        self.combine(a, b, |_, _, x, y| Ok(x.sub(y)))
    }

    /// `c·a·b − d·b·a` with `c, d` integer polynomials in `q`.
    pub fn skew(&mut self, a: &DegenElement, b: &DegenElement, c: &[i128], d: &[i128]) -> Result<DegenElement> {
        let (c, d) = (c.to_vec(), d.to_vec());
        self.combine(a, b, move |fam, q, x, y| {
            let reg = fam.registry(q)?;
            let xy = hall_mul(reg, x, y)?;
            let yx = hall_mul(reg, y, x)?;
            Ok(xy.scale(eval_poly(&c, q as i128)).sub(&yx.scale(eval_poly(&d, q as i128))))
        })
    }

    pub fn commutator(&mut self, a: &DegenElement, b: &DegenElement) -> Result<DegenElement> {
        self.skew(a, b, &[1], &[1])
    }

    /// `[u_x, u_y]` for blueprints.
    pub fn bracket(&mut self, x: &Blueprint, y: &Blueprint) -> Result<DegenElement> {
        let (a, b) = (self.basis(x)?, self.basis(y)?);
        self.commutator(&a, &b)
    }
}

fn field_value(a: &DegenElement, q: u64) -> Result<&HallElement> {
    a.per_field
        .get(&q)
        .ok_or_else(|| Error::Precondition(format!("element has no value over GF({q})")))
}

/// Which commutator identity expresses a projective-injective.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SkewBranch {
    /// `u_M = u_{top M}·u_{rad M} − u_{rad M}·u_{top M}`, radical over the first copy.
    RadicalOverA0,
    /// `u_M = u_{M/soc M}·u_{soc M} − u_{soc M}·u_{M/soc M}`, quotient over the second copy.
    SocleQuotientOverA1,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldCheck {
    pub q: u64,
    pub pass: bool,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SkewIdentityReport {
    pub module: String,
    pub loewy: String,
    pub branch: SkewBranch,
    pub left: String,
    pub right: String,
    pub fields: Vec<FieldCheck>,
}

impl SkewIdentityReport {
    pub fn passed(&self) -> bool {
        !self.fields.is_empty() && self.fields.iter().all(|f| f.pass)
    }
}

/// Evaluate the commutator identity for an indecomposable projective-injective
/// exactly in the Hall algebra over each field in `qs`.
pub fn verify_skew_identity(fam: &mut Family, m: &Blueprint, qs: &[u64]) -> Result<SkewIdentityReport> {
    let q0 = *qs.first().ok_or_else(|| Error::Precondition("no fields".into()))?;
    let module = fam.module(m, q0)?;
    if !is_projective_indecomposable(&module) || !is_injective_indecomposable(&module) {
        return Err(Error::Precondition(format!("{} is not an indecomposable projective-injective", m.name)));
    }
    let copies = module.algebra().copies().to_vec();
    let on = |dv: &[usize], c: Copy01| dv.iter().enumerate().all(|(v, &d)| d == 0 || copies.get(v) == Some(&c));
    let rad = module.radical().0;
    let (branch, left, right) = if on(&rad.dim_vector(), Copy01::Zero) {
        let top = Blueprint::parse(&format!("top({})", m.recipe))?;
        let rad = Blueprint::parse(&format!("rad({})", m.recipe))?;
        (SkewBranch::RadicalOverA0, top, rad)
    } else {
        let soc = module.socle().0;
        let quo = module.quotient(&module.socle_rows()).0;
        if soc.dim() != 1 || !on(&quo.dim_vector(), Copy01::One) {
            return Err(Error::Precondition(format!("{}: neither commutator branch applies", m.name)));
        }
        let quo = Blueprint::parse(&format!("qsoc({})", m.recipe))?;
        let soc = Blueprint::parse(&format!("soc({})", m.recipe))?;
        (SkewBranch::SocleQuotientOverA1, quo, soc)
    };
    let mut fields = Vec::new();
    for &q in qs {
        let (cm, cl, cr) = (fam.class(m, q)?, fam.class(&left, q)?, fam.class(&right, q)?);
        let reg = fam.registry(q)?;
        let (l, r) = (HallElement::basis(cl), HallElement::basis(cr));
        let rhs = hall_mul(reg, &l, &r)?.sub(&hall_mul(reg, &r, &l)?);
        let lhs = HallElement::basis(cm);
        fields.push(FieldCheck { q, pass: lhs == rhs, lhs: lhs.display(reg), rhs: rhs.display(reg) });
    }
    Ok(SkewIdentityReport {
        module: m.name.clone(),
        loewy: module.loewy_string(),
        branch,
        left: left.name,
        right: right.name,
        fields,
    })
}

/// `c·L·R − d·R·L` trees with simple leaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SkewExpr {
    Leaf(String),
    Node { c: Vec<i128>, d: Vec<i128>, left: Box<SkewExpr>, right: Box<SkewExpr> },
}

impl SkewExpr {
    pub fn depth(&self) -> usize {
        match self {
            SkewExpr::Leaf(_) => 0,
            SkewExpr::Node { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    /// Nested `[c, d, L, R]` with leaves `"S_x"`.
    pub fn to_json(&self) -> Value {
        match self {
            SkewExpr::Leaf(v) => Value::String(format!("S_{v}")),
            SkewExpr::Node { c, d, left, right } => {
                json!([poly_string(c), poly_string(d), left.to_json(), right.to_json()])
            }
        }
    }

    /// Exact value in the Hall algebra over `GF(q)`.
    pub fn eval(&self, fam: &mut Family, q: u64) -> Result<HallElement> {
        match self {
            SkewExpr::Leaf(v) => Ok(HallElement::basis(fam.class(&Blueprint::simple(v), q)?)),
            SkewExpr::Node { c, d, left, right } => {
                let (l, r) = (left.eval(fam, q)?, right.eval(fam, q)?);
                let reg = fam.registry(q)?;
                let lr = hall_mul(reg, &l, &r)?;
                let rl = hall_mul(reg, &r, &l)?;
                Ok(lr.scale(eval_poly(c, q as i128)).sub(&rl.scale(eval_poly(d, q as i128))))
            }
        }
    }
}

impl fmt::Display for SkewExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SkewExpr::Leaf(v) => write!(f, "S{v}"),
            SkewExpr::Node { c, d, left, right } => {
                write!(f, "[{left}, {right}]_({}, {})", poly_string(c), poly_string(d))
            }
        }
    }
}

/// Default skew scalars: `1, x, x − 1, x + 1, x², x³`.
pub fn default_scalars() -> Vec<Vec<i128>> {
    vec![vec![1], vec![0, 1], vec![-1, 1], vec![1, 1], vec![0, 0, 1], vec![0, 0, 0, 1]]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found { expr: SkewExpr, verified: Vec<u64> },
    /// Bounded-search statement: no tree up to `depth` matched.
    NotFound { depth: usize, explored: usize },
}

#[derive(Clone, Debug)]
struct Candidate {
    expr: SkewExpr,
    value: Vec<HallElement>,
}

fn value_key(v: &[HallElement]) -> Vec<Vec<(ClassId, i128)>> {
    v.iter().map(|e| e.terms.iter().map(|(&c, &k)| (c, k)).collect()).collect()
}

/// Breadth-first search over skew-commutator trees of simples whose leaves
/// match the dimension vector of `m`; candidates are compared exactly over
/// `cert_fields`, and a hit is re-verified over `verify_fields`.
pub fn iterated_skew_search(
    fam: &mut Family,
    m: &Blueprint,
    depth: usize,
    scalars: &[Vec<i128>],
    cert_fields: &[u64],
    verify_fields: &[u64],
) -> Result<SearchOutcome> {
    if cert_fields.is_empty() {
        return Err(Error::Precondition("no certification fields".into()));
    }
    let module = fam.module(m, cert_fields[0])?;
    if !is_exceptional(&module, fam.seed())? {
        return Err(Error::Precondition(format!("{} is not exceptional", m.name)));
    }
    let labels = module.algebra().vertex_labels();
    let target_dv = module.dim_vector();
    let mut target = Vec::new();
    for &q in cert_fields {
        target.push(HallElement::basis(fam.class(m, q)?));
    }
    // levels[dv] = candidates with that dimension vector and their depth
    let mut table: HashMap<Vec<usize>, Vec<(usize, Candidate)>> = HashMap::new();
    let mut seen: HashMap<Vec<usize>, BTreeSet<Vec<Vec<(ClassId, i128)>>>> = HashMap::new();
    let mut explored = 0usize;
    for (v, label) in labels.iter().enumerate() {
        if target_dv[v] == 0 {
            continue;
        }
        let expr = SkewExpr::Leaf(label.clone());
        let value = cert_fields.iter().map(|&q| expr.eval(fam, q)).collect::<Result<Vec<_>>>()?;
        let mut dv = vec![0; target_dv.len()];
        dv[v] = 1;
        explored += 1;
        if value == target {
            return certify(fam, m, expr, verify_fields);
        }
        seen.entry(dv.clone()).or_default().insert(value_key(&value));
        table.entry(dv).or_default().push((0, Candidate { expr, value }));
    }
    for level in 1..=depth {
        let snapshot: Vec<(Vec<usize>, Vec<(usize, Candidate)>)> =
            table.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        let mut fresh: Vec<(Vec<usize>, Candidate)> = Vec::new();
        for (dl, ls) in &snapshot {
            for (dr, rs) in &snapshot {
                let dv: Vec<usize> = dl.iter().zip(dr).map(|(a, b)| a + b).collect();
                if dv.iter().zip(&target_dv).any(|(a, b)| a > b) {
                    continue;
                }
                for (ld, l) in ls {
                    for (rd, r) in rs {
                        // only trees of exactly this depth are new
                        if (*ld).max(*rd) + 1 != level {
                            continue;
                        }
                        let mut lr = Vec::new();
                        let mut rl = Vec::new();
                        for (i, &q) in cert_fields.iter().enumerate() {
                            let reg = fam.registry(q)?;
                            lr.push(hall_mul(reg, &l.value[i], &r.value[i])?);
                            rl.push(hall_mul(reg, &r.value[i], &l.value[i])?);
                        }
                        for c in scalars {
                            for d in scalars {
                                explored += 1;
                                let value: Vec<HallElement> = cert_fields
                                    .iter()
                                    .enumerate()
                                    .map(|(i, &q)| {
                                        lr[i].scale(eval_poly(c, q as i128)).sub(&rl[i].scale(eval_poly(d, q as i128)))
                                    })
                                    .collect();
                                if value.iter().all(|v| v.is_zero()) {
                                    continue;
                                }
                                let expr = SkewExpr::Node {
                                    c: c.clone(),
                                    d: d.clone(),
                                    left: Box::new(l.expr.clone()),
                                    right: Box::new(r.expr.clone()),
                                };
                                if value == target {
                                    return certify(fam, m, expr, verify_fields);
                                }
                                if dv == target_dv || !seen.entry(dv.clone()).or_default().insert(value_key(&value)) {
                                    continue;
                                }
                                fresh.push((dv.clone(), Candidate { expr, value }));
                            }
                        }
                    }
                }
            }
        }
        for (dv, c) in fresh {
            table.entry(dv).or_default().push((level, c));
        }
    }
    Ok(SearchOutcome::NotFound { depth, explored })
}

fn certify(fam: &mut Family, m: &Blueprint, expr: SkewExpr, verify: &[u64]) -> Result<SearchOutcome> {
    for &q in verify {
        let target = HallElement::basis(fam.class(m, q)?);
        if expr.eval(fam, q)? != target {
            return Err(Error::Inconsistent(format!("{expr} matches {} on the certification fields but not over GF({q})", m.name)));
        }
    }
    Ok(SearchOutcome::Found { expr, verified: verify.to_vec() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LieCheck {
    pub classes: Vec<String>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LieReport {
    pub antisymmetry: Vec<LieCheck>,
    pub jacobi: Vec<LieCheck>,
    pub closure: Vec<LieCheck>,
    /// Triples skipped because a computation exceeded a cap or the
    /// dimension budget.
    pub skipped: Vec<Vec<String>>,
}

impl LieReport {
    pub fn passed(&self) -> bool {
        self.antisymmetry.iter().chain(&self.jacobi).chain(&self.closure).all(|c| c.pass)
    }
}

/// Antisymmetry and closure on all pairs, Jacobi on all triples (in index
/// order) of total dimension at most `jacobi_max_dim` whose products stay
/// within the caps.
pub fn lie_axiom_suite(ctx: &mut DegenContext, classes: &[Blueprint], jacobi_max_dim: usize) -> Result<LieReport> {
    let mut report = LieReport::default();
    let mut basis = Vec::new();
    let mut dims = Vec::new();
    for b in classes {
        basis.push(ctx.basis(b)?);
        dims.push(ctx.fam.module(b, 2)?.dim());
    }
    let n = classes.len();
    let mut brackets: HashMap<(usize, usize), DegenElement> = HashMap::new();
    for i in 0..n {
        for j in 0..n {
            brackets.insert((i, j), ctx.commutator(&basis[i], &basis[j])?);
        }
    }
    for i in 0..n {
        for j in i..n {
            let sum = ctx.add(&brackets[&(i, j)], &brackets[&(j, i)])?;
            let names = vec![classes[i].name.clone(), classes[j].name.clone()];
            report.antisymmetry.push(LieCheck { classes: names.clone(), pass: sum.is_zero(), detail: None });
            let bad: Vec<String> = brackets[&(i, j)]
                .specialized()
                .keys()
                .filter(|k| !k.is_indecomposable())
                .map(|k| k.to_string())
                .collect();
            report.closure.push(LieCheck {
                classes: names,
                pass: bad.is_empty(),
                detail: (!bad.is_empty()).then(|| bad.join(", ")),
            });
        }
    }
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                let names = vec![classes[i].name.clone(), classes[j].name.clone(), classes[k].name.clone()];
                if dims[i] + dims[j] + dims[k] > jacobi_max_dim {
                    report.skipped.push(names);
                    continue;
                }
                let run = |ctx: &mut DegenContext| -> Result<DegenElement> {
                    // summed per field; only the total is interpolated
                    let mut per = BTreeMap::new();
                    for q in ctx.fields() {
                        let reg = ctx.fam.registry(q)?;
                        let mut total = HallElement::zero();
                        for (x, yz) in [(i, (j, k)), (j, (k, i)), (k, (i, j))] {
                            let a = field_value(&basis[x], q)?;
                            let b = field_value(&brackets[&yz], q)?;
                            total = total.add(&hall_mul(reg, a, b)?.sub(&hall_mul(reg, b, a)?));
                        }
                        per.insert(q, total);
                    }
                    ctx.from_per_field(per)
                };
                match run(ctx) {
                    Ok(total) => report.jacobi.push(LieCheck {
                        classes: names,
                        pass: total.is_zero(),
                        detail: (!total.is_zero()).then(|| total.display()),
                    }),
                    Err(Error::CapExceeded(_)) => report.skipped.push(names),
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(report)
}

/// Bracket table as CSV: rows and columns are blueprint names, cells list
/// `class:coefficient` pairs of the specialized bracket.
pub fn bracket_table_csv(ctx: &mut DegenContext, classes: &[Blueprint]) -> Result<String> {
    let mut out = String::from("bracket");
    for b in classes {
        out.push(',');
        out.push_str(&csv_cell(&b.name));
    }
    out.push('\n');
    for x in classes {
        out.push_str(&csv_cell(&x.name));
        for y in classes {
            let br = ctx.bracket(x, y)?;
            let cell: Vec<String> = br.specialized().iter().map(|(k, c)| format!("{k}:{c}")).collect();
            out.push(',');
            out.push_str(&csv_cell(&cell.join(";")));
        }
        out.push('\n');
    }
    Ok(out)
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(s: &str) -> Blueprint {
        Blueprint::parse(s).unwrap()
    }

    fn key(names: &[&str]) -> DegenKey {
        DegenKey { stable: names.iter().map(|s| s.to_string()).collect(), rest: vec![] }
    }

    #[test]
    fn kronecker_bracket_of_simples() {
        let mut ctx = DegenContext::new("kronecker", 0, DegenConfig::default()).unwrap();
        let br = ctx.bracket(&bp("S2"), &bp("S1")).unwrap();
        let s = br.specialized();
        assert_eq!(s.get(&key(&["M0"])), Some(&1));
        assert_eq!(s.get(&key(&["Minf"])), Some(&1));
        let bundle = DegenKey { stable: vec![], rest: vec![(vec![1, 1], 1)] };
        let c = &br.terms[&bundle];
        let xm1 = vec![Q::from_integer(-1), Q::from_integer(1)];
        assert_eq!(c.members, Some(xm1.clone()));
        assert_eq!(c.poly, xm1);
        assert!(!br.terms.contains_key(&key(&["S1", "S2"])));
        assert!(ctx.bracket(&bp("S1"), &bp("S1")).unwrap().is_zero());
    }

    #[test]
    fn degenerate_products() {
        let mut ctx = DegenContext::new("kronecker", 0, DegenConfig::default()).unwrap();
        let s2 = ctx.basis(&bp("S2")).unwrap();
        let sq = ctx.mul(&s2, &s2).unwrap();
        assert_eq!(sq.specialized(), BTreeMap::from([(key(&["S2", "S2"]), 2)]));
        let s1 = ctx.basis(&bp("S1")).unwrap();
        let p = ctx.mul(&s1, &sq).unwrap();
        assert_eq!(p.specialized(), BTreeMap::from([(key(&["S1", "S2", "S2"]), 2)]));
        let one = ctx.one().unwrap();
        assert_eq!(ctx.mul(&one, &s1).unwrap().specialized(), s1.specialized());
    }

    #[test]
    fn disconnected_simples_commute() {
        let mut ctx = DegenContext::new("kronecker-dup", 0, DegenConfig::default()).unwrap();
        assert!(ctx.bracket(&bp("S1"), &bp("S2'")).unwrap().is_zero());
    }

    #[test]
    fn skew_identities_on_kronecker_dup() {
        let mut fam = Family::new("kronecker-dup", 0).unwrap();
        let r = verify_skew_identity(&mut fam, &bp("P1'"), &[2, 3]).unwrap();
        assert_eq!(r.branch, SkewBranch::RadicalOverA0);
        assert!(r.passed(), "{r:?}");
        let r = verify_skew_identity(&mut fam, &bp("P2'"), &[2, 3]).unwrap();
        assert_eq!(r.branch, SkewBranch::SocleQuotientOverA1);
        assert!(r.passed(), "{r:?}");
        assert!(verify_skew_identity(&mut fam, &bp("S1"), &[2]).is_err());
    }

    #[test]
    fn search_leaf_and_rejection() {
        let mut fam = Family::new("kronecker-dup", 0).unwrap();
        let out = iterated_skew_search(&mut fam, &bp("S2"), 2, &default_scalars(), &[2, 3], &[5]).unwrap();
        assert_eq!(out, SearchOutcome::Found { expr: SkewExpr::Leaf("2".into()), verified: vec![5] });
        let mut fam = Family::new("kronecker", 0).unwrap();
        let m0 = catalog("kronecker").unwrap().into_iter().find(|b| b.name == "M0").unwrap();
        assert!(matches!(
            iterated_skew_search(&mut fam, &m0, 1, &default_scalars(), &[2, 3], &[]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn search_finds_length_two_exceptional() {
        // 2/1 over one arrow: u_{S2}u_{S1} − u_{S1}u_{S2}
        let mut fam = Family::new("d4tilde", 0).unwrap();
        assert_eq!(fam.module(&bp("P2"), 2).unwrap().loewy_string(), "2/1");
        let out = iterated_skew_search(&mut fam, &bp("P2"), 2, &default_scalars(), &[2, 3], &[5]).unwrap();
        match out {
            SearchOutcome::Found { expr, verified } => {
                assert_eq!(expr.depth(), 1);
                assert_eq!(verified, vec![5]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn skew_expr_json() {
        let e = SkewExpr::Node {
            c: vec![1],
            d: vec![0, 1],
            left: Box::new(SkewExpr::Leaf("1".into())),
            right: Box::new(SkewExpr::Leaf("2".into())),
        };
        assert_eq!(e.to_json(), json!(["1", "x", "S_1", "S_2"]));
        assert_eq!(e.depth(), 1);
    }

    #[test]
    fn lie_suite_small() {
        let mut ctx = DegenContext::new("kronecker", 0, DegenConfig::default()).unwrap();
        let r = lie_axiom_suite(&mut ctx, &[bp("S1"), bp("S2")], 3).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.antisymmetry.len(), 3);
        assert_eq!(r.jacobi.len(), 4);
        let csv = bracket_table_csv(&mut ctx, &[bp("S1"), bp("S2")]).unwrap();
        assert_eq!(csv.lines().count(), 3);
    }
}
